//! The JSON response returned by the service and the batch CLI.

use annotext_core::doc::{AnnotationKind, Document, EntityType, Selection};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Response {
    pub text: String,
    pub language: String,
    pub annotation_summary: Vec<Summary>,
    /// 0.0 when sentiment was not computed.
    pub sentiment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(rename = "type")]
    pub kind: String,
    pub annotation_identifier: Vec<Identifier>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identifier {
    pub id_str: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_readable: Option<String>,
    pub score: f64,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub entity_type: Option<String>,
}

impl Response {
    /// Builds the response for the selected kinds. Entities are listed by
    /// descending score, topics and hashtags in document order.
    pub fn from_document(doc: &Document, selection: Selection) -> Self {
        let mut summary = Vec::new();
        for kind in selection.kinds() {
            let ids: Vec<Identifier> = match kind {
                AnnotationKind::Entity => {
                    let mut ents: Vec<_> = doc.entity_annotations.iter().collect();
                    ents.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.entity_id.cmp(&b.entity_id)));
                    ents.into_iter()
                        .map(|e| Identifier {
                            id_str: e.entity_id.clone(),
                            id_url: e.kb_url.clone(),
                            id_readable: None,
                            score: e.score,
                            entity_type: Some(e.entity_type.as_str().to_string()),
                        })
                        .collect()
                }
                AnnotationKind::Topic => doc
                    .topic_annotations
                    .iter()
                    .map(|t| Identifier {
                        id_str: t.topic_id.clone(),
                        id_url: None,
                        id_readable: Some(t.readable.clone()),
                        score: t.score,
                        entity_type: None,
                    })
                    .collect(),
                AnnotationKind::Hashtag => doc
                    .hashtag_annotations
                    .iter()
                    .map(|h| Identifier {
                        id_str: h.tag.clone(),
                        id_url: None,
                        id_readable: None,
                        score: h.score,
                        entity_type: None,
                    })
                    .collect(),
                AnnotationKind::Sentiment => continue,
            };
            summary.push(Summary {
                kind: kind.wire_name().to_string(),
                annotation_identifier: ids,
            });
        }
        Response {
            text: doc.text.clone(),
            language: doc.language.clone().unwrap_or_default(),
            annotation_summary: summary,
            sentiment: doc.sentiment.map_or(0.0, |s| s.score),
        }
    }

    /// Identifiers of one kind; empty when the kind is absent.
    pub fn section(&self, kind: AnnotationKind) -> &[Identifier] {
        self.annotation_summary
            .iter()
            .find(|s| s.kind == kind.wire_name())
            .map_or(&[], |s| s.annotation_identifier.as_slice())
    }

    pub fn entity_types(&self) -> impl Iterator<Item = Option<EntityType>> + '_ {
        self.section(AnnotationKind::Entity)
            .iter()
            .map(|i| i.entity_type.as_deref().and_then(EntityType::parse))
    }
}

pub fn serialize_response(doc: &Document, selection: Selection) -> String {
    serde_json::to_string(&Response::from_document(doc, selection)).expect("response is always serializable")
}

pub fn parse_response(json: &str) -> serde_json::Result<Response> {
    serde_json::from_str(json)
}

/// Pretty dump of the whole internal document.
pub fn debug_dump(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("document is always serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use annotext_core::doc::{EntityAnnotation, HashtagAnnotation, SentimentLabel, SentimentResult, TopicAnnotation};
    use proptest::prelude::*;
    use serde_json::Value;

    fn entity(id: &str, score: f64, t: EntityType, url: Option<&str>) -> EntityAnnotation {
        EntityAnnotation {
            entity_id: id.into(),
            surface: id.into(),
            score,
            entity_type: t,
            kb_url: url.map(Into::into),
            location_meta: None,
        }
    }

    fn listing_doc() -> Document {
        Document {
            text: "Vlade Divac Serbian NBA player used to play for LA Lakers.".into(),
            language: Some("en".into()),
            entity_annotations: vec![
                entity("05jvx", 0.8496, EntityType::Organization, Some("https://en.wikipedia.org/wiki/NBA")),
                entity("01vpr3", 0.9456, EntityType::Person, Some("https://en.wikipedia.org/wiki/Vlade_Divac")),
            ],
            topic_annotations: vec![TopicAnnotation {
                topic_id: "6467710261455026125".into(),
                readable: "nba".into(),
                score: 0.7582,
            }],
            hashtag_annotations: vec![HashtagAnnotation {
                tag: "NBA".into(),
                score: 54285.7515,
            }],
            ..Default::default()
        }
    }

    #[test]
    fn listing_field_names() {
        let v: Value = serde_json::from_str(&serialize_response(&listing_doc(), Selection::all())).unwrap();
        assert_eq!(v["language"], "en");
        assert_eq!(v["sentiment"], 0.0);
        let summary = v["annotation_summary"].as_array().unwrap();
        let kinds: Vec<&str> = summary.iter().map(|s| s["type"].as_str().unwrap()).collect();
        assert_eq!(kinds, ["ENTITY", "KLOUT_TOPIC", "HASHTAG"]);
        let first = &summary[0]["annotation_identifier"][0];
        assert_eq!(
            first,
            &serde_json::json!({"id_str": "01vpr3", "id_url": "https://en.wikipedia.org/wiki/Vlade_Divac",
                                "score": 0.9456, "type": "PERSON"})
        );
        assert_eq!(
            summary[1]["annotation_identifier"][0],
            serde_json::json!({"id_str": "6467710261455026125", "id_readable": "nba", "score": 0.7582})
        );
        assert_eq!(
            summary[2]["annotation_identifier"][0],
            serde_json::json!({"id_str": "NBA", "score": 54285.7515})
        );
        let text = serialize_response(&listing_doc(), Selection::all());
        assert!(text.ends_with(r#""sentiment":0.0}"#));
    }

    #[test]
    fn selection_and_empty() {
        let only = Selection::none().with(AnnotationKind::Entity);
        let r = Response::from_document(&listing_doc(), only);
        assert_eq!(r.annotation_summary.len(), 1);
        assert!(r.section(AnnotationKind::Topic).is_empty());

        let r = Response::from_document(&Document::default(), Selection::all());
        assert_eq!(r.annotation_summary.len(), 3);
        assert!(r.annotation_summary.iter().all(|s| s.annotation_identifier.is_empty()));
        assert_eq!(r.sentiment, 0.0);
    }

    #[test]
    fn sentiment_scalar() {
        let mut d = listing_doc();
        d.sentiment = Some(SentimentResult {
            score: -0.25,
            label: SentimentLabel::Negative,
        });
        assert_eq!(Response::from_document(&d, Selection::all()).sentiment, -0.25);
    }

    fn arb_type() -> impl Strategy<Value = EntityType> {
        prop_oneof![
            Just(EntityType::Person),
            Just(EntityType::Organization),
            Just(EntityType::Location),
            Just(EntityType::Other)
        ]
    }

    prop_compose! {
        fn arb_doc()(
            ents in prop::collection::vec(("[a-z0-9]{1,8}", 0.0f64..1.0, arb_type(), prop::option::of("https://[a-z]{1,6}")), 0..6),
            topics in prop::collection::vec(("[0-9]{1,19}", "[a-z-]{1,12}", 0.0f64..1.0), 0..6),
            tags in prop::collection::vec(("[A-Za-z]{1,10}", 0.0f64..1e6), 0..6),
            text in "\\PC{0,40}",
        ) -> Document {
            Document {
                text,
                language: Some("en".into()),
                entity_annotations: ents.into_iter().map(|(id, s, t, u)| entity(&id, s, t, u.as_deref())).collect(),
                topic_annotations: topics.into_iter().map(|(id, r, s)| TopicAnnotation { topic_id: id, readable: r, score: s }).collect(),
                hashtag_annotations: tags.into_iter().map(|(tag, score)| HashtagAnnotation { tag, score }).collect(),
                ..Default::default()
            }
        }
    }

    fn sorted<T: Clone, K: Ord>(v: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
        let mut v = v.to_vec();
        v.sort_by_key(key);
        v
    }

    proptest! {
        #[test]
        fn round_trip_preserves_annotations(doc in arb_doc()) {
            let back = parse_response(&serialize_response(&doc, Selection::all())).unwrap();
            let ents: Vec<(String, u64, Option<EntityType>, Option<String>)> = back
                .section(AnnotationKind::Entity)
                .iter()
                .zip(back.entity_types())
                .map(|(i, t)| (i.id_str.clone(), i.score.to_bits(), t, i.id_url.clone()))
                .collect();
            let want: Vec<_> = doc.entity_annotations.iter()
                .map(|e| (e.entity_id.clone(), e.score.to_bits(), Some(e.entity_type), e.kb_url.clone()))
                .collect();
            prop_assert_eq!(sorted(&ents, |e| e.clone()), sorted(&want, |e| e.clone()));
            let scores: Vec<f64> = back.section(AnnotationKind::Entity).iter().map(|i| i.score).collect();
            prop_assert!(scores.windows(2).all(|w| w[0] >= w[1]));

            let topics: Vec<(String, String, u64)> = back.section(AnnotationKind::Topic).iter()
                .map(|i| (i.id_str.clone(), i.id_readable.clone().unwrap(), i.score.to_bits())).collect();
            let want: Vec<_> = doc.topic_annotations.iter()
                .map(|t| (t.topic_id.clone(), t.readable.clone(), t.score.to_bits())).collect();
            prop_assert_eq!(topics, want);

            let tags: Vec<(String, u64)> = back.section(AnnotationKind::Hashtag).iter()
                .map(|i| (i.id_str.clone(), i.score.to_bits())).collect();
            let want: Vec<_> = doc.hashtag_annotations.iter().map(|h| (h.tag.clone(), h.score.to_bits())).collect();
            prop_assert_eq!(tags, want);
            prop_assert_eq!(back.text, doc.text);
        }
    }
}
