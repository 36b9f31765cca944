//! Document container and annotation types shared by every stage.
//!
//! All character offsets are unicode scalar value indices into
//! [`Document::text`], never byte offsets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::edl::FeatureVector;

/// Default upper bound on input size, in bytes.
pub const DEFAULT_MAX_INPUT_BYTES: usize = 1 << 20;

/// Longest mention, in tokens.
pub const MAX_MENTION_TOKENS: usize = 6;

/// Reserved id: the mention does not refer to any entity.
pub const NIL: &str = "NIL";
/// Reserved id: the mention refers to an entity outside the knowledge base.
pub const MISC: &str = "MISC";

/// True for the two placeholder ids that never become entity annotations.
pub fn is_placeholder(entity_id: &str) -> bool {
    entity_id == NIL || entity_id == MISC
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocError {
    #[error("input of {size} bytes exceeds the {limit} byte limit")]
    OversizeInput { size: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Token {
    /// Slice of the original text covered by this token.
    pub surface: String,
    pub char_start: usize,
    pub char_end: usize,
    /// Lowercased, accent-folded form used for dictionary keys.
    pub normalized: String,
}

/// A contiguous run of tokens `[token_start, token_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceSpan {
    pub token_start: usize,
    pub token_end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ResolutionPass {
    Easy,
    Hard,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateEntity {
    pub entity_id: String,
    pub prior: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureVector>,
}

impl CandidateEntity {
    pub fn new(entity_id: impl Into<String>, prior: f64) -> Self {
        CandidateEntity {
            entity_id: entity_id.into(),
            prior,
            label: None,
            score: None,
            features: None,
        }
    }

    pub fn is_placeholder(&self) -> bool {
        is_placeholder(&self.entity_id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mention {
    pub token_start: usize,
    /// Exclusive.
    pub token_end: usize,
    pub surface: String,
    pub candidates: Vec<CandidateEntity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved: Option<String>,
    pub resolution_pass: ResolutionPass,
}

impl Mention {
    pub fn len(&self) -> usize {
        self.token_end - self.token_start
    }

    pub fn is_empty(&self) -> bool {
        self.token_end == self.token_start
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntityType {
    Person,
    Organization,
    Location,
    Film,
    Event,
    Book,
    #[default]
    Other,
}

impl EntityType {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Person => "PERSON",
            EntityType::Organization => "ORGANIZATION",
            EntityType::Location => "LOCATION",
            EntityType::Film => "FILM",
            EntityType::Event => "EVENT",
            EntityType::Book => "BOOK",
            EntityType::Other => "OTHER",
        }
    }

    /// Case-insensitive parse of the upper-case wire names.
    pub fn parse(s: &str) -> Option<Self> {
        let t = match s.to_ascii_uppercase().as_str() {
            "PERSON" => EntityType::Person,
            "ORGANIZATION" => EntityType::Organization,
            "LOCATION" => EntityType::Location,
            "FILM" => EntityType::Film,
            "EVENT" => EntityType::Event,
            "BOOK" => EntityType::Book,
            "OTHER" => EntityType::Other,
            _ => return None,
        };
        Some(t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationMeta {
    pub population: i64,
    pub time_zone: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityAnnotation {
    pub entity_id: String,
    pub surface: String,
    pub score: f64,
    pub entity_type: EntityType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kb_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location_meta: Option<LocationMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicAnnotation {
    pub topic_id: String,
    pub readable: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashtagAnnotation {
    /// Without the leading `#`.
    pub tag: String,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SentimentLabel {
    Positive,
    Negative,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentResult {
    pub score: f64,
    pub label: SentimentLabel,
}

/// Annotation kinds a client may select.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AnnotationKind {
    Entity,
    #[serde(rename = "KLOUT_TOPIC", alias = "TOPIC")]
    Topic,
    Hashtag,
    Sentiment,
}

impl AnnotationKind {
    pub const ALL: [AnnotationKind; 4] = [
        AnnotationKind::Entity,
        AnnotationKind::Topic,
        AnnotationKind::Hashtag,
        AnnotationKind::Sentiment,
    ];

    /// Name used in `annotation_summary[].type`.
    pub fn wire_name(self) -> &'static str {
        match self {
            AnnotationKind::Entity => "ENTITY",
            AnnotationKind::Topic => "KLOUT_TOPIC",
            AnnotationKind::Hashtag => "HASHTAG",
            AnnotationKind::Sentiment => "SENTIMENT",
        }
    }

    /// Accepts wire names and the short forms used on the command line
    /// (`entity`, `topic`, `hashtag`, `sentiment`).
    pub fn parse(s: &str) -> Option<Self> {
        let k = match s.trim().to_ascii_lowercase().as_str() {
            "entity" | "entities" => AnnotationKind::Entity,
            "topic" | "topics" | "klout_topic" => AnnotationKind::Topic,
            "hashtag" | "hashtags" => AnnotationKind::Hashtag,
            "sentiment" => AnnotationKind::Sentiment,
            _ => return None,
        };
        Some(k)
    }
}

/// Set of selected annotation kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    bits: u8,
}

impl Selection {
    pub const fn none() -> Self {
        Selection { bits: 0 }
    }

    pub fn all() -> Self {
        AnnotationKind::ALL.iter().copied().collect()
    }

    fn bit(kind: AnnotationKind) -> u8 {
        match kind {
            AnnotationKind::Entity => 1,
            AnnotationKind::Topic => 2,
            AnnotationKind::Hashtag => 4,
            AnnotationKind::Sentiment => 8,
        }
    }

    pub fn with(mut self, kind: AnnotationKind) -> Self {
        self.bits |= Self::bit(kind);
        self
    }

    pub fn contains(&self, kind: AnnotationKind) -> bool {
        self.bits & Self::bit(kind) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn kinds(&self) -> impl Iterator<Item = AnnotationKind> + '_ {
        AnnotationKind::ALL.into_iter().filter(|k| self.contains(*k))
    }
}

impl Default for Selection {
    fn default() -> Self {
        Selection::all()
    }
}

impl FromIterator<AnnotationKind> for Selection {
    fn from_iter<I: IntoIterator<Item = AnnotationKind>>(iter: I) -> Self {
        iter.into_iter().fold(Selection::none(), Selection::with)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Document {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    pub tokens: Vec<Token>,
    pub sentences: Vec<SentenceSpan>,
    pub mentions: Vec<Mention>,
    pub entity_annotations: Vec<EntityAnnotation>,
    pub topic_annotations: Vec<TopicAnnotation>,
    pub hashtag_annotations: Vec<HashtagAnnotation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<SentimentResult>,
    /// Stage name to duration in microseconds.
    pub stage_timings: BTreeMap<String, u64>,
}

impl Document {
    /// Wraps `text` in an empty document, rejecting input over `max_bytes`.
    pub fn new(text: impl Into<String>, max_bytes: usize) -> Result<Self, DocError> {
        let text = text.into();
        if text.len() > max_bytes {
            return Err(DocError::OversizeInput {
                size: text.len(),
                limit: max_bytes,
            });
        }
        Ok(Document {
            text,
            ..Default::default()
        })
    }

    /// Number of unicode scalar values in the text.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Checks every structural invariant and returns one message per violation.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let chars: Vec<char> = self.text.chars().collect();

        let mut prev_end = 0usize;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.char_start >= t.char_end {
                out.push(format!(
                    "token {i} has empty or inverted span [{}, {})",
                    t.char_start, t.char_end
                ));
                continue;
            }
            if t.char_end > chars.len() {
                out.push(format!(
                    "token {i} span [{}, {}) exceeds text length {}",
                    t.char_start,
                    t.char_end,
                    chars.len()
                ));
                continue;
            }
            if t.char_start < prev_end {
                out.push(format!("token {i} overlaps or precedes token {}", i - 1));
            }
            prev_end = t.char_end;
            let slice: String = chars[t.char_start..t.char_end].iter().collect();
            if slice != t.surface {
                out.push(format!("token {i} surface does not match text slice"));
            }
        }

        let mut expected_start = 0usize;
        for (i, s) in self.sentences.iter().enumerate() {
            if s.token_start != expected_start {
                out.push(format!(
                    "sentence {i} starts at token {} but previous sentence ended at {}",
                    s.token_start, expected_start
                ));
            }
            if s.token_end < s.token_start {
                out.push(format!("sentence {i} has inverted token range"));
            }
            expected_start = s.token_end;
        }
        if !self.sentences.is_empty() && expected_start != self.tokens.len() {
            out.push(format!(
                "sentences cover {} of {} tokens",
                expected_start,
                self.tokens.len()
            ));
        }
        if self.sentences.is_empty() && !self.tokens.is_empty() {
            out.push(String::from("tokens present but no sentences"));
        }

        let mut owner: Vec<Option<usize>> = alloc::vec![None; self.tokens.len()];
        for (mi, m) in self.mentions.iter().enumerate() {
            let len = m.token_end.saturating_sub(m.token_start);
            if m.token_end <= m.token_start || len > MAX_MENTION_TOKENS {
                out.push(format!(
                    "mention {mi} has length {len}, outside 1..={MAX_MENTION_TOKENS}"
                ));
                continue;
            }
            if m.token_end > self.tokens.len() {
                out.push(format!("mention {mi} exceeds token list"));
                continue;
            }
            let within_sentence = self.sentences.is_empty()
                || self
                    .sentences
                    .iter()
                    .any(|s| s.token_start <= m.token_start && m.token_end <= s.token_end);
            if !within_sentence {
                out.push(format!("mention {mi} crosses a sentence boundary"));
            }
            for (t, slot) in owner
                .iter_mut()
                .enumerate()
                .take(m.token_end)
                .skip(m.token_start)
            {
                if slot.is_some() {
                    out.push(format!("mention overlap at token {t}"));
                } else {
                    *slot = Some(mi);
                }
            }
            if m.candidates.is_empty() {
                out.push(format!("mention {mi} has no candidates"));
            }
            for c in &m.candidates {
                if !(0.0..=1.0).contains(&c.prior) {
                    out.push(format!(
                        "mention {mi} candidate {} prior {} outside [0,1]",
                        c.entity_id, c.prior
                    ));
                }
                if c.label.is_some() && c.score.is_none() {
                    out.push(format!(
                        "mention {mi} candidate {} is labeled but unscored",
                        c.entity_id
                    ));
                }
            }
        }

        for a in &self.entity_annotations {
            if !(0.0..=1.0).contains(&a.score) {
                out.push(format!(
                    "entity {} score {} outside [0,1]",
                    a.entity_id, a.score
                ));
            }
        }
        for t in &self.topic_annotations {
            if !(t.score >= 0.0) {
                out.push(format!("topic {} has negative score", t.topic_id));
            }
        }
        for h in &self.hashtag_annotations {
            if !(h.score >= 0.0) {
                out.push(format!("hashtag {} has negative score", h.tag));
            }
            if h.tag.starts_with('#') {
                out.push(format!("hashtag {} carries a leading '#'", h.tag));
            }
        }
        out
    }
}
