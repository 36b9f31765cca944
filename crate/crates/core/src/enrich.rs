//! Stages after disambiguation: topics, hashtags, sentiment and metadata.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::doc::{
    EntityAnnotation, EntityType, HashtagAnnotation, SentimentLabel, SentimentResult, Token,
    TopicAnnotation,
};
use crate::resources::{EntityMetadata, ResourceSet, SentimentLexicon};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SentimentConfig {
    pub epsilon: f64,
    pub tau_pos: f64,
    pub tau_neg: f64,
    /// Preceding tokens scanned for a negation word.
    pub lookback: usize,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            epsilon: 1.0,
            tau_pos: 0.1,
            tau_neg: -0.1,
            lookback: 3,
        }
    }
}

impl SentimentConfig {
    pub fn check(&self) -> Result<(), String> {
        if !(self.epsilon > 0.0) {
            return Err(alloc::format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.tau_neg <= 0.0 && 0.0 <= self.tau_pos) {
            return Err(alloc::format!(
                "thresholds must satisfy tau_neg <= 0 <= tau_pos, got {} and {}",
                self.tau_neg,
                self.tau_pos
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopicConfig {
    /// Share of a topic's raw score added to each direct parent.
    pub parent_decay: f64,
    /// Divide by the largest score so the top topic scores 1.
    pub normalize: bool,
}

impl Default for TopicConfig {
    fn default() -> Self {
        TopicConfig {
            parent_decay: 0.5,
            normalize: true,
        }
    }
}

/// A document-level topic with the entities that fed it.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicScore {
    pub topic_id: String,
    pub score: f64,
    pub contributors: Vec<String>,
}

/// Aggregated topic scores, best first (ties by id).
pub fn topic_scores(entities: &[EntityAnnotation], resources: &ResourceSet, config: &TopicConfig) -> Vec<TopicScore> {
    let mut acc: BTreeMap<&str, (f64, Vec<String>)> = BTreeMap::new();
    let mut credit = |topic, amount, entity: &String| {
        let slot = acc.entry(topic).or_default();
        slot.0 += amount;
        if !slot.1.contains(entity) {
            slot.1.push(entity.clone());
        }
    };
    for e in entities {
        for (topic, affinity) in resources.topics_of(&e.entity_id) {
            let amount = e.score * affinity;
            credit(topic.as_str(), amount, &e.entity_id);
            if config.parent_decay > 0.0 {
                for parent in resources.parents_of(topic) {
                    credit(parent, amount * config.parent_decay, &e.entity_id);
                }
            }
        }
    }

    let max = acc.values().map(|(s, _)| *s).fold(0.0, f64::max);
    let mut out: Vec<TopicScore> = acc
        .into_iter()
        .map(|(topic, (score, contributors))| TopicScore {
            topic_id: topic.into(),
            score: if config.normalize && max > 0.0 { score / max } else { score },
            contributors,
        })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.topic_id.cmp(&b.topic_id)));
    out
}

/// Document topics from its entity annotations.
pub fn project_topics(entities: &[EntityAnnotation], resources: &ResourceSet, config: &TopicConfig) -> Vec<TopicAnnotation> {
    topic_scores(entities, resources, config)
        .into_iter()
        .map(|t| TopicAnnotation {
            readable: resources
                .ontology
                .node(&t.topic_id)
                .map_or_else(|| t.topic_id.clone(), |n| n.readable.clone()),
            topic_id: t.topic_id,
            score: t.score,
        })
        .collect()
}

/// Hashtags weighted by the topics that suggest them, summed per tag, best
/// first (ties by tag).
pub fn recommend_hashtags(topics: &[TopicAnnotation], resources: &ResourceSet) -> Vec<HashtagAnnotation> {
    let mut acc: BTreeMap<&str, f64> = BTreeMap::new();
    for t in topics {
        for (tag, weight) in resources.hashtags_of(&t.topic_id) {
            *acc.entry(tag.trim_start_matches('#')).or_default() += t.score * weight;
        }
    }
    let mut out: Vec<HashtagAnnotation> = acc
        .into_iter()
        .map(|(tag, score)| HashtagAnnotation { tag: tag.into(), score })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.tag.cmp(&b.tag)));
    out
}

/// `(W_pos - W_neg) / (ln N + epsilon)` over the lexicon hits among `N`
/// tokens. A hit preceded by a negation word within `lookback` tokens
/// counts for the opposite polarity.
pub fn score_sentiment(tokens: &[Token], lexicon: &SentimentLexicon, config: &SentimentConfig) -> SentimentResult {
    let n = tokens.len();
    if n == 0 {
        return SentimentResult {
            score: 0.0,
            label: SentimentLabel::Neutral,
        };
    }
    let (mut pos, mut neg) = (0.0, 0.0);
    for (i, t) in tokens.iter().enumerate() {
        let Some((polarity, weight)) = lexicon.lookup(&t.surface, &t.normalized) else {
            continue;
        };
        let negated = tokens[i.saturating_sub(config.lookback)..i]
            .iter()
            .any(|p| lexicon.is_negation(&p.normalized));
        let polarity = if negated { polarity.flipped() } else { polarity };
        if polarity.sign() > 0.0 {
            pos += weight;
        } else {
            neg += weight;
        }
    }
    let score = (pos - neg) / (libm::log(n as f64) + config.epsilon);
    let label = if score > config.tau_pos {
        SentimentLabel::Positive
    } else if score < config.tau_neg {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    };
    SentimentResult { score, label }
}

/// Fills type, KB url and location from the metadata dictionary. Scores and
/// ids are left alone.
pub fn decorate_metadata(annotations: &mut [EntityAnnotation], metadata: &EntityMetadata) {
    for a in annotations {
        match metadata.get(&a.entity_id) {
            Some(meta) => {
                a.entity_type = meta.entity_type;
                a.kb_url = meta.kb_url.clone();
                a.location_meta = meta.location.clone();
            }
            None => {
                a.entity_type = EntityType::Other;
                a.kb_url = None;
                a.location_meta = None;
            }
        }
    }
}
