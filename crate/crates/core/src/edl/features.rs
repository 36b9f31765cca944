use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::EdlConfig;
use crate::doc::{is_placeholder, Mention, ResolutionPass};
use crate::resources::ResourceSet;
use crate::text::normalized_words;

pub const FEATURE_COUNT: usize = 5;

/// The five per-candidate features, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    /// Prior probability of the candidate given the mention.
    pub mention_entity_cooccurr: f64,
    pub mention_entity_jaccard: f64,
    pub entity_importance: f64,
    /// Capped mean co-occurrence with the context entities.
    pub entity_entity_cooccurr: f64,
    /// Inverse topic distance to the closest context entity.
    pub entity_topic_sim: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.mention_entity_cooccurr,
            self.mention_entity_jaccard,
            self.entity_importance,
            self.entity_entity_cooccurr,
            self.entity_topic_sim,
        ]
    }

    pub fn from_array(a: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector {
            mention_entity_cooccurr: a[0],
            mention_entity_jaccard: a[1],
            entity_importance: a[2],
            entity_entity_cooccurr: a[3],
            entity_topic_sim: a[4],
        }
    }
}

fn word_set(text: &str) -> BTreeSet<String> {
    normalized_words(text)
        .into_iter()
        .filter(|w| w.chars().any(char::is_alphanumeric))
        .collect()
}

/// Token-set Jaccard similarity of two names; 0 when both are empty.
pub fn jaccard(mention: &str, entity_name: &str) -> f64 {
    let a = word_set(mention);
    let b = word_set(entity_name);
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// First-pass entities in document order: `(token position, entity id)`.
pub fn easy_entities(mentions: &[Mention]) -> Vec<(usize, &str)> {
    mentions
        .iter()
        .filter(|m| m.resolution_pass == ResolutionPass::Easy)
        .filter_map(|m| {
            let e = m.resolved.as_deref()?;
            (!is_placeholder(e)).then_some((m.token_start, e))
        })
        .collect()
}

/// Up to `w` distinct easy entities nearest (by start-token distance) to the
/// mention starting at `position`; ties go to the earlier one.
pub fn context_window<'a>(position: usize, easy: &[(usize, &'a str)], w: usize) -> Vec<&'a str> {
    let mut out: Vec<&'a str> = Vec::with_capacity(w.min(easy.len()));
    let split = easy.partition_point(|(p, _)| *p < position);
    let (mut left, mut right) = (split, split);
    while out.len() < w && (left > 0 || right < easy.len()) {
        let take_left = match (left > 0, right < easy.len()) {
            (true, true) => position - easy[left - 1].0 <= easy[right].0 - position,
            (l, _) => l,
        };
        let entity = if take_left {
            left -= 1;
            easy[left].1
        } else {
            right += 1;
            easy[right - 1].1
        };
        if !out.contains(&entity) {
            out.push(entity);
        }
    }
    out
}

/// Mean over the context of `min(count, cap) / cap`; 0 on empty context.
pub fn feature_entity_cooccurr(candidate: &str, context: &[&str], resources: &ResourceSet, cap: u64) -> f64 {
    if context.is_empty() || cap == 0 {
        return 0.0;
    }
    let sum: f64 = context
        .iter()
        .map(|e| resources.cooccurrence_count(candidate, e).min(cap) as f64 / cap as f64)
        .sum();
    sum / context.len() as f64
}

/// Maximum of `1 / distance` over all (candidate topic, context topic)
/// pairs; a shared topic gives 1, no connection gives 0.
pub fn feature_topic_sim(candidate: &str, context: &[&str], resources: &ResourceSet) -> f64 {
    let own = resources.topics_of(candidate);
    if own.is_empty() || context.is_empty() {
        return 0.0;
    }
    let theirs: Vec<&str> = context
        .iter()
        .flat_map(|e| resources.topics_of(e).iter().map(|(t, _)| t.as_str()))
        .collect();
    match resources
        .ontology
        .min_distance(own.iter().map(|(t, _)| t.as_str()), theirs)
    {
        Some(0) => 1.0,
        Some(d) => 1.0 / d as f64,
        None => 0.0,
    }
}

/// All five features for one candidate. Placeholders carry only their prior.
pub fn feature_vector(
    candidate: &str,
    prior: f64,
    mention_surface: &str,
    context: &[&str],
    resources: &ResourceSet,
    config: &EdlConfig,
) -> FeatureVector {
    if is_placeholder(candidate) {
        return FeatureVector {
            mention_entity_cooccurr: prior,
            ..Default::default()
        };
    }
    FeatureVector {
        mention_entity_cooccurr: prior,
        mention_entity_jaccard: jaccard(mention_surface, &resources.display_name(candidate)),
        entity_importance: resources.entity_importance(candidate),
        entity_entity_cooccurr: feature_entity_cooccurr(candidate, context, resources, config.cooccur_cap),
        entity_topic_sim: feature_topic_sim(candidate, context, resources),
    }
}
