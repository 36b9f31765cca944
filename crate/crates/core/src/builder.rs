//! Offline dictionary construction from a densely annotated corpus.
//!
//! Counters are commutative monoids: shards can be counted independently and
//! merged in any order with the same result.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::doc::is_placeholder;
use crate::resources::{CooccurrenceDict, MentionCandidate, MentionDict};
use crate::text::surface_key;

pub const DEFAULT_WINDOW: usize = 50;

/// One gold link: token range `[start, end)` of the document text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldAnnotation {
    #[serde(rename = "s")]
    pub start: usize,
    #[serde(rename = "e")]
    pub end: usize,
    pub surface: String,
    #[serde(rename = "id")]
    pub entity_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_id: Option<String>,
    pub lang: String,
    pub text: String,
    pub annotations: Vec<GoldAnnotation>,
}

impl AnnotatedDoc {
    /// Spans non-empty, ordered and non-overlapping.
    pub fn is_well_formed(&self) -> bool {
        let mut prev_end = 0;
        for a in &self.annotations {
            if a.start >= a.end || a.start < prev_end || a.entity_id.is_empty() {
                return false;
            }
            prev_end = a.end;
        }
        true
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub documents: u64,
    /// Documents rejected as malformed (bad JSON or bad spans).
    pub malformed: u64,
    pub mentions: u64,
    pub distinct_surfaces: u64,
    pub entities: u64,
    pub pairs: u64,
    pub pruned: u64,
    pub wall_time_ms: u64,
}

/// `language → surface key → entity → count`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionCounts {
    counts: BTreeMap<String, BTreeMap<String, BTreeMap<String, u64>>>,
    documents: u64,
    mentions: u64,
}

impl MentionCounts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts every annotation of a well-formed document. Returns false (and
    /// counts nothing) for a malformed one.
    pub fn add(&mut self, doc: &AnnotatedDoc) -> bool {
        if !doc.is_well_formed() {
            return false;
        }
        self.documents += 1;
        let lang = self.counts.entry(doc.lang.clone()).or_default();
        for a in &doc.annotations {
            let key = surface_key(&a.surface);
            if key.is_empty() {
                continue;
            }
            *lang
                .entry(key)
                .or_default()
                .entry(a.entity_id.clone())
                .or_insert(0) += 1;
            self.mentions += 1;
        }
        true
    }

    pub fn merge(&mut self, other: MentionCounts) {
        self.documents += other.documents;
        self.mentions += other.mentions;
        for (lang, surfaces) in other.counts {
            let mine = self.counts.entry(lang).or_default();
            for (surface, entities) in surfaces {
                let slot = mine.entry(surface).or_default();
                for (e, c) in entities {
                    *slot.entry(e).or_insert(0) += c;
                }
            }
        }
    }

    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn documents(&self) -> u64 {
        self.documents
    }

    pub fn mentions(&self) -> u64 {
        self.mentions
    }

    pub fn count(&self, lang: &str, surface: &str, entity: &str) -> u64 {
        self.counts
            .get(lang)
            .and_then(|s| s.get(surface))
            .and_then(|e| e.get(entity))
            .copied()
            .unwrap_or(0)
    }

    /// Prior dictionary for one language: count(M→E) / count(M). Candidates
    /// are listed by descending count, then id.
    pub fn build(&self, lang: &str) -> MentionDict {
        let mut dict = MentionDict::new();
        let Some(surfaces) = self.counts.get(lang) else {
            return dict;
        };
        for (surface, entities) in surfaces {
            let total: u64 = entities.values().sum();
            let mut list: Vec<(&String, u64)> = entities.iter().map(|(e, c)| (e, *c)).collect();
            list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
            for (e, c) in list {
                let prior = c as f64 / total as f64;
                dict.insert(
                    surface,
                    MentionCandidate {
                        entity_id: e.clone(),
                        count: c,
                        prior: prior.min(1.0),
                    },
                )
                .expect("priors from counts stay normalized");
            }
        }
        dict
    }
}

/// Raw unordered entity pair counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooccurrenceCounts {
    window: usize,
    pairs: BTreeMap<(String, String), u64>,
    documents: u64,
}

impl CooccurrenceCounts {
    pub fn new(window: usize) -> Self {
        CooccurrenceCounts {
            window,
            pairs: BTreeMap::new(),
            documents: 0,
        }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Counts every pair of distinct real entities whose start tokens are
    /// fewer than `window` tokens apart.
    pub fn add(&mut self, doc: &AnnotatedDoc) -> bool {
        if !doc.is_well_formed() {
            return false;
        }
        self.documents += 1;
        let mut positions: Vec<(usize, &str)> = doc
            .annotations
            .iter()
            .filter(|a| !is_placeholder(&a.entity_id))
            .map(|a| (a.start, a.entity_id.as_str()))
            .collect();
        positions.sort();
        for (i, &(pos, a)) in positions.iter().enumerate() {
            for &(other, b) in &positions[i + 1..] {
                if other - pos >= self.window {
                    break;
                }
                if a == b {
                    continue;
                }
                let key = if a < b { (a.into(), b.into()) } else { (b.into(), a.into()) };
                *self.pairs.entry(key).or_insert(0) += 1;
            }
        }
        true
    }

    pub fn merge(&mut self, other: CooccurrenceCounts) {
        self.documents += other.documents;
        for (k, c) in other.pairs {
            *self.pairs.entry(k).or_insert(0) += c;
        }
    }

    pub fn count(&self, a: &str, b: &str) -> u64 {
        if a == b {
            return 0;
        }
        let key = if a < b { (a.into(), b.into()) } else { (b.into(), a.into()) };
        self.pairs.get(&key).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u64)> {
        self.pairs.iter().map(|((a, b), c)| (a.as_str(), b.as_str(), *c))
    }
}

/// Keeps, per entity, neighbors with at least `min_count` co-occurrences and
/// then the `top_k` largest. Returns the dictionary and how many directed
/// entries were dropped.
pub fn prune_cooccurrence(raw: &CooccurrenceCounts, min_count: u64, top_k: usize) -> (CooccurrenceDict, u64) {
    let mut lists: BTreeMap<String, Vec<(String, u64)>> = BTreeMap::new();
    for (a, b, c) in raw.iter() {
        lists.entry(a.into()).or_default().push((b.into(), c));
        lists.entry(b.into()).or_default().push((a.into(), c));
    }
    let before: u64 = lists.values().map(|l| l.len() as u64).sum();
    let dict = CooccurrenceDict::from_lists(lists, min_count, top_k);
    let after: u64 = dict.iter().map(|(_, l)| l.len() as u64).sum();
    (dict, before - after)
}
