//! Read-only dictionaries consulted by the pipeline stages.
//!
//! Everything here is built once (by the loader or by hand in tests) and then
//! shared immutably; lookups are exact-match on normalized keys.

mod ontology;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use ontology::{TopicNode, TopicOntology};
#[cfg(test)]
pub(crate) use ontology::tests::figure_fixture as ontology_figure_fixture;

use crate::doc::{EntityType, LocationMeta};
use crate::text::LanguageProfile;

/// Neighbors kept per entity in the co-occurrence dictionary.
pub const DEFAULT_COOCCUR_TOP_K: usize = 30;
/// Minimum co-occurrence count kept in the dictionary.
pub const DEFAULT_COOCCUR_MIN_COUNT: u64 = 10;
/// Topics kept per entity.
pub const MAX_TOPICS_PER_ENTITY: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResourceError {
    #[error("no mention dictionary for language {0:?}")]
    UnknownLanguage(String),
    #[error("unknown topic {0:?}")]
    UnknownTopic(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MentionCandidate {
    pub entity_id: String,
    pub count: u64,
    pub prior: f64,
}

/// Normalized mention surface → candidate entities, for one language.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MentionDict {
    entries: BTreeMap<String, Vec<MentionCandidate>>,
    longest: usize,
}

impl MentionDict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts one candidate for `surface`, checking the prior range and that
    /// the surface's priors stay within `1 + 1e-9`.
    pub fn insert(
        &mut self,
        surface: &str,
        candidate: MentionCandidate,
    ) -> Result<(), ResourceError> {
        if !(0.0..=1.0).contains(&candidate.prior) {
            return Err(ResourceError::InvariantViolation(format!(
                "prior {} for {surface:?} -> {} outside [0,1]",
                candidate.prior, candidate.entity_id
            )));
        }
        let list = self.entries.entry(surface.to_string()).or_default();
        if list.iter().any(|c| c.entity_id == candidate.entity_id) {
            return Err(ResourceError::InvariantViolation(format!(
                "duplicate candidate {} for {surface:?}",
                candidate.entity_id
            )));
        }
        let total: f64 = list.iter().map(|c| c.prior).sum::<f64>() + candidate.prior;
        if total > 1.0 + 1e-9 {
            return Err(ResourceError::InvariantViolation(format!(
                "priors for {surface:?} sum to {total}"
            )));
        }
        list.push(candidate);
        let words = surface.split(' ').count();
        self.longest = self.longest.max(words);
        Ok(())
    }

    pub fn get(&self, surface: &str) -> &[MentionCandidate] {
        self.entries.get(surface).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.entries.contains_key(surface)
    }

    /// Number of distinct surfaces.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Word count of the longest surface.
    pub fn longest_surface(&self) -> usize {
        self.longest
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[MentionCandidate])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Entity → strongest co-occurring neighbors, sorted by descending count.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CooccurrenceDict {
    neighbors: BTreeMap<String, Vec<(String, u64)>>,
}

impl CooccurrenceDict {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the dictionary from per-entity neighbor lists, keeping only
    /// neighbors with `count >= min_count` and then the `top_k` largest
    /// (ties by neighbor id). Self-pairs are dropped; empty lists vanish.
    pub fn from_lists<I>(lists: I, min_count: u64, top_k: usize) -> Self
    where
        I: IntoIterator<Item = (String, Vec<(String, u64)>)>,
    {
        let mut neighbors = BTreeMap::new();
        for (head, mut list) in lists {
            list.retain(|(n, c)| *c >= min_count && *n != head);
            list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            list.dedup_by(|a, b| a.0 == b.0);
            list.truncate(top_k);
            if !list.is_empty() {
                neighbors.insert(head, list);
            }
        }
        CooccurrenceDict { neighbors }
    }

    fn one_way(&self, a: &str, b: &str) -> u64 {
        self.neighbors
            .get(a)
            .and_then(|l| l.iter().find(|(n, _)| n == b))
            .map_or(0, |(_, c)| *c)
    }

    /// Stored count for the pair, looked up in both directions (max wins).
    pub fn count(&self, a: &str, b: &str) -> u64 {
        if a == b {
            return 0;
        }
        self.one_way(a, b).max(self.one_way(b, a))
    }

    pub fn neighbors(&self, entity: &str) -> &[(String, u64)] {
        self.neighbors.get(entity).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest stored count for `entity`, 0 if absent.
    pub fn max_count(&self, entity: &str) -> u64 {
        self.neighbors(entity).first().map_or(0, |(_, c)| *c)
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[(String, u64)])> {
        self.neighbors.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntityImportance {
    scores: BTreeMap<String, f64>,
}

impl EntityImportance {
    pub fn insert(&mut self, entity: &str, score: f64) -> Result<(), ResourceError> {
        if !(0.0..=1.0).contains(&score) {
            return Err(ResourceError::InvariantViolation(format!(
                "importance {score} for {entity} outside [0,1]"
            )));
        }
        self.scores.insert(entity.to_string(), score);
        Ok(())
    }

    /// Stored score; unknown entities count as unimportant (0.0).
    pub fn get(&self, entity: &str) -> f64 {
        self.scores.get(entity).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// A key → weighted-id list table, used for entity→topics and topic→hashtags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedLists {
    lists: BTreeMap<String, Vec<(String, f64)>>,
    cap: Option<usize>,
}

impl WeightedLists {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps at most `cap` entries per key, strongest first.
    pub fn with_cap(cap: usize) -> Self {
        WeightedLists {
            lists: BTreeMap::new(),
            cap: Some(cap),
        }
    }

    pub fn insert(&mut self, key: &str, id: &str, weight: f64) -> Result<(), ResourceError> {
        if !(weight >= 0.0) || !weight.is_finite() {
            return Err(ResourceError::InvariantViolation(format!(
                "weight {weight} for {key} -> {id} must be a finite non-negative number"
            )));
        }
        let list = self.lists.entry(key.to_string()).or_default();
        match list.iter_mut().find(|(i, _)| i == id) {
            Some(slot) => slot.1 = weight,
            None => list.push((id.to_string(), weight)),
        }
        list.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        if let Some(cap) = self.cap {
            list.truncate(cap);
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> &[(String, f64)] {
        self.lists.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[(String, f64)])> {
        self.lists.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentimentLexicon {
    words: BTreeMap<String, (Polarity, f64)>,
    emoticons: BTreeMap<String, (Polarity, f64)>,
    negations: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    fn check(entry: &str, weight: f64) -> Result<(), ResourceError> {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(ResourceError::InvariantViolation(format!(
                "lexicon weight {weight} for {entry:?} must be positive"
            )));
        }
        Ok(())
    }

    /// Words are stored lowercased.
    pub fn add_word(&mut self, word: &str, polarity: Polarity, weight: f64) -> Result<(), ResourceError> {
        Self::check(word, weight)?;
        self.words.insert(word.to_lowercase(), (polarity, weight));
        Ok(())
    }

    /// Emoticons are matched verbatim against token surfaces.
    pub fn add_emoticon(&mut self, emoticon: &str, polarity: Polarity, weight: f64) -> Result<(), ResourceError> {
        Self::check(emoticon, weight)?;
        self.emoticons.insert(emoticon.to_string(), (polarity, weight));
        Ok(())
    }

    pub fn add_negation(&mut self, word: &str) {
        self.negations.insert(word.to_lowercase());
    }

    /// Looks up a token: emoticon table by surface first, then words by
    /// normalized form.
    pub fn lookup(&self, surface: &str, normalized: &str) -> Option<(Polarity, f64)> {
        self.emoticons
            .get(surface)
            .or_else(|| self.words.get(normalized))
            .copied()
    }

    pub fn is_negation(&self, normalized: &str) -> bool {
        self.negations.contains(normalized)
    }

    pub fn word_count(&self) -> usize {
        self.words.len()
    }

    pub fn emoticon_count(&self) -> usize {
        self.emoticons.len()
    }

    pub fn negation_count(&self) -> usize {
        self.negations.len()
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, Polarity, f64)> {
        self.words.iter().map(|(k, (p, w))| (k.as_str(), *p, *w))
    }

    pub fn emoticons(&self) -> impl Iterator<Item = (&str, Polarity, f64)> {
        self.emoticons.iter().map(|(k, (p, w))| (k.as_str(), *p, *w))
    }

    pub fn negations(&self) -> impl Iterator<Item = &str> {
        self.negations.iter().map(String::as_str)
    }

    /// Same lexicon with every polarity reversed.
    pub fn inverted(&self) -> Self {
        let flip = |m: &BTreeMap<String, (Polarity, f64)>| {
            m.iter()
                .map(|(k, (p, w))| (k.clone(), (p.flipped(), *w)))
                .collect()
        };
        SentimentLexicon {
            words: flip(&self.words),
            emoticons: flip(&self.emoticons),
            negations: self.negations.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityMeta {
    pub entity_type: EntityType,
    pub display: String,
    pub kb_url: Option<String>,
    pub location: Option<LocationMeta>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EntityMetadata {
    entries: BTreeMap<String, EntityMeta>,
}

impl EntityMetadata {
    pub fn insert(&mut self, entity: &str, meta: EntityMeta) {
        self.entries.insert(entity.to_string(), meta);
    }

    pub fn get(&self, entity: &str) -> Option<&EntityMeta> {
        self.entries.get(entity)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &EntityMeta)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// Every dictionary the online pipeline needs.
#[derive(Debug, Clone, Default)]
pub struct ResourceSet {
    pub mentions: BTreeMap<String, MentionDict>,
    pub cooccurrence: CooccurrenceDict,
    pub importance: EntityImportance,
    pub ontology: TopicOntology,
    pub entity_topics: WeightedLists,
    pub topic_hashtags: WeightedLists,
    pub lexicon: SentimentLexicon,
    pub metadata: EntityMetadata,
    pub profiles: Vec<LanguageProfile>,
    /// Per-language abbreviations (lowercase, with trailing period) that do
    /// not end a sentence.
    pub abbreviations: BTreeMap<String, BTreeSet<String>>,
}

impl ResourceSet {
    pub fn new() -> Self {
        ResourceSet {
            entity_topics: WeightedLists::with_cap(MAX_TOPICS_PER_ENTITY),
            ..Default::default()
        }
    }

    pub fn mention_dict(&self, lang: &str) -> Result<&MentionDict, ResourceError> {
        self.mentions
            .get(lang)
            .ok_or_else(|| ResourceError::UnknownLanguage(lang.to_string()))
    }

    /// Candidates for a normalized surface; empty when the surface is unknown.
    pub fn candidates_for(&self, lang: &str, surface: &str) -> Result<&[MentionCandidate], ResourceError> {
        Ok(self.mention_dict(lang)?.get(surface))
    }

    pub fn cooccurrence_count(&self, a: &str, b: &str) -> u64 {
        self.cooccurrence.count(a, b)
    }

    pub fn topic_distance(&self, a: &str, b: &str) -> Result<Option<u32>, ResourceError> {
        self.ontology.distance(a, b)
    }

    pub fn entity_importance(&self, entity: &str) -> f64 {
        self.importance.get(entity)
    }

    pub fn topics_of(&self, entity: &str) -> &[(String, f64)] {
        self.entity_topics.get(entity)
    }

    pub fn hashtags_of(&self, topic: &str) -> &[(String, f64)] {
        self.topic_hashtags.get(topic)
    }

    pub fn parents_of(&self, topic: &str) -> Vec<&str> {
        self.ontology.parents_of(topic)
    }

    /// Name used for Jaccard similarity: metadata display name, else the id
    /// with underscores read as spaces.
    pub fn display_name(&self, entity: &str) -> String {
        match self.metadata.get(entity) {
            Some(m) if !m.display.is_empty() => m.display.clone(),
            _ => entity.replace('_', " "),
        }
    }

    pub fn abbreviations_for(&self, lang: &str) -> Option<&BTreeSet<String>> {
        self.abbreviations.get(lang)
    }

    /// Cross-dictionary checks that individual inserts cannot see.
    pub fn check(&self) -> Result<(), ResourceError> {
        for (entity, topics) in self.entity_topics.iter() {
            for (t, _) in topics {
                if !self.ontology.contains(t) {
                    return Err(ResourceError::InvariantViolation(format!(
                        "entity {entity} refers to unknown topic {t}"
                    )));
                }
            }
        }
        for (topic, _) in self.topic_hashtags.iter() {
            if !self.ontology.contains(topic) {
                return Err(ResourceError::InvariantViolation(format!(
                    "hashtags listed for unknown topic {topic}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn cand(id: &str, count: u64, prior: f64) -> MentionCandidate {
        MentionCandidate {
            entity_id: id.to_string(),
            count,
            prior,
        }
    }

    fn set() -> ResourceSet {
        let mut r = ResourceSet::new();
        let mut en = MentionDict::new();
        en.insert("android", cand("Android_OS", 7, 0.7)).unwrap();
        en.insert("android", cand("Android_robot", 2, 0.2)).unwrap();
        en.insert("android", cand("NIL", 1, 0.1)).unwrap();
        r.mentions.insert("en".into(), en);
        r.ontology = ontology_figure_fixture();
        r.ontology.add_node("smartphones", "smartphones", "Smartphones");
        r.ontology.add_node("nba", "nba", "NBA");
        r.entity_topics.insert("Android_OS", "smartphones", 1.0).unwrap();
        r.topic_hashtags.insert("nba", "NBA", 54285.7515).unwrap();
        r.topic_hashtags.insert("nba", "NBAPlayoffs", 28685.6006).unwrap();
        r.importance.insert("Apple_Inc", 0.66).unwrap();
        r.importance.insert("Apple_fruit", 0.64).unwrap();
        r
    }

    #[test]
    fn candidate_lookup() {
        let r = set();
        let c = r.candidates_for("en", "android").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].entity_id, "Android_OS");
        assert_eq!(c[1].entity_id, "Android_robot");
        assert!(r.candidates_for("en", "zzzz-unknown").unwrap().is_empty());
        assert_eq!(
            r.candidates_for("xx", "android"),
            Err(ResourceError::UnknownLanguage("xx".into()))
        );
    }

    #[test]
    fn prior_out_of_range_rejected() {
        let mut d = MentionDict::new();
        assert!(matches!(
            d.insert("x", cand("A", 1, 1.5)),
            Err(ResourceError::InvariantViolation(_))
        ));
        d.insert("x", cand("A", 1, 0.7)).unwrap();
        assert!(d.insert("x", cand("B", 1, 0.4)).is_err());
    }

    #[test]
    fn importance_defaults_to_zero() {
        let r = set();
        assert_eq!(r.entity_importance("Apple_Inc"), 0.66);
        assert_eq!(r.entity_importance("Apple_fruit"), 0.64);
        assert_eq!(r.entity_importance("unknown"), 0.0);
    }

    #[test]
    fn simple_lookups() {
        let r = set();
        assert_eq!(r.topics_of("Android_OS")[0].0, "smartphones");
        assert!(r.topics_of("unknown").is_empty());
        let tags: Vec<&str> = r.hashtags_of("nba").iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(tags, ["NBA", "NBAPlayoffs"]);
        assert_eq!(r.parents_of("google"), ["internet"]);
        assert!(r.check().is_ok());
        assert_eq!(r.display_name("Android_robot"), "Android robot");
    }

    #[test]
    fn cooccurrence_lookup_both_directions() {
        let d = CooccurrenceDict::from_lists(
            vec![
                ("A".into(), vec![("B".into(), 12), ("C".into(), 9), ("A".into(), 50)]),
                ("C".into(), vec![("B".into(), 40)]),
            ],
            10,
            30,
        );
        assert_eq!(d.count("A", "B"), 12);
        assert_eq!(d.count("B", "A"), 12);
        assert_eq!(d.count("A", "C"), 0, "below min count");
        assert_eq!(d.count("A", "A"), 0);
        assert_eq!(d.count("B", "C"), 40);
        assert_eq!(d.count("unknown", "B"), 0);
        assert_eq!(d.max_count("C"), 40);
    }

    #[test]
    fn cooccurrence_caps_neighbors() {
        let list: Vec<(String, u64)> = (0..40).map(|i| (format!("n{i:02}"), 10 + i as u64)).collect();
        let d = CooccurrenceDict::from_lists(vec![("h".into(), list)], 10, 30);
        let kept = d.neighbors("h");
        assert_eq!(kept.len(), 30);
        assert_eq!(kept[0], ("n39".into(), 49));
        assert_eq!(kept[29], ("n10".into(), 20));
    }

    #[test]
    fn entity_topics_capped_at_ten() {
        let mut w = WeightedLists::with_cap(MAX_TOPICS_PER_ENTITY);
        for i in 0..15 {
            w.insert("e", &format!("t{i}"), i as f64 / 20.0).unwrap();
        }
        assert_eq!(w.get("e").len(), 10);
        assert_eq!(w.get("e")[0].0, "t14");
    }
}
