//! Two-pass entity disambiguation and linking.
//!
//! The first pass resolves mentions whose priors are decisive. The second
//! pass scores the remaining candidates with a decision tree (label) and a
//! logistic model (score) over five features, using the easy entities as
//! context, then picks one candidate per mention.

mod features;
mod logistic;
mod rules;
mod training;
mod tree;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use serde::{Deserialize, Serialize};

pub use features::{
    context_window, easy_entities, feature_entity_cooccurr, feature_topic_sim, feature_vector, jaccard,
    FeatureVector, FEATURE_COUNT,
};
pub use logistic::{
    logistic_gradient, logistic_loss, sigmoid, train_logistic, LogisticHyper, LogisticModel, Sample,
};
pub use rules::{easy_rule, final_disambiguation, first_pass, rank_candidates, EasyRule};
pub use training::{generate_training_examples, train_model, TrainingExample, TrainingReport};
pub use tree::{train_tree, TreeHyper, TreeNode};

use crate::doc::{is_placeholder, Document, EntityAnnotation, EntityType, ResolutionPass};
use crate::resources::ResourceSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrainError {
    #[error("training data contains a single label")]
    DegenerateData,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EdlError {
    #[error("mention has no candidates")]
    NoCandidates,
    #[error("invalid EDL configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EdlConfig {
    /// Rule (b): two candidates, one NIL/MISC.
    pub lambda1: f64,
    /// Rule (c): three or more candidates.
    pub lambda2: f64,
    /// NIL/MISC margin of gain.
    pub lambda3: f64,
    /// Context size, in easy entities.
    pub window: usize,
    pub cooccur_cap: u64,
}

impl Default for EdlConfig {
    fn default() -> Self {
        EdlConfig {
            lambda1: 0.75,
            lambda2: 0.9,
            lambda3: 0.1,
            window: 20,
            cooccur_cap: 100,
        }
    }
}

impl EdlConfig {
    /// Rejects out-of-range values; returns warnings for legal but odd ones.
    pub fn check(&self) -> Result<Vec<String>, EdlError> {
        for (name, v) in [("lambda1", self.lambda1), ("lambda2", self.lambda2), ("lambda3", self.lambda3)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(EdlError::InvalidConfig(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if self.window == 0 {
            return Err(EdlError::InvalidConfig("window must be at least 1".into()));
        }
        if self.cooccur_cap == 0 {
            return Err(EdlError::InvalidConfig("cooccur_cap must be positive".into()));
        }
        let mut warnings = Vec::new();
        if self.lambda2 < self.lambda1 {
            warnings.push(format!(
                "lambda2 ({}) is below lambda1 ({})",
                self.lambda2, self.lambda1
            ));
        }
        Ok(warnings)
    }
}

/// Hyperparameters recorded alongside a trained model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub logistic: LogisticHyper,
    pub tree: TreeHyper,
    #[serde(default)]
    pub examples: usize,
    #[serde(default)]
    pub positives: usize,
}

/// Tree-labels, logistic-scores ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub logistic: LogisticModel,
    pub tree: TreeNode,
    #[serde(default)]
    pub hyper: TrainingMeta,
}

impl ClassifierModel {
    /// Label from the tree, score from the logistic model.
    pub fn classify_and_score(&self, v: &FeatureVector) -> (bool, f64) {
        let x = v.to_array();
        (self.tree.predict(&x), self.logistic.predict(&x))
    }
}

/// Runs both passes over `doc.mentions` and replaces the entity annotations.
///
/// Easy resolutions are scored by their prior, hard ones by the ensemble
/// score. Mentions without candidates stay unresolved. An entity reached by
/// several mentions is annotated once, with its best score and the surface
/// of that mention.
pub fn disambiguate(doc: &mut Document, resources: &ResourceSet, model: &ClassifierModel, config: &EdlConfig) {
    first_pass(&mut doc.mentions, config);
    let easy: Vec<(usize, String)> = easy_entities(&doc.mentions)
        .into_iter()
        .map(|(p, e)| (p, e.into()))
        .collect();
    let easy_refs: Vec<(usize, &str)> = easy.iter().map(|(p, e)| (*p, e.as_str())).collect();

    for mention in doc.mentions.iter_mut() {
        if mention.resolution_pass != ResolutionPass::Unresolved || mention.candidates.is_empty() {
            continue;
        }
        let context = context_window(mention.token_start, &easy_refs, config.window);
        for c in mention.candidates.iter_mut() {
            let v = feature_vector(&c.entity_id, c.prior, &mention.surface, &context, resources, config);
            let (label, score) = model.classify_and_score(&v);
            c.features = Some(v);
            c.label = Some(label);
            c.score = Some(score);
        }
        if let Ok(i) = final_disambiguation(&mention.candidates, config.lambda3) {
            mention.resolved = Some(mention.candidates[i].entity_id.clone());
            mention.resolution_pass = ResolutionPass::Hard;
        }
    }

    let mut best: BTreeMap<&str, (f64, &str)> = BTreeMap::new();
    let mut order: Vec<&str> = vec![];
    for m in &doc.mentions {
        let Some(id) = m.resolved.as_deref() else { continue };
        if is_placeholder(id) {
            continue;
        }
        let Some(c) = m.candidates.iter().find(|c| c.entity_id == id) else {
            continue;
        };
        let score = match m.resolution_pass {
            ResolutionPass::Hard => c.score.unwrap_or(c.prior),
            _ => c.prior,
        };
        match best.get_mut(id) {
            Some(slot) if score > slot.0 => *slot = (score, m.surface.as_str()),
            Some(_) => {}
            None => {
                best.insert(id, (score, m.surface.as_str()));
                order.push(id);
            }
        }
    }
    doc.entity_annotations = order
        .into_iter()
        .map(|id| {
            let (score, surface) = best[id];
            EntityAnnotation {
                entity_id: id.into(),
                surface: surface.into(),
                score: score.clamp(0.0, 1.0),
                entity_type: EntityType::Other,
                kb_url: None,
                location_meta: None,
            }
        })
        .collect();
}
