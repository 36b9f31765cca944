use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    context_window, easy_entities, feature_vector, first_pass, train_logistic, train_tree, ClassifierModel,
    EdlConfig, FeatureVector, LogisticHyper, Sample, TrainError, TrainingMeta, TreeHyper,
};
use crate::builder::AnnotatedDoc;
use crate::doc::{ResolutionPass, NIL};
use crate::resources::ResourceSet;
use crate::text::{analyze, extract_mentions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub features: FeatureVector,
    pub label: bool,
    pub doc_id: String,
    pub mention_index: usize,
    pub candidate_id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub documents: usize,
    /// Documents skipped for an unknown language or malformed spans.
    pub skipped_documents: usize,
    pub hard_mentions: usize,
    /// Hard mentions whose gold entity is not among the candidates.
    pub skipped_mentions: usize,
    pub examples: usize,
    pub positives: usize,
}

/// Feature rows for every candidate of every hard mention in a gold corpus.
///
/// Mentions come from the same extraction the pipeline runs. A mention whose
/// token span matches a gold annotation takes that annotation's entity as
/// gold; any other mention is gold NIL. The gold candidate is labeled True,
/// all others False. Documents without an explicit id are named by their
/// position in `corpus`.
pub fn generate_training_examples(
    corpus: &[AnnotatedDoc],
    resources: &ResourceSet,
    config: &EdlConfig,
) -> (Vec<TrainingExample>, TrainingReport) {
    let mut out = Vec::new();
    let mut report = TrainingReport::default();
    for (n, doc) in corpus.iter().enumerate() {
        let Ok(dict) = resources.mention_dict(&doc.lang) else {
            report.skipped_documents += 1;
            continue;
        };
        if !doc.is_well_formed() {
            report.skipped_documents += 1;
            continue;
        }
        report.documents += 1;
        let doc_id = doc.doc_id.clone().unwrap_or_else(|| alloc::format!("{n}"));
        let a = analyze(&doc.text, resources.abbreviations_for(&doc.lang));
        let chars: Vec<char> = doc.text.chars().collect();
        let mut mentions: Vec<_> = a
            .sentences
            .iter()
            .flat_map(|s| extract_mentions(&a.tokens, *s, dict, &chars))
            .collect();
        first_pass(&mut mentions, config);
        let easy = easy_entities(&mentions);

        for (mi, m) in mentions.iter().enumerate() {
            if m.resolution_pass != ResolutionPass::Unresolved {
                continue;
            }
            report.hard_mentions += 1;
            let gold = doc
                .annotations
                .iter()
                .find(|g| g.start == m.token_start && g.end == m.token_end)
                .map_or(NIL, |g| g.entity_id.as_str());
            if !m.candidates.iter().any(|c| c.entity_id == gold) {
                report.skipped_mentions += 1;
                continue;
            }
            let context = context_window(m.token_start, &easy, config.window);
            for c in &m.candidates {
                let label = c.entity_id == gold;
                report.examples += 1;
                report.positives += usize::from(label);
                out.push(TrainingExample {
                    features: feature_vector(&c.entity_id, c.prior, &m.surface, &context, resources, config),
                    label,
                    doc_id: doc_id.clone(),
                    mention_index: mi,
                    candidate_id: c.entity_id.clone(),
                });
            }
        }
    }
    (out, report)
}

/// Fits both ensemble members on the same examples.
pub fn train_model(
    examples: &[TrainingExample],
    logistic: &LogisticHyper,
    tree: &TreeHyper,
) -> Result<ClassifierModel, TrainError> {
    let samples: Vec<Sample> = examples.iter().map(|e| (e.features.to_array(), e.label)).collect();
    Ok(ClassifierModel {
        logistic: train_logistic(&samples, logistic)?,
        tree: train_tree(&samples, tree)?,
        hyper: TrainingMeta {
            logistic: *logistic,
            tree: *tree,
            examples: samples.len(),
            positives: samples.iter().filter(|(_, y)| *y).count(),
        },
    })
}
