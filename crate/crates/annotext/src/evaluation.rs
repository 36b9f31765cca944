//! Running the pipeline over a gold corpus and scoring its entity links.

use annotext_core::builder::{AnnotatedDoc, GoldAnnotation};
use annotext_core::doc::{AnnotationKind, Selection};
use annotext_core::eval::{evaluate, AlignmentError, EvalResult, SpanLink};
use annotext_core::pipeline::{NoClock, Pipeline, PipelineError};
use rayon::prelude::*;

/// Document ids, falling back to the position in the corpus.
pub fn doc_ids(docs: &[AnnotatedDoc]) -> Vec<String> {
    docs.iter()
        .enumerate()
        .map(|(i, d)| d.doc_id.clone().unwrap_or_else(|| i.to_string()))
        .collect()
}

pub fn span_links(docs: &[AnnotatedDoc]) -> Vec<SpanLink> {
    docs.iter()
        .zip(doc_ids(docs))
        .flat_map(|(d, id)| {
            d.annotations.iter().map(move |a| SpanLink {
                doc_id: id.clone(),
                start: a.start,
                end: a.end,
                entity_id: a.entity_id.clone(),
            })
        })
        .collect()
}

/// Re-annotates each gold document in its stated language, keeping every
/// resolved mention (NIL included) as a predicted span.
pub fn predict(pipeline: &Pipeline, gold: &[AnnotatedDoc]) -> Result<Vec<AnnotatedDoc>, PipelineError> {
    let selection = Selection::none().with(AnnotationKind::Entity);
    gold.par_iter()
        .map(|g| {
            let doc = pipeline.annotate(&g.text, Some(&g.lang), selection, &NoClock)?;
            let annotations = doc
                .mentions
                .iter()
                .filter_map(|m| {
                    Some(GoldAnnotation {
                        start: m.token_start,
                        end: m.token_end,
                        surface: m.surface.clone(),
                        entity_id: m.resolved.clone()?,
                    })
                })
                .collect();
            Ok(AnnotatedDoc {
                doc_id: g.doc_id.clone(),
                lang: g.lang.clone(),
                text: g.text.clone(),
                annotations,
            })
        })
        .collect()
}

/// Scores predictions against gold. Documents are matched by id (or
/// position when ids are absent).
pub fn score(gold: &[AnnotatedDoc], predicted: &[AnnotatedDoc]) -> Result<EvalResult, AlignmentError> {
    evaluate(&doc_ids(gold), &span_links(gold), &span_links(predicted))
}
