//! Strict span-and-id evaluation of entity links.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::doc::is_placeholder;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalResult {
    /// Derived metrics from confusion counts; any zero denominator gives 0.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        EvalResult {
            tp,
            fp,
            fn_,
            tn,
            precision,
            recall,
            f1,
            accuracy: ratio(tp + tn, tp + fp + fn_ + tn),
        }
    }
}

/// One resolved span: token range `[start, end)` in document `doc_id`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanLink {
    pub doc_id: String,
    #[serde(rename = "s")]
    pub start: usize,
    #[serde(rename = "e")]
    pub end: usize,
    #[serde(rename = "id")]
    pub entity_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("gold and predictions are misaligned: {}", .0.join("; "))]
pub struct AlignmentError(pub Vec<String>);

type SpanMap<'a> = BTreeMap<(&'a str, usize, usize), &'a str>;

fn index<'a>(side: &str, links: &'a [SpanLink], problems: &mut Vec<String>) -> SpanMap<'a> {
    let mut map = SpanMap::new();
    for l in links {
        if l.start >= l.end {
            problems.push(format!("{side} span {}:{}..{} is empty", l.doc_id, l.start, l.end));
        } else if map.insert((&l.doc_id, l.start, l.end), &l.entity_id).is_some() {
            problems.push(format!("{side} span {}:{}..{} appears twice", l.doc_id, l.start, l.end));
        }
    }
    problems.extend(
        map.keys()
            .zip(map.keys().skip(1))
            .filter(|(a, b)| a.0 == b.0 && b.1 < a.2)
            .map(|(a, b)| format!("{side} spans {}:{}..{} and {}..{} overlap", a.0, a.1, a.2, b.1, b.2)),
    );
    map
}

/// Confusion counts over spans, matching on exact span plus entity id.
///
/// A predicted span absent from the gold side is gold NIL; a gold span
/// absent from the predictions is predicted NIL. `documents` lists every
/// evaluated document; links naming any other document, empty spans,
/// repeated spans and overlapping spans are alignment errors.
pub fn evaluate(documents: &[String], gold: &[SpanLink], predicted: &[SpanLink]) -> Result<EvalResult, AlignmentError> {
    let mut problems = Vec::new();
    let g = index("gold", gold, &mut problems);
    let p = index("predicted", predicted, &mut problems);
    let known: BTreeSet<&str> = documents.iter().map(String::as_str).collect();
    let unknown: BTreeSet<&str> = g.keys().chain(p.keys()).map(|k| k.0).filter(|d| !known.contains(d)).collect();
    problems.extend(unknown.into_iter().map(|d| format!("document {d:?} is not in the evaluated set")));
    if !problems.is_empty() {
        return Err(AlignmentError(problems));
    }

    let (mut tp, mut fp, mut fn_, mut tn) = (0, 0, 0, 0);
    let spans: BTreeSet<_> = g.keys().chain(p.keys()).collect();
    for span in spans {
        let gold_id = g.get(span).copied().filter(|e| !is_placeholder(e));
        let pred_id = p.get(span).copied().filter(|e| !is_placeholder(e));
        match (gold_id, pred_id) {
            (Some(a), Some(b)) if a == b => tp += 1,
            (_, Some(_)) => fp += 1,
            (Some(_), None) => fn_ += 1,
            (None, None) => tn += 1,
        }
    }
    Ok(EvalResult::from_counts(tp, fp, fn_, tn))
}
