//! Per-stage timing over growing inputs and a least-squares fit of total
//! time against size.

use std::collections::BTreeMap;
use std::time::Instant;

use annotext_core::doc::{is_placeholder, Selection};
use annotext_core::pipeline::{Pipeline, PipelineError, STAGES};
use serde::{Deserialize, Serialize};

use crate::service::SystemClock;
use crate::synth::dense_text;

/// Filler used when no language samples are supplied.
pub const DEFAULT_FILLER: &[&str] = &[
    "the", "and", "with", "from", "about", "after", "before", "today", "said", "will", "has", "new", "more", "over",
    "their", "which", "while", "when", "where", "other", "people", "year", "week", "report", "market", "team",
    "season", "city", "game", "plan", "deal", "show", "music", "phone", "early", "late", "again", "still",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchBucket {
    pub kb: f64,
    pub bytes: usize,
    pub reps: usize,
    pub mean_total_ms: f64,
    /// Stage name → mean milliseconds.
    pub stage_mean_ms: BTreeMap<String, f64>,
    pub mean_entities: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub buckets: Vec<BenchBucket>,
    /// Total ms against kb; absent with fewer than two distinct sizes.
    pub fit: Option<LinearFit>,
    /// EDL and mention extraction time over all stage time.
    pub edl_share: f64,
    pub ms_per_kb: Option<f64>,
}

/// Ordinary least squares `y = slope * x + intercept`. `None` unless there
/// are at least two distinct `x`. R² is 1 when `y` is constant.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if xs.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(LinearFit { slope, intercept, r2 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub sizes_kb: Vec<usize>,
    pub reps: usize,
    pub language: String,
    pub selection: Selection,
    pub seed: u64,
    pub filler: Vec<String>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            sizes_kb: vec![1, 2, 4, 8, 16],
            reps: 20,
            language: "en".into(),
            selection: Selection::all(),
            seed: 42,
            filler: DEFAULT_FILLER.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Dictionary surfaces with at least one real candidate.
fn surfaces(pipeline: &Pipeline, lang: &str) -> Vec<String> {
    pipeline.resources.mention_dict(lang).map_or_else(
        |_| Vec::new(),
        |d| {
            d.iter()
                .filter(|(_, cs)| cs.iter().any(|c| !is_placeholder(&c.entity_id)))
                .map(|(s, _)| s.to_string())
                .collect()
        },
    )
}

/// Annotates `reps` texts per size after one warm-up run and fits mean
/// total time against size.
pub fn run_bench(pipeline: &Pipeline, opts: &BenchOptions) -> Result<BenchReport, PipelineError> {
    let surfaces = surfaces(pipeline, &opts.language);
    let clock = SystemClock::new();
    let mut buckets = Vec::new();
    for (b, &kb) in opts.sizes_kb.iter().enumerate() {
        let texts: Vec<String> = (0..opts.reps.max(1))
            .map(|r| dense_text(&surfaces, &opts.filler, kb * 1024, opts.seed + (b * 1000 + r) as u64))
            .collect();
        pipeline.annotate(&texts[0], Some(&opts.language), opts.selection, &clock)?;

        let mut total = 0.0;
        let mut entities = 0usize;
        let mut stages: BTreeMap<String, f64> = STAGES.iter().map(|s| (s.to_string(), 0.0)).collect();
        for t in &texts {
            let start = Instant::now();
            let doc = pipeline.annotate(t, Some(&opts.language), opts.selection, &clock)?;
            total += start.elapsed().as_secs_f64() * 1e3;
            entities += doc.entity_annotations.len();
            for (stage, us) in &doc.stage_timings {
                *stages.entry(stage.clone()).or_insert(0.0) += *us as f64 / 1e3;
            }
        }
        let n = texts.len() as f64;
        stages.values_mut().for_each(|v| *v /= n);
        buckets.push(BenchBucket {
            kb: kb as f64,
            bytes: texts.iter().map(String::len).sum::<usize>() / texts.len(),
            reps: texts.len(),
            mean_total_ms: total / n,
            stage_mean_ms: stages,
            mean_entities: entities as f64 / n,
        });
    }

    let xs: Vec<f64> = buckets.iter().map(|b| b.bytes as f64 / 1024.0).collect();
    let ys: Vec<f64> = buckets.iter().map(|b| b.mean_total_ms).collect();
    let fit = linear_fit(&xs, &ys);
    let stage_sum: f64 = buckets.iter().flat_map(|b| b.stage_mean_ms.values()).sum();
    let edl: f64 = buckets
        .iter()
        .flat_map(|b| ["mentions", "edl"].map(|s| b.stage_mean_ms.get(s).copied().unwrap_or(0.0)))
        .sum();
    Ok(BenchReport {
        fit,
        ms_per_kb: fit.map(|f| f.slope),
        edl_share: if stage_sum > 0.0 { edl / stage_sum } else { 0.0 },
        buckets,
    })
}

/// Plain-text table of a report.
pub fn render(report: &BenchReport) -> String {
    let mut out = String::from("kb\tbytes\ttotal_ms");
    for s in STAGES {
        out.push('\t');
        out.push_str(s);
    }
    out.push('\n');
    for b in &report.buckets {
        out.push_str(&format!("{}\t{}\t{:.3}", b.kb, b.bytes, b.mean_total_ms));
        for s in STAGES {
            out.push_str(&format!("\t{:.3}", b.stage_mean_ms.get(s).copied().unwrap_or(0.0)));
        }
        out.push('\n');
    }
    if let Some(f) = report.fit {
        out.push_str(&format!(
            "fit: {:.3} ms/kb + {:.3} ms, R^2 = {:.4}\n",
            f.slope, f.intercept, f.r2
        ));
    }
    out.push_str(&format!("edl share: {:.1}%\n", report.edl_share * 100.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_line() {
        let f = linear_fit(&[1.0, 2.0, 4.0, 8.0], &[5.0, 7.0, 11.0, 19.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
        assert!((f.intercept - 3.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(linear_fit(&[4.0], &[1.0]), None);
        assert_eq!(linear_fit(&[2.0, 2.0], &[1.0, 3.0]), None);
        assert_eq!(linear_fit(&[1.0, 2.0], &[3.0, 3.0]).unwrap().r2, 1.0);
    }

    #[test]
    fn r2_of_known_scatter() {
        // y = x except the last point; oracle values by hand:
        // mean x = 2, mean y = 7/3, sxx = 2, sxy = 3 → slope 1.5, intercept -2/3
        // residuals (1/6, -1/3, 1/6) → ss_res 1/6; ss_tot = 14/3 → R² = 1 - 1/28
        let f = linear_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.intercept + 2.0 / 3.0).abs() < 1e-12);
        assert!((f.r2 - (1.0 - 1.0 / 28.0)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn r2_in_unit_interval(ys in prop::collection::vec(-1e3f64..1e3, 5)) {
            let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
            let f = linear_fit(&xs, &ys).unwrap();
            prop_assert!(f.r2 <= 1.0 + 1e-12 && f.r2 >= -1e-12);
        }
    }
}
