//! Offline dictionary generation from annotated corpora, sharded with rayon.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use annotext_core::builder::{prune_cooccurrence, AnnotatedDoc, BuildReport, CooccurrenceCounts, MentionCounts};
use annotext_core::resources::{CooccurrenceDict, MentionDict, DEFAULT_COOCCUR_MIN_COUNT, DEFAULT_COOCCUR_TOP_K};
use rayon::prelude::*;

use crate::corpus::read_corpus_file;
use crate::store::{write_cooccurrence, write_mention_dict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    /// `None` builds a mention dictionary for every language seen.
    pub lang: Option<String>,
    pub min_count: u64,
    pub top_k: usize,
    pub window: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            lang: None,
            min_count: DEFAULT_COOCCUR_MIN_COUNT,
            top_k: DEFAULT_COOCCUR_TOP_K,
            window: annotext_core::builder::DEFAULT_WINDOW,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub mentions: BTreeMap<String, MentionDict>,
    pub cooccurrence: CooccurrenceDict,
    pub report: BuildReport,
}

/// Raw counts over `docs`, accumulated per shard and merged by summation.
pub fn count(docs: &[AnnotatedDoc], window: usize) -> (MentionCounts, CooccurrenceCounts, u64) {
    docs.par_iter()
        .fold(
            || (MentionCounts::new(), CooccurrenceCounts::new(window), 0u64),
            |(mut m, mut c, bad), d| {
                let ok = m.add(d);
                c.add(d);
                (m, c, bad + u64::from(!ok))
            },
        )
        .reduce(
            || (MentionCounts::new(), CooccurrenceCounts::new(window), 0),
            |(mut m, mut c, b), (m2, c2, b2)| {
                m.merge(m2);
                c.merge(c2);
                (m, c, b + b2)
            },
        )
}

/// Builds mention dictionaries and the pruned co-occurrence dictionary.
/// Co-occurrence is pooled over every language; `already_malformed` counts
/// lines rejected before parsing.
pub fn build(docs: &[AnnotatedDoc], opts: &BuildOptions, already_malformed: u64) -> BuildOutput {
    let start = Instant::now();
    let (mentions, cooc, bad) = count(docs, opts.window);
    let langs: Vec<String> = match &opts.lang {
        Some(l) => vec![l.clone()],
        None => mentions.languages().map(str::to_string).collect(),
    };
    let dicts: BTreeMap<String, MentionDict> = langs.into_iter().map(|l| (l.clone(), mentions.build(&l))).collect();
    let (cooccurrence, pruned) = prune_cooccurrence(&cooc, opts.min_count, opts.top_k);

    let entities: BTreeSet<&str> = dicts
        .values()
        .flat_map(|d| d.iter().flat_map(|(_, cs)| cs.iter().map(|c| c.entity_id.as_str())))
        .collect();
    let report = BuildReport {
        documents: mentions.documents(),
        malformed: bad + already_malformed,
        mentions: mentions.mentions(),
        distinct_surfaces: dicts.values().map(|d| d.len() as u64).sum(),
        entities: entities.len() as u64,
        pairs: cooc.len() as u64,
        pruned,
        wall_time_ms: start.elapsed().as_millis() as u64,
    };
    BuildOutput {
        mentions: dicts,
        cooccurrence,
        report,
    }
}

/// Reads every corpus file and builds. Malformed lines are logged and
/// counted, not fatal.
pub fn build_from_files(paths: &[PathBuf], opts: &BuildOptions) -> io::Result<BuildOutput> {
    let mut docs = Vec::new();
    let mut bad = 0u64;
    for p in paths {
        let c = read_corpus_file(p)?;
        for b in &c.bad {
            tracing::warn!("{}:{}: skipped: {}", p.display(), b.line, b.message);
        }
        bad += c.bad.len() as u64;
        docs.extend(c.docs);
    }
    Ok(build(&docs, opts, bad))
}

/// Writes `mentions.<lang>.tsv`, `cooccurrence.tsv` and `report.json`.
pub fn write_output(out: &BuildOutput, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    for (lang, dict) in &out.mentions {
        write_mention_dict(dict, &dir.join(format!("mentions.{lang}.tsv")))?;
    }
    write_cooccurrence(&out.cooccurrence, &dir.join("cooccurrence.tsv"))?;
    let report = serde_json::to_string_pretty(&out.report).map_err(io::Error::other)?;
    fs::write(dir.join("report.json"), report + "\n")
}
