//! Character n-gram naive Bayes language identification.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Additive smoothing constant.
pub const SMOOTHING: f64 = 0.5;
/// Longest n-gram order.
pub const MAX_ORDER: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LangIdError {
    #[error("no training text for language {0:?}")]
    EmptyCorpus(String),
    #[error("text is empty")]
    EmptyText,
    #[error("no language profiles loaded")]
    NoProfiles,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    pub lang: String,
    pub log_prior: f64,
    /// `tables[n - 1]` maps n-grams of order `n` to log probability.
    pub tables: [BTreeMap<String, f64>; MAX_ORDER],
    /// Log probability of any n-gram of order `n` absent from the table.
    pub unseen: [f64; MAX_ORDER],
}

impl LanguageProfile {
    /// Sum of log likelihoods of every n-gram in `text`.
    pub fn log_likelihood(&self, text: &str) -> f64 {
        let mut total = 0.0;
        for_each_ngram(text, |order, gram| {
            total += self.tables[order - 1]
                .get(gram)
                .copied()
                .unwrap_or(self.unseen[order - 1]);
        });
        total
    }
}

/// Lowercase, letters only, single-spaced, padded with one space each side.
fn prepare(text: &str) -> Vec<char> {
    let mut out = Vec::with_capacity(text.len() + 2);
    out.push(' ');
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphabetic() {
            out.push(c);
        } else if out.last() != Some(&' ') {
            out.push(' ');
        }
    }
    if out.last() != Some(&' ') {
        out.push(' ');
    }
    out
}

fn for_each_ngram(text: &str, mut f: impl FnMut(usize, &str)) {
    let chars = prepare(text);
    let mut buf = String::new();
    for order in 1..=MAX_ORDER {
        for w in chars.windows(order) {
            if w.iter().all(|&c| c == ' ') {
                continue;
            }
            buf.clear();
            buf.extend(w.iter());
            f(order, &buf);
        }
    }
}

/// Trains one profile per language from sample documents.
///
/// Probabilities use add-α smoothing over the union vocabulary of all
/// languages plus one bucket for never-seen n-grams, so each order sums to
/// one. Languages get a uniform prior.
pub fn train_language_profiles(
    samples: &BTreeMap<String, Vec<String>>,
) -> Result<Vec<LanguageProfile>, LangIdError> {
    let mut counts: BTreeMap<&str, [BTreeMap<String, u64>; MAX_ORDER]> = BTreeMap::new();
    let mut vocab: [BTreeSet<String>; MAX_ORDER] = Default::default();

    for (lang, docs) in samples {
        let mut per_order: [BTreeMap<String, u64>; MAX_ORDER] = Default::default();
        for doc in docs {
            for_each_ngram(doc, |order, gram| {
                *per_order[order - 1].entry(gram.to_string()).or_insert(0) += 1;
            });
        }
        if per_order[0].is_empty() {
            return Err(LangIdError::EmptyCorpus(lang.clone()));
        }
        for (order, table) in per_order.iter().enumerate() {
            vocab[order].extend(table.keys().cloned());
        }
        counts.insert(lang.as_str(), per_order);
    }

    let log_prior = libm::log(1.0 / counts.len().max(1) as f64);
    let profiles = counts
        .into_iter()
        .map(|(lang, per_order)| {
            let mut tables: [BTreeMap<String, f64>; MAX_ORDER] = Default::default();
            let mut unseen = [0.0; MAX_ORDER];
            for order in 0..MAX_ORDER {
                let total: u64 = per_order[order].values().sum();
                let denom = total as f64 + SMOOTHING * (vocab[order].len() as f64 + 1.0);
                unseen[order] = libm::log(SMOOTHING / denom);
                for (gram, &c) in &per_order[order] {
                    tables[order].insert(gram.clone(), libm::log((c as f64 + SMOOTHING) / denom));
                }
            }
            LanguageProfile {
                lang: lang.to_string(),
                log_prior,
                tables,
                unseen,
            }
        })
        .collect();
    Ok(profiles)
}

/// Posterior probability of every profile's language, in profile order.
pub fn language_posteriors(
    text: &str,
    profiles: &[LanguageProfile],
) -> Result<Vec<(String, f64)>, LangIdError> {
    if profiles.is_empty() {
        return Err(LangIdError::NoProfiles);
    }
    if text.trim().is_empty() {
        return Err(LangIdError::EmptyText);
    }
    let scores: Vec<f64> = profiles
        .iter()
        .map(|p| p.log_prior + p.log_likelihood(text))
        .collect();
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let norm: f64 = scores.iter().map(|s| libm::exp(s - max)).sum();
    let log_norm = max + libm::log(norm);
    Ok(profiles
        .iter()
        .zip(scores)
        .map(|(p, s)| (p.lang.clone(), libm::exp(s - log_norm)))
        .collect())
}

/// Most probable language and its posterior.
pub fn detect_language(text: &str, profiles: &[LanguageProfile]) -> Result<(String, f64), LangIdError> {
    let posteriors = language_posteriors(text, profiles)?;
    let mut best = 0;
    for (i, (_, p)) in posteriors.iter().enumerate() {
        if *p > posteriors[best].1 {
            best = i;
        }
    }
    Ok(posteriors.into_iter().nth(best).expect("non-empty"))
}
