//! Text stages ahead of disambiguation: language identification,
//! normalization, sentence breaking, tokenization and mention extraction.

mod langid;
mod mentions;
mod normalize;
mod sentence;
mod tokenize;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub use langid::{
    detect_language, language_posteriors, train_language_profiles, LangIdError, LanguageProfile,
    MAX_ORDER, SMOOTHING,
};
pub use mentions::extract_mentions;
pub use normalize::{normalize_text, Normalized};
pub use sentence::{break_sentences, DEFAULT_ABBREVIATIONS};
pub use tokenize::{normalized_words, surface_key, token_spans, tokenize};

use crate::doc::{SentenceSpan, Token};

/// Tokens and sentences of one text.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub normalized: Normalized,
    pub tokens: Vec<Token>,
    pub sentences: Vec<SentenceSpan>,
}

/// Normalizes, splits into sentences and tokenizes. Sentences that produce
/// no tokens are dropped so the sentence list partitions the tokens.
pub fn analyze(text: &str, abbreviations: Option<&BTreeSet<String>>) -> Analysis {
    let original: Vec<char> = text.chars().collect();
    let normalized = normalize_text(text);
    let nchars = normalized.chars();
    let mut tokens = Vec::new();
    let mut sentences = Vec::new();
    for (from, to) in break_sentences(&nchars, abbreviations) {
        let start = tokens.len();
        tokens.extend(tokenize(&normalized, &nchars, &original, from, to));
        if tokens.len() > start {
            sentences.push(SentenceSpan {
                token_start: start,
                token_end: tokens.len(),
            });
        }
    }
    Analysis {
        normalized,
        tokens,
        sentences,
    }
}
