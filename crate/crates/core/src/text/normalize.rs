use alloc::string::String;
use alloc::vec::Vec;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::char::{compose, decompose_canonical, is_combining_mark};

/// Normalized text plus the mapping back to the original.
///
/// Every normalized character comes from exactly one original character,
/// so `origin` is strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub text: String,
    /// `origin[i]` is the original char index of normalized char `i`.
    pub origin: Vec<usize>,
    pub original_len: usize,
}

impl Normalized {
    pub fn chars(&self) -> Vec<char> {
        self.text.chars().collect()
    }

    /// Original `[start, end)` char span covering normalized chars `[start, end)`.
    pub fn original_span(&self, start: usize, end: usize) -> (usize, usize) {
        debug_assert!(start < end);
        (self.origin[start], self.origin[end - 1] + 1)
    }
}

fn is_non_ascii_punctuation(c: char) -> bool {
    !c.is_ascii()
        && matches!(
            get_general_category(c),
            GeneralCategory::ConnectorPunctuation
                | GeneralCategory::DashPunctuation
                | GeneralCategory::OpenPunctuation
                | GeneralCategory::ClosePunctuation
                | GeneralCategory::InitialPunctuation
                | GeneralCategory::FinalPunctuation
                | GeneralCategory::OtherPunctuation
        )
}

fn is_blank(c: char) -> bool {
    c.is_whitespace()
        || matches!(
            get_general_category(c),
            GeneralCategory::Control | GeneralCategory::Format
        )
}

/// Script-specific punctuation that carries sentence or word structure and is
/// mapped to its ASCII counterpart instead of being blanked.
fn ascii_equivalent(c: char) -> Option<char> {
    Some(match c {
        '\u{2019}' | '\u{2018}' | '\u{02BC}' => '\'',
        '\u{061F}' | '\u{FF1F}' => '?',
        '\u{FF01}' => '!',
        '\u{3002}' | '\u{2026}' | '\u{06D4}' => '.',
        _ => return None,
    })
}

/// Folds accents off one character, keeping scripts whose canonical
/// decomposition is not "base + marks" (e.g. Hangul) intact.
fn fold(c: char) -> Option<char> {
    let mut acc: Option<char> = None;
    let mut extra = false;
    decompose_canonical(c, |d| {
        if is_combining_mark(d) {
            return;
        }
        acc = match acc {
            None => Some(d),
            Some(a) => match compose(a, d) {
                Some(x) => Some(x),
                None => {
                    extra = true;
                    Some(a)
                }
            },
        };
    });
    if extra {
        // Multiple bases that do not recompose; keep the original.
        return Some(c);
    }
    acc
}

/// Accent folding, non-ASCII punctuation to spaces, whitespace collapsing.
/// Case is preserved; sentence breaking depends on it.
pub fn normalize_text(text: &str) -> Normalized {
    let mut out = String::with_capacity(text.len());
    let mut origin = Vec::with_capacity(text.len());
    let mut pending_space: Option<usize> = None;
    let mut n = 0usize;

    for (i, c) in text.chars().enumerate() {
        n = i + 1;
        let mapped = if c.is_ascii() {
            if c.is_ascii_control() || c == ' ' {
                None
            } else {
                Some(c)
            }
        } else if let Some(a) = ascii_equivalent(c) {
            Some(a)
        } else if is_blank(c) || is_non_ascii_punctuation(c) {
            None
        } else if is_combining_mark(c) {
            continue;
        } else {
            match fold(c) {
                Some(f) => Some(f),
                None => continue,
            }
        };
        match mapped {
            None => {
                if pending_space.is_none() {
                    pending_space = Some(i);
                }
            }
            Some(ch) => {
                if let Some(sp) = pending_space.take() {
                    if !out.is_empty() {
                        out.push(' ');
                        origin.push(sp);
                    }
                }
                out.push(ch);
                origin.push(i);
            }
        }
    }
    Normalized {
        text: out,
        origin,
        original_len: n,
    }
}
