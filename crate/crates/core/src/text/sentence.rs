use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// Abbreviations used when a language ships no list of its own.
pub const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "mr.", "mrs.", "ms.", "dr.", "prof.", "inc.", "ltd.", "co.", "corp.", "vs.", "etc.", "e.g.",
    "i.e.", "jr.", "sr.", "st.", "mt.", "no.", "u.s.", "a.m.", "p.m.", "approx.", "dept.",
];

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '}')
}

fn is_abbreviation(word: &str, abbreviations: Option<&BTreeSet<String>>) -> bool {
    let lower = word.to_lowercase();
    match abbreviations {
        Some(set) => set.contains(&lower),
        None => DEFAULT_ABBREVIATIONS.contains(&lower.as_str()),
    }
}

/// Splits normalized text into sentence char spans `[start, end)`.
///
/// A run of `.`, `!` or `?` (plus trailing closing quotes or brackets) ends a
/// sentence when followed by end of text, or by a space and a character that
/// is not lowercase. A lone period after a listed abbreviation or a single
/// capital initial does not.
pub fn break_sentences(
    normalized: &[char],
    abbreviations: Option<&BTreeSet<String>>,
) -> Vec<(usize, usize)> {
    let len = normalized.len();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;

    while i < len {
        if !is_terminator(normalized[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < len && is_terminator(normalized[j]) {
            j += 1;
        }
        let lone_period = j - i == 1 && normalized[i] == '.';
        while j < len && is_closer(normalized[j]) {
            j += 1;
        }

        let at_end = j == len;
        let before_capital = j + 1 < len && normalized[j] == ' ' && !normalized[j + 1].is_lowercase();
        let mut boundary = at_end || before_capital;

        if boundary && lone_period && !at_end {
            let word_start = normalized[..i]
                .iter()
                .rposition(|&c| c == ' ')
                .map_or(start, |p| p + 1);
            let word: String = normalized[word_start..=i].iter().collect();
            let initial = i - word_start == 1 && normalized[word_start].is_uppercase();
            if initial || is_abbreviation(&word, abbreviations) {
                boundary = false;
            }
        }

        if boundary {
            spans.push((start, j));
            start = j;
            while start < len && normalized[start] == ' ' {
                start += 1;
            }
            i = start;
        } else {
            i = j;
        }
    }
    if start < len {
        spans.push((start, len));
    }
    spans
}
