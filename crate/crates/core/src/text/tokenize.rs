use alloc::string::String;
use alloc::vec::Vec;

use super::normalize::{normalize_text, Normalized};
use crate::doc::Token;

fn joins_word(prev: char, c: char, next: char) -> bool {
    match c {
        '\'' | '-' => prev.is_alphanumeric() && next.is_alphanumeric(),
        '.' | ',' => prev.is_ascii_digit() && next.is_ascii_digit(),
        _ => false,
    }
}

/// Token spans `[start, end)` over normalized chars `[from, to)`.
///
/// Whitespace separates chunks. A chunk without letters or digits (an
/// emoticon, "...") is one token; otherwise alphanumeric runs joined by
/// intra-word apostrophes, hyphens, or decimal separators form words and
/// every remaining character stands alone.
pub fn token_spans(chars: &[char], from: usize, to: usize) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut i = from;
    while i < to {
        if chars[i] == ' ' {
            i += 1;
            continue;
        }
        let mut chunk_end = i;
        while chunk_end < to && chars[chunk_end] != ' ' {
            chunk_end += 1;
        }
        if !chars[i..chunk_end].iter().any(|c| c.is_alphanumeric()) {
            spans.push((i, chunk_end));
            i = chunk_end;
            continue;
        }
        while i < chunk_end {
            if chars[i].is_alphanumeric() {
                let mut j = i + 1;
                while j < chunk_end {
                    if chars[j].is_alphanumeric() {
                        j += 1;
                    } else if j + 1 < chunk_end && joins_word(chars[j - 1], chars[j], chars[j + 1]) {
                        j += 2;
                    } else {
                        break;
                    }
                }
                spans.push((i, j));
                i = j;
            } else {
                spans.push((i, i + 1));
                i += 1;
            }
        }
    }
    spans
}

/// Tokenizes normalized chars `[from, to)`, mapping each token back onto
/// `original` through the normalization offsets.
pub fn tokenize(
    normalized: &Normalized,
    normalized_chars: &[char],
    original: &[char],
    from: usize,
    to: usize,
) -> Vec<Token> {
    token_spans(normalized_chars, from, to)
        .into_iter()
        .map(|(a, b)| {
            let (start, end) = normalized.original_span(a, b);
            let folded: String = normalized_chars[a..b].iter().collect();
            Token {
                surface: original[start..end].iter().collect(),
                char_start: start,
                char_end: end,
                normalized: folded.to_lowercase(),
            }
        })
        .collect()
}

/// Lowercased, accent-folded word list for free text (a mention, a display
/// name). This is the key space every dictionary lookup uses.
pub fn normalized_words(text: &str) -> Vec<String> {
    let n = normalize_text(text);
    let chars = n.chars();
    token_spans(&chars, 0, chars.len())
        .into_iter()
        .map(|(a, b)| chars[a..b].iter().collect::<String>().to_lowercase())
        .collect()
}

/// Dictionary key for a surface: its normalized words joined by one space.
pub fn surface_key(text: &str) -> String {
    normalized_words(text).join(" ")
}
