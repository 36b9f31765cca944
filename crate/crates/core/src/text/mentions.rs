use alloc::string::String;
use alloc::vec::Vec;

use crate::doc::{CandidateEntity, Mention, ResolutionPass, SentenceSpan, Token, MAX_MENTION_TOKENS};
use crate::resources::MentionDict;

/// Greedy longest-match mention extraction within one sentence.
///
/// At each token try the longest n-gram first (up to six tokens, or the
/// dictionary's longest surface) and take the first dictionary hit, then
/// continue after it; on a miss move one token right.
pub fn extract_mentions(
    tokens: &[Token],
    sentence: SentenceSpan,
    dict: &MentionDict,
    original: &[char],
) -> Vec<Mention> {
    let max_n = MAX_MENTION_TOKENS.min(dict.longest_surface().max(1));
    let mut out = Vec::new();
    let mut key = String::new();
    let mut ends: Vec<usize> = Vec::with_capacity(max_n);
    let mut i = sentence.token_start;

    while i < sentence.token_end {
        let upto = (i + max_n).min(sentence.token_end);
        key.clear();
        ends.clear();
        for (k, t) in tokens[i..upto].iter().enumerate() {
            if k > 0 {
                key.push(' ');
            }
            key.push_str(&t.normalized);
            ends.push(key.len());
        }

        let hit = (1..=ends.len()).rev().find_map(|n| {
            let cands = dict.get(&key[..ends[n - 1]]);
            (!cands.is_empty()).then_some((n, cands))
        });

        match hit {
            Some((n, cands)) => {
                let first = &tokens[i];
                let last = &tokens[i + n - 1];
                out.push(Mention {
                    token_start: i,
                    token_end: i + n,
                    surface: original[first.char_start..last.char_end].iter().collect(),
                    candidates: cands
                        .iter()
                        .map(|c| CandidateEntity::new(c.entity_id.clone(), c.prior))
                        .collect(),
                    resolved: None,
                    resolution_pass: ResolutionPass::Unresolved,
                });
                i += n;
            }
            None => i += 1,
        }
    }
    out
}
