use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{EdlConfig, EdlError};
use crate::doc::{is_placeholder, CandidateEntity, Mention, ResolutionPass};

/// Which first-pass rule resolved a mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EasyRule {
    /// Lone candidate.
    Single,
    /// Two candidates, one of them NIL/MISC, max prior above λ1.
    NilPair,
    /// Three or more candidates, max prior above λ2.
    Dominant,
}

fn by_prior(a: &CandidateEntity, b: &CandidateEntity) -> Ordering {
    b.prior
        .total_cmp(&a.prior)
        .then_with(|| a.entity_id.cmp(&b.entity_id))
}

/// The rule that makes `candidates` easy, with the index of the winner.
pub fn easy_rule(candidates: &[CandidateEntity], config: &EdlConfig) -> Option<(EasyRule, usize)> {
    let top = (0..candidates.len()).min_by(|&i, &j| by_prior(&candidates[i], &candidates[j]))?;
    let max_prior = candidates[top].prior;
    match candidates.len() {
        1 => Some((EasyRule::Single, 0)),
        2 if candidates.iter().any(CandidateEntity::is_placeholder) && max_prior > config.lambda1 => {
            Some((EasyRule::NilPair, top))
        }
        n if n >= 3 && max_prior > config.lambda2 => Some((EasyRule::Dominant, top)),
        _ => None,
    }
}

/// Resolves easy mentions in place and marks them EASY; the rest keep
/// `resolution_pass = Unresolved` for the second pass.
pub fn first_pass(mentions: &mut [Mention], config: &EdlConfig) {
    for m in mentions.iter_mut() {
        if let Some((_, i)) = easy_rule(&m.candidates, config) {
            m.resolved = Some(m.candidates[i].entity_id.clone());
            m.resolution_pass = ResolutionPass::Easy;
        }
    }
}

fn score_of(c: &CandidateEntity) -> f64 {
    c.score.unwrap_or(0.0)
}

/// Candidate indices by score descending, then prior descending, then id.
pub fn rank_candidates(candidates: &[CandidateEntity]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&candidates[i], &candidates[j]);
        score_of(b).total_cmp(&score_of(a)).then_with(|| by_prior(a, b))
    });
    order
}

/// Picks one candidate (returned as an index) from labeled, scored
/// candidates. A NIL/MISC winner gives way to the runner-up when it leads by
/// less than `lambda3`.
pub fn final_disambiguation(candidates: &[CandidateEntity], lambda3: f64) -> Result<usize, EdlError> {
    if candidates.is_empty() {
        return Err(EdlError::NoCandidates);
    }
    let ranked = rank_candidates(candidates);
    let trues: Vec<usize> = ranked
        .iter()
        .copied()
        .filter(|&i| candidates[i].label == Some(true))
        .collect();
    let pool = match trues.len() {
        1 => return Ok(trues[0]),
        0 => ranked,
        _ => trues,
    };
    let first = &candidates[pool[0]];
    match pool.get(1) {
        Some(&next) if is_placeholder(&first.entity_id) && score_of(first) - score_of(&candidates[next]) < lambda3 => {
            Ok(next)
        }
        _ => Ok(pool[0]),
    }
}
