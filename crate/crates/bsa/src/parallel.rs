//! Rayon versions of the tuple searches. Every candidate is scored exactly as
//! in the serial code and the best one is chosen with the same total order,
//! so results match the serial searches bit for bit.

use bsa_core::flags::{
    better_candidate, bsa_result, bsa_subtree, evaluate_ordered_tuple, evaluate_subset,
    n_choose_k, n_permute_k, pbs_from_subset, sample_tuples, subsets, AnalysisResult,
    SearchDiagnostics, TupleCandidate,
};
use bsa_core::{Error, Point};
use rayon::prelude::*;

type Scored = bsa_core::Result<(Option<TupleCandidate>, SearchDiagnostics)>;

fn check(data: &[Point], k: usize) -> bsa_core::Result<()> {
    if data.is_empty() {
        return Err(Error::InsufficientData("empty dataset"));
    }
    if data.len() < k + 1 {
        return Err(Error::InsufficientData("fewer data points than k + 1"));
    }
    let m = data[0].manifold();
    if data.iter().any(|p| p.manifold() != m) {
        return Err(Error::ManifoldMismatch);
    }
    Ok(())
}

fn pick(a: Option<TupleCandidate>, b: Option<TupleCandidate>) -> Option<TupleCandidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if better_candidate(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

fn reduce(parts: Vec<Scored>, mut diag: SearchDiagnostics) -> bsa_core::Result<(Option<TupleCandidate>, SearchDiagnostics)> {
    let mut best = None;
    for p in parts {
        let (c, d) = p?;
        diag.merge(&d);
        best = pick(best, c);
    }
    Ok((best, diag))
}

fn score_tuples(
    data: &[Point],
    tuples: &[Vec<usize>],
    ordered: bool,
) -> Vec<Scored> {
    tuples
        .par_chunks(64)
        .map(|chunk| {
            let mut diag = SearchDiagnostics::default();
            let mut best = None;
            for t in chunk {
                let c = if ordered {
                    evaluate_ordered_tuple(data, t, &mut diag)?
                } else {
                    evaluate_subset(data, t, &mut diag)?
                };
                best = pick(best, c);
            }
            Ok((best, diag))
        })
        .collect()
}

/// Parallel k-PBS; same result as [`bsa_core::flags::optimal_pure_subspace`].
pub fn optimal_pure_subspace(data: &[Point], k: usize, budget: u64, seed: u64) -> bsa_core::Result<AnalysisResult> {
    check(data, k)?;
    let total = n_choose_k(data.len(), k + 1);
    let exhaustive = total <= budget as u128;
    let tuples = if exhaustive {
        subsets(data.len(), k + 1)
    } else {
        sample_tuples(data.len(), k + 1, budget, false, seed)
    };
    let diag = SearchDiagnostics {
        candidates: total,
        exhaustive,
        ..Default::default()
    };
    let (best, diag) = reduce(score_tuples(data, &tuples, false), diag)?;
    pbs_from_subset(data, k, best, diag, seed, budget)
}

/// Parallel k-BSA: one task per root of the depth-first search.
pub fn bsa_flag_search(data: &[Point], k: usize, budget: u64, seed: u64) -> bsa_core::Result<AnalysisResult> {
    check(data, k)?;
    let total = n_permute_k(data.len(), k + 1);
    let exhaustive = total <= budget as u128;
    let diag = SearchDiagnostics {
        candidates: total,
        exhaustive,
        ..Default::default()
    };
    let parts: Vec<Scored> = if exhaustive {
        (0..data.len())
            .into_par_iter()
            .map(|root| {
                let mut d = SearchDiagnostics::default();
                let c = bsa_subtree(data, k, root, &mut d)?;
                Ok((c, d))
            })
            .collect()
    } else {
        let tuples = sample_tuples(data.len(), k + 1, budget, true, seed);
        score_tuples(data, &tuples, true)
    };
    let (best, diag) = reduce(parts, diag)?;
    bsa_result(k, best, diag, seed, budget)
}
