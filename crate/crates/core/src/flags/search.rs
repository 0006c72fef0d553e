use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{span_variance, AnalysisResult, Method, SearchDiagnostics, VARIANCE_CONVENTION};
use crate::barycentric::SpanBasis;
use crate::error::{Error, Result};
use crate::manifold::Point;

/// Default cap on the number of tuples examined before switching to random sampling.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// A scored index tuple. `score` is the AUV for ordered tuples and the
/// unexplained variance of the full span for subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleCandidate {
    pub indices: Vec<usize>,
    pub levels: Vec<f64>,
    pub score: f64,
}

/// Strictly better: lower score, ties broken by the lexicographically smaller tuple.
pub fn better_candidate(a: &TupleCandidate, b: &TupleCandidate) -> bool {
    a.score < b.score || (a.score == b.score && a.indices < b.indices)
}

fn keep_best(best: &mut Option<TupleCandidate>, cand: TupleCandidate) {
    if best.as_ref().is_none_or(|b| better_candidate(&cand, b)) {
        *best = Some(cand);
    }
}

pub fn n_choose_k(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn n_permute_k(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128)
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut c: Vec<usize> = (0..size).collect();
    loop {
        out.push(c.clone());
        let mut i = size;
        while i > 0 && c[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        c[i - 1] += 1;
        for j in i..size {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// `count` distinct random tuples of `size` distinct indices from `0..n`
/// (sorted when `ordered` is false), uniform without replacement.
pub fn sample_tuples(
    n: usize,
    size: usize,
    count: u64,
    ordered: bool,
    seed: u64,
) -> Vec<Vec<usize>> {
    let total = if ordered {
        n_permute_k(n, size)
    } else {
        n_choose_k(n, size)
    };
    let count = (count as u128).min(total) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut t = rand::seq::index::sample(&mut rng, n, size).into_vec();
        if !ordered {
            t.sort_unstable();
        }
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out
}

fn validate(data: &[Point], k: usize) -> Result<()> {
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

/// Push `data[j]` onto `basis` and score the new span. `Ok(None)` for
/// dependent or focal configurations (counted in `diag`).
fn extend(
    basis: &SpanBasis,
    data: &[Point],
    j: usize,
    diag: &mut SearchDiagnostics,
) -> Result<Option<(SpanBasis, f64)>> {
    let mut b = basis.clone();
    if !b.push(&data[j])? {
        diag.skipped_dependent += 1;
        return Ok(None);
    }
    match span_variance(&b, data) {
        Ok(v) => Ok(Some((b, v))),
        Err(Error::FocalPoint { .. }) => {
            diag.skipped_focal += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Score every prefix of an ordered tuple; `score` is the AUV.
pub fn evaluate_ordered_tuple(
    data: &[Point],
    tuple: &[usize],
    diag: &mut SearchDiagnostics,
) -> Result<Option<TupleCandidate>> {
    let mut basis = SpanBasis::empty(data[0].manifold());
    let mut levels = Vec::with_capacity(tuple.len());
    let mut score = 0.0;
    for &j in tuple {
        match extend(&basis, data, j, diag)? {
            Some((b, v)) => {
                basis = b;
                levels.push(v);
                score += v;
            }
            None => return Ok(None),
        }
    }
    diag.evaluated += 1;
    Ok(Some(TupleCandidate {
        indices: tuple.to_vec(),
        levels,
        score,
    }))
}

/// Score a subset by the unexplained variance of its full span.
pub fn evaluate_subset(
    data: &[Point],
    subset: &[usize],
    diag: &mut SearchDiagnostics,
) -> Result<Option<TupleCandidate>> {
    let mut basis = SpanBasis::empty(data[0].manifold());
    for &j in subset {
        if !basis.push(&data[j])? {
            diag.skipped_dependent += 1;
            return Ok(None);
        }
    }
    match span_variance(&basis, data) {
        Ok(v) => {
            diag.evaluated += 1;
            Ok(Some(TupleCandidate {
                indices: subset.to_vec(),
                levels: alloc::vec![v],
                score: v,
            }))
        }
        Err(Error::FocalPoint { .. }) => {
            diag.skipped_focal += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Greedy forward analysis over the data: start from the sample-limited
/// Fréchet mean and add, one at a time, the point that most reduces the
/// unexplained variance.
pub fn forward_bsa(data: &[Point], k: usize) -> Result<AnalysisResult> {
    validate(data, k)?;
    let mut diag = SearchDiagnostics {
        candidates: data.len() as u128,
        exhaustive: true,
        ..Default::default()
    };
    let mut basis = SpanBasis::empty(data[0].manifold());
    let mut chosen: Vec<usize> = Vec::with_capacity(k + 1);
    let mut levels = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        let mut best: Option<(usize, SpanBasis, f64)> = None;
        for j in 0..data.len() {
            if chosen.contains(&j) {
                continue;
            }
            if let Some((b, v)) = extend(&basis, data, j, &mut diag)? {
                diag.evaluated += 1;
                if best.as_ref().is_none_or(|(_, _, bv)| v < *bv) {
                    best = Some((j, b, v));
                }
            }
        }
        let (j, b, v) = best.ok_or(Error::NoIndependentTuple)?;
        chosen.push(j);
        basis = b;
        levels.push(v);
    }
    let auv = levels.iter().sum();
    Ok(AnalysisResult {
        method: Method::Fbs,
        k,
        reference_indices: chosen,
        per_level_unexplained_variance: levels,
        auv,
        pure_subspace_auv: None,
        diagnostics: diag,
        seed: None,
        budget: None,
        convention: VARIANCE_CONVENTION,
    })
}

/// Order the points of a subset backwards: repeatedly drop the point whose
/// removal leaves the smallest unexplained variance; the last survivor
/// comes first. Returns the order and the prefix variances.
pub fn backward_order(data: &[Point], subset: &[usize]) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut remaining: Vec<usize> = subset.to_vec();
    remaining.sort_unstable();
    let mut removed = Vec::with_capacity(subset.len());
    let mut scratch = SearchDiagnostics::default();
    while remaining.len() > 1 {
        let mut best: Option<(usize, f64)> = None;
        for pos in 0..remaining.len() {
            let rest: Vec<usize> = remaining
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &i)| i)
                .collect();
            if let Some(c) = evaluate_subset(data, &rest, &mut scratch)? {
                if best.is_none_or(|(_, v)| c.score < v) {
                    best = Some((pos, c.score));
                }
            }
        }
        let (pos, _) = best.ok_or(Error::DependentPoints)?;
        removed.push(remaining.remove(pos));
    }
    let mut order = remaining;
    order.extend(removed.into_iter().rev());
    let cand = evaluate_ordered_tuple(data, &order, &mut scratch)?.ok_or(Error::DependentPoints)?;
    Ok((order, cand.levels))
}

/// Turn the best subset of a pure-subspace search into a result, with the
/// per-level curve of its backward ordering.
pub fn pbs_from_subset(
    data: &[Point],
    k: usize,
    best: Option<TupleCandidate>,
    diagnostics: SearchDiagnostics,
    seed: u64,
    budget: u64,
) -> Result<AnalysisResult> {
    let best = best.ok_or(Error::NoIndependentTuple)?;
    let (order, levels) = backward_order(data, &best.indices)?;
    let auv = levels.iter().sum();
    Ok(AnalysisResult {
        method: Method::Pbs,
        k,
        reference_indices: order,
        per_level_unexplained_variance: levels,
        auv,
        pure_subspace_auv: Some((k + 1) as f64 * best.score),
        diagnostics,
        seed: Some(seed),
        budget: Some(budget),
        convention: VARIANCE_CONVENTION,
    })
}

/// Best `(k+1)`-subset of the data for the unexplained variance of its span
/// (k-PBS). Exhaustive when `C(N, k+1) <= budget`, otherwise `budget`
/// random subsets drawn with `seed`.
pub fn optimal_pure_subspace(
    data: &[Point],
    k: usize,
    budget: u64,
    seed: u64,
) -> Result<AnalysisResult> {
    validate(data, k)?;
    let total = n_choose_k(data.len(), k + 1);
    let exhaustive = total <= budget as u128;
    let tuples = if exhaustive {
        subsets(data.len(), k + 1)
    } else {
        sample_tuples(data.len(), k + 1, budget, false, seed)
    };
    let mut diag = SearchDiagnostics {
        candidates: total,
        exhaustive,
        ..Default::default()
    };
    let mut best = None;
    for t in &tuples {
        if let Some(c) = evaluate_subset(data, t, &mut diag)? {
            keep_best(&mut best, c);
        }
    }
    pbs_from_subset(data, k, best, diag, seed, budget)
}

/// Depth-first search over ordered tuples starting with `root`, with prefix
/// spans shared between siblings and branch-and-bound on the partial AUV.
/// The result does not depend on pruning: partial sums only grow and ties
/// resolve to the lexicographically first tuple, which DFS meets first.
pub fn bsa_subtree(
    data: &[Point],
    k: usize,
    root: usize,
    diag: &mut SearchDiagnostics,
) -> Result<Option<TupleCandidate>> {
    let mut best = None;
    let start = SpanBasis::empty(data[0].manifold());
    let Some((basis, v)) = extend(&start, data, root, diag)? else {
        return Ok(None);
    };
    let mut prefix = alloc::vec![root];
    let mut levels = alloc::vec![v];
    dfs(
        data,
        k + 1,
        &basis,
        &mut prefix,
        &mut levels,
        0.0 + v,
        &mut best,
        diag,
    )?;
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    data: &[Point],
    size: usize,
    basis: &SpanBasis,
    prefix: &mut Vec<usize>,
    levels: &mut Vec<f64>,
    partial: f64,
    best: &mut Option<TupleCandidate>,
    diag: &mut SearchDiagnostics,
) -> Result<()> {
    if prefix.len() == size {
        diag.evaluated += 1;
        keep_best(
            best,
            TupleCandidate {
                indices: prefix.clone(),
                levels: levels.clone(),
                score: partial,
            },
        );
        return Ok(());
    }
    for j in 0..data.len() {
        if prefix.contains(&j) {
            continue;
        }
        let Some((b, v)) = extend(basis, data, j, diag)? else {
            continue;
        };
        let p = partial + v;
        if prefix.len() + 1 < size {
            if let Some(bst) = best.as_ref() {
                if p >= bst.score {
                    diag.pruned += 1;
                    continue;
                }
            }
        }
        prefix.push(j);
        levels.push(v);
        dfs(data, size, &b, prefix, levels, p, best, diag)?;
        prefix.pop();
        levels.pop();
    }
    Ok(())
}

/// Assemble a k-BSA result from the winning ordered tuple.
pub fn bsa_result(
    k: usize,
    best: Option<TupleCandidate>,
    diagnostics: SearchDiagnostics,
    seed: u64,
    budget: u64,
) -> Result<AnalysisResult> {
    let best = best.ok_or(Error::NoIndependentTuple)?;
    Ok(AnalysisResult {
        method: Method::Bsa,
        k,
        reference_indices: best.indices,
        per_level_unexplained_variance: best.levels,
        auv: best.score,
        pure_subspace_auv: None,
        diagnostics,
        seed: Some(seed),
        budget: Some(budget),
        convention: VARIANCE_CONVENTION,
    })
}

/// Ordered `(k+1)`-tuple of data points minimising the AUV of its strict
/// flag (k-BSA). Exhaustive when the number of ordered tuples fits in
/// `budget`, otherwise `budget` random ordered tuples drawn with `seed`.
pub fn bsa_flag_search(data: &[Point], k: usize, budget: u64, seed: u64) -> Result<AnalysisResult> {
    validate(data, k)?;
    let total = n_permute_k(data.len(), k + 1);
    let exhaustive = total <= budget as u128;
    let mut diag = SearchDiagnostics {
        candidates: total,
        exhaustive,
        ..Default::default()
    };
    let mut best = None;
    if exhaustive {
        for root in 0..data.len() {
            if let Some(c) = bsa_subtree(data, k, root, &mut diag)? {
                keep_best(&mut best, c);
            }
        }
    } else {
        for t in sample_tuples(data.len(), k + 1, budget, true, seed) {
            if let Some(c) = evaluate_ordered_tuple(data, &t, &mut diag)? {
                keep_best(&mut best, c);
            }
        }
    }
    bsa_result(k, best, diag, seed, budget)
}
