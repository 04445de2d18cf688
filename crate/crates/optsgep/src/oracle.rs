//! Exhaustive-enumeration exact solver, used as ground truth when testing
//! the branch-and-bound engine and its bounds. Correctness scaffolding, not
//! built for speed.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::restricted_gen_eig_max;
use crate::problem::SgepProblem;

/// Exact SGEP optimum by enumerating every support of size exactly k in
/// lexicographic order. Enlarging a support never decreases the restricted
/// maximum, so size-k supports suffice. Ties keep the lexicographically
/// smallest support.
///
/// Guarded by C(p, k) ≤ 10^6 against accidental huge enumerations.
pub fn brute_force(problem: &SgepProblem) -> Result<(f64, DVector<f64>, Vec<usize>)> {
    let p = problem.dim();
    let k = problem.k();
    if binomial(p, k) > 1_000_000 {
        return Err(Error::TooLarge { p, k });
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_vec = DVector::zeros(p);
    let mut best_support = Vec::new();
    let mut support: Vec<usize> = (0..k).collect();
    loop {
        let (value, v) = restricted_gen_eig_max(problem.a(), problem.b(), &support)?;
        if value > best_value {
            best_value = value;
            best_vec = v;
            best_support = support.clone();
        }
        if !next_combination(&mut support, p) {
            break;
        }
    }
    Ok((best_value, best_vec, best_support))
}

/// Exact optimum over supports w with l ≤ w ≤ u and ∑w = k. Used by the
/// bound-soundness tests to compute per-node optima.
pub fn brute_force_node(
    problem: &SgepProblem,
    node: &crate::problem::Node,
) -> Result<(f64, Vec<usize>)> {
    let k = problem.k();
    let forced = node.forced();
    let free = node.free();
    if forced.len() > k || forced.len() + free.len() < k {
        return Err(Error::EmptySupport);
    }
    let room = k - forced.len();
    if binomial(free.len(), room) > 1_000_000 {
        return Err(Error::TooLarge { p: free.len(), k: room });
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_support = Vec::new();
    let mut pick: Vec<usize> = (0..room).collect();
    loop {
        let mut support = forced.clone();
        support.extend(pick.iter().map(|&slot| free[slot]));
        support.sort_unstable();
        let (value, _) = restricted_gen_eig_max(problem.a(), problem.b(), &support)?;
        if value > best_value {
            best_value = value;
            best_support = support;
        }
        if room == 0 || !next_combination(&mut pick, free.len()) {
            break;
        }
    }
    Ok((best_value, best_support))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out: u128 = 1;
    for i in 0..k {
        out = out * (n - i) as u128 / (i + 1) as u128;
        if out > 10_000_000 {
            return out; // already past any guard we use
        }
    }
    out
}

/// Advances `idx` to the next k-combination of {0, …, n−1} in lexicographic
/// order; returns false once exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
