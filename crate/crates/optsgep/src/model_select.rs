//! Sparsity selection: score each candidate k by an information criterion
//! that trades the unexplained part of the kernel's square root against a
//! penalty on the number of active coordinates, then keep the minimizer.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::psd_sqrt;
use crate::problem::SgepProblem;

/// Penalty weight family: γ = 2/n (AIC) or γ = log(n)/n (BIC).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Aic,
    Bic,
}

impl Criterion {
    pub fn gamma(&self, n: usize) -> f64 {
        match self {
            Criterion::Aic => 2.0 / n as f64,
            Criterion::Bic => (n as f64).ln() / n as f64,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Criterion::Aic => "aic",
            Criterion::Bic => "bic",
        }
    }
}

/// Score breakdown for one candidate sparsity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IcResult {
    pub k: usize,
    /// Residual term: Σ_j ‖B⁻¹√A_{·j} − v̂v̂ᵀ√A_{·j}‖_B².
    pub fit: f64,
    /// γ · df.
    pub penalty: f64,
    /// fit + penalty.
    pub score: f64,
    /// Nonzero count of the solution (summed over directions when d > 1).
    pub df: usize,
}

/// Residual-plus-penalty score of one solved direction.
pub fn ic_score(
    problem: &SgepProblem,
    v_hat: &DVector<f64>,
    n: usize,
    criterion: Criterion,
) -> Result<IcResult> {
    if n == 0 {
        return Err(Error::BadSpec("n must be positive".into()));
    }
    let fit = ic_fit_term(problem, v_hat)?;
    let df = v_hat.iter().filter(|&&x| x != 0.0).count();
    let penalty = criterion.gamma(n) * df as f64;
    Ok(IcResult { k: problem.k(), fit, penalty, score: fit + penalty, df })
}

/// The residual term alone: ‖·‖_B² summed over the columns of √A, with
/// B⁻¹ applied through Cholesky solves.
fn ic_fit_term(problem: &SgepProblem, v_hat: &DVector<f64>) -> Result<f64> {
    let s = psd_sqrt(problem.a())?;
    let l = problem.b_chol_l();
    let fwd = l
        .solve_lower_triangular(&s)
        .ok_or(Error::NotPositiveDefinite)?;
    let b_inv_s = l
        .transpose()
        .solve_upper_triangular(&fwd)
        .ok_or(Error::NotPositiveDefinite)?;
    let coeffs = v_hat.transpose() * &s; // 1×p row of v̂ᵀ√A_{·j}
    let resid = b_inv_s - v_hat * coeffs;
    let b_resid = problem.b() * &resid;
    Ok(resid.component_mul(&b_resid).sum())
}

/// Solves the problem for every k in `k_range` through `solve_for_k`
/// (returning the per-direction (problem, direction) pairs), scores each,
/// and returns the minimizer. Ties go to the smaller k.
pub fn select_k<F>(
    mut solve_for_k: F,
    k_range: &[usize],
    n: usize,
    criterion: Criterion,
) -> Result<(usize, Vec<IcResult>)>
where
    F: FnMut(usize) -> Result<Vec<(SgepProblem, DVector<f64>)>>,
{
    if k_range.is_empty() {
        return Err(Error::BadSpec("k_range must be nonempty".into()));
    }
    let mut table = Vec::with_capacity(k_range.len());
    let mut best: Option<(usize, f64)> = None;
    for &k in k_range {
        let pairs = solve_for_k(k)?;
        let mut fit = 0.0;
        let mut df = 0usize;
        for (problem, v) in &pairs {
            fit += ic_fit_term(problem, v)?;
            df += v.iter().filter(|&&x| x != 0.0).count();
        }
        let penalty = criterion.gamma(n) * df as f64;
        let score = fit + penalty;
        table.push(IcResult { k, fit, penalty, score, df });
        if best.is_none_or(|(_, s)| score < s) {
            best = Some((k, score));
        }
    }
    Ok((best.expect("nonempty range").0, table))
}
