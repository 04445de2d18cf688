//! Problem, node, and result types shared by the solver, the bounds, and
//! the front-ends. Everything is immutable after construction.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, EigPair};

/// A validated sparse generalized eigenvalue problem
///
///   max vᵀAv  s.t.  vᵀBv = 1,  ‖v‖₀ ≤ k
///
/// with A symmetric PSD, B symmetric PD, together with the spectral caches
/// the bound computations rely on.
#[derive(Debug, Clone)]
pub struct SgepProblem {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    k: usize,
    epsilon: f64,
    b_spectrum: EigPair,
    b_chol_l: DMatrix<f64>,
    b_sqrt: DMatrix<f64>,
    big_m: DVector<f64>,
    m_max: f64,
    pencil_value: f64,
    pencil_vector: DVector<f64>,
}

impl SgepProblem {
    /// Validates (A, B, k, ε) and precomputes the spectral caches.
    ///
    /// Inputs are symmetrized by (M + Mᵀ)/2 before the checks so round-off
    /// in user-supplied files does not reject otherwise valid problems.
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, k: usize, epsilon: f64) -> Result<Self> {
        if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        let p = a.nrows();
        if k < 1 || k > p {
            return Err(Error::BadSparsity { k, p });
        }
        if epsilon < 0.0 {
            return Err(Error::NegativeTolerance(epsilon));
        }
        let a = linalg::symmetrize(&a);
        let b = linalg::symmetrize(&b);

        // PD certificate for B; Cholesky failure is the rejection path.
        let b_chol_l = linalg::chol(&b)?;
        let b_spectrum = linalg::sym_eig(&b)?;
        let lambda_min_b = b_spectrum.min_value();
        if lambda_min_b <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }

        // A must be PSD up to round-off.
        let a_spectrum = linalg::sym_eig(&a)?;
        let a_norm = a_spectrum.spectral_norm();
        if a_spectrum.min_value() < -1e-8 * a_norm.max(1.0) {
            return Err(Error::NotPsd(a_spectrum.min_value()));
        }

        // B^{1/2} from the already-computed spectrum.
        let roots = b_spectrum.values.map(|x| x.max(0.0).sqrt());
        let b_sqrt = linalg::symmetrize(
            &(&b_spectrum.vectors * DMatrix::from_diagonal(&roots) * b_spectrum.vectors.transpose()),
        );

        // Any v with vᵀBv = 1 satisfies |v_i| ≤ 1/√λ_min(B).
        let m_max = 1.0 / lambda_min_b.sqrt();
        let big_m = DVector::from_element(p, m_max);

        let (pencil_value, pencil_vector) = linalg::gen_eig_max(&a, &b)?;

        Ok(Self {
            a,
            b,
            k,
            epsilon,
            b_spectrum,
            b_chol_l,
            b_sqrt,
            big_m,
            m_max,
            pencil_value,
            pencil_vector,
        })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Eigenvalues (descending) and eigenvectors of B.
    pub fn b_spectrum(&self) -> &EigPair {
        &self.b_spectrum
    }

    pub fn lambda_min_b(&self) -> f64 {
        self.b_spectrum.min_value()
    }

    /// Spectral norm of B.
    pub fn b_norm(&self) -> f64 {
        self.b_spectrum.max_value()
    }

    pub fn b_chol_l(&self) -> &DMatrix<f64> {
        &self.b_chol_l
    }

    pub fn b_sqrt(&self) -> &DMatrix<f64> {
        &self.b_sqrt
    }

    /// Per-coordinate box bounds; all equal to `m_max`.
    pub fn big_m(&self) -> &DVector<f64> {
        &self.big_m
    }

    pub fn m_max(&self) -> f64 {
        self.m_max
    }

    /// λ_max(A, B) of the unrestricted pencil.
    pub fn pencil_max_value(&self) -> f64 {
        self.pencil_value
    }

    /// Top generalized eigenvector of the unrestricted pencil (B-normalized).
    pub fn pencil_max_vector(&self) -> &DVector<f64> {
        &self.pencil_vector
    }

    /// vᵀAv.
    pub fn objective(&self, v: &DVector<f64>) -> f64 {
        linalg::quad_form(&self.a, v)
    }

    /// vᵀBv.
    pub fn b_quad(&self, v: &DVector<f64>) -> f64 {
        linalg::quad_form(&self.b, v)
    }
}

/// A branch-and-bound subproblem: binary bounds l ≤ w ≤ u on the support
/// vector, plus cached bounds once computed.
#[derive(Debug, Clone)]
pub struct Node {
    pub l: Vec<bool>,
    pub u: Vec<bool>,
    /// Cached upper bound on the node optimum.
    pub upper: f64,
    /// Cached lower bound (objective of `incumbent`).
    pub lower: f64,
    /// Feasible vector achieving `lower`, once bounds are computed.
    pub incumbent: Option<DVector<f64>>,
    /// Creation order index; used for recency and tie-breaking.
    pub created: u64,
    /// Cached restricted-pencil bound; depends on `u` only, so children
    /// that fix a coordinate in inherit it unchanged.
    pub ub1: f64,
}

impl Node {
    /// Root node: nothing forced in, nothing forced out.
    pub fn root(p: usize) -> Self {
        Node {
            l: vec![false; p],
            u: vec![true; p],
            upper: f64::INFINITY,
            lower: f64::NEG_INFINITY,
            incumbent: None,
            created: 0,
            ub1: f64::INFINITY,
        }
    }

    pub fn sum_l(&self) -> usize {
        self.l.iter().filter(|&&x| x).count()
    }

    pub fn sum_u(&self) -> usize {
        self.u.iter().filter(|&&x| x).count()
    }

    /// The feasible set is nonempty iff ∑l ≤ k ≤ ∑u.
    pub fn is_feasible(&self, k: usize) -> bool {
        self.sum_l() <= k && self.sum_u() >= k
    }

    /// Terminal nodes have ∑l ≥ k and ∑u ≤ k; together with nonemptiness
    /// this pins the support down completely.
    pub fn is_terminal(&self, k: usize) -> bool {
        self.sum_l() >= k && self.sum_u() <= k
    }

    /// A feasible node whose support is already forced to a single set:
    /// either the forced-in coordinates fill the budget (∑l = k, so w = l)
    /// or the allowed set is down to the budget (∑u = k, so w = u). Such
    /// subproblems are plain restricted eigenproblems; branching them
    /// further only walks the remaining free coordinates one by one.
    pub fn support_pinned(&self, k: usize) -> Option<Vec<usize>> {
        let sum_l = self.sum_l();
        let sum_u = self.sum_u();
        if sum_l > k || sum_u < k {
            return None; // infeasible
        }
        if sum_l == k {
            Some(self.forced())
        } else if sum_u == k {
            Some(self.allowed())
        } else {
            None
        }
    }

    /// Indices with u_i = 1.
    pub fn allowed(&self) -> Vec<usize> {
        (0..self.u.len()).filter(|&i| self.u[i]).collect()
    }

    /// Indices with l_i = 1.
    pub fn forced(&self) -> Vec<usize> {
        (0..self.l.len()).filter(|&i| self.l[i]).collect()
    }

    /// Indices with l_i = 0 and u_i = 1.
    pub fn free(&self) -> Vec<usize> {
        (0..self.l.len()).filter(|&i| !self.l[i] && self.u[i]).collect()
    }

    /// Child with coordinate `i` fixed to `val` in both bound vectors.
    pub fn child(&self, i: usize, val: bool, created: u64) -> Self {
        let mut l = self.l.clone();
        let mut u = self.u.clone();
        l[i] = val;
        u[i] = val;
        Node {
            l,
            u,
            upper: f64::INFINITY,
            lower: f64::NEG_INFINITY,
            incumbent: None,
            created,
            ub1: if val { self.ub1 } else { f64::INFINITY },
        }
    }
}

/// Why the search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolverStatus {
    /// The incumbent is provably the exact optimum (gap closed to zero).
    Optimal,
    /// The gap dropped below ε with active nodes remaining.
    GapReached,
    NodeLimit,
    TimeLimit,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolverStatus::Optimal => "Optimal",
            SolverStatus::GapReached => "GapReached",
            SolverStatus::NodeLimit => "NodeLimit",
            SolverStatus::TimeLimit => "TimeLimit",
        };
        f.write_str(s)
    }
}

/// Solution with its optimality certificate.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub v_hat: DVector<f64>,
    /// v̂ᵀAv̂, the certified lower bound.
    pub objective: f64,
    /// Best remaining upper bound at termination.
    pub global_upper: f64,
    pub gap: f64,
    pub nodes_explored: u64,
    /// Seconds until the final incumbent was first found.
    pub time_to_lower: f64,
    /// Seconds until termination.
    pub time_to_upper: f64,
    pub status: SolverStatus,
}

impl Certificate {
    /// Support of the solution as 0-based indices.
    pub fn support(&self) -> Vec<usize> {
        (0..self.v_hat.len()).filter(|&i| self.v_hat[i] != 0.0).collect()
    }
}

/// Branching heuristics of the search (free set I = {i : l_i = 0, u_i = 1}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branching {
    /// Uniform over I.
    Random,
    /// argmax A_ii / B_ii over I.
    DiagRatio,
    /// Largest |loading| of the top eigenvector of the pencil restricted to I.
    RestrictedEig,
    /// Largest |entry| of the cached full-pencil top eigenvector over I.
    GlobalEig,
}

/// Knobs of the branch-and-bound search. `Default` matches the recommended
/// settings: GlobalEig branching, MaxDepth 200, two Rifle steps and one
/// ADMM step per node.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Active-node count above which node selection switches from
    /// best-first to depth-first.
    pub max_depth: usize,
    pub branching: Branching,
    /// Rifle iterations per lower-bound evaluation.
    pub n1: usize,
    /// ADMM iterations warm-starting Rifle.
    pub n2: usize,
    /// Rifle step size.
    pub eta: f64,
    pub node_limit: Option<u64>,
    /// Wall-clock cap in seconds.
    pub time_limit: Option<f64>,
    /// Seed for Random branching.
    pub seed: u64,
    /// Soft-threshold level of the ADMM lasso step; `None` picks
    /// √(ln p / p), the sample-size-free fallback. Front-ends that know the
    /// sample size n set √(ln p / n) instead.
    pub zeta: Option<f64>,
    /// ADMM penalty parameter.
    pub nu: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_depth: 200,
            branching: Branching::GlobalEig,
            n1: 2,
            n2: 1,
            eta: 0.01,
            node_limit: None,
            time_limit: None,
            seed: 0,
            zeta: None,
            nu: 1.0,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_depth < 1 {
            return Err(Error::BadSpec("max_depth must be >= 1".into()));
        }
        if self.n1 < 1 {
            return Err(Error::BadSpec("n1 must be >= 1".into()));
        }
        if self.eta <= 0.0 {
            return Err(Error::BadSpec("eta must be > 0".into()));
        }
        Ok(())
    }

    /// ζ used by the ADMM initializer for a problem of dimension `p`.
    pub fn zeta_for(&self, p: usize) -> f64 {
        self.zeta.unwrap_or_else(|| ((p as f64).ln() / p as f64).sqrt())
    }

    /// ζ = √(ln p / n) as recommended when the kernel matrices come from n
    /// samples.
    pub fn with_sample_size(mut self, p: usize, n: usize) -> Self {
        self.zeta = Some(((p.max(2) as f64).ln() / n as f64).sqrt());
        self
    }
}
