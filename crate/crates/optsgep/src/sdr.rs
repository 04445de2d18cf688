//! Sufficient-dimension-reduction front-ends: build the (A, B) kernel pair
//! of each inverse-regression method from samples, and extract d sparse
//! directions by repeated solves with deflation in between.
//!
//! All sample moments are plug-in estimates with denominator n. Slices are
//! formed by stable-sorting the response and cutting into near-equal
//! groups, so ties keep their original order and runs are reproducible.

use nalgebra::{DMatrix, DVector};

use crate::bnb;
use crate::error::{Error, Result};
use crate::linalg::{self, symmetrize};
use crate::problem::{Certificate, SgepProblem, SolverOptions};

/// Predictor matrix (n×p) with its response vector.
#[derive(Debug, Clone)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
}

impl Dataset {
    /// Requires n > p and matching lengths.
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "X has {} rows, y has {} entries",
                x.nrows(),
                y.len()
            )));
        }
        if x.nrows() <= x.ncols() {
            return Err(Error::TooFewSamples { n: x.nrows(), p: x.ncols() });
        }
        Ok(Dataset { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }
}

/// Kernel choice for [`fit_sparse_sdr`]; PFC uses the cubic response map
/// f(y) = (|y|, y², y³).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrMethod {
    Sir { n_slices: usize },
    Pfc,
    Save { n_slices: usize },
    PhdY,
    PhdR,
    Dr { n_slices: usize },
}

impl SdrMethod {
    pub fn matrices(&self, data: &Dataset) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        match *self {
            SdrMethod::Sir { n_slices } => sir_matrices(data, n_slices),
            SdrMethod::Pfc => pfc_matrices(data, |y| vec![y.abs(), y * y, y * y * y]),
            SdrMethod::Save { n_slices } => save_matrices(data, n_slices),
            SdrMethod::PhdY => phd_matrices(data, PhdVariant::YBased),
            SdrMethod::PhdR => phd_matrices(data, PhdVariant::RBased),
            SdrMethod::Dr { n_slices } => dr_matrices(data, n_slices),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SdrMethod::Sir { .. } => "sir",
            SdrMethod::Pfc => "pfc",
            SdrMethod::Save { .. } => "save",
            SdrMethod::PhdY => "phd-y",
            SdrMethod::PhdR => "phd-r",
            SdrMethod::Dr { .. } => "dr",
        }
    }
}

/// d estimated sparse directions with their supports and objectives.
#[derive(Debug, Clone)]
pub struct SdrEstimate {
    /// p×d, columns B-normalized with at most `k_used` nonzeros each.
    pub directions: DMatrix<f64>,
    /// 0-based support per direction.
    pub supports: Vec<Vec<usize>>,
    pub objectives: Vec<f64>,
    pub k_used: usize,
}

impl SdrEstimate {
    /// Union of the per-direction supports, sorted.
    pub fn support_union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.supports.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

/// A fitted estimate together with the per-direction solver certificates
/// and the per-direction (deflated) problems, which model selection scores
/// against.
#[derive(Debug, Clone)]
pub struct SdrFit {
    pub estimate: SdrEstimate,
    pub certificates: Vec<Certificate>,
    pub problems: Vec<SgepProblem>,
}

fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(x.ncols(), |j, _| x.column(j).mean())
}

fn center_columns(x: &DMatrix<f64>) -> DMatrix<f64> {
    let means = column_means(x);
    let mut out = x.clone();
    for j in 0..x.ncols() {
        out.column_mut(j).add_scalar_mut(-means[j]);
    }
    out
}

/// Sample covariance with denominator n.
fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let xc = center_columns(x);
    symmetrize(&(xc.transpose() * &xc / x.nrows() as f64))
}

/// Indices partitioned into `n_slices` near-equal groups by sorted
/// response; sizes differ by at most one and ties keep input order.
pub fn slice_partition(y: &DVector<f64>, n_slices: usize) -> Result<Vec<Vec<usize>>> {
    if n_slices < 2 {
        return Err(Error::BadSpec("need at least 2 slices".into()));
    }
    let n = y.len();
    if n < n_slices {
        return Err(Error::EmptySlice(n_slices - 1));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| y[i].partial_cmp(&y[j]).expect("finite responses").then(i.cmp(&j)));
    let base = n / n_slices;
    let extra = n % n_slices;
    let mut slices = Vec::with_capacity(n_slices);
    let mut at = 0;
    for h in 0..n_slices {
        let size = base + usize::from(h < extra);
        slices.push(order[at..at + size].to_vec());
        at += size;
    }
    Ok(slices)
}

/// Sliced inverse regression: A is the between-slice covariance of the
/// slice means, B the sample covariance.
pub fn sir_matrices(data: &Dataset, n_slices: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let slices = slice_partition(&data.y, n_slices)?;
    let n = data.n() as f64;
    let p = data.p();
    let grand = column_means(&data.x);
    let mut a = DMatrix::zeros(p, p);
    for rows in &slices {
        let mut mean = DVector::zeros(p);
        for &i in rows {
            mean += data.x.row(i).transpose();
        }
        mean /= rows.len() as f64;
        let dev = mean - &grand;
        a += (&dev * dev.transpose()) * (rows.len() as f64 / n);
    }
    Ok((symmetrize(&a), covariance(&data.x)))
}

/// Principal fitted components: A is the covariance of the fitted values
/// from regressing centered X on the centered response features f(y).
pub fn pfc_matrices<F>(data: &Dataset, f: F) -> Result<(DMatrix<f64>, DMatrix<f64>)>
where
    F: Fn(f64) -> Vec<f64>,
{
    let n = data.n();
    let q = f(data.y[0]).len();
    let mut feats = DMatrix::zeros(n, q);
    for i in 0..n {
        let row = f(data.y[i]);
        if row.len() != q {
            return Err(Error::DimensionMismatch(
                "feature map must have a fixed output length".into(),
            ));
        }
        for j in 0..q {
            feats[(i, j)] = row[j];
        }
    }
    let fc = center_columns(&feats);
    let xc = center_columns(&data.x);
    let gram = symmetrize(&(fc.transpose() * &fc));
    let gram_chol = nalgebra::Cholesky::new(gram).ok_or(Error::RankDeficientFeatures)?;
    let fx = fc.transpose() * &xc; // q×p
    let solved = gram_chol.solve(&fx);
    let a = symmetrize(&(fx.transpose() * solved / n as f64));
    Ok((a, covariance(&data.x)))
}

/// Covariance, its symmetric square root, and the whitened rows
/// z_i = B^{-1/2}(x_i − x̄).
fn whitened(data: &Dataset) -> Result<(DMatrix<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let b = covariance(&data.x);
    let pair = linalg::sym_eig(&b)?;
    if pair.min_value() <= 1e-12 * pair.max_value().max(1.0) {
        return Err(Error::SingularCovariance);
    }
    let half = pair.values.map(|x| x.sqrt());
    let inv_half = pair.values.map(|x| 1.0 / x.sqrt());
    let b_half =
        symmetrize(&(&pair.vectors * DMatrix::from_diagonal(&half) * pair.vectors.transpose()));
    let b_inv_half = symmetrize(
        &(&pair.vectors * DMatrix::from_diagonal(&inv_half) * pair.vectors.transpose()),
    );
    let z = center_columns(&data.x) * b_inv_half;
    Ok((b, b_half, z))
}

fn clamp_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let pair = linalg::sym_eig(&symmetrize(m))?;
    let clipped = pair.values.map(|x| x.max(0.0));
    Ok(symmetrize(
        &(&pair.vectors * DMatrix::from_diagonal(&clipped) * pair.vectors.transpose()),
    ))
}

/// Sliced average variance estimation.
pub fn save_matrices(data: &Dataset, n_slices: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (b, b_half, z) = whitened(data)?;
    let slices = slice_partition(&data.y, n_slices)?;
    let n = data.n() as f64;
    let p = data.p();
    let mut inner = DMatrix::zeros(p, p);
    for rows in &slices {
        let nh = rows.len() as f64;
        let mut mean = DVector::zeros(p);
        for &i in rows {
            mean += z.row(i).transpose();
        }
        mean /= nh;
        let mut cov_h = DMatrix::zeros(p, p);
        for &i in rows {
            let dev = z.row(i).transpose() - &mean;
            cov_h += &dev * dev.transpose();
        }
        cov_h /= nh;
        let gap = DMatrix::identity(p, p) - cov_h;
        inner += (&gap * &gap) * (nh / n);
    }
    let a = clamp_psd(&(&b_half * inner * &b_half))?;
    Ok((a, b))
}

/// Which moment the principal-Hessian-directions kernel squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhdVariant {
    /// E[{y − E(y)} z zᵀ]
    YBased,
    /// residual-based: y − E(y) − E(y zᵀ) z in place of y − E(y)
    RBased,
}

/// Principal Hessian directions; the moment matrix is squared so A is PSD
/// even though the moment itself is indefinite.
pub fn phd_matrices(data: &Dataset, variant: PhdVariant) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (b, b_half, z) = whitened(data)?;
    let n = data.n();
    let p = data.p();
    let y_bar = data.y.mean();
    let weights: Vec<f64> = match variant {
        PhdVariant::YBased => (0..n).map(|i| data.y[i] - y_bar).collect(),
        PhdVariant::RBased => {
            let mut c = DVector::zeros(p);
            for i in 0..n {
                c += z.row(i).transpose() * data.y[i];
            }
            c /= n as f64;
            (0..n).map(|i| data.y[i] - y_bar - c.dot(&z.row(i).transpose())).collect()
        }
    };
    let mut m = DMatrix::zeros(p, p);
    for (i, &w) in weights.iter().enumerate() {
        let zi = z.row(i).transpose();
        m += (&zi * zi.transpose()) * w;
    }
    m /= n as f64;
    m = symmetrize(&m);
    let a = clamp_psd(&(&b_half * (&m * &m) * &b_half))?;
    Ok((a, b))
}

/// Directional regression.
pub fn dr_matrices(data: &Dataset, n_slices: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let (b, b_half, z) = whitened(data)?;
    let slices = slice_partition(&data.y, n_slices)?;
    let n = data.n() as f64;
    let p = data.p();
    let mut second_sq = DMatrix::zeros(p, p); // E[E²(zzᵀ|y)]
    let mut mean_outer = DMatrix::zeros(p, p); // E[E(z|y)E(zᵀ|y)]
    let mut mean_norm = 0.0; // E[E(zᵀ|y)E(z|y)]
    for rows in &slices {
        let nh = rows.len() as f64;
        let w = nh / n;
        let mut mean = DVector::zeros(p);
        let mut moment = DMatrix::zeros(p, p);
        for &i in rows {
            let zi = z.row(i).transpose();
            moment += &zi * zi.transpose();
            mean += zi;
        }
        moment /= nh;
        mean /= nh;
        second_sq += (&moment * &moment) * w;
        mean_outer += (&mean * mean.transpose()) * w;
        mean_norm += w * mean.norm_squared();
    }
    let bracket = second_sq * 2.0
        + (&mean_outer * &mean_outer) * 2.0
        + &mean_outer * (2.0 * mean_norm)
        - DMatrix::identity(p, p) * 2.0;
    let a = clamp_psd(&(&b_half * bracket * &b_half))?;
    Ok((a, b))
}

/// Projects A off an already-found direction: Π A Π with
/// Π = I − Bv̂(Bv̂)ᵀ/‖Bv̂‖₂².
pub fn deflate(a: &DMatrix<f64>, b: &DMatrix<f64>, v_hat: &DVector<f64>) -> Result<DMatrix<f64>> {
    let bv = b * v_hat;
    let norm_sq = bv.norm_squared();
    if norm_sq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let proj = DMatrix::identity(a.nrows(), a.ncols()) - (&bv * bv.transpose()) / norm_sq;
    Ok(symmetrize(&(&proj * a * &proj)))
}

/// Builds the kernel pair and extracts `d` sparse directions with the
/// branch-and-bound solver, deflating A between directions. The same k is
/// used for every direction.
pub fn fit_sparse_sdr(
    data: &Dataset,
    method: SdrMethod,
    k: usize,
    d: usize,
    epsilon: f64,
    options: &SolverOptions,
) -> Result<SdrFit> {
    let options = enrich(options, data);
    fit_sparse_sdr_with(data, method, k, d, epsilon, |problem, _| {
        let cert = bnb::solve(problem, &options)?;
        Ok((cert.v_hat.clone(), Some(cert)))
    })
    .map(|(estimate, certificates, problems)| SdrFit {
        estimate,
        certificates: certificates.into_iter().flatten().collect(),
        problems,
    })
}

fn enrich(options: &SolverOptions, data: &Dataset) -> SolverOptions {
    if options.zeta.is_some() {
        options.clone()
    } else {
        options.clone().with_sample_size(data.p(), data.n())
    }
}

/// Deflation loop with a pluggable per-direction solver; used by the
/// benchmark harness to run heuristic baselines through the identical
/// pipeline.
pub fn fit_sparse_sdr_with<F>(
    data: &Dataset,
    method: SdrMethod,
    k: usize,
    d: usize,
    epsilon: f64,
    mut solve_one: F,
) -> Result<(SdrEstimate, Vec<Option<Certificate>>, Vec<SgepProblem>)>
where
    F: FnMut(&SgepProblem, usize) -> Result<(DVector<f64>, Option<Certificate>)>,
{
    if d < 1 {
        return Err(Error::BadSpec("d must be >= 1".into()));
    }
    let (mut a, b) = method.matrices(data)?;
    let p = data.p();
    let mut directions = DMatrix::zeros(p, d);
    let mut supports = Vec::with_capacity(d);
    let mut objectives = Vec::with_capacity(d);
    let mut certificates = Vec::with_capacity(d);
    let mut problems = Vec::with_capacity(d);
    for j in 0..d {
        let problem = SgepProblem::new(a.clone(), b.clone(), k, epsilon)?;
        let (v, cert) = solve_one(&problem, j)?;
        supports.push((0..p).filter(|&i| v[i] != 0.0).collect());
        objectives.push(problem.objective(&v));
        directions.set_column(j, &v);
        certificates.push(cert);
        if j + 1 < d {
            a = deflate(&a, &b, &v)?;
        }
        problems.push(problem);
    }
    Ok((
        SdrEstimate { directions, supports, objectives, k_used: k },
        certificates,
        problems,
    ))
}
