//! Dense symmetric eigendecomposition, generalized eigenproblems for
//! symmetric-definite pairs, Cholesky, and PSD matrix square roots.
//!
//! Everything here assumes real symmetric input of moderate size (the n > p
//! regime); decompositions are full and dense. Generalized problems are
//! reduced to ordinary symmetric ones by Cholesky whitening of the
//! right-hand matrix, which keeps the returned vectors B-orthonormal by
//! construction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A full symmetric (or symmetric-definite generalized) eigendecomposition.
///
/// `values` are sorted in descending order and `vectors` holds the matching
/// eigenvectors as columns, orthonormal (B-orthonormal for generalized
/// pairs).
#[derive(Debug, Clone)]
pub struct EigPair {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigPair {
    /// Largest eigenvalue.
    pub fn max_value(&self) -> f64 {
        self.values[0]
    }

    /// Smallest eigenvalue.
    pub fn min_value(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Eigenvector for the largest eigenvalue.
    pub fn max_vector(&self) -> DVector<f64> {
        self.vectors.column(0).into_owned()
    }

    /// Spectral norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.max_value().abs().max(self.min_value().abs())
    }
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// vᵀ M v for symmetric M.
pub fn quad_form(m: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(m * v))
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues descending.
///
/// Eigenvector signs are fixed so the entry of largest magnitude (first such
/// entry on ties) is positive, which keeps downstream branching and tests
/// reproducible.
pub fn sym_eig(s: &DMatrix<f64>) -> Result<EigPair> {
    let n = s.nrows();
    if n != s.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "sym_eig needs a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    // The tightest threshold can hit a division-by-vanishing-offdiagonal
    // inside the QL iteration on highly sparse inputs (NaN eigenvalues), so
    // fall back through looser thresholds before giving up.
    let mut decomp = None;
    for eps in [f64::EPSILON, 1e-14, 1e-12] {
        if let Some(d) = nalgebra::SymmetricEigen::try_new(s.clone(), eps, 100_000) {
            if d.eigenvalues.iter().all(|x| x.is_finite()) {
                decomp = Some(d);
                break;
            }
        }
    }
    let decomp = decomp.ok_or(Error::ConvergenceFailure)?;

    // Sort descending; stable in the original column order on ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomp.eigenvalues[j]
            .partial_cmp(&decomp.eigenvalues[i])
            .expect("eigenvalues of a real symmetric matrix are finite")
    });

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = decomp.eigenvalues[src];
        let mut col = decomp.eigenvectors.column(src).into_owned();
        let lead = col.iter().enumerate().fold(0usize, |best, (i, x)| {
            if x.abs() > col[best].abs() {
                i
            } else {
                best
            }
        });
        if col[lead] < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }
    Ok(EigPair { values, vectors })
}

/// Lower-triangular Cholesky factor L with L Lᵀ = B.
pub fn chol(b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if b.nrows() != b.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "chol needs a square matrix, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    nalgebra::Cholesky::new(b.clone())
        .map(|c| c.l())
        .ok_or(Error::NotPositiveDefinite)
}

/// Largest generalized eigenvalue and its B-normalized eigenvector for a
/// symmetric pair (A, B) with B positive definite.
///
/// Solved by whitening: B = LLᵀ, ordinary eigendecomposition of L⁻¹AL⁻ᵀ,
/// back-transform of the top eigenvector. The returned vector satisfies
/// vᵀBv = 1 exactly up to round-off.
pub fn gen_eig_max(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let pair = gen_eig(a, b)?;
    Ok((pair.values[0], pair.vectors.column(0).into_owned()))
}

/// Full generalized eigendecomposition of a symmetric-definite pair, values
/// descending, vectors B-orthonormal.
pub fn gen_eig(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<EigPair> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "pencil needs equal square matrices, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let l = chol(b)?;
    // W = L⁻¹ A L⁻ᵀ, formed by two triangular solves.
    let la = l
        .solve_lower_triangular(a)
        .ok_or(Error::NotPositiveDefinite)?;
    let w = l
        .solve_lower_triangular(&la.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let inner = sym_eig(&symmetrize(&w))?;
    // Back-transform every eigenvector: v = L⁻ᵀ y, so vᵀBv = yᵀy = 1.
    let vectors = l
        .transpose()
        .solve_upper_triangular(&inner.vectors)
        .ok_or(Error::NotPositiveDefinite)?;
    Ok(EigPair {
        values: inner.values,
        vectors,
    })
}

/// Generalized top eigenpair restricted to a support set, embedded back into
/// the full space with zeros off-support.
///
/// The value equals the largest eigenvalue of the subpencil obtained by
/// keeping only the rows/columns in `support`; the returned vector has
/// vᵀBv = 1 in the full-matrix quadratic form.
pub fn restricted_gen_eig_max(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    support: &[usize],
) -> Result<(f64, DVector<f64>)> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let p = a.nrows();
    let a_s = submatrix(a, support);
    let b_s = submatrix(b, support);
    let (value, v_s) = gen_eig_max(&a_s, &b_s)?;
    let mut v = DVector::zeros(p);
    for (slot, &idx) in support.iter().enumerate() {
        v[idx] = v_s[slot];
    }
    Ok((value, v))
}

pub(crate) fn submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Symmetric PSD square root; round-off-negative eigenvalues are clamped to
/// zero rather than rejected.
pub fn psd_sqrt(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let pair = sym_eig(a)?;
    let roots = pair.values.map(|x| x.max(0.0).sqrt());
    let scaled = &pair.vectors * DMatrix::from_diagonal(&roots);
    Ok(symmetrize(&(scaled * pair.vectors.transpose())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    pub(crate) fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng))
    }

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        symmetrize(&random_matrix(n, rng))
    }

    fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let g = random_matrix(n, rng);
        &g * g.transpose()
    }

    fn random_pd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        random_psd(n, rng) + DMatrix::identity(n, n) * 0.1
    }

    #[test]
    fn sym_eig_diagonal_is_sorted_permutation() {
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let pair = sym_eig(&s).unwrap();
        assert_relative_eq!(pair.values[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(pair.values[1], 2.0, epsilon = 1e-12);
        assert_relative_eq!(pair.values[2], 1.0, epsilon = 1e-12);
        // columns are signed unit basis vectors matching the permutation
        for (col, expect) in [(0usize, 0usize), (1, 2), (2, 1)] {
            let v = pair.vectors.column(col);
            for i in 0..3 {
                let want = if i == expect { 1.0 } else { 0.0 };
                assert_relative_eq!(v[i].abs(), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sym_eig_2x2_analytic() {
        let s = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let pair = sym_eig(&s).unwrap();
        assert_relative_eq!(pair.values[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(pair.values[1], 1.0, epsilon = 1e-12);
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        let v0 = pair.vectors.column(0);
        assert_relative_eq!(v0[0].abs(), inv_sqrt2, epsilon = 1e-10);
        assert_relative_eq!(v0[1].abs(), inv_sqrt2, epsilon = 1e-10);
        assert_relative_eq!(v0[0] * v0[1], 0.5, epsilon = 1e-10); // same sign
        let v1 = pair.vectors.column(1);
        assert_relative_eq!(v1[0] * v1[1], -0.5, epsilon = 1e-10); // opposite sign
    }

    #[test]
    fn sym_eig_reconstructs_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_symmetric(8, &mut rng);
        let pair = sym_eig(&s).unwrap();
        let rebuilt =
            &pair.vectors * DMatrix::from_diagonal(&pair.values) * pair.vectors.transpose();
        assert!((rebuilt - &s).abs().max() <= 1e-8 * pair.spectral_norm().max(1.0));
        // orthonormality
        let gram = pair.vectors.transpose() * &pair.vectors;
        assert!((gram - DMatrix::identity(8, 8)).abs().max() <= 1e-8);
    }

    #[test]
    fn sym_eig_residuals_within_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let s = random_symmetric(6, &mut rng);
            let pair = sym_eig(&s).unwrap();
            let norm = pair.spectral_norm();
            for j in 0..6 {
                let v = pair.vectors.column(j).into_owned();
                let resid = &s * &v - &v * pair.values[j];
                assert!(resid.norm() <= 1e-8 * norm.max(1.0));
            }
        }
    }

    #[test]
    fn chol_diagonal_and_identity() {
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let l = chol(&b).unwrap();
        assert_relative_eq!(l[(0, 0)], 2.0, epsilon = 1e-12);
        assert_relative_eq!(l[(1, 1)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(l[(1, 0)], 0.0, epsilon = 1e-12);
        let id = DMatrix::<f64>::identity(3, 3);
        assert_relative_eq!(chol(&id).unwrap(), id, epsilon = 1e-12);
    }

    #[test]
    fn chol_rejects_indefinite() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(chol(&b), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn gen_eig_max_diagonal_ratios() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0]));
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 1.0]));
        let (lam, v) = gen_eig_max(&a, &b).unwrap();
        assert_relative_eq!(lam, 1.0, epsilon = 1e-12);
        assert_relative_eq!(v[0], 0.0, epsilon = 1e-10);
        assert_relative_eq!(v[1].abs(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn gen_eig_max_identity_pencil() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_pd(5, &mut rng);
        let (lam, v) = gen_eig_max(&b, &b).unwrap();
        assert_relative_eq!(lam, 1.0, epsilon = 1e-10);
        assert_relative_eq!(quad_form(&b, &v), 1.0, epsilon = 1e-10);
    }

    // Random-direction oracle: the Rayleigh quotient over 10^5 random
    // directions never exceeds the computed maximum, and ascending from the
    // best sampled direction by generalized power iteration (a route that
    // never touches the eigendecomposition) reaches it within 1e-3 from
    // below.
    #[test]
    fn gen_eig_max_dominates_random_rayleigh_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_psd(10, &mut rng);
        let b = random_pd(10, &mut rng);
        let (lam, v) = gen_eig_max(&a, &b).unwrap();
        assert_relative_eq!(quad_form(&b, &v), 1.0, epsilon = 1e-10);

        let mut best = f64::NEG_INFINITY;
        let mut best_dir = DVector::zeros(10);
        for _ in 0..100_000 {
            let d = DVector::from_fn(10, |_, _| StandardNormal.sample(&mut rng));
            let q = quad_form(&a, &d) / quad_form(&b, &d);
            assert!(q <= lam + 1e-9 * (1.0 + lam.abs()));
            if q > best {
                best = q;
                best_dir = d;
            }
        }

        let lu = b.clone().lu();
        let mut x = best_dir;
        for _ in 0..500 {
            x = lu.solve(&(&a * &x)).unwrap();
            x /= x.norm();
        }
        let refined = quad_form(&a, &x) / quad_form(&b, &x);
        assert!(refined <= lam + 1e-9 * (1.0 + lam.abs()));
        assert!(lam - refined <= 1e-3 * (1.0 + lam.abs()));
    }

    #[test]
    fn gen_eig_residuals_within_tolerance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = random_psd(7, &mut rng);
            let b = random_pd(7, &mut rng);
            let pair = gen_eig(&a, &b).unwrap();
            let na = sym_eig(&a).unwrap().spectral_norm();
            let nb = sym_eig(&b).unwrap().spectral_norm();
            for j in 0..7 {
                let v = pair.vectors.column(j).into_owned();
                let resid = &a * &v - (&b * &v) * pair.values[j];
                assert!(resid.norm() <= 1e-8 * (na + pair.values[j].abs() * nb));
                assert_relative_eq!(quad_form(&b, &v), 1.0, epsilon = 1e-8);
            }
        }
    }

    // Whitening identity: the top generalized eigenvalue equals the top
    // ordinary eigenvalue of L⁻¹AL⁻ᵀ by construction.
    #[test]
    fn gen_eig_max_matches_whitened_sym_eig() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let a = random_psd(6, &mut rng);
            let b = random_pd(6, &mut rng);
            let (lam, _) = gen_eig_max(&a, &b).unwrap();
            let l = chol(&b).unwrap();
            let la = l.solve_lower_triangular(&a).unwrap();
            let w = l.solve_lower_triangular(&la.transpose()).unwrap();
            let top = sym_eig(&symmetrize(&w)).unwrap().max_value();
            assert_relative_eq!(lam, top, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn restricted_gen_eig_picks_submatrix_optimum() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0]));
        let b = DMatrix::identity(3, 3);
        let (value, v) = restricted_gen_eig_max(&a, &b, &[1, 2]).unwrap();
        assert_relative_eq!(value, 2.0, epsilon = 1e-12);
        assert_relative_eq!(v[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(v[1].abs(), 1.0, epsilon = 1e-10);
        assert_relative_eq!(v[2], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn restricted_gen_eig_full_support_equals_unrestricted() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_psd(5, &mut rng);
        let b = random_pd(5, &mut rng);
        let (full, _) = gen_eig_max(&a, &b).unwrap();
        let (restricted, _) = restricted_gen_eig_max(&a, &b, &[0, 1, 2, 3, 4]).unwrap();
        assert_relative_eq!(full, restricted, epsilon = 1e-10, max_relative = 1e-10);
    }

    #[test]
    fn restricted_gen_eig_2x2_block() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 2.5]);
        let b = DMatrix::identity(3, 3);
        let (value, v) = restricted_gen_eig_max(&a, &b, &[0, 1]).unwrap();
        assert_relative_eq!(value, 3.0, epsilon = 1e-10);
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert_relative_eq!(v[0].abs(), inv_sqrt2, epsilon = 1e-10);
        assert_relative_eq!(v[1].abs(), inv_sqrt2, epsilon = 1e-10);
        assert_relative_eq!(v[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn restricted_gen_eig_rejects_empty_support() {
        let a = DMatrix::identity(3, 3);
        assert!(matches!(
            restricted_gen_eig_max(&a, &a, &[]),
            Err(Error::EmptySupport)
        ));
    }

    // Monotonicity under support growth, which underlies the first upper
    // bound of the solver.
    #[test]
    fn restricted_value_monotone_in_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let a = random_psd(6, &mut rng);
            let b = random_pd(6, &mut rng);
            let (small, _) = restricted_gen_eig_max(&a, &b, &[0, 2]).unwrap();
            let (large, _) = restricted_gen_eig_max(&a, &b, &[0, 2, 4, 5]).unwrap();
            assert!(small <= large + 1e-9);
        }
    }

    #[test]
    fn psd_sqrt_diagonal_and_identity() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0]));
        let s = psd_sqrt(&a).unwrap();
        assert_relative_eq!(s[(0, 0)], 2.0, epsilon = 1e-10);
        assert_relative_eq!(s[(1, 1)], 3.0, epsilon = 1e-10);
        let id = DMatrix::<f64>::identity(4, 4);
        assert_relative_eq!(psd_sqrt(&id).unwrap(), id, epsilon = 1e-10);
    }

    #[test]
    fn psd_sqrt_squares_back_to_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_psd(6, &mut rng);
        let s = psd_sqrt(&a).unwrap();
        let norm = sym_eig(&a).unwrap().spectral_norm();
        assert!((&s * &s - &a).abs().max() <= 1e-8 * norm.max(1.0));
    }
}
