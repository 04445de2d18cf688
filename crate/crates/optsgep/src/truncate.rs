//! Projection of an arbitrary vector onto a node's feasible set: keep the
//! forced-in coordinates plus the largest admissible magnitudes, zero the
//! rest, then scale to unit B-quadratic form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::quad_form;
use crate::problem::Node;

/// Nearest member of V(l, u, k, B) to `v` in Euclidean distance.
///
/// Selection: all indices with l_i = 1 are kept; among the free indices
/// (l_i = 0, u_i = 1) the k − ∑l largest |v_i| are kept, ties broken by
/// smallest index; everything else is zeroed. The survivor is scaled so
/// v̂ᵀBv̂ = 1.
///
/// Fails with `DegenerateInput` when every allowed entry of `v` is zero;
/// see [`truncate_or_basis`] for the fallback the solver uses.
pub fn truncate(
    v: &DVector<f64>,
    node: &Node,
    k: usize,
    b: &DMatrix<f64>,
) -> Result<DVector<f64>> {
    let selected = select_support(v, node, k);
    let mut out = DVector::zeros(v.len());
    let mut any_nonzero = false;
    for &i in &selected {
        out[i] = v[i];
        any_nonzero |= v[i] != 0.0;
    }
    if !any_nonzero {
        return Err(Error::DegenerateInput);
    }
    let scale = quad_form(b, &out).sqrt();
    Ok(out / scale)
}

/// The masking step of the projection alone: selected indices, in
/// ascending order. Shared with the second and third upper bounds, which
/// need the selection without the normalization.
pub fn select_support(v: &DVector<f64>, node: &Node, k: usize) -> Vec<usize> {
    let forced = node.forced();
    let mut free = node.free();
    let room = k.saturating_sub(forced.len());
    // sort by |v_i| descending, ties by smallest index
    free.sort_by(|&i, &j| {
        v[j].abs()
            .partial_cmp(&v[i].abs())
            .expect("finite entries")
            .then(i.cmp(&j))
    });
    let mut selected = forced;
    selected.extend(free.into_iter().take(room));
    selected.sort_unstable();
    selected
}

/// Projection with the degenerate-input fallback: when `v` vanishes on the
/// whole allowed set, returns a B-normalized basis vector instead, picked
/// so the implied support stays feasible (the smallest forced index when
/// the forced set is already full, the smallest allowed index otherwise).
pub fn truncate_or_basis(
    v: &DVector<f64>,
    node: &Node,
    k: usize,
    b: &DMatrix<f64>,
) -> DVector<f64> {
    match truncate(v, node, k, b) {
        Ok(out) => out,
        Err(_) => {
            let j = if node.sum_l() >= k {
                node.forced()[0]
            } else {
                node.allowed()[0]
            };
            let mut out = DVector::zeros(v.len());
            out[j] = 1.0 / b[(j, j)].sqrt();
            out
        }
    }
}
