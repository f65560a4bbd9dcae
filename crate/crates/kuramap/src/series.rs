//! Taylor expansion of the inverse Kuramoto map.
//!
//! The forward map sends a node vector `x` to the projected edge flows
//! `P sin(B^T x)`. Its inverse admits a Taylor expansion around zero whose
//! homogeneous terms `A_1, A_3, A_5, ...` obey a recursion over partitions of
//! odd integers into odd parts:
//!
//! ```text
//! A_1(eta) = eta
//! A_{2j+1}(eta) = P ( sum_{k=1}^{j} (-1)^{k+1} / (2k+1)!
//!                     sum_{multisets} mult * A_{a_1} o ... o A_{a_{2k+1}} )
//! ```
//!
//! with `o` the Hadamard product and the inner sum over multisets of `2k+1`
//! odd indices summing to `2j+1`, each weighted by its number of ordered
//! arrangements. Truncating the series yields the approximate synchronization
//! manifolds and the hierarchy of approximate synchronization tests.

use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};
use crate::linalg::{project_mean_free, vector_inf_norm};
use crate::operators::OperatorSet;
use crate::partitions::odd_partitions;
use crate::scalar::{real, to_f64, Real};

/// Hard cap on the expansion order: factorial and partition growth beyond
/// this point is never useful in double precision.
pub const MAX_ORDER: usize = 50;

/// Relative tolerance for the cutset-membership precondition.
pub const CUTSET_TOL_REL: f64 = 1e-9;
/// Absolute fallback for near-zero inputs.
pub const CUTSET_TOL_ABS: f64 = 1e-12;
/// Mean components larger than this trigger a warning before projection.
pub const MEAN_WARN: f64 = 1e-9;

/// Elementwise `p`-th power; `p = 0` gives the all-ones vector.
pub fn hadamard_power<S: ComplexField>(x: &DVector<S>, p: usize) -> DVector<S> {
    match p {
        0 => DVector::from_element(x.len(), S::one()),
        1 => x.clone(),
        _ => {
            let mut out = x.clone();
            for _ in 1..p {
                out.component_mul_assign(x);
            }
            out
        }
    }
}

/// Evaluated Taylor terms of the inverse map at a concrete edge vector.
#[derive(Debug, Clone)]
pub struct SeriesExpansion<T: Real> {
    eta: DVector<T>,
    /// `A_1(eta), A_3(eta), ..., A_{2N+1}(eta)`.
    terms: Vec<DVector<T>>,
    /// Node-space images `L^+ B A  A_{2j+1}(eta)`.
    node_terms: Vec<DVector<T>>,
}

impl<T: Real> SeriesExpansion<T> {
    /// Highest expansion index `N` (the last term has homogeneity `2N + 1`).
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn eta(&self) -> &DVector<T> {
        &self.eta
    }

    /// Edge-space term `A_{2j+1}(eta)`.
    pub fn term(&self, j: usize) -> &DVector<T> {
        &self.terms[j]
    }

    /// Node-space term `B_{2j+1}(eta)`.
    pub fn node_term(&self, j: usize) -> &DVector<T> {
        &self.node_terms[j]
    }

    pub fn terms(&self) -> &[DVector<T>] {
        &self.terms
    }

    /// `sum_{j=0}^{upto} A_{2j+1}(eta)`.
    pub fn edge_partial_sum(&self, upto: usize) -> DVector<T> {
        let mut acc = self.terms[0].clone();
        for t in &self.terms[1..=upto] {
            acc += t;
        }
        acc
    }

    /// `sum_{j=0}^{upto} B_{2j+1}(eta)`, the approximate manifold at order
    /// `upto`.
    pub fn node_partial_sum(&self, upto: usize) -> DVector<T> {
        let mut acc = self.node_terms[0].clone();
        for t in &self.node_terms[1..=upto] {
            acc += t;
        }
        acc
    }

    /// Infinity norms of the individual terms, for tail diagnostics.
    pub fn term_norms(&self) -> Vec<T> {
        self.terms.iter().map(vector_inf_norm).collect()
    }
}

/// Evaluate the expansion terms `A_1 ... A_{2N+1}` at `eta`.
///
/// `eta` must lie in the cutset space `Img(B^T)`; lower-order terms are
/// reused as the recursion climbs, so one call costs a single pass.
pub fn expand<T: Real>(
    ops: &OperatorSet<T>,
    eta: &DVector<T>,
    order: usize,
) -> Result<SeriesExpansion<T>> {
    if eta.len() != ops.edge_count() {
        return Err(Error::DimensionMismatch { expected: ops.edge_count(), got: eta.len() });
    }
    if order > MAX_ORDER {
        return Err(Error::OverflowGuard { order, max: MAX_ORDER });
    }
    let residual = vector_inf_norm(&(eta - &ops.projection * eta));
    let tol_rel = real::<T>(CUTSET_TOL_REL) * vector_inf_norm(eta);
    let tol = if tol_rel > real(CUTSET_TOL_ABS) { tol_rel } else { real(CUTSET_TOL_ABS) };
    if residual > tol {
        return Err(Error::NotInCutsetSpace { residual: to_f64(residual) });
    }

    let m = ops.edge_count();
    let mut terms: Vec<DVector<T>> = Vec::with_capacity(order + 1);
    terms.push(eta.clone());

    for j in 1..=order {
        let mut acc = DVector::<T>::zeros(m);
        for k in 1..=j {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let scale = sign / factorial(2 * k + 1);
            for partition in odd_partitions(j, k)? {
                let product = grouped_hadamard(&terms, &partition.parts);
                let coeff = real::<T>(scale * partition.multiplicity as f64);
                acc.axpy(coeff, &product, T::one());
            }
        }
        terms.push(&ops.projection * acc);
    }

    let node_terms = terms.iter().map(|t| &ops.node_image * t).collect();
    Ok(SeriesExpansion { eta: eta.clone(), terms, node_terms })
}

/// Hadamard product of `A_{v}` over the parts, with repeated factors grouped
/// into Hadamard powers. `parts` is non-increasing, so runs are contiguous.
fn grouped_hadamard<T: Real>(terms: &[DVector<T>], parts: &[usize]) -> DVector<T> {
    let mut product: Option<DVector<T>> = None;
    let mut idx = 0;
    while idx < parts.len() {
        let value = parts[idx];
        let mut run = 0;
        while idx < parts.len() && parts[idx] == value {
            run += 1;
            idx += 1;
        }
        let factor = hadamard_power(&terms[(value - 1) / 2], run);
        product = Some(match product {
            Some(p) => p.component_mul(&factor),
            None => factor,
        });
    }
    product.expect("partition has at least one part")
}

fn factorial(n: usize) -> f64 {
    (2..=n).map(|i| i as f64).product()
}

/// Outcome of an approximate synchronization test.
#[derive(Debug, Clone, Copy)]
pub struct TestOutcome<T> {
    /// True when the partial-sum norm stays within the angle budget.
    pub verdict: bool,
    /// `gamma - norm`; negative when the test fails.
    pub margin: T,
    /// Infinity norm of the edge-space partial sum.
    pub norm: T,
}

/// Approximate synchronization manifold `S_{2n+1}` for a frequency vector.
///
/// `omega` is projected onto the zero-mean subspace first (rotating frame); a
/// removed component above [`MEAN_WARN`] is logged.
pub fn approximate_manifold<T: Real>(
    ops: &OperatorSet<T>,
    omega: &DVector<T>,
    n: usize,
) -> Result<DVector<T>> {
    let omega = rotating_frame(omega);
    let eta = ops.edge_coordinates(&omega);
    let expansion = expand(ops, &eta, n)?;
    Ok(expansion.node_partial_sum(n))
}

/// Approximate synchronization test `T_{2n+1}` at angle budget `gamma`.
pub fn approximate_test<T: Real>(
    ops: &OperatorSet<T>,
    omega: &DVector<T>,
    n: usize,
    gamma: T,
) -> Result<TestOutcome<T>> {
    let omega = rotating_frame(omega);
    let eta = ops.edge_coordinates(&omega);
    let expansion = expand(ops, &eta, n)?;
    let norm = vector_inf_norm(&expansion.edge_partial_sum(n));
    Ok(TestOutcome { verdict: norm <= gamma, margin: gamma - norm, norm })
}

/// Project a frequency vector onto the zero-mean subspace, warning when the
/// removed mean is non-negligible.
pub fn rotating_frame<T: Real>(omega: &DVector<T>) -> DVector<T> {
    let (projected, removed) = project_mean_free(omega);
    if removed > real(MEAN_WARN) {
        log::warn!(
            "frequency vector has mean component {:.3e}; projecting onto the rotating frame",
            to_f64(removed)
        );
    }
    projected
}
