//! Convergence certificates: the scalar gap function `g`, the cohesion angle
//! `gamma*`, and membership tests for the solvability ball `Omega` and the
//! absolute-convergence ball `Omega^s`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::vector_inf_norm;
use crate::operators::OperatorSet;
use crate::scalar::{real, to_f64, Real};
use crate::series::rotating_frame;

/// Gap function on `[1, inf)`:
///
/// ```text
/// g(x) = (y + sin y)/2 - x (y - sin y)/2,   y = arccos((x-1)/(x+1))
/// ```
///
/// `g(1) = 1`, strictly decreasing, and `g(x) -> 0` as `x -> inf`. Applied to
/// the infinity norm of the cutset projection it bounds the edge-space norm
/// of admissible flows.
pub fn g_function<T: Real>(x: T) -> Result<T> {
    if x < T::one() {
        return Err(Error::DomainError { value: to_f64(x), min: 1.0 });
    }
    let y = ((x - T::one()) / (x + T::one())).acos();
    let half = real::<T>(0.5);
    Ok((y + y.sin()) * half - x * (y - y.sin()) * half)
}

/// Cohesion angle `gamma* = arccos((|P| - 1)/(|P| + 1))` for a projection
/// norm `|P| >= 1`; equals `pi/2` exactly on trees.
pub fn gamma_star<T: Real>(norm_projection: T) -> Result<T> {
    if norm_projection < T::one() {
        return Err(Error::DomainError { value: to_f64(norm_projection), min: 1.0 });
    }
    Ok(((norm_projection - T::one()) / (norm_projection + T::one())).acos())
}

/// Certificate quantities for one network and one frequency vector.
#[derive(Debug, Clone, Serialize)]
pub struct SyncCertificate<T> {
    /// Infinity norm of the cutset projection.
    pub norm_p: T,
    /// Guaranteed-uniqueness cohesion angle, radians.
    pub gamma_star: T,
    /// `g(norm_p)`.
    pub g_value: T,
    /// Edge-space bound defining `Omega` (equals `g_value`).
    pub omega_bound: T,
    /// Tree-edge bound defining `Omega^s`: `g_value / |B_sharp|`.
    pub omega_s_bound: T,
    /// Norm of the edge coordinates `B^T L^+ omega`.
    pub eta_norm: T,
    /// Norm of the tree coordinates `B_tree^T L^+ omega`.
    pub xi_norm: T,
    /// `eta_norm <= omega_bound` (closed inequality).
    pub in_omega: bool,
    /// `omega_bound - eta_norm`.
    pub omega_margin: T,
    /// `xi_norm <= omega_s_bound` (closed inequality).
    pub in_omega_s: bool,
    /// `omega_s_bound - xi_norm`.
    pub omega_s_margin: T,
}

/// Evaluate the certificate for `omega` (projected onto the rotating frame).
///
/// Membership uses closed inequalities computed in double precision with no
/// tolerance inflation; the margins expose boundary closeness.
pub fn certificate<T: Real>(ops: &OperatorSet<T>, omega: &DVector<T>) -> SyncCertificate<T> {
    let omega = rotating_frame(omega);
    let norm_p = ops.norm_projection_inf;
    let g_value = g_function(norm_p).expect("projection norm is >= 1 on connected graphs");
    let gamma_star = gamma_star(norm_p).expect("projection norm is >= 1 on connected graphs");
    let omega_bound = g_value;
    let omega_s_bound = g_value / ops.norm_b_sharp_inf;
    let eta_norm = vector_inf_norm(&ops.edge_coordinates(&omega));
    let xi_norm = vector_inf_norm(&ops.tree_coordinates(&omega));
    SyncCertificate {
        norm_p,
        gamma_star,
        g_value,
        omega_bound,
        omega_s_bound,
        eta_norm,
        xi_norm,
        in_omega: eta_norm <= omega_bound,
        omega_margin: omega_bound - eta_norm,
        in_omega_s: xi_norm <= omega_s_bound,
        omega_s_margin: omega_s_bound - xi_norm,
    }
}

/// Membership in the embedded cohesive set: `x` is (numerically) mean-free
/// and every edge difference stays within `gamma`.
pub fn in_cohesive_set<T: Real>(ops: &OperatorSet<T>, x: &DVector<T>, gamma: T) -> bool {
    let ones = DVector::from_element(x.len(), T::one());
    let mean_component = nalgebra::ComplexField::abs(ones.dot(x));
    mean_component <= real(1e-9) && vector_inf_norm(&ops.edge_differences(x)) <= gamma
}
