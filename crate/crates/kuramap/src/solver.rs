//! Ground-truth machinery: the forward Kuramoto map, a damped Newton solver
//! for the balance equations, and a fixed-step RK4 integrator of the phase
//! dynamics for empirical checks.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{project_mean_free, sym_pinv, vector_inf_norm};
use crate::operators::{OperatorSet, RANK_CUTOFF_REL};
use crate::scalar::{real, to_f64, Real};

/// Forward Kuramoto map `f(x) = P sin(B^T x)`; lands in the cutset space.
pub fn kuramoto_map<T: Real>(ops: &OperatorSet<T>, x: &DVector<T>) -> DVector<T> {
    &ops.projection * ops.edge_differences(x).map(|a| a.sin())
}

/// Nodal balance residual `omega - B A sin(B^T x)`.
pub fn nodal_residual<T: Real>(
    ops: &OperatorSet<T>,
    omega: &DVector<T>,
    x: &DVector<T>,
) -> DVector<T> {
    let flows = ops.edge_differences(x).map(|a| a.sin()).component_mul(&ops.weights);
    omega - &ops.b * flows
}

/// Options for [`newton_solve`].
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions<T> {
    /// Success threshold on the nodal residual infinity norm.
    pub tol: T,
    /// Iteration cap.
    pub max_iter: usize,
    /// Iterates must keep every edge angle strictly below this cap.
    pub gamma_cap: T,
    /// Step halvings allowed per iteration before giving up.
    pub max_halvings: usize,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        NewtonOptions {
            tol: real(1e-10),
            max_iter: 50,
            gamma_cap: T::frac_pi_2() - real(1e-6),
            max_halvings: 30,
        }
    }
}

/// A solved synchronization manifold.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumResult<T> {
    /// Mean-free phase vector solving the nodal balance equation.
    pub theta_star: Vec<T>,
    /// Final `|omega - B A sin(B^T theta*)|_inf`.
    pub residual_inf: T,
    pub iterations: usize,
    /// Largest edge angle `|B^T theta*|_inf`.
    pub in_gamma: T,
    /// Whether the cosine-weighted Laplacian at the solution is PSD with
    /// exactly one zero eigenvalue (local exponential stability).
    pub stable: bool,
}

impl<T: Real> EquilibriumResult<T> {
    pub fn theta(&self) -> DVector<T> {
        DVector::from_vec(self.theta_star.clone())
    }
}

/// Damped Newton iteration on the nodal balance equation, restricted to the
/// mean-free subspace.
///
/// The Jacobian is the (singular) cosine-weighted Laplacian; each step is
/// pseudo-solved in the quotient space and the iterate re-projected. Steps
/// are halved when the residual grows or the iterate leaves the angle cap.
pub fn newton_solve<T: Real>(
    ops: &OperatorSet<T>,
    omega: &DVector<T>,
    x0: &DVector<T>,
    opts: NewtonOptions<T>,
) -> Result<EquilibriumResult<T>> {
    let (omega, _) = project_mean_free(omega);
    let (mut theta, _) = project_mean_free(x0);
    if vector_inf_norm(&ops.edge_differences(&theta)) > opts.gamma_cap {
        return Err(Error::LeftDomain { gamma_cap: to_f64(opts.gamma_cap) });
    }

    let mut residual = nodal_residual(ops, &omega, &theta);
    let mut res_norm = vector_inf_norm(&residual);
    let mut iterations = 0;

    while res_norm > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: to_f64(res_norm),
            });
        }
        let jac = cosine_laplacian(ops, &theta);
        let step = sym_pinv(&jac, real(RANK_CUTOFF_REL)).pinv * &residual;

        let mut scale = T::one();
        let mut accepted = false;
        let mut left_domain = false;
        for _ in 0..=opts.max_halvings {
            let candidate = project_mean_free(&(&theta + &step * scale)).0;
            if vector_inf_norm(&ops.edge_differences(&candidate)) > opts.gamma_cap {
                left_domain = true;
                scale *= real(0.5);
                continue;
            }
            let cand_residual = nodal_residual(ops, &omega, &candidate);
            let cand_norm = vector_inf_norm(&cand_residual);
            if cand_norm < res_norm || cand_norm <= opts.tol {
                theta = candidate;
                residual = cand_residual;
                res_norm = cand_norm;
                accepted = true;
                break;
            }
            left_domain = false;
            scale *= real(0.5);
        }
        if !accepted {
            if left_domain {
                return Err(Error::LeftDomain { gamma_cap: to_f64(opts.gamma_cap) });
            }
            return Err(Error::NoConvergence {
                iterations: iterations + 1,
                residual: to_f64(res_norm),
            });
        }
        iterations += 1;
    }

    let in_gamma = vector_inf_norm(&ops.edge_differences(&theta));
    let stable = is_stable(ops, &theta);
    Ok(EquilibriumResult {
        theta_star: theta.iter().copied().collect(),
        residual_inf: res_norm,
        iterations,
        in_gamma,
        stable,
    })
}

/// Cosine-weighted Laplacian `B A [cos(B^T theta)] B^T` (the negative of the
/// balance Jacobian).
pub fn cosine_laplacian<T: Real>(ops: &OperatorSet<T>, theta: &DVector<T>) -> DMatrix<T> {
    let cos = ops.edge_differences(theta).map(|a| a.cos());
    let n = ops.node_count();
    let m = ops.edge_count();
    let scaled = DMatrix::from_fn(n, m, |i, k| ops.b[(i, k)] * ops.weights[k] * cos[k]);
    &scaled * ops.b.transpose()
}

/// Relative threshold separating "zero" Jacobian eigenvalues.
pub const EIG_ZERO_REL: f64 = 1e-8;

fn is_stable<T: Real>(ops: &OperatorSet<T>, theta: &DVector<T>) -> bool {
    let jac = cosine_laplacian(ops, theta);
    let eig = sym_pinv(&jac, real(RANK_CUTOFF_REL)).eigenvalues;
    let lambda_max = eig.iter().fold(T::zero(), |a, &l| if l > a { l } else { a });
    if lambda_max <= T::zero() {
        return false;
    }
    let threshold = real::<T>(EIG_ZERO_REL) * lambda_max;
    let zeros = eig.iter().filter(|&&l| l <= threshold).count();
    let psd = eig.iter().all(|&l| l >= -threshold);
    psd && zeros == 1
}

/// Summary of one fixed-step RK4 integration in the rotating frame.
#[derive(Debug, Clone, Serialize)]
pub struct SimSummary<T> {
    /// Phase vector at `t_end`.
    pub theta_final: Vec<T>,
    /// `max - min` of the instantaneous frequencies at `t_end`; tends to zero
    /// under frequency synchronization.
    pub freq_spread: T,
    pub steps: usize,
}

/// Integrate `theta' = omega - B A sin(B^T theta)` with fixed-step RK4.
pub fn simulate<T: Real>(
    ops: &OperatorSet<T>,
    omega: &DVector<T>,
    theta0: &DVector<T>,
    t_end: T,
    dt: T,
) -> SimSummary<T> {
    assert!(dt > T::zero(), "step size must be positive");
    let (omega, _) = project_mean_free(omega);
    let mut theta = theta0.clone();
    let steps = to_f64(t_end / dt).ceil() as usize;
    let deriv = |x: &DVector<T>| nodal_residual(ops, &omega, x);
    let half = real::<T>(0.5);
    let sixth = T::one() / real::<T>(6.0);
    for _ in 0..steps {
        let k1 = deriv(&theta);
        let k2 = deriv(&(&theta + &k1 * (dt * half)));
        let k3 = deriv(&(&theta + &k2 * (dt * half)));
        let k4 = deriv(&(&theta + &k3 * dt));
        theta += (k1 + k2 * real::<T>(2.0) + k3 * real::<T>(2.0) + k4) * (dt * sixth);
    }
    let rates = deriv(&theta);
    let spread = rates.max() - rates.min();
    SimSummary { theta_final: theta.iter().copied().collect(), freq_spread: spread, steps }
}
