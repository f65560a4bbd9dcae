//! Complex sinc-weighted operators on the cutset space and their inverses.
//!
//! For an edge vector `y`, the operator `Q_y x = P [sinc(y)] x` acts on the
//! complex cutset space. Whenever every entry of `z` has modulus at most
//! `pi/2`, the sinc-weighted Laplacian keeps rank `n - 1` and
//! `Q_z^{-1} = B^T L_sinc(z)^+ B A`. These identities double as executable
//! validations of the operator algebra.

use nalgebra::{Complex, ComplexField, DVector};

use crate::error::{Error, Result};
use crate::linalg::{complex_of, complex_pinv, vector_inf_norm};
use crate::operators::{OperatorSet, RANK_CUTOFF_REL};
use crate::scalar::{real, to_f64, Real};

/// Complex sinc: `sin(z)/z` away from zero, `1` at zero.
pub fn complex_sinc<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re == T::zero() && z.im == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z.sin() / z
    }
}

/// Elementwise complex sinc of an edge vector.
pub fn sinc_vector<T: Real>(z: &DVector<Complex<T>>) -> DVector<Complex<T>> {
    z.map(complex_sinc)
}

fn check_cutset_membership<T: Real>(
    ops: &OperatorSet<T>,
    x: &DVector<Complex<T>>,
) -> Result<()> {
    if x.len() != ops.edge_count() {
        return Err(Error::DimensionMismatch { expected: ops.edge_count(), got: x.len() });
    }
    let pc = complex_of(&ops.projection);
    let residual = vector_inf_norm(&(x - &pc * x));
    let tol_rel = real::<T>(1e-9) * vector_inf_norm(x);
    let tol = if tol_rel > real(1e-12) { tol_rel } else { real(1e-12) };
    if residual > tol {
        return Err(Error::NotInCutsetSpace { residual: to_f64(residual) });
    }
    Ok(())
}

/// Apply `Q_y x = P [sinc(y)] x`; `x` must lie in the complex cutset space.
pub fn q_apply<T: Real>(
    ops: &OperatorSet<T>,
    y: &DVector<Complex<T>>,
    x: &DVector<Complex<T>>,
) -> Result<DVector<Complex<T>>> {
    if y.len() != ops.edge_count() {
        return Err(Error::DimensionMismatch { expected: ops.edge_count(), got: y.len() });
    }
    check_cutset_membership(ops, x)?;
    let weighted = sinc_vector(y).component_mul(x);
    Ok(complex_of(&ops.projection) * weighted)
}

/// Apply `Q_z^{-1} v = B^T L_sinc(z)^+ B A v`.
///
/// Reports `RankDeficient` when the sinc-weighted Laplacian drops below rank
/// `n - 1`, which signals that `z` violates the modulus bound `pi/2`.
pub fn q_inverse_apply<T: Real>(
    ops: &OperatorSet<T>,
    z: &DVector<Complex<T>>,
    v: &DVector<Complex<T>>,
) -> Result<DVector<Complex<T>>> {
    if z.len() != ops.edge_count() {
        return Err(Error::DimensionMismatch { expected: ops.edge_count(), got: z.len() });
    }
    check_cutset_membership(ops, v)?;
    let l_sinc = ops.weighted_laplacian(&sinc_vector(z))?;
    let (pinv, rank) = complex_pinv(&l_sinc, real(RANK_CUTOFF_REL));
    let n = ops.node_count();
    if rank < n - 1 {
        return Err(Error::RankDeficient { rank, expected: n - 1 });
    }
    let bc = complex_of(&ops.b);
    let weighted = DVector::from_iterator(
        v.len(),
        v.iter()
            .enumerate()
            .map(|(k, &vk)| vk * Complex::new(ops.weights[k], T::zero())),
    );
    Ok(bc.transpose() * (pinv * (bc * weighted)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Network;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn cvec(data: &[(f64, f64)]) -> DVector<Complex<f64>> {
        DVector::from_iterator(data.len(), data.iter().map(|&(re, im)| Complex::new(re, im)))
    }

    fn triangle() -> OperatorSet<f64> {
        OperatorSet::build(&Network::new(3, [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 0.5)]).unwrap())
            .unwrap()
    }

    #[test]
    fn sinc_values() {
        assert_eq!(complex_sinc(Complex::new(0.0, 0.0)), Complex::new(1.0, 0.0));
        let s = complex_sinc(Complex::new(FRAC_PI_2, 0.0));
        assert!((s.re - 2.0 / std::f64::consts::PI).abs() < 1e-15);
        assert!(s.im.abs() < 1e-15);
    }

    #[test]
    fn zero_weight_q_acts_as_identity_on_cutset_space() {
        let ops = triangle();
        let x = complex_of(&ops.projection) * cvec(&[(0.3, 0.1), (-0.2, 0.0), (0.1, -0.4)]);
        let y = DVector::from_element(3, Complex::new(0.0, 0.0));
        let qx = q_apply(&ops, &y, &x).unwrap();
        assert!(vector_inf_norm(&(qx - &x)) < 1e-12);

        let inv = q_inverse_apply(&ops, &y, &x).unwrap();
        assert!(vector_inf_norm(&(inv - &x)) < 1e-10);
    }

    #[test]
    fn single_edge_q_is_scalar_sinc() {
        let ops = OperatorSet::build(&Network::new(2, [(0, 1, 1.0)]).unwrap()).unwrap();
        let y = cvec(&[(FRAC_PI_2, 0.0)]);
        let x = cvec(&[(0.8, -0.3)]);
        let qx = q_apply(&ops, &y, &x).unwrap();
        let expected = x[0] * Complex::new(2.0 / std::f64::consts::PI, 0.0);
        assert!((qx[0] - expected).norm() < 1e-14);

        // inverse multiplies by z / sin(z)
        let inv = q_inverse_apply(&ops, &y, &x).unwrap();
        let expected = x[0] / Complex::new(2.0 / std::f64::consts::PI, 0.0);
        assert!((inv[0] - expected).norm() < 1e-12);
    }

    #[test]
    fn rejects_inputs_off_the_cutset_space() {
        let ops = triangle();
        // the cycle direction is killed by P, so it is not in Img(B^T)
        let cycle = cvec(&[(1.0, 0.0), (-1.0, 0.0), (1.0, 0.0)]);
        let y = DVector::from_element(3, Complex::new(0.1, 0.0));
        assert!(matches!(
            q_apply(&ops, &y, &cycle),
            Err(Error::NotInCutsetSpace { .. })
        ));
    }

    #[test]
    fn round_trip_on_triangle_with_real_z() {
        let ops = triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut z = DVector::from_fn(3, |_, _| {
                Complex::new(rng.random_range(-1.0..1.0), 0.0)
            });
            let norm = vector_inf_norm(&z);
            z *= Complex::new(1.5 / norm, 0.0);
            let v = complex_of(&ops.projection)
                * DVector::from_fn(3, |_, _| Complex::new(rng.random_range(-1.0..1.0), 0.0));
            let w = q_inverse_apply(&ops, &z, &v).unwrap();
            let back = q_apply(&ops, &z, &w).unwrap();
            assert!(vector_inf_norm(&(back - &v)) < 1e-9);
        }
    }
}
