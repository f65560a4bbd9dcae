//! Dense linear-algebra helpers: infinity norms, rank-revealing pseudoinverses
//! for real symmetric and complex matrices, and mean-free projections.

use nalgebra::{Complex, ComplexField, DMatrix, DVector, SymmetricEigen, SVD};
use num_traits::Zero;

use crate::scalar::Real;

/// `max_i sum_j |m_ij|` with `|.|` the complex modulus.
pub fn matrix_inf_norm<S: ComplexField>(m: &DMatrix<S>) -> S::RealField {
    let mut best = S::RealField::zero();
    for row in m.row_iter() {
        let mut sum = S::RealField::zero();
        for e in row.iter() {
            sum += e.clone().modulus();
        }
        if sum > best {
            best = sum;
        }
    }
    best
}

/// `max_i |v_i|` with `|.|` the complex modulus.
pub fn vector_inf_norm<S: ComplexField>(v: &DVector<S>) -> S::RealField {
    let mut best = S::RealField::zero();
    for e in v.iter() {
        let a = e.clone().modulus();
        if a > best {
            best = a;
        }
    }
    best
}

/// Eigendecomposition-backed pseudoinverse of a real symmetric matrix.
///
/// Eigenvalues with `|lambda| <= rel_cutoff * max |lambda|` are treated as
/// zero; `rank` counts the survivors.
pub struct SymPinv<T: Real> {
    pub pinv: DMatrix<T>,
    pub rank: usize,
    pub eigenvalues: DVector<T>,
}

pub fn sym_pinv<T: Real>(m: &DMatrix<T>, rel_cutoff: T) -> SymPinv<T> {
    let eig = SymmetricEigen::new(m.clone());
    let lambda_max = eig
        .eigenvalues
        .iter()
        .fold(T::zero(), |a, &l| if ComplexField::abs(l) > a { ComplexField::abs(l) } else { a });
    let cutoff = rel_cutoff * lambda_max;
    let mut rank = 0;
    let inv = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| {
            if ComplexField::abs(l) > cutoff && lambda_max > T::zero() {
                rank += 1;
                T::one() / l
            } else {
                T::zero()
            }
        }),
    );
    let pinv = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    SymPinv { pinv, rank, eigenvalues: eig.eigenvalues }
}

/// Moore-Penrose pseudoinverse of a complex matrix via SVD, plus the
/// singular-value rank.
///
/// Singular values `sigma <= rel_cutoff * sigma_max` count as zero.
pub fn complex_pinv<T: Real>(
    m: &DMatrix<Complex<T>>,
    rel_cutoff: T,
) -> (DMatrix<Complex<T>>, usize) {
    let svd = SVD::new(m.clone(), true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = rel_cutoff * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let pinv = svd
        .pseudo_inverse(cutoff)
        .expect("SVD was computed with both factor sets");
    (pinv, rank)
}

/// Rank of a complex matrix, counting singular values above
/// `rel_cutoff * sigma_max`.
pub fn complex_rank<T: Real>(m: &DMatrix<Complex<T>>, rel_cutoff: T) -> usize {
    complex_pinv(m, rel_cutoff).1
}

/// Remove the mean component of a node vector. Returns the projection onto
/// the zero-sum subspace and the magnitude of the removed mean.
pub fn project_mean_free<T: Real>(v: &DVector<T>) -> (DVector<T>, T) {
    let n = T::from_usize(v.len()).expect("vector length fits in scalar");
    let mean = v.iter().fold(T::zero(), |a, &x| a + x) / n;
    (v.map(|x| x - mean), ComplexField::abs(mean))
}

/// Lift a real matrix into the complex plane.
pub fn complex_of<T: Real>(m: &DMatrix<T>) -> DMatrix<Complex<T>> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Lift a real vector into the complex plane.
pub fn complex_of_vec<T: Real>(v: &DVector<T>) -> DVector<Complex<T>> {
    v.map(|x| Complex::new(x, T::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn inf_norm_of_identity_is_one() {
        let m = DMatrix::<f64>::identity(4, 4);
        assert_eq!(matrix_inf_norm(&m), 1.0);
    }

    #[test]
    fn inf_norm_takes_max_row_sum_of_moduli() {
        let m = dmatrix![1.0, -2.0; 3.0, 4.0];
        assert_eq!(matrix_inf_norm(&m), 7.0);

        let c = DMatrix::from_row_slice(1, 2, &[Complex::new(0.0, 1.0), Complex::new(1.0, 0.0)]);
        assert!((matrix_inf_norm(&c) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sym_pinv_satisfies_moore_penrose_on_singular_matrix() {
        // rank-1 symmetric
        let m = dmatrix![1.0, -1.0; -1.0, 1.0];
        let p = sym_pinv(&m, 1e-9);
        assert_eq!(p.rank, 1);
        let mpm = &m * &p.pinv * &m;
        assert!((mpm - &m).amax() < 1e-12);
    }

    #[test]
    fn complex_pinv_satisfies_moore_penrose() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex::new(1.0, 0.5),
                Complex::new(-1.0, -0.5),
                Complex::new(-1.0, -0.5),
                Complex::new(1.0, 0.5),
            ],
        );
        let (pinv, rank) = complex_pinv(&m, 1e-9);
        assert_eq!(rank, 1);
        let mpm = &m * &pinv * &m;
        assert!(matrix_inf_norm(&(mpm - &m)) < 1e-12);
        let pmp = &pinv * &m * &pinv;
        assert!(matrix_inf_norm(&(pmp - &pinv)) < 1e-12);
    }

    #[test]
    fn mean_projection_removes_exactly_the_mean() {
        let v = DVector::from_vec(vec![1.0, 2.0, 6.0]);
        let (p, removed) = project_mean_free(&v);
        assert!((p.sum()).abs() < 1e-14);
        assert!((removed - 3.0).abs() < 1e-14);
    }
}
