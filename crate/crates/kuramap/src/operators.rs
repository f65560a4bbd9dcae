//! Graph-derived linear operators: Laplacian, its pseudoinverse, the cutset
//! projection, and spanning-tree reduction operators.
//!
//! The cutset projection `P = B^T L^+ B A` is the oblique projection onto the
//! cutset space `Img(B^T)` parallel to the cycle space; it is the identity on
//! trees. All matrices are dense.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{matrix_inf_norm, sym_pinv};
use crate::network::Network;
use crate::scalar::{real, Real};

/// Relative eigenvalue cutoff used when pseudoinverting the Laplacian.
pub const RANK_CUTOFF_REL: f64 = 1e-9;

/// Immutable bundle of operators derived from one [`Network`].
///
/// Safe to share across threads; every analysis in this crate is a pure
/// function of an `OperatorSet` plus its own inputs.
#[derive(Debug, Clone)]
pub struct OperatorSet<T: Real> {
    n: usize,
    m: usize,
    /// Node-edge incidence matrix, `n x m`.
    pub b: DMatrix<T>,
    /// Diagonal of the edge weight matrix, length `m`.
    pub weights: DVector<T>,
    /// Weighted Laplacian `B A B^T`.
    pub laplacian: DMatrix<T>,
    /// Moore-Penrose pseudoinverse of the Laplacian.
    pub laplacian_pinv: DMatrix<T>,
    /// Cutset projection `B^T L^+ B A`, `m x m`.
    pub projection: DMatrix<T>,
    /// `L^+ B A`, the node-space image map applied to every series term.
    pub node_image: DMatrix<T>,
    /// Incidence matrix of the spanning tree, `n x (n-1)`.
    pub b_tree: DMatrix<T>,
    /// `(B_tree^+ B)^T`, `m x (n-1)`: expresses each edge difference as a
    /// signed combination of tree-edge differences.
    pub b_sharp: DMatrix<T>,
    /// Edge indices (into the network's edge list) of the BFS spanning tree.
    pub tree_edges: Vec<usize>,
    /// Infinity norm of the cutset projection.
    pub norm_projection_inf: T,
    /// Infinity norm of `b_sharp`.
    pub norm_b_sharp_inf: T,
}

impl<T: Real> OperatorSet<T> {
    /// Build every derived operator for `net`.
    ///
    /// The pseudoinverse comes from a symmetric eigendecomposition with the
    /// relative cutoff [`RANK_CUTOFF_REL`]; a Laplacian rank below `n - 1`
    /// reports `DisconnectedGraph`.
    pub fn build(net: &Network<T>) -> Result<Self> {
        let n = net.node_count();
        let m = net.edge_count();
        let b = net.incidence_matrix();
        let weights = net.weights();
        let b_aw = scale_columns(&b, &weights);
        let laplacian = &b_aw * b.transpose();

        let pinv = sym_pinv(&laplacian, real(RANK_CUTOFF_REL));
        if pinv.rank < n - 1 {
            return Err(Error::DisconnectedGraph);
        }
        let laplacian_pinv = pinv.pinv;

        let node_image = &laplacian_pinv * &b_aw;
        let projection = b.transpose() * &node_image;

        let (tree_edges, b_tree, b_sharp) = spanning_tree_operators(net)?;

        // both norms are >= 1 analytically (P restricted to Img(B^T) is the
        // identity; tree rows of b_sharp are unit vectors), so clamp away
        // downward roundoff
        let norm_projection_inf = clamp_unit_floor(matrix_inf_norm(&projection));
        let norm_b_sharp_inf = clamp_unit_floor(matrix_inf_norm(&b_sharp));

        Ok(OperatorSet {
            n,
            m,
            b,
            weights,
            laplacian,
            laplacian_pinv,
            projection,
            node_image,
            b_tree,
            b_sharp,
            tree_edges,
            norm_projection_inf,
            norm_b_sharp_inf,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// Edge differences `B^T x` of a node vector.
    pub fn edge_differences(&self, x: &DVector<T>) -> DVector<T> {
        self.b.tr_mul(x)
    }

    /// Edge coordinates `B^T L^+ omega` of a frequency vector (the flow
    /// variables entering every series evaluation).
    pub fn edge_coordinates(&self, omega: &DVector<T>) -> DVector<T> {
        self.b.tr_mul(&(&self.laplacian_pinv * omega))
    }

    /// Tree-edge coordinates `B_tree^T L^+ omega`.
    pub fn tree_coordinates(&self, omega: &DVector<T>) -> DVector<T> {
        self.b_tree.tr_mul(&(&self.laplacian_pinv * omega))
    }

    /// Weighted Laplacian `B A [w] B^T` with a complex edge reweighting `w`.
    pub fn weighted_laplacian(&self, w: &DVector<Complex<T>>) -> Result<DMatrix<Complex<T>>> {
        if w.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: w.len() });
        }
        let bc = crate::linalg::complex_of(&self.b);
        let scaled = DMatrix::from_fn(self.n, self.m, |i, k| {
            bc[(i, k)] * Complex::new(self.weights[k], T::zero()) * w[k]
        });
        Ok(&scaled * bc.transpose())
    }
}

fn clamp_unit_floor<T: Real>(x: T) -> T {
    if x < T::one() {
        T::one()
    } else {
        x
    }
}

/// Multiply column `k` of `m` by `d[k]`.
fn scale_columns<T: Real>(m: &DMatrix<T>, d: &DVector<T>) -> DMatrix<T> {
    let mut out = m.clone();
    for (k, mut col) in out.column_iter_mut().enumerate() {
        col *= d[k];
    }
    out
}

/// BFS spanning tree plus the reduction operators `(B_tree, B_sharp)` with
/// `B_sharp B_tree^T = B^T`.
pub fn spanning_tree_operators<T: Real>(
    net: &Network<T>,
) -> Result<(Vec<usize>, DMatrix<T>, DMatrix<T>)> {
    let n = net.node_count();
    let tree_edges = net.bfs_tree();
    if tree_edges.len() != n - 1 {
        return Err(Error::DisconnectedGraph);
    }
    let b = net.incidence_matrix();
    let b_tree = b.select_columns(tree_edges.iter());
    // B_tree has full column rank, so B_tree^+ = (B_tree^T B_tree)^-1 B_tree^T
    // and (B_tree^+ B)^T = B^T B_tree (B_tree^T B_tree)^-1.
    let gram = b_tree.tr_mul(&b_tree);
    let gram_inv = gram
        .try_inverse()
        .ok_or(Error::DisconnectedGraph)?;
    let b_sharp = b.tr_mul(&b_tree) * gram_inv;
    Ok((tree_edges, b_tree, b_sharp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector_inf_norm;
    use nalgebra::dvector;

    fn ops(net: &Network<f64>) -> OperatorSet<f64> {
        OperatorSet::build(net).unwrap()
    }

    #[test]
    fn single_edge_projection_is_identity() {
        let net = Network::new(2, [(0, 1, 2.5)]).unwrap();
        let o = ops(&net);
        assert!((o.projection[(0, 0)] - 1.0).abs() < 1e-12);
        assert!((o.norm_projection_inf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn star_graph_projection_is_identity() {
        let net = Network::new(5, [(0, 1, 1.3), (0, 2, 0.7), (0, 3, 2.0), (0, 4, 5.0)]).unwrap();
        let o = ops(&net);
        let id = DMatrix::<f64>::identity(4, 4);
        assert!(matrix_inf_norm(&(&o.projection - id)) < 1e-10);
        assert!((o.norm_projection_inf - 1.0).abs() < 1e-10);
    }

    #[test]
    fn triangle_projection_matches_cycle_complement() {
        // Unit triangle: P = I - (1/3) c c^T with c the signed cycle
        // indicator (1, -1, 1) for edges (0,1), (0,2), (1,2).
        let net = Network::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let o = ops(&net);
        let c = dvector![1.0, -1.0, 1.0];
        let expected = DMatrix::identity(3, 3) - (&c * c.transpose()) / 3.0;
        assert!(matrix_inf_norm(&(&o.projection - expected)) < 1e-12);

        let p2 = &o.projection * &o.projection;
        assert!(matrix_inf_norm(&(p2 - &o.projection)) < 1e-10);
        let pbt = &o.projection * o.b.transpose();
        assert!(matrix_inf_norm(&(pbt - o.b.transpose())) < 1e-10);
    }

    #[test]
    fn laplacian_identities_hold() {
        let net = Network::new(4, [(0, 1, 2.0), (1, 2, 0.5), (2, 3, 1.5), (0, 3, 3.0), (1, 3, 1.0)])
            .unwrap();
        let o = ops(&net);
        let ones = DVector::from_element(4, 1.0);
        assert!(vector_inf_norm(&(&o.laplacian * &ones)) < 1e-12);
        assert!(vector_inf_norm(&(&o.laplacian_pinv * &ones)) < 1e-10);
        let centering = DMatrix::identity(4, 4) - DMatrix::from_element(4, 4, 0.25);
        assert!(matrix_inf_norm(&(&o.laplacian * &o.laplacian_pinv - &centering)) < 1e-10);
        assert!(matrix_inf_norm(&(&o.laplacian_pinv * &o.laplacian - &centering)) < 1e-10);
    }

    #[test]
    fn tree_input_gives_identity_b_sharp() {
        let net = Network::new(4, [(0, 1, 1.0), (1, 2, 2.0), (1, 3, 0.5)]).unwrap();
        let o = ops(&net);
        assert_eq!(o.tree_edges, vec![0, 1, 2]);
        let id = DMatrix::<f64>::identity(3, 3);
        assert!(matrix_inf_norm(&(&o.b_sharp - id)) < 1e-12);
        assert!((o.norm_b_sharp_inf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_chord_row_is_signed_tree_path() {
        let net = Network::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let o = ops(&net);
        // chord (1,2): x1 - x2 = (x0 - x2) - (x0 - x1)
        assert!((o.b_sharp[(2, 0)] + 1.0).abs() < 1e-12);
        assert!((o.b_sharp[(2, 1)] - 1.0).abs() < 1e-12);
        let identity = &o.b_sharp * o.b_tree.transpose();
        assert!(matrix_inf_norm(&(identity - o.b.transpose())) < 1e-10);
    }

    #[test]
    fn weighted_laplacian_with_unit_weights_recovers_laplacian() {
        let net = Network::new(3, [(0, 1, 2.0), (0, 2, 3.0), (1, 2, 4.0)]).unwrap();
        let o = ops(&net);
        let ones = DVector::from_element(3, Complex::new(1.0, 0.0));
        let lw = o.weighted_laplacian(&ones).unwrap();
        let diff = lw.map(|z| z.re) - &o.laplacian;
        assert!(matrix_inf_norm(&diff) < 1e-12);
        assert!(lw.iter().all(|z| z.im == 0.0));

        let zeros = DVector::from_element(3, Complex::new(0.0, 0.0));
        let l0 = o.weighted_laplacian(&zeros).unwrap();
        assert!(matrix_inf_norm(&l0) < 1e-15);

        let short = DVector::from_element(2, Complex::new(1.0, 0.0));
        assert!(matches!(
            o.weighted_laplacian(&short),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }
}
