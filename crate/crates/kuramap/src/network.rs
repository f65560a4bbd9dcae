//! Weighted undirected connected graphs with a fixed edge orientation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{to_f64, Real};

/// One weighted edge. Stored with `i < j`; the fixed orientation is `i -> j`,
/// so the edge difference of a node vector `x` is `x[i] - x[j]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge<T> {
    pub i: usize,
    pub j: usize,
    pub weight: T,
}

/// Weighted undirected connected graph.
///
/// Construction validates connectivity, strictly positive weights, and the
/// absence of self-loops and duplicate edges. Edge order is the input order,
/// which fixes the edge-space coordinates everywhere downstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Network<T> {
    n: usize,
    edges: Vec<Edge<T>>,
}

impl<T: Real> Network<T> {
    /// Build a network on `n` nodes from `(i, j, weight)` triples.
    ///
    /// Endpoints may come in either order; they are normalized to `i < j`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, T)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut normed = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if j >= n {
                return Err(Error::NodeOutOfRange { node: j, n });
            }
            if w <= T::zero() {
                return Err(Error::NonPositiveWeight(i, j, to_f64(w)));
            }
            if !seen.insert((i, j)) {
                return Err(Error::DuplicateEdge(i, j));
            }
            normed.push(Edge { i, j, weight: w });
        }
        let net = Network { n, edges: normed };
        if !net.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    /// Signed node-edge incidence matrix, `n x m`: column `k` has `+1` at the
    /// edge source `i` and `-1` at the target `j`.
    pub fn incidence_matrix(&self) -> DMatrix<T> {
        let mut b = DMatrix::zeros(self.n, self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            b[(e.i, k)] = T::one();
            b[(e.j, k)] = -T::one();
        }
        b
    }

    /// Edge weights in edge order.
    pub fn weights(&self) -> DVector<T> {
        DVector::from_iterator(self.edges.len(), self.edges.iter().map(|e| e.weight))
    }

    /// Adjacency lists as `(neighbor, edge index)`, each list ordered by edge
    /// input index.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.i].push((e.j, k));
            adj[e.j].push((e.i, k));
        }
        adj
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        self.bfs_tree().len() == self.n - 1
    }

    /// Edge indices of the breadth-first spanning tree rooted at node 0,
    /// visiting each node's incident edges in input order. Deterministic.
    pub fn bfs_tree(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut visited = vec![false; self.n];
        let mut tree = Vec::with_capacity(self.n.saturating_sub(1));
        let mut queue = std::collections::VecDeque::new();
        visited[0] = true;
        queue.push_back(0);
        while let Some(u) = queue.pop_front() {
            for &(v, k) in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    tree.push(k);
                    queue.push_back(v);
                }
            }
        }
        tree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> Network<f64> {
        Network::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(matches!(
            Network::new(2, [(0, 0, 1.0)]),
            Err(Error::SelfLoop(0))
        ));
        assert!(matches!(
            Network::new(2, [(0, 1, -1.0)]),
            Err(Error::NonPositiveWeight(0, 1, _))
        ));
        assert!(matches!(
            Network::new(2, [(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Network::new(4, [(0, 1, 1.0), (2, 3, 1.0)]),
            Err(Error::DisconnectedGraph)
        ));
        assert!(matches!(
            Network::new(2, [(0, 5, 1.0)]),
            Err(Error::NodeOutOfRange { node: 5, n: 2 })
        ));
    }

    #[test]
    fn normalizes_edge_orientation() {
        let net = Network::new(3, [(1, 0, 2.0), (2, 1, 3.0)]).unwrap();
        assert_eq!(net.edges()[0].i, 0);
        assert_eq!(net.edges()[0].j, 1);
        assert_eq!(net.edges()[1].i, 1);
        assert_eq!(net.edges()[1].j, 2);
    }

    #[test]
    fn incidence_has_one_plus_one_minus_per_column() {
        let net = unit_triangle();
        let b = net.incidence_matrix();
        assert_eq!(b.nrows(), 3);
        assert_eq!(b.ncols(), 3);
        for k in 0..3 {
            assert_eq!(b.column(k).sum(), 0.0);
            assert_eq!(b.column(k).amax(), 1.0);
        }
    }

    #[test]
    fn bfs_tree_is_deterministic_and_spans() {
        let net = unit_triangle();
        assert_eq!(net.bfs_tree(), vec![0, 1]);

        // path graph keeps input order
        let path = Network::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(path.bfs_tree(), vec![0, 1, 2]);
    }
}
