//! Signed weighted digraphs and their Laplacians.
//!
//! Weights follow the receiver-first convention: `weight(i, j)` is `a_ij`,
//! the weight on the edge `v_j → v_i`, so row `i` of the weight matrix lists
//! the in-neighbours of node `i`. Indices are 0-based in the API and 1-based
//! in every file format.

use serde::Serialize;

use crate::error::GraphError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A directed edge carrying information from `src` to `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignedDigraph {
    n: usize,
    weights: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl SignedDigraph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        Ok(Self {
            n,
            weights: vec![0.0; n * n],
            labels: None,
        })
    }

    /// Builds a graph from its weight matrix, `rows[i][j] = a_ij`.
    pub fn from_weight_rows(rows: &[Vec<f64>]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Self::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::Shape { n });
            }
            for (j, &w) in row.iter().enumerate() {
                if !w.is_finite() {
                    return Err(GraphError::NonFinite {
                        src: j + 1,
                        dst: i + 1,
                    });
                }
                if i == j && w != 0.0 {
                    return Err(GraphError::NonZeroDiagonal { node: i + 1 });
                }
                g.weights[i * n + j] = w;
            }
        }
        Ok(g)
    }

    /// Builds a graph from 0-based `(src, dst, weight)` triples. Later
    /// duplicates are rejected, as are zero weights and self-loops.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for (k, &(src, dst, w)) in edges.iter().enumerate() {
            let line = k + 1;
            for idx in [src, dst] {
                if idx >= n {
                    return Err(GraphError::IndexOutOfRange {
                        line,
                        index: idx + 1,
                        n,
                    });
                }
            }
            if src == dst {
                return Err(GraphError::SelfLoop {
                    line,
                    node: src + 1,
                });
            }
            if !w.is_finite() {
                return Err(GraphError::NonFinite {
                    src: src + 1,
                    dst: dst + 1,
                });
            }
            if w == 0.0 {
                return Err(GraphError::ZeroWeight {
                    line,
                    src: src + 1,
                    dst: dst + 1,
                });
            }
            if g.weights[dst * n + src] != 0.0 {
                return Err(GraphError::DuplicateEdge {
                    line,
                    src: src + 1,
                    dst: dst + 1,
                });
            }
            g.weights[dst * n + src] = w;
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `a_ij`: weight on the edge `v_j → v_i`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.weight(dst, src) != 0.0
    }

    /// `𝒩_i`: nodes with an edge into `i`, ascending.
    pub fn in_neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.weight(i, j) != 0.0)
    }

    pub fn out_neighbors(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.weight(i, j) != 0.0)
    }

    /// All edges ordered by source, then destination.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for src in 0..self.n {
            for dst in 0..self.n {
                let w = self.weight(dst, src);
                if w != 0.0 {
                    out.push(Edge {
                        src,
                        dst,
                        weight: w,
                    });
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.weights.iter().filter(|w| **w != 0.0).count()
    }

    pub fn weight_rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// The weight matrix `A` lifted into `T`.
    pub fn adjacency<T: Scalar>(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, j| T::lift(self.weight(i, j)))
    }

    pub(crate) fn map_weights(&self, f: impl Fn(usize, usize, f64) -> f64) -> Self {
        let n = self.n;
        let weights = (0..n * n)
            .map(|k| f(k / n, k % n, self.weights[k]))
            .collect();
        Self {
            n,
            weights,
            labels: self.labels.clone(),
        }
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < self.n {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                index: i + 1,
                n: self.n,
            })
        }
    }
}

/// Root-ordered block decomposition of a Laplacian:
///
/// ```text
/// P L Pᵀ = [ L_r       0        ]
///          [ -A_rnr    L_nr + B ]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct RootBlocks<T> {
    pub l_r: Matrix<T>,
    pub a_rnr: Matrix<T>,
    pub l_nr: Matrix<T>,
    /// Diagonal of `B`: total absolute weight each non-root receives from roots.
    pub b: Vec<T>,
}

impl<T: Scalar> RootBlocks<T> {
    pub fn root_count(&self) -> usize {
        self.l_r.rows()
    }

    /// `L_nr + B`
    pub fn follower_block(&self) -> Matrix<T> {
        let mut m = self.l_nr.clone();
        for (k, bk) in self.b.iter().enumerate() {
            m[(k, k)] = m[(k, k)].clone() + bk.clone();
        }
        m
    }

    /// Rebuilds `P L Pᵀ` from the blocks.
    pub fn reassemble(&self) -> Matrix<T> {
        let m = self.root_count();
        let n = m + self.l_nr.rows();
        let follower = self.follower_block();
        Matrix::from_fn(n, n, |i, j| match (i < m, j < m) {
            (true, true) => self.l_r[(i, j)].clone(),
            (true, false) => T::zero(),
            (false, true) => -self.a_rnr[(i - m, j)].clone(),
            (false, false) => follower[(i - m, j - m)].clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianView<T> {
    pub laplacian: Matrix<T>,
    /// `root_order[k]` is the original index of the node in position `k`.
    pub root_order: Vec<usize>,
    pub blocks: Option<RootBlocks<T>>,
}

impl<T: Scalar> LaplacianView<T> {
    /// Original-order vector from one given in root order.
    pub fn unpermute(&self, permuted: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); permuted.len()];
        for (k, &orig) in self.root_order.iter().enumerate() {
            out[orig] = permuted[k].clone();
        }
        out
    }

    pub fn roots(&self) -> &[usize] {
        let m = self.blocks.as_ref().map_or(0, RootBlocks::root_count);
        &self.root_order[..m]
    }
}

/// `l_ii = Σ_k |a_ik|`, `l_ij = -a_ij`.
pub fn laplacian_matrix<T: Scalar>(g: &SignedDigraph) -> Matrix<T> {
    let n = g.node_count();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        let mut diag = T::zero();
        for j in g.in_neighbors(i) {
            let a = T::lift(g.weight(i, j));
            diag = diag + a.abs();
            l[(i, j)] = -a;
        }
        l[(i, i)] = diag;
    }
    l
}

pub fn laplacian<T: Scalar>(g: &SignedDigraph) -> LaplacianView<T> {
    LaplacianView {
        laplacian: laplacian_matrix(g),
        root_order: (0..g.node_count()).collect(),
        blocks: None,
    }
}

/// Same topology with every weight replaced by its absolute value.
pub fn induced_unsigned(g: &SignedDigraph) -> SignedDigraph {
    g.map_weights(|_, _, w| w.abs())
}

/// A subgraph together with the original index of each of its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub graph: SignedDigraph,
    /// `nodes[k]` is the original index of local node `k`; ascending.
    pub nodes: Vec<usize>,
}

impl Subgraph {
    pub fn local_index(&self, original: usize) -> Option<usize> {
        self.nodes.binary_search(&original).ok()
    }
}

/// Induced subgraph on `nodes`: keeps exactly the edges with both endpoints
/// in the set. Duplicates in `nodes` are ignored.
pub fn induced_subgraph(g: &SignedDigraph, nodes: &[usize]) -> Result<Subgraph, GraphError> {
    if nodes.is_empty() {
        return Err(GraphError::EmptyNodeSet);
    }
    let mut nodes = nodes.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    for &v in &nodes {
        g.check_node(v)?;
    }
    let rows: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&i| nodes.iter().map(|&j| g.weight(i, j)).collect())
        .collect();
    let mut graph = SignedDigraph::from_weight_rows(&rows)?;
    if let Some(labels) = g.labels() {
        graph.labels = Some(nodes.iter().map(|&i| labels[i].clone()).collect());
    }
    Ok(Subgraph { graph, nodes })
}

/// Permutes `roots` to the front and splits the Laplacian into blocks.
///
/// `roots` must be closed under in-edges: no node outside the set may feed a
/// node inside it, otherwise the upper-right block would be non-zero. The
/// rooted set of a quasi-strongly connected graph and the leader set of any
/// graph both qualify.
pub fn root_ordered_blocks<T: Scalar>(
    g: &SignedDigraph,
    roots: &[usize],
) -> Result<LaplacianView<T>, GraphError> {
    if roots.is_empty() {
        return Err(GraphError::EmptyNodeSet);
    }
    let n = g.node_count();
    let mut roots = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    for &r in &roots {
        g.check_node(r)?;
    }
    let mut is_root = vec![false; n];
    for &r in &roots {
        is_root[r] = true;
    }
    for &r in &roots {
        if let Some(j) = g.in_neighbors(r).find(|&j| !is_root[j]) {
            return Err(GraphError::InvalidRootSet(format!(
                "node set (edge {} -> {})",
                j + 1,
                r + 1
            )));
        }
    }
    let others: Vec<usize> = (0..n).filter(|&v| !is_root[v]).collect();
    let m = roots.len();
    let l = laplacian_matrix::<T>(g);

    let root_graph = induced_subgraph(g, &roots)?;
    let l_r = laplacian_matrix::<T>(&root_graph.graph);
    let a_rnr = Matrix::from_fn(others.len(), m, |i, j| {
        T::lift(g.weight(others[i], roots[j]))
    });
    let (l_nr, b) = if others.is_empty() {
        (Matrix::zeros(0, 0), Vec::new())
    } else {
        let nr_graph = induced_subgraph(g, &others)?;
        let b = (0..others.len())
            .map(|i| (0..m).fold(T::zero(), |acc, j| acc + a_rnr[(i, j)].abs()))
            .collect();
        (laplacian_matrix::<T>(&nr_graph.graph), b)
    };

    let mut root_order = roots;
    root_order.extend(others);
    Ok(LaplacianView {
        laplacian: l,
        root_order,
        blocks: Some(RootBlocks {
            l_r,
            a_rnr,
            l_nr,
            b,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path2(w: f64) -> SignedDigraph {
        SignedDigraph::from_edges(2, &[(0, 1, w)]).unwrap()
    }

    #[test]
    fn laplacian_of_single_edge() {
        let l = laplacian::<f64>(&path2(3.0)).laplacian;
        assert_eq!(l.to_rows(), vec![vec![0.0, 0.0], vec![-3.0, 3.0]]);
        let l = laplacian::<f64>(&path2(-3.0)).laplacian;
        assert_eq!(l.to_rows(), vec![vec![0.0, 0.0], vec![3.0, 3.0]]);
    }

    #[test]
    fn unsigned_takes_absolute_values() {
        let g = induced_unsigned(&path2(-3.0));
        assert_eq!(g.weight(1, 0), 3.0);
        let pos = path2(2.0);
        assert_eq!(induced_unsigned(&pos), pos);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            SignedDigraph::from_edges(2, &[(0, 0, 1.0)]),
            Err(GraphError::SelfLoop { .. })
        ));
        assert!(matches!(
            SignedDigraph::from_edges(2, &[(0, 1, 1.0), (0, 1, 2.0)]),
            Err(GraphError::DuplicateEdge { line: 2, .. })
        ));
        assert!(matches!(
            SignedDigraph::from_edges(2, &[(0, 1, 0.0)]),
            Err(GraphError::ZeroWeight { .. })
        ));
        assert!(matches!(
            SignedDigraph::from_weight_rows(&[vec![1.0]]),
            Err(GraphError::NonZeroDiagonal { node: 1 })
        ));
        assert!(matches!(SignedDigraph::empty(0), Err(GraphError::Empty)));
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = SignedDigraph::from_edges(3, &[(0, 1, 1.0), (1, 2, -2.0), (2, 0, 1.5)]).unwrap();
        let full = induced_subgraph(&g, &[2, 0, 1]).unwrap();
        assert_eq!(full.graph, g);
        let single = induced_subgraph(&g, &[0]).unwrap();
        assert_eq!(single.graph.node_count(), 1);
        assert_eq!(single.graph.edge_count(), 0);
        let pair = induced_subgraph(&g, &[1, 2]).unwrap();
        assert_eq!(pair.graph.weight(1, 0), -2.0);
        assert_eq!(pair.local_index(2), Some(1));
        assert!(matches!(
            induced_subgraph(&g, &[]),
            Err(GraphError::EmptyNodeSet)
        ));
        assert!(matches!(
            induced_subgraph(&g, &[3]),
            Err(GraphError::NodeOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn blocks_of_a_path() {
        let view = root_ordered_blocks::<f64>(&path2(1.0), &[0]).unwrap();
        let b = view.blocks.as_ref().unwrap();
        assert_eq!(b.l_r.to_rows(), vec![vec![0.0]]);
        assert_eq!(b.a_rnr.to_rows(), vec![vec![1.0]]);
        assert_eq!(b.l_nr.to_rows(), vec![vec![0.0]]);
        assert_eq!(b.b, vec![1.0]);
        assert_eq!(b.reassemble(), view.laplacian.permuted(&view.root_order));
    }

    #[test]
    fn blocks_degenerate_when_all_nodes_are_roots() {
        let g = SignedDigraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, -1.0)]).unwrap();
        let view = root_ordered_blocks::<f64>(&g, &[0, 1, 2]).unwrap();
        let b = view.blocks.unwrap();
        assert_eq!(b.l_r, view.laplacian);
        assert_eq!(b.a_rnr.rows(), 0);
        assert!(b.b.is_empty());
    }

    #[test]
    fn blocks_reject_open_root_set() {
        assert!(matches!(
            root_ordered_blocks::<f64>(&path2(1.0), &[1]),
            Err(GraphError::InvalidRootSet(_))
        ));
        assert!(matches!(
            root_ordered_blocks::<f64>(&path2(1.0), &[]),
            Err(GraphError::EmptyNodeSet)
        ));
    }
}
