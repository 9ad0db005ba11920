//! Structural balance of graphs and of individual nodes.
//!
//! A graph is balanced when a sign vector `σ` exists with
//! `σ_i σ_j sign(a_ij) = +1` for every edge. Direction and magnitude are
//! irrelevant, so the test is a parity 2-colouring of the undirected
//! support.

use std::collections::VecDeque;

use serde_json::json;

use crate::connectivity::{ancestor_closure, ConnectivityReport};
use crate::error::{GraphError, SpectralError};
use crate::graph::{induced_subgraph, SignedDigraph};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Diagonal gauge `D = diag(σ)` with `σ_i ∈ {-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeVector {
    pub sigma: Vec<i8>,
    /// Whether the smallest node of every weak component is fixed to +1.
    pub anchored: bool,
}

impl GaugeVector {
    pub fn new(sigma: Vec<i8>) -> Self {
        assert!(
            sigma.iter().all(|s| *s == 1 || *s == -1),
            "gauge entries must be ±1"
        );
        Self {
            sigma,
            anchored: false,
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn to_scalars<T: Scalar>(&self) -> Vec<T> {
        self.sigma.iter().map(|&s| T::lift(f64::from(s))).collect()
    }

    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        let n = self.len();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                T::lift(f64::from(self.sigma[i]))
            } else {
                T::zero()
            }
        })
    }

    /// Every edge satisfies `σ_i σ_j a_ij ≥ 0`.
    pub fn certifies(&self, g: &SignedDigraph) -> bool {
        self.len() == g.node_count()
            && g.edges()
                .iter()
                .all(|e| f64::from(self.sigma[e.dst] * self.sigma[e.src]) * e.weight > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceVerdict {
    Balanced(GaugeVector),
    /// Nodes of an undirected cycle in the support whose sign product is
    /// negative; consecutive nodes (and last/first) are adjacent.
    Unbalanced {
        witness_cycle: Vec<usize>,
    },
}

impl BalanceVerdict {
    pub fn is_balanced(&self) -> bool {
        matches!(self, BalanceVerdict::Balanced(_))
    }

    pub fn gauge(&self) -> Option<&GaugeVector> {
        match self {
            BalanceVerdict::Balanced(g) => Some(g),
            BalanceVerdict::Unbalanced { .. } => None,
        }
    }
}

/// Conditions for a zero Laplacian eigenvalue on a quasi-strongly connected graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootCondition {
    /// Exactly one rooted node.
    C1,
    /// Several rooted nodes and a balanced root subgraph.
    C2,
    /// Unbalanced root subgraph.
    C3,
}

impl RootCondition {
    pub fn has_zero_eigenvalue(self) -> bool {
        !matches!(self, RootCondition::C3)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RootCondition::C1 => "C1",
            RootCondition::C2 => "C2",
            RootCondition::C3 => "C3",
        }
    }
}

impl std::fmt::Display for RootCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parity BFS over the support. Components are explored from their
/// smallest node, which is assigned +1.
pub fn gauge_partition(g: &SignedDigraph) -> BalanceVerdict {
    let n = g.node_count();
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for e in g.edges() {
        let s = if e.weight > 0.0 { 1 } else { -1 };
        adj[e.dst].push((e.src, s));
        adj[e.src].push((e.dst, s));
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut sigma = vec![0i8; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for start in 0..n {
        if sigma[start] != 0 {
            continue;
        }
        sigma[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, s) in &adj[v] {
                let want = sigma[v] * s;
                if sigma[w] == 0 {
                    sigma[w] = want;
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                } else if sigma[w] != want {
                    return BalanceVerdict::Unbalanced {
                        witness_cycle: fundamental_cycle(v, w, &parent, &depth),
                    };
                }
            }
        }
    }
    BalanceVerdict::Balanced(GaugeVector {
        sigma,
        anchored: true,
    })
}

/// Tree path `v → lca → w`, closed by the non-tree constraint between `w` and `v`.
fn fundamental_cycle(v: usize, w: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (v, w);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop(); // lca already ends `left`
    right.reverse();
    left.extend(right);
    left
}

pub fn graph_balance(g: &SignedDigraph) -> bool {
    let balanced = gauge_partition(g).is_balanced();
    debug_assert_eq!(
        balanced,
        node_balance(g).iter().all(|&b| b),
        "graph balance must agree with per-node balance"
    );
    balanced
}

/// Whether the induced subgraph on the ancestor closure of `i` is balanced.
pub fn is_balanced_node(g: &SignedDigraph, i: usize) -> Result<bool, GraphError> {
    let closure = ancestor_closure(g, i)?;
    let sub = induced_subgraph(g, &closure)?;
    Ok(gauge_partition(&sub.graph).is_balanced())
}

pub fn node_balance(g: &SignedDigraph) -> Vec<bool> {
    (0..g.node_count())
        .map(|i| is_balanced_node(g, i).expect("index in range"))
        .collect()
}

pub fn classify_root_condition(
    g: &SignedDigraph,
    report: &ConnectivityReport,
) -> Result<RootCondition, SpectralError> {
    if report.roots.is_empty() {
        return Err(SpectralError::NotQuasiStronglyConnected);
    }
    if report.roots.len() == 1 {
        return Ok(RootCondition::C1);
    }
    let sub = induced_subgraph(g, &report.roots)?;
    Ok(if gauge_partition(&sub.graph).is_balanced() {
        RootCondition::C2
    } else {
        RootCondition::C3
    })
}

/// Conjugates the weights by `D`: `a'_ij = σ_i σ_j a_ij`.
pub fn apply_gauge(g: &SignedDigraph, gauge: &GaugeVector) -> SignedDigraph {
    assert_eq!(
        gauge.len(),
        g.node_count(),
        "gauge length must match node count"
    );
    g.map_weights(|i, j, w| w * f64::from(gauge.sigma[i] * gauge.sigma[j]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub verdict: BalanceVerdict,
    pub node_balance: Vec<bool>,
}

impl BalanceReport {
    pub fn new(g: &SignedDigraph) -> Self {
        Self {
            verdict: gauge_partition(g),
            node_balance: node_balance(g),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (sigma, witness) = match &self.verdict {
            BalanceVerdict::Balanced(gauge) => (Some(gauge.sigma.clone()), None),
            BalanceVerdict::Unbalanced { witness_cycle } => {
                (None, Some(crate::connectivity::one_based(witness_cycle)))
            }
        };
        json!({
            "balanced": self.verdict.is_balanced(),
            "sigma": sigma,
            "witness_cycle": witness,
            "node_balance": self.node_balance,
        })
    }
}
