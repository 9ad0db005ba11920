//! Collective-behavior classification and terminal-state prediction.
//!
//! Quasi-strongly connected graphs are decided by the rank of `L`: full rank
//! means every state decays to zero, rank `n - 1` means the roots reach
//! bipartite consensus and the non-roots settle in between (strictly inside
//! exactly when some node is structurally unbalanced). Any other graph is
//! split into weak components; it tracks a bipartite containment hull when
//! some node is balanced and is stable otherwise.

use std::fmt::Write as _;

use serde_json::json;

use crate::balance::{classify_root_condition, node_balance, RootCondition};
use crate::connectivity::{analyze_connectivity, one_based, ConnectivityReport};
use crate::error::{BehaviorError, SpectralError};
use crate::graph::{induced_subgraph, laplacian_matrix, SignedDigraph};
use crate::matrix::rank;
use crate::scalar::{dot, Scalar};
use crate::sim::{simulate, SimOptions};
use crate::spectral::{certify_with, leader_modes_with};

/// Tolerance on `|ξ_i| = 1` in floating-point mode.
pub const UNIT_MODULUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Behavior {
    BipartiteConsensus,
    IntervalBipartiteConsensus,
    BipartiteContainmentTracking,
    StateStability,
}

impl Behavior {
    pub fn as_str(self) -> &'static str {
        match self {
            Behavior::BipartiteConsensus => "bipartite_consensus",
            Behavior::IntervalBipartiteConsensus => "interval_bipartite_consensus",
            Behavior::BipartiteContainmentTracking => "bipartite_containment_tracking",
            Behavior::StateStability => "state_stability",
        }
    }

    /// Whether some trajectories keep a non-zero limit.
    pub fn is_consensus_type(self) -> bool {
        !matches!(self, Behavior::StateStability)
    }
}

impl std::fmt::Display for Behavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub nodes: Vec<usize>,
    pub quasi_strongly_connected: bool,
    pub condition: Option<RootCondition>,
    pub behavior: Behavior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorReport<T> {
    pub behavior: Behavior,
    /// Interval bipartite consensus that is not bipartite consensus.
    pub strict_interval: bool,
    /// The graph has no root, so the weak-component decomposition and the
    /// leader-mode projection were used in place of the single-root theory.
    pub extension: bool,
    pub condition: Option<RootCondition>,
    pub rank: usize,
    pub node_balance: Vec<bool>,
    pub roots: Vec<usize>,
    pub leaders: Vec<usize>,
    /// Right null vector, for quasi-strongly connected C1/C2 graphs.
    pub xi: Option<Vec<T>>,
    /// Predicted `θ = lim x(t)`, present once an initial state is given.
    pub theta: Option<Vec<T>>,
    pub per_component: Vec<ComponentReport>,
}

impl<T: Scalar> BehaviorReport<T> {
    /// `(leader, |θ_leader|)`: each leader spans `[-|θ_j|, |θ_j|]`.
    pub fn leader_intervals(&self) -> Vec<(usize, T)> {
        match &self.theta {
            Some(theta) => self.leaders.iter().map(|&j| (j, theta[j].abs())).collect(),
            None => Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vec_json = |v: &Option<Vec<T>>| {
            v.as_ref()
                .map(|v| v.iter().map(Scalar::to_json).collect::<Vec<_>>())
        };
        json!({
            "behavior": self.behavior.as_str(),
            "strict_interval": self.strict_interval,
            "extension": self.extension,
            "condition": self.condition.map(RootCondition::as_str),
            "rank": self.rank,
            "node_balance": self.node_balance,
            "roots": one_based(&self.roots),
            "leaders": one_based(&self.leaders),
            "xi": vec_json(&self.xi),
            "theta": vec_json(&self.theta),
            "leader_intervals": self.leader_intervals().iter().map(|(j, b)| {
                json!({ "leader": j + 1, "interval": [(-b.clone()).to_json(), b.to_json()] })
            }).collect::<Vec<_>>(),
            "per_component": self.per_component.iter().map(|c| json!({
                "nodes": one_based(&c.nodes),
                "quasi_strongly_connected": c.quasi_strongly_connected,
                "condition": c.condition.map(RootCondition::as_str),
                "behavior": c.behavior.as_str(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Per-node table: role, balance label, `ξ_i`, `θ_i`.
    pub fn to_table(&self, labels: Option<&[String]>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "behavior: {}", self.behavior);
        if self.strict_interval {
            let _ = writeln!(out, "note: strict interval (not bipartite)");
        }
        if self.extension {
            let _ = writeln!(
                out,
                "note (extension): not quasi-strongly connected; analyzed per weak component"
            );
        }
        let _ = writeln!(
            out,
            "{:>5} {:>10} {:>8} {:>11} {:>14} {:>14}",
            "node", "label", "role", "balance", "xi", "theta"
        );
        for i in 0..self.node_balance.len() {
            let role = if self.roots.contains(&i) {
                "root"
            } else if self.leaders.binary_search(&i).is_ok() {
                "leader"
            } else {
                "follower"
            };
            let fmt = |v: &Option<Vec<T>>| v.as_ref().map_or("-".to_string(), |v| v[i].to_string());
            let _ = writeln!(
                out,
                "{:>5} {:>10} {:>8} {:>11} {:>14} {:>14}",
                i + 1,
                labels.map_or("", |l| l[i].as_str()),
                role,
                if self.node_balance[i] {
                    "balanced"
                } else {
                    "unbalanced"
                },
                fmt(&self.xi),
                fmt(&self.theta),
            );
        }
        out
    }
}

fn has_unit_modulus<T: Scalar>(x: &T) -> bool {
    (x.abs() - T::one()).is_negligible(&T::one(), &T::lift(UNIT_MODULUS_TOL))
}

fn classify_component(
    g: &SignedDigraph,
    report: &ConnectivityReport,
    balance: &[bool],
    full_rank: bool,
) -> Result<(Behavior, Option<RootCondition>), SpectralError> {
    if report.is_quasi_strongly_connected {
        let cond = classify_root_condition(g, report)?;
        let behavior = if full_rank {
            Behavior::StateStability
        } else {
            Behavior::IntervalBipartiteConsensus
        };
        Ok((behavior, Some(cond)))
    } else if balance.iter().any(|&b| b) {
        Ok((Behavior::BipartiteContainmentTracking, None))
    } else {
        Ok((Behavior::StateStability, None))
    }
}

pub fn classify<T: Scalar>(g: &SignedDigraph) -> Result<BehaviorReport<T>, BehaviorError> {
    let n = g.node_count();
    let report = analyze_connectivity(g);
    let balance = node_balance(g);
    let rank = rank(&laplacian_matrix::<T>(g), &T::default_tolerance());
    let (mut behavior, condition) = classify_component(g, &report, &balance, rank == n)?;

    let mut xi = None;
    let mut strict_interval = false;
    if behavior == Behavior::IntervalBipartiteConsensus {
        let cert = certify_with::<T>(g, &report)?;
        if cert.xi.iter().all(has_unit_modulus) {
            behavior = Behavior::BipartiteConsensus;
        } else {
            strict_interval = true;
        }
        xi = Some(cert.xi);
    }

    let mut per_component = Vec::new();
    for nodes in &report.weak_components {
        let sub = induced_subgraph(g, nodes).map_err(SpectralError::from)?;
        let sub_report = analyze_connectivity(&sub.graph);
        let sub_balance: Vec<bool> = nodes.iter().map(|&v| balance[v]).collect();
        let sub_rank =
            crate::matrix::rank(&laplacian_matrix::<T>(&sub.graph), &T::default_tolerance());
        let (mut b, cond) = classify_component(
            &sub.graph,
            &sub_report,
            &sub_balance,
            sub_rank == nodes.len(),
        )?;
        if b == Behavior::IntervalBipartiteConsensus && sub_balance.iter().all(|&x| x) {
            b = Behavior::BipartiteConsensus;
        }
        per_component.push(ComponentReport {
            nodes: nodes.clone(),
            quasi_strongly_connected: sub_report.is_quasi_strongly_connected,
            condition: cond,
            behavior: b,
        });
    }

    Ok(BehaviorReport {
        behavior,
        strict_interval,
        extension: !report.is_quasi_strongly_connected,
        condition,
        rank,
        node_balance: balance,
        roots: report.roots.clone(),
        leaders: report.leaders.clone(),
        xi,
        theta: None,
        per_component,
    })
}

/// Classification plus the predicted terminal state for `x0`.
pub fn predict<T: Scalar>(g: &SignedDigraph, x0: &[T]) -> Result<BehaviorReport<T>, BehaviorError> {
    let mut report = classify::<T>(g)?;
    report.theta = Some(terminal_state(g, x0)?);
    Ok(report)
}

/// `lim x(t)` for `ẋ = -Lx`, computed per weak component:
///
/// * quasi-strongly connected under C1/C2: `ξ ηᵀ x0 / (ηᵀ ξ)`;
/// * quasi-strongly connected under C3: zero;
/// * otherwise the projection `Σ_k ξ_k (η_kᵀ x0) / (η_kᵀ ξ_k)` over the
///   modes of the balanced leader components, whose pairwise products
///   `η_kᵀ ξ_l` vanish for `k ≠ l`.
pub fn terminal_state<T: Scalar>(g: &SignedDigraph, x0: &[T]) -> Result<Vec<T>, BehaviorError> {
    let n = g.node_count();
    if x0.len() != n {
        return Err(BehaviorError::LengthMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    let mut theta = vec![T::zero(); n];
    for nodes in analyze_connectivity(g).weak_components {
        let sub = induced_subgraph(g, &nodes).map_err(SpectralError::from)?;
        let local_x0: Vec<T> = nodes.iter().map(|&v| x0[v].clone()).collect();
        let local = component_limit(&sub.graph, &local_x0)?;
        for (k, &v) in nodes.iter().enumerate() {
            theta[v] = local[k].clone();
        }
    }
    Ok(theta)
}

fn component_limit<T: Scalar>(g: &SignedDigraph, x0: &[T]) -> Result<Vec<T>, BehaviorError> {
    let n = g.node_count();
    let report = analyze_connectivity(g);
    if report.is_quasi_strongly_connected {
        let cond = classify_root_condition(g, &report)?;
        if !cond.has_zero_eigenvalue() {
            return Ok(vec![T::zero(); n]);
        }
        let cert = certify_with::<T>(g, &report)?;
        let scale = dot(&cert.eta, x0) / cert.inner;
        return Ok(cert.xi.iter().map(|v| v.clone() * scale.clone()).collect());
    }

    let modes = leader_modes_with::<T>(g, &report)?;
    let mut theta = vec![T::zero(); n];
    for mode in &modes {
        let scale = T::one();
        if mode.inner.is_negligible(&scale, &T::default_tolerance()) {
            return simulated_limit(g, x0);
        }
        let coeff = dot(&mode.left, x0) / mode.inner.clone();
        for (t, r) in theta.iter_mut().zip(&mode.right) {
            *t = t.clone() + coeff.clone() * r.clone();
        }
    }
    Ok(theta)
}

fn simulated_limit<T: Scalar>(g: &SignedDigraph, x0: &[T]) -> Result<Vec<T>, BehaviorError> {
    log::warn!("projection is ill-conditioned; falling back to long-horizon simulation");
    let x: Vec<f64> = x0.iter().map(Scalar::approx).collect();
    let opts = SimOptions::default().with_horizon(5000.0);
    let traj = simulate(g, &x, &opts)?;
    if !traj.converged {
        return Err(BehaviorError::NoWellDefinedLimit);
    }
    Ok(traj.final_state.iter().map(|&v| T::lift(v)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Nodes that violate the check.
    pub offending: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "passed": self.passed,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                "offending": one_based(&c.offending),
            })).collect::<Vec<_>>(),
        })
    }
}

fn check(name: &'static str, offending: Vec<usize>, detail: String) -> Check {
    Check {
        name,
        passed: offending.is_empty(),
        detail,
        offending,
    }
}

/// Tests `observed` against the defining condition of the classified
/// behavior and, when the report carries a prediction, entrywise against it.
pub fn verify_report<T: Scalar>(
    report: &BehaviorReport<T>,
    observed: &[f64],
    tol: f64,
) -> Verification {
    let moduli: Vec<f64> = observed.iter().map(|x| x.abs()).collect();
    let mut checks = Vec::new();
    match report.behavior {
        Behavior::StateStability => {
            let bad = (0..observed.len()).filter(|&i| moduli[i] > tol).collect();
            checks.push(check("state_stability", bad, format!("|θ_i| ≤ {tol}")));
        }
        Behavior::BipartiteConsensus => {
            let common = moduli.iter().sum::<f64>() / moduli.len().max(1) as f64;
            let bad = (0..observed.len())
                .filter(|&i| (moduli[i] - common).abs() > tol)
                .collect();
            checks.push(check(
                "bipartite_consensus",
                bad,
                format!("|θ_i| = {common:.9} within {tol}"),
            ));
        }
        Behavior::IntervalBipartiteConsensus => {
            let roots = &report.roots;
            let bar = roots.iter().map(|&r| moduli[r]).sum::<f64>() / roots.len().max(1) as f64;
            let bad_roots = roots
                .iter()
                .copied()
                .filter(|&r| (moduli[r] - bar).abs() > tol)
                .collect();
            checks.push(check(
                "interval_roots",
                bad_roots,
                format!("rooted |θ_i| = {bar:.9} within {tol}"),
            ));
            let bad_others = (0..observed.len())
                .filter(|i| !roots.contains(i) && moduli[*i] > bar + tol)
                .collect();
            checks.push(check(
                "interval_non_roots",
                bad_others,
                format!("non-rooted |θ_i| ≤ {bar:.9} + {tol}"),
            ));
        }
        Behavior::BipartiteContainmentTracking => {
            let bad = (0..observed.len())
                .filter(|&i| !report.leaders.iter().any(|&j| moduli[i] <= moduli[j] + tol))
                .collect();
            checks.push(check(
                "containment",
                bad,
                format!("θ_i in the union of leader intervals, slack {tol}"),
            ));
        }
    }
    if let Some(theta) = &report.theta {
        let bad = (0..observed.len())
            .filter(|&i| (theta[i].approx() - observed[i]).abs() > tol)
            .collect();
        checks.push(check(
            "terminal_state",
            bad,
            format!("|predicted - observed| ≤ {tol}"),
        ));
    }
    Verification {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
