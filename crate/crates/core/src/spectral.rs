//! Zero-eigenvalue eigenvectors of signed Laplacians, built from determinants.
//!
//! For a quasi-strongly connected graph whose root subgraph is balanced with
//! gauge `σ`, and with the Laplacian in root-ordered block form
//!
//! ```text
//! L = [ L_r      0        ]
//!     [ -A_rnr   L_nr + B ]
//! ```
//!
//! the right null vector has `ξ_r = σ` on the roots and, on each non-root
//! position `j`,
//!
//! ```text
//! ξ_{m+j} = -det(Φ_j) / det(L_nr + B)
//! ```
//!
//! where `Φ_j` is `L_nr + B` with column `j` replaced by `-A_rnr ξ_r`. The
//! left null vector is supported on the roots with `η_i = σ_i det(L_r^{(ii)})`,
//! `L_r^{(ii)}` being `L_r` without row and column `i`.
//!
//! The same construction applies with the leader set of an arbitrary graph
//! in place of the roots (see [`leader_modes`]); each balanced leader
//! component then contributes one independent null vector.

use serde_json::json;

use crate::balance::{classify_root_condition, gauge_partition, GaugeVector, RootCondition};
use crate::connectivity::{analyze_connectivity, ConnectivityReport};
use crate::error::SpectralError;
use crate::graph::{
    induced_subgraph, laplacian_matrix, root_ordered_blocks, LaplacianView, RootBlocks,
    SignedDigraph,
};
use crate::matrix::{determinant, rank, Matrix};
use crate::scalar::{dot, max_abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCertificate<T> {
    pub xi: Vec<T>,
    pub eta: Vec<T>,
    pub det_l: T,
    /// `ηᵀξ`
    pub inner: T,
    /// `‖Lξ‖∞`
    pub residual_right: T,
    /// `‖ηᵀL‖∞`
    pub residual_left: T,
    pub condition: RootCondition,
    pub roots: Vec<usize>,
    pub root_gauge: GaugeVector,
}

impl<T: Scalar> SpectralCertificate<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "xi": self.xi.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "eta": self.eta.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "det_L": self.det_l.to_json(),
            "inner": self.inner.to_json(),
            "residuals": {
                "right": self.residual_right.to_json(),
                "left": self.residual_left.to_json(),
            },
            "condition": self.condition.as_str(),
            "roots": crate::connectivity::one_based(&self.roots),
        })
    }
}

fn blocks_of<T>(view: &LaplacianView<T>) -> Result<&RootBlocks<T>, SpectralError> {
    view.blocks.as_ref().ok_or(SpectralError::MissingBlocks)
}

fn check_gauge<T: Scalar>(
    blocks: &RootBlocks<T>,
    gauge: &GaugeVector,
) -> Result<(), SpectralError> {
    let m = blocks.root_count();
    if gauge.len() != m {
        return Err(SpectralError::GaugeLength {
            expected: m,
            found: gauge.len(),
        });
    }
    for i in 0..m {
        for j in (0..m).filter(|&j| j != i) {
            // a_ij = -l_ij must satisfy σ_i σ_j a_ij ≥ 0
            let a = -blocks.l_r[(i, j)].clone();
            let s = T::lift(f64::from(gauge.sigma[i] * gauge.sigma[j]));
            if a * s < T::zero() {
                return Err(SpectralError::GaugeMismatch);
            }
        }
    }
    Ok(())
}

fn require_zero_eigenvalue(cond: RootCondition) -> Result<(), SpectralError> {
    if cond.has_zero_eigenvalue() {
        Ok(())
    } else {
        Err(SpectralError::NoZeroEigenvalue)
    }
}

/// Cramer's-rule extension of root values `xi_r` to the non-root block.
/// Returns the full vector in root order.
fn extend_from_roots<T: Scalar>(
    blocks: &RootBlocks<T>,
    xi_r: &[T],
) -> Result<Vec<T>, SpectralError> {
    let follower = blocks.follower_block();
    let k = follower.rows();
    let mut xi = xi_r.to_vec();
    if k == 0 {
        return Ok(xi);
    }
    if rank(&follower, &T::default_tolerance()) < k {
        return Err(SpectralError::SingularFollowerBlock);
    }
    let denom = determinant(&follower)?;
    let rhs: Vec<T> = blocks.a_rnr.mul_vec(xi_r).into_iter().map(|v| -v).collect();
    for j in 0..k {
        let phi = follower.with_column(j, &rhs);
        xi.push(-determinant(&phi)? / denom.clone());
    }
    Ok(xi)
}

/// `σ_i det(L_r^{(ii)})` for each root, where the empty minor has determinant one.
fn root_cofactors<T: Scalar>(l_r: &Matrix<T>, sigma: &[i8]) -> Result<Vec<T>, SpectralError> {
    (0..l_r.rows())
        .map(|i| {
            let d = determinant(&l_r.minor(i, i))?;
            Ok(if sigma[i] < 0 { -d } else { d })
        })
        .collect()
}

/// Right null vector `ξ` in original node order. `root_gauge` is indexed
/// like `view.roots()` and must certify balance of the root subgraph.
pub fn right_eigenvector<T: Scalar>(
    view: &LaplacianView<T>,
    root_gauge: &GaugeVector,
    cond: RootCondition,
) -> Result<Vec<T>, SpectralError> {
    require_zero_eigenvalue(cond)?;
    let blocks = blocks_of(view)?;
    check_gauge(blocks, root_gauge)?;
    let xi_r = root_gauge.to_scalars::<T>();
    let xi = extend_from_roots(blocks, &xi_r)?;
    Ok(view.unpermute(&xi))
}

/// Left null vector `η` in original node order: `σ_i det(L_r^{(ii)})` on the
/// roots, exactly zero elsewhere. Not normalized.
pub fn left_eigenvector<T: Scalar>(
    view: &LaplacianView<T>,
    root_gauge: &GaugeVector,
    cond: RootCondition,
) -> Result<Vec<T>, SpectralError> {
    require_zero_eigenvalue(cond)?;
    let blocks = blocks_of(view)?;
    check_gauge(blocks, root_gauge)?;
    let mut eta = root_cofactors(&blocks.l_r, &root_gauge.sigma)?;
    eta.resize(view.root_order.len(), T::zero());
    Ok(view.unpermute(&eta))
}

/// Full spectral certificate for a quasi-strongly connected graph.
pub fn certify<T: Scalar>(g: &SignedDigraph) -> Result<SpectralCertificate<T>, SpectralError> {
    let report = analyze_connectivity(g);
    certify_with(g, &report)
}

pub fn certify_with<T: Scalar>(
    g: &SignedDigraph,
    report: &ConnectivityReport,
) -> Result<SpectralCertificate<T>, SpectralError> {
    let cond = classify_root_condition(g, report)?;
    require_zero_eigenvalue(cond)?;
    let view = root_ordered_blocks::<T>(g, &report.roots)?;
    let root_graph = induced_subgraph(g, &report.roots)?;
    let root_gauge = gauge_partition(&root_graph.graph)
        .gauge()
        .cloned()
        .ok_or(SpectralError::GaugeMismatch)?;
    let xi = right_eigenvector(&view, &root_gauge, cond)?;
    let eta = left_eigenvector(&view, &root_gauge, cond)?;
    let l = &view.laplacian;
    Ok(SpectralCertificate {
        det_l: determinant(l)?,
        inner: dot(&eta, &xi),
        residual_right: max_abs(&l.mul_vec(&xi)),
        residual_left: max_abs(&l.left_mul_vec(&eta)),
        xi,
        eta,
        condition: cond,
        roots: report.roots.clone(),
        root_gauge,
    })
}

/// One independent zero-eigenvalue mode, attached to a balanced leader
/// component (a source SCC of the condensation).
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderMode<T> {
    /// Nodes of the leader component, ascending.
    pub group: Vec<usize>,
    /// Gauge on `group`, smallest member +1.
    pub gauge: Vec<i8>,
    /// Right null vector: `gauge` on the group, zero on every other leader.
    pub right: Vec<T>,
    /// Left null vector, supported on the group.
    pub left: Vec<T>,
    /// `left · right`
    pub inner: T,
}

impl<T: Scalar> LeaderMode<T> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "leaders": crate::connectivity::one_based(&self.group),
            "gauge": self.gauge,
            "xi": self.right.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "eta": self.left.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "inner": self.inner.to_json(),
        })
    }
}

/// Basis of the right and left null spaces of `L` for an arbitrary graph,
/// one mode per balanced leader component. Unbalanced leader components
/// carry no zero eigenvalue and contribute nothing.
pub fn leader_modes<T: Scalar>(g: &SignedDigraph) -> Result<Vec<LeaderMode<T>>, SpectralError> {
    let report = analyze_connectivity(g);
    leader_modes_with(g, &report)
}

pub fn leader_modes_with<T: Scalar>(
    g: &SignedDigraph,
    report: &ConnectivityReport,
) -> Result<Vec<LeaderMode<T>>, SpectralError> {
    let view = root_ordered_blocks::<T>(g, &report.leaders)?;
    let blocks = blocks_of(&view)?;
    let leaders = view.roots().to_vec();
    let mut modes = Vec::new();
    for group in report.leader_groups() {
        let sub = induced_subgraph(g, group)?;
        let Some(gauge) = gauge_partition(&sub.graph).gauge().cloned() else {
            continue;
        };
        let mut xi_r = vec![T::zero(); leaders.len()];
        for (k, &v) in group.iter().enumerate() {
            let pos = leaders.binary_search(&v).expect("group member is a leader");
            xi_r[pos] = T::lift(f64::from(gauge.sigma[k]));
        }
        let right = view.unpermute(&extend_from_roots(blocks, &xi_r)?);

        let l_s = laplacian_matrix::<T>(&sub.graph);
        let cofactors = root_cofactors(&l_s, &gauge.sigma)?;
        let mut left = vec![T::zero(); g.node_count()];
        for (k, &v) in group.iter().enumerate() {
            left[v] = cofactors[k].clone();
        }
        let inner = dot(&left, &right);
        modes.push(LeaderMode {
            group: group.to_vec(),
            gauge: gauge.sigma,
            right,
            left,
            inner,
        });
    }
    Ok(modes)
}

/// `Σ_k c_k ξ_k` over the modes' right vectors.
pub fn combine_modes<T: Scalar>(modes: &[LeaderMode<T>], coefficients: &[T]) -> Vec<T> {
    assert_eq!(modes.len(), coefficients.len(), "one coefficient per mode");
    let n = modes.first().map_or(0, |m| m.right.len());
    let mut out = vec![T::zero(); n];
    for (mode, c) in modes.iter().zip(coefficients) {
        for (o, r) in out.iter_mut().zip(&mode.right) {
            *o = o.clone() + c.clone() * r.clone();
        }
    }
    out
}

/// Coefficients that give leader node `v` the sign `s` for every `(v, s)`
/// in `signs`; modes not mentioned keep coefficient +1.
pub fn coefficients_for_leader_signs<T: Scalar>(
    modes: &[LeaderMode<T>],
    signs: &[(usize, i8)],
) -> Vec<T> {
    modes
        .iter()
        .map(|mode| {
            let flip = signs.iter().find_map(|&(v, s)| {
                mode.group
                    .binary_search(&v)
                    .ok()
                    .map(|k| mode.gauge[k] * s.signum())
            });
            T::lift(f64::from(flip.unwrap_or(1)))
        })
        .collect()
}

/// Rank of `L` under the given pivot tolerance; `n - 1` exactly when a
/// quasi-strongly connected graph satisfies C1 or C2.
pub fn laplacian_rank<T: Scalar>(g: &SignedDigraph, tol: &T) -> usize {
    rank(&laplacian_matrix::<T>(g), tol)
}
