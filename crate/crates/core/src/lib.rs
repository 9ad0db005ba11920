//! Analysis of signed digraphs under the linear protocol `ẋ = -Lx`.
//!
//! The crate computes structural decompositions (SCCs, roots, leaders),
//! per-node structural balance, determinant-based null vectors of the signed
//! Laplacian, closed-form terminal states, a behavior classification, and a
//! fixed-step simulator used to cross-check every prediction.
//!
//! Linear algebra is generic over [`Scalar`]; the aliases below pick the
//! floating-point and exact-rational instantiations.

pub mod balance;
pub mod behavior;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod random;
pub mod scalar;
pub mod sim;
pub mod spectral;

pub use balance::{
    apply_gauge, classify_root_condition, gauge_partition, graph_balance, is_balanced_node,
    node_balance, BalanceReport, BalanceVerdict, GaugeVector, RootCondition,
};
pub use behavior::{
    classify, predict, terminal_state, verify_report, Behavior, BehaviorReport, Verification,
};
pub use connectivity::{analyze_connectivity, ancestor_closure, ConnectivityReport};
pub use error::{BehaviorError, GeneratorError, GraphError, MatrixError, SimError, SpectralError};
pub use graph::{
    induced_subgraph, induced_unsigned, laplacian, root_ordered_blocks, LaplacianView,
    SignedDigraph,
};
pub use io::{from_edge_list, from_json, graph_hash, parse_graph, to_edge_list, to_json};
pub use matrix::{determinant, nullspace_oracle, rank, Matrix};
pub use random::{random_graph, random_state, RandomGraphOptions};
pub use scalar::Scalar;
pub use sim::{converged_state, simulate, SimOptions, Trajectory};
pub use spectral::{
    certify, leader_modes, left_eigenvector, right_eigenvector, LeaderMode, SpectralCertificate,
};

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type ExactMatrix = Matrix<Rational>;
pub type Certificate64 = SpectralCertificate<f64>;
pub type Certificate32 = SpectralCertificate<f32>;
pub type ExactCertificate = SpectralCertificate<Rational>;
pub type LaplacianView64 = LaplacianView<f64>;
pub type ExactLaplacianView = LaplacianView<Rational>;
pub type BehaviorReport64 = BehaviorReport<f64>;
pub type ExactBehaviorReport = BehaviorReport<Rational>;
