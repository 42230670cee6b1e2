//! One-shot zero-error communication over discrete memoryless channels.
//!
//! - [`channel`]: channels, products, confusability graphs and hypergraphs,
//!   minimum-error codes.
//! - [`graph`]: maximum independent set (`c₀`), maximal cliques.
//! - [`packing`]: exact fractional packing `α*`, NS-assisted capacity and
//!   simulation cost.
//! - [`ks`]: Kochen-Specker basis sets, the Peres set, KS channels.
//! - [`se`]: entanglement-assistance certificates and protocol simulation.
//! - [`ns`]: non-signalling boxes and their composition with channels.
//! - [`games`]: channel games and strategy evaluation.
//!
//! All arithmetic is exact; see [`exact`].

pub mod channel;
pub mod error;
pub mod exact;
pub mod games;
pub mod graph;
pub mod ks;
pub mod ns;
pub mod packing;
pub mod se;

pub use channel::{min_error_code, parse_channel, Channel, MinErrorCode};
pub use error::{Error, Result};
pub use exact::{CRational, CVector, HermitianMatrix, Rational};
pub use graph::{
    is_complete, max_independent_set, maximal_cliques, Graph, Hyperedge, Hypergraph,
    IndependentSetResult,
};
pub use ks::{build_ks_channel, ks_verify, peres_basis_set, KsBasisSet, TransversalReport};
pub use ns::{
    compose_box_channel, example_box, example_channel, ns_zero_error_check, verify_ns, NsBox,
};
pub use packing::{
    best_graph_ns_bound, ns_capacity, sim_cost, solve_packing, NsCapacityReport, PackingSolution,
};
pub use se::{
    build_ks_certificate, check_certificate, simulate_protocol, ProtocolStats, SeCertificate,
    Verdict,
};
