//! Chemical reaction networks as weighted directed hypergraphs.
//!
//! - [`zmodule`]: signed multisets, the gcd reducing map, fraction-free
//!   elimination and saturation membership.
//! - [`network`]: species, complexes, reactions and the A, B, N, L matrices.
//! - [`parser`]: the `.crn` reaction language.
//! - [`matroid`]: hypercycle, cocycle and conservation bases; hyperspanning
//!   forests.
//! - [`loops`]: closed-loop enumeration.
//! - [`centrality`]: loop-incidence centrality.
//! - [`kinetics`]: mass-action vector field.

pub mod centrality;
pub mod datasets;
pub mod kinetics;
pub mod loops;
pub mod matroid;
pub mod network;
pub mod parser;
pub mod zmodule;

pub use centrality::{centrality_report, CentralityReport};
pub use loops::{enumerate_closed_loops, ClosedLoop, LoopOptions, Traversal};
pub use matroid::{
    cocycle_basis, conservation_laws, hypercycle_basis, hypercyclomatic_number, hyperspanning_forest, BasisKind,
    BasisSet, FluxVector,
};
pub use network::{
    adjacency_matrix, complex_matrices, hyperedges, stoichiometric_matrix, to_dot, Complex, Hyperedge, Reaction,
    ReactionNetwork, Term,
};
pub use parser::{format_canonical, parse_network, parse_network_with, ParseError, ParseOptions, SourceSpan};
pub use zmodule::{closure_contains, reduce, IntegerMatrix, SignedMultiset};
