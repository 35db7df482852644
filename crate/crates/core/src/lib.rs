//! Bruhat orders on binary contingency tables.
//!
//! `BCT(r, c)` is the set of 0/1 matrices with row sums `r` and column sums
//! `c`. This crate enumerates such families and builds three partial orders
//! on them: the combinatorial Bruhat order (entrywise domination of corner
//! sums), the secondary Bruhat order (generated by `L2 -> I2` interchanges),
//! and the geometric order (generated by attractive indecomposable block
//! swap moves). It also carries the brane-diagram calculus that labels torus
//! fixed points by these tables, and column resolutions of tables.

pub mod bits;
pub mod brane;
pub mod curves;
pub mod enumerate;
pub mod export;
pub mod matrix;
pub mod orders;
pub mod resolution;
pub mod sweep;

pub use curves::{
    apply_block_swap, curve_digraph, geometric_relation, is_attractive, matched_blocks, minimal_decomposition,
    tangent_weight, BlockSwapMove, CocharacterSpec, CurveArc, CurveDigraph, CurveError, MatchedBlock, TangentWeight,
};
pub use enumerate::{enumerate_bcts, gale_ryser_feasible, interchange_graph, BctFamily, InterchangeGraph};
pub use matrix::{leq_bruhat, BinaryMatrix, CornerSelection, IntegerMatrix, MarginPair, MatrixError};
pub use orders::{
    bruhat_relation, compare_relations, hasse, secondary_hasse_direct, secondary_relation, FiniteRelation,
    HasseDiagram, OrderError, RelationComparison, RelationKind,
};
pub use brane::{
    bct_to_tie, enumerate_tie_diagrams, parse_diagram, separated_diagram, tie_to_bct, BraneDiagram, BraneError,
    Fivebrane, HwDirection, TieDiagram,
};
pub use resolution::{
    check_resolution_compatibility, column_resolutions, maximal_resolutions, merge_columns, resolve_charges,
    two_column_leq, ChargeResolution, ResolutionError, ResolvedMatrix, ResolvedOrder,
};
pub use sweep::{run_sweep, verify_pair, SweepConfig, VerificationReport};
