//! Toolkit for directed Steiner tree on planar graphs.
//!
//! The pieces fit together like this: [`embed`] holds the rotation-system
//! multigraph model that witnesses planarity, [`paths`] computes shortest
//! dipaths and BFS arborescences on it, [`separator`] finds balanced
//! shortest-path separators, [`solver`] runs the divide-and-conquer
//! approximation on top of those, and [`oracle`] provides exact optima for
//! small instances so results can be audited.

pub mod embed;
pub mod oracle;
pub mod paths;
pub mod separator;
pub mod solver;
#[cfg(test)]
pub(crate) mod testutil;

pub use embed::{ContractionMap, Dart, EdgeId, EmbedError, EmbeddedDigraph, End, VertexId};
pub use oracle::{
    approximation_bound, brute_force_dst, exact_dst, ratio_report, OracleError, OracleOutcome,
    RatioRecord, DEFAULT_ORACLE_CAP,
};
pub use paths::{
    bfs_arborescences, dijkstra, shortest_dipath, ArborescenceSet, DistanceTable, PathError,
};
pub use separator::{
    directed_separator, multirooted_separator, three_path_separator, SeparatorError,
    SeparatorResult, WeightAssignment,
};
pub use solver::{
    build_subinstances, merge_solutions, node_weighted_reduction, preprocess_far, prune,
    scale_costs, solve, DyadicEstimate, Instance, ScaleOutcome, ScalingInfo, SolveError,
    SolveOptions, SolveOutcome, SolveReport, SolveStats, Solution, Subinstance,
};
