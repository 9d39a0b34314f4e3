//! Independent solution verification.
//!
//! Deliberately shares nothing with the solver's feasibility logic beyond
//! instance loading: reachability is a local BFS over the chosen edge
//! tuples and the cost is re-summed here.

use crate::format::{LoadedInstance, SolutionFile};
use dstkit::embed::EdgeId;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum VerifyFailure {
    #[error("solution references unknown edge {0}")]
    UnknownEdge(u32),
    #[error("no dipath from any root to terminal(s) {}", format_ids(.0))]
    UnreachedTerminals(Vec<u32>),
    #[error("declared cost {declared} but edges sum to {actual}")]
    CostMismatch { declared: u64, actual: u64 },
}

fn format_ids(ids: &[u32]) -> String {
    ids.iter().map(|i| format!("v{i}")).collect::<Vec<_>>().join(", ")
}

/// Checks feasibility and the declared cost; returns the recomputed cost.
pub fn verify_solution(loaded: &LoadedInstance, sol: &SolutionFile) -> Result<u64, VerifyFailure> {
    let graph = &loaded.instance.graph;
    let mut adj: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut actual = 0u64;
    for &e in &sol.edges {
        match graph.try_edge(EdgeId(e)) {
            None => return Err(VerifyFailure::UnknownEdge(e)),
            Some(info) if info.aux => return Err(VerifyFailure::UnknownEdge(e)),
            Some(info) => {
                adj.entry(info.tail.0).or_default().push(info.head.0);
                actual += info.cost;
            }
        }
    }
    let mut reached: BTreeSet<u32> = loaded.instance.roots.iter().map(|r| r.0).collect();
    let mut stack: Vec<u32> = reached.iter().copied().collect();
    while let Some(v) = stack.pop() {
        for &u in adj.get(&v).into_iter().flatten() {
            if reached.insert(u) {
                stack.push(u);
            }
        }
    }
    let missing: Vec<u32> = loaded
        .instance
        .terminals
        .iter()
        .map(|t| t.0)
        .filter(|t| !reached.contains(t))
        .collect();
    if !missing.is_empty() {
        return Err(VerifyFailure::UnreachedTerminals(missing));
    }
    if actual != sol.cost {
        return Err(VerifyFailure::CostMismatch { declared: sol.cost, actual });
    }
    Ok(actual)
}
