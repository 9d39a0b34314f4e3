//! Ground-truth optima for small instances.
//!
//! [`exact_dst`] runs the terminal-subset dynamic program `f(S, v)` =
//! cheapest out-tree rooted at `v` covering `S`, combining subset splits at
//! `v` with a relay relaxation pass per subset (a Dijkstra over reversed
//! edges). [`brute_force_dst`] enumerates edge subsets outright and exists
//! to keep the DP honest. Multi-rooted instances go through a virtual
//! super-source, which is fine here because the oracle never touches the
//! embedding.

use crate::embed::{EdgeId, VertexId};
use crate::solver::{Instance, Solution};
use std::collections::{BTreeMap, BinaryHeap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance has {0} terminals, above the oracle cap {1}")]
    CapExceeded(usize, usize),
    #[error("instance has {0} edges, above the brute-force cap {1}")]
    TooManyEdges(usize, usize),
}

pub const DEFAULT_ORACLE_CAP: usize = 12;
pub const BRUTE_FORCE_EDGE_CAP: usize = 18;

/// Outcome of an exact computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(Solution),
    Infeasible,
}

impl OracleOutcome {
    pub fn cost(&self) -> Option<u64> {
        match self {
            OracleOutcome::Optimal(s) => Some(s.cost),
            OracleOutcome::Infeasible => None,
        }
    }
}

// Flat graph view used by both oracles: vertices re-indexed densely,
// optional super-source at index n for the multi-rooted case.
struct FlatGraph {
    // (tail, head, cost, original edge id or None for super-source arcs)
    arcs: Vec<(usize, usize, u64, Option<EdgeId>)>,
    out: Vec<Vec<usize>>, // arc indices per tail
    rev_in: Vec<Vec<usize>>,
    source: usize,
    terminals: Vec<usize>,
}

fn flatten(inst: &Instance) -> FlatGraph {
    let ids: Vec<VertexId> = inst.graph.vertices().collect();
    let index_of: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let n = ids.len();
    let mut arcs = Vec::new();
    for (e, info) in inst.graph.edges() {
        if info.aux {
            continue;
        }
        arcs.push((index_of[&info.tail], index_of[&info.head], info.cost, Some(e)));
    }
    let source = if inst.roots.len() == 1 {
        index_of[&inst.roots[0]]
    } else {
        for &r in &inst.roots {
            arcs.push((n, index_of[&r], 0, None));
        }
        n
    };
    let nn = if inst.roots.len() == 1 { n } else { n + 1 };
    let mut out = vec![Vec::new(); nn];
    let mut rev_in = vec![Vec::new(); nn];
    for (i, &(t, h, _, _)) in arcs.iter().enumerate() {
        out[t].push(i);
        rev_in[h].push(i);
    }
    let terminals = inst.terminals.iter().map(|t| index_of[t]).collect();
    FlatGraph { arcs, out, rev_in, source, terminals }
}

/// Exact optimum by dynamic programming over terminal subsets.
///
/// `f({t}, v) = d(v, t)`; for larger subsets, `f(S, v)` is the cheaper of a
/// split `f(S', v) + f(S \ S', v)` and a relay `c(v, u) + f(S, u)`, with the
/// relay minimisation done by one relaxation pass per subset.
pub fn exact_dst(inst: &Instance, cap: usize) -> Result<OracleOutcome, OracleError> {
    let k = inst.terminals.len();
    if k > cap {
        return Err(OracleError::CapExceeded(k, cap));
    }
    if k == 0 {
        return Ok(OracleOutcome::Optimal(Solution::empty()));
    }
    let fg = flatten(inst);
    let n = fg.out.len();
    let full: u32 = (1u32 << k) - 1;

    // f[S][v] plus a backpointer: either a relay arc or a split submask.
    let mut f = vec![vec![u64::MAX; n]; (full + 1) as usize];
    #[derive(Clone, Copy, PartialEq)]
    enum Back {
        None,
        Relay(usize),
        Split(u32),
    }
    let mut back = vec![vec![Back::None; n]; (full + 1) as usize];

    for s in 1..=full {
        let bits: Vec<usize> = (0..k).filter(|i| s >> i & 1 == 1).collect();
        if bits.len() == 1 {
            f[s as usize][fg.terminals[bits[0]]] = 0;
        } else {
            // Splits: combine two proper complementary submasks at v.
            let mut sub = (s - 1) & s;
            while sub != 0 {
                if sub < (s ^ sub) {
                    sub = (sub - 1) & s;
                    continue; // each unordered pair once
                }
                for v in 0..n {
                    let (a, b) = (f[sub as usize][v], f[(s ^ sub) as usize][v]);
                    if a != u64::MAX && b != u64::MAX && a + b < f[s as usize][v] {
                        f[s as usize][v] = a + b;
                        back[s as usize][v] = Back::Split(sub);
                    }
                }
                sub = (sub - 1) & s;
            }
        }
        // Relay pass: Dijkstra over reversed arcs from all current values.
        let mut heap: BinaryHeap<std::cmp::Reverse<(u64, usize)>> = BinaryHeap::new();
        for (v, &d) in f[s as usize].iter().enumerate() {
            if d != u64::MAX {
                heap.push(std::cmp::Reverse((d, v)));
            }
        }
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if d != f[s as usize][v] {
                continue;
            }
            for &ai in &fg.rev_in[v] {
                let (t, _, c, _) = fg.arcs[ai];
                if d + c < f[s as usize][t] {
                    f[s as usize][t] = d + c;
                    back[s as usize][t] = Back::Relay(ai);
                    heap.push(std::cmp::Reverse((d + c, t)));
                }
            }
        }
    }

    if f[full as usize][fg.source] == u64::MAX {
        return Ok(OracleOutcome::Infeasible);
    }

    // Reconstruct the edge set.
    let mut edges: std::collections::BTreeSet<EdgeId> = Default::default();
    let mut stack = vec![(full, fg.source)];
    while let Some((s, v)) = stack.pop() {
        match back[s as usize][v] {
            Back::None => {}
            Back::Relay(ai) => {
                let (_, h, _, id) = fg.arcs[ai];
                if let Some(id) = id {
                    edges.insert(id);
                }
                stack.push((s, h));
            }
            Back::Split(sub) => {
                stack.push((sub, v));
                stack.push((s ^ sub, v));
            }
        }
    }
    let cost = inst.graph.total_cost(edges.iter().copied());
    debug_assert_eq!(cost, f[full as usize][fg.source], "reconstruction matches the DP value");
    debug_assert!(inst.is_feasible_edge_set(&edges));
    Ok(OracleOutcome::Optimal(Solution { edges, cost, feasible: true }))
}

/// Minimum-cost feasible edge subset by exhaustive enumeration.
pub fn brute_force_dst(inst: &Instance) -> Result<OracleOutcome, OracleError> {
    let fg = flatten(inst);
    let real: Vec<usize> = (0..fg.arcs.len()).filter(|&i| fg.arcs[i].3.is_some()).collect();
    let m = real.len();
    if m > BRUTE_FORCE_EDGE_CAP {
        return Err(OracleError::TooManyEdges(m, BRUTE_FORCE_EDGE_CAP));
    }
    if inst.terminals.is_empty() {
        return Ok(OracleOutcome::Optimal(Solution::empty()));
    }
    let n = fg.out.len();
    let mut best: Option<(u64, u64)> = None; // (cost, mask)
    for mask in 0u64..(1 << m) {
        let mut cost = 0u64;
        for (bit, &ai) in real.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                cost += fg.arcs[ai].2;
            }
        }
        if best.is_some_and(|(bc, _)| cost >= bc) {
            continue;
        }
        // Reachability from the source over chosen arcs (super-source arcs
        // are always usable).
        let mut reach = vec![false; n];
        reach[fg.source] = true;
        let mut stack = vec![fg.source];
        while let Some(v) = stack.pop() {
            for &ai in &fg.out[v] {
                let (_, h, _, id) = fg.arcs[ai];
                let chosen = match id {
                    None => true,
                    Some(_) => {
                        let bit = real.iter().position(|&x| x == ai).unwrap();
                        mask >> bit & 1 == 1
                    }
                };
                if chosen && !reach[h] {
                    reach[h] = true;
                    stack.push(h);
                }
            }
        }
        if fg.terminals.iter().all(|&t| reach[t]) {
            best = Some((cost, mask));
        }
    }
    match best {
        None => Ok(OracleOutcome::Infeasible),
        Some((cost, mask)) => {
            let edges = real
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &ai)| fg.arcs[ai].3.unwrap())
                .collect();
            Ok(OracleOutcome::Optimal(Solution { edges, cost, feasible: true }))
        }
    }
}

/// One audited row comparing an approximate solution against the optimum.
#[derive(Debug, Clone)]
pub struct RatioRecord {
    pub k: usize,
    pub roots: usize,
    pub n: usize,
    pub opt: u64,
    pub approx: u64,
    pub ratio: f64,
    pub bound: f64,
    pub bound_ok: bool,
}

/// Guaranteed approximation factor for `k` terminals and `roots` roots at
/// accuracy `epsilon = eps_num / eps_den`: `(6l + 1)(1 + eps)` single-rooted
/// and `(8(R + l) + 1)(1 + eps)` otherwise, with `l = ceil(log2 k)`.
pub fn approximation_bound(k: usize, roots: usize, eps_num: u64, eps_den: u64) -> f64 {
    let ell = crate::solver::ceil_log2(k.max(1) as u128) as f64;
    let eps = eps_num as f64 / eps_den as f64;
    let base = if roots <= 1 { 6.0 * ell + 1.0 } else { 8.0 * (roots as f64 + ell) + 1.0 };
    base * (1.0 + eps)
}

/// Compares an approximate solution against the exact optimum.
pub fn ratio_report(
    inst: &Instance,
    approx: &Solution,
    eps_num: u64,
    eps_den: u64,
    cap: usize,
) -> Result<RatioRecord, OracleError> {
    let outcome = exact_dst(inst, cap)?;
    let opt = outcome.cost().expect("a feasible approximation implies a feasible instance");
    let ratio = if opt == 0 {
        if approx.cost == 0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        approx.cost as f64 / opt as f64
    };
    let bound = approximation_bound(inst.terminals.len(), inst.roots.len(), eps_num, eps_den);
    Ok(RatioRecord {
        k: inst.terminals.len(),
        roots: inst.roots.len(),
        n: inst.graph.num_vertices(),
        opt,
        approx: approx.cost,
        ratio,
        bound,
        bound_ok: ratio <= bound + 1e-9,
    })
}
