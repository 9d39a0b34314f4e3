//! The approximation pipeline.
//!
//! `solve` rescales costs so that distances are polynomially bounded
//! integers, seeds the optimum estimate with `k * delta`, and runs the
//! estimate-halving recursion: each call tries (1) the same instance with
//! half the estimate and (2) buying a balanced shortest-path separator,
//! contracting it into the root, and recursing on the residual components
//! with the estimate unchanged, keeping the cheaper outcome. Estimates are
//! exact dyadic rationals so the `< 1` cut-off never suffers rounding.

use crate::embed::{ContractionMap, EdgeId, EmbedError, EmbeddedDigraph, VertexId};
use crate::paths::{dijkstra, DistanceTable, PathError};
use crate::separator::{
    directed_separator_with_table, multirooted_separator_with_table, SeparatorError,
    SeparatorResult, WeightAssignment,
};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
}

/// A rooted Steiner instance over an embedded graph. Edge ids are stable
/// through every derived instance, so solutions always name edges of the
/// instance they were asked about.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: EmbeddedDigraph,
    pub roots: Vec<VertexId>,
    pub terminals: BTreeSet<VertexId>,
}

impl Instance {
    pub fn new(
        graph: EmbeddedDigraph,
        roots: Vec<VertexId>,
        terminals: BTreeSet<VertexId>,
    ) -> Result<Self, SolveError> {
        if terminals.is_empty() {
            return Err(SolveError::InvalidInstance("no terminals".into()));
        }
        Self::new_allow_empty(graph, roots, terminals)
    }

    /// Constructor without the `k >= 1` requirement, for oracle corners and
    /// residual subinstances whose terminals were all covered.
    pub fn new_allow_empty(
        graph: EmbeddedDigraph,
        roots: Vec<VertexId>,
        terminals: BTreeSet<VertexId>,
    ) -> Result<Self, SolveError> {
        if roots.is_empty() {
            return Err(SolveError::InvalidInstance("no roots".into()));
        }
        let distinct: BTreeSet<&VertexId> = roots.iter().collect();
        if distinct.len() != roots.len() {
            return Err(SolveError::InvalidInstance("duplicate roots".into()));
        }
        for r in &roots {
            if !graph.contains_vertex(*r) {
                return Err(SolveError::InvalidInstance(format!("root v{} not in graph", r.0)));
            }
            if terminals.contains(r) {
                return Err(SolveError::InvalidInstance(format!("v{} is both root and terminal", r.0)));
            }
        }
        for t in &terminals {
            if !graph.contains_vertex(*t) {
                return Err(SolveError::InvalidInstance(format!("terminal v{} not in graph", t.0)));
            }
        }
        Ok(Instance { graph, roots, terminals })
    }

    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    /// Independent reachability check: does `edges` contain a dipath from
    /// some root to every terminal?
    pub fn is_feasible_edge_set(&self, edges: &BTreeSet<EdgeId>) -> bool {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for &e in edges {
            match self.graph.try_edge(e) {
                Some(info) if !info.aux => adj.entry(info.tail).or_default().push(info.head),
                _ => return false,
            }
        }
        let mut reached: BTreeSet<VertexId> = self.roots.iter().copied().collect();
        let mut stack: Vec<VertexId> = self.roots.clone();
        while let Some(v) = stack.pop() {
            for &u in adj.get(&v).into_iter().flatten() {
                if reached.insert(u) {
                    stack.push(u);
                }
            }
        }
        self.terminals.iter().all(|t| reached.contains(t))
    }
}

/// An edge subset of the instance it was produced for, with its total cost
/// in that instance's cost units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub edges: BTreeSet<EdgeId>,
    pub cost: u64,
    pub feasible: bool,
}

impl Solution {
    pub fn empty() -> Self {
        Solution { edges: BTreeSet::new(), cost: 0, feasible: true }
    }
}

/// How the cost rescaling was performed, for mapping values back.
#[derive(Debug, Clone)]
pub struct ScalingInfo {
    pub eps_num: u64,
    pub eps_den: u64,
    /// Max distance from the root set to a terminal, original costs.
    pub delta: u64,
    /// Scaled cost = max(1, ceil(cost * scale_num / scale_den)).
    pub scale_num: u128,
    pub scale_den: u128,
    pub original_cost: BTreeMap<EdgeId, u64>,
}

#[derive(Debug, Clone)]
pub enum ScaleOutcome {
    Scaled(Instance, ScalingInfo),
    /// All terminals at distance zero: an optimal zero-cost solution exists.
    ZeroCost(Solution),
    /// Some terminal is unreachable from every root.
    Infeasible,
}

pub(crate) fn ceil_log2(x: u128) -> u32 {
    debug_assert!(x > 0);
    if x == 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// Exact dyadic estimate `num / 2^exp`, halved without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicEstimate {
    num: u128,
    exp: u32,
}

impl DyadicEstimate {
    pub fn from_int(x: u64) -> Self {
        DyadicEstimate { num: x as u128, exp: 0 }
    }

    pub fn halved(self) -> Self {
        if self.num.is_multiple_of(2) && self.num > 0 {
            DyadicEstimate { num: self.num / 2, exp: self.exp }
        } else {
            DyadicEstimate { num: self.num, exp: self.exp + 1 }
        }
    }

    pub fn lt_one(self) -> bool {
        self.exp >= 128 || self.num < (1u128 << self.exp)
    }

    /// Is the integer `d` strictly above this estimate?
    pub fn exceeded_by(self, d: u64) -> bool {
        // exp stays below ~64 because the recursion stops once value < 1.
        (d as u128) << self.exp > self.num
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / (2f64).powi(self.exp as i32)
    }
}

/// Solver knobs. `epsilon` defaults to 1/2; auditing records separator and
/// merge telemetry at some cost per recursion step.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub eps_num: u64,
    pub eps_den: u64,
    pub prune: bool,
    pub audit: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { eps_num: 1, eps_den: 2, prune: false, audit: false }
    }
}

/// Counters and audit tallies of one solve.
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub recursion_calls: u64,
    /// Smallest integers with `k <= 2^ell` and `estimate <= 2^o`.
    pub ell: u32,
    pub o: u32,
    /// Top-level estimate `k * delta` in scaled units.
    pub opt_estimate: u64,
    pub delta_scaled: u64,
    pub separator_calls: u64,
    pub balance_violations: u64,
    pub path_cost_mismatches: u64,
    pub path_cost_checks: u64,
    pub mark_violations: u64,
    pub halving_violations: u64,
    pub merge_checks: u64,
    pub merge_violations: u64,
    pub embedding_validations: u64,
    pub embedding_failures: u64,
}

impl SolveStats {
    /// The recursion-budget ceiling `k * 2^(2 ell + o)`, saturating.
    pub fn call_cap(&self, k: usize) -> u128 {
        let shift = 2 * self.ell as u64 + self.o as u64;
        if shift >= 127 {
            u128::MAX
        } else {
            (k as u128).saturating_mul(1u128 << shift)
        }
    }
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Solved(Solution),
    Infeasible,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}

/// Rescales costs so every edge cost is a positive integer and all
/// distances from the root set are at most `n k / eps + n`.
///
/// Also removes edges costing more than `k * delta` and Steiner vertices
/// farther than `k * delta` from the root set; no optimal solution can use
/// them.
pub fn scale_costs(inst: &Instance, eps_num: u64, eps_den: u64) -> Result<ScaleOutcome, SolveError> {
    if eps_num == 0 || eps_den == 0 {
        return Err(SolveError::InvalidEpsilon);
    }
    let table = dijkstra(&inst.graph, &inst.roots)?;
    let mut delta = 0u64;
    for t in &inst.terminals {
        match table.dist(*t) {
            None => return Ok(ScaleOutcome::Infeasible),
            Some(d) => delta = delta.max(d),
        }
    }
    if delta == 0 {
        let mut edges = BTreeSet::new();
        for t in &inst.terminals {
            edges.extend(table.path_to(&inst.graph, *t).expect("reachable"));
        }
        debug_assert_eq!(inst.graph.total_cost(edges.iter().copied()), 0);
        return Ok(ScaleOutcome::ZeroCost(Solution { edges, cost: 0, feasible: true }));
    }

    let n = inst.graph.num_vertices() as u128;
    let k = inst.terminals.len() as u128;
    let k_delta = k * delta as u128;

    // Trim: expensive edges and far Steiner vertices.
    let far: BTreeSet<VertexId> = inst
        .graph
        .vertices()
        .filter(|v| {
            !inst.roots.contains(v)
                && !inst.terminals.contains(v)
                && table.dist(*v).is_none_or(|d| d as u128 > k_delta)
        })
        .collect();
    let (mut g, _) = inst.graph.delete_vertices(&far)?;
    let expensive: BTreeSet<EdgeId> =
        g.edges().filter(|(_, i)| i.cost as u128 > k_delta).map(|(e, _)| e).collect();
    if !expensive.is_empty() {
        let (g2, _) = g.delete_edges(&expensive);
        g = g2;
    }

    let scale_num = n * eps_den as u128;
    let scale_den = eps_num as u128 * delta as u128;
    let original_cost: BTreeMap<EdgeId, u64> = g.edges().map(|(e, i)| (e, i.cost)).collect();
    let mut scaled = g.clone();
    for (e, _) in g.edges() {
        let c = g.edge(e).cost as u128;
        let scaled_cost = (c * scale_num).div_ceil(scale_den).max(1);
        scaled.set_edge_cost(e, u64::try_from(scaled_cost).expect("scaled cost fits in u64"));
    }
    let info = ScalingInfo {
        eps_num,
        eps_den,
        delta,
        scale_num,
        scale_den,
        original_cost,
    };
    let scaled_inst = Instance {
        graph: scaled,
        roots: inst.roots.clone(),
        terminals: inst.terminals.clone(),
    };
    Ok(ScaleOutcome::Scaled(scaled_inst, info))
}

/// Removes every vertex whose distance from the root set exceeds `bound`,
/// unreachable vertices included. Roots are at distance zero and always
/// survive.
pub fn preprocess_far(inst: &Instance, bound: u64) -> Result<Instance, SolveError> {
    let table = dijkstra(&inst.graph, &inst.roots)?;
    let far: BTreeSet<VertexId> = inst
        .graph
        .vertices()
        .filter(|v| table.dist(*v).is_none_or(|d| d > bound))
        .collect();
    let (g, _) = inst.graph.delete_vertices(&far)?;
    Ok(Instance {
        graph: g,
        roots: inst.roots.clone(),
        terminals: inst.terminals.iter().copied().filter(|t| !far.contains(t)).collect(),
    })
}

/// One residual component turned into its own instance: the separator tree
/// contracted to a root label, edges from the component into the separator
/// dropped, everything else induced.
#[derive(Debug, Clone)]
pub struct Subinstance {
    pub instance: Instance,
    pub back_map: ContractionMap,
    pub contracted_root: VertexId,
}

/// Builds the induced subinstances of `inst` under a separator result.
///
/// With a single root the tree is contracted into that root; with several a
/// fresh label stands for the contracted tree and surviving original roots
/// stay roots of their component's subinstance.
pub fn build_subinstances(inst: &Instance, sep: &SeparatorResult) -> Result<Vec<Subinstance>, SolveError> {
    debug_assert!(!sep.separator.is_empty(), "separator must cover at least the root");
    let label = if inst.roots.len() == 1 {
        inst.roots[0]
    } else {
        inst.graph.fresh_vertex_id()
    };
    let (contracted, cmap) = inst.graph.contract_connected(&sep.separator, label)?;
    // Edges pointing from a component into the separator can never help.
    let into_label: BTreeSet<EdgeId> = contracted
        .edges()
        .filter(|(_, i)| i.head == label)
        .map(|(e, _)| e)
        .collect();
    let (contracted, dmap) = contracted.delete_edges(&into_label);
    let cmap = compose_maps(&cmap, &dmap);

    let surviving_roots: Vec<VertexId> = inst
        .roots
        .iter()
        .copied()
        .filter(|r| !sep.separator.contains(r))
        .collect();

    let mut subs = Vec::with_capacity(sep.components.len());
    for comp in &sep.components {
        let comp_set: BTreeSet<VertexId> = comp.iter().copied().collect();
        let drop: BTreeSet<VertexId> = contracted
            .vertices()
            .filter(|v| *v != label && !comp_set.contains(v))
            .collect();
        let (child_graph, kmap) = contracted.delete_vertices(&drop)?;
        let back_map = compose_maps(&cmap, &kmap);
        let mut roots = vec![label];
        roots.extend(surviving_roots.iter().copied().filter(|r| comp_set.contains(r)));
        let terminals: BTreeSet<VertexId> =
            inst.terminals.iter().copied().filter(|t| comp_set.contains(t)).collect();
        let instance = Instance::new_allow_empty(child_graph, roots, terminals)?;
        subs.push(Subinstance { instance, back_map, contracted_root: label });
    }
    Ok(subs)
}

fn compose_maps(first: &ContractionMap, second: &ContractionMap) -> ContractionMap {
    ContractionMap::compose(first, second)
}

/// Corresponding parent-graph edges of the purchased separator tree plus all
/// subsolutions. The cost identity
/// `cost(result) = cost(T \ F) + sum(cost(sub_i))` holds exactly.
pub fn merge_solutions(
    parent: &Instance,
    sep: &SeparatorResult,
    subs: &[(&Subinstance, &Solution)],
) -> Solution {
    let mut edges: BTreeSet<EdgeId> = sep.purchased_edges().collect();
    let mut expected = sep.purchased_cost(&parent.graph);
    for (sub, sol) in subs {
        for &e in &sol.edges {
            let parent_edge = sub.back_map.backward(e).expect("child edges map to parent edges");
            edges.insert(parent_edge);
        }
        expected += sol.cost;
    }
    let cost = parent.graph.total_cost(edges.iter().copied());
    debug_assert_eq!(cost, expected, "merge cost identity");
    Solution { edges, cost, feasible: true }
}

struct Ctx<'a> {
    opts: &'a SolveOptions,
    stats: &'a mut SolveStats,
    /// Results keyed by (instance identity, estimate). All estimates within
    /// one solve are `opt0 / 2^j`, and edge ids pin down costs and
    /// endpoints, so equal keys describe the same subproblem; caching them
    /// keeps the recursion polynomial in practice without changing any
    /// output.
    memo: std::collections::HashMap<u128, Option<Solution>>,
}

impl Ctx<'_> {
    fn validate(&mut self, g: &EmbeddedDigraph) {
        if self.opts.audit {
            self.stats.embedding_validations += 1;
            if g.validate_embedding().is_err() {
                self.stats.embedding_failures += 1;
            }
        } else {
            debug_assert!(g.validate_embedding().is_ok());
        }
    }
}

// 128-bit FNV-1a over the instance's vertex ids, edge ids, roots and
// terminals. Wide enough that accidental collisions are not a concern.
const FNV128_OFFSET: u128 = 0x6c62272e07bb014262b821756295c58d;
const FNV128_PRIME: u128 = 0x0000000001000000000000000000013b;

fn fnv_step(hash: &mut u128, word: u64) {
    for byte in word.to_le_bytes() {
        *hash ^= byte as u128;
        *hash = hash.wrapping_mul(FNV128_PRIME);
    }
}

fn instance_hash(inst: &Instance) -> u128 {
    let mut h = FNV128_OFFSET;
    fnv_step(&mut h, 0xa1);
    for v in inst.graph.vertices() {
        fnv_step(&mut h, v.0 as u64);
    }
    fnv_step(&mut h, 0xa2);
    for e in inst.graph.edge_ids() {
        fnv_step(&mut h, e.0 as u64);
    }
    fnv_step(&mut h, 0xa3);
    for r in &inst.roots {
        fnv_step(&mut h, r.0 as u64);
    }
    fnv_step(&mut h, 0xa4);
    for t in &inst.terminals {
        fnv_step(&mut h, t.0 as u64);
    }
    h
}

fn state_key(inst_hash: u128, estimate: DyadicEstimate) -> u128 {
    let mut h = inst_hash;
    fnv_step(&mut h, 0xa5);
    fnv_step(&mut h, (estimate.num >> 64) as u64);
    fnv_step(&mut h, estimate.num as u64);
    fnv_step(&mut h, estimate.exp as u64);
    h
}

/// Full pipeline: scale, estimate `k * delta`, recurse, re-cost in original
/// units, optionally prune.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let mut stats = SolveStats::default();
    if inst.terminals.is_empty() {
        return Ok(SolveReport { outcome: SolveOutcome::Solved(Solution::empty()), stats });
    }
    let (scaled, _info) = match scale_costs(inst, opts.eps_num, opts.eps_den)? {
        ScaleOutcome::Infeasible => {
            return Ok(SolveReport { outcome: SolveOutcome::Infeasible, stats })
        }
        ScaleOutcome::ZeroCost(sol) => {
            let outcome = finish(inst, sol, opts);
            return Ok(SolveReport { outcome, stats });
        }
        ScaleOutcome::Scaled(scaled, info) => (scaled, info),
    };

    let table = dijkstra(&scaled.graph, &scaled.roots)?;
    let delta_scaled = scaled
        .terminals
        .iter()
        .map(|t| table.dist(*t).expect("terminals survived scaling"))
        .max()
        .unwrap();
    let k = scaled.terminals.len() as u64;
    let estimate = k
        .checked_mul(delta_scaled)
        .expect("estimate fits in u64 after scaling");
    stats.opt_estimate = estimate;
    stats.delta_scaled = delta_scaled;
    stats.ell = ceil_log2(k.max(1) as u128);
    stats.o = ceil_log2(estimate.max(1) as u128);

    let mut ctx = Ctx { opts, stats: &mut stats, memo: Default::default() };
    let result = dst_recurse_inner(
        &mut ctx,
        &scaled,
        DyadicEstimate::from_int(estimate),
        Some(&table),
        None,
    )?;

    let outcome = match result {
        None => SolveOutcome::Infeasible,
        Some(sol) => {
            // Scaled and original graphs share edge ids; re-cost directly.
            let cost = inst.graph.total_cost(sol.edges.iter().copied());
            finish(inst, Solution { edges: sol.edges, cost, feasible: true }, opts)
        }
    };
    Ok(SolveReport { outcome, stats })
}

fn finish(inst: &Instance, mut sol: Solution, opts: &SolveOptions) -> SolveOutcome {
    debug_assert!(inst.is_feasible_edge_set(&sol.edges));
    if opts.prune {
        sol = prune(&sol, inst);
    }
    sol.feasible = inst.is_feasible_edge_set(&sol.edges);
    SolveOutcome::Solved(sol)
}

/// The estimate-halving recursion on a scaled instance. `None` signals
/// infeasibility at this estimate.
pub fn dst_recurse(
    inst: &Instance,
    estimate: DyadicEstimate,
    opts: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Option<Solution>, SolveError> {
    let mut ctx = Ctx { opts, stats, memo: Default::default() };
    dst_recurse_inner(&mut ctx, inst, estimate, None, None)
}

fn dst_recurse_inner(
    ctx: &mut Ctx<'_>,
    inst: &Instance,
    estimate: DyadicEstimate,
    table: Option<&DistanceTable>,
    inst_hash: Option<u128>,
) -> Result<Option<Solution>, SolveError> {
    ctx.stats.recursion_calls += 1;
    if estimate.lt_one() {
        return Ok(None);
    }
    let inst_hash = inst_hash.unwrap_or_else(|| instance_hash(inst));
    let key = state_key(inst_hash, estimate);
    if let Some(hit) = ctx.memo.get(&key) {
        return Ok(hit.clone());
    }
    let owned;
    let table = match table {
        Some(t) => t,
        None => {
            owned = dijkstra(&inst.graph, &inst.roots)?;
            &owned
        }
    };
    let mut guard_failed = false;
    for t in &inst.terminals {
        if table.dist(*t).is_none_or(|d| estimate.exceeded_by(d)) {
            guard_failed = true;
            break;
        }
    }
    let result = if guard_failed {
        None
    } else if inst.terminals.len() == 1 {
        let t = *inst.terminals.iter().next().unwrap();
        let edges: BTreeSet<EdgeId> =
            table.path_to(&inst.graph, t).expect("guard passed").into_iter().collect();
        let cost = inst.graph.total_cost(edges.iter().copied());
        Some(Solution { edges, cost, feasible: true })
    } else {
        let first =
            dst_recurse_inner(ctx, inst, estimate.halved(), Some(table), Some(inst_hash))?;
        let second = separator_branch(ctx, inst, estimate, table)?;
        // Prefer the separator branch on ties.
        match (first, second) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some(if a.cost < b.cost { a } else { b }),
        }
    };
    ctx.memo.insert(key, result.clone());
    Ok(result)
}

fn separator_branch(
    ctx: &mut Ctx<'_>,
    inst: &Instance,
    estimate: DyadicEstimate,
    table: &DistanceTable,
) -> Result<Option<Solution>, SolveError> {
    // Preprocessing: drop everything farther than the estimate. Distances
    // of survivors are unchanged, so the parent table stays valid.
    let far: BTreeSet<VertexId> = inst
        .graph
        .vertices()
        .filter(|v| table.dist(*v).is_none_or(|d| estimate.exceeded_by(d)))
        .collect();
    let (pg, _) = inst.graph.delete_vertices(&far)?;
    ctx.validate(&pg);
    let roots: Vec<VertexId> = inst.roots.iter().copied().filter(|r| !far.contains(r)).collect();
    debug_assert_eq!(roots.len(), inst.roots.len(), "roots are at distance zero");

    // The preprocessed graph can fall apart into weak components, each
    // holding at least one root; treat each independently.
    let mut merged_edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut merged_cost = 0u64;
    for comp in pg.weak_components() {
        let comp_set: BTreeSet<VertexId> = comp.iter().copied().collect();
        let comp_terminals: BTreeSet<VertexId> =
            inst.terminals.iter().copied().filter(|t| comp_set.contains(t)).collect();
        if comp_terminals.is_empty() {
            continue;
        }
        let comp_roots: Vec<VertexId> =
            roots.iter().copied().filter(|r| comp_set.contains(r)).collect();
        debug_assert!(!comp_roots.is_empty(), "every survivor is reachable from some root");
        let drop: BTreeSet<VertexId> = pg.vertices().filter(|v| !comp_set.contains(v)).collect();
        let (comp_graph, _) = pg.delete_vertices(&drop)?;
        ctx.validate(&comp_graph);
        let comp_inst = Instance {
            graph: comp_graph,
            roots: comp_roots.clone(),
            terminals: comp_terminals.clone(),
        };

        let comp_table = dijkstra(&comp_inst.graph, &comp_inst.roots)?;
        let weights = WeightAssignment::unit_terminals(comp_terminals.iter());
        let sep = if comp_roots.len() == 1 {
            directed_separator_with_table(&comp_inst.graph, comp_roots[0], &weights, &comp_table)?
        } else {
            multirooted_separator_with_table(&comp_inst.graph, &comp_roots, &weights, &comp_table)?
        };
        ctx.stats.separator_calls += 1;
        if ctx.opts.audit {
            audit_separator(ctx, &comp_inst, &sep, &comp_table, &weights);
        }

        let subs = build_subinstances(&comp_inst, &sep)?;
        let mut pairs: Vec<(&Subinstance, Solution)> = Vec::new();
        let mut infeasible = false;
        for sub in &subs {
            ctx.validate(&sub.instance.graph);
            if ctx.opts.audit && 2 * sub.instance.terminals.len() > comp_inst.terminals.len() {
                ctx.stats.halving_violations += 1;
            }
            if sub.instance.terminals.is_empty() {
                continue;
            }
            match dst_recurse_inner(ctx, &sub.instance, estimate, None, None)? {
                None => {
                    infeasible = true;
                    break;
                }
                Some(sol) => pairs.push((sub, sol)),
            }
        }
        if infeasible {
            return Ok(None);
        }
        let borrowed: Vec<(&Subinstance, &Solution)> =
            pairs.iter().map(|(s, sol)| (*s, sol)).collect();
        let merged = merge_solutions(&comp_inst, &sep, &borrowed);
        if ctx.opts.audit {
            ctx.stats.merge_checks += 1;
            let expected = sep.purchased_cost(&comp_inst.graph)
                + pairs.iter().map(|(_, s)| s.cost).sum::<u64>();
            if merged.cost != expected {
                ctx.stats.merge_violations += 1;
            }
        }
        merged_cost += merged.cost;
        merged_edges.extend(merged.edges);
    }
    debug_assert_eq!(merged_cost, inst.graph.total_cost(merged_edges.iter().copied()));
    Ok(Some(Solution { edges: merged_edges, cost: merged_cost, feasible: true }))
}

fn audit_separator(
    ctx: &mut Ctx<'_>,
    inst: &Instance,
    sep: &SeparatorResult,
    table: &DistanceTable,
    weights: &WeightAssignment,
) {
    let total = weights.total_on(&inst.graph);
    for comp in &sep.components {
        let w: u64 = comp.iter().map(|v| weights.weight(*v)).sum();
        if 2 * w > total {
            ctx.stats.balance_violations += 1;
        }
    }
    for st in &sep.subtrees {
        if st.marked.len() > 4 {
            ctx.stats.mark_violations += 1;
        }
        for &m in &st.marked {
            ctx.stats.path_cost_checks += 1;
            match table.path_to(&inst.graph, m) {
                Some(path) => {
                    let cost: u64 = path.iter().map(|e| inst.graph.edge(*e).cost).sum();
                    if Some(cost) != table.dist(m) {
                        ctx.stats.path_cost_mismatches += 1;
                    }
                }
                None => ctx.stats.path_cost_mismatches += 1,
            }
        }
    }
}

/// Turns a node-weighted instance (costs on Steiner vertices, zero on roots
/// and terminals) into a purely edge-weighted planar instance of equal
/// optimum.
///
/// Every in-edge of a charged Steiner vertex is subdivided at the vertex
/// side and the stub carries the node cost; a minimal solution enters each
/// used vertex exactly once, so the charge is paid once.
pub fn node_weighted_reduction(
    graph: &EmbeddedDigraph,
    node_costs: &BTreeMap<VertexId, u64>,
    roots: Vec<VertexId>,
    terminals: BTreeSet<VertexId>,
) -> Result<Instance, SolveError> {
    for (v, c) in node_costs {
        if *c > 0 && (roots.contains(v) || terminals.contains(v)) {
            return Err(SolveError::InvalidInstance(format!(
                "node cost on root or terminal v{}",
                v.0
            )));
        }
    }
    let mut g = graph.clone();
    let charged: Vec<VertexId> = node_costs
        .iter()
        .filter(|(v, c)| **c > 0 && graph.contains_vertex(**v))
        .map(|(v, _)| *v)
        .collect();
    for v in charged {
        let c = node_costs[&v];
        let in_edges: Vec<EdgeId> = g
            .rotation(v)
            .iter()
            .filter(|d| d.end == crate::embed::End::Head)
            .map(|d| d.edge)
            .collect();
        for e in in_edges {
            let original = g.edge(e).cost;
            g.subdivide_edge(e, original, c)?;
        }
    }
    debug_assert!(g.validate_embedding().is_ok());
    Instance::new(g, roots, terminals)
}

/// Drops removable edges in decreasing cost (then increasing id) order until
/// no single edge can be removed without losing feasibility.
pub fn prune(solution: &Solution, inst: &Instance) -> Solution {
    let mut order: Vec<EdgeId> = solution.edges.iter().copied().collect();
    order.sort_by_key(|e| (std::cmp::Reverse(inst.graph.edge(*e).cost), e.0));
    let mut edges = solution.edges.clone();
    for e in order {
        edges.remove(&e);
        if !inst.is_feasible_edge_set(&edges) {
            edges.insert(e);
        }
    }
    let cost = inst.graph.total_cost(edges.iter().copied());
    debug_assert!(cost <= solution.cost);
    Solution { edges, cost, feasible: true }
}
