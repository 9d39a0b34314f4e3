//! Random embedded planar instance generation.
//!
//! Instances live on a square grid (optionally with one random diagonal per
//! cell, which keeps the drawing plane-straight). Edge orientations are
//! random except for a randomly grown arborescence from the root set whose
//! arcs are forced into the graph, so every terminal is reachable by
//! construction. The rotation system falls out of the coordinates. All
//! randomness comes from one seeded stream: identical parameters give
//! byte-identical files.

use crate::format::{file_from_graph, InstanceFile};
use dstkit::embed::{Dart, EdgeId, EmbeddedDigraph, VertexId};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridStyle {
    Grid,
    GridDiagonals,
}

impl std::str::FromStr for GridStyle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid" => Ok(GridStyle::Grid),
            "grid-diagonals" => Ok(GridStyle::GridDiagonals),
            other => Err(format!("unknown style {other:?} (grid, grid-diagonals)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub roots: usize,
    pub cost_lo: u64,
    pub cost_hi: u64,
    pub style: GridStyle,
    pub name: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

// Eight compass directions in counter-clockwise rotation order, as
// (d_col, d_row) with rows growing downward.
const DIRS: [(i64, i64); 8] =
    [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

/// Generates an instance file. `n` vertices are laid out row-major on a
/// `ceil(sqrt(n))`-wide grid.
pub fn generate(params: &GenParams) -> Result<InstanceFile, GenError> {
    if params.n < params.roots + params.k {
        return Err(GenError::InvalidParams(format!(
            "n = {} is smaller than roots + terminals = {}",
            params.n,
            params.roots + params.k
        )));
    }
    if params.roots == 0 || params.k == 0 {
        return Err(GenError::InvalidParams("need at least one root and one terminal".into()));
    }
    if params.cost_lo > params.cost_hi {
        return Err(GenError::InvalidParams("empty cost range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let cols = (n as f64).sqrt().ceil() as usize;
    let pos = |v: usize| -> (usize, usize) { (v / cols, v % cols) }; // (row, col)
    let at = |r: usize, c: usize| -> Option<usize> {
        let v = r * cols + c;
        (c < cols && v < n).then_some(v)
    };

    // Undirected adjacency skeleton in scan order.
    let mut adjacencies: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        let (r, c) = pos(v);
        if let Some(u) = at(r, c + 1) {
            adjacencies.push((v, u));
        }
        if let Some(u) = at(r + 1, c) {
            adjacencies.push((v, u));
        }
        if params.style == GridStyle::GridDiagonals {
            // One random diagonal per complete cell anchored at (r, c).
            if let (Some(se), Some(s), Some(e)) = (at(r + 1, c + 1), at(r + 1, c), at(r, c + 1)) {
                if rng.gen_bool(0.5) {
                    adjacencies.push((v, se));
                } else {
                    adjacencies.push((e, s));
                }
            }
        }
    }

    // Roles: distinct random picks, roots first.
    let mut picks: Vec<usize> = (0..n).collect();
    picks.shuffle(&mut rng);
    let roots: Vec<usize> = {
        let mut r = picks[..params.roots].to_vec();
        r.sort_unstable();
        r
    };
    let terminals: BTreeSet<usize> = picks[params.roots..params.roots + params.k].iter().copied().collect();

    // Feasible skeleton: randomized multi-source growth over the
    // adjacencies, arcs oriented away from the roots.
    let mut neighbor: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, &(a, b)) in adjacencies.iter().enumerate() {
        neighbor.entry(a).or_default().push((b, i));
        neighbor.entry(b).or_default().push((a, i));
    }
    let mut forced: BTreeMap<usize, (usize, usize)> = BTreeMap::new(); // adjacency -> (tail, head)
    let mut covered: BTreeSet<usize> = roots.iter().copied().collect();
    let mut frontier: Vec<usize> = roots.clone();
    while let Some(&v) = frontier.choose(&mut rng) {
        let mut expanded = false;
        let mut nbrs = neighbor.get(&v).cloned().unwrap_or_default();
        nbrs.shuffle(&mut rng);
        for (u, adj) in nbrs {
            if covered.insert(u) {
                forced.insert(adj, (v, u));
                frontier.push(u);
                expanded = true;
                break;
            }
        }
        if !expanded {
            frontier.retain(|x| *x != v);
        }
        if covered.len() == n {
            break;
        }
    }
    // Grid graphs are connected, so growth covers everything.
    debug_assert_eq!(covered.len(), n);

    // Directed edges: forced skeleton orientation or a coin flip.
    let mut g = EmbeddedDigraph::new();
    for _ in 0..n {
        g.add_vertex();
    }
    for (i, &(a, b)) in adjacencies.iter().enumerate() {
        let (tail, head) = match forced.get(&i) {
            Some(&(t, h)) => (t, h),
            None => {
                if rng.gen_bool(0.5) {
                    (a, b)
                } else {
                    (b, a)
                }
            }
        };
        let cost = rng.gen_range(params.cost_lo..=params.cost_hi);
        g.add_edge_with_id(EdgeId(i as u32), VertexId(tail as u32), VertexId(head as u32), cost)
            .expect("grid edges are loop-free");
    }

    // Rotations from coordinates: counter-clockwise by compass direction.
    for v in 0..n {
        let (r, c) = pos(v);
        let mut by_dir: BTreeMap<usize, Vec<Dart>> = BTreeMap::new();
        for d in g.rotation(VertexId(v as u32)).to_vec() {
            let info = g.edge(d.edge);
            let other = info.endpoint(d.end.other());
            let (or, oc) = pos(other.0 as usize);
            let delta = (oc as i64 - c as i64, or as i64 - r as i64);
            let dir = DIRS.iter().position(|d| *d == delta).expect("grid neighbor direction");
            by_dir.entry(dir).or_default().push(d);
        }
        let rot: Vec<Dart> = by_dir.into_values().flatten().collect();
        g.set_rotation(VertexId(v as u32), rot).expect("permutation of incident darts");
    }
    debug_assert!(g.validate_embedding().is_ok());

    let coords: BTreeMap<VertexId, (i64, i64)> = (0..n)
        .map(|v| {
            let (r, c) = pos(v);
            (VertexId(v as u32), (c as i64, r as i64))
        })
        .collect();
    let name = params
        .name
        .clone()
        .unwrap_or_else(|| format!("gen-s{}-n{}-k{}-r{}", params.seed, n, params.k, params.roots));
    Ok(file_from_graph(
        &g,
        &roots.iter().map(|r| VertexId(*r as u32)).collect::<Vec<_>>(),
        &terminals.iter().map(|t| VertexId(*t as u32)).collect(),
        Some(name),
        Some(params.seed),
        &coords,
    ))
}
