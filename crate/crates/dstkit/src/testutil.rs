//! Grid builders shared by the unit tests.

use crate::embed::{Dart, EdgeId, EmbeddedDigraph, VertexId};
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

/// Grid on `rows x cols` vertices, all edges oriented right/down, unit
/// costs, rotations taken from coordinates (E, N, W, S counter-clockwise).
pub fn grid(rows: usize, cols: usize) -> EmbeddedDigraph {
    grid_with(rows, cols, |_| (true, 1))
}

/// Grid with per-adjacency random orientation and costs in `[lo, hi]`.
pub fn random_grid_digraph(rows: usize, cols: usize, seed: u64, lo: u64, hi: u64) -> EmbeddedDigraph {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut choices = Vec::new();
    // Two adjacencies per cell in scan order; pre-draw for determinism.
    for _ in 0..rows * cols * 2 {
        choices.push((rng.gen_bool(0.5), rng.gen_range(lo..=hi)));
    }
    let mut i = 0;
    grid_with(rows, cols, move |_| {
        let c = choices[i % choices.len()];
        i += 1;
        c
    })
}

/// `orient(k)` returns (forward?, cost) for the k-th adjacency in scan
/// order; forward means left-to-right or top-to-bottom.
fn grid_with(rows: usize, cols: usize, mut orient: impl FnMut(usize) -> (bool, u64)) -> EmbeddedDigraph {
    let mut g = EmbeddedDigraph::new();
    let id = |r: usize, c: usize| VertexId((r * cols + c) as u32);
    for _ in 0..rows * cols {
        g.add_vertex();
    }
    // For rotations we remember, per adjacency, the dart seen from each side.
    let mut right: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    let mut down: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    let mut fwd: BTreeMap<EdgeId, bool> = BTreeMap::new();
    let mut k = 0;
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                let (f, cost) = orient(k);
                k += 1;
                let (a, b) = if f { (id(r, c), id(r, c + 1)) } else { (id(r, c + 1), id(r, c)) };
                let e = g.add_edge(a, b, cost).unwrap();
                right.insert((r, c), e);
                fwd.insert(e, f);
            }
            if r + 1 < rows {
                let (f, cost) = orient(k);
                k += 1;
                let (a, b) = if f { (id(r, c), id(r + 1, c)) } else { (id(r + 1, c), id(r, c)) };
                let e = g.add_edge(a, b, cost).unwrap();
                down.insert((r, c), e);
                fwd.insert(e, f);
            }
        }
    }
    // Dart at the near side of an adjacency: tail if the edge points away.
    let near = |e: EdgeId, pointing_away: bool, fwd: &BTreeMap<EdgeId, bool>| {
        if fwd[&e] == pointing_away {
            Dart::tail(e)
        } else {
            Dart::head(e)
        }
    };
    for r in 0..rows {
        for c in 0..cols {
            // Counter-clockwise: east, north, west, south.
            let mut rot = Vec::new();
            if let Some(&e) = right.get(&(r, c)) {
                rot.push(near(e, true, &fwd));
            }
            if r > 0 {
                rot.push(near(down[&(r - 1, c)], false, &fwd));
            }
            if c > 0 {
                rot.push(near(right[&(r, c - 1)], false, &fwd));
            }
            if let Some(&e) = down.get(&(r, c)) {
                rot.push(near(e, true, &fwd));
            }
            g.set_rotation(id(r, c), rot).unwrap();
        }
    }
    debug_assert!(g.validate_embedding().is_ok());
    g
}
