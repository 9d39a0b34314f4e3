//! Shortest dipaths over non-negative integer costs, single- and
//! multi-source, and the shortest-path (BFS) arborescences built from them.
//!
//! Multi-source search seeds the priority queue with every source instead of
//! materialising an auxiliary super-root, which would not embed in the
//! plane. Ties are broken deterministically: smaller source index first,
//! then smaller parent edge id, so repeated runs are bit-for-bit identical.

use crate::embed::{EdgeId, EmbeddedDigraph, VertexId};
use std::collections::{BTreeMap, BinaryHeap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("unknown vertex v{}", (.0).0)]
    UnknownVertex(VertexId),
    #[error("no dipath exists")]
    Unreachable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathEntry {
    pub dist: u64,
    /// Index into the source list of the owning source.
    pub owner: usize,
    /// Edge reaching this vertex on its shortest dipath; `None` on sources.
    pub parent: Option<EdgeId>,
}

/// Distances, owners and parent edges of one multi-source run. Unreached
/// vertices carry no entry; distance infinity is represented by absence, not
/// by a magic number.
#[derive(Debug, Clone)]
pub struct DistanceTable {
    sources: Vec<VertexId>,
    entries: BTreeMap<VertexId, PathEntry>,
}

impl DistanceTable {
    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn dist(&self, v: VertexId) -> Option<u64> {
        self.entries.get(&v).map(|e| e.dist)
    }

    pub fn entry(&self, v: VertexId) -> Option<&PathEntry> {
        self.entries.get(&v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (VertexId, &PathEntry)> + '_ {
        self.entries.iter().map(|(v, e)| (*v, e))
    }

    /// Edges of the shortest dipath from the owning source to `v`, in path
    /// order. `None` when `v` was not reached.
    pub fn path_to(&self, g: &EmbeddedDigraph, v: VertexId) -> Option<Vec<EdgeId>> {
        let mut edges = Vec::new();
        let mut cur = v;
        loop {
            let e = self.entries.get(&cur)?;
            match e.parent {
                None => break,
                Some(edge) => {
                    edges.push(edge);
                    cur = g.edge(edge).tail;
                }
            }
        }
        edges.reverse();
        Some(edges)
    }
}

// Heap labels order by (dist, owner, parent edge id); `u32::MAX` stands in
// for "no parent" on seeds, which never compete with real labels.
type Label = (u64, usize, u32);

fn label_of(e: &PathEntry) -> Label {
    (e.dist, e.owner, e.parent.map(|p| p.0).unwrap_or(u32::MAX))
}

/// Multi-source Dijkstra with deterministic tie-breaking. Auxiliary edges
/// are ignored. Sources must be distinct.
pub fn dijkstra(g: &EmbeddedDigraph, sources: &[VertexId]) -> Result<DistanceTable, PathError> {
    assert!(!sources.is_empty(), "dijkstra needs at least one source");
    for &s in sources {
        if !g.contains_vertex(s) {
            return Err(PathError::UnknownVertex(s));
        }
    }
    debug_assert!(
        sources.iter().collect::<std::collections::BTreeSet<_>>().len() == sources.len(),
        "sources must be distinct"
    );

    let mut entries: BTreeMap<VertexId, PathEntry> = BTreeMap::new();
    let mut heap: BinaryHeap<std::cmp::Reverse<(Label, VertexId)>> = BinaryHeap::new();
    for (i, &s) in sources.iter().enumerate() {
        let entry = PathEntry { dist: 0, owner: i, parent: None };
        entries.insert(s, entry);
        heap.push(std::cmp::Reverse((label_of(&entry), s)));
    }
    while let Some(std::cmp::Reverse((label, v))) = heap.pop() {
        if label_of(&entries[&v]) != label {
            continue; // stale
        }
        let base = entries[&v];
        for (edge, head, cost) in g.out_edges(v) {
            let cand = PathEntry { dist: base.dist + cost, owner: base.owner, parent: Some(edge) };
            let better = match entries.get(&head) {
                None => true,
                Some(cur) => label_of(&cand) < label_of(cur),
            };
            if better {
                entries.insert(head, cand);
                heap.push(std::cmp::Reverse((label_of(&cand), head)));
            }
        }
    }
    Ok(DistanceTable { sources: sources.to_vec(), entries })
}

/// Vertex-disjoint shortest-path arborescences, one per root.
#[derive(Debug, Clone)]
pub struct ArborescenceSet {
    /// `(root, edge set)` per root, in root-list order. Roots whose tree is
    /// empty still get an entry.
    pub trees: Vec<(VertexId, std::collections::BTreeSet<EdgeId>)>,
    /// Owning root index for every reached vertex.
    pub owner_of: BTreeMap<VertexId, usize>,
}

impl ArborescenceSet {
    pub fn tree_vertices(&self, root_index: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.owner_of
            .iter()
            .filter_map(move |(v, o)| (*o == root_index).then_some(*v))
    }
}

/// Splits the parent forest of a multi-source run per owning root. With one
/// root this is the BFS arborescence of the graph.
pub fn bfs_arborescences(g: &EmbeddedDigraph, roots: &[VertexId]) -> Result<ArborescenceSet, PathError> {
    let table = dijkstra(g, roots)?;
    arborescences_from_table(&table, roots)
}

/// Same as [`bfs_arborescences`] but reusing an existing table for `roots`.
pub fn arborescences_from_table(
    table: &DistanceTable,
    roots: &[VertexId],
) -> Result<ArborescenceSet, PathError> {
    debug_assert_eq!(table.sources(), roots);
    let mut trees: Vec<(VertexId, std::collections::BTreeSet<EdgeId>)> =
        roots.iter().map(|r| (*r, std::collections::BTreeSet::new())).collect();
    let mut owner_of = BTreeMap::new();
    for (v, e) in table.entries() {
        owner_of.insert(v, e.owner);
        if let Some(p) = e.parent {
            trees[e.owner].1.insert(p);
        }
    }
    Ok(ArborescenceSet { trees, owner_of })
}

/// A shortest dipath from `u` to `v` as an edge list; empty when `u == v`.
pub fn shortest_dipath(g: &EmbeddedDigraph, u: VertexId, v: VertexId) -> Result<Vec<EdgeId>, PathError> {
    if !g.contains_vertex(v) {
        return Err(PathError::UnknownVertex(v));
    }
    let table = dijkstra(g, &[u])?;
    table.path_to(g, v).ok_or(PathError::Unreachable)
}
