//! Balanced shortest-path separators.
//!
//! [`three_path_separator`] realises the undirected statement: given a
//! spanning tree it returns up to three vertices whose root paths separate
//! the graph so that no weak component keeps more than half the vertex
//! weight. [`directed_separator`] instantiates it on a BFS arborescence so
//! the purchased paths are shortest dipaths, and [`multirooted_separator`]
//! extends that to several roots with connector edges that are contracted
//! but never purchased.
//!
//! The three-path construction triangulates a working copy with auxiliary
//! edges, hangs each vertex weight on its first incident face in canonical
//! walk order, and picks a weighted centroid face of the dual tree whose
//! nodes are faces and whose edges cross non-tree primal edges. The
//! fundamental cycles of the centroid face's edges carve the plane into
//! regions that each carry at most half the weight, and every cycle lies on
//! the tree paths from the root to two of the face's corners.

use crate::embed::{Dart, EdgeId, EmbedError, EmbeddedDigraph, VertexId};
use crate::paths::{arborescences_from_table, dijkstra, DistanceTable, PathError};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Per-vertex non-negative integer weights; vertices absent from the map
/// weigh zero.
#[derive(Debug, Clone, Default)]
pub struct WeightAssignment {
    weights: BTreeMap<VertexId, u64>,
}

impl WeightAssignment {
    pub fn new(weights: BTreeMap<VertexId, u64>) -> Self {
        Self { weights }
    }

    /// Weight 1 on each terminal, 0 elsewhere.
    pub fn unit_terminals<'a>(terminals: impl IntoIterator<Item = &'a VertexId>) -> Self {
        Self { weights: terminals.into_iter().map(|t| (*t, 1)).collect() }
    }

    pub fn weight(&self, v: VertexId) -> u64 {
        self.weights.get(&v).copied().unwrap_or(0)
    }

    pub fn total_on(&self, g: &EmbeddedDigraph) -> u64 {
        g.vertices().map(|v| self.weight(v)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeparatorError {
    #[error("graph is not weakly connected")]
    NotConnected,
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("vertex v{} is not reachable from the root set", (.0).0)]
    UnreachableVertex(VertexId),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// One root's share of a multi-rooted separator: a subtree of its BFS
/// arborescence covering the marked target vertices (at most four).
#[derive(Debug, Clone)]
pub struct RootSubtree {
    pub root: VertexId,
    pub edges: BTreeSet<EdgeId>,
    pub marked: Vec<VertexId>,
}

/// A purchased partial (multi-rooted) arborescence plus the residue it
/// leaves behind.
#[derive(Debug, Clone)]
pub struct SeparatorResult {
    /// The up-to-three path endpoints returned by the three-path separator.
    pub targets: Vec<VertexId>,
    /// Vertices removed from the graph: exactly the vertex set of `T`.
    pub separator: BTreeSet<VertexId>,
    /// All edges of the partial arborescence `T`, connectors included.
    pub tree_edges: BTreeSet<EdgeId>,
    /// Connector edges `F` that are contracted but never purchased; empty in
    /// the single-root case.
    pub connector_edges: BTreeSet<EdgeId>,
    /// Per-root subtrees, in root order.
    pub subtrees: Vec<RootSubtree>,
    /// Weak components of the graph minus the separator, ordered by
    /// smallest contained vertex.
    pub components: Vec<Vec<VertexId>>,
}

impl SeparatorResult {
    /// Edges the solution pays for: `E(T) \ F`.
    pub fn purchased_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.tree_edges.iter().copied().filter(move |e| !self.connector_edges.contains(e))
    }

    pub fn purchased_cost(&self, g: &EmbeddedDigraph) -> u64 {
        self.purchased_edges().map(|e| g.edge(e).cost).sum()
    }
}

/// Splits every face of the working copy down to size three (or size-two
/// faces bounded by two distinct parallel edges, which need no splitting)
/// by inserting auxiliary chords between walk corners.
pub(crate) fn triangulate(work: &mut EmbeddedDigraph) -> Result<(), SeparatorError> {
    fn needs_split(walk: &[Dart]) -> bool {
        match walk.len() {
            0 | 1 | 3 => false,
            2 => walk[0].edge == walk[1].edge, // a bridge seen from both sides
            _ => true,
        }
    }

    let mut worklist: Vec<Vec<Dart>> = work.face_walks();
    while let Some(walk) = worklist.pop() {
        if !needs_split(&walk) {
            continue;
        }
        let len = walk.len();
        let vertex_at = |t: usize| work.dart_vertex(walk[t]);
        // Corner t sits at vertex(d_t) right after rev(d_{t-1}).
        let anchor_at = |t: usize| walk[(t + len - 1) % len].reverse();

        // Prefer an ear: a chord two corners apart with distinct endpoints.
        let mut chord = None;
        if len == 2 {
            chord = Some((0, 1));
        } else {
            for t in 0..len {
                if vertex_at(t) != vertex_at((t + 2) % len) {
                    chord = Some((t, (t + 2) % len));
                    break;
                }
            }
            if chord.is_none() {
                'outer: for i in 0..len {
                    for j in i + 2..len {
                        if (i, j) != (0, len - 1) && vertex_at(i) != vertex_at(j) {
                            chord = Some((i, j));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let Some((i, j)) = chord else {
            return Err(SeparatorError::Embed(EmbedError::NotPlanarEmbedding(
                "face admits no triangulating chord".into(),
            )));
        };
        let (u, v) = (vertex_at(i), vertex_at(j));
        let id = work.add_auxiliary_edge(u, Some(anchor_at(i)), v, Some(anchor_at(j)))?;

        // The chord splits the walk locally; no global recomputation needed.
        let take = |from: usize, to: usize| -> Vec<Dart> {
            let mut part = Vec::new();
            let mut t = from;
            while t != to {
                part.push(walk[t]);
                t = (t + 1) % len;
            }
            part
        };
        let mut first = take(j, i);
        first.push(Dart::tail(id));
        let mut second = take(i, j);
        second.push(Dart::head(id));
        if needs_split(&first) {
            worklist.push(first);
        }
        if needs_split(&second) {
            worklist.push(second);
        }
    }
    Ok(())
}

/// Parent pointers of the tree rooted at `root`, BFS over `tree` edges in
/// the undirected sense.
fn tree_parents(
    g: &EmbeddedDigraph,
    tree: &BTreeSet<EdgeId>,
    root: VertexId,
) -> BTreeMap<VertexId, (VertexId, EdgeId)> {
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> = BTreeMap::new();
    for &e in tree {
        let info = g.edge(e);
        adj.entry(info.tail).or_default().push((info.head, e));
        adj.entry(info.head).or_default().push((info.tail, e));
    }
    let mut parents = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(u, e) in adj.get(&v).into_iter().flatten() {
            if seen.insert(u) {
                parents.insert(u, (v, e));
                queue.push_back(u);
            }
        }
    }
    parents
}

/// Vertices of the tree path `root -> target`, in order.
fn tree_path_vertices(
    parents: &BTreeMap<VertexId, (VertexId, EdgeId)>,
    root: VertexId,
    target: VertexId,
) -> Vec<VertexId> {
    let mut path = vec![target];
    let mut cur = target;
    while cur != root {
        cur = parents[&cur].0;
        path.push(cur);
    }
    path.reverse();
    path
}

/// Balanced three-path separator over an explicit spanning tree.
///
/// Returns up to three target vertices and the union of the tree paths from
/// `root` to each of them; removing that union leaves weak components of
/// weight at most half the total.
pub fn three_path_separator(
    g: &EmbeddedDigraph,
    spanning_tree: &BTreeSet<EdgeId>,
    root: VertexId,
    weights: &WeightAssignment,
) -> Result<(Vec<VertexId>, BTreeSet<VertexId>), SeparatorError> {
    let n = g.num_vertices();
    if g.weak_components().len() != 1 {
        return Err(SeparatorError::NotConnected);
    }
    let total: u64 = weights.total_on(g);
    if n <= 1 || total == 0 {
        return Ok((Vec::new(), BTreeSet::new()));
    }

    // Spanning tree check: |T| = V - 1 over real edges and T connects
    // everything.
    if spanning_tree.len() != n - 1 {
        return Err(SeparatorError::NotSpanningTree);
    }
    for &e in spanning_tree {
        if g.try_edge(e).is_none_or(|i| i.aux) {
            return Err(SeparatorError::NotSpanningTree);
        }
    }
    let parents = tree_parents(g, spanning_tree, root);
    if parents.len() != n - 1 {
        return Err(SeparatorError::NotSpanningTree);
    }

    let mut work = g.clone();
    triangulate(&mut work)?;

    let walks = work.face_walks();
    let mut face_of: HashMap<Dart, usize> = HashMap::with_capacity(2 * work.num_edges());
    for (f, walk) in walks.iter().enumerate() {
        for &d in walk {
            face_of.insert(d, f);
        }
    }

    // Each vertex's weight counts once, at its first incident face in
    // canonical walk order.
    let mut face_weight = vec![0u64; walks.len()];
    let mut assigned: BTreeSet<VertexId> = BTreeSet::new();
    for (f, walk) in walks.iter().enumerate() {
        for &d in walk {
            let v = work.dart_vertex(d);
            if assigned.insert(v) {
                face_weight[f] += weights.weight(v);
            }
        }
    }

    // Interdigitating dual tree: faces as nodes, one edge per non-tree
    // primal edge (auxiliary chords included).
    let mut dual: Vec<Vec<usize>> = vec![Vec::new(); walks.len()];
    let mut dual_edges = 0usize;
    for (e, _) in work.edges() {
        if spanning_tree.contains(&e) {
            continue;
        }
        let f1 = face_of[&Dart::tail(e)];
        let f2 = face_of[&Dart::head(e)];
        debug_assert_ne!(f1, f2, "triangulated faces never see an edge twice");
        dual[f1].push(f2);
        dual[f2].push(f1);
        dual_edges += 1;
    }
    debug_assert_eq!(dual_edges + 1, walks.len(), "dual of a spanning tree is a tree");

    let centroid = dual_centroid(&dual, &face_weight, total);

    // Corner vertices of the centroid face, deduplicated in walk order.
    let mut targets = Vec::new();
    for &d in &walks[centroid] {
        let v = work.dart_vertex(d);
        if !targets.contains(&v) {
            targets.push(v);
        }
    }
    debug_assert!(targets.len() <= 3);

    let mut separator = BTreeSet::new();
    for &t in &targets {
        separator.extend(tree_path_vertices(&parents, root, t));
    }
    Ok((targets, separator))
}

/// Weighted centroid of a tree given as adjacency lists: a node whose
/// removal leaves components of weight at most `total / 2`, smallest index
/// on ties.
fn dual_centroid(adj: &[Vec<usize>], weight: &[u64], total: u64) -> usize {
    let n = adj.len();
    debug_assert!(n > 0);
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut subtree = weight.to_vec();
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            subtree[parent[v]] += subtree[v];
        }
    }
    let mut best = (u64::MAX, usize::MAX);
    for v in 0..n {
        let mut worst = total - subtree[v]; // the side through the parent
        for &u in &adj[v] {
            if parent[u] == v {
                worst = worst.max(subtree[u]);
            }
        }
        if (worst, v) < best {
            best = (worst, v);
        }
    }
    debug_assert!(2 * best.0 <= total, "a centroid always exists");
    best.1
}

/// Structured separator for a single root: the purchased tree is a union of
/// up to three shortest dipaths starting at `root`, taken inside the BFS
/// arborescence. Every vertex must be reachable from `root`.
pub fn directed_separator(
    g: &EmbeddedDigraph,
    root: VertexId,
    weights: &WeightAssignment,
) -> Result<SeparatorResult, SeparatorError> {
    let table = dijkstra(g, &[root])?;
    directed_separator_with_table(g, root, weights, &table)
}

/// [`directed_separator`] reusing a distance table computed for `[root]`.
pub fn directed_separator_with_table(
    g: &EmbeddedDigraph,
    root: VertexId,
    weights: &WeightAssignment,
    table: &DistanceTable,
) -> Result<SeparatorResult, SeparatorError> {
    for v in g.vertices() {
        if table.dist(v).is_none() {
            return Err(SeparatorError::UnreachableVertex(v));
        }
    }
    let total = weights.total_on(g);
    if g.num_vertices() <= 1 || total == 0 {
        return Ok(degenerate_result(g, &[root]));
    }
    let arb = arborescences_from_table(table, &[root])?;
    let tree: BTreeSet<EdgeId> = arb.trees[0].1.clone();
    let (targets, separator) = three_path_separator(g, &tree, root, weights)?;

    let mut tree_edges = BTreeSet::new();
    for &t in &targets {
        tree_edges.extend(table.path_to(g, t).expect("reachable"));
    }
    let (rest, _) = g.delete_vertices(&separator)?;
    let components = rest.weak_components();
    debug_assert!(balanced(&components, weights, total));
    Ok(SeparatorResult {
        targets: targets.clone(),
        separator,
        tree_edges: tree_edges.clone(),
        connector_edges: BTreeSet::new(),
        subtrees: vec![RootSubtree { root, edges: tree_edges, marked: targets }],
        components,
    })
}

/// Structured separator for several roots. Purchases per-root subtrees of
/// the vertex-disjoint BFS arborescences (at most four shortest dipaths
/// each); connector edges between arborescences are carried in `F` and
/// contracted for free.
pub fn multirooted_separator(
    g: &EmbeddedDigraph,
    roots: &[VertexId],
    weights: &WeightAssignment,
) -> Result<SeparatorResult, SeparatorError> {
    let table = dijkstra(g, roots)?;
    multirooted_separator_with_table(g, roots, weights, &table)
}

/// [`multirooted_separator`] reusing a distance table computed for `roots`.
pub fn multirooted_separator_with_table(
    g: &EmbeddedDigraph,
    roots: &[VertexId],
    weights: &WeightAssignment,
    table: &DistanceTable,
) -> Result<SeparatorResult, SeparatorError> {
    if g.weak_components().len() != 1 {
        return Err(SeparatorError::NotConnected);
    }
    for v in g.vertices() {
        if table.dist(v).is_none() {
            return Err(SeparatorError::UnreachableVertex(v));
        }
    }
    let total = weights.total_on(g);
    if g.num_vertices() <= 1 || total == 0 {
        return Ok(degenerate_result(g, roots));
    }

    let arb = arborescences_from_table(table, roots)?;

    // Connector candidates F': real edges joining distinct arborescences,
    // scanned in id order, until T' = F' + all A_i spans the graph.
    let mut class: Vec<usize> = (0..roots.len()).collect();
    fn find_class(class: &mut Vec<usize>, x: usize) -> usize {
        if class[x] != x {
            let r = find_class(class, class[x]);
            class[x] = r;
        }
        class[x]
    }
    let mut connector_candidates: BTreeSet<EdgeId> = BTreeSet::new();
    let mut spanning: BTreeSet<EdgeId> = BTreeSet::new();
    for (_, tree) in &arb.trees {
        spanning.extend(tree.iter().copied());
    }
    for (e, info) in g.edges() {
        if info.aux {
            continue;
        }
        let (ca, cb) = (arb.owner_of[&info.tail], arb.owner_of[&info.head]);
        let (ra, rb) = (find_class(&mut class, ca), find_class(&mut class, cb));
        if ra != rb {
            class[ra] = rb;
            connector_candidates.insert(e);
            spanning.insert(e);
        }
    }
    if spanning.len() != g.num_vertices() - 1 {
        return Err(SeparatorError::NotConnected);
    }

    let anchor = roots[0];
    let (targets, path_union) = three_path_separator(g, &spanning, anchor, weights)?;
    let parents = tree_parents(g, &spanning, anchor);

    // Mark, per arborescence, the first and last vertices of each returned
    // path that lie in it; coincidence of the first marks keeps each set at
    // four or fewer.
    let mut marked: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); roots.len()];
    let mut path_edges: BTreeSet<EdgeId> = BTreeSet::new();
    for &t in &targets {
        let path = tree_path_vertices(&parents, anchor, t);
        for win in path.windows(2) {
            path_edges.insert(parents[&win[1]].1);
        }
        let mut first_last: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for (pos, &v) in path.iter().enumerate() {
            let owner = arb.owner_of[&v];
            first_last.entry(owner).and_modify(|fl| fl.1 = pos).or_insert((pos, pos));
        }
        for (owner, (first, last)) in first_last {
            marked[owner].insert(path[first]);
            marked[owner].insert(path[last]);
        }
    }

    // Per-root subtrees: union of the arborescence dipaths to the marks.
    let mut subtrees = Vec::with_capacity(roots.len());
    let mut tree_edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut tree_vertices: BTreeSet<VertexId> = BTreeSet::new();
    for (i, &r) in roots.iter().enumerate() {
        let marks: Vec<VertexId> = marked[i].iter().copied().collect();
        assert!(marks.len() <= 4, "at most four marked vertices per arborescence");
        let mut edges = BTreeSet::new();
        for &m in &marks {
            edges.extend(table.path_to(g, m).expect("reachable"));
            tree_vertices.insert(m);
        }
        if !marks.is_empty() {
            tree_vertices.insert(r);
        }
        for &e in &edges {
            tree_vertices.insert(g.edge(e).tail);
            tree_vertices.insert(g.edge(e).head);
        }
        tree_edges.extend(edges.iter().copied());
        subtrees.push(RootSubtree { root: r, edges, marked: marks });
    }

    // F: separator-path edges not inside any arborescence subtree.
    let connector_edges: BTreeSet<EdgeId> = path_edges.difference(&tree_edges).copied().collect();
    debug_assert!(connector_edges.iter().all(|e| connector_candidates.contains(e)));
    for &e in &connector_edges {
        tree_vertices.insert(g.edge(e).tail);
        tree_vertices.insert(g.edge(e).head);
    }
    tree_edges.extend(connector_edges.iter().copied());
    debug_assert!(path_union.iter().all(|v| tree_vertices.contains(v)));
    debug_assert!(tree_is_acyclic_connected(g, &tree_edges, &tree_vertices));

    let (rest, _) = g.delete_vertices(&tree_vertices)?;
    let components = rest.weak_components();
    debug_assert!(balanced(&components, weights, total));
    Ok(SeparatorResult {
        targets,
        separator: tree_vertices,
        tree_edges,
        connector_edges,
        subtrees,
        components,
    })
}

fn degenerate_result(g: &EmbeddedDigraph, roots: &[VertexId]) -> SeparatorResult {
    SeparatorResult {
        targets: Vec::new(),
        separator: BTreeSet::new(),
        tree_edges: BTreeSet::new(),
        connector_edges: BTreeSet::new(),
        subtrees: roots
            .iter()
            .map(|r| RootSubtree { root: *r, edges: BTreeSet::new(), marked: Vec::new() })
            .collect(),
        components: g.weak_components(),
    }
}

fn balanced(components: &[Vec<VertexId>], weights: &WeightAssignment, total: u64) -> bool {
    components.iter().all(|c| {
        let w: u64 = c.iter().map(|v| weights.weight(*v)).sum();
        2 * w <= total
    })
}

fn tree_is_acyclic_connected(
    g: &EmbeddedDigraph,
    edges: &BTreeSet<EdgeId>,
    vertices: &BTreeSet<VertexId>,
) -> bool {
    if vertices.is_empty() {
        return edges.is_empty();
    }
    if edges.len() + 1 != vertices.len() {
        return false;
    }
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &e in edges {
        let info = g.edge(e);
        adj.entry(info.tail).or_default().push(info.head);
        adj.entry(info.head).or_default().push(info.tail);
    }
    let start = *vertices.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &u in adj.get(&v).into_iter().flatten() {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == vertices.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::bfs_arborescences;
    use crate::testutil::grid;

    fn component_weights(
        g: &EmbeddedDigraph,
        sep: &BTreeSet<VertexId>,
        w: &WeightAssignment,
    ) -> Vec<u64> {
        let (rest, _) = g.delete_vertices(sep).unwrap();
        rest.weak_components()
            .iter()
            .map(|c| c.iter().map(|v| w.weight(*v)).sum())
            .collect()
    }

    /// Exhaustive oracle: over all multisets of up to three target vertices,
    /// the best achievable max-component weight using tree paths from `root`.
    fn brute_force_best_balance(
        g: &EmbeddedDigraph,
        tree: &BTreeSet<EdgeId>,
        root: VertexId,
        w: &WeightAssignment,
    ) -> u64 {
        let parents = tree_parents(g, tree, root);
        let verts: Vec<VertexId> = g.vertices().collect();
        let mut best = u64::MAX;
        for a in 0..verts.len() {
            for b in a..verts.len() {
                for c in b..verts.len() {
                    let mut sep = BTreeSet::new();
                    for &t in &[verts[a], verts[b], verts[c]] {
                        sep.extend(tree_path_vertices(&parents, root, t));
                    }
                    let worst = component_weights(g, &sep, w).into_iter().max().unwrap_or(0);
                    best = best.min(worst);
                }
            }
        }
        best
    }

    #[test]
    fn star_from_center_is_balanced() {
        let mut g = EmbeddedDigraph::new();
        let r = g.add_vertex();
        let mut tree = BTreeSet::new();
        let mut leaves = Vec::new();
        for _ in 0..5 {
            let v = g.add_vertex();
            tree.insert(g.add_edge(r, v, 1).unwrap());
            leaves.push(v);
        }
        let w = WeightAssignment::unit_terminals(leaves.iter());
        let (targets, sep) = three_path_separator(&g, &tree, r, &w).unwrap();
        assert!(targets.len() <= 3);
        let total = w.total_on(&g);
        for cw in component_weights(&g, &sep, &w) {
            assert!(2 * cw <= total);
        }
    }

    #[test]
    fn single_vertex_or_zero_weight_gives_empty_separator() {
        let mut g = EmbeddedDigraph::new();
        let v = g.add_vertex();
        let w = WeightAssignment::default();
        let (targets, sep) = three_path_separator(&g, &BTreeSet::new(), v, &w).unwrap();
        assert!(targets.is_empty() && sep.is_empty());

        let g2 = grid(3, 3);
        let tree = bfs_arborescences(&g2, &[VertexId(0)]).unwrap().trees[0].1.clone();
        let (targets, sep) =
            three_path_separator(&g2, &tree, VertexId(0), &WeightAssignment::default()).unwrap();
        assert!(targets.is_empty() && sep.is_empty());
    }

    #[test]
    fn grid_separator_is_balanced_and_brute_force_agrees() {
        let g = grid(4, 4);
        let root = VertexId(0);
        let tree = bfs_arborescences(&g, &[root]).unwrap().trees[0].1.clone();
        let w = WeightAssignment::new(g.vertices().map(|v| (v, 1)).collect());
        let total = w.total_on(&g);

        let (_, sep) = three_path_separator(&g, &tree, root, &w).unwrap();
        let worst = component_weights(&g, &sep, &w).into_iter().max().unwrap_or(0);
        assert!(2 * worst <= total);

        // The exhaustive search must also find a balanced triple.
        let best = brute_force_best_balance(&g, &tree, root, &w);
        assert!(2 * best <= total);
    }

    #[test]
    fn not_a_spanning_tree_is_rejected() {
        let g = grid(3, 3);
        let w = WeightAssignment::new(g.vertices().map(|v| (v, 1)).collect());
        let err = three_path_separator(&g, &BTreeSet::new(), VertexId(0), &w).unwrap_err();
        assert_eq!(err, SeparatorError::NotSpanningTree);
    }

    #[test]
    fn small_corpus_exhaustive_balance() {
        // Weakly connected embedded graphs on up to 12 vertices: grids,
        // paths and a parallel-edge gadget.
        let mut corpus: Vec<(EmbeddedDigraph, VertexId)> = vec![
            (grid(2, 2), VertexId(0)),
            (grid(3, 3), VertexId(0)),
            (grid(2, 5), VertexId(3)),
            (grid(3, 4), VertexId(5)),
        ];
        {
            let mut path = EmbeddedDigraph::new();
            let vs: Vec<VertexId> = (0..6).map(|_| path.add_vertex()).collect();
            for i in 0..5 {
                path.add_edge(vs[i], vs[i + 1], 1).unwrap();
            }
            corpus.push((path, vs[0]));
        }
        {
            let mut par = EmbeddedDigraph::new();
            let a = par.add_vertex();
            let b = par.add_vertex();
            let c = par.add_vertex();
            par.add_edge(a, b, 1).unwrap();
            par.add_edge(a, b, 2).unwrap();
            par.add_edge(b, c, 1).unwrap();
            par.validate_embedding().unwrap();
            corpus.push((par, a));
        }
        for (g, root) in corpus {
            let w = WeightAssignment::new(g.vertices().map(|v| (v, 1)).collect());
            let total = w.total_on(&g);
            // Spanning tree over undirected reachability from root.
            let mut tree = BTreeSet::new();
            let mut seen = BTreeSet::from([root]);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for (e, u) in g.undirected_neighbors(v) {
                    if seen.insert(u) {
                        tree.insert(e);
                        queue.push_back(u);
                    }
                }
            }
            let (_, sep) = three_path_separator(&g, &tree, root, &w).unwrap();
            let worst = component_weights(&g, &sep, &w).into_iter().max().unwrap_or(0);
            assert!(2 * worst <= total, "implementation unbalanced");
            let best = brute_force_best_balance(&g, &tree, root, &w);
            assert!(2 * best <= total, "no balanced triple exists at all");
        }
    }

    #[test]
    fn pentagon_triangulates_with_two_chords() {
        // A directed 5-cycle: the two faces are both 5-walks; triangulating
        // each adds 2 chords, and a face-walk oracle confirms every face
        // ends up with at most 3 darts.
        let mut g = EmbeddedDigraph::new();
        let vs: Vec<VertexId> = (0..5).map(|_| g.add_vertex()).collect();
        for i in 0..5 {
            g.add_edge(vs[i], vs[(i + 1) % 5], 1).unwrap();
        }
        let before = g.num_edges();
        let inner_before = g
            .face_walks()
            .iter()
            .filter(|w| w.len() == 5)
            .count();
        assert_eq!(inner_before, 2);
        triangulate(&mut g).unwrap();
        g.validate_embedding().unwrap();
        // 2 chords per pentagonal face.
        assert_eq!(g.num_edges(), before + 4);
        assert_eq!(g.edges().filter(|(_, i)| i.aux).count(), 4);
        for walk in g.face_walks() {
            assert!(walk.len() <= 3, "face of size {} survived", walk.len());
        }
    }

    #[test]
    fn directed_separator_on_a_dipath() {
        let mut g = EmbeddedDigraph::new();
        let vs: Vec<VertexId> = (0..6).map(|_| g.add_vertex()).collect();
        for i in 0..5 {
            g.add_edge(vs[i], vs[i + 1], 1).unwrap();
        }
        let w = WeightAssignment::unit_terminals(vs[1..].iter());
        let res = directed_separator(&g, vs[0], &w).unwrap();
        let total = w.total_on(&g);
        for c in &res.components {
            let cw: u64 = c.iter().map(|v| w.weight(*v)).sum();
            assert!(2 * cw <= total);
        }
        assert!(res.connector_edges.is_empty());
    }

    #[test]
    fn purchased_paths_are_shortest_dipaths() {
        let g = grid(5, 5);
        let w = WeightAssignment::unit_terminals([VertexId(24)].iter());
        let res = directed_separator(&g, VertexId(0), &w).unwrap();
        let table = dijkstra(&g, &[VertexId(0)]).unwrap();
        for &t in &res.targets {
            let path = table.path_to(&g, t).unwrap();
            let cost: u64 = path.iter().map(|e| g.edge(*e).cost).sum();
            assert_eq!(Some(cost), table.dist(t));
        }
    }

    /// Grid with every adjacency doubled into antiparallel edges so every
    /// vertex reaches every other.
    pub(crate) fn grid_reachable(rows: usize, cols: usize) -> EmbeddedDigraph {
        let base = grid(rows, cols);
        let mut g = EmbeddedDigraph::new();
        for v in base.vertices() {
            g.add_vertex_with_id(v).unwrap();
        }
        for (e, info) in base.edges() {
            g.add_edge_with_id(EdgeId(2 * e.0), info.tail, info.head, info.cost).unwrap();
            g.add_edge_with_id(EdgeId(2 * e.0 + 1), info.head, info.tail, info.cost).unwrap();
        }
        for v in base.vertices() {
            let mut rot = Vec::new();
            for d in base.rotation(v) {
                let e2 = EdgeId(2 * d.edge.0);
                let e3 = EdgeId(2 * d.edge.0 + 1);
                // Mirrored pair order at the two endpoints closes the bigon.
                match d.end {
                    crate::embed::End::Tail => {
                        rot.push(Dart::head(e3));
                        rot.push(Dart::tail(e2));
                    }
                    crate::embed::End::Head => {
                        rot.push(Dart::head(e2));
                        rot.push(Dart::tail(e3));
                    }
                }
            }
            g.set_rotation(v, rot).unwrap();
        }
        g.validate_embedding().unwrap();
        g
    }

    #[test]
    fn directed_separator_random_instances_meet_contract() {
        for seed in 0..15u32 {
            let g = grid_reachable(7, 7);
            let terms: Vec<VertexId> = (1..49u32)
                .filter(|i| (i.wrapping_mul(2654435761).wrapping_add(seed)) % 3 == 0)
                .map(VertexId)
                .collect();
            if terms.is_empty() {
                continue;
            }
            let w = WeightAssignment::unit_terminals(terms.iter());
            let total = w.total_on(&g);
            let res = directed_separator(&g, VertexId(0), &w).unwrap();
            let table = dijkstra(&g, &[VertexId(0)]).unwrap();
            for c in &res.components {
                let cw: u64 = c.iter().map(|v| w.weight(*v)).sum();
                assert!(2 * cw <= total);
            }
            for &t in &res.targets {
                let path = table.path_to(&g, t).unwrap();
                let cost: u64 = path.iter().map(|e| g.edge(*e).cost).sum();
                assert_eq!(Some(cost), table.dist(t));
            }
            assert!(res.tree_edges.iter().all(|e| !g.edge(*e).aux));
        }
    }

    #[test]
    fn multirooted_with_one_root_reduces_to_directed() {
        let g = grid_reachable(5, 5);
        let terms = [VertexId(6), VertexId(12), VertexId(18), VertexId(24)];
        let w = WeightAssignment::unit_terminals(terms.iter());
        let single = directed_separator(&g, VertexId(0), &w).unwrap();
        let multi = multirooted_separator(&g, &[VertexId(0)], &w).unwrap();
        assert!(multi.connector_edges.is_empty());
        assert_eq!(single.tree_edges, multi.tree_edges);
        assert!(multi.subtrees[0].marked.len() <= 4);
    }

    #[test]
    fn two_roots_joined_by_a_bridge() {
        // Two unit out-stars joined by one bridge edge between the roots;
        // terminals split evenly.
        let mut g = EmbeddedDigraph::new();
        let r1 = g.add_vertex();
        let r2 = g.add_vertex();
        let mut terms = Vec::new();
        for _ in 0..2 {
            let v = g.add_vertex();
            g.add_edge(r1, v, 1).unwrap();
            terms.push(v);
        }
        for _ in 0..2 {
            let v = g.add_vertex();
            g.add_edge(r2, v, 1).unwrap();
            terms.push(v);
        }
        let bridge = g.add_edge(r1, r2, 5).unwrap();
        let w = WeightAssignment::unit_terminals(terms.iter());
        let res = multirooted_separator(&g, &[r1, r2], &w).unwrap();
        let total = w.total_on(&g);
        for c in &res.components {
            let cw: u64 = c.iter().map(|v| w.weight(*v)).sum();
            assert!(2 * cw <= total);
        }
        // The bridge can only appear as a connector, never purchased.
        if res.tree_edges.contains(&bridge) {
            assert!(res.connector_edges.contains(&bridge));
        }
        for st in &res.subtrees {
            assert!(st.marked.len() <= 4);
            for &e in &st.edges {
                assert!(!g.edge(e).aux);
            }
        }
    }

    #[test]
    fn three_roots_on_a_grid_meet_the_contract() {
        let g = grid_reachable(6, 6);
        let roots = [VertexId(0), VertexId(5), VertexId(30)];
        let terms: Vec<VertexId> = (0..36u32).filter(|i| i % 4 == 2).map(VertexId).collect();
        let w = WeightAssignment::unit_terminals(terms.iter());
        let total = w.total_on(&g);
        let table = dijkstra(&g, &roots).unwrap();
        let res = multirooted_separator(&g, &roots, &w).unwrap();

        for c in &res.components {
            let cw: u64 = c.iter().map(|v| w.weight(*v)).sum();
            assert!(2 * cw <= total, "component keeps more than half the terminals");
        }
        for (i, st) in res.subtrees.iter().enumerate() {
            assert!(st.marked.len() <= 4);
            // Every marked vertex is owned by this root and its purchased
            // path costs exactly the table distance.
            for &m in &st.marked {
                assert_eq!(table.entry(m).unwrap().owner, i);
                let path = table.path_to(&g, m).unwrap();
                let cost: u64 = path.iter().map(|e| g.edge(*e).cost).sum();
                assert_eq!(Some(cost), table.dist(m));
            }
            // In-degree at most one inside each purchased subtree.
            let mut indeg: BTreeMap<VertexId, usize> = BTreeMap::new();
            for &e in &st.edges {
                *indeg.entry(g.edge(e).head).or_default() += 1;
            }
            assert!(indeg.values().all(|d| *d <= 1));
        }
        // T is one tree: |E| + 1 = |V|.
        let mut vs = BTreeSet::new();
        for &e in &res.tree_edges {
            vs.insert(g.edge(e).tail);
            vs.insert(g.edge(e).head);
        }
        assert_eq!(res.tree_edges.len() + 1, vs.len().max(1));
    }
}
