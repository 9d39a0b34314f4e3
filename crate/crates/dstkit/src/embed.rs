//! Embedded planar directed multigraphs.
//!
//! A graph is stored as a rotation system: every vertex carries a cyclic
//! sequence of darts (edge-ends), and planarity is witnessed combinatorially
//! by Euler's formula over the faces found by walking the rotation system.
//! Parallel edges are allowed, self-loops are not. All structural operations
//! (vertex deletion, contraction of a connected subset, auxiliary-edge
//! insertion, subdivision) preserve a valid embedding.

use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Identifier of a vertex. Stable across deletions and contractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Identifier of an edge. Surviving edges keep their id through every
/// structural operation, so lineage maps compose trivially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

/// Which endpoint of an edge a dart sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Tail,
    Head,
}

/// One end of one edge; the atomic unit of a rotation system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: EdgeId,
    pub end: End,
}

impl Dart {
    pub fn tail(edge: EdgeId) -> Self {
        Dart { edge, end: End::Tail }
    }

    pub fn head(edge: EdgeId) -> Self {
        Dart { edge, end: End::Head }
    }

    /// The other end of the same edge. `reverse(reverse(d)) == d`.
    pub fn reverse(self) -> Self {
        Dart {
            edge: self.edge,
            end: match self.end {
                End::Tail => End::Head,
                End::Head => End::Tail,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInfo {
    pub tail: VertexId,
    pub head: VertexId,
    pub cost: u64,
    /// Undirected helper edge used only by the separator machinery. Excluded
    /// from costs, distances and solutions.
    pub aux: bool,
}

impl EdgeInfo {
    /// The vertex the given end of this edge is incident to.
    pub fn endpoint(&self, end: End) -> VertexId {
        match end {
            End::Tail => self.tail,
            End::Head => self.head,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("unknown vertex v{}", (.0).0)]
    UnknownVertex(VertexId),
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("not a planar embedding: {0}")]
    NotPlanarEmbedding(String),
    #[error("vertex subset is not weakly connected")]
    NotConnectedSubset,
    #[error("label v{} already in use outside the contracted set", (.0).0)]
    LabelCollision(VertexId),
}

/// Edge lineage between a parent graph and the graph an operation produced.
///
/// `forward` maps every parent edge to its surviving child edge or `None`
/// when the edge was absorbed (deleted or contracted away); `backward` is the
/// inverse on survivors.
#[derive(Debug, Clone, Default)]
pub struct ContractionMap {
    forward: BTreeMap<EdgeId, Option<EdgeId>>,
    backward: BTreeMap<EdgeId, EdgeId>,
}

impl ContractionMap {
    fn record(parent_edges: impl Iterator<Item = EdgeId>, survives: impl Fn(EdgeId) -> bool) -> Self {
        let mut map = ContractionMap::default();
        for e in parent_edges {
            if survives(e) {
                map.forward.insert(e, Some(e));
                map.backward.insert(e, e);
            } else {
                map.forward.insert(e, None);
            }
        }
        map
    }

    pub fn forward(&self, parent: EdgeId) -> Option<EdgeId> {
        self.forward.get(&parent).copied().flatten()
    }

    pub fn backward(&self, child: EdgeId) -> Option<EdgeId> {
        self.backward.get(&child).copied()
    }

    pub fn surviving(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.backward.iter().map(|(c, p)| (*c, *p))
    }

    /// Chains two lineage maps: parent -> mid composed with mid -> child.
    pub fn compose(first: &ContractionMap, second: &ContractionMap) -> ContractionMap {
        let mut out = ContractionMap::default();
        for (&parent, &mid) in &first.forward {
            let child = mid.and_then(|m| second.forward(m));
            out.forward.insert(parent, child);
            if let Some(c) = child {
                out.backward.insert(c, parent);
            }
        }
        out
    }
}

/// Directed multigraph with a per-vertex cyclic rotation of darts.
#[derive(Debug, Clone, Default)]
pub struct EmbeddedDigraph {
    rotations: BTreeMap<VertexId, Vec<Dart>>,
    edges: BTreeMap<EdgeId, EdgeInfo>,
    next_vertex: u32,
    next_edge: u32,
}

impl EmbeddedDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations.keys().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.rotations.contains_key(&v)
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeInfo {
        &self.edges[&e]
    }

    pub fn try_edge(&self, e: EdgeId) -> Option<&EdgeInfo> {
        self.edges.get(&e)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeInfo)> + '_ {
        self.edges.iter().map(|(id, info)| (*id, info))
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Vertex the dart sits at.
    pub fn dart_vertex(&self, d: Dart) -> VertexId {
        self.edges[&d.edge].endpoint(d.end)
    }

    /// Real (non-auxiliary) out-edges of `v` in rotation order.
    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId, u64)> + '_ {
        self.rotation(v).iter().filter_map(move |d| {
            let info = &self.edges[&d.edge];
            (d.end == End::Tail && !info.aux).then_some((d.edge, info.head, info.cost))
        })
    }

    /// All neighbours of `v` over real and auxiliary edges, ignoring
    /// orientation, in rotation order (with multiplicity).
    pub fn undirected_neighbors(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.rotation(v).iter().map(move |d| {
            let info = &self.edges[&d.edge];
            (d.edge, info.endpoint(d.end.other()))
        })
    }

    pub fn fresh_vertex_id(&self) -> VertexId {
        VertexId(self.next_vertex)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.next_vertex);
        self.add_vertex_with_id(v).expect("fresh id");
        v
    }

    pub fn add_vertex_with_id(&mut self, v: VertexId) -> Result<(), EmbedError> {
        if self.rotations.contains_key(&v) {
            return Err(EmbedError::LabelCollision(v));
        }
        self.rotations.insert(v, Vec::new());
        self.next_vertex = self.next_vertex.max(v.0 + 1);
        Ok(())
    }

    /// Adds an edge with its darts appended at the end of both endpoint
    /// rotations. Callers building a specific embedding fix the cyclic order
    /// afterwards with [`EmbeddedDigraph::set_rotation`].
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, cost: u64) -> Result<EdgeId, EmbedError> {
        self.add_edge_with_id(EdgeId(self.next_edge), tail, head, cost)
    }

    pub fn add_edge_with_id(
        &mut self,
        id: EdgeId,
        tail: VertexId,
        head: VertexId,
        cost: u64,
    ) -> Result<EdgeId, EmbedError> {
        if self.edges.contains_key(&id) {
            return Err(EmbedError::MalformedRotation(format!("duplicate edge id e{}", id.0)));
        }
        if !self.rotations.contains_key(&tail) {
            return Err(EmbedError::UnknownVertex(tail));
        }
        if !self.rotations.contains_key(&head) {
            return Err(EmbedError::UnknownVertex(head));
        }
        if tail == head {
            return Err(EmbedError::MalformedRotation(format!(
                "self-loop at v{} is not allowed",
                tail.0
            )));
        }
        self.edges.insert(id, EdgeInfo { tail, head, cost, aux: false });
        self.rotations.get_mut(&tail).unwrap().push(Dart::tail(id));
        self.rotations.get_mut(&head).unwrap().push(Dart::head(id));
        self.next_edge = self.next_edge.max(id.0 + 1);
        Ok(id)
    }

    /// Replaces the cyclic order at `v`. The new sequence must contain
    /// exactly the darts incident to `v`.
    pub fn set_rotation(&mut self, v: VertexId, rot: Vec<Dart>) -> Result<(), EmbedError> {
        let current = self.rotations.get(&v).ok_or(EmbedError::UnknownVertex(v))?;
        let want: BTreeSet<Dart> = current.iter().copied().collect();
        let got: BTreeSet<Dart> = rot.iter().copied().collect();
        if want != got || rot.len() != current.len() {
            return Err(EmbedError::MalformedRotation(format!(
                "rotation for v{} does not list its incident darts exactly once",
                v.0
            )));
        }
        self.rotations.insert(v, rot);
        Ok(())
    }

    pub fn total_cost(&self, edges: impl IntoIterator<Item = EdgeId>) -> u64 {
        edges.into_iter().map(|e| self.edges[&e].cost).sum()
    }

    pub fn set_edge_cost(&mut self, e: EdgeId, cost: u64) {
        self.edges.get_mut(&e).expect("known edge").cost = cost;
    }

    fn dart_positions(&self) -> HashMap<Dart, (VertexId, usize)> {
        let mut idx = HashMap::with_capacity(2 * self.edges.len());
        for (&v, rot) in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                idx.insert(d, (v, i));
            }
        }
        idx
    }

    /// All face walks in canonical discovery order (vertices ascending,
    /// rotation positions in order). Every dart appears in exactly one walk.
    pub fn face_walks(&self) -> Vec<Vec<Dart>> {
        let idx = self.dart_positions();
        let mut visited: BTreeSet<Dart> = BTreeSet::new();
        let mut walks = Vec::new();
        for rot in self.rotations.values() {
            for &start in rot {
                if visited.contains(&start) {
                    continue;
                }
                let mut walk = Vec::new();
                let mut d = start;
                loop {
                    walk.push(d);
                    visited.insert(d);
                    // Next dart in the face: successor of the reverse dart in
                    // its rotation.
                    let rev = d.reverse();
                    let (v, i) = idx[&rev];
                    let r = &self.rotations[&v];
                    d = r[(i + 1) % r.len()];
                    if d == start {
                        break;
                    }
                }
                walks.push(walk);
            }
        }
        walks
    }

    /// Partition of the vertices by connectivity ignoring edge orientation,
    /// ordered by smallest contained vertex id.
    pub fn weak_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in self.rotations.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.insert(start);
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for (_, u) in self.undirected_neighbors(v) {
                    if seen.insert(u) {
                        comp.push(u);
                        queue.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        // Discovery over ascending keys already yields ascending minima.
        comps
    }

    /// Checks the rotation system structurally and against Euler's formula,
    /// returning the number of faces.
    ///
    /// With V vertices, E edges, F faces and C weak components the embedding
    /// is accepted iff V - E + F = 1 + C, verified per component.
    pub fn validate_embedding(&self) -> Result<usize, EmbedError> {
        // Structural pass: each edge contributes exactly its two darts, at
        // the right vertices, each exactly once.
        let mut seen: HashMap<Dart, VertexId> = HashMap::with_capacity(2 * self.edges.len());
        for (&v, rot) in &self.rotations {
            for &d in rot {
                let info = self
                    .edges
                    .get(&d.edge)
                    .ok_or_else(|| EmbedError::MalformedRotation(format!("dart of unknown edge e{}", d.edge.0)))?;
                if info.endpoint(d.end) != v {
                    return Err(EmbedError::MalformedRotation(format!(
                        "dart of e{} listed at v{} but incident to v{}",
                        d.edge.0,
                        v.0,
                        info.endpoint(d.end).0
                    )));
                }
                if seen.insert(d, v).is_some() {
                    return Err(EmbedError::MalformedRotation(format!("duplicated dart of e{}", d.edge.0)));
                }
            }
        }
        for (&id, info) in &self.edges {
            if info.tail == info.head {
                return Err(EmbedError::MalformedRotation(format!("self-loop e{}", id.0)));
            }
            if !self.rotations.contains_key(&info.tail) || !self.rotations.contains_key(&info.head) {
                return Err(EmbedError::MalformedRotation(format!("e{} references a missing vertex", id.0)));
            }
            for end in [End::Tail, End::Head] {
                if !seen.contains_key(&Dart { edge: id, end }) {
                    return Err(EmbedError::MalformedRotation(format!("missing dart of e{}", id.0)));
                }
            }
        }

        // Euler per weak component: V_i - E_i + F_i = 2 whenever the
        // component has edges. Isolated vertices live in the shared outer
        // face, which the global count below restores.
        let comps = self.weak_components();
        let mut comp_of: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of.insert(v, i);
            }
        }
        let mut edge_count = vec![0usize; comps.len()];
        for info in self.edges.values() {
            edge_count[comp_of[&info.tail]] += 1;
        }
        let mut walk_count = vec![0usize; comps.len()];
        let walks = self.face_walks();
        for walk in &walks {
            let v = self.dart_vertex(walk[0]);
            walk_count[comp_of[&v]] += 1;
        }
        let mut isolated = 0usize;
        for (i, comp) in comps.iter().enumerate() {
            if edge_count[i] == 0 {
                isolated += 1;
                continue;
            }
            let euler = comp.len() as i64 - edge_count[i] as i64 + walk_count[i] as i64;
            if euler != 2 {
                return Err(EmbedError::NotPlanarEmbedding(format!(
                    "component containing v{} has V - E + F = {} (want 2)",
                    comp[0].0, euler
                )));
            }
        }
        if comps.is_empty() {
            return Ok(0);
        }
        // All outer faces merge into one shared face of the plane.
        Ok(walks.len() + isolated + 1 - comps.len())
    }

    /// Removes the vertices in `s` together with all incident edges.
    /// Survivors keep their cyclic order with the removed darts spliced out.
    pub fn delete_vertices(&self, s: &BTreeSet<VertexId>) -> Result<(Self, ContractionMap), EmbedError> {
        for &v in s {
            if !self.rotations.contains_key(&v) {
                return Err(EmbedError::UnknownVertex(v));
            }
        }
        let mut g = EmbeddedDigraph {
            rotations: BTreeMap::new(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for (&v, rot) in &self.rotations {
            if s.contains(&v) {
                continue;
            }
            let kept: Vec<Dart> = rot
                .iter()
                .copied()
                .filter(|d| {
                    let info = &self.edges[&d.edge];
                    !s.contains(&info.tail) && !s.contains(&info.head)
                })
                .collect();
            // Every surviving edge has a surviving tail, so inserting from
            // the tail dart covers them all exactly once.
            for &d in &kept {
                if d.end == End::Tail {
                    g.edges.insert(d.edge, self.edges[&d.edge].clone());
                }
            }
            g.rotations.insert(v, kept);
        }
        let map = ContractionMap::record(self.edges.keys().copied(), |e| g.edges.contains_key(&e));
        Ok((g, map))
    }

    /// Removes a set of edges, splicing their darts out of the rotations.
    pub fn delete_edges(&self, s: &BTreeSet<EdgeId>) -> (Self, ContractionMap) {
        let mut g = self.clone();
        for e in s {
            if let Some(info) = g.edges.remove(e) {
                for (v, end) in [(info.tail, End::Tail), (info.head, End::Head)] {
                    let rot = g.rotations.get_mut(&v).unwrap();
                    rot.retain(|d| *d != Dart { edge: *e, end });
                }
            }
        }
        let map = ContractionMap::record(self.edges.keys().copied(), |e| !s.contains(&e));
        (g, map)
    }

    /// Contracts the weakly connected vertex set `t` into the single vertex
    /// `label`, preserving the embedding by splicing rotations at each
    /// contracted edge. Edges inside `t` disappear, parallel edges that
    /// become self-loops are deleted, and boundary edges keep their ids.
    pub fn contract_connected(
        &self,
        t: &BTreeSet<VertexId>,
        label: VertexId,
    ) -> Result<(Self, ContractionMap), EmbedError> {
        if t.is_empty() {
            return Err(EmbedError::NotConnectedSubset);
        }
        for &v in t {
            if !self.rotations.contains_key(&v) {
                return Err(EmbedError::UnknownVertex(v));
            }
        }
        if !t.contains(&label) && self.rotations.contains_key(&label) {
            return Err(EmbedError::LabelCollision(label));
        }

        // Spanning tree of g[t] by BFS from the smallest member, darts
        // scanned in rotation order. Fails if g[t] is disconnected.
        let start = *t.iter().next().unwrap();
        let mut tree: Vec<EdgeId> = Vec::new();
        let mut reached: BTreeSet<VertexId> = BTreeSet::new();
        reached.insert(start);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (e, u) in self.undirected_neighbors(v) {
                if t.contains(&u) && reached.insert(u) {
                    tree.push(e);
                    queue.push_back(u);
                }
            }
        }
        if reached.len() != t.len() {
            return Err(EmbedError::NotConnectedSubset);
        }

        let mut g = self.clone();
        let mut absorbed: BTreeSet<EdgeId> = BTreeSet::new();
        for e in tree {
            let Some(info) = g.edges.get(&e).cloned() else { continue };
            if info.tail == info.head {
                continue;
            }
            g.contract_edge_splice(e, &mut absorbed);
        }
        // The splice step deletes loops eagerly, so only boundary edges
        // remain; internal non-tree edges became loops and are gone. Exactly
        // one vertex of `t` survives; relabel it.
        let mut survivors = t.iter().copied().filter(|v| g.rotations.contains_key(v));
        let merged = survivors.next().expect("contraction leaves one vertex");
        debug_assert_eq!(survivors.next(), None);
        if merged != label {
            let rot = g.rotations.remove(&merged).unwrap();
            for d in &rot {
                let info = g.edges.get_mut(&d.edge).unwrap();
                match d.end {
                    End::Tail => info.tail = label,
                    End::Head => info.head = label,
                }
            }
            g.rotations.insert(label, rot);
        }
        g.next_vertex = g.next_vertex.max(label.0 + 1);
        let map = ContractionMap::record(self.edges.keys().copied(), |e| g.edges.contains_key(&e));
        Ok((g, map))
    }

    /// Contracts one edge, merging its head-side rotation into the tail-side
    /// one at the darts' positions. Loops created by parallel edges are
    /// removed on the spot. Merges into whichever endpoint `keep` resolves
    /// to: the tail side of `e` as stored.
    fn contract_edge_splice(&mut self, e: EdgeId, absorbed: &mut BTreeSet<EdgeId>) {
        let info = self.edges[&e].clone();
        let (u, v) = (info.tail, info.head);
        debug_assert_ne!(u, v);
        let ru = self.rotations.remove(&u).unwrap();
        let rv = self.rotations.remove(&v).unwrap();
        let pu = ru.iter().position(|d| *d == Dart::tail(e)).expect("tail dart present");
        let pv = rv.iter().position(|d| *d == Dart::head(e)).expect("head dart present");

        // ru[..pu] ++ rv[pv+1..] ++ rv[..pv] ++ ru[pu+1..], dropping e's darts.
        let mut merged: Vec<Dart> = Vec::with_capacity(ru.len() + rv.len() - 2);
        merged.extend_from_slice(&ru[..pu]);
        merged.extend_from_slice(&rv[pv + 1..]);
        merged.extend_from_slice(&rv[..pv]);
        merged.extend_from_slice(&ru[pu + 1..]);

        self.edges.remove(&e);
        absorbed.insert(e);
        // Re-home v's darts onto u.
        for d in &merged {
            let einfo = self.edges.get_mut(&d.edge).unwrap();
            if einfo.endpoint(d.end) == v {
                match d.end {
                    End::Tail => einfo.tail = u,
                    End::Head => einfo.head = u,
                }
            }
        }
        // Drop loops created by parallels of e.
        let mut loops: BTreeSet<EdgeId> = BTreeSet::new();
        for d in &merged {
            let einfo = &self.edges[&d.edge];
            if einfo.tail == einfo.head {
                loops.insert(d.edge);
            }
        }
        if !loops.is_empty() {
            merged.retain(|d| !loops.contains(&d.edge));
            for l in loops {
                self.edges.remove(&l);
                absorbed.insert(l);
            }
        }
        self.rotations.insert(u, merged);
    }

    /// Inserts an undirected auxiliary helper edge between `u` and `v` at the
    /// given rotation corners (`None` only for a vertex with an empty
    /// rotation). The corners must lie on a common face unless the endpoints
    /// are in different weak components.
    pub fn add_auxiliary_edge(
        &mut self,
        u: VertexId,
        after_u: Option<Dart>,
        v: VertexId,
        after_v: Option<Dart>,
    ) -> Result<EdgeId, EmbedError> {
        if !self.rotations.contains_key(&u) {
            return Err(EmbedError::UnknownVertex(u));
        }
        if !self.rotations.contains_key(&v) {
            return Err(EmbedError::UnknownVertex(v));
        }
        if u == v {
            return Err(EmbedError::MalformedRotation("auxiliary self-loop".into()));
        }
        let check_anchor = |vertex: VertexId, after: Option<Dart>| -> Result<(), EmbedError> {
            match after {
                Some(d) => {
                    if self.rotations[&vertex].iter().all(|x| *x != d) {
                        return Err(EmbedError::MalformedRotation(format!(
                            "anchor dart not in rotation of v{}",
                            vertex.0
                        )));
                    }
                    Ok(())
                }
                None => {
                    if !self.rotations[&vertex].is_empty() {
                        return Err(EmbedError::MalformedRotation(format!(
                            "v{} has a non-empty rotation; an anchor dart is required",
                            vertex.0
                        )));
                    }
                    Ok(())
                }
            }
        };
        check_anchor(u, after_u)?;
        check_anchor(v, after_v)?;

        // Both corners anchored: they must share a face, otherwise the
        // insertion would merge two faces and break Euler's formula. The one
        // exception is endpoints in distinct weak components, which always
        // embed (one component sits inside the other's face); that fallback
        // check only runs when the face walk fails.
        if let (Some(du), Some(dv)) = (after_u, after_v) {
            if !self.corner_on_face_of(du, v, dv) && self.same_component(u, v) {
                return Err(EmbedError::NotPlanarEmbedding(
                    "auxiliary edge endpoints lie on different faces".into(),
                ));
            }
        }

        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(id, EdgeInfo { tail: u, head: v, cost: 0, aux: true });
        let insert_after = |rot: &mut Vec<Dart>, after: Option<Dart>, d: Dart| match after {
            Some(a) => {
                let p = rot.iter().position(|x| *x == a).unwrap();
                rot.insert(p + 1, d);
            }
            None => rot.push(d),
        };
        insert_after(self.rotations.get_mut(&u).unwrap(), after_u, Dart::tail(id));
        insert_after(self.rotations.get_mut(&v).unwrap(), after_v, Dart::head(id));
        Ok(id)
    }

    fn same_component(&self, u: VertexId, v: VertexId) -> bool {
        let mut seen = BTreeSet::from([u]);
        let mut queue = vec![u];
        while let Some(x) = queue.pop() {
            if x == v {
                return true;
            }
            for (_, y) in self.undirected_neighbors(x) {
                if seen.insert(y) {
                    queue.push(y);
                }
            }
        }
        false
    }

    /// Walks the face crossing the corner after `du` and reports whether the
    /// corner after `dv` at vertex `v` lies on it.
    fn corner_on_face_of(&self, du: Dart, v: VertexId, dv: Dart) -> bool {
        let rot_next = |d: Dart| -> Dart {
            let r = &self.rotations[&self.dart_vertex(d)];
            let i = r.iter().position(|x| *x == d).expect("dart in rotation");
            r[(i + 1) % r.len()]
        };
        // Corners are (vertex, preceding dart) pairs; the walk visits corner
        // (x, d) right before departing along rot_next(d).
        let start = (self.dart_vertex(du), du);
        let target = (v, dv);
        let mut corner = start;
        loop {
            if corner == target {
                return true;
            }
            let depart = rot_next(corner.1);
            let arrive = depart.reverse();
            corner = (self.dart_vertex(arrive), arrive);
            if corner == start {
                return false;
            }
        }
    }

    /// Splits edge `e = (x, y)` at a fresh vertex `m`: `e` becomes `(x, m)`
    /// with `cost_first` and a new edge `(m, y)` carries `cost_second`.
    pub fn subdivide_edge(
        &mut self,
        e: EdgeId,
        cost_first: u64,
        cost_second: u64,
    ) -> Result<(VertexId, EdgeId), EmbedError> {
        let info = self
            .edges
            .get(&e)
            .cloned()
            .ok_or_else(|| EmbedError::MalformedRotation(format!("unknown edge e{}", e.0)))?;
        let m = self.add_vertex();
        let f = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(f, EdgeInfo { tail: m, head: info.head, cost: cost_second, aux: info.aux });
        {
            let einfo = self.edges.get_mut(&e).unwrap();
            einfo.head = m;
            einfo.cost = cost_first;
        }
        // Old head position now hosts the new edge's head dart.
        let rot = self.rotations.get_mut(&info.head).unwrap();
        let p = rot.iter().position(|d| *d == Dart::head(e)).unwrap();
        rot[p] = Dart::head(f);
        self.rotations.insert(m, vec![Dart::head(e), Dart::tail(f)]);
        Ok((m, f))
    }
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}
