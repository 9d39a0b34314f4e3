//! Line-oriented text formats for instances and solutions.
//!
//! An instance file is versioned and fully explicit: vertex records with a
//! role (and optional integer coordinates and node cost), edge records, and
//! one rotation line per vertex with incident edges. Canonical emission
//! sorts ids ascending and keeps rotations exactly as given, so
//! `emit(parse(emit(x))) == emit(x)` byte for byte.
//!
//! ```text
//! dstkit-instance 1
//! name grid-7
//! seed 7
//! vertex 0 root xy 0 0
//! vertex 1 terminal xy 0 1
//! edge 0 0 1 4
//! rot 0 0t
//! rot 1 0h
//! ```
//!
//! Solution files list edge ids and the total cost:
//!
//! ```text
//! dstkit-solution 1
//! edge 0
//! cost 4
//! ```

use dstkit::embed::{Dart, EdgeId, EmbeddedDigraph, End, VertexId};
use dstkit::solver::{node_weighted_reduction, Instance};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

pub const INSTANCE_HEADER: &str = "dstkit-instance 1";
pub const SOLUTION_HEADER: &str = "dstkit-solution 1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("role conflict: {0}")]
    RoleConflict(String),
    #[error("{0}")]
    Graph(#[from] dstkit::embed::EmbedError),
    #[error("{0}")]
    Instance(#[from] dstkit::solver::SolveError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Root,
    Terminal,
    Steiner,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Root => "root",
            Role::Terminal => "terminal",
            Role::Steiner => "steiner",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VertexRecord {
    pub id: u32,
    pub role: Role,
    pub coords: Option<(i64, i64)>,
    pub node_cost: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct EdgeRecord {
    pub id: u32,
    pub tail: u32,
    pub head: u32,
    pub cost: u64,
}

/// Parsed instance file, close to the text.
#[derive(Debug, Clone, Default)]
pub struct InstanceFile {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    /// Rotation per vertex as (edge id, end) pairs, in cyclic order.
    pub rotations: Vec<(u32, Vec<(u32, End)>)>,
}

/// Everything a command needs after loading a file: the embedded instance
/// (node-weighted inputs already reduced) plus presentation data.
#[derive(Debug)]
pub struct LoadedInstance {
    pub file: InstanceFile,
    pub instance: Instance,
    /// True when node costs were present and the reduction was applied; the
    /// instance's graph then differs from the file's raw graph.
    pub node_weighted: bool,
}

/// Parses a cost token, honouring the fixed-point conversion: with `p`
/// decimal digits allowed, "2.5" at p=1 becomes 25.
fn parse_cost(tok: &str, fixed_point: Option<u32>, line: usize) -> Result<u64, FormatError> {
    match fixed_point {
        None => tok.parse().map_err(|_| syntax(line, format!("bad cost {tok:?}"))),
        Some(p) => {
            let (int_part, frac_part) = match tok.split_once('.') {
                None => (tok, ""),
                Some((a, b)) => (a, b),
            };
            if frac_part.len() > p as usize {
                return Err(syntax(line, format!("cost {tok:?} has more than {p} decimals")));
            }
            let scale = 10u64.pow(p);
            let int: u64 = int_part.parse().map_err(|_| syntax(line, format!("bad cost {tok:?}")))?;
            let frac: u64 = if frac_part.is_empty() {
                0
            } else {
                let padded = format!("{frac_part:0<width$}", width = p as usize);
                padded.parse().map_err(|_| syntax(line, format!("bad cost {tok:?}")))?
            };
            Ok(int * scale + frac)
        }
    }
}

impl InstanceFile {
    pub fn parse(text: &str, fixed_point: Option<u32>) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
        if header.trim() != INSTANCE_HEADER {
            return Err(syntax(1, format!("expected {INSTANCE_HEADER:?}")));
        }
        let mut file = InstanceFile::default();
        for (idx, raw) in lines {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let mut tok = l.split_whitespace();
            match tok.next().unwrap() {
                "name" => {
                    file.name = Some(tok.next().ok_or_else(|| syntax(line, "name needs a value"))?.to_string());
                }
                "seed" => {
                    let s = tok.next().ok_or_else(|| syntax(line, "seed needs a value"))?;
                    file.seed = Some(s.parse().map_err(|_| syntax(line, "bad seed"))?);
                }
                "vertex" => {
                    let id: u32 = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| syntax(line, "vertex needs an id"))?;
                    let role = match tok.next() {
                        Some("root") => Role::Root,
                        Some("terminal") => Role::Terminal,
                        Some("steiner") => Role::Steiner,
                        other => return Err(syntax(line, format!("bad role {other:?}"))),
                    };
                    let mut rec = VertexRecord { id, role, coords: None, node_cost: None };
                    while let Some(key) = tok.next() {
                        match key {
                            "xy" => {
                                let x = tok
                                    .next()
                                    .and_then(|s| s.parse().ok())
                                    .ok_or_else(|| syntax(line, "xy needs two integers"))?;
                                let y = tok
                                    .next()
                                    .and_then(|s| s.parse().ok())
                                    .ok_or_else(|| syntax(line, "xy needs two integers"))?;
                                rec.coords = Some((x, y));
                            }
                            "nodecost" => {
                                let c = tok.next().ok_or_else(|| syntax(line, "nodecost needs a value"))?;
                                rec.node_cost = Some(parse_cost(c, fixed_point, line)?);
                            }
                            other => return Err(syntax(line, format!("unknown vertex field {other:?}"))),
                        }
                    }
                    file.vertices.push(rec);
                }
                "edge" => {
                    let mut next_u32 = || -> Option<u32> { tok.next().and_then(|s| s.parse().ok()) };
                    let id = next_u32().ok_or_else(|| syntax(line, "edge needs id tail head cost"))?;
                    let tail = next_u32().ok_or_else(|| syntax(line, "edge needs id tail head cost"))?;
                    let head = next_u32().ok_or_else(|| syntax(line, "edge needs id tail head cost"))?;
                    let cost_tok = tok.next().ok_or_else(|| syntax(line, "edge needs id tail head cost"))?;
                    let cost = parse_cost(cost_tok, fixed_point, line)?;
                    file.edges.push(EdgeRecord { id, tail, head, cost });
                }
                "rot" => {
                    let v: u32 = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| syntax(line, "rot needs a vertex id"))?;
                    let mut darts = Vec::new();
                    for d in tok {
                        let (num, side) = d.split_at(d.len().saturating_sub(1));
                        let edge: u32 = num.parse().map_err(|_| syntax(line, format!("bad dart {d:?}")))?;
                        let end = match side {
                            "t" => End::Tail,
                            "h" => End::Head,
                            _ => return Err(syntax(line, format!("bad dart side in {d:?}"))),
                        };
                        darts.push((edge, end));
                    }
                    file.rotations.push((v, darts));
                }
                other => return Err(syntax(line, format!("unknown record {other:?}"))),
            }
        }
        Ok(file)
    }

    /// Canonical text: ids ascending, rotations as given.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(INSTANCE_HEADER);
        out.push('\n');
        if let Some(name) = &self.name {
            let _ = writeln!(out, "name {name}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        let mut vertices = self.vertices.clone();
        vertices.sort_by_key(|v| v.id);
        for v in &vertices {
            let _ = write!(out, "vertex {} {}", v.id, v.role.as_str());
            if let Some((x, y)) = v.coords {
                let _ = write!(out, " xy {x} {y}");
            }
            if let Some(c) = v.node_cost {
                let _ = write!(out, " nodecost {c}");
            }
            out.push('\n');
        }
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| e.id);
        for e in &edges {
            let _ = writeln!(out, "edge {} {} {} {}", e.id, e.tail, e.head, e.cost);
        }
        let mut rotations = self.rotations.clone();
        rotations.sort_by_key(|(v, _)| *v);
        for (v, darts) in &rotations {
            if darts.is_empty() {
                continue;
            }
            let _ = write!(out, "rot {v}");
            for (e, end) in darts {
                let side = if *end == End::Tail { 't' } else { 'h' };
                let _ = write!(out, " {e}{side}");
            }
            out.push('\n');
        }
        out
    }

    /// Builds the embedded graph and checks the embedding and the roles.
    pub fn build_graph(&self) -> Result<EmbeddedDigraph, FormatError> {
        let mut g = EmbeddedDigraph::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id) {
                return Err(FormatError::RoleConflict(format!("vertex {} declared twice", v.id)));
            }
            g.add_vertex_with_id(VertexId(v.id))?;
        }
        for e in &self.edges {
            g.add_edge_with_id(EdgeId(e.id), VertexId(e.tail), VertexId(e.head), e.cost)?;
        }
        for (v, darts) in &self.rotations {
            let rot: Vec<Dart> = darts.iter().map(|(e, end)| Dart { edge: EdgeId(*e), end: *end }).collect();
            g.set_rotation(VertexId(*v), rot)?;
        }
        g.validate_embedding()?;
        Ok(g)
    }

    pub fn roots(&self) -> Vec<VertexId> {
        let mut roots: Vec<u32> =
            self.vertices.iter().filter(|v| v.role == Role::Root).map(|v| v.id).collect();
        roots.sort_unstable();
        roots.into_iter().map(VertexId).collect()
    }

    pub fn terminals(&self) -> BTreeSet<VertexId> {
        self.vertices
            .iter()
            .filter(|v| v.role == Role::Terminal)
            .map(|v| VertexId(v.id))
            .collect()
    }

    pub fn node_costs(&self) -> BTreeMap<VertexId, u64> {
        self.vertices
            .iter()
            .filter_map(|v| v.node_cost.map(|c| (VertexId(v.id), c)))
            .collect()
    }

    /// Builds the solvable instance; node-weighted inputs are reduced to
    /// edge-weighted form first. The reduction is deterministic, so any
    /// command loading the same file sees the same edge ids.
    pub fn load(self) -> Result<LoadedInstance, FormatError> {
        let graph = self.build_graph()?;
        let roots = self.roots();
        let terminals = self.terminals();
        if roots.is_empty() {
            return Err(FormatError::RoleConflict("no root vertex".into()));
        }
        let node_costs = self.node_costs();
        let node_weighted = node_costs.values().any(|c| *c > 0);
        let instance = if node_weighted {
            node_weighted_reduction(&graph, &node_costs, roots, terminals)?
        } else {
            Instance::new_allow_empty(graph, roots, terminals)?
        };
        Ok(LoadedInstance { file: self, instance, node_weighted })
    }
}

/// A solution file: edge ids plus the declared total cost.
#[derive(Debug, Clone, Default)]
pub struct SolutionFile {
    pub instance_name: Option<String>,
    pub edges: BTreeSet<u32>,
    pub cost: u64,
}

impl SolutionFile {
    pub fn from_solution(name: Option<&str>, sol: &dstkit::solver::Solution) -> Self {
        SolutionFile {
            instance_name: name.map(str::to_string),
            edges: sol.edges.iter().map(|e| e.0).collect(),
            cost: sol.cost,
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
        if header.trim() != SOLUTION_HEADER {
            return Err(syntax(1, format!("expected {SOLUTION_HEADER:?}")));
        }
        let mut file = SolutionFile::default();
        let mut saw_cost = false;
        for (idx, raw) in lines {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let mut tok = l.split_whitespace();
            match tok.next().unwrap() {
                "instance" => {
                    file.instance_name = tok.next().map(str::to_string);
                }
                "edge" => {
                    let id: u32 = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| syntax(line, "edge needs an id"))?;
                    file.edges.insert(id);
                }
                "cost" => {
                    let c: u64 = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| syntax(line, "cost needs a value"))?;
                    file.cost = c;
                    saw_cost = true;
                }
                other => return Err(syntax(line, format!("unknown record {other:?}"))),
            }
        }
        if !saw_cost {
            return Err(syntax(0, "missing cost line"));
        }
        Ok(file)
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(SOLUTION_HEADER);
        out.push('\n');
        if let Some(name) = &self.instance_name {
            let _ = writeln!(out, "instance {name}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "edge {e}");
        }
        let _ = writeln!(out, "cost {}", self.cost);
        out
    }
}

/// Snapshot of an embedded graph back into file records, preserving vertex
/// metadata from `meta` where ids still exist.
pub fn file_from_graph(
    graph: &EmbeddedDigraph,
    roots: &[VertexId],
    terminals: &BTreeSet<VertexId>,
    name: Option<String>,
    seed: Option<u64>,
    coords: &BTreeMap<VertexId, (i64, i64)>,
) -> InstanceFile {
    let mut vertices: Vec<VertexRecord> = graph
        .vertices()
        .map(|v| VertexRecord {
            id: v.0,
            role: if roots.contains(&v) {
                Role::Root
            } else if terminals.contains(&v) {
                Role::Terminal
            } else {
                Role::Steiner
            },
            coords: coords.get(&v).copied(),
            node_cost: None,
        })
        .collect();
    vertices.sort_by_key(|v| v.id);
    let mut edges: Vec<EdgeRecord> = graph
        .edges()
        .map(|(e, i)| EdgeRecord { id: e.0, tail: i.tail.0, head: i.head.0, cost: i.cost })
        .collect();
    edges.sort_by_key(|e| e.id);
    let rotations = graph
        .vertices()
        .map(|v| {
            (
                v.0,
                graph
                    .rotation(v)
                    .iter()
                    .map(|d| (d.edge.0, d.end))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    InstanceFile { name, seed, vertices, edges, rotations }
}
