//! Multicast network model: a directed acyclic multigraph with designated
//! sources and receivers, plus per-receiver systems of edge-disjoint paths.
//!
//! Vertex and edge ids are opaque strings. A [`Network`] stores them sorted
//! lexicographically and hands out dense [`VertexId`] / [`EdgeId`] indices,
//! so index order is id order everywhere downstream.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Dense index of a vertex inside a [`Network`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Dense index of an edge inside a [`Network`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NetworkError {
    DuplicateVertex(String),
    DuplicateEdge(String),
    UnknownEndpoint { edge: String, vertex: String },
    UnknownSource(String),
    UnknownReceiver(String),
    NoSources,
    NoReceivers,
    SourceIsReceiver(String),
    ReceiverWithOutEdges(String),
    SourceWithInEdges(String),
    Cycle(String),
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::DuplicateVertex(v) => write!(f, "duplicate vertex id: {v}"),
            NetworkError::DuplicateEdge(e) => write!(f, "duplicate edge id: {e}"),
            NetworkError::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} references unknown vertex {vertex}")
            }
            NetworkError::UnknownSource(v) => write!(f, "source {v} is not a vertex"),
            NetworkError::UnknownReceiver(v) => write!(f, "receiver {v} is not a vertex"),
            NetworkError::NoSources => write!(f, "empty source set"),
            NetworkError::NoReceivers => write!(f, "empty receiver set"),
            NetworkError::SourceIsReceiver(v) => {
                write!(f, "vertex {v} is both a source and a receiver")
            }
            NetworkError::ReceiverWithOutEdges(v) => write!(f, "receiver with out-edges: {v}"),
            NetworkError::SourceWithInEdges(v) => write!(f, "source with in-edges: {v}"),
            NetworkError::Cycle(v) => write!(f, "cycle detected through vertex {v}"),
        }
    }
}

/// `(vertices, (edge, tail, head), sources, receivers)` by id.
pub type NetworkParts = (Vec<String>, Vec<(String, String, String)>, Vec<String>, Vec<String>);

/// Collects ids for a [`Network`]; validation happens in [`NetworkBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct NetworkBuilder {
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
    sources: Vec<String>,
    receivers: Vec<String>,
}

impl NetworkBuilder {
    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn vertices<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Self {
        self.edges.push((id.into(), tail.into(), head.into()));
        self
    }

    pub fn source(mut self, id: impl Into<String>) -> Self {
        self.sources.push(id.into());
        self
    }

    pub fn receiver(mut self, id: impl Into<String>) -> Self {
        self.receivers.push(id.into());
        self
    }

    pub fn build(self) -> Result<Network, NetworkError> {
        Network::new(self.vertices, self.edges, self.sources, self.receivers)
    }
}

/// A validated multicast network. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    vertices: Vec<String>,
    vertex_index: BTreeMap<String, VertexId>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<String, EdgeId>,
    sources: Vec<VertexId>,
    receivers: Vec<VertexId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    topo: Vec<VertexId>,
}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    /// Validates and indexes a network. Edges are `(id, tail, head)`.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
        sources: Vec<String>,
        receivers: Vec<String>,
    ) -> Result<Network, NetworkError> {
        let mut names = vertices;
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(NetworkError::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_index: BTreeMap<String, VertexId> =
            names.iter().enumerate().map(|(i, v)| (v.clone(), VertexId(i))).collect();

        let mut raw_edges = edges;
        raw_edges.sort_by(|a, b| a.0.cmp(&b.0));
        for w in raw_edges.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(NetworkError::DuplicateEdge(w[0].0.clone()));
            }
        }
        let mut edge_list = Vec::with_capacity(raw_edges.len());
        for (id, tail, head) in raw_edges {
            let t = *vertex_index
                .get(&tail)
                .ok_or_else(|| NetworkError::UnknownEndpoint { edge: id.clone(), vertex: tail.clone() })?;
            let h = *vertex_index
                .get(&head)
                .ok_or_else(|| NetworkError::UnknownEndpoint { edge: id.clone(), vertex: head.clone() })?;
            edge_list.push(Edge { id, tail: t, head: h });
        }
        let edge_index = edge_list.iter().enumerate().map(|(i, e)| (e.id.clone(), EdgeId(i))).collect();

        let resolve = |ids: Vec<String>, source: bool| -> Result<Vec<VertexId>, NetworkError> {
            let mut out = BTreeSet::new();
            for id in ids {
                match vertex_index.get(&id) {
                    Some(v) => {
                        out.insert(*v);
                    }
                    None if source => return Err(NetworkError::UnknownSource(id)),
                    None => return Err(NetworkError::UnknownReceiver(id)),
                }
            }
            Ok(out.into_iter().collect())
        };
        let sources = resolve(sources, true)?;
        let receivers = resolve(receivers, false)?;
        if sources.is_empty() {
            return Err(NetworkError::NoSources);
        }
        if receivers.is_empty() {
            return Err(NetworkError::NoReceivers);
        }
        if let Some(v) = sources.iter().find(|s| receivers.contains(s)) {
            return Err(NetworkError::SourceIsReceiver(names[v.0].clone()));
        }

        let mut out_edges = vec![Vec::new(); names.len()];
        let mut in_edges = vec![Vec::new(); names.len()];
        for (i, e) in edge_list.iter().enumerate() {
            out_edges[e.tail.0].push(EdgeId(i));
            in_edges[e.head.0].push(EdgeId(i));
        }
        for r in &receivers {
            if !out_edges[r.0].is_empty() {
                return Err(NetworkError::ReceiverWithOutEdges(names[r.0].clone()));
            }
        }
        for s in &sources {
            if !in_edges[s.0].is_empty() {
                return Err(NetworkError::SourceWithInEdges(names[s.0].clone()));
            }
        }

        let pairs: Vec<(usize, usize)> = edge_list.iter().map(|e| (e.tail.0, e.head.0)).collect();
        let topo = match topological_order(names.len(), &pairs) {
            Ok(order) => order.into_iter().map(VertexId).collect(),
            Err(v) => return Err(NetworkError::Cycle(names[v].clone())),
        };

        Ok(Network {
            vertices: names,
            vertex_index,
            edges: edge_list,
            edge_index,
            sources,
            receivers,
            out_edges,
            in_edges,
            topo,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].id
    }

    pub fn sources(&self) -> &[VertexId] {
        &self.sources
    }

    pub fn receivers(&self) -> &[VertexId] {
        &self.receivers
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.sources.binary_search(&v).is_ok()
    }

    pub fn is_receiver(&self, v: VertexId) -> bool {
        self.receivers.binary_search(&v).is_ok()
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    /// Vertices in a topological order (Kahn, smallest index first).
    pub fn topological_order(&self) -> &[VertexId] {
        &self.topo
    }

    /// True when two edges share both endpoints.
    pub fn has_parallel_edges(&self) -> bool {
        self.first_parallel_pair().is_some()
    }

    pub fn first_parallel_pair(&self) -> Option<(EdgeId, EdgeId)> {
        let mut seen: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(prev) = seen.insert((e.tail, e.head), EdgeId(i)) {
                return Some((prev, EdgeId(i)));
            }
        }
        None
    }

    /// Ids of everything, in the owned form accepted by [`Network::new`].
    pub fn to_parts(&self) -> NetworkParts {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.id.clone(), self.vertices[e.tail.0].clone(), self.vertices[e.head.0].clone()))
            .collect();
        let names = |vs: &[VertexId]| vs.iter().map(|v| self.vertices[v.0].clone()).collect();
        (self.vertices.clone(), edges, names(&self.sources), names(&self.receivers))
    }
}

/// Kahn's algorithm on `n` vertices with directed `(tail, head)` pairs.
///
/// On failure returns a vertex that lies on a directed cycle.
pub fn topological_order(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>, usize> {
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for &(t, h) in edges {
        indeg[h] += 1;
        succ[t].push(h);
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &h in &succ[v] {
            indeg[h] -= 1;
            if indeg[h] == 0 {
                ready.insert(h);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every unprocessed vertex has an unprocessed predecessor; walking
    // predecessors n times lands on a cycle.
    let done: BTreeSet<usize> = order.into_iter().collect();
    let mut pred = vec![None; n];
    for &(t, h) in edges {
        if !done.contains(&t) && !done.contains(&h) && pred[h].is_none() {
            pred[h] = Some(t);
        }
    }
    let mut v = (0..n).find(|v| !done.contains(v)).unwrap_or(0);
    for _ in 0..n {
        v = pred[v].unwrap_or(v);
    }
    Err(v)
}

/// Three-colour DFS cycle check, independent of [`topological_order`].
pub fn has_cycle(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut succ = vec![Vec::new(); n];
    for &(t, h) in edges {
        succ[t].push(h);
    }
    // 0 = white, 1 = on stack, 2 = finished
    let mut colour = vec![0u8; n];
    for root in 0..n {
        if colour[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        colour[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                match colour[w] {
                    0 => {
                        colour[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            } else {
                colour[v] = 2;
                stack.pop();
            }
        }
    }
    false
}

/// A directed path, as edge ids in traversal order. Never empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn new(edges: Vec<EdgeId>) -> Self {
        Path { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self, n: &Network) -> Option<VertexId> {
        self.edges.first().map(|e| n.edge(*e).tail)
    }

    pub fn end(&self, n: &Network) -> Option<VertexId> {
        self.edges.last().map(|e| n.edge(*e).head)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// The edge preceding `e` on this path, if `e` is on it and not first.
    pub fn predecessor(&self, e: EdgeId) -> Option<EdgeId> {
        let pos = self.edges.iter().position(|x| *x == e)?;
        pos.checked_sub(1).map(|p| self.edges[p])
    }

    /// Edge ids sorted by index; the tie-break key component.
    pub fn sorted_edges(&self) -> Vec<EdgeId> {
        let mut v = self.edges.clone();
        v.sort();
        v
    }

    pub fn names<'a>(&self, n: &'a Network) -> Vec<&'a str> {
        self.edges.iter().map(|e| n.edge_name(*e)).collect()
    }
}

/// For each receiver, one path per source.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSystem {
    paths: BTreeMap<VertexId, BTreeMap<VertexId, Path>>,
}

/// Key comparing path systems: receiver-major, source-minor, each path's
/// edges sorted.
pub type SystemKey = Vec<Vec<EdgeId>>;

impl PathSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, receiver: VertexId, source: VertexId, path: Path) -> Option<Path> {
        self.paths.entry(receiver).or_default().insert(source, path)
    }

    pub fn get(&self, receiver: VertexId, source: VertexId) -> Option<&Path> {
        self.paths.get(&receiver)?.get(&source)
    }

    pub fn for_receiver(&self, receiver: VertexId) -> Option<&BTreeMap<VertexId, Path>> {
        self.paths.get(&receiver)
    }

    pub fn receivers(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.paths.keys().copied()
    }

    /// `(receiver, source, path)` in receiver-major order.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, VertexId, &Path)> + '_ {
        self.paths.iter().flat_map(|(r, m)| m.iter().map(move |(s, p)| (*r, *s, p)))
    }

    pub fn path_count(&self) -> usize {
        self.paths.values().map(BTreeMap::len).sum()
    }

    pub fn used_edges(&self) -> BTreeSet<EdgeId> {
        self.iter().flat_map(|(_, _, p)| p.edges().iter().copied()).collect()
    }

    pub fn key(&self) -> SystemKey {
        self.iter().map(|(_, _, p)| p.sorted_edges()).collect()
    }

    /// Resolves string ids: `receiver -> source -> [edge ids]`.
    pub fn from_names(
        n: &Network,
        names: &BTreeMap<String, BTreeMap<String, Vec<String>>>,
    ) -> Result<PathSystem, PathSystemViolation> {
        let mut ps = PathSystem::new();
        for (r, by_source) in names {
            let rv = n
                .vertex(r)
                .filter(|v| n.is_receiver(*v))
                .ok_or_else(|| PathSystemViolation::NotAReceiver(r.clone()))?;
            for (s, edges) in by_source {
                let sv = n
                    .vertex(s)
                    .filter(|v| n.is_source(*v))
                    .ok_or_else(|| PathSystemViolation::NotASource { receiver: r.clone(), source: s.clone() })?;
                let mut path = Vec::with_capacity(edges.len());
                for e in edges {
                    path.push(n.edge_by_name(e).ok_or_else(|| PathSystemViolation::DanglingEdge(e.clone()))?);
                }
                ps.insert(rv, sv, Path::new(path));
            }
        }
        Ok(ps)
    }

    pub fn to_names(&self, n: &Network) -> BTreeMap<String, BTreeMap<String, Vec<String>>> {
        let mut out: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
        for (r, s, p) in self.iter() {
            out.entry(n.vertex_name(r).to_string())
                .or_default()
                .insert(n.vertex_name(s).to_string(), p.names(n).into_iter().map(ToString::to_string).collect());
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathSystemViolation {
    DanglingEdge(String),
    NotAReceiver(String),
    NotASource { receiver: String, source: String },
    MissingPath { receiver: String, source: String },
    EmptyPath { receiver: String, source: String },
    WrongStart { receiver: String, source: String, edge: String },
    Discontinuous { receiver: String, source: String, edge: String },
    WrongEnd { receiver: String, source: String, edge: String },
    NotEdgeDisjoint { receiver: String, edge: String },
}

impl fmt::Display for PathSystemViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PathSystemViolation::*;
        match self {
            DanglingEdge(e) => write!(f, "dangling edge id {e}"),
            NotAReceiver(r) => write!(f, "{r} is not a receiver"),
            NotASource { receiver, source } => {
                write!(f, "receiver {receiver}: {source} is not a source")
            }
            MissingPath { receiver, source } => {
                write!(f, "receiver {receiver}: missing path from {source}")
            }
            EmptyPath { receiver, source } => {
                write!(f, "receiver {receiver}: empty path from {source}")
            }
            WrongStart { receiver, source, edge } => {
                write!(f, "receiver {receiver}: path from {source} does not start at {source} (edge {edge})")
            }
            Discontinuous { receiver, source, edge } => {
                write!(f, "receiver {receiver}: path from {source} is broken at edge {edge}")
            }
            WrongEnd { receiver, source, edge } => {
                write!(f, "receiver {receiver}: path from {source} does not end at {receiver} (edge {edge})")
            }
            NotEdgeDisjoint { receiver, edge } => {
                write!(f, "receiver {receiver}: not edge-disjoint at edge {edge}")
            }
        }
    }
}

/// Checks every [`PathSystem`] invariant, reporting the first violation in
/// receiver order, then source order.
pub fn validate_path_system(n: &Network, ps: &PathSystem) -> Result<(), PathSystemViolation> {
    let name = |v: VertexId| n.vertex_name(v).to_string();
    for (r, s, p) in ps.iter() {
        if r.0 >= n.vertex_count() || !n.is_receiver(r) {
            return Err(PathSystemViolation::NotAReceiver(alloc::format!("#{}", r.0)));
        }
        if s.0 >= n.vertex_count() || !n.is_source(s) {
            return Err(PathSystemViolation::NotASource { receiver: name(r), source: alloc::format!("#{}", s.0) });
        }
        if let Some(e) = p.edges().iter().find(|e| e.0 >= n.edge_count()) {
            return Err(PathSystemViolation::DanglingEdge(alloc::format!("#{}", e.0)));
        }
    }
    for &r in n.receivers() {
        let by_source = ps.for_receiver(r);
        let mut used: BTreeSet<EdgeId> = BTreeSet::new();
        for &s in n.sources() {
            let p = by_source
                .and_then(|m| m.get(&s))
                .ok_or_else(|| PathSystemViolation::MissingPath { receiver: name(r), source: name(s) })?;
            let edges = p.edges();
            let Some(&first) = edges.first() else {
                return Err(PathSystemViolation::EmptyPath { receiver: name(r), source: name(s) });
            };
            if n.edge(first).tail != s {
                return Err(PathSystemViolation::WrongStart {
                    receiver: name(r),
                    source: name(s),
                    edge: n.edge_name(first).to_string(),
                });
            }
            for w in edges.windows(2) {
                if n.edge(w[0]).head != n.edge(w[1]).tail {
                    return Err(PathSystemViolation::Discontinuous {
                        receiver: name(r),
                        source: name(s),
                        edge: n.edge_name(w[1]).to_string(),
                    });
                }
            }
            let last = *edges.last().unwrap_or(&first);
            if n.edge(last).head != r {
                return Err(PathSystemViolation::WrongEnd {
                    receiver: name(r),
                    source: name(s),
                    edge: n.edge_name(last).to_string(),
                });
            }
            for &e in edges {
                if !used.insert(e) {
                    return Err(PathSystemViolation::NotEdgeDisjoint {
                        receiver: name(r),
                        edge: n.edge_name(e).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::butterfly;

    #[test]
    fn single_edge_network() {
        let n = Network::builder().vertices(["S", "R"]).edge("e", "S", "R").source("S").receiver("R").build().unwrap();
        assert_eq!(n.sources().len(), 1);
        assert_eq!(n.receivers().len(), 1);
    }

    #[test]
    fn receiver_out_edge_is_rejected() {
        let err = Network::builder()
            .vertices(["S", "R"])
            .edge("e", "S", "R")
            .edge("back", "R", "S")
            .source("S")
            .receiver("R")
            .build()
            .unwrap_err();
        assert_eq!(err, NetworkError::ReceiverWithOutEdges("R".into()));
        assert!(err.to_string().contains("receiver with out-edges"));
    }

    #[test]
    fn structural_errors_name_the_offender() {
        let base = || Network::builder().vertices(["S", "A", "B", "R"]).source("S").receiver("R");
        assert_eq!(base().vertex("A").build().unwrap_err(), NetworkError::DuplicateVertex("A".into()));
        assert_eq!(
            base().edge("e", "S", "A").edge("e", "A", "R").build().unwrap_err(),
            NetworkError::DuplicateEdge("e".into())
        );
        assert_eq!(base().edge("x", "A", "S").build().unwrap_err(), NetworkError::SourceWithInEdges("S".into()));
        let cyc =
            base().edge("1", "S", "A").edge("2", "A", "B").edge("3", "B", "A").edge("4", "B", "R").build().unwrap_err();
        assert!(matches!(cyc, NetworkError::Cycle(ref v) if v == "A" || v == "B"));
        let no_src = Network::builder().vertices(["R"]).receiver("R").build().unwrap_err();
        assert_eq!(no_src, NetworkError::NoSources);
        let none_r = Network::builder().vertices(["S"]).source("S").build().unwrap_err();
        assert_eq!(none_r, NetworkError::NoReceivers);
        let both = Network::builder().vertices(["S", "R"]).source("S").receiver("S").receiver("R").build().unwrap_err();
        assert_eq!(both, NetworkError::SourceIsReceiver("S".into()));
    }

    #[test]
    fn butterfly_unique_system_validates() {
        let (n, ps) = butterfly();
        assert_eq!(n.sources().len(), 2);
        assert_eq!(n.receivers().len(), 2);
        assert_eq!(n.edge_count(), 9);
        validate_path_system(&n, &ps).unwrap();
    }

    #[test]
    fn shared_middle_edge_is_reported() {
        let (n, ps) = butterfly();
        let r1 = n.vertex("R1").unwrap();
        let s1 = n.vertex("S1").unwrap();
        let mut bad = ps.clone();
        let e = |name: &str| n.edge_by_name(name).unwrap();
        bad.insert(r1, s1, Path::new(alloc::vec![e("S1-A1"), e("A1-T"), e("m"), e("H-R1")]));
        let v = validate_path_system(&n, &bad).unwrap_err();
        assert_eq!(v, PathSystemViolation::NotEdgeDisjoint { receiver: "R1".into(), edge: "m".into() });
        assert!(v.to_string().contains("not edge-disjoint at edge"));
    }

    #[test]
    fn missing_path_is_reported() {
        let (n, ps) = butterfly();
        let mut names = ps.to_names(&n);
        names.get_mut("R2").unwrap().remove("S2");
        let partial = PathSystem::from_names(&n, &names).unwrap();
        let v = validate_path_system(&n, &partial).unwrap_err();
        assert_eq!(v, PathSystemViolation::MissingPath { receiver: "R2".into(), source: "S2".into() });
    }

    #[test]
    fn dangling_edge_id() {
        let (n, ps) = butterfly();
        let mut names = ps.to_names(&n);
        names.get_mut("R1").unwrap().insert("S1".into(), alloc::vec!["nope".into()]);
        assert_eq!(PathSystem::from_names(&n, &names).unwrap_err(), PathSystemViolation::DanglingEdge("nope".into()));
    }

    #[test]
    fn vertices_are_sorted_lexicographically() {
        let n = Network::builder()
            .vertices(["b", "a", "c"])
            .edge("z", "a", "b")
            .edge("y", "b", "c")
            .source("a")
            .receiver("c")
            .build()
            .unwrap();
        assert_eq!(n.vertex_name(VertexId(0)), "a");
        assert_eq!(n.edge_name(EdgeId(0)), "y");
        let (v, e, s, r) = n.to_parts();
        assert_eq!(Network::new(v, e, s, r).unwrap(), n);
    }
}
