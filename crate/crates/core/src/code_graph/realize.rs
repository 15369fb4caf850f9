use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{verify_code_graph, CodeGraph, CodeGraphViolation, NodeKind};
use crate::network::{Network, NetworkError, Path, PathSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizeError {
    Invalid(CodeGraphViolation),
    /// Two generated vertices or edges would share a name.
    NameCollision(String),
    Network(NetworkError),
}

impl fmt::Display for RealizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizeError::Invalid(v) => write!(f, "code graph does not verify: {v}"),
            RealizeError::NameCollision(n) => write!(f, "generated name {n} is not unique"),
            RealizeError::Network(e) => e.fmt(f),
        }
    }
}

fn tail(id: &str) -> String {
    format!("{id}.tail")
}

fn head(id: &str) -> String {
    format!("{id}.head")
}

/// Realizes a verified code graph as a reduced network, lifting each
/// `pi_{S,R}` to a path in it.
///
/// Vertices: sources and receivers keep their names; coding node `Q` splits
/// into `Q.tail` and `Q.head`, joined by the edge `Q`. The remaining edges are
/// named `from->to` after the node ids (or receiver) they connect.
pub fn network_from_code_graph(g: &CodeGraph) -> Result<(Network, PathSystem), RealizeError> {
    verify_code_graph(g).map_err(RealizeError::Invalid)?;
    let receivers = g.receivers();
    let mut vertices = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    // Where a node's signal leaves, and where it enters.
    let out_of = |v: usize| match g.node(v).kind {
        NodeKind::Source => g.node(v).id.clone(),
        NodeKind::Coding => head(&g.node(v).id),
    };
    let into = |v: usize| tail(&g.node(v).id);
    for v in g.nodes() {
        match v.kind {
            NodeKind::Source => vertices.push(v.id.clone()),
            NodeKind::Coding => {
                vertices.push(tail(&v.id));
                vertices.push(head(&v.id));
                edges.push((v.id.clone(), tail(&v.id), head(&v.id)));
            }
        }
    }
    vertices.extend(receivers.iter().cloned());
    for &(a, b) in g.edges() {
        edges.push((format!("{}->{}", g.node(a).id, g.node(b).id), out_of(a), into(b)));
    }
    for (v, node) in g.nodes().iter().enumerate() {
        for r in &node.labels {
            edges.push((format!("{}->{}", node.id, r), out_of(v), r.clone()));
        }
    }
    let mut names = BTreeSet::new();
    for v in &vertices {
        if !names.insert(v.clone()) {
            return Err(RealizeError::NameCollision(v.clone()));
        }
    }
    let mut edge_names = BTreeSet::new();
    for (e, _, _) in &edges {
        if !edge_names.insert(e.clone()) {
            return Err(RealizeError::NameCollision(e.clone()));
        }
    }
    let sources: Vec<String> = g.sources().iter().map(|&s| g.node(s).id.clone()).collect();
    let n = Network::new(vertices, edges, sources, receivers.clone()).map_err(RealizeError::Network)?;

    let edge = |name: String| n.edge_by_name(&name).expect("generated edge");
    let mut ps = PathSystem::new();
    for r in &receivers {
        for (&s, pi) in &g.paths()[r] {
            let mut p = Vec::new();
            for w in pi.windows(2) {
                p.push(edge(format!("{}->{}", g.node(w[0]).id, g.node(w[1]).id)));
                p.push(edge(g.node(w[1]).id.clone()));
            }
            let last = *pi.last().unwrap();
            p.push(edge(format!("{}->{}", g.node(last).id, r)));
            let sv = n.vertex(&g.node(s).id).unwrap();
            ps.insert(n.vertex(r).unwrap(), sv, Path::new(p));
        }
    }
    debug_assert!(crate::network::validate_path_system(&n, &ps).is_ok());
    Ok((n, ps))
}
