//! Code graphs: the labeled DAG on sources and coding points that keeps
//! only what matters for linear coding.

mod build;
mod infer;
mod iso;
mod realize;

pub use build::{build_code_graph, coding_direct_reachable, BuildError, Start, Target};
pub use infer::infer_paths;
pub use iso::is_isomorphic;
pub use realize::{network_from_code_graph, RealizeError};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Source,
    Coding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeNode {
    pub id: String,
    pub kind: NodeKind,
    pub labels: BTreeSet<String>,
}

impl CodeNode {
    pub fn new<I, S>(id: impl Into<String>, kind: NodeKind, labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CodeNode { id: id.into(), kind, labels: labels.into_iter().map(Into::into).collect() }
    }
}

/// `receiver -> source node -> node path`, all by node index.
pub type PathFamily = BTreeMap<String, BTreeMap<usize, Vec<usize>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeGraph {
    nodes: Vec<CodeNode>,
    edges: BTreeSet<(usize, usize)>,
    paths: PathFamily,
}

impl CodeGraph {
    /// Assembles a graph without checking it; see [`verify_code_graph`].
    pub fn new(nodes: Vec<CodeNode>, edges: BTreeSet<(usize, usize)>, paths: PathFamily) -> Self {
        CodeGraph { nodes, edges, paths }
    }

    /// Edges given by node ids.
    pub fn from_ids(nodes: Vec<CodeNode>, edges: &[(&str, &str)], paths: &[(&str, &str, &[&str])]) -> Option<Self> {
        let idx = |id: &str| nodes.iter().position(|n| n.id == id);
        let mut es = BTreeSet::new();
        for (a, b) in edges {
            es.insert((idx(a)?, idx(b)?));
        }
        let mut family = PathFamily::new();
        for (r, s, p) in paths {
            let p: Option<Vec<usize>> = p.iter().map(|x| idx(x)).collect();
            family.entry(String::from(*r)).or_default().insert(idx(s)?, p?);
        }
        Some(CodeGraph { nodes, edges: es, paths: family })
    }

    pub fn nodes(&self) -> &[CodeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &CodeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn paths(&self) -> &PathFamily {
        &self.paths
    }

    pub fn set_paths(&mut self, paths: PathFamily) {
        self.paths = paths;
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].kind == NodeKind::Source).collect()
    }

    pub fn coding_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].kind == NodeKind::Coding).collect()
    }

    /// The union of all labels, sorted.
    pub fn receivers(&self) -> Vec<String> {
        let all: BTreeSet<&String> = self.nodes.iter().flat_map(|n| n.labels.iter()).collect();
        all.into_iter().cloned().collect()
    }

    pub fn parents(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.1 == v).map(|e| e.0).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.0 == v).map(|e| e.1).collect()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v).count()
    }

    /// `V_R`: the nodes carrying label `r`.
    pub fn labeled(&self, r: &str) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.nodes[i].labels.contains(r)).collect()
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let pairs: Vec<_> = self.edges.iter().copied().collect();
        crate::network::topological_order(self.len(), &pairs).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeGraphViolation {
    NoSources,
    NoReceivers,
    BadNodeIndex(usize),
    Cycle,
    SourceWithInEdges(String),
    LowInDegree {
        node: String,
        in_degree: usize,
    },
    LabelCount {
        receiver: String,
        count: usize,
        sources: usize,
    },
    UnknownPathReceiver(String),
    MissingPath {
        receiver: String,
        source: String,
    },
    WrongStart {
        receiver: String,
        source: String,
    },
    BrokenPath {
        receiver: String,
        source: String,
    },
    UnlabeledEnd {
        receiver: String,
        source: String,
    },
    NotDisjoint {
        receiver: String,
        node: String,
    },
    UncoveredNode(String),
    UncoveredEdge(String, String),
    /// No vertex-disjoint family exists for this receiver.
    NoPathFamily(String),
    /// Families exist but none jointly cover the graph.
    NoCoveringFamily,
    /// The node would not be a coding point of the realized network.
    NotCodingPoint(String),
}

impl fmt::Display for CodeGraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CodeGraphViolation::*;
        match self {
            NoSources => write!(f, "no node has in-degree 0"),
            NoReceivers => write!(f, "no node carries a receiver label"),
            BadNodeIndex(i) => write!(f, "node index {i} out of range"),
            Cycle => write!(f, "graph has a cycle"),
            SourceWithInEdges(v) => write!(f, "source node {v} has in-edges"),
            LowInDegree { node, in_degree } => write!(
                f,
                "coding node {node} has in-degree {in_degree}: in-degree of every vertex in Q is at least 2"
            ),
            LabelCount { receiver, count, sources } => {
                write!(f, "receiver {receiver} labels {count} nodes, expected {sources}")
            }
            UnknownPathReceiver(r) => write!(f, "paths given for unknown receiver {r}"),
            MissingPath { receiver, source } => write!(f, "receiver {receiver}: missing path from {source}"),
            WrongStart { receiver, source } => {
                write!(f, "receiver {receiver}: path for {source} does not start at {source}")
            }
            BrokenPath { receiver, source } => {
                write!(f, "receiver {receiver}: path from {source} is not a path of the graph")
            }
            UnlabeledEnd { receiver, source } => write!(
                f,
                "receiver {receiver}: path from {source} ends at a node not labeled {receiver}"
            ),
            NotDisjoint { receiver, node } => {
                write!(f, "receiver {receiver}: paths are not vertex-disjoint at {node}")
            }
            UncoveredNode(v) => write!(f, "node {v} lies on no path"),
            UncoveredEdge(a, b) => write!(f, "edge {a}->{b} lies on no path"),
            NoPathFamily(r) => write!(f, "receiver {r}: no vertex-disjoint path family exists"),
            NoCoveringFamily => write!(f, "no choice of path families covers every node and edge"),
            NotCodingPoint(v) => write!(
                f,
                "coding node {v}: no two paths through it come from distinct sources, reach distinct receivers and enter from distinct nodes"
            ),
        }
    }
}

/// Checks acyclicity and the characterization of code graphs, reporting the
/// first failure.
pub fn verify_code_graph(g: &CodeGraph) -> Result<(), CodeGraphViolation> {
    use CodeGraphViolation::*;
    let n = g.len();
    for &(a, b) in g.edges() {
        if a >= n || b >= n {
            return Err(BadNodeIndex(a.max(b)));
        }
    }
    let indeg: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
    if !indeg.contains(&0) {
        return Err(NoSources);
    }
    let receivers = g.receivers();
    if receivers.is_empty() {
        return Err(NoReceivers);
    }
    if g.topological_order().is_none() {
        return Err(Cycle);
    }
    for (v, node) in g.nodes().iter().enumerate() {
        match node.kind {
            NodeKind::Source if indeg[v] > 0 => return Err(SourceWithInEdges(node.id.clone())),
            NodeKind::Coding if indeg[v] < 2 => return Err(LowInDegree { node: node.id.clone(), in_degree: indeg[v] }),
            _ => {}
        }
    }
    let sources = g.sources();
    for r in &receivers {
        let count = g.labeled(r).len();
        if count != sources.len() {
            return Err(LabelCount { receiver: r.clone(), count, sources: sources.len() });
        }
    }
    if let Some(r) = g.paths().keys().find(|r| !receivers.contains(r)) {
        return Err(UnknownPathReceiver(r.clone()));
    }
    let mut node_seen = vec![false; n];
    let mut edge_seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    for r in &receivers {
        let family = g.paths().get(r);
        let mut used = vec![false; n];
        for &s in &sources {
            let sid = || g.node(s).id.clone();
            let Some(p) = family.and_then(|m| m.get(&s)) else {
                return Err(MissingPath { receiver: r.clone(), source: sid() });
            };
            if let Some(&bad) = p.iter().find(|&&v| v >= n) {
                return Err(BadNodeIndex(bad));
            }
            if p.first() != Some(&s) {
                return Err(WrongStart { receiver: r.clone(), source: sid() });
            }
            if p.windows(2).any(|w| !g.edges().contains(&(w[0], w[1]))) {
                return Err(BrokenPath { receiver: r.clone(), source: sid() });
            }
            if !g.node(*p.last().unwrap()).labels.contains(r) {
                return Err(UnlabeledEnd { receiver: r.clone(), source: sid() });
            }
            for &v in p {
                if used[v] {
                    return Err(NotDisjoint { receiver: r.clone(), node: g.node(v).id.clone() });
                }
                used[v] = true;
                node_seen[v] = true;
            }
            edge_seen.extend(p.windows(2).map(|w| (w[0], w[1])));
        }
    }
    if let Some(v) = (0..n).find(|&v| !node_seen[v]) {
        return Err(UncoveredNode(g.node(v).id.clone()));
    }
    if let Some(&(a, b)) = g.edges().iter().find(|e| !edge_seen.contains(e)) {
        return Err(UncoveredEdge(g.node(a).id.clone(), g.node(b).id.clone()));
    }
    if let Some(v) = first_non_coding(g, g.paths()) {
        return Err(NotCodingPoint(g.node(v).id.clone()));
    }
    Ok(())
}

/// First coding node not crossed by two paths of `paths` with distinct
/// sources, distinct receivers and distinct predecessors.
pub(crate) fn first_non_coding(g: &CodeGraph, paths: &PathFamily) -> Option<usize> {
    let mut through: Vec<Vec<(&str, usize, usize)>> = vec![Vec::new(); g.len()];
    for (r, family) in paths {
        for (&s, p) in family {
            for w in p.windows(2) {
                through[w[1]].push((r.as_str(), s, w[0]));
            }
        }
    }
    g.coding_nodes().into_iter().find(|&v| {
        let t = &through[v];
        !t.iter().enumerate().any(|(i, a)| t[i + 1..].iter().any(|b| a.0 != b.0 && a.1 != b.1 && a.2 != b.2))
    })
}
