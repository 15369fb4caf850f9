use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{CodeGraph, CodeNode, NodeKind, PathFamily};
use crate::coding::CodingPointSet;
use crate::network::{validate_path_system, EdgeId, Network, PathSystem, PathSystemViolation, VertexId};

/// Where a coding-direct path starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Start {
    Vertex(VertexId),
    /// Leaves through the coding point itself.
    CodingPoint(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    /// The tail of this coding point is reached.
    CodingPoint(EdgeId),
    Receiver(VertexId),
}

/// Targets reachable by paths that cross no coding point, except one whose
/// tail is the start vertex (taken as the first edge).
pub fn coding_direct_reachable(n: &Network, from: Start, cps: &CodingPointSet) -> BTreeSet<Target> {
    let mut seen = vec![false; n.vertex_count()];
    let mut queue = VecDeque::new();
    match from {
        Start::Vertex(v) => {
            seen[v.0] = true;
            queue.push_back(v);
            for &e in n.out_edges(v) {
                let h = n.edge(e).head;
                if cps.contains(e) && !seen[h.0] {
                    seen[h.0] = true;
                    queue.push_back(h);
                }
            }
        }
        Start::CodingPoint(e) => {
            let h = n.edge(e).head;
            seen[h.0] = true;
            queue.push_back(h);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in n.out_edges(v) {
            let h = n.edge(e).head;
            if !cps.contains(e) && !seen[h.0] {
                seen[h.0] = true;
                queue.push_back(h);
            }
        }
    }
    let mut out = BTreeSet::new();
    for e in cps.edges() {
        if seen[n.edge(e).tail.0] && from != Start::CodingPoint(e) {
            out.insert(Target::CodingPoint(e));
        }
    }
    for &r in n.receivers() {
        if seen[r.0] {
            out.insert(Target::Receiver(r));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuildError {
    InvalidPaths(PathSystemViolation),
    /// An edge lies on no path of the system.
    NotReduced(String),
    /// A source and a coding point share an id.
    IdCollision(String),
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::InvalidPaths(v) => v.fmt(f),
            BuildError::NotReduced(e) => write!(f, "network is not reduced: edge {e} is on no path"),
            BuildError::IdCollision(id) => write!(f, "source and coding point share the id {id}"),
        }
    }
}

/// The code graph of a reduced network. Source nodes come first in vertex
/// order, then coding points in edge order; node ids are the vertex and edge
/// ids of their objects.
pub fn build_code_graph(n: &Network, ps: &PathSystem, cps: &CodingPointSet) -> Result<CodeGraph, BuildError> {
    validate_path_system(n, ps).map_err(BuildError::InvalidPaths)?;
    let used = ps.used_edges();
    if let Some(e) = n.edge_ids().find(|e| !used.contains(e)) {
        return Err(BuildError::NotReduced(n.edge_name(e).to_string()));
    }
    let mut starts: Vec<(String, NodeKind, Start)> =
        n.sources().iter().map(|s| (n.vertex_name(*s).to_string(), NodeKind::Source, Start::Vertex(*s))).collect();
    starts.extend(cps.edges().map(|e| (n.edge_name(e).to_string(), NodeKind::Coding, Start::CodingPoint(e))));
    let mut ids = BTreeSet::new();
    for (id, _, _) in &starts {
        if !ids.insert(id.clone()) {
            return Err(BuildError::IdCollision(id.clone()));
        }
    }
    let index_of_cp: BTreeMap<EdgeId, usize> =
        cps.edges().enumerate().map(|(i, e)| (e, n.sources().len() + i)).collect();

    let mut nodes = Vec::new();
    let mut edges = BTreeSet::new();
    for (i, (id, kind, start)) in starts.into_iter().enumerate() {
        let mut labels = BTreeSet::new();
        for t in coding_direct_reachable(n, start, cps) {
            match t {
                Target::CodingPoint(e) => {
                    edges.insert((i, index_of_cp[&e]));
                }
                Target::Receiver(r) => {
                    labels.insert(n.vertex_name(r).to_string());
                }
            }
        }
        nodes.push(CodeNode { id, kind, labels });
    }

    let mut paths = PathFamily::new();
    for (r, s, p) in ps.iter() {
        let si = n.sources().iter().position(|x| *x == s).expect("source");
        let mut pi = vec![si];
        pi.extend(p.edges().iter().filter_map(|e| index_of_cp.get(e).copied()));
        paths.entry(n.vertex_name(r).to_string()).or_default().insert(si, pi);
    }
    Ok(CodeGraph::new(nodes, edges, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::builtin;
    use crate::code_graph::{is_isomorphic, verify_code_graph};
    use crate::coding::detect_coding_points;
    use crate::fixtures;
    use crate::network::Path;

    #[test]
    fn butterfly_reachability() {
        let (n, ps) = fixtures::butterfly();
        let cps = detect_coding_points(&n, &ps).unwrap();
        let m = n.edge_by_name("m").unwrap();
        let from_s1 = coding_direct_reachable(&n, Start::Vertex(n.vertex("S1").unwrap()), &cps);
        assert_eq!(
            from_s1.into_iter().collect::<Vec<_>>(),
            [Target::CodingPoint(m), Target::Receiver(n.vertex("R1").unwrap())]
        );
        let from_q = coding_direct_reachable(&n, Start::CodingPoint(m), &cps);
        assert_eq!(
            from_q.into_iter().collect::<Vec<_>>(),
            [Target::Receiver(n.vertex("R1").unwrap()), Target::Receiver(n.vertex("R2").unwrap())]
        );
    }

    #[test]
    fn no_coding_points_reach_all_receivers() {
        let n = crate::network::Network::builder()
            .vertices(["S", "A", "R1", "R2"])
            .edge("a", "S", "A")
            .edge("b", "A", "R1")
            .edge("c", "A", "R2")
            .source("S")
            .receiver("R1")
            .receiver("R2")
            .build()
            .unwrap();
        let reach = coding_direct_reachable(&n, Start::Vertex(n.vertex("S").unwrap()), &CodingPointSet::default());
        assert_eq!(reach.len(), 2);
    }

    #[test]
    fn butterfly_code_graph() {
        let (n, ps) = fixtures::butterfly();
        let cps = detect_coding_points(&n, &ps).unwrap();
        let g = build_code_graph(&n, &ps, &cps).unwrap();
        verify_code_graph(&g).unwrap();
        let ids: Vec<_> = g.nodes().iter().map(|v| v.id.as_str()).collect();
        assert_eq!(ids, ["S1", "S2", "m"]);
        assert_eq!(g.edges().iter().copied().collect::<Vec<_>>(), [(0, 2), (1, 2)]);
        let labels: Vec<Vec<&str>> = g.nodes().iter().map(|v| v.labels.iter().map(String::as_str).collect()).collect();
        assert_eq!(labels, [vec!["R1"], vec!["R2"], vec!["R1", "R2"]]);
        assert!(is_isomorphic(&g, &builtin::butterfly_code_graph()));
    }

    #[test]
    fn four_source_code_graph() {
        let (n, ps) = fixtures::four_source();
        let cps = detect_coding_points(&n, &ps).unwrap();
        let g = build_code_graph(&n, &ps, &cps).unwrap();
        verify_code_graph(&g).unwrap();
        assert_eq!(g.len(), 8);
        assert!(is_isomorphic(&g, &builtin::four_source_code_graph()));
        assert_eq!(g.paths(), builtin::four_source_code_graph().paths());
        let by_receiver: Vec<Vec<usize>> = ["R1", "R2", "R3"].iter().map(|r| g.labeled(r)).collect();
        assert_eq!(by_receiver, [vec![0, 3, 5, 7], vec![0, 1, 6, 7], vec![1, 2, 3, 7]]);
    }

    #[test]
    fn single_path_network() {
        let n = fixtures::single_edge();
        let mut ps = PathSystem::new();
        ps.insert(n.vertex("R").unwrap(), n.vertex("S").unwrap(), Path::new(vec![n.edge_by_name("e").unwrap()]));
        let g = build_code_graph(&n, &ps, &CodingPointSet::default()).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g.node(0).labels.contains("R"));
        assert_eq!(g.paths()["R"][&0], [0]);
    }

    #[test]
    fn unreduced_input_is_rejected() {
        let (n, ps) = fixtures::modified_butterfly();
        let cps = detect_coding_points(&n, &ps).unwrap();
        assert_eq!(build_code_graph(&n, &ps, &cps), Err(BuildError::NotReduced("e16".into())));
    }
}
