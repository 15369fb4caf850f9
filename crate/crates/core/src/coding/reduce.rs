use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::network::{validate_path_system, Network, PathSystem, PathSystemViolation};

/// Restricts `n` to the vertices and edges used by some path of `ps`. The
/// path system is carried over to the new edge indices.
pub fn reduce_network(n: &Network, ps: &PathSystem) -> Result<(Network, PathSystem), PathSystemViolation> {
    validate_path_system(n, ps)?;
    let used = ps.used_edges();
    let mut keep: BTreeSet<String> = BTreeSet::new();
    let mut edges = Vec::new();
    for &e in &used {
        let edge = n.edge(e);
        keep.insert(n.vertex_name(edge.tail).to_string());
        keep.insert(n.vertex_name(edge.head).to_string());
        edges.push((edge.id.clone(), n.vertex_name(edge.tail).to_string(), n.vertex_name(edge.head).to_string()));
    }
    let names =
        |vs: &[crate::network::VertexId]| -> Vec<String> { vs.iter().map(|v| n.vertex_name(*v).to_string()).collect() };
    let sources = names(n.sources());
    let receivers = names(n.receivers());
    // Every terminal lies on a path of a valid system.
    assert!(sources.iter().chain(&receivers).all(|v| keep.contains(v)));
    let reduced = Network::new(keep.into_iter().collect(), edges, sources, receivers)
        .expect("a subgraph of a valid network is valid");
    let moved = PathSystem::from_names(&reduced, &ps.to_names(n)).expect("paths use kept edges");
    Ok((reduced, moved))
}
