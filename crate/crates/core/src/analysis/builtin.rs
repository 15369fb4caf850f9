//! Built-in code graphs and constraint systems.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::code_graph::{CodeGraph, CodeNode, NodeKind, PathFamily};
use crate::labeling::{extract_constraints, ConstraintSystem, SpanConstraint};

/// Names accepted by [`builtin_system`].
pub const SYSTEM_NAMES: [&str; 4] = ["butterfly", "four_source", "combination", "fano"];

/// Names accepted by [`builtin_code_graph`].
pub const CODE_GRAPH_NAMES: [&str; 3] = ["butterfly", "four_source", "combination"];

pub fn butterfly_code_graph() -> CodeGraph {
    CodeGraph::from_ids(
        vec![
            CodeNode::new("S1", NodeKind::Source, ["R1"]),
            CodeNode::new("S2", NodeKind::Source, ["R2"]),
            CodeNode::new("m", NodeKind::Coding, ["R1", "R2"]),
        ],
        &[("S1", "m"), ("S2", "m")],
        &[("R1", "S1", &["S1"]), ("R1", "S2", &["S2", "m"]), ("R2", "S1", &["S1", "m"]), ("R2", "S2", &["S2"])],
    )
    .expect("ids are consistent")
}

/// Four sources, four coding nodes and three receivers.
pub fn four_source_code_graph() -> CodeGraph {
    CodeGraph::from_ids(
        vec![
            CodeNode::new("S1", NodeKind::Source, ["R1", "R2"]),
            CodeNode::new("S2", NodeKind::Source, ["R2", "R3"]),
            CodeNode::new("S3", NodeKind::Source, ["R3"]),
            CodeNode::new("S4", NodeKind::Source, ["R1", "R3"]),
            CodeNode::new("Q5", NodeKind::Coding, [] as [&str; 0]),
            CodeNode::new("Q6", NodeKind::Coding, ["R1"]),
            CodeNode::new("Q7", NodeKind::Coding, ["R2"]),
            CodeNode::new("Q8", NodeKind::Coding, ["R1", "R2", "R3"]),
        ],
        &[
            ("S1", "Q5"),
            ("Q6", "Q5"),
            ("S2", "Q6"),
            ("S3", "Q6"),
            ("S3", "Q7"),
            ("S4", "Q7"),
            ("Q5", "Q8"),
            ("Q7", "Q8"),
        ],
        &[
            ("R1", "S1", &["S1"]),
            ("R1", "S2", &["S2", "Q6"]),
            ("R1", "S3", &["S3", "Q7", "Q8"]),
            ("R1", "S4", &["S4"]),
            ("R2", "S1", &["S1"]),
            ("R2", "S2", &["S2"]),
            ("R2", "S3", &["S3", "Q6", "Q5", "Q8"]),
            ("R2", "S4", &["S4", "Q7"]),
            ("R3", "S1", &["S1", "Q5", "Q8"]),
            ("R3", "S2", &["S2"]),
            ("R3", "S3", &["S3"]),
            ("R3", "S4", &["S4"]),
        ],
    )
    .expect("ids are consistent")
}

/// Three sources and nine coding nodes in three groups of three; group `g`
/// combines one pair of sources. Every 3-subset of coding nodes outside a
/// single group is a receiver.
pub fn combination_code_graph() -> CodeGraph {
    const GROUPS: [[usize; 2]; 3] = [[0, 1], [1, 2], [0, 2]];
    let coding: Vec<String> = (4..=12).map(|i| format!("C{i:02}")).collect();
    let group = |c: usize| c / 3;
    let mut receivers: Vec<(String, [usize; 3])> = Vec::new();
    for a in 0..9 {
        for b in a + 1..9 {
            for c in b + 1..9 {
                if group(a) == group(b) && group(b) == group(c) {
                    continue;
                }
                receivers.push((format!("R{:02}{:02}{:02}", a + 4, b + 4, c + 4), [a, b, c]));
            }
        }
    }
    let mut labels: Vec<BTreeSet<String>> = vec![BTreeSet::new(); 9];
    let mut paths = PathFamily::new();
    for (name, set) in &receivers {
        for &c in set {
            labels[c].insert(name.clone());
        }
        // First lexicographic assignment of sources to distinct members.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms
            .iter()
            .find(|p| (0..3).all(|s| GROUPS[group(set[p[s]])].contains(&s)))
            .expect("triples meeting two groups have a matching");
        let fam: BTreeMap<usize, Vec<usize>> = (0..3).map(|s| (s, vec![s, 3 + set[perm[s]]])).collect();
        paths.insert(name.clone(), fam);
    }
    let mut nodes: Vec<CodeNode> =
        (1..=3).map(|i| CodeNode::new(format!("S{i}"), NodeKind::Source, [] as [&str; 0])).collect();
    for (c, id) in coding.iter().enumerate() {
        nodes.push(CodeNode { id: id.clone(), kind: NodeKind::Coding, labels: labels[c].clone() });
    }
    let edges = (0..9).flat_map(|c| GROUPS[group(c)].map(|s| (s, 3 + c))).collect();
    CodeGraph::new(nodes, edges, paths)
}

/// Seven columns in `F_q^3` whose dependencies are the lines of the Fano
/// plane: each line is dependent, every other triple independent.
pub fn fano_system() -> ConstraintSystem {
    // (parents, target), 1-based.
    const SPANS: [([usize; 2], usize); 7] =
        [([5, 6], 3), ([5, 7], 2), ([6, 7], 1), ([7, 4], 3), ([4, 5], 1), ([4, 6], 2), ([1, 2], 3)];
    let lines: BTreeSet<BTreeSet<usize>> =
        SPANS.iter().map(|(p, t)| [p[0] - 1, p[1] - 1, t - 1].into_iter().collect()).collect();
    let mut independent = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            for c in b + 1..7 {
                if !lines.contains(&[a, b, c].into_iter().collect::<BTreeSet<_>>()) {
                    independent.push(vec![a, b, c]);
                }
            }
        }
    }
    let spans =
        SPANS.iter().map(|(p, t)| SpanConstraint { parents: vec![p[0] - 1, p[1] - 1], target: t - 1 }).collect();
    let columns = (1..=7).map(|i| format!("v{i}")).collect();
    ConstraintSystem::new(3, columns, independent, spans, Some(vec![4, 5, 6])).expect("fano system is well formed")
}

pub fn builtin_code_graph(name: &str) -> Option<CodeGraph> {
    match name {
        "butterfly" => Some(butterfly_code_graph()),
        "four_source" => Some(four_source_code_graph()),
        "combination" => Some(combination_code_graph()),
        _ => None,
    }
}

pub fn builtin_system(name: &str) -> Option<ConstraintSystem> {
    match name {
        "fano" => Some(fano_system()),
        _ => builtin_code_graph(name).map(|g| extract_constraints(&g)),
    }
}
