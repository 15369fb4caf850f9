//! The reference networks used throughout tests and the bundled corpus.

use alloc::string::String;
use alloc::vec::Vec;

use crate::network::{Network, Path, PathSystem};

fn build(vertices: &[&str], edges: &[(&str, &str, &str)], sources: &[&str], receivers: &[&str]) -> Network {
    Network::new(
        vertices.iter().map(|v| String::from(*v)).collect(),
        edges.iter().map(|(id, t, h)| (String::from(*id), String::from(*t), String::from(*h))).collect(),
        sources.iter().map(|v| String::from(*v)).collect(),
        receivers.iter().map(|v| String::from(*v)).collect(),
    )
    .expect("fixture network is valid")
}

fn system(n: &Network, paths: &[(&str, &str, &[&str])]) -> PathSystem {
    let mut ps = PathSystem::new();
    for (r, s, edges) in paths {
        let p: Vec<_> = edges.iter().map(|e| n.edge_by_name(e).expect("fixture edge")).collect();
        ps.insert(n.vertex(r).unwrap(), n.vertex(s).unwrap(), Path::new(p));
    }
    ps
}

/// Smallest legal network: one edge `S -> R`.
pub fn single_edge() -> Network {
    build(&["S", "R"], &[("e", "S", "R")], &["S"], &["R"])
}

/// The two-source butterfly with its unique edge-disjoint path system.
/// `m` is the middle edge `T -> H`.
pub fn butterfly() -> (Network, PathSystem) {
    let n = build(
        &["S1", "S2", "A1", "A2", "T", "H", "R1", "R2"],
        &[
            ("S1-A1", "S1", "A1"),
            ("S2-A2", "S2", "A2"),
            ("A1-R1", "A1", "R1"),
            ("A2-R2", "A2", "R2"),
            ("A1-T", "A1", "T"),
            ("A2-T", "A2", "T"),
            ("m", "T", "H"),
            ("H-R1", "H", "R1"),
            ("H-R2", "H", "R2"),
        ],
        &["S1", "S2"],
        &["R1", "R2"],
    );
    let ps = system(
        &n,
        &[
            ("R1", "S1", &["S1-A1", "A1-R1"]),
            ("R1", "S2", &["S2-A2", "A2-T", "m", "H-R1"]),
            ("R2", "S1", &["S1-A1", "A1-T", "m", "H-R2"]),
            ("R2", "S2", &["S2-A2", "A2-R2"]),
        ],
    );
    (n, ps)
}

/// The modified butterfly on `V1..V6` (sources `V1, V2`, receivers
/// `V5, V6`), edge `eij` running from `Vi` to `Vj`. The returned path
/// system is the one with the single coding point `e34`.
pub fn modified_butterfly() -> (Network, PathSystem) {
    let n = build(
        &["V1", "V2", "V3", "V4", "V5", "V6"],
        &[
            ("e13", "V1", "V3"),
            ("e15", "V1", "V5"),
            ("e16", "V1", "V6"),
            ("e23", "V2", "V3"),
            ("e26", "V2", "V6"),
            ("e34", "V3", "V4"),
            ("e45", "V4", "V5"),
            ("e46", "V4", "V6"),
        ],
        &["V1", "V2"],
        &["V5", "V6"],
    );
    let ps = system(
        &n,
        &[
            ("V5", "V1", &["e15"]),
            ("V5", "V2", &["e23", "e34", "e45"]),
            ("V6", "V1", &["e13", "e34", "e46"]),
            ("V6", "V2", &["e26"]),
        ],
    );
    (n, ps)
}

/// The four-source, three-receiver network together with its unique path
/// systems. Coding points are the edges `Q5..Q8` (from `Qi.tail` to
/// `Qi.head`); the seven source-to-receiver edges are included.
pub fn four_source() -> (Network, PathSystem) {
    let n = build(
        &[
            "S1", "S2", "S3", "S4", "R1", "R2", "R3", "Q5.tail", "Q5.head", "Q6.tail", "Q6.head", "Q7.tail", "Q7.head",
            "Q8.tail", "Q8.head",
        ],
        &[
            ("Q5", "Q5.tail", "Q5.head"),
            ("Q6", "Q6.tail", "Q6.head"),
            ("Q7", "Q7.tail", "Q7.head"),
            ("Q8", "Q8.tail", "Q8.head"),
            ("S1->Q5", "S1", "Q5.tail"),
            ("S2->Q6", "S2", "Q6.tail"),
            ("S3->Q6", "S3", "Q6.tail"),
            ("S3->Q7", "S3", "Q7.tail"),
            ("S4->Q7", "S4", "Q7.tail"),
            ("Q6->Q5", "Q6.head", "Q5.tail"),
            ("Q5->Q8", "Q5.head", "Q8.tail"),
            ("Q7->Q8", "Q7.head", "Q8.tail"),
            ("S1->R1", "S1", "R1"),
            ("S1->R2", "S1", "R2"),
            ("S2->R2", "S2", "R2"),
            ("S2->R3", "S2", "R3"),
            ("S3->R3", "S3", "R3"),
            ("S4->R1", "S4", "R1"),
            ("S4->R3", "S4", "R3"),
            ("Q6->R1", "Q6.head", "R1"),
            ("Q7->R2", "Q7.head", "R2"),
            ("Q8->R1", "Q8.head", "R1"),
            ("Q8->R2", "Q8.head", "R2"),
            ("Q8->R3", "Q8.head", "R3"),
        ],
        &["S1", "S2", "S3", "S4"],
        &["R1", "R2", "R3"],
    );
    let ps = system(
        &n,
        &[
            ("R1", "S1", &["S1->R1"]),
            ("R1", "S2", &["S2->Q6", "Q6", "Q6->R1"]),
            ("R1", "S3", &["S3->Q7", "Q7", "Q7->Q8", "Q8", "Q8->R1"]),
            ("R1", "S4", &["S4->R1"]),
            ("R2", "S1", &["S1->R2"]),
            ("R2", "S2", &["S2->R2"]),
            ("R2", "S3", &["S3->Q6", "Q6", "Q6->Q5", "Q5", "Q5->Q8", "Q8", "Q8->R2"]),
            ("R2", "S4", &["S4->Q7", "Q7", "Q7->R2"]),
            ("R3", "S1", &["S1->Q5", "Q5", "Q5->Q8", "Q8", "Q8->R3"]),
            ("R3", "S2", &["S2->R3"]),
            ("R3", "S3", &["S3->R3"]),
            ("R3", "S4", &["S4->R3"]),
        ],
    );
    (n, ps)
}

/// The combination network: the realization of the combination code
/// graph (three sources, nine coding points, 81 receivers).
pub fn combination() -> (Network, PathSystem) {
    let g = crate::analysis::builtin::combination_code_graph();
    crate::code_graph::network_from_code_graph(&g).expect("combination code graph verifies")
}
