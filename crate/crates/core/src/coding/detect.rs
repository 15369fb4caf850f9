use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::network::{validate_path_system, EdgeId, Network, PathSystem, PathSystemViolation, VertexId};

/// One use of an edge by a path `P_{S,R}`, entering the edge's tail through
/// `in_edge`. `None` when the edge leaves a source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Usage {
    pub receiver: VertexId,
    pub source: VertexId,
    pub in_edge: Option<EdgeId>,
}

/// Two paths proving an edge is a coding point: distinct sources, distinct
/// receivers, distinct in-edges at the tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodingWitness {
    pub first: Usage,
    pub second: Usage,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodingPointSet {
    points: BTreeMap<EdgeId, CodingWitness>,
}

impl CodingPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.points.contains_key(&e)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.points.keys().copied()
    }

    pub fn witness(&self, e: EdgeId) -> Option<&CodingWitness> {
        self.points.get(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &CodingWitness)> + '_ {
        self.points.iter().map(|(e, w)| (*e, w))
    }
}

fn conflict(a: &Usage, b: &Usage) -> bool {
    a.source != b.source
        && a.receiver != b.receiver
        && a.in_edge.is_some()
        && b.in_edge.is_some()
        && a.in_edge != b.in_edge
}

/// First witnessing pair in `(receiver, source)` order, if any.
pub fn find_witness(usages: &[Usage]) -> Option<CodingWitness> {
    for (i, a) in usages.iter().enumerate() {
        for b in &usages[i + 1..] {
            if conflict(a, b) {
                return Some(CodingWitness { first: *a, second: *b });
            }
        }
    }
    None
}

/// All edges meeting the coding-point definition for `ps`.
pub fn detect_coding_points(n: &Network, ps: &PathSystem) -> Result<CodingPointSet, PathSystemViolation> {
    validate_path_system(n, ps)?;
    Ok(detect_unchecked(n, ps))
}

/// Detection without validating `ps` first; used on partial systems.
pub fn detect_unchecked(n: &Network, ps: &PathSystem) -> CodingPointSet {
    let mut usages: Vec<Vec<Usage>> = vec![Vec::new(); n.edge_count()];
    for (r, s, p) in ps.iter() {
        let mut prev = None;
        for &e in p.edges() {
            usages[e.0].push(Usage { receiver: r, source: s, in_edge: prev });
            prev = Some(e);
        }
    }
    let mut points = BTreeMap::new();
    for (i, u) in usages.iter_mut().enumerate() {
        u.sort();
        if let Some(w) = find_witness(u) {
            points.insert(EdgeId(i), w);
        }
    }
    CodingPointSet { points }
}

/// Incremental coding-point counter for search: paths are pushed and popped
/// in stack order.
#[derive(Clone, Debug)]
pub(crate) struct UsageTracker {
    usages: Vec<Vec<Usage>>,
    coding: Vec<bool>,
    count: usize,
    // For each pushed path: edges whose coding flag flipped on.
    history: Vec<(Vec<EdgeId>, Vec<EdgeId>)>,
}

impl UsageTracker {
    pub(crate) fn new(edge_count: usize) -> Self {
        UsageTracker {
            usages: vec![Vec::new(); edge_count],
            coding: vec![false; edge_count],
            count: 0,
            history: Vec::new(),
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.count
    }

    /// Edges that became coding points with the last push.
    pub(crate) fn last_flipped(&self) -> &[EdgeId] {
        self.history.last().map(|(_, f)| f.as_slice()).unwrap_or(&[])
    }

    pub(crate) fn push(&mut self, receiver: VertexId, source: VertexId, edges: &[EdgeId]) {
        let mut flipped = Vec::new();
        let mut prev = None;
        for &e in edges {
            let u = Usage { receiver, source, in_edge: prev };
            if !self.coding[e.0] && self.usages[e.0].iter().any(|o| conflict(o, &u)) {
                self.coding[e.0] = true;
                self.count += 1;
                flipped.push(e);
            }
            self.usages[e.0].push(u);
            prev = Some(e);
        }
        self.history.push((edges.to_vec(), flipped));
    }

    pub(crate) fn pop(&mut self) {
        let (edges, flipped) = self.history.pop().expect("push before pop");
        for e in edges {
            self.usages[e.0].pop();
        }
        for e in flipped {
            self.coding[e.0] = false;
            self.count -= 1;
        }
    }
}
