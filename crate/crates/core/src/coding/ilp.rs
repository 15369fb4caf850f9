//! The integer program whose optimum is a path system with the fewest
//! coding points.
//!
//! Variables: `x[k][l][e]` (edge `e` on the path from source `k` to
//! receiver `l`) and `z[e]`. The objective is `|E| - sum z`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flow;
use crate::network::{EdgeId, Network, Path, PathSystem, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpError {
    /// The adjacency-matrix formulation needs at most one edge per pair.
    ParallelEdges {
        first: String,
        second: String,
    },
    CapacityNotAchievable {
        capacity: usize,
        sources: usize,
    },
}

impl fmt::Display for IlpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IlpError::ParallelEdges { first, second } => {
                write!(f, "parallel edges {first} and {second}: the ILP backend needs a simple graph")
            }
            IlpError::CapacityNotAchievable { capacity, sources } => {
                write!(f, "capacity {capacity} is below the {sources} sources")
            }
        }
    }
}

/// A constraint of the model that an assignment violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpViolation {
    WrongLength,
    Flow { source: usize, receiver: usize, row: usize, lhs: i64, rhs: i64 },
    Disjointness { receiver: usize, edge: EdgeId },
    Coupling(Coupling),
}

impl fmt::Display for IlpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IlpViolation::WrongLength => write!(f, "assignment has the wrong number of variables"),
            IlpViolation::Flow { source, receiver, row, lhs, rhs } => {
                write!(f, "flow system ({source},{receiver}) row {row}: {lhs} != {rhs}")
            }
            IlpViolation::Disjointness { receiver, edge } => {
                write!(f, "receiver {receiver}: edge {} used twice", edge.0)
            }
            IlpViolation::Coupling(c) => write!(f, "coupling on edge {} violated", c.edge.0),
        }
    }
}

/// One inequality `z_e <= 4 - x[k][l][in1] - x[k][l][e] - x[k2][l2][in2] - x[k2][l2][e]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coupling {
    pub edge: EdgeId,
    pub k: usize,
    pub l: usize,
    pub in1: EdgeId,
    pub k2: usize,
    pub l2: usize,
    pub in2: EdgeId,
}

#[derive(Clone, Debug)]
pub struct IlpInstance {
    /// Row order of the flow systems: sources, then intermediate vertices,
    /// then receivers.
    order: Vec<VertexId>,
    row_of: Vec<usize>,
    sources: Vec<VertexId>,
    receivers: Vec<VertexId>,
    /// `(tail row, head row)` per edge.
    edges: Vec<(usize, usize)>,
    in_edges: Vec<Vec<EdgeId>>,
}

pub fn build_ilp(n: &Network) -> Result<IlpInstance, IlpError> {
    if let Some((a, b)) = n.first_parallel_pair() {
        return Err(IlpError::ParallelEdges { first: n.edge_name(a).to_string(), second: n.edge_name(b).to_string() });
    }
    let cap = flow::capacity(n);
    if !cap.achievable {
        return Err(IlpError::CapacityNotAchievable { capacity: cap.capacity, sources: n.sources().len() });
    }
    let mut order: Vec<VertexId> = n.sources().to_vec();
    order.extend(n.vertex_ids().filter(|v| !n.is_source(*v) && !n.is_receiver(*v)));
    order.extend(n.receivers().iter().copied());
    let mut row_of = vec![0; n.vertex_count()];
    for (i, v) in order.iter().enumerate() {
        row_of[v.0] = i;
    }
    let edges = n.edges().iter().map(|e| (row_of[e.tail.0], row_of[e.head.0])).collect();
    let in_edges = n.vertex_ids().map(|v| n.in_edges(v).to_vec()).collect();
    Ok(IlpInstance { order, row_of, sources: n.sources().to_vec(), receivers: n.receivers().to_vec(), edges, in_edges })
}

impl IlpInstance {
    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn x_count(&self) -> usize {
        self.source_count() * self.receiver_count() * self.edge_count()
    }

    pub fn z_count(&self) -> usize {
        self.edge_count()
    }

    pub fn flow_system_count(&self) -> usize {
        self.source_count() * self.receiver_count()
    }

    /// Equations per flow system: one per vertex.
    pub fn equations_per_system(&self) -> usize {
        self.order.len()
    }

    pub fn vertex_order(&self) -> &[VertexId] {
        &self.order
    }

    /// Index of `x[k][l][e]` in a flat assignment.
    pub fn x_index(&self, k: usize, l: usize, e: EdgeId) -> usize {
        (k * self.receiver_count() + l) * self.edge_count() + e.0
    }

    /// Right-hand side of flow system `(k, l)`.
    pub fn rhs(&self, k: usize, l: usize) -> Vec<i64> {
        let mut b = vec![0; self.order.len()];
        b[k] = 1;
        b[self.order.len() - self.receiver_count() + l] = -1;
        b
    }

    /// Left-hand side `X_{kl} * 1` of flow system `(k, l)` under `x`.
    pub fn lhs(&self, x: &[bool], k: usize, l: usize) -> Vec<i64> {
        let mut v = vec![0; self.order.len()];
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if x[self.x_index(k, l, EdgeId(i))] {
                v[t] += 1;
                v[h] -= 1;
            }
        }
        v
    }

    /// Every coupling inequality, in `(edge, k, l, in1, k2, l2, in2)` order.
    pub fn couplings(&self) -> impl Iterator<Item = Coupling> + '_ {
        let (nk, nl) = (self.source_count(), self.receiver_count());
        (0..self.edge_count()).flat_map(move |e| {
            let tail = self.order[self.edges[e].0];
            let ins = &self.in_edges[tail.0];
            (0..nk).flat_map(move |k| {
                (0..nl).flat_map(move |l| {
                    (k + 1..nk).flat_map(move |k2| {
                        (0..nl).filter(move |&l2| l2 != l).flat_map(move |l2| {
                            ins.iter().flat_map(move |&in1| {
                                ins.iter().filter(move |&&in2| in2 != in1).map(move |&in2| Coupling {
                                    edge: EdgeId(e),
                                    k,
                                    l,
                                    in1,
                                    k2,
                                    l2,
                                    in2,
                                })
                            })
                        })
                    })
                })
            })
        })
    }

    fn coupling_rhs(&self, x: &[bool], c: &Coupling) -> i64 {
        let v = |k, l, e| x[self.x_index(k, l, e)] as i64;
        4 - v(c.k, c.l, c.in1) - v(c.k, c.l, c.edge) - v(c.k2, c.l2, c.in2) - v(c.k2, c.l2, c.edge)
    }

    /// Checks every constraint group for `(x, z)`.
    pub fn check(&self, x: &[bool], z: &[bool]) -> Result<(), IlpViolation> {
        if x.len() != self.x_count() || z.len() != self.z_count() {
            return Err(IlpViolation::WrongLength);
        }
        for k in 0..self.source_count() {
            for l in 0..self.receiver_count() {
                let lhs = self.lhs(x, k, l);
                let rhs = self.rhs(k, l);
                if let Some(row) = (0..lhs.len()).find(|&i| lhs[i] != rhs[i]) {
                    return Err(IlpViolation::Flow { source: k, receiver: l, row, lhs: lhs[row], rhs: rhs[row] });
                }
            }
        }
        for l in 0..self.receiver_count() {
            for e in 0..self.edge_count() {
                let used = (0..self.source_count()).filter(|&k| x[self.x_index(k, l, EdgeId(e))]).count();
                if used > 1 {
                    return Err(IlpViolation::Disjointness { receiver: l, edge: EdgeId(e) });
                }
            }
        }
        for c in self.couplings() {
            if (z[c.edge.0] as i64) > self.coupling_rhs(x, &c) {
                return Err(IlpViolation::Coupling(c));
            }
        }
        Ok(())
    }

    /// Largest feasible `z` for a fixed `x`.
    pub fn optimal_z(&self, x: &[bool]) -> Vec<bool> {
        let mut z = vec![true; self.z_count()];
        for c in self.couplings() {
            if z[c.edge.0] && self.coupling_rhs(x, &c) < 1 {
                z[c.edge.0] = false;
            }
        }
        z
    }

    pub fn objective(&self, z: &[bool]) -> usize {
        z.iter().filter(|b| !**b).count()
    }

    pub fn encode(&self, ps: &PathSystem) -> Vec<bool> {
        let mut x = vec![false; self.x_count()];
        for (k, s) in self.sources.iter().enumerate() {
            for (l, r) in self.receivers.iter().enumerate() {
                if let Some(p) = ps.get(*r, *s) {
                    for &e in p.edges() {
                        x[self.x_index(k, l, e)] = true;
                    }
                }
            }
        }
        x
    }

    /// Reads off the path of each flow system by walking from its source.
    /// Returns `None` if some system is not a single source-to-receiver path.
    pub fn decode(&self, x: &[bool]) -> Option<PathSystem> {
        let mut ps = PathSystem::new();
        for (k, s) in self.sources.iter().enumerate() {
            for (l, r) in self.receivers.iter().enumerate() {
                let on = |e: EdgeId| x[self.x_index(k, l, e)];
                let total = (0..self.edge_count()).filter(|&e| on(EdgeId(e))).count();
                let mut edges = Vec::new();
                let mut row = self.row_of[s.0];
                let target = self.row_of[r.0];
                while row != target {
                    let next = (0..self.edge_count())
                        .map(EdgeId)
                        .find(|e| self.edges[e.0].0 == row && on(*e) && !edges.contains(e))?;
                    edges.push(next);
                    row = self.edges[next.0].1;
                }
                if edges.len() != total {
                    return None;
                }
                ps.insert(*r, *s, Path::new(edges));
            }
        }
        Some(ps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::detect::detect_coding_points;
    use crate::fixtures;
    use crate::network::Network;

    #[test]
    fn modified_butterfly_rhs() {
        let (n, _) = fixtures::modified_butterfly();
        let ilp = build_ilp(&n).unwrap();
        assert_eq!(ilp.flow_system_count(), 4);
        assert_eq!(ilp.rhs(0, 0), [1, 0, 0, 0, -1, 0]);
        assert_eq!(ilp.rhs(0, 1), [1, 0, 0, 0, 0, -1]);
        assert_eq!(ilp.rhs(1, 0), [0, 1, 0, 0, -1, 0]);
        assert_eq!(ilp.rhs(1, 1), [0, 1, 0, 0, 0, -1]);
        assert_eq!(ilp.equations_per_system(), 6);
    }

    #[test]
    fn single_edge_counts() {
        let n = fixtures::single_edge();
        let ilp = build_ilp(&n).unwrap();
        assert_eq!((ilp.flow_system_count(), ilp.x_count(), ilp.z_count()), (1, 1, 1));
        let x = vec![true];
        let z = ilp.optimal_z(&x);
        assert!(ilp.check(&x, &z).is_ok());
        assert_eq!(ilp.objective(&z), 0);
    }

    #[test]
    fn butterfly_variable_count() {
        let (n, ps) = fixtures::butterfly();
        let ilp = build_ilp(&n).unwrap();
        assert_eq!(ilp.x_count(), 2 * 2 * 9);
        let x = ilp.encode(&ps);
        let z = ilp.optimal_z(&x);
        assert!(ilp.check(&x, &z).is_ok());
        assert_eq!(ilp.objective(&z), 1);
        assert!(!z[n.edge_by_name("m").unwrap().0]);
        assert_eq!(ilp.decode(&x).unwrap(), ps);
    }

    #[test]
    fn z_matches_detector_on_s1() {
        let (n, ps) = fixtures::modified_butterfly();
        let ilp = build_ilp(&n).unwrap();
        let x = ilp.encode(&ps);
        let z = ilp.optimal_z(&x);
        let cps = detect_coding_points(&n, &ps).unwrap();
        for e in n.edge_ids() {
            assert_eq!(!z[e.0], cps.contains(e));
        }
        // Raising a forced z breaks a coupling inequality.
        let mut bad = z.clone();
        bad[n.edge_by_name("e34").unwrap().0] = true;
        assert!(matches!(ilp.check(&x, &bad), Err(IlpViolation::Coupling(_))));
    }

    #[test]
    fn flow_and_disjointness_violations() {
        let (n, ps) = fixtures::butterfly();
        let ilp = build_ilp(&n).unwrap();
        let mut x = ilp.encode(&ps);
        let z = vec![true; ilp.z_count()];
        x[ilp.x_index(0, 0, n.edge_by_name("A1-R1").unwrap())] = false;
        assert!(matches!(ilp.check(&x, &z), Err(IlpViolation::Flow { .. })));

        let mut shared = PathSystem::new();
        let e = |s: &str| n.edge_by_name(s).unwrap();
        let v = |s: &str| n.vertex(s).unwrap();
        shared.insert(v("R1"), v("S1"), Path::new(vec![e("S1-A1"), e("A1-T"), e("m"), e("H-R1")]));
        shared.insert(v("R1"), v("S2"), Path::new(vec![e("S2-A2"), e("A2-T"), e("m"), e("H-R1")]));
        shared.insert(v("R2"), v("S1"), Path::new(vec![e("S1-A1"), e("A1-T"), e("m"), e("H-R2")]));
        shared.insert(v("R2"), v("S2"), Path::new(vec![e("S2-A2"), e("A2-R2")]));
        let x = ilp.encode(&shared);
        assert!(matches!(ilp.check(&x, &z), Err(IlpViolation::Disjointness { .. })));
    }

    #[test]
    fn rejects_parallel_edges_and_low_capacity() {
        let par = Network::builder()
            .vertices(["S", "R"])
            .edge("a", "S", "R")
            .edge("b", "S", "R")
            .source("S")
            .receiver("R")
            .build()
            .unwrap();
        assert!(matches!(build_ilp(&par), Err(IlpError::ParallelEdges { .. })));
        let low = Network::builder()
            .vertices(["S1", "S2", "M", "R"])
            .edge("a", "S1", "M")
            .edge("b", "S2", "M")
            .edge("c", "M", "R")
            .source("S1")
            .source("S2")
            .receiver("R")
            .build()
            .unwrap();
        assert!(matches!(build_ilp(&low), Err(IlpError::CapacityNotAchievable { .. })));
    }
}
