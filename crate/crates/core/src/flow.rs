//! Unit-capacity max-flow / min-cut and edge-disjoint path systems.
//!
//! Sources are joined to a virtual super-source by one unit edge each, so
//! the cut toward any receiver is capped at the number of sources.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::network::{EdgeId, Network, Path, VertexId};

/// Default cap on enumerated systems per receiver.
pub const DEFAULT_SYSTEM_LIMIT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlowError {
    UnknownReceiver(String),
    Infeasible { receiver: String, mincut: usize, sources: usize },
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::UnknownReceiver(r) => write!(f, "unknown receiver id {r}"),
            FlowError::Infeasible { receiver, mincut, sources } => {
                write!(f, "receiver {receiver} has mincut {mincut} < {sources} sources")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutValue {
    pub receiver: VertexId,
    pub mincut: usize,
}

/// An integral flow toward one receiver: which network edges carry a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    pub receiver: VertexId,
    pub value: usize,
    pub edge_flow: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capacity {
    pub cuts: Vec<CutValue>,
    pub capacity: usize,
    /// `capacity == |S|`.
    pub achievable: bool,
}

fn check_receiver(n: &Network, r: VertexId) -> Result<(), FlowError> {
    if r.0 < n.vertex_count() && n.is_receiver(r) {
        Ok(())
    } else {
        Err(FlowError::UnknownReceiver(if r.0 < n.vertex_count() {
            n.vertex_name(r).to_string()
        } else {
            alloc::format!("#{}", r.0)
        }))
    }
}

/// Edmonds–Karp from the super-source to `r`, restricted to the given
/// sources and skipping `blocked` edges.
fn augment(n: &Network, r: VertexId, sources: &[VertexId], blocked: &[bool]) -> (usize, Vec<bool>) {
    let vn = n.vertex_count();
    let mut flow = vec![false; n.edge_count()];
    let mut source_used = vec![false; vn];
    let is_src = {
        let mut v = vec![false; vn];
        for s in sources {
            v[s.0] = true;
        }
        v
    };
    let mut value = 0;
    loop {
        // BFS over the residual graph. `parent[v]` records how v was reached:
        // Some((edge, forward)) or the super-source when None and marked.
        let mut parent: Vec<Option<(EdgeId, bool)>> = vec![None; vn];
        let mut seen = vec![false; vn];
        let mut queue = VecDeque::new();
        for s in sources {
            if !source_used[s.0] {
                seen[s.0] = true;
                queue.push_back(*s);
            }
        }
        let mut reached = false;
        while let Some(v) = queue.pop_front() {
            if v == r {
                reached = true;
                break;
            }
            for &e in n.out_edges(v) {
                let h = n.edge(e).head;
                if !blocked[e.0] && !flow[e.0] && !seen[h.0] {
                    seen[h.0] = true;
                    parent[h.0] = Some((e, true));
                    queue.push_back(h);
                }
            }
            for &e in n.in_edges(v) {
                let t = n.edge(e).tail;
                if flow[e.0] && !seen[t.0] {
                    seen[t.0] = true;
                    parent[t.0] = Some((e, false));
                    queue.push_back(t);
                }
            }
        }
        if !reached {
            break;
        }
        let mut v = r;
        while let Some((e, forward)) = parent[v.0] {
            flow[e.0] = forward;
            v = if forward { n.edge(e).tail } else { n.edge(e).head };
        }
        // v is now the source whose super-edge was used.
        debug_assert!(is_src[v.0]);
        source_used[v.0] = true;
        value += 1;
    }
    (value, flow)
}

/// Maximum number of edge-disjoint paths from distinct `sources` to `r`
/// avoiding `blocked` edges.
pub fn max_disjoint(n: &Network, r: VertexId, sources: &[VertexId], blocked: &[bool]) -> usize {
    augment(n, r, sources, blocked).0
}

pub fn max_flow(n: &Network, r: VertexId) -> Result<Flow, FlowError> {
    check_receiver(n, r)?;
    let blocked = vec![false; n.edge_count()];
    let (value, edge_flow) = augment(n, r, n.sources(), &blocked);
    Ok(Flow { receiver: r, value, edge_flow })
}

pub fn mincut(n: &Network, r: VertexId) -> Result<CutValue, FlowError> {
    Ok(CutValue { receiver: r, mincut: max_flow(n, r)?.value })
}

pub fn capacity(n: &Network) -> Capacity {
    let cuts: Vec<CutValue> = n.receivers().iter().map(|&r| mincut(n, r).expect("receiver of n")).collect();
    let capacity = cuts.iter().map(|c| c.mincut).min().unwrap_or(0);
    Capacity { cuts, capacity, achievable: capacity == n.sources().len() }
}

/// Splits a flow into `value` edge-disjoint source-to-receiver paths,
/// always peeling the lexicographically smallest edge sequence first.
pub fn decompose(n: &Network, flow: &Flow) -> Vec<Path> {
    let mut remaining = flow.edge_flow.clone();
    let mut paths = Vec::with_capacity(flow.value);
    for _ in 0..flow.value {
        let first = n.sources().iter().flat_map(|s| n.out_edges(*s).iter().copied()).filter(|e| remaining[e.0]).min();
        let Some(mut e) = first else { break };
        let mut edges = Vec::new();
        loop {
            remaining[e.0] = false;
            edges.push(e);
            let h = n.edge(e).head;
            if h == flow.receiver {
                break;
            }
            match n.out_edges(h).iter().copied().find(|x| remaining[x.0]) {
                Some(next) => e = next,
                None => break,
            }
        }
        paths.push(Path::new(edges));
    }
    paths
}

/// Edge-disjoint systems (one path per source) for a single receiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReceiverSystems {
    pub receiver: VertexId,
    pub systems: Vec<BTreeMap<VertexId, Path>>,
    /// True when the limit cut enumeration short.
    pub truncated: bool,
}

/// Every path from `from` to `to` avoiding `blocked`, edges explored in
/// index order.
pub fn paths_between(
    n: &Network,
    from: VertexId,
    to: VertexId,
    blocked: &[bool],
    mut visit: impl FnMut(&[EdgeId]) -> bool,
) {
    fn go(
        n: &Network,
        v: VertexId,
        to: VertexId,
        blocked: &[bool],
        stack: &mut Vec<EdgeId>,
        visit: &mut dyn FnMut(&[EdgeId]) -> bool,
    ) -> bool {
        if v == to {
            return visit(stack);
        }
        for &e in n.out_edges(v) {
            if blocked[e.0] {
                continue;
            }
            stack.push(e);
            let keep_going = go(n, n.edge(e).head, to, blocked, stack, visit);
            stack.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    let mut stack = Vec::new();
    go(n, from, to, blocked, &mut stack, &mut visit);
}

pub fn enumerate_path_systems(n: &Network, r: VertexId, limit: usize) -> Result<ReceiverSystems, FlowError> {
    let cut = mincut(n, r)?;
    let sources = n.sources();
    if cut.mincut < sources.len() {
        return Err(FlowError::Infeasible {
            receiver: n.vertex_name(r).to_string(),
            mincut: cut.mincut,
            sources: sources.len(),
        });
    }
    let mut out = ReceiverSystems { receiver: r, systems: Vec::new(), truncated: false };
    let mut blocked = vec![false; n.edge_count()];
    let mut chosen: Vec<Path> = Vec::new();
    enumerate_from(n, r, 0, limit, &mut blocked, &mut chosen, &mut out);
    Ok(out)
}

fn enumerate_from(
    n: &Network,
    r: VertexId,
    k: usize,
    limit: usize,
    blocked: &mut Vec<bool>,
    chosen: &mut Vec<Path>,
    out: &mut ReceiverSystems,
) {
    let sources = n.sources();
    if k == sources.len() {
        if out.systems.len() == limit {
            out.truncated = true;
            return;
        }
        out.systems.push(sources.iter().copied().zip(chosen.iter().cloned()).collect());
        return;
    }
    let mut candidates = Vec::new();
    paths_between(n, sources[k], r, blocked, |p| {
        candidates.push(p.to_vec());
        true
    });
    for p in candidates {
        if out.truncated {
            return;
        }
        for e in &p {
            blocked[e.0] = true;
        }
        if max_disjoint(n, r, &sources[k + 1..], blocked) == sources.len() - k - 1 {
            chosen.push(Path::new(p.clone()));
            enumerate_from(n, r, k + 1, limit, blocked, chosen, out);
            chosen.pop();
        }
        for e in &p {
            blocked[e.0] = false;
        }
    }
}

/// Brute-force oracle: largest set of edge-disjoint paths from distinct
/// sources to `r`, by exhaustive search over path choices.
pub fn max_disjoint_exhaustive(n: &Network, r: VertexId) -> usize {
    fn best(n: &Network, r: VertexId, k: usize, blocked: &mut Vec<bool>) -> usize {
        let sources = n.sources();
        if k == sources.len() {
            return 0;
        }
        // Skip this source entirely.
        let mut top = best(n, r, k + 1, blocked);
        let mut candidates = Vec::new();
        paths_between(n, sources[k], r, blocked, |p| {
            candidates.push(p.to_vec());
            true
        });
        for p in candidates {
            if top == sources.len() - k {
                break;
            }
            for e in &p {
                blocked[e.0] = true;
            }
            top = top.max(1 + best(n, r, k + 1, blocked));
            for e in &p {
                blocked[e.0] = false;
            }
        }
        top
    }
    let mut blocked = vec![false; n.edge_count()];
    best(n, r, 0, &mut blocked)
}

/// Edges touched by any of the given paths.
pub fn edge_union<'a>(paths: impl IntoIterator<Item = &'a Path>) -> BTreeSet<EdgeId> {
    paths.into_iter().flat_map(|p| p.edges().iter().copied()).collect()
}
