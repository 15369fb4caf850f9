//! Exact minimization of coding points by depth-first branch and bound.
//!
//! Two backends share the incumbent logic:
//!
//! * `Ilp` branches over the variables of [`IlpInstance`], one flow system
//!   `(k, l)` at a time, extending a partial path edge by edge. Flow
//!   conservation holds by construction; disjointness is checked on every
//!   extension; `z` is read off the detector once a path is complete.
//! * `Paths` enumerates every edge-disjoint system per receiver and searches
//!   their product.
//!
//! The bound is the number of coding points among the paths fixed so far,
//! which can only grow as paths are added. Ties on the count are broken by
//! the smallest [`SystemKey`], so the result does not depend on search
//! order. The search splits into independent partitions over the first
//! branching decision; each partition can run on its own thread and
//! [`Solver::combine`] merges their outcomes.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::detect::{detect_coding_points, CodingPointSet, UsageTracker};
use super::ilp::{build_ilp, IlpError, IlpInstance};
use crate::flow::{self, enumerate_path_systems, max_disjoint, FlowError, DEFAULT_SYSTEM_LIMIT};
use crate::network::{EdgeId, Network, Path, PathSystem, SystemKey, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    Ilp,
    Paths,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Ilp => "ilp",
            Backend::Paths => "paths",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    Ilp(IlpError),
    Infeasible {
        capacity: usize,
        sources: usize,
    },
    Flow(FlowError),
    /// A receiver has more systems than the enumeration limit.
    EnumerationLimit {
        receiver: String,
        limit: usize,
    },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Ilp(e) => e.fmt(f),
            SolveError::Infeasible { capacity, sources } => {
                write!(f, "infeasible: capacity {capacity} is below the {sources} sources")
            }
            SolveError::Flow(e) => e.fmt(f),
            SolveError::EnumerationLimit { receiver, limit } => {
                write!(f, "receiver {receiver} has more than {limit} path systems; retry with the ilp backend")
            }
        }
    }
}

impl From<IlpError> for SolveError {
    fn from(e: IlpError) -> Self {
        SolveError::Ilp(e)
    }
}

impl From<FlowError> for SolveError {
    fn from(e: FlowError) -> Self {
        SolveError::Flow(e)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    pub nodes_explored: u64,
    /// Coding-point count of each successive incumbent.
    pub incumbents: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizationResult {
    pub path_system: PathSystem,
    pub coding_point_count: usize,
    pub coding_points: CodingPointSet,
    pub trace: SearchTrace,
}

/// Best system found by one partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOutcome {
    pub best: Option<(usize, SystemKey, PathSystem)>,
    pub trace: SearchTrace,
}

enum Plan {
    Ilp {
        instance: IlpInstance,
        /// `(receiver, source)` per level, receiver-major.
        pairs: Vec<(VertexId, VertexId)>,
        /// `reach[l][v]`: vertex `v` can reach receiver `l`.
        reach: Vec<Vec<bool>>,
        first_paths: Vec<Vec<EdgeId>>,
    },
    Paths {
        systems: Vec<(VertexId, Vec<Vec<Vec<EdgeId>>>)>,
    },
}

/// Path systems per receiver (receiver order) used for lower bounds; a
/// receiver with too many systems contributes nothing.
type BoundSystems = Vec<(VertexId, Vec<Vec<Vec<EdgeId>>>)>;

/// Systems per receiver enumerated for bounds by the ILP backend.
const BOUND_SYSTEM_LIMIT: usize = 256;
/// Total systems beyond which bounds are skipped.
const BOUND_WORK_LIMIT: usize = 8192;

pub struct Solver<'n> {
    n: &'n Network,
    backend: Backend,
    plan: Plan,
    bounds: BoundSystems,
}

fn reachability(n: &Network, r: VertexId) -> Vec<bool> {
    let mut reach = vec![false; n.vertex_count()];
    reach[r.0] = true;
    for &v in n.topological_order().iter().rev() {
        if n.out_edges(v).iter().any(|e| reach[n.edge(*e).head.0]) {
            reach[v.0] = true;
        }
    }
    reach
}

impl<'n> Solver<'n> {
    pub fn new(n: &'n Network, backend: Backend) -> Result<Self, SolveError> {
        let cap = flow::capacity(n);
        if !cap.achievable {
            return Err(SolveError::Infeasible { capacity: cap.capacity, sources: n.sources().len() });
        }
        let plan = match backend {
            Backend::Ilp => {
                let instance = build_ilp(n)?;
                let pairs: Vec<_> =
                    n.receivers().iter().flat_map(|r| n.sources().iter().map(move |s| (*r, *s))).collect();
                let reach = n.receivers().iter().map(|r| reachability(n, *r)).collect();
                let (r0, s0) = pairs[0];
                let mut first_paths = Vec::new();
                let free = vec![false; n.edge_count()];
                let others = &n.sources()[1..];
                flow::paths_between(n, s0, r0, &free, |p| {
                    let mut blocked = free.clone();
                    for e in p {
                        blocked[e.0] = true;
                    }
                    if max_disjoint(n, r0, others, &blocked) == others.len() {
                        first_paths.push(p.to_vec());
                    }
                    true
                });
                Plan::Ilp { instance, pairs, reach, first_paths }
            }
            Backend::Paths => {
                let mut systems = Vec::new();
                for &r in n.receivers() {
                    let rs = enumerate_path_systems(n, r, DEFAULT_SYSTEM_LIMIT)?;
                    if rs.truncated {
                        return Err(SolveError::EnumerationLimit {
                            receiver: n.vertex_name(r).to_string(),
                            limit: DEFAULT_SYSTEM_LIMIT,
                        });
                    }
                    let mut choices: Vec<Vec<Vec<EdgeId>>> =
                        rs.systems.into_iter().map(|m| m.into_values().map(|p| p.edges().to_vec()).collect()).collect();
                    // Visit choices in key order so ties prune early.
                    choices.sort_by_cached_key(|c| sorted_paths(c));
                    systems.push((r, choices));
                }
                Plan::Paths { systems }
            }
        };
        let mut bounds: BoundSystems = match &plan {
            Plan::Paths { systems } => systems.clone(),
            Plan::Ilp { .. } => {
                let mut b = Vec::new();
                for &r in n.receivers() {
                    let rs = enumerate_path_systems(n, r, BOUND_SYSTEM_LIMIT)?;
                    let choices = if rs.truncated {
                        Vec::new()
                    } else {
                        rs.systems.into_iter().map(|m| m.into_values().map(|p| p.edges().to_vec()).collect()).collect()
                    };
                    b.push((r, choices));
                }
                b
            }
        };
        if bounds.iter().map(|(_, c)| c.len()).sum::<usize>() > BOUND_WORK_LIMIT {
            bounds.iter_mut().for_each(|(_, c)| c.clear());
        }
        Ok(Solver { n, backend, plan, bounds })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn partition_count(&self) -> usize {
        match &self.plan {
            Plan::Ilp { first_paths, .. } => first_paths.len(),
            Plan::Paths { systems } => systems[0].1.len(),
        }
    }

    pub fn run_partition(&self, index: usize) -> PartitionOutcome {
        let mut st = State::new(self.n);
        match &self.plan {
            Plan::Ilp { pairs, reach, first_paths, .. } => {
                let ctx = IlpCtx { n: self.n, pairs, reach, bounds: &self.bounds };
                let (r, s) = pairs[0];
                st.trace.nodes_explored += first_paths[index].len() as u64;
                ctx.complete(&mut st, 0, r, s, &first_paths[index]);
            }
            Plan::Paths { systems } => {
                paths_level(self.n, systems, &self.bounds, &mut st, 0, Some(index));
            }
        }
        PartitionOutcome { best: st.best, trace: st.trace }
    }

    /// Merges partition outcomes (in partition order) into the global
    /// optimum.
    pub fn combine(&self, outcomes: Vec<PartitionOutcome>) -> Result<OptimizationResult, SolveError> {
        let mut trace = SearchTrace::default();
        let mut best: Option<(usize, SystemKey, PathSystem)> = None;
        for o in outcomes {
            trace.nodes_explored += o.trace.nodes_explored;
            trace.incumbents.extend(o.trace.incumbents);
            if let Some(cand) = o.best {
                let better = match &best {
                    None => true,
                    Some((c, k, _)) => (cand.0, &cand.1) < (*c, k),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let (count, _, ps) = best.ok_or(SolveError::Infeasible {
            capacity: flow::capacity(self.n).capacity,
            sources: self.n.sources().len(),
        })?;
        let coding_points = detect_coding_points(self.n, &ps).expect("search yields valid systems");
        assert_eq!(coding_points.len(), count, "bound and detector disagree");
        if let Plan::Ilp { instance, .. } = &self.plan {
            let x = instance.encode(&ps);
            let z = instance.optimal_z(&x);
            assert!(instance.check(&x, &z).is_ok(), "decoded optimum violates the model");
            assert_eq!(instance.objective(&z), count);
        }
        Ok(OptimizationResult { path_system: ps, coding_point_count: count, coding_points, trace })
    }

    pub fn solve(&self) -> Result<OptimizationResult, SolveError> {
        let outcomes = (0..self.partition_count()).map(|i| self.run_partition(i)).collect();
        self.combine(outcomes)
    }
}

pub fn solve_min_coding_points(n: &Network, backend: Backend) -> Result<OptimizationResult, SolveError> {
    Solver::new(n, backend)?.solve()
}

fn sorted_paths(paths: &[Vec<EdgeId>]) -> SystemKey {
    paths
        .iter()
        .map(|p| {
            let mut p = p.clone();
            p.sort();
            p
        })
        .collect()
}

struct State {
    sources: Vec<VertexId>,
    tracker: UsageTracker,
    /// Edges taken by the receiver currently being routed.
    used: Vec<bool>,
    chosen: Vec<(VertexId, VertexId, Vec<EdgeId>)>,
    key: SystemKey,
    best: Option<(usize, SystemKey, PathSystem)>,
    trace: SearchTrace,
}

impl State {
    fn new(n: &Network) -> Self {
        State {
            sources: n.sources().to_vec(),
            tracker: UsageTracker::new(n.edge_count()),
            used: vec![false; n.edge_count()],
            chosen: Vec::new(),
            key: Vec::new(),
            best: None,
            trace: SearchTrace::default(),
        }
    }

    fn push(&mut self, r: VertexId, s: VertexId, path: &[EdgeId]) {
        self.tracker.push(r, s, path);
        let mut sorted = path.to_vec();
        sorted.sort();
        self.key.push(sorted);
        self.chosen.push((r, s, path.to_vec()));
    }

    fn pop(&mut self) {
        self.tracker.pop();
        self.key.pop();
        self.chosen.pop();
    }

    /// False when no completion of the current prefix can beat the
    /// incumbent, given that completions have at least `lb` coding points.
    /// At a leaf the key must be strictly smaller.
    fn promising(&self, lb: usize, leaf: bool) -> bool {
        match &self.best {
            None => true,
            Some((count, key, _)) => {
                let prefix = &key[..self.key.len()];
                lb < *count || (lb == *count && if leaf { self.key[..] < *prefix } else { self.key[..] <= *prefix })
            }
        }
    }

    fn promising_now(&self, leaf: bool) -> bool {
        self.promising(self.tracker.count(), leaf)
    }

    fn record_leaf(&mut self) {
        if !self.promising_now(true) {
            return;
        }
        let mut ps = PathSystem::new();
        for (r, s, p) in &self.chosen {
            ps.insert(*r, *s, Path::new(p.clone()));
        }
        let count = self.tracker.count();
        self.trace.incumbents.push(count);
        self.best = Some((count, self.key.clone(), ps));
    }
}

struct IlpCtx<'a> {
    n: &'a Network,
    pairs: &'a [(VertexId, VertexId)],
    reach: &'a [Vec<bool>],
    bounds: &'a BoundSystems,
}

/// Coding points any completion must have once receivers `from..` are
/// added to the current prefix. Adding paths never removes a coding point,
/// so each remaining receiver forces the points common to all its systems,
/// and at least its cheapest system's new points.
fn lower_bound(bounds: &BoundSystems, from: usize, st: &mut State) -> usize {
    let base = st.tracker.count();
    let sources = core::mem::take(&mut st.sources);
    let mut forced: Vec<EdgeId> = Vec::new();
    let mut single = 0;
    for (r, choices) in bounds.iter().skip(from) {
        if choices.is_empty() {
            continue;
        }
        let mut common: Option<Vec<EdgeId>> = None;
        let mut cheapest = usize::MAX;
        for choice in choices {
            let mut new = Vec::new();
            for (s, p) in sources.iter().zip(choice) {
                st.tracker.push(*r, *s, p);
                new.extend_from_slice(st.tracker.last_flipped());
            }
            for _ in choice {
                st.tracker.pop();
            }
            new.sort_unstable();
            cheapest = cheapest.min(new.len());
            common = Some(match common {
                None => new,
                Some(c) => c.into_iter().filter(|e| new.binary_search(e).is_ok()).collect(),
            });
            if cheapest == 0 && common.as_ref().is_some_and(|c| c.is_empty()) {
                break;
            }
        }
        forced.extend(common.unwrap_or_default());
        single = single.max(cheapest);
    }
    st.sources = sources;
    forced.sort_unstable();
    forced.dedup();
    base + single.max(forced.len())
}

impl IlpCtx<'_> {
    fn receiver_index(&self, r: VertexId) -> usize {
        self.n.receivers().iter().position(|x| *x == r).expect("receiver")
    }

    /// Branches on flow system `level`.
    fn level(&self, st: &mut State, level: usize) {
        if level == self.pairs.len() {
            st.record_leaf();
            return;
        }
        let (r, s) = self.pairs[level];
        let mut stack = Vec::new();
        self.extend(st, level, r, s, s, &mut stack);
    }

    fn extend(&self, st: &mut State, level: usize, r: VertexId, s: VertexId, v: VertexId, stack: &mut Vec<EdgeId>) {
        if v == r {
            let path = stack.clone();
            self.complete(st, level, r, s, &path);
            return;
        }
        let reach = &self.reach[self.receiver_index(r)];
        for &e in self.n.out_edges(v) {
            let head = self.n.edge(e).head;
            // x[k][l][e] = 1 must keep sum_k x[k][l][e] <= 1.
            if st.used[e.0] || !reach[head.0] {
                continue;
            }
            st.trace.nodes_explored += 1;
            st.used[e.0] = true;
            stack.push(e);
            self.extend(st, level, r, s, head, stack);
            stack.pop();
            st.used[e.0] = false;
        }
    }

    fn complete(&self, st: &mut State, level: usize, r: VertexId, s: VertexId, path: &[EdgeId]) {
        for e in path {
            st.used[e.0] = true;
        }
        st.push(r, s, path);
        let last_of_receiver = level + 1 == self.pairs.len() || self.pairs[level + 1].0 != r;
        let lb = if last_of_receiver {
            lower_bound(self.bounds, self.receiver_index(r) + 1, st)
        } else {
            st.tracker.count()
        };
        if st.promising(lb, false) {
            if last_of_receiver {
                let saved = core::mem::replace(&mut st.used, vec![false; self.n.edge_count()]);
                self.level(st, level + 1);
                st.used = saved;
            } else {
                let rest: Vec<VertexId> =
                    self.pairs[level + 1..].iter().take_while(|(rr, _)| *rr == r).map(|(_, ss)| *ss).collect();
                if max_disjoint(self.n, r, &rest, &st.used) == rest.len() {
                    self.level(st, level + 1);
                }
            }
        }
        st.pop();
        for e in path {
            st.used[e.0] = false;
        }
    }
}

fn paths_level(
    n: &Network,
    systems: &[(VertexId, Vec<Vec<Vec<EdgeId>>>)],
    bounds: &BoundSystems,
    st: &mut State,
    level: usize,
    only: Option<usize>,
) {
    if level == systems.len() {
        st.record_leaf();
        return;
    }
    let (r, choices) = &systems[level];
    let range = match only {
        Some(i) => i..i + 1,
        None => 0..choices.len(),
    };
    for choice in &choices[range] {
        st.trace.nodes_explored += 1;
        for (s, p) in n.sources().iter().zip(choice) {
            st.push(*r, *s, p);
        }
        let lb = lower_bound(bounds, level + 1, st);
        if st.promising(lb, false) {
            paths_level(n, systems, bounds, st, level + 1, None);
        }
        for _ in choice {
            st.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn both(n: &Network) -> [OptimizationResult; 2] {
        [solve_min_coding_points(n, Backend::Ilp).unwrap(), solve_min_coding_points(n, Backend::Paths).unwrap()]
    }

    #[test]
    fn butterfly_needs_one() {
        let (n, ps) = fixtures::butterfly();
        for res in both(&n) {
            assert_eq!(res.coding_point_count, 1);
            assert_eq!(res.path_system, ps);
        }
    }

    #[test]
    fn modified_butterfly_needs_none() {
        let (n, _) = fixtures::modified_butterfly();
        for res in both(&n) {
            assert_eq!(res.coding_point_count, 0);
            // The tie-break picks the system routing V2 -> V6 through e23.
            let v6 = n.vertex("V6").unwrap();
            let v2 = n.vertex("V2").unwrap();
            assert_eq!(res.path_system.get(v6, v2).unwrap().names(&n), ["e23", "e34", "e46"]);
        }
    }

    #[test]
    fn four_source_matches_detector() {
        let (n, ps) = fixtures::four_source();
        for res in both(&n) {
            assert_eq!(res.coding_point_count, 4);
            assert_eq!(res.path_system, ps);
        }
    }

    #[test]
    fn single_edge_zero() {
        let n = fixtures::single_edge();
        for res in both(&n) {
            assert_eq!(res.coding_point_count, 0);
        }
    }

    #[test]
    fn partitions_combine_to_the_same_result() {
        let (n, _) = fixtures::modified_butterfly();
        for backend in [Backend::Ilp, Backend::Paths] {
            let solver = Solver::new(&n, backend).unwrap();
            let forward: Vec<_> = (0..solver.partition_count()).map(|i| solver.run_partition(i)).collect();
            let a = solver.combine(forward).unwrap();
            let b = solver.solve().unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn infeasible_network() {
        let n = Network::builder()
            .vertices(["S1", "S2", "M", "R"])
            .edge("a", "S1", "M")
            .edge("b", "S2", "M")
            .edge("c", "M", "R")
            .source("S1")
            .source("S2")
            .receiver("R")
            .build()
            .unwrap();
        for b in [Backend::Ilp, Backend::Paths] {
            assert!(matches!(solve_min_coding_points(&n, b), Err(SolveError::Infeasible { .. })));
        }
    }

    #[test]
    fn parallel_edges_only_on_paths_backend() {
        let n = Network::builder()
            .vertices(["S", "R"])
            .edge("a", "S", "R")
            .edge("b", "S", "R")
            .source("S")
            .receiver("R")
            .build()
            .unwrap();
        assert!(matches!(
            solve_min_coding_points(&n, Backend::Ilp),
            Err(SolveError::Ilp(IlpError::ParallelEdges { .. }))
        ));
        let res = solve_min_coding_points(&n, Backend::Paths).unwrap();
        assert_eq!(res.path_system.get(n.vertex("R").unwrap(), n.vertex("S").unwrap()).unwrap().names(&n), ["a"]);
    }
}
