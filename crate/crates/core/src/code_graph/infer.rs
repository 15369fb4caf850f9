//! Recovering a path family `Pi_R` for code graphs given without one.

use alloc::vec;
use alloc::vec::Vec;

use super::{first_non_coding, CodeGraph, CodeGraphViolation, PathFamily};

/// Families kept per receiver before the covering search.
const OPTION_LIMIT: usize = 512;
/// Search nodes allowed in the covering search.
const NODE_LIMIT: u64 = 2_000_000;

type Family = Vec<Vec<usize>>;

/// Finds per-receiver vertex-disjoint path families so that every node and
/// edge is covered, preferring families found first in index order.
pub fn infer_paths(g: &CodeGraph) -> Result<PathFamily, CodeGraphViolation> {
    if g.topological_order().is_none() {
        return Err(CodeGraphViolation::Cycle);
    }
    let sources = g.sources();
    if sources.is_empty() {
        return Err(CodeGraphViolation::NoSources);
    }
    let receivers = g.receivers();
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().collect();
    let items = g.len() + edges.len();
    let words = items.div_ceil(64).max(1);
    let mask = |fam: &Family| -> Vec<u64> {
        let mut m = vec![0u64; words];
        let mut set = |i: usize| m[i / 64] |= 1 << (i % 64);
        for p in fam {
            for &v in p {
                set(v);
            }
            for w in p.windows(2) {
                let e = edges.binary_search(&(w[0], w[1])).expect("path edge");
                set(g.len() + e);
            }
        }
        m
    };

    let mut options: Vec<(Vec<Family>, Vec<Vec<u64>>)> = Vec::new();
    for r in &receivers {
        let labeled = g.labeled(r);
        let mut fams = Vec::new();
        let mut used = vec![false; g.len()];
        let mut chosen = Vec::new();
        families(g, &sources, &labeled, 0, &mut used, &mut chosen, &mut fams);
        if fams.is_empty() {
            return Err(CodeGraphViolation::NoPathFamily(r.clone()));
        }
        let masks = fams.iter().map(&mask).collect();
        options.push((fams, masks));
    }

    // suffix[i]: everything receivers i.. could still cover.
    let mut suffix = vec![vec![0u64; words]; receivers.len() + 1];
    for i in (0..receivers.len()).rev() {
        let mut u = suffix[i + 1].clone();
        for m in &options[i].1 {
            for (a, b) in u.iter_mut().zip(m) {
                *a |= b;
            }
        }
        suffix[i] = u;
    }
    let full: Vec<u64> = (0..words)
        .map(|w| {
            let bits = (items - w * 64).min(64);
            if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        })
        .collect();
    if suffix[0] != full {
        let missing = (0..items).find(|&i| suffix[0][i / 64] & (1 << (i % 64)) == 0).unwrap();
        return Err(if missing < g.len() {
            CodeGraphViolation::UncoveredNode(g.node(missing).id.clone())
        } else {
            let (a, b) = edges[missing - g.len()];
            CodeGraphViolation::UncoveredEdge(g.node(a).id.clone(), g.node(b).id.clone())
        });
    }

    let assemble = |pick: &[usize]| {
        let mut out = PathFamily::new();
        for (i, r) in receivers.iter().enumerate() {
            let fam = &options[i].0[pick[i]];
            out.insert(r.clone(), sources.iter().copied().zip(fam.iter().cloned()).collect());
        }
        out
    };
    let coding_ok = |pick: &[usize]| first_non_coding(g, &assemble(pick)).is_none();
    let mut pick = vec![0usize; receivers.len()];
    let mut budget = NODE_LIMIT;
    let covered = vec![0u64; words];
    let search = Cover { options: &options, suffix: &suffix, full: &full, leaf: &coding_ok };
    if !search.run(0, &covered, &mut pick, &mut budget) {
        return Err(CodeGraphViolation::NoCoveringFamily);
    }
    Ok(assemble(&pick))
}

struct Cover<'a> {
    options: &'a [(Vec<Family>, Vec<Vec<u64>>)],
    suffix: &'a [Vec<u64>],
    full: &'a [u64],
    /// Extra acceptance test for a complete covering choice.
    leaf: &'a dyn Fn(&[usize]) -> bool,
}

impl Cover<'_> {
    fn run(&self, level: usize, covered: &[u64], pick: &mut Vec<usize>, budget: &mut u64) -> bool {
        if level == self.options.len() {
            return covered == self.full && (self.leaf)(pick);
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let reachable = covered.iter().zip(&self.suffix[level]).zip(self.full).all(|((c, s), f)| c | s == *f);
        if !reachable {
            return false;
        }
        for (j, m) in self.options[level].1.iter().enumerate() {
            let next: Vec<u64> = covered.iter().zip(m).map(|(a, b)| a | b).collect();
            pick[level] = j;
            if self.run(level + 1, &next, pick, budget) {
                return true;
            }
        }
        false
    }
}

/// Vertex-disjoint paths, one per source, each ending at a labeled node and
/// touching no other labeled node.
fn families(
    g: &CodeGraph,
    sources: &[usize],
    labeled: &[usize],
    k: usize,
    used: &mut Vec<bool>,
    chosen: &mut Family,
    out: &mut Vec<Family>,
) {
    if out.len() >= OPTION_LIMIT {
        return;
    }
    if k == sources.len() {
        out.push(chosen.clone());
        return;
    }
    let mut stack = vec![sources[k]];
    walk(g, sources, labeled, k, used, &mut stack, chosen, out);
}

#[allow(clippy::too_many_arguments)]
fn walk(
    g: &CodeGraph,
    sources: &[usize],
    labeled: &[usize],
    k: usize,
    used: &mut Vec<bool>,
    stack: &mut Vec<usize>,
    chosen: &mut Family,
    out: &mut Vec<Family>,
) {
    let v = *stack.last().unwrap();
    if used[v] {
        return;
    }
    if labeled.contains(&v) {
        for &x in stack.iter() {
            used[x] = true;
        }
        chosen.push(stack.clone());
        families(g, sources, labeled, k + 1, used, chosen, out);
        chosen.pop();
        for &x in stack.iter() {
            used[x] = false;
        }
        return;
    }
    for w in g.children(v) {
        if out.len() >= OPTION_LIMIT {
            return;
        }
        if stack.contains(&w) {
            continue;
        }
        stack.push(w);
        walk(g, sources, labeled, k, used, stack, chosen, out);
        stack.pop();
    }
}
