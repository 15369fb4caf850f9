use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{CodeGraph, NodeKind};

type Colour<'a> = (NodeKind, &'a BTreeSet<String>, usize, usize);

fn colours(g: &CodeGraph) -> Vec<Colour<'_>> {
    (0..g.len()).map(|v| (g.node(v).kind, &g.node(v).labels, g.in_degree(v), g.out_degree(v))).collect()
}

/// Isomorphism that preserves node kinds and label sets (receiver names are
/// compared literally; node ids may differ).
pub fn is_isomorphic(a: &CodeGraph, b: &CodeGraph) -> bool {
    if a.len() != b.len() || a.edges().len() != b.edges().len() {
        return false;
    }
    let (ca, cb) = (colours(a), colours(b));
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    // Most constrained nodes first.
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&v| (ca.iter().filter(|c| **c == ca[v]).count(), v));
    let mut map = vec![usize::MAX; a.len()];
    let mut taken = vec![false; b.len()];
    extend(a, b, &ca, &cb, &order, 0, &mut map, &mut taken)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &CodeGraph,
    b: &CodeGraph,
    ca: &[Colour<'_>],
    cb: &[Colour<'_>],
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    taken: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..b.len() {
        if taken[w] || ca[v] != cb[w] {
            continue;
        }
        // Edges among already-mapped nodes must agree.
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u];
            a.edges().contains(&(u, v)) == b.edges().contains(&(mu, w))
                && a.edges().contains(&(v, u)) == b.edges().contains(&(w, mu))
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        taken[w] = true;
        if extend(a, b, ca, cb, order, depth + 1, map, taken) {
            return true;
        }
        taken[w] = false;
        map[v] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::builtin;
    use crate::code_graph::{CodeNode, NodeKind, PathFamily};

    #[test]
    fn relabeled_ids_are_isomorphic() {
        let g = builtin::four_source_code_graph();
        let mut nodes = g.nodes().to_vec();
        nodes.reverse();
        let n = nodes.len();
        for (i, v) in nodes.iter_mut().enumerate() {
            v.id = alloc::format!("x{i}");
        }
        let edges = g.edges().iter().map(|&(a, b)| (n - 1 - a, n - 1 - b)).collect();
        let h = CodeGraph::new(nodes, edges, PathFamily::new());
        assert!(is_isomorphic(&g, &h));
    }

    #[test]
    fn label_change_breaks_isomorphism() {
        let g = builtin::butterfly_code_graph();
        let mut nodes = g.nodes().to_vec();
        nodes[2] = CodeNode::new("m", NodeKind::Coding, ["R1"]);
        let h = CodeGraph::new(nodes, g.edges().clone(), PathFamily::new());
        assert!(!is_isomorphic(&g, &h));
    }
}
