use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::code_graph::{CodeGraph, NodeKind};

/// `target` must lie in the span of the `parents` columns.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanConstraint {
    pub parents: Vec<usize>,
    pub target: usize,
}

/// Independence and span conditions on the columns of an `m x n` matrix.
/// Column indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    m: usize,
    columns: Vec<String>,
    independent: Vec<Vec<usize>>,
    spans: Vec<SpanConstraint>,
    basis: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintError {
    ColumnOutOfRange(usize),
    /// The normalization basis must be an independent set of size `m`.
    BadBasis,
    RepeatedColumn(usize),
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::ColumnOutOfRange(c) => write!(f, "column {c} out of range"),
            ConstraintError::BadBasis => write!(f, "basis must be one of the independent sets and have m columns"),
            ConstraintError::RepeatedColumn(c) => write!(f, "column {c} repeated within a constraint"),
        }
    }
}

fn sorted_unique(mut v: Vec<usize>) -> Result<Vec<usize>, ConstraintError> {
    v.sort_unstable();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(ConstraintError::RepeatedColumn(w[0]));
    }
    Ok(v)
}

impl ConstraintSystem {
    /// Sets are sorted; duplicate independent sets and span constraints are
    /// dropped, keeping first occurrences.
    pub fn new(
        m: usize,
        columns: Vec<String>,
        independent: Vec<Vec<usize>>,
        spans: Vec<SpanConstraint>,
        basis: Option<Vec<usize>>,
    ) -> Result<Self, ConstraintError> {
        let n = columns.len();
        let check = |c: usize| if c < n { Ok(()) } else { Err(ConstraintError::ColumnOutOfRange(c)) };
        let mut seen = BTreeSet::new();
        let mut ind = Vec::new();
        for a in independent {
            let a = sorted_unique(a)?;
            a.iter().try_for_each(|&c| check(c))?;
            if seen.insert(a.clone()) {
                ind.push(a);
            }
        }
        let mut seen = BTreeSet::new();
        let mut sp = Vec::new();
        for s in spans {
            let parents = sorted_unique(s.parents)?;
            parents.iter().try_for_each(|&c| check(c))?;
            check(s.target)?;
            let s = SpanConstraint { parents, target: s.target };
            if seen.insert(s.clone()) {
                sp.push(s);
            }
        }
        let basis = match basis {
            Some(b) => {
                let b = sorted_unique(b)?;
                if b.len() != m || !ind.contains(&b) {
                    return Err(ConstraintError::BadBasis);
                }
                Some(b)
            }
            None => None,
        };
        Ok(ConstraintSystem { m, columns, independent: ind, spans: sp, basis })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn independent(&self) -> &[Vec<usize>] {
        &self.independent
    }

    pub fn spans(&self) -> &[SpanConstraint] {
        &self.spans
    }

    /// Columns fixed to the standard basis under source-identity
    /// normalization.
    pub fn basis(&self) -> Option<&[usize]> {
        self.basis.as_deref()
    }

    /// Renumbers columns: old column `c` becomes `perm[c]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut columns = self.columns.clone();
        for (c, name) in self.columns.iter().enumerate() {
            columns[perm[c]] = name.clone();
        }
        let map = |s: &[usize]| s.iter().map(|&c| perm[c]).collect::<Vec<_>>();
        ConstraintSystem::new(
            self.m,
            columns,
            self.independent.iter().map(|a| map(a)).collect(),
            self.spans.iter().map(|s| SpanConstraint { parents: map(&s.parents), target: perm[s.target] }).collect(),
            self.basis.as_deref().map(map),
        )
        .expect("a permutation keeps the system valid")
    }
}

/// Columns are the source nodes, then the coding nodes, each in node order.
/// Independent sets: the sources, then `V_R` per receiver. Span
/// constraints: each coding node lies in the span of its in-neighbours.
pub fn extract_constraints(g: &CodeGraph) -> ConstraintSystem {
    let order: Vec<usize> = g.sources().into_iter().chain(g.coding_nodes()).collect();
    let mut col_of = alloc::vec![0; g.len()];
    for (c, &v) in order.iter().enumerate() {
        col_of[v] = c;
    }
    let m = g.sources().len();
    let mut independent = alloc::vec![(0..m).collect::<Vec<_>>()];
    for r in g.receivers() {
        independent.push(g.labeled(&r).into_iter().map(|v| col_of[v]).collect());
    }
    let spans = g
        .coding_nodes()
        .into_iter()
        .map(|v| SpanConstraint { parents: g.parents(v).into_iter().map(|u| col_of[u]).collect(), target: col_of[v] })
        .collect();
    let columns = order.iter().map(|&v| g.node(v).id.clone()).collect();
    debug_assert!(order.iter().take(m).all(|&v| g.node(v).kind == NodeKind::Source));
    ConstraintSystem::new(m, columns, independent, spans, Some((0..m).collect()))
        .expect("code graph constraints are well formed")
}
