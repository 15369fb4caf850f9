//! Backtracking over projective column classes.
//!
//! Basis columns are fixed to the standard basis. Every other column ranges
//! over normalized vectors (first nonzero entry 1) and zero; columns pinned by
//! a span constraint whose parents are already assigned range over the span
//! only. Leaves are tallied by how many non-basis columns are nonzero, which
//! is what the normalization factors need.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::constraints::ConstraintSystem;
use crate::field::FiniteField;

#[derive(Clone, Debug)]
enum StepKind {
    /// Column equals standard basis vector `e_i`.
    Fixed(usize),
    /// Column ranges over the span of these (already assigned) columns.
    Span(Vec<usize>),
    Free,
}

#[derive(Clone, Debug)]
struct Step {
    column: usize,
    kind: StepKind,
    /// Column sets that must be independent once this column is placed.
    rank_checks: Vec<Vec<usize>>,
    /// `(parents, target)` pairs completed at this step.
    span_checks: Vec<(Vec<usize>, usize)>,
}

/// Leaf counts indexed by the number of nonzero non-basis columns.
pub type Histogram = Vec<u64>;

pub struct LabelingSearch<'a> {
    cs: &'a ConstraintSystem,
    f: &'a FiniteField,
    m: usize,
    steps: Vec<Step>,
    fixed: usize,
    free_candidates: Vec<u32>,
    /// Assignment after the fixed steps, or `None` if they already fail.
    start: Option<Vec<u32>>,
    first_candidates: Vec<u32>,
}

fn normalize(f: &FiniteField, v: &mut [u32]) {
    if let Some(&lead) = v.iter().find(|x| **x != 0) {
        let inv = f.inv(lead).expect("nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
}

/// Rank of the vectors `cols` of `vals` (column `c` at `vals[c*m..]`).
fn rank(f: &FiniteField, m: usize, vals: &[u32], cols: &[usize], scratch: &mut Vec<u32>) -> usize {
    scratch.clear();
    for &c in cols {
        scratch.extend_from_slice(&vals[c * m..(c + 1) * m]);
    }
    let rows = cols.len();
    let mut r = 0;
    for c in 0..m {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| scratch[i * m + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..m {
                scratch.swap(p * m + j, r * m + j);
            }
        }
        let inv = f.inv(scratch[r * m + c]).expect("pivot");
        for i in r + 1..rows {
            let factor = scratch[i * m + c];
            if factor == 0 {
                continue;
            }
            let k = f.mul(factor, inv);
            for j in c..m {
                let s = f.mul(k, scratch[r * m + j]);
                scratch[i * m + j] = f.sub(scratch[i * m + j], s);
            }
        }
        r += 1;
    }
    r
}

impl<'a> LabelingSearch<'a> {
    /// Plans the assignment order. With `fix_basis`, the system's basis
    /// columns are pinned to the standard basis.
    pub fn new(cs: &'a ConstraintSystem, f: &'a FiniteField, fix_basis: bool) -> Self {
        let n = cs.n();
        let m = cs.m();
        let mut steps: Vec<Step> = Vec::new();
        let mut assigned = vec![false; n];
        let mut pos = vec![usize::MAX; n];
        let mut place = |steps: &mut Vec<Step>, column: usize, kind: StepKind, assigned: &mut Vec<bool>| {
            pos[column] = steps.len();
            assigned[column] = true;
            steps.push(Step { column, kind, rank_checks: Vec::new(), span_checks: Vec::new() });
        };
        let mut fixed = 0;
        if fix_basis {
            if let Some(b) = cs.basis() {
                for (i, &c) in b.iter().enumerate() {
                    place(&mut steps, c, StepKind::Fixed(i), &mut assigned);
                }
                fixed = b.len();
            }
        }
        while steps.len() < n {
            // Span-determined column with the fewest parents, else the
            // smallest free column.
            let determined = cs
                .spans()
                .iter()
                .filter(|s| !assigned[s.target] && !s.parents.contains(&s.target))
                .filter(|s| s.parents.iter().all(|&p| assigned[p]))
                .min_by_key(|s| (s.parents.len(), s.target));
            match determined {
                Some(s) => {
                    let (c, parents) = (s.target, s.parents.clone());
                    place(&mut steps, c, StepKind::Span(parents), &mut assigned);
                }
                None => {
                    let c = (0..n).find(|&c| !assigned[c]).unwrap();
                    place(&mut steps, c, StepKind::Free, &mut assigned);
                }
            }
        }

        #[allow(clippy::needless_range_loop)]
        for t in 0..n {
            let column = steps[t].column;
            if t >= fixed {
                let mut sets: Vec<Vec<usize>> = Vec::new();
                for a in cs.independent() {
                    if !a.contains(&column) {
                        continue;
                    }
                    let s: Vec<usize> = a.iter().copied().filter(|&c| pos[c] <= t).collect();
                    sets.push(s);
                }
                let unique: BTreeSet<Vec<usize>> = sets.into_iter().collect();
                let sets: Vec<Vec<usize>> = unique.iter().cloned().collect();
                // Independence of a superset implies it for its subsets.
                steps[t].rank_checks = sets
                    .iter()
                    .filter(|s| !sets.iter().any(|o| o.len() > s.len() && s.iter().all(|c| o.contains(c))))
                    .cloned()
                    .collect();
            }
            let generator = match &steps[t].kind {
                StepKind::Span(p) => Some(p.clone()),
                _ => None,
            };
            steps[t].span_checks = cs
                .spans()
                .iter()
                .filter(|s| {
                    let last = s.parents.iter().chain(Some(&s.target)).map(|&c| pos[c]).max().unwrap();
                    last == t && !(s.target == column && generator.as_ref() == Some(&s.parents))
                })
                .map(|s| (s.parents.clone(), s.target))
                .collect();
        }

        let q = f.q() as u64;
        let mut free_candidates = vec![0u32; m];
        let total = q.pow(m as u32);
        for code in 1..total {
            let mut v: Vec<u32> = (0..m).map(|i| ((code / q.pow(i as u32)) % q) as u32).collect();
            v.reverse();
            if v.iter().find(|x| **x != 0) == Some(&1) {
                free_candidates.extend(v);
            }
        }

        let mut search =
            LabelingSearch { cs, f, m, steps, fixed, free_candidates, start: None, first_candidates: Vec::new() };
        let mut vals = vec![0u32; n * m];
        let mut scratch = Vec::new();
        let mut ok = true;
        for t in 0..fixed {
            let col = search.steps[t].column;
            if let StepKind::Fixed(i) = search.steps[t].kind {
                vals[col * m + i] = 1;
            }
            ok &= search.checks_pass(t, &vals, &mut scratch);
        }
        if ok {
            if fixed < n {
                let mut buf = Vec::new();
                search.candidates(fixed, &vals, &mut buf);
                search.first_candidates = buf;
            }
            search.start = Some(vals);
        }
        search
    }

    pub fn fixed_columns(&self) -> usize {
        self.fixed
    }

    pub fn free_columns(&self) -> usize {
        self.steps.len() - self.fixed
    }

    /// Column order used by the search.
    pub fn order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.column).collect()
    }

    pub fn partition_count(&self) -> usize {
        match &self.start {
            None => 0,
            Some(_) if self.fixed == self.steps.len() => 1,
            Some(_) => self.first_candidates.len() / self.m.max(1),
        }
    }

    fn candidates(&self, t: usize, vals: &[u32], out: &mut Vec<u32>) {
        let m = self.m;
        out.clear();
        match &self.steps[t].kind {
            StepKind::Fixed(i) => {
                out.resize(m, 0);
                out[*i] = 1;
            }
            StepKind::Free => out.extend_from_slice(&self.free_candidates),
            StepKind::Span(parents) => {
                let f = self.f;
                let q = f.q() as u64;
                let k = parents.len();
                let mut v = vec![0u32; m];
                let mut found: Vec<Vec<u32>> = vec![vec![0; m]];
                for code in 1..q.pow(k as u32) {
                    let coeffs: Vec<u32> = (0..k).map(|i| ((code / q.pow(i as u32)) % q) as u32).collect();
                    // One representative per projective class of coefficients.
                    if coeffs.iter().find(|x| **x != 0) != Some(&1) {
                        continue;
                    }
                    v.iter_mut().for_each(|x| *x = 0);
                    for (c, &p) in coeffs.iter().zip(parents) {
                        if *c == 0 {
                            continue;
                        }
                        for i in 0..m {
                            v[i] = f.add(v[i], f.mul(*c, vals[p * m + i]));
                        }
                    }
                    normalize(f, &mut v);
                    found.push(v.clone());
                }
                found.sort_unstable();
                found.dedup();
                for c in found {
                    out.extend(c);
                }
            }
        }
    }

    fn checks_pass(&self, t: usize, vals: &[u32], scratch: &mut Vec<u32>) -> bool {
        let step = &self.steps[t];
        for s in &step.rank_checks {
            if s.len() > self.m || rank(self.f, self.m, vals, s, scratch) < s.len() {
                return false;
            }
        }
        for (parents, target) in &step.span_checks {
            let base = rank(self.f, self.m, vals, parents, scratch);
            let mut with: Vec<usize> = parents.clone();
            with.push(*target);
            if rank(self.f, self.m, vals, &with, scratch) != base {
                return false;
            }
        }
        true
    }

    #[allow(clippy::too_many_arguments)]
    /// Depth-first search below step `t`. `visit` sees each satisfying
    /// assignment with its nonzero count and returns false to stop.
    fn dfs(
        &self,
        t: usize,
        vals: &mut Vec<u32>,
        nz: usize,
        bufs: &mut Vec<Vec<u32>>,
        scratch: &mut Vec<u32>,
        only: Option<usize>,
        visit: &mut dyn FnMut(&[u32], usize) -> bool,
    ) -> bool {
        if t == self.steps.len() {
            return visit(vals, nz);
        }
        let m = self.m;
        let col = self.steps[t].column;
        let mut buf = core::mem::take(&mut bufs[t]);
        if t == self.fixed && only.is_some() {
            buf.clear();
            buf.extend_from_slice(&self.first_candidates);
        } else {
            self.candidates(t, vals, &mut buf);
        }
        let range = match only {
            Some(i) if t == self.fixed => i..i + 1,
            _ => 0..buf.len() / m.max(1),
        };
        let mut keep_going = true;
        for i in range {
            let cand = &buf[i * m..(i + 1) * m];
            vals[col * m..(col + 1) * m].copy_from_slice(cand);
            if !self.checks_pass(t, vals, scratch) {
                continue;
            }
            let nonzero = cand.iter().any(|x| *x != 0) as usize;
            if !self.dfs(t + 1, vals, nz + nonzero, bufs, scratch, None, visit) {
                keep_going = false;
                break;
            }
        }
        vals[col * m..(col + 1) * m].iter_mut().for_each(|x| *x = 0);
        bufs[t] = buf;
        keep_going
    }

    /// Runs partition `index` (one candidate of the first unfixed column).
    pub fn run_partition(&self, index: usize, visit: &mut dyn FnMut(&[u32], usize) -> bool) -> bool {
        let Some(start) = &self.start else {
            return true;
        };
        let mut vals = start.clone();
        let mut bufs = vec![Vec::new(); self.steps.len()];
        let mut scratch = Vec::new();
        if self.fixed == self.steps.len() {
            return visit(&vals, 0);
        }
        self.dfs(self.fixed, &mut vals, 0, &mut bufs, &mut scratch, Some(index), visit)
    }

    pub fn count_partition(&self, index: usize) -> Histogram {
        let mut hist = vec![0u64; self.free_columns() + 1];
        self.run_partition(index, &mut |_, nz| {
            hist[nz] += 1;
            true
        });
        hist
    }

    pub fn histogram(&self) -> Histogram {
        let mut total = vec![0u64; self.free_columns() + 1];
        for i in 0..self.partition_count() {
            for (a, b) in total.iter_mut().zip(self.count_partition(i)) {
                *a += b;
            }
        }
        total
    }

    /// First satisfying assignment in search order, as column vectors.
    pub fn first(&self) -> Option<Vec<Vec<u32>>> {
        let mut found = None;
        for i in 0..self.partition_count() {
            self.run_partition(i, &mut |vals, _| {
                found = Some(vals.to_vec());
                false
            });
            if found.is_some() {
                break;
            }
        }
        found.map(|v| self.split(&v))
    }

    pub(crate) fn split(&self, vals: &[u32]) -> Vec<Vec<u32>> {
        (0..self.cs.n()).map(|c| vals[c * self.m..(c + 1) * self.m].to_vec()).collect()
    }

    /// Columns that normalization leaves free to scale: every column not
    /// fixed to the basis.
    pub(crate) fn scalable_columns(&self) -> Vec<usize> {
        self.steps[self.fixed..].iter().map(|s| s.column).collect()
    }
}
