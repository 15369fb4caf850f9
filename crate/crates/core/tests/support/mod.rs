//! Random instances and property suites shared by the core property tests
//! and the CLI acceptance target.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use netcode_core::code_graph::{
    build_code_graph, is_isomorphic, network_from_code_graph, verify_code_graph, CodeGraph, CodeNode, NodeKind,
    PathFamily,
};
use netcode_core::coding::{detect_coding_points, reduce_network, Backend, Solver};
use netcode_core::field::Matrix;
use netcode_core::field::{gl_order, prime_powers, FiniteField};
use netcode_core::flow::{capacity, max_disjoint_exhaustive, mincut};
use netcode_core::labeling::{
    count_brute_force, count_labelings, ConstraintSystem, Labeling, NormalizationMode, SpanConstraint,
};
use netcode_core::network::{has_cycle, topological_order, Network, PathSystem};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for [`random_network`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub parallel: bool,
    /// Allow edges straight from a source to a receiver.
    pub direct: bool,
}

/// A random acyclic network: sources `s*` first, relays `v*`, receivers
/// `r*` last, edges pointing forward only.
pub fn random_network(rng: &mut impl Rng, shape: Shape) -> Network {
    let nv = rng.gen_range(3..=shape.max_vertices);
    let ns = rng.gen_range(1..=2.min(nv - 2));
    let nr = rng.gen_range(1..=3.min(nv - ns));
    let name = |i: usize| {
        if i < ns {
            format!("s{i}")
        } else if i >= nv - nr {
            format!("r{}", i - (nv - nr))
        } else {
            format!("v{i}")
        }
    };
    let ne = rng.gen_range(1..=shape.max_edges);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for _ in 0..ne * 4 {
        if pairs.len() == ne {
            break;
        }
        let t = rng.gen_range(0..nv - nr);
        let h = rng.gen_range(ns.max(t + 1)..nv);
        if (!shape.parallel && pairs.contains(&(t, h))) || (!shape.direct && t < ns && h >= nv - nr) {
            continue;
        }
        pairs.push((t, h));
    }
    let edges = pairs.iter().enumerate().map(|(i, &(t, h))| (format!("e{i}"), name(t), name(h))).collect();
    Network::new((0..nv).map(name).collect(), edges, (0..ns).map(name).collect(), (nv - nr..nv).map(name).collect())
        .expect("generator respects network rules")
}

/// Retries [`random_network`] until every receiver can get all sources.
pub fn feasible_network(rng: &mut impl Rng, shape: Shape) -> Network {
    loop {
        let n = random_network(rng, shape);
        if capacity(&n).achievable {
            return n;
        }
    }
}

/// A random code graph, drawn as a family of vertex-disjoint paths per
/// receiver over increasing node indices and kept once it verifies.
pub fn random_code_graph(rng: &mut impl Rng) -> CodeGraph {
    loop {
        let ns = rng.gen_range(2..=3usize);
        let nq = rng.gen_range(1..=4usize);
        let nr = rng.gen_range(2..=4usize);
        let total = ns + nq;
        let mut labels = vec![BTreeSet::new(); total];
        let mut edges = BTreeSet::new();
        let mut paths = PathFamily::new();
        for r in 0..nr {
            let name = format!("R{r}");
            let mut used = vec![false; total];
            let mut family = BTreeMap::new();
            for k in 0..ns {
                let mut path = vec![k];
                used[k] = true;
                loop {
                    let at = *path.last().unwrap();
                    let free: Vec<usize> = (ns.max(at + 1)..total).filter(|&v| !used[v]).collect();
                    if free.is_empty() || rng.gen_bool(0.35) {
                        break;
                    }
                    let v = free[rng.gen_range(0..free.len())];
                    used[v] = true;
                    edges.insert((at, v));
                    path.push(v);
                }
                labels[*path.last().unwrap()].insert(name.clone());
                family.insert(k, path);
            }
            paths.insert(name, family);
        }
        let nodes = (0..total)
            .map(|i| {
                let (id, kind) =
                    if i < ns { (format!("S{i}"), NodeKind::Source) } else { (format!("Q{i}"), NodeKind::Coding) };
                CodeNode::new(id, kind, labels[i].iter().cloned())
            })
            .collect();
        let g = CodeGraph::new(nodes, edges, paths);
        if verify_code_graph(&g).is_ok() {
            return g;
        }
    }
}

pub fn code_graph_of(n: &Network, ps: &PathSystem) -> CodeGraph {
    let (rn, rps) = reduce_network(n, ps).expect("valid system");
    let cps = detect_coding_points(&rn, &rps).expect("valid system");
    build_code_graph(&rn, &rps, &cps).expect("reduced network")
}

/// A small random constraint system. Cell count stays within brute-force
/// reach for `q`; with `basis`, the first `m` columns form the basis.
pub fn random_system(rng: &mut impl Rng, q: u32, basis: bool) -> ConstraintSystem {
    let max_cells = if q == 2 { 12 } else { 8 };
    let m = rng.gen_range(1..=3usize);
    let n = rng.gen_range(m..=5usize.min(max_cells / m).max(m));
    let mut independent = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let k = rng.gen_range(1..=m.min(n));
        let mut cols: Vec<usize> = (0..n).collect();
        cols.shuffle(rng);
        independent.push(cols[..k].to_vec());
    }
    let mut spans = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let target = rng.gen_range(0..n);
        let mut others: Vec<usize> = (0..n).filter(|&c| c != target).collect();
        if others.is_empty() {
            continue;
        }
        others.shuffle(rng);
        let k = rng.gen_range(1..=2.min(others.len()));
        spans.push(SpanConstraint { parents: others[..k].to_vec(), target });
    }
    let b = basis.then(|| (0..m).collect::<Vec<_>>());
    if let Some(b) = &b {
        independent.push(b.clone());
    }
    let columns = (0..n).map(|c| format!("c{c}")).collect();
    ConstraintSystem::new(m, columns, independent, spans, b).expect("generated system is well formed")
}

fn without_basis(cs: &ConstraintSystem) -> ConstraintSystem {
    ConstraintSystem::new(cs.m(), cs.columns().to_vec(), cs.independent().to_vec(), cs.spans().to_vec(), None)
        .expect("same constraints")
}

/// Counts of matrices with the basis columns at the identity: all of them,
/// and those whose other nonzero columns start with 1.
fn brute_force_normalized(cs: &ConstraintSystem, f: &FiniteField) -> (u64, u64) {
    let basis = cs.basis().expect("system has a basis");
    let q = f.q() as u64;
    let (m, n) = (cs.m(), cs.n());
    let (mut si, mut proj) = (0, 0);
    let mut cols = vec![vec![0u32; m]; n];
    for (i, &b) in basis.iter().enumerate() {
        cols[b][i] = 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !basis.contains(c)).collect();
    for code in 0..q.pow((m * free.len()) as u32) {
        let mut x = code;
        for &c in &free {
            for v in cols[c].iter_mut() {
                *v = (x % q) as u32;
                x /= q;
            }
        }
        if Labeling::new(f.q(), m, cols.clone()).verify(cs, f).is_ok() {
            si += 1;
            if free.iter().all(|&c| cols[c].iter().find(|v| **v != 0).is_none_or(|v| *v == 1)) {
                proj += 1;
            }
        }
    }
    (si, proj)
}

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs `check` on `cases` seeds from a fixed stream.
pub fn run_seeds(cases: u32, check: impl Fn(u64) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&any::<u64>(), check).map_err(|e| e.to_string())
}

pub fn topological_sort_suite(cases: u32) -> Result<(), String> {
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let edges: Vec<(usize, usize)> =
            (0..r.gen_range(0..=14)).map(|_| (r.gen_range(0..n), r.gen_range(0..n))).filter(|(a, b)| a != b).collect();
        match topological_order(n, &edges) {
            Ok(order) => {
                prop_assert!(!has_cycle(n, &edges));
                let mut pos = vec![usize::MAX; n];
                for (i, &v) in order.iter().enumerate() {
                    pos[v] = i;
                }
                prop_assert!(pos.iter().all(|&p| p < n), "order is a permutation");
                prop_assert!(edges.iter().all(|&(a, b)| pos[a] < pos[b]));
            }
            Err(_) => prop_assert!(has_cycle(n, &edges)),
        }
        Ok(())
    })
}

/// Mincut against the exhaustive disjoint-path count, parallel edges allowed.
pub fn menger_suite(cases: u32) -> Result<(), String> {
    run_seeds(cases, |seed| {
        let n = random_network(&mut rng(seed), Shape { max_vertices: 8, max_edges: 12, parallel: true, direct: true });
        for &r in n.receivers() {
            let cut = mincut(&n, r).expect("receiver").mincut;
            prop_assert_eq!(cut, max_disjoint_exhaustive(&n, r), "receiver {}", n.vertex_name(r));
        }
        Ok(())
    })
}

/// Both optimizer backends reach the same optimum. Odd seeds draw a plain
/// random network, even ones realize a random code graph, which usually
/// needs coding.
pub fn backend_agreement_suite(cases: u32) -> Result<(), String> {
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let n = if seed % 2 == 1 {
            feasible_network(&mut r, Shape { max_vertices: 10, max_edges: 14, parallel: false, direct: true })
        } else {
            network_from_code_graph(&random_code_graph(&mut r)).map_err(|e| TestCaseError::fail(e.to_string()))?.0
        };
        let ilp = Solver::new(&n, Backend::Ilp).and_then(|s| s.solve());
        let paths = Solver::new(&n, Backend::Paths).and_then(|s| s.solve());
        let (ilp, paths) = match (ilp, paths) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => return Err(TestCaseError::fail(format!("ilp {:?} / paths {:?}", a.err(), b.err()))),
        };
        prop_assert_eq!(ilp.coding_point_count, paths.coding_point_count);
        for res in [&ilp, &paths] {
            let cps = detect_coding_points(&n, &res.path_system).map_err(|v| TestCaseError::fail(v.to_string()))?;
            prop_assert_eq!(cps.len(), res.coding_point_count);
        }
        Ok(())
    })
}

/// Realizing a code graph as a network and rebuilding gives it back.
pub fn code_graph_round_trip_suite(cases: u32) -> Result<(), String> {
    run_seeds(cases, |seed| {
        let g = random_code_graph(&mut rng(seed));
        prop_assert!(verify_code_graph(&g).is_ok(), "built graph verifies: {:?}", verify_code_graph(&g));
        let (n, ps) = network_from_code_graph(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = code_graph_of(&n, &ps);
        prop_assert!(is_isomorphic(&g, &back));
        Ok(())
    })
}

/// The counting search against exhaustive matrix enumeration, q in {2, 3}.
pub fn labeling_brute_force_suite(cases: u32) -> Result<(), String> {
    let fields = [FiniteField::of_order(2).unwrap(), FiniteField::of_order(3).unwrap()];
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let f = &fields[r.gen_range(0..2)];
        let with_basis = r.gen_bool(0.5);
        let cs = random_system(&mut r, f.q(), with_basis);
        let raw = count_labelings(&without_basis(&cs), f, NormalizationMode::Raw).expect("tiny system");
        prop_assert_eq!(&raw, &count_brute_force(&cs, f));
        if cs.basis().is_some() {
            let (si, proj) = brute_force_normalized(&cs, f);
            prop_assert_eq!(count_labelings(&cs, f, NormalizationMode::SourceIdentity).unwrap(), BigUint::from(si));
            prop_assert_eq!(count_labelings(&cs, f, NormalizationMode::Projective).unwrap(), BigUint::from(proj));
        }
        Ok(())
    })
}

/// Raw counts of the full search equal source-identity counts times
/// `|GL_m(q)|`.
pub fn raw_vs_source_identity_suite(cases: u32) -> Result<(), String> {
    let fields: Vec<FiniteField> = [2, 3, 4, 5].iter().map(|&q| FiniteField::of_order(q).unwrap()).collect();
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let f = &fields[r.gen_range(0..fields.len())];
        let cs = random_system(&mut r, 3, true);
        let raw = count_labelings(&without_basis(&cs), f, NormalizationMode::Raw).expect("small system");
        let si = count_labelings(&cs, f, NormalizationMode::SourceIdentity).unwrap();
        prop_assert_eq!(&raw, &(&si * gl_order(f.q() as u64, cs.m())));
        prop_assert_eq!(raw, count_labelings(&cs, f, NormalizationMode::Raw).unwrap());
        Ok(())
    })
}

/// Ring and field axioms plus Frobenius, over every order up to 16.
pub fn field_axioms_suite(cases: u32) -> Result<(), String> {
    let fields: Vec<FiniteField> = prime_powers(2, 16).into_iter().map(|q| FiniteField::of_order(q).unwrap()).collect();
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let f = &fields[r.gen_range(0..fields.len())];
        let q = f.q();
        let [a, b, c] = [0; 3].map(|_| r.gen_range(0..q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, 0), a);
        prop_assert_eq!(f.mul(a, 1), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), 1),
            None => prop_assert_eq!(a, 0),
        }
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(f.mul(a, b), p), f.mul(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, q as u64), a);
        Ok(())
    })
}

fn random_matrix<'f>(r: &mut impl Rng, f: &'f FiniteField, rows: usize, cols: usize) -> Matrix<'f> {
    let data: Vec<Vec<u32>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(0..f.q())).collect()).collect();
    Matrix::from_rows(f, &data).unwrap()
}

/// Largest set of columns with no nontrivial vanishing combination.
fn rank_brute_force(a: &Matrix<'_>) -> usize {
    let f = a.field();
    let q = f.q() as u64;
    let cols: Vec<Vec<u32>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let independent = |set: &[usize]| {
        (1..q.pow(set.len() as u32)).all(|code| {
            let mut x = code;
            let mut sum = vec![0u32; a.rows()];
            for &j in set {
                let c = (x % q) as u32;
                x /= q;
                for (s, v) in sum.iter_mut().zip(&cols[j]) {
                    *s = f.add(*s, f.mul(c, *v));
                }
            }
            sum.iter().any(|v| *v != 0)
        })
    };
    (0u32..1 << a.cols())
        .map(|mask| (0..a.cols()).filter(|j| mask >> j & 1 == 1).collect::<Vec<_>>())
        .filter(|s| independent(s))
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// Determinant multiplicativity and rank against brute force.
pub fn matrix_suite(cases: u32) -> Result<(), String> {
    let fields: Vec<FiniteField> = [2, 3, 4, 5, 7].iter().map(|&q| FiniteField::of_order(q).unwrap()).collect();
    run_seeds(cases, |seed| {
        let mut r = rng(seed);
        let f = &fields[r.gen_range(0..fields.len())];
        let k = r.gen_range(1..=3);
        let (a, b) = (random_matrix(&mut r, f, k, k), random_matrix(&mut r, f, k, k));
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        prop_assert_eq!(a.det().unwrap().is_zero(), a.rank() < k);
        let (rows, cols) = (r.gen_range(1..=3), r.gen_range(1..=if f.q() <= 3 { 5 } else { 4 }));
        let c = random_matrix(&mut r, f, rows, cols);
        prop_assert_eq!(c.rank(), rank_brute_force(&c));
        Ok(())
    })
}
