//! Matrix labelings: assigning a vector in `F_q^m` to each column so that the
//! independence and span constraints hold.

mod constraints;
mod search;

pub use constraints::{extract_constraints, ConstraintError, ConstraintSystem, SpanConstraint};
pub use search::{Histogram, LabelingSearch};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::field::{gl_order, prime_powers, FieldError, FiniteField, Matrix, MAX_ORDER};

/// Bound on `(q+1)^c`, `c` the number of columns the counter searches over.
pub const SEARCH_BOUND: u64 = 10_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalizationMode {
    /// Every matrix counts.
    Raw,
    /// Basis columns fixed to the identity.
    SourceIdentity,
    /// Basis fixed and every other column taken up to a nonzero scalar.
    Projective,
}

impl NormalizationMode {
    pub fn name(self) -> &'static str {
        match self {
            NormalizationMode::Raw => "raw",
            NormalizationMode::SourceIdentity => "source-identity",
            NormalizationMode::Projective => "projective",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelingError {
    /// The mode needs a basis and the system has none.
    NoBasis(NormalizationMode),
    /// Raw enumeration over a system with a basis would repeat every
    /// source-identity labeling `|GL_m|` times.
    RawEnumeration,
    SearchTooLarge {
        q: u32,
        columns: usize,
    },
}

impl fmt::Display for LabelingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelingError::NoBasis(m) => write!(f, "{} normalization needs a basis", m.name()),
            LabelingError::RawEnumeration => {
                write!(f, "raw enumeration is not supported when a basis exists; enumerate source-identity labelings")
            }
            LabelingError::SearchTooLarge { q, columns } => write!(
                f,
                "search over {columns} columns at q={q} exceeds (q+1)^c <= {SEARCH_BOUND}; use a specialized counter"
            ),
        }
    }
}

/// An `m x n` matrix over `GF(q)` stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Labeling {
    q: u32,
    m: usize,
    columns: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelingViolation {
    Shape,
    Dependent(Vec<usize>),
    NotInSpan(SpanConstraint),
}

impl fmt::Display for LabelingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelingViolation::Shape => write!(f, "labeling shape does not match the constraint system"),
            LabelingViolation::Dependent(s) => write!(f, "columns {s:?} are dependent"),
            LabelingViolation::NotInSpan(s) => {
                write!(f, "column {} is not in the span of {:?}", s.target, s.parents)
            }
        }
    }
}

impl Labeling {
    pub fn new(q: u32, m: usize, columns: Vec<Vec<u32>>) -> Self {
        Labeling { q, m, columns }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    /// Row-major form.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.m).map(|i| self.columns.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn matrix<'f>(&self, f: &'f FiniteField) -> Matrix<'f> {
        let refs: Vec<&[u32]> = self.columns.iter().map(Vec::as_slice).collect();
        Matrix::from_columns(f, self.m, &refs).expect("labeling entries lie in the field")
    }

    /// Checks every constraint independently of the search.
    pub fn verify(&self, cs: &ConstraintSystem, f: &FiniteField) -> Result<(), LabelingViolation> {
        if self.q != f.q()
            || self.m != cs.m()
            || self.n() != cs.n()
            || self.columns.iter().any(|c| c.len() != self.m || c.iter().any(|&x| x >= f.q()))
        {
            return Err(LabelingViolation::Shape);
        }
        let mat = self.matrix(f);
        for a in cs.independent() {
            if mat.select_columns(a).rank() != a.len() {
                return Err(LabelingViolation::Dependent(a.clone()));
            }
        }
        for s in cs.spans() {
            let inside = mat.select_columns(&s.parents).in_span(&self.columns[s.target]).expect("shapes agree");
            if !inside {
                return Err(LabelingViolation::NotInSpan(s.clone()));
            }
        }
        Ok(())
    }
}

fn fix_basis(mode: NormalizationMode) -> bool {
    mode != NormalizationMode::Raw
}

/// Turns a leaf histogram into a count under `mode`.
pub fn count_from_histogram(
    hist: &[u64],
    q: u32,
    m: usize,
    has_basis: bool,
    mode: NormalizationMode,
) -> Result<BigUint, LabelingError> {
    if !has_basis && mode != NormalizationMode::Raw {
        return Err(LabelingError::NoBasis(mode));
    }
    let units = BigUint::from(q - 1);
    let scaled =
        || hist.iter().enumerate().fold(BigUint::zero(), |acc, (nz, &h)| acc + BigUint::from(h) * units.pow(nz as u32));
    Ok(match mode {
        NormalizationMode::Projective => hist.iter().map(|&h| BigUint::from(h)).sum(),
        NormalizationMode::SourceIdentity => scaled(),
        NormalizationMode::Raw if has_basis => scaled() * gl_order(q as u64, m),
        NormalizationMode::Raw => scaled(),
    })
}

/// The search `count_labelings` would run, after the size guard.
pub fn counting_search<'a>(cs: &'a ConstraintSystem, f: &'a FiniteField) -> Result<LabelingSearch<'a>, LabelingError> {
    let search = LabelingSearch::new(cs, f, true);
    let bound = (f.q() as u128 + 1).checked_pow(search.free_columns() as u32);
    if bound.is_none_or(|b| b > SEARCH_BOUND as u128) {
        return Err(LabelingError::SearchTooLarge { q: f.q(), columns: search.free_columns() });
    }
    Ok(search)
}

/// Number of labelings under `mode`. Raw counts of systems with a basis are
/// the source-identity count times `|GL_m(q)|`.
pub fn count_labelings(
    cs: &ConstraintSystem,
    f: &FiniteField,
    mode: NormalizationMode,
) -> Result<BigUint, LabelingError> {
    if cs.basis().is_none() && mode != NormalizationMode::Raw {
        return Err(LabelingError::NoBasis(mode));
    }
    let search = counting_search(cs, f)?;
    count_from_histogram(&search.histogram(), f.q(), cs.m(), cs.basis().is_some(), mode)
}

/// Some labeling, if any exists. With a basis, the one returned has the
/// basis columns equal to the identity.
pub fn exists_labeling(cs: &ConstraintSystem, f: &FiniteField) -> Option<Labeling> {
    let search = LabelingSearch::new(cs, f, true);
    search.first().map(|cols| Labeling::new(f.q(), cs.m(), cols))
}

/// Up to `limit` labelings in search order. Source-identity mode expands
/// each projective class by its nonzero column scalings.
pub fn enumerate_labelings(
    cs: &ConstraintSystem,
    f: &FiniteField,
    mode: NormalizationMode,
    limit: usize,
) -> Result<Vec<Labeling>, LabelingError> {
    match (mode, cs.basis().is_some()) {
        (NormalizationMode::Raw, true) => return Err(LabelingError::RawEnumeration),
        (NormalizationMode::Raw, false) => {}
        (_, false) => return Err(LabelingError::NoBasis(mode)),
        _ => {}
    }
    let search = LabelingSearch::new(cs, f, fix_basis(mode));
    let scalable = search.scalable_columns();
    let expand = mode != NormalizationMode::Projective;
    let mut out = Vec::new();
    for i in 0..search.partition_count() {
        if out.len() >= limit {
            break;
        }
        search.run_partition(i, &mut |vals, _| {
            let cols = search.split(vals);
            if !expand {
                out.push(Labeling::new(f.q(), cs.m(), cols));
                return out.len() < limit;
            }
            let live: Vec<usize> = scalable.iter().copied().filter(|&c| cols[c].iter().any(|x| *x != 0)).collect();
            let mut scalars = vec![1u32; live.len()];
            loop {
                let mut c = cols.clone();
                for (&col, &s) in live.iter().zip(&scalars) {
                    c[col].iter_mut().for_each(|x| *x = f.mul(*x, s));
                }
                out.push(Labeling::new(f.q(), cs.m(), c));
                if out.len() >= limit {
                    return false;
                }
                // Odometer over nonzero scalars.
                let mut i = 0;
                while i < scalars.len() {
                    scalars[i] += 1;
                    if scalars[i] < f.q() {
                        break;
                    }
                    scalars[i] = 1;
                    i += 1;
                }
                if i == scalars.len() {
                    return true;
                }
            }
        });
    }
    Ok(out)
}

/// Raw labeling count by trying every `m x n` matrix. Only for tiny cases.
pub fn count_brute_force(cs: &ConstraintSystem, f: &FiniteField) -> BigUint {
    let q = f.q() as u64;
    let cells = cs.m() * cs.n();
    let total = q.checked_pow(cells as u32).expect("brute force is for tiny systems");
    let mut count = BigUint::zero();
    let mut cols = vec![vec![0u32; cs.m()]; cs.n()];
    for code in 0..total {
        let mut x = code;
        for c in cols.iter_mut() {
            for v in c.iter_mut() {
                *v = (x % q) as u32;
                x /= q;
            }
        }
        if Labeling::new(f.q(), cs.m(), cols.clone()).verify(cs, f).is_ok() {
            count += BigUint::one();
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMinReport {
    /// Smallest achievable order, if any up to the limit.
    pub q_min: Option<u64>,
    pub achievable: Vec<u64>,
    pub tested: Vec<u64>,
}

/// Tests every prime power up to `q_max`.
pub fn q_min(cs: &ConstraintSystem, q_max: u64) -> Result<QMinReport, FieldError> {
    if q_max > MAX_ORDER {
        return Err(FieldError::TooLarge { p: q_max, k: 1 });
    }
    let tested = prime_powers(2, q_max);
    let mut achievable = Vec::new();
    for &q in &tested {
        let f = FiniteField::of_order(q)?;
        if exists_labeling(cs, &f).is_some() {
            achievable.push(q);
        }
    }
    Ok(QMinReport { q_min: achievable.first().copied(), achievable, tested })
}
