//! Counts across fields: polynomial fits, the combination-network counter
//! and Fano achievability.

pub mod builtin;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{gl_order, prime_power, FiniteField};
use crate::labeling::{exists_labeling, NormalizationMode};

/// Exact counts at distinct, ascending prime powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountProfile {
    points: Vec<(u64, BigUint)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileError {
    NotPrimePower(u64),
    NotAscending(u64),
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            ProfileError::NotAscending(q) => write!(f, "q={q} is out of order or repeated"),
        }
    }
}

impl CountProfile {
    pub fn new(points: Vec<(u64, BigUint)>) -> Result<Self, ProfileError> {
        for (i, (q, _)) in points.iter().enumerate() {
            if prime_power(*q).is_none() {
                return Err(ProfileError::NotPrimePower(*q));
            }
            if i > 0 && points[i - 1].0 >= *q {
                return Err(ProfileError::NotAscending(*q));
            }
        }
        Ok(CountProfile { points })
    }

    pub fn points(&self) -> &[(u64, BigUint)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    /// Coefficients of `q^0, q^1, ...`.
    Fits(Vec<BigRational>),
    /// First point off the interpolant.
    Mismatch { q: u64, predicted: BigRational, actual: BigUint },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitError {
    InsufficientPoints { needed: usize, found: usize },
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InsufficientPoints { needed, found } => {
                write!(f, "fit needs at least {needed} points, profile has {found}")
            }
        }
    }
}

fn rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

fn rational_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Evaluates `sum c_i q^i`.
pub fn evaluate(coefficients: &[BigRational], q: u64) -> BigRational {
    let x = rational_u64(q);
    coefficients.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Exact interpolating polynomial through `points`, of degree below their
/// number. Coefficients of `q^0, q^1, ...`.
pub fn interpolate(points: &[(u64, BigUint)]) -> Vec<BigRational> {
    let d = points.len().saturating_sub(1);
    if points.is_empty() {
        return Vec::new();
    }
    let xs: Vec<BigRational> = points.iter().map(|(q, _)| rational_u64(*q)).collect();
    // Newton divided differences, in place.
    let mut dd: Vec<BigRational> = points.iter().map(|(_, c)| rational(c)).collect();
    for j in 1..=d {
        for i in (j..=d).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // Newton form to monomials: c <- c * (x - x_i) + dd_i from the top.
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for i in (0..=d).rev() {
        let mut next = vec![BigRational::zero(); d + 1];
        for k in 0..d {
            next[k + 1] += &coeffs[k];
        }
        for k in 0..=d {
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Interpolates degree `d` through the first `d+1` points exactly and checks
/// the rest against it.
pub fn fit_polynomial(profile: &CountProfile, d: usize) -> Result<FitOutcome, FitError> {
    let pts = profile.points();
    if pts.len() < d + 2 {
        return Err(FitError::InsufficientPoints { needed: d + 2, found: pts.len() });
    }
    let coeffs = interpolate(&pts[..=d]);
    for (q, c) in &pts[d + 1..] {
        let predicted = evaluate(&coeffs, *q);
        if predicted != rational(c) {
            return Ok(FitOutcome::Mismatch { q: *q, predicted, actual: c.clone() });
        }
    }
    Ok(FitOutcome::Fits(coeffs))
}

/// Residual `actual - fitted` at `q`.
pub fn residual(coefficients: &[BigRational], q: u64, actual: &BigUint) -> BigRational {
    rational(actual) - evaluate(coefficients, q)
}

/// Subset of `Z_n` as a `u128` bitset when it fits.
#[derive(Clone)]
enum Cyclic {
    Small(u128),
    Large,
}

fn set_from(n: usize, members: &[usize]) -> Cyclic {
    if n <= 128 {
        Cyclic::Small(members.iter().fold(0u128, |m, &x| m | (1u128 << x)))
    } else {
        Cyclic::Large
    }
}

/// `|A + B|` in `Z_n` for 3-element `A`, `B` given `B` as a bitset.
fn sumset_size(n: usize, a: &[usize; 3], b: &Cyclic, b_members: &[usize; 3]) -> u32 {
    match b {
        Cyclic::Small(bits) => {
            let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
            let rot = |s: usize| {
                if s == 0 {
                    *bits
                } else {
                    ((bits << s) | (bits >> (n - s))) & full
                }
            };
            (rot(a[0]) | rot(a[1]) | rot(a[2])).count_ones()
        }
        Cyclic::Large => {
            let mut sums: Vec<usize> = a.iter().flat_map(|x| b_members.iter().map(move |y| (x + y) % n)).collect();
            sums.sort_unstable();
            sums.dedup();
            sums.len() as u32
        }
    }
}

fn triples(n: usize, first: usize) -> impl Iterator<Item = [usize; 3]> {
    (first + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [first, b, c]))
}

/// Number of partitions [`combination_projective_partial`] splits into.
pub fn combination_partitions(q: u64) -> usize {
    (q as usize).saturating_sub(1)
}

/// Projective count restricted to `alpha` sets whose smallest discrete log
/// is `first`. Partials over `0..q-1` sum to the projective count.
///
/// Columns `(1, a_i, 0)`, `(0, 1, b_j)`, `(c_k, 0, 1)` with distinct nonzero
/// entries within each group; a receiver meeting all three groups needs
/// `1 + a_i b_j c_k != 0`, so each `c_k` avoids a set the size of
/// `{a_i b_j}`. In discrete logs that is the cyclic sumset of the two log
/// sets.
pub fn combination_projective_partial(q: u64, first: usize) -> BigUint {
    let n = (q - 1) as usize;
    if n < 3 || first >= n {
        return BigUint::zero();
    }
    let betas: Vec<([usize; 3], Cyclic)> = (0..n).flat_map(|f| triples(n, f)).map(|b| (b, set_from(n, &b))).collect();
    let mut total: u128 = 0;
    for a in triples(n, first) {
        for (bm, bs) in &betas {
            let t = (n as u32).saturating_sub(sumset_size(n, &a, bs, bm)) as u128;
            if t >= 3 {
                total += t * (t - 1) * (t - 2);
            }
        }
    }
    // Ordered alpha and beta triples.
    BigUint::from(total) * BigUint::from(36u32)
}

/// Labelings of the combination network under `mode`.
pub fn combination_count(f: &FiniteField, mode: NormalizationMode) -> BigUint {
    let q = f.q() as u64;
    let p: BigUint = (0..combination_partitions(q)).map(|i| combination_projective_partial(q, i)).sum();
    combination_scale(q, p, mode)
}

/// Converts a projective combination count to `mode`.
pub fn combination_scale(q: u64, projective: BigUint, mode: NormalizationMode) -> BigUint {
    let si = || &projective * BigUint::from(q - 1).pow(9);
    match mode {
        NormalizationMode::Projective => projective.clone(),
        NormalizationMode::SourceIdentity => si(),
        NormalizationMode::Raw => si() * gl_order(q, 3),
    }
}

/// Whether the Fano constraint system has a labeling over `f`.
pub fn fano_achievability(f: &FiniteField) -> bool {
    exists_labeling(&builtin::fano_system(), f).is_some()
}

/// Brute force over all `(a, b, c)` in `(F_q^*)^9`, checking every receiver
/// determinant. For small `q` only.
pub fn combination_brute_force(f: &FiniteField) -> BigUint {
    use crate::field::Matrix;
    let q = f.q();
    let units: Vec<u32> = (1..q).collect();
    let k = units.len();
    let g = builtin::combination_code_graph();
    let receivers: Vec<Vec<usize>> = g.receivers().iter().map(|r| g.labeled(r)).collect();
    let mut count = 0u64;
    let total = (k as u64).pow(9);
    for code in 0..total {
        let mut x = code;
        let mut v = [0u32; 9];
        for s in v.iter_mut() {
            *s = units[(x % k as u64) as usize];
            x /= k as u64;
        }
        let cols: Vec<[u32; 3]> = (0..9)
            .map(|i| match i / 3 {
                0 => [1, v[i], 0],
                1 => [0, 1, v[i]],
                _ => [v[i], 0, 1],
            })
            .collect();
        let ok = receivers.iter().all(|r| {
            let refs: Vec<&[u32]> = r.iter().map(|&c| &cols[c - 3][..]).collect();
            Matrix::from_columns(f, 3, &refs).unwrap().rank() == 3
        });
        count += ok as u64;
    }
    BigUint::from(count)
}

/// `BigRational` coefficient as an integer if it is one.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{count_labelings, extract_constraints};
    use num_traits::One;

    fn profile(f: impl Fn(u64) -> u64, qs: &[u64]) -> CountProfile {
        CountProfile::new(qs.iter().map(|&q| (q, BigUint::from(f(q)))).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect()
    }

    #[test]
    fn butterfly_polynomial() {
        let p = profile(|q| (q - 1).pow(4) * (q + 1) * q, &[2, 3, 4, 5, 7, 8, 9, 11]);
        // (q-1)^4 (q+1) q = q^6 - 3q^5 + 2q^4 + 2q^3 - 3q^2 + q
        assert_eq!(fit_polynomial(&p, 6).unwrap(), FitOutcome::Fits(ints(&[0, 1, -3, 2, 2, -3, 1])));
    }

    #[test]
    fn interpolation_reproduces_nodes() {
        let pts: Vec<(u64, BigUint)> =
            [(2u64, 7u64), (3, 0), (4, 123456789), (5, 1)].iter().map(|&(q, c)| (q, BigUint::from(c))).collect();
        let c = interpolate(&pts);
        for (q, v) in &pts {
            assert_eq!(evaluate(&c, *q), rational(v));
        }
    }

    #[test]
    fn four_source_polynomial() {
        let cs = extract_constraints(&builtin::four_source_code_graph());
        let qs = [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16];
        let pts = qs
            .iter()
            .map(|&q| {
                let f = FiniteField::of_order(q).unwrap();
                (q, count_labelings(&cs, &f, NormalizationMode::SourceIdentity).unwrap())
            })
            .collect();
        let p = CountProfile::new(pts).unwrap();
        // (q-1)^8
        let binom = [1i64, -8, 28, -56, 70, -56, 28, -8, 1];
        assert_eq!(fit_polynomial(&p, 8).unwrap(), FitOutcome::Fits(ints(&binom)));
        assert!(matches!(fit_polynomial(&p, 7).unwrap(), FitOutcome::Mismatch { q: 13, .. }));
    }

    #[test]
    fn constant_profile() {
        let p = profile(|_| 1, &[2, 3]);
        assert_eq!(fit_polynomial(&p, 0).unwrap(), FitOutcome::Fits(ints(&[1])));
    }

    #[test]
    fn insufficient_points() {
        let p = profile(|_| 1, &[2, 3]);
        assert_eq!(fit_polynomial(&p, 1), Err(FitError::InsufficientPoints { needed: 3, found: 2 }));
    }

    #[test]
    fn mismatch_reports_first_bad_point() {
        let p = profile(|q| q * q, &[2, 3, 4, 5]);
        match fit_polynomial(&p, 1).unwrap() {
            FitOutcome::Mismatch { q, predicted, actual } => {
                assert_eq!(q, 4);
                assert_eq!(predicted, rational_u64(14));
                assert_eq!(actual, BigUint::from(16u32));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn profile_validation() {
        assert_eq!(CountProfile::new(vec![(6, BigUint::one())]), Err(ProfileError::NotPrimePower(6)));
        assert_eq!(
            CountProfile::new(vec![(3, BigUint::one()), (2, BigUint::one())]),
            Err(ProfileError::NotAscending(2))
        );
    }

    #[test]
    fn combination_small_fields() {
        for q in [2u64, 3] {
            let f = FiniteField::of_order(q).unwrap();
            assert!(combination_count(&f, NormalizationMode::Raw).is_zero());
        }
        let f = FiniteField::of_order(5).unwrap();
        assert_eq!(combination_count(&f, NormalizationMode::Projective), combination_brute_force(&f));
    }

    #[test]
    fn combination_matches_generic_counter() {
        let cs = extract_constraints(&builtin::combination_code_graph());
        for q in [4u64, 5] {
            let f = FiniteField::of_order(q).unwrap();
            for mode in [NormalizationMode::Projective, NormalizationMode::Raw] {
                assert_eq!(combination_count(&f, mode), count_labelings(&cs, &f, mode).unwrap(), "q={q}");
            }
        }
    }

    #[test]
    fn fano_needs_characteristic_two() {
        for q in [2u64, 3, 4, 7, 8] {
            let f = FiniteField::of_order(q).unwrap();
            assert_eq!(fano_achievability(&f), q % 2 == 0, "q={q}");
        }
    }
}
