//! Arithmetic in GF(p^k).
//!
//! An element is stored as a `u32` code `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! holding its coefficients over GF(p) in the polynomial basis. Products go
//! through log/exp tables built once from a primitive element.

mod matrix;

pub use matrix::{Matrix, MatrixError};

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    ZeroDegree,
    TooLarge { p: u64, k: u32 },
    NotPrimePower(u64),
    BadSpec(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::ZeroDegree => write!(f, "extension degree must be at least 1"),
            FieldError::TooLarge { p, k } => write!(f, "{p}^{k} exceeds the supported order {MAX_ORDER}"),
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::BadSpec(s) => write!(f, "cannot parse field {s:?}; expected \"q\" or \"p^k\""),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Prime powers in `[lo, hi]`, ascending.
pub fn prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|q| prime_power(*q).is_some()).collect()
}

/// `|GL_m(q)| = prod_{i<m} (q^m - q^i)`.
pub fn gl_order(q: u64, m: usize) -> BigUint {
    let q = BigUint::from(q);
    let qm = q.pow(m as u32);
    (0..m).fold(BigUint::from(1u32), |acc, i| acc * (&qm - q.pow(i as u32)))
}

// Dense polynomials over GF(p), low degree first.
fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_pow(m[dm], p - 2, p);
    while let Some(&top) = r.last() {
        if r.len() <= dm {
            break;
        }
        if top == 0 {
            r.pop();
            continue;
        }
        let shift = r.len() - 1 - dm;
        let c = top * lead_inv % p;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mi % p) % p;
        }
        r.pop();
    }
    poly_trim(r)
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn digits(mut code: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, c| acc * p + c)
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=k/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k <= 1 {
        return k == 1;
    }
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = digits(low, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `k` over GF(p), comparing
/// coefficients from the top down. Degree 1 gives `x`.
pub fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    for low in 0..p.pow(k) {
        if low % p == 0 {
            continue;
        }
        let mut f = digits(low, p, k);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

pub fn make_field(p: u64, k: u32) -> Result<FiniteField, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    match p.checked_pow(k) {
        Some(q) if q <= MAX_ORDER => {}
        _ => return Err(FieldError::TooLarge { p, k }),
    }
    let modulus = smallest_irreducible(p, k);
    Ok(FiniteField::with_modulus(p, k, modulus))
}

impl FiniteField {
    fn with_modulus(p: u64, k: u32, modulus: Vec<u64>) -> Self {
        let q = p.pow(k);
        let mul_slow = |a: u64, b: u64| -> u64 {
            if k == 1 {
                return a * b % p;
            }
            let (da, db) = (digits(a, p, k), digits(b, p, k));
            let mut prod = vec![0u64; 2 * k as usize - 1];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(k as usize, 0);
            undigits(&r, p)
        };
        let order = q - 1;
        let pow_slow = |b: u64, mut e: u64| {
            let (mut b, mut r) = (b, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    r = mul_slow(r, b);
                }
                b = mul_slow(b, b);
                e >>= 1;
            }
            r
        };
        let factors: Vec<u64> = (2..=order).filter(|d| order.is_multiple_of(*d) && is_prime(*d)).collect();
        let g = (1..q)
            .find(|&g| factors.iter().all(|r| pow_slow(g, order / r) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for e in exp.iter_mut().take(order as usize) {
            *e = x as u32;
            x = mul_slow(x, g);
        }
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
            log[exp[i] as usize] = i as u32;
        }
        FiniteField { p: p as u32, k, q: q as u32, modulus, exp, log }
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<FiniteField, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        make_field(p, k)
    }

    /// Parses `"q"` or `"p^k"`.
    pub fn from_spec(spec: &str) -> Result<FiniteField, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let spec = spec.trim();
        match spec.split_once('^') {
            Some((p, k)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                let k = k.trim().parse().map_err(|_| bad())?;
                make_field(p, k)
            }
            None => FiniteField::of_order(spec.parse().map_err(|_| bad())?),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn coefficients(&self, a: u32) -> Vec<u64> {
        digits(a as u64, self.p as u64, self.k)
    }

    pub fn from_coefficients(&self, c: &[u64]) -> u32 {
        let p = self.p as u64;
        let mut d: Vec<u64> = c.iter().map(|x| x % p).collect();
        d.resize(self.k as usize, 0);
        undigits(&d, p) as u32
    }

    /// Every element code, `0..q`.
    pub fn codes(&self) -> core::ops::Range<u32> {
        0..self.q
    }

    pub fn element(&self, code: u32) -> FieldElement<'_> {
        assert!(code < self.q, "code {code} outside GF({})", self.q);
        FieldElement { field: self, code }
    }

    pub fn zero(&self) -> FieldElement<'_> {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement<'_> {
        self.element(1)
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> u32 {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let p = self.p;
            let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
            while a > 0 || b > 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            a
        } else if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let p = self.p;
            let (mut a, mut out, mut place) = (a, 0, 1);
            while a > 0 {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut r) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        r
    }
}

/// An element tied to its field, with operator overloads.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f FiniteField,
    code: u32,
}

impl<'f> FieldElement<'f> {
    pub fn code(self) -> u32 {
        self.code
    }

    pub fn field(self) -> &'f FiniteField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }

    pub fn inverse(self) -> Option<Self> {
        self.field.inv(self.code).map(|c| self.field.element(c))
    }

    pub fn pow(self, e: u64) -> Self {
        self.field.element(self.field.pow(self.code, e))
    }

    fn same_field(self, other: Self) {
        debug_assert!(
            core::ptr::eq(self.field, other.field) || self.field == other.field,
            "elements of different fields"
        );
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.field.q == other.field.q
    }
}

impl Eq for FieldElement<'_> {}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl<'f> Add for FieldElement<'f> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.same_field(o);
        self.field.element(self.field.add(self.code, o.code))
    }
}

impl<'f> Sub for FieldElement<'f> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.same_field(o);
        self.field.element(self.field.sub(self.code, o.code))
    }
}

impl<'f> Mul for FieldElement<'f> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.same_field(o);
        self.field.element(self.field.mul(self.code, o.code))
    }
}

impl<'f> Div for FieldElement<'f> {
    type Output = Self;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self.same_field(o);
        self * o.inverse().expect("division by zero")
    }
}

impl<'f> Neg for FieldElement<'f> {
    type Output = Self;
    fn neg(self) -> Self {
        self.field.element(self.field.neg(self.code))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_modulus() {
        let f = make_field(2, 3).unwrap();
        assert_eq!(f.modulus(), [1, 1, 0, 1]);
        assert_eq!(f.q(), 8);
    }

    #[test]
    fn prime_field() {
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.add(4, 5), 2);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.neg(2), 5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1), Err(FieldError::NotPrime(4)));
        assert!(matches!(make_field(2, 21), Err(FieldError::TooLarge { .. })));
        assert!(matches!(make_field(3, 0), Err(FieldError::ZeroDegree)));
        assert_eq!(FiniteField::of_order(6), Err(FieldError::NotPrimePower(6)));
        assert!(matches!(FiniteField::from_spec("x"), Err(FieldError::BadSpec(_))));
    }

    #[test]
    fn spec_strings() {
        assert_eq!(FiniteField::from_spec("3^2").unwrap().q(), 9);
        assert_eq!(FiniteField::from_spec("16").unwrap().k(), 4);
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_powers(2, 17), [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17]);
    }

    #[test]
    fn gf4_tables() {
        let f = make_field(2, 2).unwrap();
        // x^2 + x + 1: x * x = x + 1.
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        let a = f.element(2);
        assert_eq!(a * a * a, f.one());
        assert_eq!(a / a, f.one());
    }

    #[test]
    fn gf9_arithmetic() {
        let f = make_field(3, 2).unwrap();
        assert!(is_irreducible(f.modulus(), 3));
        for a in f.codes() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn general_linear_group_order() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(3, 2), BigUint::from(48u32));
        assert_eq!(gl_order(2, 3), BigUint::from(168u32));
    }

    #[test]
    fn largest_field_builds() {
        let f = make_field(2, 20).unwrap();
        let g = f.primitive();
        assert_eq!(f.pow(g, (1 << 20) - 1), 1);
    }
}
