//! Arbitrary-precision rationals and exact cyclotomic-field arithmetic.
//!
//! Every series coefficient in this crate is a [`CycloElem`]: an element of
//! the cyclotomic field of some order `L`, stored in the power basis
//! `1, zeta, ..., zeta^(phi(L)-1)` after reduction modulo the `L`-th
//! cyclotomic polynomial. Reduction modulo `Phi_L` (rather than `x^L - 1`)
//! makes equality coordinatewise for the evaluation `zeta_L = e^(2 pi i/L)`.
//!
//! Mixed-order arithmetic between two non-rational elements is an error;
//! callers embed both into the lcm order explicitly via [`CycloElem::embed`].
//! A rational operand is embedded automatically.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// `n` as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::BadInput(format!("bad rational `{s}`")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::BadInput(format!("bad rational `{s}`")))?;
    if d.is_zero() {
        return Err(Error::BadInput(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `p/q` (always with an explicit denominator).
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

// ---------------------------------------------------------------------------
// Integer polynomial helpers (ascending coefficient order).
// ---------------------------------------------------------------------------

fn poly_trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials; panics if the division is inexact.
/// Only used internally where divisibility is guaranteed.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dl = den.len();
    assert!(dl > 0, "division by zero polynomial");
    let lead = den[dl - 1].clone();
    let mut quo = vec![BigInt::zero(); rem.len().saturating_sub(dl) + 1];
    while rem.len() >= dl {
        let k = rem.len() - dl;
        let (q, r) = rem.last().unwrap().div_rem(&lead);
        assert!(r.is_zero(), "inexact polynomial division");
        for (i, c) in den.iter().enumerate() {
            let sub = c * &q;
            rem[k + i] -= sub;
        }
        quo[k] = q;
        poly_trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    assert!(rem.is_empty(), "nonzero remainder in exact division");
    poly_trim(&mut quo);
    quo
}

/// The `L`-th cyclotomic polynomial, integer coefficients in ascending order.
///
/// Computed as `(x^L - 1) / prod_(d|L, d<L) Phi_d(x)`; degree `phi(L)`.
pub fn cyclotomic_polynomial(l: u64) -> Vec<BigInt> {
    assert!(l >= 1);
    let mut cache: Vec<Option<Vec<BigInt>>> = vec![None; (l + 1) as usize];
    for m in 1..=l {
        if l % m != 0 {
            continue;
        }
        // x^m - 1
        let mut num = vec![BigInt::zero(); (m + 1) as usize];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut den = vec![BigInt::one()];
        for d in divisors(m) {
            if d < m {
                den = poly_mul_int(&den, cache[d as usize].as_ref().unwrap());
            }
        }
        let phi_m = poly_div_exact_int(&num, &den);
        cache[m as usize] = Some(phi_m);
    }
    let out = cache[l as usize].take().unwrap();
    debug_assert_eq!(out.len() as u64 - 1, euler_phi(l));
    out
}

// ---------------------------------------------------------------------------
// CycloElem
// ---------------------------------------------------------------------------

/// An exact element of the cyclotomic field of order `L`.
///
/// `coords` has length exactly `phi(L)` and holds the coordinates in the
/// power basis after canonical reduction modulo `Phi_L`.
#[derive(Debug, Clone)]
pub struct CycloElem {
    order: u64,
    coords: Vec<Rat>,
}

impl CycloElem {
    /// Zero in the field of order `l`.
    pub fn zero(l: u64) -> Self {
        CycloElem {
            order: l,
            coords: vec![Rat::zero(); euler_phi(l) as usize],
        }
    }

    /// One in the field of order `l`.
    pub fn one(l: u64) -> Self {
        Self::from_rat_in_order(Rat::one(), l)
    }

    /// A rational embedded in the field of order `l`.
    pub fn from_rat_in_order(r: Rat, l: u64) -> Self {
        let mut coords = vec![Rat::zero(); euler_phi(l) as usize];
        coords[0] = r;
        CycloElem { order: l, coords }
    }

    /// A rational as an order-1 element.
    pub fn from_rat(r: Rat) -> Self {
        Self::from_rat_in_order(r, 1)
    }

    /// `zeta_L^k`, reduced to the canonical basis.
    pub fn root_of_unity(l: u64, k: i64) -> Self {
        let k = k.rem_euclid(l as i64) as usize;
        let mut poly = vec![Rat::zero(); k + 1];
        poly[k] = Rat::one();
        Self::from_poly(l, poly)
    }

    /// Builds an element from an arbitrary-degree polynomial in `zeta_L`.
    pub fn from_poly(l: u64, poly: Vec<Rat>) -> Self {
        let phi = cyclotomic_rat(l);
        let red = poly_rem_rat(poly, &phi);
        let mut coords = red;
        coords.resize(euler_phi(l) as usize, Rat::zero());
        CycloElem { order: l, coords }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Returns the rational value iff this element lies in the rational
    /// subfield. The decision is exact: after canonical reduction the element
    /// is rational iff all higher coordinates vanish.
    pub fn try_rational(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// Same complex value represented in the field of order `target`,
    /// which must be a multiple of the current order.
    pub fn embed(&self, target: u64) -> Result<CycloElem> {
        if target % self.order != 0 {
            return Err(Error::BadEmbedding {
                have: self.order,
                target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let stride = (target / self.order) as usize;
        let mut poly = vec![Rat::zero(); (self.coords.len() - 1) * stride + 1];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * stride] = c.clone();
        }
        Ok(Self::from_poly(target, poly))
    }

    fn binop(&self, other: &CycloElem, f: impl Fn(&Rat, &Rat) -> Rat, is_mul: bool) -> Result<CycloElem> {
        let (a, b) = align_orders(self, other)?;
        if is_mul {
            let prod = poly_mul_rat(&a.coords, &b.coords);
            Ok(CycloElem::from_poly(a.order, prod))
        } else {
            let coords = a
                .coords
                .iter()
                .zip(b.coords.iter())
                .map(|(x, y)| f(x, y))
                .collect();
            Ok(CycloElem {
                order: a.order,
                coords,
            })
        }
    }

    pub fn add(&self, other: &CycloElem) -> Result<CycloElem> {
        self.binop(other, |x, y| x + y, false)
    }

    pub fn sub(&self, other: &CycloElem) -> Result<CycloElem> {
        self.binop(other, |x, y| x - y, false)
    }

    pub fn mul(&self, other: &CycloElem) -> Result<CycloElem> {
        self.binop(other, |_, _| unreachable!(), true)
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            order: self.order,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> CycloElem {
        CycloElem {
            order: self.order,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in
    /// `Q[x] / Phi_L`.
    pub fn inverse(&self) -> Result<CycloElem> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        if let Some(r) = self.try_rational() {
            return Ok(Self::from_rat_in_order(r.recip(), self.order));
        }
        let phi = cyclotomic_rat(self.order);
        let mut a = self.coords.clone();
        trim_rat(&mut a);
        // Bezout: u*a + v*phi = gcd = nonzero constant (Phi_L is irreducible).
        let (g, u) = ext_gcd_first(&a, &phi);
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].clone().recip();
        let inv_poly: Vec<Rat> = u.iter().map(|c| c * &ginv).collect();
        Ok(CycloElem::from_poly(self.order, inv_poly))
    }

    pub fn pow(&self, mut e: u64) -> Result<CycloElem> {
        let mut base = self.clone();
        let mut acc = CycloElem::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// True iff this element is a root of unity. The roots of unity in
    /// `Q(zeta_L)` form a cyclic group of order `lcm(2, L)`.
    pub fn is_root_of_unity(&self) -> bool {
        let m = self.order.lcm(&2);
        match self.pow(m) {
            Ok(p) => p.try_rational().is_some_and(|r| r.is_one()),
            Err(_) => false,
        }
    }

    /// Approximate complex value under `zeta_L = e^(2 pi i / L)`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        use std::f64::consts::TAU;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = TAU * (k as f64) / (self.order as f64);
            acc += num_complex::Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

impl PartialEq for CycloElem {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coords == other.coords;
        }
        // Semantic equality across orders: compare in the lcm field.
        let l = self.order.lcm(&other.order);
        match (self.embed(l), other.embed(l)) {
            (Ok(a), Ok(b)) => a.coords == b.coords,
            _ => false,
        }
    }
}

impl Eq for CycloElem {}

impl std::fmt::Display for CycloElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(r) = self.try_rational() {
            write!(f, "{}", format_rat(&r))
        } else {
            let body: Vec<String> = self.coords.iter().map(format_rat).collect();
            write!(f, "[{};order={}]", body.join(","), self.order)
        }
    }
}

/// Brings two elements into a common order: equal orders pass through, a
/// rational operand is lifted, and anything else is an error.
fn align_orders(a: &CycloElem, b: &CycloElem) -> Result<(CycloElem, CycloElem)> {
    if a.order == b.order {
        return Ok((a.clone(), b.clone()));
    }
    if let Some(r) = a.try_rational() {
        return Ok((CycloElem::from_rat_in_order(r, b.order), b.clone()));
    }
    if let Some(r) = b.try_rational() {
        return Ok((a.clone(), CycloElem::from_rat_in_order(r, a.order)));
    }
    Err(Error::OrderMismatch(a.order, b.order))
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers (internal).
// ---------------------------------------------------------------------------

fn cyclotomic_rat(l: u64) -> Vec<Rat> {
    cyclotomic_polynomial(l)
        .into_iter()
        .map(Rat::from_integer)
        .collect()
}

fn trim_rat(p: &mut Vec<Rat>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul_rat(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_rem_rat(mut rem: Vec<Rat>, den: &[Rat]) -> Vec<Rat> {
    trim_rat(&mut rem);
    let dl = den.len();
    let lead = den[dl - 1].clone();
    while rem.len() >= dl {
        let k = rem.len() - dl;
        let q = rem.last().unwrap() / &lead;
        for (i, c) in den.iter().enumerate() {
            let sub = c * &q;
            rem[k + i] -= sub;
        }
        trim_rat(&mut rem);
    }
    rem
}

/// Extended gcd returning `(g, u)` with `u*a = g mod b`, `g` a trimmed
/// constant when `gcd(a, b) = 1`.
fn ext_gcd_first(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut u0, mut u1) = (vec![Rat::one()], Vec::new());
    trim_rat(&mut r0);
    trim_rat(&mut r1);
    while !r1.is_empty() {
        let (q, r) = poly_divmod_rat(&r0, &r1);
        let qu1 = poly_mul_rat(&q, &u1);
        let mut unew = u0.clone();
        unew.resize(unew.len().max(qu1.len()), Rat::zero());
        for (i, c) in qu1.iter().enumerate() {
            unew[i] -= c;
        }
        trim_rat(&mut unew);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = unew;
    }
    (r0, u0)
}

fn poly_divmod_rat(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = num.to_vec();
    trim_rat(&mut rem);
    let mut den = den.to_vec();
    trim_rat(&mut den);
    let dl = den.len();
    let lead = den[dl - 1].clone();
    let mut quo = vec![Rat::zero(); rem.len().saturating_sub(dl) + 1];
    while rem.len() >= dl {
        let k = rem.len() - dl;
        let q = rem.last().unwrap() / &lead;
        for (i, c) in den.iter().enumerate() {
            let sub = c * &q;
            rem[k + i] -= sub;
        }
        quo[k] = q;
        trim_rat(&mut rem);
    }
    trim_rat(&mut quo);
    (quo, rem)
}
