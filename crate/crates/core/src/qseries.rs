//! Truncated Puiseux/Laurent series in `q` with exact cyclotomic coefficients,
//! Faber polynomials, and the internal `j - 744` expansion.
//!
//! A series carries a declared exponent denominator `N` (all exponents lie in
//! `(1/N) Z`), a truncation bound `trunc` (terms with exponent `>= trunc` are
//! unknown), and a sparse exponent-to-coefficient map. Truncation is tracked
//! pessimistically through every operation: nothing ever reads a coefficient
//! at or beyond `trunc`, so agreement reported downstream is agreement that
//! was actually computed.

use crate::error::{Error, Result};
use crate::exact_arith::{rat_int, CycloElem, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Truncated series in `q^(1/N)` with [`CycloElem`] coefficients.
#[derive(Debug, Clone)]
pub struct PuiseuxSeries {
    denom: u64,
    cyclo_order: u64,
    trunc: Rat,
    terms: BTreeMap<Rat, CycloElem>,
}

impl PuiseuxSeries {
    /// The zero series known up to `O(q^trunc)`.
    pub fn zero(trunc: Rat) -> Self {
        PuiseuxSeries {
            denom: 1,
            cyclo_order: 1,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// A constant series.
    pub fn constant(c: CycloElem, trunc: Rat) -> Self {
        let mut s = PuiseuxSeries {
            denom: 1,
            cyclo_order: c.order(),
            trunc,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() && !s.trunc.is_positive() {
            // constant term unknown below trunc 0; keep empty
            return s;
        }
        if !c.is_zero() {
            s.terms.insert(Rat::zero(), c);
        }
        s
    }

    pub fn rational_constant(r: Rat, trunc: Rat) -> Self {
        Self::constant(CycloElem::from_rat(r), trunc)
    }

    /// `c * q^exp` known up to `O(q^trunc)`.
    pub fn monomial(exp: Rat, c: CycloElem, trunc: Rat) -> Self {
        let mut s = PuiseuxSeries {
            denom: exp.denom().to_u64().expect("exponent denominator fits u64"),
            cyclo_order: c.order(),
            trunc,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() && exp < s.trunc {
            s.terms.insert(exp, c);
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs.
    pub fn from_terms<I>(terms: I, trunc: Rat) -> Result<Self>
    where
        I: IntoIterator<Item = (Rat, CycloElem)>,
    {
        let mut denom: u64 = 1;
        let mut order: u64 = 1;
        let mut map: BTreeMap<Rat, CycloElem> = BTreeMap::new();
        for (e, c) in terms {
            if e >= trunc {
                continue;
            }
            if c.is_zero() {
                continue;
            }
            let ed = e.denom().to_u64().ok_or_else(|| {
                Error::SeriesPrecondition("exponent denominator too large".into())
            })?;
            denom = denom.lcm(&ed);
            order = order.lcm(&c.order());
            match map.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add(&c)?;
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        let mut s = PuiseuxSeries {
            denom,
            cyclo_order: order,
            trunc,
            terms: map,
        };
        s.normalize_order()?;
        Ok(s)
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn cyclo_order(&self) -> u64 {
        self.cyclo_order
    }

    pub fn trunc(&self) -> &Rat {
        &self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &CycloElem)> {
        self.terms.iter()
    }

    /// Coefficient at `exp`; `None` when the exponent is at or beyond the
    /// truncation bound (i.e. genuinely unknown).
    pub fn coeff(&self, exp: &Rat) -> Option<CycloElem> {
        if *exp >= self.trunc {
            return None;
        }
        Some(
            self.terms
                .get(exp)
                .cloned()
                .unwrap_or_else(|| CycloElem::zero(self.cyclo_order)),
        )
    }

    pub fn coeff_int(&self, exp: i64) -> Option<CycloElem> {
        self.coeff(&rat_int(exp))
    }

    /// Lowest known exponent, or `trunc` for the zero series.
    pub fn valuation(&self) -> Rat {
        self.terms
            .keys()
            .next()
            .cloned()
            .unwrap_or_else(|| self.trunc.clone())
    }

    /// Restricts the truncation bound (never extends it).
    pub fn truncate_to(&self, new_trunc: &Rat) -> Self {
        let t = if *new_trunc < self.trunc {
            new_trunc.clone()
        } else {
            self.trunc.clone()
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| **e < t)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        PuiseuxSeries {
            denom: self.denom,
            cyclo_order: self.cyclo_order,
            trunc: t,
            terms,
        }
    }

    /// Raises all coefficients into the cyclotomic order `target`.
    pub fn embed_order(&self, target: u64) -> Result<Self> {
        if target == self.cyclo_order {
            return Ok(self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), c.embed(target)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(PuiseuxSeries {
            denom: self.denom,
            cyclo_order: target,
            trunc: self.trunc.clone(),
            terms,
        })
    }

    /// Shrinks `cyclo_order` to 1 when every coefficient is rational.
    fn normalize_order(&mut self) -> Result<()> {
        if self.cyclo_order == 1 {
            return Ok(());
        }
        if self.terms.values().all(|c| c.try_rational().is_some()) {
            let terms = std::mem::take(&mut self.terms);
            self.terms = terms
                .into_iter()
                .map(|(e, c)| (e, CycloElem::from_rat(c.try_rational().unwrap())))
                .collect();
            self.cyclo_order = 1;
        }
        Ok(())
    }

    fn lift_pair(&self, other: &Self) -> Result<(Self, Self)> {
        let order = self.cyclo_order.lcm(&other.cyclo_order);
        Ok((self.embed_order(order)?, other.embed_order(order)?))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.lift_pair(other)?;
        let t = a.trunc.clone().min(b.trunc.clone());
        a.trunc = t.clone();
        a.terms.retain(|e, _| *e < t);
        for (e, c) in b.terms {
            if e >= t {
                continue;
            }
            match a.terms.entry(e) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add(&c)?;
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        a.denom = a.denom.lcm(&b.denom);
        a.normalize_order()?;
        Ok(a)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            denom: self.denom,
            cyclo_order: self.cyclo_order,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &CycloElem) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero(self.trunc.clone()));
        }
        let order = self.cyclo_order.lcm(&c.order());
        let c = c.embed(order)?;
        let mut out = PuiseuxSeries {
            denom: self.denom,
            cyclo_order: order,
            trunc: self.trunc.clone(),
            terms: BTreeMap::new(),
        };
        for (e, v) in &self.terms {
            let p = v.embed(order)?.mul(&c)?;
            if !p.is_zero() {
                out.terms.insert(e.clone(), p);
            }
        }
        out.normalize_order()?;
        Ok(out)
    }

    pub fn scale_rat(&self, r: &Rat) -> Result<Self> {
        self.scale(&CycloElem::from_rat(r.clone()))
    }

    /// Exact product. The result truncation is
    /// `min(trunc_a + val_b, trunc_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.lift_pair(other)?;
        let t = (a.trunc.clone() + b.valuation()).min(b.trunc.clone() + a.valuation());
        let order = a.cyclo_order;
        let mut terms: BTreeMap<Rat, CycloElem> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea + eb;
                if e >= t {
                    continue;
                }
                let p = ca.mul(cb)?;
                match terms.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get().add(&p)?;
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        let mut out = PuiseuxSeries {
            denom: a.denom.lcm(&b.denom),
            cyclo_order: order,
            trunc: t,
            terms,
        };
        out.normalize_order()?;
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Result<Self> {
        // Repeated multiplication keeps the pessimistic truncation honest
        // (trunc decreases by |valuation| per factor for Laurent inputs).
        let mut acc = Self::constant(CycloElem::one(1), self.trunc.clone() - self.valuation());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit-up-to-monomial series.
    ///
    /// Writing `a = c0 q^v (1 + u)` with `val(u) > 0`, the inverse is
    /// accumulated from the geometric series in `u`; the result is known to
    /// `O(q^(trunc - 2v))`.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroSeries);
        }
        let v = self.valuation();
        let c0 = self.terms.values().next().unwrap().clone();
        let t_rel = self.trunc.clone() - v.clone(); // relative precision of (1 + u)
        if !t_rel.is_positive() {
            return Err(Error::InsufficientTruncation {
                needed: v.clone(),
                have: self.trunc.clone(),
            });
        }
        // u = a / (c0 q^v) - 1, known to O(q^t_rel)
        let c0_inv = c0.inverse()?;
        let mut u = self.scale(&c0_inv)?;
        let shifted: BTreeMap<Rat, CycloElem> = u
            .terms
            .iter()
            .map(|(e, c)| (e.clone() - v.clone(), c.clone()))
            .collect();
        u.terms = shifted;
        u.trunc = t_rel.clone();
        u.terms.remove(&Rat::zero());
        // geometric accumulation of 1/(1+u)
        let one = Self::constant(CycloElem::one(1), t_rel.clone());
        let mut acc = one.clone();
        let mut pw = one;
        if !u.is_zero() {
            let step = u.valuation();
            let mut reach = step.clone();
            while reach < t_rel {
                pw = pw.mul(&u.neg())?;
                pw.trunc = t_rel.clone();
                acc = acc.add(&pw)?;
                if pw.is_zero() {
                    break;
                }
                reach += step.clone();
            }
            acc.trunc = t_rel.clone();
        }
        // inverse = c0^-1 q^-v * acc, known to O(q^(t_rel - v))
        let mut out = acc.scale(&c0_inv)?;
        let final_trunc = t_rel - v.clone();
        let terms: BTreeMap<Rat, CycloElem> = out
            .terms
            .iter()
            .filter(|(e, _)| (*e).clone() - v.clone() < final_trunc)
            .map(|(e, c)| (e.clone() - v.clone(), c.clone()))
            .collect();
        out.terms = terms;
        out.trunc = final_trunc;
        out.denom = out.denom.lcm(&self.denom);
        Ok(out)
    }

    /// Exact Taylor exponential; requires strictly positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if !self.valuation().is_positive() {
            return Err(Error::SeriesPrecondition(
                "exp requires strictly positive valuation".into(),
            ));
        }
        let t = self.trunc.clone();
        let mut acc = Self::constant(CycloElem::one(1), t.clone());
        if self.is_zero() {
            return Ok(acc);
        }
        let step = self.valuation();
        let mut pw = Self::constant(CycloElem::one(1), t.clone());
        let mut k: u64 = 0;
        let mut reach = Rat::zero();
        let mut factorial = Rat::one();
        while reach < t {
            k += 1;
            factorial *= rat_int(k as i64);
            pw = pw.mul(self)?;
            pw.trunc = t.clone();
            pw.terms.retain(|e, _| *e < t);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw.scale_rat(&factorial.recip())?)?;
            reach += step.clone();
        }
        acc.trunc = t;
        Ok(acc)
    }

    /// Exact Taylor logarithm; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        let ok = self
            .coeff(&Rat::zero())
            .is_some_and(|c| c.try_rational().is_some_and(|r| r.is_one()))
            && self.valuation() >= Rat::zero();
        if !ok {
            return Err(Error::SeriesPrecondition(
                "log requires constant term 1".into(),
            ));
        }
        let t = self.trunc.clone();
        let mut u = self.clone();
        u.terms.remove(&Rat::zero());
        let mut acc = Self::zero(t.clone());
        if u.is_zero() {
            return Ok(acc);
        }
        let step = u.valuation();
        let mut pw = Self::constant(CycloElem::one(1), t.clone());
        let mut k: u64 = 0;
        let mut reach = Rat::zero();
        while reach < t {
            k += 1;
            pw = pw.mul(&u)?;
            pw.trunc = t.clone();
            pw.terms.retain(|e, _| *e < t);
            if pw.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&pw.scale_rat(&(rat_int(sign) / rat_int(k as i64)))?)?;
            reach += step.clone();
        }
        acc.trunc = t;
        Ok(acc)
    }

    /// Realizes `f(tau) -> f((a tau + b)/d)`.
    ///
    /// Each term `c q^r` maps to `c zeta_(dN)^(b r N) q^(r a/d)` where
    /// `N = denom(f)`, so that `q^r` evaluated at `(a tau + b)/d` equals
    /// `e^(2 pi i r (a tau + b)/d)`. The result truncation is `trunc * a/d`.
    pub fn substitute(&self, a: u64, b: u64, d: u64) -> Result<Self> {
        if b >= d {
            return Err(Error::BadSubstitution { b, d });
        }
        let n = self.denom;
        let dn = d * n;
        let scale = rat_int(a as i64) / rat_int(d as i64);
        let order = if b == 0 { self.cyclo_order } else { self.cyclo_order.lcm(&dn) };
        let mut terms: BTreeMap<Rat, CycloElem> = BTreeMap::new();
        for (e, c) in &self.terms {
            let new_e = e * &scale;
            let mut coeff = c.embed(order)?;
            if b != 0 {
                // b * r * N is integral since denom(r) | N
                let brn = (e * rat_int((b * n) as i64)).to_integer();
                let k = brn.mod_floor(&num_bigint::BigInt::from(dn)).to_i64().unwrap();
                let root = CycloElem::root_of_unity(dn, k).embed(order)?;
                coeff = coeff.mul(&root)?;
            }
            terms.insert(new_e, coeff);
        }
        let mut out = PuiseuxSeries {
            denom: dn,
            cyclo_order: order,
            trunc: self.trunc.clone() * scale,
            terms,
        };
        out.normalize_order()?;
        Ok(out)
    }

    /// `f(tau) -> f(tau + 1)`: each term `c q^r` picks up `e^(2 pi i r)`.
    pub fn shift_tau_by_one(&self) -> Result<Self> {
        let n = self.denom;
        let order = self.cyclo_order.lcm(&n);
        let mut terms: BTreeMap<Rat, CycloElem> = BTreeMap::new();
        for (e, c) in &self.terms {
            let rn = (e * rat_int(n as i64)).to_integer();
            let k = rn.mod_floor(&num_bigint::BigInt::from(n)).to_i64().unwrap();
            let root = CycloElem::root_of_unity(n, k).embed(order)?;
            let coeff = c.embed(order)?.mul(&root)?;
            terms.insert(e.clone(), coeff);
        }
        let mut out = PuiseuxSeries {
            denom: n,
            cyclo_order: order,
            trunc: self.trunc.clone(),
            terms,
        };
        out.normalize_order()?;
        Ok(out)
    }

    /// Divides every exponent by `k` (used when reading `f(k tau)` off a
    /// series supported on `k Z`). The truncation scales along.
    pub fn compress_exponents(&self, k: u64) -> Result<Self> {
        let kk = rat_int(k as i64);
        let mut terms = BTreeMap::new();
        let mut denom: u64 = 1;
        for (e, c) in &self.terms {
            let ne = e / &kk;
            denom = denom.lcm(&ne.denom().to_u64().unwrap());
            terms.insert(ne, c.clone());
        }
        Ok(PuiseuxSeries {
            denom,
            cyclo_order: self.cyclo_order,
            trunc: self.trunc.clone() / kk,
            terms,
        })
    }

    /// True iff all coefficients are rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.try_rational().is_some())
    }

    /// Equality of the known parts up to a common bound.
    pub fn eq_up_to(&self, other: &Self, bound: &Rat) -> bool {
        let a = self.truncate_to(bound);
        let b = other.truncate_to(bound);
        a.terms.len() == b.terms.len()
            && a.terms
                .iter()
                .zip(b.terms.iter())
                .all(|((ea, ca), (eb, cb))| ea == eb && ca == cb)
    }

    /// Numeric evaluation at a complex `tau` via `q^r = e^(2 pi i r tau)`.
    pub fn eval_complex(&self, tau: num_complex::Complex64) -> num_complex::Complex64 {
        use std::f64::consts::TAU;
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let r = e.to_f64().unwrap();
            let expo = num_complex::Complex64::new(0.0, TAU * r) * tau;
            acc += c.to_complex() * expo.exp();
        }
        acc
    }
}

impl PartialEq for PuiseuxSeries {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.eq_up_to(other, &self.trunc)
    }
}

impl Eq for PuiseuxSeries {}

impl std::fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^{})", self.trunc);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({})q^{}", c, e))
            .collect();
        write!(f, "{} + O(q^{})", parts.join(" + "), self.trunc)
    }
}

// ---------------------------------------------------------------------------
// Faber polynomials
// ---------------------------------------------------------------------------

/// The `n`-th Faber polynomial of a normalized series together with its
/// expansion `Phi_n(f) = q^-n + O(q)`.
#[derive(Debug, Clone)]
pub struct FaberResult {
    pub n: u64,
    /// Coefficients of `Phi_n` in ascending powers of `f` (length `n + 1`,
    /// leading coefficient 1).
    pub coefficients: Vec<Rat>,
    pub series: PuiseuxSeries,
}

fn check_normalized(f: &PuiseuxSeries) -> Result<()> {
    if !f.is_rational() {
        return Err(Error::NotNormalized("non-rational coefficient".into()));
    }
    let lead_ok = f
        .coeff_int(-1)
        .is_some_and(|c| c.try_rational().is_some_and(|r| r.is_one()));
    if !lead_ok {
        return Err(Error::NotNormalized("leading term is not q^-1".into()));
    }
    if f.valuation() != rat_int(-1) {
        return Err(Error::NotNormalized("terms below q^-1".into()));
    }
    let const_ok = f.coeff_int(0).is_some_and(|c| c.is_zero());
    if !const_ok {
        return Err(Error::NotNormalized("nonzero constant term".into()));
    }
    for (e, _) in f.terms() {
        if !e.is_integer() {
            return Err(Error::NotNormalized("non-integral exponent".into()));
        }
    }
    Ok(())
}

/// Computes `Phi_1(f), ..., Phi_n(f)` by leading-term elimination: start from
/// `f^n` and repeatedly cancel `q^-m` (0 < m < n) against `Phi_m(f)`, then
/// remove the constant term. The polynomial in `f` is recorded alongside.
pub fn faber_all(f: &PuiseuxSeries, n: u64) -> Result<Vec<FaberResult>> {
    check_normalized(f)?;
    if *f.trunc() < rat_int(n as i64 + 1) {
        return Err(Error::InsufficientTruncation {
            needed: rat_int(n as i64 + 1),
            have: f.trunc().clone(),
        });
    }
    let mut out: Vec<FaberResult> = Vec::with_capacity(n as usize);
    for m in 1..=n {
        let mut series = f.pow(m)?;
        let mut poly = vec![Rat::zero(); m as usize + 1];
        poly[m as usize] = Rat::one();
        for k in (1..m).rev() {
            let c = series
                .coeff_int(-(k as i64))
                .expect("coefficient within truncation")
                .try_rational()
                .expect("rational coefficient");
            if c.is_zero() {
                continue;
            }
            let prev = &out[(k - 1) as usize];
            series = series.sub(&prev.series.scale_rat(&c)?)?;
            for (i, pc) in prev.coefficients.iter().enumerate() {
                poly[i] -= pc * &c;
            }
        }
        let c0 = series
            .coeff_int(0)
            .expect("constant coefficient within truncation")
            .try_rational()
            .expect("rational coefficient");
        if !c0.is_zero() {
            series = series.sub(&PuiseuxSeries::rational_constant(c0.clone(), series.trunc().clone()))?;
            poly[0] -= c0;
        }
        out.push(FaberResult {
            n: m,
            coefficients: poly,
            series,
        });
    }
    Ok(out)
}

/// The `n`-th Faber polynomial of `f`.
pub fn faber(f: &PuiseuxSeries, n: u64) -> Result<FaberResult> {
    Ok(faber_all(f, n)?.pop().expect("n >= 1"))
}

// ---------------------------------------------------------------------------
// j - 744
// ---------------------------------------------------------------------------

/// The expansion of `j - 744` through `q^order`, built from
/// `E4(q) = 1 + 240 sum sigma_3(n) q^n`, `Delta = q prod (1 - q^n)^24`,
/// and `j = E4^3 / Delta`.
pub fn j_expansion(order: u64) -> PuiseuxSeries {
    let m = order as i64 + 2; // working order with slack for the division
    let t = rat_int(m + 1);

    // E4
    let mut e4_terms: Vec<(Rat, CycloElem)> = vec![(Rat::zero(), CycloElem::one(1))];
    for n in 1..=m {
        let mut s3: i64 = 0;
        for d in 1..=n {
            if n % d == 0 {
                s3 += d * d * d;
            }
        }
        e4_terms.push((rat_int(n), CycloElem::from_rat(rat_int(240 * s3))));
    }
    let e4 = PuiseuxSeries::from_terms(e4_terms, t.clone()).unwrap();

    // Delta = q * prod (1 - q^n)^24
    let mut delta = PuiseuxSeries::monomial(rat_int(1), CycloElem::one(1), t.clone() + rat_int(1));
    for n in 1..=m {
        let factor = PuiseuxSeries::from_terms(
            vec![
                (Rat::zero(), CycloElem::one(1)),
                (rat_int(n), CycloElem::from_rat(rat_int(-1))),
            ],
            t.clone() + rat_int(1),
        )
        .unwrap();
        let f24 = factor.pow(24).unwrap().truncate_to(&(t.clone() + rat_int(1)));
        delta = delta.mul(&f24).unwrap().truncate_to(&(t.clone() + rat_int(1)));
    }

    let e4_cubed = e4.pow(3).unwrap();
    let j = e4_cubed.mul(&delta.invert_unit().unwrap()).unwrap();
    let j744 = j
        .sub(&PuiseuxSeries::rational_constant(rat_int(744), j.trunc().clone()))
        .unwrap();
    j744.truncate_to(&rat_int(order as i64 + 1))
}
