//! Norton series: a q-series attached to every commuting-pair class of a
//! finite group, with equivariance checks, restriction/induction along group
//! homomorphisms, the averaged inner product, and twisted-support
//! validation.

use crate::cocycles::twist_data;
use crate::error::{Error, Result};
use crate::exact_arith::{rat_int, CycloElem, Rat};
use crate::finite_groups::{
    canonical_pair, pair_classes, sl2_act, CommutingPair, Group, Mat2, PairClass, SL2_T,
};
use crate::qseries::PuiseuxSeries;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Twist assignment for the cyclic subgroup generated by `g`: the cocycle
/// class `s` on `Z/|g|`. Elements without an entry are untwisted (`s = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistEntry {
    pub g: usize,
    pub s: i64,
}

/// A function from commuting-pair classes of a finite group to truncated
/// q-series. Values are constant on simultaneous-conjugacy classes by
/// construction.
#[derive(Debug, Clone)]
pub struct NortonSeries {
    group: Group,
    classes: Vec<PairClass>,
    values: Vec<PuiseuxSeries>,
    lookup: HashMap<(usize, usize), usize>,
    twist: Option<Vec<TwistEntry>>,
}

impl NortonSeries {
    /// Builds a series from one value per pair class (in the canonical class
    /// order of [`pair_classes`]).
    pub fn from_class_values(group: Group, values: Vec<PuiseuxSeries>) -> Result<Self> {
        let classes = pair_classes(&group);
        if classes.len() != values.len() {
            return Err(Error::BadInput(format!(
                "expected {} class values, got {}",
                classes.len(),
                values.len()
            )));
        }
        let lookup = build_lookup(&group, &classes);
        Ok(NortonSeries {
            group,
            classes,
            values,
            lookup,
            twist: None,
        })
    }

    /// The same series at every class.
    pub fn constant(group: Group, value: PuiseuxSeries) -> Self {
        let classes = pair_classes(&group);
        let values = vec![value; classes.len()];
        let lookup = build_lookup(&group, &classes);
        NortonSeries {
            group,
            classes,
            values,
            lookup,
            twist: None,
        }
    }

    /// Seeded random series with integral exponents and small rational
    /// coefficients, for reproducible verification fixtures.
    pub fn random(group: Group, seed: u64, val_min: i64, trunc: i64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let classes = pair_classes(&group);
        let values = classes
            .iter()
            .map(|_| {
                let mut terms = Vec::new();
                for e in val_min..trunc {
                    if rng.gen_bool(0.6) {
                        let num = loop {
                            let n: i64 = rng.gen_range(-9..=9);
                            if n != 0 {
                                break n;
                            }
                        };
                        let den: i64 = rng.gen_range(1..=3);
                        terms.push((
                            rat_int(e),
                            CycloElem::from_rat(crate::exact_arith::rat(num, den)),
                        ));
                    }
                }
                PuiseuxSeries::from_terms(terms, rat_int(trunc)).unwrap()
            })
            .collect();
        let lookup = build_lookup(&group, &classes);
        NortonSeries {
            group,
            classes,
            values,
            lookup,
            twist: None,
        }
    }

    pub fn with_twist(mut self, twist: Vec<TwistEntry>) -> Self {
        self.twist = Some(twist);
        self
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn classes(&self) -> &[PairClass] {
        &self.classes
    }

    pub fn values(&self) -> &[PuiseuxSeries] {
        &self.values
    }

    pub fn twist(&self) -> Option<&[TwistEntry]> {
        self.twist.as_deref()
    }

    pub fn class_index(&self, g: usize, h: usize) -> Result<usize> {
        if !self.group.commute(g, h) {
            return Err(Error::NonCommuting);
        }
        let key = canonical_pair(&self.group, g, h);
        Ok(*self.lookup.get(&key).expect("complete class table"))
    }

    /// Value at the class of `(g, h)`.
    pub fn evaluate(&self, g: usize, h: usize) -> Result<&PuiseuxSeries> {
        Ok(&self.values[self.class_index(g, h)?])
    }

    pub fn value_at_class(&self, idx: usize) -> &PuiseuxSeries {
        &self.values[idx]
    }

    /// Applies a per-class series transformation.
    pub fn map<F>(&self, mut f: F) -> Result<NortonSeries>
    where
        F: FnMut(&PuiseuxSeries) -> Result<PuiseuxSeries>,
    {
        let values = self
            .values
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        Ok(NortonSeries {
            group: self.group.clone(),
            classes: self.classes.clone(),
            values,
            lookup: self.lookup.clone(),
            twist: self.twist.clone(),
        })
    }

    fn zip_with<F>(&self, other: &NortonSeries, mut f: F) -> Result<NortonSeries>
    where
        F: FnMut(&PuiseuxSeries, &PuiseuxSeries) -> Result<PuiseuxSeries>,
    {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(NortonSeries {
            group: self.group.clone(),
            classes: self.classes.clone(),
            values,
            lookup: self.lookup.clone(),
            twist: None,
        })
    }

    pub fn add(&self, other: &NortonSeries) -> Result<NortonSeries> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &NortonSeries) -> Result<NortonSeries> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    /// Pointwise (per-class) product; the internal tensor product of
    /// sections.
    pub fn pointwise_mul(&self, other: &NortonSeries) -> Result<NortonSeries> {
        self.zip_with(other, |a, b| a.mul(b))
    }

    pub fn scale_rat(&self, r: &Rat) -> Result<NortonSeries> {
        self.map(|s| s.scale_rat(r))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Minimum truncation across classes.
    pub fn min_trunc(&self) -> Rat {
        self.values
            .iter()
            .map(|v| v.trunc().clone())
            .min()
            .expect("at least one class")
    }

    pub fn eq_up_to(&self, other: &NortonSeries, bound: &Rat) -> bool {
        self.group == other.group
            && self
                .values
                .iter()
                .zip(other.values.iter())
                .all(|(a, b)| a.eq_up_to(b, bound))
    }
}

fn build_lookup(group: &Group, classes: &[PairClass]) -> HashMap<(usize, usize), usize> {
    let rep_index: HashMap<(usize, usize), usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.representative.g, c.representative.h), i))
        .collect();
    let mut lookup = HashMap::new();
    for g in group.elements() {
        for h in group.elements() {
            if group.commute(g, h) {
                let key = canonical_pair(group, g, h);
                lookup.insert(key, rep_index[&key]);
            }
        }
    }
    lookup
}

// ---------------------------------------------------------------------------
// T-equivariance
// ---------------------------------------------------------------------------

/// Per-class outcome of the symbolic `T`-coherence check.
#[derive(Debug, Clone)]
pub struct TEquivEntry {
    pub class: PairClass,
    /// The single root-of-unity scalar relating `f(g, gh; tau)` to
    /// `f(g, h; tau + 1)`, when one exists.
    pub scalar: Option<CycloElem>,
    pub coherent: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct TEquivReport {
    pub entries: Vec<TEquivEntry>,
    pub all_coherent: bool,
}

/// For every class compares `f(g, gh)` against the substitution
/// `tau -> tau + 1` of `f(g, h)` and reports whether they agree up to a
/// single root-of-unity scalar, and which scalar.
pub fn check_t_equivariance(f: &NortonSeries) -> TEquivReport {
    let mut entries = Vec::new();
    for class in f.classes() {
        let (g, h) = (class.representative.g, class.representative.h);
        let target = sl2_act(&f.group, CommutingPair { g, h }, &SL2_T).expect("det 1");
        let lhs = f.evaluate(target.g, target.h).expect("commuting");
        let rhs = f
            .evaluate(g, h)
            .expect("commuting")
            .shift_tau_by_one()
            .expect("shift");
        let bound = lhs.trunc().clone().min(rhs.trunc().clone());
        let lhs_t = lhs.truncate_to(&bound);
        let rhs_t = rhs.truncate_to(&bound);
        let entry = match (lhs_t.is_zero(), rhs_t.is_zero()) {
            (true, true) => TEquivEntry {
                class: class.clone(),
                scalar: None,
                coherent: true,
                detail: "both sides vanish".into(),
            },
            (true, false) | (false, true) => TEquivEntry {
                class: class.clone(),
                scalar: None,
                coherent: false,
                detail: "one side vanishes".into(),
            },
            (false, false) => {
                let (le, lc) = lhs_t.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
                let (re, rc) = rhs_t.terms().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
                if le != re {
                    TEquivEntry {
                        class: class.clone(),
                        scalar: None,
                        coherent: false,
                        detail: format!("leading exponents differ: {le} vs {re}"),
                    }
                } else {
                    match rc.inverse().and_then(|ri| lc.mul(&ri)) {
                        Ok(mu) if mu.is_root_of_unity() => {
                            let scaled = rhs_t.scale(&mu).expect("scale");
                            if lhs_t.eq_up_to(&scaled, &bound) {
                                TEquivEntry {
                                    class: class.clone(),
                                    scalar: Some(mu),
                                    coherent: true,
                                    detail: String::new(),
                                }
                            } else {
                                TEquivEntry {
                                    class: class.clone(),
                                    scalar: Some(mu),
                                    coherent: false,
                                    detail: "no single scalar matches all terms".into(),
                                }
                            }
                        }
                        Ok(mu) => TEquivEntry {
                            class: class.clone(),
                            scalar: None,
                            coherent: false,
                            detail: format!("leading ratio {mu} is not a root of unity"),
                        },
                        Err(e) => TEquivEntry {
                            class: class.clone(),
                            scalar: None,
                            coherent: false,
                            detail: e.to_string(),
                        },
                    }
                }
            }
        };
        entries.push(entry);
    }
    let all_coherent = entries.iter().all(|e| e.coherent);
    TEquivReport {
        entries,
        all_coherent,
    }
}

// ---------------------------------------------------------------------------
// Numeric equivariance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct NumericEntry {
    pub class: PairClass,
    /// Least-squares unimodular scalar aligning the two sides.
    pub scalar: Complex64,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct NumericReport {
    pub entries: Vec<NumericEntry>,
    pub max_deviation: f64,
    pub within_tol: bool,
    /// Largest `|q|^trunc` over the samples: a crude bound on the discarded
    /// tail. Reported so that a divergent truncation is visible, not silent.
    pub truncation_bound: f64,
}

/// Numerically evaluates both sides of the modular-equivariance identity at
/// the given upper-half-plane samples and reports the maximal deviation per
/// class after optimizing a single unimodular scalar.
pub fn numeric_check(
    f: &NortonSeries,
    gamma: &Mat2,
    tau_samples: &[Complex64],
    tol: f64,
) -> Result<NumericReport> {
    if det2_i(gamma) != 1 {
        return Err(Error::DetNotOne(det2_i(gamma)));
    }
    if tau_samples.iter().any(|t| t.im <= 0.0) {
        return Err(Error::BadInput("samples must lie in the upper half plane".into()));
    }
    let [[a, b], [c, d]] = *gamma;
    let mut entries = Vec::new();
    let mut truncation_bound: f64 = 0.0;
    for class in f.classes() {
        let (g, h) = (class.representative.g, class.representative.h);
        let target = sl2_act(&f.group, CommutingPair { g, h }, gamma)?;
        let lhs_series = f.evaluate(target.g, target.h)?;
        let rhs_series = f.evaluate(g, h)?;
        let mut v1 = Vec::new();
        let mut v2 = Vec::new();
        for &tau in tau_samples {
            let gt = (Complex64::new(a as f64, 0.0) * tau + Complex64::new(b as f64, 0.0))
                / (Complex64::new(c as f64, 0.0) * tau + Complex64::new(d as f64, 0.0));
            v1.push(lhs_series.eval_complex(tau));
            v2.push(rhs_series.eval_complex(gt));
            for (s, t) in [(lhs_series, tau), (rhs_series, gt)] {
                let qabs = (-std::f64::consts::TAU * t.im).exp();
                let tr = s.trunc().to_f64().unwrap_or(f64::INFINITY);
                if tr.is_finite() && qabs < 1.0 {
                    truncation_bound = truncation_bound.max(qabs.powf(tr));
                }
            }
        }
        // unimodular least squares: mu = phase of <v2, v1>
        let inner: Complex64 = v2
            .iter()
            .zip(v1.iter())
            .map(|(y, x)| y.conj() * x)
            .sum();
        let scalar = if inner.norm() > 0.0 {
            inner / inner.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let deviation = v1
            .iter()
            .zip(v2.iter())
            .map(|(x, y)| (x - scalar * y).norm())
            .fold(0.0f64, f64::max);
        entries.push(NumericEntry {
            class: class.clone(),
            scalar,
            deviation,
        });
    }
    let max_deviation = entries.iter().map(|e| e.deviation).fold(0.0f64, f64::max);
    Ok(NumericReport {
        within_tol: max_deviation <= tol,
        entries,
        max_deviation,
        truncation_bound,
    })
}

fn det2_i(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

// ---------------------------------------------------------------------------
// Change of groups
// ---------------------------------------------------------------------------

/// A verified homomorphism between enumerated finite groups.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    pub domain: Group,
    pub codomain: Group,
    images: Vec<usize>,
}

impl Homomorphism {
    pub fn new(domain: Group, codomain: Group, images: Vec<usize>) -> Result<Self> {
        if images.len() != domain.order() {
            return Err(Error::BadInput("image table has wrong length".into()));
        }
        if images.iter().any(|&x| x >= codomain.order()) {
            return Err(Error::BadInput("image out of range".into()));
        }
        for x in domain.elements() {
            for y in domain.elements() {
                if images[domain.mul(x, y)] != codomain.mul(images[x], images[y]) {
                    return Err(Error::NonHomomorphism { x, y });
                }
            }
        }
        Ok(Homomorphism {
            domain,
            codomain,
            images,
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn identity(group: &Group) -> Self {
        Homomorphism {
            domain: group.clone(),
            codomain: group.clone(),
            images: group.elements().collect(),
        }
    }

    /// The unique map to the trivial group.
    pub fn to_trivial(group: &Group) -> Self {
        Homomorphism {
            domain: group.clone(),
            codomain: Group::trivial(),
            images: vec![0; group.order()],
        }
    }

    /// The unique map from the trivial group.
    pub fn from_trivial(group: &Group) -> Self {
        Homomorphism {
            domain: Group::trivial(),
            codomain: group.clone(),
            images: vec![group.identity()],
        }
    }
}

/// Pullback along a homomorphism: the value at `[h1, h2]_H` is the value of
/// `f` at `[a(h1), a(h2)]_G`.
pub fn restrict(f: &NortonSeries, a: &Homomorphism) -> Result<NortonSeries> {
    if &a.codomain != f.group() {
        return Err(Error::GroupMismatch);
    }
    let classes = pair_classes(&a.domain);
    let values = classes
        .iter()
        .map(|c| {
            f.evaluate(a.apply(c.representative.g), a.apply(c.representative.h))
                .cloned()
        })
        .collect::<Result<Vec<_>>>()?;
    NortonSeries::from_class_values(a.domain.clone(), values)
}

/// Pushforward along a homomorphism:
/// `ind_a(f)([g1, g2]) = |C_G(g1, g2)| * sum (1/|H|) f([h1, h2])` over
/// commuting pairs of `H` whose image is `G`-conjugate to `(g1, g2)`.
pub fn induce(f: &NortonSeries, a: &Homomorphism) -> Result<NortonSeries> {
    if &a.domain != f.group() {
        return Err(Error::GroupMismatch);
    }
    let g_group = &a.codomain;
    let h_group = &a.domain;
    let classes = pair_classes(g_group);
    let class_of: HashMap<(usize, usize), usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.representative.g, c.representative.h), i))
        .collect();
    let trunc = f.min_trunc();
    let mut sums: Vec<PuiseuxSeries> = vec![PuiseuxSeries::zero(trunc); classes.len()];
    let weight = Rat::new(1.into(), (h_group.order() as i64).into());
    for h1 in h_group.elements() {
        for h2 in h_group.elements() {
            if !h_group.commute(h1, h2) {
                continue;
            }
            let key = canonical_pair(g_group, a.apply(h1), a.apply(h2));
            let idx = class_of[&key];
            let term = f.evaluate(h1, h2)?.scale_rat(&weight)?;
            sums[idx] = sums[idx].add(&term)?;
        }
    }
    let values = classes
        .iter()
        .zip(sums.into_iter())
        .map(|(c, s)| s.scale_rat(&rat_int(c.centralizer_order as i64)))
        .collect::<Result<Vec<_>>>()?;
    NortonSeries::from_class_values(g_group.clone(), values)
}

/// `<f1, f2>_G = (1/|G|) sum over commuting pairs of f1(g,h) * f2(g,h)`.
pub fn inner_product(f1: &NortonSeries, f2: &NortonSeries) -> Result<PuiseuxSeries> {
    if f1.group() != f2.group() {
        return Err(Error::GroupMismatch);
    }
    let group = f1.group();
    let trunc = f1.min_trunc().min(f2.min_trunc());
    let mut acc = PuiseuxSeries::zero(trunc);
    // weighted by class size instead of the raw |G|^2 pair loop
    for (i, class) in f1.classes().iter().enumerate() {
        let p = f1.values()[i].mul(f2.evaluate(class.representative.g, class.representative.h)?)?;
        acc = acc.add(&p.scale_rat(&rat_int(class.class_size as i64))?)?;
    }
    acc.scale_rat(&Rat::new(1.into(), (group.order() as i64).into()))
}

// ---------------------------------------------------------------------------
// Twisted support validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SupportEntry {
    pub class: PairClass,
    pub ok: bool,
    pub bad_exponent: Option<Rat>,
}

#[derive(Debug, Clone)]
pub struct SupportReport {
    pub entries: Vec<SupportEntry>,
    pub all_ok: bool,
}

/// Confirms, per class, that every exponent of the value at classes with
/// first component `g` lies in the lattice `(1/n) Z + s/N` prescribed by the
/// twist data of `<g>`.
pub fn validate_twisted_support(f: &NortonSeries) -> Result<SupportReport> {
    let twist = f
        .twist()
        .ok_or_else(|| Error::BadInput("no twist data present".into()))?;
    let by_elem: HashMap<usize, i64> = twist.iter().map(|t| (t.g, t.s)).collect();
    let mut entries = Vec::new();
    for (i, class) in f.classes().iter().enumerate() {
        let g = class.representative.g;
        let n = f.group().element_order(g);
        let s = by_elem.get(&g).copied().unwrap_or(0);
        let td = twist_data(n, s);
        let mut ok = true;
        let mut bad = None;
        for (e, _) in f.values()[i].terms() {
            if !td.lattice_contains(e) {
                ok = false;
                bad = Some(e.clone());
                break;
            }
        }
        entries.push(SupportEntry {
            class: class.clone(),
            ok,
            bad_exponent: bad,
        });
    }
    let all_ok = entries.iter().all(|e| e.ok);
    Ok(SupportReport { entries, all_ok })
}
