//! Three routes to the Hecke operators on Norton series — geometric
//! (isogeny triples), combinatorial (transitive commuting pairs in `S_n`),
//! and classical (replicate coefficients) — plus the equivalence verifier
//! and the Fricke involution on cyclic moduli points.
//!
//! Normalization: the `1/n` prefactor is applied in all three routes, so
//! `T_n = (1/n) Phi_n` on the untwisted sector of the trivial group. The
//! pushforward of line-bundle data along a summand isogeny is modeled as the
//! identity scalar (trivialized twist); twisted scalars on Hecke summands
//! are out of scope.

use crate::error::{Error, Result};
use crate::exact_arith::{divisors, rat_int, Rat};
use crate::finite_groups::{transitive_pair_classes, Group, Sublattice};
use crate::norton::NortonSeries;
use crate::power_ops::psi_pair;
use crate::qseries::PuiseuxSeries;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Geometric Hecke operator: at each class `[g, h]`,
/// `(1/n) sum over (a, b, d), ad = n, 0 <= b < d of
///  f(g^d, g^-b h^a) substituted at (a tau + b)/d`.
pub fn hecke_geometric(f: &NortonSeries, n: u64) -> Result<NortonSeries> {
    assert!(n >= 1);
    let group = f.group().clone();
    let triples = Sublattice::all_of_index(n);
    let inv_n = Rat::new(1.into(), (n as i64).into());
    let mut values = Vec::with_capacity(f.classes().len());
    for class in f.classes() {
        let (g, h) = (class.representative.g, class.representative.h);
        let mut acc: Option<PuiseuxSeries> = None;
        for t in &triples {
            let gd = group.pow(g, t.d as i64);
            let gh = group.mul(group.pow(g, -(t.b as i64)), group.pow(h, t.a as i64));
            let summand = f.evaluate(gd, gh)?.substitute(t.a, t.b, t.d)?;
            acc = Some(match acc {
                None => summand,
                Some(s) => s.add(&summand)?,
            });
        }
        let total = acc.expect("at least one triple").scale_rat(&inv_n)?;
        // the denominator-d substitutions shrink truncation by a/d; demand
        // at least the polar region q^-n .. be visible
        if *total.trunc() <= rat_int(-(n as i64)) {
            return Err(Error::InsufficientTruncation {
                needed: rat_int(-(n as i64)),
                have: total.trunc().clone(),
            });
        }
        values.push(total);
    }
    NortonSeries::from_class_values(group, values)
}

/// Combinatorial Hecke operator: `(1/n)` times the sum of the power
/// operations attached to the transitive commuting-pair classes of `S_n`.
/// Each class routes through its canonical triple, derived from the orbit
/// stabilizer rather than from the divisor enumeration.
pub fn hecke_combinatorial(f: &NortonSeries, n: u64) -> Result<NortonSeries> {
    assert!(n >= 1);
    let classes = transitive_pair_classes(n as usize)?;
    let sn = Group::symmetric(n as usize)?;
    let inv_n = Rat::new(1.into(), (n as i64).into());
    let mut acc: Option<NortonSeries> = None;
    for (class, _) in &classes {
        let sigma = sn.as_perm(class.representative.g).unwrap();
        let rho = sn.as_perm(class.representative.h).unwrap();
        let term = psi_pair(f, &sigma, &rho)?;
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term)?,
        });
    }
    acc.expect("sigma(n) >= 1 classes").scale_rat(&inv_n)
}

/// Classical Hecke operator on a normalized rational q-series from replicate
/// coefficients:
/// `T_n(f) = sum_m sum_(a | (m, n)) (1/a) c^(a)(n m / a^2) q^m`,
/// rational arithmetic only.
pub fn hecke_classical(
    f: &PuiseuxSeries,
    n: u64,
    replicates: &BTreeMap<u64, PuiseuxSeries>,
) -> Result<PuiseuxSeries> {
    assert!(n >= 1);
    // normalized input
    crate::qseries::faber(f, 1)?;
    for a in divisors(n) {
        if !replicates.contains_key(&a) {
            return Err(Error::MissingReplicate(a));
        }
    }
    // The coefficient at q^m consumes c^(a)(n m / a^2) for a | (m, n); the
    // binding constraint over all m is min over a | n of a^2 T_a / n.
    let trunc = divisors(n)
        .iter()
        .map(|&a| {
            replicates[&a].trunc().clone() * rat_int((a * a) as i64) / rat_int(n as i64)
        })
        .min()
        .unwrap();
    let mut terms: Vec<(Rat, crate::exact_arith::CycloElem)> = Vec::new();
    let m_lo = -(n as i64);
    let mut m = m_lo;
    loop {
        let mq = rat_int(m);
        if mq >= trunc {
            break;
        }
        let mut coeff = Rat::zero();
        for a in divisors(n) {
            if m != 0 && (m.unsigned_abs() % a) != 0 {
                continue;
            }
            let idx = rat_int(n as i64) * rat_int(m) / rat_int((a * a) as i64);
            if !idx.is_integer() {
                continue;
            }
            let rep = &replicates[&a];
            let c = rep
                .coeff(&idx)
                .ok_or_else(|| Error::InsufficientTruncation {
                    needed: idx.clone(),
                    have: rep.trunc().clone(),
                })?;
            let c = c
                .try_rational()
                .ok_or_else(|| Error::NotNormalized("replicate has non-rational coefficient".into()))?;
            coeff += c / rat_int(a as i64);
        }
        if !coeff.is_zero() {
            terms.push((mq, crate::exact_arith::CycloElem::from_rat(coeff)));
        }
        m += 1;
    }
    PuiseuxSeries::from_terms(terms, trunc)
}

/// Outcome of the cross-verification of the Hecke implementations.
#[derive(Debug, Clone)]
pub struct HeckeReport {
    pub n: u64,
    /// Per-class difference `geometric - combinatorial`, compared on the
    /// common truncation.
    pub deltas: Vec<(usize, PuiseuxSeries)>,
    /// Difference of the geometric route against the classical coefficient
    /// formula (trivial group with replicates only).
    pub classical_delta: Option<PuiseuxSeries>,
    pub agrees: bool,
    pub common_trunc: Rat,
}

/// Computes the geometric and combinatorial operators and their per-class
/// differences; when the group is trivial and replicates are supplied, also
/// compares against the classical coefficient formula.
pub fn verify_equivalence(
    f: &NortonSeries,
    n: u64,
    replicates: Option<&BTreeMap<u64, PuiseuxSeries>>,
) -> Result<HeckeReport> {
    let geo = hecke_geometric(f, n)?;
    let comb = hecke_combinatorial(f, n)?;
    let mut common = geo.min_trunc().min(comb.min_trunc());
    let mut deltas = Vec::new();
    for i in 0..geo.classes().len() {
        let d = geo.values()[i].sub(&comb.values()[i])?;
        deltas.push((i, d));
    }
    let mut agrees = deltas.iter().all(|(_, d)| d.is_zero());
    let mut classical_delta = None;
    if let Some(reps) = replicates {
        if f.group().order() == 1 {
            let classical = hecke_classical(f.value_at_class(0), n, reps)?;
            let geo0 = &geo.values()[0];
            common = common.min(classical.trunc().clone());
            let d = geo0.sub(&classical)?;
            agrees = agrees && d.is_zero();
            classical_delta = Some(d);
        }
    }
    Ok(HeckeReport {
        n,
        deltas,
        classical_delta,
        agrees,
        common_trunc: common,
    })
}

// ---------------------------------------------------------------------------
// Fricke involution
// ---------------------------------------------------------------------------

/// A fractional-linear transformation of the formal variable `tau`, kept as
/// an integral matrix normalized by the gcd of its entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoebiusMap {
    pub m: [[i64; 2]; 2],
}

impl MoebiusMap {
    pub fn identity() -> Self {
        MoebiusMap { m: [[1, 0], [0, 1]] }
    }

    fn normalized(mut m: [[i64; 2]; 2]) -> Self {
        let g = m[0][0]
            .gcd(&m[0][1])
            .gcd(&m[1][0].gcd(&m[1][1]));
        if g > 1 {
            for row in &mut m {
                for v in row {
                    *v /= g;
                }
            }
        }
        // sign normalization on the bottom row, so the description reads as
        // a quotient with positive denominator
        let lead = if m[1][0] != 0 { m[1][0] } else { m[1][1] };
        if lead < 0 {
            for row in &mut m {
                for v in row {
                    *v = -*v;
                }
            }
        }
        MoebiusMap { m }
    }

    pub fn compose(&self, inner: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::normalized(crate::finite_groups::mat_mul(&self.m, &inner.m))
    }

    /// Projective identity (`tau -> tau`).
    pub fn is_identity(&self) -> bool {
        self.m == [[1, 0], [0, 1]]
    }

    /// Rendered as a formula in `tau`.
    pub fn describe(&self) -> String {
        let [[a, b], [c, d]] = self.m;
        let lin = |p: i64, q: i64| -> String {
            match (p, q) {
                (0, q) => format!("{q}"),
                (1, 0) => "tau".into(),
                (-1, 0) => "-tau".into(),
                (p, 0) => format!("{p}tau"),
                (1, q) if q > 0 => format!("tau+{q}"),
                (1, q) => format!("tau{q}"),
                (p, q) if q > 0 => format!("{p}tau+{q}"),
                (p, q) => format!("{p}tau{q}"),
            }
        };
        if c == 0 && d == 1 {
            lin(a, b)
        } else {
            format!("({})/({})", lin(a, b), lin(c, d))
        }
    }
}

/// An untwisted cyclic moduli point `(1, g; tau)` with `g` a generator of
/// `Z/n` and `tau` carried as a formal transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPoint {
    pub n: u64,
    pub generator: usize,
    pub tau: MoebiusMap,
}

impl CyclicPoint {
    pub fn new(n: u64, generator: usize) -> Result<Self> {
        if n == 0 || generator >= n as usize || (generator as u64).gcd(&n) != 1 && n > 1 {
            return Err(Error::NonGenerator(generator, n));
        }
        Ok(CyclicPoint {
            n,
            generator,
            tau: MoebiusMap::identity(),
        })
    }
}

/// The Fricke involution `W_n(1, g; tau) = (1, g; -1/(n tau))`. Applying it
/// twice returns the original point up to the bookkeeping scalar `n`
/// (`tau -> tau` projectively).
pub fn fricke(point: &CyclicPoint) -> CyclicPoint {
    let w = MoebiusMap { m: [[0, -1], [point.n as i64, 0]] };
    CyclicPoint {
        n: point.n,
        generator: point.generator,
        tau: w.compose(&point.tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, CycloElem};
    use crate::norton::NortonSeries;
    use crate::qseries::j_expansion;

    fn j_norton(order: u64) -> NortonSeries {
        NortonSeries::constant(Group::trivial(), j_expansion(order))
    }

    fn self_replicates(f: &PuiseuxSeries, n_max: u64) -> BTreeMap<u64, PuiseuxSeries> {
        (1..=n_max).map(|a| (a, f.clone())).collect()
    }

    #[test]
    fn geometric_t1_is_identity() {
        let f = j_norton(8);
        let t1 = hecke_geometric(&f, 1).unwrap();
        assert!(t1.eq_up_to(&f, &t1.min_trunc()));
    }

    #[test]
    fn geometric_t2_leading_coefficient() {
        let f = j_norton(12);
        let t2 = hecke_geometric(&f, 2).unwrap();
        let v = t2.value_at_class(0);
        assert_eq!(v.coeff_int(-2).unwrap().try_rational().unwrap(), rat(1, 2));
        // non-integral powers cancel for integral input at g = 1
        for (e, _) in v.terms() {
            assert!(e.is_integer(), "fractional exponent {e} survived");
        }
    }

    #[test]
    fn geometric_expands_three_triples_on_z2() {
        // at (g, h) = (1, x), T_2 sums f(1, x^2; 2 tau), f(1, x; tau/2),
        // f(1, x; (tau+1)/2), halved
        let g = Group::cyclic(2);
        let f = NortonSeries::random(g.clone(), 23, -1, 13);
        let t2 = hecke_geometric(&f, 2).unwrap();
        let lhs = t2.evaluate(0, 1).unwrap();
        let d1 = f.evaluate(0, 0).unwrap().substitute(2, 0, 1).unwrap();
        let d2 = f.evaluate(0, 1).unwrap().substitute(1, 0, 2).unwrap();
        let d3 = f.evaluate(0, 1).unwrap().substitute(1, 1, 2).unwrap();
        let expect = d1
            .add(&d2)
            .unwrap()
            .add(&d3)
            .unwrap()
            .scale_rat(&rat(1, 2))
            .unwrap();
        assert!(lhs.eq_up_to(&expect, &expect.trunc().clone()));
    }

    #[test]
    fn combinatorial_t1_is_identity() {
        let g = Group::cyclic(3);
        let f = NortonSeries::random(g, 31, -1, 9);
        let t1 = hecke_combinatorial(&f, 1).unwrap();
        assert!(t1.eq_up_to(&f, &t1.min_trunc()));
    }

    #[test]
    fn combinatorial_matches_geometric_on_j() {
        let f = j_norton(24);
        for n in 2..=4u64 {
            let geo = hecke_geometric(&f, n).unwrap();
            let comb = hecke_combinatorial(&f, n).unwrap();
            let bound = geo.min_trunc().min(comb.min_trunc());
            assert!(geo.eq_up_to(&comb, &bound), "n={n}");
        }
    }

    #[test]
    fn combinatorial_matches_geometric_random_z2_n4() {
        let g = Group::cyclic(2);
        let f = NortonSeries::random(g, 91, -1, 13);
        let r = verify_equivalence(&f, 4, None).unwrap();
        assert!(r.agrees);
    }

    #[test]
    fn classical_examples_on_j() {
        let f = j_expansion(30);
        let reps = self_replicates(&f, 6);
        // n = 1 returns f
        let t1 = hecke_classical(&f, 1, &reps).unwrap();
        assert!(t1.eq_up_to(&f, t1.trunc()));
        // n = 2: q^-2 coefficient 1/2, constant term 0
        let t2 = hecke_classical(&f, 2, &reps).unwrap();
        assert_eq!(t2.coeff_int(-2).unwrap().try_rational().unwrap(), rat(1, 2));
        assert!(t2.coeff_int(0).unwrap().is_zero());
        assert!(t2.coeff_int(-1).unwrap().is_zero());
    }

    #[test]
    fn classical_requires_replicates() {
        let f = j_expansion(10);
        let mut reps = BTreeMap::new();
        reps.insert(1u64, f.clone());
        assert!(matches!(
            hecke_classical(&f, 2, &reps),
            Err(Error::MissingReplicate(2))
        ));
    }

    #[test]
    fn three_routes_agree_on_j() {
        let f = j_expansion(40);
        let norton = NortonSeries::constant(Group::trivial(), f.clone());
        let reps = self_replicates(&f, 6);
        for n in [1u64, 2, 3, 4] {
            let r = verify_equivalence(&norton, n, Some(&reps)).unwrap();
            assert!(r.agrees, "n={n}");
            assert!(r.classical_delta.as_ref().unwrap().is_zero());
        }
    }

    #[test]
    fn hecke_multiplicativity_coprime() {
        // T_2 T_3 = T_6 on the trivial group (empirical identity; exercised
        // on j - 744)
        let f = j_norton(40);
        let t3 = hecke_geometric(&f, 3).unwrap();
        let t2t3 = hecke_geometric(&t3, 2).unwrap();
        let t6 = hecke_geometric(&f, 6).unwrap();
        let bound = t2t3.min_trunc().min(t6.min_trunc());
        assert!(t2t3.eq_up_to(&t6, &bound));
    }

    #[test]
    fn fricke_examples() {
        // n = 1: the S transform
        let p = CyclicPoint::new(1, 0).unwrap();
        let w = fricke(&p);
        assert_eq!(w.tau.describe(), "(-1)/(tau)");
        // n = 2 displayed formula
        let p = CyclicPoint::new(2, 1).unwrap();
        let w = fricke(&p);
        assert_eq!(w.tau.m, [[0, -1], [2, 0]]);
        assert_eq!(w.tau.describe(), "(-1)/(2tau)");
        // involution up to the scalar n
        let ww = fricke(&w);
        assert!(ww.tau.is_identity());
        assert_eq!(ww.generator, p.generator);
        // non-generator rejected
        assert!(CyclicPoint::new(4, 2).is_err());
    }

    #[test]
    fn report_detects_disagreement() {
        // doctor the combinatorial side by comparing T_2 against T_3
        let f = j_norton(18);
        let geo = hecke_geometric(&f, 2).unwrap();
        let comb = hecke_combinatorial(&f, 3).unwrap();
        let d = geo.values()[0].sub(&comb.values()[0]).unwrap();
        assert!(!d.is_zero());
    }

    #[test]
    fn projection_identity_in_geometric_route() {
        // a fixture with a cyclotomic coefficient still lands on exact values
        let f = NortonSeries::constant(
            Group::trivial(),
            PuiseuxSeries::from_terms(
                vec![
                    (rat_int(-1), CycloElem::one(1)),
                    (rat_int(1), CycloElem::from_rat(rat(7, 2))),
                ],
                rat_int(13),
            )
            .unwrap(),
        );
        let t2 = hecke_geometric(&f, 2).unwrap();
        let v = t2.value_at_class(0);
        // (1/2)[f(2tau) + f(tau/2) + f((tau+1)/2)]; the q^(1/2) parts cancel
        assert!(v.terms().all(|(e, _)| e.is_integer()));
        assert_eq!(v.coeff_int(-2).unwrap().try_rational().unwrap(), rat(1, 2));
    }
}
