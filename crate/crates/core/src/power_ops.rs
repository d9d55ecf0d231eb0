//! Level-2 power operations on Norton series (orbit-products, symmetric and
//! exterior powers, exponential generating identities), replicate extraction
//! and replicability verification, and the level-1 (character) reference
//! layer.

use crate::error::{Error, Result};
use crate::exact_arith::{divisors, rat_int, CycloElem, Rat};
use crate::finite_groups::{conjugacy_classes, pair_classes, pair_sgn, Group, Perm};
use crate::norton::NortonSeries;
use crate::qseries::{faber_all, PuiseuxSeries};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Power operation attached to a commuting pair of permutations: at each
/// class `[g, h]`, the product over `<sigma, rho>`-orbits `O` with canonical
/// triple `(a, b, d)` of `f(g^d, g^-b h^a)` substituted at `(a tau + b)/d`.
pub fn psi_pair(f: &NortonSeries, sigma: &Perm, rho: &Perm) -> Result<NortonSeries> {
    let n = sigma.degree();
    let orbits = crate::finite_groups::orbit_decomposition(sigma, rho, n)?;
    let group = f.group().clone();
    let ambient = f.min_trunc();
    let mut values = Vec::with_capacity(f.classes().len());
    for class in f.classes() {
        let (g, h) = (class.representative.g, class.representative.h);
        let mut acc: Option<PuiseuxSeries> = None;
        for o in &orbits {
            let t = o.lattice;
            let gd = group.pow(g, t.d as i64);
            let gh = group.mul(group.pow(g, -(t.b as i64)), group.pow(h, t.a as i64));
            let factor = f.evaluate(gd, gh)?.substitute(t.a, t.b, t.d)?;
            acc = Some(match acc {
                None => factor,
                Some(s) => s.mul(&factor)?,
            });
        }
        values.push(acc.unwrap_or_else(|| {
            PuiseuxSeries::constant(CycloElem::one(1), ambient.clone())
        }));
    }
    NortonSeries::from_class_values(group, values)
}

fn signed_class_sum(f: &NortonSeries, n: usize, signed: bool) -> Result<NortonSeries> {
    let sn = Group::symmetric(n)?;
    let ambient = f.min_trunc();
    let mut acc = NortonSeries::constant(f.group().clone(), PuiseuxSeries::zero(ambient));
    for class in pair_classes(&sn) {
        let sigma = sn.as_perm(class.representative.g).unwrap();
        let rho = sn.as_perm(class.representative.h).unwrap();
        let mut weight = Rat::new(1.into(), (class.centralizer_order as i64).into());
        if signed {
            let sgn = pair_sgn(&sigma, &rho, n)?;
            weight *= rat_int(sgn);
        }
        let term = psi_pair(f, &sigma, &rho)?.scale_rat(&weight)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `sym_n(f) = (1/n!) sum over commuting pairs of psi`, enumerated by class
/// with centralizer weights.
pub fn sym_n(f: &NortonSeries, n: usize) -> Result<NortonSeries> {
    signed_class_sum(f, n, false)
}

/// `lambda2_n(f)`: the signed variant, weighted by `sgn(sigma, rho)`.
pub fn lambda2_n(f: &NortonSeries, n: usize) -> Result<NortonSeries> {
    signed_class_sum(f, n, true)
}

/// Truncated series in a dummy variable `t` whose coefficients are Norton
/// series.
#[derive(Debug, Clone)]
pub struct TotalPowerSeries {
    pub var_order: usize,
    pub coefficients: Vec<NortonSeries>,
}

impl TotalPowerSeries {
    pub fn coefficient(&self, k: usize) -> &NortonSeries {
        &self.coefficients[k]
    }

    /// Convolution check `self(t) * other(-t) = 1` up to `var_order`.
    pub fn is_inverse_pair(&self, other: &TotalPowerSeries) -> Result<bool> {
        let d = self.var_order.min(other.var_order);
        for k in 0..=d {
            let mut acc: Option<NortonSeries> = None;
            for i in 0..=k {
                let sign = if (k - i) % 2 == 0 { Rat::one() } else { -Rat::one() };
                let term = self.coefficients[i]
                    .pointwise_mul(&other.coefficients[k - i])?
                    .scale_rat(&sign)?;
                acc = Some(match acc {
                    None => term,
                    Some(s) => s.add(&term)?,
                });
            }
            let acc = acc.unwrap();
            let expect_one = k == 0;
            for v in acc.values() {
                let mut w = v.clone();
                if expect_one {
                    w = w.sub(&PuiseuxSeries::constant(CycloElem::one(1), v.trunc().clone()))?;
                }
                if !w.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Direct total symmetric power: coefficients `sym_0(f), .., sym_d(f)`.
pub fn total_sym(f: &NortonSeries, var_order: usize) -> Result<TotalPowerSeries> {
    let coefficients = (0..=var_order)
        .map(|k| sym_n(f, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TotalPowerSeries {
        var_order,
        coefficients,
    })
}

/// Direct total exterior power: coefficients `lambda2_0(f), .., lambda2_d(f)`.
pub fn total_lambda(f: &NortonSeries, var_order: usize) -> Result<TotalPowerSeries> {
    let coefficients = (0..=var_order)
        .map(|k| lambda2_n(f, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TotalPowerSeries {
        var_order,
        coefficients,
    })
}

/// The exponential generating construction `exp(sum_(k=1)^d T_k(f) t^k)`,
/// with `T_k` the geometric Hecke operator. The sum starts at `k = 1`.
pub fn total_sym_exponential(f: &NortonSeries, var_order: usize) -> Result<TotalPowerSeries> {
    let group = f.group().clone();
    let ambient = f.min_trunc();
    let zero = NortonSeries::constant(group.clone(), PuiseuxSeries::zero(ambient.clone()));
    let one = NortonSeries::constant(
        group.clone(),
        PuiseuxSeries::constant(CycloElem::one(1), ambient.clone()),
    );
    // x = sum_(k>=1) T_k(f) t^k as a t-polynomial
    let mut x: Vec<NortonSeries> = vec![zero.clone()];
    for k in 1..=var_order {
        x.push(crate::hecke::hecke_geometric(f, k as u64)?);
    }
    // exp(x) by Taylor accumulation; x has t-valuation >= 1 so powers beyond
    // var_order vanish
    let mut acc: Vec<NortonSeries> = vec![one.clone()];
    acc.resize(var_order + 1, zero.clone());
    let mut pw: Vec<NortonSeries> = acc.clone();
    let mut factorial = Rat::one();
    for j in 1..=var_order {
        factorial *= rat_int(j as i64);
        pw = t_poly_mul(&pw, &x, var_order, &zero)?;
        let inv_fact = factorial.recip();
        for k in 0..=var_order {
            acc[k] = acc[k].add(&pw[k].scale_rat(&inv_fact)?)?;
        }
    }
    Ok(TotalPowerSeries {
        var_order,
        coefficients: acc,
    })
}

fn t_poly_mul(
    a: &[NortonSeries],
    b: &[NortonSeries],
    var_order: usize,
    zero: &NortonSeries,
) -> Result<Vec<NortonSeries>> {
    let mut out = vec![zero.clone(); var_order + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > var_order {
                break;
            }
            if bj.is_zero() {
                continue;
            }
            let p = ai.pointwise_mul(bj)?;
            out[i + j] = out[i + j].add(&p)?;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Replicate extraction
// ---------------------------------------------------------------------------

/// Replicates `f^(1), .., f^(n_max)` extracted by the Faber-polynomial
/// induction: for each `n`, the residual
/// `R = Phi_n(f) - sum_(ad = n, d > 1) sum_(b < d) f^(a)((a tau + b)/d)`
/// must be rational with support in `n Z`; then `f^(n)(n tau) = R`.
///
/// Truncations propagate honestly: the denominator-`d` substitutions consume
/// `f^(a)` at `d`-fold coefficient indices, so guaranteed output orders decay
/// quadratically in `n`. The stamped truncation on each replicate is the
/// order actually derivable from the input.
pub fn extract_replicates(
    f: &PuiseuxSeries,
    n_max: u64,
) -> Result<BTreeMap<u64, PuiseuxSeries>> {
    let fabers = faber_all(f, n_max)?;
    let mut reps: BTreeMap<u64, PuiseuxSeries> = BTreeMap::new();
    reps.insert(1, f.clone());
    for n in 2..=n_max {
        let mut residual = fabers[(n - 1) as usize].series.clone();
        for d in divisors(n) {
            if d == 1 {
                continue;
            }
            let a = n / d;
            let rep_a = reps.get(&a).expect("previous replicate").clone();
            for b in 0..d {
                residual = residual.sub(&rep_a.substitute(a, b, d)?)?;
            }
        }
        // verify support in n Z with rational coefficients
        for (e, c) in residual.terms() {
            let ok_exp = e.is_integer() && (e / rat_int(n as i64)).is_integer();
            if !ok_exp || c.try_rational().is_none() {
                return Err(Error::NotReplicable {
                    n,
                    exponent: e.clone(),
                });
            }
        }
        reps.insert(n, residual.compress_exponents(n)?);
    }
    Ok(reps)
}

// ---------------------------------------------------------------------------
// Replicability verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct LambdaEntry {
    pub n: u64,
    /// Whether `lambda2_(n+1)(f)` is a constant series.
    pub is_constant: bool,
    pub constant: Option<Rat>,
}

#[derive(Debug, Clone)]
pub struct ReplicabilityReport {
    pub order: u64,
    pub entries: Vec<LambdaEntry>,
    /// Whether `f(t) - f(q) = t^-1 Lambda2_(-t)(f(q))` holds coefficientwise
    /// in `t` up to `t^order` (on the common q-truncation).
    pub identity_holds: bool,
    pub all_constant: bool,
}

/// Verifies the replicability identity on the trivial-group sector: expands
/// both sides of `f(t) - f(q) = t^-1 Lambda2_(-t)(f(q))` to `t^order` and
/// reports, per `n`, whether `lambda2_(n+1)(f)` is a constant series and
/// which constant. The identity itself is matched coefficient by
/// coefficient; no sign convention for the constants is assumed.
pub fn verify_replicability(f: &PuiseuxSeries, order: u64) -> Result<ReplicabilityReport> {
    crate::qseries::faber(f, 1)?; // normalized-form check
    let norton = NortonSeries::constant(Group::trivial(), f.clone());
    let lambdas = total_lambda(&norton, order as usize + 1)?;

    let mut entries = Vec::new();
    let mut identity_holds = true;

    // t^-1 coefficients: LHS has 1, RHS has lambda_0.
    {
        let lam0 = lambdas.coefficient(0).value_at_class(0);
        let one = PuiseuxSeries::constant(CycloElem::one(1), lam0.trunc().clone());
        if !lam0.eq_up_to(&one, lam0.trunc()) {
            identity_holds = false;
        }
    }
    // t^0: LHS -f(q), RHS -lambda_1.
    {
        let lam1 = lambdas.coefficient(1).value_at_class(0);
        let bound = lam1.trunc().clone().min(f.trunc().clone());
        if !lam1.eq_up_to(f, &bound) {
            identity_holds = false;
        }
    }
    // t^n, n >= 1: LHS a_n (constant in q), RHS (-1)^(n+1) lambda_(n+1).
    for n in 1..=order {
        let lam = lambdas.coefficient(n as usize + 1).value_at_class(0);
        let is_constant = lam.terms().all(|(e, _)| e.is_zero());
        let constant = if is_constant {
            Some(
                lam.coeff_int(0)
                    .map(|c| c.try_rational().unwrap_or_else(Rat::zero))
                    .unwrap_or_else(Rat::zero),
            )
        } else {
            None
        };
        let a_n = f
            .coeff_int(n as i64)
            .ok_or_else(|| Error::InsufficientTruncation {
                needed: rat_int(n as i64 + 1),
                have: f.trunc().clone(),
            })?
            .try_rational()
            .ok_or_else(|| Error::NotNormalized("non-rational coefficient".into()))?;
        let sign = if n % 2 == 0 { -Rat::one() } else { Rat::one() };
        let rhs_const = lam.scale_rat(&sign)?;
        let lhs_const = PuiseuxSeries::rational_constant(a_n, rhs_const.trunc().clone());
        if !rhs_const.eq_up_to(&lhs_const, rhs_const.trunc()) {
            identity_holds = false;
        }
        entries.push(LambdaEntry {
            n,
            is_constant,
            constant,
        });
    }
    let all_constant = entries.iter().all(|e| e.is_constant);
    Ok(ReplicabilityReport {
        order,
        entries,
        identity_holds,
        all_constant,
    })
}

// ---------------------------------------------------------------------------
// Level-1 (character) layer
// ---------------------------------------------------------------------------

/// A rational class function on a finite group, one value per conjugacy
/// class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassFunction {
    group: Group,
    class_reps: Vec<usize>,
    class_of: Vec<usize>,
    values: Vec<Rat>,
}

impl ClassFunction {
    pub fn new(group: Group, values: Vec<Rat>) -> Result<Self> {
        let classes = conjugacy_classes(&group);
        if values.len() != classes.len() {
            return Err(Error::BadInput(format!(
                "expected {} class values, got {}",
                classes.len(),
                values.len()
            )));
        }
        let mut class_of = vec![0usize; group.order()];
        for (i, c) in classes.iter().enumerate() {
            for &x in c {
                class_of[x] = i;
            }
        }
        Ok(ClassFunction {
            group,
            class_reps: classes.iter().map(|c| c[0]).collect(),
            class_of,
            values,
        })
    }

    pub fn constant(group: Group, v: Rat) -> Self {
        let k = conjugacy_classes(&group).len();
        Self::new(group, vec![v; k]).unwrap()
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn value_at(&self, g: usize) -> &Rat {
        &self.values[self.class_of[g]]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    fn map_classes<F>(&self, mut f: F) -> ClassFunction
    where
        F: FnMut(usize) -> Rat,
    {
        let values = self.class_reps.iter().map(|&r| f(r)).collect();
        ClassFunction {
            group: self.group.clone(),
            class_reps: self.class_reps.clone(),
            class_of: self.class_of.clone(),
            values,
        }
    }

    /// Adams operation `psi_n`: `g -> chi(g^n)`.
    pub fn adams(&self, n: u64) -> ClassFunction {
        self.map_classes(|g| self.value_at(self.group.pow(g, n as i64)).clone())
    }

    /// Symmetric power via the cycle-type weighted sum
    /// `g -> (1/n!) sum over sigma of prod over cycles c of chi(g^|c|)`.
    pub fn sym(&self, n: u64) -> ClassFunction {
        self.cycle_type_sum(n, false)
    }

    /// Exterior power: the `sgn(sigma)`-weighted variant.
    pub fn lambda(&self, n: u64) -> ClassFunction {
        self.cycle_type_sum(n, true)
    }

    fn cycle_type_sum(&self, n: u64, signed: bool) -> ClassFunction {
        let parts = partitions(n);
        self.map_classes(|g| {
            let mut acc = Rat::zero();
            for p in &parts {
                // 1/z_lambda, z = prod m^(c_m) c_m!
                let mut z = Rat::one();
                let mut mult: BTreeMap<u64, u64> = BTreeMap::new();
                for &part in p {
                    *mult.entry(part).or_insert(0) += 1;
                }
                for (&m, &c) in &mult {
                    for _ in 0..c {
                        z *= rat_int(m as i64);
                    }
                    for j in 1..=c {
                        z *= rat_int(j as i64);
                    }
                }
                let mut term = z.recip();
                if signed {
                    let transpositions: u64 = n - p.len() as u64;
                    if transpositions % 2 == 1 {
                        term = -term;
                    }
                }
                for &part in p {
                    term *= self.value_at(self.group.pow(g, part as i64)).clone();
                }
                acc += term;
            }
            acc
        })
    }

    /// Total symmetric power to `t^d` via
    /// `S_t(x) = exp(sum psi_n(x)/n t^n)`.
    pub fn total_sym(&self, d: u64) -> Vec<ClassFunction> {
        let zero = ClassFunction::constant(self.group.clone(), Rat::zero());
        let one = ClassFunction::constant(self.group.clone(), Rat::one());
        // x_k = psi_k / k
        let mut x = vec![zero.clone()];
        for k in 1..=d {
            let psi = self.adams(k);
            x.push(psi.scale(&Rat::new(1.into(), (k as i64).into())));
        }
        let mut acc = vec![one; 1];
        acc.resize(d as usize + 1, zero.clone());
        let mut pw = acc.clone();
        let mut factorial = Rat::one();
        for j in 1..=d as usize {
            factorial *= rat_int(j as i64);
            pw = cf_poly_mul(&pw, &x, d as usize, &zero);
            let invf = factorial.recip();
            for k in 0..=d as usize {
                acc[k] = acc[k].add(&pw[k].scale(&invf));
            }
        }
        acc
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        debug_assert!(self.group == other.group);
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a + b)
            .collect();
        ClassFunction {
            group: self.group.clone(),
            class_reps: self.class_reps.clone(),
            class_of: self.class_of.clone(),
            values,
        }
    }

    pub fn mul(&self, other: &ClassFunction) -> ClassFunction {
        debug_assert!(self.group == other.group);
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .collect();
        ClassFunction {
            group: self.group.clone(),
            class_reps: self.class_reps.clone(),
            class_of: self.class_of.clone(),
            values,
        }
    }

    pub fn scale(&self, r: &Rat) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            class_reps: self.class_reps.clone(),
            class_of: self.class_of.clone(),
            values: self.values.iter().map(|v| v * r).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

fn cf_poly_mul(
    a: &[ClassFunction],
    b: &[ClassFunction],
    d: usize,
    zero: &ClassFunction,
) -> Vec<ClassFunction> {
    let mut out = vec![zero.clone(); d + 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > d {
                break;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// Partitions of `n` as descending part lists.
pub fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut p = max.min(n);
        while p >= 1 {
            prefix.push(p);
            rec(n - p, p, prefix, out);
            prefix.pop();
            p -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Partition numbers `p(n)`.
pub fn partition_number(n: u64) -> u64 {
    partitions(n).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::qseries::j_expansion;

    fn trivial_norton(f: PuiseuxSeries) -> NortonSeries {
        NortonSeries::constant(Group::trivial(), f)
    }

    #[test]
    fn psi_pair_identity_on_sigma1() {
        let f = NortonSeries::random(Group::cyclic(2), 3, -1, 10);
        let e = Perm::identity(1);
        let p = psi_pair(&f, &e, &e).unwrap();
        assert!(p.eq_up_to(&f, &p.min_trunc()));
    }

    #[test]
    fn psi_pair_squares_on_trivial_sigma2_pair() {
        // (e, e) in Sigma_2: two orbits with triple (1,0,1) -> f^2 per class
        let f = NortonSeries::random(Group::cyclic(2), 5, -1, 10);
        let e = Perm::identity(2);
        let p = psi_pair(&f, &e, &e).unwrap();
        for (i, v) in p.values().iter().enumerate() {
            let sq = f.values()[i].mul(&f.values()[i]).unwrap();
            assert!(v.eq_up_to(&sq, v.trunc()));
        }
    }

    #[test]
    fn psi_pair_transitive_is_hecke_summand() {
        // a transitive pair contributes n T_n restricted to a single triple
        let f = trivial_norton(j_expansion(12));
        let sigma = Perm::from_cycles(2, &[&[0, 1]]);
        let e = Perm::identity(2);
        let p = psi_pair(&f, &sigma, &e).unwrap();
        // triple (1, 0, 2): f(tau/2)
        let expect = f.value_at_class(0).substitute(1, 0, 2).unwrap();
        assert!(p.value_at_class(0).eq_up_to(&expect, expect.trunc()));
    }

    #[test]
    fn sym_small_cases() {
        let f = NortonSeries::random(Group::cyclic(2), 8, -1, 9);
        let s0 = sym_n(&f, 0).unwrap();
        for v in s0.values() {
            assert_eq!(v.coeff_int(0).unwrap().try_rational().unwrap(), rat_int(1));
            assert_eq!(v.term_count(), 1);
        }
        let s1 = sym_n(&f, 1).unwrap();
        assert!(s1.eq_up_to(&f, &s1.min_trunc()));
    }

    #[test]
    fn sym_of_one_counts_partitions() {
        // sym_n(1) on the trivial group equals p(n), n <= 8
        let one = trivial_norton(PuiseuxSeries::rational_constant(rat_int(1), rat_int(4)));
        let expected = [1u64, 1, 2, 3, 5, 7, 11, 15, 22];
        for n in 0..=8usize {
            let s = sym_n(&one, n).unwrap();
            assert_eq!(
                s.value_at_class(0).coeff_int(0).unwrap().try_rational().unwrap(),
                rat_int(expected[n] as i64),
                "n={n}"
            );
            assert_eq!(partition_number(n as u64), expected[n]);
        }
    }

    #[test]
    fn sym_cap_is_enforced() {
        let one = trivial_norton(PuiseuxSeries::rational_constant(rat_int(1), rat_int(2)));
        assert!(matches!(sym_n(&one, 9), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn lambda2_matches_inverse_of_total_sym() {
        // lambda2_n from the signed class sum = (-1)^n [t^n] (1/Sym_t)
        let f = trivial_norton(j_expansion(16));
        let d = 4usize;
        let sym = total_sym(&f, d).unwrap();
        let lam = total_lambda(&f, d).unwrap();
        assert!(sym.is_inverse_pair(&lam).unwrap());
        // and on a nontrivial group
        let g = NortonSeries::random(Group::cyclic(2), 12, -1, 13);
        let sym = total_sym(&g, 3).unwrap();
        let lam = total_lambda(&g, 3).unwrap();
        assert!(sym.is_inverse_pair(&lam).unwrap());
    }

    #[test]
    fn total_sym_of_zero_is_one() {
        let f = trivial_norton(PuiseuxSeries::zero(rat_int(6)));
        let s = total_sym(&f, 3).unwrap();
        for k in 1..=3usize {
            assert!(s.coefficient(k).is_zero(), "t^{k}");
        }
        let c0 = s.coefficient(0).value_at_class(0);
        assert_eq!(c0.coeff_int(0).unwrap().try_rational().unwrap(), rat_int(1));
    }

    #[test]
    fn total_sym_of_one_gives_partition_numbers() {
        let one = trivial_norton(PuiseuxSeries::rational_constant(rat_int(1), rat_int(4)));
        let s = total_sym(&one, 6).unwrap();
        for (k, p) in [1u64, 1, 2, 3, 5, 7].iter().enumerate() {
            assert_eq!(
                s.coefficient(k).value_at_class(0).coeff_int(0).unwrap().try_rational().unwrap(),
                rat_int(*p as i64)
            );
        }
    }

    #[test]
    fn generating_identity_on_j_and_z2() {
        // total_sym(f, 4) = exp(sum_(k=1)^4 T_k(f) t^k)
        let f = trivial_norton(j_expansion(20));
        let direct = total_sym(&f, 4).unwrap();
        let viaexp = total_sym_exponential(&f, 4).unwrap();
        for k in 0..=4usize {
            let a = direct.coefficient(k);
            let b = viaexp.coefficient(k);
            let bound = a.min_trunc().min(b.min_trunc());
            assert!(a.eq_up_to(b, &bound), "t^{k}");
        }
        let g = NortonSeries::random(Group::cyclic(2), 77, -1, 13);
        let direct = total_sym(&g, 3).unwrap();
        let viaexp = total_sym_exponential(&g, 3).unwrap();
        for k in 0..=3usize {
            let a = direct.coefficient(k);
            let b = viaexp.coefficient(k);
            let bound = a.min_trunc().min(b.min_trunc());
            assert!(a.eq_up_to(b, &bound), "t^{k}");
        }
    }

    #[test]
    fn extract_replicates_of_j_are_j() {
        let f = j_expansion(60);
        let reps = extract_replicates(&f, 4).unwrap();
        for (a, rep) in &reps {
            let bound = rep.trunc().clone();
            assert!(
                rep.eq_up_to(&f, &bound),
                "replicate {a} deviates below {bound}"
            );
            // frozen spot values
            if bound > rat_int(1) {
                assert_eq!(
                    rep.coeff_int(1).unwrap().try_rational().unwrap(),
                    rat_int(196884),
                    "a={a}"
                );
            }
            if bound > rat_int(2) {
                assert_eq!(
                    rep.coeff_int(2).unwrap().try_rational().unwrap(),
                    rat_int(21493760),
                    "a={a}"
                );
            }
        }
    }

    #[test]
    fn extract_replicates_of_bare_pole() {
        // f = q^-1: Phi_n = q^-n and the substitution sums telescope to zero
        let f = PuiseuxSeries::monomial(rat_int(-1), CycloElem::one(1), rat_int(30));
        let reps = extract_replicates(&f, 4).unwrap();
        for (a, rep) in &reps {
            assert_eq!(
                rep.coeff_int(-1).unwrap().try_rational().unwrap(),
                rat_int(1),
                "a={a}"
            );
            assert_eq!(rep.term_count(), 1, "a={a}");
        }
    }

    #[test]
    fn extract_replicates_detects_non_replicable() {
        // q^-1 + q + q^2 (zeros onward) fails at n = 2 with odd support
        let f = PuiseuxSeries::from_terms(
            vec![
                (rat_int(-1), CycloElem::one(1)),
                (rat_int(1), CycloElem::one(1)),
                (rat_int(2), CycloElem::one(1)),
            ],
            rat_int(24),
        )
        .unwrap();
        match extract_replicates(&f, 2) {
            Err(Error::NotReplicable { n, exponent }) => {
                assert_eq!(n, 2);
                assert!(!(exponent / rat_int(2)).is_integer());
            }
            other => panic!("expected non-replicability, got {other:?}"),
        }
    }

    #[test]
    fn verify_replicability_j() {
        let f = j_expansion(30);
        let r = verify_replicability(&f, 3).unwrap();
        assert!(r.identity_holds);
        assert!(r.all_constant);
        // lambda2_2 = a_1 computed via the inverse series
        assert_eq!(r.entries[0].constant.as_ref().unwrap(), &rat_int(196884));
    }

    #[test]
    fn verify_replicability_bare_pole() {
        let f = PuiseuxSeries::monomial(rat_int(-1), CycloElem::one(1), rat_int(20));
        let r = verify_replicability(&f, 4).unwrap();
        assert!(r.identity_holds);
        for e in &r.entries {
            assert!(e.is_constant);
            assert!(e.constant.as_ref().unwrap().is_zero(), "n={}", e.n);
        }
    }

    #[test]
    fn verify_replicability_negative_control() {
        let f = PuiseuxSeries::from_terms(
            vec![
                (rat_int(-1), CycloElem::one(1)),
                (rat_int(1), CycloElem::one(1)),
                (rat_int(2), CycloElem::one(1)),
            ],
            rat_int(30),
        )
        .unwrap();
        let r = verify_replicability(&f, 3).unwrap();
        assert!(!r.all_constant || !r.identity_holds);
        let first_bad = r.entries.iter().find(|e| !e.is_constant);
        assert!(first_bad.is_some());
    }

    #[test]
    fn level1_adams_and_sym() {
        let g = Group::cyclic(2);
        let chi = ClassFunction::new(g.clone(), vec![rat_int(1), rat_int(-1)]).unwrap();
        // adams 1 = chi
        assert_eq!(chi.adams(1), chi);
        // sym 2 at x: (chi(x)^2 + chi(x^2))/2 = 1
        let s2 = chi.sym(2);
        assert_eq!(s2.value_at(0), &rat_int(1));
        assert_eq!(s2.value_at(1), &rat_int(1));
    }

    #[test]
    fn level1_total_sym_of_one_is_geometric() {
        let chi = ClassFunction::constant(Group::cyclic(3), rat_int(1));
        let s = chi.total_sym(8);
        for (k, cf) in s.iter().enumerate() {
            for v in cf.values() {
                assert_eq!(v, &rat_int(1), "t^{k}");
            }
        }
    }

    #[test]
    fn level1_lambda_sym_inverse() {
        // Lambda_(-t)(chi) * S_t(chi) = 1 to t^6
        let g = Group::cyclic(4);
        let chi = ClassFunction::new(
            g.clone(),
            vec![rat_int(2), rat(1, 2), rat_int(-1), rat_int(3)],
        )
        .unwrap();
        let d = 6u64;
        let s = chi.total_sym(d);
        let lam: Vec<ClassFunction> = (0..=d).map(|k| chi.lambda(k)).collect();
        for k in 0..=d as usize {
            let mut acc = ClassFunction::constant(g.clone(), Rat::zero());
            for i in 0..=k {
                let sign = if (k - i) % 2 == 0 { Rat::one() } else { -Rat::one() };
                acc = acc.add(&s[i].mul(&lam[k - i]).scale(&sign));
            }
            if k == 0 {
                for v in acc.values() {
                    assert_eq!(v, &rat_int(1));
                }
            } else {
                assert!(acc.is_zero(), "t^{k}");
            }
        }
    }

    #[test]
    fn level1_sym_matches_direct_exp_construction() {
        let g = Group::cyclic(2);
        let chi = ClassFunction::new(g, vec![rat_int(1), rat_int(-1)]).unwrap();
        let s = chi.total_sym(5);
        for k in 0..=5u64 {
            assert_eq!(s[k as usize], chi.sym(k), "t^{k}");
        }
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partition_number(0), 1);
        assert_eq!(partition_number(5), 7);
        assert_eq!(partition_number(8), 22);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }
}
