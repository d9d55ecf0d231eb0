//! Finite groups, commuting pairs, simultaneous-conjugacy classes, the
//! integral SL2 action on pairs, orbit analysis for commuting permutation
//! pairs, and the lattice classification that turns them into Hecke triples.
//!
//! Elements are indices into a fixed enumeration of the carrier, so class
//! representatives ("minimal member under the enumeration order") and all
//! reports are deterministic.

use crate::error::{Error, Result};
use num_integer::Integer;
use std::collections::HashMap;

/// Default cap for brute-force enumeration over symmetric groups. `S8^2` is
/// above desk scale for the raw pair loop; the class-based enumeration used
/// here stays comfortable through `n = 8`.
pub const SYMMETRIC_CAP: usize = 8;

// ---------------------------------------------------------------------------
// Permutations
// ---------------------------------------------------------------------------

/// A permutation of `{0, .., n-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// Function composition: `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0u8; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u8;
        }
        Perm(out)
    }

    /// Builds a permutation from disjoint cycles (0-based entries).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
        let mut word: Vec<u8> = (0..n as u8).collect();
        for cycle in cycles {
            for i in 0..cycle.len() {
                word[cycle[i]] = cycle[(i + 1) % cycle.len()] as u8;
            }
        }
        Perm(word)
    }

    /// Lexicographic rank via the Lehmer code.
    pub fn lex_rank(&self) -> usize {
        let n = self.0.len();
        let mut rank = 0usize;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    /// Inverse of [`Perm::lex_rank`].
    pub fn from_lex_rank(n: usize, mut rank: usize) -> Perm {
        let mut factorials = vec![1usize; n + 1];
        for i in 1..=n {
            factorials[i] = factorials[i - 1] * i;
        }
        let mut pool: Vec<u8> = (0..n as u8).collect();
        let mut word = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorials[n - 1 - i];
            let idx = rank / f;
            rank %= f;
            word.push(pool.remove(idx));
        }
        Perm(word)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
enum Backend {
    /// Direct product of cyclic groups `Z/n1 x ... x Z/nk` in mixed radix.
    Cyclics(Vec<u64>),
    /// Symmetric group on `n` letters, elements cached in lexicographic
    /// order so that heavy enumeration avoids rank round-trips.
    Symmetric { n: usize, perms: Vec<Perm> },
    /// Explicit Cayley table, axioms verified on construction.
    Table {
        mult: Vec<Vec<usize>>,
        inv: Vec<usize>,
        labels: Vec<String>,
    },
}

/// A finite group with an enumerated carrier `0, .., order-1`. Element 0 is
/// always the identity.
#[derive(Debug, Clone)]
pub struct Group {
    backend: Backend,
    order: usize,
    label: String,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.order == other.order
    }
}

impl Group {
    pub fn trivial() -> Group {
        Group::cyclic(1)
    }

    pub fn cyclic(n: u64) -> Group {
        assert!(n >= 1);
        Group {
            backend: Backend::Cyclics(vec![n]),
            order: n as usize,
            label: format!("Z/{n}"),
        }
    }

    pub fn product_of_cyclics(moduli: &[u64]) -> Group {
        assert!(!moduli.is_empty() && moduli.iter().all(|&m| m >= 1));
        let order: u64 = moduli.iter().product();
        let label = moduli
            .iter()
            .map(|m| format!("Z/{m}"))
            .collect::<Vec<_>>()
            .join("x");
        Group {
            backend: Backend::Cyclics(moduli.to_vec()),
            order: order as usize,
            label,
        }
    }

    pub fn symmetric(n: usize) -> Result<Group> {
        if n > SYMMETRIC_CAP {
            return Err(Error::CapExceeded {
                n,
                cap: SYMMETRIC_CAP,
            });
        }
        let order: usize = (1..=n.max(1)).product();
        let perms = (0..order).map(|r| Perm::from_lex_rank(n, r)).collect();
        Ok(Group {
            backend: Backend::Symmetric { n, perms },
            order,
            label: format!("S{n}"),
        })
    }

    /// Builds a group from an explicit Cayley table. Group axioms are
    /// verified eagerly: closure, identity at index 0, inverses,
    /// associativity.
    pub fn from_cayley_table(labels: Vec<String>, mult: Vec<Vec<usize>>) -> Result<Group> {
        let n = labels.len();
        if n == 0 || mult.len() != n || mult.iter().any(|row| row.len() != n) {
            return Err(Error::BadCayleyTable("table is not square".into()));
        }
        if mult
            .iter()
            .any(|row| row.iter().any(|&x| x >= n))
        {
            return Err(Error::BadCayleyTable("entry out of range".into()));
        }
        for i in 0..n {
            if mult[0][i] != i || mult[i][0] != i {
                return Err(Error::BadCayleyTable(
                    "element 0 is not a two-sided identity".into(),
                ));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if mult[i][j] == 0 && mult[j][i] == 0 {
                    inv[i] = j;
                }
            }
            if inv[i] == usize::MAX {
                return Err(Error::BadCayleyTable(format!("element {i} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::BadCayleyTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Group {
            order: n,
            label: format!("table[{n}]"),
            backend: Backend::Table { mult, inv, labels },
        })
    }

    /// Parses a group spec: `S<n>`, `Z/<n>`, or products `Z/<a>xZ/<b>...`.
    pub fn parse_spec(spec: &str) -> Result<Group> {
        let s = spec.trim();
        if let Some(rest) = s.strip_prefix('S').or_else(|| s.strip_prefix('s')) {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::BadInput(format!("bad group spec `{spec}`")))?;
            return Group::symmetric(n);
        }
        if s == "1" {
            return Ok(Group::trivial());
        }
        let mut moduli = Vec::new();
        for part in s.split('x') {
            let part = part.trim();
            let rest = part
                .strip_prefix("Z/")
                .or_else(|| part.strip_prefix("z/"))
                .ok_or_else(|| Error::BadInput(format!("bad group spec `{spec}`")))?;
            let m: u64 = rest
                .parse()
                .map_err(|_| Error::BadInput(format!("bad group spec `{spec}`")))?;
            if m == 0 {
                return Err(Error::BadInput("modulus must be positive".into()));
            }
            moduli.push(m);
        }
        if moduli.is_empty() {
            return Err(Error::BadInput(format!("bad group spec `{spec}`")));
        }
        Ok(Group::product_of_cyclics(&moduli))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.backend {
            Backend::Cyclics(ms) => {
                let (mut a, mut b) = (a as u64, b as u64);
                let mut out: u64 = 0;
                let mut weight: u64 = 1;
                for &m in ms {
                    let da = a % m;
                    let db = b % m;
                    out += ((da + db) % m) * weight;
                    weight *= m;
                    a /= m;
                    b /= m;
                }
                out as usize
            }
            Backend::Symmetric { perms, .. } => perms[a].compose(&perms[b]).lex_rank(),
            Backend::Table { mult, .. } => mult[a][b],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        match &self.backend {
            Backend::Cyclics(ms) => {
                let mut a = a as u64;
                let mut out: u64 = 0;
                let mut weight: u64 = 1;
                for &m in ms {
                    let da = a % m;
                    out += ((m - da) % m) * weight;
                    weight *= m;
                    a /= m;
                }
                out as usize
            }
            Backend::Symmetric { perms, .. } => perms[a].inverse().lex_rank(),
            Backend::Table { inv, .. } => inv[a],
        }
    }

    pub fn pow(&self, g: usize, e: i64) -> usize {
        let (mut base, mut e) = if e < 0 {
            (self.inv(g), (-e) as u64)
        } else {
            (g, e as u64)
        };
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn conj(&self, s: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(s), g), s)
    }

    pub fn element_order(&self, g: usize) -> u64 {
        let mut k = 1u64;
        let mut x = g;
        while x != self.identity() {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn element_label(&self, g: usize) -> String {
        match &self.backend {
            Backend::Cyclics(ms) => {
                let mut a = g as u64;
                let mut parts = Vec::new();
                for &m in ms {
                    parts.push((a % m).to_string());
                    a /= m;
                }
                if parts.len() == 1 {
                    parts.pop().unwrap()
                } else {
                    format!("({})", parts.join(","))
                }
            }
            Backend::Symmetric { perms, .. } => format!("{:?}", perms[g].0),
            Backend::Table { labels, .. } => labels[g].clone(),
        }
    }

    /// The permutation behind an element of a symmetric-group backend.
    pub fn as_perm(&self, g: usize) -> Option<Perm> {
        match &self.backend {
            Backend::Symmetric { perms, .. } => Some(perms[g].clone()),
            _ => None,
        }
    }

    pub fn perm_index(&self, p: &Perm) -> Option<usize> {
        match &self.backend {
            Backend::Symmetric { n, .. } if p.degree() == *n => Some(p.lex_rank()),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match &self.backend {
            Backend::Cyclics(_) => true,
            Backend::Symmetric { n, .. } => *n <= 2,
            Backend::Table { .. } => self
                .elements()
                .all(|a| self.elements().all(|b| self.commute(a, b))),
        }
    }
}

// ---------------------------------------------------------------------------
// Conjugacy classes and commuting-pair classes
// ---------------------------------------------------------------------------

/// Conjugacy classes of `G`, each sorted, ordered by minimal element.
pub fn conjugacy_classes(group: &Group) -> Vec<Vec<usize>> {
    match &group.backend {
        // abelian: every class is a singleton
        Backend::Cyclics(_) => group.elements().map(|g| vec![g]).collect(),
        // classes are cycle types; bucket instead of orbit-chasing
        Backend::Symmetric { perms, .. } => {
            let mut buckets: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
            for (i, p) in perms.iter().enumerate() {
                buckets.entry(cycle_type(p)).or_default().push(i);
            }
            let mut classes: Vec<Vec<usize>> = buckets.into_values().collect();
            classes.sort_by_key(|c| c[0]);
            classes
        }
        Backend::Table { .. } => {
            let n = group.order();
            let mut seen = vec![false; n];
            let mut classes = Vec::new();
            for g in 0..n {
                if seen[g] {
                    continue;
                }
                let mut orbit: Vec<usize> = group.elements().map(|s| group.conj(s, g)).collect();
                orbit.sort_unstable();
                orbit.dedup();
                for &x in &orbit {
                    seen[x] = true;
                }
                classes.push(orbit);
            }
            classes
        }
    }
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(p: &Perm) -> Vec<u8> {
    let n = p.degree();
    let mut seen = vec![false; n];
    let mut ty = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u8;
        let mut x = start;
        loop {
            seen[x] = true;
            len += 1;
            x = p.apply(x);
            if x == start {
                break;
            }
        }
        ty.push(len);
    }
    ty.sort_unstable();
    ty
}

/// A commuting pair of group elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommutingPair {
    pub g: usize,
    pub h: usize,
}

impl CommutingPair {
    pub fn new(group: &Group, g: usize, h: usize) -> Result<Self> {
        if !group.commute(g, h) {
            return Err(Error::NonCommuting);
        }
        Ok(CommutingPair { g, h })
    }
}

/// A simultaneous-conjugacy class of commuting pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClass {
    /// Lexicographically minimal member of the orbit.
    pub representative: CommutingPair,
    pub class_size: usize,
    pub centralizer_order: usize,
}

/// Lexicographically minimal simultaneous conjugate of `(g, h)`.
pub fn canonical_pair(group: &Group, g: usize, h: usize) -> (usize, usize) {
    let mut best = (usize::MAX, usize::MAX);
    for s in group.elements() {
        let cand = (group.conj(s, g), group.conj(s, h));
        if cand < best {
            best = cand;
        }
    }
    best
}

/// Complete, duplicate-free list of simultaneous-conjugacy classes of
/// commuting pairs, ordered by representative.
///
/// Enumeration is class-based rather than a raw `|G|^2` loop: for each
/// conjugacy-class representative `g` (minimal in its class), the commuting
/// partners are exactly the centralizer `C(g)`, and two pairs `(g, h)`,
/// `(g, h')` are simultaneously conjugate iff `h, h'` lie in one
/// `C(g)`-conjugation orbit. The minimal orbit member makes the
/// representative the minimal pair of the whole `G`-orbit.
pub fn pair_classes(group: &Group) -> Vec<PairClass> {
    let mut out = match &group.backend {
        Backend::Symmetric { perms, .. } => pair_classes_symmetric(group, perms),
        _ => pair_classes_generic(group),
    };
    out.sort_by_key(|c| (c.representative.g, c.representative.h));
    out
}

fn pair_classes_generic(group: &Group) -> Vec<PairClass> {
    let order = group.order();
    let mut out = Vec::new();
    for class in conjugacy_classes(group) {
        let g = class[0];
        let cent: Vec<usize> = group.elements().filter(|&s| group.commute(s, g)).collect();
        let cg = cent.len();
        debug_assert_eq!(cg * class.len(), order);
        let in_cent: HashMap<usize, usize> =
            cent.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut seen = vec![false; cg];
        for (hi, &h) in cent.iter().enumerate() {
            if seen[hi] {
                continue;
            }
            let mut orbit: Vec<usize> = cent.iter().map(|&c| group.conj(c, h)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &x in &orbit {
                seen[in_cent[&x]] = true;
            }
            let stab = cg / orbit.len();
            out.push(PairClass {
                representative: CommutingPair { g, h: orbit[0] },
                class_size: order / stab,
                centralizer_order: stab,
            });
        }
    }
    out
}

/// Same orbit structure as the generic path, but all conjugation happens on
/// cached permutation words; ranks only materialize for the output.
fn pair_classes_symmetric(group: &Group, perms: &[Perm]) -> Vec<PairClass> {
    let order = group.order();
    let mut out = Vec::new();
    for class in conjugacy_classes(group) {
        let g = class[0];
        let pg = &perms[g];
        let cent: Vec<&Perm> = perms.iter().filter(|p| p.compose(pg) == pg.compose(p)).collect();
        let cg = cent.len();
        debug_assert_eq!(cg * class.len(), order);
        let cent_inv: Vec<Perm> = cent.iter().map(|p| p.inverse()).collect();
        let mut seen: HashMap<&[u8], bool> = cent.iter().map(|p| (p.0.as_slice(), false)).collect();
        for h in &cent {
            if seen[h.0.as_slice()] {
                continue;
            }
            let mut orbit: Vec<Perm> = cent_inv
                .iter()
                .zip(cent.iter())
                .map(|(ci, c)| ci.compose(h).compose(c))
                .collect();
            orbit.sort_unstable_by(|a, b| a.0.cmp(&b.0));
            orbit.dedup();
            for x in &orbit {
                if let Some(v) = seen.get_mut(x.0.as_slice()) {
                    *v = true;
                }
            }
            let stab = cg / orbit.len();
            out.push(PairClass {
                representative: CommutingPair {
                    g,
                    h: orbit[0].lex_rank(),
                },
                class_size: order / stab,
                centralizer_order: stab,
            });
        }
    }
    out
}

/// Order of the generalized centralizer `Stab_G(g, h)`.
pub fn pair_centralizer_order(group: &Group, g: usize, h: usize) -> usize {
    group
        .elements()
        .filter(|&s| group.conj(s, g) == g && group.conj(s, h) == h)
        .count()
}

// ---------------------------------------------------------------------------
// SL2(Z) action on pairs
// ---------------------------------------------------------------------------

/// Integral 2x2 matrix `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

pub fn det2(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

pub const SL2_S: Mat2 = [[0, 1], [-1, 0]];
pub const SL2_T: Mat2 = [[1, 1], [0, 1]];

/// The element part of the right action of `gamma = [[a,b],[c,d]]` on moduli
/// points: `(g, h) -> (g^a h^c, g^b h^d)`. Requires `det = 1`.
pub fn sl2_act(group: &Group, pair: CommutingPair, gamma: &Mat2) -> Result<CommutingPair> {
    let det = det2(gamma);
    if det != 1 {
        return Err(Error::DetNotOne(det));
    }
    let [[a, b], [c, d]] = *gamma;
    let g1 = group.mul(group.pow(pair.g, a), group.pow(pair.h, c));
    let h1 = group.mul(group.pow(pair.g, b), group.pow(pair.h, d));
    debug_assert!(group.commute(g1, h1));
    Ok(CommutingPair { g: g1, h: h1 })
}

// ---------------------------------------------------------------------------
// Sublattices and Hecke triples
// ---------------------------------------------------------------------------

/// An index-`n` sublattice of `Z^2` in canonical `(a, b, d)` form:
/// generators `(d, 0)` and `(-b, a)`, with `0 <= b < d` and `n = a d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Sublattice {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl Sublattice {
    pub fn new(a: u64, b: u64, d: u64) -> Result<Self> {
        if a == 0 || d == 0 || b >= d {
            return Err(Error::BadInput(format!("bad triple ({a},{b},{d})")));
        }
        Ok(Sublattice { a, b, d })
    }

    pub fn index(&self) -> u64 {
        self.a * self.d
    }

    pub fn generators(&self) -> [(i64, i64); 2] {
        [(self.d as i64, 0), (-(self.b as i64), self.a as i64)]
    }

    /// All triples `(a, b, d)` with `a d = n`, `0 <= b < d`, ordered.
    pub fn all_of_index(n: u64) -> Vec<Sublattice> {
        let mut out = Vec::new();
        for d in crate::exact_arith::divisors(n) {
            let a = n / d;
            for b in 0..d {
                out.push(Sublattice { a, b, d });
            }
        }
        out.sort_by_key(|s| (s.a, s.d, s.b));
        out
    }
}

/// Canonical `(a, b, d)` form of the finite-index sublattice spanned by the
/// given generators: `a` is the least positive second coordinate in the
/// lattice, `d Z x {0}` is the intersection with the first axis, and `b` is
/// `-x mod d` for any `(x, a)` in the lattice.
pub fn canonical_triple(generators: &[(i64, i64)]) -> Result<Sublattice> {
    // Integer row reduction on the second coordinate.
    let mut rows: Vec<(i64, i64)> = generators.to_vec();
    loop {
        rows.retain(|r| *r != (0, 0));
        let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].1 != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        nz.sort_by_key(|&i| rows[i].1.abs());
        let pivot = nz[0];
        let (px, py) = rows[pivot];
        for &i in &nz[1..] {
            let q = rows[i].1.div_euclid(py);
            rows[i].0 -= q * px;
            rows[i].1 -= q * py;
        }
    }
    rows.retain(|r| *r != (0, 0));
    let with_y: Vec<(i64, i64)> = rows.iter().copied().filter(|r| r.1 != 0).collect();
    let only_x: Vec<i64> = rows.iter().filter(|r| r.1 == 0).map(|r| r.0).collect();
    if with_y.len() != 1 || only_x.is_empty() {
        return Err(Error::RankDeficient);
    }
    let (mut x, mut a) = with_y[0];
    if a < 0 {
        x = -x;
        a = -a;
    }
    let d = only_x.iter().fold(0i64, |acc, &v| acc.gcd(&v));
    if d == 0 {
        return Err(Error::RankDeficient);
    }
    let b = (-x).rem_euclid(d);
    Sublattice::new(a as u64, b as u64, d as u64)
}

// ---------------------------------------------------------------------------
// Orbit decomposition of commuting permutation pairs
// ---------------------------------------------------------------------------

/// One `<sigma, rho>`-orbit with the canonical triple of its point
/// stabilizer lattice.
#[derive(Debug, Clone)]
pub struct OrbitLattice {
    pub orbit: Vec<usize>,
    pub lattice: Sublattice,
}

/// Partitions `{0, .., n-1}` into orbits of the `Z^2`-action
/// `(i, j) . x = sigma^i rho^j (x)` and returns for each orbit the canonical
/// triple of the stabilizer `{(i, j) : sigma^i rho^j x = x}` (independent of
/// the base point within the orbit since the acting group is abelian).
pub fn orbit_decomposition(sigma: &Perm, rho: &Perm, n: usize) -> Result<Vec<OrbitLattice>> {
    if !sigma.commutes_with(rho) {
        return Err(Error::NonCommuting);
    }
    assert_eq!(sigma.degree(), n);
    assert_eq!(rho.degree(), n);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        // sigma-cycle of x
        let mut sigma_cycle = vec![x];
        let mut y = sigma.apply(x);
        while y != x {
            sigma_cycle.push(y);
            y = sigma.apply(y);
        }
        let pos: HashMap<usize, usize> = sigma_cycle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // a = least j > 0 with rho^j(x) in the sigma-cycle of x;
        // within the orbit those cosets exhaust it.
        let mut a = 0usize;
        let mut t = 0usize;
        let mut z = x;
        let mut orbit: Vec<usize> = sigma_cycle.clone();
        for j in 1..=n {
            z = rho.apply(z);
            if let Some(&p) = pos.get(&z) {
                a = j;
                t = p;
                break;
            }
            // accumulate the j-th sigma-coset
            let mut w = z;
            loop {
                orbit.push(w);
                w = sigma.apply(w);
                if w == z {
                    break;
                }
            }
        }
        debug_assert!(a > 0, "rho-power never returned to the sigma-cycle");
        let k = orbit.len();
        debug_assert_eq!(k % a, 0);
        let d = (k / a) as u64;
        debug_assert_eq!(sigma_cycle.len() as u64, d);
        // sigma^t rho^a (x) = sigma^t (sigma-cycle position t of x ...) -> x
        // means (-t, a) is in the stabilizer; b = t mod d.
        let b = (t as u64) % d;
        let lattice = Sublattice::new(a as u64, b, d)?;
        debug_assert_eq!(lattice.index() as usize, k);
        for &v in &orbit {
            seen[v] = true;
        }
        orbit.sort_unstable();
        out.push(OrbitLattice { orbit, lattice });
    }
    out.sort_by_key(|o| o.orbit[0]);
    Ok(out)
}

/// `(-1)` to the number of even-cardinality `<sigma, rho>`-orbits.
pub fn pair_sgn(sigma: &Perm, rho: &Perm, n: usize) -> Result<i64> {
    let orbits = orbit_decomposition(sigma, rho, n)?;
    let evens = orbits.iter().filter(|o| o.orbit.len() % 2 == 0).count();
    Ok(if evens % 2 == 0 { 1 } else { -1 })
}

/// All `S_n`-classes of transitive commuting pairs, each with its canonical
/// triple. The class-to-triple map is a bijection onto
/// `{(a, b, d) : a d = n, 0 <= b < d}`.
pub fn transitive_pair_classes(n: usize) -> Result<Vec<(PairClass, Sublattice)>> {
    let group = Group::symmetric(n)?;
    let mut out = Vec::new();
    for class in pair_classes(&group) {
        let sigma = group.as_perm(class.representative.g).unwrap();
        let rho = group.as_perm(class.representative.h).unwrap();
        let orbits = orbit_decomposition(&sigma, &rho, n)?;
        if orbits.len() == 1 && orbits[0].orbit.len() == n {
            out.push((class, orbits[0].lattice));
        }
    }
    Ok(out)
}

/// Invariant factors of `Z^2 / Lambda` via the Smith normal form of the
/// 2x2 generator matrix: `d1 = gcd` of the entries, `d1 d2 = |det|`;
/// trivial factors are dropped.
pub fn abelian_invariants(lattice: &Sublattice) -> Vec<u64> {
    let [(g00, g01), (g10, g11)] = lattice.generators();
    let d1 = g00.gcd(&g01).gcd(&g10.gcd(&g11)) as u64;
    let det = (g00 * g11 - g01 * g10).unsigned_abs();
    let d2 = det / d1;
    let mut out = Vec::new();
    if d1 > 1 {
        out.push(d1);
    }
    if d2 > 1 {
        out.push(d2);
    }
    if out.is_empty() && det == 1 {
        // full lattice: trivial quotient
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_rank_roundtrip() {
        for n in 1..=5 {
            let size: usize = (1..=n).product();
            for r in 0..size {
                let p = Perm::from_lex_rank(n, r);
                assert_eq!(p.lex_rank(), r);
            }
        }
        assert_eq!(Perm::identity(4).lex_rank(), 0);
    }

    #[test]
    fn cayley_table_validation() {
        // Z/2 as an explicit table
        let g = Group::from_cayley_table(
            vec!["e".into(), "x".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
        // broken: no inverse for 1
        assert!(Group::from_cayley_table(
            vec!["e".into(), "x".into()],
            vec![vec![0, 1], vec![1, 1]],
        )
        .is_err());
        // broken associativity/latin-square
        assert!(Group::from_cayley_table(
            vec!["e".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
        )
        .is_err());
    }

    #[test]
    fn element_orders_divide_group_order() {
        for g in [Group::cyclic(6), Group::symmetric(4).unwrap(), Group::product_of_cyclics(&[2, 2])] {
            for x in g.elements() {
                assert_eq!(g.order() as u64 % g.element_order(x), 0);
            }
        }
    }

    #[test]
    fn pair_classes_trivial_group() {
        let g = Group::trivial();
        let classes = pair_classes(&g);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].centralizer_order, 1);
        assert_eq!(classes[0].class_size, 1);
    }

    #[test]
    fn pair_classes_z2_all_singletons() {
        let g = Group::cyclic(2);
        let classes = pair_classes(&g);
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.class_size == 1));
    }

    #[test]
    fn pair_classes_s3_brute_force_oracle() {
        // Oracle: raw enumeration of commuting pairs and simultaneous orbits.
        let g = Group::symmetric(3).unwrap();
        let mut pairs = Vec::new();
        for a in g.elements() {
            for b in g.elements() {
                if g.commute(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        assert_eq!(pairs.len(), 18); // sum over g of |C(g)|
        let mut canon: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| canonical_pair(&g, a, b))
            .collect();
        canon.sort_unstable();
        canon.dedup();
        assert_eq!(canon.len(), 8);

        let classes = pair_classes(&g);
        assert_eq!(classes.len(), 8);
        let reps: Vec<(usize, usize)> = classes
            .iter()
            .map(|c| (c.representative.g, c.representative.h))
            .collect();
        assert_eq!(reps, canon);
        assert_eq!(classes.iter().map(|c| c.class_size).sum::<usize>(), 18);
        for c in &classes {
            assert_eq!(c.class_size * c.centralizer_order, g.order());
            assert_eq!(
                c.centralizer_order,
                pair_centralizer_order(&g, c.representative.g, c.representative.h)
            );
        }
    }

    #[test]
    fn abelian_group_pair_classes_count() {
        for g in [Group::cyclic(3), Group::product_of_cyclics(&[2, 2])] {
            let classes = pair_classes(&g);
            assert_eq!(classes.len(), g.order() * g.order());
            assert!(classes.iter().all(|c| c.class_size == 1));
        }
    }

    #[test]
    fn sl2_act_examples() {
        let g = Group::symmetric(3).unwrap();
        let p3 = Perm::from_cycles(3, &[&[0, 1, 2]]); // 3-cycle
        let gi = g.perm_index(&p3).unwrap();
        let pair = CommutingPair::new(&g, gi, g.pow(gi, 2)).unwrap();
        // identity
        let id = [[1, 0], [0, 1]];
        assert_eq!(sl2_act(&g, pair, &id).unwrap(), pair);
        // T: (g, h) -> (g, gh)
        let t = sl2_act(&g, pair, &SL2_T).unwrap();
        assert_eq!(t.g, pair.g);
        assert_eq!(t.h, g.mul(pair.g, pair.h));
        // S: (g, h) -> (h^-1, g)
        let s = sl2_act(&g, pair, &SL2_S).unwrap();
        assert_eq!(s.g, g.inv(pair.h));
        assert_eq!(s.h, pair.g);
        // det != 1 rejected
        assert!(sl2_act(&g, pair, &[[2, 0], [0, 1]]).is_err());
    }

    #[test]
    fn sl2_is_right_action_on_st_words() {
        let g = Group::product_of_cyclics(&[4, 2]);
        let pairs: Vec<CommutingPair> = pair_classes(&g)
            .into_iter()
            .map(|c| c.representative)
            .collect();
        let gens = [SL2_S, SL2_T];
        // all words of length <= 4 in {S, T}
        let mut words: Vec<Vec<Mat2>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for m in &gens {
                    let mut w2 = w.clone();
                    w2.push(*m);
                    next.push(w2);
                }
            }
            words.extend(next.clone());
        }
        for w in words.iter().filter(|w| w.len() >= 2) {
            let (w1, w2) = w.split_at(w.len() / 2);
            let m1 = w1.iter().fold([[1, 0], [0, 1]], |acc, m| mat_mul(&acc, m));
            let m2 = w2.iter().fold([[1, 0], [0, 1]], |acc, m| mat_mul(&acc, m));
            let m12 = mat_mul(&m1, &m2);
            for &p in &pairs {
                let step = sl2_act(&g, sl2_act(&g, p, &m1).unwrap(), &m2).unwrap();
                let direct = sl2_act(&g, p, &m12).unwrap();
                assert_eq!(step, direct);
            }
        }
    }

    #[test]
    fn orbit_decomposition_sigma2_examples() {
        let e = Perm::identity(2);
        let tr = Perm::from_cycles(2, &[&[0, 1]]);
        // ((12), e): lattice (1, 0, 2)
        let o = orbit_decomposition(&tr, &e, 2).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].lattice, Sublattice { a: 1, b: 0, d: 2 });
        // (e, (12)): lattice (2, 0, 1)
        let o = orbit_decomposition(&e, &tr, 2).unwrap();
        assert_eq!(o[0].lattice, Sublattice { a: 2, b: 0, d: 1 });
        // ((12), (12)): lattice (1, 1, 2)
        let o = orbit_decomposition(&tr, &tr, 2).unwrap();
        assert_eq!(o[0].lattice, Sublattice { a: 1, b: 1, d: 2 });
    }

    #[test]
    fn orbit_sizes_partition_n() {
        let sigma = Perm::from_cycles(6, &[&[0, 1, 2], &[3, 4]]);
        let rho = Perm::from_cycles(6, &[&[0, 1, 2]]);
        assert!(sigma.commutes_with(&rho));
        let o = orbit_decomposition(&sigma, &rho, 6).unwrap();
        let total: usize = o.iter().map(|x| x.orbit.len()).sum();
        assert_eq!(total, 6);
        for ol in &o {
            assert_eq!(ol.lattice.index() as usize, ol.orbit.len());
        }
    }

    #[test]
    fn orbit_rejects_non_commuting() {
        let s = Perm::from_cycles(3, &[&[0, 1]]);
        let r = Perm::from_cycles(3, &[&[1, 2]]);
        assert!(orbit_decomposition(&s, &r, 3).is_err());
    }

    #[test]
    fn canonical_triple_examples() {
        assert_eq!(
            canonical_triple(&[(2, 0), (0, 1)]).unwrap(),
            Sublattice { a: 1, b: 0, d: 2 }
        );
        assert_eq!(
            canonical_triple(&[(1, 0), (0, 1)]).unwrap(),
            Sublattice { a: 1, b: 0, d: 1 }
        );
        // span{(3,0),(1,1)}: a=1, d=3, b = -1 mod 3 = 2
        assert_eq!(
            canonical_triple(&[(3, 0), (1, 1)]).unwrap(),
            Sublattice { a: 1, b: 2, d: 3 }
        );
        assert!(canonical_triple(&[(2, 4), (1, 2)]).is_err());
    }

    #[test]
    fn canonical_triple_invariant_under_regeneration() {
        // Replacing the basis by a random unimodular image leaves the triple
        // fixed.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for lat in Sublattice::all_of_index(12) {
            let [v1, v2] = lat.generators();
            for _ in 0..20 {
                // unimodular [[p, q], [r, s]] with ps - qr = +-1 via random
                // elementary operations
                let mut w1 = v1;
                let mut w2 = v2;
                for _ in 0..6 {
                    let k: i64 = rng.gen_range(-3..=3);
                    if rng.gen_bool(0.5) {
                        w1 = (w1.0 + k * w2.0, w1.1 + k * w2.1);
                    } else {
                        w2 = (w2.0 + k * w1.0, w2.1 + k * w1.1);
                    }
                    if rng.gen_bool(0.3) {
                        std::mem::swap(&mut w1, &mut w2);
                    }
                }
                assert_eq!(canonical_triple(&[w1, w2]).unwrap(), lat);
            }
        }
    }

    #[test]
    fn transitive_pair_classes_small() {
        assert_eq!(transitive_pair_classes(1).unwrap().len(), 1);
        assert_eq!(
            transitive_pair_classes(1).unwrap()[0].1,
            Sublattice { a: 1, b: 0, d: 1 }
        );
        let c2 = transitive_pair_classes(2).unwrap();
        let mut triples: Vec<Sublattice> = c2.iter().map(|(_, l)| *l).collect();
        triples.sort_by_key(|s| (s.a, s.d, s.b));
        assert_eq!(
            triples,
            vec![
                Sublattice { a: 1, b: 0, d: 2 },
                Sublattice { a: 1, b: 1, d: 2 },
                Sublattice { a: 2, b: 0, d: 1 },
            ]
        );
    }

    #[test]
    fn transitive_count_is_divisor_sum_and_bijective() {
        let sigma = |n: u64| crate::exact_arith::divisors(n).iter().sum::<u64>();
        for n in 1..=6usize {
            let classes = transitive_pair_classes(n).unwrap();
            assert_eq!(classes.len() as u64, sigma(n as u64), "n={n}");
            let mut got: Vec<Sublattice> = classes.iter().map(|(_, l)| *l).collect();
            got.sort_by_key(|s| (s.a, s.d, s.b));
            assert_eq!(got, Sublattice::all_of_index(n as u64), "n={n}");
        }
    }

    #[test]
    fn transitive_centralizer_is_generated_subgroup() {
        // |C(sigma, rho)| = n and C(sigma, rho) = <sigma, rho> for
        // transitive pairs, n <= 6.
        for n in 1..=6usize {
            let group = Group::symmetric(n).unwrap();
            for (class, _) in transitive_pair_classes(n).unwrap() {
                assert_eq!(class.centralizer_order, n);
                let s = class.representative.g;
                let r = class.representative.h;
                // generated subgroup
                let mut gen: Vec<usize> = vec![group.identity()];
                loop {
                    let mut next = gen.clone();
                    for &x in &gen {
                        next.push(group.mul(x, s));
                        next.push(group.mul(x, r));
                    }
                    next.sort_unstable();
                    next.dedup();
                    if next.len() == gen.len() {
                        break;
                    }
                    gen = next;
                }
                let cent: Vec<usize> = group
                    .elements()
                    .filter(|&x| group.conj(x, s) == s && group.conj(x, r) == r)
                    .collect();
                assert_eq!(gen, cent, "n={n}");
            }
        }
    }

    #[test]
    fn pair_sgn_examples() {
        let e3 = Perm::identity(3);
        assert_eq!(pair_sgn(&e3, &e3, 3).unwrap(), 1);
        let tr = Perm::from_cycles(2, &[&[0, 1]]);
        assert_eq!(pair_sgn(&tr, &tr, 2).unwrap(), -1);
        let dd = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(pair_sgn(&dd, &Perm::identity(4), 4).unwrap(), 1);
    }

    #[test]
    fn abelian_invariants_examples() {
        assert_eq!(abelian_invariants(&Sublattice { a: 1, b: 0, d: 2 }), vec![2]);
        assert_eq!(abelian_invariants(&Sublattice { a: 2, b: 0, d: 2 }), vec![2, 2]);
        assert_eq!(abelian_invariants(&Sublattice { a: 1, b: 1, d: 2 }), vec![2]);
        assert!(abelian_invariants(&Sublattice { a: 1, b: 0, d: 1 }).is_empty());
    }

    #[test]
    fn abelian_invariants_match_generated_subgroup() {
        // For each transitive pair, the invariant factors of Z^2/Lambda match
        // the structure of <sigma, rho> computed directly: the exponent is
        // the largest element order, and |A| / exponent the complement.
        for n in 2..=6usize {
            let group = Group::symmetric(n).unwrap();
            for (class, lat) in transitive_pair_classes(n).unwrap() {
                let inv = abelian_invariants(&lat);
                let prod: u64 = inv.iter().product::<u64>().max(1);
                assert_eq!(prod, n as u64);
                // subgroup generated by the pair
                let s = class.representative.g;
                let r = class.representative.h;
                let mut gen: Vec<usize> = vec![group.identity()];
                loop {
                    let mut next = gen.clone();
                    for &x in &gen {
                        next.push(group.mul(x, s));
                        next.push(group.mul(x, r));
                    }
                    next.sort_unstable();
                    next.dedup();
                    if next.len() == gen.len() {
                        break;
                    }
                    gen = next;
                }
                let exponent = gen.iter().map(|&x| group.element_order(x)).max().unwrap();
                match inv.len() {
                    0 => assert_eq!(exponent, 1),
                    1 => assert_eq!(exponent, inv[0]),
                    2 => {
                        assert_eq!(exponent, inv[1]);
                        assert_eq!(gen.len() as u64, inv[0] * inv[1]);
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn parse_specs() {
        assert_eq!(Group::parse_spec("S3").unwrap().label(), "S3");
        assert_eq!(Group::parse_spec("Z/4").unwrap().order(), 4);
        assert_eq!(Group::parse_spec("Z/2xZ/2").unwrap().order(), 4);
        assert_eq!(Group::parse_spec("1").unwrap().order(), 1);
        assert!(Group::parse_spec("Q8").is_err());
    }
}
