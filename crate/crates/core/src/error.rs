//! Crate-wide error type.

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1} (embed into the lcm order first)")]
    OrderMismatch(u64, u64),
    #[error("order {target} is not a multiple of the element order {have}")]
    BadEmbedding { have: u64, target: u64 },
    #[error("cannot invert a zero series")]
    ZeroSeries,
    #[error("substitution requires 0 <= b < d, got b={b}, d={d}")]
    BadSubstitution { b: u64, d: u64 },
    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),
    #[error("series is not in normalized form q^-1 + O(q) with rational coefficients: {0}")]
    NotNormalized(String),
    #[error("insufficient truncation: need order >= {needed}, have {have}")]
    InsufficientTruncation { needed: BigRational, have: BigRational },
    #[error("elements do not commute")]
    NonCommuting,
    #[error("matrix determinant must be 1, got {0}")]
    DetNotOne(i64),
    #[error("generators span a rank-deficient sublattice")]
    RankDeficient,
    #[error("enumeration cap exceeded: n={n} > cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("map is not a group homomorphism: a({x})*a({y}) != a({x}*{y})")]
    NonHomomorphism { x: usize, y: usize },
    #[error("Norton series are defined over different groups")]
    GroupMismatch,
    #[error("missing replicate f^({0})")]
    MissingReplicate(u64),
    #[error("series is not replicable: residual at n={n} has a bad term at exponent {exponent}")]
    NotReplicable { n: u64, exponent: BigRational },
    #[error("{0} must divide {1}")]
    NotDivisor(u64, u64),
    #[error("element {0} does not generate Z/{1}")]
    NonGenerator(usize, u64),
    #[error("malformed input: {0}")]
    BadInput(String),
    #[error("invalid Cayley table: {0}")]
    BadCayleyTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
