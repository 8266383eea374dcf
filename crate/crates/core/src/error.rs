use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("division by zero in GF({0})")]
    ZeroInverse(u64),

    #[error("binomial arguments out of range: C({a}, {b}) with bound {bound}")]
    BinomialRange { a: u64, b: u64, bound: u64 },

    #[error("exponent {exp} at variable x{var} exceeds the truncation bound")]
    ExponentOutOfRange { var: usize, exp: u32 },

    #[error("monomial with exponent p may only be a pure generator x_i^(p)")]
    MixedTopExponent,

    #[error("cannot parse monomial `{0}`: {1}")]
    MonomialParse(String, String),

    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),

    #[error("element contains monomial `{0}` outside the algebra basis")]
    OutsideSpan(String),

    #[error("bracket of basis pair ({i}, {j}) escapes the algebra span at `{term}`")]
    ClosureViolation { i: usize, j: usize, term: String },

    #[error("bracket term violates grade additivity in box (g={g}, k={k})")]
    GradeViolation { g: i64, k: usize },

    #[error("memory budget exceeded: {used} entries stored, budget {budget} (box can be resumed)")]
    MemoryBudget { used: usize, budget: usize },

    #[error("derived ideal span is not aligned with the monomial basis")]
    NonMonomialSpan,

    #[error("{0}")]
    Config(String),

    #[error("journal error: {0}")]
    Journal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
