use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid window [{lo}, {hi}]: lo must not exceed hi")]
    InvalidWindow { lo: i64, hi: i64 },

    #[error("window of width {width} exceeds the cap of {cap} integers")]
    WindowTooLarge { width: u64, cap: u64 },

    #[error("malformed set spec: {0}")]
    MalformedSpec(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("gap bound for C = {c} cannot be certified: {reason}")]
    UncertifiableTail { c: u64, reason: String },

    #[error("gcd(h, s - t) = {d} for h = {h}, s = {s}, t = {t}; the construction needs gcd 1")]
    GcdViolation { h: i64, s: i64, t: i64, d: i64 },

    #[error("domain constraint violated: {0}")]
    DomainConstraint(String),

    #[error("{n} is not congruent to t - s modulo {h}")]
    WrongResidue { n: i64, h: i64 },

    #[error("requested target [{lo}, {hi}] exceeds the exact range ending at {safe_hi}")]
    TargetExceedsSafeRange { lo: i64, hi: i64, safe_hi: i64 },

    #[error("{b} already belongs to the set")]
    BNotOutside { b: i64 },

    #[error("{n} lies outside the domain")]
    OutsideDomain { n: i64 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("probe budget of {budget} exhausted while {context}")]
    BudgetExhausted { budget: u64, context: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
