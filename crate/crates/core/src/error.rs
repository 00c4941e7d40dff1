//! Crate-wide error type.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by nrlab-core operations.
///
/// Every operation is total over its documented preconditions; these
/// variants are the documented refusals, not panics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{value} is not an odd prime in the supported range: {reason}")]
    NotOddPrime { value: u64, reason: &'static str },

    #[error("invalid prime range [{lo}, {hi}]: lo must satisfy 2 <= lo <= hi")]
    RangeOrder { lo: u64, hi: u64 },

    #[error("k = {k} out of range: only {available} nonresidues exist below p = {p}")]
    KOutOfRange { k: u64, available: u64, p: u64 },

    #[error("p = {p} is not congruent to 1 mod 8")]
    NotOneMod8 { p: u64 },

    #[error("n = {n} is not a nonresidue mod {p} (symbol {symbol})")]
    NotANonresidue { n: u64, p: u64, symbol: i8 },

    #[error("n = {n} is outside the uniqueness range: n must be < n1(p)^3 = {bound}")]
    OutsideUniquenessRange { n: u64, bound: u64 },

    #[error("prime list covers [{have_lo}, {have_hi}] but [{need_lo}, {need_hi}] is required")]
    InsufficientCoverage {
        need_lo: u64,
        need_hi: u64,
        have_lo: u64,
        have_hi: u64,
    },

    #[error("window length N must be >= 1")]
    EmptyWindow,

    #[error("Burgess parameter out of range: {what} must be >= 1")]
    BurgessParam { what: &'static str },

    #[error("c = {c} outside the admissible range ({lo}, {hi}]")]
    COutOfRange { c: f64, lo: f64, hi: f64 },

    #[error("eps = {eps} outside the admissible range (0, {max}]")]
    EpsOutOfRange { eps: f64, max: f64 },

    #[error("{what} must be positive and finite")]
    PositiveRequired { what: &'static str },

    #[error("r-choice formula degenerates to r = 0 for c = {c}, p = {p}")]
    DegenerateR { c: f64, p: u64 },

    #[error("alpha = {alpha} outside [1/sqrt(e), 1]")]
    AlphaOutOfRange { alpha: f64 },

    #[error("u = {u} outside the kernel domain [{lo}, {hi}]")]
    UOutOfRange { u: f64, lo: f64, hi: f64 },

    #[error("invalid step kernel: {reason}")]
    KernelInvalid { reason: String },

    #[error("grid step h = {h} outside (0, {max}]")]
    StepTooLarge { h: f64, max: f64 },

    #[error("singular marching step at u = {u}: implicit coefficient {coeff} too close to 0")]
    SingularStep { u: f64, coeff: f64 },

    #[error("solver domain end U = {u_end} must be >= 1")]
    DomainTooShort { u_end: f64 },

    #[error("quadrature failed to reach tolerance {tol} within the subdivision budget")]
    QuadratureBudget { tol: f64 },

    #[error("tolerance {tol} outside (0, {max}]")]
    TolOutOfRange { tol: f64, max: f64 },

    #[error("p = {p} below the minimum {min} required by the bound formulas")]
    PrimeTooSmall { p: u64, min: u64 },

    #[error("work budget exhausted: {needed} symbol evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    #[error("modulus {p} too large for a dense symbol table (max {max})")]
    TableTooLarge { p: u64, max: u64 },
}
