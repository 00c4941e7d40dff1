//! nrlab-core: exact arithmetic and numerical machinery for studying
//! quadratic nonresidues modulo a prime.
//!
//! The crate is organized around five subsystems:
//!
//! * [`arith`] — modular arithmetic bedrock: Legendre/Jacobi symbols,
//!   deterministic 64-bit primality, segmented prime enumeration, and the
//!   Chebyshev log-weighted prime sum.
//! * [`residues`] — nonresidue sequences `n_1(p) < n_2(p) < …`, counts by
//!   symbol class, the Gauss bound check, and the unique `q·m` factorization
//!   of a nonresidue below `n_1(p)^3`.
//! * [`charsums`] — windowed character sums, mean values, the explicit
//!   Burgess envelope `30·N^(1-1/r)·p^((r+1)/4r²)·(log p)^(1/r)`, and the
//!   threshold/bound machinery attached to it.
//! * [`gsmodel`] — the analytic model: step kernels built from completely
//!   multiplicative data, the functionals `I₁`/`I₂`, and a trapezoidal
//!   Volterra solver for `u·σ(u) = ∫₀ᵘ σ(u−t)·𝒳(t) dt`.
//! * [`experiments`] — prime-range sweep drivers producing report records,
//!   counting-inequality checks, case analyses, and regression-lock
//!   statistics.
//!
//! All computations are deterministic: integer paths are exact, float paths
//! use fixed evaluation orders, and sweep sampling is seeded.

// `!(x > 0.0)` in validations deliberately rejects NaN alongside the
// out-of-range values; `n % k == 0` matches the surrounding arithmetic.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod arith;
pub mod charsums;
pub mod error;
pub mod experiments;
pub mod gsmodel;
pub mod residues;

pub use arith::{OddPrime, PrimeRange, Symbol, SymbolClass};
pub use charsums::{BurgessParams, SumWindow, SymbolTable};
pub use error::{Error, Result};
pub use experiments::{BoundRecord, DensityThreshold, NkGrowth};
pub use gsmodel::{Constants, MultiplicativeSpec, SigmaGrid, StepKernel};
pub use residues::{Decomposition, NonresidueTable};
