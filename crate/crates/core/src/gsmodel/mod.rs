//! The analytic model: mean values of bounded completely multiplicative
//! functions, the step kernel they induce, and the integral equation
//! `u·σ(u) = (σ ∗ 𝒳)(u)` that governs them.

mod kernel;
pub mod quad;
mod sigma;

pub use kernel::{i1, i2, kernel_from_spec, StepKernel};
pub use sigma::{
    i1_vs_tau_check, sandwich_check, sigma_solve, SandwichBounds, SigmaGrid, MAX_STEP,
};

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::arith::PrimeRange;
use crate::error::{Error, Result};
use quad::adaptive_simpson;

/// `(5π - 2)/(9π - 2) = 0.52172448…`, the exponent tying the two
/// logarithmic scales together.
pub const LAMBDA: f64 = (5.0 * PI - 2.0) / (9.0 * PI - 2.0);

/// `1/4 - 1/2π = 0.09084505…`.
pub const ETA: f64 = 0.25 - 1.0 / (2.0 * PI);

/// `(π - 2)/(9π - 2) = 0.04344896…`, the admissible exponent ceiling in
/// the density statements; satisfies `ξ = η(1-λ) = 2λ-1`.
pub const XI: f64 = (PI - 2.0) / (9.0 * PI - 2.0);

/// Reference value of [`delta1_compute`], for documentation and sanity
/// checks; the quadrature recomputes it rather than trusting this digit
/// string.
pub const DELTA1_REFERENCE: f64 = -0.656999;

/// The bundle of analytic constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub lambda: f64,
    pub eta: f64,
    pub xi: f64,
    /// `1 - 2 ln(1+√e) + 4 ∫_1^√e ln u/(u+1) du = -0.656999…`
    pub delta1: f64,
}

/// Returns λ, η, ξ and δ₁ (the latter via quadrature at tolerance 1e-8).
pub fn constants() -> Constants {
    Constants {
        lambda: LAMBDA,
        eta: ETA,
        xi: XI,
        delta1: delta1_compute(1e-8).expect("fixed smooth integrand converges"),
    }
}

/// Evaluates `δ₁ = 1 - 2 ln(1+√e) + 4 ∫_1^√e ln u/(u+1) du` with the
/// integral done adaptively to absolute accuracy `tol` (0 < tol <= 1e-4).
pub fn delta1_compute(tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::TolOutOfRange { tol, max: 1e-4 });
    }
    let sqrt_e = 0.5f64.exp();
    let integral = adaptive_simpson(&|u: f64| u.ln() / (u + 1.0), 1.0, sqrt_e, tol / 4.0)?;
    Ok(1.0 - 2.0 * (1.0 + sqrt_e).ln() + 4.0 * integral)
}

/// A completely multiplicative function with `|g| <= 1`, described by its
/// values on primes: listed primes take their listed value, unlisted
/// primes up to `y` take 1, and primes above `y` take `default_above`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSpec {
    prime_values: BTreeMap<u64, f64>,
    y: f64,
    default_above: f64,
}

impl MultiplicativeSpec {
    /// Spec with no listed primes: 1 up to `y`, `default_above` beyond.
    pub fn constant(default_above: f64, y: f64) -> Result<Self> {
        if !default_above.is_finite() || default_above.abs() > 1.0 {
            return Err(Error::KernelInvalid {
                reason: format!("default prime value {default_above} outside [-1, 1]"),
            });
        }
        Ok(MultiplicativeSpec {
            prime_values: BTreeMap::new(),
            y,
            default_above,
        })
    }

    /// Adds an explicit prime value.
    pub fn with_value(mut self, prime: u64, value: f64) -> Result<Self> {
        if !value.is_finite() || value.abs() > 1.0 {
            return Err(Error::KernelInvalid {
                reason: format!("g({prime}) = {value} outside [-1, 1]"),
            });
        }
        self.prime_values.insert(prime, value);
        Ok(self)
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    /// `g(q)` for a prime `q`.
    pub fn value_at(&self, q: u64) -> f64 {
        if let Some(&v) = self.prime_values.get(&q) {
            return v;
        }
        if (q as f64) <= self.y {
            1.0
        } else {
            self.default_above
        }
    }

    /// Copy of this spec with every prime `<= threshold` forced to 1.
    pub fn with_ones_below(&self, threshold: f64) -> Result<Self> {
        let mut out = self.clone();
        out.prime_values.retain(|&q, _| (q as f64) > threshold);
        out.y = out.y.max(threshold);
        Ok(out)
    }
}

/// `τ = Σ_{q <= x_alpha} (1 - g(q))/q`, an exact partial sum over the
/// listed primes.
pub fn tau(spec: &MultiplicativeSpec, x_alpha: f64, primes: &PrimeRange) -> Result<f64> {
    if x_alpha < 2.0 {
        return Ok(0.0);
    }
    primes.require_coverage(2, x_alpha)?;
    Ok(primes
        .iter()
        .take_while(|&q| (q as f64) <= x_alpha)
        .map(|q| (1.0 - spec.value_at(q)) / q as f64)
        .sum())
}

/// `Θ(f, y) = ∏_{q <= y} (1 - 1/q)(1 - f(q)/q)^{-1}`, the Euler-product
/// correction comparing f against the constant function 1.
pub fn theta_product(spec: &MultiplicativeSpec, primes: &PrimeRange) -> Result<f64> {
    let y = spec.y();
    if y < 2.0 {
        return Ok(1.0);
    }
    primes.require_coverage(2, y)?;
    let mut acc = 1.0f64;
    for q in primes.iter().take_while(|&q| (q as f64) <= y) {
        let qf = q as f64;
        acc *= (1.0 - 1.0 / qf) / (1.0 - spec.value_at(q) / qf);
    }
    Ok(acc)
}

/// The mean-value envelope `max(|δ₁|, 1/2 + 2 ln²α)` on `[1/√e, 1]`.
pub fn envelope(alpha: f64, delta1: f64) -> Result<f64> {
    let inv_sqrt_e = (-0.5f64).exp();
    if !(inv_sqrt_e - 1e-12..=1.0 + 1e-12).contains(&alpha) {
        return Err(Error::AlphaOutOfRange { alpha });
    }
    let ln_a = alpha.ln();
    Ok(delta1.abs().max(0.5 + 2.0 * ln_a * ln_a))
}
