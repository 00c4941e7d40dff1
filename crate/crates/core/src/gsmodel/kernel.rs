//! Piecewise-constant kernels and the integral functionals I₁, I₂.

use crate::arith::PrimeRange;
use crate::error::{Error, Result};
use crate::gsmodel::quad::adaptive_simpson;
use crate::gsmodel::MultiplicativeSpec;

/// A piecewise-constant function `𝒳: [0, U] → [-1, 1]`.
///
/// Piece `i` covers `[breakpoints[i], breakpoints[i+1])`, the last piece
/// runs to `U`; the function is right-continuous at its breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct StepKernel {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    u_end: f64,
}

impl StepKernel {
    /// Builds a kernel from explicit pieces, validating the invariants:
    /// breakpoints strictly ascending from 0, one value per piece, all
    /// values in `[-1, 1]`, domain end past the last breakpoint.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, u_end: f64) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints[0] != 0.0 {
            return Err(Error::KernelInvalid {
                reason: "breakpoints must start at 0".into(),
            });
        }
        if breakpoints.len() != values.len() {
            return Err(Error::KernelInvalid {
                reason: "one value per piece required".into(),
            });
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::KernelInvalid {
                reason: "breakpoints must be strictly ascending".into(),
            });
        }
        let last = *breakpoints.last().unwrap();
        if !(u_end > 0.0) || u_end < last {
            return Err(Error::KernelInvalid {
                reason: format!("domain end {u_end} before last breakpoint {last}"),
            });
        }
        if values.iter().any(|v| !v.is_finite() || v.abs() > 1.0) {
            return Err(Error::KernelInvalid {
                reason: "values must lie in [-1, 1]".into(),
            });
        }
        Ok(StepKernel {
            breakpoints,
            values,
            u_end,
        })
    }

    /// The constant kernel `𝒳 ≡ value` on `[0, U]`.
    pub fn constant(value: f64, u_end: f64) -> Result<Self> {
        StepKernel::new(vec![0.0], vec![value], u_end)
    }

    /// The extremal kernel: `+1` on `[0, 1)`, `-1` on `[1, U]`.
    ///
    /// The solver and the integral functionals never distinguish the value
    /// at the single point `t = 1`, so this represents the `+1 on [0,1]`
    /// convention as well.
    pub fn extremal(u_end: f64) -> Result<Self> {
        StepKernel::new(vec![0.0, 1.0], vec![1.0, -1.0], u_end)
    }

    #[inline]
    pub fn u_end(&self) -> f64 {
        self.u_end
    }

    #[inline]
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Value at `t`, for `t` in `[0, U]`.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!((0.0..=self.u_end).contains(&t));
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }

    /// Pieces as `(start, end, value)` triples covering `[0, U]`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.values.len()).map(move |i| {
            let start = self.breakpoints[i];
            let end = if i + 1 < self.breakpoints.len() {
                self.breakpoints[i + 1]
            } else {
                self.u_end
            };
            (start, end, self.values[i])
        })
    }
}

/// Builds the kernel `𝒳(t) = (Σ_{q ≤ y^t} g(q)·ln q) / (Σ_{q ≤ y^t} ln q)`
/// as a step function of t, with one breakpoint where `y^t` crosses each
/// prime. Below the first crossing the normalizing sum is empty and the
/// kernel is defined as 1, consistent with `g ≡ 1` on small primes.
pub fn kernel_from_spec(
    spec: &MultiplicativeSpec,
    y: f64,
    u_end: f64,
    primes: &PrimeRange,
) -> Result<StepKernel> {
    if !(y > 1.0) {
        return Err(Error::KernelInvalid {
            reason: format!("base y = {y} must be > 1"),
        });
    }
    if !(u_end > 0.0) {
        return Err(Error::KernelInvalid {
            reason: "domain end must be positive".into(),
        });
    }
    let ln_y = y.ln();
    let reach = (u_end * ln_y).exp(); // y^U
    if reach >= 2.0 {
        primes.require_coverage(2, reach)?;
    }
    let mut breakpoints = vec![0.0];
    let mut values = vec![1.0];
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for q in primes.iter() {
        let qf = q as f64;
        if qf > reach {
            break;
        }
        let t_q = qf.ln() / ln_y;
        if t_q >= u_end {
            break;
        }
        num += spec.value_at(q) * qf.ln();
        den += qf.ln();
        breakpoints.push(t_q);
        values.push((num / den).clamp(-1.0, 1.0));
    }
    StepKernel::new(breakpoints, values, u_end)
}

/// `I₁(u; 𝒳) = ∫_1^u (1 - 𝒳(t))/t dt`, exactly: each piece contributes
/// `(1 - v)·ln(hi/lo)`.
pub fn i1(u: f64, kernel: &StepKernel) -> Result<f64> {
    if !(1.0..=kernel.u_end() + 1e-12).contains(&u) {
        return Err(Error::UOutOfRange {
            u,
            lo: 1.0,
            hi: kernel.u_end(),
        });
    }
    let mut acc = 0.0;
    for (start, end, v) in kernel.pieces() {
        let lo = start.max(1.0);
        let hi = end.min(u);
        if hi > lo {
            acc += (1.0 - v) * (hi / lo).ln();
        }
    }
    Ok(acc)
}

/// `I₂(u; 𝒳)`: the double integral of `∏ (1 - 𝒳(tᵢ))/tᵢ` over
/// `{t₁, t₂ >= 1, t₁ + t₂ <= u}`.
///
/// The inner integral is `I₁(u - t₁)` in closed form; the outer one is
/// integrated adaptively on the smooth spans between kernel breakpoints
/// and their reflections `u - b`.
pub fn i2(u: f64, kernel: &StepKernel, tol: f64) -> Result<f64> {
    if !(1.0..=kernel.u_end() + 1e-12).contains(&u) {
        return Err(Error::UOutOfRange {
            u,
            lo: 1.0,
            hi: kernel.u_end(),
        });
    }
    if u <= 2.0 {
        return Ok(0.0);
    }
    let lo = 1.0;
    let hi = u - 1.0;
    let mut splits = vec![lo, hi];
    for &b in kernel.breakpoints() {
        for cand in [b, u - b] {
            if cand > lo && cand < hi {
                splits.push(cand);
            }
        }
    }
    splits.sort_by(|a, b| a.partial_cmp(b).unwrap());
    splits.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let integrand = |t: f64| (1.0 - kernel.eval(t)) / t * i1_unchecked(u - t, kernel);
    let seg_tol = tol / splits.len() as f64;
    let mut acc = 0.0;
    for w in splits.windows(2) {
        acc += adaptive_simpson(&integrand, w[0], w[1], seg_tol)?;
    }
    Ok(acc)
}

/// `I₁` without the domain check, for inner-loop use where `1 <= s <= U`
/// holds by construction.
fn i1_unchecked(s: f64, kernel: &StepKernel) -> f64 {
    let mut acc = 0.0;
    for (start, end, v) in kernel.pieces() {
        let lo = start.max(1.0);
        let hi = end.min(s);
        if hi > lo {
            acc += (1.0 - v) * (hi / lo).ln();
        }
    }
    acc
}
