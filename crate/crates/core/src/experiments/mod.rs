//! Sweep drivers over prime ranges: ratio statistics for the nonresidue
//! growth envelope, density counts at the threshold scale, mean values at
//! the bound threshold, and the per-prime consistency checks backing them.
//!
//! Sweeps parallelize across primes and sort the merged records by p, so
//! output is deterministic regardless of scheduling. Where an asymptotic
//! statement hides an absolute constant, the sweep reports the empirical
//! extremum and regression-locks it instead of asserting an invented
//! bound.

mod checks;
mod sweeps;

pub use checks::{
    burgess_envelope_scan, case_analysis_report, counting_inequality_check, BurgessScan,
    BurgessViolation, CaseBranch, CaseReport, CountingCheck,
};
pub use sweeps::{
    sweep_density, sweep_mean_scaled, sweep_nk_ratios, DensityRecord, DensitySweep, KPolicy,
    MeanScaledRecord, MeanSweep, RatioSweep, SkipNote,
};

use serde::{Deserialize, Serialize};

use crate::arith::OddPrime;
use crate::error::{Error, Result};

/// Default per-prime work budget, in symbol evaluations.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

/// Default seed for deterministic window sampling.
pub const DEFAULT_SEED: u64 = 0x006e_726c_6162; // "nrlab"

/// Smallest prime accepted by [`nk_growth`]; below it the envelope
/// formulas are numerically valid but outside the intended regime, and
/// the generic enumeration paths serve instead.
pub const MIN_GROWTH_PRIME: u64 = 17;

/// The three envelope quantities attached to one modulus:
///
/// * `e_value = p^(1/4√e) · exp(√(ln p · ln ln p / e))` — the growth
///   envelope for `n_k(p)`;
/// * `b_value = √(e_value · ln p)` — the case boundary for `n_1(p)`;
/// * `k_max = p^(1/8√e) · exp(½√(ln p · ln ln p / e) − ½ ln ln p)` — the
///   admissible ceiling for k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NkGrowth {
    pub p: u64,
    pub e_value: f64,
    pub b_value: f64,
    pub k_max: f64,
}

/// Evaluates the growth-envelope quantities for `p >= 17`.
pub fn nk_growth(p: &OddPrime) -> Result<NkGrowth> {
    if p.value() < MIN_GROWTH_PRIME {
        return Err(Error::PrimeTooSmall {
            p: p.value(),
            min: MIN_GROWTH_PRIME,
        });
    }
    Ok(growth_raw(p))
}

/// The envelope formulas without the p >= 17 gate; real for every p >= 3
/// since `ln ln p > 0` there.
pub(crate) fn growth_raw(p: &OddPrime) -> NkGrowth {
    let pv = p.value() as f64;
    let lp = p.log();
    let llp = p.loglog();
    let inv_4_sqrt_e = 0.25 * (-0.5f64).exp();
    let inv_8_sqrt_e = 0.125 * (-0.5f64).exp();
    let e_value = pv.powf(inv_4_sqrt_e) * (lp * llp / std::f64::consts::E).sqrt().exp();
    let b_value = (e_value * lp).sqrt();
    let k_max = pv.powf(inv_8_sqrt_e)
        * (0.5 * (lp * llp / std::f64::consts::E).sqrt() - 0.5 * llp).exp();
    NkGrowth {
        p: p.value(),
        e_value,
        b_value,
        k_max,
    }
}

/// Density threshold `y(p, ε, c) = p^(1/4√e) · exp(c · (ln p)^(1-ε))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityThreshold {
    pub p: u64,
    pub eps: f64,
    pub c: f64,
    pub y_threshold: f64,
}

/// Evaluates the density threshold; `0 < eps <= ξ` and `c > 0`.
pub fn density_threshold(p: &OddPrime, eps: f64, c: f64) -> Result<DensityThreshold> {
    if !(eps > 0.0 && eps <= crate::gsmodel::XI) {
        return Err(Error::EpsOutOfRange {
            eps,
            max: crate::gsmodel::XI,
        });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::PositiveRequired { what: "c" });
    }
    let pv = p.value() as f64;
    let inv_4_sqrt_e = 0.25 * (-0.5f64).exp();
    let y_threshold = pv.powf(inv_4_sqrt_e) * (c * p.log().powf(1.0 - eps)).exp();
    Ok(DensityThreshold {
        p: p.value(),
        eps,
        c,
        y_threshold,
    })
}

/// One row of a ratio sweep report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub p: u64,
    pub n1: u64,
    pub k: u64,
    pub nk: u64,
    pub e_value: f64,
    /// `nk / e_value`
    pub ratio: f64,
    /// residues below nk (symbol +1)
    pub residues_below: u64,
    /// nonresidues below nk (symbol -1)
    pub nonresidues_below: u64,
    pub notes: String,
}

/// Renders a statistic to the 12-significant-digit form used by
/// regression-lock files.
pub fn render_lock_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// One `name<TAB>value` line per statistic.
pub fn render_lock_lines(stats: &[(&str, f64)]) -> String {
    let mut out = String::new();
    for (name, v) in stats {
        out.push_str(name);
        out.push('\t');
        out.push_str(&render_lock_value(*v));
        out.push('\n');
    }
    out
}

/// Parses a lock file back into `(name, rendered_value)` pairs.
pub fn parse_lock_lines(s: &str) -> Vec<(String, String)> {
    s.lines()
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| {
            let mut it = l.splitn(2, '\t');
            Some((it.next()?.to_string(), it.next()?.to_string()))
        })
        .collect()
}
