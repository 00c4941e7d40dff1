//! Prime-range sweep drivers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{density_threshold, growth_raw, BoundRecord, MIN_GROWTH_PRIME};
use crate::arith::{OddPrime, PrimeRange, SymbolClass};
use crate::charsums::{mchin_threshold, SymbolTable, MAX_TABLE_MODULUS};
use crate::error::{Error, Result};
use crate::residues::{count_by_symbol, least_nonresidue, nth_nonresidue};

/// How the per-prime k is chosen in a ratio sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPolicy {
    /// Fixed k, clamped to the (p-1)/2 available nonresidues.
    Fixed(u64),
    /// `k = min(⌊k_max⌋, cap, (p-1)/2)`, at least 1.
    KmaxFloor,
}

/// A prime the sweep could not process, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipNote {
    pub p: u64,
    pub note: String,
}

/// Output of [`sweep_nk_ratios`].
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSweep {
    pub records: Vec<BoundRecord>,
    pub skipped: Vec<SkipNote>,
    /// Running maximum of `nk / e_value` over all records.
    pub max_ratio: f64,
}

/// Sweeps `n_k(p) / E(p)` over a prime range.
///
/// For primes below the envelope gate the formulas are still evaluated
/// (they are real for every p >= 3) and the record is annotated. The
/// even prime 2 is skipped.
pub fn sweep_nk_ratios(range: &PrimeRange, policy: KPolicy, cap: u64) -> RatioSweep {
    let rows: Vec<std::result::Result<BoundRecord, SkipNote>> = range
        .as_slice()
        .par_iter()
        .map(|&pv| ratio_row(pv, policy, cap))
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for row in rows {
        match row {
            Ok(r) => records.push(r),
            Err(s) => skipped.push(s),
        }
    }
    records.sort_by_key(|r| r.p);
    skipped.sort_by_key(|s| s.p);
    let max_ratio = records.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    RatioSweep {
        records,
        skipped,
        max_ratio,
    }
}

fn ratio_row(pv: u64, policy: KPolicy, cap: u64) -> std::result::Result<BoundRecord, SkipNote> {
    if pv == 2 {
        return Err(SkipNote {
            p: pv,
            note: "even prime has no nonresidue sequence".into(),
        });
    }
    let p = OddPrime::new(pv).expect("sieve output is prime");
    let g = growth_raw(&p);
    let available = p.nonresidue_count();
    let mut notes = String::new();
    if pv < MIN_GROWTH_PRIME {
        notes.push_str("below envelope gate; formulas evaluated directly");
    }
    let k = match policy {
        KPolicy::Fixed(k0) => {
            let k = k0.min(available).max(1);
            if k != k0 {
                if !notes.is_empty() {
                    notes.push_str("; ");
                }
                notes.push_str("k clamped into [1, (p-1)/2]");
            }
            k
        }
        KPolicy::KmaxFloor => (g.k_max.floor() as u64).min(cap).min(available).max(1),
    };
    let nk = nth_nonresidue(&p, k).expect("k clamped into range");
    let n1 = if k == 1 { nk } else { least_nonresidue(&p) };
    let residues_below = count_by_symbol(&p, nk, SymbolClass::Residue);
    let nonresidues_below = count_by_symbol(&p, nk, SymbolClass::Nonresidue);
    Ok(BoundRecord {
        p: pv,
        n1,
        k,
        nk,
        e_value: g.e_value,
        ratio: nk as f64 / g.e_value,
        residues_below,
        nonresidues_below,
        notes,
    })
}

/// One row of a density sweep: counts of both symbol classes up to the
/// threshold y, the normalized statistics, and the exact reconstruction
/// residuals `|count_θ - ½y(1 + θ·M(y))|` against their bound `y/p + 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub p: u64,
    pub y: u64,
    pub count_plus: u64,
    pub count_minus: u64,
    /// `count · (ln y)^eps / y`
    pub norm_plus: f64,
    pub norm_minus: f64,
    pub fork_resid_plus: f64,
    pub fork_resid_minus: f64,
    pub fork_bound: f64,
    pub fork_ok: bool,
    pub notes: String,
}

/// Output of [`sweep_density`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySweep {
    pub records: Vec<DensityRecord>,
    pub skipped: Vec<SkipNote>,
    /// Minimum over records and both classes of the normalized count.
    pub min_normalized: f64,
}

/// Counts both symbol classes up to `y = ⌈y(p, ε, c)⌉` for each prime.
///
/// Primes whose threshold exceeds the work budget are skipped with a
/// note; the even prime 2 is skipped.
pub fn sweep_density(
    range: &PrimeRange,
    eps: f64,
    c: f64,
    work_budget: u64,
) -> Result<DensitySweep> {
    if let Some(pv) = range.as_slice().iter().find(|&&pv| pv > 2) {
        // validate eps and c once against a real modulus
        density_threshold(&OddPrime::new(*pv).expect("sieve output is prime"), eps, c)?;
    }
    let rows: Vec<std::result::Result<DensityRecord, SkipNote>> = range
        .as_slice()
        .par_iter()
        .map(|&pv| density_row(pv, eps, c, work_budget))
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for row in rows {
        match row {
            Ok(r) => records.push(r),
            Err(s) => skipped.push(s),
        }
    }
    records.sort_by_key(|r| r.p);
    skipped.sort_by_key(|s| s.p);
    let min_normalized = records
        .iter()
        .flat_map(|r| [r.norm_plus, r.norm_minus])
        .fold(f64::INFINITY, f64::min);
    Ok(DensitySweep {
        records,
        skipped,
        min_normalized,
    })
}

fn density_row(
    pv: u64,
    eps: f64,
    c: f64,
    work_budget: u64,
) -> std::result::Result<DensityRecord, SkipNote> {
    if pv == 2 {
        return Err(SkipNote {
            p: pv,
            note: "even prime skipped".into(),
        });
    }
    let p = OddPrime::new(pv).expect("sieve output is prime");
    let t = density_threshold(&p, eps, c).expect("validated at sweep start");
    let y = t.y_threshold.ceil() as u64;
    if y > work_budget {
        return Err(SkipNote {
            p: pv,
            note: format!("skipped: y = {y} exceeds work budget {work_budget}"),
        });
    }
    if pv > MAX_TABLE_MODULUS {
        return Err(SkipNote {
            p: pv,
            note: format!("skipped: p exceeds table modulus cap {MAX_TABLE_MODULUS}"),
        });
    }
    let table = SymbolTable::new(&p).expect("modulus within table cap");
    let count_plus = table.count(y, SymbolClass::Residue);
    let count_minus = table.count(y, SymbolClass::Nonresidue);
    let ln_y_eps = (y as f64).ln().powf(eps);
    let mean = table.mean_value(y);
    let yf = y as f64;
    let fork_resid_plus = (count_plus as f64 - 0.5 * yf * (1.0 + mean)).abs();
    let fork_resid_minus = (count_minus as f64 - 0.5 * yf * (1.0 - mean)).abs();
    let fork_bound = yf / pv as f64 + 2.0;
    Ok(DensityRecord {
        p: pv,
        y,
        count_plus,
        count_minus,
        norm_plus: count_plus as f64 * ln_y_eps / yf,
        norm_minus: count_minus as f64 * ln_y_eps / yf,
        fork_resid_plus,
        fork_resid_minus,
        fork_bound,
        fork_ok: fork_resid_plus <= fork_bound && fork_resid_minus <= fork_bound,
        notes: String::new(),
    })
}

/// One row of a mean-value sweep at the bound threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanScaledRecord {
    pub p: u64,
    /// `⌈p^(1/4) · exp(c·√(ln p · ln ln p))⌉`
    pub x0: u64,
    pub mean_abs: f64,
    /// `|M(x0)| · (ln p)^(c²)`
    pub scaled: f64,
    pub notes: String,
}

/// Output of [`sweep_mean_scaled`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSweep {
    pub records: Vec<MeanScaledRecord>,
    pub skipped: Vec<SkipNote>,
    /// Maximum of the scaled statistic over all records.
    pub max_scaled: f64,
}

/// Computes `|M(x0)| · (ln p)^(c²)` at the threshold `x0` for each prime.
///
/// `c` must satisfy `0 < c <= (ln p)^(1/3)` for every prime in the range,
/// checked against the smallest one.
pub fn sweep_mean_scaled(range: &PrimeRange, c: f64, work_budget: u64) -> Result<MeanSweep> {
    if let Some(pv) = range.as_slice().iter().find(|&&pv| pv > 2) {
        let p_min = OddPrime::new(*pv).expect("sieve output is prime");
        if !(c > 0.0) || c > p_min.log().cbrt() {
            return Err(Error::COutOfRange {
                c,
                lo: 0.0,
                hi: p_min.log().cbrt(),
            });
        }
    }
    let rows: Vec<std::result::Result<MeanScaledRecord, SkipNote>> = range
        .as_slice()
        .par_iter()
        .map(|&pv| mean_row(pv, c, work_budget))
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for row in rows {
        match row {
            Ok(r) => records.push(r),
            Err(s) => skipped.push(s),
        }
    }
    records.sort_by_key(|r| r.p);
    skipped.sort_by_key(|s| s.p);
    let max_scaled = records.iter().map(|r| r.scaled).fold(f64::NEG_INFINITY, f64::max);
    Ok(MeanSweep {
        records,
        skipped,
        max_scaled,
    })
}

fn mean_row(pv: u64, c: f64, work_budget: u64) -> std::result::Result<MeanScaledRecord, SkipNote> {
    if pv == 2 {
        return Err(SkipNote {
            p: pv,
            note: "even prime skipped".into(),
        });
    }
    let p = OddPrime::new(pv).expect("sieve output is prime");
    let threshold = match mchin_threshold(&p, c) {
        Ok(t) => t,
        Err(e) => {
            return Err(SkipNote {
                p: pv,
                note: format!("skipped: {e}"),
            })
        }
    };
    let x0 = threshold.ceil() as u64;
    if x0 > work_budget {
        return Err(SkipNote {
            p: pv,
            note: format!("skipped: x0 = {x0} exceeds work budget {work_budget}"),
        });
    }
    if pv > MAX_TABLE_MODULUS {
        return Err(SkipNote {
            p: pv,
            note: format!("skipped: p exceeds table modulus cap {MAX_TABLE_MODULUS}"),
        });
    }
    let table = SymbolTable::new(&p).expect("modulus within table cap");
    let mean_abs = table.mean_value(x0).abs();
    Ok(MeanScaledRecord {
        p: pv,
        x0,
        mean_abs,
        scaled: mean_abs * p.log().powf(c * c),
        notes: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in;
    use crate::charsums::mean_value;
    use crate::gsmodel::XI;

    #[test]
    fn ratio_sweep_fixed_k1() {
        let range = primes_in(3, 100).unwrap();
        let sweep = sweep_nk_ratios(&range, KPolicy::Fixed(1), u64::MAX);
        assert_eq!(sweep.records.len(), range.len());
        assert!(sweep.skipped.is_empty());
        for r in &sweep.records {
            assert_eq!(r.nk, r.n1);
            assert!(r.ratio.is_finite() && r.ratio > 0.0);
        }
        assert!(sweep.max_ratio >= sweep.records[0].ratio);
        // records are sorted by p
        assert!(sweep.records.windows(2).all(|w| w[0].p < w[1].p));
    }

    #[test]
    fn ratio_sweep_specific_values() {
        let range = primes_in(7, 7).unwrap();
        let sweep = sweep_nk_ratios(&range, KPolicy::Fixed(3), u64::MAX);
        assert_eq!(sweep.records[0].nk, 6);
        assert_eq!(sweep.records[0].n1, 3);
        // k beyond (p-1)/2 clamps
        let sweep = sweep_nk_ratios(&range, KPolicy::Fixed(10), u64::MAX);
        assert_eq!(sweep.records[0].k, 3);
        assert!(sweep.records[0].notes.contains("clamped"));
    }

    #[test]
    fn ratio_sweep_empty_and_even() {
        let range = primes_in(24, 28).unwrap();
        let sweep = sweep_nk_ratios(&range, KPolicy::Fixed(1), u64::MAX);
        assert!(sweep.records.is_empty());
        let range = primes_in(2, 3).unwrap();
        let sweep = sweep_nk_ratios(&range, KPolicy::KmaxFloor, 100);
        assert_eq!(sweep.skipped.len(), 1);
        assert_eq!(sweep.skipped[0].p, 2);
        assert_eq!(sweep.records.len(), 1);
    }

    #[test]
    fn ratio_sweep_kmax_policy() {
        let range = primes_in(17, 200).unwrap();
        let sweep = sweep_nk_ratios(&range, KPolicy::KmaxFloor, 5);
        for r in &sweep.records {
            assert!(r.k >= 1 && r.k <= 5);
            assert!(r.n1 <= r.nk);
        }
    }

    #[test]
    fn density_sweep_example() {
        let range = primes_in(101, 101).unwrap();
        let sweep = sweep_density(&range, XI, 1.0, 1_000_000).unwrap();
        let r = &sweep.records[0];
        assert_eq!(r.y, 152); // ceil(151.14264)
        // cross-check both counts against the direct scan
        let p = OddPrime::new(101).unwrap();
        assert_eq!(r.count_plus, count_by_symbol(&p, 152, SymbolClass::Residue));
        assert_eq!(
            r.count_minus,
            count_by_symbol(&p, 152, SymbolClass::Nonresidue)
        );
        assert!(r.norm_plus > 0.0 && r.norm_minus > 0.0);
        assert!(r.fork_ok);
        assert!(sweep.min_normalized > 0.0);
    }

    #[test]
    fn density_sweep_full_period_balance() {
        // when y >= p both counts sit near y/2·(1 - 1/p); the deviation is
        // half the partial-period sum, well below sqrt(p)·ln p
        let range = primes_in(3, 31).unwrap();
        let sweep = sweep_density(&range, XI, 1.0, 1_000_000).unwrap();
        for r in &sweep.records {
            assert!(r.y >= r.p);
            // exact bookkeeping: classes plus zeros partition [1, y]
            assert_eq!(r.count_plus + r.count_minus + r.y / r.p, r.y);
            let expect = r.y as f64 / 2.0 * (1.0 - 1.0 / r.p as f64);
            let slack = 0.5 * (r.p as f64).sqrt() * (r.p as f64).ln() + 1.0;
            assert!((r.count_plus as f64 - expect).abs() <= slack);
            assert!((r.count_minus as f64 - expect).abs() <= slack);
            assert!(r.fork_ok);
        }
    }

    #[test]
    fn density_sweep_budget_skip() {
        let range = primes_in(3, 31).unwrap();
        let sweep = sweep_density(&range, XI, 1.0, 2).unwrap();
        assert!(sweep.records.is_empty());
        assert_eq!(sweep.skipped.len(), range.len());
        assert!(sweep.skipped[0].note.contains("budget"));
    }

    #[test]
    fn density_sweep_eps_validation() {
        let range = primes_in(3, 31).unwrap();
        assert!(matches!(
            sweep_density(&range, XI + 0.01, 1.0, 1000),
            Err(Error::EpsOutOfRange { .. })
        ));
    }

    #[test]
    fn mean_sweep_records() {
        let range = primes_in(10_007, 10_007).unwrap();
        let sweep = sweep_mean_scaled(&range, 0.5, 1_000_000).unwrap();
        let r = &sweep.records[0];
        let p = OddPrime::new(10_007).unwrap();
        let x0 = mchin_threshold(&p, 0.5).unwrap().ceil() as u64;
        assert_eq!(r.x0, x0);
        // exact-summation oracle through the direct path
        let direct = mean_value(&p, x0).unwrap().abs();
        assert_eq!(r.mean_abs, direct);
        assert_eq!(r.scaled, direct * p.log().powf(0.25));
        assert_eq!(sweep.max_scaled, r.scaled);
    }

    #[test]
    fn mean_sweep_near_zero_c_approaches_quarter_power() {
        let range = primes_in(10_007, 10_007).unwrap();
        let sweep = sweep_mean_scaled(&range, 1e-9, 1_000_000).unwrap();
        let r = &sweep.records[0];
        assert_eq!(r.x0, (10_007f64.powf(0.25)).ceil() as u64);
        assert!((r.scaled / r.mean_abs - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mean_sweep_c_validation() {
        let range = primes_in(3, 31).unwrap();
        assert!(matches!(
            sweep_mean_scaled(&range, 5.0, 1000),
            Err(Error::COutOfRange { .. })
        ));
        assert!(matches!(
            sweep_mean_scaled(&range, 0.0, 1000),
            Err(Error::COutOfRange { .. })
        ));
    }
}
