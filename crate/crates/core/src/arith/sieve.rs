//! Segmented sieve of Eratosthenes.

use crate::error::{Error, Result};

/// Default sieve segment length; sized for L2 cache residency.
pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;

/// The complete, strictly ascending list of primes in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
    primes: Vec<u64>,
}

impl PrimeRange {
    #[inline]
    pub fn lo(&self) -> u64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> u64 {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    /// Errors unless this range covers `[need_lo, need_hi]`.
    pub fn require_coverage(&self, need_lo: u64, need_hi: f64) -> Result<()> {
        let hi_needed = need_hi.floor().max(0.0) as u64;
        if self.lo > need_lo || (self.hi as f64) < need_hi.floor() {
            return Err(Error::InsufficientCoverage {
                need_lo,
                need_hi: hi_needed,
                have_lo: self.lo,
                have_hi: self.hi,
            });
        }
        Ok(())
    }
}

/// Sieves the primes in `[lo, hi]` with the default segment size.
pub fn primes_in(lo: u64, hi: u64) -> Result<PrimeRange> {
    primes_in_with_segment(lo, hi, DEFAULT_SEGMENT_SIZE)
}

/// Sieves the primes in `[lo, hi]`, processing `segment_size` candidates
/// at a time. Exact and complete for any 2 <= lo <= hi.
pub fn primes_in_with_segment(lo: u64, hi: u64, segment_size: usize) -> Result<PrimeRange> {
    if lo < 2 || lo > hi {
        return Err(Error::RangeOrder { lo, hi });
    }
    let segment_size = segment_size.max(64) as u64;
    let root = (hi as f64).sqrt() as u64 + 2;
    let base = simple_sieve(root);

    let mut primes = Vec::new();
    let mut seg_lo = lo;
    let mut mark = vec![false; segment_size as usize];
    while seg_lo <= hi {
        let seg_hi = seg_lo.saturating_add(segment_size - 1).min(hi);
        let width = (seg_hi - seg_lo + 1) as usize;
        mark[..width].fill(false);
        for &q in &base {
            if q * q > seg_hi {
                break;
            }
            let mut start = q * q;
            if start < seg_lo {
                start = seg_lo.div_ceil(q) * q;
            }
            let mut j = start;
            while j <= seg_hi {
                mark[(j - seg_lo) as usize] = true;
                j += q;
            }
        }
        // a prime q inside the segment is never marked: its first marked
        // multiple is q^2, and q^2 < seg_lo would force q < sqrt(seg_lo) <= q
        for (off, &composite) in mark[..width].iter().enumerate() {
            if !composite {
                primes.push(seg_lo + off as u64);
            }
        }
        if seg_hi == hi {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    Ok(PrimeRange { lo, hi, primes })
}

/// Plain sieve of Eratosthenes up to `n` inclusive.
fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn examples() {
        assert_eq!(primes_in(2, 10).unwrap().as_slice(), &[2, 3, 5, 7]);
        assert!(primes_in(14, 16).unwrap().is_empty());
        assert_eq!(primes_in(2, 2).unwrap().as_slice(), &[2]);
    }

    #[test]
    fn range_order_violations() {
        assert!(matches!(primes_in(10, 2), Err(Error::RangeOrder { .. })));
        assert!(matches!(primes_in(0, 5), Err(Error::RangeOrder { .. })));
        assert!(matches!(primes_in(1, 1), Err(Error::RangeOrder { .. })));
    }

    #[test]
    fn completeness_against_trial_division() {
        let range = primes_in_with_segment(2, 100_000, 4096).unwrap();
        let expected: Vec<u64> = (2..=100_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(range.as_slice(), expected.as_slice());
        assert_eq!(range.len(), 9592); // pi(10^5)
    }

    #[test]
    fn interior_windows_match_trial_division() {
        for (lo, hi) in [(1000, 2000), (99_000, 100_500), (7919, 7919)] {
            let range = primes_in_with_segment(lo, hi, 128).unwrap();
            let expected: Vec<u64> = (lo..=hi).filter(|&n| trial_division(n)).collect();
            assert_eq!(range.as_slice(), expected.as_slice(), "window [{lo},{hi}]");
        }
    }

    #[test]
    fn segment_size_does_not_change_output() {
        let a = primes_in_with_segment(2, 30_000, 64).unwrap();
        let b = primes_in_with_segment(2, 30_000, 1 << 16).unwrap();
        assert_eq!(a.as_slice(), b.as_slice());
    }

    #[test]
    fn coverage_checks() {
        let range = primes_in(5, 100).unwrap();
        assert!(range.require_coverage(5, 100.0).is_ok());
        assert!(range.require_coverage(2, 50.0).is_err());
        assert!(range.require_coverage(5, 101.0).is_err());
    }
}
