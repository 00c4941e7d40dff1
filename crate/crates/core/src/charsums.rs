//! Character sums over windows, mean values, and the explicit Burgess
//! envelope for prime conductors.
//!
//! Two evaluation routes exist for window sums. [`char_sum`] is the direct
//! one: a single pass over the window with associative chunked reduction,
//! exact integer arithmetic, bit-identical under any chunk split.
//! [`SymbolTable`] is the dense route for sweeps: an O(p) prefix table
//! built once per modulus answers any window or count query in O(1) using
//! the vanishing of full-period sums. The two routes are cross-checked in
//! tests; sweep drivers use the table, everything else the direct pass.

use rayon::prelude::*;

use crate::arith::{legendre_u64, OddPrime, Symbol, SymbolClass};
use crate::error::{Error, Result};

/// A windowed character sum `Σ_{M < n <= M+N} (n|p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumWindow {
    pub m: i64,
    pub n: u64,
    pub value: i64,
}

/// The explicit Burgess right-hand side for one `(p, N, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgessParams {
    pub p: OddPrime,
    pub n: u64,
    pub r: u32,
    /// `30 · N^(1-1/r) · p^((r+1)/4r²) · (ln p)^(1/r)`
    pub rhs: f64,
}

const CHUNK: u64 = 1 << 12;

/// Exact window sum `Σ_{M < n <= M+N} (n|p)` by a single chunked pass.
///
/// Chunk results combine by integer addition, so the value is identical
/// under any chunk split or evaluation order.
pub fn char_sum(p: &OddPrime, m: i64, n: u64) -> Result<SumWindow> {
    if n < 1 {
        return Err(Error::EmptyWindow);
    }
    let pv = p.value();
    let m_red = m.rem_euclid(pv as i64) as u64;
    let chunks = n.div_ceil(CHUNK);
    let value: i64 = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let start = ci * CHUNK;
            let len = CHUNK.min(n - start);
            // residue of the first term of this chunk
            let mut r = (m_red + (start + 1) % pv) % pv;
            let mut acc = 0i64;
            for _ in 0..len {
                acc += legendre_u64(r, p).value() as i64;
                r += 1;
                if r == pv {
                    r = 0;
                }
            }
            acc
        })
        .sum();
    Ok(SumWindow { m, n, value })
}

/// Mean value `M_χ(x) = (1/x) Σ_{n <= x} (n|p)`; always in `[-1, 1]`.
pub fn mean_value(p: &OddPrime, x: u64) -> Result<f64> {
    let sum = char_sum(p, 0, x)?;
    Ok(sum.value as f64 / x as f64)
}

/// Largest modulus for which a dense prefix table is built.
pub const MAX_TABLE_MODULUS: u64 = 1 << 31;

/// Dense per-modulus engine: prefix sums of the symbol over one period.
///
/// Construction marks the squares mod p in O(p) additions (no reciprocity,
/// no multiplication in the loop), then accumulates prefix sums. Window
/// sums, counts and mean values are O(1) afterwards.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    p: u64,
    /// `prefix[r] = Σ_{n=1}^{r} (n|p)` for `0 <= r < p`.
    prefix: Vec<i32>,
}

impl SymbolTable {
    pub fn new(p: &OddPrime) -> Result<Self> {
        let pv = p.value();
        if pv > MAX_TABLE_MODULUS {
            return Err(Error::TableTooLarge {
                p: pv,
                max: MAX_TABLE_MODULUS,
            });
        }
        let len = pv as usize;
        let mut sym = vec![-1i8; len];
        sym[0] = 0;
        // k^2 mod p incrementally: k^2 = (k-1)^2 + (2k-1), one conditional
        // subtract per step since 2k-1 < p for k <= (p-1)/2
        let mut sq = 0u64;
        for k in 1..=(pv - 1) / 2 {
            sq += 2 * k - 1;
            if sq >= pv {
                sq -= pv;
            }
            if sq >= pv {
                sq -= pv;
            }
            sym[sq as usize] = 1;
        }
        let mut prefix = vec![0i32; len];
        let mut acc = 0i32;
        for r in 1..len {
            acc += sym[r] as i32;
            prefix[r] = acc;
        }
        debug_assert_eq!(prefix[len - 1], 0, "full reduced period must vanish");
        Ok(SymbolTable { p: pv, prefix })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `(n|p)` looked up from the table.
    #[inline]
    pub fn symbol(&self, n: u64) -> Symbol {
        let r = (n % self.p) as usize;
        if r == 0 {
            return Symbol::Zero;
        }
        let prev = if r == 1 { 0 } else { self.prefix[r - 1] };
        match self.prefix[r] - prev {
            1 => Symbol::Residue,
            -1 => Symbol::Nonresidue,
            _ => unreachable!("prefix steps are ±1 off multiples of p"),
        }
    }

    /// `F(t) = Σ_{n <= t} (n|p)`; full periods contribute zero.
    #[inline]
    pub fn partial_sum(&self, t: u64) -> i64 {
        self.prefix[(t % self.p) as usize] as i64
    }

    /// Window sum `Σ_{M < n <= M+N} (n|p)`, equal to [`char_sum`].
    #[inline]
    pub fn window_sum(&self, m: i64, n: u64) -> i64 {
        let m_red = m.rem_euclid(self.p as i64) as u64;
        self.partial_sum(m_red + n) - self.partial_sum(m_red)
    }

    /// Count of `n <= y` with symbol in the given class.
    pub fn count(&self, y: u64, theta: SymbolClass) -> u64 {
        let full = y / self.p;
        let r = y % self.p;
        let base = full * (self.p - 1) / 2;
        let s = self.prefix[r as usize] as i64;
        // within a partial period there are no zeros, so r = plus + minus
        // and s = plus - minus
        let part = match theta {
            SymbolClass::Residue => (r as i64 + s) / 2,
            SymbolClass::Nonresidue => (r as i64 - s) / 2,
        };
        base + part as u64
    }

    /// `M_χ(x)` from the table; exact integer sum divided by x.
    #[inline]
    pub fn mean_value(&self, x: u64) -> f64 {
        self.partial_sum(x) as f64 / x as f64
    }
}

/// Evaluates the explicit Burgess envelope
/// `30 · N^(1-1/r) · p^((r+1)/4r²) · (ln p)^(1/r)` (natural logs).
pub fn burgess_rhs(p: &OddPrime, n: u64, r: u32) -> Result<BurgessParams> {
    if r < 1 {
        return Err(Error::BurgessParam { what: "r" });
    }
    if n < 1 {
        return Err(Error::BurgessParam { what: "N" });
    }
    let rf = r as f64;
    let rhs = 30.0
        * (n as f64).powf(1.0 - 1.0 / rf)
        * (p.value() as f64).powf((rf + 1.0) / (4.0 * rf * rf))
        * p.log().powf(1.0 / rf);
    Ok(BurgessParams { p: *p, n, r, rhs })
}

/// Minimizes the Burgess envelope over `1 <= r <= r_max`; ties break
/// toward smaller r.
pub fn best_burgess_r(p: &OddPrime, n: u64, r_max: u32) -> Result<(u32, f64)> {
    if r_max < 1 {
        return Err(Error::BurgessParam { what: "r_max" });
    }
    let mut best = (1u32, burgess_rhs(p, n, 1)?.rhs);
    for r in 2..=r_max {
        let rhs = burgess_rhs(p, n, r)?.rhs;
        if rhs < best.1 {
            best = (r, rhs);
        }
    }
    Ok(best)
}

fn check_c_range(p: &OddPrime, c: f64, allow_zero: bool) -> Result<()> {
    let hi = p.log().cbrt();
    let ok = if allow_zero { c >= 0.0 } else { c > 0.0 };
    if !ok || c > hi || !c.is_finite() {
        return Err(Error::COutOfRange {
            c,
            lo: if allow_zero { -0.0 } else { 0.0 },
            hi,
        });
    }
    Ok(())
}

/// The r used against the mean-value threshold:
/// `r = ⌊(1/2c) · sqrt(ln p / ln ln p)⌋`, for `0 < c <= (ln p)^(1/3)`.
pub fn mchin_r_choice(p: &OddPrime, c: f64) -> Result<u32> {
    check_c_range(p, c, false)?;
    let r = ((1.0 / (2.0 * c)) * (p.log() / p.loglog()).sqrt()).floor();
    if r < 1.0 {
        return Err(Error::DegenerateR { c, p: p.value() });
    }
    Ok(r as u32)
}

/// Mean-value threshold `p^(1/4) · exp(c · sqrt(ln p · ln ln p))`,
/// for `0 <= c <= (ln p)^(1/3)`.
pub fn mchin_threshold(p: &OddPrime, c: f64) -> Result<f64> {
    check_c_range(p, c, true)?;
    Ok((p.value() as f64).powf(0.25) * (c * (p.log() * p.loglog()).sqrt()).exp())
}

/// Bound shape `(ln p)^(-c²)` without the implied constant; callers
/// compare `|M_χ| · (ln p)^(c²)` across samples.
pub fn mchin_bound(p: &OddPrime, c: f64) -> Result<f64> {
    check_c_range(p, c, true)?;
    Ok(p.log().powf(-c * c))
}
