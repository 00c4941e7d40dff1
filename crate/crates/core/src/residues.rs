//! Nonresidue sequences, counts by symbol class, the Gauss bound, and the
//! unique `q·m` factorization of nonresidues below `n_1(p)^3`.

use crate::arith::{legendre_u64, OddPrime, Symbol, SymbolClass};
use crate::error::{Error, Result};

/// Complete enumeration of the nonresidues up to a limit, with counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonresidueTable {
    pub p: OddPrime,
    pub limit: u64,
    /// Strictly ascending n with `1 <= n <= limit` and `(n|p) = -1`.
    pub nonresidues: Vec<u64>,
    /// Count of n <= limit with `(n|p) = +1`; zeros excluded.
    pub residue_count: u64,
    /// Count of n <= limit with `(n|p) = -1`; zeros excluded.
    pub nonresidue_count: u64,
}

/// The factorization `n = q·m` of a nonresidue: q a prime nonresidue,
/// m a residue. Unique whenever `n < n_1(p)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub n: u64,
    pub q: u64,
    pub m: u64,
}

/// The k-th smallest positive nonresidue `n_k(p)`, by forward scan.
///
/// Valid for `1 <= k <= (p-1)/2`; there are exactly (p-1)/2 nonresidues
/// in `[1, p-1]`.
pub fn nth_nonresidue(p: &OddPrime, k: u64) -> Result<u64> {
    let available = p.nonresidue_count();
    if k < 1 || k > available {
        return Err(Error::KOutOfRange {
            k,
            available,
            p: p.value(),
        });
    }
    let mut seen = 0u64;
    for n in 2..p.value() {
        if legendre_u64(n, p) == Symbol::Nonresidue {
            seen += 1;
            if seen == k {
                return Ok(n);
            }
        }
    }
    unreachable!("(p-1)/2 nonresidues exist below p")
}

/// Least positive nonresidue `n_1(p)`.
pub fn least_nonresidue(p: &OddPrime) -> u64 {
    nth_nonresidue(p, 1).expect("every odd prime has a nonresidue")
}

/// Exact count of `n <= y` with `(n|p)` in the given class.
pub fn count_by_symbol(p: &OddPrime, y: u64, theta: SymbolClass) -> u64 {
    let want = theta.symbol();
    (1..=y).filter(|&n| legendre_u64(n, p) == want).count() as u64
}

/// Whether `n_1(p) < 2·sqrt(p) + 1`. Only primes `p ≡ 1 (mod 8)` qualify;
/// for those the inequality is a theorem, so `false` is a hard failure.
pub fn gauss_check(p: &OddPrime) -> Result<bool> {
    if p.value() % 8 != 1 {
        return Err(Error::NotOneMod8 { p: p.value() });
    }
    let n1 = least_nonresidue(p);
    // n1 < 2*sqrt(p) + 1  <=>  (n1 - 1)^2 < 4p, exactly in integers
    let lhs = (n1 - 1) as u128 * (n1 - 1) as u128;
    Ok(lhs < 4 * p.value() as u128)
}

/// Decomposes a nonresidue `n < n_1(p)^3` into the unique `q·m` with q a
/// prime nonresidue and m a residue.
///
/// Below the cube of the least nonresidue a nonresidue has exactly one
/// prime-nonresidue factor counted with multiplicity, which forces
/// uniqueness; outside that range the operation refuses rather than pick
/// an arbitrary representation.
pub fn vinogradov_decompose(n: u64, p: &OddPrime) -> Result<Decomposition> {
    let sym = legendre_u64(n, p);
    if sym != Symbol::Nonresidue {
        return Err(Error::NotANonresidue {
            n,
            p: p.value(),
            symbol: sym.value(),
        });
    }
    let n1 = least_nonresidue(p);
    let bound = n1.saturating_mul(n1).saturating_mul(n1);
    if n >= bound {
        return Err(Error::OutsideUniquenessRange { n, bound });
    }
    // factor n; collect the prime-nonresidue divisors with multiplicity
    let mut rest = n;
    let mut q_found: Option<u64> = None;
    let mut q_multiplicity = 0u32;
    let mut d = 2u64;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0u32;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            if legendre_u64(d, p) == Symbol::Nonresidue {
                debug_assert!(q_found.is_none(), "second nonresidue prime below n1^3");
                q_found = Some(d);
                q_multiplicity = e;
            }
        }
        d += 1;
    }
    if rest > 1 && legendre_u64(rest, p) == Symbol::Nonresidue {
        debug_assert!(q_found.is_none());
        q_found = Some(rest);
        q_multiplicity = 1;
    }
    let q = q_found.expect("a nonresidue has a prime nonresidue factor");
    debug_assert_eq!(q_multiplicity, 1, "multiplicity forced to 1 below n1^3");
    let m = n / q;
    debug_assert_eq!(legendre_u64(m, p), Symbol::Residue);
    Ok(Decomposition { n, q, m })
}

/// Enumerates all nonresidues up to `limit` in one streaming pass.
pub fn nonresidue_table(p: &OddPrime, limit: u64) -> NonresidueTable {
    let mut nonresidues = Vec::new();
    let mut residue_count = 0u64;
    for n in 1..=limit {
        match legendre_u64(n, p) {
            Symbol::Residue => residue_count += 1,
            Symbol::Nonresidue => nonresidues.push(n),
            Symbol::Zero => {}
        }
    }
    let nonresidue_count = nonresidues.len() as u64;
    NonresidueTable {
        p: *p,
        limit,
        nonresidues,
        residue_count,
        nonresidue_count,
    }
}
