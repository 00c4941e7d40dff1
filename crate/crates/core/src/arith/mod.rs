//! Exact modular arithmetic, primality, prime enumeration, and the
//! Legendre/Jacobi symbol.
//!
//! Everything here is integer-exact. Moduli are odd primes below 2^63 so
//! that a signed reduction of any `i64` argument is always representable;
//! modular products go through 128-bit intermediates and cannot overflow.

mod jacobi;
mod primality;
mod sieve;

pub use primality::is_prime;
pub use sieve::{primes_in, primes_in_with_segment, PrimeRange, DEFAULT_SEGMENT_SIZE};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`OddPrime::new`]; keeps `n mod p` of any
/// `i64` argument representable and modular products within `u128`.
pub const MAX_MODULUS: u64 = (1 << 63) - 1;

/// A validated odd prime modulus with its precomputed logarithms.
///
/// Construction runs the deterministic primality test, so holding an
/// `OddPrime` is proof that the value is an odd prime in `[3, 2^63)`.
#[derive(Debug, Clone, Copy)]
pub struct OddPrime {
    value: u64,
    log_value: f64,
    loglog_value: f64,
}

// The logs are a pure function of `value`, so identity is by value alone.
impl PartialEq for OddPrime {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}
impl Eq for OddPrime {}
impl PartialOrd for OddPrime {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OddPrime {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.value.cmp(&other.value)
    }
}
impl std::hash::Hash for OddPrime {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl OddPrime {
    /// Validates and wraps an odd prime modulus.
    pub fn new(value: u64) -> Result<Self> {
        if value < 3 {
            return Err(Error::NotOddPrime {
                value,
                reason: "must be >= 3",
            });
        }
        if value % 2 == 0 {
            return Err(Error::NotOddPrime {
                value,
                reason: "must be odd",
            });
        }
        if value > MAX_MODULUS {
            return Err(Error::NotOddPrime {
                value,
                reason: "must be below 2^63",
            });
        }
        if !is_prime(value) {
            return Err(Error::NotOddPrime {
                value,
                reason: "failed the deterministic primality test",
            });
        }
        let log_value = (value as f64).ln();
        Ok(OddPrime {
            value,
            log_value,
            loglog_value: log_value.ln(),
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Natural log of the modulus.
    #[inline]
    pub fn log(&self) -> f64 {
        self.log_value
    }

    /// `ln ln p`; positive for every supported modulus (p >= 3).
    #[inline]
    pub fn loglog(&self) -> f64 {
        self.loglog_value
    }

    /// Number of positive nonresidues below p, i.e. (p-1)/2.
    #[inline]
    pub fn nonresidue_count(&self) -> u64 {
        (self.value - 1) / 2
    }
}

impl std::fmt::Display for OddPrime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Value of the Legendre symbol: +1, -1, or 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// `(n|p) = +1`: n is a nonzero quadratic residue mod p.
    Residue,
    /// `(n|p) = -1`: n is a quadratic nonresidue mod p.
    Nonresidue,
    /// `(n|p) = 0`: p divides n.
    Zero,
}

impl Symbol {
    /// The symbol as the integer it denotes.
    #[inline]
    pub fn value(self) -> i8 {
        match self {
            Symbol::Residue => 1,
            Symbol::Nonresidue => -1,
            Symbol::Zero => 0,
        }
    }

    #[inline]
    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            1 => Some(Symbol::Residue),
            -1 => Some(Symbol::Nonresidue),
            0 => Some(Symbol::Zero),
            _ => None,
        }
    }
}

/// Complete multiplicativity of the symbol.
impl std::ops::Mul for Symbol {
    type Output = Symbol;

    #[inline]
    fn mul(self, other: Symbol) -> Symbol {
        Symbol::from_value(self.value() * other.value()).expect("product stays in {-1,0,1}")
    }
}

/// A nonzero symbol class; the θ of counting statements.
///
/// Operations whose contract excludes the zero symbol take this type
/// instead of [`Symbol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolClass {
    Residue,
    Nonresidue,
}

impl SymbolClass {
    /// +1 for residues, -1 for nonresidues.
    #[inline]
    pub fn sign(self) -> i64 {
        match self {
            SymbolClass::Residue => 1,
            SymbolClass::Nonresidue => -1,
        }
    }

    #[inline]
    pub fn symbol(self) -> Symbol {
        match self {
            SymbolClass::Residue => Symbol::Residue,
            SymbolClass::Nonresidue => Symbol::Nonresidue,
        }
    }
}

/// Computes the Legendre symbol `(n|p)`.
///
/// The argument is reduced mod p first, so any integer is accepted.
/// Evaluation uses the binary Jacobi-symbol algorithm (quadratic
/// reciprocity plus the two supplementary laws), never exponentiation.
#[inline]
pub fn legendre(n: i64, p: &OddPrime) -> Symbol {
    let reduced = n.rem_euclid(p.value() as i64) as u64;
    match jacobi::jacobi_symbol(reduced, p.value()) {
        1 => Symbol::Residue,
        -1 => Symbol::Nonresidue,
        _ => Symbol::Zero,
    }
}

/// Same as [`legendre`] for a nonnegative argument.
#[inline]
pub fn legendre_u64(n: u64, p: &OddPrime) -> Symbol {
    match jacobi::jacobi_symbol(n % p.value(), p.value()) {
        1 => Symbol::Residue,
        -1 => Symbol::Nonresidue,
        _ => Symbol::Zero,
    }
}

/// Chebyshev function `ϑ(v) = Σ_{p ≤ v} ln p` over the supplied primes.
///
/// The prime list must cover `[2, v]`; an empty sum (v < 2) needs no
/// coverage.
pub fn chebyshev_theta(v: f64, primes: &PrimeRange) -> Result<f64> {
    if v < 2.0 {
        return Ok(0.0);
    }
    primes.require_coverage(2, v)?;
    Ok(primes
        .iter()
        .take_while(|&q| (q as f64) <= v)
        .map(|q| (q as f64).ln())
        .sum())
}

/// `a * b mod m` via a 128-bit intermediate; never overflows.
#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `a^e mod m` by square-and-multiply.
pub(crate) fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force symbol table: marks k^2 mod p, no reciprocity involved.
    fn brute_symbols(p: u64) -> Vec<i8> {
        let mut sym = vec![-1i8; p as usize];
        sym[0] = 0;
        for k in 1..p {
            sym[(k * k % p) as usize] = 1;
        }
        sym
    }

    #[test]
    fn odd_prime_construction() {
        assert!(OddPrime::new(3).is_ok());
        assert!(OddPrime::new(17).is_ok());
        assert!(OddPrime::new(1000003).is_ok());
        assert!(matches!(OddPrime::new(1), Err(Error::NotOddPrime { .. })));
        assert!(matches!(OddPrime::new(2), Err(Error::NotOddPrime { .. })));
        assert!(matches!(OddPrime::new(9), Err(Error::NotOddPrime { .. })));
        assert!(matches!(OddPrime::new(15), Err(Error::NotOddPrime { .. })));
        assert!(matches!(
            OddPrime::new(u64::MAX),
            Err(Error::NotOddPrime { .. })
        ));
    }

    #[test]
    fn odd_prime_logs_consistent() {
        for v in [3u64, 7, 101, 1000003] {
            let p = OddPrime::new(v).unwrap();
            assert_eq!(p.log(), (v as f64).ln());
            assert_eq!(p.loglog(), (v as f64).ln().ln());
        }
    }

    #[test]
    fn legendre_one_is_always_residue() {
        for v in [3u64, 5, 7, 11, 101, 99991] {
            let p = OddPrime::new(v).unwrap();
            assert_eq!(legendre(1, &p), Symbol::Residue);
        }
    }

    #[test]
    fn legendre_multiple_of_p_is_zero() {
        let p = OddPrime::new(7).unwrap();
        assert_eq!(legendre(21, &p), Symbol::Zero);
        assert_eq!(legendre(0, &p), Symbol::Zero);
        assert_eq!(legendre(-7, &p), Symbol::Zero);
    }

    #[test]
    fn legendre_mod_7_examples() {
        // squares mod 7 are {1, 2, 4}
        let p = OddPrime::new(7).unwrap();
        assert_eq!(legendre(2, &p), Symbol::Residue);
        assert_eq!(legendre(3, &p), Symbol::Nonresidue);
        assert_eq!(legendre(4, &p), Symbol::Residue);
        assert_eq!(legendre(5, &p), Symbol::Nonresidue);
    }

    #[test]
    fn legendre_negative_arguments_reduce() {
        let p = OddPrime::new(7).unwrap();
        // -1 ≡ 6 mod 7, a nonresidue
        assert_eq!(legendre(-1, &p), Symbol::Nonresidue);
        assert_eq!(legendre(-5, &p), legendre(2, &p));
    }

    #[test]
    fn legendre_matches_brute_force_exhaustively() {
        for v in (3..=200u64).filter(|&v| v % 2 == 1 && is_prime(v)) {
            let p = OddPrime::new(v).unwrap();
            let sym = brute_symbols(v);
            for n in 0..v {
                assert_eq!(
                    legendre(n as i64, &p).value(),
                    sym[n as usize],
                    "mismatch at ({n}|{v})"
                );
            }
        }
    }

    #[test]
    fn legendre_is_completely_multiplicative() {
        // exhaustive over all odd primes p <= 200 and all a, b in [1, p)
        for v in (3..=200u64).filter(|&v| is_prime(v)) {
            let p = OddPrime::new(v).unwrap();
            let sym: Vec<i8> = (0..v).map(|n| legendre_u64(n, &p).value()).collect();
            for a in 1..v {
                for b in 1..v {
                    assert_eq!(
                        sym[(a * b % v) as usize],
                        sym[a as usize] * sym[b as usize],
                        "multiplicativity failed at p={v}, a={a}, b={b}"
                    );
                }
            }
        }
        // sampled for larger p
        let p = OddPrime::new(1_000_003).unwrap();
        for a in (1u64..5000).step_by(97) {
            for b in (1u64..5000).step_by(89) {
                let ab = legendre_u64(a * b % 1_000_003, &p).value();
                assert_eq!(ab, legendre_u64(a, &p).value() * legendre_u64(b, &p).value());
            }
        }
    }

    #[test]
    fn legendre_agrees_with_euler_criterion() {
        // Euler's criterion n^((p-1)/2) ≡ (n|p) mod p, as an independent oracle.
        for v in [101u64, 9973, 99991, 1000003] {
            let p = OddPrime::new(v).unwrap();
            for n in (1..500u64).chain([v - 1, v + 1, 3 * v + 2]) {
                let e = powmod(n % v, (v - 1) / 2, v);
                let expect = if e == 1 {
                    1
                } else if e == v - 1 {
                    -1
                } else {
                    0
                };
                assert_eq!(legendre_u64(n, &p).value() as i64, expect as i64);
            }
        }
    }

    #[test]
    fn legendre_orthogonality_small_primes() {
        for v in (3..=1000u64).filter(|&v| is_prime(v)) {
            let p = OddPrime::new(v).unwrap();
            let sum: i64 = (1..v).map(|n| legendre_u64(n, &p).value() as i64).sum();
            assert_eq!(sum, 0, "orthogonality failed for p = {v}");
        }
    }

    #[test]
    fn chebyshev_theta_examples() {
        let primes = primes_in(2, 120).unwrap();
        assert_eq!(chebyshev_theta(1.5, &primes).unwrap(), 0.0);
        let t10 = chebyshev_theta(10.0, &primes).unwrap();
        let direct: f64 = [2.0f64, 3.0, 5.0, 7.0].iter().map(|x| x.ln()).sum();
        assert!((t10 - direct).abs() < 1e-12);
        assert!((t10 - 5.347107530717468).abs() < 1e-9);
        let t100 = chebyshev_theta(100.0, &primes).unwrap();
        let direct100: f64 = primes
            .iter()
            .filter(|&q| q <= 100)
            .map(|q| (q as f64).ln())
            .sum();
        assert_eq!(t100, direct100);
        assert!(t100 > 0.0 && t100 < 110.0);
    }

    #[test]
    fn chebyshev_theta_coverage_error() {
        let primes = primes_in(2, 50).unwrap();
        assert!(matches!(
            chebyshev_theta(80.0, &primes),
            Err(Error::InsufficientCoverage { .. })
        ));
        let tail = primes_in(11, 50).unwrap();
        assert!(matches!(
            chebyshev_theta(20.0, &tail),
            Err(Error::InsufficientCoverage { .. })
        ));
    }

    #[test]
    fn symbol_algebra() {
        assert_eq!(Symbol::Residue * Symbol::Nonresidue, Symbol::Nonresidue);
        assert_eq!(Symbol::Nonresidue * Symbol::Nonresidue, Symbol::Residue);
        assert_eq!(Symbol::Zero * Symbol::Nonresidue, Symbol::Zero);
        assert_eq!(SymbolClass::Residue.sign(), 1);
        assert_eq!(SymbolClass::Nonresidue.sign(), -1);
    }
}
