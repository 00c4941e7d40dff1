//! Shared fixtures for the benchmark targets.

use nrlab_core::OddPrime;

/// Moduli spanning the sizes the sweeps touch.
pub const BENCH_PRIMES: [u64; 4] = [101, 99_991, 1_000_003, 1_000_000_007];

pub fn bench_moduli() -> Vec<OddPrime> {
    BENCH_PRIMES
        .iter()
        .map(|&p| OddPrime::new(p).expect("fixture primes are prime"))
        .collect()
}
