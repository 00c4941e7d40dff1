//! Binary Jacobi symbol.

/// Jacobi symbol `(a|m)` for odd `m >= 1`, by the binary algorithm:
/// strip factors of two with the second supplementary law, then flip by
/// quadratic reciprocity and reduce. O(log² m) bit operations.
///
/// For prime `m` this is the Legendre symbol.
pub(crate) fn jacobi_symbol(mut a: u64, mut m: u64) -> i8 {
    debug_assert!(m % 2 == 1 && m >= 1);
    a %= m;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        // (2|m) = -1 iff m ≡ 3, 5 (mod 8)
        if tz % 2 == 1 {
            let m8 = m & 7;
            if m8 == 3 || m8 == 5 {
                t = -t;
            }
        }
        // reciprocity: both ≡ 3 (mod 4) flips the sign
        if a & 3 == 3 && m & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}
