//! Cantor pairing and binary digits of rationals.

use num_bigint::BigUint;

/// `π(a, b) = (a + b)(a + b + 1)/2 + b`, or `None` on overflow.
pub fn pair(a: u64, b: u64) -> Option<u64> {
    let s = (a as u128) + (b as u128);
    let z = s.checked_mul(s + 1)? / 2 + b as u128;
    u64::try_from(z).ok()
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).isqrt() - 1) / 2;
    let t = w * (w + 1) / 2;
    let b = z - t;
    let a = w - b;
    (a as u64, b as u64)
}

/// The `i`-th binary digit (0-based, after the point) of `num/den ∈ [0,1]`,
/// that is `⌊num · 2^{i+1} / den⌋ mod 2`. For `q = 1` every digit is 1, so
/// that `Σ cᵢ/2^{i+1} = q` holds throughout.
pub fn binary_digit(num: u64, den: u64, i: u64) -> Option<u64> {
    if den == 0 || num > den {
        return None;
    }
    if num == den {
        return Some(1);
    }
    let m = BigUint::from(den) * 2u32;
    let r = BigUint::from(2u32).modpow(&BigUint::from(i + 1), &m) * num % &m;
    Some((r >= BigUint::from(den)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_table() {
        // brute-force diagonal enumeration
        let mut expected = Vec::new();
        for s in 0..20u64 {
            for b in 0..=s {
                expected.push((s - b, b));
            }
        }
        for (z, &(a, b)) in expected.iter().enumerate() {
            assert_eq!(pair(a, b), Some(z as u64));
            assert_eq!(unpair(z as u64), (a, b));
        }
        assert_eq!(pair(u64::MAX, 1), None);
    }

    #[test]
    fn digits_of_simple_rationals() {
        let digits = |n, d, k| (0..k).map(|i| binary_digit(n, d, i).unwrap()).collect::<Vec<_>>();
        assert_eq!(digits(3, 8, 5), [0, 1, 1, 0, 0]);
        assert_eq!(digits(5, 16, 6), [0, 1, 0, 1, 0, 0]);
        assert_eq!(digits(1, 3, 6), [0, 1, 0, 1, 0, 1]);
        assert_eq!(digits(1, 1, 4), [1, 1, 1, 1]);
        assert_eq!(digits(0, 7, 4), [0, 0, 0, 0]);
        assert_eq!(binary_digit(2, 1, 0), None);
        assert_eq!(binary_digit(1, 3, 1001), Some(1));
        assert_eq!(binary_digit(1, 3, 1000), Some(0));
    }
}
