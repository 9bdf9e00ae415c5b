//! Closed-form group orders and packing sizes.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

fn pow2(e: u32) -> BigUint {
    BigUint::one() << e
}

/// Order of the real Clifford group on `R^(2^i)`:
/// `2^(i^2+i+2) (2^i - 1) prod_{j=1}^{i-1} (4^j - 1)`.
pub fn clifford_order(i: u32) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::BadParams("need i >= 1".into()));
    }
    let mut order = pow2(i * i + i + 2) * (pow2(i) - 1u32);
    for j in 1..i {
        order *= pow2(2 * j) - 1u32;
    }
    Ok(order)
}

/// Number of `k`-dimensional subspaces of `F_2^i`.
pub fn gaussian_binomial(i: u32, k: u32) -> BigUint {
    if k > i {
        return BigUint::from(0u32);
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for t in 0..k {
        num *= pow2(i - t) - 1u32;
        den *= pow2(t + 1) - 1u32;
    }
    num / den
}

/// Size of the packing in `G(2^i, 2^k)` built from the Clifford group:
/// `2^(i-k) [i k]_2 prod_{j=k}^{i-1} (2^j + 1)`.
pub fn theorem3_count(i: u32, k: u32) -> Result<BigUint> {
    if i == 0 || k >= i {
        return Err(Error::BadParams(format!(
            "need 0 <= k <= i - 1, got i = {i}, k = {k}"
        )));
    }
    let mut count = pow2(i - k) * gaussian_binomial(i, k);
    for j in k..i {
        count *= pow2(j) + 1u32;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_binomials() {
        let g = |i, k| gaussian_binomial(i, k).to_string();
        assert_eq!(g(3, 1), "7");
        assert_eq!(g(4, 2), "35");
        assert_eq!(g(5, 0), "1");
        assert_eq!(g(5, 5), "1");
        assert_eq!(g(2, 3), "0");
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(theorem3_count(3, 3).is_err());
        assert!(theorem3_count(0, 0).is_err());
        assert!(clifford_order(0).is_err());
    }
}
