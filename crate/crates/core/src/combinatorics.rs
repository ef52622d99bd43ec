//! Exact binomial coefficients, their real-valued generalization, and
//! rational helpers shared by the parameter formulas.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

/// `C(n, k)` with arbitrary precision; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `Σ_{i=lo}^{hi} C(n, i) · weight^i`.
pub fn weighted_binomial_sum(n: u64, lo: u64, hi: u64, weight: u64) -> BigUint {
    (lo..=hi)
        .map(|i| binomial(n, i) * BigUint::from(weight).pow(i as u32))
        .sum()
}

/// `ln C(n, k)` through the log-gamma function; accepts non-integer
/// arguments. Returns negative infinity outside `0 <= k <= n`.
pub fn ln_binomial_real(n: f64, k: f64) -> f64 {
    if !(0.0..=n).contains(&k) {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// Real-valued binomial `Γ(n+1) / (Γ(k+1) Γ(n-k+1))`.
pub fn binomial_real(n: f64, k: f64) -> f64 {
    ln_binomial_real(n, k).exp()
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn big(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// Decimal rendering rounded half away from zero.
pub fn decimal(value: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = value * BigRational::from_integer(scale.clone());
    let negative = scaled.is_negative();
    let magnitude = scaled.abs();
    let (q, r) = magnitude.numer().div_rem(magnitude.denom());
    let rounded = if r * 2u32 >= *magnitude.denom() { q + 1u32 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if negative && !rounded_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = places as usize
    )
}

fn rounded_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

pub fn to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut tri: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 1..=rows {
            let prev = &tri[n - 1];
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &prev[k - 1] + &prev[k];
            }
            tri.push(row);
        }
        tri
    }

    #[test]
    fn matches_pascal_triangle() {
        let tri = pascal(80);
        assert_eq!(tri[16][6], BigUint::from(8008u32));
        for (n, row) in tri.iter().enumerate() {
            for (k, value) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, k as u64), value, "C({n},{k})");
            }
        }
    }

    #[test]
    fn edge_cases() {
        assert_eq!(binomial(16, 6), BigUint::from(8008u32));
        assert_eq!(binomial(9, 0), BigUint::one());
        assert_eq!(binomial(3, 4), BigUint::zero());
        // S of the (8,8,5,6) array: C(3,2)·2^(3-2).
        assert_eq!(binomial(3, 2) * 2u32, BigUint::from(6u32));
        // Beyond 64 bits.
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn real_binomial_agrees_on_integers() {
        for n in 0..40u64 {
            for k in 0..=n {
                let exact = binomial(n, k).to_f64().unwrap();
                let approx = binomial_real(n as f64, k as f64);
                assert!((approx / exact - 1.0).abs() < 1e-9, "C({n},{k})");
            }
        }
        assert_eq!(ln_binomial_real(3.0, 4.0), f64::NEG_INFINITY);
    }

    #[test]
    fn weighted_sums() {
        assert_eq!(weighted_binomial_sum(3, 0, 2, 1), BigUint::from(7u32));
        assert_eq!(weighted_binomial_sum(10, 0, 6, 2), BigUint::from(26025u32));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(3, 5), 4), "0.6000");
        assert_eq!(decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(decimal(&ratio(-2, 3), 4), "-0.6667");
        assert_eq!(decimal(&ratio(1, 20000), 4), "0.0001");
        assert_eq!(decimal(&ratio(-1, 30000), 4), "0.0000");
        assert_eq!(decimal(&ratio(8200192, 14893), 4), "550.6071");
        assert_eq!(decimal(&ratio(7, 2), 0), "4");
    }

    proptest! {
        #[test]
        fn pascal_identity(n in 1u64..64, k in 1u64..64) {
            prop_assume!(k <= n);
            prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    }
}
