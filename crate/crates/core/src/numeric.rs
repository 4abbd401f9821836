//! Floating-point helpers shared by the float evaluation paths.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// `ln(x!) = ln Γ(x + 1)` for real `x ≥ 0`.
pub fn ln_factorial(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x + 1.0)
}

/// Natural log of an arbitrary-precision integer, exact to f64 rounding.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(v) = x.to_f64() {
            return v.ln();
        }
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    debug_assert!(x.is_positive());
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    ln_biguint(n) - ln_biguint(d)
}

/// Nearest f64 to a rational; may underflow to 0 or overflow to infinity.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| ln_rational(x).exp())
}

/// Max-shifted `ln Σ exp(t_i)`. Returns `-inf` for an empty slice.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}
