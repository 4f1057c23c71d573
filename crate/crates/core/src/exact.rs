//! Exact scalars.
//!
//! Every Krawtchouk value and every probability in this crate is an
//! arbitrary-precision integer or rational. Floating point only appears at
//! the sampling boundary, through [`to_f64`].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact integer scalar.
pub type Integer = BigInt;
/// Exact rational scalar.
pub type Rational = BigRational;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with signed arguments; zero outside `0 <= k <= n`.
pub fn binomial_signed(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 || k > n {
        Integer::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Row `n` of Pascal's triangle.
pub fn binomial_row(n: u64) -> Vec<Integer> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = Integer::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

pub fn pow2(e: u64) -> Integer {
    Integer::one() << e
}

pub fn ratio(num: impl Into<Integer>, den: impl Into<Integer>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(v: impl Into<Integer>) -> Rational {
    Rational::from_integer(v.into())
}

/// `(-1)^k` as an exact integer.
pub fn sign_pow(k: u64) -> Integer {
    if k % 2 == 0 {
        Integer::one()
    } else {
        -Integer::one()
    }
}

/// Nearest `f64` to an exact rational. Magnitudes below the `f64` range
/// round to zero.
pub fn to_f64(q: &Rational) -> f64 {
    quotient_to_f64(q.numer(), q.denom())
}

/// `num / den` as an `f64`, accurate to a couple of ulps, without reducing
/// the fraction first.
pub fn quotient_to_f64(num: &Integer, den: &Integer) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let num = num.abs();
    let den = den.abs();
    // Aim for a 65-bit integer quotient, then rescale by 2^shift.
    let shift = num.bits() as i64 - den.bits() as i64 - 65;
    let q = if shift >= 0 {
        &num / (den << shift as u64)
    } else {
        (num << (-shift) as u64) / &den
    };
    let exp = shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    let v = libm::ldexp(q.to_f64().unwrap_or(f64::INFINITY), exp);
    if negative {
        -v
    } else {
        v
    }
}

/// Natural logarithm of a positive rational, without underflow for tiny
/// values. Returns `-inf` for zero.
pub fn ln_ratio(num: &Integer, den: &Integer) -> f64 {
    ln_integer(num) - ln_integer(den)
}

fn ln_integer(x: &Integer) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 60 {
        return libm::log(x.to_f64().unwrap_or(0.0).abs());
    }
    let shift = bits - 60;
    let top = (x.abs() >> shift).to_f64().unwrap_or(0.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Rational lower bound on pi, correct to fourteen decimals.
pub fn pi_lower() -> Rational {
    ratio(314_159_265_358_979_i64, 100_000_000_000_000_i64)
}

/// Rational upper bound on pi, correct to fourteen decimals.
pub fn pi_upper() -> Rational {
    ratio(314_159_265_358_980_i64, 100_000_000_000_000_i64)
}
