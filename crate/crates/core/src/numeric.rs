//! Big-number helpers: conversions to `f64`, logarithms of huge values,
//! rounded shifts for fixed-point work, and exact polynomial evaluation.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Multiplies `x` by `2^e` without intermediate overflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Splits a big integer into a mantissa in `[0.5, 1)` (signed) and a binary exponent.
pub fn big_frexp(x: &BigInt) -> (f64, i64) {
    if x.is_zero() {
        return (0.0, 0);
    }
    let bits = x.bits() as i64;
    let shift = bits - 64;
    let top = if shift > 0 { x.abs() >> shift as usize } else { x.abs() << (-shift) as usize };
    let m = top.to_u64().expect("64-bit window") as f64 / 2f64.powi(64);
    let m = if x.sign() == Sign::Minus { -m } else { m };
    (m, bits)
}

/// Converts a big integer to the nearest `f64` (saturating to infinity).
pub fn big_to_f64(x: &BigInt) -> f64 {
    let (m, e) = big_frexp(x);
    ldexp(m, e)
}

/// Correctly scaled quotient `num / den` as `f64`.
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
    let (n, d) = (num.abs(), den.abs());
    let shift = 66 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 { (n << shift as usize) / d } else { n / (d << (-shift) as usize) };
    let v = ldexp(big_to_f64(&q), -shift);
    if negative {
        -v
    } else {
        v
    }
}

/// `f64` value of an exact rational.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Natural logarithm of a positive big integer.
pub fn big_ln(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive integer");
    let (m, e) = big_frexp(x);
    m.ln() + e as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational.
pub fn rational_ln(r: &BigRational) -> f64 {
    big_ln(r.numer()) - big_ln(r.denom())
}

/// `x / 2^s` rounded to nearest, for fixed-point arithmetic.
pub fn round_shr(x: &BigInt, s: usize) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    (x + (BigInt::one() << (s - 1))) >> s
}

/// Nearest integer to `x / d` for positive `d`.
pub fn round_div(x: &BigInt, d: &BigInt) -> BigInt {
    let twice: BigInt = x * 2 + d;
    twice.div_floor(&(d * 2))
}

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Polynomial with integer numerators over one common positive denominator,
/// evaluated exactly at rational points without intermediate gcd reductions.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPoly {
    /// Numerators indexed by power.
    pub numer: Vec<BigInt>,
    /// Common denominator.
    pub denom: BigInt,
}

impl ScaledPoly {
    /// Brings rational coefficients to a common denominator.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let denom = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        ScaledPoly { numer, denom }
    }

    /// Value at `x`.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let (s, scale) = self.eval_scaled(x.numer(), x.denom());
        BigRational::new(s, scale * &self.denom)
    }

    /// Returns `(S, b^d)` with `poly(a/b) = S / (b^d * denom)`, where `d` is the degree.
    pub fn eval_scaled(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let Some((last, rest)) = self.numer.split_last() else {
            return (BigInt::zero(), BigInt::one());
        };
        let mut acc = last.clone();
        let mut bpow = BigInt::one();
        for c in rest.iter().rev() {
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        (acc, bpow)
    }
}

/// Exact Horner evaluation of a rational polynomial.
pub fn eval_rational_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    ScaledPoly::from_rationals(coeffs).eval(x)
}
