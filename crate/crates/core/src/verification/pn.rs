//! The polynomials `Pₙ` behind `λ_{n+1}(p) = (1-p) Pₙ(p) / (1+2p)^(2n-1)`.
//!
//! Two independent constructions are kept side by side: the coefficient
//! recursion shared with [`crate::degree_dist::check_regular`], and the
//! operator recursion
//! `P_{n+1} = ([(14-4n)x² + (20n-4)x + 2n-1] Pₙ - 3x(1+x-2x²) Pₙ') / (2(n+1))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::RationalPolynomial;
use crate::degree_dist::check_regular::step_integer;
use crate::degree_dist::PnTable;
use crate::error::{invalid, Result};
use crate::numeric::{binomial, f64_to_rational, rational_ln};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `P₁ … P_{n_max}` from the coefficient recursion; entry `n - 1` holds `Pₙ`.
pub fn pn_exact(n_max: usize) -> Vec<RationalPolynomial> {
    let table = PnTable::new(n_max);
    (1..=n_max).map(|n| RationalPolynomial::new(table.poly(n))).collect()
}

/// `P₁ … P_{n_max}` from the operator recursion; entry `n - 1` holds `Pₙ`.
pub fn pn_operator(n_max: usize) -> Vec<RationalPolynomial> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    out.push(RationalPolynomial::constant(BigRational::new(1.into(), 2.into())));
    let cubic = RationalPolynomial::from_integers(&[0, 3, 3, -6]);
    for n in 1..n_max as i64 {
        let prev = &out[n as usize - 1];
        let quad = RationalPolynomial::from_integers(&[2 * n - 1, 20 * n - 4, 14 - 4 * n]);
        let next = &(&quad * prev) - &(&cubic * &prev.derivative());
        out.push(next.scale(&BigRational::new(1.into(), (2 * (n + 1)).into())));
    }
    out
}

/// `Pₙ(0) = C(2n, n) / ((2n-1) 4ⁿ)`.
pub fn pn_at_zero(n: usize) -> BigRational {
    let n64 = n as u64;
    BigRational::new(binomial(2 * n64, n64), (BigInt::one() << (2 * n)) * (2 * n64 - 1))
}

/// `Pₙ(1) = 9^(n-1) C(2n, n) / 4ⁿ`.
pub fn pn_at_one(n: usize) -> BigRational {
    let n64 = n as u64;
    BigRational::new(
        BigInt::from(9).pow(n as u32 - 1) * binomial(2 * n64, n64),
        BigInt::one() << (2 * n),
    )
}

/// `λ_{n+1}(p) = (1-p) Pₙ(p) / (1+2p)^(2n-1)`.
pub fn lambda_from_pn(pn: &RationalPolynomial, n: usize, p: &BigRational) -> BigRational {
    let one = BigRational::one();
    let base = &one + p * rat(2);
    let mut den = BigRational::one();
    for _ in 0..2 * n - 1 {
        den *= &base;
    }
    (&one - p) * pn.eval(p) / den
}

/// Integer coefficients of `2ⁿ n! Pₙ` for a single `n`, keeping only one
/// polynomial in memory.
pub fn pn_scaled(n: usize) -> Vec<BigInt> {
    let mut cur = vec![BigInt::one()];
    for m in 1..n {
        cur = step_integer(&cur, m as i64);
    }
    cur
}

/// Coefficients with the signs of `bᵢ` in `Pₙ(p) = Σ bᵢ (p - 1/2)ⁱ`.
///
/// Input is any positive multiple of `Pₙ` with integer coefficients; the
/// output equals `bᵢ` up to the positive factor `2^(d-i)` times that multiple.
pub fn shifted_signs(scaled: &[BigInt]) -> Vec<BigInt> {
    let d = scaled.len().saturating_sub(1);
    // 2^d P(y/2) has integer coefficients a_j 2^(d-j); then y -> y + 1.
    let mut c: Vec<BigInt> = scaled.iter().enumerate().map(|(j, a)| a << (d - j)).collect();
    taylor_shift_by(&mut c, &BigInt::one());
    c
}

/// In-place `c(y) -> c(y + s)`.
pub(crate) fn taylor_shift_by(c: &mut [BigInt], s: &BigInt) {
    let d = c.len();
    for i in 0..d {
        for j in (i..d.saturating_sub(1)).rev() {
            let t = &c[j + 1] * s;
            c[j] += t;
        }
    }
}

/// Largest `|ln Pₙ(x)/n - 2 ln(1+2x)|` over `grid`.
pub fn pn_log_limit_check(n: usize, grid: &[f64]) -> Result<f64> {
    if n < 10 {
        return Err(invalid("n", "must be at least 10"));
    }
    if grid.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(invalid("grid", "points must lie in [0, 1]"));
    }
    let table = PnTable::new(n);
    let pn = RationalPolynomial::new(table.poly(n));
    Ok(grid
        .iter()
        .map(|&x| {
            let v = pn.eval(&f64_to_rational(x));
            (rational_ln(&v) / n as f64 - 2.0 * (2.0 * x).ln_1p()).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_polynomials() {
        let p = pn_operator(3);
        assert_eq!(p[0], RationalPolynomial::constant(q(1, 2)));
        assert_eq!(p[1], RationalPolynomial::new(vec![q(1, 8), q(2, 1), q(5, 4)]));
        assert_eq!(p[2].eval(&BigRational::zero()), q(1, 16));
        assert_eq!(p[2].eval(&BigRational::one()), q(405, 16));
    }

    #[test]
    fn recursions_agree() {
        assert_eq!(pn_exact(40), pn_operator(40));
    }

    #[test]
    fn endpoint_recursions() {
        for n in 1..40 {
            assert_eq!(pn_at_zero(n + 1), pn_at_zero(n) * q(2 * n as i64 - 1, 2 * (n as i64 + 1)));
            assert_eq!(pn_at_one(n + 1), pn_at_one(n) * q(9 * (2 * n as i64 + 1), 2 * (n as i64 + 1)));
        }
    }

    #[test]
    fn single_polynomial_matches_table() {
        let table = PnTable::new(12);
        assert_eq!(pn_scaled(12), table.scaled(12).to_vec());
    }

    #[test]
    fn shifted_signs_of_known_polynomial() {
        // 8 P₂ = 1 + 16p + 10p²; around 1/2: 10(p-1/2)² + 26(p-1/2) + 11.5.
        let s = shifted_signs(&[1.into(), 16.into(), 10.into()]);
        // Scaled by 2^(d-i) with d = 2: [46, 52, 10].
        assert_eq!(s, vec![BigInt::from(46), BigInt::from(52), BigInt::from(10)]);
    }

    #[test]
    fn log_limit_improves() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let d20 = pn_log_limit_check(20, &grid).unwrap();
        let d100 = pn_log_limit_check(100, &grid).unwrap();
        assert!(d100 < d20);
        assert!(pn_log_limit_check(5, &grid).is_err());
    }
}
