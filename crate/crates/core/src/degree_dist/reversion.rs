//! Independent oracle for `λₙ` by series reversion.
//!
//! `λ⁻¹(x) = y₁x + y₂x² + …` is expanded explicitly, `φ(x) = x/λ⁻¹(x)` is
//! formed, and Lagrange inversion gives `λₙ = [x^(n-2)] φ^(n-1) / (n-1)`.
//! Powers of `φ` use the J.C.P. Miller recurrence on `ψ = φ/φ(0)`:
//! `h₀ = 1`, `h_k = (1/k) Σ_{j=1}^{k} ((α+1)j - k) ψⱼ h_{k-j}` for `h = ψ^α`.
//!
//! The series coefficients grow geometrically (the nearest singularity of
//! `λ⁻¹` sits at distance `p^(-1/3) - 1` from the origin), so everything runs in
//! binary fixed point with a generous number of fractional bits.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::check_regular::attach_lambda_tail;
use super::DegreeDistribution;
use crate::error::{check_probability, invalid, Result};
use crate::numeric::{big_frexp, f64_to_rational, round_div, round_shr};

/// Default maximum degree for the oracle.
pub const DEFAULT_ORACLE_DEPTH: usize = 256;

/// `λ₂ … λ_{n_max}` by reversion of the explicit series of `λ⁻¹`.
pub fn lambda_reversion_oracle(p: f64, n_max: usize) -> Result<DegreeDistribution> {
    lambda_reversion_oracle_with_depth(p, n_max, DEFAULT_ORACLE_DEPTH)
}

/// Same as [`lambda_reversion_oracle`] with an explicit depth cap.
pub fn lambda_reversion_oracle_with_depth(p: f64, n_max: usize, depth: usize) -> Result<DegreeDistribution> {
    check_probability("p", p)?;
    if n_max < 2 || n_max > depth {
        return Err(invalid("n_max", format!("{n_max} outside 2..={depth}")));
    }
    let bits = 256 + 16 * n_max;
    let fx = Fx { bits };
    // Series length: λ_n needs ψ up to x^(n-2), i.e. y up to x^(n-1).
    let len = n_max;

    // E(x) = 1 + r(3x - 3x² + x³) with r = p/(1-p); then y = 1 - (1-x)²/E².
    let pr = f64_to_rational(p);
    let r = round_div(&(pr.numer() << bits), &(pr.denom() - pr.numer()));
    let e: [BigInt; 4] = [BigInt::zero(), &r * 3, -(&r * BigInt::from(3)), r.clone()];
    let mut inv_e = vec![BigInt::zero(); len + 1];
    inv_e[0] = fx.one();
    for k in 1..=len {
        let mut acc = BigInt::zero();
        for j in 1..=3.min(k) {
            acc += fx.mul(&e[j], &inv_e[k - j]);
        }
        inv_e[k] = -acc;
    }
    let inv_e2 = fx.square_series(&inv_e, len);
    // (1-x)² · inv_e2
    let mut ratio = vec![BigInt::zero(); len + 1];
    for k in 0..=len {
        let mut v = inv_e2[k].clone();
        if k >= 1 {
            v -= &inv_e2[k - 1] * 2;
        }
        if k >= 2 {
            v += &inv_e2[k - 2];
        }
        ratio[k] = v;
    }
    // y_k = -ratio_k for k ≥ 1 (y_0 = 0); w = y/x has w_k = y_{k+1}.
    let w: Vec<BigInt> = (0..len).map(|k| -ratio[k + 1].clone()).collect();
    // v = w / w_0, ψ = 1/v.
    let v: Vec<BigInt> = w.iter().map(|c| fx.div(c, &w[0])).collect();
    let mut psi = vec![BigInt::zero(); len];
    psi[0] = fx.one();
    for k in 1..len {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            acc += fx.mul(&v[j], &psi[k - j]);
        }
        psi[k] = -acc;
    }
    let phi0 = (1.0 - p) / (2.0 * (1.0 + 2.0 * p));

    let mut coeffs = vec![0.0; n_max + 1];
    coeffs[2] = phi0;
    for n in 3..=n_max {
        let alpha = (n - 1) as i64;
        let kmax = n - 2;
        let mut h = vec![BigInt::zero(); kmax + 1];
        h[0] = fx.one();
        for k in 1..=kmax {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                let c = (alpha + 1) * j as i64 - k as i64;
                if c != 0 {
                    acc += fx.mul(&psi[j], &h[k - j]) * c;
                }
            }
            h[k] = round_div(&acc, &BigInt::from(k as u64));
        }
        let (m, e2) = big_frexp(&h[kmax]);
        let log = m.abs().ln() + (e2 - bits as i64) as f64 * std::f64::consts::LN_2 + alpha as f64 * phi0.ln()
            - (alpha as f64).ln();
        coeffs[n] = m.signum() * log.exp();
    }
    let dd = DegreeDistribution::from_coeffs(coeffs)?;
    Ok(attach_lambda_tail(dd, p))
}

/// Fixed-point helpers with `bits` fractional bits.
struct Fx {
    bits: usize,
}

impl Fx {
    fn one(&self) -> BigInt {
        BigInt::one() << self.bits
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        round_shr(&(a * b), self.bits)
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        round_div(&(a << self.bits), b)
    }

    fn square_series(&self, s: &[BigInt], len: usize) -> Vec<BigInt> {
        (0..=len)
            .map(|k| {
                let mut acc = BigInt::zero();
                for i in 0..=k {
                    acc += &s[i] * &s[k - i];
                }
                round_shr(&acc, self.bits)
            })
            .collect()
    }
}
