//! Bit-regular ensemble: every information bit is repeated `q` times and the
//! check distribution is the power series of
//! `ρ(x) = (1 - (1-x)^(1/(q-1))) / (1 - p + p Q(x))²` with
//! `Q(x) = q x - (q-1)(1 - (1-x)^(q/(q-1)))`.
//!
//! Coefficients come from the convolution recursion on `R(x) = Q/(1-p+pQ)`:
//! `Rₙ = (Qₙ - p Σ_{i=2}^{n-2} Rᵢ Q_{n-i}) / (1-p)` and `ρₙ = n Rₙ / (q(1-p))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ensemble::{BitRegularSpec, EnsembleSpec, TruncatedPair};
use super::{ClosedForm, DegreeDistribution, Tail};
use crate::error::{check_probability, invalid, Error, Result};

/// Exact coefficients `Qₙ` of `Q(x)`, indexed by `n` (entries 0 and 1 are zero).
///
/// `Qₙ = (-1)ⁿ (q/n) C(1/(q-1), n-1)` with the fractional binomial built by
/// the product formula.
pub fn q_series(q: u32, n_max: usize) -> Result<Vec<BigRational>> {
    check_q(q)?;
    let alpha = BigRational::new(BigInt::one(), BigInt::from(q - 1));
    let mut out = vec![BigRational::zero(); n_max + 1];
    // binom holds C(alpha, n-1), starting at C(alpha, 1) = alpha.
    let mut binom = alpha.clone();
    for n in 2..=n_max {
        if n > 2 {
            let k = BigInt::from(n as u64 - 1);
            binom = binom * (&alpha - BigRational::from_integer(&k - 1)) / BigRational::from_integer(k);
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        out[n] = &binom * BigRational::new(BigInt::from(sign * q as i64), BigInt::from(n as u64));
    }
    Ok(out)
}

/// `Qₙ` in double precision, by the same product formula on magnitudes.
pub fn q_series_f64(q: u32, n_max: usize) -> Result<Vec<f64>> {
    check_q(q)?;
    let alpha = 1.0 / (q - 1) as f64;
    let mut out = vec![0.0; n_max + 1];
    let mut binom_abs = alpha;
    for n in 2..=n_max {
        if n > 2 {
            let k = (n - 1) as f64;
            binom_abs *= (k - 1.0 - alpha) / k;
        }
        out[n] = q as f64 / n as f64 * binom_abs;
    }
    Ok(out)
}

/// Edge-perspective `ρ` of the bit-regular ensemble up to degree `n_max`.
///
/// The result carries the closed form of `ρ` and its tail mass `1 - Σ ρₙ`.
/// Outside the proven or conjectured positivity region some coefficients may
/// be negative; callers inspect [`BitRegularSpec::positivity`].
pub fn bit_regular_rho(q: u32, p: f64, n_max: usize) -> Result<DegreeDistribution> {
    check_probability("p", p)?;
    if n_max < 2 {
        return Err(invalid("n_max", "must be at least 2"));
    }
    let qs = q_series_f64(q, n_max)?;
    let mut r = vec![0.0; n_max + 1];
    let scale = 1.0 / (1.0 - p);
    for n in 2..=n_max {
        let conv: f64 = (2..=n.saturating_sub(2)).map(|i| r[i] * qs[n - i]).sum();
        r[n] = scale * (qs[n] - p * conv);
    }
    let norm = q as f64 * (1.0 - p);
    let coeffs: Vec<f64> = r.iter().enumerate().map(|(n, rn)| n as f64 * rn / norm).collect();
    let dd = DegreeDistribution::from_coeffs(coeffs)?;
    let mass = 1.0 - dd.stored_total();
    let exponent = q as f64 / (q - 1) as f64;
    Ok(dd.with_tail(Tail { mass, exponent }, ClosedForm::BitRegularRho { q, p }))
}

/// ε-truncation of `ρ`: keep degrees up to the minimal `M` with
/// `1 - Σ_{n≤M} ρₙ < ε/(q(1-p))` and move the rest of the mass to degree 1.
pub fn truncate_rho(rho: &DegreeDistribution, q: u32, p: f64, epsilon: f64) -> Result<TruncatedPair> {
    let spec = BitRegularSpec::new(q, p, epsilon)?;
    let bound = epsilon / (q as f64 * (1.0 - p));
    let mut partial = 0.0;
    let mut m = None;
    for d in 2..=rho.max_degree() {
        partial += rho.coeff(d);
        if 1.0 - partial < bound {
            m = Some(d);
            break;
        }
    }
    let m = m.ok_or_else(|| {
        Error::InsufficientDepth(format!(
            "tail at degree {} is {:.3e}, bound {:.3e}",
            rho.max_degree(),
            1.0 - partial,
            bound
        ))
    })?;
    let mut coeffs = vec![0.0; m + 1];
    coeffs[2..=m].copy_from_slice(&rho.coeffs()[2..=m]);
    coeffs[1] = 1.0 - coeffs[2..].iter().sum::<f64>();
    let rho_eps = DegreeDistribution::from_coeffs(coeffs)?;
    let lambda = DegreeDistribution::monomial(q as usize);
    let design_rate = super::design_rate(&lambda, &rho_eps);
    Ok(TruncatedPair {
        spec: EnsembleSpec::BitRegular(spec),
        lambda,
        rho: rho_eps,
        m,
        pilot_fraction: 0.0,
        design_rate,
    })
}

/// `Q(x) = q x - (q-1)(1 - (1-x)^(q/(q-1)))`.
pub fn q_closed(q: u32, x: f64) -> f64 {
    let a = q as f64 / (q - 1) as f64;
    q as f64 * x - (q - 1) as f64 * (1.0 - (1.0 - x).powf(a))
}

/// `ρ(x)` of the bit-regular ensemble.
pub fn rho_closed(q: u32, p: f64, x: f64) -> f64 {
    let num = 1.0 - (1.0 - x).powf(1.0 / (q - 1) as f64);
    let den = 1.0 - p + p * q_closed(q, x);
    num / (den * den)
}

/// `R(x) = Q(x) / (1 - p + p Q(x))`, the check node-perspective of `ρ`.
pub fn r_closed(q: u32, p: f64, x: f64) -> f64 {
    let qx = q_closed(q, x);
    qx / (1.0 - p + p * qx)
}

fn check_q(q: u32) -> Result<()> {
    if q < 3 {
        return Err(invalid("q", format!("{q} < 3")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_to_f64;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Taylor coefficients of `3x - 2 + 2(1-x)^(3/2)` from the binomial series,
    /// computed independently of the product formula.
    fn q3_oracle(n: usize) -> BigRational {
        // (1-x)^(3/2) = Σ C(3/2, n) (-x)^n
        let half3 = rat(3, 2);
        let mut c = BigRational::one();
        for k in 0..n {
            c = c * (&half3 - BigRational::from_integer(k.into())) / BigRational::from_integer((k + 1).into());
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        c * rat(2 * sign, 1)
    }

    #[test]
    fn q_series_small_terms() {
        let qs = q_series(3, 6).unwrap();
        assert_eq!(qs[2], rat(3, 4));
        assert_eq!(qs[3], rat(1, 8));
        assert_eq!(qs[4], rat(3, 64));
        for n in 2..=6 {
            assert_eq!(qs[n], q3_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn q_series_positive_and_float_path_agrees() {
        for q in 3..8 {
            let exact = q_series(q, 40).unwrap();
            let float = q_series_f64(q, 40).unwrap();
            for n in 2..=40 {
                let e = rational_to_f64(&exact[n]);
                assert!(e > 0.0);
                assert!((e - float[n]).abs() <= 1e-13 * e);
            }
        }
        assert!(q_series(2, 5).is_err());
    }

    #[test]
    fn q_closed_form_matches_series() {
        let qs = q_series_f64(4, 400).unwrap();
        let x: f64 = 0.3;
        let series: f64 = qs.iter().enumerate().map(|(n, c)| c * x.powi(n as i32)).sum();
        assert!((series - q_closed(4, x)).abs() < 1e-13);
    }

    #[test]
    fn rho_second_coefficient() {
        let rho = bit_regular_rho(3, 1.0 / 13.0, 10).unwrap();
        assert!((rho.coeff(2) - 169.0 / 288.0).abs() < 1e-15);
        assert_eq!(rho.coeff(1), 0.0);
    }

    #[test]
    fn rho_series_matches_closed_form() {
        let p = 1.0 / 13.0;
        let rho = bit_regular_rho(3, p, 2000).unwrap();
        for &x in &[0.1f64, 0.4, 0.7] {
            let series: f64 = rho.coeffs().iter().enumerate().skip(1).map(|(d, c)| c * x.powi(d as i32 - 1)).sum();
            assert!((series - rho_closed(3, p, x)).abs() < 1e-12, "x = {x}");
        }
        assert!((rho_closed(3, p, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_keeps_unit_mass_and_orders() {
        let p = 1.0 / 13.0;
        let rho = bit_regular_rho(3, p, 20000).unwrap();
        let pair = truncate_rho(&rho, 3, p, 0.05).unwrap();
        assert!((pair.rho.stored_total() - 1.0).abs() < 1e-14);
        assert!(pair.rho.coeff(1) > 0.0);
        for i in 1..1000 {
            let x = i as f64 / 1000.0;
            assert!(pair.rho.eval(x) > rho.eval(x), "x = {x}");
        }
        let coarse = truncate_rho(&rho, 3, p, 0.9).unwrap();
        assert!(coarse.m < pair.m);
        assert!((coarse.rho.eval(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_reports_missing_depth() {
        let rho = bit_regular_rho(3, 1.0 / 13.0, 50).unwrap();
        assert!(matches!(truncate_rho(&rho, 3, 1.0 / 13.0, 0.01), Err(Error::InsufficientDepth(_))));
    }
}
