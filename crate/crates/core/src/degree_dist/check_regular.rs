//! Check-regular ensemble: `ρ(x) = x²` and `λ` is the inverse of
//! `λ⁻¹(x) = 1 - ((1-p)/(1-p(1-x)³))² (1-x)²`.
//!
//! Coefficients use `λ_{n+1}(p) = (1-p) Pₙ(p) / (1+2p)^(2n-1)` where `Pₙ` has
//! degree `2(n-1)` and coefficients from the three-term recursion
//! `a_i' = ((2m-3i-1)(a_i - 2a_{i-2}) + (20m-3i-1)a_{i-1}) / (2(m+1))`,
//! `P₁ = 1/2`. Scaling `Pₘ` by `2^m m!` makes every coefficient an integer.
//!
//! Two arithmetic paths are offered. [`LambdaMode::ExactRational`] keeps the
//! integer coefficients exactly. [`LambdaMode::ExtendedPrecision`] runs the
//! recursion in binary fixed point with a running bound on the rounding
//! error, and refuses to return values whose bound exceeds `1e-12` relative.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ensemble::{CheckRegularSpec, EnsembleSpec, TruncatedPair};
use super::{ClosedForm, DegreeDistribution, Tail};
use crate::error::{check_probability, invalid, Error, Result};
use crate::numeric::{big_frexp, big_ln, f64_to_rational, ldexp, rational_to_f64, round_div, round_shr};

/// Arithmetic used for `λₙ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    /// Exact rationals; authoritative.
    ExactRational,
    /// Binary fixed point with at least `max(128, 4 n_max)` fractional bits.
    ExtendedPrecision,
}

/// Relative error bound above which fixed-point values are rejected.
const MAX_RELATIVE_ERROR: f64 = 1e-12;

/// Integer coefficients `Aₙ = 2ⁿ n! Pₙ`, built by the three-term recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct PnTable {
    scaled: Vec<Vec<BigInt>>,
}

impl PnTable {
    /// Polynomials `P₁ … P_{n_max}`.
    pub fn new(n_max: usize) -> Self {
        let mut scaled = Vec::with_capacity(n_max + 1);
        scaled.push(Vec::new());
        if n_max >= 1 {
            scaled.push(vec![BigInt::one()]);
        }
        for m in 1..n_max {
            let next = step_integer(&scaled[m], m as i64);
            scaled.push(next);
        }
        PnTable { scaled }
    }

    /// Largest `n` held.
    pub fn n_max(&self) -> usize {
        self.scaled.len() - 1
    }

    /// Integer coefficients of `2ⁿ n! Pₙ`, ascending powers.
    pub fn scaled(&self, n: usize) -> &[BigInt] {
        &self.scaled[n]
    }

    /// `2ⁿ n!`.
    pub fn scale(n: usize) -> BigInt {
        let mut s = BigInt::one() << n;
        for k in 2..=n as u64 {
            s *= k;
        }
        s
    }

    /// Exact rational coefficients of `Pₙ`.
    pub fn poly(&self, n: usize) -> Vec<BigRational> {
        let s = Self::scale(n);
        self.scaled[n]
            .iter()
            .map(|c| BigRational::new(c.clone(), s.clone()))
            .collect()
    }

    /// Exact `λ₂ … λ_{n_max+1}` at rational `p`, indexed by degree.
    pub fn lambda_exact(&self, p: &BigRational) -> Vec<BigRational> {
        let (a, b) = (p.numer(), p.denom());
        let ratio_num: BigInt = b - a;
        let base: BigInt = b + a * 2;
        let mut out = vec![BigRational::zero(); self.n_max() + 2];
        let mut base_pow = base.clone();
        let base_sq = &base * &base;
        for n in 1..=self.n_max() {
            let s = horner_homogeneous(&self.scaled[n], a, b);
            let den = &base_pow * Self::scale(n);
            out[n + 1] = BigRational::new(&ratio_num * s, den);
            base_pow *= &base_sq;
        }
        out
    }
}

pub(crate) fn step_integer(prev: &[BigInt], m: i64) -> Vec<BigInt> {
    let deg = 2 * m as usize;
    let get = |i: i64| -> Option<&BigInt> {
        if i < 0 {
            None
        } else {
            prev.get(i as usize)
        }
    };
    (0..=deg as i64)
        .map(|i| {
            let mut acc = BigInt::zero();
            let c1 = 2 * m - 3 * i - 1;
            if let Some(v) = get(i) {
                acc += v * c1;
            }
            if let Some(v) = get(i - 2) {
                acc -= v * (2 * c1);
            }
            if let Some(v) = get(i - 1) {
                acc += v * (20 * m - 3 * i - 1);
            }
            acc
        })
        .collect()
}

/// `Σ cᵢ aⁱ b^(d-i)` for integer coefficients `c` of degree `d`.
fn horner_homogeneous(c: &[BigInt], a: &BigInt, b: &BigInt) -> BigInt {
    let mut acc = c.last().cloned().unwrap_or_default();
    let mut bpow = BigInt::one();
    for ci in c.iter().rev().skip(1) {
        bpow *= b;
        acc = acc * a + ci * &bpow;
    }
    acc
}

/// Fixed-point evaluation of `λₙ` with a running rounding-error bound.
///
/// The recursion is streamed: only the current `Pₘ` is held, so memory
/// stays linear in `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixedPnTable {
    n_max: usize,
    frac_bits: usize,
}

impl FixedPnTable {
    /// Polynomials `P₁ … P_{n_max}` with `max(128, 4 (n_max + 1)) + 64` fractional bits.
    pub fn new(n_max: usize) -> Self {
        let frac_bits = 128usize.max(4 * (n_max + 1)) + 64;
        Self::with_precision(n_max, frac_bits)
    }

    /// Same, with an explicit number of fractional bits.
    pub fn with_precision(n_max: usize, frac_bits: usize) -> Self {
        FixedPnTable { n_max, frac_bits }
    }

    /// Largest `n` held.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `λ₂ … λ_{n_max+1}` at `p`, indexed by degree.
    pub fn lambda_at(&self, p: f64) -> Result<Vec<f64>> {
        check_probability("p", p)?;
        let pr = f64_to_rational(p);
        let (a, b) = (pr.numer().clone(), pr.denom().clone());
        let k = (b.bits() - 1) as usize;
        debug_assert_eq!(b, BigInt::one() << k);
        let base: BigInt = &b + &a * 2;
        let base_sq = &base * &base;
        let mut base_pow = base.clone();
        let one_minus = &b - &a;
        let mut out = vec![0.0; self.n_max + 2];

        // Error bound of each coefficient in ulps is err[i] * 2^err_exp.
        let mut coeffs = vec![BigInt::one() << (self.frac_bits - 1)];
        let mut err = vec![0.0f64];
        let mut err_exp = 0i64;
        for n in 1..=self.n_max {
            if n > 1 {
                let m = (n - 1) as i64;
                let raw = step_integer(&coeffs, m);
                let div = BigInt::from(2 * (m + 1));
                coeffs = raw.iter().map(|t| round_div(t, &div)).collect();
                let g = |i: i64| if i < 0 { 0.0 } else { err.get(i as usize).copied().unwrap_or(0.0) };
                let half = ldexp(0.5, -err_exp);
                let mut next_err: Vec<f64> = (0..=2 * m)
                    .map(|i| {
                        let c1 = (2 * m - 3 * i - 1).abs() as f64;
                        let c2 = (20 * m - 3 * i - 1).abs() as f64;
                        (c1 * (g(i) + 2.0 * g(i - 2)) + c2 * g(i - 1)) / (2.0 * (m + 1) as f64) + half
                    })
                    .collect();
                if next_err.iter().copied().fold(0.0, f64::max) > 1e250 {
                    next_err.iter_mut().for_each(|e| *e = ldexp(*e, -800));
                    err_exp += 800;
                }
                err = next_err;
            }
            let tiny = ldexp(0.5, -err_exp);
            let mut acc = coeffs.last().unwrap().clone();
            let mut bound = *err.last().unwrap();
            for i in (0..coeffs.len() - 1).rev() {
                acc = round_shr(&(acc * &a), k) + &coeffs[i];
                bound = bound * p + err[i] + tiny;
            }
            if acc.sign() != Sign::Plus {
                return Err(Error::PrecisionExhausted { degree: n + 1, bound: f64::INFINITY });
            }
            let rel_ln = bound.ln() + err_exp as f64 * std::f64::consts::LN_2 - big_ln(&acc);
            if rel_ln > MAX_RELATIVE_ERROR.ln() {
                return Err(Error::PrecisionExhausted { degree: n + 1, bound: rel_ln.exp() });
            }
            // λ = S (b-a) b^(2n-2) / (2^F (b+2a)^(2n-1)) with b = 2^k.
            let (mn, en) = big_frexp(&(acc * &one_minus));
            let (md, ed) = big_frexp(&base_pow);
            let exp = en - ed + (k * (2 * n - 2)) as i64 - self.frac_bits as i64;
            out[n + 1] = ldexp(mn / md, exp);
            base_pow *= &base_sq;
        }
        Ok(out)
    }
}

/// `λ` of the check-regular ensemble up to degree `n_max`.
pub fn check_regular_lambda(p: f64, n_max: usize, mode: LambdaMode) -> Result<DegreeDistribution> {
    check_probability("p", p)?;
    if n_max < 2 {
        return Err(invalid("n_max", "must be at least 2"));
    }
    let dd = match mode {
        LambdaMode::ExactRational => {
            let table = PnTable::new(n_max - 1);
            DegreeDistribution::from_exact(table.lambda_exact(&f64_to_rational(p)))?
        }
        LambdaMode::ExtendedPrecision => {
            let table = FixedPnTable::new(n_max - 1);
            DegreeDistribution::from_coeffs(table.lambda_at(p)?)?
        }
    };
    Ok(attach_lambda_tail(dd, p))
}

/// Untruncated `λ` from an already computed coefficient list.
pub(crate) fn attach_lambda_tail(dd: DegreeDistribution, p: f64) -> DegreeDistribution {
    let mass = 1.0 - dd.stored_total();
    dd.with_tail(Tail { mass, exponent: 1.5 }, ClosedForm::CheckRegularLambda { p })
}

/// Pilot truncation: keep degrees up to the minimal `M` with
/// `Σ_{n>M} λₙ/n < (1-p)ε/3`, where the tail is `(1-p)/3 - Σ_{n≤M} λₙ/n`.
///
/// Information bits of larger degree become pilots; their share of the
/// information nodes is `δ = tail / ((1-p)/3)`.
pub fn truncate_lambda(lambda: &DegreeDistribution, p: f64, epsilon: f64) -> Result<TruncatedPair> {
    let spec = CheckRegularSpec::new(p, epsilon)?;
    let (m, delta, lambda_eps) = match lambda.exact() {
        Some(exact) => truncate_exact(exact, p, epsilon)?,
        None => truncate_float(lambda.coeffs(), p, epsilon)?,
    };
    let rho = DegreeDistribution::monomial(3);
    let design_rate = super::design_rate(&lambda_eps, &rho);
    Ok(TruncatedPair {
        spec: EnsembleSpec::CheckRegular(spec),
        lambda: lambda_eps,
        rho,
        m,
        pilot_fraction: delta,
        design_rate,
    })
}

fn truncate_exact(exact: &[BigRational], p: f64, epsilon: f64) -> Result<(usize, f64, DegreeDistribution)> {
    let pr = f64_to_rational(p);
    let three = BigRational::from_integer(3.into());
    let total = (BigRational::one() - &pr) / &three;
    let bound = &total * f64_to_rational(epsilon);
    let mut partial = BigRational::zero();
    for d in 2..exact.len() {
        partial += &exact[d] / BigRational::from_integer(d.into());
        let tail = &total - &partial;
        if tail < bound {
            let delta = rational_to_f64(&(tail / &total));
            let kept = DegreeDistribution::from_exact(exact[..=d].to_vec())?;
            return Ok((d, delta, kept));
        }
    }
    Err(depth_error(exact.len() - 1))
}

fn truncate_float(coeffs: &[f64], p: f64, epsilon: f64) -> Result<(usize, f64, DegreeDistribution)> {
    let total = (1.0 - p) / 3.0;
    let mut partial = 0.0;
    for d in 2..coeffs.len() {
        partial += coeffs[d] / d as f64;
        let tail = total - partial;
        if tail < total * epsilon {
            let kept = DegreeDistribution::from_coeffs(coeffs[..=d].to_vec())?;
            return Ok((d, tail / total, kept));
        }
    }
    Err(depth_error(coeffs.len() - 1))
}

fn depth_error(n: usize) -> Error {
    Error::InsufficientDepth(format!("λ/n tail not certified by degree {n}"))
}

/// `λ(y)` for real `y ∈ [0, 1]`, inverting `λ⁻¹` through its cubic.
///
/// With `u = 1 - λ(y)` and `z = √(1-y)/(1-p)`, `u` is the unique root in
/// `[0, 1]` of `p z u³ + u - z = 0`.
pub fn lambda_closed(p: f64, y: f64) -> f64 {
    lambda_closed_at_complement(p, 1.0 - y)
}

/// `λ(1 - w)`, accurate when `w` is tiny.
pub fn lambda_closed_at_complement(p: f64, w: f64) -> f64 {
    if w >= 1.0 {
        return 0.0;
    }
    if w <= 0.0 {
        return 1.0;
    }
    let z = w.sqrt() / (1.0 - p);
    let pz = p * z;
    // u³ + P u + Q = 0 with P = 1/(pz) > 0 and Q = -1/p.
    let big_p = 1.0 / pz;
    let r = (big_p / 3.0).sqrt();
    let arg = (3.0 / (2.0 * p * big_p)) * (3.0 / big_p).sqrt();
    let mut u = 2.0 * r * (arg.asinh() / 3.0).sinh();
    for _ in 0..3 {
        let g = pz * u * u * u + u - z;
        let dg = 3.0 * pz * u * u + 1.0;
        u -= g / dg;
    }
    (1.0 - u).clamp(0.0, 1.0)
}

/// `λ⁻¹(x) = 1 - ((1-p)/(1-p(1-x)³))² (1-x)²`.
pub fn lambda_inverse(p: f64, x: f64) -> f64 {
    let u = 1.0 - x;
    let t = (1.0 - p) * u / (1.0 - p * u * u * u);
    1.0 - t * t
}

/// `λ₂ … λ₅` from their closed forms, as exact rationals.
pub fn lambda_closed_forms(p: &BigRational) -> [BigRational; 4] {
    let one = BigRational::one();
    let r = |n: i64| BigRational::from_integer(n.into());
    let q = &one - p;
    let s = &one + p * r(2);
    let p2 = p * p;
    let p3 = &p2 * p;
    let p4 = &p3 * p;
    let p5 = &p4 * p;
    let p6 = &p5 * p;
    let l2 = &q / (r(2) * &s);
    let l3 = &q * (&one + p * r(16) + &p2 * r(10)) / (r(8) * pow(&s, 3));
    let l4 = &q * (&one + p * r(12) + &p2 * r(168) + &p3 * r(164) + &p4 * r(60)) / (r(16) * pow(&s, 5));
    let l5 = &q
        * (r(5) + p * r(80) + &p2 * r(470) + &p3 * r(7840) + &p4 * r(9640) + &p5 * r(5920) + &p6 * r(1560))
        / (r(128) * pow(&s, 7));
    [l2, l3, l4, l5]
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn second_polynomial() {
        let t = PnTable::new(3);
        assert_eq!(t.poly(1), vec![rat(1, 2)]);
        assert_eq!(t.poly(2), vec![rat(1, 8), rat(2, 1), rat(5, 4)]);
        assert_eq!(t.scaled(3).len(), 5);
    }

    #[test]
    fn closed_forms_match_exactly() {
        let t = PnTable::new(4);
        for &(n, d) in &[(1, 10), (1, 2), (9, 10), (1, 3)] {
            let p = rat(n, d);
            let lam = t.lambda_exact(&p);
            let cf = lambda_closed_forms(&p);
            for k in 0..4 {
                assert_eq!(lam[k + 2], cf[k], "p = {p}, degree {}", k + 2);
            }
        }
    }

    #[test]
    fn spec_example_values() {
        let dd = check_regular_lambda(0.5, 3, LambdaMode::ExactRational).unwrap();
        assert_eq!(dd.coeff(2), 0.125);
        assert!((dd.coeff(3) - 0.0898438).abs() < 1e-7);
        assert_eq!(dd.coeff(1), 0.0);
    }

    #[test]
    fn fixed_point_agrees_with_exact() {
        let exact = check_regular_lambda(0.7, 120, LambdaMode::ExactRational).unwrap();
        let fixed = check_regular_lambda(0.7, 120, LambdaMode::ExtendedPrecision).unwrap();
        for d in 2..=120 {
            let (e, f) = (exact.coeff(d), fixed.coeff(d));
            assert!((e - f).abs() <= 1e-13 * e, "degree {d}: {e} vs {f}");
        }
    }

    #[test]
    fn fixed_point_detects_starved_precision() {
        let table = FixedPnTable::with_precision(200, 40);
        assert!(matches!(table.lambda_at(0.8), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn closed_form_inverts_lambda_inverse() {
        for &p in &[0.1, 0.5, 0.9] {
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let y = lambda_inverse(p, x);
                assert!((lambda_closed(p, y) - x).abs() < 1e-12, "p {p} x {x}");
            }
        }
    }

    #[test]
    fn partial_sums_stay_below_analytic_total() {
        let p = 0.4;
        let dd = check_regular_lambda(p, 200, LambdaMode::ExtendedPrecision).unwrap();
        let total = (1.0 - p) / 3.0;
        let mut s = 0.0;
        let mut prev = 0.0;
        for d in 2..=200 {
            s += dd.coeff(d) / d as f64;
            assert!(s < total);
            let mass: f64 = dd.coeffs()[..=d].iter().sum();
            assert!(mass > prev && mass < 1.0);
            prev = mass;
        }
        assert!(total - s < 1e-3);
    }

    #[test]
    fn truncation_example() {
        let p = 0.5;
        let dd = check_regular_lambda(p, 64, LambdaMode::ExactRational).unwrap();
        let pair = truncate_lambda(&dd, p, 0.1).unwrap();
        assert!(pair.pilot_fraction < 0.1);
        assert!(pair.design_rate > 0.45);
        assert!((pair.design_rate - (1.0 - p) * (1.0 - pair.pilot_fraction)).abs() < 1e-12);
        assert!(pair.lambda.stochastic_total() < 1.0);
        for i in 1..=1000 {
            let x = i as f64 / 1000.0;
            // Below x ≈ 0.2 the gap is under one ulp.
            let (t, full) = (pair.lambda.eval(x), lambda_closed(p, x));
            assert!(t <= full + 1e-15, "x = {x}");
            if x >= 0.2 {
                assert!(t < full, "x = {x}");
            }
        }
    }

    #[test]
    fn truncation_reports_missing_depth() {
        let dd = check_regular_lambda(0.8, 5, LambdaMode::ExactRational).unwrap();
        assert!(matches!(truncate_lambda(&dd, 0.8, 0.01), Err(Error::InsufficientDepth(_))));
    }
}
