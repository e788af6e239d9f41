//! Exact rational evaluation of the decoding margin for finite-support pairs.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::DEPair;
use crate::degree_dist::DegreeDistribution;
use crate::numeric::{f64_to_rational, rational_to_f64, ScaledPoly};

pub(super) struct ExactPair {
    lambda: ScaledPoly,
    rho: ScaledPoly,
    r_node: ScaledPoly,
    p: BigRational,
}

fn exact_coeffs(dd: &DegreeDistribution) -> Option<Vec<BigRational>> {
    if !dd.is_finite_support() || dd.closed_form().is_some() {
        return None;
    }
    Some(match dd.exact() {
        Some(e) => e.to_vec(),
        None => dd.coeffs().iter().map(|&c| f64_to_rational(c)).collect(),
    })
}

impl ExactPair {
    /// `None` when either distribution has infinite support.
    pub(super) fn new(pair: &DEPair, p: f64) -> Option<Self> {
        let lambda = exact_coeffs(&pair.lambda)?;
        let rho = exact_coeffs(&pair.rho)?;
        // R_d ∝ ρ_d / d, normalized to R(1) = 1.
        let mut r: Vec<BigRational> = rho
            .iter()
            .enumerate()
            .map(|(d, c)| if d == 0 { BigRational::zero() } else { c / BigRational::from_integer(d.into()) })
            .collect();
        let total: BigRational = r.iter().fold(BigRational::zero(), |acc, c| acc + c);
        r.iter_mut().for_each(|c| *c = &*c / &total);
        // Edge-perspective polynomials are Σ c_d x^(d-1).
        let shift = |v: &[BigRational]| ScaledPoly::from_rationals(&v[1..]);
        Some(ExactPair {
            lambda: shift(&lambda),
            rho: shift(&rho),
            r_node: ScaledPoly::from_rationals(&r),
            p: f64_to_rational(p),
        })
    }

    /// `x - f(x)` computed exactly, then rounded; a nonzero exact value never rounds to zero.
    pub(super) fn margin(&self, x: f64) -> f64 {
        let one = BigRational::one();
        let xr = f64_to_rational(x);
        let u = &one - &xr;
        let r = self.r_node.eval(&u);
        let rho = self.rho.eval(&u);
        let q = &one - &self.p;
        let d = &one - &self.p * r;
        let g = &one - (&q * &q * rho) / (&d * &d);
        let margin = xr - self.lambda.eval(&g);
        let v = rational_to_f64(&margin);
        if v == 0.0 && !margin.is_zero() {
            if margin.is_positive() {
                f64::MIN_POSITIVE
            } else {
                -f64::MIN_POSITIVE
            }
        } else {
            v
        }
    }
}
