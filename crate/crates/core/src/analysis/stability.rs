//! Endpoint stability of the density-evolution map.
//!
//! At `x = 0`: `λ₂ < 1/(2pR'(1)/(1-p) + ρ'(1))`.
//! At `x = 1` the fixed point is unstable, letting decoding start without
//! pilots, iff `ρ₂ > 1/((1-p)²λ'(1))`.

use super::DEPair;

/// Both endpoint conditions and their right-hand sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// `λ₂ < rhs_zero`.
    pub zero_ok: bool,
    /// `ρ₂ > rhs_one`.
    pub one_unstable: bool,
    /// `1/(2pR'(1)/(1-p) + ρ'(1))`; zero when a derivative diverges.
    pub rhs_zero: f64,
    /// `1/((1-p)²λ'(1))`; zero when `λ'(1)` diverges.
    pub rhs_one: f64,
    /// `ρ'(1)` partial sums grow without bound.
    pub rho_prime_divergent: bool,
    /// `λ'(1)` partial sums grow without bound.
    pub lambda_prime_divergent: bool,
    /// Condition at 0 holds with equality in the limit (`λ₂ = 0`, divergent `ρ'(1)`).
    pub zero_equality_in_limit: bool,
    /// Condition at 1 holds with equality in the limit (`ρ₂ = 0`, divergent `λ'(1)`).
    pub one_equality_in_limit: bool,
}

/// Growth factor per decade of `M` above which a partial sum is called divergent.
pub const DIVERGENCE_RATIO: f64 = 2.0;

/// `true` when the series has a tail and its partial sums at `M` and `M/10`
/// differ by at least [`DIVERGENCE_RATIO`].
fn divergent(has_tail: bool, partial: impl Fn(usize) -> f64, m: usize) -> bool {
    if !has_tail || m < 20 {
        return false;
    }
    let (hi, lo) = (partial(m), partial(m / 10));
    lo > 0.0 && hi >= DIVERGENCE_RATIO * lo
}

/// Evaluates both endpoint conditions from the stored coefficients.
pub fn stability_report(pair: &DEPair, p: f64) -> StabilityReport {
    let (lambda, rho) = (&pair.lambda, &pair.rho);
    let rho_div = divergent(rho.tail().is_some(), |m| rho.derivative_partial(m), rho.max_degree());
    let lambda_div = divergent(lambda.tail().is_some(), |m| lambda.derivative_partial(m), lambda.max_degree());
    // R'(1) = 1/∫ρ stays finite even when ρ'(1) diverges.
    let r_prime = 1.0 / rho.integral();

    let rhs_zero = if rho_div {
        0.0
    } else {
        1.0 / (2.0 * p * r_prime / (1.0 - p) + rho.derivative_partial(rho.max_degree()))
    };
    let rhs_one = if lambda_div {
        0.0
    } else {
        1.0 / ((1.0 - p).powi(2) * lambda.derivative_partial(lambda.max_degree()))
    };
    let (lambda2, rho2) = (lambda.coeff(2), rho.coeff(2));
    StabilityReport {
        zero_ok: lambda2 < rhs_zero,
        one_unstable: rho2 > rhs_one,
        rhs_zero,
        rhs_one,
        rho_prime_divergent: rho_div,
        lambda_prime_divergent: lambda_div,
        zero_equality_in_limit: rho_div && lambda2 == 0.0,
        one_equality_in_limit: lambda_div && rho2 == 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_dist::{CheckRegularSpec, DegreeDistribution, DepthOptions, EnsembleSpec};

    #[test]
    fn bit_regular_meets_zero_condition_in_limit() {
        let pair = DEPair::bit_regular(3, 1.0 / 13.0, 10_000).unwrap();
        let r = stability_report(&pair, 1.0 / 13.0);
        assert!(r.rho_prime_divergent);
        assert!(r.zero_equality_in_limit);
        assert_eq!(r.rhs_zero, 0.0);
    }

    #[test]
    fn check_regular_meets_one_condition_in_limit() {
        let pair = DEPair::check_regular(0.5, 400).unwrap();
        let r = stability_report(&pair, 0.5);
        assert!(r.lambda_prime_divergent);
        assert!(r.one_equality_in_limit);
        assert!(!r.one_unstable);
    }

    #[test]
    fn truncated_check_regular_needs_pilots() {
        let spec = EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap());
        let pair = DEPair::from_truncated(&spec.build_pair(&DepthOptions::default()).unwrap());
        let r = stability_report(&pair, 0.5);
        assert!(!r.lambda_prime_divergent);
        assert!(r.rhs_one > 0.0 && r.rhs_one.is_finite());
        assert!(!r.one_unstable);
    }

    #[test]
    fn finite_pair_values() {
        // λ = ρ = x: ρ'(1) = 1, R'(1) = 2, λ'(1) = 1.
        let pair = DEPair::new(DegreeDistribution::monomial(2), DegreeDistribution::monomial(2)).unwrap();
        let r = stability_report(&pair, 0.5);
        assert!((r.rhs_zero - 1.0 / 5.0).abs() < 1e-15);
        assert!((r.rhs_one - 4.0).abs() < 1e-15);
        assert!(!r.zero_ok && !r.one_unstable);
    }
}
