//! Degree beyond which `λₙ(p) > 0` follows from the asymptotic bounds.
//!
//! Two sufficient conditions are scanned for the smallest `n`:
//!
//! `Γ(n-½)/(2(1-p)√π Γ(n+1)) - 315p² Γ(n-7/2)/(16(1-p)⁷ √π Γ(n+1))
//!   ≥ 2√3 (1+c(p))^(-(n-1)/2) / (p^(1/3) π (n-1))`
//!
//! for every `p` on a grid of `(0, p*]`, and
//! `1 - 3/(2(n+1)) ≥ 1/√(1+c(p*))`.

use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

use crate::degree_dist::asymptotic::c_of_p;
use crate::error::{check_probability, Result};

/// Number of interior grid points in `(0, p*)`; `p*` itself is added.
pub const NSTAR_GRID: usize = 200;
/// Search cap on `n`.
pub const NSTAR_MAX: usize = 10_000_000;

/// Thresholds for a band `p ∈ [0, p*]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NStarResult {
    pub p_star: f64,
    pub n_c11: usize,
    pub n_c12: usize,
    pub n_star: usize,
}

/// Whether the Gamma-ratio condition holds at `(n, p)`; needs `n ≥ 4`.
pub fn gamma_condition(n: usize, p: f64) -> bool {
    let nf = n as f64;
    let sqrt_pi = PI.sqrt();
    let lg = ln_gamma(nf + 1.0);
    let first = (ln_gamma(nf - 0.5) - lg).exp() / (2.0 * (1.0 - p) * sqrt_pi);
    let second = 315.0 * p * p * (ln_gamma(nf - 3.5) - lg).exp() / (16.0 * (1.0 - p).powi(7) * sqrt_pi);
    let rhs_ln = (2.0 * 3f64.sqrt() / (PI * (nf - 1.0))).ln() - p.ln() / 3.0 - 0.5 * (nf - 1.0) * c_of_p(p).ln_1p();
    let lhs = first - second;
    lhs > 0.0 && lhs.ln() >= rhs_ln
}

/// Whether `1 - 3/(2(n+1)) ≥ 1/√(1+c(p))`.
pub fn ratio_condition(n: usize, p: f64) -> bool {
    1.0 - 3.0 / (2.0 * (n as f64 + 1.0)) >= 1.0 / (1.0 + c_of_p(p)).sqrt()
}

/// Minimal `n` for both conditions over `[0, p_star]`.
///
/// `p = 0` is left out of the grid: there the right-hand side of the Gamma
/// condition vanishes in the limit.
pub fn lambda_nstar(p_star: f64) -> Result<NStarResult> {
    check_probability("p_star", p_star)?;
    let grid: Vec<f64> = (1..=NSTAR_GRID + 1)
        .map(|i| p_star * i as f64 / (NSTAR_GRID + 1) as f64)
        .collect();
    let n_c11 = (4..NSTAR_MAX)
        .find(|&n| grid.iter().all(|&p| gamma_condition(n, p)))
        .unwrap_or(NSTAR_MAX);
    let n_c12 = (1..NSTAR_MAX).find(|&n| ratio_condition(n, p_star)).unwrap_or(NSTAR_MAX);
    Ok(NStarResult {
        p_star,
        n_c11,
        n_c12,
        n_star: n_c11.max(n_c12),
    })
}
