//! Large-degree approximations of `ρₙ` and `λₙ`.

use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Estimate of `ρ_{n+1}` for the bit-regular ensemble.
///
/// `n^(-a) / ((q-1) Γ((q-2)/(q-1)))` times the bracket
/// `1 + q/(2(q-1)²n) - 2pq(2q-1)/((q-1)n) + 4p(q+1)Γ((q-2)/(q-1)) / (Γ((q-3)/(q-1)) n^a)`
/// with `a = q/(q-1)`. At `q = 3` the last term vanishes (`1/Γ(0) = 0`).
pub fn rho_asymptotic(q: u32, p: f64, n: usize) -> f64 {
    let qf = q as f64;
    let n = n as f64;
    let a = qf / (qf - 1.0);
    let g = gamma((qf - 2.0) / (qf - 1.0));
    let lead = n.powf(-a) / ((qf - 1.0) * g);
    let last = if q == 3 {
        0.0
    } else {
        4.0 * p * (qf + 1.0) * g / (gamma((qf - 3.0) / (qf - 1.0)) * n.powf(a))
    };
    let bracket = 1.0 + qf / (2.0 * (qf - 1.0).powi(2) * n) - 2.0 * p * qf * (2.0 * qf - 1.0) / ((qf - 1.0) * n) + last;
    lead * bracket
}

/// `c(p) = (4(1-p)³/(27p))^(2/3)`.
pub fn c_of_p(p: f64) -> f64 {
    (4.0 * (1.0 - p).powi(3) / (27.0 * p)).powf(2.0 / 3.0)
}

/// Modulus `a_p` and argument `θ_p` of `1 + e^(iπ/3) c(p)`.
pub fn oscillation(p: f64) -> (f64, f64) {
    let c = c_of_p(p);
    let (re, im) = (1.0 + 0.5 * c, (PI / 3.0).sin() * c);
    (re.hypot(im), im.atan2(re))
}

/// Estimate of `λ_{n+1}` for the check-regular ensemble.
pub fn lambda_asymptotic(p: f64, n: usize) -> f64 {
    let nf = n as f64;
    let (a, theta) = oscillation(p);
    let h = nf - 0.5;
    let osc = 1.0 + 1.5 * 2f64.sqrt() * a.powf(-h) * (h * theta).sin();
    let corr = 1.0 + 3.0 / (8.0 * nf) + 25.0 / (128.0 * nf * nf);
    nf.powf(-1.5) / (2.0 * PI.sqrt() * (1.0 - p)) * osc * corr
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_at_one_half() {
        assert!((c_of_p(0.5) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn leading_term_at_q3() {
        let n = 1e6 as usize;
        let lead = (n as f64).powf(-1.5) / (2.0 * PI.sqrt());
        assert!((rho_asymptotic(3, 0.0, n) / lead - 1.0).abs() < 1e-6);
    }

    #[test]
    fn eventually_positive() {
        for q in 3..7 {
            assert!(rho_asymptotic(q, 0.1, 1000) > 0.0);
        }
    }

    #[test]
    fn published_comparison_values() {
        // The published figures plug the coefficient index itself into the estimate.
        assert!((lambda_asymptotic(0.5, 20) - 0.0107).abs() < 5e-4);
        assert!((lambda_asymptotic(0.8, 120) - 0.0020).abs() < 2e-4);
    }
}
