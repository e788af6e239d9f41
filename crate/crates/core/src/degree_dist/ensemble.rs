//! Ensemble parameters, positivity regions and truncated pairs.

use super::bit_regular::{bit_regular_rho, truncate_rho};
use super::check_regular::{check_regular_lambda, truncate_lambda, LambdaMode};
use super::DegreeDistribution;
use crate::error::{check_probability, invalid, Error, Result};

/// How well non-negativity of the coefficients is established for a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PositivityStatus {
    /// Covered by a theorem.
    Proven,
    /// Covered only by a conjecture.
    Conjectural,
    /// Outside every known region.
    Unsupported,
}

/// Repetition degree `q`, design erasure probability `p`, gap `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitRegularSpec {
    pub q: u32,
    pub p: f64,
    pub epsilon: f64,
}

impl BitRegularSpec {
    pub fn new(q: u32, p: f64, epsilon: f64) -> Result<Self> {
        if q < 3 {
            return Err(invalid("q", format!("{q} < 3")));
        }
        check_probability("p", p)?;
        check_probability("epsilon", epsilon)?;
        Ok(BitRegularSpec { q, p, epsilon })
    }

    /// Proven for `q = 3, p ≤ 1/13`; conjectural inside [`conjectured_p_max`].
    pub fn positivity(&self) -> PositivityStatus {
        if self.q == 3 && self.p <= 1.0 / 13.0 {
            PositivityStatus::Proven
        } else if self.q >= 4 && self.p <= conjectured_p_max(self.q) {
            PositivityStatus::Conjectural
        } else {
            PositivityStatus::Unsupported
        }
    }
}

/// Largest `p` for which `ρ` is conjectured non-negative, `q ≥ 4`.
pub fn conjectured_p_max(q: u32) -> f64 {
    let q = q as f64;
    if q <= 8.0 {
        (6.0 - 7.0 * q + 2.0 * q * q) / (6.0 - 13.0 * q + 8.0 * q * q)
    } else {
        (12.0 - 17.0 * q + 6.0 * q * q) / (12.0 - 37.0 * q + 26.0 * q * q)
    }
}

/// Design erasure probability `p` and gap `ε` of the check-regular ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckRegularSpec {
    pub p: f64,
    pub epsilon: f64,
}

impl CheckRegularSpec {
    pub fn new(p: f64, epsilon: f64) -> Result<Self> {
        check_probability("p", p)?;
        check_probability("epsilon", epsilon)?;
        Ok(CheckRegularSpec { p, epsilon })
    }

    /// Proven up to `p = 0.95`, conjectural above.
    pub fn positivity(&self) -> PositivityStatus {
        if self.p <= 0.95 {
            PositivityStatus::Proven
        } else {
            PositivityStatus::Conjectural
        }
    }
}

/// Either ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleSpec {
    BitRegular(BitRegularSpec),
    CheckRegular(CheckRegularSpec),
}

/// Search limits used when building a truncated pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthOptions {
    /// Cap on the number of stored `ρ` coefficients.
    pub rho_max: usize,
    /// Cap on the number of stored `λ` coefficients.
    pub lambda_max: usize,
}

impl Default for DepthOptions {
    fn default() -> Self {
        DepthOptions {
            rho_max: 1 << 16,
            lambda_max: 4096,
        }
    }
}

impl EnsembleSpec {
    pub fn p(&self) -> f64 {
        match self {
            EnsembleSpec::BitRegular(s) => s.p,
            EnsembleSpec::CheckRegular(s) => s.p,
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            EnsembleSpec::BitRegular(s) => s.epsilon,
            EnsembleSpec::CheckRegular(s) => s.epsilon,
        }
    }

    pub fn positivity(&self) -> PositivityStatus {
        match self {
            EnsembleSpec::BitRegular(s) => s.positivity(),
            EnsembleSpec::CheckRegular(s) => s.positivity(),
        }
    }

    /// Comma-free identifier used in CSV output.
    pub fn label(&self) -> String {
        match self {
            EnsembleSpec::BitRegular(s) => format!("bit-regular(q={};p={};eps={})", s.q, s.p, s.epsilon),
            EnsembleSpec::CheckRegular(s) => format!("check-regular(p={};eps={})", s.p, s.epsilon),
        }
    }

    /// Upper bound on edges per information bit:
    /// `q + 2/((1-p)(1-ε))` or `5/((1-p)(1-ε))`.
    pub fn complexity_bound(&self) -> f64 {
        let cap = (1.0 - self.p()) * (1.0 - self.epsilon());
        match self {
            EnsembleSpec::BitRegular(s) => s.q as f64 + 2.0 / cap,
            EnsembleSpec::CheckRegular(_) => 5.0 / cap,
        }
    }

    /// Computes the untruncated distribution deep enough to certify the
    /// truncation degree, doubling the depth up to the caps in `depth`.
    pub fn build_pair(&self, depth: &DepthOptions) -> Result<TruncatedPair> {
        match *self {
            EnsembleSpec::BitRegular(s) => {
                let mut n = 1024.min(depth.rho_max);
                loop {
                    let rho = bit_regular_rho(s.q, s.p, n)?;
                    match truncate_rho(&rho, s.q, s.p, s.epsilon) {
                        Err(Error::InsufficientDepth(_)) if n < depth.rho_max => n = (2 * n).min(depth.rho_max),
                        other => return other,
                    }
                }
            }
            EnsembleSpec::CheckRegular(s) => {
                let mut n = 64.min(depth.lambda_max);
                loop {
                    let lambda = check_regular_lambda(s.p, n, LambdaMode::ExactRational)?;
                    match truncate_lambda(&lambda, s.p, s.epsilon) {
                        Err(Error::InsufficientDepth(_)) if n < depth.lambda_max => n = (2 * n).min(depth.lambda_max),
                        other => return other,
                    }
                }
            }
        }
    }
}

/// A truncated distribution pair ready for analysis and code construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPair {
    /// Parameters the pair was built from.
    pub spec: EnsembleSpec,
    /// Information-side distribution (sub-stochastic for the check-regular ensemble).
    pub lambda: DegreeDistribution,
    /// Check-side distribution.
    pub rho: DegreeDistribution,
    /// Truncation degree `M(ε)`.
    pub m: usize,
    /// Fraction `δ` of information bits turned into pilots (check-regular only).
    pub pilot_fraction: f64,
    /// `∫λ/∫ρ` of the truncated pair.
    pub design_rate: f64,
}

impl TruncatedPair {
    /// `(1-p)(1-ε)`, the rate every truncated pair must exceed.
    pub fn rate_floor(&self) -> f64 {
        (1.0 - self.spec.p()) * (1.0 - self.spec.epsilon())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positivity_regions() {
        assert_eq!(BitRegularSpec::new(3, 1.0 / 13.0, 0.1).unwrap().positivity(), PositivityStatus::Proven);
        assert_eq!(BitRegularSpec::new(3, 0.1, 0.1).unwrap().positivity(), PositivityStatus::Unsupported);
        assert_eq!(BitRegularSpec::new(4, 0.1, 0.1).unwrap().positivity(), PositivityStatus::Conjectural);
        assert_eq!(CheckRegularSpec::new(0.96, 0.1).unwrap().positivity(), PositivityStatus::Conjectural);
        assert!((conjectured_p_max(4) - 10.0 / 82.0).abs() < 1e-15);
        assert!(BitRegularSpec::new(2, 0.1, 0.1).is_err());
        assert!(CheckRegularSpec::new(1.5, 0.1).is_err());
    }

    #[test]
    fn complexity_bounds() {
        let c = EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap());
        assert!((c.complexity_bound() - 5.0 / 0.45).abs() < 1e-12);
        let b = EnsembleSpec::BitRegular(BitRegularSpec::new(3, 1.0 / 13.0, 0.1).unwrap());
        assert!((b.complexity_bound() - 5.408).abs() < 1e-3);
    }

    #[test]
    fn built_pairs_beat_rate_floor() {
        for spec in [
            EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap()),
            EnsembleSpec::BitRegular(BitRegularSpec::new(3, 1.0 / 13.0, 0.1).unwrap()),
        ] {
            let pair = spec.build_pair(&DepthOptions::default()).unwrap();
            assert!(pair.design_rate > pair.rate_floor());
        }
    }
}
