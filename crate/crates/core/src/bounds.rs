//! Information-theoretic lower bounds on the decoding complexity of codes
//! obtained by randomly puncturing information bits.
//!
//! On the BEC with puncturing rate `P_pct` the effective erasure probability
//! of information bits is `P_eff = 1 - (1-P_pct)(1-p)`, the average check
//! degree obeys `a_R ≥ ln(P_eff/ε)/ln(1/(1-P_eff)) + l_min` and the
//! complexity per information bit is at least `p/(1-p)` times that.
//! For a general memoryless binary-input output-symmetric channel of capacity
//! `C` and overlap `w` the per-iteration bound is
//! `(1-C)/(2C) · ln((1 - (1-P_pct)C)/(2C ln2 ε)) / ln(1/((1-P_pct)(1-2w)))`.
//! Logarithms with non-positive value are clamped to zero and flagged.

use std::f64::consts::LN_2;

use crate::degree_dist::fmt_f64;
use crate::error::{check_probability, invalid, Result};

/// Default `l_min` for IRA-style codes: every check sees two parity bits.
pub const DEFAULT_L_MIN: u32 = 2;

/// Channel description for the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// Binary erasure channel; `C = 1 - p`, `w = p/2`.
    Bec { p: f64 },
    /// Generic channel by capacity (bits per use) and overlap `w ∈ [0, 1/2]`.
    Mbios { capacity: f64, w: f64 },
}

impl Channel {
    pub fn capacity(&self) -> f64 {
        match *self {
            Channel::Bec { p } => 1.0 - p,
            Channel::Mbios { capacity, .. } => capacity,
        }
    }

    pub fn overlap(&self) -> f64 {
        match *self {
            Channel::Bec { p } => p / 2.0,
            Channel::Mbios { w, .. } => w,
        }
    }
}

/// Gap, channel, puncturing rate and `l_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuncturedScenario {
    pub epsilon: f64,
    pub channel: Channel,
    pub p_pct: f64,
    pub l_min: u32,
}

impl PuncturedScenario {
    pub fn new(epsilon: f64, channel: Channel, p_pct: f64, l_min: u32) -> Result<Self> {
        check_probability("epsilon", epsilon)?;
        if !(0.0..1.0).contains(&p_pct) {
            return Err(invalid("p_pct", format!("{p_pct} outside [0, 1)")));
        }
        match channel {
            Channel::Bec { p } => check_probability("p", p)?,
            Channel::Mbios { capacity, w } => {
                if !(capacity > 0.0 && capacity <= 1.0) {
                    return Err(invalid("capacity", format!("{capacity} outside (0, 1]")));
                }
                if !(0.0..=0.5).contains(&w) {
                    return Err(invalid("w", format!("{w} outside [0, 1/2]")));
                }
            }
        }
        Ok(PuncturedScenario { epsilon, channel, p_pct, l_min })
    }

    /// BEC scenario.
    pub fn bec(epsilon: f64, p: f64, p_pct: f64, l_min: u32) -> Result<Self> {
        Self::new(epsilon, Channel::Bec { p }, p_pct, l_min)
    }
}

/// `P_eff = 1 - (1-P_pct)(1-p)`.
pub fn p_eff(p_pct: f64, p: f64) -> f64 {
    p + p_pct * (1.0 - p)
}

/// BEC bound on complexity and on the average check degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecBound {
    pub chi_lower: f64,
    pub a_r_lower: f64,
    /// The logarithmic term was clamped to zero (`ε ≥ P_eff`).
    pub vacuous: bool,
}

/// General-channel bound on complexity per iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbiosBound {
    pub chi_lower: f64,
    /// Clamped to zero: outer log argument at most 1.
    pub vacuous: bool,
}

/// Complexity bound for the BEC; requires a BEC scenario.
pub fn bec_complexity_bound(s: &PuncturedScenario) -> Result<BecBound> {
    let Channel::Bec { p } = s.channel else {
        return Err(invalid("channel", "BEC bound needs an erasure channel"));
    };
    let pe = p_eff(s.p_pct, p);
    let vacuous = s.epsilon >= pe;
    let log_term = if vacuous { 0.0 } else { (pe / s.epsilon).ln() / (-(1.0 - pe).ln()) };
    let a_r_lower = log_term + s.l_min as f64;
    Ok(BecBound {
        chi_lower: p / (1.0 - p) * a_r_lower,
        a_r_lower,
        vacuous,
    })
}

/// Per-iteration complexity bound for any symmetric channel.
pub fn mbios_complexity_bound(s: &PuncturedScenario) -> Result<MbiosBound> {
    let c = s.channel.capacity();
    let w = s.channel.overlap();
    let denom_arg = (1.0 - s.p_pct) * (1.0 - 2.0 * w);
    if !(denom_arg > 0.0) {
        return Err(crate::Error::Domain(format!("(1-P_pct)(1-2w) = {denom_arg} is not positive")));
    }
    let num_arg = (1.0 - (1.0 - s.p_pct) * c) / (2.0 * c * LN_2 * s.epsilon);
    let vacuous = num_arg <= 1.0 || denom_arg >= 1.0;
    let chi_lower = if vacuous {
        0.0
    } else {
        (1.0 - c) / (2.0 * c) * num_arg.ln() / (-denom_arg.ln())
    };
    Ok(MbiosBound { chi_lower, vacuous })
}

/// Both bounds on the BEC and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundComparison {
    pub epsilon: f64,
    pub p: f64,
    pub p_pct: f64,
    pub l_min: u32,
    pub p_eff: f64,
    pub bound_t3: f64,
    pub bound_t4: f64,
    /// `bound_t3 / bound_t4`; infinite when the second bound is zero.
    pub ratio: f64,
}

impl BoundComparison {
    pub const CSV_HEADER: &'static str = "epsilon,p,P_pct,l_min,P_eff,bound_t3,bound_t4,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_f64(self.epsilon),
            fmt_f64(self.p),
            fmt_f64(self.p_pct),
            self.l_min,
            fmt_f64(self.p_eff),
            fmt_f64(self.bound_t3),
            fmt_f64(self.bound_t4),
            fmt_f64(self.ratio)
        )
    }
}

/// Evaluates both bounds for one BEC parameter set.
pub fn compare_bounds_bec(p: f64, p_pct: f64, epsilon: f64, l_min: u32) -> Result<BoundComparison> {
    let s = PuncturedScenario::bec(epsilon, p, p_pct, l_min)?;
    let t3 = bec_complexity_bound(&s)?.chi_lower;
    let t4 = mbios_complexity_bound(&s)?.chi_lower;
    Ok(BoundComparison {
        epsilon,
        p,
        p_pct,
        l_min,
        p_eff: p_eff(p_pct, p),
        bound_t3: t3,
        bound_t4: t4,
        ratio: if t4 > 0.0 { t3 / t4 } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn effective_erasure() {
        assert_eq!(p_eff(0.0, 0.3), 0.3);
        assert!((p_eff(0.9, 0.5) - 0.95).abs() < 1e-15);
    }

    #[test]
    fn worked_examples() {
        // 1·(ln 95 / ln 20 + 2).
        let b = bec_complexity_bound(&PuncturedScenario::bec(0.01, 0.5, 0.9, 2).unwrap()).unwrap();
        assert!((b.chi_lower - (95f64.ln() / 20f64.ln() + 2.0)).abs() < 1e-12);
        assert!((b.chi_lower - 3.520).abs() < 1e-3);
        // 0.5 · ln(0.95/(ln2 · 1e-3)) / ln 20.
        let t4 = mbios_complexity_bound(&PuncturedScenario::bec(1e-3, 0.5, 0.9, 2).unwrap()).unwrap();
        let oracle = 0.5 * (0.95 / (LN_2 * 1e-3)).ln() / 20f64.ln();
        assert!((t4.chi_lower - oracle).abs() < 1e-12);
        assert!((t4.chi_lower - 1.2055).abs() < 1e-3);
    }

    #[test]
    fn clamps_are_flagged() {
        let pe = p_eff(0.2, 0.3);
        let b = bec_complexity_bound(&PuncturedScenario::bec(pe, 0.3, 0.2, 2).unwrap()).unwrap();
        assert!(b.vacuous);
        assert_eq!(b.chi_lower, 0.3 / 0.7 * 2.0);
        let s = PuncturedScenario::new(0.01, Channel::Mbios { capacity: 0.5, w: 0.5 }, 0.5, 2).unwrap();
        assert!(mbios_complexity_bound(&s).is_err());
    }

    #[test]
    fn rejects_bad_scenarios() {
        assert!(PuncturedScenario::bec(0.0, 0.5, 0.5, 2).is_err());
        assert!(PuncturedScenario::bec(0.1, 0.5, 1.0, 2).is_err());
        let s = PuncturedScenario::new(0.01, Channel::Mbios { capacity: 0.5, w: 0.1 }, 0.5, 2).unwrap();
        assert!(bec_complexity_bound(&s).is_err());
    }

    #[test]
    fn monotone_in_parameters() {
        let t3 = |e: f64, p: f64, pp: f64| compare_bounds_bec(p, pp, e, 2).unwrap().bound_t3;
        assert!(t3(1e-4, 0.5, 0.5) >= t3(1e-3, 0.5, 0.5));
        for e in [1e-2, 1e-4, 1e-6] {
            for i in 1..9 {
                let p = i as f64 / 10.0;
                // Heavier puncturing lowers the bound; a worse channel raises it.
                assert!(t3(e, p, 0.6) <= t3(e, p, 0.3));
                assert!(t3(e, p + 0.1, 0.5) >= t3(e, p, 0.5));
            }
        }
    }
}
