//! Degree distributions of the two ensembles.
//!
//! A [`DegreeDistribution`] is the edge-perspective coefficient sequence of
//! `λ(x)` or `ρ(x)`: `coeffs[d]` is the fraction of edges attached to
//! degree-`d` nodes, i.e. the coefficient of `x^(d-1)`. Untruncated
//! distributions have infinite support; they keep the stored prefix, the
//! remaining mass obtained by subtraction from the analytic total, and a
//! closed form used for pointwise evaluation.
//!
//! Submodules:
//! * [`bit_regular`]: `Q(x)`, the convolution recursion for `ρ`, truncation.
//! * [`check_regular`]: the `Pₙ` recursion for `λ` in exact and fixed-point
//!   arithmetic, truncation with pilot bits.
//! * [`reversion`]: an independent reversion oracle for `λ`.
//! * [`asymptotic`]: large-`n` approximations of both sequences.
//! * [`ensemble`]: parameter sets and truncated pairs.

pub mod asymptotic;
pub mod bit_regular;
pub mod check_regular;
pub mod ensemble;
pub mod reversion;

use num_rational::BigRational;

use crate::error::{Error, Result};

pub use asymptotic::{lambda_asymptotic, rho_asymptotic};
pub use bit_regular::{bit_regular_rho, q_series, q_series_f64, truncate_rho};
pub use check_regular::{check_regular_lambda, truncate_lambda, LambdaMode, PnTable};
pub use ensemble::{
    BitRegularSpec, CheckRegularSpec, DepthOptions, EnsembleSpec, PositivityStatus, TruncatedPair,
};
pub use reversion::lambda_reversion_oracle;

/// Analytic expression behind an infinite-support distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `ρ(x)` of the bit-regular ensemble with repetition degree `q`.
    BitRegularRho { q: u32, p: f64 },
    /// `λ(x)` of the check-regular ensemble (inverse of the explicit `λ⁻¹`).
    CheckRegularLambda { p: f64 },
}

/// Mass beyond the stored coefficients, with its power-law decay exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tail {
    /// Analytic total minus the stored sum.
    pub mass: f64,
    /// `a` in `coeff_n ~ n^(-a)`.
    pub exponent: f64,
}

/// Edge-perspective degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    coeffs: Vec<f64>,
    exact: Option<Vec<BigRational>>,
    tail: Option<Tail>,
    closed_form: Option<ClosedForm>,
}

impl DegreeDistribution {
    /// Finite-support distribution from `coeffs[d]` (index 0 must be zero).
    pub fn from_coeffs(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if coeffs[0] != 0.0 {
            return Err(crate::error::invalid("coeffs", "degree 0 must carry no mass"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(crate::error::invalid("coeffs", "non-finite coefficient"));
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::EmptyDistribution);
        }
        Ok(DegreeDistribution {
            coeffs,
            exact: None,
            tail: None,
            closed_form: None,
        })
    }

    /// Finite-support distribution with exact coefficients.
    pub fn from_exact(exact: Vec<BigRational>) -> Result<Self> {
        let coeffs = exact.iter().map(crate::numeric::rational_to_f64).collect();
        let mut dd = Self::from_coeffs(coeffs)?;
        let mut exact = exact;
        exact.truncate(dd.coeffs.len());
        dd.exact = Some(exact);
        Ok(dd)
    }

    /// Monomial `x^(d-1)`: every edge on a degree-`d` node.
    pub fn monomial(d: usize) -> Self {
        let mut exact = vec![BigRational::from_integer(0.into()); d + 1];
        exact[d] = BigRational::from_integer(1.into());
        Self::from_exact(exact).expect("non-empty")
    }

    pub(crate) fn with_tail(mut self, tail: Tail, closed_form: ClosedForm) -> Self {
        self.tail = Some(tail);
        self.closed_form = Some(closed_form);
        self
    }

    /// Coefficients indexed by degree; index 0 is always zero.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of degree `d` (zero beyond the stored range).
    pub fn coeff(&self, d: usize) -> f64 {
        self.coeffs.get(d).copied().unwrap_or(0.0)
    }

    /// Exact coefficients when they were computed in rational arithmetic.
    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    /// Largest stored degree.
    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Mass beyond the stored range, if the support is infinite.
    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    /// Closed form of an untruncated distribution.
    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// `true` when every coefficient is stored.
    pub fn is_finite_support(&self) -> bool {
        self.tail.is_none()
    }

    /// Sum of the stored coefficients.
    pub fn stored_total(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Stored sum plus tail mass: 1 for a full distribution, below 1 after pilot truncation.
    pub fn stochastic_total(&self) -> f64 {
        self.stored_total() + self.tail.map_or(0.0, |t| t.mass)
    }

    /// Smallest stored coefficient over degrees 2 and up.
    pub fn min_coefficient(&self) -> f64 {
        self.coeffs.iter().skip(2).copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫₀¹` of the polynomial: `Σ coeffs[d]/d` plus the tail estimate.
    pub fn integral(&self) -> f64 {
        let stored: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c / d as f64)
            .sum();
        stored + self.tail_integral()
    }

    /// Estimated `Σ_{d>D} coeffs[d]/d` for a power-law tail beyond `D`.
    ///
    /// For `c_d ~ d^(-a)` the ratio of `Σ c_d/d` to `Σ c_d` over `d > D`
    /// is `(a-1)/(a (D+1/2))` up to `O(D^-2)`.
    pub fn tail_integral(&self) -> f64 {
        match self.tail {
            None => 0.0,
            Some(t) => {
                let d = self.max_degree() as f64 + 0.5;
                t.mass * (t.exponent - 1.0) / (t.exponent * d)
            }
        }
    }

    /// Value of `Σ coeffs[d] x^(d-1)`, through the closed form when there is one.
    pub fn eval(&self, x: f64) -> f64 {
        match self.closed_form {
            Some(cf) => cf.eval(x),
            None => {
                let mut acc = 0.0;
                for &c in self.coeffs[1..].iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
        }
    }

    /// Value at `1 - w`; keeps relative accuracy in `w` for closed forms.
    pub fn eval_at_complement(&self, w: f64) -> f64 {
        match self.closed_form {
            Some(ClosedForm::CheckRegularLambda { p }) => check_regular::lambda_closed_at_complement(p, w),
            _ => self.eval(1.0 - w),
        }
    }

    /// `s(1) - s(1-x)` evaluated without cancellation for small `x`.
    pub fn complement(&self, x: f64) -> f64 {
        match self.closed_form {
            Some(cf) => 1.0 - cf.eval(1.0 - x),
            None => series_complement(&self.coeffs, x, 1),
        }
    }

    /// Partial sum `Σ_{d≤m} (d-1) coeffs[d]`, the truncated `s'(1)`.
    pub fn derivative_partial(&self, m: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .take(m + 1)
            .map(|(d, c)| d.saturating_sub(1) as f64 * c)
            .sum()
    }

    /// CSV dump `n,coefficient`, exact `num/den` when available.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,coefficient\n");
        for d in 1..self.coeffs.len() {
            match &self.exact {
                Some(ex) => out.push_str(&format!("{d},{}\n", ex[d])),
                None => out.push_str(&format!("{d},{}\n", fmt_f64(self.coeffs[d]))),
            }
        }
        out
    }
}

/// Which side of the graph a node-perspective distribution describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Information nodes (`Lₙ`).
    Info,
    /// Parity-check nodes (`Rₙ`).
    Check,
}

/// Node-perspective distribution: `coeffs[d]` is the fraction of nodes of degree `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeDegreeDistribution {
    coeffs: Vec<f64>,
    kind: NodeKind,
    tail_mass: f64,
    closed_form: Option<ClosedForm>,
}

impl NodeDegreeDistribution {
    /// Fractions indexed by degree.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Info or check side.
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Node mass beyond the stored range.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    /// `Σ coeffs[d] x^d`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.closed_form {
            Some(ClosedForm::BitRegularRho { q, p }) => bit_regular::r_closed(q, p, x),
            _ => {
                let mut acc = 0.0;
                for &c in self.coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
        }
    }

    /// `R(1) - R(1-x)` without cancellation for small `x`.
    pub fn complement(&self, x: f64) -> f64 {
        match self.closed_form {
            Some(ClosedForm::BitRegularRho { q, p }) => 1.0 - bit_regular::r_closed(q, p, 1.0 - x),
            _ => series_complement(&self.coeffs, x, 0),
        }
    }

    /// Partial `R'(1) = Σ d coeffs[d]` over the stored range.
    pub fn derivative_partial(&self, m: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .take(m + 1)
            .map(|(d, c)| d as f64 * c)
            .sum()
    }

    /// Largest stored degree.
    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Node-perspective form of an edge-perspective distribution.
///
/// Node fraction at degree `d` is proportional to `coeffs[d]/d`.
pub fn node_perspective(dd: &DegreeDistribution, kind: NodeKind) -> Result<NodeDegreeDistribution> {
    let norm = dd.integral();
    if !(norm > 0.0) {
        return Err(Error::EmptyDistribution);
    }
    let coeffs: Vec<f64> = dd
        .coeffs
        .iter()
        .enumerate()
        .map(|(d, c)| if d == 0 { 0.0 } else { c / d as f64 / norm })
        .collect();
    Ok(NodeDegreeDistribution {
        coeffs,
        kind,
        tail_mass: dd.tail_integral() / norm,
        closed_form: dd.closed_form,
    })
}

/// Design rate `∫λ / ∫ρ`.
pub fn design_rate(lambda: &DegreeDistribution, rho: &DegreeDistribution) -> f64 {
    lambda.integral() / rho.integral()
}

impl ClosedForm {
    /// Pointwise value of the underlying function.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ClosedForm::BitRegularRho { q, p } => bit_regular::rho_closed(q, p, x),
            ClosedForm::CheckRegularLambda { p } => check_regular::lambda_closed(p, x),
        }
    }
}

/// `Σ c[d] (1 - (1-x)^(d - shift))` using `expm1`/`ln_1p` per term.
fn series_complement(coeffs: &[f64], x: f64, shift: usize) -> f64 {
    if x >= 1.0 {
        let total: f64 = coeffs.iter().sum();
        let at_zero = coeffs.get(shift).copied().unwrap_or(0.0);
        return total - at_zero;
    }
    let l = (-x).ln_1p();
    coeffs
        .iter()
        .enumerate()
        .filter(|&(d, &c)| d > shift && c != 0.0)
        .map(|(d, c)| -c * ((d - shift) as f64 * l).exp_m1())
        .sum()
}

/// 17 significant digits, the reproducible text form used for every float output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_rate_of_simple_pair() {
        let lambda = DegreeDistribution::monomial(3);
        let rho = DegreeDistribution::monomial(2);
        assert!((design_rate(&lambda, &rho) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn node_perspective_of_monomials() {
        let rho = DegreeDistribution::monomial(3);
        let r = node_perspective(&rho, NodeKind::Check).unwrap();
        assert_eq!(r.coeffs()[3], 1.0);
        assert!((r.eval(0.5) - 0.125).abs() < 1e-15);
        let lambda = DegreeDistribution::monomial(5);
        let l = node_perspective(&lambda, NodeKind::Info).unwrap();
        assert_eq!(l.coeffs().iter().position(|&c| c == 1.0), Some(5));
    }

    #[test]
    fn complement_matches_direct_difference() {
        let dd = DegreeDistribution::from_coeffs(vec![0.0, 0.1, 0.5, 0.4]).unwrap();
        for &x in &[1e-12, 1e-3, 0.3, 0.9, 1.0] {
            let direct = dd.eval(1.0) - dd.eval(1.0 - x);
            assert!((dd.complement(x) - direct).abs() < 1e-15 + 1e-12 * x);
        }
        assert!((dd.complement(1e-12) / 1e-12 - 1.3).abs() < 1e-9);
    }

    #[test]
    fn empty_distribution_rejected() {
        assert_eq!(DegreeDistribution::from_coeffs(vec![0.0, 0.0]), Err(Error::EmptyDistribution));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let dd = DegreeDistribution::monomial(2);
        assert_eq!(dd.to_csv(), "n,coefficient\n1,0\n2,1\n");
    }
}
