//! Density evolution for non-systematic IRA ensembles on the BEC.
//!
//! With `x` the erasure probability of information-to-check messages, one
//! decoding round maps `x` to
//! `f(x) = λ(1 - [(1-p)/(1-pR(1-x))]² ρ(1-x))`. Decoding succeeds when
//! `f(x) < x` on `(0, 1]`.
//!
//! The inner bracket is evaluated in the cancellation-free form
//! `g = (pR̄(2(1-p) + pR̄) + (1-p)²ρ̄) / (1 - p + pR̄)²` with
//! `R̄ = 1 - R(1-x)` and `ρ̄ = 1 - ρ(1-x)`, which keeps full relative
//! accuracy as `x → 0`. Grid points whose margin is too small to sign in
//! floating point are re-evaluated in exact rational arithmetic.

mod exact;
mod stability;

use rayon::prelude::*;

use crate::degree_dist::{
    bit_regular_rho, check_regular_lambda, node_perspective, DegreeDistribution, LambdaMode, NodeDegreeDistribution,
    NodeKind, TruncatedPair,
};
use crate::error::{Error, Result};

pub use stability::{stability_report, StabilityReport};

/// Distribution pair in the form consumed by density evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct DEPair {
    /// Information-side edge distribution, possibly sub-stochastic.
    pub lambda: DegreeDistribution,
    /// Check-side edge distribution.
    pub rho: DegreeDistribution,
    /// Check node-perspective distribution derived from `rho`.
    pub r_node: NodeDegreeDistribution,
}

impl DEPair {
    /// Pairs `lambda` with `rho` and derives `R`.
    pub fn new(lambda: DegreeDistribution, rho: DegreeDistribution) -> Result<Self> {
        let r_node = node_perspective(&rho, NodeKind::Check)?;
        Ok(DEPair { lambda, rho, r_node })
    }

    /// The truncated pair of an ensemble.
    pub fn from_truncated(pair: &TruncatedPair) -> Self {
        Self::new(pair.lambda.clone(), pair.rho.clone()).expect("truncated pairs are non-empty")
    }

    /// Untruncated check-regular pair (`ρ = x²`), `λ` stored to `n_max`.
    pub fn check_regular(p: f64, n_max: usize) -> Result<Self> {
        let lambda = check_regular_lambda(p, n_max, LambdaMode::ExtendedPrecision)?;
        Self::new(lambda, DegreeDistribution::monomial(3))
    }

    /// Untruncated bit-regular pair (`λ = x^(q-1)`), `ρ` stored to `n_max`.
    pub fn bit_regular(q: u32, p: f64, n_max: usize) -> Result<Self> {
        let rho = bit_regular_rho(q, p, n_max)?;
        Self::new(DegreeDistribution::monomial(q as usize), rho)
    }
}

/// The message erasure probabilities of one decoding round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Messages {
    /// Information node to check node.
    pub x0: f64,
    /// Check node to code bit.
    pub x1: f64,
    /// Code bit to check node.
    pub x2: f64,
    /// Check node to information node.
    pub x3: f64,
    /// Next value of `x0`, i.e. `f(x0)`.
    pub next: f64,
}

/// All messages of one round at channel erasure probability `p`.
pub fn de_messages(pair: &DEPair, p: f64, x: f64) -> Result<Messages> {
    if !(0.0..=1.0).contains(&x) || !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("x = {x}, p = {p}")));
    }
    let r_bar = pair.r_node.complement(x);
    let rho_bar = pair.rho.complement(x);
    let d = (1.0 - p) + p * r_bar;
    if !(d > 0.0) {
        return Err(Error::Domain(format!("1 - pR(1-x) = {d} at x = {x}")));
    }
    let q = 1.0 - p;
    let x1 = r_bar / d;
    let x2 = p * x1;
    let x3 = ((p * r_bar * (2.0 * q + p * r_bar) + q * q * rho_bar) / (d * d)).clamp(0.0, 1.0);
    let next = if x3 > 0.5 {
        // Near x = 1 the argument is 1 - w with w below one ulp of 1.
        let w = q * q * pair.rho.eval(1.0 - x) / (d * d);
        pair.lambda.eval_at_complement(w)
    } else {
        pair.lambda.eval(x3)
    };
    Ok(Messages { x0: x, x1, x2, x3, next })
}

/// `f(x)`, the erasure probability after one round.
pub fn de_map(pair: &DEPair, p: f64, x: f64) -> Result<f64> {
    de_messages(pair, p, x).map(|m| m.next)
}

/// Result of iterating the density-evolution map.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `x⁽⁰⁾, x⁽¹⁾, …`.
    pub values: Vec<f64>,
    /// Whether successive values came within `tol`.
    pub converged: bool,
}

impl Trajectory {
    /// Last value reached.
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("trajectory starts with x_init")
    }
}

/// Iterates `x ← f(x)` from `x_init` until a step is below `tol` or `max_iters` runs out.
pub fn de_iterate(pair: &DEPair, p: f64, x_init: f64, max_iters: usize, tol: f64) -> Result<Trajectory> {
    let mut values = vec![x_init];
    let mut x = x_init;
    for _ in 0..max_iters {
        let next = de_map(pair, p, x)?;
        values.push(next);
        let step = (next - x).abs();
        x = next;
        if step < tol {
            return Ok(Trajectory { values, converged: true });
        }
    }
    Ok(Trajectory { values, converged: false })
}

/// Margins of the decoding condition on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DEReport {
    /// Channel erasure probability.
    pub p: f64,
    /// Grid points in `(0, 1]`, increasing.
    pub grid: Vec<f64>,
    /// `f(x)` at each point.
    pub f: Vec<f64>,
    /// `x - f(x)`; points signed exactly carry their exact value (at least
    /// the smallest positive float when positive).
    pub margin: Vec<f64>,
    /// Smallest margin.
    pub min_margin: f64,
    /// `true` iff every margin is strictly positive.
    pub passes: bool,
    /// Number of points signed in exact arithmetic.
    pub exact_points: usize,
}

impl DEReport {
    /// CSV `x,f_x,margin`.
    pub fn to_csv(&self) -> String {
        use crate::degree_dist::fmt_f64;
        let mut out = String::from("x,f_x,margin\n");
        for i in 0..self.grid.len() {
            out.push_str(&format!("{},{},{}\n", fmt_f64(self.grid[i]), fmt_f64(self.f[i]), fmt_f64(self.margin[i])));
        }
        out
    }
}

/// Uniform grid on `(0, 1]` plus 20 geometric points toward each endpoint down to `1e-9`.
pub fn de_grid(grid_size: usize) -> Vec<f64> {
    let h = 1.0 / grid_size as f64;
    let mut grid: Vec<f64> = (1..=grid_size).map(|i| i as f64 * h).collect();
    for k in 1..=20 {
        let t = h * (1e-9 / h).powf(k as f64 / 20.0);
        grid.push(t);
        grid.push(1.0 - t);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    grid
}

/// Checks `f(x) < x` on the grid of [`de_grid`].
pub fn de_margin_check(pair: &DEPair, p: f64, grid_size: usize) -> Result<DEReport> {
    if grid_size < 100 {
        return Err(crate::error::invalid("grid_size", "must be at least 100"));
    }
    let grid = de_grid(grid_size);
    let oracle = exact::ExactPair::new(pair, p);
    let evals: Vec<Result<(f64, f64, bool)>> = grid
        .par_iter()
        .map(|&x| {
            let m = de_messages(pair, p, x)?;
            let margin = x - m.next;
            // Rounding error of the float evaluation; generous on purpose.
            let bound = 1e-12 * (x + m.next) + 1e-300;
            if margin.abs() > bound {
                return Ok((m.next, margin, false));
            }
            match &oracle {
                Some(o) => Ok((m.next, o.margin(x), true)),
                None => Ok((m.next, margin, false)),
            }
        })
        .collect();
    let mut f = Vec::with_capacity(grid.len());
    let mut margin = Vec::with_capacity(grid.len());
    let mut exact_points = 0;
    for e in evals {
        let (fx, mx, ex) = e?;
        f.push(fx);
        margin.push(mx);
        exact_points += ex as usize;
    }
    let min_margin = margin.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(DEReport {
        p,
        grid,
        f,
        margin,
        min_margin,
        passes: min_margin > 0.0,
        exact_points,
    })
}

/// Bisected decoding threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    /// Midpoint of the final bracket.
    pub p_star: f64,
    /// Half-width of the final bracket.
    pub bracket_width: f64,
}

impl ThresholdResult {
    /// One CSV row `p_star,bracket_width` with header.
    pub fn to_csv(&self) -> String {
        use crate::degree_dist::fmt_f64;
        format!("p_star,bracket_width\n{},{}\n", fmt_f64(self.p_star), fmt_f64(self.bracket_width))
    }
}

/// Maximum bisection steps.
pub const MAX_BISECTIONS: usize = 60;

/// Bisection on `p` between a passing `p_lo` and a failing `p_hi`.
pub fn threshold_search(pair: &DEPair, p_lo: f64, p_hi: f64, tol: f64, grid_size: usize) -> Result<ThresholdResult> {
    let passes = |p: f64| de_margin_check(pair, p, grid_size).map(|r| r.passes);
    if !(p_lo < p_hi) {
        return Err(Error::BracketInvalid(format!("p_lo = {p_lo} is not below p_hi = {p_hi}")));
    }
    if !passes(p_lo)? {
        return Err(Error::BracketInvalid(format!("condition fails at p_lo = {p_lo}")));
    }
    if passes(p_hi)? {
        return Err(Error::BracketInvalid(format!("condition holds at p_hi = {p_hi}")));
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        p_star: 0.5 * (lo + hi),
        bracket_width: 0.5 * (hi - lo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree_dist::{CheckRegularSpec, DepthOptions, EnsembleSpec};

    #[test]
    fn simple_pair_map_values() {
        // λ = x, ρ = x: R = x², g = 1 - ((1-p)/(1-p(1-x)²))² (1-x).
        let pair = DEPair::new(DegreeDistribution::monomial(2), DegreeDistribution::monomial(2)).unwrap();
        let (p, x) = (0.3, 0.4);
        let u: f64 = 1.0 - x;
        let expected = 1.0 - ((1.0 - p) / (1.0 - p * u * u)).powi(2) * u;
        assert!((de_map(&pair, p, x).unwrap() - expected).abs() < 1e-15);
        assert_eq!(de_map(&pair, p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn messages_are_consistent() {
        let pair = DEPair::check_regular(0.5, 60).unwrap();
        let m = de_messages(&pair, 0.5, 0.3).unwrap();
        let r = pair.r_node.eval(0.7);
        assert!((m.x1 - (1.0 - (1.0 - m.x2) * r)).abs() < 1e-14);
        assert!((m.x2 - 0.5 * m.x1).abs() < 1e-16);
        assert!((m.x3 - (1.0 - (1.0 - m.x2).powi(2) * pair.rho.eval(0.7))).abs() < 1e-14);
    }

    #[test]
    fn untruncated_fixed_point_at_one() {
        let pair = DEPair::check_regular(0.5, 60).unwrap();
        assert!((de_map(&pair, 0.5, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let t = de_iterate(&pair, 0.5, 1.0, 100, 1e-12).unwrap();
        assert!(t.final_value() >= 1.0 - 1e-9);
        let z = de_iterate(&pair, 0.5, 0.0, 10, 1e-12).unwrap();
        assert_eq!(z.final_value(), 0.0);
    }

    #[test]
    fn map_is_monotone() {
        let spec = EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap());
        let pair = DEPair::from_truncated(&spec.build_pair(&DepthOptions::default()).unwrap());
        let mut prev = 0.0;
        for i in 0..=200 {
            let x = i as f64 / 200.0;
            let f = de_map(&pair, 0.5, x).unwrap();
            assert!(f >= prev);
            assert!(de_map(&pair, 0.55, x).unwrap() >= f);
            prev = f;
        }
    }

    #[test]
    fn bracket_must_be_valid() {
        let spec = EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap());
        let pair = DEPair::from_truncated(&spec.build_pair(&DepthOptions::default()).unwrap());
        assert!(matches!(threshold_search(&pair, 0.9, 0.95, 1e-6, 100), Err(Error::BracketInvalid(_))));
        assert!(matches!(threshold_search(&pair, 0.3, 0.2, 1e-6, 100), Err(Error::BracketInvalid(_))));
    }

    #[test]
    fn grid_has_refinement() {
        let g = de_grid(100);
        assert_eq!(g.len(), 140);
        assert!((g[0] - 1e-9).abs() < 1e-20);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
