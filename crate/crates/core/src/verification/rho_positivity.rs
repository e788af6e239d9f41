//! Sufficient condition for non-negative `ρ` coefficients.
//!
//! With `r = p/(1-p)`, `R(x)` has a non-negative expansion whenever
//! `[x^k] rQ ≥ [x^k] (rQ)²` for every `k`, i.e. `r ≤ Q_k / [x^k]Q²` wherever
//! `[x^k]Q² > 0`. For `q = 3` the ratio is `(2k-5)/(4(k+5))`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::degree_dist::bit_regular::q_series;
use crate::error::{invalid, Result};

/// Admissible `r = p/(1-p)` at one power `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KBound {
    pub k: usize,
    /// `Q_k / [x^k]Q²`.
    pub ratio: BigRational,
    /// Matching bound on `p`: `ratio / (1 + ratio)`.
    pub p_max: BigRational,
}

/// Per-`k` bounds and the binding one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoPositivityReport {
    pub q: u32,
    pub bounds: Vec<KBound>,
    /// Index into `bounds` of the smallest `p_max`.
    pub binding: usize,
}

impl RhoPositivityReport {
    pub fn binding_bound(&self) -> &KBound {
        &self.bounds[self.binding]
    }
}

/// `(2k-5)/(4(k+5))`, the `q = 3` ratio in closed form.
pub fn q3_ratio(k: usize) -> BigRational {
    BigRational::new(BigInt::from(2 * k as i64 - 5), BigInt::from(4 * (k as i64 + 5)))
}

/// Exact per-`k` bounds for `4 ≤ k ≤ k_max`.
pub fn rho_positivity_report(q: u32, k_max: usize) -> Result<RhoPositivityReport> {
    if q < 3 {
        return Err(invalid("q", "must be at least 3"));
    }
    if k_max < 4 {
        return Err(invalid("k_max", "must be at least 4"));
    }
    let qs = q_series(q, k_max)?;
    let mut bounds = Vec::new();
    for k in 4..=k_max {
        let sq: BigRational = (2..=k - 2).map(|i| &qs[i] * &qs[k - i]).fold(BigRational::zero(), |a, b| a + b);
        if !sq.is_positive() {
            continue;
        }
        let ratio = &qs[k] / sq;
        let p_max = &ratio / (BigRational::one() + &ratio);
        bounds.push(KBound { k, ratio, p_max });
    }
    let binding = (0..bounds.len())
        .min_by(|&a, &b| bounds[a].p_max.cmp(&bounds[b].p_max))
        .expect("k = 4 always has a positive square coefficient");
    Ok(RhoPositivityReport { q, bounds, binding })
}
