//! Positivity certificates for `Pₙ` on an interval.
//!
//! Three certificates are tried in order:
//! 1. every power-basis coefficient is positive (covers `[0, ∞)`);
//! 2. every coefficient around `p₀ = 1/2` is positive (covers `[1/2, ∞)`);
//! 3. Bernstein coefficients on the remaining interval are all positive,
//!    after adaptive bisection. Everything is integer arithmetic.
//!
//! If a bisection endpoint evaluates to a non-positive value it is returned
//! as a witness. Running out of depth or pieces yields `Inconclusive`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::pn::{pn_scaled, shifted_signs, taylor_shift_by};
use crate::error::{invalid, Result};
use crate::numeric::{binomial, f64_to_rational};

/// Maximum bisection depth of a Bernstein piece.
pub const MAX_DEPTH: usize = 48;
/// Maximum number of Bernstein pieces examined.
pub const MAX_PIECES: usize = 20_000;

/// How positivity was established.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// All coefficients of `Pₙ` in the power basis are positive.
    RawCoefficients,
    /// All coefficients in powers of `p - 1/2` are positive.
    ShiftedBasis,
    /// Positive Bernstein coefficients on every piece of a subdivision.
    Bernstein { pieces: usize },
    /// Shifted basis above `1/2`, Bernstein pieces below.
    ShiftedAndBernstein { pieces: usize },
}

/// Outcome of a positivity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Certified(Certificate),
    /// `Pₙ(witness) ≤ 0`.
    NonPositive { witness: BigRational },
    /// No certificate within the search limits.
    Inconclusive { reason: String },
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}

/// Result of [`verify_pn_positive`].
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCheck {
    pub n: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub verdict: Verdict,
}

/// Tries to certify `Pₙ > 0` on `[p_lo, p_hi]`.
pub fn verify_pn_positive(n: usize, p_lo: f64, p_hi: f64) -> Result<PositivityCheck> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    if !(p_lo.is_finite() && p_hi.is_finite() && p_lo < p_hi) {
        return Err(invalid("p_lo", format!("[{p_lo}, {p_hi}] is not an interval")));
    }
    let poly = pn_scaled(n);
    let verdict = certify(&poly, &f64_to_rational(p_lo), &f64_to_rational(p_hi));
    Ok(PositivityCheck { n, p_lo, p_hi, verdict })
}

/// Certificate for an integer polynomial on `[lo, hi]`.
pub fn certify(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> Verdict {
    if !lo.is_negative() && poly.iter().all(|c| c.is_positive()) {
        return Verdict::Certified(Certificate::RawCoefficients);
    }
    let half = BigRational::new(1.into(), 2.into());
    let shifted_ok = shifted_signs(poly).iter().all(|c| c.is_positive());
    if shifted_ok && *lo >= half {
        return Verdict::Certified(Certificate::ShiftedBasis);
    }
    let upper = if shifted_ok && *hi > half { half.clone() } else { hi.clone() };
    match bernstein_certify(poly, lo, &upper) {
        Ok(pieces) if shifted_ok && upper != *hi => Verdict::Certified(Certificate::ShiftedAndBernstein { pieces }),
        Ok(pieces) => Verdict::Certified(Certificate::Bernstein { pieces }),
        Err(v) => v,
    }
}

/// Adaptive Bernstein subdivision; `Ok(pieces)` when positive throughout.
fn bernstein_certify(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> std::result::Result<usize, Verdict> {
    let d = poly.len() - 1;
    if d == 0 {
        return if poly[0].is_positive() {
            Ok(1)
        } else {
            Err(Verdict::NonPositive { witness: lo.clone() })
        };
    }
    let binoms: Vec<Vec<BigInt>> = (0..=d).map(|m| (0..=m).map(|k| binomial(m as u64, k as u64)).collect()).collect();
    let root = on_unit_interval(poly, lo, hi);
    // Work stack of (coefficients in t on [0,1], interval start, width, depth).
    let width = hi - lo;
    let mut stack = vec![(root, lo.clone(), width, 0usize)];
    let mut pieces = 0usize;
    while let Some((c, start, w, depth)) = stack.pop() {
        pieces += 1;
        if pieces > MAX_PIECES {
            return Err(Verdict::Inconclusive { reason: format!("more than {MAX_PIECES} Bernstein pieces") });
        }
        if !c[0].is_positive() {
            return Err(Verdict::NonPositive { witness: start });
        }
        let total: BigInt = c.iter().sum();
        if !total.is_positive() {
            return Err(Verdict::NonPositive { witness: &start + &w });
        }
        // C(d,j) × j-th Bernstein coefficient = Σ_k C(d-k, j-k) c_k.
        let positive = (0..=d).all(|j| {
            let b: BigInt = (0..=j).map(|k| &binoms[d - k][j - k] * &c[k]).sum();
            b.is_positive()
        });
        if positive {
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(Verdict::Inconclusive { reason: format!("bisection depth {MAX_DEPTH} reached") });
        }
        let (left, right) = split(&c);
        let hw = &w / BigRational::from_integer(2.into());
        stack.push((right, &start + &hw, hw.clone(), depth + 1));
        stack.push((left, start, hw, depth + 1));
    }
    Ok(pieces)
}

/// Integer coefficients of a positive multiple of `P(lo + (hi - lo) t)`.
fn on_unit_interval(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let d = poly.len() - 1;
    let den = lo.denom().lcm(hi.denom());
    let l = lo.numer() * (&den / lo.denom());
    let w = hi.numer() * (&den / hi.denom()) - &l;
    // den^d P(u/den) = Σ c_i den^(d-i) uⁱ, then u = l + w t.
    let mut c: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .map(|(i, a)| a * den.pow((d - i) as u32))
        .collect();
    taylor_shift_by(&mut c, &l);
    let mut wp = BigInt::one();
    for ci in c.iter_mut() {
        *ci *= &wp;
        wp *= &w;
    }
    reduce(c)
}

/// Left and right halves, each a positive multiple of the restriction.
fn split(c: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = c.len() - 1;
    let left: Vec<BigInt> = c.iter().enumerate().map(|(k, a)| a << (d - k)).collect();
    let mut right = left.clone();
    taylor_shift_by(&mut right, &BigInt::one());
    (reduce(left), reduce(right))
}

fn reduce(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g > BigInt::one() {
        c.iter_mut().for_each(|x| *x /= &g);
    }
    c
}

/// Lemma-3 spot check up to `n_max`: whenever `P_{n+1}` is certified
/// zero-free on `[0, 1]`, so is `Pₙ`. Returns the per-`n` verdicts.
pub fn lemma3_spot_check(n_max: usize) -> (bool, Vec<Verdict>) {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let table = crate::degree_dist::PnTable::new(n_max);
    let verdicts: Vec<Verdict> = (1..=n_max).map(|n| certify(table.scaled(n), &zero, &one)).collect();
    let consistent = verdicts
        .windows(2)
        .all(|w| !w[1].is_certified() || w[0].is_certified());
    (consistent, verdicts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_n_are_raw_positive() {
        for n in 1..=6 {
            assert_eq!(
                verify_pn_positive(n, 0.0, 1.0).unwrap().verdict,
                Verdict::Certified(Certificate::RawCoefficients)
            );
        }
        assert_ne!(
            verify_pn_positive(7, 0.0, 1.0).unwrap().verdict,
            Verdict::Certified(Certificate::RawCoefficients)
        );
    }

    #[test]
    fn detects_a_root() {
        // 9x² - 6x + 2 is positive; (3x - 1)(3x - 2) is not.
        let zero = BigRational::zero();
        let one = BigRational::one();
        let v = certify(&i(&[2, -9, 9]), &zero, &one);
        assert!(matches!(v, Verdict::NonPositive { .. }), "{v:?}");
        let v = certify(&i(&[2, -6, 9]), &zero, &one);
        assert!(v.is_certified(), "{v:?}");
    }

    #[test]
    fn double_root_is_inconclusive_or_witnessed() {
        // 9x² - 6x + 1 = (3x - 1)² touches zero at 1/3.
        let v = certify(&i(&[1, -6, 9]), &BigRational::zero(), &BigRational::one());
        assert!(!v.is_certified());
    }

    #[test]
    fn moderate_n_on_lower_half() {
        let check = verify_pn_positive(30, 0.0, 0.5).unwrap();
        assert!(check.verdict.is_certified(), "{:?}", check.verdict);
    }

    #[test]
    fn lemma3_consistency() {
        let (ok, verdicts) = lemma3_spot_check(20);
        assert!(ok);
        assert!(verdicts.iter().all(Verdict::is_certified));
    }
}
