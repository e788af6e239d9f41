//! Exact-arithmetic checks of coefficient positivity.
//!
//! * [`rho_positivity`]: the sufficient condition on `p` for non-negative `ρ`.
//! * [`pn`]: the `Pₙ` polynomials by two recursions, endpoint values, the
//!   logarithmic limit.
//! * [`bernstein`]: certificates that `Pₙ > 0` on an interval.
//! * [`nstar`]: the degree beyond which positivity of `λₙ` follows from bounds.

pub mod bernstein;
pub mod nstar;
pub mod pn;
mod polynomial;
pub mod rho_positivity;

pub use bernstein::{lemma3_spot_check, verify_pn_positive, Certificate, PositivityCheck, Verdict};
pub use nstar::{lambda_nstar, NStarResult};
pub use pn::{lambda_from_pn, pn_at_one, pn_at_zero, pn_exact, pn_log_limit_check, pn_operator};
pub use polynomial::RationalPolynomial;
pub use rho_positivity::{rho_positivity_report, RhoPositivityReport};
