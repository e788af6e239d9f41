//! Capacity-achieving non-systematic irregular repeat-accumulate (IRA) code
//! ensembles for the binary erasure channel.
//!
//! The crate covers the full path from ensemble design to simulation:
//!
//! * [`degree_dist`] synthesizes the bit-regular and check-regular degree
//!   distributions, truncates them to a target gap from capacity, and offers
//!   asymptotic approximations and an independent reversion oracle.
//! * [`analysis`] evaluates density evolution, decoding thresholds and the
//!   endpoint stability conditions.
//! * [`verification`] checks coefficient positivity with exact arithmetic.
//! * [`bounds`] evaluates complexity lower bounds for punctured codes.
//! * [`graph_codec`] builds finite Tanner graphs, encodes, erases and peels.
//! * [`sim`] runs seeded Monte Carlo sweeps.

pub mod analysis;
pub mod bounds;
pub mod degree_dist;
pub mod error;
pub mod graph_codec;
pub mod numeric;
pub mod sim;
pub mod verification;

pub use error::{Error, Result};
