//! Finite-length codes: random Tanner graph construction, accumulator
//! encoding, erasure channel and peeling decoder.

mod build;
mod codec;
pub mod format;
mod graph;

pub use build::{build_graph, largest_remainder, BuildOptions, DEFAULT_DOPING, DEFAULT_MAX_SWAP_PASSES};
pub use codec::{encode, peel_decode, total_edges, transmit, Codeword, DecodeResult, ReceivedWord};
pub use format::{parse_graph, write_graph};
pub use graph::{graph_complexity, Audit, TannerGraph};
