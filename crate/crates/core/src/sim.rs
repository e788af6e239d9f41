//! Seeded Monte Carlo sweeps of the peeling decoder over block length and
//! channel erasure probability.
//!
//! Every trial draws its data and erasures from a seed derived from
//! `(seed, N, p, trial)`, so trials can run in any order and split runs
//! pool to the same counts as one run.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::degree_dist::{fmt_f64, DepthOptions, EnsembleSpec, TruncatedPair};
use crate::error::{invalid, Result};
use crate::graph_codec::{build_graph, encode, graph_complexity, peel_decode, transmit, BuildOptions, TannerGraph};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

const GRAPH_STREAM: u64 = 0x67_7261_7068;
const DATA_STREAM: u64 = 0x6461_7461;
const CHANNEL_STREAM: u64 = 0x6368_616e;

/// Counts and rates for one `(ensemble, N, p)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub ensemble: String,
    pub n: usize,
    pub p_channel: f64,
    pub trials: u64,
    pub bit_errors: u64,
    /// Information-carrying bits over all trials (pilots excluded, doped included).
    pub info_bits_total: u64,
    pub word_errors: u64,
    pub ber: f64,
    pub wer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl SimRecord {
    fn from_counts(ensemble: String, n: usize, p: f64, seed: u64, c: Counts) -> Self {
        let ber = if c.info_bits > 0 { c.bit_errors as f64 / c.info_bits as f64 } else { 0.0 };
        let (ci_low, ci_high) = ber_interval(c.bit_errors, c.info_bits, c.trials);
        SimRecord {
            ensemble,
            n,
            p_channel: p,
            trials: c.trials,
            bit_errors: c.bit_errors,
            info_bits_total: c.info_bits,
            word_errors: c.word_errors,
            ber,
            wer: if c.trials > 0 { c.word_errors as f64 / c.trials as f64 } else { 0.0 },
            ci_low,
            ci_high,
            seed,
        }
    }

    fn counts(&self) -> Counts {
        Counts {
            trials: self.trials,
            bit_errors: self.bit_errors,
            info_bits: self.info_bits_total,
            word_errors: self.word_errors,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    trials: u64,
    bit_errors: u64,
    info_bits: u64,
    word_errors: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts {
            trials: self.trials + o.trials,
            bit_errors: self.bit_errors + o.bit_errors,
            info_bits: self.info_bits + o.info_bits,
            word_errors: self.word_errors + o.word_errors,
        }
    }
}

/// Sweep settings beyond the grid itself.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimOptions {
    pub build: BuildOptions,
    pub depth: DepthOptions,
    /// Draw a new graph for every trial instead of one per block length.
    pub fresh_graph_per_trial: bool,
}

/// Mixes a list of words into one seed (SplitMix64 finalizer per word).
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x9e37_79b9_7f4a_7c15, |h, &x| {
        let mut z = (h ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    })
}

/// Seed of the graph used for every trial at block length `n`.
pub fn graph_seed(seed: u64, n: usize) -> u64 {
    derive_seed(&[seed, n as u64, GRAPH_STREAM])
}

/// One record per `(N, p)`, sorted by `N` then `p`.
pub fn run_sweep(spec: &EnsembleSpec, n_list: &[usize], p_list: &[f64], trials: u64, seed: u64) -> Result<Vec<SimRecord>> {
    run_sweep_with(spec, n_list, p_list, trials, seed, &SimOptions::default())
}

pub fn run_sweep_with(
    spec: &EnsembleSpec,
    n_list: &[usize],
    p_list: &[f64],
    trials: u64,
    seed: u64,
    opts: &SimOptions,
) -> Result<Vec<SimRecord>> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    if let Some(p) = p_list.iter().find(|p| !(0.0..1.0).contains(*p)) {
        return Err(invalid("p", format!("{p} outside [0, 1)")));
    }
    let pair = spec.build_pair(&opts.depth)?;
    let mut records = Vec::new();
    for &n in n_list {
        for &p in p_list {
            records.push(run_cell(&pair, n, p, 0..trials, seed, opts)?);
        }
    }
    records.sort_by(|a, b| (a.n, a.p_channel).partial_cmp(&(b.n, b.p_channel)).unwrap());
    Ok(records)
}

/// Runs trials `range` of one cell; split ranges pool to the full run.
pub fn run_cell(pair: &TruncatedPair, n: usize, p: f64, range: Range<u64>, seed: u64, opts: &SimOptions) -> Result<SimRecord> {
    let shared = if opts.fresh_graph_per_trial {
        None
    } else {
        Some(build_graph(pair, n, graph_seed(seed, n), &opts.build)?)
    };
    let counts = range
        .into_par_iter()
        .map(|t| {
            let cell = [seed, n as u64, p.to_bits(), t];
            let fresh;
            let graph = match &shared {
                Some(g) => g,
                None => {
                    fresh = build_graph(pair, n, derive_seed(&[&cell[..], &[GRAPH_STREAM]].concat()), &opts.build)?;
                    &fresh
                }
            };
            trial(graph, p, &cell)
        })
        .try_reduce(Counts::default, |a, b| Ok(a + b))?;
    Ok(SimRecord::from_counts(pair.spec.label(), n, p, seed, counts))
}

fn trial(graph: &TannerGraph, p: f64, cell: &[u64; 4]) -> Result<Counts> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[&cell[..], &[DATA_STREAM]].concat()));
    let info: Vec<bool> = (0..graph.k()).map(|i| !graph.is_pilot(i) && rng.gen()).collect();
    let codeword = encode(graph, &info)?;
    let received = transmit(&codeword, p, derive_seed(&[&cell[..], &[CHANNEL_STREAM]].concat()))?;
    let errors = peel_decode(graph, &received)?.unresolved() as u64;
    Ok(Counts {
        trials: 1,
        bit_errors: errors,
        info_bits: graph.data_bits() as u64,
        word_errors: u64::from(errors > 0),
    })
}

/// 95% Wilson interval on the bit error rate. With no errors the upper end
/// is the rule-of-three value `3/trials`.
pub fn ber_interval(errors: u64, bits: u64, trials: u64) -> (f64, f64) {
    if errors == 0 {
        return (0.0, if trials > 0 { (3.0 / trials as f64).min(1.0) } else { 1.0 });
    }
    wilson(errors, bits)
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64) -> (f64, f64) {
    let (k, n) = (k as f64, n as f64);
    let phat = k / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(phat), (center + half).min(1.0).max(phat))
}

pub const CSV_HEADER: &str = "ensemble,N,p,trials,bit_errors,info_bits,ber,wer,ci_low,ci_high,seed";

/// CSV table; records sharing `(ensemble, N, p)` are pooled.
pub fn summarize(records: &[SimRecord]) -> String {
    let mut cells: BTreeMap<(String, usize, u64), (f64, u64, Counts)> = BTreeMap::new();
    for r in records {
        // Positive floats order like their bit patterns.
        let key = (r.ensemble.clone(), r.n, r.p_channel.to_bits());
        let entry = cells.entry(key).or_insert((r.p_channel, r.seed, Counts::default()));
        entry.1 = entry.1.min(r.seed);
        entry.2 = entry.2 + r.counts();
    }
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for ((ensemble, n, _), (p, seed, c)) in cells {
        let r = SimRecord::from_counts(ensemble, n, p, seed, c);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.ensemble,
            r.n,
            fmt_f64(r.p_channel),
            r.trials,
            r.bit_errors,
            r.info_bits_total,
            fmt_f64(r.ber),
            fmt_f64(r.wer),
            fmt_f64(r.ci_low),
            fmt_f64(r.ci_high),
            r.seed
        )
        .unwrap();
    }
    out
}

/// Two-column `p ber` series for one ensemble and block length.
pub fn ber_series(records: &[SimRecord], ensemble: &str, n: usize) -> String {
    let mut rows: Vec<&SimRecord> = records.iter().filter(|r| r.ensemble == ensemble && r.n == n).collect();
    rows.sort_by(|a, b| a.p_channel.total_cmp(&b.p_channel));
    rows.iter().map(|r| format!("{} {}\n", fmt_f64(r.p_channel), fmt_f64(r.ber))).collect()
}

/// Measured edges per information bit against the analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityRow {
    pub n: usize,
    pub measured: f64,
    pub bound: f64,
    /// `measured / bound`.
    pub ratio: f64,
}

impl ComplexityRow {
    pub const CSV_HEADER: &'static str = "N,measured,bound,ratio";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.n, fmt_f64(self.measured), fmt_f64(self.bound), fmt_f64(self.ratio))
    }
}

/// One graph per block length, built with the sweep's graph seed.
pub fn complexity_report(spec: &EnsembleSpec, n_list: &[usize], seed: u64, opts: &SimOptions) -> Result<Vec<ComplexityRow>> {
    let pair = spec.build_pair(&opts.depth)?;
    let bound = spec.complexity_bound();
    n_list
        .iter()
        .map(|&n| {
            let g = build_graph(&pair, n, graph_seed(seed, n), &opts.build)?;
            let measured = graph_complexity(&g);
            Ok(ComplexityRow {
                n,
                measured,
                bound,
                ratio: measured / bound,
            })
        })
        .collect()
}
