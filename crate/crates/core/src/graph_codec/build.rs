use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::TannerGraph;
use crate::degree_dist::{DegreeDistribution, EnsembleSpec, TruncatedPair};
use crate::error::{invalid, Error, Result};

/// Doped bits used for bit-regular graphs unless overridden.
pub const DEFAULT_DOPING: usize = 150;
/// Swap passes allowed before construction gives up.
pub const DEFAULT_MAX_SWAP_PASSES: usize = 1000;

/// Knobs for [`build_graph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Doped info bits; `None` means 150 for bit-regular and 0 for check-regular.
    pub doping_count: Option<usize>,
    pub max_swap_passes: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            doping_count: None,
            max_swap_passes: DEFAULT_MAX_SWAP_PASSES,
        }
    }
}

/// Random Tanner graph with `n` checks (and code bits) drawn from `pair`.
///
/// Check-regular graphs route every socket not claimed by an information
/// node of degree ≤ M to one dummy pilot node, which may carry repeated
/// edges. The decoder knows it, so the checks it touches behave as checks
/// of reduced degree.
pub fn build_graph(pair: &TruncatedPair, n: usize, seed: u64, opts: &BuildOptions) -> Result<TannerGraph> {
    if n < 2 {
        return Err(invalid("N", "need at least two checks"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check_degrees = check_degree_list(&pair.rho, n)?;
    let (info_degrees, dummy) = match pair.spec {
        EnsembleSpec::BitRegular(s) => {
            balance_checks(&mut check_degrees, s.q as usize)?;
            let sockets: usize = check_degrees.iter().sum();
            (vec![s.q as usize; sockets / s.q as usize], false)
        }
        EnsembleSpec::CheckRegular(_) => info_with_dummy(&pair.lambda, check_degrees.iter().sum())?,
    };
    check_degrees.shuffle(&mut rng);
    let k = info_degrees.len();
    let pilots: Vec<usize> = if dummy { vec![k - 1] } else { vec![] };

    let mut info_of: Vec<usize> = info_degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &d)| std::iter::repeat(i).take(d))
        .collect();
    let check_of: Vec<usize> = check_degrees
        .iter()
        .enumerate()
        .flat_map(|(j, &d)| std::iter::repeat(j).take(d))
        .collect();
    info_of.shuffle(&mut rng);
    let is_pilot = |i: usize| dummy && i == k - 1;
    remove_defects(&mut info_of, &check_of, k, n, &is_pilot, opts.max_swap_passes, &mut rng)?;

    let mut check_info_adj = vec![Vec::new(); n];
    for (&i, &j) in info_of.iter().zip(&check_of) {
        check_info_adj[j].push(i);
    }
    check_info_adj.iter_mut().for_each(|v| v.sort_unstable());

    let doping = opts.doping_count.unwrap_or(match pair.spec {
        EnsembleSpec::BitRegular(_) => DEFAULT_DOPING,
        EnsembleSpec::CheckRegular(_) => 0,
    });
    let data = k - pilots.len();
    if doping > data {
        return Err(invalid("doping_count", format!("{doping} exceeds the {data} information bits")));
    }
    let mut doped = index::sample(&mut rng, data, doping).into_vec();
    doped.sort_unstable();
    TannerGraph::new(k, check_info_adj, doped, pilots)
}

/// Counts proportional to `weights` summing to `total`, by largest remainder.
pub fn largest_remainder(weights: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = weights.iter().sum();
    if !(sum > 0.0) {
        return vec![0; weights.len()];
    }
    let quotas: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    // Stable sort keeps ties in index order.
    order.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())));
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// One degree per check, node fractions `ρ_d/d` rounded to `n` checks.
fn check_degree_list(rho: &DegreeDistribution, n: usize) -> Result<Vec<usize>> {
    let weights: Vec<f64> = rho
        .coeffs()
        .iter()
        .enumerate()
        .map(|(d, c)| if d == 0 { 0.0 } else { c / d as f64 })
        .collect();
    let counts = largest_remainder(&weights, n);
    let list: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(d, &c)| std::iter::repeat(d).take(c))
        .collect();
    if list.iter().all(|&d| d == 0) {
        return Err(Error::InvalidQuantization("no check sockets".into()));
    }
    Ok(list)
}

/// Makes the check socket count a multiple of `q` by lowering one check of
/// the highest degree.
fn balance_checks(degrees: &mut [usize], q: usize) -> Result<()> {
    let sockets: usize = degrees.iter().sum();
    let r = sockets % q;
    if r == 0 {
        return Ok(());
    }
    let (idx, &top) = degrees
        .iter()
        .enumerate()
        .max_by_key(|&(i, &d)| (d, std::cmp::Reverse(i)))
        .expect("non-empty");
    if top <= r {
        return Err(Error::InvalidQuantization(format!(
            "cannot remove {r} sockets from a check of degree {top}"
        )));
    }
    degrees[idx] -= r;
    Ok(())
}

/// Info node degrees for a sub-stochastic `λ`, plus whether a dummy node
/// (last index) takes the remaining sockets.
fn info_with_dummy(lambda: &DegreeDistribution, sockets: usize) -> Result<(Vec<usize>, bool)> {
    let weights: Vec<f64> = lambda
        .coeffs()
        .iter()
        .enumerate()
        .map(|(d, c)| if d == 0 { 0.0 } else { c / d as f64 })
        .collect();
    let target = (sockets as f64 * weights.iter().sum::<f64>()).round() as usize;
    let mut counts = largest_remainder(&weights, target);
    let mut used: usize = counts.iter().enumerate().map(|(d, c)| d * c).sum();
    while used > sockets {
        let d = counts
            .iter()
            .rposition(|&c| c > 0)
            .ok_or_else(|| Error::InvalidQuantization("information sockets exceed check sockets".into()))?;
        counts[d] -= 1;
        used -= d;
    }
    let mut degrees: Vec<usize> = counts
        .iter()
        .enumerate()
        .flat_map(|(d, &c)| std::iter::repeat(d).take(c))
        .collect();
    if degrees.is_empty() {
        return Err(Error::InvalidQuantization("no information nodes".into()));
    }
    let leftover = sockets - used;
    if leftover > 0 {
        degrees.push(leftover);
    }
    Ok((degrees, leftover > 0))
}

/// Rewires edges until no non-pilot node has a repeated edge or lies on a
/// 4-cycle. Each pass pairs every offending edge with a random partner and
/// shuffles the info endpoints of the collected set.
fn remove_defects(
    info_of: &mut [usize],
    check_of: &[usize],
    k: usize,
    c: usize,
    is_pilot: &dyn Fn(usize) -> bool,
    max_passes: usize,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    for pass in 0..=max_passes {
        let bad = offending_edges(info_of, check_of, k, c, is_pilot);
        if bad.is_empty() {
            return Ok(());
        }
        if pass == max_passes {
            break;
        }
        let mut set = bad.clone();
        set.extend((0..bad.len()).map(|_| rng.gen_range(0..info_of.len())));
        set.sort_unstable();
        set.dedup();
        let mut ends: Vec<usize> = set.iter().map(|&e| info_of[e]).collect();
        ends.shuffle(rng);
        for (&e, i) in set.iter().zip(ends) {
            info_of[e] = i;
        }
    }
    Err(Error::ConstructionFailed(format!(
        "repeated edges or 4-cycles remain after {max_passes} swap passes"
    )))
}

fn offending_edges(
    info_of: &[usize],
    check_of: &[usize],
    k: usize,
    c: usize,
    is_pilot: &dyn Fn(usize) -> bool,
) -> Vec<usize> {
    // Edges grouped by info node, in edge order.
    let mut start = vec![0usize; k + 1];
    for &i in info_of {
        start[i + 1] += 1;
    }
    for i in 0..k {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut by_info = vec![0usize; info_of.len()];
    for (e, &i) in info_of.iter().enumerate() {
        by_info[fill[i]] = e;
        fill[i] += 1;
    }
    let mut bad = Vec::new();
    let mut owner: HashMap<u64, usize> = HashMap::new();
    let mut checks: Vec<(usize, usize)> = Vec::new();
    for i in 0..k {
        if is_pilot(i) {
            continue;
        }
        checks.clear();
        checks.extend(by_info[start[i]..start[i + 1]].iter().map(|&e| (check_of[e], e)));
        checks.sort_unstable();
        for w in checks.windows(2) {
            if w[0].0 == w[1].0 {
                bad.push(w[1].1);
            }
        }
        checks.dedup_by_key(|x| x.0);
        for a in 0..checks.len() {
            for b in a + 1..checks.len() {
                let key = (checks[a].0 * c + checks[b].0) as u64;
                if let Some(&other) = owner.get(&key) {
                    if other != i {
                        bad.push(checks[a].1);
                    }
                } else {
                    owner.insert(key, i);
                }
            }
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}
