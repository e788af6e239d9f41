//! Brute-force maximum-likelihood reference for small graphs.

use ira_core::graph_codec::{encode, peel_decode, transmit, ReceivedWord, TannerGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_info(g: &TannerGraph, rng: &mut ChaCha8Rng) -> Vec<bool> {
    (0..g.k()).map(|i| !g.is_pilot(i) && rng.gen()).collect()
}

/// Info bits every codeword consistent with `rx` agrees on.
pub fn ml_recoverable(g: &TannerGraph, rx: &ReceivedWord) -> Vec<Option<bool>> {
    let k = g.k();
    let mut agreed: Vec<Option<Option<bool>>> = vec![None; k];
    for mask in 0u32..1 << k {
        let info: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        if g.pilots().iter().any(|&i| info[i]) {
            continue;
        }
        let cw = encode(g, &info).unwrap();
        let sent = cw.code_bits.iter().chain(&cw.doped_bits);
        if rx.symbols().zip(sent).any(|(r, &s)| r.is_some_and(|b| b != s)) {
            continue;
        }
        for i in 0..k {
            agreed[i] = match agreed[i] {
                None => Some(Some(info[i])),
                Some(Some(b)) if b == info[i] => Some(Some(b)),
                _ => Some(None),
            };
        }
    }
    agreed.into_iter().map(|a| a.expect("transmitted word is consistent")).collect()
}

/// Runs every erasure pattern on `g` and returns the first disagreement.
pub fn exhaustive_against_ml(g: &TannerGraph) -> Result<(), String> {
    let symbols = g.n() + g.doped().len();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for pattern in 0u32..1 << symbols {
        for _ in 0..4 {
            let info = random_info(g, &mut rng);
            let cw = encode(g, &info).unwrap();
            let mut rx = transmit(&cw, 0.0, 0).unwrap();
            for s in (0..symbols).filter(|s| pattern >> s & 1 == 1) {
                if s < g.n() {
                    rx.code[s] = None;
                } else {
                    rx.doped[s - g.n()] = None;
                }
            }
            let peeled = peel_decode(g, &rx).map_err(|e| format!("pattern {pattern:#b}: {e}"))?;
            let ml = ml_recoverable(g, &rx);
            for i in 0..g.k() {
                if let Some(b) = peeled.recovered_info[i] {
                    if b != info[i] || ml[i] != Some(b) {
                        return Err(format!("pattern {pattern:#b}: bit {i} peeled to {b}, ML {:?}", ml[i]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A K = 4, N = 8 graph with one pilot and one doped bit.
pub fn small_graph() -> TannerGraph {
    let adj = vec![vec![0], vec![1, 2], vec![0, 3], vec![2], vec![1], vec![0, 2], vec![3, 1], vec![2]];
    TannerGraph::new(4, adj, vec![1], vec![3]).unwrap()
}

/// Random K = 4, N = 8 graphs without side information.
pub fn random_small_graphs(count: usize, seed: u64) -> Vec<TannerGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let adj: Vec<Vec<usize>> = (0..8).map(|_| (0..4).filter(|_| rng.gen_bool(0.4)).collect()).collect();
            TannerGraph::new(4, adj, vec![], vec![]).unwrap()
        })
        .collect()
}
