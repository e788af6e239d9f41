use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::TannerGraph;
use crate::error::{invalid, Error, Result};

/// Info bits together with everything the encoder produces from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub info_bits: Vec<bool>,
    pub code_bits: Vec<bool>,
    /// Values of the doped info bits, in the order of `graph.doped()`.
    pub doped_bits: Vec<bool>,
}

/// Channel output: code bits followed by doped bits, `None` when erased.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceivedWord {
    pub code: Vec<Option<bool>>,
    pub doped: Vec<Option<bool>>,
}

impl ReceivedWord {
    /// All transmitted symbols in channel order.
    pub fn symbols(&self) -> impl Iterator<Item = Option<bool>> + '_ {
        self.code.iter().chain(&self.doped).copied()
    }

    pub fn erasures(&self) -> usize {
        self.symbols().filter(Option::is_none).count()
    }
}

/// Peeling decoder output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// One entry per info node; `None` if unresolved.
    pub recovered_info: Vec<Option<bool>>,
    /// Rounds of the resolution queue.
    pub iterations: usize,
    /// Edge uses; each edge is used at most once.
    pub edges_touched: usize,
}

impl DecodeResult {
    pub fn unresolved(&self) -> usize {
        self.recovered_info.iter().filter(|b| b.is_none()).count()
    }
}

/// Accumulates the parity of each check; pilots must be zero.
pub fn encode(graph: &TannerGraph, info_bits: &[bool]) -> Result<Codeword> {
    if info_bits.len() != graph.k() {
        return Err(invalid("info_bits", format!("length {} but K = {}", info_bits.len(), graph.k())));
    }
    if let Some(&i) = graph.pilots().iter().find(|&&i| info_bits[i]) {
        return Err(Error::PilotViolation(i));
    }
    let mut acc = false;
    let code_bits = graph
        .check_info_adj()
        .iter()
        .map(|nbrs| {
            acc ^= nbrs.iter().fold(false, |s, &i| s ^ info_bits[i]);
            acc
        })
        .collect();
    Ok(Codeword {
        info_bits: info_bits.to_vec(),
        code_bits,
        doped_bits: graph.doped().iter().map(|&i| info_bits[i]).collect(),
    })
}

/// Erases each transmitted symbol independently with probability `p`.
pub fn transmit(codeword: &Codeword, p: f64, seed: u64) -> Result<ReceivedWord> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("{p} is not a probability")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = |b: &bool| if rng.gen_bool(p) { None } else { Some(*b) };
    let code = codeword.code_bits.iter().map(&mut pass).collect();
    let doped = codeword.doped_bits.iter().map(&mut pass).collect();
    Ok(ReceivedWord { code, doped })
}

/// Queue-driven peeling over the constraints `c_{j-1} ⊕ c_j ⊕ s_j = 0`.
///
/// Variables are the info nodes `0..K` followed by the code bits. Pilots
/// start known as zero, doped and code bits start known when received.
pub fn peel_decode(graph: &TannerGraph, received: &ReceivedWord) -> Result<DecodeResult> {
    let (k, n) = (graph.k(), graph.n());
    if received.code.len() != n || received.doped.len() != graph.doped().len() {
        return Err(invalid("received", "symbol count does not match the graph"));
    }
    let mut value: Vec<Option<bool>> = vec![None; k + n];
    graph.pilots().iter().for_each(|&i| value[i] = Some(false));
    for (&i, &b) in graph.doped().iter().zip(&received.doped) {
        value[i] = b;
    }
    value[k..].copy_from_slice(&received.code);

    let info_adj = graph.info_check_adj();

    // Unknown count, XOR of unknown ids, parity of known values.
    let mut unknown = vec![0usize; n];
    let mut ids = vec![0usize; n];
    let mut parity = vec![false; n];
    let mut edges_touched = 0;
    for (j, nbrs) in graph.check_info_adj().iter().enumerate() {
        let code = if j == 0 { vec![k] } else { vec![k + j - 1, k + j] };
        for v in nbrs.iter().copied().chain(code) {
            match value[v] {
                Some(b) => {
                    parity[j] ^= b;
                    edges_touched += 1;
                }
                None => {
                    unknown[j] += 1;
                    ids[j] ^= v;
                }
            }
        }
        if unknown[j] == 0 && parity[j] {
            return Err(Error::Inconsistency(j));
        }
    }

    let mut queue: Vec<usize> = (0..n).filter(|&j| unknown[j] == 1).collect();
    let mut iterations = 0;
    while !queue.is_empty() {
        iterations += 1;
        let mut next = Vec::new();
        for j in queue {
            if unknown[j] != 1 {
                continue;
            }
            let v = ids[j];
            let b = parity[j];
            value[v] = Some(b);
            let code_cs;
            let cs: &[usize] = if v < k {
                &info_adj[v]
            } else {
                let j = v - k;
                code_cs = [j, j + 1];
                &code_cs[..if j + 1 < n { 2 } else { 1 }]
            };
            for &c in cs {
                unknown[c] -= 1;
                ids[c] ^= v;
                parity[c] ^= b;
                edges_touched += 1;
                match unknown[c] {
                    1 => next.push(c),
                    0 if parity[c] => return Err(Error::Inconsistency(c)),
                    _ => {}
                }
            }
        }
        queue = next;
    }
    value.truncate(k);
    Ok(DecodeResult {
        recovered_info: value,
        iterations,
        edges_touched,
    })
}

/// Edges of the full graph: info edges plus accumulator edges (`2N - 1`).
pub fn total_edges(graph: &TannerGraph) -> usize {
    graph.info_edges() + 2 * graph.n() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TannerGraph {
        // Info 0 on checks 1, 3, 4; info 1 on checks 0, 2, 4; info 2 pilot.
        TannerGraph::new(3, vec![vec![1], vec![0], vec![1, 2], vec![0], vec![0, 1]], vec![1], vec![2]).unwrap()
    }

    #[test]
    fn single_bit_toggles_accumulator() {
        let g = TannerGraph::new(1, vec![vec![], vec![0], vec![], vec![0], vec![], vec![0], vec![]], vec![], vec![]).unwrap();
        let cw = encode(&g, &[true]).unwrap();
        let expect = [false, true, true, false, false, true, true];
        assert_eq!(cw.code_bits, expect);
    }

    #[test]
    fn pilot_must_be_zero() {
        assert_eq!(encode(&small(), &[false, false, true]), Err(Error::PilotViolation(2)));
        assert!(encode(&small(), &[true]).is_err());
    }

    #[test]
    fn clean_channel_recovers_everything() {
        let g = small();
        let cw = encode(&g, &[true, false, false]).unwrap();
        assert_eq!(cw.doped_bits, vec![false]);
        let rx = transmit(&cw, 0.0, 3).unwrap();
        assert_eq!(rx.erasures(), 0);
        let out = peel_decode(&g, &rx).unwrap();
        assert_eq!(out.recovered_info, vec![Some(true), Some(false), Some(false)]);
        assert!(out.edges_touched <= total_edges(&g));
    }

    #[test]
    fn total_erasure_recovers_only_pilots() {
        let g = small();
        let cw = encode(&g, &[true, true, false]).unwrap();
        let rx = transmit(&cw, 1.0, 3).unwrap();
        let out = peel_decode(&g, &rx).unwrap();
        assert_eq!(out.recovered_info, vec![None, None, Some(false)]);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn corrupted_symbol_is_flagged() {
        let g = small();
        let cw = encode(&g, &[false, false, false]).unwrap();
        let mut rx = transmit(&cw, 0.0, 0).unwrap();
        rx.code[2] = Some(true);
        assert!(matches!(peel_decode(&g, &rx), Err(Error::Inconsistency(_))));
    }
}
