use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};

/// Tanner graph of a non-systematic IRA code.
///
/// Info nodes `0..K` connect to checks through `check_info_adj`. Check `j`
/// also touches code bits `j-1` (for `j ≥ 1`) and `j`, so there are as many
/// code bits as checks. Pilot info nodes are fixed to zero and known to the
/// decoder; doped info nodes are transmitted alongside the code bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    k: usize,
    check_info_adj: Vec<Vec<usize>>,
    info_check_adj: Vec<Vec<usize>>,
    doped: Vec<usize>,
    pilots: Vec<usize>,
    is_pilot: Vec<bool>,
}

/// Counts of structural defects among non-pilot info nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Audit {
    /// Repeated (info, check) pairs.
    pub duplicate_edges: usize,
    /// Pairs of checks sharing two distinct info nodes.
    pub four_cycles: usize,
}

impl Audit {
    pub fn is_clean(&self) -> bool {
        self.duplicate_edges == 0 && self.four_cycles == 0
    }
}

impl TannerGraph {
    /// Validates indices and that doped and pilot sets are disjoint.
    pub fn new(k: usize, check_info_adj: Vec<Vec<usize>>, doped: Vec<usize>, pilots: Vec<usize>) -> Result<Self> {
        if check_info_adj.is_empty() {
            return Err(crate::error::invalid("checks", "graph needs at least one check"));
        }
        let mut info_check_adj = vec![Vec::new(); k];
        for (j, nbrs) in check_info_adj.iter().enumerate() {
            for &i in nbrs {
                if i >= k {
                    return Err(crate::error::invalid("check_info_adj", format!("check {j} names info {i} ≥ K = {k}")));
                }
                info_check_adj[i].push(j);
            }
        }
        let doped = sorted_unique(doped, k, "doped")?;
        let pilots = sorted_unique(pilots, k, "pilots")?;
        if doped.iter().any(|d| pilots.binary_search(d).is_ok()) {
            return Err(crate::error::invalid("doped", "doped and pilot sets overlap"));
        }
        let mut is_pilot = vec![false; k];
        pilots.iter().for_each(|&i| is_pilot[i] = true);
        Ok(TannerGraph {
            k,
            check_info_adj,
            info_check_adj,
            doped,
            pilots,
            is_pilot,
        })
    }

    /// Info nodes, pilots and doped nodes included.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Checks, equal to the number of code bits.
    pub fn c(&self) -> usize {
        self.check_info_adj.len()
    }

    /// Code bits.
    pub fn n(&self) -> usize {
        self.check_info_adj.len()
    }

    pub fn check_info_adj(&self) -> &[Vec<usize>] {
        &self.check_info_adj
    }

    pub fn info_check_adj(&self) -> &[Vec<usize>] {
        &self.info_check_adj
    }

    pub fn doped(&self) -> &[usize] {
        &self.doped
    }

    pub fn pilots(&self) -> &[usize] {
        &self.pilots
    }

    pub fn is_pilot(&self, i: usize) -> bool {
        self.is_pilot[i]
    }

    /// Edges between info nodes and checks.
    pub fn info_edges(&self) -> usize {
        self.check_info_adj.iter().map(Vec::len).sum()
    }

    /// Info nodes carrying data: `K - |pilots|`.
    pub fn data_bits(&self) -> usize {
        self.k - self.pilots.len()
    }

    /// `(K - |pilots|) / (N + |doped|)`.
    pub fn rate(&self) -> f64 {
        self.data_bits() as f64 / (self.n() + self.doped.len()) as f64
    }

    /// Duplicate edges and 4-cycles, ignoring pilot nodes.
    pub fn audit(&self) -> Audit {
        let mut audit = Audit::default();
        for nbrs in &self.check_info_adj {
            let mut seen = BTreeSet::new();
            for &i in nbrs {
                if !self.is_pilot[i] && !seen.insert(i) {
                    audit.duplicate_edges += 1;
                }
            }
        }
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, checks) in self.info_check_adj.iter().enumerate() {
            if self.is_pilot[i] {
                continue;
            }
            let mut cs = checks.clone();
            cs.sort_unstable();
            cs.dedup();
            for a in 0..cs.len() {
                for b in a + 1..cs.len() {
                    if owner.insert((cs[a], cs[b]), i).is_some() {
                        audit.four_cycles += 1;
                    }
                }
            }
        }
        audit
    }
}

fn sorted_unique(mut v: Vec<usize>, k: usize, name: &'static str) -> Result<Vec<usize>> {
    v.sort_unstable();
    let len = v.len();
    v.dedup();
    if v.len() != len {
        return Err(crate::error::invalid(name, "repeated index"));
    }
    if v.last().is_some_and(|&i| i >= k) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("index ≥ K = {k}"),
        });
    }
    Ok(v)
}

/// Edges per data bit: `(info edges + 2N) / (K - |pilots|)`.
///
/// Each check is charged two accumulator edges.
pub fn graph_complexity(graph: &TannerGraph) -> f64 {
    (graph.info_edges() + 2 * graph.n()) as f64 / graph.data_bits() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toy_graph_complexity() {
        let g = TannerGraph::new(1, vec![vec![0]], vec![], vec![]).unwrap();
        assert_eq!(graph_complexity(&g), 3.0);
        assert_eq!(g.rate(), 1.0);
    }

    #[test]
    fn audit_finds_defects() {
        let g = TannerGraph::new(3, vec![vec![0, 1], vec![0, 1, 2], vec![2, 2]], vec![], vec![]).unwrap();
        let a = g.audit();
        assert_eq!(a.duplicate_edges, 1);
        assert_eq!(a.four_cycles, 1);
        let clean = TannerGraph::new(3, vec![vec![0, 1], vec![1, 2], vec![2, 2]], vec![], vec![2]).unwrap();
        assert!(clean.audit().is_clean());
    }

    #[test]
    fn rejects_inconsistent_sets() {
        assert!(TannerGraph::new(2, vec![vec![0, 2]], vec![], vec![]).is_err());
        assert!(TannerGraph::new(2, vec![vec![0, 1]], vec![1], vec![1]).is_err());
        assert!(TannerGraph::new(2, vec![vec![0, 1]], vec![1, 1], vec![]).is_err());
        assert!(TannerGraph::new(2, vec![], vec![], vec![]).is_err());
    }
}
