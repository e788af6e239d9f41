use ira_core::degree_dist::{BitRegularSpec, CheckRegularSpec, DepthOptions, EnsembleSpec, TruncatedPair};
use ira_core::graph_codec::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{exhaustive_against_ml, random_info, random_small_graphs, small_graph};

fn check_regular_pair() -> TruncatedPair {
    EnsembleSpec::CheckRegular(CheckRegularSpec::new(0.5, 0.1).unwrap())
        .build_pair(&DepthOptions::default())
        .unwrap()
}

fn bit_regular_pair() -> TruncatedPair {
    EnsembleSpec::BitRegular(BitRegularSpec::new(3, 1.0 / 13.0, 0.1).unwrap())
        .build_pair(&DepthOptions::default())
        .unwrap()
}

#[test]
fn peeling_is_contained_in_ml_on_small_graphs() {
    exhaustive_against_ml(&small_graph()).unwrap();
    for g in random_small_graphs(5, 42) {
        exhaustive_against_ml(&g).unwrap();
    }
}

#[test]
fn clean_channel_round_trip() {
    let g = build_graph(&check_regular_pair(), 2000, 3, &BuildOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for t in 0..1000 {
        let info = random_info(&g, &mut rng);
        let rx = transmit(&encode(&g, &info).unwrap(), 0.0, t).unwrap();
        let out = peel_decode(&g, &rx).unwrap();
        let decoded: Vec<bool> = out.recovered_info.iter().map(|b| b.unwrap()).collect();
        assert_eq!(decoded, info);
        assert!(out.edges_touched <= total_edges(&g));
    }
}

#[test]
fn revealing_symbols_never_hurts() {
    let g = build_graph(&check_regular_pair(), 2000, 9, &BuildOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let info = random_info(&g, &mut rng);
        let cw = encode(&g, &info).unwrap();
        let u: Vec<f64> = (0..g.n()).map(|_| rng.gen()).collect();
        let erase = |limit: f64| ReceivedWord {
            code: cw.code_bits.iter().zip(&u).map(|(&b, &x)| (x >= limit).then_some(b)).collect(),
            doped: vec![],
        };
        let more = peel_decode(&g, &erase(0.5)).unwrap();
        let fewer = peel_decode(&g, &erase(0.45)).unwrap();
        for (a, b) in more.recovered_info.iter().zip(&fewer.recovered_info) {
            assert!(a.is_none() || a == b);
        }
    }
}

#[test]
fn encoder_is_linear() {
    let g = build_graph(&bit_regular_pair(), 1500, 2, &BuildOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let zero = encode(&g, &vec![false; g.k()]).unwrap();
    assert!(zero.code_bits.iter().all(|b| !b));
    for _ in 0..100 {
        let a = random_info(&g, &mut rng);
        let b = random_info(&g, &mut rng);
        let sum: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let (ca, cb, cs) = (encode(&g, &a).unwrap(), encode(&g, &b).unwrap(), encode(&g, &sum).unwrap());
        let xor: Vec<bool> = ca.code_bits.iter().zip(&cb.code_bits).map(|(x, y)| x ^ y).collect();
        assert_eq!(cs.code_bits, xor);
    }
}

#[test]
fn single_info_bit_toggles_between_its_checks() {
    let g = build_graph(&bit_regular_pair(), 1500, 4, &BuildOptions::default()).unwrap();
    let n = g.n();
    for i in [0, g.k() / 2, g.k() - 1] {
        let mut info = vec![false; g.k()];
        info[i] = true;
        let mut js = g.info_check_adj()[i].clone();
        js.sort_unstable();
        let expect: Vec<bool> = (0..n).map(|c| (js[0]..js[1]).contains(&c) || (js[2]..n).contains(&c)).collect();
        assert_eq!(encode(&g, &info).unwrap().code_bits, expect);
    }
}

#[test]
fn erasure_fraction_is_binomial() {
    let cw = Codeword {
        info_bits: vec![],
        code_bits: vec![false; 1_000_000],
        doped_bits: vec![],
    };
    for p in [0.1, 0.45] {
        let rx = transmit(&cw, p, 77).unwrap();
        let sigma = (p * (1.0 - p) * 1e6).sqrt();
        assert!((rx.erasures() as f64 - p * 1e6).abs() < 3.0 * sigma);
    }
    assert_eq!(transmit(&cw, 0.0, 1).unwrap().erasures(), 0);
    assert!(transmit(&cw, 1.0 - 1e-9, 1).unwrap().erasures() > 999_000);
}

#[test]
fn total_erasure_without_side_information_recovers_nothing() {
    let opts = BuildOptions {
        doping_count: Some(0),
        ..BuildOptions::default()
    };
    let g = build_graph(&bit_regular_pair(), 1000, 5, &opts).unwrap();
    assert!(g.pilots().is_empty() && g.doped().is_empty());
    let rx = ReceivedWord {
        code: vec![None; g.n()],
        doped: vec![],
    };
    assert_eq!(peel_decode(&g, &rx).unwrap().unresolved(), g.k());
}

#[test]
fn constructed_graphs_pass_audit() {
    for (pair, n) in [(check_regular_pair(), 8192), (bit_regular_pair(), 8000)] {
        let g = build_graph(&pair, n, 7, &BuildOptions::default()).unwrap();
        assert!(g.audit().is_clean());
        let from_checks: usize = g.check_info_adj().iter().map(Vec::len).sum();
        let from_info: usize = g.info_check_adj().iter().map(Vec::len).sum();
        assert_eq!(from_checks, from_info);
        assert!(g.doped().iter().all(|d| !g.pilots().contains(d)));
        assert_eq!(write_graph(&g), write_graph(&build_graph(&pair, n, 7, &BuildOptions::default()).unwrap()));
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}

#[test]
fn check_regular_graph_has_five_edges_per_check() {
    let g = build_graph(&check_regular_pair(), 8192, 7, &BuildOptions::default()).unwrap();
    assert!(g.check_info_adj().iter().all(|c| c.len() == 3));
    let per_check = (g.info_edges() + 2 * g.n()) as f64 / g.n() as f64;
    assert_eq!(per_check, 5.0);
}

#[test]
fn bit_regular_info_nodes_have_degree_q() {
    let g = build_graph(&bit_regular_pair(), 8000, 7, &BuildOptions::default()).unwrap();
    assert!(g.info_check_adj().iter().all(|a| a.len() == 3));
    assert_eq!(g.doped().len(), DEFAULT_DOPING);
}

#[test]
fn decoding_is_deterministic() {
    let g = build_graph(&check_regular_pair(), 3000, 1, &BuildOptions::default()).unwrap();
    let info = random_info(&g, &mut ChaCha8Rng::seed_from_u64(3));
    let cw = encode(&g, &info).unwrap();
    let a = peel_decode(&g, &transmit(&cw, 0.45, 8).unwrap()).unwrap();
    let b = peel_decode(&g, &transmit(&cw, 0.45, 8).unwrap()).unwrap();
    assert_eq!(a, b);
}
