use ira_cli::config::{BuildConfig, Config, DeConfig, DepthConfig, EnsembleConfig, OutputConfig, SimConfig};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    (1u32..1_000_000).prop_map(|k| k as f64 / 1_000_000.0)
}

fn ensemble() -> impl Strategy<Value = EnsembleConfig> {
    prop_oneof![
        (3u32..12, unit(), unit()).prop_map(|(q, p, epsilon)| EnsembleConfig::BitRegular { q, p, epsilon }),
        (unit(), unit()).prop_map(|(p, epsilon)| EnsembleConfig::CheckRegular { p, epsilon }),
    ]
}

fn config() -> impl Strategy<Value = Config> {
    (
        ensemble(),
        proptest::option::of(0..=i64::MAX as u64),
        (16usize..1 << 20, 16usize..1 << 14),
        (100usize..100_000, 1e-9f64..0.4),
        (proptest::option::of(0usize..500), 0usize..5000),
        (
            proptest::collection::vec(2usize..1 << 20, 0..4),
            proptest::collection::vec(0.0f64..1.0, 0..4),
            1u64..10_000,
            any::<bool>(),
        ),
        proptest::option::of("[a-z]{1,8}/[a-z]{1,8}\\.csv"),
    )
        .prop_map(|(ensemble, seed, (rho_max, lambda_max), (grid_size, threshold_tol), (doping_count, max_swap_passes), (n_list, p_list, trials, fresh), path)| Config {
            ensemble,
            seed,
            depth: DepthConfig { rho_max, lambda_max },
            de: DeConfig { grid_size, threshold_tol },
            build: BuildConfig { doping_count, max_swap_passes },
            sim: SimConfig { n_list, p_list, trials, fresh_graph_per_trial: fresh },
            output: OutputConfig { path: path.map(Into::into) },
        })
}

proptest! {
    #[test]
    fn emit_then_parse_is_identity(c in config()) {
        prop_assert!(c.validate().is_ok());
        let text = c.to_toml();
        prop_assert_eq!(Config::parse(&text).unwrap(), c);
    }
}
