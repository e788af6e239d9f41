//! `ira` command-line front end.
//!
//! Exit codes: 0 success, 1 analysis failure, 2 usage or parameter error,
//! 3 graph construction failure. Errors are reported on stderr as one
//! `error kind=<kind> message=<text>` line.

pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ira_core::analysis::{de_margin_check, threshold_search, DEPair};
use ira_core::bounds::{compare_bounds_bec, BoundComparison, DEFAULT_L_MIN};
use ira_core::degree_dist::{
    bit_regular_rho, check_regular_lambda, fmt_f64, EnsembleSpec, LambdaMode, PositivityStatus,
};
use ira_core::graph_codec::{build_graph, graph_complexity, write_graph};
use ira_core::sim::{complexity_report, run_sweep_with, summarize, ComplexityRow};
use ira_core::verification::{lambda_nstar, lemma3_spot_check, rho_positivity_report, verify_pn_positive, Verdict};

use config::{load_config, Config, ConfigError, EnsembleConfig};

/// Index `n` of `Pₙ` above which exact certificates need `--long-running`.
pub const LONG_RUNNING_DEGREE: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "ira", version, about = "Capacity-achieving IRA ensembles for the erasure channel")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Allow parameters whose positivity is only conjectured.
    #[arg(long, global = true)]
    pub force_conjectural: bool,
    /// Allow exact checks that take a long time.
    #[arg(long, global = true)]
    pub long_running: bool,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    BitRegular,
    CheckRegular,
}

/// Ensemble selection; overrides the config file.
#[derive(Debug, Clone, Args)]
pub struct EnsembleArgs {
    /// Ensemble family (or `[ensemble]` in the config).
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleKind>,
    /// Repetition degree (bit-regular).
    #[arg(long, default_value_t = 3)]
    pub q: u32,
    /// Design erasure probability.
    #[arg(long)]
    pub p: Option<f64>,
    /// Gap to capacity.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Untruncated degree distribution coefficients.
    Dd {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Largest degree printed.
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// Truncation degree, pilot fraction and rate; coefficients go to --out.
    Truncate {
        #[command(flatten)]
        ens: EnsembleArgs,
    },
    /// Density-evolution margin on a grid; exit 1 if the condition fails.
    De {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Channel erasure probability (default: design p).
        #[arg(long)]
        p_channel: Option<f64>,
        /// Uniform grid points on (0, 1].
        #[arg(long)]
        grid: Option<usize>,
        /// Use the untruncated pair with this many stored coefficients.
        #[arg(long)]
        untruncated: Option<usize>,
    },
    /// Decoding threshold by bisection.
    Threshold {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Erasure probability where decoding succeeds.
        #[arg(long)]
        p_lo: f64,
        /// Erasure probability where decoding fails.
        #[arg(long)]
        p_hi: f64,
        /// Stop once the bracket is narrower than this.
        #[arg(long)]
        tol: Option<f64>,
        /// Uniform grid points on (0, 1].
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Exact positivity checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Complexity lower bounds for punctured codes on the erasure channel.
    Bounds {
        /// Gap to capacity.
        #[arg(long)]
        epsilon: f64,
        /// Channel erasure probability.
        #[arg(long)]
        p: f64,
        /// Fraction of punctured information bits.
        #[arg(long)]
        p_pct: f64,
        /// Smallest information-node degree.
        #[arg(long, default_value_t = DEFAULT_L_MIN)]
        l_min: u32,
    },
    /// Random Tanner graph; with --out the graph goes to the file and a summary to stdout.
    Build {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Number of checks, equal to the number of code bits.
        #[arg(long)]
        n: usize,
        /// Doped bits (bit-regular); defaults to 150.
        #[arg(long)]
        doping: Option<usize>,
    },
    /// Monte Carlo bit and word error rates.
    Simulate {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Comma-separated block lengths.
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        /// Comma-separated channel erasure probabilities.
        #[arg(long, value_delimiter = ',')]
        p_list: Option<Vec<f64>>,
        /// Codewords per (N, p) cell.
        #[arg(long)]
        trials: Option<u64>,
        /// New graph for every trial.
        #[arg(long)]
        fresh_graphs: bool,
    },
    /// Edges per information bit against the analytic bound.
    Complexity {
        #[command(flatten)]
        ens: EnsembleArgs,
        /// Comma-separated block lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Degrees from which positivity follows from the asymptotic bounds.
    Nstar {
        /// Upper end of the erasure-probability band.
        #[arg(long)]
        p_star: f64,
        /// Also certify `P_{n*} > 0` on `[0, p*]`.
        #[arg(long)]
        certify: bool,
    },
    /// Certify `Pₙ > 0` on an interval.
    PnPositive {
        /// Polynomial index.
        #[arg(long)]
        n: usize,
        /// Interval start.
        #[arg(long, default_value_t = 0.0)]
        p_lo: f64,
        /// Interval end.
        #[arg(long, default_value_t = 1.0)]
        p_hi: f64,
    },
    /// Sufficient bounds on `p` for non-negative `ρ`.
    RhoPositivity {
        /// Repetition degree.
        #[arg(long, default_value_t = 3)]
        q: u32,
        /// Largest power examined.
        #[arg(long, default_value_t = 60)]
        k_max: usize,
    },
    /// Certificates for `P₁ … P_{n_max}` on `[0, 1]`.
    Lemma3 {
        /// Largest polynomial index.
        #[arg(long, default_value_t = 30)]
        n_max: usize,
    },
}

/// Failure categories, each with an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Core(ira_core::Error),
    Io(String),
    /// The computation ran but the checked condition does not hold.
    Analysis(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ira_core::Error as E;
        match self {
            CliError::Analysis(_) => 1,
            CliError::Core(E::ConstructionFailed(_) | E::InvalidQuantization(_)) => 3,
            CliError::Core(E::InvalidParameter { .. } | E::BracketInvalid(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        use ira_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(ConfigError::Validation { .. }) => "config-validation",
            CliError::Config(_) => "config-parse",
            CliError::Io(_) => "io",
            CliError::Analysis(_) => "analysis-failed",
            CliError::Core(e) => match e {
                E::InvalidParameter { .. } => "invalid-parameter",
                E::InsufficientDepth(_) => "insufficient-depth",
                E::PrecisionExhausted { .. } => "precision-exhausted",
                E::EmptyDistribution => "empty-distribution",
                E::Domain(_) => "domain",
                E::BracketInvalid(_) => "bracket-invalid",
                E::ConstructionFailed(_) => "construction-failed",
                E::InvalidQuantization(_) => "invalid-quantization",
                E::PilotViolation(_) => "pilot-violation",
                E::Inconsistency(_) => "inconsistency",
                E::GraphParse { .. } => "graph-parse",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Analysis(m) => m.clone(),
            CliError::Config(e) => e.to_string(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<ira_core::Error> for CliError {
    fn from(e: ira_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = Context::new(&cli).and_then(|ctx| {
        let text = match cli.threads {
            Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| execute(&cli, &ctx)),
                Err(e) => Err(CliError::Usage(e.to_string())),
            },
            None => execute(&cli, &ctx),
        }?;
        emit(&cli, &ctx, &text, stdout)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error kind={} message={:?}", e.kind(), e.message());
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, ctx: &Context, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match (&ctx.out, &cli.command) {
        // `build` and `truncate` write their own files and print a summary.
        (Some(path), cmd) if !matches!(cmd, Command::Build { .. } | Command::Truncate { .. }) => write_file(path, text),
        _ => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

struct Context {
    config: Option<Config>,
    seed: u64,
    /// `--out`, else the config's output path.
    out: Option<PathBuf>,
}

impl Context {
    fn new(cli: &Cli) -> CliResult<Self> {
        let config = cli.config.as_deref().map(load_config).transpose().map_err(CliError::Config)?;
        let seed = cli.seed.or(config.as_ref().and_then(|c| c.seed)).unwrap_or(0);
        let out = cli.out.clone().or_else(|| config.as_ref().and_then(|c| c.output.path.clone()));
        Ok(Context { config, seed, out })
    }

    /// Ensemble from flags, falling back to the config file.
    fn spec(&self, cli: &Cli, args: &EnsembleArgs) -> CliResult<EnsembleSpec> {
        let from_config = self.config.as_ref().map(|c| c.ensemble);
        let chosen = match args.ensemble {
            Some(kind) => {
                let (p, epsilon) = match (args.p, args.epsilon) {
                    (Some(p), Some(e)) => (p, e),
                    _ => return Err(CliError::Usage("--ensemble needs --p and --epsilon".into())),
                };
                match kind {
                    EnsembleKind::BitRegular => EnsembleConfig::BitRegular { q: args.q, p, epsilon },
                    EnsembleKind::CheckRegular => EnsembleConfig::CheckRegular { p, epsilon },
                }
            }
            None => from_config.ok_or_else(|| CliError::Usage("no ensemble: pass --ensemble or --config".into()))?,
        };
        let spec = chosen.spec()?;
        match spec.positivity() {
            PositivityStatus::Proven => Ok(spec),
            PositivityStatus::Conjectural if cli.force_conjectural => Ok(spec),
            PositivityStatus::Conjectural => Err(CliError::Usage(format!(
                "{} relies on conjectured positivity; pass --force-conjectural",
                spec.label()
            ))),
            PositivityStatus::Unsupported => Err(CliError::Usage(format!(
                "{} lies outside every known positivity region",
                spec.label()
            ))),
        }
    }

    fn options(&self) -> ira_core::sim::SimOptions {
        self.config.as_ref().map(Config::sim_options).unwrap_or_default()
    }

    fn de(&self) -> config::DeConfig {
        self.config.as_ref().map(|c| c.de).unwrap_or_default()
    }
}

fn execute(cli: &Cli, ctx: &Context) -> CliResult<String> {
    match &cli.command {
        Command::Dd { ens, n_max } => {
            let spec = ctx.spec(cli, ens)?;
            let dd = match spec {
                EnsembleSpec::BitRegular(s) => bit_regular_rho(s.q, s.p, *n_max)?,
                EnsembleSpec::CheckRegular(s) => {
                    let mode = if *n_max <= 2000 { LambdaMode::ExactRational } else { LambdaMode::ExtendedPrecision };
                    check_regular_lambda(s.p, *n_max, mode)?
                }
            };
            Ok(dd.to_csv())
        }
        Command::Truncate { ens } => {
            let spec = ctx.spec(cli, ens)?;
            let pair = spec.build_pair(&ctx.options().depth)?;
            let summary = format!(
                "ensemble,M,pilot_fraction,design_rate,rate_floor\n{},{},{},{},{}\n",
                spec.label(),
                pair.m,
                fmt_f64(pair.pilot_fraction),
                fmt_f64(pair.design_rate),
                fmt_f64(pair.rate_floor())
            );
            if let Some(path) = &ctx.out {
                let mut coeffs = String::from("side,degree,coefficient\n");
                for (side, dd) in [("lambda", &pair.lambda), ("rho", &pair.rho)] {
                    for (d, c) in dd.coeffs().iter().enumerate().filter(|(_, c)| **c != 0.0) {
                        coeffs.push_str(&format!("{side},{d},{}\n", fmt_f64(*c)));
                    }
                }
                write_file(path, &coeffs)?;
            }
            Ok(summary)
        }
        Command::De {
            ens,
            p_channel,
            grid,
            untruncated,
        } => {
            let spec = ctx.spec(cli, ens)?;
            let pair = de_pair(ctx, spec, *untruncated)?;
            let p = p_channel.unwrap_or(spec.p());
            let report = de_margin_check(&pair, p, grid.unwrap_or(ctx.de().grid_size))?;
            if !report.passes {
                return Err(CliError::Analysis(format!(
                    "density-evolution condition fails at p = {p}: min margin {:e}",
                    report.min_margin
                )));
            }
            Ok(report.to_csv())
        }
        Command::Threshold {
            ens,
            p_lo,
            p_hi,
            tol,
            grid,
        } => {
            let spec = ctx.spec(cli, ens)?;
            let pair = de_pair(ctx, spec, None)?;
            let de = ctx.de();
            let r = threshold_search(&pair, *p_lo, *p_hi, tol.unwrap_or(de.threshold_tol), grid.unwrap_or(de.grid_size))?;
            Ok(r.to_csv())
        }
        Command::Verify { what } => verify(cli, what),
        Command::Bounds { epsilon, p, p_pct, l_min } => {
            let c = compare_bounds_bec(*p, *p_pct, *epsilon, *l_min)?;
            Ok(format!("{}\n{}\n", BoundComparison::CSV_HEADER, c.csv_row()))
        }
        Command::Build { ens, n, doping } => {
            let spec = ctx.spec(cli, ens)?;
            let opts = ctx.options();
            let pair = spec.build_pair(&opts.depth)?;
            let mut build = opts.build;
            if doping.is_some() {
                build.doping_count = *doping;
            }
            let g = build_graph(&pair, *n, ctx.seed, &build)?;
            let text = write_graph(&g);
            match &ctx.out {
                Some(path) => {
                    write_file(path, &text)?;
                    Ok(format!(
                        "K,C,N,doped,pilots,info_edges,rate,complexity\n{},{},{},{},{},{},{},{}\n",
                        g.k(),
                        g.c(),
                        g.n(),
                        g.doped().len(),
                        g.pilots().len(),
                        g.info_edges(),
                        fmt_f64(g.rate()),
                        fmt_f64(graph_complexity(&g))
                    ))
                }
                None => Ok(text),
            }
        }
        Command::Simulate {
            ens,
            n_list,
            p_list,
            trials,
            fresh_graphs,
        } => {
            let spec = ctx.spec(cli, ens)?;
            let sim = ctx.config.as_ref().map(|c| c.sim.clone()).unwrap_or_default();
            let mut opts = ctx.options();
            opts.fresh_graph_per_trial |= *fresh_graphs;
            let n_list = n_list.clone().unwrap_or(sim.n_list);
            let p_list = p_list.clone().unwrap_or(sim.p_list);
            let records = run_sweep_with(&spec, &n_list, &p_list, trials.unwrap_or(sim.trials), ctx.seed, &opts)?;
            Ok(summarize(&records))
        }
        Command::Complexity { ens, n_list } => {
            let spec = ctx.spec(cli, ens)?;
            let rows = complexity_report(&spec, n_list, ctx.seed, &ctx.options())?;
            let mut out = format!("{}\n", ComplexityRow::CSV_HEADER);
            rows.iter().for_each(|r| out.push_str(&format!("{}\n", r.csv_row())));
            Ok(out)
        }
    }
}

fn de_pair(ctx: &Context, spec: EnsembleSpec, untruncated: Option<usize>) -> CliResult<DEPair> {
    Ok(match (untruncated, spec) {
        (None, _) => DEPair::from_truncated(&spec.build_pair(&ctx.options().depth)?),
        (Some(n), EnsembleSpec::CheckRegular(s)) => DEPair::check_regular(s.p, n)?,
        (Some(n), EnsembleSpec::BitRegular(s)) => DEPair::bit_regular(s.q, s.p, n)?,
    })
}

fn verdict_label(v: &Verdict) -> String {
    match v {
        Verdict::Certified(c) => format!("certified:{c:?}"),
        Verdict::NonPositive { witness } => format!("non-positive:{witness}"),
        Verdict::Inconclusive { reason } => format!("inconclusive:{reason}"),
    }
}

fn verify(cli: &Cli, what: &VerifyCommand) -> CliResult<String> {
    let gate = |n: usize| {
        if n > LONG_RUNNING_DEGREE && !cli.long_running {
            Err(CliError::Usage(format!(
                "certifying degree {n} is a long computation; pass --long-running"
            )))
        } else {
            Ok(())
        }
    };
    match what {
        VerifyCommand::Nstar { p_star, certify } => {
            let r = lambda_nstar(*p_star)?;
            let mut out = format!(
                "p_star,n_c11,n_c12,n_star{}\n{},{},{},{}",
                if *certify { ",certificate" } else { "" },
                fmt_f64(r.p_star),
                r.n_c11,
                r.n_c12,
                r.n_star
            );
            let mut failed = false;
            if *certify {
                gate(r.n_star)?;
                let check = verify_pn_positive(r.n_star, 0.0, *p_star)?;
                failed = !check.verdict.is_certified();
                out.push_str(&format!(",{}", verdict_label(&check.verdict)));
            }
            out.push('\n');
            if failed {
                return Err(CliError::Analysis(format!("P_{} not certified positive: {out}", r.n_star)));
            }
            Ok(out)
        }
        VerifyCommand::PnPositive { n, p_lo, p_hi } => {
            gate(*n)?;
            let check = verify_pn_positive(*n, *p_lo, *p_hi)?;
            let row = format!(
                "n,p_lo,p_hi,verdict\n{},{},{},{}\n",
                n,
                fmt_f64(*p_lo),
                fmt_f64(*p_hi),
                verdict_label(&check.verdict)
            );
            if check.verdict.is_certified() {
                Ok(row)
            } else {
                Err(CliError::Analysis(row.trim_end().replace('\n', " ")))
            }
        }
        VerifyCommand::RhoPositivity { q, k_max } => {
            let r = rho_positivity_report(*q, *k_max)?;
            let mut out = String::from("k,ratio,p_max,binding\n");
            for (i, b) in r.bounds.iter().enumerate() {
                out.push_str(&format!("{},{},{},{}\n", b.k, b.ratio, b.p_max, i == r.binding));
            }
            Ok(out)
        }
        VerifyCommand::Lemma3 { n_max } => {
            gate(*n_max)?;
            let (consistent, verdicts) = lemma3_spot_check(*n_max);
            let mut out = String::from("n,verdict\n");
            for (i, v) in verdicts.iter().enumerate() {
                out.push_str(&format!("{},{}\n", i + 1, verdict_label(v)));
            }
            if consistent {
                Ok(out)
            } else {
                Err(CliError::Analysis("certificates are not monotone in n".into()))
            }
        }
    }
}
