//! Thin command-line entry point; all logic lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cdbn::cli::{self, EvaluateConfig, InferConfig, SimulateConfig, StudyConfig};
use cdbn::CdbnError;

#[derive(Parser)]
#[command(
    name = "cdbn",
    version,
    about = "Network inference from interventional time-course data"
)]
struct Cli {
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SchemeArgs {
    /// Intervention scheme: none, perfect, fixed-effect, mechanism-change,
    /// perfect-fixed-effect.
    #[arg(long, default_value = "perfect-fixed-effect")]
    scheme: String,
    /// Intervention direction: in or out.
    #[arg(long, default_value = "out")]
    direction: String,
}

#[derive(Subcommand)]
enum Command {
    /// Infer posterior edge probabilities from a dataset and design.
    Infer {
        /// Wide CSV dataset (condition,time,<nodes...>).
        #[arg(long)]
        data: PathBuf,
        /// JSON intervention design (condition -> [node names]).
        #[arg(long)]
        design: PathBuf,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// In-degree bound m.
        #[arg(long, default_value_t = 2)]
        indegree: usize,
        /// Prior-network penalty strength λ (requires --prior when > 0).
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Prior network edge-list CSV (parent,child).
        #[arg(long)]
        prior: Option<PathBuf>,
        /// Edge-probability threshold for the point-estimate network.
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Models per node kept in the posterior summary.
        #[arg(long, default_value_t = 10)]
        top_k: usize,
        /// Natural-log transform the data before analysis.
        #[arg(long)]
        log_transform: bool,
        /// Dump design-matrix column provenance for each node's top model.
        #[arg(long)]
        dump_design: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Generate synthetic interventional time-course replicates.
    Simulate {
        /// Ground-truth topology edge-list CSV; bundled 15-node network
        /// when omitted.
        #[arg(long)]
        topology: Option<PathBuf>,
        /// Time points per condition.
        #[arg(long, default_value_t = 8)]
        times: usize,
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Noise standard deviation per node.
        #[arg(long, default_value_t = cdbn::simulate::DEFAULT_NOISE_SCALE)]
        sigma: f64,
        /// Additive shift for fixed-effect generating regimes.
        #[arg(long, default_value_t = cdbn::simulate::DEFAULT_FIXED_EFFECT_SHIFT)]
        shift: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        replicates: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Score a probability matrix against a truth graph or against
    /// interventional descendancy.
    Evaluate {
        /// Edge-probability CSV (as written by `infer`).
        #[arg(long)]
        probs: PathBuf,
        /// Truth edge-list CSV; selects edge-recovery mode.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Exclude self-edges from edge-recovery scoring.
        #[arg(long)]
        no_self: bool,
        /// Dataset CSV; selects descendancy mode (with --target).
        #[arg(long)]
        data: Option<PathBuf>,
        /// Inhibited node to test descendancy for.
        #[arg(long)]
        target: Option<String>,
        /// Baseline (uninhibited) condition label.
        #[arg(long)]
        baseline: Option<String>,
        /// Inhibited condition label.
        #[arg(long)]
        inhibited: Option<String>,
        /// Significance level for the paired t-tests.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Compare direct children instead of descendants.
        #[arg(long)]
        children: bool,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the simulation study grid (generating regimes × methods).
    Study {
        #[arg(long, default_value_t = 20)]
        replicates: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        indegree: usize,
        #[arg(long, default_value_t = 8)]
        times: usize,
        #[arg(long, default_value_t = cdbn::simulate::DEFAULT_NOISE_SCALE)]
        sigma: f64,
        #[arg(long, default_value_t = cdbn::simulate::DEFAULT_FIXED_EFFECT_SHIFT)]
        shift: f64,
        /// Comma-separated generating regimes to include.
        #[arg(long, value_delimiter = ',')]
        regimes: Vec<String>,
        /// Comma-separated analysis methods to include.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        #[arg(long, short)]
        out: PathBuf,
    },
}

fn run(command: Command) -> cdbn::Result<()> {
    match command {
        Command::Infer {
            data,
            design,
            scheme,
            indegree,
            lambda,
            prior,
            threshold,
            top_k,
            log_transform,
            dump_design,
            out,
        } => cli::run_infer(&InferConfig {
            data_path: data,
            design_path: design,
            scheme: cdbn::InterventionScheme::new(
                cli::parse_kind(&scheme.scheme)?,
                cli::parse_direction(&scheme.direction)?,
            ),
            indegree,
            lambda,
            prior_path: prior,
            threshold,
            top_k,
            log_transform,
            dump_design,
            out_dir: out,
        }),
        Command::Simulate {
            topology,
            times,
            scheme,
            sigma,
            shift,
            seed,
            replicates,
            out,
        } => cli::run_simulate(&SimulateConfig {
            topology_path: topology,
            num_times: times,
            scheme: cdbn::InterventionScheme::new(
                cli::parse_kind(&scheme.scheme)?,
                cli::parse_direction(&scheme.direction)?,
            ),
            noise_scale: sigma,
            fixed_effect_shift: shift,
            seed,
            replicates,
            out_dir: out,
        }),
        Command::Evaluate {
            probs,
            truth,
            no_self,
            data,
            target,
            baseline,
            inhibited,
            alpha,
            children,
            out,
        } => {
            let cfg = match (truth, data, target, baseline, inhibited) {
                (Some(truth_path), None, None, None, None) => EvaluateConfig::Edges {
                    probs_path: probs,
                    truth_path,
                    include_self: !no_self,
                    out_dir: out,
                },
                (None, Some(data_path), Some(target), Some(baseline), Some(inhibited)) => {
                    EvaluateConfig::Descendancy {
                        probs_path: probs,
                        data_path,
                        target,
                        baseline_condition: baseline,
                        inhibited_condition: inhibited,
                        alpha,
                        children,
                        out_dir: out,
                    }
                }
                _ => {
                    return Err(CdbnError::InvalidConfig(
                        "use either --truth (edge mode) or --data with --target, \
                         --baseline and --inhibited (descendancy mode)"
                            .into(),
                    ))
                }
            };
            cli::run_evaluate(&cfg)
        }
        Command::Study {
            replicates,
            seed,
            indegree,
            times,
            sigma,
            shift,
            regimes,
            methods,
            out,
        } => cli::run_study(&StudyConfig {
            replicates,
            seed,
            indegree,
            num_times: times,
            noise_scale: sigma,
            fixed_effect_shift: shift,
            regimes,
            methods,
            out_dir: Some(out),
        })
        .map(|_| ()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let numerical = matches!(
                e,
                CdbnError::RankDeficient { .. }
                    | CdbnError::NonpositiveQuadraticForm { .. }
                    | CdbnError::AllModelsExcluded { .. }
                    | CdbnError::DegenerateTest(_)
            );
            ExitCode::from(if numerical { 2 } else { 1 })
        }
    }
}
