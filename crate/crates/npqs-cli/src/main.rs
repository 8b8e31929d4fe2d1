use std::process::ExitCode;

use clap::{Parser, Subcommand};

use npqs::functionals::{EvalConfig, FunctionalKind};
use npqs::sampler::SamplerConfig;
use npqs::supsearch::SupConfig;
use npqs_cli::commands::{
    cmd_check_identities, cmd_equivalence_report, cmd_single, parse_params, SingleRun,
};
use npqs_cli::config::RunConfig;
use npqs_cli::exit_code;

/// Numerical laboratory for holomorphic function-space norms on the unit
/// ball of C^n.
#[derive(Parser)]
#[command(name = "npqs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the closed-form identity and inequality batteries.
    CheckIdentities {
        /// Ambient dimension.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Random cases per check.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Seed (falls back to NPQS_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
        /// Inject a known defect to prove the battery can fail
        /// (flip-sa-sign).
        #[arg(long)]
        mutate: Option<String>,
    },
    /// The defining norm integral of an expression, at a fixed Moebius
    /// parameter or as a supremum search when --a is omitted.
    Norm {
        #[command(flatten)]
        single: SingleArgs,
    },
    /// Any of the eight functionals (see --kind), same conventions as norm.
    Functional {
        /// n-norm, grad-i1, inv-grad-i2, radial-i3, d-alpha, hw-euclid,
        /// hw-proj, j-mean-osc.
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        single: SingleArgs,
    },
    /// Supremum search over the Moebius parameter for one functional.
    SupSearch {
        /// Functional kind (defaults to the defining norm).
        #[arg(long, default_value = "n-norm")]
        kind: String,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long)]
        r_max: Option<f64>,
        #[command(flatten)]
        single: SingleArgs,
    },
    /// Full corpus x params x kinds report with verdict matrices (CSV +
    /// JSON summary).
    EquivalenceReport {
        /// Path to the JSON run configuration.
        #[arg(long)]
        config: std::path::PathBuf,
        /// Override the configured output directory.
        #[arg(long)]
        out_dir: Option<String>,
        /// Override the configured worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Override the configured seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured per-probe sample count.
        #[arg(long)]
        samples: Option<u64>,
        /// Wall-clock cap in seconds; rows past the cap are marked skipped.
        #[arg(long)]
        budget_seconds: Option<f64>,
    },
}

#[derive(clap::Args)]
struct SingleArgs {
    /// Expression in the textual grammar, e.g. "(1 - dot(z,[1]))^-0.5".
    #[arg(long)]
    expr: String,
    /// Space parameters, e.g. "p=7,q=1,s=1,alpha=0.5".
    #[arg(long)]
    params: String,
    /// Ambient dimension.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Fixed Moebius parameter as comma-separated complex literals,
    /// e.g. "0.3+0.1i,0.2i". Omit to run the supremum search.
    #[arg(long)]
    a: Option<String>,
    /// Seed (falls back to NPQS_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per integral estimate.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Deterministic shard count.
    #[arg(long, default_value_t = 8)]
    shards: u32,
    /// Inner samples per outer point of the mean-oscillation route.
    #[arg(long, default_value_t = 32)]
    mo_inner: u32,
    /// Run the double-integral kinds under the weaker p > 2(q+ns) gate.
    #[arg(long)]
    override_hw_gate: bool,
}

fn resolve_seed(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| std::env::var("NPQS_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(0)
}

fn eval_config(args: &SingleArgs, sup: SupConfig) -> EvalConfig {
    EvalConfig {
        sampler: SamplerConfig::new(resolve_seed(args.seed), args.samples)
            .with_shards(args.shards),
        mo_inner: args.mo_inner,
        hw_override: args.override_hw_gate,
        sup,
    }
}

fn kind_or_exit(name: &str) -> Result<FunctionalKind, u8> {
    FunctionalKind::from_label(name).ok_or_else(|| {
        eprintln!(
            "error: unknown kind `{name}`; expected one of {}",
            FunctionalKind::ALL.map(|k| k.label()).join(", ")
        );
        exit_code::INPUT
    })
}

fn run_single(args: &SingleArgs, kind: FunctionalKind, sup: SupConfig) -> u8 {
    let spec = match parse_params(&args.params) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code::INPUT;
        }
    };
    let run = SingleRun {
        expr: args.expr.clone(),
        spec,
        n: args.n,
        a: args.a.clone(),
        kind,
        eval: eval_config(args, sup),
    };
    match cmd_single(&run) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code::INPUT
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::CheckIdentities { n, samples, seed, mutate } => {
            match cmd_check_identities(n, samples, resolve_seed(seed), mutate.as_deref()) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code::INPUT
                }
            }
        }
        Command::Norm { single } => run_single(&single, FunctionalKind::NNorm, SupConfig::default()),
        Command::Functional { kind, single } => match kind_or_exit(&kind) {
            Ok(kind) => run_single(&single, kind, SupConfig::default()),
            Err(code) => code,
        },
        Command::SupSearch { kind, budget, r_max, single } => match kind_or_exit(&kind) {
            Ok(kind) => {
                let mut sup = SupConfig::default();
                if let Some(b) = budget {
                    sup.budget = b;
                }
                if let Some(r) = r_max {
                    sup.r_max = r;
                }
                let mut args = single;
                args.a = None; // sup-search always searches
                run_single(&args, kind, sup)
            }
            Err(code) => code,
        },
        Command::EquivalenceReport { config, out_dir, workers, seed, samples, budget_seconds } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: reading {}: {e}", config.display());
                    return ExitCode::from(exit_code::INPUT);
                }
            };
            let mut cfg = match RunConfig::from_json(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(exit_code::INPUT);
                }
            };
            if let Some(dir) = out_dir {
                cfg.out_dir = dir;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(s) = samples {
                cfg.samples = s;
            }
            if budget_seconds.is_some() {
                cfg.budget_seconds = budget_seconds;
            }
            match cmd_equivalence_report(&cfg) {
                Ok((code, _, _)) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code::INPUT
                }
            }
        }
    };
    ExitCode::from(code)
}
