//! `qpsurf` command line: channel robustness, sampling-cost planning and
//! Monte Carlo logical-error-rate runs.

mod record;
mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qpsurf::engine::{estimate, EngineError, RunConfig, SampleTarget};
use qpsurf::quasiprob::{cost, decompose, ChannelTag, NoiseModel, NoiseParams};

use record::{OutputFormat, RecordWriter, ResultRecord};
use sweep::parse_sweep;

const EXIT_DOMAIN: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(name = "qpsurf", version, about = "Surface-code logical error rates under coherent noise via quasi-probability sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Code,
    Pheno,
}

impl ModelArg {
    fn to_model(self) -> NoiseModel {
        match self {
            ModelArg::Code => NoiseModel::CodeCapacity,
            ModelArg::Pheno => NoiseModel::Phenomenological,
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModelArg::Code => "code",
            ModelArg::Pheno => "pheno",
        }
    }

    fn parse_name(name: &str) -> Result<Self, Failure> {
        match name {
            "code" => Ok(ModelArg::Code),
            "pheno" => Ok(ModelArg::Pheno),
            other => Err(Failure::domain(format!("unknown model '{other}' (use code|pheno)"))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the channel robustness and quasi-probability coefficients
    Robustness {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
    },
    /// Print location counts, total robustness and the sample budget
    Cost {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
    },
    /// Estimate logical error rates and write one record per configuration
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Explicit sample count (alternative to --epsilon/--delta)
    #[arg(long, conflicts_with_all = ["epsilon", "delta"])]
    samples: Option<u64>,
    /// Additive accuracy target; requires --delta
    #[arg(long, requires = "delta")]
    epsilon: Option<f64>,
    /// Failure probability for the accuracy target; requires --epsilon
    #[arg(long, requires = "epsilon")]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: QPSURF_WORKERS or all cores)
    #[arg(long, env = "QPSURF_WORKERS")]
    workers: Option<usize>,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Jsonl)]
    format: OutputFormat,
    /// TOML sweep file (keys model/d/p/r with scalar or list values plus
    /// optional samples/epsilon/delta/seed); replaces --model/--d/--p/--r
    #[arg(long, conflicts_with_all = ["model", "d", "p", "r"])]
    sweep: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self { code: EXIT_DOMAIN, message: message.into() }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self { code: EXIT_INFEASIBLE, message: message.into() }
    }

    fn io(err: impl std::fmt::Display) -> Self {
        Self { code: 1, message: err.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Robustness { p, r } => cmd_robustness(p, r),
        Command::Cost { model, d, p, r, epsilon, delta } => {
            cmd_cost(model, d, p, r, epsilon, delta)
        }
        Command::Run(args) => cmd_run(args),
    }
}

fn noise_params(p: f64, r: f64) -> Result<NoiseParams, Failure> {
    NoiseParams::new(p, r).map_err(|e| Failure::domain(e.to_string()))
}

fn cmd_robustness(p: f64, r: f64) -> Result<(), Failure> {
    let params = noise_params(p, r)?;
    let decomp = decompose(&params);
    println!("p      {p}");
    println!("r      {r}");
    println!("R      {:.12}", decomp.robustness());
    println!("c_I    {:.12}", decomp.coeff(ChannelTag::Identity));
    println!("c_X    {:.12}", decomp.coeff(ChannelTag::FlipX));
    println!("c_V    {:.12}", decomp.coeff(ChannelTag::SqrtX));
    println!("c_XV   {:.12}", decomp.coeff(ChannelTag::FlipXSqrtX));
    Ok(())
}

fn cmd_cost(
    model: ModelArg,
    d: usize,
    p: f64,
    r: f64,
    epsilon: f64,
    delta: f64,
) -> Result<(), Failure> {
    let params = noise_params(p, r)?;
    let est = cost(model.to_model(), d, &params, epsilon, delta)
        .map_err(|e| Failure::domain(e.to_string()))?;
    println!("model          {}", model.name());
    println!("d              {d}");
    println!("locations      {}", est.locations);
    println!("R              {:.12}", qpsurf::quasiprob::robustness(&params));
    println!("log10_R2_tot   {:.12}", est.log10_r_tot_squared);
    println!("R_tot          {:.6e}", 10f64.powf(est.log10_r_tot_squared / 2.0));
    match est.samples_m {
        Some(m) => println!("samples_M      {m}"),
        None => println!("samples_M      infeasible (exceeds 2^63 - 1)"),
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    // resolve the configuration grid
    let (model, ds, ps, rs, target, seed) = if let Some(path) = &args.sweep {
        let text = std::fs::read_to_string(path).map_err(Failure::io)?;
        let sweep = parse_sweep(&text).map_err(|e| Failure::domain(e.to_string()))?;
        let model = match sweep.model {
            Some(name) => ModelArg::parse_name(&name)?,
            None => return Err(Failure::domain("sweep file must set `model`")),
        };
        let ds = sweep.d.ok_or_else(|| Failure::domain("sweep file must set `d`"))?.values();
        let ps = sweep.p.ok_or_else(|| Failure::domain("sweep file must set `p`"))?.values();
        let rs = sweep.r.ok_or_else(|| Failure::domain("sweep file must set `r`"))?.values();
        let target = resolve_target(
            sweep.samples.or(args.samples),
            sweep.epsilon.or(args.epsilon),
            sweep.delta.or(args.delta),
        )?;
        (model, ds, ps, rs, target, sweep.seed.unwrap_or(args.seed))
    } else {
        let model = args.model.ok_or_else(|| Failure::domain("--model is required"))?;
        let d = args.d.ok_or_else(|| Failure::domain("--d is required"))?;
        let p = args.p.ok_or_else(|| Failure::domain("--p is required"))?;
        let r = args.r.ok_or_else(|| Failure::domain("--r is required"))?;
        let target = resolve_target(args.samples, args.epsilon, args.delta)?;
        (model, vec![d], vec![p], vec![r], target, args.seed)
    };

    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if workers == 0 {
        return Err(Failure::domain("--workers must be at least 1"));
    }

    let mut writer: RecordWriter<Box<dyn Write>> = match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(Failure::io)?;
            RecordWriter::new(Box::new(BufWriter::new(file)), args.format)
        }
        None => RecordWriter::new(Box::new(std::io::stdout()), args.format),
    };

    for &d in &ds {
        for &p in &ps {
            for &r in &rs {
                let noise = noise_params(p, r)?;
                let config = RunConfig {
                    model: model.to_model(),
                    d,
                    noise,
                    sample_target: target,
                    seed,
                    workers,
                };
                let est = estimate(&config).map_err(|e| match e {
                    EngineError::InfeasibleBudget(_) => Failure::infeasible(e.to_string()),
                    other => Failure::domain(other.to_string()),
                })?;
                let record = ResultRecord {
                    model: model.name().to_string(),
                    d,
                    p,
                    r,
                    n_samples: est.n_samples,
                    p_l_mean: est.p_l_mean,
                    std_error: est.std_error,
                    r_tot_log10: est.r_tot_log10(),
                    seed,
                    wall_time_s: est.wall_time,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                };
                writer.write(&record).map_err(Failure::io)?;
            }
        }
    }
    Ok(())
}

fn resolve_target(
    samples: Option<u64>,
    epsilon: Option<f64>,
    delta: Option<f64>,
) -> Result<SampleTarget, Failure> {
    match (samples, epsilon, delta) {
        (Some(n), _, _) => Ok(SampleTarget::Explicit(n)),
        (None, Some(e), Some(d)) => Ok(SampleTarget::Accuracy { epsilon: e, delta: d }),
        _ => Err(Failure::domain("set --samples or both --epsilon and --delta")),
    }
}
