use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dequant::checks::{Perturbation, Suite, SuiteOptions};
use dequant_cli::config::{Format, RunConfig, System};
use dequant_cli::{CliError, EXIT_INVARIANT, EXIT_OK};

#[derive(Parser)]
#[command(name = "dequant", version, about = "Tensor fields and flows on quantum state space and the probability simplex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump Lie (c) and Jordan (d) structure constants of the Gell-Mann basis as JSON.
    StructureConstants {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a flow with RK4 and write the trajectory.
    Flow(FlowArgs),
    /// Run invariant suites; exit 1 if any check fails.
    Check {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        seed: Option<u64>,
        /// Shift c[MU][NU][SIGMA] of the n = 2 constants by DELTA (sensitivity testing).
        #[arg(long, hide = true, value_parser = parse_perturbation)]
        perturb_c: Option<Perturbation>,
    },
    /// Emit (lambda, deviation) pairs of the level-set flatness profile.
    ContractProfile {
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        lambda_grid: String,
        /// Barycentric grid resolution on the simplex.
        #[arg(long, default_value_t = 12)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

#[derive(clap::Args)]
struct FlowArgs {
    /// JSON run configuration; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    system: Option<System>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated coefficients of a.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    a: Option<Vec<f64>>,
    /// Comma-separated coefficients of b.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    b: Option<Vec<f64>>,
    /// Comma-separated start point (state coordinates for the quantum system).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    start: Option<Vec<f64>>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

fn parse_perturbation(s: &str) -> Result<Perturbation, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [mu, nu, sigma, delta] = parts.as_slice() else {
        return Err("expected MU,NU,SIGMA,DELTA".into());
    };
    let idx = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok(Perturbation {
        mu: idx(mu)?,
        nu: idx(nu)?,
        sigma: idx(sigma)?,
        delta: delta.trim().parse().map_err(|e: std::num::ParseFloatError| e.to_string())?,
    })
}

fn flow_config(args: FlowArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig {
            system: args.system.ok_or_else(|| CliError::Usage("--system or --config is required".into()))?,
            n: None,
            a: Vec::new(),
            b: Vec::new(),
            start: None,
            lambda: None,
            t_max: 1.0,
            steps: 1000,
            out: None,
            format: Format::Csv,
        },
    };
    if let Some(s) = args.system {
        cfg.system = s;
    }
    cfg.n = args.n.or(cfg.n);
    cfg.a = args.a.unwrap_or(cfg.a);
    cfg.b = args.b.unwrap_or(cfg.b);
    cfg.start = args.start.or(cfg.start);
    cfg.lambda = args.lambda.or(cfg.lambda);
    cfg.t_max = args.t_max.unwrap_or(cfg.t_max);
    cfg.steps = args.steps.unwrap_or(cfg.steps);
    cfg.out = args.out.or(cfg.out);
    cfg.format = args.format.unwrap_or(cfg.format);
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::StructureConstants { n, out } => {
            let json = dequant_cli::structure_constants_json(n)?;
            dequant_cli::emit(out.as_deref(), &json)?;
            Ok(EXIT_OK)
        }
        Command::Flow(args) => {
            dequant_cli::run_flow(&flow_config(args)?)?;
            Ok(EXIT_OK)
        }
        Command::Check { suite, seed, perturb_c } => {
            let start = std::time::Instant::now();
            let (outcomes, ok) = dequant_cli::run_check(suite, &SuiteOptions { seed, perturbation: perturb_c });
            for o in &outcomes {
                println!("{o}");
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("{} checks, {failed} failed, {:.2} s", outcomes.len(), start.elapsed().as_secs_f64());
            Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
        }
        Command::ContractProfile { lambda_grid, grid, out, format } => {
            let lambdas = dequant_cli::parse_lambda_grid(&lambda_grid)?;
            let (text, excluded) = dequant_cli::contract_profile(&lambdas, grid, format)?;
            if excluded > 0 {
                eprintln!("{excluded} grid points had no real level-set intersection and were excluded");
            }
            dequant_cli::emit(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
