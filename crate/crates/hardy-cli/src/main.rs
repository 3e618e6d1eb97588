//! Command-line front door: parse a rational symbol, dispatch to the
//! classification, measure, adjoint, and verification suites, and emit
//! machine-readable results.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails, 2 on usage
//! errors (including malformed input files).

use clap::{Parser, Subcommand};
use hardy_core::hardy::QuadratureConfig;

mod commands;
mod report;
mod symbol;

/// A failed run: either bad input (exit 2) or a failed verification (exit 1,
/// with the report still printed).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    pub fn usage(msg: &str) -> Self {
        Failure::Usage(msg.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "hardy",
    about = "Composition operators on Hardy spaces of the upper half-plane: boundedness classification, Clark measures, and adjoint computation",
    version
)]
struct Cli {
    /// Initial quadrature node count (>= 32)
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// Relative quadrature refinement target, in (0, 1e-2]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for the sampled verification points
    #[arg(long, global = true, default_value_t = 0xC0FFEE)]
    seed: u64,
    /// Include quadrature diagnostics in JSON output
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide boundedness of the composition operator for a rational symbol
    Classify {
        /// Symbol file: `{"num": [[re,im],...], "den": [[re,im],...]}`
        #[arg(long)]
        symbol: String,
        /// Treat the file as power-quotient terms and apply the exponent rule
        #[arg(long)]
        qlp: bool,
    },
    /// Compute the Clark measure (atoms, density, point mass at infinity)
    AcMeasure {
        #[arg(long)]
        symbol: String,
        /// Level to build the measure at
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Sweep a0:a1:n over levels and emit CSV rows
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Evaluate the adjoint operator at a point or over a grid
    Adjoint {
        #[arg(long)]
        symbol: String,
        /// Catalogue name (g2, f2, K:re,im, k:re,im, P:x,y) or a rational JSON file
        #[arg(long)]
        f: String,
        /// Evaluation point re,im (the ac backend uses the real part)
        #[arg(long)]
        z: Option<String>,
        /// Backend: residue | integral | ac
        #[arg(long, default_value = "residue")]
        backend: String,
        /// Grid re0:re1:nx,im0:im1:ny (mutually exclusive with --z)
        #[arg(long)]
        grid: Option<String>,
    },
    /// Run the duality and isometry verification suites
    Verify {
        #[arg(long)]
        symbol: String,
    },
    /// Check the disc-transfer identities (unitarity, two-path, weight growth)
    TransferCheck {
        #[arg(long)]
        symbol: String,
    },
}

fn quadrature_config(nodes: Option<usize>, tol: Option<f64>) -> Result<QuadratureConfig, Failure> {
    let mut cfg = QuadratureConfig::default();
    if let Some(n) = nodes {
        cfg.base_nodes = n;
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg.clone()
        .validated()
        .ok_or_else(|| Failure::usage("quadrature overrides out of range: need nodes >= 32 and 0 < tol <= 1e-2"))?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let ctx = commands::Context {
        cfg: quadrature_config(cli.nodes, cli.tol)?,
        verbose: cli.verbose,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Classify { symbol, qlp } => commands::classify(symbol, *qlp, &ctx),
        Command::AcMeasure {
            symbol,
            alpha,
            sweep,
        } => commands::ac_measure(symbol, *alpha, sweep.as_deref(), &ctx),
        Command::Adjoint {
            symbol,
            f,
            z,
            backend,
            grid,
        } => commands::adjoint_cmd(symbol, f, z.as_deref(), backend, grid.as_deref(), &ctx),
        Command::Verify { symbol } => commands::verify(symbol, &ctx),
        Command::TransferCheck { symbol } => commands::transfer_check(symbol, &ctx),
    }
}

fn main() -> std::process::ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            std::process::ExitCode::SUCCESS
        }
        Err(Failure::Check(report)) => {
            print!("{report}");
            eprintln!("verification failed");
            std::process::ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::ExitCode::from(2)
        }
    }
}
