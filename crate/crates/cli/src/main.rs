use clap::{Parser, Subcommand};

use hbplus_cli::render::{
    emit, render_auth_sim, render_campaign, render_surface, render_tables,
};
use hbplus_cli::{
    leakage_for_spec, run_attack_campaign, run_auth_sim, surface_for_spec, tables_for_spec,
    CliError, CommonArgs, SurfaceArgs,
};

/// Simulation laboratory for a noisy challenge-response authentication
/// protocol under bit-level key-memory fault injection.
#[derive(Parser)]
#[command(name = "hblab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the error/leakage tables (presets, or one custom parameter set)
    Tables(CommonArgs),
    /// Run a seeded Monte Carlo key-extraction campaign
    Attack(CommonArgs),
    /// Emit the single-query error probability over an (eta, r) grid
    Surface(SurfaceArgs),
    /// Calibrate honest and one-bit-corrupted sessions against the formulas
    AuthSim(CommonArgs),
    /// Emit one leakage row for (eta, r, q)
    Leakage(CommonArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Tables(args) => {
            let spec = args.resolve()?;
            if spec.q_explicit {
                spec.warn_on_even_queries();
            }
            let rows = tables_for_spec(&spec)?;
            emit(
                &render_tables(&rows, spec.format, spec.paper_match),
                spec.out.as_deref(),
            )
        }
        Command::Attack(args) => {
            let spec = args.resolve()?;
            spec.warn_on_even_queries();
            let summary = run_attack_campaign(&spec)?;
            eprintln!(
                "attack campaign: {} trials of k={} (2k={} bits), q={} in {:.3}s",
                summary.trials,
                summary.key_len,
                2 * summary.key_len,
                summary.queries,
                summary.elapsed.as_secs_f64()
            );
            eprintln!(
                "per-bit error {:.6} (pooled model {:.6}, conditional model {:.6}); \
                 full-key success {:.4} (conditional model {:.4})",
                summary.per_bit_error_rate,
                summary.predicted_per_bit_error,
                summary.predicted_per_bit_error_exact,
                summary.full_key_success_rate,
                summary.predicted_full_key_success
            );
            emit(
                &render_campaign(&summary, spec.format, spec.paper_match),
                spec.out.as_deref(),
            )
        }
        Command::Surface(args) => {
            let spec = args.common.resolve()?;
            let axes = args.resolve_axes()?;
            let grid = surface_for_spec(&axes)?;
            emit(
                &render_surface(&grid, spec.format, spec.paper_match),
                spec.out.as_deref(),
            )
        }
        Command::AuthSim(args) => {
            let spec = args.resolve()?;
            let rows = run_auth_sim(&spec)?;
            emit(
                &render_auth_sim(&rows, spec.format, spec.paper_match),
                spec.out.as_deref(),
            )
        }
        Command::Leakage(args) => {
            let spec = args.resolve()?;
            spec.warn_on_even_queries();
            let row = leakage_for_spec(&spec)?;
            emit(
                &render_tables(&[row], spec.format, spec.paper_match),
                spec.out.as_deref(),
            )
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            std::process::exit(2);
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    }
}
