use clap::{Parser, Subcommand};
use halo_cli::commands::{cmd_classical, cmd_domain, cmd_fredholm, cmd_halo, cmd_newton};
use halo_cli::config::{OutFormat, RunArgs, RunConfig};
use halo_cli::output::Report;
use halo_cli::suite::{criteria, report, run, table, Context};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "halo", version, about = "Overconvergent U_p spectra, Newton polygons and slope checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fundamental domain statistics and invariant checks.
    Domain(RunArgs),
    /// Certified Fredholm series of U_p on one weight-space component.
    Fredholm(RunArgs),
    /// Newton polygons at boundary valuations (--beta) or at the center weight --k.
    Newton(RunArgs),
    /// Boundary decomposition over the --beta valuations.
    Halo(RunArgs),
    /// Exact classical slopes, Atkin-Lehner pairing and control comparison.
    Classical(RunArgs),
    /// Runs the acceptance suite and prints a verdict table.
    VerifyAll {
        #[command(flatten)]
        args: RunArgs,
        /// Also run the touching-point check (very long).
        #[arg(long)]
        extended: bool,
    },
}

fn emit(r: &Report, out: OutFormat) {
    match out {
        OutFormat::Json => print!("{}", r.render_json()),
        OutFormat::Csv => print!("{}", r.render_csv()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, extended) = match &cli.cmd {
        Cmd::Domain(a) | Cmd::Fredholm(a) | Cmd::Newton(a) | Cmd::Halo(a) | Cmd::Classical(a) => (a, false),
        Cmd::VerifyAll { args, extended } => (args, *extended),
    };
    let cfg = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("halo: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Domain(_) => cmd_domain(&cfg),
        Cmd::Fredholm(_) => cmd_fredholm(&cfg),
        Cmd::Newton(_) => cmd_newton(&cfg),
        Cmd::Halo(_) => cmd_halo(&cfg),
        Cmd::Classical(_) => cmd_classical(&cfg),
        Cmd::VerifyAll { .. } => {
            let ctx = Context::new(cfg.clone());
            let rows = run(&ctx, &criteria(extended));
            let r = report(&rows);
            match cfg.out {
                OutFormat::Json => eprint!("{}", table(&rows)),
                OutFormat::Csv => {}
            }
            Ok(r)
        }
    };
    match result {
        Ok(r) => {
            emit(&r, cfg.out);
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("halo: {e}");
            ExitCode::from(2)
        }
    }
}
