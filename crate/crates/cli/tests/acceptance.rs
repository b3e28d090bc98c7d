//! Prints one line per acceptance criterion; exits nonzero on any failure without a recorded reason.
//! Pass `--extended` (after `--`) to include the touching-point check.

use halo_cli::config::RunConfig;
use halo_cli::suite::{criteria, run, Context, Row};
use halo_core::verdict::Verdict;
use std::process::ExitCode;

const KNOWN: [&str; 2] = ["8", "9"];

fn line(r: &Row) -> String {
    let tag = match (r.verdict, r.known) {
        (Verdict::Pass, _) => "PASS",
        (_, Some(_)) => "FAIL (known)",
        _ => "FAIL",
    };
    format!("{tag:<12} {:<3} {}: {}", r.id, r.statement, r.detail)
}

fn main() -> ExitCode {
    let extended = std::env::args().any(|a| a == "--extended");
    let ctx = Context::new(RunConfig { jobs: 4, ..RunConfig::reference() });
    let rows = run(&ctx, &criteria(extended));
    for r in &rows {
        println!("{}", line(r));
        if let (Some(why), false) = (r.known, r.verdict == Verdict::Pass) {
            println!("{:17}reason: {why}", "");
        }
    }
    let bad: Vec<&str> = rows
        .iter()
        .filter(|r| r.verdict != Verdict::Pass && (r.known.is_none() || (!extended && !KNOWN.contains(&r.id))))
        .map(|r| r.id)
        .collect();
    let known: Vec<&str> = rows.iter().filter(|r| r.verdict != Verdict::Pass && r.id != "11").map(|r| r.id).collect();
    if !bad.is_empty() || known != KNOWN {
        println!("acceptance: unexpected failures {bad:?}, known failures {known:?}");
        return ExitCode::FAILURE;
    }
    println!("acceptance: ok ({} criteria, known failures {known:?})", rows.len());
    ExitCode::SUCCESS
}
