use std::path::PathBuf;

use clap::ValueEnum;
use gls_normal::asymptotics::laplace_maximizer_ln;
use gls_normal::numeric::{ln_rational, rational_to_f64};
use serde_json::json;

use crate::checks;
use crate::output::{self, Metadata};
use crate::{system, CliResult, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Max,
    Hessian,
    Taylor,
    Concavity,
    Gauss,
    Sandwich,
    Hbound,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    system: String,
    /// Threshold ε in (0, 1), as "a/b", "2^-k" or a decimal.
    #[arg(long)]
    eps: String,
    /// Checks to run (comma separated or repeated).
    #[arg(long, value_enum, value_delimiter = ',')]
    check: Vec<Check>,
    /// Box samples for the Taylor check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Line samples for the concavity check.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    /// ε values for the sandwich and hbound scans.
    #[arg(long, default_value = "2^-8..2^-40")]
    scan_range: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn run(args: Args, seed: u64) -> CliResult<Status> {
    let sys = system::load(&args.system)?;
    let eps_exact = system::parse_eps(&args.eps)?;
    let eps = rational_to_f64(&eps_exact);
    let ln_eps = ln_rational(&eps_exact);
    let analysis = laplace_maximizer_ln(&sys, ln_eps)?;
    let scan = system::parse_eps_range(&args.scan_range)?;
    let mut results = Vec::new();
    for c in &args.check {
        results.push(match c {
            Check::Max => checks::maximizer(&sys, eps, seed)?,
            Check::Hessian => checks::hessian(&sys, eps)?,
            Check::Taylor => checks::taylor(&sys, ln_eps, args.samples, seed)?,
            Check::Concavity => checks::concavity(&sys, eps, args.trials, seed)?,
            Check::Gauss => checks::gauss()?,
            Check::Sandwich => checks::sandwich(&sys, &scan)?,
            Check::Hbound => checks::hbound(&sys, &scan.iter().map(rational_to_f64).collect::<Vec<_>>())?,
        });
    }
    let meta = Metadata::new(
        "laplace",
        &sys,
        seed,
        json!({
            "eps": eps_exact.to_string(),
            "checks": args.check.iter().map(|c| format!("{c:?}").to_lowercase()).collect::<Vec<_>>(),
            "samples": args.samples,
            "trials": args.trials,
            "scan_range": args.scan_range,
        }),
    );
    let passed = results.iter().all(|r| r.passed);
    let mut out = output::open(args.output.as_deref())?;
    output::write_json(&mut out, &meta, json!({ "analysis": analysis, "checks": results, "passed": passed }))?;
    out.flush()?;
    Ok(if passed { Status::Ok } else { Status::Failed })
}
