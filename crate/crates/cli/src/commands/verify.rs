use std::io::Write;
use std::path::PathBuf;

use serde_json::json;

use crate::checks::{self, CheckResult};
use crate::output::{self, Format, Metadata};
use crate::{system, CliResult, Status};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    system: String,
    /// Text lines by default; `json` for a machine-readable report.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn run(args: Args, seed: u64) -> CliResult<Status> {
    let sys = system::load(&args.system)?;
    let sandwich_eps = system::parse_eps_range("2^-8..2^-24")?;
    let hbound_eps = checks::hbound_eps(&sys, 200_000)?;
    let taylor_ln_eps = checks::taylor_ln_eps(&sys);

    let results: Vec<CheckResult> = vec![
        checks::enumeration(&sys)?,
        checks::identities(&sys)?,
        checks::census(&sys)?,
        checks::maximizer(&sys, 1e-20, seed)?,
        checks::hessian(&sys, 1e-8)?,
        checks::concavity(&sys, 1e-12, 10_000, seed)?,
        checks::taylor(&sys, taylor_ln_eps, 1000, seed)?,
        checks::gauss()?,
        checks::sandwich(&sys, &sandwich_eps)?,
        checks::hbound(&sys, &hbound_eps)?,
        checks::cauchy_schwarz(seed),
        checks::gamma_ratio(seed),
    ];
    let failed = results.iter().filter(|r| !r.passed).count();
    let meta = Metadata::new("verify", &sys, seed, json!({ "taylor_ln_eps": taylor_ln_eps, "hbound_eps": [hbound_eps[0], hbound_eps[hbound_eps.len() - 1]] }));
    let mut out = output::open(args.output.as_deref())?;
    match args.format {
        Some(Format::Json) => output::write_json(&mut out, &meta, json!({ "checks": results, "failed": failed }))?,
        _ => {
            meta.write_comments(&mut out)?;
            for r in &results {
                writeln!(out, "{:<4} {}: {}", if r.passed { "ok" } else { "FAIL" }, r.name, r.summary)?;
            }
            writeln!(out, "{} of {} checks passed", results.len() - failed, results.len())?;
        }
    }
    out.flush()?;
    Ok(if failed == 0 { Status::Ok } else { Status::Failed })
}
