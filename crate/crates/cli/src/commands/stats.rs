use std::path::PathBuf;

use gls_normal::normality_stats::{convergence_table, hot_spot_report, DEFAULT_ROW_CAP};
use serde_json::json;

use crate::output::{self, Format, Metadata};
use crate::{system, CliResult, Status};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    system: String,
    /// Prefix length.
    #[arg(long = "N", required_unless_present = "convergence")]
    n: Option<u64>,
    /// Longest block length counted.
    #[arg(long = "K")]
    k: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Maximum number of report rows (Σ D^k for k ≤ K).
    #[arg(long, default_value_t = DEFAULT_ROW_CAP)]
    row_cap: u128,
    /// Report the error at each of these increasing prefix lengths instead.
    #[arg(long, value_delimiter = ',')]
    convergence: Option<Vec<u64>>,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn run(args: Args, seed: u64) -> CliResult<Status> {
    let sys = system::load(&args.system)?;
    let mut out = output::open(args.output.as_deref())?;
    if let Some(ns) = &args.convergence {
        let meta = Metadata::new("stats", &sys, seed, json!({ "convergence": ns, "K": args.k, "row_cap": args.row_cap.to_string() }));
        let table = convergence_table(&sys, ns, args.k, args.row_cap)?;
        output::write_scan(&mut out, &meta, &table, args.format)?;
        out.flush()?;
        return Ok(Status::Ok);
    }
    let n = args.n.expect("required by clap");
    let meta = Metadata::new("stats", &sys, seed, json!({ "N": n, "K": args.k, "row_cap": args.row_cap.to_string() }));
    let report = hot_spot_report(&sys, n, args.k, args.row_cap)?;
    match args.format {
        Format::Csv => {
            meta.write_comments(&mut out)?;
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["word", "count", "measure_num", "measure_den", "ratio"])?;
            for r in &report.rows {
                w.write_record([
                    sys.format_word(&r.word),
                    r.count.to_string(),
                    r.measure.numer().to_string(),
                    r.measure.denom().to_string(),
                    r.ratio.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "word": sys.format_word(&r.word),
                        "count": r.count,
                        "measure_num": r.measure.numer().to_string(),
                        "measure_den": r.measure.denom().to_string(),
                        "frequency": r.frequency,
                        "ratio": r.ratio,
                    })
                })
                .collect();
            let body = json!({
                "N": report.n,
                "K": report.k_max,
                "max_ratio": report.max_ratio,
                "min_ratio": report.min_ratio,
                "max_abs_error": report.max_abs_error(),
                "rows": rows,
            });
            output::write_json(&mut out, &meta, body)?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}
