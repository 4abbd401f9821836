use std::path::PathBuf;

use gls_normal::{lattice_sums, s_for_string, DigitSystem, EvalMode, SumResult, Word};
use gls_normal::numeric::rational_to_f64;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::output::{self, Format, Metadata};
use crate::{system, CliResult, Status};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    system: String,
    /// Threshold as "a/b", "2^-k" or a decimal (converted exactly). Repeatable.
    #[arg(long, required_unless_present = "eps_range")]
    eps: Vec<String>,
    /// Every power between two endpoints, e.g. 2^-8..2^-40.
    #[arg(long)]
    eps_range: Option<String>,
    /// Also report A(ε; s) = S(ε/λ_s) + S#(ε/λ_s) for this string of symbols.
    #[arg(long)]
    string: Option<String>,
    /// Exact big-integer sums (default).
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Log-space floating-point sums.
    #[arg(long)]
    float: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn render(r: &SumResult) -> Value {
    match &r.value {
        Some(v) => Value::String(v.to_string()),
        None => json!(r.float_value),
    }
}

fn row(sys: &DigitSystem, eps: &BigRational, word: Option<&Word>, mode: EvalMode) -> CliResult<Vec<(&'static str, Value)>> {
    let sums = lattice_sums(sys, eps, mode)?;
    let mut cells = vec![
        ("eps", Value::String(eps.to_string())),
        ("eps_value", json!(rational_to_f64(eps))),
        ("S", render(&sums.s)),
        ("S_sharp", render(&sums.s_sharp)),
        ("lattice_points", json!(sums.s.lattice_count)),
    ];
    if let Some(w) = word {
        cells.push(("A_string", render(&s_for_string(sys, eps, w, mode)?)));
    }
    Ok(cells)
}

pub fn run(args: Args, seed: u64) -> CliResult<Status> {
    let sys = system::load(&args.system)?;
    let mut eps = args.eps.iter().map(|s| system::parse_eps(s)).collect::<CliResult<Vec<_>>>()?;
    if let Some(r) = &args.eps_range {
        eps.extend(system::parse_eps_range(r)?);
    }
    let word = args.string.as_deref().map(|s| sys.parse_word(s)).transpose()?;
    let mode = if args.float { EvalMode::Float } else { EvalMode::Exact };
    let meta = Metadata::new(
        "sums",
        &sys,
        seed,
        json!({
            "eps": eps.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "string": args.string,
            "mode": if args.float { "float" } else { "exact" },
        }),
    );
    let mut out = output::open(args.output.as_deref())?;
    match args.format {
        Format::Csv => {
            meta.write_comments(&mut out)?;
            let mut w = csv::Writer::from_writer(&mut out);
            for (i, e) in eps.iter().enumerate() {
                let cells = row(&sys, e, word.as_ref(), mode)?;
                if i == 0 {
                    w.write_record(cells.iter().map(|(k, _)| *k))?;
                }
                w.write_record(cells.iter().map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                }))?;
                w.flush()?;
            }
        }
        Format::Json => {
            let rows = eps
                .iter()
                .map(|e| Ok(Value::Object(row(&sys, e, word.as_ref(), mode)?.into_iter().map(|(k, v)| (k.to_string(), v)).collect())))
                .collect::<CliResult<Vec<_>>>()?;
            output::write_json(&mut out, &meta, json!({ "rows": rows }))?;
        }
    }
    out.flush()?;
    Ok(Status::Ok)
}
