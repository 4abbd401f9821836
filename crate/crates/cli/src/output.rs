use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use gls_normal::fibred_system::DigitEntry;
use gls_normal::{DigitSystem, ScanReport};
use serde::Serialize;
use serde_json::Value;

use crate::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize)]
pub struct SystemMeta {
    /// digits in internal order, largest measure first
    pub digits: Vec<DigitEntry>,
    /// for each internal digit, its position in the input
    pub user_order: Vec<usize>,
}

/// Header attached to every report.
#[derive(Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub system: SystemMeta,
    pub seed: u64,
    pub params: Value,
}

impl Metadata {
    pub fn new(command: &'static str, sys: &DigitSystem, seed: u64, params: Value) -> Self {
        Metadata {
            tool: "glsnormal",
            version: env!("CARGO_PKG_VERSION"),
            command,
            system: SystemMeta { digits: sys.to_config().digits, user_order: sys.permutation().to_vec() },
            seed,
            params,
        }
    }

    /// `# key: value` lines for text and CSV streams.
    pub fn comment_lines(&self) -> Vec<String> {
        let digits: Vec<String> = self.system.digits.iter().map(|d| format!("{}={}", d.symbol, d.measure)).collect();
        vec![
            format!("# {} {} {}", self.tool, self.version, self.command),
            format!("# system: {}", digits.join(" ")),
            format!("# user_order: {:?}", self.system.user_order),
            format!("# seed: {}", self.seed),
            format!("# params: {}", self.params),
        ]
    }

    pub fn write_comments(&self, out: &mut dyn Write) -> io::Result<()> {
        for line in self.comment_lines() {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

pub fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| format!("cannot create {}: {e}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json(out: &mut dyn Write, meta: &Metadata, body: Value) -> CliResult<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("metadata".into(), serde_json::to_value(meta)?);
    if let Value::Object(fields) = body {
        doc.extend(fields);
    } else {
        doc.insert("report".into(), body);
    }
    serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
    writeln!(out)?;
    Ok(())
}

pub fn write_scan(out: &mut dyn Write, meta: &Metadata, report: &ScanReport, format: Format) -> CliResult<()> {
    match format {
        Format::Json => write_json(out, meta, serde_json::json!({ "scan": report })),
        Format::Csv => {
            meta.write_comments(out)?;
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec![report.key.clone()];
            header.extend(report.columns.iter().cloned());
            header.push("note".into());
            w.write_record(&header)?;
            for row in &report.rows {
                let mut rec = vec![row.key.clone()];
                rec.extend(row.values.iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
                rec.push(row.note.clone().unwrap_or_default());
                w.write_record(&rec)?;
                w.flush()?;
            }
            Ok(())
        }
    }
}
