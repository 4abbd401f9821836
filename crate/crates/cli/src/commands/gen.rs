use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use gls_normal::{Enumeration, EnumerationOptions, Expansion, TieBreak};
use serde_json::json;

use crate::output::{self, Metadata};
use crate::{system, CliResult, Status};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TieBreakArg {
    LengthThenLex,
    Lex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ExpansionArg {
    SiblingChain,
    AllChildren,
}

#[derive(clap::Args)]
pub struct Args {
    /// System config: JSON file, inline JSON, uniform:<b>, or measures "1/2,1/4,1/4".
    #[arg(long)]
    system: String,
    /// Number of digits to emit.
    #[arg(long)]
    n: u64,
    /// Also write one line per word (1-based start, length, word) to this file.
    #[arg(long)]
    boundaries: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "length-then-lex")]
    tie_break: TieBreakArg,
    #[arg(long, value_enum, default_value = "sibling-chain")]
    expansion: ExpansionArg,
    /// Refuse requests above this many digits.
    #[arg(long, default_value_t = 1_000_000_000)]
    max_n: u64,
    /// Write digits here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn run(args: Args, seed: u64) -> CliResult<Status> {
    let sys = system::load(&args.system)?;
    if args.n > args.max_n {
        return Err(format!("--n {} exceeds --max-n {}", args.n, args.max_n).into());
    }
    let opts = EnumerationOptions {
        tie_break: match args.tie_break {
            TieBreakArg::LengthThenLex => TieBreak::LengthThenLex,
            TieBreakArg::Lex => TieBreak::Lex,
        },
        expansion: match args.expansion {
            ExpansionArg::SiblingChain => Expansion::SiblingChain,
            ExpansionArg::AllChildren => Expansion::AllChildren,
        },
    };
    let meta = Metadata::new("gen", &sys, seed, json!({ "n": args.n, "tie_break": opts.tie_break, "expansion": opts.expansion }));
    // digits own stdout, so the header goes to stderr
    meta.write_comments(&mut std::io::stderr().lock())?;

    let mut out = output::open(args.output.as_deref())?;
    let mut index = args.boundaries.as_deref().map(|p| output::open(Some(p))).transpose()?;
    if let Some(ix) = index.as_mut() {
        writeln!(ix, "# start length word")?;
    }
    let sep = if sys.single_char_symbols() { "" } else { " " };
    let mut words = Enumeration::with_options(&sys, opts);
    let mut written = 0u64;
    while written < args.n {
        let e = words.next().expect("the expansion is infinite");
        if let Some(ix) = index.as_mut() {
            writeln!(ix, "{} {} {}", written + 1, e.word.len(), sys.format_word(&e.word))?;
        }
        for &d in e.word.digits() {
            if written == args.n {
                break;
            }
            if written > 0 {
                out.write_all(sep.as_bytes())?;
            }
            out.write_all(sys.symbol(d).as_bytes())?;
            written += 1;
        }
    }
    writeln!(out)?;
    out.flush()?;
    if let Some(mut ix) = index {
        ix.flush()?;
    }
    eprintln!("# words_emitted: {}", words.emitted_count());
    eprintln!("# frontier_high_water: {}", words.frontier_high_water());
    Ok(Status::Ok)
}
