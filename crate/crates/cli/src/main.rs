//! `lgc`: command-line front end to the `lgc` library.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "lgc", version, about = "Exact combinatorics for mod p local-global compatibility")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Dot,
}

/// `GL_n` over the unramified extension of degree `f`, with a standard parabolic.
#[derive(Args, Clone)]
pub struct GroupArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub f: usize,
    /// Levi block sizes, e.g. `2,1,1`.
    #[arg(long, conflicts_with = "borel")]
    pub levi: Option<String>,
    /// Use the Borel subgroup (the default).
    #[arg(long)]
    pub borel: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Isotypic components with lambda', P(C) and W(C).
    PcTable {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Constituent graph for a parabolic and a shape X.
    Diagram {
        #[command(flatten)]
        group: GroupArgs,
        /// `full` (X = R+), `levi` (X = R(P)+), `borel`, `example5`, or extra
        /// unipotent roots as `i-j` pairs (1-based), e.g. `1-2,1-3`.
        #[arg(long)]
        shape: Option<String>,
        /// Split case: X = R(P)+.
        #[arg(long, conflicts_with = "shape")]
        split: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Serre weights D, the set P with ideals, and the delta-orbits.
    Serre {
        /// `irred`, `split` or `nonsplit:<J>` with J a comma list in 0..f.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 29)]
        p: i64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Characteristic cycles of the modules attached to P.
    Cycles {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        f: usize,
        /// Seed for the random direct sums used by the additivity check.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Recount every multiplicity by enumerating standard monomials.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Identity checks in the group algebra of F_q.
    Groupalg {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        f: u32,
        /// `all`, or a substring selecting checks by name.
        #[arg(long, default_value = "all")]
        check: String,
        /// Recompute every theta_i by direct convolution.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Rank-one (phi,Gamma)-modules of the delta-orbits.
    Phigamma {
        /// `irred` or `split`.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        f: usize,
        #[arg(long, default_value_t = 29)]
        p: u32,
        /// Seed for the scalars nu and k_1; 0 keeps nu = 1, k_1 = 0.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// Errors here are validation failures (exit code 1).
fn run(cmd: Cmd) -> anyhow::Result<(report::Report, Format)> {
    let cap = commands::weight_cap()?;
    Ok(match cmd {
        Cmd::PcTable { group, format } => (commands::pc_table(&group, cap)?, format),
        Cmd::Diagram { group, shape, split, format } => {
            (commands::diagram(&group, shape.as_deref(), split, cap)?, format)
        }
        Cmd::Serre { kind, f, p, format } => (commands::serre(&kind, f, p)?, format),
        Cmd::Cycles { kind, f, seed, oracle, format } => (commands::cycles(&kind, f, seed, oracle)?, format),
        Cmd::Groupalg { p, f, check, oracle, format } => (commands::groupalg(p, f, &check, oracle)?, format),
        Cmd::Phigamma { kind, f, p, seed, format } => (commands::phigamma(&kind, f, p, seed)?, format),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (rep, format) = match run(cli.cmd) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let text = match format {
        Format::Table => rep.table.clone(),
        Format::Json => serde_json::to_string_pretty(&rep.envelope()).expect("JSON values serialize") + "\n",
        Format::Dot => match &rep.dot {
            Some(d) => d.clone(),
            None => {
                eprintln!("error: {} has no DOT output", rep.command);
                return ExitCode::from(1);
            }
        },
    };
    // A closed pipe (e.g. `| head`) is not an error.
    let _ = std::io::stdout().write_all(text.as_bytes());
    for f in &rep.failures {
        eprintln!("check failed: {f}");
    }
    exit_code(&rep)
}

fn exit_code(rep: &report::Report) -> ExitCode {
    if rep.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
