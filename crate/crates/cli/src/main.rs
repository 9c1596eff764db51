//! `pgfam`: exact verification and search for hyperplane families of
//! PG(2n+1,q) against the section counts of non-singular quadrics.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pgfam_core::Sign;

mod commands;
mod family_file;
mod report;

/// The frozen enumeration-order version: lexicographic on coordinate
/// encodings. Reports are byte-stable across runs under the same tag.
const ENUMERATION_ORDER: &str = "lex1";

fn parse_sign(s: &str) -> Result<Sign, String> {
    match s {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        other => Err(format!("sign must be + or -, got `{other}`")),
    }
}

#[derive(Parser)]
#[command(
    name = "pgfam",
    version,
    about = "Exact counts, verification, and search for hyperplane families of finite projective spaces"
)]
struct Cli {
    /// Emit machine-readable JSON instead of aligned text.
    #[arg(long, global = true)]
    json: bool,

    /// Enumeration-order compatibility tag (only `lex1` exists).
    #[arg(long, global = true, default_value = ENUMERATION_ORDER)]
    seed_order: String,

    /// Worker threads for parallelizable sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form count table for Q±(2n+1,q); optionally verify
    /// every entry by full enumeration.
    Counts {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(short)]
        q: u64,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        /// Cross-check each count against the standard quadric.
        #[arg(long)]
        enumerate: bool,
    },
    /// Write the canonical family (hyperplanes meeting the standard quadric
    /// in h1 points) to a family file.
    Canonical {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(short)]
        q: u64,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        /// Output path.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Verify both axioms on a family file, run every derived counting
    /// identity, and classify the family.
    Check {
        /// Family file to verify.
        path: PathBuf,
    },
    /// Find all families satisfying both axioms: exhaustive over PG(3,2),
    /// pruned backtracking elsewhere.
    Search {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(short)]
        q: u64,
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        /// Abort after exploring this many nodes.
        #[arg(long, default_value_t = 200_000_000)]
        node_budget: u64,
        /// Abort after this many seconds.
        #[arg(long)]
        time_budget: Option<u64>,
        /// Progress interval in nodes (stderr).
        #[arg(long, default_value_t = 1 << 20)]
        report_every: u64,
    },
    /// Run the pure-arithmetic identity suite over all prime powers
    /// q ≤ max-q and 1 ≤ n ≤ max-n.
    Suite {
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        #[arg(long, default_value_t = 16)]
        max_q: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seed_order != ENUMERATION_ORDER {
        eprintln!(
            "error: unknown enumeration order `{}` (this build provides `{ENUMERATION_ORDER}`)",
            cli.seed_order
        );
        return ExitCode::from(commands::EXIT_USAGE);
    }
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(commands::EXIT_USAGE);
    }

    let code = match cli.command {
        Command::Counts { n, q, sign, enumerate } => {
            commands::cmd_counts(n, q, sign, enumerate, cli.json)
        }
        Command::Canonical { n, q, sign, out } => {
            commands::cmd_canonical(n, q, sign, &out, cli.json)
        }
        Command::Check { path } => commands::cmd_check(&path, cli.json),
        Command::Search {
            n,
            q,
            sign,
            node_budget,
            time_budget,
            report_every,
        } => commands::cmd_search(
            n,
            q,
            sign,
            node_budget,
            time_budget,
            report_every,
            cli.threads,
            cli.json,
        ),
        Command::Suite { max_n, max_q } => commands::cmd_suite(max_n, max_q, cli.json),
    };
    ExitCode::from(code)
}
