//! Command-line front end: check matrices, emit and verify witnesses,
//! reduce matrices, and run the exhaustive oracle.
//!
//! Exit codes: 0 realizable/verified/agree, 1 not realizable/failed/
//! disagree, 2 inconclusive, 3 usage or parse error. Machine-readable
//! results go to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catmat::category::verify;
use catmat::construct::{construct_witness, route_summary};
use catmat::decide::{decide, Verdict};
use catmat::matrix::PosMatrix;
use catmat::oracle::{cross_validate, Agreement, SearchConfig, SearchOutcome};
use catmat::witness::{parse_witness, write_witness};

#[derive(Parser)]
#[command(
    name = "catmat",
    version,
    about = "Finite-category realizability of positive integer matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether any finite category has the matrix's hom-set sizes
    Check {
        /// Matrix file
        matrix: PathBuf,
    },
    /// Build a witness category and write it as a witness file
    Witness {
        /// Matrix file
        matrix: PathBuf,
        /// Output witness file
        out: PathBuf,
    },
    /// Check a witness file against the category laws
    Verify {
        /// Witness file
        witness: PathBuf,
        /// Matrix file the witness must realize
        #[arg(long)]
        expected: Option<PathBuf>,
    },
    /// Print index classes, representatives, and the reduced matrix
    Reduce {
        /// Matrix file
        matrix: PathBuf,
    },
    /// Exhaustive search for a category with the given hom-set sizes
    Oracle {
        /// Matrix file
        matrix: PathBuf,
        /// Maximum number of search nodes
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Top-level branches explored concurrently
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Also run the decision procedure and report agreement
        #[arg(long)]
        cross: bool,
    },
}

const EXIT_NEGATIVE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match cli.command {
        Command::Check { matrix } => cmd_check(&matrix),
        Command::Witness { matrix, out } => cmd_witness(&matrix, &out),
        Command::Verify { witness, expected } => cmd_verify(&witness, expected.as_deref()),
        Command::Reduce { matrix } => cmd_reduce(&matrix),
        Command::Oracle {
            matrix,
            budget,
            parallel,
            cross,
        } => cmd_oracle(&matrix, budget, parallel, cross),
    }
}

fn load_matrix(path: &Path) -> Result<PosMatrix, u8> {
    let text = fs::read_to_string(path).map_err(|err| {
        eprintln!("catmat: cannot read {}: {err}", path.display());
        EXIT_USAGE
    })?;
    PosMatrix::parse(&text).map_err(|err| {
        eprintln!("catmat: {}: {err}", path.display());
        EXIT_USAGE
    })
}

fn cmd_check(matrix: &Path) -> u8 {
    let m = match load_matrix(matrix) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let verdict = decide(&m);
    println!("{verdict}");
    if verdict.is_realizable() {
        0
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_witness(matrix: &Path, out: &Path) -> u8 {
    let m = match load_matrix(matrix) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let verdict = decide(&m);
    let route = match &verdict {
        Verdict::Realizable(route) => route.clone(),
        Verdict::NotRealizable(_) => {
            println!("{verdict}");
            return EXIT_NEGATIVE;
        }
    };
    let witness = match construct_witness(&m) {
        Ok(w) => w,
        Err(err) => {
            eprintln!("catmat: cannot build witness: {err}");
            return EXIT_USAGE;
        }
    };
    let report = verify(&witness, Some(&m));
    if !report.ok {
        eprintln!("catmat: internal error: constructed witness failed verification\n{report}");
        return EXIT_USAGE;
    }
    let comments = [
        format!("route: {route}"),
        format!("construction: {}", route_summary(&route)),
    ];
    if let Err(err) = fs::write(out, write_witness(&witness, &comments)) {
        eprintln!("catmat: cannot write {}: {err}", out.display());
        return EXIT_USAGE;
    }
    println!("{verdict}");
    0
}

fn cmd_verify(witness_path: &Path, expected: Option<&Path>) -> u8 {
    let text = match fs::read_to_string(witness_path) {
        Ok(text) => text,
        Err(err) => {
            eprintln!("catmat: cannot read {}: {err}", witness_path.display());
            return EXIT_USAGE;
        }
    };
    let witness = match parse_witness(&text) {
        Ok(w) => w,
        Err(err) => {
            eprintln!("catmat: {}: {err}", witness_path.display());
            return EXIT_USAGE;
        }
    };
    let expected_matrix = match expected {
        Some(path) => match load_matrix(path) {
            Ok(m) => Some(m),
            Err(code) => return code,
        },
        None => None,
    };
    let report = verify(&witness, expected_matrix.as_ref());
    print!("{report}");
    if report.ok {
        0
    } else {
        EXIT_NEGATIVE
    }
}

fn cmd_reduce(matrix: &Path) -> u8 {
    let m = match load_matrix(matrix) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let red = m.reduce();
    let classes = red
        .classes
        .iter()
        .map(|class| {
            let members: Vec<String> = class.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ");
    let reps = red
        .representatives
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    println!("# classes: {classes}");
    println!("# representatives: {reps}");
    print!("{}", red.reduced);
    0
}

fn cmd_oracle(matrix: &Path, budget: u64, parallel: usize, cross: bool) -> u8 {
    let m = match load_matrix(matrix) {
        Ok(m) => m,
        Err(code) => return code,
    };
    if budget < 1 || parallel < 1 {
        eprintln!("catmat: --budget and --parallel must be at least 1");
        return EXIT_USAGE;
    }
    let cfg = SearchConfig {
        node_budget: budget,
        parallel_width: parallel,
        ..SearchConfig::default()
    };
    let report = cross_validate(&m, &cfg);
    println!("{}", report.outcome.label());
    if let SearchOutcome::Inconclusive { nodes_used } = report.outcome {
        eprintln!("catmat: search stopped after {nodes_used} nodes");
    }
    if cross {
        match report.agreement {
            Agreement::Agree => println!("AGREE {}", report.verdict),
            Agreement::Disagree => println!(
                "DISAGREE decide={} oracle={}",
                report.verdict,
                report.outcome.label()
            ),
            Agreement::Undecided => println!("UNDECIDED"),
        }
        return match report.agreement {
            Agreement::Agree => 0,
            Agreement::Disagree => EXIT_NEGATIVE,
            Agreement::Undecided => EXIT_INCONCLUSIVE,
        };
    }
    match report.outcome {
        SearchOutcome::Found(_) => 0,
        SearchOutcome::Exhausted => EXIT_NEGATIVE,
        SearchOutcome::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}
