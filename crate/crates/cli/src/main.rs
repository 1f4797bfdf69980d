//! `kalmanlab`: load algebra documents, run the pair construction and the
//! checks on them, and search for counterexamples.
//!
//! Exit status: 0 when the command succeeds or the property holds, 1 when the
//! property fails (a witness is printed), 2 on input or usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kalman_core::congr::{self, Congruence};
use kalman_core::document::{format_partition, parse_algebra, parse_partition, serialize_algebra};
use kalman_core::kalman::{self, KalmanLevel};
use kalman_core::search::{self, EnumerationSpec, SearchStatus};
use kalman_core::varieties::{self, VarietyLabel};
use kalman_core::{Error, FiniteAlgebra};

#[derive(Parser)]
#[command(name = "kalmanlab", version, about = "The pair construction K(H) on finite algebras")]
struct Cli {
    /// Write the produced document here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Enumerate one algebra per isomorphism class.
    #[arg(long, global = true)]
    modulo_iso: bool,
    /// Also print the first violation of every failing check.
    #[arg(long, global = true)]
    witness: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document describes a well-formed structure.
    Validate { file: PathBuf },
    /// Print every class whose axioms the structure satisfies.
    Classify { file: PathBuf },
    /// Build the pair algebra K(H).
    Kalman {
        file: PathBuf,
        #[arg(long = "as", value_name = "LEVEL")]
        level: KalmanLevel,
    },
    /// Build the center algebra C(T) of the elements above the center.
    Center { file: PathBuf },
    /// Check the (CK) condition.
    Ck { file: PathBuf },
    /// Check that α_H and β_K(H) are isomorphisms.
    Roundtrip {
        file: PathBuf,
        #[arg(long = "as", value_name = "LEVEL")]
        level: KalmanLevel,
    },
    /// List the congruences with respect to every stored operation.
    Congruences { file: PathBuf },
    /// List the well-behaved congruences.
    WbCongruences { file: PathBuf },
    /// List the filters.
    Filters {
        file: PathBuf,
        /// Only the congruent filters.
        #[arg(long)]
        congruent: bool,
    },
    /// Quotient by a well-behaved congruence given as blocks, e.g. "0 a | b 1".
    Quotient {
        file: PathBuf,
        #[arg(long, value_name = "SPEC")]
        theta: String,
    },
    /// Run a named property over every member of a class up to a size.
    Search {
        #[arg(long, value_name = "LABEL")]
        class: VarietyLabel,
        #[arg(long, value_name = "N")]
        max_size: usize,
        #[arg(long, value_name = "NAME")]
        predicate: String,
        #[arg(long, value_name = "K")]
        jobs: Option<usize>,
    },
}

enum Verdict {
    Holds,
    Fails,
}

fn load(path: &Path) -> Result<FiniteAlgebra, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra(&text)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn list_congruences(alg: &FiniteAlgebra, all: &[Congruence]) {
    println!("{} congruences", all.len());
    for theta in all {
        println!("{}", format_partition(alg, theta));
    }
}

fn run(cli: &Cli) -> Result<Verdict, Error> {
    match &cli.command {
        Command::Validate { file } => {
            let alg = load(file)?;
            println!("ok: {} elements", alg.size());
        }
        Command::Classify { file } => {
            let alg = load(file)?;
            for label in VarietyLabel::ALL {
                match varieties::check(label, &alg) {
                    Ok(r) if r.ok => println!("{label}"),
                    Ok(r) if cli.witness => println!("not {label}: {}", r.describe(&alg)),
                    Err(Error::Precondition(m)) if cli.witness => println!("not {label}: {m}"),
                    Ok(_) | Err(Error::Precondition(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Command::Kalman { file, level } => {
            let k = kalman::kalman(&load(file)?, *level)?;
            emit(cli, &serialize_algebra(&k.algebra))?;
        }
        Command::Center { file } => {
            let c = kalman::center_algebra(&load(file)?)?;
            emit(cli, &serialize_algebra(&c.algebra))?;
        }
        Command::Ck { file } => {
            let t = load(file)?;
            let report = kalman::check_ck(&t)?;
            if let Some((x, y)) = report.witness {
                println!("(CK) fails at x={}, y={}", t.name(x), t.name(y));
                emit(cli, &serialize_algebra(&t))?;
                return Ok(Verdict::Fails);
            }
            println!("(CK) holds");
        }
        Command::Roundtrip { file, level } => {
            let h = load(file)?;
            let alpha = kalman::alpha_map(&h, *level)?;
            let k = kalman::kalman(&h, *level)?;
            let beta = kalman::beta_map(&k.algebra, *level)?;
            let (a, b) = (alpha.report(), beta.report());
            println!("alpha: {}", if a.is_isomorphism() { "isomorphism" } else { "not an isomorphism" });
            println!("beta: {}", if b.is_isomorphism() { "isomorphism" } else { "not an isomorphism" });
            if !(a.is_isomorphism() && b.is_isomorphism()) {
                if cli.witness {
                    println!("alpha report: {a:?}");
                    println!("beta report: {b:?}");
                }
                return Ok(Verdict::Fails);
            }
        }
        Command::Congruences { file } => {
            let alg = load(file)?;
            list_congruences(&alg, &congr::algebra_congruences(&alg)?);
        }
        Command::WbCongruences { file } => {
            let alg = load(file)?;
            list_congruences(&alg, &congr::enumerate_wb_congruences(&alg)?);
        }
        Command::Filters { file, congruent } => {
            let alg = load(file)?;
            let filters = if *congruent {
                congr::enumerate_congruent_filters(&alg)?
            } else {
                congr::enumerate_filters(&alg)?
            };
            println!("{} filters", filters.len());
            for f in filters {
                let names: Vec<String> = f.elements().iter().map(|&x| alg.name(x)).collect();
                println!("{{{}}}", names.join(", "));
            }
        }
        Command::Quotient { file, theta } => {
            let alg = load(file)?;
            let theta = parse_partition(&alg, theta)?;
            emit(cli, &serialize_algebra(&congr::quotient_wb(&alg, &theta)?))?;
        }
        Command::Search {
            class,
            max_size,
            predicate,
            jobs,
        } => {
            let spec = EnumerationSpec {
                class: *class,
                max_size: *max_size,
                modulo_iso: cli.modulo_iso,
                predicate: predicate.clone(),
                jobs: *jobs,
            };
            let outcome = search::find_counterexample(&spec)?;
            let sizes: Vec<String> = outcome
                .examined
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{}:{c}", i + 1))
                .collect();
            println!("{}; examined {} ({})", outcome.status, outcome.total_examined(), sizes.join(" "));
            if outcome.status == SearchStatus::CounterexampleFound {
                let w = outcome.witness.expect("a counterexample carries a witness");
                println!("{}", w.detail);
                emit(cli, &serialize_algebra(&w.algebra))?;
                return Ok(Verdict::Fails);
            }
        }
    }
    Ok(Verdict::Holds)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e @ Error::TheoremViolation { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Error::Consistency(m)) if matches!(cli.command, Command::Validate { .. }) => {
            println!("invalid: {m}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
