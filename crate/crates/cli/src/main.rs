mod commands;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use obstruct_core::Error;

use commands::{read, Io, Settings};
use report::{Outcome, Report};

#[derive(Parser, Debug)]
#[command(name = "obstruct", version, about = "Ext groups, obstruction classes and graph algebra invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Largest lag tried in shift-equivalence searches.
    #[arg(long, global = true)]
    max_lag: Option<u32>,

    /// Largest absolute entry of candidate witness matrices.
    #[arg(long, global = true)]
    max_entry: Option<i64>,

    /// Maximum number of candidates examined by a search.
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Seed for every randomized choice; 0 uses canonical choices.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form U·A·V = D of an integer matrix.
    Snf { matrix: PathBuf },
    /// Hom and Ext groups.
    Ext {
        #[command(subcommand)]
        kind: ExtKind,
    },
    /// Gauge-equivariant K-theory module of a Cuntz-Krieger matrix.
    Ck { matrix: PathBuf },
    /// Shift equivalence of two non-negative matrices.
    Shifteq { a: PathBuf, b: PathBuf },
    /// Invariants of graph algebras.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Number of liftings of a graded module, |Ext2(M, M[-1])|.
    CountLiftings { module: PathBuf },
}

#[derive(Subcommand, Debug)]
enum ExtKind {
    /// Over the integers; inputs are relation matrices.
    Z {
        #[arg(long = "group", num_args = 1, required = true)]
        groups: Vec<PathBuf>,
    },
    /// Over the Laurent ring, degree by degree of the grading.
    R {
        #[arg(long = "module", num_args = 1, required = true)]
        modules: Vec<PathBuf>,
    },
    /// Over the incidence algebra of a finite poset.
    Poset {
        /// Poset the modules must live over.
        #[arg(long)]
        poset: Option<PathBuf>,
        #[arg(long = "module", num_args = 1, required = true)]
        modules: Vec<PathBuf>,
        /// Highest degree reported.
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphAction {
    /// Primitive ideal space, K-theory modules, obstruction class and unit.
    Invariant { graph: PathBuf },
    /// Isomorphism of invariants.
    Compare { a: PathBuf, b: PathBuf },
    /// Isomorphism of invariants preserving the unit class.
    UnitCompare { a: PathBuf, b: PathBuf },
}

enum Failure {
    Input(String),
    Precondition(String),
    Internal(String),
}

impl From<Io> for Failure {
    fn from(e: Io) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Admissibility(_) => Failure::Precondition(e.to_string()),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn two<'a>(paths: &'a [PathBuf], what: &str) -> Result<[&'a Path; 2], Failure> {
    match paths {
        [a, b] => Ok([a.as_path(), b.as_path()]),
        _ => Err(Failure::Input(format!("expected exactly two --{what} arguments, got {}", paths.len()))),
    }
}

fn read_all(paths: &[&Path]) -> Result<Vec<String>, Failure> {
    paths.iter().map(|p| read(p).map_err(Failure::from)).collect()
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let s = Settings {
        max_lag: cli.max_lag,
        max_entry: cli.max_entry,
        budget: cli.budget,
        seed: cli.seed,
    };
    let report = match &cli.command {
        Command::Snf { matrix } => commands::snf_cmd(matrix, &read(matrix)?)?,
        Command::Ck { matrix } => commands::ck_cmd(matrix, &read(matrix)?)?,
        Command::CountLiftings { module } => commands::count_liftings_cmd(module, &read(module)?)?,
        Command::Shifteq { a, b } => {
            let paths = [a.as_path(), b.as_path()];
            commands::shifteq_cmd(&paths, &read_all(&paths)?, &s)?
        }
        Command::Ext { kind } => match kind {
            ExtKind::Z { groups } => {
                let paths = two(groups, "group")?;
                commands::ext_z_cmd(&paths, &read_all(&paths)?)?
            }
            ExtKind::R { modules } => {
                let paths = two(modules, "module")?;
                commands::ext_r_cmd(&paths, &read_all(&paths)?)?
            }
            ExtKind::Poset { poset, modules, degree } => {
                let paths = two(modules, "module")?;
                let texts = read_all(&paths)?;
                let poset_text = match poset {
                    Some(p) => Some((p.as_path(), read(p)?)),
                    None => None,
                };
                let poset = poset_text.as_ref().map(|(p, t)| (*p, t.as_str()));
                commands::ext_poset_cmd(poset, &paths, &texts, *degree, &s)?
            }
        },
        Command::Graph { action } => match action {
            GraphAction::Invariant { graph } => commands::graph_invariant_cmd(graph, &read(graph)?, &s)?,
            GraphAction::Compare { a, b } | GraphAction::UnitCompare { a, b } => {
                let paths = [a.as_path(), b.as_path()];
                let unit = matches!(action, GraphAction::UnitCompare { .. });
                commands::graph_compare_cmd(&paths, &read_all(&paths)?, unit, &s)?
            }
        },
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            match report.outcome {
                Outcome::Done => ExitCode::SUCCESS,
                Outcome::Inconclusive => ExitCode::from(4),
            }
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Input(m) => (2, m),
                Failure::Precondition(m) => (3, m),
                Failure::Internal(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
