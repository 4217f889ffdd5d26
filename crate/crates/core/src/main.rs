use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stabmat::polytope::{check_polytope_membership, median, parse_vector_file};
use stabmat::poset::{build_digraph, enumerate_stable_matchings};
use stabmat::rotation::rotation_set;
use stabmat::stability::deferred_acceptance;
use stabmat::weight::{egalitarian_weights, min_weight_stable_matching, parse_weight_file};
use stabmat::{
    format_weight, lattice, parse_matching_list, Error, Matching, PreferenceInstance, Side, Weight,
};

const DEFAULT_MAX: usize = 1_000_000;

#[derive(Parser)]
#[command(name = "stabmat", about = "Stable matching toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum CliSide {
    I,
    J,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance file.
    Validate { file: PathBuf },
    /// Compute the side-optimal stable matching by deferred acceptance.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        side: CliSide,
    },
    /// List all stable matchings, one per line.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX)]
        max: usize,
    },
    /// Count the stable matchings.
    Count {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX)]
        max: usize,
    },
    /// List the rotations of the instance.
    Rotations { file: PathBuf },
    /// Export the rotation precedence digraph.
    Poset {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Find a minimum-weight stable matching.
    Minweight {
        file: PathBuf,
        #[arg(long, conflicts_with = "weights")]
        egalitarian: bool,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Median stable matching of an odd-sized family.
    Median {
        file: PathBuf,
        #[arg(long)]
        matchings: PathBuf,
    },
    /// Lattice meet of two stable matchings.
    Meet {
        file: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Lattice join of two stable matchings.
    Join {
        file: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Check a fractional vector against the polytope inequalities.
    Verify {
        file: PathBuf,
        #[arg(long)]
        x: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(0),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::CapExceeded(_) => 2,
                Error::Io(_) => 3,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn load(path: &PathBuf) -> Result<PreferenceInstance, Error> {
    PreferenceInstance::parse(&std::fs::read_to_string(path)?)
}

fn load_one_matching(inst: &PreferenceInstance, path: &PathBuf) -> Result<Matching, Error> {
    let list = parse_matching_list(inst, &std::fs::read_to_string(path)?)?;
    match <[Matching; 1]>::try_from(list) {
        Ok([m]) => Ok(m),
        Err(list) => Err(Error::InvalidInstance(format!(
            "expected exactly one matching in the file, found {}",
            list.len()
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate { file } => {
            let inst = load(&file)?;
            println!(
                "valid: {} vertices, {} edges",
                inst.vertex_count(),
                inst.edge_count()
            );
        }
        Command::Solve { file, side } => {
            let inst = load(&file)?;
            let side = match side {
                CliSide::I => Side::I,
                CliSide::J => Side::J,
            };
            println!("{}", deferred_acceptance(&inst, side).format(&inst));
        }
        Command::Enumerate { file, max } => {
            let inst = load(&file)?;
            for m in enumerate_stable_matchings(&inst, Some(max))? {
                println!("{}", m.format(&inst));
            }
        }
        Command::Count { file, max } => {
            let inst = load(&file)?;
            println!("{}", stabmat::poset::count_stable_matchings(&inst, Some(max))?);
        }
        Command::Rotations { file } => {
            let inst = load(&file)?;
            for (k, rot) in rotation_set(&inst).iter().enumerate() {
                println!("R{k}: {}", rot.format(&inst));
            }
        }
        Command::Poset { file, dot: _ } => {
            let inst = load(&file)?;
            print!("{}", build_digraph(&inst).to_dot(&inst));
        }
        Command::Minweight {
            file,
            egalitarian,
            weights,
        } => {
            let inst = load(&file)?;
            let c = match (egalitarian, weights) {
                (true, None) => egalitarian_weights(&inst),
                (false, Some(path)) => {
                    let (c, warnings) =
                        parse_weight_file(&inst, &std::fs::read_to_string(&path)?)?;
                    for warning in warnings {
                        eprintln!("warning: {warning}");
                    }
                    c
                }
                _ => {
                    return Err(Error::InvalidInstance(
                        "pass exactly one of --egalitarian or --weights".into(),
                    ))
                }
            };
            let (best, cost) = min_weight_stable_matching(&inst, &c)?;
            println!("{}", best.format(&inst));
            println!("cost {}", format_weight(&cost));
        }
        Command::Median { file, matchings } => {
            let inst = load(&file)?;
            let family = parse_matching_list(&inst, &std::fs::read_to_string(&matchings)?)?;
            println!("{}", median(&inst, &family)?.format(&inst));
        }
        Command::Meet { file, a, b } => {
            let inst = load(&file)?;
            let ma = load_one_matching(&inst, &a)?;
            let mb = load_one_matching(&inst, &b)?;
            println!("{}", lattice::meet(&inst, &ma, &mb)?.format(&inst));
        }
        Command::Join { file, a, b } => {
            let inst = load(&file)?;
            let ma = load_one_matching(&inst, &a)?;
            let mb = load_one_matching(&inst, &b)?;
            println!("{}", lattice::join(&inst, &ma, &mb)?.format(&inst));
        }
        Command::Verify { file, x } => {
            let inst = load(&file)?;
            let vector = parse_vector_file(&inst, &std::fs::read_to_string(&x)?)?;
            let report = check_polytope_membership(&inst, &vector, &Weight::from_integer(0.into()));
            for (name, family) in [
                ("nonnegativity", &report.nonnegativity),
                ("degree", &report.degree),
                ("comparability", &report.comparability),
            ] {
                if family.pass {
                    println!("{name} pass");
                } else {
                    println!(
                        "{name} fail worst {} at {}",
                        format_weight(&family.worst_violation),
                        family.witness.as_deref().unwrap_or("?"),
                    );
                }
            }
            println!(
                "membership {}",
                if report.passes() { "pass" } else { "fail" }
            );
        }
    }
    Ok(())
}
