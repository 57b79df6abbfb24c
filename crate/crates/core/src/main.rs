use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use wallform::problem::{Problem, ProblemError};
use wallform::report;

#[derive(Parser)]
#[command(name = "wallform", version, about = "Wall forms, unipotent isometries and Clifford involutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as JSON instead of key: value lines
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Wall form, classification, residual and fixed dimensions, spinor norms
    Analyze {
        /// Problem file, or - for stdin
        #[arg(long)]
        space: PathBuf,
    },
    /// Orthogonal decomposition of a unipotent isometry of index 2
    Decompose {
        #[arg(long)]
        space: PathBuf,
    },
    /// Invariants of the Clifford algebra with the induced involution (characteristic 2)
    Clifford {
        #[arg(long)]
        space: PathBuf,
    },
    /// Check one result over every element of the orthogonal group
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        space: PathBuf,
    },
    /// Order of the orthogonal group and its number of unipotent elements of index 2
    Enumerate {
        #[arg(long)]
        space: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<Problem, ProblemError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| ProblemError::Parse(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| ProblemError::Parse(format!("{}: {e}", path.display())))?
    };
    Problem::from_json(&text)
}

fn print(value: &Value, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
        return;
    }
    if let Value::Object(map) = value {
        for (k, v) in map {
            if k != "problem" {
                println!("{k}: {v}");
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, bool), ProblemError> {
    match &cli.command {
        Command::Analyze { space } => Ok((report::analyze(&load(space)?)?, true)),
        Command::Decompose { space } => report::decomposition(&load(space)?),
        Command::Clifford { space } => Ok((report::clifford(&load(space)?)?, true)),
        Command::Verify { theorem, space } => report::verify(&load(space)?, theorem),
        Command::Enumerate { space } => Ok((report::enumerate(&load(space)?)?, true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, ok)) => {
            print(&value, cli.json);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
