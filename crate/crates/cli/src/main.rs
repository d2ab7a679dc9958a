//! `shiftconj`: audit runner and codec tools.
//!
//! Exit status is 0 when every requested check passes, 1 when any check
//! fails, and 2 on usage or input errors.

mod commands;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "shiftconj", version, about = "Finite audit of block-code involutions and the 22-bit substitution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification audit and print one report line per check.
    Verify(verify::VerifyArgs),
    /// Encode symbol words (one per line) into binary lines.
    Encode(InputArgs),
    /// Decode binary lines into `phase [word] lead trail` lines.
    Decode {
        #[command(flatten)]
        input: InputArgs,
        /// Only report this phase.
        #[arg(long)]
        phase: Option<usize>,
    },
    /// Print the admissible words of a given length, sorted.
    Language {
        #[arg(long)]
        len: usize,
        /// File of forbidden words (default: none).
        #[arg(long)]
        forbidden: Option<PathBuf>,
    },
    /// Apply a group element to a forbidden set and print the image set.
    Act {
        /// Group element, e.g. "1 2 | 4".
        #[arg(long)]
        gamma: String,
        /// File of forbidden words (default: standard input).
        #[arg(long)]
        forbidden: Option<PathBuf>,
    },
    /// Print a verified moved word for a non-identity group element.
    Witness {
        #[arg(long)]
        gamma: String,
        /// Plain letters of the acting triple to put in front.
        #[arg(long, default_value = "")]
        prefix: String,
    },
    /// Compute the synchronization window and its certificate.
    SyncWindow(verify::OutputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input file (default: standard input).
    file: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify::run(&args),
        Command::Encode(input) => commands::encode(input.file.as_deref()),
        Command::Decode { input, phase } => commands::decode(input.file.as_deref(), phase),
        Command::Language { len, forbidden } => commands::language(len, forbidden.as_deref()),
        Command::Act { gamma, forbidden } => commands::act(&gamma, forbidden.as_deref()),
        Command::Witness { gamma, prefix } => commands::witness(&gamma, &prefix),
        Command::SyncWindow(out) => commands::sync_window(&out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("shiftconj: {e}");
            ExitCode::from(2)
        }
    }
}
