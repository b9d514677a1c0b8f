use std::path::PathBuf;
use std::process::ExitCode;

use bergdyn::cli::{run_file, validate_file};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bergdyn", about = "Taylor shift experiments on Bergman spaces")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write <output>.csv and <output>.summary.txt.
    Run { config: PathBuf },
    /// Parse and validate an experiment file without running it.
    Validate { config: PathBuf },
    /// Print the version.
    Version,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Run { config } => run_file(&config).map(|prefix| format!("wrote {}.csv", prefix.display())),
        Command::Validate { config } => validate_file(&config),
        Command::Version => Ok(format!("bergdyn {}", env!("CARGO_PKG_VERSION"))),
    };
    match result {
        Ok(msg) => {
            println!("{}", msg.trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
