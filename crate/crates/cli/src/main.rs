mod cache;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hallcore::mhall::Mode;

#[derive(Parser, Debug)]
#[command(name = "hallcalc", version, about = "Exact Hall algebra computations for quiver representations over F_q")]
pub struct Cli {
    /// JSON configuration: quiver, q, caps and resource guards.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for sampled verification suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum rewriting steps per normalization.
    #[arg(long, global = true)]
    pub guard_steps: Option<u64>,
    /// Neither read nor write the iso-class cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Mh,
    #[value(name = "mh_tw")]
    MhTw,
    Dh,
    #[value(name = "dh_tw")]
    DhTw,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Mh => Mode::Mh,
            ModeArg::MhTw => Mode::MhTw,
            ModeArg::Dh => Mode::Dh,
            ModeArg::DhTw => Mode::DhTw,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Green,
    Hall,
    ExtSum,
    Gamma,
    Euler,
    Consistency,
    Assoc,
    Confluence,
    Embed,
    Reduction,
    Algebra,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the iso-class table with aliases.
    Reps,
    /// Hall number g^C_{AB}.
    Hall { a: String, b: String, c: String },
    /// Structure constant gamma^{MN}_{AB}.
    Gamma { a: String, b: String, m: String, n: String },
    /// Euler form matrix, or hom, ext and Euler values for two classes.
    Euler { a: Option<String>, b: Option<String> },
    /// Multiply the operands in a JSON file from left to right.
    Mult {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// JSON file (`-` for stdin): an array of elements or {"operands": [...]}.
        file: PathBuf,
    },
    /// Reduce a bounded complex to a scalar times a basis word.
    Reduce {
        file: PathBuf,
        /// Use the twisted basis.
        #[arg(long)]
        twisted: bool,
    },
    /// Apply the embedding of DH_tw into MH_tw.
    Iota { file: PathBuf },
    /// Split each MH_tw basis word into a derived word and a torus part.
    Decompose { file: PathBuf },
    /// Check Green's formula exhaustively.
    Green {
        #[arg(long)]
        total_dim: Option<usize>,
    },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        total_dim: Option<usize>,
        /// Restrict assoc and confluence to one mode.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Largest per-vertex dimension of sampled generators.
        #[arg(long, default_value_t = 2)]
        gen_cap: usize,
        #[arg(long, default_value_t = -2, allow_negative_numbers = true)]
        degree_min: i64,
        #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
        degree_max: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(commands::Outcome { json, passed }) => {
            println!("{}", serde_json::to_string_pretty(&json).expect("JSON output"));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
