//! `veronese`: classify planes of PG(5,q) meeting the Veronese surface, run
//! orbit censuses and verification checks.

mod checks;
mod commands;

use std::num::NonZeroUsize;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use veronese_core::field::parse_modulus;
use veronese_core::Field;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("out of scope: no rank-1 point")]
    OutOfScope,
    #[error("failing checks: {}", .0.join(", "))]
    ChecksFailed(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::OutOfScope => 2,
            CliError::ChecksFailed(_) => 3,
        }
    }
}

impl From<veronese_core::ClassifyError> for CliError {
    fn from(e: veronese_core::ClassifyError) -> Self {
        match e {
            veronese_core::ClassifyError::NoVeronesePoint => CliError::OutOfScope,
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<veronese_core::FieldError> for CliError {
    fn from(e: veronese_core::FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    Pgl3,
    Sym7,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field order, a power of two.
    #[arg(long, default_value_t = 4)]
    q: u32,
    /// Irreducible modulus as a bit string, most significant bit first.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl FieldArgs {
    fn field(&self) -> Result<Field, CliError> {
        if !self.q.is_power_of_two() || self.q < 2 || self.q > 1 << 16 {
            return Err(CliError::Usage(format!("q = {} is not a power of two in 2..=65536", self.q)));
        }
        let h = self.q.trailing_zeros();
        Ok(match &self.modulus {
            Some(m) => Field::with_modulus(h, parse_modulus(m)?)?,
            None => Field::new(h)?,
        })
    }
}

#[derive(Parser, Debug)]
#[command(name = "veronese", version, about = "Planes of PG(5,q), q even, meeting the Veronese surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one plane given by 18 hex field elements (3 rows of 6) or
    /// as a symmetric 3x3 matrix of linear forms in x, y, z.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        /// The plane; tokens are joined with spaces.
        #[arg(required = true, num_args = 1..)]
        plane: Vec<String>,
    },
    /// Count the planes of every orbit and write a JSON census.
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Group::Pgl3)]
        group: Group,
        /// Number of work shards; by default one per point of the surface.
        #[arg(long)]
        shards: Option<NonZeroUsize>,
        /// Run the full census where the default is sampled.
        #[arg(long)]
        slow: bool,
    },
    /// Run named verification checks.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// table1, sigma14-bijection, sigma12-bijection, sigma13-bijection,
        /// sigma6-hyperplanes, nonexistence, orbit-stabilizer,
        /// inflexion-trichotomy, solvers or all.
        #[arg(long = "check", required = true)]
        checks: Vec<String>,
        /// Allow checks that need a full census above q = 4.
        #[arg(long)]
        slow: bool,
    },
    /// Print the representative of an orbit.
    Representative {
        #[command(flatten)]
        field: FieldArgs,
        /// Orbit label such as S10, Σ10 or sigma10.
        #[arg(long)]
        label: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { field, plane } => commands::classify(&field, &plane.join(" ")),
        Command::Census { field, group, shards, slow } => commands::census(&field, group, shards.map_or(0, NonZeroUsize::get), slow),
        Command::Verify { field, checks, slow } => checks::verify(&field, &checks, slow),
        Command::Representative { field, label } => commands::representative(&field, &label),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
