//! Library half of the `psk` command-line tool: file grammar, rendering and
//! command dispatch. The binary only parses arguments and sets the exit code.

pub mod commands;
pub mod grammar;
pub mod render;
pub mod tables;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use psk::PskError;

#[derive(Parser, Debug)]
#[command(name = "psk", version, about = "Kähler Lie algebras, projective special Kähler checks and conic lifts")]
pub struct Cli {
    /// Bind a parameter, `name=expression`; overrides the file's [params].
    #[arg(long = "param", value_name = "NAME=VALUE", global = true)]
    pub params: Vec<String>,
    /// Threshold below which a residual counts as zero.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Comma-separated delta samples for classify4.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2", global = true)]
    pub grid: Vec<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Jacobi identity and Kähler conditions.
    Check { file: PathBuf },
    /// Levi-Civita connection, curvature, Ricci tensor and scalar curvature.
    Curvature { file: PathBuf },
    /// Both projective special Kähler conditions for the file's deviance.
    Verify { file: PathBuf },
    /// Classification of the four-dimensional families.
    Classify4,
    /// Conic lift and its exact residuals.
    Lift { file: PathBuf },
    /// Reference documents for every built-in family.
    Tables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Validation = 1,
    Assertion = 2,
    Usage = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub status: Status,
    pub message: String,
}

impl Failure {
    pub fn new(status: Status, message: impl Into<String>) -> Self {
        Failure { status, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<PskError> for Failure {
    fn from(e: PskError) -> Self {
        let status = match e {
            PskError::Precondition(_) | PskError::NotExact(_) | PskError::NotKahlerCurvature(_) | PskError::FrameNotAdapted => {
                Status::Validation
            }
            _ => Status::Usage,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<grammar::ParseError> for Failure {
    fn from(e: grammar::ParseError) -> Self {
        Failure::new(Status::Usage, e.to_string())
    }
}

/// What a command printed and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub status: Status,
}

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    commands::execute(cli)
}
