//! Command-line front end: reads module files, reduces them, and prints
//! barcodes, bases, stabiliser dimensions and ladder matchings.
//!
//! Exit codes: 0 success, 2 unreadable or invalid input, 3 a result failed
//! its own certificate, 4 the ladder has nested (or linked) bars.

pub mod commands;
pub mod format;

use barcode_core::oracle::random::ModuleBounds;
use clap::{Parser, Subcommand};

use commands::{CliError, GenOptions, Input, ReduceFlags};
use format::Field;

#[derive(Debug, Parser)]
#[command(name = "barcode", version, about = "Barcode bases of persistence and zigzag modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Put a persistence module in barcode form.
    Reduce {
        file: String,
        /// Append the basis change as `basis i n n` blocks.
        #[arg(long)]
        emit_basis: bool,
        /// Append every elementary basis change as a comment line.
        #[arg(long)]
        emit_trace: bool,
    },
    /// Print `start end multiplicity` for each bar.
    Barcode { file: String },
    /// Dimension of the group of basis changes fixing the barcode form.
    StabDim { file: String },
    /// Decompose a map of persistence modules into matched bars.
    Ladder { source: String, target: String, map: String },
    /// Print a random module file.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `Q`, or `F<p>` for a prime `p`.
        #[arg(long, default_value = "F2")]
        field: String,
        #[arg(long, default_value_t = 4)]
        max_length: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Draw a random orientation for each arrow.
        #[arg(long)]
        zigzag: bool,
    },
    /// `reduce` for any orientation.
    ZigzagReduce {
        file: String,
        #[arg(long)]
        emit_basis: bool,
        #[arg(long)]
        emit_trace: bool,
    },
    /// `barcode` for any orientation, in the type's order.
    ZigzagBarcode { file: String },
    ZigzagStabDim { file: String },
    ZigzagLadder { source: String, target: String, map: String },
}

/// Runs one command and returns what it prints.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Reduce { file, emit_basis, emit_trace } => {
            commands::reduce(&Input::read(file)?, ReduceFlags { emit_basis: *emit_basis, emit_trace: *emit_trace })
        }
        Command::ZigzagReduce { file, emit_basis, emit_trace } => commands::zigzag_reduce(
            &Input::read(file)?,
            ReduceFlags { emit_basis: *emit_basis, emit_trace: *emit_trace },
        ),
        Command::Barcode { file } => commands::barcode(&Input::read(file)?),
        Command::ZigzagBarcode { file } => commands::zigzag_barcode(&Input::read(file)?),
        Command::StabDim { file } => commands::stab_dim(&Input::read(file)?),
        Command::ZigzagStabDim { file } => commands::zigzag_stab_dim(&Input::read(file)?),
        Command::Ladder { source, target, map } => {
            commands::ladder(&Input::read(source)?, &Input::read(target)?, &Input::read(map)?)
        }
        Command::ZigzagLadder { source, target, map } => {
            commands::zigzag_ladder(&Input::read(source)?, &Input::read(target)?, &Input::read(map)?)
        }
        Command::Gen { seed, field, max_length, max_dim, zigzag } => {
            let field = parse_field(field)?;
            let bounds = ModuleBounds { max_length: *max_length, max_dim: *max_dim };
            Ok(commands::generate(GenOptions { seed: *seed, field, bounds, zigzag: *zigzag }))
        }
    }
}

fn parse_field(text: &str) -> Result<Field, CliError> {
    if text == "Q" {
        return Ok(Field::Q);
    }
    let p = text
        .strip_prefix('F')
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| CliError::Input(format!("field {text:?}: expected Q or F<p>")))?;
    barcode_core::ModP::new(0, p).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Field::Fp(p))
}
