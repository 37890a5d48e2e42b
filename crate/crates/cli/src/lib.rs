//! Command-line front end: arrangement files, commands and the validation
//! suite.

pub mod commands;
pub mod input;
pub mod random;
mod table;
pub mod validate;

pub use commands::{run_command, CliError, Command, CommandOutput, Flags, Format};
pub use input::{parse_input, read_input, ArrangementFile, AtomEntry, ParseError};
pub use random::{random_arrangement, Caps};
pub use validate::{validate_suite, ValidationReport};
