//! Session-file front end for `regpow-core`.

pub mod commands;
pub mod parse;
pub mod report;

pub use commands::{execute, run, Cli, Command, GlobalOpts};
pub use parse::{parse_polynomial, parse_session, ParseError, Session};
pub use report::{CliError, Exit, Outcome, Report};
