//! Problem files, certificates and the command line.

mod cert;
mod cli;
mod parse;

pub use cert::{parse_certificate, serialize_certificate};
pub use cli::{exit_code, run_command};
pub use parse::{
    parse_presentation, parse_problem, parse_problem_with, ParseOptions, ProblemFile,
    TransformBlock,
};
