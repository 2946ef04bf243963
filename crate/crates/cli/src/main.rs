//! `arena`: play matches, translate strategies, extract trees and run the
//! property suites from the command line.

mod args;
mod extract;
mod play;
mod translate;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use arena_core::{Error, ParseError};
use clap::Parser;

use args::{Cli, Command};

/// A reason to stop, with the exit code it maps to.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn usage(message: impl Into<String>) -> Self {
        Exit {
            code: 2,
            message: message.into(),
        }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        Exit {
            code: 1,
            message: message.into(),
        }
    }

    /// A syntax error in `src`, drawn with a caret under the offending byte.
    pub fn parse(what: &str, src: &str, e: &ParseError) -> Self {
        Exit::usage(format!("cannot parse {what}: {}", render_in_text(src, e)))
    }

    /// Maps a library error: bad input is a usage error, the rest failures.
    pub fn from_error(what: &str, src: &str, e: Error) -> Self {
        match e {
            Error::Parse(p) => Exit::parse(what, src, &p),
            Error::UnknownSuite(_) | Error::Config(_) => Exit::usage(e.to_string()),
            other => Exit::failure(other.to_string()),
        }
    }
}

/// Renders `e` against the line of `text` holding its offset.
pub fn render_in_text(text: &str, e: &ParseError) -> String {
    let start = text[..e.pos.min(text.len())].rfind('\n').map_or(0, |i| i + 1);
    let end = text[start..].find('\n').map_or(text.len(), |i| start + i);
    ParseError::new(e.pos - start, e.message.clone()).render(&text[start..end])
}

pub fn read_file(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit::usage(format!("cannot read {}: {e}", path.display())))
}

/// Writes `text` to `out`, or to standard output without one.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Exit> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Exit::failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(argv: Vec<String>) -> Result<(), Exit> {
    let argv = args::expand_config(argv)?;
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return Err(args::clap_exit(&argv, e)),
    };
    match cli.command {
        Command::Play(a) => play::run(a),
        Command::Translate(a) => translate::run(a),
        Command::Extract(a) => extract::run(a),
        Command::Verify(a) => verify::run(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit { code, message }) => {
            if !message.is_empty() {
                eprintln!("arena: {message}");
            }
            ExitCode::from(code)
        }
    }
}
