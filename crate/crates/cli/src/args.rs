//! Flag definitions, `--config` files and usage-error rendering.

use std::path::PathBuf;

use arena_core::{CostIdeal, GameKind, ParseError, Role};
use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::Exit;

#[derive(Debug, Parser)]
#[command(name = "arena", version, about = "Finite-horizon referee for games on the naturals")]
#[command(args_override_self = true)]
pub struct Cli {
    /// File of `key=value` lines, one per flag; flags given on the command
    /// line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play a match and write its transcript.
    Play(PlayArgs),
    /// Turn a strategy for one game into a strategy for another.
    Translate(TranslateArgs),
    /// Read a tree or a certificate off a strategy.
    Extract(ExtractArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    I,
    Ii,
}

impl Side {
    pub fn role(self) -> Role {
        match self {
            Side::I => Role::I,
            Side::Ii => Role::II,
        }
    }
}

fn game_kind(s: &str) -> Result<GameKind, String> {
    s.parse().map_err(|e: arena_core::Error| e.to_string())
}

fn cost_ideal(s: &str) -> Result<CostIdeal, String> {
    s.parse().map_err(|e: arena_core::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long, value_parser = game_kind)]
    pub game: GameKind,
    #[arg(long, value_name = "SPEC")]
    pub strategy_i: Option<String>,
    #[arg(long, value_name = "SPEC")]
    pub strategy_ii: Option<String>,
    #[arg(long)]
    pub horizon: usize,
    /// `real k->expr` or `setgen ... then step d` lines.
    #[arg(long, value_name = "PATH")]
    pub witness_file: Option<PathBuf>,
    /// Read this side's moves from standard input.
    #[arg(long, value_enum)]
    pub interactive: Option<Side>,
    #[arg(long, env = "ARENA_SEED", default_value_t = 0)]
    pub seed: u64,
    /// The ideal I of an ideal game.
    #[arg(long, value_parser = cost_ideal)]
    pub ideal: Option<CostIdeal>,
    /// The ideal J of game-g and game-b.
    #[arg(long, value_parser = cost_ideal)]
    pub ideal_j: Option<CostIdeal>,
    /// Cover-cost budget for Player II's selection in an ideal game.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Budget for Player I's moves in the games that judge them too.
    #[arg(long)]
    pub budget_all: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    /// The strategy's game, or `tree` for a tree source.
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long, value_name = "SPEC")]
    pub strategy: String,
    /// The input's side, when its spec fits both.
    #[arg(long, value_enum)]
    pub role: Option<Side>,
    /// Rounds the translated strategy is tried for before it is written.
    #[arg(long, default_value_t = 4)]
    pub probe: usize,
    #[arg(long, env = "ARENA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Hs,
    Perfect,
    Tail,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long, value_enum)]
    pub what: What,
    /// A Player II strategy.
    #[arg(long, value_name = "SPEC")]
    pub strategy: String,
    /// The game it plays; tallness-star for hs, bounding-star otherwise.
    #[arg(long, value_parser = game_kind)]
    pub game: Option<GameKind>,
    /// Search depth for hs and tail; levels of the subtree for perfect.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub width: Option<u64>,
    /// Levels of the H_s tree explored.
    #[arg(long, default_value_t = 2)]
    pub levels: usize,
    /// Successors followed per H_s node.
    #[arg(long, default_value_t = 2)]
    pub fanout: usize,
    #[arg(long, env = "ARENA_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub suite: String,
    #[arg(long, env = "ARENA_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub width: Option<u64>,
    /// Where to write the report; it is printed either way.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Splices the entries of a `--config` file into `argv` just after the
/// subcommand, so that flags given explicitly still win.
pub fn expand_config(argv: Vec<String>) -> Result<Vec<String>, Exit> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| Exit::usage("--config needs a path"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let Some(sub_at) = rest.iter().skip(1).position(|a| !a.starts_with('-')).map(|i| i + 1) else {
        return Ok(rest);
    };
    let cmd = Cli::command();
    let Some(sub) = cmd.find_subcommand(&rest[sub_at]) else {
        return Ok(rest);
    };
    let known: Vec<&str> = sub.get_arguments().filter_map(|a| a.get_long()).collect();
    let text = crate::read_file(path.as_ref())?;
    let mut extra = Vec::new();
    let mut offset = 0;
    for (lineno, raw) in text.split('\n').enumerate() {
        let here = offset;
        offset += raw.len() + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lead = raw.len() - raw.trim_start().len();
        let fail = |col: usize, msg: String| {
            let e = ParseError::new(here + lead + col, format!("{path} line {}: {msg}", lineno + 1));
            Exit::parse("config", &text, &e)
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| fail(0, "expected key=value".into()))?;
        let key = key.trim();
        if !known.contains(&key) {
            return Err(fail(0, format!("'{key}' is not a flag of {}", sub.get_name())));
        }
        extra.push(format!("--{key}"));
        extra.push(value.trim().to_string());
    }
    rest.splice(sub_at + 1..sub_at + 1, extra);
    Ok(rest)
}

/// Turns a clap error into an exit, with a caret under the offending word
/// of the command line when clap names one.
pub fn clap_exit(argv: &[String], e: clap::Error) -> Exit {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let code = u8::from(e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) * 2;
            let _ = e.print();
            return Exit {
                code,
                message: String::new(),
            };
        }
        _ => {}
    }
    let text = e.to_string();
    let summary = text
        .lines()
        .next()
        .unwrap_or("bad arguments")
        .trim_start_matches("error: ")
        .to_string();
    let culprit = [ContextKind::InvalidValue, ContextKind::InvalidArg, ContextKind::InvalidSubcommand]
        .into_iter()
        .find_map(|k| match e.get(k) {
            Some(ContextValue::String(s)) => Some(s.clone()),
            _ => None,
        });
    let line = argv.iter().skip(1).cloned().collect::<Vec<_>>().join(" ");
    let shown = culprit.and_then(|c| {
        let flag = c.split_whitespace().next().unwrap_or(&c).to_string();
        let mut pos = 0;
        for a in argv.iter().skip(1) {
            if *a == c || *a == flag || a.starts_with(&format!("{flag}=")) {
                return Some(pos);
            }
            pos += a.len() + 1;
        }
        None
    });
    match shown {
        Some(pos) => Exit::usage(ParseError::new(pos, summary).render(&line)),
        None => Exit::usage(text.trim_end().trim_start_matches("error: ").to_string()),
    }
}
