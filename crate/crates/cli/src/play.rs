use std::io::{BufRead, Write};

use arena_core::engine::{play_match_detailed, MatchResult, Referee, TranscriptRecord};
use arena_core::harness::sub_seed;
use arena_core::strategies::spec::{parse_strategy, SpecContext};
use arena_core::{GameKind, GameSpec, Move, Role, Status, StrategyRef, WitnessFamily};

use crate::args::PlayArgs;
use crate::{emit, read_file, Exit};

/// Context for parsing `role`'s spec; a bare `random` gets its own sub-seed
/// per side.
pub fn context(kind: GameKind, role: Role, seed: u64, spec: &GameSpec) -> SpecContext {
    let mut ctx = SpecContext::new(kind, role);
    ctx.base_dir = std::env::current_dir().unwrap_or_default();
    ctx.seed = sub_seed(seed, if role == Role::I { 0 } else { 1 });
    if let Some(ideal) = spec.ideal {
        ctx.ideal = ideal;
    }
    ctx
}

pub fn strategy(flag: &str, src: &str, ctx: &SpecContext) -> Result<StrategyRef, Exit> {
    parse_strategy(src, ctx).map_err(|e| Exit::parse(flag, src, &e))
}

fn witnesses(a: &PlayArgs) -> Result<WitnessFamily, Exit> {
    match (&a.witness_file, a.budget) {
        (Some(_), Some(_)) => Err(Exit::usage("--witness-file and --budget exclude each other")),
        (Some(path), None) => {
            let text = read_file(path)?;
            WitnessFamily::parse_file(&text).map_err(|e| Exit::from_error("witness file", &text, e))
        }
        (None, Some(budget)) => Ok(WitnessFamily::IdealBudgets {
            budget,
            budget_all: a.budget_all,
        }),
        (None, None) if a.budget_all.is_some() => Err(Exit::usage("--budget-all needs --budget")),
        (None, None) => Ok(WitnessFamily::None),
    }
}

/// Asks standard input for `role`'s move until a legal one arrives; `None`
/// at end of input.
fn prompt(referee: &Referee<'_>, kind: GameKind, role: Role, lines: &mut impl BufRead) -> Option<Move> {
    let shape = kind.shape(role);
    let mut err = std::io::stderr();
    loop {
        let _ = write!(err, "round {} player {role} ({shape})> ", referee.round());
        let _ = err.flush();
        let mut line = String::new();
        match lines.read_line(&mut line) {
            Ok(0) | Err(_) => return None,
            Ok(_) => {}
        }
        let text = line.trim_end_matches(['\n', '\r']);
        match Move::parse_as(text, shape, 0) {
            Err(e) => {
                let _ = writeln!(err, "{}", crate::render_in_text(text, &e));
            }
            Ok(m) => match referee.is_legal(&m) {
                Ok(true) => return Some(m),
                Ok(false) => {
                    let _ = writeln!(err, "{m} is not legal here; try again");
                }
                Err(e) => {
                    let _ = writeln!(err, "{e}; try again");
                }
            },
        }
    }
}

fn interactive(
    spec: &GameSpec,
    human: Role,
    machine: &StrategyRef,
    horizon: usize,
    w: &WitnessFamily,
) -> Result<MatchResult, Exit> {
    let mut referee = Referee::new(spec, horizon);
    let stdin = std::io::stdin();
    let mut lines = stdin.lock();
    while let Some(role) = referee.to_move() {
        if role == human {
            match prompt(&referee, spec.kind, role, &mut lines) {
                Some(m) => referee.submit(m).map_err(|e| Exit::failure(e.to_string()))?,
                None => referee.forfeit(role, "end of input"),
            }
            continue;
        }
        match machine.next_move(referee.moves()) {
            Ok(m) => {
                eprintln!("player {role} plays {m}");
                if let Err(e) = referee.submit(m) {
                    referee.forfeit(role, e.to_string());
                }
            }
            Err(e) => referee.forfeit(role, e.to_string()),
        }
    }
    referee.finish(w).map_err(|e| Exit::failure(e.to_string()))
}

pub fn run(a: PlayArgs) -> Result<(), Exit> {
    let spec = GameSpec::for_kind(a.game, a.ideal, a.ideal_j).map_err(|e| Exit::usage(e.to_string()))?;
    let w = witnesses(&a)?;
    let human = a.interactive.map(|s| s.role());
    let load = |role: Role, flag: &str, src: &Option<String>| -> Result<Option<StrategyRef>, Exit> {
        match src {
            _ if human == Some(role) => Ok(None),
            Some(src) => strategy(flag, src, &context(a.game, role, a.seed, &spec)).map(Some),
            None => Err(Exit::usage(format!("{flag} is required unless that side is interactive"))),
        }
    };
    let s_i = load(Role::I, "--strategy-i", &a.strategy_i)?;
    let s_ii = load(Role::II, "--strategy-ii", &a.strategy_ii)?;
    let result = match (&s_i, &s_ii) {
        (Some(i), Some(ii)) => play_match_detailed(&spec, i.as_ref(), ii.as_ref(), a.horizon, &w)
            .map_err(|e| Exit::failure(e.to_string()))?,
        (None, Some(m)) => interactive(&spec, Role::I, m, a.horizon, &w)?,
        (Some(m), None) => interactive(&spec, Role::II, m, a.horizon, &w)?,
        (None, None) => unreachable!("only one side can be interactive"),
    };
    let label = |s: &Option<StrategyRef>| s.as_ref().map_or("stdin".to_string(), |s| s.label());
    let mut record = TranscriptRecord::new(&result.transcript, Some(result.verdict.clone()));
    if let Some(ideal) = spec.ideal {
        record = record.with_param("ideal", ideal.to_string());
    }
    if let Some(j) = spec.ideal_j {
        record = record.with_param("ideal-j", j.to_string());
    }
    record = record
        .with_param("strategy-i", label(&s_i))
        .with_param("strategy-ii", label(&s_ii))
        .with_param("seed", a.seed.to_string());
    emit(a.out.as_deref(), &record.to_text())?;
    if a.out.is_some() {
        println!("verdict {}", result.verdict);
    }
    match result.verdict.status {
        Status::Forfeit { by, round } => Err(Exit::failure(format!(
            "player {by} forfeited at round {round}: {}",
            result.forfeit_reason.unwrap_or_default()
        ))),
        _ => Ok(()),
    }
}
