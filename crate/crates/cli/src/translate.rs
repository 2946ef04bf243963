use arena_core::engine::Referee;
use arena_core::harness::random_strategy;
use arena_core::strategies::spec::parse_strategy;
use arena_core::{Error, GameKind, GameSpec, Role, Strategy, StrategyRef};

use crate::args::TranslateArgs;
use crate::play::context;
use crate::{emit, Exit};

/// `(from, input role, to, wrapper)`. A `tree` input is a tree source, not a
/// strategy; its wrappers are atoms taking the source as argument.
const PAIRS: [(&str, Role, GameKind, &str); 8] = [
    ("hmm", Role::I, GameKind::Tallness, "tallness-from-hmm"),
    ("hmm", Role::I, GameKind::TallnessStar, "tallness-from-hmm"),
    ("tallness", Role::I, GameKind::Hmm, "hmm-player-ii"),
    ("tallness", Role::II, GameKind::Hmm, "hmm-from-tallness"),
    ("game-g", Role::I, GameKind::GameB, "b-from-g"),
    ("tree", Role::I, GameKind::Tallness, "tree"),
    ("tree", Role::II, GameKind::TallnessStar, "branching-tree"),
    ("tree", Role::I, GameKind::GameG, "g-from-tree"),
];

fn supported() -> String {
    let pairs: Vec<String> = PAIRS
        .iter()
        .map(|(from, role, to, _)| format!("{from} (player {role}) -> {to}"))
        .collect();
    format!("supported translations: {}", pairs.join(", "))
}

fn kind_name(s: &str) -> Result<&'static str, Exit> {
    if s == "tree" {
        return Ok("tree");
    }
    s.parse::<GameKind>()
        .map(GameKind::name)
        .map_err(|e| Exit::usage(e.to_string()))
}

/// The spec of the translated strategy, and the side it plays.
fn compose(a: &TranslateArgs) -> Result<(String, Role, GameKind), Exit> {
    let from = kind_name(&a.from)?;
    let to: GameKind = a.to.parse().map_err(|e: Error| Exit::usage(e.to_string()))?;
    if from == to.name() {
        return Err(Exit::usage(format!("{from} -> {from} is the identity; {}", supported())));
    }
    let candidates: Vec<_> = PAIRS
        .iter()
        .filter(|(f, role, t, _)| *f == from && *t == to && a.role.is_none_or(|r| r.role() == *role))
        .collect();
    if candidates.is_empty() {
        return Err(Exit::usage(format!("no translation {from} -> {to}; {}", supported())));
    }
    let src = a.strategy.trim();
    let mut fits = Vec::new();
    let mut first_error = None;
    for &&(_, role, to, wrapper) in &candidates {
        // A tree source's listed role is already the output's.
        let out_role = if from == "tree" { role } else { role.opponent() };
        let spec = if from == "tree" {
            format!("{wrapper}:{src}")
        } else {
            let inner_kind: GameKind = from.parse().expect("a game name");
            let spec = GameSpec::for_kind(inner_kind, None, None).map_err(|e| Exit::usage(e.to_string()))?;
            match parse_strategy(src, &context(inner_kind, role, a.seed, &spec)) {
                Ok(_) => format!("{wrapper}({src})"),
                Err(e) => {
                    first_error.get_or_insert(e);
                    continue;
                }
            }
        };
        fits.push((spec, out_role, to));
    }
    match fits.len() {
        0 => {
            let e = first_error.expect("a candidate was tried");
            Err(Exit::parse("--strategy", src, &e))
        }
        1 => Ok(fits.remove(0)),
        _ => Err(Exit::usage(format!(
            "'{src}' is a strategy for either player of {from}; pass --role i or --role ii"
        ))),
    }
}

/// Plays `probe` rounds against a random opponent, surfacing the first error
/// the translated strategy raises.
fn probe(spec: &GameSpec, s: &dyn Strategy, rounds: usize, seed: u64) -> Result<(), Error> {
    let other = random_strategy(s.role().opponent(), spec.kind, seed);
    let mut referee = Referee::new(spec, rounds);
    while let Some(role) = referee.to_move() {
        let m = if role == s.role() {
            s.next_move(referee.moves())?
        } else {
            other.next_move(referee.moves())?
        };
        referee.submit(m)?;
    }
    Ok(())
}

pub fn run(a: TranslateArgs) -> Result<(), Exit> {
    let (composite, role, to) = compose(&a)?;
    let spec = GameSpec::for_kind(to, None, None).map_err(|e| Exit::usage(e.to_string()))?;
    let ctx = context(to, role, a.seed, &spec);
    let s: StrategyRef = parse_strategy(&composite, &ctx).map_err(|e| Exit::parse("translation", &composite, &e))?;
    if let Err(e) = probe(&spec, s.as_ref(), a.probe, a.seed) {
        return Err(Exit::failure(format!("{composite} does not play: {e}")));
    }
    emit(a.out.as_deref(), &format!("{composite}\n"))
}
