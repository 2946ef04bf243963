//! The thirteen games: legality, verdicts, slaloms and witness families.

use crate::engine::{GameKind, HorizonVerdict, Move, Role, Shape, StatKey, Status, Transcript};
use crate::ideals::{CostIdeal, Pairing};
use crate::rule::Rule;
use crate::sets::{FinSet, IdealSetDesc, SetGen};
use crate::{Error, ParseError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub kind: GameKind,
    /// The ideal `I` of the ideal games.
    pub ideal: Option<CostIdeal>,
    /// The second ideal `J` of `G(I, J)` and `B(I, J)`.
    pub ideal_j: Option<CostIdeal>,
}

pub fn mk_real_game(kind: GameKind) -> Result<GameSpec> {
    if kind.is_ideal_game() {
        return Err(Error::Config(format!("{kind} is an ideal game; it needs an ideal")));
    }
    Ok(GameSpec {
        kind,
        ideal: None,
        ideal_j: None,
    })
}

pub fn mk_ideal_game(kind: GameKind, i: CostIdeal, j: Option<CostIdeal>) -> Result<GameSpec> {
    if !kind.is_ideal_game() {
        return Err(Error::Config(format!("{kind} is not an ideal game")));
    }
    let needs_j = matches!(kind, GameKind::GameG | GameKind::GameB);
    if needs_j && j.is_none() {
        return Err(Error::Config(format!("{kind} needs a second ideal")));
    }
    Ok(GameSpec {
        kind,
        ideal: Some(i),
        ideal_j: if needs_j { j } else { None },
    })
}

/// Player-I naturals played so far in an increasing game.
fn last_nat(moves: &[Move], role: Role) -> Option<u64> {
    let start = if role == Role::I { 0 } else { 1 };
    moves
        .iter()
        .skip(start)
        .step_by(2)
        .filter_map(Move::as_nat)
        .last()
}

impl GameSpec {
    /// Convenience constructor for either family; ideal games fall back to
    /// `ED_fin` when no ideal is given.
    pub fn for_kind(kind: GameKind, ideal: Option<CostIdeal>, ideal_j: Option<CostIdeal>) -> Result<Self> {
        if kind.is_ideal_game() {
            let i = ideal.unwrap_or(CostIdeal::EdFin);
            mk_ideal_game(kind, i, ideal_j.or(Some(i)))
        } else {
            mk_real_game(kind)
        }
    }

    fn i(&self) -> CostIdeal {
        self.ideal.unwrap_or(CostIdeal::EdFin)
    }

    fn j(&self) -> CostIdeal {
        self.ideal_j.unwrap_or(self.i())
    }

    /// The ideals judging all of Player I's naturals and the selection in
    /// the tallness-style games `B(I, J)`.
    pub fn b_ideals(&self) -> Option<(CostIdeal, CostIdeal)> {
        match self.kind {
            GameKind::Tallness => Some((CostIdeal::Fin, self.i())),
            GameKind::TallnessStar => Some((self.i(), self.i())),
            GameKind::GameB => Some((self.i(), self.j())),
            _ => None,
        }
    }

    /// Is `prefix` followed by `m` legal? A move of the wrong shape is an
    /// error rather than `false`.
    pub fn step_legal(&self, prefix: &[Move], m: &Move) -> Result<bool> {
        let role = Role::to_move(prefix.len());
        let round = prefix.len() / 2;
        let expected = self.kind.shape(role);
        if m.shape() != expected {
            return Err(Error::Shape(format!(
                "player {role} plays a {expected} in {}, not {m}",
                self.kind
            )));
        }
        let kind = self.kind;
        Ok(match (role, m) {
            (Role::I, Move::Nat(n)) if kind.increasing_i() => {
                last_nat(prefix, Role::I).is_none_or(|last| *n > last)
            }
            (Role::I, Move::FinSet(a))
                if matches!(kind, GameKind::AntiLocalizing | GameKind::AntiLocalizingStar) =>
            {
                a.len() == round + 1
            }
            (Role::I, Move::IdealSet(d)) => self.ideal_set_allowed(d),
            (Role::II, Move::Nat(n)) if kind == GameKind::Hmm => {
                let forbidden = prefix.last().and_then(Move::as_set);
                !forbidden.is_some_and(|f| f.contains(*n))
            }
            (Role::II, Move::Nat(n)) if kind == GameKind::GameG => {
                let played = prefix.last().and_then(Move::as_ideal);
                !played.is_some_and(|d| d.contains(*n))
                    && last_nat(prefix, Role::II).is_none_or(|last| *n > last)
            }
            _ => true,
        })
    }

    /// Lines-and-graphs sets must use the coding of the ideal they come from.
    fn ideal_set_allowed(&self, d: &IdealSetDesc) -> bool {
        match d {
            IdealSetDesc::LinesAndGraphs { coding, .. } => match self.i() {
                CostIdeal::Fin => false,
                CostIdeal::Ed => *coding == Pairing::Cantor,
                CostIdeal::EdFin => *coding == Pairing::Delta,
            },
            _ => true,
        }
    }

    /// Is every prefix of `moves` legal?
    pub fn is_legal_play(&self, moves: &[Move]) -> Result<bool> {
        for i in 0..moves.len() {
            if !self.step_legal(&moves[..i], &moves[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Candidate moves for the player to move, used when exploring trees.
    pub fn candidate_moves(&self, prefix: &[Move], width: u64) -> Vec<Move> {
        let role = Role::to_move(prefix.len());
        let round = prefix.len() as u64 / 2;
        let take = |lo: u64, ok: &dyn Fn(u64) -> bool| -> Vec<Move> {
            (lo..lo.saturating_add(width.saturating_mul(8) + 64))
                .filter(|&n| ok(n))
                .take(width as usize)
                .map(Move::Nat)
                .collect()
        };
        match self.kind.shape(role) {
            Shape::Bit => vec![Move::Bit(false), Move::Bit(true)],
            Shape::Nat => {
                let lo = match role {
                    Role::I if self.kind.increasing_i() => {
                        last_nat(prefix, Role::I).map_or(0, |v| v + 1)
                    }
                    Role::II if self.kind == GameKind::GameG => {
                        last_nat(prefix, Role::II).map_or(0, |v| v + 1)
                    }
                    _ => 0,
                };
                match prefix.last() {
                    Some(Move::FinSet(f)) if role == Role::II => take(lo, &|n| !f.contains(n)),
                    Some(Move::IdealSet(d)) if role == Role::II => take(lo, &|n| !d.contains(n)),
                    _ => take(lo, &|_| true),
                }
            }
            Shape::FinSet => {
                if matches!(self.kind, GameKind::AntiLocalizing | GameKind::AntiLocalizingStar) {
                    (0..width)
                        .map(|j| Move::FinSet(FinSet::range(j, j + round)))
                        .collect()
                } else {
                    (0..width)
                        .map(|j| Move::FinSet((0..j).collect()))
                        .collect()
                }
            }
            Shape::IdealSet => (0..width)
                .map(|j| Move::IdealSet(IdealSetDesc::Finite((0..j).collect())))
                .collect(),
            Shape::Pair => (0..width).map(|j| Move::Pair(j, 0)).collect(),
        }
    }

    /// Judges a transcript prefix against a witness family.
    pub fn evaluate(&self, t: &Transcript, witnesses: &WitnessFamily) -> Result<HorizonVerdict> {
        let rounds = t.rounds();
        let moves = &t.moves[..2 * rounds];
        let i_moves: Vec<&Move> = moves.iter().step_by(2).collect();
        let ii_moves: Vec<&Move> = moves.iter().skip(1).step_by(2).collect();
        let mut v = HorizonVerdict::new(Status::Undetermined);
        if self.kind.shape(Role::II) == Shape::Bit {
            bit_stats(&mut v, &ii_moves);
        }
        let shape_err = |k: GameKind| {
            Error::Config(format!("{} witnesses do not fit the {k} game", witnesses.kind_name()))
        };
        let nat = |m: &Move| m.as_nat().unwrap_or(0);
        let bit = |m: &Move| m.as_bit().unwrap_or(false);
        let set = |m: &Move| m.as_set().cloned().unwrap_or_default();
        use GameKind::*;
        match self.kind {
            Bounding | Dominating | AntiLocalizing => {
                let reals = match witnesses {
                    WitnessFamily::None => return Ok(v),
                    WitnessFamily::Reals(r) => r,
                    _ => return Err(shape_err(self.kind)),
                };
                let anti = self.kind == AntiLocalizing;
                v.status = pointwise_status(reals.len(), rounds, |w, k| {
                    let x = reals[w].eval(k as u64);
                    let rel = if anti {
                        !set(i_moves[k]).contains(x)
                    } else {
                        nat(i_moves[k]) < x
                    };
                    rel == bit(ii_moves[k])
                });
            }
            Reaping => {
                let gens = match witnesses {
                    WitnessFamily::None => return Ok(v),
                    WitnessFamily::SetGens(g) => g,
                    _ => return Err(shape_err(self.kind)),
                };
                v.status = pointwise_status(gens.len(), rounds, |w, k| {
                    gens[w].contains(nat(i_moves[k])) == bit(ii_moves[k])
                });
            }
            ReapingStar => {
                let (mut on, mut off) = (0u64, 0u64);
                for k in 0..rounds {
                    if bit(ii_moves[k]) {
                        if bit(i_moves[k]) {
                            on += 1;
                        } else {
                            off += 1;
                        }
                    }
                }
                v.stats.insert(StatKey::MinoritySplitCount, on.min(off));
                let gens = match witnesses {
                    WitnessFamily::None => return Ok(v),
                    WitnessFamily::SetGens(g) => g,
                    _ => return Err(shape_err(self.kind)),
                };
                v.status = pointwise_status(gens.len(), rounds, |w, k| {
                    gens[w].contains(k as u64) == bit(ii_moves[k])
                });
            }
            BoundingStar | DominatingStar | AntiLocalizingStar => {
                let anti = self.kind == AntiLocalizingStar;
                let escapes: Vec<bool> = (0..rounds)
                    .map(|k| {
                        let m = nat(ii_moves[k]);
                        if anti {
                            !set(i_moves[k]).contains(m)
                        } else {
                            nat(i_moves[k]) < m
                        }
                    })
                    .collect();
                let count = escapes.iter().filter(|&&e| e).count() as u64;
                v.stats.insert(StatKey::EscapeCount, count);
                if let Some(k) = escapes.iter().rposition(|&e| e) {
                    v.stats.insert(StatKey::LastOneIndex, k as u64);
                }
                if let Some(k) = escapes.iter().rposition(|&e| !e) {
                    v.stats.insert(StatKey::LastZeroIndex, k as u64);
                }
                let reals = match witnesses {
                    WitnessFamily::None => return Ok(v),
                    WitnessFamily::Reals(r) => r,
                    _ => return Err(shape_err(self.kind)),
                };
                v.status = pointwise_status(reals.len(), rounds, |w, k| {
                    reals[w].eval(k as u64) == nat(ii_moves[k])
                });
            }
            Tallness | TallnessStar | GameB => {
                let (all_ideal, sel_ideal) = self.b_ideals().expect("tallness-style kind");
                let all: Vec<u64> = i_moves.iter().map(|m| nat(m)).collect();
                let sel: Vec<u64> = (0..rounds)
                    .filter(|&k| bit(ii_moves[k]))
                    .map(|k| all[k])
                    .collect();
                let cost_all = all_ideal.cost_of_codes(&all);
                let cost_sel = sel_ideal.cost_of_codes(&sel);
                v.stats.insert(StatKey::CostAll, cost_all);
                v.stats.insert(StatKey::CostSelected, cost_sel);
                v.stats.insert(StatKey::SelectionSize, sel.len() as u64);
                match witnesses {
                    WitnessFamily::None => {}
                    WitnessFamily::IdealBudgets { budget, budget_all } => {
                        let all_ok = budget_all.is_some_and(|b| cost_all <= b);
                        v.status = if all_ok || cost_sel <= *budget {
                            Status::ConsistentII
                        } else {
                            Status::ConsistentI
                        };
                    }
                    _ => return Err(shape_err(self.kind)),
                }
            }
            Hmm | GameG => {
                let judge = if self.kind == Hmm { self.i() } else { self.j() };
                let replies: Vec<u64> = ii_moves.iter().map(|m| nat(m)).collect();
                let cost = judge.cost_of_codes(&replies);
                v.stats.insert(StatKey::CostAll, cost);
                match witnesses {
                    WitnessFamily::None => {}
                    WitnessFamily::IdealBudgets { budget, .. } => {
                        v.status = if cost <= *budget {
                            Status::ConsistentI
                        } else {
                            Status::ConsistentII
                        };
                    }
                    _ => return Err(shape_err(self.kind)),
                }
            }
        }
        Ok(v)
    }
}

fn bit_stats(v: &mut HorizonVerdict, ii: &[&Move]) {
    let bits: Vec<bool> = ii.iter().map(|m| m.as_bit().unwrap_or(false)).collect();
    v.stats.insert(
        StatKey::OnesCount,
        bits.iter().filter(|&&b| b).count() as u64,
    );
    if let Some(k) = bits.iter().rposition(|&b| b) {
        v.stats.insert(StatKey::LastOneIndex, k as u64);
    }
    if let Some(k) = bits.iter().rposition(|&b| !b) {
        v.stats.insert(StatKey::LastZeroIndex, k as u64);
    }
}

/// Consistent if some witness satisfies `holds` at every round; otherwise
/// refuted at the round by which all of them have failed.
fn pointwise_status(witnesses: usize, rounds: usize, holds: impl Fn(usize, usize) -> bool) -> Status {
    if witnesses == 0 {
        return Status::Undetermined;
    }
    let mut latest = 0;
    for w in 0..witnesses {
        match (0..rounds).find(|&k| !holds(w, k)) {
            None => return Status::ConsistentII,
            Some(k) => latest = latest.max(k),
        }
    }
    Status::RefutedII { round: latest }
}

/// A slalom: `at(n)` has exactly `n + 1` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlalomGenerator {
    /// `{base(n), ..., base(n) + n}`
    Interval { base: Rule },
    /// `{base(n) + i*step : i <= n}`, `step >= 1`
    Arithmetic { base: Rule, step: u64 },
}

impl SlalomGenerator {
    pub fn interval(base: Rule) -> Self {
        SlalomGenerator::Interval { base }
    }

    pub fn arithmetic(base: Rule, step: u64) -> Self {
        SlalomGenerator::Arithmetic {
            base,
            step: step.max(1),
        }
    }

    pub fn at(&self, n: u64) -> FinSet {
        match self {
            SlalomGenerator::Interval { base } => {
                let b = base.eval(n);
                FinSet::range(b, b + n)
            }
            SlalomGenerator::Arithmetic { base, step } => {
                let b = base.eval(n);
                (0..=n).map(|i| b + i * step).collect()
            }
        }
    }
}

/// The witnesses a verdict is relative to.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum WitnessFamily {
    #[default]
    None,
    Reals(Vec<Rule>),
    SetGens(Vec<SetGen>),
    IdealBudgets { budget: u64, budget_all: Option<u64> },
}

impl WitnessFamily {
    fn kind_name(&self) -> &'static str {
        match self {
            WitnessFamily::None => "no",
            WitnessFamily::Reals(_) => "real",
            WitnessFamily::SetGens(_) => "set-generator",
            WitnessFamily::IdealBudgets { .. } => "budget",
        }
    }

    /// Reads `real k->expr` and `setgen 0,2,4 then step 2` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut reals = Vec::new();
        let mut gens = Vec::new();
        let mut offset = 0;
        for (lineno, raw) in text.split('\n').enumerate() {
            let here = offset;
            offset += raw.len() + 1;
            let line = raw.split('#').next().unwrap_or("").trim_end();
            if line.trim().is_empty() {
                continue;
            }
            let wrap = |e: ParseError| {
                Error::Parse(ParseError::new(here + e.pos, format!("line {}: {}", lineno + 1, e.message)))
            };
            if let Some(rest) = line.strip_prefix("real ") {
                let rule = rest.parse::<Rule>().map_err(|e| wrap(e.offset(5)))?;
                reals.push(rule);
            } else if let Some(rest) = line.strip_prefix("setgen ") {
                gens.push(SetGen::parse_witness_form(rest, 7).map_err(wrap)?);
            } else {
                return Err(wrap(ParseError::new(0, "expected 'real <rule>' or 'setgen <list> then step <d>'")));
            }
        }
        match (reals.is_empty(), gens.is_empty()) {
            (false, false) => Err(Error::Config("a witness file mixes reals and set generators".into())),
            (false, true) => Ok(WitnessFamily::Reals(reals)),
            (true, false) => Ok(WitnessFamily::SetGens(gens)),
            (true, true) => Ok(WitnessFamily::None),
        }
    }
}
