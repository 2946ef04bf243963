//! Strategies and strategy translations.
//!
//! Every strategy here is stateless: whatever bookkeeping a construction
//! needs (kept subsequences, tree cursors, simulated matches) is rebuilt
//! from the prefix on each call, so a single value can serve many matches.

mod bounding;
mod generic;
mod reaping;
pub mod spec;
mod tallness;
mod treeplay;

pub use bounding::{
    diagonal_dominator, diagonal_envelope, response_play, sequence_code, sequence_decode,
    DiagonalEnvelopeOptions, ResponseMode, ResponsePlay,
};
pub use generic::{dense_set_generic_play, GenericPlay};
pub use reaping::{
    enumeration_forcing, flipper, play_reconstruction, simult_walk, simult_witness,
    successor_labels, EnumerationForcing, Flipper, SimultWalk, SimultWitness,
};
pub use tallness::{
    ed_fin_selector, hmm_from_tallness_ii, hmm_player_ii, kb_lift, kb_lift_unchecked, kept_subsequence,
    simulated_hmm, tallness_from_hmm, EdFinSelector, HmmFromTallness, HmmPlayerII, KbLift,
    KbLiftState, TallnessFromHmm,
};
pub use treeplay::{
    b_from_g, branching_tree_player_ii, g_from_tree, ideal_reply, positive_sequence_strategy,
    simulated_g, successor_complement, tree_player_i, BFromG, BranchingTreePlayer, GFromTree,
    IdealReply, PositiveSequence, TreePlayerI,
};

use std::sync::Arc;

use crate::engine::{GameKind, Move, Role, Strategy, StrategyRef};
use crate::sets::FinSet;
use crate::{Error, Result};

/// Player I's moves in a flattened prefix.
pub(crate) fn i_moves(prefix: &[Move]) -> impl Iterator<Item = &Move> {
    prefix.iter().step_by(2)
}

/// Player II's moves in a flattened prefix.
pub(crate) fn ii_moves(prefix: &[Move]) -> impl Iterator<Item = &Move> {
    prefix.iter().skip(1).step_by(2)
}

pub(crate) fn expect_nat(m: &Move) -> Result<u64> {
    m.as_nat()
        .ok_or_else(|| Error::Shape(format!("expected a natural, found {m}")))
}

pub(crate) fn expect_bit(m: &Move) -> Result<bool> {
    m.as_bit()
        .ok_or_else(|| Error::Shape(format!("expected a bit, found {m}")))
}

pub(crate) fn expect_set(m: &Move) -> Result<&FinSet> {
    m.as_set()
        .ok_or_else(|| Error::Shape(format!("expected a finite set, found {m}")))
}

/// The opponent's last move, which a Player II strategy responds to.
pub(crate) fn last_move(prefix: &[Move]) -> Result<&Move> {
    prefix
        .last()
        .ok_or_else(|| Error::Shape("player II has nothing to respond to".into()))
}

/// Plays a fixed list, then continues legally.
#[derive(Debug, Clone)]
pub struct Scripted {
    role: Role,
    kind: GameKind,
    moves: Vec<Move>,
}

pub fn scripted(role: Role, kind: GameKind, moves: Vec<Move>) -> Scripted {
    Scripted { role, kind, moves }
}

impl Scripted {
    /// The move after the script runs out, adjusted to the game's rules.
    fn continuation(&self, prefix: &[Move]) -> Result<Move> {
        let last = self
            .moves
            .last()
            .ok_or_else(|| Error::IllegalMove("empty script".into()))?;
        let round = prefix.len() / 2;
        let own: Vec<&Move> = if self.role == Role::I {
            i_moves(prefix).collect()
        } else {
            ii_moves(prefix).collect()
        };
        let forbidden = |n: u64| match (self.role, prefix.last()) {
            (Role::II, Some(Move::FinSet(f))) => f.contains(n),
            (Role::II, Some(Move::IdealSet(d))) => d.contains(n),
            _ => false,
        };
        match last {
            Move::Nat(v) => {
                let increasing = (self.role == Role::I && self.kind.increasing_i())
                    || (self.role == Role::II && self.kind == GameKind::GameG);
                let mut n = if increasing {
                    own.last().and_then(|m| m.as_nat()).map_or(*v, |p| p + 1)
                } else {
                    *v
                };
                let limit = n.saturating_add(crate::sets::SCAN_LIMIT);
                while forbidden(n) {
                    n += 1;
                    if n > limit {
                        return Err(Error::IllegalMove("no legal continuation of the script".into()));
                    }
                }
                Ok(Move::Nat(n))
            }
            Move::FinSet(s)
                if matches!(self.kind, GameKind::AntiLocalizing | GameKind::AntiLocalizingStar) =>
            {
                Ok(Move::FinSet(pad_to(s, round + 1)))
            }
            other => Ok(other.clone()),
        }
    }
}

/// `s` with the smallest missing naturals added until it has `size` elements.
pub(crate) fn pad_to(s: &FinSet, size: usize) -> FinSet {
    let mut v: Vec<u64> = s.elements().iter().copied().take(size).collect();
    let mut n = 0;
    while v.len() < size {
        if !s.contains(n) {
            v.push(n);
        }
        n += 1;
    }
    v.into_iter().collect()
}

impl Strategy for Scripted {
    fn role(&self) -> Role {
        self.role
    }

    fn label(&self) -> String {
        let items: Vec<String> = self.moves.iter().map(|m| m.to_string()).collect();
        format!("scripted:[{}]", items.join(","))
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        match self.moves.get(prefix.len() / 2) {
            Some(m) => Ok(m.clone()),
            None => self.continuation(prefix),
        }
    }
}

/// Plays the same bit every round.
#[derive(Debug, Clone, Copy)]
pub struct ConstantBit {
    role: Role,
    bit: bool,
}

pub fn always_one() -> ConstantBit {
    ConstantBit {
        role: Role::II,
        bit: true,
    }
}

pub fn always_zero() -> ConstantBit {
    ConstantBit {
        role: Role::II,
        bit: false,
    }
}

impl ConstantBit {
    pub fn for_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }
}

impl Strategy for ConstantBit {
    fn role(&self) -> Role {
        self.role
    }

    fn label(&self) -> String {
        if self.bit { "always-one" } else { "always-zero" }.into()
    }

    fn next_move(&self, _prefix: &[Move]) -> Result<Move> {
        Ok(Move::Bit(self.bit))
    }
}

/// Plays the same natural every round.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    role: Role,
    value: u64,
}

pub fn constant(role: Role, value: u64) -> Constant {
    Constant { role, value }
}

impl Strategy for Constant {
    fn role(&self) -> Role {
        self.role
    }

    fn label(&self) -> String {
        format!("constant:{}", self.value)
    }

    fn next_move(&self, _prefix: &[Move]) -> Result<Move> {
        Ok(Move::Nat(self.value))
    }
}

/// Player II repeats Player I's last natural (the least element of a set).
#[derive(Debug, Clone, Copy, Default)]
pub struct Echo;

pub fn echo() -> Echo {
    Echo
}

impl Strategy for Echo {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        "echo".into()
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        match last_move(prefix)? {
            Move::Nat(n) => Ok(Move::Nat(*n)),
            Move::FinSet(s) => Ok(Move::Nat(s.min().unwrap_or(0))),
            other => Err(Error::Shape(format!("echo cannot copy {other}"))),
        }
    }
}

/// Player I of the HMM game forbidding `{0, ..., c + k}` at round `k`.
#[derive(Debug, Clone, Copy)]
pub struct Threshold {
    c: u64,
}

pub fn threshold(c: u64) -> Threshold {
    Threshold { c }
}

impl Strategy for Threshold {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        format!("threshold:{}", self.c)
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let k = (prefix.len() / 2) as u64;
        Ok(Move::FinSet(FinSet::range(0, self.c + k)))
    }
}

/// Wraps a strategy value for sharing.
pub fn share<S: Strategy + 'static>(s: S) -> StrategyRef {
    Arc::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::play_match;
    use crate::games::{mk_real_game, GameSpec, WitnessFamily};

    fn nats(v: &[u64]) -> Vec<Move> {
        v.iter().map(|&n| Move::Nat(n)).collect()
    }

    #[test]
    fn scripted_continues_legally() {
        let spec = mk_real_game(GameKind::Bounding).unwrap();
        let s = scripted(Role::I, GameKind::Bounding, nats(&[5, 5, 5]));
        let (t, _) = play_match(&spec, &s, &always_one(), 4, &WitnessFamily::None).unwrap();
        let expected: Vec<Move> = [5, 1, 5, 1, 5, 1, 5, 1]
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { Move::Nat(v) } else { Move::bit(v) })
            .collect();
        assert_eq!(t.moves, expected);

        let tall = GameSpec::for_kind(GameKind::Tallness, None, None).unwrap();
        let s = scripted(Role::I, GameKind::Tallness, nats(&[0, 1]));
        let (t, v) = play_match(&tall, &s, &always_one(), 5, &WitnessFamily::None).unwrap();
        assert_eq!(t.i_moves().cloned().collect::<Vec<_>>(), nats(&[0, 1, 2, 3, 4]));
        assert!(!matches!(v.status, crate::Status::Forfeit { .. }));
    }

    #[test]
    fn scripted_pads_slaloms() {
        let s = scripted(
            Role::I,
            GameKind::AntiLocalizing,
            vec![Move::FinSet("{5}".parse().unwrap())],
        );
        let prefix = [Move::FinSet("{5}".parse().unwrap()), Move::Bit(true)];
        assert_eq!(s.next_move(&prefix).unwrap(), Move::FinSet("{0,5}".parse().unwrap()));
    }

    #[test]
    fn illegal_moves_forfeit() {
        let tall = GameSpec::for_kind(GameKind::Tallness, None, None).unwrap();
        let s = scripted(Role::I, GameKind::Tallness, nats(&[3, 2]));
        let (t, v) = play_match(&tall, &s, &always_one(), 4, &WitnessFamily::None).unwrap();
        assert_eq!(
            v.status,
            crate::Status::Forfeit {
                by: Role::I,
                round: 1
            }
        );
        assert_eq!(t.moves.len(), 2);
    }
}
