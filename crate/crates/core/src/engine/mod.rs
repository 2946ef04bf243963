//! Move alphabets, transcripts, verdicts and the referee loop.

mod format;

pub use format::TranscriptRecord;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::games::{GameSpec, WitnessFamily};
use crate::sets::{FinSet, IdealSetDesc};
use crate::{Error, ParseError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    I,
    II,
}

impl Role {
    pub fn opponent(self) -> Role {
        match self {
            Role::I => Role::II,
            Role::II => Role::I,
        }
    }

    /// Whose turn it is after `len` moves.
    pub fn to_move(len: usize) -> Role {
        if len % 2 == 0 {
            Role::I
        } else {
            Role::II
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::I => "I",
            Role::II => "II",
        })
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Role::I),
            "II" | "ii" | "2" => Ok(Role::II),
            _ => Err(Error::Config(format!("unknown role '{s}' (expected i or ii)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GameKind {
    Bounding,
    BoundingStar,
    Dominating,
    DominatingStar,
    Reaping,
    ReapingStar,
    AntiLocalizing,
    AntiLocalizingStar,
    Tallness,
    TallnessStar,
    Hmm,
    GameG,
    GameB,
}

/// What a player's moves look like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shape {
    Nat,
    Bit,
    FinSet,
    Pair,
    IdealSet,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Nat => "natural",
            Shape::Bit => "bit",
            Shape::FinSet => "finite set",
            Shape::Pair => "pair",
            Shape::IdealSet => "ideal set",
        })
    }
}

impl GameKind {
    pub const ALL: [GameKind; 13] = [
        GameKind::Bounding,
        GameKind::BoundingStar,
        GameKind::Dominating,
        GameKind::DominatingStar,
        GameKind::Reaping,
        GameKind::ReapingStar,
        GameKind::AntiLocalizing,
        GameKind::AntiLocalizingStar,
        GameKind::Tallness,
        GameKind::TallnessStar,
        GameKind::Hmm,
        GameKind::GameG,
        GameKind::GameB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Bounding => "bounding",
            GameKind::BoundingStar => "bounding-star",
            GameKind::Dominating => "dominating",
            GameKind::DominatingStar => "dominating-star",
            GameKind::Reaping => "reaping",
            GameKind::ReapingStar => "reaping-star",
            GameKind::AntiLocalizing => "anti-localizing",
            GameKind::AntiLocalizingStar => "anti-localizing-star",
            GameKind::Tallness => "tallness",
            GameKind::TallnessStar => "tallness-star",
            GameKind::Hmm => "hmm",
            GameKind::GameG => "game-g",
            GameKind::GameB => "game-b",
        }
    }

    fn camel_name(self) -> &'static str {
        match self {
            GameKind::BoundingStar => "boundingStar",
            GameKind::DominatingStar => "dominatingStar",
            GameKind::ReapingStar => "reapingStar",
            GameKind::AntiLocalizing => "antiLocalizing",
            GameKind::AntiLocalizingStar => "antiLocalizingStar",
            GameKind::TallnessStar => "tallnessStar",
            GameKind::GameG => "gameG",
            GameKind::GameB => "gameB",
            other => other.name(),
        }
    }

    pub fn shape(self, role: Role) -> Shape {
        use GameKind::*;
        match (self, role) {
            (ReapingStar, _) => Shape::Bit,
            (AntiLocalizing | AntiLocalizingStar | Hmm, Role::I) => Shape::FinSet,
            (GameG, Role::I) => Shape::IdealSet,
            (_, Role::I) => Shape::Nat,
            (BoundingStar | DominatingStar | AntiLocalizingStar | Hmm | GameG, Role::II) => {
                Shape::Nat
            }
            (_, Role::II) => Shape::Bit,
        }
    }

    /// Player I's naturals must strictly increase.
    pub fn increasing_i(self) -> bool {
        matches!(
            self,
            GameKind::Reaping | GameKind::Tallness | GameKind::TallnessStar | GameKind::GameB
        )
    }

    pub fn is_ideal_game(self) -> bool {
        matches!(
            self,
            GameKind::Tallness
                | GameKind::TallnessStar
                | GameKind::Hmm
                | GameKind::GameG
                | GameKind::GameB
        )
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GameKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s || k.camel_name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = GameKind::ALL.iter().map(|k| k.name()).collect();
                Error::Config(format!("unknown game '{s}'; expected one of {}", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    Nat(u64),
    Bit(bool),
    FinSet(FinSet),
    Pair(u64, u64),
    IdealSet(IdealSetDesc),
}

impl Move {
    pub fn shape(&self) -> Shape {
        match self {
            Move::Nat(_) => Shape::Nat,
            Move::Bit(_) => Shape::Bit,
            Move::FinSet(_) => Shape::FinSet,
            Move::Pair(_, _) => Shape::Pair,
            Move::IdealSet(_) => Shape::IdealSet,
        }
    }

    pub fn bit(b: u64) -> Move {
        Move::Bit(b != 0)
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Move::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_bit(&self) -> Option<bool> {
        match self {
            Move::Bit(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_set(&self) -> Option<&FinSet> {
        match self {
            Move::FinSet(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_ideal(&self) -> Option<&IdealSetDesc> {
        match self {
            Move::IdealSet(d) => Some(d),
            _ => None,
        }
    }

    /// Parses a move of the given shape; `pos` is the offset of `s` in its line.
    pub fn parse_as(s: &str, shape: Shape, pos: usize) -> std::result::Result<Move, ParseError> {
        let t = s.trim();
        let pos = pos + (s.len() - s.trim_start().len());
        match shape {
            Shape::Nat => crate::sets::parse_u64(t, pos).map(Move::Nat),
            Shape::Bit => match t {
                "0" => Ok(Move::Bit(false)),
                "1" => Ok(Move::Bit(true)),
                _ => Err(ParseError::new(pos, format!("expected a bit 0|1, found '{t}'"))),
            },
            Shape::FinSet => FinSet::parse_at(t, pos).map(Move::FinSet),
            Shape::Pair => {
                let inner = crate::sets::delimited(t, '(', ')', pos)?;
                let v = crate::sets::parse_u64_list(inner, pos + 1)?;
                match v.as_slice() {
                    [a, b] => Ok(Move::Pair(*a, *b)),
                    _ => Err(ParseError::new(pos, "a pair has exactly two coordinates")),
                }
            }
            Shape::IdealSet => {
                let rest = t
                    .strip_prefix("ideal ")
                    .ok_or_else(|| ParseError::new(pos, "expected 'ideal <descriptor>'"))?;
                IdealSetDesc::parse_at(rest, pos + 6).map(Move::IdealSet)
            }
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Nat(n) => write!(f, "{n}"),
            Move::Bit(b) => write!(f, "{}", u8::from(*b)),
            Move::FinSet(s) => write!(f, "{s}"),
            Move::Pair(a, b) => write!(f, "({a},{b})"),
            Move::IdealSet(d) => write!(f, "ideal {d}"),
        }
    }
}

/// An alternating record of one match, Player I first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transcript {
    pub kind: GameKind,
    pub horizon: usize,
    pub moves: Vec<Move>,
}

impl Transcript {
    pub fn new(kind: GameKind, horizon: usize, moves: Vec<Move>) -> Self {
        Transcript {
            kind,
            horizon,
            moves,
        }
    }

    /// Completed rounds.
    pub fn rounds(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn i_moves(&self) -> impl Iterator<Item = &Move> {
        self.moves.iter().step_by(2)
    }

    pub fn ii_moves(&self) -> impl Iterator<Item = &Move> {
        self.moves.iter().skip(1).step_by(2)
    }

    pub fn prefix(&self, rounds: usize) -> Transcript {
        let len = (2 * rounds).min(self.moves.len());
        Transcript::new(self.kind, self.horizon, self.moves[..len].to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatKey {
    OnesCount,
    LastOneIndex,
    LastZeroIndex,
    SelectionSize,
    CostAll,
    CostSelected,
    MinoritySplitCount,
    EscapeCount,
}

impl StatKey {
    pub const ALL: [StatKey; 8] = [
        StatKey::OnesCount,
        StatKey::LastOneIndex,
        StatKey::LastZeroIndex,
        StatKey::SelectionSize,
        StatKey::CostAll,
        StatKey::CostSelected,
        StatKey::MinoritySplitCount,
        StatKey::EscapeCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKey::OnesCount => "onesCount",
            StatKey::LastOneIndex => "lastOneIndex",
            StatKey::LastZeroIndex => "lastZeroIndex",
            StatKey::SelectionSize => "selectionSize",
            StatKey::CostAll => "costAll",
            StatKey::CostSelected => "costSelected",
            StatKey::MinoritySplitCount => "minoritySplitCount",
            StatKey::EscapeCount => "escapeCount",
        }
    }
}

impl FromStr for StatKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatKey::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown statistic '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// The prefix is consistent with Player II winning.
    ConsistentII,
    /// Every witness fails the defining condition by this round.
    RefutedII { round: usize },
    /// The prefix is consistent with Player I winning.
    ConsistentI,
    Undetermined,
    /// A player made an illegal move (or none) at this round.
    Forfeit { by: Role, round: usize },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::ConsistentII => f.write_str("consistent-ii"),
            Status::RefutedII { round } => write!(f, "refuted-ii@{round}"),
            Status::ConsistentI => f.write_str("consistent-i"),
            Status::Undetermined => f.write_str("undetermined"),
            Status::Forfeit { by: Role::I, round } => write!(f, "forfeit-i@{round}"),
            Status::Forfeit { by: Role::II, round } => write!(f, "forfeit-ii@{round}"),
        }
    }
}

impl FromStr for Status {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown verdict status '{s}'"));
        let round = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match s {
            "consistent-ii" => Ok(Status::ConsistentII),
            "consistent-i" => Ok(Status::ConsistentI),
            "undetermined" => Ok(Status::Undetermined),
            _ => {
                if let Some(r) = s.strip_prefix("refuted-ii@") {
                    Ok(Status::RefutedII { round: round(r)? })
                } else if let Some(r) = s.strip_prefix("forfeit-ii@") {
                    Ok(Status::Forfeit {
                        by: Role::II,
                        round: round(r)?,
                    })
                } else if let Some(r) = s.strip_prefix("forfeit-i@") {
                    Ok(Status::Forfeit {
                        by: Role::I,
                        round: round(r)?,
                    })
                } else {
                    Err(bad())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonVerdict {
    pub status: Status,
    pub stats: BTreeMap<StatKey, u64>,
}

impl HorizonVerdict {
    pub fn new(status: Status) -> Self {
        HorizonVerdict {
            status,
            stats: BTreeMap::new(),
        }
    }

    pub fn stat(&self, key: StatKey) -> Option<u64> {
        self.stats.get(&key).copied()
    }
}

impl fmt::Display for HorizonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.status)?;
        for (k, v) in &self.stats {
            write!(f, " {}={v}", k.name())?;
        }
        Ok(())
    }
}

/// A deterministic map from legal prefixes to a next move.
///
/// `prefix` is the flattened play so far; it has even length for Player I
/// and odd length for Player II. Strategies keep no state between calls.
pub trait Strategy: Send + Sync {
    fn role(&self) -> Role;
    fn label(&self) -> String;
    fn next_move(&self, prefix: &[Move]) -> Result<Move>;
}

pub type StrategyRef = Arc<dyn Strategy>;

/// Runs `strategy` against a fixed list of opponent moves, stopping when
/// the opponent has nothing left to play.
pub fn replay(strategy: &dyn Strategy, opponent: &[Move]) -> Result<Vec<Move>> {
    let role = strategy.role();
    let mut prefix = Vec::with_capacity(2 * opponent.len() + 1);
    let mut next = opponent.iter();
    loop {
        if Role::to_move(prefix.len()) == role {
            let m = strategy.next_move(&prefix)?;
            prefix.push(m);
        } else {
            match next.next() {
                Some(m) => prefix.push(m.clone()),
                None => return Ok(prefix),
            }
        }
    }
}

/// Alternates two move lists into a flattened play, Player I first.
pub fn interleave(i_moves: &[Move], ii_moves: &[Move]) -> Vec<Move> {
    let mut out = Vec::with_capacity(i_moves.len() + ii_moves.len());
    for k in 0..i_moves.len().max(ii_moves.len()) {
        if let Some(m) = i_moves.get(k) {
            out.push(m.clone());
        } else {
            break;
        }
        if let Some(m) = ii_moves.get(k) {
            out.push(m.clone());
        } else {
            break;
        }
    }
    out
}

/// Outcome of a refereed match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub transcript: Transcript,
    pub verdict: HorizonVerdict,
    /// Why a forfeit happened, if one did.
    pub forfeit_reason: Option<String>,
}

/// Step-by-step referee; used both by `play_match` and by interactive play.
pub struct Referee<'a> {
    spec: &'a GameSpec,
    horizon: usize,
    moves: Vec<Move>,
    forfeit: Option<(Role, usize, String)>,
}

impl<'a> Referee<'a> {
    pub fn new(spec: &'a GameSpec, horizon: usize) -> Self {
        Referee {
            spec,
            horizon,
            moves: Vec::with_capacity(2 * horizon),
            forfeit: None,
        }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn round(&self) -> usize {
        self.moves.len() / 2
    }

    /// The player to move, or `None` once the match is over.
    pub fn to_move(&self) -> Option<Role> {
        (self.forfeit.is_none() && self.moves.len() < 2 * self.horizon)
            .then(|| Role::to_move(self.moves.len()))
    }

    pub fn is_legal(&self, m: &Move) -> Result<bool> {
        self.spec.step_legal(&self.moves, m)
    }

    /// Appends `m` if legal; an illegal move leaves the referee unchanged.
    pub fn submit(&mut self, m: Move) -> Result<()> {
        if self.is_legal(&m)? {
            self.moves.push(m);
            Ok(())
        } else {
            Err(Error::IllegalMove(format!(
                "{m} is not legal for player {} at round {}",
                Role::to_move(self.moves.len()),
                self.round()
            )))
        }
    }

    pub fn forfeit(&mut self, by: Role, reason: impl Into<String>) {
        self.forfeit = Some((by, self.round(), reason.into()));
    }

    pub fn finish(self, witnesses: &WitnessFamily) -> Result<MatchResult> {
        let transcript = Transcript::new(self.spec.kind, self.horizon, self.moves);
        let mut verdict = self.spec.evaluate(&transcript, witnesses)?;
        let mut forfeit_reason = None;
        if let Some((by, round, reason)) = self.forfeit {
            verdict.status = Status::Forfeit { by, round };
            forfeit_reason = Some(reason);
        }
        Ok(MatchResult {
            transcript,
            verdict,
            forfeit_reason,
        })
    }
}

pub fn play_match_detailed(
    spec: &GameSpec,
    s_i: &dyn Strategy,
    s_ii: &dyn Strategy,
    horizon: usize,
    witnesses: &WitnessFamily,
) -> Result<MatchResult> {
    let mut referee = Referee::new(spec, horizon);
    while let Some(role) = referee.to_move() {
        let player = if role == Role::I { s_i } else { s_ii };
        match player.next_move(referee.moves()) {
            Ok(m) => match referee.is_legal(&m) {
                Ok(true) => referee.moves.push(m),
                Ok(false) => referee.forfeit(role, format!("illegal move {m}")),
                Err(e) => referee.forfeit(role, e.to_string()),
            },
            Err(e) => referee.forfeit(role, e.to_string()),
        }
    }
    referee.finish(witnesses)
}

/// Plays `horizon` rounds and judges the result.
pub fn play_match(
    spec: &GameSpec,
    s_i: &dyn Strategy,
    s_ii: &dyn Strategy,
    horizon: usize,
    witnesses: &WitnessFamily,
) -> Result<(Transcript, HorizonVerdict)> {
    let r = play_match_detailed(spec, s_i, s_ii, horizon, witnesses)?;
    Ok((r.transcript, r.verdict))
}

/// Player II's moves as a set.
pub fn odd_projection(t: &Transcript) -> Result<FinSet> {
    if t.kind.shape(Role::II) != Shape::Nat {
        return Err(Error::Shape(format!(
            "player II plays {}s in {}, not naturals",
            t.kind.shape(Role::II),
            t.kind
        )));
    }
    t.ii_moves()
        .map(|m| {
            m.as_nat()
                .ok_or_else(|| Error::Shape(format!("expected a natural, found {m}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_round_trip_through_names() {
        for k in GameKind::ALL {
            assert_eq!(k.name().parse::<GameKind>().unwrap(), k);
            assert_eq!(k.camel_name().parse::<GameKind>().unwrap(), k);
        }
        assert!("chess".parse::<GameKind>().is_err());
    }

    #[test]
    fn statuses_round_trip() {
        for s in [
            Status::ConsistentII,
            Status::ConsistentI,
            Status::Undetermined,
            Status::RefutedII { round: 3 },
            Status::Forfeit {
                by: Role::I,
                round: 0,
            },
            Status::Forfeit {
                by: Role::II,
                round: 12,
            },
        ] {
            assert_eq!(s.to_string().parse::<Status>().unwrap(), s);
        }
    }

    #[test]
    fn odd_projection_examples() {
        let t = Transcript::new(
            GameKind::GameG,
            3,
            vec![
                Move::IdealSet(IdealSetDesc::Finite(FinSet::empty())),
                Move::Nat(2),
                Move::IdealSet(IdealSetDesc::Finite(FinSet::empty())),
                Move::Nat(5),
                Move::IdealSet(IdealSetDesc::Finite(FinSet::empty())),
                Move::Nat(9),
            ],
        );
        assert_eq!(odd_projection(&t).unwrap().elements(), &[2, 5, 9]);
        let empty = Transcript::new(GameKind::GameG, 0, vec![]);
        assert!(odd_projection(&empty).unwrap().is_empty());
        let star = Transcript::new(
            GameKind::BoundingStar,
            3,
            [1, 3, 0, 3, 2, 4].iter().map(|&v| Move::Nat(v)).collect(),
        );
        assert_eq!(odd_projection(&star).unwrap().elements(), &[3, 4]);
        let bits = Transcript::new(GameKind::Bounding, 0, vec![]);
        assert!(matches!(odd_projection(&bits), Err(Error::Shape(_))));
    }

    #[test]
    fn moves_parse_by_shape() {
        assert_eq!(Move::parse_as("7", Shape::Nat, 0).unwrap(), Move::Nat(7));
        assert_eq!(Move::parse_as("1", Shape::Bit, 0).unwrap(), Move::Bit(true));
        assert!(Move::parse_as("2", Shape::Bit, 0).is_err());
        assert_eq!(Move::parse_as("(3,2)", Shape::Pair, 0).unwrap(), Move::Pair(3, 2));
        let m = Move::parse_as("ideal fin{0,1,2}", Shape::IdealSet, 0).unwrap();
        assert_eq!(m.to_string(), "ideal fin{0,1,2}");
        let err = Move::parse_as("{3,1}", Shape::FinSet, 4).unwrap_err();
        assert_eq!(err.pos, 4);
    }
}
