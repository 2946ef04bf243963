//! Tallness-game strategies, the Katětov–Blass lift, and the translations
//! between the tallness game and the HMM game.

use crate::engine::{GameKind, Move, Role, Strategy, StrategyRef, Transcript};
use crate::ideals::{delta_point, FiniteToOneMap};
use crate::rule::Rule;
use crate::sets::{FinSet, SCAN_LIMIT};
use crate::strategies::{expect_bit, expect_nat, expect_set, i_moves, ii_moves, last_move};
use crate::trees::{bounded_tree_extension, Extension};
use crate::{Error, Result};

/// Player II of the tallness game over `ED_fin`: answers 1 exactly when the
/// Δ-column of Player I's move has not been played before.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdFinSelector;

pub fn ed_fin_selector() -> EdFinSelector {
    EdFinSelector
}

impl Strategy for EdFinSelector {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        "ed-fin-selector".into()
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let column = |m: &Move| expect_nat(m).map(|n| delta_point(n).0);
        let current = column(last_move(prefix)?)?;
        let earlier = &prefix[..prefix.len() - 1];
        for m in i_moves(earlier) {
            if column(m)? == current {
                return Ok(Move::Bit(false));
            }
        }
        Ok(Move::Bit(true))
    }
}

/// Incremental bookkeeping of the kept subsequence `m*`: a move is kept when
/// its image exceeds the image of every kept move.
#[derive(Debug, Clone, Default)]
pub struct KbLiftState {
    kept: Vec<u64>,
    top: Option<u64>,
}

impl KbLiftState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `m`, returning whether it is kept.
    pub fn push(&mut self, f: &Rule, m: u64) -> bool {
        let image = f.eval(m);
        let keep = self.top.is_none_or(|t| image > t);
        if keep {
            self.kept.push(m);
            self.top = Some(image);
        }
        keep
    }

    pub fn kept(&self) -> &[u64] {
        &self.kept
    }
}

/// `m*` computed directly: `m_k` is kept iff `f(m_k) > f(m_j)` for all `j < k`.
pub fn kept_subsequence(f: &Rule, moves: &[u64]) -> Vec<u64> {
    moves
        .iter()
        .enumerate()
        .filter(|&(k, &m)| {
            let image = f.eval(m);
            moves[..k].iter().all(|&p| f.eval(p) < image)
        })
        .map(|(_, &m)| m)
        .collect()
}

/// Lifts a Player II strategy along a finite-to-one map: kept moves are
/// answered as `tau` answers their images, the rest with 0.
#[derive(Clone)]
pub struct KbLift {
    tau: StrategyRef,
    f: Rule,
    fiber: Option<Rule>,
}

pub fn kb_lift(tau: StrategyRef, f: FiniteToOneMap) -> KbLift {
    KbLift {
        tau,
        f: f.apply,
        fiber: Some(f.fiber_bound),
    }
}

/// A lift along `f` with no fiber bound on record.
pub fn kb_lift_unchecked(tau: StrategyRef, f: Rule) -> KbLift {
    KbLift { tau, f, fiber: None }
}

impl Strategy for KbLift {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        match &self.fiber {
            Some(b) => format!("kb-lift({},f={},fiber={b})", self.tau.label(), self.f),
            None => format!("kb-lift({},f={})", self.tau.label(), self.f),
        }
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let mut state = KbLiftState::new();
        let mut base: Vec<Move> = Vec::new();
        let mut answer = Move::Bit(false);
        for m in i_moves(prefix) {
            let m = expect_nat(m)?;
            if state.push(&self.f, m) {
                base.push(Move::Nat(self.f.eval(m)));
                let reply = self.tau.next_move(&base)?;
                base.push(reply.clone());
                answer = reply;
            } else {
                answer = Move::Bit(false);
            }
        }
        Ok(answer)
    }
}

/// The largest element of Player I's HMM move, with `max ∅ = -1`.
fn hmm_bar(m: &Move) -> Result<i128> {
    Ok(expect_set(m)?.max().map_or(-1, i128::from))
}

/// Plays `sigma` in a simulated HMM match, keeping each tallness move that
/// exceeds every element of the set `sigma` currently forbids. Returns the
/// simulated moves, ending with the pending forbidden set, and the kept flags.
fn run_hmm_simulation(sigma: &dyn Strategy, moves: &[u64]) -> Result<(Vec<Move>, Vec<bool>)> {
    let mut hmm = vec![sigma.next_move(&[])?];
    let mut flags = Vec::with_capacity(moves.len());
    for &n in moves {
        let keep = i128::from(n) > hmm_bar(hmm.last().expect("pending move"))?;
        if keep {
            hmm.push(Move::Nat(n));
            hmm.push(sigma.next_move(&hmm)?);
        }
        flags.push(keep);
    }
    Ok((hmm, flags))
}

/// The HMM match `sigma` plays against the kept tallness moves.
pub fn simulated_hmm(sigma: &dyn Strategy, tallness_moves: &[u64]) -> Result<Transcript> {
    let (mut hmm, _) = run_hmm_simulation(sigma, tallness_moves)?;
    hmm.pop();
    Ok(Transcript::new(GameKind::Hmm, hmm.len() / 2, hmm))
}

/// Player II of the tallness game built from Player I of the HMM game.
#[derive(Clone)]
pub struct TallnessFromHmm {
    sigma: StrategyRef,
}

pub fn tallness_from_hmm(sigma: StrategyRef) -> TallnessFromHmm {
    TallnessFromHmm { sigma }
}

impl Strategy for TallnessFromHmm {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        format!("tallness-from-hmm({})", self.sigma.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let moves: Vec<u64> = i_moves(prefix).map(expect_nat).collect::<Result<_>>()?;
        let (_, flags) = run_hmm_simulation(self.sigma.as_ref(), &moves)?;
        Ok(Move::Bit(*flags.last().unwrap_or(&false)))
    }
}

/// Player I of the HMM game built from Player II of the tallness game.
///
/// At each stage the simulated tallness play is pushed, with Player I moves
/// that `tau` answers with 0, to a node after which every probed larger move
/// is answered with 1. The forbidden set then covers everything up to the
/// node's last move.
#[derive(Clone)]
pub struct HmmFromTallness {
    tau: StrategyRef,
    depth: usize,
    width: u64,
}

pub fn hmm_from_tallness_ii(tau: StrategyRef, depth: usize, width: u64) -> HmmFromTallness {
    HmmFromTallness { tau, depth, width }
}

impl HmmFromTallness {
    /// The simulated tallness node at the start of stage `replies.len()`,
    /// already extended to an open node.
    pub fn node(&self, replies: &[u64]) -> Result<Vec<Move>> {
        let mut node = self.open_from(Vec::new(), 0)?;
        for (stage, &n) in replies.iter().enumerate() {
            node.push(Move::Nat(n));
            let answer = self.tau.next_move(&node)?;
            if !expect_bit(&answer)? {
                return Err(Error::Stalled {
                    stage,
                    reason: format!("the tallness strategy answered 0 to the reply {n}"),
                });
            }
            node.push(answer);
            node = self.open_from(node, stage + 1)?;
        }
        Ok(node)
    }

    fn open_from(&self, node: Vec<Move>, stage: usize) -> Result<Vec<Move>> {
        match bounded_tree_extension(self.tau.as_ref(), &node, self.depth, self.width)? {
            Extension::Open(ext) => Ok(ext),
            Extension::Stalled { reason } => Err(Error::Stalled { stage, reason }),
        }
    }
}

impl Strategy for HmmFromTallness {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        format!(
            "hmm-from-tallness({},depth={},width={})",
            self.tau.label(),
            self.depth,
            self.width
        )
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let replies: Vec<u64> = ii_moves(prefix).map(expect_nat).collect::<Result<_>>()?;
        let node = self.node(&replies)?;
        let forbidden = match i_moves(&node).last() {
            Some(m) => FinSet::range(0, expect_nat(m)?),
            None => FinSet::empty(),
        };
        Ok(Move::FinSet(forbidden))
    }
}

/// Player II of the HMM game built from Player I of the tallness game: the
/// simulated tallness match runs with answer 0 until `sigma` clears the
/// forbidden set, and that move is copied into the HMM play.
#[derive(Clone)]
pub struct HmmPlayerII {
    sigma: StrategyRef,
}

pub fn hmm_player_ii(sigma: StrategyRef) -> HmmPlayerII {
    HmmPlayerII { sigma }
}

impl HmmPlayerII {
    /// The simulated tallness moves and the replies they produce.
    pub fn simulate(&self, forbidden: &[&FinSet]) -> Result<(Vec<Move>, Vec<u64>)> {
        let mut tall: Vec<Move> = Vec::new();
        let mut replies = Vec::with_capacity(forbidden.len());
        for f in forbidden {
            let bar = FinSet::max(f).map_or(-1, i128::from);
            let mut probes = 0;
            loop {
                let n = expect_nat(&self.sigma.next_move(&tall)?)?;
                tall.push(Move::Nat(n));
                if i128::from(n) > bar {
                    tall.push(Move::Bit(true));
                    replies.push(n);
                    break;
                }
                tall.push(Move::Bit(false));
                probes += 1;
                if probes > SCAN_LIMIT {
                    return Err(Error::SearchExhausted(format!(
                        "{} stayed below {bar} for {SCAN_LIMIT} moves",
                        self.sigma.label()
                    )));
                }
            }
        }
        Ok((tall, replies))
    }
}

impl Strategy for HmmPlayerII {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        format!("hmm-player-ii({})", self.sigma.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let forbidden: Vec<&FinSet> = i_moves(prefix).map(expect_set).collect::<Result<_>>()?;
        let (_, replies) = self.simulate(&forbidden)?;
        Ok(Move::Nat(*replies.last().expect("one reply per forbidden set")))
    }
}
