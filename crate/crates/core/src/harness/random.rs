use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{GameKind, Move, Role, Shape, Strategy};
use crate::sets::{FinSet, IdealSetDesc, SCAN_LIMIT};
use crate::strategies::{i_moves, ii_moves};
use crate::{Error, Result};

/// Values of unconstrained naturals are drawn below this.
const NAT_RANGE: u64 = 32;

/// A legal, seeded, memoryless adversary. Each move is drawn from a ChaCha
/// stream selected by a hash of the prefix, so equal prefixes get equal
/// moves and different prefixes get independent ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStrategy {
    role: Role,
    kind: GameKind,
    seed: u64,
}

pub fn random_strategy(role: Role, kind: GameKind, seed: u64) -> RandomStrategy {
    RandomStrategy { role, kind, seed }
}

/// FNV-1a over the moves: a tag per move, then its numbers.
fn prefix_hash(prefix: &[Move]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    for m in prefix {
        match m {
            Move::Nat(n) => {
                eat(0);
                eat(*n);
            }
            Move::Bit(b) => eat(1 + u64::from(*b)),
            Move::FinSet(s) => {
                eat(3);
                eat(s.len() as u64);
                s.elements().iter().for_each(|&x| eat(x));
            }
            Move::Pair(a, b) => {
                eat(4);
                eat(*a);
                eat(*b);
            }
            Move::IdealSet(d) => {
                eat(5);
                d.to_string().bytes().for_each(|c| eat(u64::from(c)));
            }
        }
    }
    h
}

/// The `skip`-th natural from `lo` on that `forbidden` lets through.
fn nth_allowed(lo: u64, skip: u64, forbidden: impl Fn(u64) -> bool) -> Result<u64> {
    let mut left = skip;
    let mut n = lo;
    let limit = lo.saturating_add(SCAN_LIMIT);
    loop {
        if !forbidden(n) {
            if left == 0 {
                return Ok(n);
            }
            left -= 1;
        }
        n += 1;
        if n > limit {
            return Err(Error::IllegalMove(format!(
                "no legal natural within {SCAN_LIMIT} of {lo}"
            )));
        }
    }
}

fn random_set(rng: &mut ChaCha8Rng, range: u64, size: usize) -> FinSet {
    sample(rng, range as usize, size)
        .into_iter()
        .map(|i| i as u64)
        .collect()
}

impl Strategy for RandomStrategy {
    fn role(&self) -> Role {
        self.role
    }

    fn label(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(prefix_hash(prefix));
        let k = prefix.len() / 2;
        let own_last = || {
            let mut own = if self.role == Role::I {
                i_moves(prefix).collect::<Vec<_>>()
            } else {
                ii_moves(prefix).collect()
            };
            own.pop().and_then(Move::as_nat)
        };
        Ok(match self.kind.shape(self.role) {
            Shape::Bit => Move::Bit(rng.gen()),
            Shape::Nat => match (self.role, self.kind) {
                (Role::I, kind) if kind.increasing_i() => match own_last() {
                    None => Move::Nat(0),
                    Some(n) => Move::Nat(n + rng.gen_range(1..=2)),
                },
                (Role::II, GameKind::Hmm) => {
                    let f = prefix.last().and_then(Move::as_set).cloned().unwrap_or_default();
                    Move::Nat(nth_allowed(0, rng.gen_range(0..NAT_RANGE), |n| f.contains(n))?)
                }
                (Role::II, GameKind::GameG) => {
                    let lo = own_last().map_or(0, |n| n + 1);
                    let d = prefix.last().and_then(Move::as_ideal).cloned();
                    let skip = rng.gen_range(0..4);
                    Move::Nat(nth_allowed(lo, skip, |n| d.as_ref().is_some_and(|d| d.contains(n)))?)
                }
                _ => Move::Nat(rng.gen_range(0..NAT_RANGE)),
            },
            Shape::FinSet => match self.kind {
                GameKind::AntiLocalizing | GameKind::AntiLocalizingStar => {
                    Move::FinSet(random_set(&mut rng, k as u64 + 1 + NAT_RANGE, k + 1))
                }
                _ => {
                    let size = rng.gen_range(0..4);
                    Move::FinSet(random_set(&mut rng, 16 + 2 * k as u64, size))
                }
            },
            Shape::IdealSet => {
                let size = rng.gen_range(0..4);
                Move::IdealSet(IdealSetDesc::Finite(random_set(&mut rng, 16 + 2 * k as u64, size)))
            }
            Shape::Pair => {
                return Err(Error::Shape(format!("no random pairs for {}", self.kind)));
            }
        })
    }
}
