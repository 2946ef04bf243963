//! Reaping-game strategies and the simultaneous-reaping gadgets.

use crate::engine::{replay, GameKind, Move, Role, Strategy, Transcript};
use crate::rule::Rule;
use crate::sets::{FinSet, SetGen};
use crate::strategies::{expect_bit, expect_nat, ii_moves};
use crate::{Error, Result};

/// Player I of reaping*: start with 0 and switch bits after every 1 from
/// Player II.
#[derive(Debug, Clone, Copy, Default)]
pub struct Flipper;

pub fn flipper() -> Flipper {
    Flipper
}

impl Strategy for Flipper {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        "flipper".into()
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let mut bit = false;
        for m in ii_moves(prefix) {
            bit ^= expect_bit(m)?;
        }
        Ok(Move::Bit(bit))
    }
}

/// Player I of the reaping game playing `f(l) + m`, where `l` counts
/// Player II's ones and `m` its zeros.
#[derive(Debug, Clone)]
pub struct EnumerationForcing {
    f: Rule,
}

pub fn enumeration_forcing(f: Rule) -> EnumerationForcing {
    EnumerationForcing { f }
}

impl EnumerationForcing {
    fn value(&self, l: u64, m: u64) -> u64 {
        self.f.eval(l).saturating_add(m)
    }
}

impl Strategy for EnumerationForcing {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        format!("enum-forcing:f={}", self.f)
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let (mut l, mut m) = (0u64, 0u64);
        let mut last = None;
        for b in ii_moves(prefix) {
            let played = self.value(l, m);
            if expect_bit(b)? {
                l += 1;
            } else {
                m += 1;
            }
            last = Some(played);
        }
        let next = self.value(l, m);
        if last.is_some_and(|p| next <= p) {
            return Err(Error::Construction(format!(
                "f={} is not increasing: f({l})+{m} = {next} does not exceed {}",
                self.f,
                last.unwrap_or(0)
            )));
        }
        Ok(Move::Nat(next))
    }
}

/// The family `B_n = C \ h(n)`.
#[derive(Debug, Clone)]
pub struct SimultWitness {
    c: SetGen,
    h: Rule,
}

pub fn simult_witness(c: SetGen, h: Rule) -> SimultWitness {
    SimultWitness { c, h }
}

impl SimultWitness {
    pub fn at(&self, n: u64) -> SetGen {
        self.c.tail(self.h.eval(n))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimultWalk {
    /// `b_n`, the walk after `steps` steps.
    pub walk: Vec<u64>,
    /// The values visited.
    pub range: FinSet,
    /// Some value was visited twice, so the range may be finite.
    pub repeats: bool,
}

/// Walks `b_{n+1} = b_n ⌢ min B_{b_n}` for `steps` steps.
pub fn simult_walk(b: &dyn Fn(&[u64]) -> SetGen, steps: usize) -> Result<SimultWalk> {
    let mut walk = Vec::with_capacity(steps);
    for n in 0..steps {
        let next = b(&walk).nth(0).ok_or_else(|| {
            Error::Construction(format!("B at the node reached after {n} steps is empty"))
        })?;
        walk.push(next);
    }
    let range: FinSet = walk.iter().copied().collect();
    let repeats = range.len() < walk.len();
    Ok(SimultWalk {
        walk,
        range,
        repeats,
    })
}

/// Rebuilds a play of `sigma` in the reaping game whose ones fall exactly
/// on the elements of `a`, taken in order.
///
/// Each `a_k` must be Player I's answer after the previous ones followed by
/// at most `search_bound` zeros.
pub fn play_reconstruction(
    sigma: &dyn Strategy,
    a: &SetGen,
    horizon: usize,
    search_bound: usize,
) -> Result<Transcript> {
    let mut moves: Vec<Move> = Vec::with_capacity(2 * horizon);
    let (mut k, mut zeros) = (0, 0);
    for _ in 0..horizon {
        let n = expect_nat(&sigma.next_move(&moves)?)?;
        moves.push(Move::Nat(n));
        let target = a.nth(k);
        if target == Some(n) {
            moves.push(Move::Bit(true));
            k += 1;
            zeros = 0;
        } else {
            if target.is_some_and(|t| n > t || zeros == search_bound) {
                return Err(Error::ReconstructionFailed { round: k });
            }
            moves.push(Move::Bit(false));
            zeros += 1;
        }
    }
    Ok(Transcript::new(GameKind::Reaping, horizon, moves))
}

/// Labels of the children of `s` in the successor-label tree:
/// Player I's answers after `s ⌢ 1 ⌢ 0^m` for `m < count`.
pub fn successor_labels(sigma: &dyn Strategy, s: &[bool], count: usize) -> Result<Vec<u64>> {
    (0..count)
        .map(|m| {
            let bits: Vec<Move> = s
                .iter()
                .copied()
                .chain(std::iter::once(true))
                .chain(std::iter::repeat_n(false, m))
                .map(Move::Bit)
                .collect();
            let play = replay(sigma, &bits)?;
            expect_nat(play.last().expect("player I always moves"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::play_match;
    use crate::games::{mk_real_game, WitnessFamily};
    use crate::strategies::{always_one, i_moves, scripted};

    fn bits(v: &[u8]) -> Vec<Move> {
        v.iter().map(|&b| Move::Bit(b == 1)).collect()
    }

    fn i_bits(play: &[Move]) -> Vec<bool> {
        i_moves(play).map(|m| m.as_bit().unwrap()).collect()
    }

    #[test]
    fn flipper_examples() {
        let spec = mk_real_game(GameKind::ReapingStar).unwrap();
        let ones = always_one();
        let (t, _) = play_match(&spec, &flipper(), &ones, 4, &WitnessFamily::None).unwrap();
        assert_eq!(i_bits(&t.moves), vec![false, true, false, true]);
        let play = replay(&flipper(), &bits(&[0, 0, 0])).unwrap();
        assert_eq!(i_bits(&play), vec![false; 4]);
        let play = replay(&flipper(), &bits(&[1, 0, 1, 0])).unwrap();
        assert_eq!(i_bits(&play), vec![false, true, true, false, false]);
    }

    #[test]
    fn enumeration_forcing_examples() {
        let s = enumeration_forcing(Rule::affine(2, 0));
        let play = replay(&s, &bits(&[0, 1, 1])).unwrap();
        let nats: Vec<u64> = i_moves(&play).map(|m| m.as_nat().unwrap()).collect();
        assert_eq!(nats, vec![0, 1, 3, 5]);
        let play = replay(&s, &bits(&[1, 1, 1])).unwrap();
        let nats: Vec<u64> = i_moves(&play).map(|m| m.as_nat().unwrap()).collect();
        assert_eq!(nats, vec![0, 2, 4, 6]);
        let bad = enumeration_forcing(Rule::constant(3));
        assert!(matches!(replay(&bad, &bits(&[1])), Err(Error::Construction(_))));
    }

    #[test]
    fn simult_examples() {
        let w = simult_witness(SetGen::evens(), Rule::affine(2, 0));
        assert_eq!(w.at(1).first_n(3), vec![2, 4, 6]);
        let z = simult_witness(SetGen::evens(), Rule::constant(0));
        assert_eq!(z.at(5), SetGen::evens());

        let flat = simult_walk(&|_| SetGen::evens(), 5).unwrap();
        assert_eq!(flat.range.elements(), &[0]);
        assert!(flat.repeats);
        let growing = simult_walk(&|t| SetGen::naturals().tail(t.iter().sum::<u64>() + 1), 4).unwrap();
        assert_eq!(growing.walk, vec![1, 2, 4, 8]);
        assert!(!growing.repeats);
        assert!(simult_walk(&|_| SetGen::empty(), 1).is_err());
    }

    #[test]
    fn reconstruction_examples() {
        let sigma = scripted(Role::I, GameKind::Reaping, vec![Move::Nat(0)]);
        let t = play_reconstruction(&sigma, &SetGen::evens(), 6, 64).unwrap();
        let ii: Vec<bool> = t.ii_moves().map(|m| m.as_bit().unwrap()).collect();
        assert_eq!(ii, vec![true, false, true, false, true, false]);
        let t = play_reconstruction(&sigma, &SetGen::naturals(), 5, 64).unwrap();
        assert!(t.ii_moves().all(|m| m.as_bit() == Some(true)));
        let shifted = scripted(Role::I, GameKind::Reaping, vec![Move::Nat(1)]);
        assert_eq!(
            play_reconstruction(&shifted, &SetGen::progression(0, 3), 4, 64),
            Err(Error::ReconstructionFailed { round: 0 })
        );
    }

    #[test]
    fn labels_follow_one_then_zeros() {
        let sigma = scripted(Role::I, GameKind::Reaping, vec![Move::Nat(0)]);
        assert_eq!(successor_labels(&sigma, &[], 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(successor_labels(&sigma, &[false, true], 2).unwrap(), vec![3, 4]);
    }
}
