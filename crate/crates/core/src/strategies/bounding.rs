//! Response play, the diagonal envelope of a Player I strategy, and the
//! diagonal dominator.

use num_bigint::BigUint;

use crate::engine::{replay, GameKind, Move, Role, Strategy, StrategyRef};
use crate::rule::Rule;
use crate::strategies::{expect_nat, expect_set};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseMode {
    /// bit 1 iff `n_k < x(k)`
    Bounding,
    /// bit 1 iff `x(k) ∉ a_k`
    AntiLocalizing,
}

/// Player II answering by the defining relation against a fixed real.
#[derive(Clone)]
pub struct ResponsePlay {
    sigma: Option<StrategyRef>,
    x: Rule,
    mode: ResponseMode,
}

/// With `sigma` given, the move compared at round `k` is what `sigma` plays
/// there; otherwise it is Player I's observed move.
pub fn response_play(sigma: Option<StrategyRef>, x: Rule, mode: ResponseMode) -> ResponsePlay {
    ResponsePlay { sigma, x, mode }
}

impl Strategy for ResponsePlay {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        match self.mode {
            ResponseMode::Bounding => format!("response:bounding:g={}", self.x),
            ResponseMode::AntiLocalizing => format!("response:anti-localizing:x={}", self.x),
        }
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let k = prefix.len() / 2;
        let observed;
        let m = match &self.sigma {
            Some(s) => {
                observed = s.next_move(&prefix[..2 * k])?;
                &observed
            }
            None => crate::strategies::last_move(prefix)?,
        };
        let x = self.x.eval(k as u64);
        let bit = match self.mode {
            ResponseMode::Bounding => expect_nat(m)? < x,
            ResponseMode::AntiLocalizing => !expect_set(m)?.contains(x),
        };
        Ok(Move::Bit(bit))
    }
}

/// Code of a finite sequence: `Σ_j 2^(s(0)+...+s(j)+j)`.
pub fn sequence_code(s: &[u64]) -> BigUint {
    let mut code = BigUint::ZERO;
    let mut exp: u64 = 0;
    for (j, &v) in s.iter().enumerate() {
        exp += v + if j == 0 { 0 } else { 1 };
        code.set_bit(exp, true);
    }
    code
}

/// Inverse of `sequence_code`: the gaps between set bits.
pub fn sequence_decode(code: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(code.count_ones() as usize);
    let mut prev: i64 = -1;
    let mut rest = code;
    while rest != 0 {
        let p = rest.trailing_zeros() as i64;
        out.push((p - prev - 1) as u64);
        prev = p;
        rest &= rest - 1;
    }
    out
}

/// `i`-th binary string in shortlex order: `⟨⟩, ⟨0⟩, ⟨1⟩, ⟨00⟩, ...`.
fn shortlex_binary(i: u64) -> Vec<bool> {
    let len = 63 - (i + 1).leading_zeros() as usize;
    let v = i + 1 - (1u64 << len);
    (0..len).rev().map(|b| (v >> b) & 1 == 1).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct DiagonalEnvelopeOptions {
    /// Also take the maximum over every binary string of length at most
    /// this (capped at `n`), not only the strings enumerated before `n`.
    pub window: usize,
    /// Strategy calls allowed for the bounding* tree maxima.
    pub node_budget: usize,
}

impl Default for DiagonalEnvelopeOptions {
    fn default() -> Self {
        DiagonalEnvelopeOptions {
            window: 8,
            node_budget: 1 << 20,
        }
    }
}

/// Player I's move at round `n` when Player II has played `ii`.
fn sigma_at(sigma: &dyn Strategy, ii: &[Move]) -> Result<u64> {
    let play = replay(sigma, ii)?;
    expect_nat(play.last().expect("player I always moves"))
}

/// `f(n)` for the envelope of Player I strategy `sigma`.
pub fn diagonal_envelope(
    sigma: &dyn Strategy,
    kind: GameKind,
    n: usize,
    opts: DiagonalEnvelopeOptions,
) -> Result<u64> {
    if n == 0 {
        return Ok(0);
    }
    match kind {
        GameKind::Bounding | GameKind::Dominating => {
            let mut strings: Vec<Vec<bool>> = (0..n as u64).map(shortlex_binary).collect();
            let w = opts.window.min(n);
            let window_count = (1u64 << (w + 1)) - 1;
            strings.extend((n as u64..window_count).map(shortlex_binary));
            let mut best = 0;
            for s in strings {
                let bits: Vec<Move> = s
                    .iter()
                    .copied()
                    .chain(std::iter::repeat(false))
                    .take(n)
                    .map(Move::Bit)
                    .collect();
                best = best.max(sigma_at(sigma, &bits)?);
            }
            Ok(best)
        }
        GameKind::BoundingStar | GameKind::DominatingStar => {
            let mut best = 0;
            for i in 0..n as u64 {
                let s = sequence_decode(i);
                best = best.max(tree_maximum(sigma, &s, n, opts.node_budget)?);
            }
            Ok(best)
        }
        other => Err(Error::Config(format!("no envelope for {other}"))),
    }
}

/// `σ_s(n)`: the largest value a sequence extending `s` can take at `n`
/// when every later value is capped by Player I's move.
pub fn tree_maximum(sigma: &dyn Strategy, s: &[u64], n: usize, budget: usize) -> Result<u64> {
    if n < s.len() {
        return Ok(s[n]);
    }
    let mut calls = 0usize;
    let mut best = 0;
    let mut stack: Vec<Vec<Move>> = vec![replay(sigma, &s.iter().map(|&v| Move::Nat(v)).collect::<Vec<_>>())?];
    while let Some(play) = stack.pop() {
        let cap = expect_nat(play.last().expect("player I always moves"))?;
        let depth = play.len() / 2;
        if depth == n {
            best = best.max(cap);
            continue;
        }
        for v in 0..=cap {
            calls += 1;
            if calls > budget {
                return Err(Error::SearchExhausted(format!(
                    "tree maximum at depth {n} needs more than {budget} strategy calls"
                )));
            }
            let mut next = play.clone();
            next.push(Move::Nat(v));
            let m = sigma.next_move(&next)?;
            next.push(m);
            stack.push(next);
        }
    }
    Ok(best)
}

/// Limit on the code exponent so codes stay computable.
const MAX_CODE_BITS: u64 = 1 << 20;

/// The first `terms` values of `g'(n) = g(code(g'↾n)) + 1`.
pub fn diagonal_dominator(g: &Rule, terms: usize) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = Vec::with_capacity(terms);
    let mut exp_sum: u64 = 0;
    for n in 0..terms {
        if exp_sum > MAX_CODE_BITS {
            return Err(Error::Construction(format!(
                "the code of g'↾{n} has more than {MAX_CODE_BITS} bits"
            )));
        }
        let value = g.eval_big(&sequence_code(&out)) + 1u32;
        let v = u64::try_from(&value).map_err(|_| {
            Error::Construction(format!("g'({n}) does not fit in 64 bits"))
        })?;
        exp_sum = exp_sum.saturating_add(v).saturating_add(1);
        out.push(v);
    }
    Ok(out)
}
