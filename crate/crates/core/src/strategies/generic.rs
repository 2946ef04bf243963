//! Greedy construction of a Player I slalom play meeting the dense sets
//! `D_x` for finitely many reals `x`.

use crate::engine::{play_match, GameKind, Move, Strategy, Transcript};
use crate::games::{mk_real_game, WitnessFamily};
use crate::rule::Rule;
use crate::sets::FinSet;
use crate::strategies::{expect_bit, expect_set, i_moves, ii_moves};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericPlay {
    pub transcript: Transcript,
    /// The round at which each witness's set was met.
    pub met: Vec<Option<usize>>,
    /// Indices of the witnesses never met within the horizon.
    pub unmet: Vec<usize>,
}

/// `{x} ∪` the `k` least naturals other than `x`.
fn slalom_through(x: u64, k: usize) -> FinSet {
    std::iter::once(x)
        .chain((0..).filter(|&n| n != x).take(k))
        .collect()
}

/// Player I aiming each round at the first witness not yet met.
struct Greedy<'a> {
    witnesses: &'a [Rule],
}

impl Greedy<'_> {
    fn met_by(&self, prefix: &[Move]) -> Result<Vec<Option<usize>>> {
        let mut met = vec![None; self.witnesses.len()];
        for (k, (a, b)) in i_moves(prefix).zip(ii_moves(prefix)).enumerate() {
            if !expect_bit(b)? {
                continue;
            }
            let a = expect_set(a)?;
            for (w, x) in self.witnesses.iter().enumerate() {
                if met[w].is_none() && a.contains(x.eval(k as u64)) {
                    met[w] = Some(k);
                }
            }
        }
        Ok(met)
    }
}

impl Strategy for Greedy<'_> {
    fn role(&self) -> crate::Role {
        crate::Role::I
    }

    fn label(&self) -> String {
        "generic-greedy".into()
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let k = prefix.len() / 2;
        let met = self.met_by(prefix)?;
        Ok(Move::FinSet(match met.iter().position(Option::is_none) {
            Some(w) => slalom_through(self.witnesses[w].eval(k as u64), k),
            None => FinSet::range_below(k as u64 + 1),
        }))
    }
}

/// Plays the greedy slalom against `tau` for `horizon` rounds. A witness is
/// met at the first round where `tau` answered 1 and the slalom caught it.
pub fn dense_set_generic_play(tau: &dyn Strategy, witnesses: &[Rule], horizon: usize) -> Result<GenericPlay> {
    let spec = mk_real_game(GameKind::AntiLocalizing)?;
    let greedy = Greedy { witnesses };
    let (transcript, verdict) = play_match(&spec, &greedy, tau, horizon, &WitnessFamily::None)?;
    if let crate::Status::Forfeit { by, round } = verdict.status {
        return Err(Error::IllegalMove(format!("player {by} forfeited the generic play at round {round}")));
    }
    let met = greedy.met_by(&transcript.moves)?;
    let unmet = (0..met.len()).filter(|&w| met[w].is_none()).collect();
    Ok(GenericPlay {
        transcript,
        met,
        unmet,
    })
}
