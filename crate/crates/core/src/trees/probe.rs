//! Probing a natural-valued Player II strategy for an answer sequence that
//! ignores Player I's moves.

use crate::engine::{play_match, GameKind, HorizonVerdict, Move, Role, Strategy, Transcript};
use crate::games::{GameSpec, WitnessFamily};
use crate::sets::FinSet;
use crate::strategies::{expect_nat, pad_to, scripted, Scripted};
use crate::trees::{find_splitting, sibling_split, SplittingCertificate};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum TailProbe {
    /// Two continuations draw different answers.
    Refuted(SplittingCertificate),
    /// Every probed continuation drew the answers `tail`; `exploit` plays
    /// against them and `transcript` is the exploit's match.
    Tail {
        tail: Vec<u64>,
        exploit: Scripted,
        transcript: Transcript,
        verdict: HorizonVerdict,
    },
}

impl TailProbe {
    /// A `tail v1` file: either the refuting split or the constant tail with
    /// the exploit's verdict.
    pub fn to_text(&self) -> String {
        match self {
            TailProbe::Refuted(cert) => format!("tail v1\nrefuted\n{}", cert.to_text()),
            TailProbe::Tail {
                tail,
                transcript,
                verdict,
                ..
            } => {
                let tail: Vec<String> = tail.iter().map(u64::to_string).collect();
                let exploit: Vec<String> = transcript.i_moves().map(Move::to_string).collect();
                format!(
                    "tail v1\nconstant {}\nexploit {}\nverdict {verdict}\n",
                    tail.join(" "),
                    exploit.join(" ")
                )
            }
        }
    }
}

/// Player I's move copying the answer `m` at round `k`: the answer itself,
/// or a slalom containing it.
fn copy_move(kind: GameKind, k: usize, m: u64) -> Move {
    match kind {
        GameKind::AntiLocalizingStar => Move::FinSet(pad_to(&FinSet::from_iter([m]), k + 1)),
        _ => Move::Nat(m),
    }
}

/// Looks for a splitting within `depth` moves; failing that, reads off the
/// answers along the least candidate moves and plays Player I copying them.
pub fn constant_tail_probe(
    spec: &GameSpec,
    tau: &dyn Strategy,
    depth: usize,
    width: u64,
) -> Result<TailProbe> {
    let kind = spec.kind;
    if tau.role() != Role::II
        || !matches!(
            kind,
            GameKind::BoundingStar | GameKind::DominatingStar | GameKind::AntiLocalizingStar
        )
    {
        return Err(Error::Config(format!(
            "the tail probe needs a player II strategy of a star game, not {} in {kind}",
            tau.role()
        )));
    }
    if let Some(cert) = find_splitting(spec, tau, &[], depth, width)? {
        return Ok(TailProbe::Refuted(cert));
    }
    let rounds = depth / 2;
    let mut path = Vec::with_capacity(2 * rounds);
    let mut tail = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let c = spec
            .candidate_moves(&path, 1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Config(format!("no candidate move for player I in {kind}")))?;
        path.push(c);
        let m = tau.next_move(&path)?;
        tail.push(expect_nat(&m)?);
        path.push(m);
    }
    let moves: Vec<Move> = tail.iter().enumerate().map(|(k, &m)| copy_move(kind, k, m)).collect();
    let exploit = scripted(Role::I, kind, moves);
    let (transcript, verdict) = play_match(spec, &exploit, tau, rounds, &WitnessFamily::None)?;
    let answers: Vec<u64> = transcript.ii_moves().map(expect_nat).collect::<Result<_>>()?;
    if let Some(r) = (0..rounds).find(|&r| answers.get(r) != tail.get(r)) {
        // The exploit met different answers; look for siblings that show it.
        for j in 0..=r {
            let base = &transcript.moves[..2 * j];
            let mut options = spec.candidate_moves(base, width);
            options.push(transcript.moves[2 * j].clone());
            let (cert, _) = sibling_split(tau, base, &options)?;
            if let Some(cert) = cert {
                return Ok(TailProbe::Refuted(cert));
            }
        }
        return Err(Error::SearchExhausted(format!(
            "the exploit drew a different answer at round {r} but no sibling split was found"
        )));
    }
    Ok(TailProbe::Tail {
        tail,
        exploit,
        transcript,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::StatKey;
    use crate::games::mk_real_game;
    use crate::strategies::{constant, echo};

    #[test]
    fn constant_answers_are_copied() {
        let spec = mk_real_game(GameKind::BoundingStar).unwrap();
        match constant_tail_probe(&spec, &constant(Role::II, 4), 8, 4).unwrap() {
            TailProbe::Tail {
                tail,
                transcript,
                verdict,
                ..
            } => {
                assert_eq!(tail, vec![4; 4]);
                assert!(transcript.i_moves().zip(transcript.ii_moves()).all(|(a, b)| a == b));
                assert_eq!(verdict.stat(StatKey::EscapeCount), Some(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn echo_is_refuted() {
        let spec = mk_real_game(GameKind::BoundingStar).unwrap();
        match constant_tail_probe(&spec, &echo(), 8, 4).unwrap() {
            TailProbe::Refuted(cert) => {
                assert!(cert.replay(&spec, &echo()).unwrap());
                let text = TailProbe::Refuted(cert).to_text();
                assert!(text.starts_with("tail v1\nrefuted\nsplit at "), "{text}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slalom_exploit_contains_the_answer() {
        let spec = mk_real_game(GameKind::AntiLocalizingStar).unwrap();
        match constant_tail_probe(&spec, &constant(Role::II, 7), 6, 3).unwrap() {
            TailProbe::Tail {
                transcript, verdict, ..
            } => {
                for (k, m) in transcript.i_moves().enumerate() {
                    let a = m.as_set().unwrap();
                    assert_eq!(a.len(), k + 1);
                    assert!(a.contains(7));
                }
                assert_eq!(verdict.stat(StatKey::EscapeCount), Some(0));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
