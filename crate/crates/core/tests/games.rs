//! One legal play per game, after the play tables, and one-symbol mutations
//! of each that the referee must reject.

use arena_core::engine::interleave;
use arena_core::{FinSet, GameKind, GameSpec, IdealSetDesc, Move, Role, Shape};

fn nats(v: &[u64]) -> Vec<Move> {
    v.iter().map(|&n| Move::Nat(n)).collect()
}

fn bits(v: &[u8]) -> Vec<Move> {
    v.iter().map(|&b| Move::bit(u64::from(b))).collect()
}

fn sets(v: &[&str]) -> Vec<Move> {
    v.iter().map(|s| Move::FinSet(s.parse().unwrap())).collect()
}

fn ideal_sets(v: &[&str]) -> Vec<Move> {
    v.iter()
        .map(|s| Move::IdealSet(IdealSetDesc::Finite(s.parse::<FinSet>().unwrap())))
        .collect()
}

fn fixture(kind: GameKind) -> Vec<Move> {
    use GameKind::*;
    let (i, ii) = match kind {
        Bounding | Dominating => (nats(&[0, 5, 2]), bits(&[1, 0, 1])),
        AntiLocalizing => (sets(&["{0}", "{1,2}", "{4,7,9}"]), bits(&[0, 1, 1])),
        BoundingStar | DominatingStar => (nats(&[0, 5, 2]), nats(&[1, 6, 8])),
        AntiLocalizingStar => (sets(&["{0}", "{1,2}", "{4,7,9}"]), nats(&[3, 0, 5])),
        Reaping => (nats(&[1, 3, 4]), bits(&[0, 1, 0])),
        ReapingStar => (bits(&[1, 0, 0]), bits(&[1, 1, 0])),
        Tallness | TallnessStar | GameB => (nats(&[0, 2, 5]), bits(&[1, 0, 1])),
        Hmm => (sets(&["{1,2}", "{}", "{0,5}"]), nats(&[0, 1, 3])),
        GameG => (ideal_sets(&["{0,1}", "{}", "{4}"]), nats(&[2, 3, 5])),
    };
    interleave(&i, &ii)
}

fn spec(kind: GameKind) -> GameSpec {
    GameSpec::for_kind(kind, None, None).unwrap()
}

fn rejected(kind: GameKind, moves: &[Move]) -> bool {
    !matches!(spec(kind).is_legal_play(moves), Ok(true))
}

fn with(moves: &[Move], at: usize, m: Move) -> Vec<Move> {
    let mut v = moves.to_vec();
    v[at] = m;
    v
}

fn of_shape(shape: Shape) -> Option<Move> {
    Some(match shape {
        Shape::Nat => Move::Nat(0),
        Shape::Bit => Move::Bit(true),
        Shape::FinSet => Move::FinSet("{0}".parse().unwrap()),
        Shape::IdealSet => Move::IdealSet(IdealSetDesc::Finite("{0}".parse().unwrap())),
        Shape::Pair => return None,
    })
}

#[test]
fn fixtures_are_legal() {
    for kind in GameKind::ALL {
        let play = fixture(kind);
        assert!(spec(kind).is_legal_play(&play).unwrap(), "{kind}");
        for n in 0..play.len() {
            assert!(spec(kind).step_legal(&play[..n], &play[n]).unwrap(), "{kind} move {n}");
        }
    }
}

#[test]
fn wrong_shapes_are_rejected_everywhere() {
    let shapes = [Shape::Nat, Shape::Bit, Shape::FinSet, Shape::IdealSet];
    for kind in GameKind::ALL {
        let play = fixture(kind);
        for at in 0..play.len() {
            let slot = kind.shape(Role::to_move(at));
            for m in shapes.iter().filter(|&&s| s != slot).filter_map(|&s| of_shape(s)) {
                assert!(rejected(kind, &with(&play, at, m.clone())), "{kind}: {m} at {at}");
            }
        }
    }
}

#[test]
fn increasing_moves_must_increase() {
    for kind in GameKind::ALL.into_iter().filter(|k| k.increasing_i()) {
        let play = fixture(kind);
        assert!(rejected(kind, &with(&play, 2, play[0].clone())), "{kind}: repeat");
        assert!(rejected(kind, &with(&play, 4, play[0].clone())), "{kind}: decrease");
    }
}

#[test]
fn slaloms_must_have_k_plus_one_points() {
    for kind in [GameKind::AntiLocalizing, GameKind::AntiLocalizingStar] {
        let play = fixture(kind);
        assert!(rejected(kind, &with(&play, 0, Move::FinSet(FinSet::default()))), "{kind}");
        assert!(rejected(kind, &with(&play, 2, "{1}".parse().map(Move::FinSet).unwrap())), "{kind}");
        assert!(rejected(kind, &with(&play, 4, "{4,7,9,10}".parse().map(Move::FinSet).unwrap())), "{kind}");
    }
}

#[test]
fn hmm_replies_avoid_the_forbidden_set() {
    let play = fixture(GameKind::Hmm);
    assert!(rejected(GameKind::Hmm, &with(&play, 1, Move::Nat(1))));
    assert!(rejected(GameKind::Hmm, &with(&play, 5, Move::Nat(5))));
}

#[test]
fn game_g_replies_leave_the_played_set() {
    let play = fixture(GameKind::GameG);
    assert!(rejected(GameKind::GameG, &with(&play, 1, Move::Nat(1))));
    assert!(rejected(GameKind::GameG, &with(&play, 5, Move::Nat(4))));
}

#[test]
fn real_games_accept_any_bits() {
    for kind in [GameKind::Bounding, GameKind::Reaping, GameKind::Tallness, GameKind::ReapingStar] {
        let play = fixture(kind);
        for at in (1..play.len()).step_by(2) {
            let flipped = Move::Bit(play[at].as_bit() != Some(true));
            assert!(!rejected(kind, &with(&play, at, flipped)), "{kind} at {at}");
        }
    }
}
