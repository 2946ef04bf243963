use arena_core::engine::play_match;
use arena_core::harness::random_strategy;
use arena_core::strategies::spec::{parse_strategy, SpecContext};
use arena_core::strategies::{always_one, hmm_player_ii, share};
use arena_core::{CostIdeal, GameKind, GameSpec, Role, Rule, Status, WitnessFamily};
use proptest::prelude::*;

#[test]
fn always_one_under_a_dominating_witness() {
    let spec = GameSpec::for_kind(GameKind::Bounding, None, None).unwrap();
    let w = WitnessFamily::Reals(vec![Rule::affine(1, 100)]);
    for seed in 0..10 {
        let i = random_strategy(Role::I, GameKind::Bounding, seed);
        for h in 0..30 {
            let (_, v) = play_match(&spec, &i, &always_one(), h, &w).unwrap();
            assert_eq!(v.status, Status::ConsistentII, "seed {seed} horizon {h}");
        }
    }
}

#[test]
fn always_one_against_an_escaping_real() {
    let spec = GameSpec::for_kind(GameKind::AntiLocalizing, None, None).unwrap();
    let w = WitnessFamily::Reals(vec![Rule::affine(1, 1000)]);
    for seed in 0..10 {
        let i = random_strategy(Role::I, GameKind::AntiLocalizing, seed);
        let (_, v) = play_match(&spec, &i, &always_one(), 40, &w).unwrap();
        assert_eq!(v.status, Status::ConsistentII);
    }
}

const CATALOG: [(GameKind, Role, &str); 10] = [
    (GameKind::ReapingStar, Role::I, "flipper"),
    (GameKind::Tallness, Role::II, "ed-fin-selector"),
    (GameKind::Tallness, Role::II, "kb-lift(ed-fin-selector,f=k->k/2)"),
    (GameKind::Tallness, Role::II, "tallness-from-hmm(threshold:2)"),
    (GameKind::Tallness, Role::I, "tree:@edfin"),
    (GameKind::TallnessStar, Role::II, "branching-tree:@edfin"),
    (GameKind::GameB, Role::II, "b-from-g(g-from-tree:@edfin)"),
    (GameKind::Hmm, Role::I, "hmm-from-tallness(ed-fin-selector)"),
    (GameKind::Reaping, Role::I, "enum-forcing:f=k->2*k"),
    (GameKind::Bounding, Role::II, "response:bounding:g=k->k"),
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Querying prefixes out of order gives the same moves as playing through.
    #[test]
    fn strategies_are_stateless(which in 0..CATALOG.len(), seed in any::<u64>()) {
        let (kind, role, src) = CATALOG[which];
        let mut ctx = SpecContext::new(kind, role);
        ctx.ideal = CostIdeal::EdFin;
        let s = parse_strategy(src, &ctx).unwrap();
        let spec = GameSpec::for_kind(kind, None, None).unwrap();
        let other = random_strategy(role.opponent(), kind, seed);
        let (t, v) = if role == Role::I {
            play_match(&spec, s.as_ref(), &other, 12, &WitnessFamily::None).unwrap()
        } else {
            play_match(&spec, &other, s.as_ref(), 12, &WitnessFamily::None).unwrap()
        };
        let forfeit = matches!(v.status, Status::Forfeit { .. });
        prop_assert!(!forfeit, "{}: {:?}", src, v.status);
        let own: Vec<usize> = (0..t.moves.len()).filter(|&n| Role::to_move(n) == role).collect();
        for &n in own.iter().rev() {
            prop_assert_eq!(&s.next_move(&t.moves[..n]).unwrap(), &t.moves[n]);
        }
    }

    #[test]
    fn hmm_player_ii_emits_increasing_replies(seed in any::<u64>()) {
        let spec = GameSpec::for_kind(GameKind::Hmm, None, None).unwrap();
        let sigma = share(random_strategy(Role::I, GameKind::Tallness, seed));
        let f = random_strategy(Role::I, GameKind::Hmm, seed ^ 7);
        let (t, v) = play_match(&spec, &f, &hmm_player_ii(sigma), 20, &WitnessFamily::None).unwrap();
        let forfeit = matches!(v.status, Status::Forfeit { .. });
        prop_assert!(!forfeit);
        let replies: Vec<u64> = t.ii_moves().map(|m| m.as_nat().unwrap()).collect();
        prop_assert!(replies.windows(2).all(|w| w[0] < w[1]), "{:?}", replies);
    }
}
