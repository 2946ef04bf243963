use arena_core::engine::play_match;
use arena_core::harness::{
    brute_force_ed_cost, ed_cover_oracle_with, random_strategy, replay_counterexample, run_suite, SuiteConfig,
    SUITES,
};
use arena_core::ideals::ed_cost_from_multiplicities;
use arena_core::{CostIdeal, Error, GameKind, GameSpec, Role, WitnessFamily};

fn small_ed_cfg() -> SuiteConfig {
    SuiteConfig {
        depth: 4,
        width: 4,
        ..SuiteConfig::new("ed-cover-oracle").unwrap()
    }
}

/// The scan as it would be if `j = 0` (no lines) were forgotten.
fn no_zero_lines(points: &[(u64, u64)]) -> u64 {
    let mut cols = std::collections::BTreeMap::<u64, u64>::new();
    points.iter().for_each(|&(a, _)| *cols.entry(a).or_default() += 1);
    let mut m: Vec<u64> = cols.into_values().collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    (1..=m.len())
        .map(|j| j as u64 + m.get(j).copied().unwrap_or(0))
        .min()
        .unwrap_or(0)
}

#[test]
fn brute_force_examples() {
    assert_eq!(brute_force_ed_cost(&[(0, 0), (1, 1), (2, 2)]), 1);
    let f = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)];
    assert_eq!(brute_force_ed_cost(&f), 3);
    assert_eq!(ed_cost_from_multiplicities(&[3, 2, 1]).0, 3);
    assert_eq!(brute_force_ed_cost(&[]), 0);
}

#[test]
fn true_formula_passes_small_grid() {
    let r = ed_cover_oracle_with(&small_ed_cfg(), &|p| CostIdeal::Ed.cost_of_pairs(p).unwrap());
    assert!(r.passed(), "{}", r.render());
}

#[test]
fn off_by_one_formula_is_caught_with_a_smallest_set() {
    let r = ed_cover_oracle_with(&small_ed_cfg(), &no_zero_lines);
    assert!(!r.passed());
    let first = &r.counterexamples[0];
    assert_eq!(first.property, "formula-equals-brute-force");
    // Two points in distinct columns is the smallest disagreement.
    assert_eq!(first.weight, 2);
    assert!(r.counterexamples.iter().all(|c| c.weight >= 2));
    assert!(first.detail.contains("formula 2 but brute force 1"), "{}", first.detail);
}

#[test]
fn plus_one_formula_fails_on_the_empty_set() {
    let r = ed_cover_oracle_with(&small_ed_cfg(), &|p| CostIdeal::Ed.cost_of_pairs(p).unwrap() + 1);
    assert_eq!(r.counterexamples[0].weight, 0);
    assert!(r.counterexamples[0].detail.starts_with("F = []"));
}

#[test]
fn registry_is_complete() {
    for s in SUITES {
        let cfg = SuiteConfig::new(s).unwrap();
        assert!(cfg.render().starts_with(&format!("suite={s} ")));
    }
    assert!(matches!(SuiteConfig::new("nonexistent"), Err(Error::UnknownSuite(_))));
}

#[test]
fn reports_are_deterministic_and_echo_config() {
    for s in ["dominator", "perfect-subtree", "hs-replay", "generic-play"] {
        let cfg = SuiteConfig::new(s).unwrap().with_seed(42);
        let a = run_suite(&cfg).unwrap();
        assert_eq!(a, run_suite(&cfg).unwrap());
        assert!(a.passed(), "{}", a.render());
        assert!(a.render().starts_with(&format!("config {}", cfg.render())));
    }
}

#[test]
fn passing_trials_do_not_replay_as_failures() {
    let cfg = SuiteConfig {
        trials: 20,
        ..SuiteConfig::new("flipper").unwrap()
    };
    let r = run_suite(&cfg).unwrap();
    assert!(r.passed());
    let fake = arena_core::harness::Counterexample {
        property: "minority-split".into(),
        trial: 3,
        seed: arena_core::harness::sub_seed(0, 3),
        detail: String::new(),
        transcript: None,
        weight: 0,
    };
    assert!(!replay_counterexample(&cfg, &fake).unwrap());
}

#[test]
fn random_tallness_i_increases() {
    let spec = GameSpec::for_kind(GameKind::Tallness, None, None).unwrap();
    let i = random_strategy(Role::I, GameKind::Tallness, 1);
    let ii = random_strategy(Role::II, GameKind::Tallness, 2);
    let (t, _) = play_match(&spec, &i, &ii, 100, &WitnessFamily::None).unwrap();
    let v: Vec<u64> = t.i_moves().map(|m| m.as_nat().unwrap()).collect();
    assert!(v.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn random_hmm_replies_avoid_the_forbidden_set() {
    let spec = GameSpec::for_kind(GameKind::Hmm, None, None).unwrap();
    for seed in 0..20 {
        let i = random_strategy(Role::I, GameKind::Hmm, seed);
        let ii = random_strategy(Role::II, GameKind::Hmm, seed + 50);
        let (t, _) = play_match(&spec, &i, &ii, 60, &WitnessFamily::None).unwrap();
        for (f, n) in t.i_moves().zip(t.ii_moves()) {
            assert!(!f.as_set().unwrap().contains(n.as_nat().unwrap()));
        }
    }
}

#[test]
fn same_seed_same_play() {
    let spec = GameSpec::for_kind(GameKind::ReapingStar, None, None).unwrap();
    let play = |s| {
        let i = random_strategy(Role::I, GameKind::ReapingStar, s);
        let ii = random_strategy(Role::II, GameKind::ReapingStar, s + 1);
        play_match(&spec, &i, &ii, 80, &WitnessFamily::None).unwrap().0
    };
    assert_eq!(play(5), play(5));
    assert_ne!(play(5), play(6));
}
