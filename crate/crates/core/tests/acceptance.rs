//! The acceptance criteria, run in sequence so the time bounds are measured
//! without other tests competing for the CPU. One line is printed per
//! criterion; the test fails if any criterion does.

use std::time::{Duration, Instant};

use arena_core::engine::{play_match, TranscriptRecord};
use arena_core::harness::{random_strategy, run_suite, Report, SuiteConfig};
use arena_core::{GameKind, GameSpec, Role, WitnessFamily};

struct Outcome {
    ok: bool,
    note: String,
}

fn property_count(r: &Report, name: &str) -> usize {
    r.properties.iter().find(|p| p.name == name).map_or(0, |p| p.checked)
}

/// Runs a suite and demands that it pass with each named property checked at
/// least the given number of times.
fn suite(cfg: SuiteConfig, needs: &[(&str, usize)]) -> Outcome {
    match run_suite(&cfg) {
        Ok(r) => judge(&r, needs),
        Err(e) => Outcome {
            ok: false,
            note: format!("{}: {e}", cfg.suite),
        },
    }
}

fn judge(r: &Report, needs: &[(&str, usize)]) -> Outcome {
    let mut missing: Vec<String> = needs
        .iter()
        .filter(|(p, n)| property_count(r, p) < *n)
        .map(|(p, n)| format!("{p} checked {} < {n}", property_count(r, p)))
        .collect();
    if !r.passed() {
        missing.push(r.render());
    }
    let checked: usize = r.properties.iter().map(|p| p.checked).sum();
    Outcome {
        ok: missing.is_empty(),
        note: if missing.is_empty() {
            format!("{}: {checked} checks", r.config.suite)
        } else {
            format!("{}: {}", r.config.suite, missing.join("; "))
        },
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        ok: parts.iter().all(|o| o.ok),
        note: parts.iter().map(|o| o.note.as_str()).collect::<Vec<_>>().join(", "),
    }
}

fn cfg(name: &str) -> SuiteConfig {
    SuiteConfig::new(name).unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn flipper() -> Outcome {
    let c = SuiteConfig {
        trials: 1000,
        horizon: 200,
        ..cfg("flipper")
    };
    suite(c, &[("minority-split", 1000)])
}

fn ed_cover() -> Outcome {
    let c = SuiteConfig {
        depth: 8,
        width: 6,
        ..cfg("ed-cover-oracle")
    };
    let r = match run_suite(&c) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                ok: false,
                note: e.to_string(),
            }
        }
    };
    let want: u64 = (1..=8).map(|k| binomial(36, k)).sum();
    let seen = r.stats.get("sets").copied().unwrap_or(0);
    let mut o = judge(&r, &[("formula-equals-brute-force", 36), ("certificate-covers", 36)]);
    if seen != want {
        o.ok = false;
        o.note = format!("{}; {seen} nonempty sets enumerated, expected {want}", o.note);
    } else if o.ok {
        o.note = format!("{seen} nonempty sets and the empty set");
    }
    o
}

fn selector() -> Outcome {
    let c = SuiteConfig {
        trials: 500,
        horizon: 300,
        ..cfg("selector-cost")
    };
    suite(c, &[("selection-cost", 500), ("selection-size", 500)])
}

fn kb_lift() -> Outcome {
    let c = SuiteConfig {
        trials: 500,
        ..cfg("kb-lift-equiv")
    };
    suite(c, &[("incremental-equals-scratch", 500), ("image-in-base-selection", 500)])
}

fn round_trips() -> Outcome {
    let hmm = SuiteConfig {
        trials: 200,
        horizon: 200,
        ..cfg("hmm-roundtrip")
    };
    let gb = SuiteConfig {
        trials: 200,
        horizon: 200,
        ..cfg("gb-roundtrip")
    };
    all(vec![
        suite(hmm, &[("answers-match-simulation", 200), ("transcript-at-every-horizon", 200)]),
        suite(
            gb,
            &[
                ("answers-match-simulation", 200),
                ("transcript-at-every-horizon", 200),
                ("branching-equals-composite", 1),
            ],
        ),
    ])
}

fn tree_path() -> Outcome {
    let c = SuiteConfig {
        trials: 200,
        horizon: 100,
        ..cfg("tree-path")
    };
    suite(c, &[("tree-player-i-on-tree", 200), ("g-from-tree-on-tree", 200)])
}

fn defining_equations() -> Outcome {
    let response = SuiteConfig {
        trials: 1000,
        ..cfg("response-exactness")
    };
    let dominator = SuiteConfig {
        horizon: 100,
        ..cfg("dominator")
    };
    let envelope = SuiteConfig {
        trials: 5,
        depth: 8,
        horizon: 64,
        ..cfg("envelope")
    };
    all(vec![
        suite(response, &[("bit-equals-relation", 1000)]),
        suite(dominator, &[("strict-inequality", 5)]),
        suite(envelope, &[("envelope-dominates", 5)]),
    ])
}

fn perfect() -> Outcome {
    let c = SuiteConfig {
        horizon: 6,
        ..cfg("perfect-subtree")
    };
    suite(c, &[("complete", 3), ("projections-distinct", 3), ("differ-at-split", 3)])
}

fn hs() -> Outcome {
    suite(cfg("hs-replay"), &[("zeros-then-one", 3), ("witness-shape", 3)])
}

fn generic() -> Outcome {
    let c = SuiteConfig {
        horizon: 32,
        ..cfg("generic-play")
    };
    suite(c, &[("all-met", 1), ("met-witness-certified", 1)])
}

fn transcripts() -> Outcome {
    let mut bad = Vec::new();
    for i in 0..100u64 {
        let kind = GameKind::ALL[i as usize % GameKind::ALL.len()];
        let spec = GameSpec::for_kind(kind, None, None).unwrap();
        let a = random_strategy(Role::I, kind, i);
        let b = random_strategy(Role::II, kind, i + 1000);
        let (t, v) = play_match(&spec, &a, &b, (i % 37) as usize, &WitnessFamily::None).unwrap();
        let mut rec = TranscriptRecord::new(&t, (i % 3 != 0).then_some(v));
        if i % 4 == 0 {
            rec = rec.with_param("seed", i.to_string());
        }
        let text = rec.to_text();
        match TranscriptRecord::parse(&text) {
            Ok(back) if back == rec && back.to_text() == text && back.transcript() == t => {}
            other => bad.push(format!("#{i} ({kind}): {other:?}")),
        }
    }
    Outcome {
        ok: bad.is_empty(),
        note: if bad.is_empty() {
            "100 of 100 byte-exact".into()
        } else {
            bad.join("; ")
        },
    }
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 11] = [
        ("flipper soundness", flipper, Some(Duration::from_secs(5))),
        ("ED cover-cost oracle", ed_cover, Some(Duration::from_secs(60))),
        ("ED_fin selector certificate", selector, None),
        ("KB-lift equivalence", kb_lift, None),
        ("translation round-trips", round_trips, None),
        ("tree-path invariants", tree_path, None),
        ("defining-equation checks", defining_equations, None),
        ("perfect subtree", perfect, None),
        ("H_s replay", hs, None),
        ("generic play", generic, None),
        ("transcript format", transcripts, None),
    ];
    println!("\nacceptance criteria:");
    let mut failed = Vec::new();
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took >= limit {
                o.ok = false;
                o.note = format!("{} (over the {limit:?} bound)", o.note);
            }
        }
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("[{mark}] {name} ({:.2}s): {}", took.as_secs_f64(), o.note);
        if !o.ok {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
