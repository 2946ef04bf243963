//! Seeded random adversaries and the property suites.
//!
//! All randomness is counter-based: a trial's sub-seed depends only on the
//! suite seed and the trial index, and a random strategy's move depends only
//! on its seed and the prefix it is shown. Trials can therefore run in any
//! order, on any thread, and still reproduce.

mod random;
mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{Transcript, TranscriptRecord};
use crate::ideals::CostIdeal;
use crate::{Error, Result};

pub use random::{random_strategy, RandomStrategy};
pub use suites::{brute_force_ed_cost, ed_cover_oracle_with};

/// The registered suites, in the order `verify` lists them.
pub const SUITES: [&str; 13] = [
    "flipper",
    "ed-cover-oracle",
    "selector-cost",
    "kb-lift-equiv",
    "hmm-roundtrip",
    "gb-roundtrip",
    "tree-path",
    "envelope",
    "dominator",
    "response-exactness",
    "perfect-subtree",
    "hs-replay",
    "generic-play",
];

/// The seed of trial `trial` under suite seed `seed`.
pub fn sub_seed(seed: u64, trial: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.next_u64()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub suite: String,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub depth: usize,
    pub width: u64,
    pub budget: u64,
}

impl SuiteConfig {
    /// The suite's default configuration, or an error for an unknown name.
    pub fn new(suite: &str) -> Result<Self> {
        let (trials, horizon, depth, width) = match suite {
            "flipper" => (1000, 200, 0, 0),
            "ed-cover-oracle" => (36, 0, 8, 6),
            "selector-cost" => (500, 300, 0, 0),
            "kb-lift-equiv" => (500, 200, 0, 0),
            "hmm-roundtrip" => (200, 200, 0, 0),
            "gb-roundtrip" => (200, 200, 0, 0),
            "tree-path" => (200, 100, 0, 0),
            "envelope" => (5, 64, 8, 0),
            "dominator" => (5, 100, 0, 0),
            "response-exactness" => (1000, 64, 0, 0),
            "perfect-subtree" => (3, 6, 4, 4),
            "hs-replay" => (3, 0, 6, 12),
            "generic-play" => (20, 32, 0, 0),
            other => return Err(Error::UnknownSuite(other.to_string())),
        };
        Ok(SuiteConfig {
            suite: suite.to_string(),
            horizon,
            trials,
            seed: 0,
            depth,
            width,
            budget: 1,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn render(&self) -> String {
        format!(
            "suite={} horizon={} trials={} seed={} depth={} width={} budget={}",
            self.suite, self.horizon, self.trials, self.seed, self.depth, self.width, self.budget
        )
    }
}

/// A failed check from one trial, with enough to re-run it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub property: String,
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
    pub transcript: Option<Transcript>,
    /// Size of the witness; smaller counterexamples are listed first.
    pub weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub config: SuiteConfig,
    pub properties: Vec<PropertyResult>,
    pub counterexamples: Vec<Counterexample>,
    pub stats: BTreeMap<String, u64>,
}

/// Counterexamples kept per property.
pub const MAX_COUNTEREXAMPLES: usize = 5;

impl Report {
    pub fn failures(&self) -> usize {
        self.properties.iter().map(|p| p.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "config {}", self.config.render());
        for p in &self.properties {
            let _ = writeln!(out, "property {} checked={} failed={}", p.name, p.checked, p.failed);
        }
        for (k, v) in &self.stats {
            let _ = writeln!(out, "stat {k}={v}");
        }
        for c in &self.counterexamples {
            let _ = writeln!(
                out,
                "counterexample property={} trial={} seed={}: {}",
                c.property, c.trial, c.seed, c.detail
            );
            if let Some(t) = &c.transcript {
                for line in TranscriptRecord::new(t, None).to_text().lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
        let _ = writeln!(out, "result {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}

/// What one trial found, before aggregation.
#[derive(Debug, Clone, Default)]
pub(crate) struct TrialResult {
    pub checks: Vec<Check>,
    pub stats: BTreeMap<String, u64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Check {
    pub property: &'static str,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone)]
pub(crate) struct Failure {
    pub detail: String,
    pub transcript: Option<Transcript>,
    pub weight: usize,
}

impl TrialResult {
    pub fn pass(&mut self, property: &'static str) {
        self.checks.push(Check {
            property,
            failure: None,
        });
    }

    pub fn check(&mut self, property: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.pass(property);
        } else {
            self.fail(property, detail(), None);
        }
    }

    pub fn fail(&mut self, property: &'static str, detail: String, transcript: Option<Transcript>) {
        let weight = transcript.as_ref().map_or(0, Transcript::rounds);
        self.fail_weighted(property, detail, transcript, weight);
    }

    pub fn fail_weighted(
        &mut self,
        property: &'static str,
        detail: String,
        transcript: Option<Transcript>,
        weight: usize,
    ) {
        self.checks.push(Check {
            property,
            failure: Some(Failure {
                detail,
                transcript,
                weight,
            }),
        });
    }

    pub fn stat(&mut self, key: &str, value: u64) {
        *self.stats.entry(key.to_string()).or_default() += value;
    }
}

pub(crate) type TrialFn<'a> = dyn Fn(&SuiteConfig, usize, u64) -> Result<TrialResult> + Sync + 'a;

/// Runs `trial` for every trial index in parallel and folds the results in
/// trial order.
pub(crate) fn run_trials(cfg: &SuiteConfig, trial: &TrialFn<'_>) -> Report {
    let results: Vec<(usize, u64, TrialResult)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = sub_seed(cfg.seed, i as u64);
            let r = trial(cfg, i, seed).unwrap_or_else(|e| {
                let mut r = TrialResult::default();
                r.fail("runs-without-error", e.to_string(), None);
                r
            });
            (i, seed, r)
        })
        .collect();
    aggregate(cfg, results)
}

fn aggregate(cfg: &SuiteConfig, results: Vec<(usize, u64, TrialResult)>) -> Report {
    let mut properties: Vec<PropertyResult> = Vec::new();
    let mut found: BTreeMap<&'static str, Vec<Counterexample>> = BTreeMap::new();
    let mut stats = BTreeMap::new();
    for (trial, seed, r) in results {
        for (k, v) in r.stats {
            *stats.entry(k).or_default() += v;
        }
        for c in r.checks {
            let entry = match properties.iter_mut().position(|p| p.name == c.property) {
                Some(i) => &mut properties[i],
                None => {
                    properties.push(PropertyResult {
                        name: c.property.to_string(),
                        checked: 0,
                        failed: 0,
                    });
                    properties.last_mut().expect("just pushed")
                }
            };
            entry.checked += 1;
            if let Some(f) = c.failure {
                entry.failed += 1;
                found.entry(c.property).or_default().push(Counterexample {
                    property: c.property.to_string(),
                    trial,
                    seed,
                    detail: f.detail,
                    transcript: f.transcript,
                    weight: f.weight,
                });
            }
        }
    }
    let mut counterexamples = Vec::new();
    for p in &properties {
        if let Some(mut list) = found.remove(p.name.as_str()) {
            list.sort_by_key(|c| (c.weight, c.trial));
            list.truncate(MAX_COUNTEREXAMPLES);
            counterexamples.extend(list);
        }
    }
    Report {
        config: cfg.clone(),
        properties,
        counterexamples,
        stats,
    }
}

fn trial_fn(suite: &str) -> Result<&'static TrialFn<'static>> {
    Ok(match suite {
        "flipper" => &suites::flipper,
        "ed-cover-oracle" => &suites::ed_cover_default,
        "selector-cost" => &suites::selector_cost,
        "kb-lift-equiv" => &suites::kb_lift_equiv,
        "hmm-roundtrip" => &suites::hmm_roundtrip,
        "gb-roundtrip" => &suites::gb_roundtrip,
        "tree-path" => &suites::tree_path,
        "envelope" => &suites::envelope,
        "dominator" => &suites::dominator,
        "response-exactness" => &suites::response_exactness,
        "perfect-subtree" => &suites::perfect_subtree,
        "hs-replay" => &suites::hs_replay,
        "generic-play" => &suites::generic_play,
        other => return Err(Error::UnknownSuite(other.to_string())),
    })
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let trial = trial_fn(&cfg.suite)?;
    if cfg.suite == "ed-cover-oracle" {
        // One trial per least grid point.
        let cfg = SuiteConfig {
            trials: (cfg.width * cfg.width) as usize,
            ..cfg.clone()
        };
        return Ok(run_trials(&cfg, trial));
    }
    Ok(run_trials(cfg, trial))
}

/// Re-runs the trial behind `c` and reports whether the same property
/// fails again.
pub fn replay_counterexample(cfg: &SuiteConfig, c: &Counterexample) -> Result<bool> {
    replay_with(cfg, trial_fn(&cfg.suite)?, c)
}

pub(crate) fn replay_with(cfg: &SuiteConfig, trial: &TrialFn<'_>, c: &Counterexample) -> Result<bool> {
    let r = trial(cfg, c.trial, c.seed)?;
    Ok(r.checks
        .iter()
        .any(|k| k.property == c.property && k.failure.is_some()))
}

/// The ideal a suite plays its ideal games over, when it has a choice.
pub(crate) const SUITE_IDEAL: CostIdeal = CostIdeal::EdFin;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play_match, GameKind, Role};
    use crate::games::{mk_real_game, WitnessFamily};

    /// Fails whenever a random reaping-star play opens with three 1s from II.
    fn three_ones(cfg: &SuiteConfig, _trial: usize, seed: u64) -> Result<TrialResult> {
        let spec = mk_real_game(GameKind::ReapingStar)?;
        let i = random_strategy(Role::I, GameKind::ReapingStar, seed);
        let ii = random_strategy(Role::II, GameKind::ReapingStar, seed ^ 1);
        let (t, _) = play_match(&spec, &i, &ii, cfg.horizon, &WitnessFamily::None)?;
        let mut r = TrialResult::default();
        let opens = t.ii_moves().take(3).all(|m| m.as_bit() == Some(true));
        if opens {
            r.fail("not-three-ones", "II opened 1,1,1".into(), Some(t));
        } else {
            r.pass("not-three-ones");
        }
        Ok(r)
    }

    fn cfg() -> SuiteConfig {
        SuiteConfig {
            trials: 64,
            horizon: 10,
            ..SuiteConfig::new("flipper").unwrap()
        }
    }

    #[test]
    fn counterexamples_replay() {
        let report = run_trials(&cfg(), &three_ones);
        assert!(!report.passed());
        assert!(!report.counterexamples.is_empty());
        assert!(report.counterexamples.len() <= MAX_COUNTEREXAMPLES);
        for c in &report.counterexamples {
            assert!(replay_with(&cfg(), &three_ones, c).unwrap());
            let t = c.transcript.as_ref().expect("embedded transcript");
            assert!(t.ii_moves().take(3).all(|m| m.as_bit() == Some(true)));
        }
        assert!(report.render().contains("result FAIL"));
    }

    #[test]
    fn trials_stand_alone() {
        let whole = run_trials(&cfg(), &three_ones);
        assert_eq!(whole, run_trials(&cfg(), &three_ones));
        for c in &whole.counterexamples {
            let alone = three_ones(&cfg(), c.trial, sub_seed(0, c.trial as u64)).unwrap();
            let f = alone.checks[0].failure.as_ref().expect("fails alone too");
            assert_eq!(f.transcript, c.transcript);
        }
    }

    #[test]
    fn sub_seeds_differ() {
        let seeds: std::collections::BTreeSet<u64> = (0..1000).map(|t| sub_seed(9, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(sub_seed(9, 4), sub_seed(9, 4));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(SuiteConfig::new("nope"), Err(Error::UnknownSuite(_))));
    }
}
