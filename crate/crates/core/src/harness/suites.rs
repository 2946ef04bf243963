//! One trial function per registered suite. Each recomputes the property it
//! checks from the transcript, without going through the code under test.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{random_strategy, run_trials, Report, SuiteConfig, TrialResult, SUITE_IDEAL};
use crate::engine::{play_match, replay, GameKind, Move, Role, Strategy, StrategyRef};
use crate::games::{mk_ideal_game, mk_real_game, GameSpec, WitnessFamily};
use crate::ideals::{CostIdeal, FiniteToOneMap};
use crate::rule::Rule;
use crate::sets::{PointMap, SetGen};
use crate::strategies::spec::{parse_strategy, SpecContext};
use crate::strategies::{self as st, share, DiagonalEnvelopeOptions, KbLiftState, ResponseMode};
use crate::trees::{self, ed_pulled_tree, uniform_tree_from_witness, TreeRef};
use crate::{Error, Result};

fn nats(moves: impl Iterator<Item = impl std::borrow::Borrow<Move>>) -> Result<Vec<u64>> {
    moves
        .map(|m| {
            m.borrow()
                .as_nat()
                .ok_or_else(|| Error::Shape(format!("expected a natural, found {}", m.borrow())))
        })
        .collect()
}

fn bits(moves: impl Iterator<Item = impl std::borrow::Borrow<Move>>) -> Result<Vec<bool>> {
    moves
        .map(|m| {
            m.borrow()
                .as_bit()
                .ok_or_else(|| Error::Shape(format!("expected a bit, found {}", m.borrow())))
        })
        .collect()
}

fn catalog(specs: &[&str], kind: GameKind, role: Role, ideal: CostIdeal) -> Result<Vec<StrategyRef>> {
    let mut ctx = SpecContext::new(kind, role);
    ctx.ideal = ideal;
    specs
        .iter()
        .map(|s| parse_strategy(s, &ctx).map_err(Error::from))
        .collect()
}

fn b_game(kind: GameKind) -> Result<GameSpec> {
    let j = matches!(kind, GameKind::GameG | GameKind::GameB).then_some(SUITE_IDEAL);
    mk_ideal_game(kind, SUITE_IDEAL, j)
}

/// Column of the Δ-code `n`, by counting triangle rows.
fn triangle_column(n: u64) -> u64 {
    let mut m = 0;
    while (m + 1) * (m + 2) / 2 <= n {
        m += 1;
    }
    m
}

pub(crate) fn flipper(cfg: &SuiteConfig, _trial: usize, seed: u64) -> Result<TrialResult> {
    let spec = mk_real_game(GameKind::ReapingStar)?;
    let tau = random_strategy(Role::II, GameKind::ReapingStar, seed);
    let (t, _) = play_match(&spec, &st::flipper(), &tau, cfg.horizon, &WitnessFamily::None)?;
    let mut r = TrialResult::default();
    let i = bits(t.i_moves())?;
    let ii = bits(t.ii_moves())?;
    let mut balance: i64 = 0;
    for k in 0..t.rounds() {
        if ii[k] {
            balance += if i[k] { 1 } else { -1 };
        }
        if balance.abs() > 1 {
            let detail = format!("after round {k} player I's ones and zeros on II's 1-rounds differ by {balance}");
            r.fail("minority-split", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
    }
    r.pass("minority-split");
    Ok(r)
}

/// The least cover of `points` by vertical lines and graphs, found by trying
/// every set of columns as the lines.
pub fn brute_force_ed_cost(points: &[(u64, u64)]) -> u64 {
    let mut mult: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for &(a, b) in points {
        mult.entry(a).or_default().insert(b);
    }
    let counts: Vec<u64> = mult.values().map(|rows| rows.len() as u64).collect();
    (0u64..1 << counts.len())
        .map(|lines| {
            let outside = (0..counts.len())
                .filter(|&c| lines >> c & 1 == 0)
                .map(|c| counts[c])
                .max()
                .unwrap_or(0);
            u64::from(lines.count_ones()) + outside
        })
        .min()
        .unwrap_or(0)
}

/// [`brute_force_ed_cost`] for distinct points, given the number of points in
/// each column (zero columns allowed).
fn brute_force_counts(counts: &[u64]) -> u64 {
    let mut best = u64::MAX;
    for lines in 0u64..1 << counts.len() {
        let mut cost = u64::from(lines.count_ones());
        let mut outside = 0;
        for (c, &n) in counts.iter().enumerate() {
            if lines >> c & 1 == 0 {
                outside = outside.max(n);
            }
        }
        cost += outside;
        best = best.min(cost);
    }
    best
}

/// Calls `f` on each increasing `r`-subset of `lo..hi` until it returns false.
fn for_each_subset(lo: usize, hi: usize, r: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if r > hi.saturating_sub(lo) {
        return true;
    }
    let mut idx: Vec<usize> = (lo..lo + r).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] < hi - r + i) else {
            return true;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

type Formula<'a> = &'a (dyn Fn(&[(u64, u64)]) -> u64 + Sync);

/// Trial `t` covers the sets whose least point, in row-major order of the
/// grid, is point `t`; trial 0 also covers the empty set. Sets are tried by
/// size, so the first failure of a trial is a smallest one.
fn ed_cover_trial(cfg: &SuiteConfig, trial: usize, formula: Formula, certify: bool) -> Result<TrialResult> {
    let grid = cfg.width as usize;
    let cells = grid * grid;
    let mut r = TrialResult::default();
    if trial >= cells {
        return Ok(r);
    }
    let point = |i: usize| ((i / grid) as u64, (i % grid) as u64);
    let mut failure: Option<Vec<(u64, u64)>> = None;
    let mut certificate_failure: Option<String> = None;
    let mut count = 0u64;
    if trial == 0 && formula(&[]) != 0 {
        failure = Some(Vec::new());
    }
    for extra in 0..cfg.depth {
        if failure.is_some() {
            break;
        }
        let mut pts = Vec::with_capacity(extra + 1);
        let mut counts = vec![0u64; grid];
        for_each_subset(trial + 1, cells, extra, &mut |rest| {
            pts.clear();
            pts.push(point(trial));
            pts.extend(rest.iter().map(|&i| point(i)));
            counts.iter_mut().for_each(|c| *c = 0);
            pts.iter().for_each(|&(a, _)| counts[a as usize] += 1);
            count += 1;
            let cost = formula(&pts);
            if cost != brute_force_counts(&counts) {
                failure = Some(pts.clone());
                return false;
            }
            if certify && certificate_failure.is_none() && pts.len() <= 5 {
                match CostIdeal::Ed.certify_pairs(&pts) {
                    Ok(c) if c.covers(&pts) && c.size() == cost => {}
                    other => certificate_failure = Some(format!("F = {pts:?}: certificate {other:?}")),
                }
            }
            true
        });
    }
    r.stat("sets", count);
    match failure {
        Some(pts) => {
            let detail = format!(
                "F = {pts:?}: formula {} but brute force {}",
                formula(&pts),
                brute_force_ed_cost(&pts)
            );
            r.fail_weighted("formula-equals-brute-force", detail, None, pts.len());
        }
        None => r.pass("formula-equals-brute-force"),
    }
    if certify {
        match certificate_failure {
            Some(d) => r.fail("certificate-covers", d, None),
            None => r.pass("certificate-covers"),
        }
    }
    Ok(r)
}

fn ed_formula(points: &[(u64, u64)]) -> u64 {
    CostIdeal::Ed.cost_of_pairs(points).unwrap_or(u64::MAX)
}

pub(crate) fn ed_cover_default(cfg: &SuiteConfig, trial: usize, _seed: u64) -> Result<TrialResult> {
    ed_cover_trial(cfg, trial, &ed_formula, true)
}

/// The cover-cost oracle run against an arbitrary formula, so that a broken
/// formula can be shown to be caught.
pub fn ed_cover_oracle_with(cfg: &SuiteConfig, formula: Formula) -> Report {
    let cfg = SuiteConfig {
        trials: (cfg.width * cfg.width) as usize,
        ..cfg.clone()
    };
    run_trials(&cfg, &|cfg, trial, _| ed_cover_trial(cfg, trial, formula, false))
}

pub(crate) fn selector_cost(cfg: &SuiteConfig, _trial: usize, seed: u64) -> Result<TrialResult> {
    let spec = b_game(GameKind::Tallness)?;
    let sigma = random_strategy(Role::I, GameKind::Tallness, seed);
    let (t, _) = play_match(&spec, &sigma, &st::ed_fin_selector(), cfg.horizon, &WitnessFamily::None)?;
    let moves = nats(t.i_moves())?;
    let answers = bits(t.ii_moves())?;
    let mut r = TrialResult::default();
    let mut selected = Vec::new();
    let mut columns = BTreeSet::new();
    let mut points = BTreeSet::new();
    for (k, (&n, &b)) in moves.iter().zip(&answers).enumerate() {
        points.insert(n);
        if b {
            selected.push(n);
            if !columns.insert(triangle_column(n)) {
                r.fail("column-injective", format!("round {k} selects a second point of column {}", triangle_column(n)), Some(t.prefix(k + 1)));
                return Ok(r);
            }
        }
        let distinct = points.len() as u64;
        let mut bound = 0u64;
        while bound * (bound + 1) / 2 < distinct {
            bound += 1;
        }
        if (selected.len() as u64) < bound {
            let detail = format!("after round {k}: {} selected from {distinct} points, bound {bound}", selected.len());
            r.fail("selection-size", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
    }
    r.pass("column-injective");
    r.pass("selection-size");
    let cost = CostIdeal::EdFin.cost_of_codes(&selected);
    let want = u64::from(!selected.is_empty());
    if cost == want {
        r.pass("selection-cost");
    } else {
        r.fail("selection-cost", format!("selection {selected:?} has cost {cost}"), Some(t));
    }
    Ok(r)
}

pub(crate) fn kb_lift_equiv(cfg: &SuiteConfig, _trial: usize, seed: u64) -> Result<TrialResult> {
    let spec = b_game(GameKind::Tallness)?;
    let f = FiniteToOneMap::halving();
    let base: StrategyRef = share(st::ed_fin_selector());
    let lifted = st::kb_lift(base.clone(), f.clone());
    let sigma = random_strategy(Role::I, GameKind::Tallness, seed);
    let (t, _) = play_match(&spec, &sigma, &lifted, cfg.horizon, &WitnessFamily::None)?;
    let moves = nats(t.i_moves())?;
    let answers = bits(t.ii_moves())?;
    let mut r = TrialResult::default();

    let mut state = KbLiftState::new();
    let flags: Vec<bool> = moves.iter().map(|&m| state.push(&f.apply, m)).collect();
    let scratch = st::kept_subsequence(&f.apply, &moves);
    if state.kept() == scratch.as_slice() {
        r.pass("incremental-equals-scratch");
    } else {
        let detail = format!("incremental {:?} but from scratch {scratch:?}", state.kept());
        r.fail("incremental-equals-scratch", detail, Some(t.clone()));
    }

    let mut top: Option<u64> = None;
    let mut kept = Vec::new();
    for &m in &moves {
        let image = f.apply.eval(m);
        if top.is_none_or(|v| image > v) {
            kept.push(m);
            top = Some(image);
        }
    }
    r.check("kept-moves-recomputed", kept == scratch, || format!("recomputed {kept:?}, library {scratch:?}"));

    let base_moves: Vec<Move> = kept.iter().map(|&m| Move::Nat(f.apply.eval(m))).collect();
    let base_play = replay(base.as_ref(), &base_moves)?;
    let base_selected: BTreeSet<u64> = base_play
        .chunks(2)
        .filter(|c| c.len() == 2 && c[1] == Move::Bit(true))
        .filter_map(|c| c[0].as_nat())
        .collect();
    for (k, (&m, &b)) in moves.iter().zip(&answers).enumerate() {
        if b && !flags[k] {
            r.fail("unkept-answered-zero", format!("round {k}: {m} is not kept but was answered 1"), Some(t.prefix(k + 1)));
            return Ok(r);
        }
        if b && !base_selected.contains(&f.apply.eval(m)) {
            let detail = format!("round {k}: f({m}) = {} is not in the base selection", f.apply.eval(m));
            r.fail("image-in-base-selection", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
    }
    r.pass("unkept-answered-zero");
    r.pass("image-in-base-selection");
    Ok(r)
}

/// Shared body of the two translation round trips: `keep` decides from the
/// pending base-game move whether a natural is passed through.
struct RoundTrip<'a> {
    base_spec: GameSpec,
    sigma: &'a dyn Strategy,
    keep: fn(&Move, u64) -> Result<bool>,
    simulate: fn(&dyn Strategy, &[u64]) -> Result<crate::engine::Transcript>,
}

impl RoundTrip<'_> {
    fn check(&self, r: &mut TrialResult, t: &crate::engine::Transcript) -> Result<()> {
        let moves = nats(t.i_moves())?;
        let answers = bits(t.ii_moves())?;
        let mut sim = vec![self.sigma.next_move(&[])?];
        let mut kept_before = Vec::with_capacity(moves.len() + 1);
        let mut kept = Vec::new();
        kept_before.push(0);
        for (k, &n) in moves.iter().enumerate() {
            let keep = (self.keep)(sim.last().expect("pending move"), n)?;
            if keep != answers[k] {
                let detail = format!("round {k}: answered {} but the base match {} {n}", answers[k], if keep { "keeps" } else { "drops" });
                r.fail("answers-match-simulation", detail, Some(t.prefix(k + 1)));
                return Ok(());
            }
            if keep {
                kept.push(Move::Nat(n));
                sim.push(Move::Nat(n));
                sim.push(self.sigma.next_move(&sim)?);
            }
            kept_before.push(kept.len());
        }
        r.pass("answers-match-simulation");
        let played = &sim[..sim.len() - 1];
        r.check("simulated-play-legal", self.base_spec.is_legal_play(played)?, || {
            format!("the simulated base play {played:?} is illegal")
        });
        for (h, &rounds) in kept_before.iter().enumerate() {
            let got = (self.simulate)(self.sigma, &moves[..h])?;
            if got.moves != sim[..2 * rounds] {
                let detail = format!("horizon {h}: library simulation has {} moves, recomputed {}", got.moves.len(), 2 * rounds);
                r.fail("transcript-at-every-horizon", detail, Some(t.prefix(h)));
                return Ok(());
            }
        }
        r.pass("transcript-at-every-horizon");
        if !kept.is_empty() {
            let replies = st::scripted(Role::II, self.base_spec.kind, kept.clone());
            let (base, _) = play_match(&self.base_spec, self.sigma, &replies, kept.len(), &WitnessFamily::None)?;
            r.check("referee-replay", base.moves == sim[..2 * kept.len()], || {
                "the referee's base match differs from the simulation".into()
            });
        }
        Ok(())
    }
}

fn hmm_keep(pending: &Move, n: u64) -> Result<bool> {
    let f = pending
        .as_set()
        .ok_or_else(|| Error::Shape(format!("hmm player I played {pending}")))?;
    Ok(f.max().is_none_or(|m| n > m))
}

fn g_keep(pending: &Move, n: u64) -> Result<bool> {
    let d = pending
        .as_ideal()
        .ok_or_else(|| Error::Shape(format!("game-g player I played {pending}")))?;
    Ok(!d.contains(n))
}

pub(crate) fn hmm_roundtrip(cfg: &SuiteConfig, trial: usize, seed: u64) -> Result<TrialResult> {
    let sigma: StrategyRef = if trial % 2 == 0 {
        share(random_strategy(Role::I, GameKind::Hmm, seed))
    } else {
        share(st::threshold(seed % 8))
    };
    let adversary = random_strategy(Role::I, GameKind::Tallness, seed.rotate_left(17));
    let tau = st::tallness_from_hmm(sigma.clone());
    let (t, _) = play_match(&b_game(GameKind::Tallness)?, &adversary, &tau, cfg.horizon, &WitnessFamily::None)?;
    let mut r = TrialResult::default();
    RoundTrip {
        base_spec: b_game(GameKind::Hmm)?,
        sigma: sigma.as_ref(),
        keep: hmm_keep,
        simulate: st::simulated_hmm,
    }
    .check(&mut r, &t)?;
    Ok(r)
}

pub(crate) fn gb_roundtrip(cfg: &SuiteConfig, trial: usize, seed: u64) -> Result<TrialResult> {
    let tree: TreeRef = Arc::new(ed_pulled_tree(PointMap::Delta));
    let sigma: StrategyRef = if trial % 2 == 0 {
        share(random_strategy(Role::I, GameKind::GameG, seed))
    } else {
        share(st::g_from_tree(tree.clone()))
    };
    let b_spec = b_game(GameKind::GameB)?;
    let adversary = random_strategy(Role::I, GameKind::GameB, seed.rotate_left(17));
    let tau = st::b_from_g(sigma.clone());
    let (t, _) = play_match(&b_spec, &adversary, &tau, cfg.horizon, &WitnessFamily::None)?;
    let mut r = TrialResult::default();
    RoundTrip {
        base_spec: b_game(GameKind::GameG)?,
        sigma: sigma.as_ref(),
        keep: g_keep,
        simulate: st::simulated_g,
    }
    .check(&mut r, &t)?;

    let branching = st::branching_tree_player_ii(tree.clone());
    let composite = st::b_from_g(share(st::g_from_tree(tree)));
    let (t2, _) = play_match(&b_spec, &adversary, &branching, cfg.horizon, &WitnessFamily::None)?;
    for j in (1..t2.moves.len()).step_by(2) {
        let other = composite.next_move(&t2.moves[..j])?;
        if other != t2.moves[j] {
            let detail = format!("round {}: branching played {}, composite {other}", j / 2, t2.moves[j]);
            r.fail("branching-equals-composite", detail, Some(t2.prefix(j / 2 + 1)));
            return Ok(r);
        }
    }
    r.pass("branching-equals-composite");
    Ok(r)
}

fn catalog_tree(trial: usize) -> TreeRef {
    match trial % 3 {
        0 => Arc::new(ed_pulled_tree(PointMap::Delta)),
        1 => Arc::new(ed_pulled_tree(PointMap::Cantor)),
        _ => Arc::new(
            uniform_tree_from_witness(vec![SetGen::evens(), SetGen::odds(), SetGen::progression(1, 3)])
                .expect("the family is nonempty"),
        ),
    }
}

pub(crate) fn tree_path(cfg: &SuiteConfig, trial: usize, seed: u64) -> Result<TrialResult> {
    let tree = catalog_tree(trial);
    let mut r = TrialResult::default();

    let sigma = st::tree_player_i(tree.clone());
    let tau = random_strategy(Role::II, GameKind::Tallness, seed);
    let (t, _) = play_match(&b_game(GameKind::Tallness)?, &sigma, &tau, cfg.horizon, &WitnessFamily::None)?;
    let mut node = Vec::new();
    for (k, (n, b)) in nats(t.i_moves())?.into_iter().zip(bits(t.ii_moves())?).enumerate() {
        if !tree.successors(&node).contains(n) {
            let detail = format!("round {k}: {n} is not a successor of {node:?} in {}", tree.label());
            r.fail("tree-player-i-on-tree", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
        if b {
            node.push(n);
        }
    }
    r.pass("tree-player-i-on-tree");

    let sigma = st::g_from_tree(tree.clone());
    let tau = random_strategy(Role::II, GameKind::GameG, seed.rotate_left(17));
    let (t, _) = play_match(&b_game(GameKind::GameG)?, &sigma, &tau, cfg.horizon, &WitnessFamily::None)?;
    let mut node = Vec::new();
    for (k, (d, n)) in t.i_moves().zip(t.ii_moves()).enumerate() {
        let d = d.as_ideal().ok_or_else(|| Error::Shape(format!("{} played {d}", sigma.label())))?;
        let succ = tree.successors(&node);
        if let Some(x) = (0..64).find(|&x| d.contains(x) == succ.contains(x)) {
            let detail = format!("round {k}: {x} is {} the ideal set and {} a successor", if d.contains(x) { "in" } else { "outside" }, if succ.contains(x) { "also" } else { "not" });
            r.fail("complement-exact", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
        let n = n.as_nat().ok_or_else(|| Error::Shape("game-g player II plays naturals".into()))?;
        if !succ.contains(n) {
            let detail = format!("round {k}: {n} is not a successor of {node:?}");
            r.fail("g-from-tree-on-tree", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
        node.push(n);
    }
    r.pass("complement-exact");
    r.pass("g-from-tree-on-tree");
    Ok(r)
}

const ENVELOPE_CATALOG: [&str; 5] = [
    "constant:3",
    "scripted:[5,0,9,2,7,1]",
    "random:11",
    "random:12",
    "random:13",
];

pub(crate) fn envelope(cfg: &SuiteConfig, trial: usize, _seed: u64) -> Result<TrialResult> {
    let mut r = TrialResult::default();
    let Some(spec) = ENVELOPE_CATALOG.get(trial) else {
        return Ok(r);
    };
    let sigma = catalog(&[spec], GameKind::Bounding, Role::I, SUITE_IDEAL)?.remove(0);
    let (support, top) = (cfg.depth, cfg.horizon);
    let opts = DiagonalEnvelopeOptions::default();
    let f: Vec<u64> = (0..=top)
        .map(|n| st::diagonal_envelope(sigma.as_ref(), GameKind::Bounding, n, opts))
        .collect::<Result<_>>()?;
    for mask in 0u64..1 << support {
        let ii: Vec<Move> = (0..top).map(|i| Move::Bit(i < support && mask >> i & 1 == 1)).collect();
        let play = replay(sigma.as_ref(), &ii)?;
        for n in support..=top {
            let v = play[2 * n]
                .as_nat()
                .ok_or_else(|| Error::Shape("bounding player I plays naturals".into()))?;
            if f[n] < v {
                let detail = format!("{spec}: f({n}) = {} < {v} on the bits {mask:#b}", f[n]);
                r.fail("envelope-dominates", detail, None);
                return Ok(r);
            }
        }
    }
    r.pass("envelope-dominates");
    r.check("envelope-at-zero", f[0] == 0, || format!("f(0) = {}", f[0]));
    Ok(r)
}

const DOMINATOR_CATALOG: [&str; 5] = [
    "k->3",
    "k->k%5",
    "k->min(k,9)",
    "k->drow(k)%4",
    "k->(k%7)*2",
];

/// `Σ_j 2^(s(0)+...+s(j)+j)`, summed term by term.
fn code_of(s: &[u64]) -> BigUint {
    let mut total = BigUint::default();
    let mut exp = 0u64;
    for (j, &v) in s.iter().enumerate() {
        exp += v + u64::from(j > 0);
        total += BigUint::from(1u8) << exp;
    }
    total
}

pub(crate) fn dominator(cfg: &SuiteConfig, trial: usize, _seed: u64) -> Result<TrialResult> {
    let mut r = TrialResult::default();
    let Some(src) = DOMINATOR_CATALOG.get(trial) else {
        return Ok(r);
    };
    let g: Rule = src.parse()?;
    let terms = cfg.horizon + 1;
    let gp = st::diagonal_dominator(&g, terms)?;
    for n in 0..terms {
        let lhs = g.eval_big(&code_of(&gp[..n]));
        if lhs >= BigUint::from(gp[n]) {
            r.fail("strict-inequality", format!("{src}: g(code(g'|{n})) = {lhs} >= g'({n}) = {}", gp[n]), None);
            return Ok(r);
        }
    }
    r.pass("strict-inequality");
    r.check("code-agrees", (0..terms.min(12)).all(|n| code_of(&gp[..n]) == st::sequence_code(&gp[..n])), || {
        format!("{src}: sequence codes disagree")
    });
    Ok(r)
}

pub(crate) fn response_exactness(cfg: &SuiteConfig, _trial: usize, seed: u64) -> Result<TrialResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mode, kind) = if rng.gen() {
        (ResponseMode::Bounding, GameKind::Bounding)
    } else {
        (ResponseMode::AntiLocalizing, GameKind::AntiLocalizing)
    };
    let x = match rng.gen_range(0..3) {
        0 => Rule::affine(rng.gen_range(0..3), rng.gen_range(0..20)),
        1 => Rule::table((0..8).map(|_| rng.gen_range(0..40)).collect()),
        _ => Rule::constant(rng.gen_range(0..32)),
    };
    let sigma: StrategyRef = share(random_strategy(Role::I, kind, rng.gen()));
    let horizon = rng.gen_range(1..=cfg.horizon.max(1));
    let tau = st::response_play(Some(sigma.clone()), x.clone(), mode);
    let (t, _) = play_match(&mk_real_game(kind)?, sigma.as_ref(), &tau, horizon, &WitnessFamily::None)?;
    let mut r = TrialResult::default();
    let observed = st::response_play(None, x.clone(), mode);
    for (k, (a, b)) in t.i_moves().zip(t.ii_moves()).enumerate() {
        let xk = x.eval(k as u64);
        let want = match mode {
            ResponseMode::Bounding => a.as_nat().is_some_and(|n| n < xk),
            ResponseMode::AntiLocalizing => a.as_set().is_some_and(|s| !s.contains(xk)),
        };
        if *b != Move::Bit(want) {
            let detail = format!("round {k}: I played {a}, x({k}) = {xk}, II answered {b}");
            r.fail("bit-equals-relation", detail, Some(t.prefix(k + 1)));
            return Ok(r);
        }
        if observed.next_move(&t.moves[..2 * k + 1])? != *b {
            r.fail("observed-equals-simulated", format!("round {k}"), Some(t.prefix(k + 1)));
            return Ok(r);
        }
    }
    r.pass("bit-equals-relation");
    r.pass("observed-equals-simulated");
    Ok(r)
}

pub(crate) fn perfect_subtree(cfg: &SuiteConfig, trial: usize, _seed: u64) -> Result<TrialResult> {
    let kinds = [GameKind::BoundingStar, GameKind::DominatingStar, GameKind::AntiLocalizingStar];
    let spec = mk_real_game(kinds[trial % kinds.len()])?;
    let tau = st::echo();
    let d = cfg.horizon;
    let ps = trees::perfect_subtree(&spec, &tau, d, cfg.depth, cfg.width)?;
    let leaves: Vec<(&String, &Vec<Move>)> = ps.leaves().collect();
    let mut r = TrialResult::default();
    r.check("complete", leaves.len() == 1 << d, || {
        format!("{} leaves at depth {d}, failure at {:?}", leaves.len(), ps.failure)
    });
    let projections: BTreeSet<Vec<u64>> = leaves
        .iter()
        .map(|(_, p)| nats(p.iter().skip(1).step_by(2)))
        .collect::<Result<_>>()?;
    r.check("projections-distinct", projections.len() == leaves.len(), || {
        format!("{} distinct projections of {} plays", projections.len(), leaves.len())
    });
    for (i, (s, p)) in leaves.iter().enumerate() {
        if !spec.is_legal_play(p)? || !trees::consistent_with(&tau, p)? {
            r.fail("plays-replay", format!("leaf {s} does not replay"), None);
            return Ok(r);
        }
        for (t, q) in &leaves[i + 1..] {
            let meet: String = s.chars().zip(t.chars()).take_while(|(a, b)| a == b).map(|(a, _)| a).collect();
            let k = *ps
                .splits
                .get(&meet)
                .ok_or_else(|| Error::Construction(format!("no split recorded at {meet:?}")))?;
            let (lo, hi) = if s.as_bytes()[meet.len()] == b'0' { (p, q) } else { (q, p) };
            if p.get(k).is_none() || p.get(k) == q.get(k) {
                r.fail("differ-at-split", format!("leaves {s} and {t} agree at {k}"), None);
                return Ok(r);
            }
            if let (Some(a), Some(b)) = (lo[k].as_nat(), hi[k].as_nat()) {
                if a >= b {
                    r.fail("split-ordered", format!("leaves {s}, {t}: {a} >= {b} at {k}"), None);
                    return Ok(r);
                }
            }
        }
    }
    r.pass("plays-replay");
    r.pass("differ-at-split");
    r.pass("split-ordered");
    Ok(r)
}

const HS_CATALOG: [&str; 3] = ["always-one", "ed-fin-selector", "ideal-reply:[1]+2"];

pub(crate) fn hs_replay(cfg: &SuiteConfig, trial: usize, _seed: u64) -> Result<TrialResult> {
    let mut r = TrialResult::default();
    let Some(src) = HS_CATALOG.get(trial) else {
        return Ok(r);
    };
    let spec = b_game(GameKind::TallnessStar)?;
    let tau = catalog(&[src], GameKind::TallnessStar, Role::II, SUITE_IDEAL)?.remove(0);
    let tree = trees::extract_hs_tree(tau.as_ref(), cfg.depth, cfg.width, 2, 2)?;
    let mut checked = 0;
    for node in &tree.nodes {
        for (&n, t) in &node.witnesses {
            checked += 1;
            let start = node.play.len();
            let shaped = t.starts_with(&node.play) && t.len() >= start + 2 && t[t.len() - 2] == Move::Nat(n);
            if !shaped || !spec.is_legal_play(t)? {
                r.fail("witness-shape", format!("{src}: node {:?}, successor {n}", node.path), None);
                return Ok(r);
            }
            for j in (start + 1..t.len()).step_by(2) {
                let want = Move::Bit(j == t.len() - 1);
                let got = tau.next_move(&t[..j])?;
                if got != want {
                    let detail = format!("{src}: node {:?}, successor {n}: answer {got} at {j}, expected {want}", node.path);
                    r.fail("zeros-then-one", detail, None);
                    return Ok(r);
                }
            }
        }
    }
    r.stat("successors", checked);
    r.pass("witness-shape");
    r.check("zeros-then-one", checked > 0, || format!("{src}: no successors found"));
    Ok(r)
}

pub(crate) fn generic_play(cfg: &SuiteConfig, trial: usize, seed: u64) -> Result<TrialResult> {
    let witnesses: Vec<Rule> = if trial == 0 {
        vec![Rule::constant(0), Rule::constant(7), Rule::constant(3)]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..3)
            .map(|_| match rng.gen_range(0..2) {
                0 => Rule::constant(rng.gen_range(0..40)),
                _ => Rule::affine(rng.gen_range(0..3), rng.gen_range(0..20)),
            })
            .collect()
    };
    let g = st::dense_set_generic_play(&st::always_one(), &witnesses, cfg.horizon)?;
    let t = &g.transcript;
    let mut r = TrialResult::default();
    r.check("all-met", g.unmet.is_empty(), || format!("unmet witnesses {:?}", g.unmet));
    let rounds: Vec<(&Move, &Move)> = t.i_moves().zip(t.ii_moves()).collect();
    for (k, (a, _)) in rounds.iter().enumerate() {
        if a.as_set().is_none_or(|s| s.len() != k + 1) {
            r.fail("slalom-legal", format!("round {k}: {a}"), Some(t.prefix(k + 1)));
            return Ok(r);
        }
    }
    r.pass("slalom-legal");
    for (w, x) in witnesses.iter().enumerate() {
        let hit = rounds.iter().enumerate().any(|(k, (a, b))| {
            **b == Move::Bit(true) && a.as_set().is_some_and(|s| s.contains(x.eval(k as u64)))
        });
        if !hit {
            r.fail("met-witness-certified", format!("witness {w} ({x}) is never caught"), Some(t.clone()));
            return Ok(r);
        }
    }
    r.pass("met-witness-certified");
    Ok(r)
}
