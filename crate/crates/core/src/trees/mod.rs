//! Lazy trees on ω^{<ω}, strategy trees and the bounded probes run on them.
//!
//! Finite probes never settle which case of a dichotomy a strategy falls
//! into. They return evidence relative to explicit bounds: a certificate
//! when one is found, "not found" otherwise.

mod hs;
mod probe;

pub use hs::{extract_hs_tree, HsNode, HsTree};
pub use probe::{constant_tail_probe, TailProbe};

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::engine::{Move, Role, Shape, Strategy, Transcript};
use crate::games::GameSpec;
use crate::ideals::cantor_decode;
use crate::sets::{parse_u64_list, PointMap, SetGen, SuccessorSpec};
use crate::strategies::{expect_bit, expect_nat, i_moves};
use crate::{Error, ParseError, Result};

/// A tree of finite sequences of naturals, given by successor descriptors.
pub trait LazyTree: Send + Sync {
    fn successors(&self, node: &[u64]) -> SuccessorSpec;

    fn contains(&self, node: &[u64]) -> bool {
        (0..node.len()).all(|i| self.successors(&node[..i]).contains(node[i]))
    }

    fn label(&self) -> String;
}

pub type TreeRef = Arc<dyn LazyTree>;

fn path_text(path: &[u64]) -> String {
    let items: Vec<String> = path.iter().map(u64::to_string).collect();
    format!("[{}]", items.join(","))
}

/// A tree read from a `tree v1` file. A node's successors are those of its
/// longest listed prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFile {
    pub name: String,
    pub entries: BTreeMap<Vec<u64>, (SuccessorSpec, bool)>,
}

impl TreeFile {
    pub fn new(name: impl Into<String>, root: SuccessorSpec) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(Vec::new(), (root, false));
        TreeFile {
            name: name.into(),
            entries,
        }
    }

    pub fn insert(&mut self, path: Vec<u64>, spec: SuccessorSpec, partial: bool) {
        self.entries.insert(path, (spec, partial));
    }

    fn entry(&self, node: &[u64]) -> &(SuccessorSpec, bool) {
        (0..=node.len())
            .rev()
            .find_map(|i| self.entries.get(&node[..i]))
            .expect("the root is always listed")
    }

    /// Was the search that produced `node`'s successors cut short?
    pub fn is_partial(&self, node: &[u64]) -> bool {
        self.entry(node).1
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("tree v1\n");
        for (path, (spec, partial)) in &self.entries {
            let _ = write!(out, "node {} succ {spec}", path_text(path));
            if *partial {
                out.push_str(" partial");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(name: impl Into<String>, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut header = false;
        let mut offset = 0;
        for (lineno, raw) in text.split('\n').enumerate() {
            let here = offset;
            offset += raw.len() + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fail = |col: usize, msg: String| {
                Error::Parse(ParseError::new(here + col, format!("line {}: {msg}", lineno + 1)))
            };
            let relocate = |e: ParseError| fail(e.pos, e.message);
            if !header {
                if line != "tree v1" {
                    return Err(fail(0, "expected the header 'tree v1'".into()));
                }
                header = true;
                continue;
            }
            let rest = line
                .strip_prefix("node ")
                .ok_or_else(|| fail(0, "expected 'node <path> succ <spec>'".into()))?;
            let path_end = rest
                .find(']')
                .ok_or_else(|| fail(5, "expected a path like [0,3]".into()))?;
            let path_src = &rest[..=path_end];
            let inner = path_src
                .strip_prefix('[')
                .ok_or_else(|| fail(5, "expected '['".into()))?;
            let path = parse_u64_list(&inner[..inner.len() - 1], 6).map_err(relocate)?;
            let after = &rest[path_end + 1..];
            let spec_col = 5 + path_end + 1 + " succ ".len();
            let spec_src = after
                .strip_prefix(" succ ")
                .ok_or_else(|| fail(5 + path_end + 1, "expected ' succ '".into()))?;
            let (spec_src, partial) = match spec_src.strip_suffix(" partial") {
                Some(s) => (s, true),
                None => (spec_src, false),
            };
            let spec = SuccessorSpec::parse_at(spec_src, spec_col).map_err(relocate)?;
            if entries.insert(path, (spec, partial)).is_some() {
                return Err(fail(5, "node listed twice".into()));
            }
        }
        if !header {
            return Err(Error::Parse(ParseError::new(0, "line 1: expected the header 'tree v1'")));
        }
        if !entries.contains_key(&Vec::new()) {
            return Err(Error::TreeShape("the tree file does not list the root node []".into()));
        }
        Ok(TreeFile {
            name: name.into(),
            entries,
        })
    }
}

impl LazyTree for TreeFile {
    fn successors(&self, node: &[u64]) -> SuccessorSpec {
        self.entry(node).0.clone()
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Every node at level `k` has successors `Y_k = X_n \ m`, where `k`
/// codes `(n, m)` in the Cantor pairing and `n` is read modulo the length.
#[derive(Debug, Clone)]
pub struct UniformTree {
    xs: Vec<SetGen>,
}

/// `None` for an empty family.
pub fn uniform_tree_from_witness(xs: Vec<SetGen>) -> Option<UniformTree> {
    (!xs.is_empty()).then_some(UniformTree { xs })
}

impl UniformTree {
    pub fn level(&self, k: u64) -> SetGen {
        let (n, m) = cantor_decode(k);
        self.xs[(n % self.xs.len() as u64) as usize].tail(m)
    }
}

impl LazyTree for UniformTree {
    fn successors(&self, node: &[u64]) -> SuccessorSpec {
        SuccessorSpec::Generated(self.level(node.len() as u64))
    }

    fn label(&self) -> String {
        let xs: Vec<String> = self.xs.iter().map(|x| x.to_string()).collect();
        format!("uniform[{}]", xs.join(";"))
    }
}

/// Sequences whose images under `map` have strictly increasing first
/// coordinates, so the images form the graph of a partial function.
#[derive(Debug, Clone)]
pub struct EdPulledTree {
    pub map: PointMap,
}

pub fn ed_pulled_tree(map: PointMap) -> EdPulledTree {
    EdPulledTree { map }
}

impl LazyTree for EdPulledTree {
    fn successors(&self, node: &[u64]) -> SuccessorSpec {
        match node.last() {
            None => SuccessorSpec::everything(),
            Some(&n) => SuccessorSpec::PulledBack(
                self.map.clone(),
                Box::new(SuccessorSpec::TailColumns(self.map.point(n).0 + 1)),
            ),
        }
    }

    fn label(&self) -> String {
        match &self.map {
            PointMap::Delta => "@edfin".into(),
            PointMap::Cantor => "@ed".into(),
            map => format!("ed-pulled({map})"),
        }
    }
}

/// The finite part of a strategy's game tree explored to `depth` moves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTree {
    pub depth: usize,
    pub width: u64,
    pub leaves: Vec<Vec<Move>>,
    pub nodes: usize,
}

/// Follows `tau` at its own turns and branches over `width` legal
/// candidates at the opponent's.
pub fn strategy_tree(spec: &GameSpec, tau: &dyn Strategy, depth: usize, width: u64) -> Result<GameTree> {
    let mut leaves = Vec::new();
    let mut nodes = 0;
    let mut stack = vec![Vec::new()];
    while let Some(p) = stack.pop() {
        nodes += 1;
        if p.len() == depth {
            leaves.push(p);
            continue;
        }
        if Role::to_move(p.len()) == tau.role() {
            let m = tau.next_move(&p)?;
            if !spec.step_legal(&p, &m)? {
                return Err(Error::IllegalMove(format!("{} played {m} after {} moves", tau.label(), p.len())));
            }
            let mut q = p;
            q.push(m);
            stack.push(q);
        } else {
            for c in spec.candidate_moves(&p, width).into_iter().rev() {
                if spec.step_legal(&p, &c)? {
                    let mut q = p.clone();
                    q.push(c);
                    stack.push(q);
                }
            }
        }
    }
    leaves.sort_by_key(|p| p.iter().map(|m| m.to_string()).collect::<Vec<_>>());
    Ok(GameTree {
        depth,
        width,
        leaves,
        nodes,
    })
}

/// Two continuations of `base`, by different opponent moves, after which
/// the strategy answers differently at position `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplittingCertificate {
    pub base: Vec<Move>,
    pub ext0: Vec<Move>,
    pub ext1: Vec<Move>,
    pub k: usize,
    pub v0: Move,
    pub v1: Move,
}

/// The moves after a space each, so an empty list leaves no trailing blank.
fn moves_text(moves: &[Move]) -> String {
    moves.iter().map(|m| format!(" {m}")).collect()
}

impl SplittingCertificate {
    /// `split at <k>`, then the shared base and both extensions, one per line.
    pub fn to_text(&self) -> String {
        format!(
            "split at {} values {} {}\nbase{}\next0{}\next1{}\n",
            self.k,
            self.v0,
            self.v1,
            moves_text(&self.base),
            moves_text(&self.ext0),
            moves_text(&self.ext1)
        )
    }

    /// Re-queries `tau` along both extensions.
    pub fn replay(&self, spec: &GameSpec, tau: &dyn Strategy) -> Result<bool> {
        for (ext, v) in [(&self.ext0, &self.v0), (&self.ext1, &self.v1)] {
            if !ext.starts_with(&self.base) || ext.len() != self.k + 1 || &ext[self.k] != v {
                return Ok(false);
            }
            if !spec.is_legal_play(ext)? || !consistent_with(tau, ext)? {
                return Ok(false);
            }
        }
        Ok(self.v0 != self.v1 && self.ext0[..self.k] != self.ext1[..self.k])
    }
}

/// Does every move of `tau`'s role in `play` agree with `tau`?
pub fn consistent_with(tau: &dyn Strategy, play: &[Move]) -> Result<bool> {
    for (i, m) in play.iter().enumerate() {
        if Role::to_move(i) == tau.role() && tau.next_move(&play[..i])? != *m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strategy calls a single splitting search may make.
pub const PROBE_BUDGET: usize = 1 << 18;

/// `tau`'s answers to the opponent moves `options` at `base`; a certificate
/// as soon as two answers differ.
fn sibling_split(tau: &dyn Strategy, base: &[Move], options: &[Move]) -> Result<(Option<SplittingCertificate>, Vec<Vec<Move>>)> {
    let mut children: Vec<Vec<Move>> = Vec::with_capacity(options.len());
    for c in options {
        let mut q = base.to_vec();
        q.push(c.clone());
        let a = tau.next_move(&q)?;
        q.push(a);
        if let Some(first) = children.first() {
            let k = base.len() + 1;
            if first[k] != q[k] {
                let (mut ext0, mut ext1) = (first.clone(), q);
                if let (Some(x), Some(y)) = (ext0[k].as_nat(), ext1[k].as_nat()) {
                    if x > y {
                        std::mem::swap(&mut ext0, &mut ext1);
                    }
                }
                let cert = SplittingCertificate {
                    base: base.to_vec(),
                    v0: ext0[k].clone(),
                    v1: ext1[k].clone(),
                    ext0,
                    ext1,
                    k,
                };
                return Ok((Some(cert), children));
            }
        }
        children.push(q);
    }
    Ok((None, children))
}

/// Breadth-first search below `node` for a position where two opponent
/// moves draw different answers from `tau`. When natural-valued, the
/// certificate is ordered so that `v0 < v1`.
pub fn find_splitting(
    spec: &GameSpec,
    tau: &dyn Strategy,
    node: &[Move],
    depth: usize,
    width: u64,
) -> Result<Option<SplittingCertificate>> {
    let limit = node.len() + depth;
    let mut calls = 0;
    let mut queue = VecDeque::from([node.to_vec()]);
    while let Some(p) = queue.pop_front() {
        if p.len() + 2 > limit {
            continue;
        }
        if Role::to_move(p.len()) == tau.role() {
            let mut q = p.clone();
            q.push(tau.next_move(&p)?);
            calls += 1;
            queue.push_back(q);
            continue;
        }
        let mut options = Vec::new();
        for c in spec.candidate_moves(&p, width) {
            if spec.step_legal(&p, &c)? {
                options.push(c);
            }
        }
        calls += options.len();
        if calls > PROBE_BUDGET {
            return Ok(None);
        }
        let (cert, children) = sibling_split(tau, &p, &options)?;
        if cert.is_some() {
            return Ok(cert);
        }
        queue.extend(children);
    }
    Ok(None)
}

/// Plays indexed by binary strings, each pair split at its meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectSubtree {
    pub depth: usize,
    pub plays: BTreeMap<String, Vec<Move>>,
    /// The split position `k_s` below each inner node `s`.
    pub splits: BTreeMap<String, usize>,
    /// The node at which no splitting was found, if any.
    pub failure: Option<String>,
}

impl PerfectSubtree {
    pub fn leaves(&self) -> impl Iterator<Item = (&String, &Vec<Move>)> {
        self.plays.iter().filter(move |(s, _)| s.len() == self.depth)
    }

    pub fn is_complete(&self) -> bool {
        self.failure.is_none() && self.leaves().count() == 1 << self.depth
    }

    /// A `perfect v1` file: the split below each inner node, each leaf's play,
    /// and the node where splitting failed when the tree is partial.
    pub fn to_text(&self) -> String {
        let label = |s: &str| if s.is_empty() { "root".to_string() } else { s.to_string() };
        let mut out = format!("perfect v1\ndepth {}\n", self.depth);
        for (s, k) in &self.splits {
            let _ = writeln!(out, "split {} at {k}", label(s));
        }
        for (s, p) in self.leaves() {
            let _ = writeln!(out, "leaf {} play{}", label(s), moves_text(p));
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "failure {} partial", label(f));
        }
        out
    }

    /// Checks that distinct leaves differ at the split of their meet, and
    /// that natural-valued splits are increasing from the 0-side to the 1-side.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let leaves: Vec<(&String, &Vec<Move>)> = self.leaves().collect();
        for (i, (s, p)) in leaves.iter().enumerate() {
            for (t, q) in &leaves[i + 1..] {
                let meet: String = s.chars().zip(t.chars()).take_while(|(a, b)| a == b).map(|(a, _)| a).collect();
                let k = *self.splits.get(&meet).ok_or(format!("no split recorded at '{meet}'"))?;
                if p.get(k) == q.get(k) {
                    return Err(format!("leaves {s} and {t} agree at position {k}"));
                }
                if p[..k - 1] != q[..k - 1] {
                    return Err(format!("leaves {s} and {t} differ before position {}", k - 1));
                }
            }
        }
        for (s, &k) in &self.splits {
            let (a, b) = (&self.plays[&format!("{s}0")], &self.plays[&format!("{s}1")]);
            if let (Some(x), Some(y)) = (a[k].as_nat(), b[k].as_nat()) {
                if x >= y {
                    return Err(format!("split values at '{s}' are not increasing: {x} vs {y}"));
                }
            }
        }
        Ok(())
    }
}

/// Splits repeatedly, `d` levels deep, starting from the empty play.
pub fn perfect_subtree(
    spec: &GameSpec,
    tau: &dyn Strategy,
    d: usize,
    depth: usize,
    width: u64,
) -> Result<PerfectSubtree> {
    let mut root = Vec::new();
    if tau.role() == Role::I {
        root.push(tau.next_move(&[])?);
    }
    let mut plays = BTreeMap::from([(String::new(), root)]);
    let mut splits = BTreeMap::new();
    let mut level = vec![String::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(2 * level.len());
        for s in &level {
            match find_splitting(spec, tau, &plays[s], depth, width)? {
                Some(cert) => {
                    splits.insert(s.clone(), cert.k);
                    plays.insert(format!("{s}0"), cert.ext0);
                    plays.insert(format!("{s}1"), cert.ext1);
                    next.push(format!("{s}0"));
                    next.push(format!("{s}1"));
                }
                None => {
                    return Ok(PerfectSubtree {
                        depth: d,
                        plays,
                        splits,
                        failure: Some(s.clone()),
                    })
                }
            }
        }
        level = next;
    }
    Ok(PerfectSubtree {
        depth: d,
        plays,
        splits,
        failure: None,
    })
}

/// `x(k)` = the move at position `2k + 1`: Player II's naturals.
pub fn witness_projection(t: &Transcript) -> Result<Vec<u64>> {
    if t.kind.shape(Role::II) != Shape::Nat {
        return Err(Error::Shape(format!("player II of {} does not play naturals", t.kind)));
    }
    project_play(&t.moves)
}

/// `witness_projection` of a raw play.
pub fn project_play(play: &[Move]) -> Result<Vec<u64>> {
    play.iter().skip(1).step_by(2).map(expect_nat).collect()
}

/// Result of pushing a tallness node to one where every probed move is
/// answered with 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Open(Vec<Move>),
    Stalled { reason: String },
}

/// Extends `node` by moves `tau` answers with 0 until the `width` moves
/// above the last one are all answered with 1, taking at most `depth` steps.
pub fn bounded_tree_extension(tau: &dyn Strategy, node: &[Move], depth: usize, width: u64) -> Result<Extension> {
    let mut node = node.to_vec();
    for steps in 0..=depth {
        let lo = match i_moves(&node).last() {
            Some(m) => expect_nat(m)? + 1,
            None => 0,
        };
        let mut blocked = None;
        for n in lo..lo.saturating_add(width) {
            let mut probe = node.clone();
            probe.push(Move::Nat(n));
            if !expect_bit(&tau.next_move(&probe)?)? {
                blocked = Some(n);
                break;
            }
        }
        match blocked {
            None => return Ok(Extension::Open(node)),
            Some(n) if steps < depth => {
                node.push(Move::Nat(n));
                node.push(Move::Bit(false));
            }
            Some(n) => {
                return Ok(Extension::Stalled {
                    reason: format!(
                        "after {depth} zero-answered moves, {} still answers 0 to {n}",
                        tau.label()
                    ),
                })
            }
        }
    }
    unreachable!("the loop returns on its last step")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::GameKind;
    use crate::ideals::{cantor_encode, delta_point};
    use crate::strategies::{always_one, always_zero, constant, echo, ed_fin_selector, scripted};

    fn nats(v: &[u64]) -> Vec<Move> {
        v.iter().map(|&n| Move::Nat(n)).collect()
    }

    #[test]
    fn tree_file_round_trip_and_lookup() {
        let text = "tree v1\nnode [] succ cofinite(3)\nnode [4] succ explicit{5,9} partial\n";
        let t = TreeFile::parse("t", text).unwrap();
        assert_eq!(t.to_text(), text);
        assert_eq!(t.successors(&[7, 8]), SuccessorSpec::Cofinite(3));
        assert_eq!(t.successors(&[4, 9]), "explicit{5,9}".parse().unwrap());
        assert!(t.is_partial(&[4]));
        assert!(t.contains(&[4, 5]) && !t.contains(&[4, 6]));
        match TreeFile::parse("t", "tree v1\nnode [] succ sideways(1)\n") {
            Err(Error::Parse(e)) => {
                assert_eq!(e.pos, "tree v1\nnode [] succ ".len());
                assert!(e.message.starts_with("line 2"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(TreeFile::parse("t", "node [] succ cofinite(0)\n").is_err());
        assert!(matches!(
            TreeFile::parse("t", "tree v1\nnode [1] succ cofinite(0)\n"),
            Err(Error::TreeShape(_))
        ));
    }

    #[test]
    fn uniform_tree_levels() {
        let t = uniform_tree_from_witness(vec![SetGen::naturals()]).unwrap();
        assert_eq!(t.level(0), SetGen::naturals());
        let t = uniform_tree_from_witness(vec![SetGen::evens(), SetGen::odds()]).unwrap();
        assert_eq!(t.level(cantor_encode(1, 1)), SetGen::odds());
        assert_eq!(t.level(cantor_encode(0, 3)), SetGen::evens().tail(3));
        assert!(uniform_tree_from_witness(Vec::new()).is_none());
    }

    #[test]
    fn ed_pulled_tree_nodes() {
        let t = ed_pulled_tree(PointMap::Delta);
        assert!(t.contains(&[0, 1]));
        assert!(!t.contains(&[1, 2]));
        assert_eq!(t.successors(&[]), SuccessorSpec::everything());
        let path = [0, 2, 5, 9];
        assert!(t.contains(&path));
        let cols: Vec<u64> = path.iter().map(|&n| delta_point(n).0).collect();
        assert_eq!(cols, vec![0, 1, 2, 3]);
    }

    #[test]
    fn strategy_tree_examples() {
        let spec = crate::games::mk_real_game(GameKind::Bounding).unwrap();
        let t = strategy_tree(&spec, &always_one(), 2, 3).unwrap();
        assert_eq!(t.leaves.len(), 3);
        assert!(t.leaves.iter().all(|p| p[1] == Move::Bit(true)));
        let star = crate::games::mk_real_game(GameKind::BoundingStar).unwrap();
        let s = scripted(Role::II, GameKind::BoundingStar, nats(&[1, 2]));
        let t = strategy_tree(&star, &s, 4, 1).unwrap();
        assert_eq!(t.leaves, vec![nats(&[0, 1, 0, 2])]);
        let t = strategy_tree(&star, &echo(), 5, 3).unwrap();
        assert!(t.leaves.len() <= 27);
    }

    #[test]
    fn splitting_examples() {
        let star = crate::games::mk_real_game(GameKind::BoundingStar).unwrap();
        let cert = find_splitting(&star, &echo(), &[], 8, 4).unwrap().unwrap();
        assert_eq!((cert.k, cert.v0.clone(), cert.v1.clone()), (1, Move::Nat(0), Move::Nat(1)));
        assert!(cert.replay(&star, &echo()).unwrap());
        assert!(!cert.replay(&star, &constant(Role::II, 0)).unwrap());
        assert_eq!(find_splitting(&star, &constant(Role::II, 3), &[], 6, 4).unwrap(), None);
    }

    #[test]
    fn perfect_subtree_examples() {
        let star = crate::games::mk_real_game(GameKind::BoundingStar).unwrap();
        let p = perfect_subtree(&star, &echo(), 2, 8, 4).unwrap();
        assert!(p.is_complete());
        p.verify().unwrap();
        let xs: std::collections::BTreeSet<Vec<u64>> =
            p.leaves().map(|(_, play)| project_play(play).unwrap()).collect();
        assert_eq!(xs.len(), 4);
        let text = p.to_text();
        assert_eq!(text.lines().filter(|l| l.starts_with("leaf ")).count(), 4);
        assert!(text.starts_with("perfect v1\ndepth 2\nsplit root at "), "{text}");
        let c = perfect_subtree(&star, &constant(Role::II, 2), 2, 8, 4).unwrap();
        assert_eq!(c.failure.as_deref(), Some(""));
        assert!(c.to_text().ends_with("failure root partial\n"));
    }

    #[test]
    fn projection_examples() {
        let t = Transcript::new(GameKind::BoundingStar, 3, nats(&[0, 4, 1, 7, 2, 9]));
        assert_eq!(witness_projection(&t).unwrap(), vec![4, 7, 9]);
        let empty = Transcript::new(GameKind::BoundingStar, 0, Vec::new());
        assert!(witness_projection(&empty).unwrap().is_empty());
        let bits = Transcript::new(GameKind::Bounding, 1, vec![Move::Nat(0), Move::Bit(true)]);
        assert!(matches!(witness_projection(&bits), Err(Error::Shape(_))));
    }

    #[test]
    fn tree_extension_examples() {
        assert_eq!(
            bounded_tree_extension(&always_one(), &[], 4, 8).unwrap(),
            Extension::Open(Vec::new())
        );
        let node = vec![Move::Nat(1), Move::Bit(true)];
        let ext = bounded_tree_extension(&ed_fin_selector(), &node, 4, 8).unwrap();
        assert_eq!(
            ext,
            Extension::Open(vec![Move::Nat(1), Move::Bit(true), Move::Nat(2), Move::Bit(false)])
        );
        assert!(matches!(
            bounded_tree_extension(&always_zero(), &[], 4, 8).unwrap(),
            Extension::Stalled { .. }
        ));
    }
}
