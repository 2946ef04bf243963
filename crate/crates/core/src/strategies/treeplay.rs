//! Strategies that walk a tree, strategies for the positive-set games, and
//! the translation from `G(I, J)` to `B(I, J)`.

use crate::engine::{GameKind, Move, Role, Strategy, StrategyRef, Transcript};
use crate::ideals::{CostIdeal, Pairing};
use crate::rule::Rule;
use crate::sets::{FinSet, IdealSetDesc, PointMap, SetGen, SuccessorSpec, SCAN_LIMIT};
use crate::strategies::{expect_bit, expect_nat, i_moves, ii_moves, last_move};
use crate::trees::TreeRef;
use crate::{Error, Result};

/// Player I's naturals and Player II's bits, paired round by round.
fn rounds(prefix: &[Move]) -> Result<Vec<(u64, bool)>> {
    i_moves(prefix)
        .zip(ii_moves(prefix))
        .map(|(n, b)| Ok((expect_nat(n)?, expect_bit(b)?)))
        .collect()
}

/// Player I walking a tree: plays the least successor of the current node
/// above its last move, and steps into that child when answered with 1.
#[derive(Clone)]
pub struct TreePlayerI {
    tree: TreeRef,
}

pub fn tree_player_i(tree: TreeRef) -> TreePlayerI {
    TreePlayerI { tree }
}

impl TreePlayerI {
    /// The node reached after `prefix`: Player I's moves answered with 1.
    pub fn cursor(prefix: &[Move]) -> Result<Vec<u64>> {
        Ok(rounds(prefix)?.into_iter().filter(|r| r.1).map(|r| r.0).collect())
    }
}

impl Strategy for TreePlayerI {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        format!("tree:{}", self.tree.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let node = Self::cursor(prefix)?;
        let last = i_moves(prefix).last().map(expect_nat).transpose()?;
        let succ = self.tree.successors(&node);
        succ.next_above(last, SCAN_LIMIT).map(Move::Nat).ok_or_else(|| {
            Error::TreeShape(format!(
                "node {node:?} has no successor above {} in {succ}",
                last.map_or("-".into(), |l| l.to_string())
            ))
        })
    }
}

/// Player I of tallness*: plays the least element of `X_{φ(s)}` above its
/// last move, where `s` counts Player II's ones.
#[derive(Debug, Clone)]
pub struct PositiveSequence {
    xs: Vec<SetGen>,
    phi: Rule,
}

pub fn positive_sequence_strategy(xs: Vec<SetGen>, phi: Rule) -> PositiveSequence {
    PositiveSequence { xs, phi }
}

impl PositiveSequence {
    /// Checks `φ` maps `0..=bound` into the family and, on that range, takes
    /// every value it takes at least `repeats` times.
    pub fn check_phi(&self, bound: u64, repeats: usize) -> Result<()> {
        let mut counts = vec![0usize; self.xs.len()];
        for s in 0..=bound {
            let i = self.phi.eval(s);
            *counts.get_mut(i as usize).ok_or_else(|| {
                Error::Config(format!("phi({s}) = {i} but only {} sets are given", self.xs.len()))
            })? += 1;
        }
        match counts.iter().position(|&c| c > 0 && c < repeats) {
            Some(i) => Err(Error::Config(format!(
                "phi takes the value {i} only {} times up to {bound}",
                counts[i]
            ))),
            None => Ok(()),
        }
    }
}

impl Strategy for PositiveSequence {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        let xs: Vec<String> = self.xs.iter().map(|x| x.to_string()).collect();
        format!("positive-sequence:phi={};{}", self.phi, xs.join(";"))
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let history = rounds(prefix)?;
        let s = history.iter().filter(|r| r.1).count() as u64;
        let i = self.phi.eval(s);
        let x = self.xs.get(i as usize).ok_or_else(|| {
            Error::Config(format!("phi({s}) = {i} but only {} sets are given", self.xs.len()))
        })?;
        let next = match history.last() {
            Some(&(last, _)) => x.next_above(last),
            None => x.least_from(0),
        };
        next.map(Move::Nat).ok_or_else(|| {
            Error::Config(format!("X_{i} = {x} has no element above the last move"))
        })
    }
}

/// Player II answering 1 exactly on the members of a set judged small by
/// `ideal` within `budget`.
#[derive(Debug, Clone)]
pub struct IdealReply {
    ideal: CostIdeal,
    budget: u64,
    member: SetGen,
}

pub fn ideal_reply(ideal: CostIdeal, budget: u64, member: SetGen) -> IdealReply {
    IdealReply {
        ideal,
        budget,
        member,
    }
}

impl IdealReply {
    /// Cost of the member set's elements up to `bound`, and whether it fits.
    pub fn member_cost(&self, bound: u64) -> (u64, bool) {
        let c = self.ideal.cost_of_codes(&self.member.up_to(bound));
        (c, c <= self.budget)
    }
}

impl Strategy for IdealReply {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        format!("ideal-reply:{}", self.member)
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let n = expect_nat(last_move(prefix)?)?;
        Ok(Move::Bit(self.member.contains(n)))
    }
}

/// The ideal set `ω \ spec`, when it has a finite description.
pub fn successor_complement(spec: &SuccessorSpec) -> Result<IdealSetDesc> {
    let lines = |c: u64, coding| IdealSetDesc::LinesAndGraphs {
        lines: FinSet::range_below(c),
        graphs: Vec::new(),
        coding,
    };
    match spec {
        SuccessorSpec::Cofinite(t) => Ok(IdealSetDesc::Finite(FinSet::range_below(*t))),
        SuccessorSpec::TailColumns(c) => Ok(lines(*c, Pairing::Cantor)),
        SuccessorSpec::PulledBack(map, inner) => match (map, inner.as_ref()) {
            (PointMap::Delta, SuccessorSpec::TailColumns(c)) => Ok(lines(*c, Pairing::Delta)),
            (PointMap::Cantor, inner) => successor_complement(inner),
            _ => Ok(IdealSetDesc::Complement(spec.clone())),
        },
        SuccessorSpec::Explicit(s) => Err(Error::TreeShape(format!(
            "the complement of the finite successor set {s} is not in an ideal"
        ))),
        SuccessorSpec::Generated(g) if g.is_finite() => Err(Error::TreeShape(format!(
            "the complement of the finite successor set {g} is not in an ideal"
        ))),
        SuccessorSpec::Generated(_) => Ok(IdealSetDesc::Complement(spec.clone())),
    }
}

/// Player I of `G(I, J)` walking a tree: at each node it plays the
/// complement of the node's successors, so every legal reply is a child.
#[derive(Clone)]
pub struct GFromTree {
    tree: TreeRef,
}

pub fn g_from_tree(tree: TreeRef) -> GFromTree {
    GFromTree { tree }
}

impl Strategy for GFromTree {
    fn role(&self) -> Role {
        Role::I
    }

    fn label(&self) -> String {
        format!("g-from-tree:{}", self.tree.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let node: Vec<u64> = ii_moves(prefix).map(expect_nat).collect::<Result<_>>()?;
        successor_complement(&self.tree.successors(&node)).map(Move::IdealSet)
    }
}

/// Plays `sigma` in a simulated `G` match whose Player II moves are the
/// `B`-moves outside `sigma`'s current set. Returns the simulated moves,
/// ending with the pending ideal set, and the kept flags.
fn run_g_simulation(sigma: &dyn Strategy, moves: &[u64]) -> Result<(Vec<Move>, Vec<bool>)> {
    let mut g = vec![sigma.next_move(&[])?];
    let mut flags = Vec::with_capacity(moves.len());
    for &n in moves {
        let played = g.last().and_then(Move::as_ideal).ok_or_else(|| {
            Error::Shape(format!("{} must play ideal sets", sigma.label()))
        })?;
        let keep = !played.contains(n);
        if keep {
            g.push(Move::Nat(n));
            g.push(sigma.next_move(&g)?);
        }
        flags.push(keep);
    }
    Ok((g, flags))
}

/// The `G` match `sigma` plays against the kept `B`-moves.
pub fn simulated_g(sigma: &dyn Strategy, b_moves: &[u64]) -> Result<Transcript> {
    let (mut g, _) = run_g_simulation(sigma, b_moves)?;
    g.pop();
    Ok(Transcript::new(GameKind::GameG, g.len() / 2, g))
}

/// Player II of `B(I, J)` built from Player I of `G(I, J)`.
#[derive(Clone)]
pub struct BFromG {
    sigma: StrategyRef,
}

pub fn b_from_g(sigma: StrategyRef) -> BFromG {
    BFromG { sigma }
}

impl Strategy for BFromG {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        format!("b-from-g({})", self.sigma.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let moves: Vec<u64> = i_moves(prefix).map(expect_nat).collect::<Result<_>>()?;
        let (_, flags) = run_g_simulation(self.sigma.as_ref(), &moves)?;
        Ok(Move::Bit(*flags.last().unwrap_or(&false)))
    }
}

/// Player II of tallness* walking a tree: answers 1 and steps down when
/// Player I plays a successor of the current node.
#[derive(Clone)]
pub struct BranchingTreePlayer {
    tree: TreeRef,
}

pub fn branching_tree_player_ii(tree: TreeRef) -> BranchingTreePlayer {
    BranchingTreePlayer { tree }
}

impl Strategy for BranchingTreePlayer {
    fn role(&self) -> Role {
        Role::II
    }

    fn label(&self) -> String {
        format!("branching-tree:{}", self.tree.label())
    }

    fn next_move(&self, prefix: &[Move]) -> Result<Move> {
        let mut node = Vec::new();
        let mut answer = false;
        for m in i_moves(prefix) {
            let n = expect_nat(m)?;
            answer = self.tree.successors(&node).contains(n);
            if answer {
                node.push(n);
            }
        }
        Ok(Move::Bit(answer))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play_match, replay};
    use crate::games::{GameSpec, WitnessFamily};
    use crate::strategies::{scripted, share};
    use crate::trees::{ed_pulled_tree, LazyTree, TreeFile};
    use std::sync::Arc;

    fn nats(v: &[u64]) -> Vec<Move> {
        v.iter().map(|&n| Move::Nat(n)).collect()
    }

    fn bits(v: &[u8]) -> Vec<Move> {
        v.iter().map(|&b| Move::Bit(b == 1)).collect()
    }

    fn evens_tree() -> TreeRef {
        Arc::new(TreeFile::new("evens", SuccessorSpec::Generated(SetGen::evens())))
    }

    #[test]
    fn tree_player_examples() {
        let p = tree_player_i(evens_tree());
        let play = replay(&p, &bits(&[0, 1])).unwrap();
        assert_eq!(i_moves(&play).cloned().collect::<Vec<_>>(), nats(&[0, 2, 4]));
        let play = replay(&p, &bits(&[0, 0, 0])).unwrap();
        assert_eq!(i_moves(&play).cloned().collect::<Vec<_>>(), nats(&[0, 2, 4, 6]));
        let finite: TreeRef = Arc::new(TreeFile::new("f", "explicit{1}".parse().unwrap()));
        let play = replay(&tree_player_i(finite), &bits(&[0]));
        assert!(matches!(play, Err(Error::TreeShape(_))));
    }

    #[test]
    fn positive_sequence_examples() {
        let p = positive_sequence_strategy(vec![SetGen::evens(), SetGen::odds()], "drow(k)".parse().unwrap());
        let play = replay(&p, &bits(&[0, 1])).unwrap();
        assert_eq!(i_moves(&play).cloned().collect::<Vec<_>>(), nats(&[0, 2, 4]));
        let play = replay(&p, &bits(&[1, 1])).unwrap();
        assert_eq!(i_moves(&play).cloned().collect::<Vec<_>>(), nats(&[0, 2, 3]));
        let parity = positive_sequence_strategy(vec![SetGen::evens(), SetGen::odds()], "drow(k)%2".parse().unwrap());
        parity.check_phi(100, 5).unwrap();
        assert!(p.check_phi(100, 5).is_err());
        let out = positive_sequence_strategy(vec![SetGen::evens()], Rule::identity());
        assert!(matches!(replay(&out, &bits(&[1])), Err(Error::Config(_))));
    }

    #[test]
    fn ideal_reply_examples() {
        let r = ideal_reply(CostIdeal::Fin, 0, SetGen::evens());
        let play = interleaved(&r, &[1, 2, 3, 4]);
        assert_eq!(ii_moves(&play).cloned().collect::<Vec<_>>(), bits(&[0, 1, 0, 1]));
        let none = ideal_reply(CostIdeal::Fin, 0, SetGen::empty());
        let play = interleaved(&none, &[1, 2, 3, 4]);
        assert!(ii_moves(&play).all(|m| *m == Move::Bit(false)));
    }

    fn interleaved(s: &dyn Strategy, i: &[u64]) -> Vec<Move> {
        replay(s, &nats(i)).unwrap()
    }

    #[test]
    fn complements() {
        assert_eq!(
            successor_complement(&SuccessorSpec::Cofinite(3)).unwrap(),
            IdealSetDesc::Finite("{0,1,2}".parse().unwrap())
        );
        let pulled = ed_pulled_tree(PointMap::Delta).successors(&[4]);
        let d = successor_complement(&pulled).unwrap();
        assert_eq!(d.to_string(), "lines{0,1,2}+graphs[]@delta");
        for n in 0..200 {
            assert_eq!(d.contains(n), !pulled.contains(n));
        }
        assert!(successor_complement(&"explicit{1,2}".parse().unwrap()).is_err());
    }

    #[test]
    fn b_from_g_examples() {
        let sigma = scripted(
            Role::I,
            GameKind::GameG,
            vec![Move::IdealSet(IdealSetDesc::Finite("{0,1}".parse().unwrap()))],
        );
        let tau = b_from_g(share(sigma.clone()));
        let play = interleaved(&tau, &[1, 5]);
        assert_eq!(ii_moves(&play).cloned().collect::<Vec<_>>(), bits(&[0, 1]));
        let g = simulated_g(&sigma, &[1, 5]).unwrap();
        assert_eq!(g.ii_moves().cloned().collect::<Vec<_>>(), nats(&[5]));

        let empty = scripted(Role::I, GameKind::GameG, vec![Move::IdealSet(IdealSetDesc::Finite(FinSet::empty()))]);
        let play = interleaved(&b_from_g(share(empty)), &[0, 3, 4]);
        assert!(ii_moves(&play).all(|m| *m == Move::Bit(true)));
    }

    #[test]
    fn g_from_tree_forces_tree_nodes() {
        let tree: TreeRef = Arc::new(ed_pulled_tree(PointMap::Delta));
        let spec = GameSpec::for_kind(GameKind::GameG, None, None).unwrap();
        let sigma = g_from_tree(tree.clone());
        let first = sigma.next_move(&[]).unwrap();
        assert_eq!(first, Move::IdealSet(IdealSetDesc::Finite(FinSet::empty())));
        let echo_above = scripted(Role::II, GameKind::GameG, nats(&[0]));
        let (t, v) = play_match(&spec, &sigma, &echo_above, 6, &WitnessFamily::None).unwrap();
        assert!(!matches!(v.status, crate::Status::Forfeit { .. }), "{t:?}");
        let node: Vec<u64> = t.ii_moves().map(|m| m.as_nat().unwrap()).collect();
        assert!(tree.contains(&node));

        let b = branching_tree_player_ii(tree.clone());
        let composed = b_from_g(share(g_from_tree(tree)));
        let moves = nats(&[0, 1, 2, 3, 5, 6, 9, 10]);
        assert_eq!(replay(&b, &moves).unwrap(), replay(&composed, &moves).unwrap());
    }
}
