//! Reading an I*-branching tree off a Player II strategy of the tallness*
//! or `B(I, J)` game.
//!
//! Below a node `s` with play `p_s`, the set `M_s` holds the extensions of
//! `p_s` that the strategy answers with 0 throughout except at the last
//! move, which it answers with 1. `H_s` collects those last moves.

use std::collections::{BTreeMap, VecDeque};

use crate::engine::{Move, Role, Strategy};
use crate::sets::SuccessorSpec;
use crate::strategies::{expect_bit, expect_nat, i_moves};
use crate::trees::TreeFile;
use crate::{Error, Result};

/// Strategy calls allowed while exploring one node.
pub const HS_BUDGET: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsNode {
    /// The node `s`: the moves answered with 1 so far.
    pub path: Vec<u64>,
    /// The play `p_s` realising `s`.
    pub play: Vec<Move>,
    /// `H_s ∩ [0, width]`, as found.
    pub successors: Vec<u64>,
    /// `t^n_s` for each `n` in `successors`.
    pub witnesses: BTreeMap<u64, Vec<Move>>,
    /// The depth bound or the call budget cut the search short.
    pub partial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsTree {
    pub depth: usize,
    pub width: u64,
    pub nodes: Vec<HsNode>,
}

fn least_move(play: &[Move]) -> Result<u64> {
    Ok(match i_moves(play).last() {
        Some(m) => expect_nat(m)? + 1,
        None => 0,
    })
}

/// Explores `H_s` below `play` by breadth-first search, so each witness is
/// a shortest one.
fn explore(tau: &dyn Strategy, path: Vec<u64>, play: Vec<Move>, depth: usize, width: u64) -> Result<HsNode> {
    let lo = least_move(&play)?;
    let wanted = (width + 1).saturating_sub(lo);
    let mut witnesses = BTreeMap::new();
    let mut partial = false;
    let mut calls = 0;
    let mut queue = VecDeque::from([play.clone()]);
    'search: while let Some(q) = queue.pop_front() {
        let room = q.len() + 2 <= play.len() + depth;
        if !room {
            partial = true;
            continue;
        }
        for n in least_move(&q)?..=width {
            calls += 1;
            if calls > HS_BUDGET {
                partial = true;
                break 'search;
            }
            let mut t = q.clone();
            t.push(Move::Nat(n));
            let answer = tau.next_move(&t)?;
            let one = expect_bit(&answer)?;
            t.push(answer);
            if one {
                witnesses.entry(n).or_insert(t);
                if witnesses.len() as u64 == wanted {
                    break 'search;
                }
            } else {
                queue.push_back(t);
            }
        }
    }
    if witnesses.len() as u64 == wanted {
        partial = false;
    }
    Ok(HsNode {
        path,
        play,
        successors: witnesses.keys().copied().collect(),
        witnesses,
        partial,
    })
}

/// Explores `levels` levels of the tree, following the least `fanout`
/// successors of each node.
pub fn extract_hs_tree(
    tau: &dyn Strategy,
    depth: usize,
    width: u64,
    levels: usize,
    fanout: usize,
) -> Result<HsTree> {
    if tau.role() != Role::II {
        return Err(Error::Config("H_s extraction needs a player II strategy".into()));
    }
    let mut nodes = Vec::new();
    let mut level = vec![(Vec::new(), Vec::new())];
    for l in 0..=levels {
        let mut next = Vec::new();
        for (path, play) in level {
            let node = explore(tau, path, play, depth, width)?;
            if l < levels {
                for &n in node.successors.iter().take(fanout) {
                    let mut child = node.path.clone();
                    child.push(n);
                    next.push((child, node.witnesses[&n].clone()));
                }
            }
            nodes.push(node);
        }
        level = next;
    }
    Ok(HsTree { depth, width, nodes })
}

impl HsTree {
    /// The tree file: a node whose successors fill `[lo, width]` is written
    /// as the cofinite set from `lo`, anything else as the explicit list.
    /// Nodes below the explored levels inherit their nearest listed ancestor.
    pub fn to_tree_file(&self, name: impl Into<String>) -> Result<TreeFile> {
        let mut file = TreeFile::new(name, SuccessorSpec::everything());
        for node in &self.nodes {
            let lo = least_move(&node.play)?;
            let full = !node.successors.is_empty()
                && node.successors.len() as u64 == (self.width + 1).saturating_sub(lo);
            let spec = if full {
                SuccessorSpec::Cofinite(lo)
            } else {
                SuccessorSpec::Explicit(node.successors.iter().copied().collect())
            };
            file.insert(node.path.clone(), spec, node.partial);
        }
        Ok(file)
    }

    /// Re-queries `tau` along every witness: answers 0 strictly between
    /// `p_s` and `t^n_s`, and 1 at `n`.
    pub fn verify(&self, tau: &dyn Strategy) -> std::result::Result<(), String> {
        for node in &self.nodes {
            for (&n, t) in &node.witnesses {
                let fail = |why: &str| format!("node {:?}, successor {n}: {why}", node.path);
                if !t.starts_with(&node.play) || t.len() < node.play.len() + 2 {
                    return Err(fail("witness does not extend the node's play"));
                }
                if t[t.len() - 2] != Move::Nat(n) {
                    return Err(fail("witness does not end with the successor"));
                }
                for j in (node.play.len() + 1..t.len()).step_by(2) {
                    let fresh = tau.next_move(&t[..j]).map_err(|e| fail(&e.to_string()))?;
                    if fresh != t[j] {
                        return Err(fail("recorded answer differs from the strategy"));
                    }
                    let want = Move::Bit(j == t.len() - 1);
                    if fresh != want {
                        return Err(fail(&format!("answer at position {j} is {fresh}, expected {want}")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::GameKind;
    use crate::strategies::{always_one, always_zero, scripted};
    use crate::trees::LazyTree;

    #[test]
    fn always_one_gives_everything() {
        let t = extract_hs_tree(&always_one(), 8, 12, 1, 2).unwrap();
        assert_eq!(t.nodes[0].successors, (0..=12).collect::<Vec<_>>());
        assert!(!t.nodes[0].partial);
        t.verify(&always_one()).unwrap();
        let file = t.to_tree_file("hs").unwrap();
        assert_eq!(file.successors(&[]), SuccessorSpec::Cofinite(0));
        assert_eq!(file.successors(&[1]), SuccessorSpec::Cofinite(2));
    }

    #[test]
    fn always_zero_gives_nothing() {
        let t = extract_hs_tree(&always_zero(), 4, 6, 2, 2).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert!(t.nodes[0].successors.is_empty());
        assert!(t.nodes[0].partial);
    }

    #[test]
    fn witnesses_pass_through_zeros() {
        let tau = scripted(
            Role::II,
            GameKind::TallnessStar,
            vec![Move::Bit(false), Move::Bit(true)],
        );
        let t = extract_hs_tree(&tau, 6, 5, 0, 0).unwrap();
        assert_eq!(t.nodes[0].successors, vec![1, 2, 3, 4, 5]);
        assert_eq!(t.nodes[0].witnesses[&1].len(), 4);
        t.verify(&tau).unwrap();
    }
}
