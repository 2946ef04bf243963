use arena_core::trees::{constant_tail_probe, extract_hs_tree, perfect_subtree};
use arena_core::{GameKind, GameSpec, Role};

use crate::args::{ExtractArgs, What};
use crate::play::{context, strategy};
use crate::{emit, Exit};

/// Search depth behind each split of a perfect subtree.
const SPLIT_SEARCH_DEPTH: usize = 8;

pub fn run(a: ExtractArgs) -> Result<(), Exit> {
    let kind = a.game.unwrap_or(match a.what {
        What::Hs => GameKind::TallnessStar,
        What::Perfect | What::Tail => GameKind::BoundingStar,
    });
    let spec = GameSpec::for_kind(kind, None, None).map_err(|e| Exit::usage(e.to_string()))?;
    let tau = strategy("--strategy", &a.strategy, &context(kind, Role::II, a.seed, &spec))?;
    let failed = |e: arena_core::Error| Exit::failure(e.to_string());
    match a.what {
        What::Hs => {
            let tree = extract_hs_tree(tau.as_ref(), a.depth.unwrap_or(6), a.width.unwrap_or(12), a.levels, a.fanout)
                .map_err(failed)?;
            let file = tree.to_tree_file(tau.label()).map_err(failed)?;
            emit(a.out.as_deref(), &file.to_text())
        }
        What::Perfect => {
            let d = a.depth.unwrap_or(2);
            let p = perfect_subtree(&spec, tau.as_ref(), d, SPLIT_SEARCH_DEPTH, a.width.unwrap_or(4)).map_err(failed)?;
            emit(a.out.as_deref(), &p.to_text())?;
            match &p.failure {
                Some(node) => Err(Exit::failure(format!(
                    "no splitting found below node '{node}'; the tree is partial"
                ))),
                None => Ok(()),
            }
        }
        What::Tail => {
            let probe = constant_tail_probe(&spec, tau.as_ref(), a.depth.unwrap_or(8), a.width.unwrap_or(4))
                .map_err(failed)?;
            emit(a.out.as_deref(), &probe.to_text())
        }
    }
}
