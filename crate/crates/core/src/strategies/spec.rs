//! The strategy mini-language.
//!
//! ```text
//! spec    := atom | atom ':' arg | wrapper '(' spec { ',' key '=' value } ')'
//! atom    := always-one | always-zero | flipper | ed-fin-selector | echo
//!          | constant:<n> | threshold:<c> | scripted:[<move>,...] | random[:<seed>]
//!          | response:bounding:g=<rule> | response:anti-localizing:x=<rule>
//!          | enum-forcing:f=<rule> | ideal-reply:<setgen>
//!          | positive-sequence:phi=<rule>;<setgen>;...
//!          | tree:<src> | branching-tree:<src> | g-from-tree:<src>
//! src     := @edfin | @ed | <tree file path>
//! wrapper := kb-lift (f=<rule> [, fiber=<rule>])
//!          | b-from-g | tallness-from-hmm | hmm-player-ii
//!          | hmm-from-tallness ([depth=<n>] [, width=<n>])
//! ```
//!
//! Every strategy's label is a spec that parses back to it, given the same
//! context. Positions in errors are byte offsets into the whole spec.

use std::path::PathBuf;
use std::sync::Arc;

use crate::engine::{GameKind, Move, Role, Shape, StrategyRef};
use crate::ideals::{check_finite_to_one, CostIdeal, FiniteToOneMap};
use crate::rule::Rule;
use crate::sets::{parse_u64, split_top, PointMap, SetGen};
use crate::strategies::{
    always_one, always_zero, b_from_g, branching_tree_player_ii, constant, echo, ed_fin_selector,
    enumeration_forcing, flipper, g_from_tree, hmm_from_tallness_ii, hmm_player_ii, ideal_reply,
    kb_lift, kb_lift_unchecked, positive_sequence_strategy, response_play, scripted, share,
    tallness_from_hmm, threshold, tree_player_i, ResponseMode,
};
use crate::trees::{ed_pulled_tree, TreeFile, TreeRef};
use crate::{ParseError, DEFAULT_DEPTH_BOUND, DEFAULT_WIDTH_BOUND};

/// Fiber contracts are checked on `[0, FIBER_CHECK]²`.
pub const FIBER_CHECK: u64 = 4096;

/// Where a spec will be played, plus the defaults it may omit.
#[derive(Debug, Clone)]
pub struct SpecContext {
    pub kind: GameKind,
    pub role: Role,
    /// Tree file paths are resolved against this directory.
    pub base_dir: PathBuf,
    /// Seed of a bare `random`.
    pub seed: u64,
    /// The ideal behind `ideal-reply`.
    pub ideal: CostIdeal,
    pub budget: u64,
}

impl SpecContext {
    pub fn new(kind: GameKind, role: Role) -> Self {
        SpecContext {
            kind,
            role,
            base_dir: PathBuf::from("."),
            seed: 0,
            ideal: CostIdeal::Fin,
            budget: 1,
        }
    }

    fn inner(&self, kind: GameKind, role: Role) -> Self {
        SpecContext {
            kind,
            role,
            ..self.clone()
        }
    }
}

pub fn parse_strategy(src: &str, ctx: &SpecContext) -> Result<StrategyRef, ParseError> {
    Parser { ctx }.spec(src, 0)
}

struct Parser<'a> {
    ctx: &'a SpecContext,
}

/// `s` without surrounding whitespace, with the offset of what remains.
fn trimmed(s: &str, pos: usize) -> (&str, usize) {
    let lead = s.len() - s.trim_start().len();
    (s.trim(), pos + lead)
}

fn parse_rule(s: &str, pos: usize) -> Result<Rule, ParseError> {
    let (t, pos) = trimmed(s, pos);
    if t.is_empty() {
        return Err(ParseError::new(pos, "expected a rule"));
    }
    t.parse::<Rule>().map_err(|e| e.offset(pos))
}

fn parse_setgen(s: &str, pos: usize) -> Result<SetGen, ParseError> {
    let (t, pos) = trimmed(s, pos);
    SetGen::parse_at(t, pos)
}

fn parse_nat(s: &str, pos: usize) -> Result<u64, ParseError> {
    let (t, pos) = trimmed(s, pos);
    parse_u64(t, pos)
}

/// `key=value`, returning the value and its offset.
fn keyed<'s>(s: &'s str, key: &str, pos: usize) -> Result<(&'s str, usize), ParseError> {
    let (t, pos) = trimmed(s, pos);
    t.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .map(|v| (v, pos + key.len() + 1))
        .ok_or_else(|| ParseError::new(pos, format!("expected '{key}=...'")))
}

impl Parser<'_> {
    fn require(&self, ok: bool, pos: usize, name: &str, wanted: &str) -> Result<(), ParseError> {
        if ok {
            Ok(())
        } else {
            Err(ParseError::new(
                pos,
                format!(
                    "'{name}' is {wanted}, but this slot is player {} of {}",
                    self.ctx.role, self.ctx.kind
                ),
            ))
        }
    }

    fn role_is(&self, role: Role, kinds: &[GameKind]) -> bool {
        self.ctx.role == role && kinds.contains(&self.ctx.kind)
    }

    fn spec(&self, src: &str, pos: usize) -> Result<StrategyRef, ParseError> {
        let (s, pos) = trimmed(src, pos);
        if s.is_empty() {
            return Err(ParseError::new(pos, "expected a strategy"));
        }
        let name_end = s
            .find(|c: char| c == ':' || c == '(')
            .unwrap_or(s.len());
        let name = &s[..name_end];
        match s[name_end..].chars().next() {
            Some('(') => {
                if !s.ends_with(')') {
                    return Err(ParseError::new(pos + s.len(), format!("expected ')' closing '{name}('")));
                }
                let body = &s[name_end + 1..s.len() - 1];
                let parts = split_top(body, b',');
                let parts: Vec<(&str, usize)> =
                    parts.into_iter().map(|(off, p)| (p, pos + name_end + 1 + off)).collect();
                self.wrapper(name, pos, &parts)
            }
            Some(_) => self.atom(name, pos, Some((&s[name_end + 1..], pos + name_end + 1))),
            None => self.atom(name, pos, None),
        }
    }

    fn no_arg(&self, name: &str, arg: Option<(&str, usize)>) -> Result<(), ParseError> {
        match arg {
            None => Ok(()),
            Some((_, at)) => Err(ParseError::new(at - 1, format!("'{name}' takes no argument"))),
        }
    }

    fn arg<'s>(&self, name: &str, pos: usize, arg: Option<(&'s str, usize)>) -> Result<(&'s str, usize), ParseError> {
        arg.ok_or_else(|| ParseError::new(pos + name.len(), format!("'{name}' needs an argument after ':'")))
    }

    fn atom(&self, name: &str, pos: usize, arg: Option<(&str, usize)>) -> Result<StrategyRef, ParseError> {
        use GameKind::*;
        let ctx = self.ctx;
        let nat_i_bit_ii = [Tallness, TallnessStar, GameB];
        match name {
            "always-one" | "always-zero" => {
                self.no_arg(name, arg)?;
                self.require(ctx.kind.shape(ctx.role) == Shape::Bit, pos, name, "a bit strategy")?;
                let s = if name == "always-one" { always_one() } else { always_zero() };
                Ok(share(s.for_role(ctx.role)))
            }
            "flipper" => {
                self.no_arg(name, arg)?;
                self.require(self.role_is(Role::I, &[ReapingStar]), pos, name, "player I of reaping-star")?;
                Ok(share(flipper()))
            }
            "ed-fin-selector" => {
                self.no_arg(name, arg)?;
                self.require(self.role_is(Role::II, &nat_i_bit_ii), pos, name, "player II of a tallness game")?;
                Ok(share(ed_fin_selector()))
            }
            "echo" => {
                self.no_arg(name, arg)?;
                let ok = ctx.role == Role::II
                    && ctx.kind.shape(Role::II) == Shape::Nat
                    && matches!(ctx.kind.shape(Role::I), Shape::Nat | Shape::FinSet);
                self.require(ok, pos, name, "a natural-valued player II")?;
                Ok(share(echo()))
            }
            "constant" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(ctx.kind.shape(ctx.role) == Shape::Nat, pos, name, "a natural-valued strategy")?;
                Ok(share(constant(ctx.role, parse_nat(a, at)?)))
            }
            "threshold" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::I, &[Hmm]), pos, name, "player I of hmm")?;
                Ok(share(threshold(parse_nat(a, at)?)))
            }
            "scripted" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.scripted(a, at)
            }
            "random" => {
                let seed = match arg {
                    Some((a, at)) => parse_nat(a, at)?,
                    None => ctx.seed,
                };
                Ok(share(crate::harness::random_strategy(ctx.role, ctx.kind, seed)))
            }
            "response" => {
                let (a, at) = self.arg(name, pos, arg)?;
                let (mode, key, kind, rest) = if let Some(r) = a.strip_prefix("bounding:") {
                    (ResponseMode::Bounding, "g", Bounding, (r, at + 9))
                } else if let Some(r) = a.strip_prefix("anti-localizing:") {
                    (ResponseMode::AntiLocalizing, "x", AntiLocalizing, (r, at + 16))
                } else {
                    return Err(ParseError::new(at, "expected 'bounding:g=<rule>' or 'anti-localizing:x=<rule>'"));
                };
                self.require(self.role_is(Role::II, &[kind]), pos, name, &format!("player II of {kind}"))?;
                let (v, vat) = keyed(rest.0, key, rest.1)?;
                Ok(share(response_play(None, parse_rule(v, vat)?, mode)))
            }
            "enum-forcing" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::I, &[Reaping]), pos, name, "player I of reaping")?;
                let (v, vat) = keyed(a, "f", at)?;
                Ok(share(enumeration_forcing(parse_rule(v, vat)?)))
            }
            "ideal-reply" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::II, &nat_i_bit_ii), pos, name, "player II of a tallness game")?;
                Ok(share(ideal_reply(ctx.ideal, ctx.budget, parse_setgen(a, at)?)))
            }
            "positive-sequence" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::I, &[Tallness, TallnessStar]), pos, name, "player I of a tallness game")?;
                let mut parts = split_top(a, b';').into_iter();
                let (off, phi) = parts.next().expect("split yields a piece");
                let (v, vat) = keyed(phi, "phi", at + off)?;
                let phi = parse_rule(v, vat)?;
                let xs = parts
                    .map(|(off, x)| parse_setgen(x, at + off))
                    .collect::<Result<Vec<_>, _>>()?;
                if xs.is_empty() {
                    return Err(ParseError::new(at + a.len(), "expected ';<setgen>' after phi"));
                }
                Ok(share(positive_sequence_strategy(xs, phi)))
            }
            "tree" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::I, &nat_i_bit_ii), pos, name, "player I of a tallness game")?;
                Ok(share(tree_player_i(self.tree(a, at)?)))
            }
            "branching-tree" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::II, &nat_i_bit_ii), pos, name, "player II of a tallness game")?;
                Ok(share(branching_tree_player_ii(self.tree(a, at)?)))
            }
            "g-from-tree" => {
                let (a, at) = self.arg(name, pos, arg)?;
                self.require(self.role_is(Role::I, &[GameG]), pos, name, "player I of game-g")?;
                Ok(share(g_from_tree(self.tree(a, at)?)))
            }
            "" => Err(ParseError::new(pos, "expected a strategy name")),
            other => Err(ParseError::new(pos, format!("unknown strategy '{other}'"))),
        }
    }

    fn scripted(&self, a: &str, at: usize) -> Result<StrategyRef, ParseError> {
        let (t, at) = trimmed(a, at);
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| ParseError::new(at, "expected '[<move>,...]'"))?;
        let shape = self.ctx.kind.shape(self.ctx.role);
        let moves = if inner.trim().is_empty() {
            Vec::new()
        } else {
            split_top(inner, b',')
                .into_iter()
                .map(|(off, m)| Move::parse_as(m, shape, at + 1 + off))
                .collect::<Result<Vec<_>, _>>()?
        };
        if moves.is_empty() {
            return Err(ParseError::new(at, "a script needs at least one move"));
        }
        Ok(share(scripted(self.ctx.role, self.ctx.kind, moves)))
    }

    fn tree(&self, a: &str, at: usize) -> Result<TreeRef, ParseError> {
        let (t, at) = trimmed(a, at);
        match t {
            "@edfin" => Ok(Arc::new(ed_pulled_tree(PointMap::Delta))),
            "@ed" => Ok(Arc::new(ed_pulled_tree(PointMap::Cantor))),
            "" => Err(ParseError::new(at, "expected a tree file or @edfin/@ed")),
            path => {
                let text = std::fs::read_to_string(self.ctx.base_dir.join(path))
                    .map_err(|e| ParseError::new(at, format!("cannot read tree file '{path}': {e}")))?;
                let file = TreeFile::parse(path, &text)
                    .map_err(|e| ParseError::new(at, format!("tree file '{path}': {e}")))?;
                Ok(Arc::new(file))
            }
        }
    }

    fn wrapper(&self, name: &str, pos: usize, parts: &[(&str, usize)]) -> Result<StrategyRef, ParseError> {
        use GameKind::*;
        let ctx = self.ctx;
        let (inner_src, inner_at) = parts[0];
        let opts = &parts[1..];
        let no_opts = || match opts.first() {
            None => Ok(()),
            Some(&(_, at)) => Err(ParseError::new(at, format!("'{name}' takes no options"))),
        };
        match name {
            "kb-lift" => {
                self.require(self.role_is(Role::II, &[Tallness, TallnessStar]), pos, name, "player II of a tallness game")?;
                let inner = self.nested(inner_src, inner_at, ctx.kind, Role::II)?;
                let &(f_src, f_at) = opts
                    .first()
                    .ok_or_else(|| ParseError::new(pos + name.len() + 1 + inner_src.len(), "expected ',f=<rule>'"))?;
                let (v, vat) = keyed(f_src, "f", f_at)?;
                let f = parse_rule(v, vat)?;
                match opts.get(1) {
                    None => Ok(share(kb_lift_unchecked(inner, f))),
                    Some(&(b_src, b_at)) => {
                        let (v, vat) = keyed(b_src, "fiber", b_at)?;
                        let map = FiniteToOneMap::new(f, parse_rule(v, vat)?);
                        if !check_finite_to_one(&map, FIBER_CHECK) {
                            return Err(ParseError::new(b_at, format!("f exceeds the fiber bound within [0,{FIBER_CHECK}]")));
                        }
                        if let Some(&(_, at)) = opts.get(2) {
                            return Err(ParseError::new(at, "unexpected option"));
                        }
                        Ok(share(kb_lift(inner, map)))
                    }
                }
            }
            "b-from-g" => {
                self.require(self.role_is(Role::II, &[GameB]), pos, name, "player II of game-b")?;
                no_opts()?;
                Ok(share(b_from_g(self.nested(inner_src, inner_at, GameG, Role::I)?)))
            }
            "tallness-from-hmm" => {
                self.require(self.role_is(Role::II, &[Tallness, TallnessStar]), pos, name, "player II of a tallness game")?;
                no_opts()?;
                Ok(share(tallness_from_hmm(self.nested(inner_src, inner_at, Hmm, Role::I)?)))
            }
            "hmm-player-ii" => {
                self.require(self.role_is(Role::II, &[Hmm]), pos, name, "player II of hmm")?;
                no_opts()?;
                Ok(share(hmm_player_ii(self.nested(inner_src, inner_at, Tallness, Role::I)?)))
            }
            "hmm-from-tallness" => {
                self.require(self.role_is(Role::I, &[Hmm]), pos, name, "player I of hmm")?;
                let inner = self.nested(inner_src, inner_at, Tallness, Role::II)?;
                let (mut depth, mut width) = (DEFAULT_DEPTH_BOUND, DEFAULT_WIDTH_BOUND);
                for &(o, at) in opts {
                    let (t, at) = trimmed(o, at);
                    if t.starts_with("depth=") {
                        let (v, vat) = keyed(t, "depth", at)?;
                        depth = parse_nat(v, vat)? as usize;
                    } else if t.starts_with("width=") {
                        let (v, vat) = keyed(t, "width", at)?;
                        width = parse_nat(v, vat)?;
                    } else {
                        return Err(ParseError::new(at, "expected 'depth=<n>' or 'width=<n>'"));
                    }
                }
                Ok(share(hmm_from_tallness_ii(inner, depth, width)))
            }
            other => Err(ParseError::new(pos, format!("unknown strategy translation '{other}'"))),
        }
    }

    fn nested(&self, src: &str, at: usize, kind: GameKind, role: Role) -> Result<StrategyRef, ParseError> {
        Parser {
            ctx: &self.ctx.inner(kind, role),
        }
        .spec(src, at)
    }
}
