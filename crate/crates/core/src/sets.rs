//! Finitely described subsets of ω: finite sets, eventually periodic
//! enumerations, tree successor descriptors and ideal-set descriptors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ideals::{cantor_decode, cantor_encode, delta_point, Pairing};
use crate::rule::Rule;
use crate::ParseError;

/// Splits on `sep` at bracket depth zero, returning each piece with its offset.
pub(crate) fn split_top(s: &str, sep: u8) -> Vec<(usize, &str)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Position of the bracket closing the one opening at `open`.
pub(crate) fn matching_close(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.bytes().enumerate().skip(open) {
        match c {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

pub(crate) fn parse_u64(s: &str, pos: usize) -> Result<u64, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    t.parse()
        .map_err(|_| ParseError::new(pos + lead, format!("expected a natural number, found '{t}'")))
}

/// Comma-separated naturals, possibly empty.
pub(crate) fn parse_u64_list(s: &str, pos: usize) -> Result<Vec<u64>, ParseError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .scan(0usize, |off, piece| {
            let at = *off;
            *off += piece.len() + 1;
            Some(parse_u64(piece, pos + at))
        })
        .collect()
}

/// Strips `open` ... `close` around `s` (which must start at offset `pos`).
pub(crate) fn delimited<'a>(
    s: &'a str,
    open: char,
    close: char,
    pos: usize,
) -> Result<&'a str, ParseError> {
    let t = s.trim_end();
    if !t.starts_with(open) {
        return Err(ParseError::new(pos, format!("expected '{open}'")));
    }
    if !t.ends_with(close) || t.len() < 2 {
        return Err(ParseError::new(pos + t.len(), format!("expected '{close}'")));
    }
    Ok(&t[1..t.len() - 1])
}

fn write_list(f: &mut fmt::Formatter<'_>, values: &[u64]) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// A finite set of naturals, strictly sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct FinSet(Vec<u64>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// Fails unless `values` is strictly increasing.
    pub fn from_sorted(values: Vec<u64>) -> Option<Self> {
        values.windows(2).all(|w| w[0] < w[1]).then_some(FinSet(values))
    }

    pub fn range(lo: u64, hi_inclusive: u64) -> Self {
        FinSet((lo..=hi_inclusive).collect())
    }

    /// `{0, ..., n-1}`
    pub fn range_below(n: u64) -> Self {
        FinSet((0..n).collect())
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }
}

impl FromIterator<u64> for FinSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut v: Vec<u64> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FinSet(v)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_list(f, &self.0)?;
        f.write_str("}")
    }
}

impl FinSet {
    pub fn parse_at(s: &str, pos: usize) -> Result<Self, ParseError> {
        let inner = delimited(s, '{', '}', pos)?;
        let values = parse_u64_list(inner, pos + 1)?;
        FinSet::from_sorted(values)
            .ok_or_else(|| ParseError::new(pos, "set elements must be strictly increasing"))
    }
}

impl FromStr for FinSet {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        FinSet::parse_at(s, 0)
    }
}

/// A strictly increasing enumeration: an explicit prefix, continued from
/// its last element in steps of `step` (`step == 0` means the set is finite).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetGen {
    prefix: Vec<u64>,
    step: u64,
}

impl SetGen {
    pub fn new(prefix: Vec<u64>, step: u64) -> Option<Self> {
        prefix
            .windows(2)
            .all(|w| w[0] < w[1])
            .then_some(SetGen { prefix, step })
    }

    pub fn progression(start: u64, step: u64) -> Self {
        SetGen {
            prefix: vec![start],
            step,
        }
    }

    pub fn naturals() -> Self {
        SetGen::progression(0, 1)
    }

    pub fn evens() -> Self {
        SetGen::progression(0, 2)
    }

    pub fn odds() -> Self {
        SetGen::progression(1, 2)
    }

    pub fn empty() -> Self {
        SetGen {
            prefix: Vec::new(),
            step: 0,
        }
    }

    pub fn finite(values: FinSet) -> Self {
        SetGen {
            prefix: values.0,
            step: 0,
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.step == 0 || self.prefix.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        match self.prefix.last() {
            None => false,
            Some(&last) => {
                self.prefix.binary_search(&x).is_ok()
                    || (self.step > 0 && x > last && (x - last) % self.step == 0)
            }
        }
    }

    /// Least element `>= x`.
    pub fn least_from(&self, x: u64) -> Option<u64> {
        let &last = self.prefix.last()?;
        if x <= last {
            let i = self.prefix.partition_point(|&v| v < x);
            return Some(self.prefix[i]);
        }
        if self.step == 0 {
            return None;
        }
        let q = (x - last).div_ceil(self.step);
        last.checked_add(q.checked_mul(self.step)?)
    }

    /// Least element `> x`.
    pub fn next_above(&self, x: u64) -> Option<u64> {
        self.least_from(x.checked_add(1)?)
    }

    pub fn nth(&self, i: usize) -> Option<u64> {
        if let Some(&v) = self.prefix.get(i) {
            return Some(v);
        }
        let &last = self.prefix.last()?;
        if self.step == 0 {
            return None;
        }
        let extra = (i - (self.prefix.len() - 1)) as u64;
        last.checked_add(extra.checked_mul(self.step)?)
    }

    pub fn first_n(&self, n: usize) -> Vec<u64> {
        (0..n).map_while(|i| self.nth(i)).collect()
    }

    /// Elements `<= bound`.
    pub fn up_to(&self, bound: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut i = 0;
        while let Some(v) = self.nth(i) {
            if v > bound {
                break;
            }
            out.push(v);
            i += 1;
        }
        out
    }

    /// The set minus `{0, ..., m-1}`.
    pub fn tail(&self, m: u64) -> SetGen {
        let kept: Vec<u64> = self.prefix.iter().copied().filter(|&v| v >= m).collect();
        if !kept.is_empty() {
            return SetGen {
                prefix: kept,
                step: self.step,
            };
        }
        match self.least_from(m) {
            Some(v) => SetGen::progression(v, self.step),
            None => SetGen::empty(),
        }
    }

    /// Witness-file form: `0,2,4 then step 2`.
    pub fn parse_witness_form(s: &str, pos: usize) -> Result<Self, ParseError> {
        let (list, step) = match s.find("then step") {
            Some(i) => (&s[..i], Some((i + 9, &s[i + 9..]))),
            None => (s, None),
        };
        let prefix = parse_u64_list(list, pos)?;
        let step = match step {
            Some((off, t)) => parse_u64(t, pos + off)?,
            None => 0,
        };
        SetGen::new(prefix, step)
            .ok_or_else(|| ParseError::new(pos, "generator prefix must be strictly increasing"))
    }

    pub fn witness_form(&self) -> String {
        let list: Vec<String> = self.prefix.iter().map(|v| v.to_string()).collect();
        format!("{} then step {}", list.join(","), self.step)
    }

    pub fn parse_at(s: &str, pos: usize) -> Result<Self, ParseError> {
        let s = s.trim_end();
        let close = s
            .find(']')
            .ok_or_else(|| ParseError::new(pos + s.len(), "expected ']'"))?;
        let prefix_part = delimited(&s[..=close], '[', ']', pos)?;
        let prefix = parse_u64_list(prefix_part, pos + 1)?;
        let rest = &s[close + 1..];
        let step = if rest.is_empty() {
            0
        } else if let Some(t) = rest.strip_prefix('+') {
            parse_u64(t, pos + close + 2)?
        } else {
            return Err(ParseError::new(pos + close + 1, "expected '+<step>' after generator prefix"));
        };
        SetGen::new(prefix, step)
            .ok_or_else(|| ParseError::new(pos, "generator prefix must be strictly increasing"))
    }
}

impl fmt::Display for SetGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_list(f, &self.prefix)?;
        f.write_str("]")?;
        if self.step > 0 {
            write!(f, "+{}", self.step)?;
        }
        Ok(())
    }
}

impl FromStr for SetGen {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        SetGen::parse_at(s, 0)
    }
}

/// A map `ω → ω` used to pull successor sets back. Pair-valued maps are
/// re-coded as naturals through the Cantor pairing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointMap {
    /// `n -> deltaPoint(n)`
    Delta,
    /// `n -> cantorDecode(n)`, which is the identity on codes.
    Cantor,
    Rule(Rule),
}

impl PointMap {
    pub fn image(&self, n: u64) -> u64 {
        match self {
            PointMap::Delta => {
                let (a, b) = delta_point(n);
                cantor_encode(a, b)
            }
            PointMap::Cantor => n,
            PointMap::Rule(r) => r.eval(n),
        }
    }

    /// The pair this map sends `n` to.
    pub fn point(&self, n: u64) -> (u64, u64) {
        cantor_decode(self.image(n))
    }

    fn parse_at(s: &str, pos: usize) -> Result<Self, ParseError> {
        match s.trim() {
            "delta" => Ok(PointMap::Delta),
            "cantor" => Ok(PointMap::Cantor),
            t => t
                .parse::<Rule>()
                .map(PointMap::Rule)
                .map_err(|e| e.offset(pos + (s.len() - s.trim_start().len()))),
        }
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointMap::Delta => f.write_str("delta"),
            PointMap::Cantor => f.write_str("cantor"),
            PointMap::Rule(r) => write!(f, "{r}"),
        }
    }
}

/// Successor set of a tree node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SuccessorSpec {
    Explicit(FinSet),
    /// `{n : n >= t}`
    Cofinite(u64),
    /// Codes of pairs `(a, b)` with `a >= t`, in the Cantor coding.
    TailColumns(u64),
    /// `{n : map(n) ∈ inner}`
    PulledBack(PointMap, Box<SuccessorSpec>),
    Generated(SetGen),
}

/// Default scan length for descriptors without a closed-form successor.
pub const SCAN_LIMIT: u64 = 1 << 16;

impl SuccessorSpec {
    pub fn everything() -> Self {
        SuccessorSpec::Cofinite(0)
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            SuccessorSpec::Explicit(s) => s.contains(n),
            SuccessorSpec::Cofinite(t) => n >= *t,
            SuccessorSpec::TailColumns(t) => cantor_decode(n).0 >= *t,
            SuccessorSpec::PulledBack(map, inner) => inner.contains(map.image(n)),
            SuccessorSpec::Generated(g) => g.contains(n),
        }
    }

    /// Least element `>= lo`, scanning at most `scan` candidates where no
    /// closed form exists.
    pub fn least_from(&self, lo: u64, scan: u64) -> Option<u64> {
        match self {
            SuccessorSpec::Explicit(s) => {
                let i = s.0.partition_point(|&v| v < lo);
                s.0.get(i).copied()
            }
            SuccessorSpec::Cofinite(t) => Some(lo.max(*t)),
            SuccessorSpec::TailColumns(t) => {
                let (a, b) = cantor_decode(lo);
                if a >= *t {
                    return Some(lo);
                }
                let w = (a + b + 1).max(*t);
                Some(cantor_encode(w, 0))
            }
            SuccessorSpec::Generated(g) => g.least_from(lo),
            SuccessorSpec::PulledBack(_, _) => {
                (lo..lo.saturating_add(scan)).find(|&n| self.contains(n))
            }
        }
    }

    pub fn next_above(&self, x: Option<u64>, scan: u64) -> Option<u64> {
        match x {
            None => self.least_from(0, scan),
            Some(x) => self.least_from(x.checked_add(1)?, scan),
        }
    }

    /// `Some(true)` when the set is known to be finite, `None` when unknown.
    pub fn is_finite(&self) -> Option<bool> {
        match self {
            SuccessorSpec::Explicit(_) => Some(true),
            SuccessorSpec::Cofinite(_) | SuccessorSpec::TailColumns(_) => Some(false),
            SuccessorSpec::Generated(g) => Some(g.is_finite()),
            SuccessorSpec::PulledBack(_, _) => None,
        }
    }

    pub fn parse_at(s: &str, pos: usize) -> Result<Self, ParseError> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let pos = pos + lead;
        let open = t
            .find(['{', '('])
            .ok_or_else(|| ParseError::new(pos, "expected a successor descriptor"))?;
        let head = &t[..open];
        let body_start = pos + open + 1;
        let close = matching_close(t, open)
            .ok_or_else(|| ParseError::new(pos + t.len(), "unbalanced brackets in descriptor"))?;
        if close != t.len() - 1 {
            return Err(ParseError::new(pos + close + 1, "unexpected trailing input after descriptor"));
        }
        let body = &t[open + 1..close];
        match head {
            "explicit" => {
                let set = FinSet::parse_at(&t[open..], pos + open)?;
                Ok(SuccessorSpec::Explicit(set))
            }
            "cofinite" => Ok(SuccessorSpec::Cofinite(parse_u64(body, body_start)?)),
            "tailcols" => Ok(SuccessorSpec::TailColumns(parse_u64(body, body_start)?)),
            "gen" => parse_gen(body, body_start).map(SuccessorSpec::Generated),
            "pullback" => {
                let parts = split_top(body, b',');
                if parts.len() != 2 {
                    return Err(ParseError::new(body_start, "pullback takes a map and a descriptor"));
                }
                let map = PointMap::parse_at(parts[0].1, body_start + parts[0].0)?;
                let inner = SuccessorSpec::parse_at(parts[1].1, body_start + parts[1].0)?;
                Ok(SuccessorSpec::PulledBack(map, Box::new(inner)))
            }
            other => Err(ParseError::new(pos, format!("unknown descriptor '{other}'"))),
        }
    }
}

fn parse_gen(body: &str, pos: usize) -> Result<SetGen, ParseError> {
    let mut step = None;
    let mut prefix = None;
    for (off, part) in split_top(body, b',') {
        let at = pos + off;
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| ParseError::new(at, "expected key=value in gen(...)"))?;
        let vpos = at + key.len() + 1;
        match key.trim() {
            "step" => step = Some(parse_u64(value, vpos)?),
            "start" => prefix = Some(vec![parse_u64(value, vpos)?]),
            "prefix" => {
                let lead = value.len() - value.trim_start().len();
                let inner = delimited(value.trim_start(), '[', ']', vpos + lead)?;
                prefix = Some(parse_u64_list(inner, vpos + lead + 1)?);
            }
            k => return Err(ParseError::new(at, format!("unknown gen key '{k}'"))),
        }
    }
    let step = step.ok_or_else(|| ParseError::new(pos, "gen(...) needs step="))?;
    let prefix = prefix.ok_or_else(|| ParseError::new(pos, "gen(...) needs start= or prefix="))?;
    SetGen::new(prefix, step)
        .ok_or_else(|| ParseError::new(pos, "generator prefix must be strictly increasing"))
}

impl fmt::Display for SuccessorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuccessorSpec::Explicit(s) => write!(f, "explicit{s}"),
            SuccessorSpec::Cofinite(t) => write!(f, "cofinite({t})"),
            SuccessorSpec::TailColumns(t) => write!(f, "tailcols({t})"),
            SuccessorSpec::PulledBack(m, inner) => write!(f, "pullback({m},{inner})"),
            SuccessorSpec::Generated(g) => {
                if g.prefix.len() == 1 {
                    write!(f, "gen(step={},start={})", g.step, g.prefix[0])
                } else {
                    write!(f, "gen(step={},prefix=[", g.step)?;
                    write_list(f, &g.prefix)?;
                    f.write_str("])")
                }
            }
        }
    }
}

impl FromStr for SuccessorSpec {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        SuccessorSpec::parse_at(s, 0)
    }
}

/// A set drawn from an ideal, as played by Player I of the `G(I, J)` game.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdealSetDesc {
    Finite(FinSet),
    /// Union of vertical lines and graphs, read through `coding`.
    LinesAndGraphs {
        lines: FinSet,
        graphs: Vec<Rule>,
        coding: Pairing,
    },
    Complement(SuccessorSpec),
}

impl IdealSetDesc {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            IdealSetDesc::Finite(s) => s.contains(n),
            IdealSetDesc::LinesAndGraphs {
                lines,
                graphs,
                coding,
            } => {
                let (a, b) = coding.decode(n);
                lines.contains(a) || graphs.iter().any(|g| g.eval(a) == b)
            }
            IdealSetDesc::Complement(spec) => !spec.contains(n),
        }
    }

    pub fn parse_at(s: &str, pos: usize) -> Result<Self, ParseError> {
        let lead = s.len() - s.trim_start().len();
        let t = s.trim();
        let pos = pos + lead;
        if let Some(rest) = t.strip_prefix("fin") {
            return FinSet::parse_at(rest, pos + 3).map(IdealSetDesc::Finite);
        }
        if let Some(rest) = t.strip_prefix("co(") {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| ParseError::new(pos + t.len(), "expected ')'"))?;
            return SuccessorSpec::parse_at(inner, pos + 3).map(IdealSetDesc::Complement);
        }
        if t.starts_with("lines") {
            let (body, coding) = match t.strip_suffix("@delta") {
                Some(b) => (b, Pairing::Delta),
                None => (t, Pairing::Cantor),
            };
            let close = matching_close(body, 5)
                .ok_or_else(|| ParseError::new(pos + 5, "unbalanced '{' in lines"))?;
            let lines = FinSet::parse_at(&body[5..=close], pos + 5)?;
            let rest = &body[close + 1..];
            let gstart = close + 1;
            let graphs_text = rest
                .strip_prefix("+graphs")
                .ok_or_else(|| ParseError::new(pos + gstart, "expected '+graphs[...]'"))?;
            let gpos = pos + gstart + 7;
            let inner = delimited(graphs_text, '[', ']', gpos)?;
            let mut graphs = Vec::new();
            if !inner.trim().is_empty() {
                for (off, piece) in split_top(inner, b',') {
                    let rule = piece
                        .trim()
                        .parse::<Rule>()
                        .map_err(|e| e.offset(gpos + 1 + off + (piece.len() - piece.trim_start().len())))?;
                    graphs.push(rule);
                }
            }
            return Ok(IdealSetDesc::LinesAndGraphs {
                lines,
                graphs,
                coding,
            });
        }
        Err(ParseError::new(pos, "expected fin{...}, lines{...}+graphs[...] or co(...)"))
    }
}

impl fmt::Display for IdealSetDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealSetDesc::Finite(s) => write!(f, "fin{s}"),
            IdealSetDesc::LinesAndGraphs {
                lines,
                graphs,
                coding,
            } => {
                write!(f, "lines{lines}+graphs[")?;
                for (i, g) in graphs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("]")?;
                if *coding == Pairing::Delta {
                    f.write_str("@delta")?;
                }
                Ok(())
            }
            IdealSetDesc::Complement(spec) => write!(f, "co({spec})"),
        }
    }
}

impl FromStr for IdealSetDesc {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        IdealSetDesc::parse_at(s, 0)
    }
}
