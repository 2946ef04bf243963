//! Closed-form rules `ω → ω`.
//!
//! Reals, finite-to-one maps and fiber maps are all written in a small
//! expression language over the variable `k`:
//!
//! ```text
//! rule  := ["k->"] expr
//! expr  := term (("+" | "-") term)*          "-" is truncated subtraction
//! term  := power (("*" | "/" | "%") power)*
//! power := atom ["^" number]
//! atom  := number | "k" | "(" expr ")" | "[" number ("," number)* "]"
//!        | ("max" | "min") "(" expr "," expr ")"
//!        | ("isqrt" | "dcol" | "drow") "(" expr ")"
//! ```
//!
//! A table `[v0,v1,...]` reads `v_k`, repeating its last entry past the end.
//! `dcol`/`drow` are the two coordinates of the triangular enumeration of
//! `{(m, n) : n <= m}`. Division or remainder by zero evaluates to zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::ideals::delta_point;
use crate::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Rem => 2,
        }
    }

    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Rem => '%',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Func {
    Max,
    Min,
    Isqrt,
    DeltaCol,
    DeltaRow,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Max => "max",
            Func::Min => "min",
            Func::Isqrt => "isqrt",
            Func::DeltaCol => "dcol",
            Func::DeltaRow => "drow",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Max | Func::Min => 2,
            _ => 1,
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "max" => Func::Max,
            "min" => Func::Min,
            "isqrt" => Func::Isqrt,
            "dcol" => Func::DeltaCol,
            "drow" => Func::DeltaRow,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Expr {
    Num(u64),
    K,
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Table(Vec<u64>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Pow(_, _) => 3,
            _ => 4,
        }
    }

    fn eval(&self, k: u64) -> u64 {
        match self {
            Expr::Num(v) => *v,
            Expr::K => k,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(k), b.eval(k));
                match op {
                    BinOp::Add => a.saturating_add(b),
                    BinOp::Sub => a.saturating_sub(b),
                    BinOp::Mul => a.saturating_mul(b),
                    BinOp::Div => a.checked_div(b).unwrap_or(0),
                    BinOp::Rem => a.checked_rem(b).unwrap_or(0),
                }
            }
            Expr::Pow(base, e) => base.eval(k).saturating_pow(*e),
            Expr::Table(values) => table_at(values, k),
            Expr::Call(f, args) => {
                let a = args[0].eval(k);
                match f {
                    Func::Max => a.max(args[1].eval(k)),
                    Func::Min => a.min(args[1].eval(k)),
                    Func::Isqrt => a.isqrt(),
                    Func::DeltaCol => delta_point(a).0,
                    Func::DeltaRow => delta_point(a).1,
                }
            }
        }
    }

    fn eval_big(&self, k: &BigUint) -> BigUint {
        match self {
            Expr::Num(v) => BigUint::from(*v),
            Expr::K => k.clone(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval_big(k), b.eval_big(k));
                let zero = BigUint::ZERO;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => {
                        if a >= b {
                            a - b
                        } else {
                            zero
                        }
                    }
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == zero {
                            zero
                        } else {
                            a / b
                        }
                    }
                    BinOp::Rem => {
                        if b == zero {
                            zero
                        } else {
                            a % b
                        }
                    }
                }
            }
            Expr::Pow(base, e) => base.eval_big(k).pow(*e),
            Expr::Table(values) => {
                let idx = u64::try_from(k).unwrap_or(u64::MAX);
                BigUint::from(table_at(values, idx))
            }
            Expr::Call(f, args) => {
                let a = args[0].eval_big(k);
                match f {
                    Func::Max => a.max(args[1].eval_big(k)),
                    Func::Min => a.min(args[1].eval_big(k)),
                    Func::Isqrt => a.sqrt(),
                    Func::DeltaCol | Func::DeltaRow => {
                        // m = floor((sqrt(8a+1)-1)/2), n = a - m(m+1)/2
                        let one = BigUint::from(1u32);
                        let m = ((BigUint::from(8u32) * &a + &one).sqrt() - &one) / 2u32;
                        if *f == Func::DeltaCol {
                            m
                        } else {
                            let tri = &m * (&m + &one) / 2u32;
                            a - tri
                        }
                    }
                }
            }
        }
    }
}

fn table_at(values: &[u64], k: u64) -> u64 {
    let idx = usize::try_from(k).unwrap_or(usize::MAX);
    values
        .get(idx)
        .or_else(|| values.last())
        .copied()
        .unwrap_or(0)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::K => write!(f, "k"),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                if a.precedence() < p {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, "{}", op.symbol())?;
                if b.precedence() <= p {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Pow(base, e) => {
                if base.precedence() < 4 {
                    write!(f, "({base})^{e}")
                } else {
                    write!(f, "{base}^{e}")
                }
            }
            Expr::Table(values) => {
                write!(f, "[")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A total rule `ω → ω` given by a closed-form expression in `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    expr: Expr,
}

impl Rule {
    pub fn new(expr: Expr) -> Self {
        Rule { expr }
    }

    pub fn constant(c: u64) -> Self {
        Rule::new(Expr::Num(c))
    }

    pub fn identity() -> Self {
        Rule::new(Expr::K)
    }

    /// `k -> a*k + b`
    pub fn affine(a: u64, b: u64) -> Self {
        let scaled = match a {
            0 => None,
            1 => Some(Expr::K),
            _ => Some(Expr::Bin(
                BinOp::Mul,
                Box::new(Expr::Num(a)),
                Box::new(Expr::K),
            )),
        };
        let expr = match (scaled, b) {
            (None, b) => Expr::Num(b),
            (Some(s), 0) => s,
            (Some(s), b) => Expr::Bin(BinOp::Add, Box::new(s), Box::new(Expr::Num(b))),
        };
        Rule::new(expr)
    }

    /// `k -> k/2`
    pub fn halving() -> Self {
        Rule::new(Expr::Bin(
            BinOp::Div,
            Box::new(Expr::K),
            Box::new(Expr::Num(2)),
        ))
    }

    pub fn table(values: Vec<u64>) -> Self {
        Rule::new(Expr::Table(values))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, k: u64) -> u64 {
        self.expr.eval(k)
    }

    /// Exact evaluation on arbitrarily large arguments.
    pub fn eval_big(&self, k: &BigUint) -> BigUint {
        self.expr.eval_big(k)
    }

    /// The first `n` values.
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (0..n as u64).map(|k| self.eval(k)).collect()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k->{}", self.expr)
    }
}

impl FromStr for Rule {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = RuleParser {
            src: s.as_bytes(),
            pos: 0,
        };
        p.skip_ws();
        if p.src[p.pos..].starts_with(b"k->") {
            p.pos += 3;
        }
        let expr = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(ParseError::new(p.pos, "unexpected trailing input in rule"));
        }
        Ok(Rule { expr })
    }
}

struct RuleParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl RuleParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(
                self.pos,
                format!("expected '{}' in rule", c as char),
            ))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(start, "expected a number in rule"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| ParseError::new(start, "number out of range"))
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                Some(b'%') => BinOp::Rem,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.power()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.number()?;
            let e = u32::try_from(e).map_err(|_| ParseError::new(at, "exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut values = vec![self.number()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    values.push(self.number()?);
                }
                self.expect(b']')?;
                Ok(Expr::Table(values))
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Num(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                if word == "k" {
                    return Ok(Expr::K);
                }
                let func = Func::from_name(word).ok_or_else(|| {
                    ParseError::new(start, format!("unknown function '{word}' in rule"))
                })?;
                self.expect(b'(')?;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                if args.len() != func.arity() {
                    return Err(ParseError::new(
                        start,
                        format!("{} takes {} argument(s)", func.name(), func.arity()),
                    ));
                }
                self.expect(b')')?;
                Ok(Expr::Call(func, args))
            }
            _ => Err(ParseError::new(self.pos, "expected an expression in rule")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rule {
        s.parse().unwrap()
    }

    #[test]
    fn evaluates_closed_forms() {
        assert_eq!(r("k->2*k+1").eval(5), 11);
        assert_eq!(r("k/2").eval(9), 4);
        assert_eq!(r("k->k^2+3").eval(4), 19);
        assert_eq!(r("[3,1,4]").prefix(5), vec![3, 1, 4, 4, 4]);
        assert_eq!(r("1-k").eval(5), 0);
        assert_eq!(r("k/0").eval(5), 0);
        assert_eq!(r("max(k,3)").eval(1), 3);
        assert_eq!(r("drow(k)").prefix(6), vec![0, 0, 1, 0, 1, 2]);
        assert_eq!(r("dcol(k)").prefix(6), vec![0, 1, 1, 2, 2, 2]);
    }

    #[test]
    fn display_keeps_structure() {
        assert_eq!(r("k-(k-1)").to_string(), "k->k-(k-1)");
        assert_eq!(r("(k+1)*2").to_string(), "k->(k+1)*2");
        assert_eq!(r("k->(k*2)^3").to_string(), "k->(k*2)^3");
        assert_eq!(Rule::affine(3, 2).to_string(), "k->3*k+2");
        assert_eq!(Rule::halving().to_string(), "k->k/2");
    }

    #[test]
    fn reports_error_positions() {
        let err = "k->2*".parse::<Rule>().unwrap_err();
        assert_eq!(err.pos, 5);
        let err = "k->foo(1)".parse::<Rule>().unwrap_err();
        assert_eq!(err.pos, 3);
        let err = "k->k)".parse::<Rule>().unwrap_err();
        assert_eq!(err.pos, 4);
    }

    #[test]
    fn big_evaluation_agrees_on_small_arguments() {
        for src in ["k->2*k+1", "k/3", "[5,2]", "drow(k)+dcol(k)", "k%7-2", "isqrt(k)"] {
            let rule = r(src);
            for k in 0..200u64 {
                assert_eq!(rule.eval_big(&BigUint::from(k)), BigUint::from(rule.eval(k)));
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u64..50).prop_map(Expr::Num),
            Just(Expr::K),
            proptest::collection::vec(0u64..9, 1..4).prop_map(Expr::Table),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (
                    prop_oneof![
                        Just(BinOp::Add),
                        Just(BinOp::Sub),
                        Just(BinOp::Mul),
                        Just(BinOp::Div),
                        Just(BinOp::Rem)
                    ],
                    inner.clone(),
                    inner.clone()
                )
                    .prop_map(|(op, a, b)| Expr::Bin(op, Box::new(a), Box::new(b))),
                (inner.clone(), 0u32..4).prop_map(|(b, e)| Expr::Pow(Box::new(b), e)),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Expr::Call(Func::Max, vec![a, b])),
                inner.prop_map(|a| Expr::Call(Func::DeltaRow, vec![a])),
            ]
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(expr in arb_expr()) {
            let rule = Rule::new(expr);
            let text = rule.to_string();
            let back: Rule = text.parse().unwrap();
            prop_assert_eq!(back, rule);
        }
    }
}
