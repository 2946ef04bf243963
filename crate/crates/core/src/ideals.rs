//! Cover-cost surrogates for `Fin`, `ED` and `ED_fin`, the pairings that
//! code their universes as naturals, and finite-to-one maps.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rule::Rule;
use crate::{Error, Result};

/// Largest `w` with `w(w+1)/2 <= k`.
fn tri_root(k: u64) -> u64 {
    let w = ((8 * k as u128 + 1).isqrt() - 1) / 2;
    w as u64
}

fn tri(w: u64) -> u64 {
    ((w as u128 * (w as u128 + 1)) / 2).min(u64::MAX as u128) as u64
}

/// Index of `(m, n)` in the column-major enumeration of `{(m, n) : n <= m}`.
pub fn delta_index(m: u64, n: u64) -> Result<u64> {
    if n > m {
        return Err(Error::Domain(format!("({m},{n}) is not in Δ: second coordinate exceeds first")));
    }
    Ok(tri(m).saturating_add(n))
}

pub fn delta_point(k: u64) -> (u64, u64) {
    let m = tri_root(k);
    (m, k - tri(m))
}

/// Cantor pairing `(a, b) -> (a+b)(a+b+1)/2 + b`.
pub fn cantor_encode(a: u64, b: u64) -> u64 {
    tri(a.saturating_add(b)).saturating_add(b)
}

pub fn cantor_decode(k: u64) -> (u64, u64) {
    let w = tri_root(k);
    let b = k - tri(w);
    (w - b, b)
}

/// A coding of pairs by naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pairing {
    /// Bijection `ω × ω ↔ ω`.
    Cantor,
    /// Bijection `Δ ↔ ω`.
    Delta,
}

impl Pairing {
    pub fn encode(self, a: u64, b: u64) -> Result<u64> {
        match self {
            Pairing::Cantor => Ok(cantor_encode(a, b)),
            Pairing::Delta => delta_index(a, b),
        }
    }

    pub fn decode(self, k: u64) -> (u64, u64) {
        match self {
            Pairing::Cantor => cantor_decode(k),
            Pairing::Delta => delta_point(k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Universe {
    Omega,
    OmegaSquared,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CostIdeal {
    Fin,
    Ed,
    EdFin,
}

/// A cover witnessing a cost value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Fin: the set itself, of this cardinality.
    Cardinality(u64),
    /// Vertical lines plus graphs of partial functions (column -> row).
    Cover {
        lines: Vec<u64>,
        graphs: Vec<BTreeMap<u64, u64>>,
    },
}

impl Certificate {
    pub fn size(&self) -> u64 {
        match self {
            Certificate::Cardinality(n) => *n,
            Certificate::Cover { lines, graphs } => (lines.len() + graphs.len()) as u64,
        }
    }

    /// Does the cover contain every point?
    pub fn covers(&self, points: &[(u64, u64)]) -> bool {
        match self {
            Certificate::Cardinality(n) => {
                let mut distinct = points.to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                distinct.len() as u64 <= *n
            }
            Certificate::Cover { lines, graphs } => points.iter().all(|&(a, b)| {
                lines.contains(&a) || graphs.iter().any(|g| g.get(&a) == Some(&b))
            }),
        }
    }
}

/// Column multiplicities of a set of points, keyed by column.
fn columns(points: &[(u64, u64)]) -> BTreeMap<u64, Vec<u64>> {
    let mut cols: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &(a, b) in points {
        cols.entry(a).or_default().push(b);
    }
    for rows in cols.values_mut() {
        rows.sort_unstable();
        rows.dedup();
    }
    cols
}

/// The number of distinct points in each occupied column.
fn multiplicities(points: &[(u64, u64)]) -> Vec<u64> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut mults: Vec<u64> = Vec::new();
    for (i, p) in sorted.iter().enumerate() {
        match mults.last_mut() {
            Some(m) if sorted[i - 1].0 == p.0 => *m += 1,
            _ => mults.push(1),
        }
    }
    mults
}

/// `min_j (j + m_{j+1})` over multiplicities sorted in decreasing order,
/// with the smallest minimizing `j`.
pub fn ed_cost_from_multiplicities(mults: &[u64]) -> (u64, usize) {
    let mut sorted = mults.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = (u64::MAX, 0);
    for j in 0..=sorted.len() {
        let rest = sorted.get(j).copied().unwrap_or(0);
        let c = j as u64 + rest;
        if c < best.0 {
            best = (c, j);
        }
    }
    best
}

impl CostIdeal {
    pub fn name(self) -> &'static str {
        match self {
            CostIdeal::Fin => "fin",
            CostIdeal::Ed => "ed",
            CostIdeal::EdFin => "edfin",
        }
    }

    pub fn universe(self) -> Universe {
        match self {
            CostIdeal::Fin => Universe::Omega,
            CostIdeal::Ed => Universe::OmegaSquared,
            CostIdeal::EdFin => Universe::Delta,
        }
    }

    /// The coding used to read naturals as points of the universe.
    pub fn pairing(self) -> Option<Pairing> {
        match self {
            CostIdeal::Fin => None,
            CostIdeal::Ed => Some(Pairing::Cantor),
            CostIdeal::EdFin => Some(Pairing::Delta),
        }
    }

    fn check_points(self, points: &[(u64, u64)]) -> Result<()> {
        match self {
            CostIdeal::Fin => Err(Error::Domain(
                "fin is an ideal on ω; it takes naturals, not pairs".into(),
            )),
            CostIdeal::Ed => Ok(()),
            CostIdeal::EdFin => match points.iter().find(|(m, n)| n > m) {
                Some((m, n)) => Err(Error::Domain(format!("({m},{n}) lies outside Δ"))),
                None => Ok(()),
            },
        }
    }

    /// Cover cost of a finite set of points of a pair universe.
    pub fn cost_of_pairs(self, points: &[(u64, u64)]) -> Result<u64> {
        self.check_points(points)?;
        Ok(ed_cost_from_multiplicities(&multiplicities(points)).0)
    }

    /// Cover cost of a finite set of codes, read through the universe coding.
    pub fn cost_of_codes(self, codes: &[u64]) -> u64 {
        match self.pairing() {
            None => {
                let mut v = codes.to_vec();
                v.sort_unstable();
                v.dedup();
                v.len() as u64
            }
            Some(p) => {
                let points: Vec<_> = codes.iter().map(|&c| p.decode(c)).collect();
                ed_cost_from_multiplicities(&multiplicities(&points)).0
            }
        }
    }

    pub fn certify_pairs(self, points: &[(u64, u64)]) -> Result<Certificate> {
        self.check_points(points)?;
        let cols = columns(points);
        let mut order: Vec<(u64, &Vec<u64>)> = cols.iter().map(|(c, r)| (*c, r)).collect();
        order.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
        let mults: Vec<u64> = order.iter().map(|(_, r)| r.len() as u64).collect();
        let (cost, j) = ed_cost_from_multiplicities(&mults);
        let mut lines: Vec<u64> = order[..j].iter().map(|(c, _)| *c).collect();
        lines.sort_unstable();
        let height = cost as usize - j;
        let mut graphs = vec![BTreeMap::new(); height];
        for (col, rows) in &order[j..] {
            for (i, row) in rows.iter().enumerate() {
                graphs[i].insert(*col, *row);
            }
        }
        Ok(Certificate::Cover { lines, graphs })
    }

    pub fn certify_codes(self, codes: &[u64]) -> Certificate {
        match self.pairing() {
            None => Certificate::Cardinality(self.cost_of_codes(codes)),
            Some(p) => {
                let points: Vec<_> = codes.iter().map(|&c| p.decode(c)).collect();
                self.certify_pairs(&points)
                    .expect("decoded points always lie in the universe")
            }
        }
    }
}

impl fmt::Display for CostIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fin" | "Fin" => Ok(CostIdeal::Fin),
            "ed" | "ED" => Ok(CostIdeal::Ed),
            "edfin" | "ed-fin" | "EDfin" => Ok(CostIdeal::EdFin),
            _ => Err(Error::Config(format!(
                "unknown ideal '{s}' (expected fin, ed or edfin)"
            ))),
        }
    }
}

/// `apply` together with a bound on its fibers: `apply(n) != m` for `n > fiber_bound(m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteToOneMap {
    pub apply: Rule,
    pub fiber_bound: Rule,
}

impl FiniteToOneMap {
    pub fn new(apply: Rule, fiber_bound: Rule) -> Self {
        FiniteToOneMap { apply, fiber_bound }
    }

    pub fn identity() -> Self {
        FiniteToOneMap::new(Rule::identity(), Rule::identity())
    }

    /// `m -> m/2` with fibers `{2m, 2m+1}`.
    pub fn halving() -> Self {
        FiniteToOneMap::new(Rule::halving(), Rule::affine(2, 1))
    }
}

/// Checks the fiber contract on `[0, bound]²`.
pub fn check_finite_to_one(f: &FiniteToOneMap, bound: u64) -> bool {
    (0..=bound).all(|n| {
        let m = f.apply.eval(n);
        m > bound || n <= f.fiber_bound.eval(m)
    })
}
