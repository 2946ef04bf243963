//! Line-oriented transcript files.
//!
//! ```text
//! game tallness
//! param ideal edfin
//! horizon 2
//! I 0
//! II 1
//! I 1
//! II 1
//! verdict consistent-ii costSelected=1 onesCount=2
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::engine::{GameKind, HorizonVerdict, Move, Role, StatKey, Status, Transcript};
use crate::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranscriptRecord {
    pub kind: GameKind,
    pub params: Vec<(String, String)>,
    pub horizon: usize,
    pub moves: Vec<Move>,
    pub verdict: Option<HorizonVerdict>,
}

impl TranscriptRecord {
    pub fn new(transcript: &Transcript, verdict: Option<HorizonVerdict>) -> Self {
        TranscriptRecord {
            kind: transcript.kind,
            params: Vec::new(),
            horizon: transcript.horizon,
            moves: transcript.moves.clone(),
            verdict,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.params.push((key.into(), value.into()));
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn transcript(&self) -> Transcript {
        Transcript::new(self.kind, self.horizon, self.moves.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "game {}", self.kind);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param {k} {v}");
        }
        let _ = writeln!(out, "horizon {}", self.horizon);
        for (i, m) in self.moves.iter().enumerate() {
            let _ = writeln!(out, "{} {m}", Role::to_move(i));
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "verdict {v}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut params = Vec::new();
        let mut horizon = None;
        let mut moves = Vec::new();
        let mut verdict = None;
        let mut offset = 0;
        for (lineno, line) in text.split('\n').enumerate() {
            let here = offset;
            offset += line.len() + 1;
            if line.is_empty() {
                continue;
            }
            let fail = |col: usize, msg: String| {
                Error::Parse(ParseError::new(here + col, format!("line {}: {msg}", lineno + 1)))
            };
            if verdict.is_some() {
                return Err(fail(0, "nothing may follow the verdict line".into()));
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest_col = word.len() + 1;
            match word {
                "game" => {
                    if kind.is_some() {
                        return Err(fail(0, "duplicate game line".into()));
                    }
                    kind = Some(rest.parse::<GameKind>().map_err(|e| fail(rest_col, e.to_string()))?);
                }
                "param" => {
                    let (k, v) = rest
                        .split_once(' ')
                        .ok_or_else(|| fail(rest_col, "expected 'param <key> <value>'".into()))?;
                    params.push((k.to_string(), v.to_string()));
                }
                "horizon" => {
                    horizon = Some(
                        rest.parse::<usize>()
                            .map_err(|_| fail(rest_col, format!("bad horizon '{rest}'")))?,
                    );
                }
                "I" | "II" => {
                    let kind = kind.ok_or_else(|| fail(0, "move before game line".into()))?;
                    if horizon.is_none() {
                        return Err(fail(0, "move before horizon line".into()));
                    }
                    let expected = Role::to_move(moves.len());
                    if word != expected.to_string() {
                        return Err(fail(0, format!("expected a move by player {expected}")));
                    }
                    let m = Move::parse_as(rest, kind.shape(expected), 0)
                        .map_err(|e| fail(rest_col + e.pos, e.message))?;
                    moves.push(m);
                }
                "verdict" => {
                    let mut parts = rest.split(' ');
                    let status_text = parts.next().unwrap_or("");
                    let status = status_text
                        .parse::<Status>()
                        .map_err(|e| fail(rest_col, e.to_string()))?;
                    let mut stats = BTreeMap::new();
                    let mut col = rest_col + status_text.len() + 1;
                    for part in parts {
                        let (k, v) = part
                            .split_once('=')
                            .ok_or_else(|| fail(col, format!("expected stat=value, found '{part}'")))?;
                        let key = k.parse::<StatKey>().map_err(|e| fail(col, e.to_string()))?;
                        let value = v
                            .parse::<u64>()
                            .map_err(|_| fail(col + k.len() + 1, format!("bad value '{v}'")))?;
                        stats.insert(key, value);
                        col += part.len() + 1;
                    }
                    verdict = Some(HorizonVerdict { status, stats });
                }
                other => return Err(fail(0, format!("unknown line type '{other}'"))),
            }
        }
        let kind = kind.ok_or_else(|| Error::Config("transcript has no game line".into()))?;
        let horizon = horizon.ok_or_else(|| Error::Config("transcript has no horizon line".into()))?;
        if moves.len() > 2 * horizon {
            return Err(Error::Config(format!(
                "{} moves exceed the horizon of {horizon} rounds",
                moves.len()
            )));
        }
        Ok(TranscriptRecord {
            kind,
            params,
            horizon,
            moves,
            verdict,
        })
    }
}
