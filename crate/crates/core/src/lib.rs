//! Finite-horizon referee, strategy library and verification harness for
//! two-player games of length ω played on the natural numbers.
//!
//! Infinite winning conditions are never decided here. A match is played to
//! a finite horizon and judged by what the prefix proves: pointwise defining
//! equalities against explicit witness families, cover-cost budgets for
//! ideals, and monotone counters for tail conditions.

mod error;

pub mod engine;
pub mod games;
pub mod harness;
pub mod ideals;
pub mod rule;
pub mod sets;
pub mod strategies;
pub mod trees;

pub use engine::{
    GameKind, HorizonVerdict, Move, Referee, Role, Shape, StatKey, Status, Strategy, StrategyRef,
    Transcript,
};
pub use error::{Error, ParseError, Result};
pub use games::{GameSpec, WitnessFamily};
pub use ideals::CostIdeal;
pub use rule::Rule;
pub use sets::{FinSet, IdealSetDesc, SetGen, SuccessorSpec};

/// Search defaults for bounded probes.
pub const DEFAULT_DEPTH_BOUND: usize = 64;
pub const DEFAULT_WIDTH_BOUND: u64 = 256;
