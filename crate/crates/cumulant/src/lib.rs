//! An engine for cumulative games: n-player games played on heaps where every
//! move shifts heap counts and credits rewards to running per-player,
//! per-heap totals, with utilities realized only when play stops.
//!
//! The crate provides the game model itself ([`game`]), a catalog of concrete
//! rulesets ([`rulesets`]), outcome dynamic programs ([`outcome`]), extensive
//! form conversion and backward induction ([`efg`]), disjunctive sums and
//! normal-play comparison ([`algebra`]), brute-force oracles and parameter
//! censuses ([`lab`]), and a JSON/CSV document layer ([`doc`]).

pub mod algebra;
pub mod doc;
pub mod efg;
pub mod error;
pub mod game;
pub mod lab;
pub mod outcome;
pub mod rulesets;

pub use error::{Error, Result};
pub use game::{
    feq, ActionVector, CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player,
    PositionKey, Ruleset, TurnFunction, UtilityMap,
};
pub use rulesets::{build_game, prologue_compound, RulesetSpec, UtilityPreset, UtilitySpec};
