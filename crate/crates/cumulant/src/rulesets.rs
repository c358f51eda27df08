//! Serializable catalog of concrete rulesets, reward schemes, and utility
//! presets: the six play conventions (normal, misere, scoring, squirrel,
//! auction, wealth) and the compound three-player scenario.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::efg::{TieMode, TiePolicy};
use crate::error::{Error, Result};
use crate::game::{
    feq, ActionVector, CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player, Ruleset,
    TurnFunction, UtilityMap, DEFAULT_MOVE_BUDGET,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum RulesetSpec {
    /// Fixed subtraction sets; one shared set or one per player.
    FixedSubtraction { sets: Vec<Vec<u32>> },
    /// A player may remove 1..=floor(own cumulation) pebbles from a heap.
    Wealth,
    /// The six-heap compound scenario (2- or 3-player form).
    PrologueCompound,
    /// Explicit per-heap-size removal sets, indexed `table[x][player]`.
    CustomTable { table: Vec<Vec<Vec<u32>>> },
}

impl RulesetSpec {
    pub fn fixed_symmetric(set: Vec<u32>) -> RulesetSpec {
        RulesetSpec::FixedSubtraction { sets: vec![set] }
    }

    pub fn fixed_partizan(s1: Vec<u32>, s2: Vec<u32>) -> RulesetSpec {
        RulesetSpec::FixedSubtraction { sets: vec![s1, s2] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum UtilityPreset {
    /// Squirrel play: each player pockets what they take.
    Identity,
    /// `u_i = C_i - C_{-i}` for two players.
    ZeroSumDifference,
    /// The stuck player scores -1, everyone else +1.
    NormalPlay,
    /// The stuck player scores +1, everyone else -1.
    MiserePlay,
    /// Strict-highest bidder wins `value - bid`, everyone else 0.
    Auction { value: f64 },
    /// Zero-sum scoring via transfer rewards and identity utility.
    Scoring,
    /// Utilities read off a table indexed by the terminal current player.
    CustomTerminalTable { by_terminal_player: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct UtilitySpec {
    #[serde(flatten)]
    pub preset: UtilityPreset,
    #[serde(default)]
    pub tie_policy: TieMode,
    /// Per-player preference order over opponents (1-based), for genericity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferences: Option<Vec<Vec<u8>>>,
}

impl UtilitySpec {
    pub fn new(preset: UtilityPreset) -> UtilitySpec {
        UtilitySpec { preset, tie_policy: TieMode::Antagonistic, preferences: None }
    }

    pub fn identity() -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::Identity)
    }

    pub fn normal_play() -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::NormalPlay)
    }

    pub fn misere_play() -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::MiserePlay)
    }

    pub fn auction(value: f64) -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::Auction { value })
    }

    pub fn zero_sum_difference() -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::ZeroSumDifference)
    }

    pub fn scoring() -> UtilitySpec {
        UtilitySpec::new(UtilityPreset::Scoring)
    }

    pub fn tie(&self) -> TiePolicy {
        TiePolicy { mode: self.tie_policy, preferences: self.preferences.clone() }
    }
}

fn per_player_sets(sets: &[Vec<u32>], n: usize) -> Result<Vec<Vec<u32>>> {
    let mut out = match sets.len() {
        1 => vec![sets[0].clone(); n],
        len if len == n => sets.to_vec(),
        len => {
            return Err(Error::Validation {
                field: "ruleset.sets".into(),
                message: format!("expected 1 or {n} sets, got {len}"),
            })
        }
    };
    for s in &mut out {
        s.sort_unstable();
        s.dedup();
        if s.contains(&0) {
            return Err(Error::Validation {
                field: "ruleset.sets".into(),
                message: "subtraction sets are subsets of the positive integers".into(),
            });
        }
    }
    Ok(out)
}

/// Single-component removals: for each heap, each element of the mover's set
/// that fits.
fn subtraction_actions(sets: Vec<Vec<u32>>, n: usize, d: usize) -> crate::game::ActionFn {
    Arc::new(move |g: &GroundedPosition| {
        let mover = g.previous.cyclic_next(n);
        let set = &sets[mover.idx()];
        let mut acts = Vec::new();
        for h in 0..d {
            let x = g.position.heaps[h];
            for &a in set {
                if a <= x {
                    acts.push(ActionVector::removal(d, h, a));
                }
            }
        }
        acts
    })
}

/// Mover pockets whatever they remove.
fn identity_rewards(n: usize, d: usize) -> crate::game::RewardFn {
    Arc::new(move |g: &GroundedPosition, a: &ActionVector| {
        let mover = g.previous.cyclic_next(n);
        let mut r = Matrix::zeros(n, d);
        for (h, delta) in a.delta.iter().enumerate() {
            if *delta != 0 {
                r.set(mover.idx(), h, -(*delta) as f64);
            }
        }
        r
    })
}

/// Two-player transfer rewards: the mover's removal is credited to their own
/// account and debited from the opponent's, so identity utility reproduces the
/// zero-sum difference `C_1 - C_2`.
fn transfer_rewards(d: usize) -> crate::game::RewardFn {
    Arc::new(move |g: &GroundedPosition, a: &ActionVector| {
        let mover = g.previous.cyclic_next(2);
        let mut r = Matrix::zeros(2, d);
        for (h, delta) in a.delta.iter().enumerate() {
            if *delta != 0 {
                let amount = -(*delta) as f64;
                r.set(mover.idx(), h, amount);
                r.set(1 - mover.idx(), h, -amount);
            }
        }
        r
    })
}

fn build_utility(us: &UtilitySpec, n: usize, d: usize) -> Result<UtilityMap> {
    match &us.preset {
        UtilityPreset::Identity | UtilityPreset::Scoring => Ok(UtilityMap::Identity),
        UtilityPreset::ZeroSumDifference => {
            if n != 2 {
                return Err(Error::Validation {
                    field: "utility.preset".into(),
                    message: "zero_sum_difference requires 2 players".into(),
                });
            }
            Ok(UtilityMap::PerHeap(Arc::new(|i, _h, column: &[f64], _| {
                column[i] - column[1 - i]
            })))
        }
        UtilityPreset::NormalPlay => Ok(UtilityMap::PerHeap(Arc::new(
            move |i, h, _column: &[f64], current: Player| {
                if h != 0 {
                    0.0
                } else if i == current.idx() {
                    -1.0
                } else {
                    1.0
                }
            },
        ))),
        UtilityPreset::MiserePlay => Ok(UtilityMap::PerHeap(Arc::new(
            move |i, h, _column: &[f64], current: Player| {
                if h != 0 {
                    0.0
                } else if i == current.idx() {
                    1.0
                } else {
                    -1.0
                }
            },
        ))),
        UtilityPreset::Auction { value } => {
            if d != 1 {
                return Err(Error::Validation {
                    field: "utility.preset".into(),
                    message: "auction requires a single heap".into(),
                });
            }
            let v = *value;
            Ok(UtilityMap::PerHeap(Arc::new(move |i, _h, column: &[f64], _| {
                let wins = column
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| j == i || column[i] > c + crate::game::EPSILON);
                if wins {
                    v - column[i]
                } else {
                    0.0
                }
            })))
        }
        UtilityPreset::CustomTerminalTable { by_terminal_player } => {
            if by_terminal_player.len() != n || by_terminal_player.iter().any(|r| r.len() != n) {
                return Err(Error::Validation {
                    field: "utility.by_terminal_player".into(),
                    message: format!("expected an {n}x{n} table"),
                });
            }
            let table = by_terminal_player.clone();
            Ok(UtilityMap::PerHeap(Arc::new(
                move |i, h, _column: &[f64], current: Player| {
                    if h == 0 {
                        table[current.idx()][i]
                    } else {
                        0.0
                    }
                },
            )))
        }
    }
}

/// Build a cumulative game from a ruleset and utility preset.
pub fn build_game(rs: &RulesetSpec, us: &UtilitySpec, n: usize, d: usize) -> Result<CumulativeGame> {
    if n == 0 || d == 0 {
        return Err(Error::Validation {
            field: "players/heaps".into(),
            message: "player and heap counts must be positive".into(),
        });
    }
    let (actions, rewards, cumulation_independent, symmetric): (
        crate::game::ActionFn,
        crate::game::RewardFn,
        bool,
        bool,
    ) = match rs {
        RulesetSpec::FixedSubtraction { sets } => {
            let sets = per_player_sets(sets, n)?;
            let symmetric = sets.windows(2).all(|w| w[0] == w[1]);
            let rewards = if matches!(us.preset, UtilityPreset::Scoring) {
                if n != 2 {
                    return Err(Error::Validation {
                        field: "utility.preset".into(),
                        message: "scoring requires 2 players".into(),
                    });
                }
                transfer_rewards(d)
            } else {
                identity_rewards(n, d)
            };
            (subtraction_actions(sets, n, d), rewards, true, symmetric)
        }
        RulesetSpec::Wealth => {
            let actions: crate::game::ActionFn = Arc::new(move |g: &GroundedPosition| {
                let mover = g.previous.cyclic_next(n);
                let mut acts = Vec::new();
                for h in 0..d {
                    let x = g.position.heaps[h];
                    let budget = g.position.cumulation.get(mover.idx(), h).floor();
                    let cap = if budget < 0.0 { 0 } else { budget as u32 };
                    for a in 1..=cap.min(x) {
                        acts.push(ActionVector::removal(d, h, a));
                    }
                }
                acts
            });
            (actions, identity_rewards(n, d), false, true)
        }
        RulesetSpec::PrologueCompound => {
            let (game, _) = prologue_compound(n)?;
            return Ok(game);
        }
        RulesetSpec::CustomTable { table } => {
            let table: Vec<Vec<Vec<u32>>> = table.clone();
            for (x, row) in table.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Validation {
                        field: format!("ruleset.table[{x}]"),
                        message: format!("expected {n} per-player sets"),
                    });
                }
            }
            let symmetric = table.iter().all(|row| row.windows(2).all(|w| w[0] == w[1]));
            let t = table.clone();
            let actions: crate::game::ActionFn = Arc::new(move |g: &GroundedPosition| {
                let mover = g.previous.cyclic_next(n);
                let mut acts = Vec::new();
                for h in 0..d {
                    let x = g.position.heaps[h] as usize;
                    if let Some(row) = t.get(x) {
                        for &a in &row[mover.idx()] {
                            if a as usize <= x {
                                acts.push(ActionVector::removal(d, h, a));
                            }
                        }
                    }
                }
                acts
            });
            (actions, identity_rewards(n, d), true, symmetric)
        }
    };
    Ok(CumulativeGame {
        n,
        d,
        ruleset: Ruleset {
            actions,
            rewards,
            cumulation_independent,
            symmetric,
            short: true,
        },
        turn: TurnFunction::Cyclic,
        utility: build_utility(us, n, d)?,
        move_budget: DEFAULT_MOVE_BUDGET,
    })
}

/// Transfer-reward encoding of a two-player one-heap zero-sum subtraction
/// game: identity utility, rewards `(a, -a)` from the mover's viewpoint, so
/// the terminal `C_1` equals the zero-sum outcome `C_1 - C_2` of the plain
/// encoding.
pub fn zero_sum_transfer(rs: &RulesetSpec) -> Result<CumulativeGame> {
    let sets = match rs {
        RulesetSpec::FixedSubtraction { sets } => per_player_sets(sets, 2)?,
        _ => {
            return Err(Error::Validation {
                field: "ruleset.preset".into(),
                message: "zero_sum_transfer requires a fixed subtraction spec".into(),
            })
        }
    };
    let symmetric = sets[0] == sets[1];
    Ok(CumulativeGame {
        n: 2,
        d: 1,
        ruleset: Ruleset {
            actions: subtraction_actions(sets, 2, 1),
            rewards: transfer_rewards(1),
            cumulation_independent: true,
            symmetric,
            short: true,
        },
        turn: TurnFunction::Alternating,
        utility: UtilityMap::Identity,
        move_budget: DEFAULT_MOVE_BUDGET,
    })
}

// Heap roles in the compound scenario.
const HEAP_A: usize = 0; // normal play, reward-encoded
const HEAP_B: usize = 1; // misere play, reward-encoded
const HEAP_C: usize = 2; // scoring play, transfer-encoded
const HEAP_D: usize = 3; // squirrel play
const HEAP_E: usize = 4; // auction play, item value 4
const HEAP_F: usize = 5; // wealth play, settles last-move honours

const BOB: Player = Player(2);
const CHARLIE: Player = Player(3);

fn compound_turn(n: usize) -> TurnFunction {
    if n == 2 {
        return TurnFunction::Cyclic;
    }
    // Bob gets an extra turn whenever his total cumulation sits at exactly 5.
    TurnFunction::Custom(Arc::new(move |pos: &HeapPosition, prev: Player| {
        if prev == BOB {
            let bob_total: f64 = (0..pos.d()).map(|h| pos.cumulation.get(BOB.idx(), h)).sum();
            if feq(bob_total, 5.0) {
                return BOB;
            }
        }
        prev.cyclic_next(3)
    }))
}

/// The six-heap compound game: all heaps start at 4, heap F carries initial
/// cumulation 1 for every player. `n` is 2 (Alice, Bob) or 3 (adding Charlie,
/// who subtracts 1 or 4 and may add a pebble each to heaps A and B).
pub fn prologue_compound(n: usize) -> Result<(CumulativeGame, GroundedPosition)> {
    if n != 2 && n != 3 {
        return Err(Error::Validation {
            field: "players".into(),
            message: "the compound scenario is defined for 2 or 3 players".into(),
        });
    }
    let d = 6;
    let turn = compound_turn(n);

    let turn_a = turn.clone();
    let actions: crate::game::ActionFn = Arc::new(move |g: &GroundedPosition| {
        let mover = turn_a.current(&g.position, g.previous, n);
        let set: &[u32] = if n == 3 && mover == CHARLIE { &[1, 4] } else { &[2, 3] };
        let mut acts = Vec::new();
        for h in [HEAP_A, HEAP_B, HEAP_C, HEAP_D, HEAP_E] {
            let x = g.position.heaps[h];
            for &a in set {
                if a <= x {
                    acts.push(ActionVector::removal(d, h, a));
                }
            }
        }
        // wealth play on heap F: remove at most your own cumulation there
        let x = g.position.heaps[HEAP_F];
        let budget = g.position.cumulation.get(mover.idx(), HEAP_F).floor();
        let cap = if budget < 0.0 { 0 } else { budget as u32 };
        for a in 1..=cap.min(x) {
            acts.push(ActionVector::removal(d, HEAP_F, a));
        }
        if n == 3 && mover == CHARLIE {
            acts.push(ActionVector::new(vec![1, 1, 0, 0, 0, 0]));
        }
        acts
    });

    let turn_r = turn.clone();
    let rewards: crate::game::RewardFn = Arc::new(move |g: &GroundedPosition, a: &ActionVector| {
        let mover = turn_r.current(&g.position, g.previous, n);
        let mut r = Matrix::zeros(n, d);
        let Some(h) = a.delta.iter().position(|&v| v < 0) else {
            return r; // Charlie's add action carries no reward
        };
        let amount = (-a.delta[h]) as f64;
        let emptied = g.position.heaps[h] as i64 + a.delta[h] == 0;
        match h {
            HEAP_A if emptied => {
                for i in 0..n {
                    r.set(i, h, if i == mover.idx() { 1.0 } else { -1.0 });
                }
            }
            HEAP_B if emptied => {
                for i in 0..n {
                    r.set(i, h, if i == mover.idx() { -1.0 } else { 1.0 });
                }
            }
            HEAP_C => {
                // Alice and Charlie drive the score up, Bob drives it down
                let score = if mover == BOB { -amount } else { amount };
                for i in 0..n {
                    r.set(i, h, if i == BOB.idx() { -score } else { score });
                }
            }
            HEAP_D | HEAP_E | HEAP_F => r.set(mover.idx(), h, amount),
            _ => {}
        }
        r
    });

    let utility = UtilityMap::PerHeap(Arc::new(move |i, h, column: &[f64], current: Player| {
        match h {
            HEAP_E => {
                let wins = column
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| j == i || column[i] > c + crate::game::EPSILON);
                if wins {
                    4.0 - column[i]
                } else {
                    0.0
                }
            }
            // losing the composite normal play is settled on heap F, ignoring
            // the wealth stakes themselves
            HEAP_F => {
                if i == current.idx() {
                    -1.0
                } else {
                    1.0
                }
            }
            _ => column[i],
        }
    }));

    let game = CumulativeGame {
        n,
        d,
        ruleset: Ruleset {
            actions,
            rewards,
            cumulation_independent: false,
            symmetric: n == 2,
            short: true,
        },
        turn,
        utility,
        move_budget: DEFAULT_MOVE_BUDGET,
    };

    let mut cumulation = Matrix::zeros(n, d);
    for i in 0..n {
        cumulation.set(i, HEAP_F, 1.0);
    }
    let start = GroundedPosition::new(
        HeapPosition::new(vec![4; 6], cumulation)?,
        Player(n as u8), // cyclic order makes Alice the first mover
    );
    Ok((game, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_sets_are_validated() {
        let err = build_game(
            &RulesetSpec::FixedSubtraction { sets: vec![vec![0, 2]] },
            &UtilitySpec::identity(),
            2,
            1,
        );
        assert!(matches!(err, Err(Error::Validation { .. })));
    }

    #[test]
    fn partizan_sets_are_per_player() {
        let game = build_game(
            &RulesetSpec::fixed_partizan(vec![2, 3], vec![1, 4]),
            &UtilitySpec::identity(),
            2,
            1,
        )
        .unwrap();
        assert!(!game.ruleset.symmetric);
        let g = GroundedPosition::new(
            HeapPosition::with_zero_cumulation(vec![5], 2),
            Player(1), // player 2 to move
        );
        let acts = game.actions(&g);
        assert_eq!(acts, vec![ActionVector::new(vec![-4]), ActionVector::new(vec![-1])]);
    }

    #[test]
    fn compound_first_round_matches_walkthrough() {
        let (game, g0) = prologue_compound(3).unwrap();
        assert_eq!(game.current_player(&g0), Player(1));
        let g1 = game.step(&g0, &ActionVector::removal(6, HEAP_A, 2)).unwrap();
        let g2 = game.step(&g1, &ActionVector::removal(6, HEAP_B, 3)).unwrap();
        let g3 = game.step(&g2, &ActionVector::removal(6, HEAP_C, 4)).unwrap();
        assert_eq!(g3.position.heaps, vec![2, 1, 0, 4, 4, 4]);
        assert_eq!(g3.position.cumulation.column(HEAP_C), vec![4.0, -4.0, 4.0]);
        assert_eq!(game.current_player(&g3), Player(1));
    }

    #[test]
    fn two_player_compound_has_no_add_action() {
        let (game, g0) = prologue_compound(2).unwrap();
        assert!(game
            .actions(&g0)
            .iter()
            .all(|a| a.delta.iter().all(|&v| v <= 0)));
    }
}
