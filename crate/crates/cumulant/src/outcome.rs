//! Outcome functions: the four cumulative-subtraction dynamic programs
//! (zero-sum and self-interest, symmetric and partizan), the profile-driven
//! σ-outcome, and the heap-size dynamic program for general games.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::efg::{CgProfile, TieMode, TiePolicy};
use crate::error::{Error, Result};
use crate::game::{CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player};

fn in_range(set: &[u32], x: u32) -> impl Iterator<Item = u32> + '_ {
    set.iter().copied().filter(move |&a| a <= x)
}

/// Zero-sum symmetric outcomes: `o(x) = max({-o(x-a)+a : a in S(x)} u {0})`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZsSymmetricTable {
    pub set: Vec<u32>,
    /// `rows[x]` is the first mover's zero-sum result from heap `x`.
    pub rows: Vec<i64>,
    /// Number of candidate evaluations spent building the table.
    pub visits: usize,
}

pub fn outcome_zs_symmetric(set: &[u32], x_max: u32) -> ZsSymmetricTable {
    let mut rows: Vec<i64> = Vec::with_capacity(x_max as usize + 1);
    let mut visits = 0;
    for x in 0..=x_max {
        let mut best = 0i64;
        for a in in_range(set, x) {
            visits += 1;
            best = best.max(-rows[(x - a) as usize] + a as i64);
        }
        rows.push(best);
    }
    ZsSymmetricTable { set: set.to_vec(), rows, visits }
}

impl ZsSymmetricTable {
    /// First actions attaining the defining max at heap `x`.
    pub fn optimal_actions(&self, x: u32) -> Vec<u32> {
        in_range(&self.set, x)
            .filter(|&a| -self.rows[(x - a) as usize] + a as i64 == self.rows[x as usize])
            .collect()
    }
}

/// Self-interest symmetric outcomes: pairs `(o1, o2)` for the first and
/// second mover, with ties in the mover's value resolved by the tie mode.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SiSymmetricTable {
    pub set: Vec<u32>,
    pub mode: TieMode,
    pub rows: Vec<(i64, i64)>,
    pub visits: usize,
}

pub fn outcome_si_symmetric(set: &[u32], mode: TieMode, x_max: u32) -> SiSymmetricTable {
    let mut rows: Vec<(i64, i64)> = Vec::with_capacity(x_max as usize + 1);
    let mut visits = 0;
    for x in 0..=x_max {
        let mut o1 = 0i64;
        for a in in_range(set, x) {
            visits += 1;
            o1 = o1.max(rows[(x - a) as usize].1 + a as i64);
        }
        // among indifference actions, settle the opponent's fate
        let mut chosen: Option<(u32, i64)> = None;
        for a in in_range(set, x) {
            let (other_o1, prior_o2) = rows[(x - a) as usize];
            if prior_o2 + a as i64 != o1 {
                continue;
            }
            let replace = match chosen {
                None => true,
                Some((_, best)) => match mode {
                    TieMode::Antagonistic => other_o1 < best,
                    TieMode::Friendly => other_o1 > best,
                },
            };
            if replace {
                chosen = Some((a, other_o1));
            }
        }
        let o2 = chosen.map(|(_, v)| v).unwrap_or(0);
        rows.push((o1, o2));
    }
    SiSymmetricTable { set: set.to_vec(), mode, rows, visits }
}

impl SiSymmetricTable {
    /// The indifference set: first actions attaining the mover's max.
    pub fn indifference_set(&self, x: u32) -> Vec<u32> {
        let o1 = self.rows[x as usize].0;
        in_range(&self.set, x)
            .filter(|&a| self.rows[(x - a) as usize].1 + a as i64 == o1)
            .collect()
    }

    /// The action actually chosen after tie resolution, if any.
    pub fn chosen_action(&self, x: u32) -> Option<u32> {
        let indiff = self.indifference_set(x);
        let mut chosen: Option<(u32, i64)> = None;
        for a in indiff {
            let other = self.rows[(x - a) as usize].0;
            let replace = match chosen {
                None => true,
                Some((_, best)) => match self.mode {
                    TieMode::Antagonistic => other < best,
                    TieMode::Friendly => other > best,
                },
            };
            if replace {
                chosen = Some((a, other));
            }
        }
        chosen.map(|(a, _)| a)
    }
}

/// Zero-sum partizan outcomes, indexed by previous player: `rows[x][p-1]` is
/// the value of `C1 - C2` under optimal play from heap `x` when player `p`
/// moved last. Player 1 maximizes, player 2 minimizes.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZsPartizanTable {
    pub sets: [Vec<u32>; 2],
    pub rows: Vec<[i64; 2]>,
    pub visits: usize,
}

pub fn outcome_zs_partizan(s1: &[u32], s2: &[u32], x_max: u32) -> ZsPartizanTable {
    let mut rows: Vec<[i64; 2]> = Vec::with_capacity(x_max as usize + 1);
    let mut visits = 0;
    for x in 0..=x_max {
        // previous player 2: player 1 moves and collects +a
        let mut after_two = 0i64;
        let mut any = false;
        for a in in_range(s1, x) {
            visits += 1;
            let v = rows[(x - a) as usize][0] + a as i64;
            after_two = if any { after_two.max(v) } else { v };
            any = true;
        }
        if !any {
            after_two = 0;
        }
        // previous player 1: player 2 moves and drives C1-C2 down by a
        let mut after_one = 0i64;
        any = false;
        for a in in_range(s2, x) {
            visits += 1;
            let v = rows[(x - a) as usize][1] - a as i64;
            after_one = if any { after_one.min(v) } else { v };
            any = true;
        }
        if !any {
            after_one = 0;
        }
        rows.push([after_one, after_two]);
    }
    ZsPartizanTable { sets: [s1.to_vec(), s2.to_vec()], rows, visits }
}

impl ZsPartizanTable {
    /// `o(x, p)` with `p` the previous player.
    pub fn get(&self, x: u32, previous: Player) -> i64 {
        self.rows[x as usize][previous.idx()]
    }
}

/// Self-interest partizan outcomes: `rows[x][p-1]` holds `(o1, o2)` from heap
/// `x` when player `p` moved last.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SiPartizanTable {
    pub sets: [Vec<u32>; 2],
    pub mode: TieMode,
    pub rows: Vec<[(i64, i64); 2]>,
    pub visits: usize,
}

pub fn outcome_si_partizan(
    s1: &[u32],
    s2: &[u32],
    mode: TieMode,
    x_max: u32,
) -> SiPartizanTable {
    let mut rows: Vec<[(i64, i64); 2]> = Vec::with_capacity(x_max as usize + 1);
    let mut visits = 0;
    for x in 0..=x_max {
        let mut row = [(0i64, 0i64); 2];
        // previous player 2: player 1 moves, child previous player is 1
        for (slot, set, mover) in [(1usize, s1, 0usize), (0usize, s2, 1usize)] {
            let child_slot = 1 - slot;
            let mut own = 0i64;
            for a in in_range(set, x) {
                visits += 1;
                let child = rows[(x - a) as usize][child_slot];
                let v = (if mover == 0 { child.0 } else { child.1 }) + a as i64;
                own = own.max(v);
            }
            let mut chosen: Option<i64> = None;
            for a in in_range(set, x) {
                let child = rows[(x - a) as usize][child_slot];
                let (mine, other) = if mover == 0 { (child.0, child.1) } else { (child.1, child.0) };
                if mine + a as i64 != own {
                    continue;
                }
                let replace = match chosen {
                    None => true,
                    Some(best) => match mode {
                        TieMode::Antagonistic => other < best,
                        TieMode::Friendly => other > best,
                    },
                };
                if replace {
                    chosen = Some(other);
                }
            }
            let other = chosen.unwrap_or(0);
            row[slot] = if mover == 0 { (own, other) } else { (other, own) };
        }
        rows.push(row);
    }
    SiPartizanTable { sets: [s1.to_vec(), s2.to_vec()], mode, rows, visits }
}

impl SiPartizanTable {
    /// `(o1, o2)` from heap `x` when `previous` moved last.
    pub fn get(&self, x: u32, previous: Player) -> (i64, i64) {
        self.rows[x as usize][previous.idx()]
    }
}

/// Sum of rewards accumulated along a profile's realized line from `g`; the
/// base case at terminals is the zero vector.
pub fn sigma_outcome(
    game: &CumulativeGame,
    profile: &CgProfile,
    g: &GroundedPosition,
) -> Result<Vec<f64>> {
    let mut totals = vec![0.0; game.n];
    let mut current = g.clone();
    let mut steps = 0;
    while !game.is_terminal(&current) {
        if steps >= game.move_budget {
            return Err(Error::BudgetExceeded { budget: game.move_budget });
        }
        let a = profile.action(game, &current).ok_or(Error::ProfileUndefined)?;
        let reward = (game.ruleset.rewards)(&current, &a);
        for (i, s) in reward.row_sums().into_iter().enumerate() {
            totals[i] += s;
        }
        current = game.step(&current, &a)?;
        steps += 1;
    }
    Ok(totals)
}

/// An n×n outcome matrix: row `p-1` holds every player's equilibrium
/// σ-outcome when `p` moved last.
pub type OutcomeMatrix = Matrix;

/// Memoized equilibrium outcomes of a heap-size dynamic game, keyed on heap
/// sizes and previous player only.
pub struct RecursiveOutcome<'a> {
    game: &'a CumulativeGame,
    tie: TiePolicy,
    memo: HashMap<(Vec<u32>, u8), Vec<f64>>,
    on_stack: std::collections::HashSet<(Vec<u32>, u8)>,
    /// Number of distinct (heaps, previous) cells solved.
    pub cells: usize,
}

impl<'a> RecursiveOutcome<'a> {
    /// Requires a heap-size dynamic ruleset (actions, rewards, and turn
    /// never read the cumulation) with identity utility.
    pub fn new(game: &'a CumulativeGame, tie: TiePolicy) -> Result<RecursiveOutcome<'a>> {
        if !game.ruleset.cumulation_independent {
            return Err(Error::CumulationDependent(
                "ruleset declares cumulation-dependent actions or turn".into(),
            ));
        }
        if !matches!(game.utility, crate::game::UtilityMap::Identity) {
            return Err(Error::CumulationDependent(
                "the heap-size dynamic program requires identity utility".into(),
            ));
        }
        Ok(RecursiveOutcome {
            game,
            tie,
            memo: HashMap::new(),
            on_stack: std::collections::HashSet::new(),
            cells: 0,
        })
    }

    fn zero_grounded(&self, heaps: &[u32], previous: Player) -> GroundedPosition {
        GroundedPosition::new(
            HeapPosition::with_zero_cumulation(heaps.to_vec(), self.game.n),
            previous,
        )
    }

    /// Equilibrium σ-outcome vector from the given heaps and previous
    /// player.
    pub fn outcome(&mut self, heaps: &[u32], previous: Player) -> Result<Vec<f64>> {
        let key = (heaps.to_vec(), previous.0);
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        if !self.on_stack.insert(key.clone()) {
            return Err(Error::CycleDetected);
        }
        let g = self.zero_grounded(heaps, previous);
        let acts = self.game.actions(&g);
        let out = if acts.is_empty() {
            vec![0.0; self.game.n]
        } else {
            let mover = self.game.current_player(&g).idx();
            let mut best: Option<Vec<f64>> = None;
            for a in acts {
                let reward = (self.game.ruleset.rewards)(&g, &a);
                let child = self.game.apply_unchecked(&g, &a)?;
                let mut v = self.outcome(&child.position.heaps, child.previous)?;
                for (vi, r) in v.iter_mut().zip(reward.row_sums()) {
                    *vi += r;
                }
                match &best {
                    None => best = Some(v),
                    Some(incumbent) => {
                        if self.tie.better(mover, &v, incumbent) {
                            best = Some(v);
                        }
                    }
                }
            }
            best.expect("nonterminal has actions")
        };
        self.on_stack.remove(&key);
        self.cells += 1;
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// All previous-player rows stacked into an n×n matrix.
    pub fn outcome_matrix(&mut self, heaps: &[u32]) -> Result<OutcomeMatrix> {
        let rows: Vec<Vec<f64>> = (1..=self.game.n as u8)
            .map(|p| self.outcome(heaps, Player(p)))
            .collect::<Result<_>>()?;
        Matrix::from_rows(rows)
    }

    /// Equilibrium utilities of the grounded game: outcome plus the row sums
    /// of the initial cumulation (identity utility).
    pub fn grounded_value(&mut self, g: &GroundedPosition) -> Result<Vec<f64>> {
        let mut v = self.outcome(&g.position.heaps, g.previous)?;
        for (vi, c) in v.iter_mut().zip(g.position.cumulation.row_sums()) {
            *vi += c;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::solve_grounded;
    use crate::rulesets::{build_game, RulesetSpec, UtilitySpec};

    #[test]
    fn zs_symmetric_23_golden() {
        let t = outcome_zs_symmetric(&[2, 3], 7);
        assert_eq!(t.rows, vec![0, 0, 2, 3, 3, 1, 0, 1]);
    }

    #[test]
    fn zs_symmetric_small_heaps_are_zero() {
        let t = outcome_zs_symmetric(&[4, 9], 3);
        assert_eq!(t.rows, vec![0, 0, 0, 0]);
    }

    #[test]
    fn si_symmetric_23_golden() {
        let t = outcome_si_symmetric(&[2, 3], TieMode::Antagonistic, 7);
        assert_eq!(
            t.rows,
            vec![(0, 0), (0, 0), (2, 0), (3, 0), (3, 0), (3, 2), (3, 3), (4, 3)]
        );
    }

    #[test]
    fn zs_partizan_golden() {
        let t = outcome_zs_partizan(&[2, 3], &[1, 4], 7);
        let after_two: Vec<i64> = (0..=7).map(|x| t.get(x, Player(2))).collect();
        let after_one: Vec<i64> = (0..=7).map(|x| t.get(x, Player(1))).collect();
        assert_eq!(after_two, vec![0, 0, 2, 3, 2, 3, 4, -1]);
        assert_eq!(after_one, vec![0, -1, -1, 1, -4, -4, -2, -1]);
    }

    #[test]
    fn zs_partizan_single_candidate() {
        let t = outcome_zs_partizan(&[2, 3], &[1, 4], 7);
        // from heap 3 after player 1 moved: player 2 subtracts 1
        assert_eq!(t.get(3, Player(1)), t.get(2, Player(2)) - 1);
        assert_eq!(t.get(3, Player(1)), 1);
    }

    #[test]
    fn si_partizan_golden() {
        let t = outcome_si_partizan(&[2, 3], &[1, 4], TieMode::Antagonistic, 7);
        let after_two: Vec<(i64, i64)> = (0..=7).map(|x| t.get(x, Player(2))).collect();
        let after_one: Vec<(i64, i64)> = (0..=7).map(|x| t.get(x, Player(1))).collect();
        assert_eq!(
            after_two,
            vec![(0, 0), (0, 0), (2, 0), (3, 0), (3, 1), (4, 1), (5, 1), (3, 4)]
        );
        assert_eq!(
            after_one,
            vec![(0, 0), (0, 1), (0, 1), (2, 1), (0, 4), (0, 4), (2, 4), (3, 4)]
        );
    }

    #[test]
    fn divergence_anchor_friendly_3_5() {
        let zs = outcome_zs_symmetric(&[3, 5], 14);
        let si = outcome_si_symmetric(&[3, 5], TieMode::Friendly, 14);
        assert_eq!(zs.rows[14], 3);
        assert_eq!(zs.optimal_actions(14), vec![5]);
        assert_eq!(si.chosen_action(14), Some(3));
        let (o1, o2) = si.rows[14];
        assert_eq!(o1 - o2, 2);
    }

    #[test]
    fn divergence_anchor_antagonistic_6_13_17() {
        let zs = outcome_zs_symmetric(&[6, 13, 17], 76);
        let si = outcome_si_symmetric(&[6, 13, 17], TieMode::Antagonistic, 76);
        assert_eq!(zs.rows[76], 5);
        let (o1, o2) = si.rows[76];
        assert_eq!(o1 - o2, 4);
        assert_ne!(zs.optimal_actions(76), si.indifference_set(76));
    }

    #[test]
    fn complexity_is_linear_in_table_size() {
        let x_max = 500u32;
        let set = [2, 3, 7, 11];
        let t = outcome_zs_symmetric(&set, x_max);
        assert!(t.visits <= (x_max as usize + 1) * set.len());
        let t = outcome_si_symmetric(&set, TieMode::Antagonistic, x_max);
        assert!(t.visits <= (x_max as usize + 1) * set.len());
    }

    #[test]
    fn sigma_outcome_equilibrium_heap7() {
        let game =
            build_game(&RulesetSpec::fixed_symmetric(vec![2, 3]), &UtilitySpec::identity(), 2, 1)
                .unwrap();
        let g0 = GroundedPosition::new(
            HeapPosition::with_zero_cumulation(vec![7], 2),
            Player(2),
        );
        let solved = solve_grounded(&game, &g0, &TiePolicy::antagonistic(), 10_000).unwrap();
        let o = sigma_outcome(&game, &solved.profile, &g0).unwrap();
        assert_eq!(o, vec![4.0, 3.0]);
    }

    #[test]
    fn sigma_outcome_terminal_is_zero() {
        let game =
            build_game(&RulesetSpec::fixed_symmetric(vec![2, 3]), &UtilitySpec::identity(), 2, 1)
                .unwrap();
        let g = GroundedPosition::new(
            HeapPosition::with_zero_cumulation(vec![1], 2),
            Player(1),
        );
        let o = sigma_outcome(&game, &CgProfile::greedy(), &g).unwrap();
        assert_eq!(o, vec![0.0, 0.0]);
    }

    #[test]
    fn recursive_outcome_matches_si_table() {
        let game =
            build_game(&RulesetSpec::fixed_symmetric(vec![2, 3]), &UtilitySpec::identity(), 2, 1)
                .unwrap();
        let mut dp = RecursiveOutcome::new(&game, TiePolicy::antagonistic()).unwrap();
        let table = outcome_si_symmetric(&[2, 3], TieMode::Antagonistic, 12);
        for x in 0..=12u32 {
            let row = dp.outcome(&[x], Player(2)).unwrap();
            let (o1, o2) = table.rows[x as usize];
            assert_eq!(row, vec![o1 as f64, o2 as f64], "heap {x}");
        }
    }

    #[test]
    fn recursive_outcome_shifts_with_initial_cumulation() {
        let game =
            build_game(&RulesetSpec::fixed_symmetric(vec![2, 3]), &UtilitySpec::identity(), 2, 1)
                .unwrap();
        let mut dp = RecursiveOutcome::new(&game, TiePolicy::antagonistic()).unwrap();
        let mut c = Matrix::zeros(2, 1);
        c.set(0, 0, 5.0);
        c.set(1, 0, 7.0);
        let g = GroundedPosition::new(HeapPosition::new(vec![7], c).unwrap(), Player(2));
        assert_eq!(dp.grounded_value(&g).unwrap(), vec![4.0 + 5.0, 3.0 + 7.0]);
    }

    #[test]
    fn recursive_outcome_rejects_cumulation_dependence() {
        let (game, _) = crate::rulesets::prologue_compound(3).unwrap();
        assert!(matches!(
            RecursiveOutcome::new(&game, TiePolicy::antagonistic()),
            Err(Error::CumulationDependent(_))
        ));
    }
}
