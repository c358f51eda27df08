//! Core domain model: positions, actions, rewards, turn functions, utilities,
//! option expansion, and feasibility checking.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison tolerance for non-integer utilities. All published tables are
/// integer-valued, so exact presets never hit the tolerance.
pub const EPSILON: f64 = 1e-9;

pub fn feq(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPSILON
}

/// 1-based player index, matching the convention `p mod n + 1` for cyclic turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Player(pub u8);

impl Player {
    pub fn new(one_based: u8) -> Player {
        Player(one_based)
    }

    /// 0-based index for array access.
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize - 1
    }

    /// Cyclic successor among `n` players: `p mod n + 1`.
    #[inline]
    pub fn cyclic_next(self, n: usize) -> Player {
        Player((self.0 % n as u8) + 1)
    }

    pub fn valid_for(self, n: usize) -> bool {
        self.0 >= 1 && (self.0 as usize) <= n
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense row-major `n x d` matrix of reals; used for both cumulations and rewards.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize, d: usize) -> Matrix {
        Matrix { n, d, data: vec![0.0; n * d] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Matrix> {
        let n = rows.len();
        let d = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { n, d, data: rows.into_iter().flatten().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, player: usize, heap: usize) -> f64 {
        self.data[player * self.d + heap]
    }

    #[inline]
    pub fn set(&mut self, player: usize, heap: usize, value: f64) {
        self.data[player * self.d + heap] = value;
    }

    /// Cumulation column of one heap: one entry per player.
    pub fn column(&self, heap: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, heap)).collect()
    }

    /// Per-player totals across heaps.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.d).map(|h| self.get(i, h)).sum())
            .collect()
    }

    pub fn add_assign(&mut self, other: &Matrix) {
        debug_assert_eq!(self.data.len(), other.data.len());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn approx_eq(&self, other: &Matrix) -> bool {
        self.n == other.n
            && self.d == other.d
            && self.data.iter().zip(&other.data).all(|(a, b)| feq(*a, *b))
    }

    /// Bit pattern of the entries, usable as a hash key. All cumulations in a
    /// game are derived deterministically, so bitwise equality is the right
    /// notion for merging identical grounded positions.
    pub fn key_bits(&self) -> Vec<u64> {
        self.data.iter().map(|v| v.to_bits()).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// A heap position: `d` pebble counts plus the `n x d` cumulation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HeapPosition {
    pub heaps: Vec<u32>,
    pub cumulation: Matrix,
}

impl HeapPosition {
    pub fn new(heaps: Vec<u32>, cumulation: Matrix) -> Result<HeapPosition> {
        if heaps.len() != cumulation.d() {
            return Err(Error::DimensionMismatch(format!(
                "{} heaps vs {} cumulation columns",
                heaps.len(),
                cumulation.d()
            )));
        }
        Ok(HeapPosition { heaps, cumulation })
    }

    pub fn with_zero_cumulation(heaps: Vec<u32>, n: usize) -> HeapPosition {
        let d = heaps.len();
        HeapPosition { heaps, cumulation: Matrix::zeros(n, d) }
    }

    pub fn d(&self) -> usize {
        self.heaps.len()
    }
}

/// A heap position together with the previous player.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedPosition {
    pub position: HeapPosition,
    pub previous: Player,
}

impl GroundedPosition {
    pub fn new(position: HeapPosition, previous: Player) -> GroundedPosition {
        GroundedPosition { position, previous }
    }

    pub fn key(&self) -> PositionKey {
        PositionKey {
            heaps: self.position.heaps.clone(),
            cumulation: self.position.cumulation.key_bits(),
            previous: self.previous.0,
        }
    }
}

/// Memoization key for merging identical grounded positions into a DAG.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionKey {
    pub heaps: Vec<u32>,
    pub cumulation: Vec<u64>,
    pub previous: u8,
}

/// Heap deltas of one move: negative entries remove pebbles, positive add.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionVector {
    pub delta: Vec<i64>,
}

impl ActionVector {
    pub fn new(delta: Vec<i64>) -> ActionVector {
        ActionVector { delta }
    }

    /// Single-heap removal of `amount` pebbles from heap `heap` out of `d`.
    pub fn removal(d: usize, heap: usize, amount: u32) -> ActionVector {
        let mut delta = vec![0i64; d];
        delta[heap] = -(amount as i64);
        ActionVector { delta }
    }
}

impl fmt::Display for ActionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.delta.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub type ActionFn = Arc<dyn Fn(&GroundedPosition) -> Vec<ActionVector> + Send + Sync>;
pub type RewardFn = Arc<dyn Fn(&GroundedPosition, &ActionVector) -> Matrix + Send + Sync>;
pub type TurnFn = Arc<dyn Fn(&HeapPosition, Player) -> Player + Send + Sync>;
pub type UtilityFn = Arc<dyn Fn(usize, usize, &[f64], Player) -> f64 + Send + Sync>;

/// The ruleset `R = (A, r)`: action sets and rewards over grounded positions.
#[derive(Clone)]
pub struct Ruleset {
    pub actions: ActionFn,
    pub rewards: RewardFn,
    pub cumulation_independent: bool,
    pub symmetric: bool,
    pub short: bool,
}

impl fmt::Debug for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ruleset")
            .field("cumulation_independent", &self.cumulation_independent)
            .field("symmetric", &self.symmetric)
            .field("short", &self.short)
            .finish()
    }
}

#[derive(Clone)]
pub enum TurnFunction {
    /// `p mod n + 1` for every position.
    Cyclic,
    /// Two-player strict alternation; identical to `Cyclic` with `n = 2`.
    Alternating,
    Custom(TurnFn),
}

impl TurnFunction {
    pub fn current(&self, position: &HeapPosition, previous: Player, n: usize) -> Player {
        match self {
            TurnFunction::Cyclic | TurnFunction::Alternating => previous.cyclic_next(n),
            TurnFunction::Custom(f) => f(position, previous),
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, TurnFunction::Cyclic | TurnFunction::Alternating)
    }
}

impl fmt::Debug for TurnFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurnFunction::Cyclic => write!(f, "Cyclic"),
            TurnFunction::Alternating => write!(f, "Alternating"),
            TurnFunction::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Terminal utility. Per-heap functions receive the full cumulation column of
/// their heap (auction utilities need the opponents' entries) and the terminal
/// current player; the total is the sum over heaps.
#[derive(Clone)]
pub enum UtilityMap {
    /// `u_i = sum_h C_{i,h}`.
    Identity,
    PerHeap(UtilityFn),
}

impl UtilityMap {
    pub fn is_identity(&self) -> bool {
        matches!(self, UtilityMap::Identity)
    }

    pub fn total(&self, position: &HeapPosition, terminal_current: Player) -> Vec<f64> {
        let n = position.cumulation.n();
        match self {
            UtilityMap::Identity => position.cumulation.row_sums(),
            UtilityMap::PerHeap(f) => (0..n)
                .map(|i| {
                    (0..position.d())
                        .map(|h| f(i, h, &position.cumulation.column(h), terminal_current))
                        .sum()
                })
                .collect(),
        }
    }
}

impl fmt::Debug for UtilityMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UtilityMap::Identity => write!(f, "Identity"),
            UtilityMap::PerHeap(_) => write!(f, "PerHeap"),
        }
    }
}

pub const DEFAULT_MOVE_BUDGET: usize = 1_000_000;

/// A cumulative game: player/heap counts, ruleset, turn function, utility map,
/// and a move budget guarding feasibility.
#[derive(Clone, Debug)]
pub struct CumulativeGame {
    pub n: usize,
    pub d: usize,
    pub ruleset: Ruleset,
    pub turn: TurnFunction,
    pub utility: UtilityMap,
    pub move_budget: usize,
}

/// Outcome of an exhaustive feasibility traversal.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// Every play line terminates; carries the longest line length seen.
    Ok { longest_line: usize },
    /// Some play line exceeds the move budget (or cycles); carries one
    /// offending path prefix of actions from the start position.
    BudgetExceeded { path: Vec<ActionVector> },
}

impl CumulativeGame {
    /// The current player at a grounded position.
    pub fn current_player(&self, g: &GroundedPosition) -> Player {
        self.turn.current(&g.position, g.previous, self.n)
    }

    /// Action set at `g`, sorted lexicographically for determinism.
    pub fn actions(&self, g: &GroundedPosition) -> Vec<ActionVector> {
        let mut acts = (self.ruleset.actions)(g);
        acts.sort();
        acts.dedup();
        acts
    }

    pub fn is_terminal(&self, g: &GroundedPosition) -> bool {
        (self.ruleset.actions)(g).is_empty()
    }

    /// Terminal utilities at `g`; the terminal current player feeds the map.
    pub fn utilities(&self, g: &GroundedPosition) -> Vec<f64> {
        self.utility.total(&g.position, self.current_player(g))
    }

    fn check_dims(&self, g: &GroundedPosition) -> Result<()> {
        if g.position.d() != self.d || g.position.cumulation.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "position is {}x{}, game is {}x{}",
                g.position.cumulation.n(),
                g.position.d(),
                self.n,
                self.d
            )));
        }
        if !g.previous.valid_for(self.n) {
            return Err(Error::DimensionMismatch(format!(
                "previous player {} out of 1..{}",
                g.previous, self.n
            )));
        }
        Ok(())
    }

    /// One move: heaps shift by the action, rewards accrue, the mover becomes
    /// the new previous player.
    pub fn step(&self, g: &GroundedPosition, action: &ActionVector) -> Result<GroundedPosition> {
        self.check_dims(g)?;
        if !self.actions(g).contains(action) {
            return Err(Error::IllegalAction {
                action: action.delta.clone(),
                heaps: g.position.heaps.clone(),
            });
        }
        self.apply_unchecked(g, action)
    }

    /// Apply an action without membership checking; the caller guarantees it
    /// came from `actions(g)`.
    pub fn apply_unchecked(&self, g: &GroundedPosition, action: &ActionVector) -> Result<GroundedPosition> {
        if action.delta.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "action has {} entries, game has {} heaps",
                action.delta.len(),
                self.d
            )));
        }
        let mut heaps = g.position.heaps.clone();
        for (h, (x, a)) in heaps.iter_mut().zip(&action.delta).enumerate() {
            let next = *x as i64 + a;
            if next < 0 {
                return Err(Error::NegativeHeap { action: action.delta.clone(), heap: h });
            }
            *x = next as u32;
        }
        let mut cumulation = g.position.cumulation.clone();
        cumulation.add_assign(&(self.ruleset.rewards)(g, action));
        let mover = self.current_player(g);
        Ok(GroundedPosition::new(HeapPosition { heaps, cumulation }, mover))
    }

    /// Sorted set of options of `g`; empty iff `g` is terminal.
    pub fn expand_options(&self, g: &GroundedPosition) -> Result<Vec<GroundedPosition>> {
        self.check_dims(g)?;
        self.actions(g)
            .iter()
            .map(|a| self.apply_unchecked(g, a))
            .collect()
    }

    /// Exhaustive depth-first traversal proving every play line from `g`
    /// terminates within the move budget. Identical grounded positions are
    /// merged, so a revisit on the current stack is a cycle, i.e. an infinite
    /// line.
    pub fn check_feasibility(&self, g: &GroundedPosition) -> Result<Feasibility> {
        self.check_dims(g)?;
        // memo: longest remaining line plus the action realizing it
        let mut memo: HashMap<PositionKey, (usize, Option<ActionVector>)> = HashMap::new();
        let mut stack: std::collections::HashSet<PositionKey> = Default::default();
        let mut path: Vec<ActionVector> = Vec::new();
        match self.feas_rec(g, &mut memo, &mut stack, &mut path)? {
            None => Ok(Feasibility::BudgetExceeded { path }),
            Some(len) => {
                if len > self.move_budget {
                    // reconstruct one over-budget line prefix from the memo
                    let mut line = Vec::new();
                    let mut cur = g.clone();
                    while line.len() <= self.move_budget {
                        match memo.get(&cur.key()).and_then(|(_, a)| a.clone()) {
                            Some(a) => {
                                cur = self.apply_unchecked(&cur, &a)?;
                                line.push(a);
                            }
                            None => break,
                        }
                    }
                    Ok(Feasibility::BudgetExceeded { path: line })
                } else {
                    Ok(Feasibility::Ok { longest_line: len })
                }
            }
        }
    }

    /// Returns the longest remaining line, or `None` if a cycle was found (in
    /// which case `path` holds the offending prefix).
    fn feas_rec(
        &self,
        g: &GroundedPosition,
        memo: &mut HashMap<PositionKey, (usize, Option<ActionVector>)>,
        stack: &mut std::collections::HashSet<PositionKey>,
        path: &mut Vec<ActionVector>,
    ) -> Result<Option<usize>> {
        let key = g.key();
        if let Some((len, _)) = memo.get(&key) {
            return Ok(Some(*len));
        }
        if stack.contains(&key) || path.len() > self.move_budget {
            return Ok(None);
        }
        stack.insert(key.clone());
        let mut best: (usize, Option<ActionVector>) = (0, None);
        for action in self.actions(g) {
            let child = self.apply_unchecked(g, &action)?;
            path.push(action.clone());
            match self.feas_rec(&child, memo, stack, path)? {
                None => return Ok(None),
                Some(len) => {
                    if len + 1 > best.0 {
                        best = (len + 1, Some(action));
                    }
                    path.pop();
                }
            }
        }
        stack.remove(&key);
        memo.insert(key, best.clone());
        Ok(Some(best.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulesets::{self, RulesetSpec, UtilitySpec};

    fn squirrel_23() -> CumulativeGame {
        rulesets::build_game(
            &RulesetSpec::fixed_symmetric(vec![2, 3]),
            &UtilitySpec::identity(),
            2,
            1,
        )
        .unwrap()
    }

    fn grounded(heaps: Vec<u32>, cum: Vec<Vec<f64>>, prev: u8) -> GroundedPosition {
        GroundedPosition::new(
            HeapPosition::new(heaps, Matrix::from_rows(cum).unwrap()).unwrap(),
            Player(prev),
        )
    }

    #[test]
    fn expand_fig2_root() {
        let game = squirrel_23();
        let g = grounded(vec![7], vec![vec![0.0], vec![0.0]], 2);
        let options = game.expand_options(&g).unwrap();
        assert_eq!(options.len(), 2);
        assert_eq!(options[0].position.heaps, vec![4]);
        assert_eq!(options[0].position.cumulation.data(), &[3.0, 0.0]);
        assert_eq!(options[0].previous, Player(1));
        assert_eq!(options[1].position.heaps, vec![5]);
        assert_eq!(options[1].position.cumulation.data(), &[2.0, 0.0]);
    }

    #[test]
    fn expand_terminal_leaf() {
        let game = squirrel_23();
        let g = grounded(vec![1], vec![vec![4.0], vec![2.0]], 2);
        assert!(game.expand_options(&g).unwrap().is_empty());
        assert!(game.is_terminal(&g));
    }

    #[test]
    fn expand_wealth_play() {
        let game = rulesets::build_game(
            &RulesetSpec::Wealth,
            &UtilitySpec::normal_play(),
            2,
            1,
        )
        .unwrap();
        let g = grounded(vec![3], vec![vec![2.0], vec![1.0]], 2);
        let options = game.expand_options(&g).unwrap();
        let summary: Vec<(Vec<u32>, Vec<f64>)> = options
            .iter()
            .map(|o| (o.position.heaps.clone(), o.position.cumulation.data().to_vec()))
            .collect();
        assert!(summary.contains(&(vec![2], vec![3.0, 1.0])));
        assert!(summary.contains(&(vec![1], vec![4.0, 1.0])));
        assert_eq!(options.len(), 2);
    }

    #[test]
    fn step_fig2_edge() {
        let game = squirrel_23();
        let g = grounded(vec![4], vec![vec![3.0], vec![0.0]], 1);
        let next = game.step(&g, &ActionVector::new(vec![-3])).unwrap();
        assert_eq!(next.position.heaps, vec![1]);
        assert_eq!(next.position.cumulation.data(), &[3.0, 3.0]);
        assert_eq!(next.previous, Player(2));
    }

    #[test]
    fn step_rejects_illegal_action() {
        let game = squirrel_23();
        let g = grounded(vec![0], vec![vec![0.0], vec![0.0]], 2);
        let err = game.step(&g, &ActionVector::new(vec![-2]));
        assert!(matches!(err, Err(Error::IllegalAction { .. })));
    }

    #[test]
    fn feasibility_decreasing_heap() {
        let game = squirrel_23();
        let g = grounded(vec![7], vec![vec![0.0], vec![0.0]], 2);
        match game.check_feasibility(&g).unwrap() {
            Feasibility::Ok { longest_line } => assert_eq!(longest_line, 3),
            other => panic!("expected ok, got {other:?}"),
        }
    }

    #[test]
    fn feasibility_detects_infinite_line() {
        // synthetic ruleset: action (+1) always available
        let game = CumulativeGame {
            n: 2,
            d: 1,
            ruleset: Ruleset {
                actions: Arc::new(|_| vec![ActionVector::new(vec![1])]),
                rewards: Arc::new(|g, _| Matrix::zeros(g.position.cumulation.n(), 1)),
                cumulation_independent: true,
                symmetric: true,
                short: true,
            },
            turn: TurnFunction::Alternating,
            utility: UtilityMap::Identity,
            move_budget: 10,
        };
        let g = grounded(vec![0], vec![vec![0.0], vec![0.0]], 2);
        match game.check_feasibility(&g).unwrap() {
            Feasibility::BudgetExceeded { path } => assert!(!path.is_empty()),
            other => panic!("expected budget exceeded, got {other:?}"),
        }
    }

    #[test]
    fn expansion_is_deterministic() {
        let game = squirrel_23();
        let g = grounded(vec![7], vec![vec![0.0], vec![0.0]], 2);
        let a = game.expand_options(&g).unwrap();
        let b = game.expand_options(&g).unwrap();
        assert_eq!(a, b);
    }
}
