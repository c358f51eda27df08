//! Extensive form games: backward induction with generic tie-breaking,
//! profile play-out, and both directions of conversion between cumulative
//! games and extensive form.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    ActionVector, CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player, PositionKey,
    Ruleset, TurnFunction, UtilityMap, EPSILON,
};

/// How an indifferent mover treats opponents: drive their utilities down or
/// up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TieMode {
    #[default]
    Antagonistic,
    Friendly,
}

/// Deterministic tie-breaking: (1) the mover's own utility, (2) opponents'
/// utilities in the mover's preference order (minimized or maximized by
/// mode), (3) the caller's iteration order, which is kept lexicographic.
#[derive(Debug, Clone, PartialEq)]
pub struct TiePolicy {
    pub mode: TieMode,
    /// Optional 1-based preference order over opponents, one row per player.
    pub preferences: Option<Vec<Vec<u8>>>,
}

impl TiePolicy {
    pub fn antagonistic() -> TiePolicy {
        TiePolicy { mode: TieMode::Antagonistic, preferences: None }
    }

    pub fn friendly() -> TiePolicy {
        TiePolicy { mode: TieMode::Friendly, preferences: None }
    }

    fn opponent_order(&self, mover: usize, n: usize) -> Vec<usize> {
        if let Some(prefs) = &self.preferences {
            if let Some(row) = prefs.get(mover) {
                return row.iter().map(|&p| p as usize - 1).filter(|&j| j != mover).collect();
            }
        }
        (0..n).filter(|&j| j != mover).collect()
    }

    /// Does `candidate` beat `incumbent` from `mover`'s viewpoint? On exact
    /// ties the incumbent is kept, so callers that scan options in
    /// lexicographic order get the lexicographically smallest optimum.
    pub fn better(&self, mover: usize, candidate: &[f64], incumbent: &[f64]) -> bool {
        if candidate[mover] > incumbent[mover] + EPSILON {
            return true;
        }
        if candidate[mover] < incumbent[mover] - EPSILON {
            return false;
        }
        for j in self.opponent_order(mover, candidate.len()) {
            let diff = candidate[j] - incumbent[j];
            if diff.abs() > EPSILON {
                return match self.mode {
                    TieMode::Antagonistic => diff < 0.0,
                    TieMode::Friendly => diff > 0.0,
                };
            }
        }
        false
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EfgState {
    /// Mover at this state (arbitrary for terminals).
    pub turn: Player,
    /// Indices into `ExtensiveFormGame::states`; empty iff terminal.
    pub children: Vec<usize>,
    /// Terminal utilities; present iff the state is terminal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<Vec<f64>>,
}

impl EfgState {
    pub fn decision(turn: Player, children: Vec<usize>) -> EfgState {
        EfgState { turn, children, utilities: None }
    }

    pub fn terminal(utilities: Vec<f64>) -> EfgState {
        EfgState { turn: Player(1), children: Vec::new(), utilities: Some(utilities) }
    }

    pub fn is_terminal(&self) -> bool {
        self.children.is_empty()
    }
}

/// A finite extensive form game of perfect information; states may be shared
/// (a merged DAG) as long as no cycles exist.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExtensiveFormGame {
    pub n: usize,
    pub states: Vec<EfgState>,
    pub root: usize,
}

impl ExtensiveFormGame {
    /// Check reachability, child indices, player indices, terminal
    /// utilities, and acyclicity.
    pub fn validate(&self) -> Result<()> {
        if self.root >= self.states.len() {
            return Err(Error::Validation {
                field: "root".into(),
                message: format!("state {} does not exist", self.root),
            });
        }
        for (id, s) in self.states.iter().enumerate() {
            if !s.is_terminal() && !s.turn.valid_for(self.n) {
                return Err(Error::Validation {
                    field: format!("states[{id}].turn"),
                    message: format!("player {} out of range for {} players", s.turn.0, self.n),
                });
            }
            for &c in &s.children {
                if c >= self.states.len() {
                    return Err(Error::Validation {
                        field: format!("states[{id}].children"),
                        message: format!("state {c} does not exist"),
                    });
                }
            }
            match &s.utilities {
                Some(u) if s.is_terminal() => {
                    if u.len() != self.n {
                        return Err(Error::Validation {
                            field: format!("states[{id}].utilities"),
                            message: format!("expected {} entries, got {}", self.n, u.len()),
                        });
                    }
                }
                Some(_) => {
                    return Err(Error::Validation {
                        field: format!("states[{id}].utilities"),
                        message: "utilities on a nonterminal state".into(),
                    })
                }
                None if s.is_terminal() => {
                    return Err(Error::Validation {
                        field: format!("states[{id}].utilities"),
                        message: "terminal state without utilities".into(),
                    })
                }
                None => {}
            }
        }
        // DFS: detect cycles, record reachability
        let mut color = vec![0u8; self.states.len()]; // 0 white, 1 on stack, 2 done
        let mut stack = vec![(self.root, 0usize)];
        color[self.root] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            if let Some(&c) = self.states[s].children.get(*next) {
                *next += 1;
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return Err(Error::CycleDetected),
                    _ => {}
                }
            } else {
                color[s] = 2;
                stack.pop();
            }
        }
        if let Some(id) = color.iter().position(|&c| c == 0) {
            return Err(Error::Validation {
                field: format!("states[{id}]"),
                message: "state unreachable from the root".into(),
            });
        }
        Ok(())
    }

    /// States in an order where every child precedes its parent.
    fn topological_postorder(&self) -> Result<Vec<usize>> {
        let mut color = vec![0u8; self.states.len()];
        let mut order = Vec::with_capacity(self.states.len());
        let mut stack = vec![(self.root, 0usize)];
        color[self.root] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            if let Some(&c) = self.states[s].children.get(*next) {
                *next += 1;
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return Err(Error::CycleDetected),
                    _ => {}
                }
            } else {
                color[s] = 2;
                order.push(s);
                stack.pop();
            }
        }
        Ok(order)
    }

    /// Copy shared substructure so every state has exactly one parent.
    pub fn unfold_to_tree(&self) -> ExtensiveFormGame {
        fn copy(
            efg: &ExtensiveFormGame,
            s: usize,
            out: &mut Vec<EfgState>,
        ) -> usize {
            let id = out.len();
            out.push(EfgState {
                turn: efg.states[s].turn,
                children: Vec::new(),
                utilities: efg.states[s].utilities.clone(),
            });
            let children: Vec<usize> = efg.states[s]
                .children
                .iter()
                .map(|&c| copy(efg, c, out))
                .collect();
            out[id].children = children;
            id
        }
        let mut states = Vec::new();
        let root = copy(self, self.root, &mut states);
        ExtensiveFormGame { n: self.n, states, root }
    }
}

/// A pure strategy profile: the selected child for every nonterminal state.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    /// `choice[s]` is the chosen child state of `s` (None for terminals).
    pub choice: Vec<Option<usize>>,
}

impl StrategyProfile {
    /// Follow the profile from `s` to its terminal state.
    pub fn terminal_from(&self, efg: &ExtensiveFormGame, mut s: usize) -> Result<usize> {
        let mut steps = 0;
        while let Some(c) = self.choice[s] {
            s = c;
            steps += 1;
            if steps > efg.states.len() {
                return Err(Error::CycleDetected);
            }
        }
        Ok(s)
    }
}

/// Backward induction result: per-state continuation values and the induced
/// profile.
#[derive(Debug, Clone)]
pub struct Induction {
    pub values: Vec<Vec<f64>>,
    pub profile: StrategyProfile,
}

impl Induction {
    pub fn root_value<'a>(&'a self, efg: &ExtensiveFormGame) -> &'a [f64] {
        &self.values[efg.root]
    }
}

/// Solve an extensive form game by backward induction under the given tie
/// policy. Deterministic: ties resolve to the tie policy's preference and
/// then to the lowest child index.
pub fn backward_induction(efg: &ExtensiveFormGame, tie: &TiePolicy) -> Result<Induction> {
    let order = efg.topological_postorder()?;
    let mut values: Vec<Option<Vec<f64>>> = vec![None; efg.states.len()];
    let mut choice: Vec<Option<usize>> = vec![None; efg.states.len()];
    for s in order {
        let state = &efg.states[s];
        if state.is_terminal() {
            let u = state.utilities.clone().ok_or(Error::Validation {
                field: format!("states[{s}].utilities"),
                message: "terminal state without utilities".into(),
            })?;
            values[s] = Some(u);
            continue;
        }
        let mover = state.turn.idx();
        let mut best: Option<(usize, Vec<f64>)> = None;
        for &c in &state.children {
            let v = values[c].clone().ok_or(Error::CycleDetected)?;
            match &best {
                None => best = Some((c, v)),
                Some((_, incumbent)) => {
                    if tie.better(mover, &v, incumbent) {
                        best = Some((c, v));
                    }
                }
            }
        }
        let (c, v) = best.expect("nonterminal state has children");
        choice[s] = Some(c);
        values[s] = Some(v);
    }
    Ok(Induction {
        values: values.into_iter().map(|v| v.expect("reachable state solved")).collect(),
        profile: StrategyProfile { choice },
    })
}

/// Check the one-shot-deviation inequality at every state: the chosen child's
/// continuation value is weakly best for the mover.
pub fn is_pspe(efg: &ExtensiveFormGame, profile: &StrategyProfile) -> Result<bool> {
    let mut terminal_of: HashMap<usize, usize> = HashMap::new();
    for s in 0..efg.states.len() {
        terminal_of.insert(s, profile.terminal_from(efg, s)?);
    }
    for (s, state) in efg.states.iter().enumerate() {
        if state.is_terminal() {
            continue;
        }
        let mover = state.turn.idx();
        let chosen = profile.choice[s].ok_or(Error::ProfileUndefined)?;
        let chosen_u = efg.states[terminal_of[&chosen]].utilities.as_ref().unwrap()[mover];
        for &c in &state.children {
            let u = efg.states[terminal_of[&c]].utilities.as_ref().unwrap()[mover];
            if u > chosen_u + EPSILON {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A cumulative game converted to extensive form, with the bookkeeping
/// required to map states back to grounded positions.
#[derive(Debug, Clone)]
pub struct EfgConversion {
    pub efg: ExtensiveFormGame,
    /// Grounded position of each state.
    pub positions: Vec<GroundedPosition>,
    /// `actions[s][k]` leads to `efg.states[s].children[k]`.
    pub actions: Vec<Vec<ActionVector>>,
    pub index: HashMap<PositionKey, usize>,
}

/// Enumerate the descendants of `g0`, merging identical grounded positions
/// (same heaps, cumulation, and previous player) into a DAG.
pub fn cg_to_efg(
    game: &CumulativeGame,
    g0: &GroundedPosition,
    node_budget: usize,
) -> Result<EfgConversion> {
    let mut positions: Vec<GroundedPosition> = vec![g0.clone()];
    let mut index: HashMap<PositionKey, usize> = HashMap::new();
    index.insert(g0.key(), 0);
    let mut states: Vec<Option<EfgState>> = vec![None];
    let mut actions: Vec<Vec<ActionVector>> = vec![Vec::new()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let g = positions[s].clone();
        let acts = game.actions(&g);
        if acts.is_empty() {
            states[s] = Some(EfgState::terminal(game.utilities(&g)));
            continue;
        }
        let mut children = Vec::with_capacity(acts.len());
        for a in &acts {
            let child = game.apply_unchecked(&g, a)?;
            let key = child.key();
            let id = match index.get(&key) {
                Some(&id) => id,
                None => {
                    let id = positions.len();
                    if id >= node_budget {
                        return Err(Error::NodeBudgetExceeded { budget: node_budget });
                    }
                    index.insert(key, id);
                    positions.push(child);
                    states.push(None);
                    actions.push(Vec::new());
                    queue.push_back(id);
                    id
                }
            };
            children.push(id);
        }
        states[s] = Some(EfgState::decision(game.current_player(&g), children));
        actions[s] = acts;
    }
    let states: Vec<EfgState> = states.into_iter().map(|s| s.expect("state visited")).collect();
    Ok(EfgConversion {
        efg: ExtensiveFormGame { n: game.n, states, root: 0 },
        positions,
        actions,
        index,
    })
}

/// A strategy profile over grounded positions, either tabulated or given as a
/// rule.
#[derive(Clone)]
pub enum CgProfile {
    Table(HashMap<PositionKey, ActionVector>),
    Rule(Arc<dyn Fn(&CumulativeGame, &GroundedPosition) -> Option<ActionVector> + Send + Sync>),
}

impl std::fmt::Debug for CgProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CgProfile::Table(t) => f.debug_tuple("Table").field(&t.len()).finish(),
            CgProfile::Rule(_) => f.write_str("Rule(..)"),
        }
    }
}


impl CgProfile {
    pub fn action(&self, game: &CumulativeGame, g: &GroundedPosition) -> Option<ActionVector> {
        match self {
            CgProfile::Table(t) => t.get(&g.key()).cloned(),
            CgProfile::Rule(f) => f(game, g),
        }
    }

    /// The greedy rule: always play the lexicographically largest removal.
    pub fn greedy() -> CgProfile {
        CgProfile::Rule(Arc::new(|game, g| game.actions(g).into_iter().min()))
    }
}

/// The result of following a profile from a grounded position to the end.
#[derive(Debug, Clone)]
pub struct PlayedLine {
    pub terminal: GroundedPosition,
    pub line: Vec<ActionVector>,
    /// Per-player row sums of the terminal cumulation.
    pub cumulative: Vec<f64>,
    pub utilities: Vec<f64>,
}

/// Follow `profile` from `g0` until no move remains.
pub fn play_profile(
    game: &CumulativeGame,
    g0: &GroundedPosition,
    profile: &CgProfile,
) -> Result<PlayedLine> {
    let mut g = g0.clone();
    let mut line = Vec::new();
    while !game.is_terminal(&g) {
        if line.len() >= game.move_budget {
            return Err(Error::BudgetExceeded { budget: game.move_budget });
        }
        let a = profile.action(game, &g).ok_or(Error::ProfileUndefined)?;
        g = game.step(&g, &a)?;
        line.push(a);
    }
    let cumulative = g.position.cumulation.row_sums();
    let utilities = game.utilities(&g);
    Ok(PlayedLine { terminal: g, line, cumulative, utilities })
}

/// A solved grounded game: the equilibrium value and its realized line.
#[derive(Debug, Clone)]
pub struct SolvedGame {
    pub value: Vec<f64>,
    pub line: Vec<ActionVector>,
    pub profile: CgProfile,
}

/// Solve a grounded cumulative game directly: memoized backward induction
/// over the merged position DAG.
pub fn solve_grounded(
    game: &CumulativeGame,
    g0: &GroundedPosition,
    tie: &TiePolicy,
    node_budget: usize,
) -> Result<SolvedGame> {
    struct Ctx<'a> {
        game: &'a CumulativeGame,
        tie: &'a TiePolicy,
        node_budget: usize,
        memo: HashMap<PositionKey, (Vec<f64>, Option<ActionVector>)>,
        on_stack: std::collections::HashSet<PositionKey>,
    }
    fn solve(ctx: &mut Ctx, g: &GroundedPosition) -> Result<(Vec<f64>, Option<ActionVector>)> {
        let key = g.key();
        if let Some(hit) = ctx.memo.get(&key) {
            return Ok(hit.clone());
        }
        if !ctx.on_stack.insert(key.clone()) {
            return Err(Error::CycleDetected);
        }
        let acts = ctx.game.actions(g);
        let out = if acts.is_empty() {
            (ctx.game.utilities(g), None)
        } else {
            let mover = ctx.game.current_player(g).idx();
            let mut best: Option<(Vec<f64>, ActionVector)> = None;
            for a in acts {
                let child = ctx.game.apply_unchecked(g, &a)?;
                let (v, _) = solve(ctx, &child)?;
                match &best {
                    None => best = Some((v, a)),
                    Some((incumbent, _)) => {
                        if ctx.tie.better(mover, &v, incumbent) {
                            best = Some((v, a));
                        }
                    }
                }
            }
            let (v, a) = best.expect("nonterminal has actions");
            (v, Some(a))
        };
        ctx.on_stack.remove(&key);
        if ctx.memo.len() >= ctx.node_budget {
            return Err(Error::NodeBudgetExceeded { budget: ctx.node_budget });
        }
        ctx.memo.insert(key, out.clone());
        Ok(out)
    }
    let mut ctx = Ctx {
        game,
        tie,
        node_budget,
        memo: HashMap::new(),
        on_stack: std::collections::HashSet::new(),
    };
    let (value, _) = solve(&mut ctx, g0)?;
    let table: HashMap<PositionKey, ActionVector> = ctx
        .memo
        .iter()
        .filter_map(|(k, (_, a))| a.clone().map(|a| (k.clone(), a)))
        .collect();
    let profile = CgProfile::Table(table);
    let line = play_profile(game, g0, &profile)?.line;
    Ok(SolvedGame { value, line, profile })
}

/// A single-heap cumulative game strategically equivalent to a finite
/// extensive form game, built by preorder numbering.
#[derive(Clone)]
pub struct PreorderEmbedding {
    pub game: CumulativeGame,
    pub start: GroundedPosition,
    /// The tree actually embedded (unfolded, with inserted dummy states).
    pub tree: ExtensiveFormGame,
    /// Preorder number of each tree state; heap size is `Q - q`.
    pub q: Vec<usize>,
    /// Tree states inserted to make all children of a state share a mover.
    pub dummies: Vec<usize>,
}

/// Insert single-child pass-through states so that for every state, all of
/// its nonterminal children share one mover. Returns the new tree and the ids
/// of the inserted dummies.
fn uniform_child_movers(efg: &ExtensiveFormGame) -> (ExtensiveFormGame, Vec<usize>) {
    let mut states = efg.states.clone();
    let mut dummies = Vec::new();
    for s in 0..efg.states.len() {
        let kids = states[s].children.clone();
        let movers: Vec<Player> = kids
            .iter()
            .filter(|&&c| !states[c].is_terminal())
            .map(|&c| states[c].turn)
            .collect();
        let Some(&target) = movers.first() else { continue };
        if movers.iter().all(|&m| m == target) {
            continue;
        }
        for (k, &c) in kids.iter().enumerate() {
            if !states[c].is_terminal() && states[c].turn != target {
                let dummy = states.len();
                states.push(EfgState::decision(target, vec![c]));
                dummies.push(dummy);
                states[s].children[k] = dummy;
            }
        }
    }
    (ExtensiveFormGame { n: efg.n, states, root: efg.root }, dummies)
}

/// Embed a finite extensive form game as a single-heap cumulative game:
/// preorder-number the (unfolded) tree, give state `s` heap size `Q - q(s)`,
/// let actions jump between those sizes, pay every player the removed amount,
/// and read terminal utilities off the shared cumulation.
pub fn efg_to_cg_preorder(efg: &ExtensiveFormGame) -> Result<PreorderEmbedding> {
    efg.validate()?;
    let (tree, dummies) = uniform_child_movers(&efg.unfold_to_tree());
    let q_count = tree.states.len();
    // preorder numbering, children visited in order
    let mut q = vec![usize::MAX; q_count];
    let mut next = 0usize;
    let mut stack = vec![tree.root];
    let mut state_of_q = vec![usize::MAX; q_count];
    while let Some(s) = stack.pop() {
        q[s] = next;
        state_of_q[next] = s;
        next += 1;
        for &c in tree.states[s].children.iter().rev() {
            stack.push(c);
        }
    }
    let cap = q_count; // Q
    // per-heap-size tables: actions, mover, terminal utilities
    let mut action_table: Vec<Vec<u32>> = vec![Vec::new(); cap + 1];
    let mut mover_table: Vec<Player> = vec![Player(1); cap + 1];
    let mut util_table: Vec<Option<Vec<f64>>> = vec![None; cap + 1];
    for s in 0..q_count {
        let x = cap - q[s];
        mover_table[x] = tree.states[s].turn;
        if let Some(u) = &tree.states[s].utilities {
            util_table[x] = Some(u.clone());
        }
        for &c in &tree.states[s].children {
            action_table[x].push((q[c] - q[s]) as u32);
        }
        action_table[x].sort_unstable();
    }
    let n = efg.n;
    let at = action_table;
    let actions: crate::game::ActionFn = Arc::new(move |g: &GroundedPosition| {
        let x = g.position.heaps[0] as usize;
        at.get(x)
            .map(|row| row.iter().map(|&a| ActionVector::removal(1, 0, a)).collect())
            .unwrap_or_default()
    });
    let rewards: crate::game::RewardFn = Arc::new(move |_g: &GroundedPosition, a: &ActionVector| {
        let amount = (-a.delta[0]) as f64;
        let mut r = Matrix::zeros(n, 1);
        for i in 0..n {
            r.set(i, 0, amount);
        }
        r
    });
    let mt = mover_table;
    let turn = TurnFunction::Custom(Arc::new(move |pos: &HeapPosition, prev: Player| {
        mt.get(pos.heaps[0] as usize).copied().unwrap_or(prev)
    }));
    let ut = util_table;
    let utility = UtilityMap::PerHeap(Arc::new(move |i, _h, column: &[f64], _current| {
        // all players share cumulation C = q(terminal state)
        let qv = column[i].round() as usize;
        let x = cap - qv;
        ut.get(x).and_then(|u| u.as_ref()).map(|u| u[i]).unwrap_or(0.0)
    }));
    let game = CumulativeGame {
        n,
        d: 1,
        ruleset: Ruleset {
            actions,
            rewards,
            cumulation_independent: true,
            symmetric: false,
            short: true,
        },
        turn,
        utility,
        move_budget: crate::game::DEFAULT_MOVE_BUDGET,
    };
    let start = GroundedPosition::new(
        HeapPosition::with_zero_cumulation(vec![cap as u32], n),
        Player(n as u8),
    );
    Ok(PreorderEmbedding { game, start, tree, q, dummies })
}

/// A cumulative game with a plain cyclic turn function strategically
/// equivalent to a finite extensive form game.
#[derive(Clone)]
pub struct CyclicEmbedding {
    pub game: CumulativeGame,
    pub start: GroundedPosition,
    /// The cycle-completed tree actually embedded.
    pub tree: ExtensiveFormGame,
    /// Pass-through states inserted during cycle completion.
    pub dummies: Vec<usize>,
}

/// Cycle-complete a tree: insert single-child pass-through states until the
/// mover sequence along every path follows `p -> p mod n + 1` from the root's
/// mover. Terminal states are left where they fall.
pub fn cycle_complete(efg: &ExtensiveFormGame) -> (ExtensiveFormGame, Vec<usize>) {
    let tree = efg.unfold_to_tree();
    let mut states = tree.states.clone();
    let mut dummies = Vec::new();
    let n = tree.n;
    let mut stack = vec![tree.root];
    while let Some(s) = stack.pop() {
        if states[s].is_terminal() {
            continue;
        }
        let p = states[s].turn;
        for k in 0..states[s].children.len() {
            let c = states[s].children[k];
            if !states[c].is_terminal() {
                // splice dummies between s and c until the mover sequence
                // walks the cycle from p to c's mover
                let mut expect = p.cyclic_next(n);
                let mut attach = (s, k);
                while states[c].turn != expect {
                    let dummy = states.len();
                    states.push(EfgState::decision(expect, vec![c]));
                    dummies.push(dummy);
                    states[attach.0].children[attach.1] = dummy;
                    attach = (dummy, 0);
                    expect = expect.cyclic_next(n);
                }
            }
            stack.push(c);
        }
    }
    (ExtensiveFormGame { n, states, root: tree.root }, dummies)
}

/// Embed a finite extensive form game as a cumulative game with a cyclic
/// turn: cycle-complete the tree, assign strictly growing heap sizes level by
/// level, use zero rewards except on moves into terminals, which pay each
/// player that terminal's utility.
pub fn efg_to_cg_cyclic(efg: &ExtensiveFormGame) -> Result<CyclicEmbedding> {
    efg.validate()?;
    let (tree, dummies) = cycle_complete(efg);
    tree.validate()?;
    let n = tree.n;
    // BFS levels; states on level l get heap sizes in a block above level l-1
    let mut level = vec![0usize; tree.states.len()];
    let mut order = vec![tree.root];
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for &c in &tree.states[s].children {
            level[c] = level[s] + 1;
            order.push(c);
        }
    }
    let mut by_level: Vec<Vec<usize>> = Vec::new();
    for &s in &order {
        if by_level.len() <= level[s] {
            by_level.resize(level[s] + 1, Vec::new());
        }
        by_level[level[s]].push(s);
    }
    let mut heap_of = vec![0u32; tree.states.len()];
    let mut next_size = 1u32;
    for block in &by_level {
        for &s in block {
            heap_of[s] = next_size;
            next_size += 1;
        }
    }
    let max_size = next_size as usize;
    let mut action_table: Vec<Vec<u32>> = vec![Vec::new(); max_size];
    let mut reward_table: Vec<HashMap<u32, Vec<f64>>> = vec![HashMap::new(); max_size];
    for s in 0..tree.states.len() {
        let x = heap_of[s] as usize;
        for &c in &tree.states[s].children {
            let growth = heap_of[c] - heap_of[s];
            action_table[x].push(growth);
            if let Some(u) = &tree.states[c].utilities {
                reward_table[x].insert(growth, u.clone());
            }
        }
        action_table[x].sort_unstable();
    }
    let at = action_table;
    let actions: crate::game::ActionFn = Arc::new(move |g: &GroundedPosition| {
        let x = g.position.heaps[0] as usize;
        at.get(x)
            .map(|row| {
                row.iter()
                    .map(|&a| ActionVector::new(vec![a as i64]))
                    .collect()
            })
            .unwrap_or_default()
    });
    let rt = reward_table;
    let rewards: crate::game::RewardFn = Arc::new(move |g: &GroundedPosition, a: &ActionVector| {
        let x = g.position.heaps[0] as usize;
        let mut r = Matrix::zeros(n, 1);
        if let Some(u) = rt.get(x).and_then(|m| m.get(&(a.delta[0] as u32))) {
            for i in 0..n {
                r.set(i, 0, u[i]);
            }
        }
        r
    });
    let game = CumulativeGame {
        n,
        d: 1,
        ruleset: Ruleset {
            actions,
            rewards,
            cumulation_independent: true,
            symmetric: false,
            short: true,
        },
        turn: TurnFunction::Cyclic,
        utility: UtilityMap::Identity,
        move_budget: crate::game::DEFAULT_MOVE_BUDGET,
    };
    // previous player chosen so the cyclic turn hands the root to its mover
    let root_mover = if tree.states[tree.root].is_terminal() {
        Player(1)
    } else {
        tree.states[tree.root].turn
    };
    let prev = Player(if root_mover.0 == 1 { n as u8 } else { root_mover.0 - 1 });
    // A terminal root has no incoming action to carry its payoff, so the
    // start cumulation holds it instead
    let mut cumulation = Matrix::zeros(n, 1);
    if let Some(u) = &tree.states[tree.root].utilities {
        for i in 0..n {
            cumulation.set(i, 0, u[i]);
        }
    }
    let start = GroundedPosition::new(
        HeapPosition {
            heaps: vec![heap_of[tree.root]],
            cumulation,
        },
        Player(prev.0),
    );
    Ok(CyclicEmbedding { game, start, tree, dummies })
}

/// Remove decision states with exactly one child by splicing them out.
pub fn reduce_single_options(efg: &ExtensiveFormGame) -> ExtensiveFormGame {
    fn resolve(efg: &ExtensiveFormGame, mut s: usize) -> usize {
        let mut hops = 0;
        while !efg.states[s].is_terminal() && efg.states[s].children.len() == 1 {
            s = efg.states[s].children[0];
            hops += 1;
            if hops > efg.states.len() {
                break;
            }
        }
        s
    }
    let root = resolve(efg, efg.root);
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut stack = vec![root];
    while let Some(s) = stack.pop() {
        if map.contains_key(&s) {
            continue;
        }
        map.insert(s, states.len());
        states.push(EfgState {
            turn: efg.states[s].turn,
            children: Vec::new(),
            utilities: efg.states[s].utilities.clone(),
        });
        for &c in &efg.states[s].children {
            stack.push(resolve(efg, c));
        }
    }
    let mut out = ExtensiveFormGame { n: efg.n, states, root: map[&root] };
    for (&old, &new) in &map {
        out.states[new].children = efg.states[old]
            .children
            .iter()
            .map(|&c| map[&resolve(efg, c)])
            .collect();
    }
    out
}
