//! Shared helpers for integration tests: seeded random games, random trees,
//! and an exhaustive pure-profile equilibrium oracle for small trees.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cumulant::efg::{EfgState, ExtensiveFormGame, StrategyProfile};
use cumulant::game::{CumulativeGame, GroundedPosition, HeapPosition, Matrix, Player};
use cumulant::rulesets::{build_game, RulesetSpec, UtilitySpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_set(rng: &mut ChaCha8Rng, max_element: u32) -> Vec<u32> {
    let size = rng.gen_range(1..=3);
    let mut set: Vec<u32> = (0..size).map(|_| rng.gen_range(1..=max_element)).collect();
    set.sort_unstable();
    set.dedup();
    set
}

/// A random heap-size dynamic squirrel game: per-player subtraction sets,
/// identity utility, cyclic turn.
pub fn random_subtraction_game(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: usize,
    max_element: u32,
) -> CumulativeGame {
    let sets: Vec<Vec<u32>> = (0..n).map(|_| random_set(rng, max_element)).collect();
    build_game(
        &RulesetSpec::FixedSubtraction { sets },
        &UtilitySpec::identity(),
        n,
        d,
    )
    .expect("random spec is valid")
}

pub fn grounded(heaps: Vec<u32>, n: usize, prev: u8) -> GroundedPosition {
    GroundedPosition::new(HeapPosition::with_zero_cumulation(heaps, n), Player(prev))
}

#[allow(dead_code)]
pub fn grounded_with(heaps: Vec<u32>, cumulation: Matrix, prev: u8) -> GroundedPosition {
    GroundedPosition::new(HeapPosition::new(heaps, cumulation).unwrap(), Player(prev))
}

/// Random tree with bounded depth/branching; utilities are small integers so
/// ties actually happen.
pub fn random_tree(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_depth: usize,
    max_branch: usize,
    max_states: usize,
) -> ExtensiveFormGame {
    fn grow(
        rng: &mut ChaCha8Rng,
        n: usize,
        depth: usize,
        max_branch: usize,
        max_states: usize,
        states: &mut Vec<EfgState>,
    ) -> usize {
        let id = states.len();
        let terminal = depth == 0 || states.len() + max_branch > max_states || rng.gen_bool(0.3);
        if terminal {
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-3..=3) as f64).collect();
            states.push(EfgState::terminal(u));
            return id;
        }
        let turn = Player(rng.gen_range(1..=n as u8));
        states.push(EfgState::decision(turn, Vec::new()));
        let branch = rng.gen_range(1..=max_branch);
        let children: Vec<usize> = (0..branch)
            .map(|_| grow(rng, n, depth - 1, max_branch, max_states, states))
            .collect();
        states[id].children = children;
        id
    }
    let mut states = Vec::new();
    let root = grow(rng, n, max_depth, max_branch, max_states, &mut states);
    // ensure the root is a decision state often enough; a lone terminal is
    // still a legal game
    ExtensiveFormGame { n, states, root }
}

/// Every pure strategy profile satisfying the one-shot-deviation inequality,
/// found by brute enumeration. Only usable on small trees.
#[allow(dead_code)]
pub fn enumerate_pspe_values(efg: &ExtensiveFormGame) -> Vec<Vec<f64>> {
    let nonterminals: Vec<usize> = (0..efg.states.len())
        .filter(|&s| !efg.states[s].is_terminal())
        .collect();
    let mut values = Vec::new();
    let mut choice_ix = vec![0usize; nonterminals.len()];
    loop {
        let mut choice = vec![None; efg.states.len()];
        for (k, &s) in nonterminals.iter().enumerate() {
            choice[s] = Some(efg.states[s].children[choice_ix[k]]);
        }
        let profile = StrategyProfile { choice };
        if cumulant::efg::is_pspe(efg, &profile).unwrap() {
            let t = profile.terminal_from(efg, efg.root).unwrap();
            values.push(efg.states[t].utilities.clone().unwrap());
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == nonterminals.len() {
                return values;
            }
            choice_ix[k] += 1;
            if choice_ix[k] < efg.states[nonterminals[k]].children.len() {
                break;
            }
            choice_ix[k] = 0;
            k += 1;
        }
    }
}
