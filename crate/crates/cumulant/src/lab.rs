//! Empirical instruments: a deliberately naive equilibrium oracle, the
//! zero-sum versus self-interest critical-set census, Pareto-efficiency
//! scans, and greedy-play reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::efg::{TieMode, TiePolicy};
use crate::error::{Error, Result};
use crate::game::{ActionVector, CumulativeGame, GroundedPosition, EPSILON};
use crate::outcome::{outcome_si_symmetric, outcome_zs_symmetric};

/// Naive equilibrium values and realized line: plain recursion over the full
/// grounded tree with no memoization, so it shares no code path with the
/// dynamic programs it is used to check.
pub fn brute_force_pspe(
    game: &CumulativeGame,
    g0: &GroundedPosition,
    tie: &TiePolicy,
    node_budget: usize,
) -> Result<(Vec<f64>, Vec<ActionVector>)> {
    fn rec(
        game: &CumulativeGame,
        g: &GroundedPosition,
        tie: &TiePolicy,
        nodes: &mut usize,
        budget: usize,
    ) -> Result<(Vec<f64>, Vec<ActionVector>)> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::NodeBudgetExceeded { budget });
        }
        let acts = game.actions(g);
        if acts.is_empty() {
            return Ok((game.utilities(g), Vec::new()));
        }
        let mover = game.current_player(g).idx();
        let mut best: Option<(Vec<f64>, Vec<ActionVector>)> = None;
        for a in acts {
            let child = game.apply_unchecked(g, &a)?;
            let (v, mut line) = rec(game, &child, tie, nodes, budget)?;
            line.insert(0, a);
            match &best {
                None => best = Some((v, line)),
                Some((incumbent, _)) => {
                    if tie.better(mover, &v, incumbent) {
                        best = Some((v, line));
                    }
                }
            }
        }
        Ok(best.expect("nonterminal has actions"))
    }
    let mut nodes = 0;
    rec(game, g0, tie, &mut nodes, node_budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSetScanParams {
    pub max_value: u32,
    /// Subset sizes enumerated, e.g. `[2, 3]`.
    pub sizes: Vec<usize>,
    pub heap_bound: u32,
    pub mode: TieMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSet {
    pub set: Vec<u32>,
    /// Smallest heap size where the zero-sum and self-interest optimal
    /// first-action sets differ.
    pub first_divergence: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalSetReport {
    pub params: CriticalSetScanParams,
    /// Sorted lexicographically by set.
    pub critical: Vec<CriticalSet>,
    pub count: usize,
}

/// First heap size (up to the bound) where the zero-sum outcome and the
/// self-interest outcome difference `o1 - o2` part ways, if any.
pub fn first_divergence(set: &[u32], mode: TieMode, heap_bound: u32) -> Option<u32> {
    let zs = outcome_zs_symmetric(set, heap_bound);
    let si = outcome_si_symmetric(set, mode, heap_bound);
    (0..=heap_bound).find(|&x| {
        let (o1, o2) = si.rows[x as usize];
        zs.rows[x as usize] != o1 - o2
    })
}

fn subsets_of_size(max_value: u32, size: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, max_value: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if size == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=max_value {
            cur.push(v);
            rec(v + 1, max_value, size - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, max_value, size, &mut Vec::new(), &mut out);
    out
}

/// Census of critical subtraction sets: enumerate every subset of
/// `{1..=max_value}` of the requested sizes and record those whose zero-sum
/// and self-interest optimal first actions diverge at some heap within the
/// bound. Sharded over sets with a deterministic sorted merge. Sets already
/// present in `resume` are trusted and not recomputed.
pub fn critical_set_scan(
    params: CriticalSetScanParams,
    resume: Option<&CriticalSetReport>,
) -> CriticalSetReport {
    let mut candidates: Vec<Vec<u32>> = params
        .sizes
        .iter()
        .flat_map(|&k| subsets_of_size(params.max_value, k))
        .collect();
    candidates.sort();
    let done: std::collections::HashSet<Vec<u32>> = resume
        .filter(|r| {
            r.params.mode == params.mode && r.params.heap_bound == params.heap_bound
        })
        .map(|r| r.critical.iter().map(|c| c.set.clone()).collect())
        .unwrap_or_default();
    let mut critical: Vec<CriticalSet> = candidates
        .par_iter()
        .filter(|set| !done.contains(*set))
        .filter_map(|set| {
            first_divergence(set, params.mode, params.heap_bound).map(|x| CriticalSet {
                set: set.clone(),
                first_divergence: x,
            })
        })
        .collect();
    critical.extend(done.iter().map(|s| {
        resume
            .unwrap()
            .critical
            .iter()
            .find(|c| &c.set == s)
            .expect("resumed set present")
            .clone()
    }));
    critical.sort_by(|a, b| a.set.cmp(&b.set));
    critical.dedup();
    let count = critical.len();
    CriticalSetReport { params, critical, count }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoReport {
    pub pspe_value: Vec<f64>,
    /// A legal play line whose terminal utilities weakly dominate the
    /// equilibrium in every coordinate and strictly in at least one.
    pub dominating_line: Option<Vec<Vec<i64>>>,
    pub dominating_utilities: Option<Vec<f64>>,
}

/// Compute the equilibrium value and search every legal play line for a
/// Pareto-dominating terminal allocation. Deterministic: the first dominating
/// line in depth-first lexicographic action order is reported.
pub fn pareto_scan(
    game: &CumulativeGame,
    g0: &GroundedPosition,
    tie: &TiePolicy,
    node_budget: usize,
) -> Result<ParetoReport> {
    let solved = crate::efg::solve_grounded(game, g0, tie, node_budget)?;
    let pspe = solved.value.clone();
    fn dominates(candidate: &[f64], base: &[f64]) -> bool {
        candidate.iter().zip(base).all(|(c, b)| *c >= b - EPSILON)
            && candidate.iter().zip(base).any(|(c, b)| *c > b + EPSILON)
    }
    fn dfs(
        game: &CumulativeGame,
        g: &GroundedPosition,
        base: &[f64],
        line: &mut Vec<ActionVector>,
        nodes: &mut usize,
        budget: usize,
    ) -> Result<Option<(Vec<ActionVector>, Vec<f64>)>> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::NodeBudgetExceeded { budget });
        }
        let acts = game.actions(g);
        if acts.is_empty() {
            let u = game.utilities(g);
            if dominates(&u, base) {
                return Ok(Some((line.clone(), u)));
            }
            return Ok(None);
        }
        // visit smallest removals first so modest, cooperative lines are
        // reported before aggressive ones
        for a in acts.into_iter().rev() {
            let child = game.apply_unchecked(g, &a)?;
            line.push(a);
            if let Some(hit) = dfs(game, &child, base, line, nodes, budget)? {
                return Ok(Some(hit));
            }
            line.pop();
        }
        Ok(None)
    }
    let mut nodes = 0;
    let hit = dfs(game, g0, &pspe, &mut Vec::new(), &mut nodes, node_budget)?;
    let (dominating_line, dominating_utilities) = match hit {
        Some((line, u)) => (
            Some(line.into_iter().map(|a| a.delta).collect()),
            Some(u),
        ),
        None => (None, None),
    };
    Ok(ParetoReport { pspe_value: pspe, dominating_line, dominating_utilities })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyReportEntry {
    pub set: Vec<u32>,
    /// Largest heap within the bound where taking the biggest available
    /// amount is not an optimal first action; `None` if greedy is always
    /// optimal in range.
    pub largest_nonoptimal_heap: Option<u32>,
}

/// For each symmetric subtraction set with elements up to `max_value`, report
/// where greedy play last disagrees with the self-interest optimum.
pub fn greedy_report(
    max_value: u32,
    sizes: &[usize],
    mode: TieMode,
    heap_bound: u32,
) -> Vec<GreedyReportEntry> {
    let mut sets: Vec<Vec<u32>> = sizes
        .iter()
        .flat_map(|&k| subsets_of_size(max_value, k))
        .collect();
    sets.sort();
    sets.par_iter()
        .map(|set| {
            let si = outcome_si_symmetric(set, mode, heap_bound);
            let mut last = None;
            for x in 1..=heap_bound {
                let Some(&greedy) = set.iter().filter(|&&a| a <= x).max() else {
                    continue;
                };
                if !si.indifference_set(x).contains(&greedy) {
                    last = Some(x);
                }
            }
            GreedyReportEntry { set: set.clone(), largest_nonoptimal_heap: last }
        })
        .collect()
}
