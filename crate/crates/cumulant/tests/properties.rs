//! Randomized properties checked with proptest shrinking.

mod common;

use common::*;

use cumulant::algebra::{negate, np_outcome_classes, NpPosition};
use cumulant::doc::{parse_document, to_json, Document, GameDoc};
use cumulant::efg::{backward_induction, cg_to_efg, is_pspe, play_profile, solve_grounded, CgProfile, TieMode, TiePolicy};
use cumulant::outcome::outcome_zs_symmetric;
use cumulant::rulesets::{build_game, RulesetSpec, UtilitySpec};

use proptest::prelude::*;
use rand::Rng as _;

fn subtraction_set() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::btree_set(1u32..=9, 1..=3).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The optimal symmetric zero-sum score is never negative: passing up
    /// the move is always available in the recursion.
    #[test]
    fn zs_outcome_nonnegative(set in subtraction_set(), x_max in 0u32..=60) {
        let table = outcome_zs_symmetric(&set, x_max);
        prop_assert!(table.rows.iter().all(|&v| v >= 0));
    }

    /// Negation swaps the L and R outcome classes and fixes P and N.
    #[test]
    fn negate_is_an_involution(
        left in subtraction_set(),
        right in subtraction_set(),
        x in 0u32..=40,
    ) {
        let g = NpPosition { heap: x, left_set: left.clone(), right_set: right.clone() };
        prop_assert_eq!(negate(&negate(&g)), g);
        use cumulant::algebra::NpClass::*;
        let fwd = np_outcome_classes(&left, &right, x).classes[x as usize];
        let bwd = np_outcome_classes(&right, &left, x).classes[x as usize];
        let mirrored = match fwd { L => R, R => L, other => other };
        prop_assert_eq!(bwd, mirrored);
    }

    /// Backward induction returns a profile that survives one-shot
    /// deviations, and its value appears among the exhaustively enumerated
    /// equilibrium values.
    #[test]
    fn induction_is_an_equilibrium(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let efg = random_tree(&mut r, n, 3, 3, 10);
        let tie = TiePolicy::antagonistic();
        let ind = backward_induction(&efg, &tie).unwrap();
        prop_assert!(is_pspe(&efg, &ind.profile).unwrap());
        let value = ind.root_value(&efg).to_vec();
        let all = enumerate_pspe_values(&efg);
        prop_assert!(all.contains(&value), "{:?} not in {:?}", value, all);
    }

    /// Replaying any profile reports cumulative totals equal to the
    /// terminal position's cumulation row sums.
    #[test]
    fn replay_totals_match_terminal_cumulation(
        set in subtraction_set(),
        x in 0u32..=25,
        prev in 1u8..=2,
    ) {
        let game = build_game(
            &RulesetSpec::fixed_symmetric(set),
            &UtilitySpec::identity(),
            2,
            1,
        ).unwrap();
        let played = play_profile(&game, &grounded(vec![x], 2, prev), &CgProfile::greedy()).unwrap();
        prop_assert_eq!(&played.cumulative, &played.terminal.position.cumulation.row_sums());
        prop_assert_eq!(&played.cumulative, &played.utilities);
    }

    /// Serializing a parsed game document and parsing it again is lossless.
    #[test]
    fn game_documents_round_trip(
        sets in proptest::collection::vec(subtraction_set(), 1..=2),
        heaps in proptest::collection::vec(0u32..=10, 1..=2),
        prev in 1u8..=2,
    ) {
        let doc = Document::CumulativeGame(GameDoc::new(
            RulesetSpec::FixedSubtraction { sets },
            UtilitySpec::identity(),
            2,
            heaps,
            None,
            prev,
        ));
        let text = to_json(&doc).unwrap();
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }

    /// Solving the same grounded position twice, and solving it through the
    /// tree conversion, picks the same line: tie-breaking is deterministic.
    #[test]
    fn tie_breaking_is_deterministic(seed in 0u64..10_000, mode in prop_oneof![
        Just(TieMode::Antagonistic),
        Just(TieMode::Friendly),
    ]) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let game = random_subtraction_game(&mut r, n, 1, 6);
        let g0 = grounded(vec![r.gen_range(0..=10)], n, r.gen_range(1..=n as u8));
        let tie = TiePolicy { mode, preferences: None };
        let a = solve_grounded(&game, &g0, &tie, 100_000).unwrap();
        let b = solve_grounded(&game, &g0, &tie, 100_000).unwrap();
        prop_assert_eq!(&a.line, &b.line);
        let conv = cg_to_efg(&game, &g0, 100_000).unwrap();
        let value = backward_induction(&conv.efg, &tie).unwrap().root_value(&conv.efg).to_vec();
        prop_assert_eq!(a.value, value);
    }
}
