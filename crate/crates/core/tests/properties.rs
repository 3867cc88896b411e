mod common;

use std::collections::BTreeSet;

use chainplan::{
    bfs_plan_exists, dtg, extract_message, is_admissible, parse_dimacs, parse_problem, reduce, satisficing_index,
    solves, synthesize, validate_chain, write_problem, Assignment, CnfFormula, Literal, SearchLimits, VariableId,
    Variant,
};
use common::{first_satisfying_bit, satisfies};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(Variant::ALL.to_vec())
}

fn formula(max_n: usize, max_k: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        let literal = (1..=n, any::<bool>()).prop_map(|(var, positive)| Literal { var, positive });
        prop::collection::vec(prop::collection::vec(literal, 0..=3), k)
            .prop_map(move |clauses| CnfFormula::new(n, clauses).unwrap())
    })
}

fn formula_and_assignment(max_n: usize, max_k: usize) -> impl Strategy<Value = (CnfFormula, Assignment)> {
    formula(max_n, max_k).prop_flat_map(|f| {
        let n = f.num_vars();
        (Just(f), prop::collection::vec(any::<bool>(), n).prop_map(Assignment::new))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimacs_round_trip(f in formula(6, 6)) {
        prop_assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn evaluation_agrees_with_satisficing_indices((f, sigma) in formula_and_assignment(6, 6)) {
        let n = f.num_vars();
        let all_within = (1..=f.num_clauses()).all(|i| satisficing_index(&f, &sigma, i) <= n);
        prop_assert_eq!(f.evaluate(&sigma), all_within);
        prop_assert_eq!(f.evaluate(&sigma), satisfies(&f, &sigma));
        for i in 1..=f.num_clauses() {
            prop_assert_eq!(satisficing_index(&f, &sigma, i), first_satisfying_bit(&f, &sigma, i));
        }
    }

    #[test]
    fn synthesis_round_trip((f, sigma) in formula_and_assignment(5, 5), v in variant()) {
        let p = reduce(&f, v);
        let plan = synthesize(&f, &sigma, v).unwrap();
        prop_assert!(is_admissible(&p, &plan, v).unwrap());
        prop_assert_eq!(extract_message(&p, &plan).unwrap(), sigma.clone());
        prop_assert_eq!(solves(&p, &plan), satisfies(&f, &sigma));
    }

    #[test]
    fn reductions_are_chains_and_deterministic(f in formula(4, 4), v in variant()) {
        let p = reduce(&f, v);
        prop_assert!(validate_chain(&p));
        let text = write_problem(&p);
        prop_assert_eq!(&write_problem(&reduce(&f, v)), &text);
        let back = parse_problem(&text).unwrap();
        prop_assert_eq!(&back, &p);
    }

    #[test]
    fn dtg_edges_match_operator_pairs(f in formula(3, 3), v in variant()) {
        let p = reduce(&f, v);
        for i in 0..p.num_variables() {
            let var = VariableId(i);
            let pairs: BTreeSet<(u8, u8)> = p
                .operators_for(var)
                .map(|op| (op.pre.get(var).expect("reduction operators bind their own variable"), op.post.value))
                .collect();
            prop_assert_eq!(dtg(&p, var).edges.len(), pairs.len(), "{}", p.variable(var).name);
        }
    }

    #[test]
    fn walks_stay_in_domain(f in formula(3, 3), v in variant(), seed in any::<u64>()) {
        let p = reduce(&f, v);
        let layout = chainplan::Layout::new(v, f.num_vars(), f.num_clauses());
        let mut rng = StdRng::seed_from_u64(seed);
        common::random_walk(&mut rng, &p, &layout, 200, |state, _| {
            p.check_state(state).map_err(|e| e.to_string())
        })
        .map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn search_is_deterministic_and_bounded(f in formula(1, 2), v in variant()) {
        let p = reduce(&f, v);
        let a = bfs_plan_exists(&p, SearchLimits::default());
        let b = bfs_plan_exists(&p, SearchLimits::default());
        prop_assert_eq!(&a.verdict, &b.verdict);
        prop_assert_eq!(
            (a.stats.expanded, a.stats.visited, a.stats.frontier_peak),
            (b.stats.expanded, b.stats.visited, b.stats.frontier_peak)
        );
        prop_assert!(a.stats.visited as u128 <= p.state_space_size());
        if let chainplan::Verdict::Solvable(plan) = &a.verdict {
            prop_assert!(solves(&p, plan));
            prop_assert!(is_admissible(&p, plan, v).unwrap());
        }
        prop_assert_eq!(matches!(a.verdict, chainplan::Verdict::Solvable(_)), (0..2u64).any(|i| {
            f.evaluate(&Assignment::from_index(1, i))
        }));
    }
}
