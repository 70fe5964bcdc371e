mod common;

use frugal_core::format::{parse_election, write_election};
use frugal_core::reductions::realize_scores;
use frugal_core::rules::co_winners;
use frugal_core::solvers::{solve_exact, validate_witness, Limits};
use frugal_core::{
    build_instance, classify_vulnerable, compute_winner, majority_graph, normalize_score_vector, positional_scores,
    Election, Price, Ranking, Rule, Variant, Vote, VulnerabilityLabel,
};
use proptest::prelude::*;

use common::*;

fn ranking(m: usize) -> impl Strategy<Value = Ranking> {
    Just((0..m).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |r| Ranking::new(r, m).unwrap())
}

/// Elections over `2..=max_m` candidates with up to `max_n` votes of weight
/// up to `max_w`.
fn elections(max_m: usize, max_n: usize, max_w: u64) -> impl Strategy<Value = Election> {
    (2..=max_m).prop_flat_map(move |m| {
        (prop::collection::vec((ranking(m), 1..=max_w), 1..=max_n), ranking(m)).prop_map(move |(votes, tb)| {
            let votes = votes.into_iter().map(|(r, w)| Vote::weighted(r, w)).collect();
            election(m, tb.into_vec(), votes)
        })
    })
}

fn election_and_rule(max_m: usize, max_n: usize, max_w: u64) -> impl Strategy<Value = (Election, Rule)> {
    elections(max_m, max_n, max_w).prop_flat_map(|e| {
        let rules = all_rules(e.num_candidates());
        (Just(e), prop::sample::select(rules))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weights_behave_like_copies((e, rule) in election_and_rule(4, 4, 3)) {
        prop_assert_eq!(compute_winner(&e, &rule).unwrap(), compute_winner(&e.expanded(), &rule).unwrap());
    }

    #[test]
    fn margins_are_antisymmetric(e in elections(5, 6, 4)) {
        let d = majority_graph(&e);
        let m = e.num_candidates();
        for x in 0..m {
            prop_assert_eq!(d.get(x, x), 0);
            for y in 0..m {
                prop_assert_eq!(d.get(x, y), -d.get(y, x));
            }
        }
    }

    #[test]
    fn winner_is_best_co_winner_by_tiebreak((e, rule) in election_and_rule(4, 5, 2)) {
        let w = compute_winner(&e, &rule).unwrap();
        let co = co_winners(&e, &rule);
        prop_assert!(co.contains(&w));
        prop_assert!(co.iter().all(|&c| c == w || e.tiebreak_prefers(w, c)));
        if let Some(vector) = rule.score_vector(e.num_candidates()) {
            // Independent recomputation for positional rules.
            let s = positional_scores(&e, &vector).unwrap();
            let best = *s.iter().max().unwrap();
            let tied: Vec<usize> = (0..s.len()).filter(|&c| s[c] == best).collect();
            prop_assert_eq!(co, tied);
        }
    }

    #[test]
    fn scoring_is_affine_invariant(
        e in elections(4, 5, 2),
        gaps in prop::collection::vec(0i64..4, 3),
        scale in 1i64..4,
        offset in -5i64..5,
    ) {
        let m = e.num_candidates();
        let mut v = vec![0i64; m];
        for i in (0..m - 1).rev() {
            v[i] = v[i + 1] + gaps[i % gaps.len()];
        }
        v[0] += 1;
        let shifted: Vec<i64> = v.iter().map(|x| scale * x + offset).collect();
        let w = compute_winner(&e, &Rule::Scoring(v.clone())).unwrap();
        prop_assert_eq!(w, compute_winner(&e, &Rule::Scoring(shifted)).unwrap());
        prop_assert_eq!(w, compute_winner(&e, &Rule::Scoring(normalize_score_vector(&v).unwrap())).unwrap());
    }

    #[test]
    fn named_rules_match_their_vectors(e in elections(5, 5, 2)) {
        let m = e.num_candidates();
        let borda: Vec<i64> = (0..m as i64).rev().collect();
        let winner = |r: Rule| compute_winner(&e, &r).unwrap();
        prop_assert_eq!(winner(Rule::Plurality), winner(Rule::KApproval(1)));
        prop_assert_eq!(winner(Rule::Veto), winner(Rule::KVeto(1)));
        prop_assert_eq!(winner(Rule::Borda), winner(Rule::Scoring(borda)));
    }

    #[test]
    fn labels_are_sound_and_order_stable((e, rule) in election_and_rule(4, 5, 2), target in 0usize..4, rot in 0usize..5) {
        let m = e.num_candidates();
        let target = target % m;
        let w = compute_winner(&e, &rule).unwrap();
        let labels = classify_vulnerable(&e, &rule, target).unwrap();
        for (v, label) in e.votes().iter().zip(&labels) {
            let expect = w != target && v.ranking.prefers(target, w);
            prop_assert_eq!(*label == VulnerabilityLabel::Vulnerable, expect);
        }
        let n = e.votes().len();
        let mut votes = e.votes().to_vec();
        votes.rotate_left(rot % n);
        let rotated = classify_vulnerable(&e.with_votes(votes), &rule, target).unwrap();
        let mut expect = labels.clone();
        expect.rotate_left(rot % n);
        prop_assert_eq!(rotated, expect);
    }

    #[test]
    fn frugal_witnesses_touch_only_vulnerable_votes((e, rule) in election_and_rule(3, 4, 1), target in 0usize..3) {
        let target = target % e.num_candidates();
        let inst = build_instance(e, rule, target, None, Variant::Frugal).unwrap();
        let sol = solve_exact(&inst, Limits::default()).unwrap();
        if sol.is_yes() {
            prop_assert!(sol.witness.iter().all(|(i, _)| inst.is_vulnerable(*i)));
            prop_assert_eq!(validate_witness(&inst, &sol.witness), Ok(sol.cost));
        }
    }

    #[test]
    fn larger_budgets_never_hurt(
        (e, rule) in election_and_rule(3, 4, 1),
        prices in prop::collection::vec(prop_oneof![4 => (0u64..3).prop_map(Price::Finite), 1 => Just(Price::Infinite)], 4),
        target in 0usize..3,
        budget in 0u64..3,
    ) {
        let target = target % e.num_candidates();
        let per_vote: Vec<Option<Price>> = prices.iter().take(e.votes().len()).map(|&p| Some(p)).collect();
        let e = with_prices(&e, &per_vote);
        let solve = |b| {
            let inst = build_instance(e.clone(), rule.clone(), target, Some(b), Variant::DollarNonuniform).unwrap();
            solve_exact(&inst, Limits::default()).unwrap()
        };
        let (low, high) = (solve(budget), solve(budget + 1));
        prop_assert!(!low.is_yes() || high.is_yes());
        prop_assert!(low.cost <= budget);
    }

    #[test]
    fn election_documents_round_trip(e in elections(5, 6, 3), prices in prop::collection::vec(prop::option::of(0u64..5), 6)) {
        let per_vote: Vec<Option<Price>> = prices.iter().take(e.votes().len()).map(|p| p.map(Price::Finite)).collect();
        let e = with_prices(&e, &per_vote);
        let text = write_election(&e);
        let back = parse_election(&text).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(write_election(&back), text);
    }

    #[test]
    fn gadget_hits_every_offset(
        m in 3usize..6,
        offsets in prop::collection::vec(-3i64..4, 1..4),
        margin in 0i64..3,
    ) {
        let k = offsets.len().min(m - 1);
        let named: Vec<(usize, i64)> = offsets.iter().take(k).enumerate().map(|(c, &x)| (c, x)).collect();
        let dummies: Vec<usize> = (k..m).collect();
        let vector: Vec<i64> = (0..m as i64).rev().collect();
        let r = realize_scores(m, &named, &dummies, &vector, margin).unwrap();
        let names = (0..m).map(|i| format!("c{i}")).collect();
        let e = Election::with_possibly_no_votes(names, None, r.votes.into_iter().map(Vote::new).collect()).unwrap();
        let s = positional_scores(&e, &vector).unwrap();
        for &(c, x) in &named {
            prop_assert_eq!(s[c], r.lambda + x);
        }
        for &d in &dummies {
            prop_assert!(r.lambda - s[d] >= margin);
        }
    }
}
