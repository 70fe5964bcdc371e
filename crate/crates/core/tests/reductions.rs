use frugal_core::election::Ranking;
use frugal_core::oracles::{solve_cm, solve_partition, solve_x3c, verify_reduction, CheckOutcome};
use frugal_core::reductions::*;
use frugal_core::rules::co_winners;
use frugal_core::solvers::{solve_exact, validate_witness, Limits};
use frugal_core::{compute_winner, positional_scores, Election, Error, Rule, Vote};
use num_rational::Ratio;

fn x3c(n: usize, sets: &[[&str; 3]]) -> X3cInstance {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    X3cInstance::from_labels(&refs, sets).unwrap()
}

fn half(w: &[u64]) -> PartitionInstance {
    PartitionInstance::half(w.to_vec()).unwrap()
}

fn quarter(w: &[u64]) -> PartitionInstance {
    PartitionInstance::quarter(w.to_vec()).unwrap()
}

fn wide() -> Limits {
    Limits {
        max_candidates: 4,
        max_changeable: 8,
    }
}

fn winner_after(out: &ReductionOutput, sol: &SourceSolution) -> usize {
    let w = out.forward_witness(sol).unwrap();
    validate_witness(&out.instance, &w).unwrap();
    compute_winner(&out.instance.apply(&w), out.instance.rule()).unwrap()
}

fn exact_yes(out: &ReductionOutput) -> bool {
    solve_exact(&out.instance, wide()).unwrap().is_yes()
}

fn relations_hold(out: &ReductionOutput) {
    let e = out.instance.election();
    for r in &out.certificate.relations {
        assert_eq!(r.check(e, out.instance.rule()), Ok(()), "{}", r.describe(e));
    }
}

#[test]
fn gadget_examples() {
    let borda = [3, 2, 1, 0];
    let scores = |named: &[(usize, i64)], dummies: &[usize], vector: &[i64]| {
        let r = realize_scores(vector.len(), named, dummies, vector, 1).unwrap();
        let names = (0..vector.len()).map(|i| format!("c{i}")).collect();
        let e = Election::with_possibly_no_votes(names, None, r.votes.into_iter().map(Vote::new).collect()).unwrap();
        (positional_scores(&e, vector).unwrap(), r.lambda)
    };
    let (s, lambda) = scores(&[(0, 0), (1, 0)], &[2, 3], &borda);
    assert_eq!((s[0], s[1]), (lambda, lambda));
    assert!(s[2] < lambda && s[3] < lambda);
    let (s, _) = scores(&[(0, 1), (1, 0), (2, 0)], &[3], &borda);
    assert_eq!(s[0] - s[1], 1);
    let (s, _) = scores(&[(0, -2), (1, 3)], &[2, 3, 4], &[3, 3, 2, 0, 0]);
    assert_eq!(s[0] - s[1], -5);
}

#[test]
fn borda_single_set() {
    let src = x3c(3, &[["1", "2", "3"]]);
    let out = gen_borda_x3c(&src).unwrap();
    let e = out.instance.election();
    assert_eq!(e.num_candidates(), 21);
    assert_eq!(out.instance.vulnerable_votes(), vec![0]);
    assert_eq!(e.name(out.instance.current_winner()), "c");
    relations_hold(&out);
    assert_eq!(winner_after(&out, &SourceSolution::Cover(vec![0])), out.instance.target());
    let report = verify_reduction(&out, &Source::X3c(src), Limits::default());
    assert!(['a', 'b', 'c', 'd'].iter().all(|&c| report.outcome(c) == Some(&CheckOutcome::Pass)));
    assert!(matches!(report.outcome('e'), Some(CheckOutcome::Skipped(_))));
}

#[test]
fn kapproval_single_set() {
    let src = x3c(3, &[["1", "2", "3"]]);
    let out = gen_kapproval_x3c(&src, 5).unwrap();
    assert_eq!(out.instance.election().num_candidates(), 9);
    assert_eq!(out.instance.budget(), Some(1));
    assert_eq!(out.instance.changeable_votes(), vec![0]);
    relations_hold(&out);
    let w = out.forward_witness(&SourceSolution::Cover(vec![0])).unwrap();
    let e = out.instance.election();
    let names = e.ranking_names(&w[0].1);
    assert_eq!(&names[..5], &["p", "d1", "d2", "d3", "d4"]);
    assert_eq!(winner_after(&out, &SourceSolution::Cover(vec![0])), out.instance.target());
}

#[test]
fn kveto_single_set() {
    let src = x3c(3, &[["1", "2", "3"]]);
    let out = gen_kveto_x3c(&src, 3).unwrap();
    let e = out.instance.election();
    assert_eq!(e.num_candidates(), 8);
    assert_eq!(out.instance.budget(), Some(1));
    assert_eq!(e.name(out.instance.current_winner()), "a1");
    relations_hold(&out);
    let w = out.forward_witness(&SourceSolution::Cover(vec![0])).unwrap();
    assert_eq!(&e.ranking_names(&w[0].1)[5..], &["a1", "a2", "a3"]);
    assert_eq!(winner_after(&out, &SourceSolution::Cover(vec![0])), out.instance.target());
}

#[test]
fn scoring_conditions() {
    let src = x3c(6, &[["1", "2", "3"], ["4", "5", "6"]]);
    let out = gen_scoring_x3c(&src, &borda_vector(12), None).unwrap();
    relations_hold(&out);
    assert_eq!(winner_after(&out, &SourceSolution::Cover(vec![0, 1])), out.instance.target());
    assert!(matches!(gen_scoring_x3c(&src, &[2; 12], None), Err(Error::ConditionViolated(_))));
    // Plurality has no three equal consecutive gaps.
    let plurality: Vec<i64> = (0..12).map(|i| i64::from(i == 0)).collect();
    assert!(matches!(gen_scoring_x3c(&src, &plurality, None), Err(Error::ConditionViolated(_))));
}

#[test]
fn uniform_borda_from_three_candidates() {
    let source = Election::new(
        ["p", "a", "b"].map(String::from).to_vec(),
        None,
        vec![Vote::new(Ranking::new(vec![0, 1, 2], 3).unwrap()); 2],
    )
    .unwrap();
    let src = CmInstance {
        election: source,
        manipulators: 2,
        target: 0,
        rule: Rule::Borda,
    };
    let out = gen_uniform_borda_cm(&src).unwrap();
    let e = out.instance.election();
    assert_eq!(e.num_candidates(), 5);
    relations_hold(&out);
    let q = e.candidate("q").unwrap();
    let scores = positional_scores(e, &Rule::Borda.score_vector(5).unwrap()).unwrap();
    assert_eq!(scores[q] - scores[0], 2 * 3 - 1);
    let rows = solve_cm(&src).unwrap().unwrap();
    let sol = SourceSolution::Manipulation(rows);
    let w = out.forward_witness(&sol).unwrap();
    for (_, r) in &w {
        assert_eq!(&e.ranking_names(r)[..2], &["p", "d"]);
        assert_eq!(r.last(), q);
    }
    assert_eq!(winner_after(&out, &sol), 0);
}

#[test]
fn cm_embedding_examples() {
    let names = || ["p", "a", "b"].map(String::from).to_vec();
    let r = |v: &[usize]| Vote::new(Ranking::new(v.to_vec(), 3).unwrap());
    // No manipulators: YES iff the target already wins.
    for (votes, wins) in [(vec![r(&[0, 1, 2])], true), (vec![r(&[1, 0, 2])], false)] {
        let src = CmInstance {
            election: Election::new(names(), None, votes).unwrap(),
            manipulators: 0,
            target: 0,
            rule: Rule::Borda,
        };
        let out = embed_cm_dollar(&src).unwrap();
        assert_eq!(solve_exact(&out.instance, Limits::default()).unwrap().is_yes(), wins);
    }
    // Two a>b>p votes: one manipulator leaves a ahead, three pull p level and win the tie-break.
    let fixed = vec![r(&[1, 2, 0]); 2];
    for (manipulators, yes) in [(1, false), (3, true)] {
        let src = CmInstance {
            election: Election::new(names(), None, fixed.clone()).unwrap(),
            manipulators,
            target: 0,
            rule: Rule::Borda,
        };
        assert_eq!(solve_cm(&src).unwrap().is_some(), yes);
        let out = embed_cm_dollar(&src).unwrap();
        assert_eq!(solve_exact(&out.instance, Limits::default()).unwrap().is_yes(), yes);
    }
}

#[test]
fn weighted_plurality_examples() {
    let out = gen_wplurality_partition(&half(&[1, 1])).unwrap();
    assert_eq!(out.instance.election().votes().len(), 4);
    assert_eq!(out.instance.budget(), Some(1));
    assert_eq!(out.instance.election().name(out.instance.current_winner()), "b");
    assert!(exact_yes(&out));
    assert!(!exact_yes(&gen_wplurality_partition(&half(&[3, 1])).unwrap()));
}

#[test]
fn maximin_copeland_bucklin_examples() {
    let out = gen_wmaximin_partition(&half(&[1, 1])).unwrap();
    let sol = SourceSolution::Subset(vec![0]);
    let w = out.forward_witness(&sol).unwrap();
    let after = out.instance.apply(&w);
    let e = out.instance.election();
    let names: Vec<Vec<&str>> = after.votes()[..2].iter().map(|v| e.ranking_names(&v.ranking)).collect();
    assert_eq!(names, vec![vec!["p", "a", "b", "c"], vec!["p", "b", "c", "a"]]);
    let d = frugal_core::majority_graph(&after);
    for x in 0..4 {
        let score = (0..4).filter(|&y| y != x).map(|y| d.get(x, y)).min().unwrap();
        assert_eq!(score, -1);
    }
    assert_eq!(co_winners(&after, &Rule::Maximin).len(), 4);
    assert_eq!(compute_winner(&after, &Rule::Maximin).unwrap(), 0);
    assert!(exact_yes(&out));

    assert!(!exact_yes(&gen_wcopeland_partition(&half(&[3, 1]), Ratio::new(0, 1)).unwrap()));
    assert!(exact_yes(&gen_wbucklin_partition(&half(&[1, 1])).unwrap()));
    assert!(matches!(
        gen_wcopeland_partition(&half(&[1, 1]), Ratio::new(1, 1)),
        Err(Error::ConditionViolated(_))
    ));
}

#[test]
fn stv_quarter_examples() {
    let out = gen_wstv_quarter(&quarter(&[1, 1, 2])).unwrap();
    assert!(exact_yes(&out));
    let w = out.forward_witness(&SourceSolution::Subset(vec![0])).unwrap();
    assert_eq!(w.len(), 1);
    assert_eq!(out.instance.election().ranking_names(&w[0].1), vec!["b", "p", "a"]);
    let no = gen_wstv_quarter(&quarter(&[2, 2])).unwrap();
    assert!(!exact_yes(&no));
    let report = verify_reduction(&no, &Source::Partition(quarter(&[2, 2])), wide());
    assert_eq!(report.source_yes, Some(false));
    assert_eq!(report.outcome('e'), Some(&CheckOutcome::Pass));
    assert!(report.passed());
}

#[test]
fn quarter_mapping_examples() {
    for (w, yes) in [(vec![1, 3], false), (vec![1, 1, 2], true), (vec![4, 4], true)] {
        let h = half(&w);
        let q = partition_to_quarter(&h).unwrap();
        let mut expect = w.clone();
        expect.push(w.iter().sum());
        assert_eq!(q.weights(), &expect[..]);
        assert_eq!(solve_partition(&h).is_some(), yes);
        assert_eq!(solve_partition(&q).is_some(), yes);
    }
}

#[test]
fn oracle_examples() {
    assert_eq!(
        solve_x3c(&x3c(6, &[["1", "2", "3"], ["4", "5", "6"], ["2", "3", "4"]])),
        Some(vec![0, 1])
    );
    assert_eq!(solve_x3c(&x3c(3, &[["1", "2", "3"]])), Some(vec![0]));
    assert_eq!(solve_x3c(&x3c(3, &[["1", "2", "3"], ["1", "2", "3"]])), Some(vec![0]));
    assert_eq!(solve_partition(&half(&[1, 1, 2])), Some(vec![2]));
    assert_eq!(solve_partition(&half(&[3, 1])), None);
    assert_eq!(solve_partition(&quarter(&[1, 1, 2])), Some(vec![0]));
}

#[test]
fn maximin_verification_passes_every_check() {
    let src = half(&[1, 1]);
    let out = gen_wmaximin_partition(&src).unwrap();
    let report = verify_reduction(&out, &Source::Partition(src), wide());
    assert_eq!(report.outcome('a'), Some(&CheckOutcome::Pass));
    assert_eq!(report.outcome('b'), Some(&CheckOutcome::Pass));
    assert_eq!(report.outcome('d'), Some(&CheckOutcome::Pass));
    assert_eq!(report.outcome('e'), Some(&CheckOutcome::Pass));
    assert!(report.passed());
}

#[test]
fn names_round_trip_and_mismatched_sources_fail() {
    for kind in ReductionKind::ALL {
        assert_eq!(kind.name().parse::<ReductionKind>().unwrap(), kind);
    }
    assert!(matches!("nope".parse::<ReductionKind>(), Err(Error::UnknownReduction(_))));
    let src = Source::Partition(half(&[1, 1]));
    assert!(matches!(generate(ReductionKind::BordaX3c, &src), Err(Error::InvalidSource(_))));
}
