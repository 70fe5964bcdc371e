#![allow(dead_code)]

use frugal_core::{Election, Price, Ranking, Rule, Vote};
use itertools::Itertools;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;

pub const NAMES: [&str; 6] = ["p", "a", "b", "c", "d", "e"];

pub fn names(m: usize) -> Vec<String> {
    NAMES[..m].iter().map(|s| s.to_string()).collect()
}

pub fn all_rankings(m: usize) -> Vec<Ranking> {
    (0..m)
        .permutations(m)
        .map(|r| Ranking::new(r, m).unwrap())
        .collect()
}

/// Election over candidates `p, a, b, ...` (target is index 0).
pub fn election(m: usize, tiebreak: Vec<usize>, votes: Vec<Vote>) -> Election {
    Election::new(names(m), Some(tiebreak), votes).unwrap()
}

pub fn unit_votes(rankings: &[Ranking]) -> Vec<Vote> {
    rankings.iter().cloned().map(Vote::new).collect()
}

pub fn with_prices(e: &Election, prices: &[Option<Price>]) -> Election {
    let votes = e
        .votes()
        .iter()
        .zip(prices)
        .map(|(v, p)| Vote { price: *p, ..v.clone() })
        .collect();
    e.with_votes(votes)
}

/// All sequences of length `n` over `items`.
pub fn sequences<T: Clone>(items: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<T>| {
                items.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

pub fn random_ranking(rng: &mut impl Rng, m: usize) -> Ranking {
    let mut r: Vec<usize> = (0..m).collect();
    r.shuffle(rng);
    Ranking::new(r, m).unwrap()
}

pub fn random_election(rng: &mut impl Rng, m: usize, n: usize, max_weight: u64) -> Election {
    let votes = (0..n)
        .map(|_| Vote::weighted(random_ranking(rng, m), rng.gen_range(1..=max_weight)))
        .collect();
    election(m, random_ranking(rng, m).into_vec(), votes)
}

pub fn random_price(rng: &mut impl Rng, max: u64) -> Price {
    if rng.gen_bool(0.15) {
        Price::Infinite
    } else {
        Price::Finite(rng.gen_range(0..=max))
    }
}

/// Every rule applicable to `m` candidates, with small parameters.
pub fn all_rules(m: usize) -> Vec<Rule> {
    let mut rules = vec![Rule::Plurality, Rule::Veto, Rule::Borda];
    for k in 1..m {
        rules.push(Rule::KApproval(k));
        rules.push(Rule::KVeto(k));
    }
    rules.extend([
        Rule::Maximin,
        Rule::Copeland(Ratio::new(0, 1)),
        Rule::Copeland(Ratio::new(1, 2)),
        Rule::Copeland(Ratio::new(1, 1)),
        Rule::Bucklin,
        Rule::Runoff,
        Rule::Stv,
    ]);
    if m >= 3 {
        let mut v: Vec<i64> = (0..m as i64).rev().map(|x| x * x).collect();
        v[0] += 1;
        rules.push(Rule::Scoring(v));
    }
    rules
}
