//! Voting rules and tie-broken winner determination.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::election::{majority_graph, positional_scores_unchecked, Election};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rule {
    Plurality,
    Veto,
    KApproval(usize),
    KVeto(usize),
    Borda,
    /// Explicit score vector, one entry per position.
    Scoring(Vec<i64>),
    Maximin,
    /// Copeland with exact tie credit `alpha` in `[0, 1]`.
    Copeland(Ratio<u64>),
    Bucklin,
    Runoff,
    Stv,
}

impl Rule {
    /// Checks parameters against the number of candidates.
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            Rule::KApproval(k) | Rule::KVeto(k) => {
                if *k == 0 || *k >= m {
                    return Err(Error::InvalidRule(format!(
                        "{self} needs 1 <= k < m, got k = {k} with m = {m}"
                    )));
                }
            }
            Rule::Scoring(v) => {
                if v.len() != m {
                    return Err(Error::InvalidRule(format!(
                        "score vector has length {}, election has {m} candidates",
                        v.len()
                    )));
                }
                check_vector_shape(v)?;
            }
            Rule::Copeland(a) if *a.denom() == 0 || a.numer() > a.denom() => {
                return Err(Error::InvalidRule(format!("copeland alpha {a} is outside [0, 1]")));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_positional(&self) -> bool {
        matches!(
            self,
            Rule::Plurality | Rule::Veto | Rule::KApproval(_) | Rule::KVeto(_) | Rule::Borda | Rule::Scoring(_)
        )
    }

    /// Score vector of a positional rule for `m` candidates.
    pub fn score_vector(&self, m: usize) -> Option<Vec<i64>> {
        let v = match self {
            Rule::Plurality => (0..m).map(|i| i64::from(i == 0)).collect(),
            Rule::Veto => (0..m).map(|i| -i64::from(i + 1 == m)).collect(),
            Rule::KApproval(k) => (0..m).map(|i| i64::from(i < *k)).collect(),
            Rule::KVeto(k) => (0..m).map(|i| -i64::from(i + k >= m)).collect(),
            Rule::Borda => (0..m).map(|i| (m - 1 - i) as i64).collect(),
            Rule::Scoring(v) => v.clone(),
            _ => return None,
        };
        Some(v)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Plurality => "plurality",
            Rule::Veto => "veto",
            Rule::KApproval(_) => "kapproval",
            Rule::KVeto(_) => "kveto",
            Rule::Borda => "borda",
            Rule::Scoring(_) => "scoring",
            Rule::Maximin => "maximin",
            Rule::Copeland(_) => "copeland",
            Rule::Bucklin => "bucklin",
            Rule::Runoff => "runoff",
            Rule::Stv => "stv",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::KApproval(k) => write!(f, "kapproval:{k}"),
            Rule::KVeto(k) => write!(f, "kveto:{k}"),
            Rule::Scoring(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "scoring:{}", parts.join(","))
            }
            Rule::Copeland(a) => write!(f, "copeland:{}/{}", a.numer(), a.denom()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a.trim())),
            None => (s, None),
        };
        let bad = |msg: &str| Error::InvalidRule(format!("`{s}`: {msg}"));
        let need_arg = || arg.ok_or_else(|| bad("missing parameter"));
        let no_arg = |r: Rule| match arg {
            None => Ok(r),
            Some(_) => Err(bad("takes no parameter")),
        };
        match head.to_ascii_lowercase().as_str() {
            "plurality" => no_arg(Rule::Plurality),
            "veto" => no_arg(Rule::Veto),
            "borda" => no_arg(Rule::Borda),
            "maximin" => no_arg(Rule::Maximin),
            "bucklin" => no_arg(Rule::Bucklin),
            "runoff" => no_arg(Rule::Runoff),
            "stv" => no_arg(Rule::Stv),
            "kapproval" => Ok(Rule::KApproval(need_arg()?.parse().map_err(|_| bad("k must be a positive integer"))?)),
            "kveto" => Ok(Rule::KVeto(need_arg()?.parse().map_err(|_| bad("k must be a positive integer"))?)),
            "scoring" => {
                let v = need_arg()?
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("entries must be integers"))?;
                check_vector_shape(&v)?;
                Ok(Rule::Scoring(v))
            }
            "copeland" => {
                let a = need_arg()?;
                let (n, d) = match a.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (a, "1"),
                };
                let n: u64 = n.parse().map_err(|_| bad("alpha numerator must be a natural number"))?;
                let d: u64 = d.parse().map_err(|_| bad("alpha denominator must be a natural number"))?;
                if d == 0 || n > d {
                    return Err(bad("alpha must lie in [0, 1]"));
                }
                Ok(Rule::Copeland(Ratio::new(n, d)))
            }
            _ => Err(bad("unknown rule")),
        }
    }
}

fn check_vector_shape(v: &[i64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidRule("empty score vector".into()));
    }
    if v.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidRule(format!("score vector {v:?} is not nonincreasing")));
    }
    if v[0] == v[v.len() - 1] {
        return Err(Error::InvalidRule(format!("score vector {v:?} is constant")));
    }
    Ok(())
}

/// Affine representative of a score vector: shift so the last entry is zero
/// and divide by the gcd of the gaps. The winner of any profile is unchanged.
pub fn normalize_score_vector(vector: &[i64]) -> Result<Vec<i64>> {
    check_vector_shape(vector)?;
    let min = vector[vector.len() - 1];
    let g = vector.windows(2).map(|w| w[0] - w[1]).fold(0, gcd);
    Ok(vector.iter().map(|x| (x - min) / g).collect())
}

/// First position `j` (zero-based) with `vector[j] - vector[j + 1] == 1`.
pub fn unit_gap_position(vector: &[i64]) -> Option<usize> {
    vector.windows(2).position(|w| w[0] - w[1] == 1)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The tie-broken winner of `election` under `rule`.
pub fn compute_winner(election: &Election, rule: &Rule) -> Result<usize> {
    rule.validate(election.num_candidates())?;
    Ok(winner_unchecked(election, rule))
}

pub(crate) fn winner_unchecked(election: &Election, rule: &Rule) -> usize {
    match rule {
        Rule::Runoff => runoff_winner(election),
        Rule::Stv => stv_winner(election),
        _ => {
            let cw = co_winners(election, rule);
            *cw.iter()
                .min_by_key(|&&c| election.tiebreak_position(c))
                .expect("co-winner set is never empty")
        }
    }
}

/// Candidates tied for the best rule score, in index order. For runoff and
/// STV this is the singleton winner.
pub fn co_winners(election: &Election, rule: &Rule) -> Vec<usize> {
    let m = election.num_candidates();
    let best_by = |score: Vec<i64>| -> Vec<usize> {
        let max = *score.iter().max().expect("at least one candidate");
        (0..m).filter(|&c| score[c] == max).collect()
    };
    match rule {
        Rule::Maximin => {
            let d = majority_graph(election);
            best_by(
                (0..m)
                    .map(|x| (0..m).filter(|&y| y != x).map(|y| d.get(x, y)).min().unwrap_or(0))
                    .collect(),
            )
        }
        Rule::Copeland(alpha) => {
            let d = majority_graph(election);
            let (num, den) = (*alpha.numer() as i64, *alpha.denom() as i64);
            best_by(
                (0..m)
                    .map(|x| {
                        let wins = (0..m).filter(|&y| y != x && d.get(x, y) > 0).count() as i64;
                        let ties = (0..m).filter(|&y| y != x && d.get(x, y) == 0).count() as i64;
                        wins * den + ties * num
                    })
                    .collect(),
            )
        }
        Rule::Bucklin => {
            let depth = bucklin_depths(election);
            best_by(depth.iter().map(|&l| -(l as i64)).collect())
        }
        Rule::Runoff => vec![runoff_winner(election)],
        Rule::Stv => vec![stv_winner(election)],
        positional => {
            let v = positional.score_vector(m).expect("positional rule");
            best_by(positional_scores_unchecked(election, &v))
        }
    }
}

/// Smallest `l` such that a strict majority of the weight ranks `c` within
/// the top `l` positions, per candidate.
pub fn bucklin_depths(election: &Election) -> Vec<usize> {
    let m = election.num_candidates();
    let total = election.total_weight();
    let mut at = vec![vec![0u64; m]; m];
    for v in election.votes() {
        for (pos, &c) in v.ranking.iter().enumerate() {
            at[c][pos] += v.weight;
        }
    }
    (0..m)
        .map(|c| {
            let mut acc = 0;
            for (l, &w) in at[c].iter().enumerate() {
                acc += w;
                if 2 * acc > total {
                    return l + 1;
                }
            }
            m
        })
        .collect()
}

fn runoff_winner(election: &Election) -> usize {
    let m = election.num_candidates();
    if m == 1 {
        return 0;
    }
    let plur = positional_scores_unchecked(election, &Rule::Plurality.score_vector(m).unwrap());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&c| (-plur[c], election.tiebreak_position(c)));
    let (x, y) = (order[0], order[1]);
    let d = head_to_head(election, x, y);
    if d > 0 || (d == 0 && election.tiebreak_prefers(x, y)) {
        x
    } else {
        y
    }
}

fn head_to_head(election: &Election, x: usize, y: usize) -> i64 {
    election
        .votes()
        .iter()
        .map(|v| if v.ranking.prefers(x, y) { v.weight as i64 } else { -(v.weight as i64) })
        .sum()
}

fn stv_winner(election: &Election) -> usize {
    let m = election.num_candidates();
    let mut alive = vec![true; m];
    for _ in 1..m {
        let mut score = vec![0u64; m];
        for v in election.votes() {
            let top = v.ranking.iter().copied().find(|&c| alive[c]).expect("a candidate survives");
            score[top] += v.weight;
        }
        let out = (0..m)
            .filter(|&c| alive[c])
            .min_by_key(|&c| (score[c], std::cmp::Reverse(election.tiebreak_position(c))))
            .expect("a candidate survives");
        alive[out] = false;
    }
    alive.iter().position(|&a| a).expect("one survivor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::testutil::election;

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_score_vector(&[2, 1, 0]).unwrap(), vec![2, 1, 0]);
        assert_eq!(normalize_score_vector(&[4, 2, 0]).unwrap(), vec![2, 1, 0]);
        assert_eq!(normalize_score_vector(&[0, 0, -1]).unwrap(), vec![1, 1, 0]);
        assert!(normalize_score_vector(&[1, 1, 1]).is_err());
    }

    #[test]
    fn plurality_example() {
        let e = election(&["a", "b", "p"], "a>b>p", &["a>b>p*2", "b>p>a"]);
        assert_eq!(compute_winner(&e, &Rule::Plurality).unwrap(), 0);
    }

    #[test]
    fn stv_transfers_to_p() {
        // K = 1: p>a>b weight 3, b>p>a weight 3, a>p>b weight 2.
        let e = election(&["p", "a", "b"], "a>b>p", &["p>a>b*3", "b>p>a*3", "a>p>b*2"]);
        assert_eq!(compute_winner(&e, &Rule::Stv).unwrap(), 0);
        assert_eq!(compute_winner(&e, &Rule::Runoff).unwrap(), 0);
    }

    #[test]
    fn full_symmetric_profile_goes_to_tiebreak() {
        let all = ["a>b>c", "a>c>b", "b>a>c", "b>c>a", "c>a>b", "c>b>a"];
        let e = election(&["a", "b", "c"], "b>c>a", &all);
        for r in [Rule::Plurality, Rule::Veto, Rule::Borda, Rule::Maximin, Rule::Bucklin] {
            assert_eq!(compute_winner(&e, &r).unwrap(), 1, "{r}");
        }
    }

    #[test]
    fn copeland_alpha_matters() {
        // a ties b, a beats c, b beats c.
        let e = election(&["a", "b", "c"], "c>b>a", &["a>b>c", "b>a>c"]);
        let zero = Rule::Copeland(Ratio::new(0, 1));
        assert_eq!(co_winners(&e, &zero), vec![0, 1]);
        assert_eq!(compute_winner(&e, &zero).unwrap(), 1);
    }

    #[test]
    fn bucklin_strict_majority() {
        let e = election(&["a", "b", "c"], "c>b>a", &["a>b>c", "b>a>c"]);
        // Neither a nor b has more than half at depth 1; both do at depth 2.
        assert_eq!(bucklin_depths(&e), vec![2, 2, 3]);
        assert_eq!(compute_winner(&e, &Rule::Bucklin).unwrap(), 1);
    }

    #[test]
    fn rule_syntax_round_trips() {
        for s in [
            "plurality", "veto", "kapproval:2", "kveto:3", "borda", "scoring:5,3,0", "maximin",
            "copeland:1/2", "bucklin", "runoff", "stv",
        ] {
            assert_eq!(s.parse::<Rule>().unwrap().to_string(), s);
        }
        assert!("copeland:3/2".parse::<Rule>().is_err());
        assert!("scoring:1,1".parse::<Rule>().is_err());
        assert!("kapproval".parse::<Rule>().is_err());
        assert!("banana".parse::<Rule>().is_err());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let e = election(&["a", "b", "c"], "a>b>c", &["a>b>c"]);
        assert!(compute_winner(&e, &Rule::KApproval(3)).is_err());
        assert!(compute_winner(&e, &Rule::Scoring(vec![1, 0])).is_err());
    }
}
