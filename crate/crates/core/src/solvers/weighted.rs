//! FRUGAL solvers that free every vulnerable vote and hand the problem to a
//! manipulation algorithm.

use super::dollar::try_free;
use super::{require_unweighted, Algorithm, Solution};
use crate::election::Ranking;
use crate::error::{Error, Result};
use crate::rules::{winner_unchecked, Rule};
use crate::vulnerability::{BriberyInstance, Variant};

fn require_frugal(instance: &BriberyInstance, what: &str) -> Result<()> {
    if instance.variant() == Variant::Frugal {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs the frugal variant")))
    }
}

/// Unweighted FRUGAL bribery for plurality, veto, k-approval, k-veto,
/// Bucklin and runoff.
pub fn solve_frugal_poly(instance: &BriberyInstance) -> Result<Solution> {
    if !matches!(
        instance.rule(),
        Rule::Plurality | Rule::Veto | Rule::KApproval(_) | Rule::KVeto(_) | Rule::Bucklin | Rule::Runoff
    ) {
        return Err(Error::Unsupported(format!("frugal_poly cannot solve {}", instance.rule())));
    }
    require_frugal(instance, "frugal_poly")?;
    require_unweighted(instance, "frugal_poly")?;
    free_all(instance, Algorithm::FrugalPoly)
}

/// Weighted FRUGAL plurality: put the target on top of every vulnerable vote.
pub fn solve_weighted_plurality_frugal(instance: &BriberyInstance) -> Result<Solution> {
    if *instance.rule() != Rule::Plurality {
        return Err(Error::Unsupported(format!("weighted_plurality cannot solve {}", instance.rule())));
    }
    require_frugal(instance, "weighted_plurality")?;
    let p = instance.target();
    let w: Vec<(usize, Ranking)> = instance
        .vulnerable_votes()
        .into_iter()
        .map(|i| (i, instance.election().votes()[i].ranking.with_front(p)))
        .collect();
    let after = instance.apply(&w);
    Ok(if winner_unchecked(&after, instance.rule()) == p {
        Solution::yes(instance, w, Algorithm::WeightedPlurality)
    } else {
        Solution::no(Algorithm::WeightedPlurality)
    })
}

/// Weighted FRUGAL maximin or Copeland with three candidates, decided by a
/// subset-sum table over the vulnerable weights.
pub fn solve_weighted_threecand(instance: &BriberyInstance) -> Result<Solution> {
    if !matches!(instance.rule(), Rule::Maximin | Rule::Copeland(_)) {
        return Err(Error::Unsupported(format!("weighted_threecand cannot solve {}", instance.rule())));
    }
    let m = instance.election().num_candidates();
    if m != 3 {
        return Err(Error::Unsupported(format!("weighted_threecand needs 3 candidates, got {m}")));
    }
    require_frugal(instance, "weighted_threecand")?;
    free_all(instance, Algorithm::WeightedThreeCandidate)
}

fn free_all(instance: &BriberyInstance, algorithm: Algorithm) -> Result<Solution> {
    if instance.current_winner() == instance.target() {
        return Ok(Solution::yes(instance, Vec::new(), algorithm));
    }
    let open = instance.vulnerable_votes();
    Ok(match try_free(instance, &open)? {
        Some(w) => Solution::yes(instance, w, algorithm),
        None => Solution::no(algorithm),
    })
}

/// Matches manipulation rows (row `j` has the weight of vote `open[j]`) to
/// the open votes, letting a vote keep its ranking whenever some row of the
/// same weight equals it.
pub(crate) fn assign_rows(instance: &BriberyInstance, open: &[usize], rows: Vec<Ranking>) -> Vec<(usize, Ranking)> {
    let votes = instance.election().votes();
    let weight = |j: usize| votes[open[j]].weight;
    let mut used = vec![false; rows.len()];
    let mut given: Vec<Option<usize>> = vec![None; open.len()];
    for (slot, &i) in open.iter().enumerate() {
        if let Some(j) = (0..rows.len()).find(|&j| !used[j] && weight(j) == votes[i].weight && rows[j] == votes[i].ranking) {
            used[j] = true;
            given[slot] = Some(j);
        }
    }
    for (slot, &i) in open.iter().enumerate() {
        if given[slot].is_none() {
            let j = (0..rows.len())
                .find(|&j| !used[j] && weight(j) == votes[i].weight)
                .expect("rows and votes have the same weight multiset");
            used[j] = true;
            given[slot] = Some(j);
        }
    }
    open.iter()
        .zip(given)
        .map(|(&i, j)| (i, rows[j.expect("assigned")].clone()))
        .collect()
}
