//! Deciders for FRUGAL-BRIBERY and its priced variants.
//!
//! [`exact`] is exhaustive and works for every rule. The remaining solvers are
//! polynomial (or pseudo-polynomial) and cover the rule and variant
//! combinations listed in [`select`].

mod dollar;
mod exact;
mod manipulation;
mod select;
mod weighted;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::election::Ranking;
use crate::error::{Error, Result};
use crate::rules::winner_unchecked;
use crate::vulnerability::BriberyInstance;

pub use dollar::{solve_dollar_budgeted, solve_dollar_plurality, solve_dollar_veto, DEFAULT_BUDGET_CAP};
pub use exact::{solve_exact, Limits};
pub use manipulation::cm_greedy;
pub use select::{explain_table, run_algorithm, select_algorithm, solve, AlgorithmChoice};
pub use weighted::{solve_frugal_poly, solve_weighted_plurality_frugal, solve_weighted_threecand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Decision {
    Yes,
    No,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "YES",
            Decision::No => "NO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    FrugalPoly,
    DollarPlurality,
    DollarVeto,
    DollarBudgeted,
    WeightedPlurality,
    WeightedThreeCandidate,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exact => "exact",
            Algorithm::FrugalPoly => "frugal_poly",
            Algorithm::DollarPlurality => "dollar_plurality",
            Algorithm::DollarVeto => "dollar_veto",
            Algorithm::DollarBudgeted => "dollar_budgeted",
            Algorithm::WeightedPlurality => "weighted_plurality",
            Algorithm::WeightedThreeCandidate => "weighted_threecand",
        })
    }
}

/// Outcome of a solver. `witness` lists the changed votes by index, in
/// increasing index order, with their replacement rankings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub decision: Decision,
    pub witness: Vec<(usize, Ranking)>,
    pub cost: u64,
    pub algorithm: Algorithm,
}

impl Solution {
    pub(crate) fn no(algorithm: Algorithm) -> Self {
        Solution {
            decision: Decision::No,
            witness: Vec::new(),
            cost: 0,
            algorithm,
        }
    }

    /// Drops unchanged entries, sorts by vote index and prices the rest.
    pub(crate) fn yes(instance: &BriberyInstance, witness: Vec<(usize, Ranking)>, algorithm: Algorithm) -> Self {
        let witness = normalize_witness(instance, witness);
        let cost = witness
            .iter()
            .map(|(i, _)| instance.effective_price(*i).unwrap_or(0))
            .sum();
        Solution {
            decision: Decision::Yes,
            witness,
            cost,
            algorithm,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}

pub(crate) fn normalize_witness(instance: &BriberyInstance, mut witness: Vec<(usize, Ranking)>) -> Vec<(usize, Ranking)> {
    let votes = instance.election().votes();
    witness.retain(|(i, r)| votes[*i].ranking != *r);
    witness.sort_by_key(|(i, _)| *i);
    witness
}

/// Independently checks a witness: only vulnerable, affordable votes change,
/// each at most once, the total price fits the budget and the target wins.
/// Returns the cost.
pub fn validate_witness(instance: &BriberyInstance, witness: &[(usize, Ranking)]) -> Result<u64> {
    let election = instance.election();
    let m = election.num_candidates();
    let mut seen = BTreeSet::new();
    let mut cost = 0u64;
    for (i, r) in witness {
        if *i >= election.votes().len() {
            return Err(Error::InvalidWitness(format!("vote {i} does not exist")));
        }
        if !seen.insert(*i) {
            return Err(Error::InvalidWitness(format!("vote {i} changed twice")));
        }
        Ranking::new(r.to_vec(), m).map_err(|e| Error::InvalidWitness(e.to_string()))?;
        if election.votes()[*i].ranking == *r {
            continue;
        }
        if !instance.is_vulnerable(*i) {
            return Err(Error::InvalidWitness(format!("vote {i} is not vulnerable")));
        }
        let price = instance
            .effective_price(*i)
            .ok_or_else(|| Error::InvalidWitness(format!("vote {i} has infinite price")))?;
        cost += price;
    }
    if let Some(b) = instance.budget() {
        if cost > b {
            return Err(Error::InvalidWitness(format!("cost {cost} exceeds budget {b}")));
        }
    }
    let after = instance.apply(witness);
    let winner = winner_unchecked(&after, instance.rule());
    if winner != instance.target() {
        return Err(Error::InvalidWitness(format!(
            "winner after bribery is `{}`, not the target",
            after.name(winner)
        )));
    }
    Ok(cost)
}

pub(crate) fn require_unweighted(instance: &BriberyInstance, what: &str) -> Result<()> {
    if instance.election().is_unweighted() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs an unweighted election")))
    }
}

pub(crate) fn require_priced(instance: &BriberyInstance, what: &str) -> Result<()> {
    if instance.variant().is_priced() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs a priced variant")))
    }
}
