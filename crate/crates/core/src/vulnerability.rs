//! Vulnerable votes and validated bribery instances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::election::{Election, Price, Vote};
use crate::error::{Error, Result};
use crate::rules::{compute_winner, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Any vulnerable vote may change for free.
    Frugal,
    /// Priced votes, all finite vulnerable prices equal.
    DollarUniform,
    /// Priced votes with arbitrary prices.
    DollarNonuniform,
}

impl Variant {
    pub fn is_priced(self) -> bool {
        self != Variant::Frugal
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Frugal => "frugal",
            Variant::DollarUniform => "uniform",
            Variant::DollarNonuniform => "nonuniform",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frugal" => Ok(Variant::Frugal),
            "uniform" => Ok(Variant::DollarUniform),
            "nonuniform" => Ok(Variant::DollarNonuniform),
            other => Err(Error::InvalidElection(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VulnerabilityLabel {
    Vulnerable,
    NonVulnerable,
}

/// Labels each vote by whether it ranks `target` strictly above the current
/// winner. Nothing is vulnerable when `target` already wins.
pub fn classify_vulnerable(election: &Election, rule: &Rule, target: usize) -> Result<Vec<VulnerabilityLabel>> {
    if target >= election.num_candidates() {
        return Err(Error::UnknownTarget(target.to_string()));
    }
    let winner = compute_winner(election, rule)?;
    Ok(labels_for(election, target, winner))
}

fn labels_for(election: &Election, target: usize, winner: usize) -> Vec<VulnerabilityLabel> {
    election
        .votes()
        .iter()
        .map(|v| {
            if v.ranking.prefers(target, winner) {
                VulnerabilityLabel::Vulnerable
            } else {
                VulnerabilityLabel::NonVulnerable
            }
        })
        .collect()
}

/// A validated FRUGAL or priced bribery instance. Prices are read from the
/// votes; prices on non-vulnerable votes are ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriberyInstance {
    election: Election,
    rule: Rule,
    target: usize,
    budget: Option<u64>,
    variant: Variant,
    winner: usize,
    vulnerable: Vec<bool>,
}

pub fn build_instance(
    election: Election,
    rule: Rule,
    target: usize,
    budget: Option<u64>,
    variant: Variant,
) -> Result<BriberyInstance> {
    let labels = classify_vulnerable(&election, &rule, target)?;
    let winner = compute_winner(&election, &rule)?;
    let vulnerable: Vec<bool> = labels.iter().map(|l| *l == VulnerabilityLabel::Vulnerable).collect();
    if variant.is_priced() {
        if budget.is_none() {
            return Err(Error::MissingBudget);
        }
        let mut uniform = None;
        for (i, v) in election.votes().iter().enumerate() {
            if !vulnerable[i] {
                continue;
            }
            match v.price {
                None => return Err(Error::MissingPrice(i)),
                Some(Price::Finite(p)) if variant == Variant::DollarUniform => match uniform {
                    None => uniform = Some(p),
                    Some(q) if q != p => return Err(Error::NonUniformPrices),
                    _ => {}
                },
                _ => {}
            }
        }
    }
    Ok(BriberyInstance {
        election,
        rule,
        target,
        budget: if variant.is_priced() { budget } else { None },
        variant,
        winner,
        vulnerable,
    })
}

impl BriberyInstance {
    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Always `None` for FRUGAL instances.
    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Winner before any change.
    pub fn current_winner(&self) -> usize {
        self.winner
    }

    pub fn is_vulnerable(&self, vote: usize) -> bool {
        self.vulnerable[vote]
    }

    pub fn vulnerable_votes(&self) -> Vec<usize> {
        (0..self.vulnerable.len()).filter(|&i| self.vulnerable[i]).collect()
    }

    pub fn labels(&self) -> Vec<VulnerabilityLabel> {
        self.vulnerable
            .iter()
            .map(|&v| if v { VulnerabilityLabel::Vulnerable } else { VulnerabilityLabel::NonVulnerable })
            .collect()
    }

    /// Price of changing a vote: `None` when the vote may not change.
    pub fn effective_price(&self, vote: usize) -> Option<u64> {
        if !self.vulnerable[vote] {
            return None;
        }
        match self.variant {
            Variant::Frugal => Some(0),
            _ => self.election.votes()[vote].price.and_then(Price::finite),
        }
    }

    /// Votes whose change the budget can ever afford.
    pub fn changeable_votes(&self) -> Vec<usize> {
        let cap = self.budget.unwrap_or(0);
        (0..self.vulnerable.len())
            .filter(|&i| self.effective_price(i).is_some_and(|p| p <= cap))
            .collect()
    }

    /// The same question posed as a priced instance with every vulnerable
    /// vote free and a zero budget.
    pub fn to_zero_price_dollar(&self) -> BriberyInstance {
        let votes: Vec<Vote> = self
            .election
            .votes()
            .iter()
            .enumerate()
            .map(|(i, v)| Vote {
                price: Some(if self.vulnerable[i] { Price::Finite(0) } else { Price::Infinite }),
                ..v.clone()
            })
            .collect();
        BriberyInstance {
            election: self.election.with_votes(votes),
            budget: Some(0),
            variant: Variant::DollarUniform,
            ..self.clone()
        }
    }

    /// Election with the given replacement rankings applied.
    pub fn apply(&self, witness: &[(usize, crate::election::Ranking)]) -> Election {
        let mut e = self.election.clone();
        for (i, r) in witness {
            e.votes_mut()[*i].ranking = r.clone();
        }
        e
    }
}
