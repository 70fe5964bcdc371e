use std::str::FromStr;

use super::dollar::{solve_dollar_budgeted, solve_dollar_plurality, solve_dollar_veto};
use super::exact::{solve_exact, Limits};
use super::weighted::{solve_frugal_poly, solve_weighted_plurality_frugal, solve_weighted_threecand};
use super::{Algorithm, Solution};
use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::vulnerability::{BriberyInstance, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgorithmChoice {
    Exact,
    /// The polynomial solver from the selection table; an error if none applies.
    Poly,
    /// The polynomial solver when one applies, otherwise exact search.
    Auto,
}

impl FromStr for AlgorithmChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(AlgorithmChoice::Exact),
            "poly" => Ok(AlgorithmChoice::Poly),
            "auto" => Ok(AlgorithmChoice::Auto),
            other => Err(Error::Unsupported(format!("unknown algorithm `{other}`"))),
        }
    }
}

const TABLE: &str = "\
variant  weights     rule                              algorithm
frugal   any         plurality                         weighted_plurality
frugal   any         maximin, copeland (3 candidates)  weighted_threecand
frugal   unweighted  veto, kapproval, kveto,           frugal_poly
                     bucklin, runoff
dollar   unweighted  plurality                         dollar_plurality
dollar   unweighted  veto                              dollar_veto
dollar   unweighted  kapproval, bucklin, runoff        dollar_budgeted (budget <= cap)
any      any         anything else                     exact
";

/// The algorithm-selection table used by [`AlgorithmChoice::Auto`].
pub fn explain_table() -> &'static str {
    TABLE
}

/// The polynomial algorithm [`AlgorithmChoice::Auto`] would use, or
/// [`Algorithm::Exact`] when none applies.
pub fn select_algorithm(instance: &BriberyInstance, budget_cap: u64) -> Algorithm {
    let unweighted = instance.election().is_unweighted();
    let m = instance.election().num_candidates();
    match (instance.variant(), instance.rule()) {
        (Variant::Frugal, Rule::Plurality) => Algorithm::WeightedPlurality,
        (Variant::Frugal, Rule::Maximin | Rule::Copeland(_)) if m == 3 => Algorithm::WeightedThreeCandidate,
        (Variant::Frugal, Rule::Veto | Rule::KApproval(_) | Rule::KVeto(_) | Rule::Bucklin | Rule::Runoff)
            if unweighted =>
        {
            Algorithm::FrugalPoly
        }
        (Variant::Frugal, _) => Algorithm::Exact,
        (_, _) if !unweighted => Algorithm::Exact,
        (_, Rule::Plurality) => Algorithm::DollarPlurality,
        (_, Rule::Veto) => Algorithm::DollarVeto,
        (_, Rule::KApproval(_) | Rule::Bucklin | Rule::Runoff)
            if instance.budget().unwrap_or(0) <= budget_cap =>
        {
            Algorithm::DollarBudgeted
        }
        _ => Algorithm::Exact,
    }
}

pub fn run_algorithm(instance: &BriberyInstance, algorithm: Algorithm, limits: Limits, budget_cap: u64) -> Result<Solution> {
    match algorithm {
        Algorithm::Exact => solve_exact(instance, limits),
        Algorithm::FrugalPoly => solve_frugal_poly(instance),
        Algorithm::DollarPlurality => solve_dollar_plurality(instance),
        Algorithm::DollarVeto => solve_dollar_veto(instance),
        Algorithm::DollarBudgeted => solve_dollar_budgeted(instance, budget_cap),
        Algorithm::WeightedPlurality => solve_weighted_plurality_frugal(instance),
        Algorithm::WeightedThreeCandidate => solve_weighted_threecand(instance),
    }
}

pub fn solve(instance: &BriberyInstance, choice: AlgorithmChoice, limits: Limits, budget_cap: u64) -> Result<Solution> {
    let picked = select_algorithm(instance, budget_cap);
    match choice {
        AlgorithmChoice::Exact => solve_exact(instance, limits),
        AlgorithmChoice::Auto => run_algorithm(instance, picked, limits, budget_cap),
        AlgorithmChoice::Poly if picked == Algorithm::Exact => Err(Error::Unsupported(format!(
            "no polynomial algorithm for {} with the {} variant",
            instance.rule(),
            instance.variant()
        ))),
        AlgorithmChoice::Poly => run_algorithm(instance, picked, limits, budget_cap),
    }
}
