//! Weighted reductions from subset-sum style partition problems. Weight
//! `w_i` of the source becomes one vote of weight `w_i`; a handful of heavy
//! votes fix the current winner.

use num_rational::Ratio;

use super::{
    Certificate, Designation, ForwardPlan, PartitionInstance, PartitionVariant, ReductionKind, ReductionOutput,
    SelectItem,
};
use crate::election::{Election, Price, Ranking, Vote};
use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::vulnerability::{build_instance, Variant};

fn require(src: &PartitionInstance, variant: PartitionVariant) -> Result<u64> {
    if src.variant() != variant {
        return Err(Error::InvalidSource(format!("expected a {variant:?} partition instance")));
    }
    Ok(src.goal())
}

fn r(order: &[usize]) -> Ranking {
    Ranking::from_vec_unchecked(order.to_vec())
}

struct Draft<'a> {
    src: &'a PartitionInstance,
    names: &'a [&'a str],
    tiebreak: &'a [usize],
    rule: Rule,
    stated_winner: usize,
    /// Ranking of every weight vote.
    item: &'a [usize],
    /// Replacement of a weight vote when its weight is chosen / not chosen.
    chosen: Option<&'a [usize]>,
    unchosen: Option<&'a [usize]>,
    /// Fixed votes: ranking, weight, price.
    fixed: Vec<(&'a [usize], u64, Option<Price>)>,
    /// `Some(budget)` for the priced variant, where weight votes cost their weight.
    budget: Option<u64>,
    notes: Vec<String>,
}

impl Draft<'_> {
    fn finish(self, kind: ReductionKind) -> Result<ReductionOutput> {
        let target = 0;
        let mut votes: Vec<Vote> = self
            .src
            .weights()
            .iter()
            .map(|&w| {
                let v = Vote::weighted(r(self.item), w);
                if self.budget.is_some() {
                    v.with_price(Price::Finite(w))
                } else {
                    v
                }
            })
            .collect();
        let n = votes.len();
        for (order, weight, price) in &self.fixed {
            let mut v = Vote::weighted(r(order), *weight);
            v.price = *price;
            votes.push(v);
        }
        let designated: Vec<usize> = votes
            .iter()
            .enumerate()
            .filter(|(_, v)| v.ranking.prefers(target, self.stated_winner))
            .map(|(i, _)| i)
            .collect();
        let mut source_map: Vec<(String, Vec<usize>)> = (0..n).map(|i| (format!("w{}", i + 1), vec![i])).collect();
        source_map.push(("fixed".into(), (n..votes.len()).collect()));
        let items = (0..n)
            .map(|i| SelectItem {
                chosen: self.chosen.map(|o| vec![(i, r(o))]).unwrap_or_default(),
                unchosen: self.unchosen.map(|o| vec![(i, r(o))]).unwrap_or_default(),
            })
            .collect();

        let names = self.names.iter().map(|s| s.to_string()).collect();
        let election = Election::new(names, Some(self.tiebreak.to_vec()), votes)?;
        let variant = if self.budget.is_some() { Variant::DollarNonuniform } else { Variant::Frugal };
        let instance = build_instance(election, self.rule, target, self.budget, variant)?;
        Ok(ReductionOutput {
            reduction: kind,
            instance,
            certificate: Certificate {
                source_map,
                designated,
                designation: Designation::ExactVulnerable,
                stated_winner: self.stated_winner,
                relations: Vec::new(),
                lambda: None,
                forward: ForwardPlan::Select(items),
                notes: self.notes,
            },
        })
    }
}

// Candidate indices shared by the generators below.
const P: usize = 0;
const A: usize = 1;
const B: usize = 2;
const C: usize = 3;

/// Priced weighted plurality, prices equal to weights, budget `K`.
pub fn gen_wplurality_partition(src: &PartitionInstance) -> Result<ReductionOutput> {
    let k = require(src, PartitionVariant::Half)?;
    Draft {
        src,
        names: &["p", "a", "b"],
        tiebreak: &[A, B, P],
        rule: Rule::Plurality,
        stated_winner: B,
        item: &[A, P, B],
        chosen: Some(&[P, A, B]),
        unchosen: None,
        fixed: vec![
            (&[B, P, A], 3 * k, None),
            (&[P, A, B], 2 * k + 1, Some(Price::Finite(2 * k + 1))),
        ],
        budget: Some(k),
        notes: Vec::new(),
    }
    .finish(ReductionKind::WpluralityPartition)
}

/// Frugal weighted maximin with four candidates.
pub fn gen_wmaximin_partition(src: &PartitionInstance) -> Result<ReductionOutput> {
    let k = require(src, PartitionVariant::Half)?;
    Draft {
        src,
        names: &["p", "a", "b", "c"],
        tiebreak: &[P, A, B, C],
        rule: Rule::Maximin,
        stated_winner: A,
        item: &[P, A, B, C],
        chosen: None,
        unchosen: Some(&[P, B, C, A]),
        fixed: vec![(&[C, A, B, P], k, None), (&[B, C, A, P], k, None), (&[A, C, B, P], k, None)],
        budget: None,
        notes: Vec::new(),
    }
    .finish(ReductionKind::WmaximinPartition)
}

/// Frugal weighted Copeland with tie value `alpha < 1` and four candidates.
pub fn gen_wcopeland_partition(src: &PartitionInstance, alpha: Ratio<u64>) -> Result<ReductionOutput> {
    let k = require(src, PartitionVariant::Half)?;
    if alpha >= Ratio::from_integer(1) {
        return Err(Error::ConditionViolated(format!(
            "Copeland reduction needs a tie value below 1, got {alpha}"
        )));
    }
    Draft {
        src,
        names: &["p", "a", "b", "c"],
        tiebreak: &[A, B, C, P],
        rule: Rule::Copeland(alpha),
        stated_winner: A,
        item: &[P, A, B, C],
        chosen: Some(&[P, C, B, A]),
        unchosen: Some(&[P, B, C, A]),
        fixed: vec![(&[A, P, B, C], k + 1, None), (&[C, B, A, P], k + 1, None)],
        budget: None,
        notes: Vec::new(),
    }
    .finish(ReductionKind::WcopelandPartition)
}

/// Frugal weighted Bucklin with four candidates.
pub fn gen_wbucklin_partition(src: &PartitionInstance) -> Result<ReductionOutput> {
    let k = require(src, PartitionVariant::Half)?;
    Draft {
        src,
        names: &["p", "a", "b", "c"],
        tiebreak: &[P, A, B, C],
        rule: Rule::Bucklin,
        stated_winner: A,
        item: &[P, A, B, C],
        chosen: None,
        unchosen: Some(&[P, C, B, A]),
        fixed: vec![(&[A, B, P, C], k, None), (&[C, B, A, P], k, None)],
        budget: None,
        notes: Vec::new(),
    }
    .finish(ReductionKind::WbucklinPartition)
}

fn quarter_draft(src: &PartitionInstance, rule: Rule) -> Result<Draft<'_>> {
    let k = require(src, PartitionVariant::Quarter)?;
    Ok(Draft {
        src,
        names: &["p", "a", "b"],
        tiebreak: &[A, B, P],
        rule,
        stated_winner: A,
        item: &[P, A, B],
        chosen: Some(&[B, P, A]),
        unchosen: None,
        fixed: vec![(&[A, P, B], 3 * k - 1, None), (&[B, A, P], 2 * k, None)],
        budget: None,
        notes: Vec::new(),
    })
}

/// Frugal weighted STV with three candidates, from a quarter-partition.
pub fn gen_wstv_quarter(src: &PartitionInstance) -> Result<ReductionOutput> {
    quarter_draft(src, Rule::Stv)?.finish(ReductionKind::WstvQuarter)
}

/// Frugal weighted plurality with runoff; with three candidates it selects
/// the same winner as STV on every profile of this shape.
pub fn gen_wrunoff_quarter(src: &PartitionInstance) -> Result<ReductionOutput> {
    quarter_draft(src, Rule::Runoff)?.finish(ReductionKind::WrunoffQuarter)
}

/// Maps a half-partition instance with total `2K` to a quarter-partition
/// instance by adding one weight `2K`: the new total is `4K`, the new goal
/// is `K`, and the added weight is too large to be part of any solution.
pub fn partition_to_quarter(src: &PartitionInstance) -> Result<PartitionInstance> {
    require(src, PartitionVariant::Half)?;
    let total = src.total();
    if src.weights().contains(&total) {
        return Err(Error::TriviallyNo);
    }
    let mut weights = src.weights().to_vec();
    weights.push(total);
    PartitionInstance::quarter(weights)
}
