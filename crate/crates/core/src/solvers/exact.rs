use itertools::Itertools;

use super::{Algorithm, Solution};
use crate::election::{Election, Ranking};
use crate::error::{Error, Result};
use crate::rules::winner_unchecked;
use crate::vulnerability::BriberyInstance;

/// Size caps for exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_candidates: usize,
    /// Cap on votes that are vulnerable and affordable within the budget.
    pub max_changeable: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_candidates: 4,
            max_changeable: 6,
        }
    }
}

/// Exhaustive decision over every ranking of every affordable set of
/// vulnerable votes. A YES answer has minimum cost, then fewest changed
/// votes, then the least vote set.
pub fn solve_exact(instance: &BriberyInstance, limits: Limits) -> Result<Solution> {
    if instance.current_winner() == instance.target() {
        return Ok(Solution::yes(instance, Vec::new(), Algorithm::Exact));
    }
    let m = instance.election().num_candidates();
    if m > limits.max_candidates {
        return Err(Error::LimitExceeded(format!(
            "{m} candidates, exact search allows {}",
            limits.max_candidates
        )));
    }
    let changeable = instance.changeable_votes();
    if changeable.len() > limits.max_changeable {
        return Err(Error::LimitExceeded(format!(
            "{} changeable votes, exact search allows {}",
            changeable.len(),
            limits.max_changeable
        )));
    }
    let prices: Vec<u64> = changeable
        .iter()
        .map(|&i| instance.effective_price(i).expect("changeable votes are priced"))
        .collect();
    let budget = instance.budget().unwrap_or(0);
    let k = changeable.len();
    let cost_of = |mask: u32| -> u64 { (0..k).filter(|j| mask >> j & 1 == 1).map(|j| prices[j]).sum() };

    let mut affordable: Vec<(u64, u32)> = (0u32..1 << k)
        .map(|mask| (cost_of(mask), mask))
        .filter(|&(c, _)| c <= budget)
        .collect();
    let members = |mask: u32| -> Vec<usize> { (0..k).filter(|j| mask >> j & 1 == 1).map(|j| changeable[j]).collect() };
    affordable.sort_by_key(|&(c, mask)| (c, mask.count_ones(), members(mask)));

    let is_maximal = |cost: u64, mask: u32| (0..k).all(|j| mask >> j & 1 == 1 || cost + prices[j] > budget);
    let mut search = Search::new(instance);
    let mut dead: Vec<u32> = Vec::new();
    let mut any_feasible = false;
    for &(cost, mask) in &affordable {
        if is_maximal(cost, mask) {
            if search.feasible(&members(mask)).is_some() {
                any_feasible = true;
                break;
            }
            dead.push(mask);
        }
    }
    if !any_feasible {
        return Ok(Solution::no(Algorithm::Exact));
    }
    for &(_, mask) in &affordable {
        if dead.iter().any(|&d| mask & !d == 0) {
            continue;
        }
        if let Some(w) = search.feasible(&members(mask)) {
            return Ok(Solution::yes(instance, w, Algorithm::Exact));
        }
    }
    unreachable!("a feasible maximal set was found")
}

struct Search<'a> {
    instance: &'a BriberyInstance,
    work: Election,
    perms: Vec<Ranking>,
}

impl<'a> Search<'a> {
    fn new(instance: &'a BriberyInstance) -> Self {
        let m = instance.election().num_candidates();
        let perms = (0..m)
            .permutations(m)
            .map(Ranking::from_vec_unchecked)
            .collect();
        Search {
            instance,
            work: instance.election().clone(),
            perms,
        }
    }

    /// Tries all rankings for `votes`. Votes of equal weight are
    /// interchangeable, so only nondecreasing ranking sequences are tried
    /// within each weight class.
    fn feasible(&mut self, votes: &[usize]) -> Option<Vec<(usize, Ranking)>> {
        let orig = self.instance.election().votes();
        let mut slots: Vec<usize> = votes.to_vec();
        slots.sort_by_key(|&i| (orig[i].weight, i));
        let same_class: Vec<bool> = (0..slots.len())
            .map(|s| s > 0 && orig[slots[s]].weight == orig[slots[s - 1]].weight)
            .collect();
        let target = self.instance.target();
        let rule = self.instance.rule().clone();
        let n = slots.len();
        let mut choice = vec![0usize; n];
        let found = 'outer: loop {
            for s in 0..n {
                self.work.votes_mut()[slots[s]].ranking = self.perms[choice[s]].clone();
            }
            if winner_unchecked(&self.work, &rule) == target {
                break 'outer true;
            }
            // Advance to the next nondecreasing-within-class tuple.
            let mut s = n;
            loop {
                if s == 0 {
                    break 'outer false;
                }
                s -= 1;
                if choice[s] + 1 < self.perms.len() {
                    choice[s] += 1;
                    for t in s + 1..n {
                        choice[t] = if same_class[t] { choice[t - 1] } else { 0 };
                    }
                    break;
                }
            }
        };
        let witness = slots.iter().map(|&i| (i, self.work.votes()[i].ranking.clone())).collect();
        for &i in &slots {
            self.work.votes_mut()[i].ranking = orig[i].ranking.clone();
        }
        found.then_some(witness)
    }
}
