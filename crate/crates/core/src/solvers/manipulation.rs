//! Polynomial coalitional manipulation: given fixed votes and a number of
//! free voters, find free ballots that make the target win (ties broken by
//! the election's tie-break order).

use crate::election::{positional_scores_unchecked, Election, Ranking, Vote};
use crate::error::{Error, Result};
use crate::rules::{winner_unchecked, Rule};

/// Free-vote rankings (one per entry of `free_weights`, same order) under
/// which `target` wins the combined profile, or `None` if none exist.
///
/// Supported: plurality with any weights; veto, k-approval, k-veto, Bucklin
/// and runoff with unit weights; maximin and Copeland with any weights when
/// there are exactly three candidates.
pub fn cm_greedy(fixed: &Election, rule: &Rule, free_weights: &[u64], target: usize) -> Result<Option<Vec<Ranking>>> {
    let m = fixed.num_candidates();
    rule.validate(m)?;
    if target >= m {
        return Err(Error::UnknownTarget(target.to_string()));
    }
    if free_weights.contains(&0) {
        return Err(Error::InvalidElection("free vote with weight 0".into()));
    }
    let unit = free_weights.iter().all(|&w| w == 1);
    let cm = Cm {
        fixed,
        target,
        n: free_weights.len(),
    };
    if free_weights.is_empty() {
        return Ok((winner_unchecked(fixed, rule) == target).then(Vec::new));
    }
    let rows = match rule {
        Rule::Plurality => cm.check(rule, free_weights, vec![cm.top_first(); cm.n]),
        Rule::Maximin | Rule::Copeland(_) if m == 3 => cm.three_candidates(rule, free_weights),
        _ if !unit => {
            return Err(Error::Unsupported(format!("weighted manipulation under {rule}")));
        }
        Rule::KApproval(k) => cm.approval(*k),
        Rule::Veto => cm.veto(1),
        Rule::KVeto(k) => cm.veto(*k),
        Rule::Bucklin => cm.bucklin(),
        Rule::Runoff => cm.runoff(),
        other => return Err(Error::Unsupported(format!("no polynomial manipulation algorithm for {other}"))),
    };
    if let Some(r) = &rows {
        debug_assert_eq!(
            winner_unchecked(&combine(fixed, r, free_weights), rule),
            target,
            "manipulation construction must make the target win"
        );
    }
    Ok(rows)
}

pub(crate) fn combine(fixed: &Election, rows: &[Ranking], weights: &[u64]) -> Election {
    let mut votes = fixed.votes().to_vec();
    votes.extend(rows.iter().zip(weights).map(|(r, &w)| Vote::weighted(r.clone(), w)));
    fixed.with_votes(votes)
}

struct Cm<'a> {
    fixed: &'a Election,
    target: usize,
    n: usize,
}

impl Cm<'_> {
    fn m(&self) -> usize {
        self.fixed.num_candidates()
    }

    fn others(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.m()).filter(move |&c| c != self.target)
    }

    /// `1` when `x` beats the target in the tie-break order.
    fn beats_target(&self, x: usize) -> i64 {
        i64::from(self.fixed.tiebreak_prefers(x, self.target))
    }

    fn top_first(&self) -> Ranking {
        Ranking::identity(self.m()).with_front(self.target)
    }

    fn check(&self, rule: &Rule, weights: &[u64], rows: Vec<Ranking>) -> Option<Vec<Ranking>> {
        (winner_unchecked(&combine(self.fixed, &rows, weights), rule) == self.target).then_some(rows)
    }

    /// Ranking: target, then `middle` in order, then `tail` in order, then the rest.
    fn row(&self, middle: &[usize], tail: &[usize]) -> Ranking {
        let mut r = vec![self.target];
        r.extend_from_slice(middle);
        let rest: Vec<usize> = self
            .others()
            .filter(|c| !middle.contains(c) && !tail.contains(c))
            .collect();
        r.extend(rest);
        r.extend_from_slice(tail);
        Ranking::from_vec_unchecked(r)
    }

    /// Spreads `counts[x]` copies of each candidate (each at most `n`) over
    /// `n` rows cyclically, so no row receives a candidate twice.
    fn spread(&self, counts: &[usize]) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.n];
        let mut j = 0;
        for (x, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                rows[j % self.n].push(x);
                j += 1;
            }
        }
        rows
    }

    fn approval(&self, k: usize) -> Option<Vec<Ranking>> {
        let m = self.m();
        let n = self.n as i64;
        let vector = Rule::KApproval(k).score_vector(m).expect("positional");
        let s = positional_scores_unchecked(self.fixed, &vector);
        let top = s[self.target] + n;
        let mut caps = vec![0i64; m];
        for x in self.others() {
            caps[x] = top - s[x] - self.beats_target(x);
            if caps[x] < 0 {
                return None;
            }
        }
        let mut left = n * (k as i64 - 1);
        if self.others().map(|x| caps[x].min(n)).sum::<i64>() < left {
            return None;
        }
        let mut counts = vec![0usize; m];
        for x in self.others() {
            let take = caps[x].min(n).min(left);
            counts[x] = take as usize;
            left -= take;
        }
        Some(self.spread(&counts).iter().map(|approved| self.row(approved, &[])).collect())
    }

    fn veto(&self, k: usize) -> Option<Vec<Ranking>> {
        let m = self.m();
        let n = self.n as i64;
        let vector = Rule::KVeto(k).score_vector(m).expect("positional");
        let vetoes: Vec<i64> = positional_scores_unchecked(self.fixed, &vector).iter().map(|s| -s).collect();
        let mut counts = vec![0i64; m];
        for x in self.others() {
            counts[x] = (vetoes[self.target] + self.beats_target(x) - vetoes[x]).max(0);
            if counts[x] > n {
                return None;
            }
        }
        let mut left = n * k as i64 - counts.iter().sum::<i64>();
        if left < 0 {
            return None;
        }
        for x in self.others() {
            let add = (n - counts[x]).min(left);
            counts[x] += add;
            left -= add;
        }
        let counts: Vec<usize> = counts.iter().map(|&c| c as usize).collect();
        Some(self.spread(&counts).iter().map(|vetoed| self.row(&[], vetoed)).collect())
    }

    fn bucklin(&self) -> Option<Vec<Ranking>> {
        let m = self.m();
        let n = self.n;
        let p = self.target;
        let total = self.fixed.total_weight() + n as u64;
        // within[x][l] = fixed weight ranking x in the top l positions.
        let mut within = vec![vec![0u64; m + 1]; m];
        for v in self.fixed.votes() {
            for (pos, &c) in v.ranking.iter().enumerate() {
                for slot in &mut within[c][pos + 1..=m] {
                    *slot += v.weight;
                }
            }
        }
        let depth = (1..=m)
            .find(|&l| 2 * (within[p][l] + n as u64) > total)
            .expect("full depth is a majority");
        if depth == 1 {
            return Some(vec![self.top_first(); n]);
        }
        let half = total / 2;
        let cap = |used: u64| -> Option<usize> { half.checked_sub(used).map(|c| (c as usize).min(n)) };
        // Candidates beating p on ties must stay out of the top `depth`;
        // the others only out of the top `depth - 1`.
        let mut first_class = vec![false; m];
        let mut limit = vec![0usize; m];
        for x in self.others() {
            first_class[x] = self.fixed.tiebreak_prefers(x, p);
            limit[x] = if first_class[x] {
                cap(within[x][depth])?
            } else {
                cap(within[x][depth - 1])?
            };
        }
        let inner_slots = depth - 2;
        let mut inner = vec![0usize; m];
        let mut edge = vec![0usize; m];
        let mut left = n * inner_slots;
        for pass_first in [false, true] {
            for x in self.others().filter(|&x| first_class[x] == pass_first) {
                let take = limit[x].min(left);
                inner[x] = take;
                left -= take;
            }
        }
        if left > 0 {
            return None;
        }
        let mut left = n;
        for pass_first in [false, true] {
            for x in self.others().filter(|&x| first_class[x] == pass_first) {
                let room = (if first_class[x] { limit[x] } else { n }) - inner[x];
                let take = room.min(left);
                edge[x] = take;
                left -= take;
            }
        }
        if left > 0 {
            return None;
        }
        let mut rows = Vec::with_capacity(n);
        for remaining in (1..=n).rev() {
            let load = |x: usize| inner[x] + edge[x];
            let e = self
                .others()
                .filter(|&x| edge[x] > 0)
                .max_by_key(|&x| (load(x), inner[x] == 0, std::cmp::Reverse(x)))?;
            debug_assert!(load(e) <= remaining);
            let mut mids: Vec<usize> = self.others().filter(|&x| x != e && inner[x] > 0).collect();
            mids.sort_by_key(|&x| (std::cmp::Reverse(load(x)), x));
            if mids.len() < inner_slots {
                return None;
            }
            mids.truncate(inner_slots);
            edge[e] -= 1;
            for &x in &mids {
                inner[x] -= 1;
            }
            mids.push(e);
            rows.push(self.row(&mids, &[]));
        }
        Some(rows)
    }

    fn runoff(&self) -> Option<Vec<Ranking>> {
        let weights = vec![1u64; self.n];
        for q in self.others() {
            let p_first = self.row(&[q], &[]);
            let q_first = p_first.with_front(q);
            for against in 0..=self.n {
                let mut rows = vec![p_first.clone(); self.n - against];
                rows.extend(std::iter::repeat_n(q_first.clone(), against));
                if let Some(r) = self.check(&Rule::Runoff, &weights, rows) {
                    return Some(r);
                }
            }
        }
        None
    }

    /// Target on top of every free vote; a subset-sum table over the free
    /// weights decides how much weight ranks `a` above `b`.
    fn three_candidates(&self, rule: &Rule, weights: &[u64]) -> Option<Vec<Ranking>> {
        let others: Vec<usize> = self.others().collect();
        let (a, b) = (others[0], others[1]);
        let total: u64 = weights.iter().sum();
        let size = total as usize + 1;
        // first[s] = index of the item that first made sum s reachable.
        let mut first: Vec<Option<usize>> = vec![None; size];
        let mut reach = vec![false; size];
        reach[0] = true;
        for (i, &w) in weights.iter().enumerate() {
            let w = w as usize;
            for s in (w..size).rev() {
                if reach[s - w] && !reach[s] {
                    reach[s] = true;
                    first[s] = Some(i);
                }
            }
        }
        let ab = Ranking::from_vec_unchecked(vec![self.target, a, b]);
        let ba = Ranking::from_vec_unchecked(vec![self.target, b, a]);
        for s in (0..size).filter(|&s| reach[s]) {
            let mut chosen = vec![false; weights.len()];
            let mut rest = s;
            while rest > 0 {
                let i = first[rest].expect("reachable sums have a parent");
                chosen[i] = true;
                rest -= weights[i] as usize;
            }
            let rows = chosen.iter().map(|&c| if c { ab.clone() } else { ba.clone() }).collect();
            if let Some(r) = self.check(rule, weights, rows) {
                return Some(r);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::testutil::election;
    use num_rational::Ratio;

    #[test]
    fn two_approval_example() {
        // Fixed scores under 2-approval: p 1, a 3, b 0, c 0.
        let fixed = election(&["p", "a", "b", "c"], "p>a>b>c", &["a>p>b>c", "a>b>c>p", "a>c>b>p"]);
        let rows = cm_greedy(&fixed, &Rule::KApproval(2), &[1, 1], 0).unwrap().unwrap();
        assert_eq!(rows.len(), 2);
        let combined = combine(&fixed, &rows, &[1, 1]);
        assert_eq!(winner_unchecked(&combined, &Rule::KApproval(2)), 0);
    }

    #[test]
    fn no_free_votes() {
        let fixed = election(&["p", "a"], "p>a", &["p>a"]);
        assert_eq!(cm_greedy(&fixed, &Rule::Bucklin, &[], 0).unwrap(), Some(vec![]));
        assert_eq!(cm_greedy(&fixed, &Rule::Bucklin, &[], 1).unwrap(), None);
    }

    #[test]
    fn weighted_maximin_three_candidates() {
        let fixed = election(&["p", "a", "b"], "p>a>b", &["a>b>p*2"]);
        let rows = cm_greedy(&fixed, &Rule::Maximin, &[1, 1, 1], 0).unwrap().unwrap();
        let combined = combine(&fixed, &rows, &[1, 1, 1]);
        assert_eq!(winner_unchecked(&combined, &Rule::Maximin), 0);
        let cope = Rule::Copeland(Ratio::new(1, 2));
        assert!(cm_greedy(&fixed, &cope, &[1, 1, 1], 0).unwrap().is_some());
    }

    #[test]
    fn unsupported_combinations() {
        let fixed = election(&["p", "a", "b"], "p>a>b", &["a>b>p"]);
        assert!(matches!(cm_greedy(&fixed, &Rule::Borda, &[1], 0), Err(Error::Unsupported(_))));
        assert!(matches!(cm_greedy(&fixed, &Rule::Veto, &[2], 0), Err(Error::Unsupported(_))));
    }
}
