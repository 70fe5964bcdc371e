//! Priced bribery for plurality, veto and small budgets.

use super::manipulation::cm_greedy;
use super::weighted::assign_rows;
use super::{require_priced, require_unweighted, Algorithm, Solution};
use crate::election::Ranking;
use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::vulnerability::BriberyInstance;

pub const DEFAULT_BUDGET_CAP: u64 = 3;

fn scores(instance: &BriberyInstance, rule: &Rule) -> Vec<i64> {
    let m = instance.election().num_candidates();
    crate::election::positional_scores_unchecked(instance.election(), &rule.score_vector(m).expect("positional"))
}

/// Minimum-cost priced bribery under unweighted plurality.
pub fn solve_dollar_plurality(instance: &BriberyInstance) -> Result<Solution> {
    if *instance.rule() != Rule::Plurality {
        return Err(Error::Unsupported(format!("dollar_plurality cannot solve {}", instance.rule())));
    }
    require_unweighted(instance, "dollar_plurality")?;
    require_priced(instance, "dollar_plurality")?;
    if instance.current_winner() == instance.target() {
        return Ok(Solution::yes(instance, Vec::new(), Algorithm::DollarPlurality));
    }
    let e = instance.election();
    let m = e.num_candidates();
    let p = instance.target();
    let budget = instance.budget().unwrap_or(0);
    let s = scores(instance, &Rule::Plurality);

    // Flippable votes grouped by their top candidate, cheapest first.
    let mut by_top: Vec<Vec<(u64, usize)>> = vec![Vec::new(); m];
    for i in instance.changeable_votes() {
        let top = e.votes()[i].ranking.top();
        if top != p {
            by_top[top].push((instance.effective_price(i).expect("changeable"), i));
        }
    }
    for g in &mut by_top {
        g.sort();
    }
    let flippable: usize = by_top.iter().map(Vec::len).sum();

    let mut best: Option<(u64, usize, Vec<usize>)> = None;
    for flips in 0..=flippable {
        let target_score = s[p] + flips as i64;
        let mut chosen = Vec::new();
        let mut ok = true;
        let mut used = vec![0usize; m];
        for x in (0..m).filter(|&x| x != p) {
            let need = (s[x] - target_score + i64::from(e.tiebreak_prefers(x, p))).max(0) as usize;
            if need > by_top[x].len() {
                ok = false;
                break;
            }
            used[x] = need;
            chosen.extend(by_top[x][..need].iter().copied());
        }
        if !ok || chosen.len() > flips {
            continue;
        }
        let mut spare: Vec<(u64, usize)> = (0..m)
            .flat_map(|x| by_top[x][used[x]..].iter().copied())
            .collect();
        spare.sort();
        chosen.extend(spare.into_iter().take(flips - chosen.len()));
        let cost: u64 = chosen.iter().map(|&(c, _)| c).sum();
        if cost > budget {
            continue;
        }
        if best.as_ref().is_none_or(|(bc, bn, _)| (cost, flips) < (*bc, *bn)) {
            best = Some((cost, flips, chosen.iter().map(|&(_, i)| i).collect()));
        }
    }
    Ok(match best {
        None => Solution::no(Algorithm::DollarPlurality),
        Some((_, _, votes)) => {
            let w = votes
                .into_iter()
                .map(|i| (i, e.votes()[i].ranking.with_front(p)))
                .collect();
            Solution::yes(instance, w, Algorithm::DollarPlurality)
        }
    })
}

/// Minimum-cost priced bribery under unweighted veto.
///
/// Vulnerable votes never veto the target, so its veto count is fixed. Each
/// rival `x` must end with at least `need(x)` vetoes. A bought vote moves one
/// veto from a rival with surplus to a rival with a deficit; the cheapest
/// feasible purchase takes the `deficit` cheapest votes from a pool holding,
/// for each surplus rival, its `surplus` cheapest vulnerable vetoers.
pub fn solve_dollar_veto(instance: &BriberyInstance) -> Result<Solution> {
    if *instance.rule() != Rule::Veto {
        return Err(Error::Unsupported(format!("dollar_veto cannot solve {}", instance.rule())));
    }
    require_unweighted(instance, "dollar_veto")?;
    require_priced(instance, "dollar_veto")?;
    if instance.current_winner() == instance.target() {
        return Ok(Solution::yes(instance, Vec::new(), Algorithm::DollarVeto));
    }
    let e = instance.election();
    let m = e.num_candidates();
    let p = instance.target();
    let budget = instance.budget().unwrap_or(0);
    let vetoes: Vec<i64> = scores(instance, &Rule::Veto).iter().map(|s| -s).collect();
    let balance: Vec<i64> = (0..m)
        .map(|x| if x == p { 0 } else { vetoes[x] - vetoes[p] - i64::from(e.tiebreak_prefers(x, p)) })
        .collect();

    let mut vetoers: Vec<Vec<(u64, usize)>> = vec![Vec::new(); m];
    for i in instance.changeable_votes() {
        let last = e.votes()[i].ranking.last();
        vetoers[last].push((instance.effective_price(i).expect("changeable"), i));
    }
    let mut pool = Vec::new();
    for x in (0..m).filter(|&x| x != p && balance[x] > 0) {
        vetoers[x].sort();
        pool.extend(vetoers[x].iter().take(balance[x] as usize).copied());
    }
    pool.sort();
    let mut deficits: Vec<usize> = Vec::new();
    for x in (0..m).filter(|&x| x != p && balance[x] < 0) {
        deficits.extend(std::iter::repeat_n(x, (-balance[x]) as usize));
    }
    if pool.len() < deficits.len() {
        return Ok(Solution::no(Algorithm::DollarVeto));
    }
    let bought = &pool[..deficits.len()];
    if bought.iter().map(|&(c, _)| c).sum::<u64>() > budget {
        return Ok(Solution::no(Algorithm::DollarVeto));
    }
    let w = bought
        .iter()
        .zip(&deficits)
        .map(|(&(_, i), &x)| (i, e.votes()[i].ranking.with_back(x)))
        .collect();
    Ok(Solution::yes(instance, w, Algorithm::DollarVeto))
}

/// Priced bribery for k-approval, Bucklin and runoff when the budget is a
/// small constant: every zero-price vulnerable vote is freed, then each
/// affordable set of priced votes is tried with a manipulation solver.
pub fn solve_dollar_budgeted(instance: &BriberyInstance, cap: u64) -> Result<Solution> {
    if !matches!(instance.rule(), Rule::KApproval(_) | Rule::Bucklin | Rule::Runoff) {
        return Err(Error::Unsupported(format!("dollar_budgeted cannot solve {}", instance.rule())));
    }
    require_unweighted(instance, "dollar_budgeted")?;
    require_priced(instance, "dollar_budgeted")?;
    let budget = instance.budget().unwrap_or(0);
    if budget > cap {
        return Err(Error::BudgetTooLarge { budget, cap });
    }
    if instance.current_winner() == instance.target() {
        return Ok(Solution::yes(instance, Vec::new(), Algorithm::DollarBudgeted));
    }
    let changeable = instance.changeable_votes();
    let (free, priced): (Vec<usize>, Vec<usize>) =
        changeable.iter().partition(|&&i| instance.effective_price(i) == Some(0));

    let mut subsets: Vec<Vec<usize>> = Vec::new();
    collect_subsets(instance, &priced, 0, budget, &mut Vec::new(), &mut subsets);

    let mut best: Option<Solution> = None;
    for extra in subsets {
        let mut open = free.clone();
        open.extend(extra);
        open.sort();
        if let Some(w) = try_free(instance, &open)? {
            let sol = Solution::yes(instance, w, Algorithm::DollarBudgeted);
            if best
                .as_ref()
                .is_none_or(|b| (sol.cost, sol.witness.len()) < (b.cost, b.witness.len()))
            {
                best = Some(sol);
            }
        }
    }
    Ok(best.unwrap_or_else(|| Solution::no(Algorithm::DollarBudgeted)))
}

fn collect_subsets(
    instance: &BriberyInstance,
    priced: &[usize],
    from: usize,
    left: u64,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(current.clone());
    for j in from..priced.len() {
        let c = instance.effective_price(priced[j]).expect("changeable");
        if c <= left {
            current.push(priced[j]);
            collect_subsets(instance, priced, j + 1, left - c, current, out);
            current.pop();
        }
    }
}

/// Treats `open` as free manipulators and the rest as fixed.
pub(crate) fn try_free(instance: &BriberyInstance, open: &[usize]) -> Result<Option<Vec<(usize, Ranking)>>> {
    let e = instance.election();
    let fixed_votes = e
        .votes()
        .iter()
        .enumerate()
        .filter(|(i, _)| !open.contains(i))
        .map(|(_, v)| v.clone())
        .collect();
    let fixed = e.with_votes(fixed_votes);
    let weights: Vec<u64> = open.iter().map(|&i| e.votes()[i].weight).collect();
    Ok(cm_greedy(&fixed, instance.rule(), &weights, instance.target())?.map(|rows| assign_rows(instance, open, rows)))
}
