//! Reductions from coalitional manipulation.

use super::{fresh_name, Certificate, CmInstance, Designation, ForwardPlan, ReductionKind, ReductionOutput, ScoreRelation};
use crate::election::{positional_scores_unchecked, Election, Price, Ranking, Vote};
use crate::error::{Error, Result};
use crate::rules::{winner_unchecked, Rule};
use crate::vulnerability::{build_instance, Variant};

/// Priced bribery under Borda with unit prices and budget 2, from Borda
/// manipulation with two manipulators.
///
/// The source votes are extended by a dummy `d` and a new leader `q` at the
/// bottom. Two placeholder votes stand in for the manipulators; buying them
/// and putting `p, d` first and `q` last reproduces any manipulation. Pairs
/// of mutually reversed votes then fix every score relative to a common
/// base. Requires `s(x) - s(p) <= 2r - 5` for the source candidate `x` at
/// one-based rank `r` of the placeholder order (candidates sorted by source
/// score), otherwise `q` would not be the current winner.
pub fn gen_uniform_borda_cm(src: &CmInstance) -> Result<ReductionOutput> {
    if src.rule != Rule::Borda {
        return Err(Error::InvalidSource(format!("expected a Borda manipulation instance, got {}", src.rule)));
    }
    if src.manipulators != 2 {
        return Err(Error::InvalidSource(format!(
            "expected exactly 2 manipulators, got {}",
            src.manipulators
        )));
    }
    let source = src.election.expanded();
    let mc = source.num_candidates();
    if mc < 3 {
        return Err(Error::InvalidSource("manipulation source needs at least 3 candidates".into()));
    }
    let p = src.target;
    let s = positional_scores_unchecked(&source, &Rule::Borda.score_vector(mc).expect("positional"));
    let mut order: Vec<usize> = (0..mc).filter(|&x| x != p).collect();
    order.sort_by_key(|&x| (s[x], x));
    for (r, &x) in order.iter().enumerate() {
        let limit = 2 * (r as i64 + 1) - 5;
        if s[x] - s[p] > limit {
            return Err(Error::ConditionViolated(format!(
                "candidate `{}` leads the target by {}, more than {limit} at placeholder rank {}",
                source.name(x),
                s[x] - s[p],
                r + 1
            )));
        }
    }

    let (d, q) = (mc, mc + 1);
    let m = mc + 2;
    let mut names = source.names().to_vec();
    names.push(fresh_name(&names, "d"));
    names.push(fresh_name(&names, "q"));

    let mut rankings: Vec<Ranking> = source
        .votes()
        .iter()
        .map(|v| {
            let mut r = v.ranking.to_vec();
            r.extend([d, q]);
            Ranking::from_vec_unchecked(r)
        })
        .collect();
    let lifted = rankings.len();
    let mut placeholder = order.clone();
    placeholder.extend([d, p, q]);
    rankings.push(Ranking::from_vec_unchecked(placeholder.clone()));
    rankings.push(Ranking::from_vec_unchecked(placeholder));
    let slots = vec![lifted, lifted + 1];

    // Scores on the lifted votes alone, then the pair gadget on top.
    let borda = Rule::Borda.score_vector(m).expect("positional");
    let base = scores(&names, &rankings[..lifted], &borda);
    let n_mc = mc as i64;
    let mut offsets: Vec<(usize, i64)> = order.iter().map(|&x| (x, s[x])).collect();
    offsets.push((p, s[p] - 2));
    offsets.push((q, s[p] + 2 * n_mc - 1));
    // Only differences matter, so shift by the median to keep the gadget small.
    let shift = super::x3c::median(offsets.iter().map(|&(c, x)| base[c] - x).collect());
    let adjust: Vec<(usize, i64)> = offsets.iter().map(|&(c, x)| (c, x - base[c] + shift)).collect();
    let total: i64 = adjust.iter().map(|&(_, x)| x).sum();
    let k = adjust.len() as i64;
    let need = base[d] - shift - total - s[p] + 2 * n_mc + 5;
    let lift = if need > 0 { (need + k) / (k + 1) } else { 0 };

    let mut gadget = Vec::new();
    let mut pairs = 0i64;
    for &(c, x) in &adjust {
        let (up, down, count) = if x >= 0 { (c, d, x + lift) } else { (d, c, -x) };
        let pair = reversed_pair(m, up, down, p, q)?;
        for _ in 0..count {
            gadget.extend(pair.iter().cloned());
        }
        pairs += count;
        if x < 0 && lift > 0 {
            let pair = reversed_pair(m, c, d, p, q)?;
            for _ in 0..lift {
                gadget.extend(pair.iter().cloned());
            }
            pairs += lift;
        }
    }
    let lambda = (m as i64 - 1) * pairs + lift + shift;
    let gadget_start = rankings.len();
    rankings.extend(gadget);

    let designated: Vec<usize> = (0..rankings.len()).filter(|&i| rankings[i].prefers(p, q)).collect();
    let votes: Vec<Vote> = rankings
        .into_iter()
        .map(|r| {
            let vulnerable = r.prefers(p, q);
            let v = Vote::new(r);
            if vulnerable {
                v.with_price(Price::Finite(1))
            } else {
                v
            }
        })
        .collect();
    let total_votes = votes.len();
    let mut tiebreak = vec![q];
    tiebreak.extend(order.iter().copied());
    tiebreak.extend([d, p]);
    let election = Election::new(names, Some(tiebreak), votes)?;
    let instance = build_instance(election, Rule::Borda, p, Some(2), Variant::DollarUniform)?;

    let mut relations: Vec<ScoreRelation> = order
        .iter()
        .map(|&x| ScoreRelation::eq(x, p, s[x] - s[p] + 2).excluding(&slots))
        .collect();
    relations.push(ScoreRelation::eq(q, p, 2 * n_mc - 1));
    relations.push(ScoreRelation::gt(p, d, 2 * n_mc));

    let mut source_map: Vec<(String, Vec<usize>)> = (0..lifted).map(|i| (format!("vote{}", i + 1), vec![i])).collect();
    source_map.push(("manipulator1".into(), vec![slots[0]]));
    source_map.push(("manipulator2".into(), vec![slots[1]]));
    source_map.push(("gadget".into(), (gadget_start..total_votes).collect()));
    Ok(ReductionOutput {
        reduction: ReductionKind::UniformBordaCm,
        instance,
        certificate: Certificate {
            source_map,
            designated,
            designation: Designation::ExactVulnerable,
            stated_winner: q,
            relations,
            lambda: Some(lambda),
            forward: ForwardPlan::ManipulatorSlots {
                slots,
                head: vec![p, d],
                tail: vec![q],
            },
            notes: vec![
                "source candidates are compared without the two placeholder votes; q and d with them".into(),
                "the target must beat every rival strictly, matching a tie-break that puts it last".into(),
            ],
        },
    })
}

fn scores(names: &[String], rankings: &[Ranking], vector: &[i64]) -> Vec<i64> {
    let e = Election::with_possibly_no_votes(names.to_vec(), None, rankings.iter().cloned().map(Vote::new).collect())
        .expect("generated names are valid");
    positional_scores_unchecked(&e, vector)
}

/// Two votes `L, up, down, R` and `rev(R), up, down, rev(L)`. Under Borda
/// every candidate gets the same total except `up` (+1) and `down` (-1).
/// The split and order are chosen so the target sits within one position of
/// the middle in both votes and `leader` never comes right after it.
fn reversed_pair(m: usize, up: usize, down: usize, target: usize, leader: usize) -> Result<[Ranking; 2]> {
    let rest: Vec<usize> = (0..m).filter(|&c| c != up && c != down && c != target && c != leader).collect();
    let mid2 = m as i64 - 1; // twice the middle position
    let mut best: Option<(i64, [Ranking; 2])> = None;
    let place = |list: &mut Vec<usize>, c: usize, at: Option<usize>| {
        if let Some(at) = at {
            list.insert(at, c);
        } else {
            debug_assert!(c == up || c == down);
        }
    };
    let slots = |c: usize, len: usize| -> Vec<Option<usize>> {
        if c == up || c == down {
            vec![None]
        } else {
            (0..=len).map(Some).collect()
        }
    };
    for tp in slots(target, rest.len()) {
        let mut with_target = rest.clone();
        place(&mut with_target, target, tp);
        for lp in slots(leader, with_target.len()) {
            let mut list = with_target.clone();
            place(&mut list, leader, lp);
            for h in 0..=list.len() {
                let (left, right) = list.split_at(h);
                let mut first = left.to_vec();
                first.extend([up, down]);
                first.extend(right);
                let mut second: Vec<usize> = right.iter().rev().copied().collect();
                second.extend([up, down]);
                second.extend(left.iter().rev());
                let mut deviation = 0;
                let mut ok = true;
                for v in [&first, &second] {
                    let pos = v.iter().position(|&c| c == target).expect("present");
                    let dev = (2 * pos as i64 - mid2).abs();
                    ok &= dev <= 2 && v.get(pos + 1) != Some(&leader);
                    deviation += dev;
                }
                if ok && best.as_ref().is_none_or(|(d, _)| deviation < *d) {
                    best = Some((
                        deviation,
                        [Ranking::from_vec_unchecked(first), Ranking::from_vec_unchecked(second)],
                    ));
                }
            }
        }
    }
    best.map(|(_, pair)| pair)
        .ok_or_else(|| Error::ConditionViolated("no balanced pair layout for this candidate count".into()))
}

/// Priced bribery from manipulation under any rule: each manipulator becomes
/// a vote ranking the target first with price 0, every other vulnerable vote
/// costs 1 and the budget is 0.
pub fn embed_cm_dollar(src: &CmInstance) -> Result<ReductionOutput> {
    let e = &src.election;
    let m = e.num_candidates();
    if src.target >= m {
        return Err(Error::UnknownTarget(src.target.to_string()));
    }
    src.rule.validate(m)?;
    let p = src.target;
    let mut default = vec![p];
    default.extend((0..m).filter(|&c| c != p));
    let default = Ranking::from_vec_unchecked(default);
    let fixed = e.votes().len();
    let mut votes = e.votes().to_vec();
    for v in &mut votes {
        v.price = None;
    }
    votes.extend((0..src.manipulators).map(|_| Vote::new(default.clone()).with_price(Price::Finite(0))));
    let slots: Vec<usize> = (fixed..votes.len()).collect();
    let unpriced = Election::new(e.names().to_vec(), Some(e.tiebreak().to_vec()), votes)?;
    let winner = winner_unchecked(&unpriced, &src.rule);
    let votes = unpriced
        .votes()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut v = v.clone();
            if i < fixed && v.ranking.prefers(p, winner) {
                v.price = Some(Price::Finite(1));
            }
            v
        })
        .collect();
    let election = unpriced.with_votes(votes);
    let instance = build_instance(election, src.rule.clone(), p, Some(0), Variant::DollarNonuniform)?;

    let mut notes = Vec::new();
    let designated = if winner == p {
        notes.push("the target already wins when every manipulator ranks it first".into());
        Vec::new()
    } else {
        slots.clone()
    };
    let mut source_map: Vec<(String, Vec<usize>)> = (0..fixed).map(|i| (format!("vote{}", i + 1), vec![i])).collect();
    source_map.extend(slots.iter().enumerate().map(|(j, &i)| (format!("manipulator{}", j + 1), vec![i])));
    Ok(ReductionOutput {
        reduction: ReductionKind::CmDollar,
        instance,
        certificate: Certificate {
            source_map,
            designated,
            designation: Designation::Purchasable,
            stated_winner: winner,
            relations: Vec::new(),
            lambda: None,
            forward: ForwardPlan::ManipulatorSlots {
                slots,
                head: Vec::new(),
                tail: Vec::new(),
            },
            notes,
        },
    })
}
