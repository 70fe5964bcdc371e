//! Exact-cover reductions for positional rules. Each set `S_i` of the source
//! yields one designated vote whose replacement, when `S_i` is in the cover,
//! shifts exactly the right score onto the target.

use super::gadget::realize_scores;
use super::{Certificate, Designation, ForwardPlan, ReductionKind, ReductionOutput, ScoreRelation, SelectItem, X3cInstance};
use crate::election::{positional_scores_unchecked, Election, Price, Ranking, Vote};
use crate::error::{Error, Result};
use crate::rules::{normalize_score_vector, Rule};
use crate::vulnerability::{build_instance, Variant};

/// `(N-1, N-2, ..., 0)`.
pub fn borda_vector(n: usize) -> Vec<i64> {
    (0..n as i64).rev().collect()
}

/// The common gap `g > 0` if entries `l, l+1, l+2, l+3` (one-based) of
/// `vector` drop by the same amount, which is what the scoring reduction
/// needs at the position where the displaced candidate sits.
pub fn scoring_gap_at(vector: &[i64], l: usize) -> Option<i64> {
    if l == 0 || l + 3 > vector.len() {
        return None;
    }
    let g = vector[l - 1] - vector[l];
    let equal = (l..l + 3).all(|i| vector[i - 1] - vector[i] == g);
    (g > 0 && equal).then_some(g)
}

/// The stronger textbook condition: `a_i - a_{i+1} = a_{i+1} - a_{i+2} > 0`
/// for `i = l, ..., l+3` (one-based).
pub fn five_gap_condition_holds(vector: &[i64], l: usize) -> bool {
    if l == 0 || l + 5 > vector.len() {
        return false;
    }
    (l..=l + 3).all(|i| {
        let d1 = vector[i - 1] - vector[i];
        let d2 = vector[i] - vector[i + 1];
        d1 == d2 && d1 > 0
    })
}

/// Collects the parts every generator in this module shares.
struct Draft {
    names: Vec<String>,
    tiebreak: Vec<usize>,
    rule: Rule,
    target: usize,
    stated_winner: usize,
    /// One designated vote per source set, in set order.
    designated: Vec<Ranking>,
    /// Replacement for each designated vote when its set is chosen.
    replacements: Vec<Ranking>,
    /// Votes not tied to a single set, with their source-map label.
    extra: Vec<(String, Vec<Ranking>)>,
    /// Per set, extra votes emitted right after the designated one.
    companions: Vec<Vec<Ranking>>,
    /// `Some(budget)`: designated votes cost 1, other vulnerable votes are
    /// unaffordable. `None`: the frugal variant.
    budget: Option<u64>,
    relations: Vec<ScoreRelation>,
    lambda: Option<i64>,
    notes: Vec<String>,
}

impl Draft {
    fn finish(self, kind: ReductionKind) -> Result<ReductionOutput> {
        let mut rankings = Vec::new();
        let mut source_map = Vec::new();
        let mut designated = Vec::new();
        let mut items = Vec::new();
        for (i, (v, nu)) in self.designated.into_iter().zip(self.replacements).enumerate() {
            let idx = rankings.len();
            designated.push(idx);
            rankings.push(v);
            let companions = self.companions.get(i).cloned().unwrap_or_default();
            let mut mapped = vec![idx];
            for c in companions {
                mapped.push(rankings.len());
                rankings.push(c);
            }
            source_map.push((format!("S{}", i + 1), mapped));
            items.push(SelectItem {
                chosen: vec![(idx, nu)],
                unchosen: Vec::new(),
            });
        }
        for (label, votes) in self.extra {
            let start = rankings.len();
            rankings.extend(votes);
            source_map.push((label, (start..rankings.len()).collect()));
        }

        let votes = rankings
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let vulnerable = r.prefers(self.target, self.stated_winner);
                let vote = Vote::new(r);
                match (self.budget, vulnerable) {
                    (Some(_), true) if designated.binary_search(&i).is_ok() => vote.with_price(Price::Finite(1)),
                    (Some(_), true) => vote.with_price(Price::Infinite),
                    _ => vote,
                }
            })
            .collect();
        let election = Election::new(self.names, Some(self.tiebreak), votes)?;
        let variant = if self.budget.is_some() { Variant::DollarUniform } else { Variant::Frugal };
        let instance = build_instance(election, self.rule, self.target, self.budget, variant)?;
        let designation = if self.budget.is_some() {
            Designation::Purchasable
        } else {
            Designation::ExactVulnerable
        };
        Ok(ReductionOutput {
            reduction: kind,
            instance,
            certificate: Certificate {
                source_map,
                designated,
                designation,
                stated_winner: self.stated_winner,
                relations: self.relations,
                lambda: self.lambda,
                forward: ForwardPlan::Select(items),
                notes: self.notes,
            },
        })
    }
}

fn ranking(parts: &[&[usize]]) -> Ranking {
    Ranking::from_vec_unchecked(parts.concat())
}

fn complement(universe: usize, set: &[usize; 3]) -> Vec<usize> {
    (0..universe).filter(|x| !set.contains(x)).collect()
}

fn universe_names(src: &X3cInstance) -> Vec<String> {
    src.universe().iter().map(|u| format!("u{u}")).collect()
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Adds the realization gadget: `offsets` are target scores relative to the
/// common base for the named candidates; dummies must end more than `gap`
/// below it. Returns the gadget votes and the base.
fn realize_on_top(
    names: &[String],
    base: &[Ranking],
    vector: &[i64],
    offsets: &[(usize, i64)],
    dummies: &[usize],
    gap: i64,
) -> Result<(Vec<Ranking>, i64)> {
    let m = names.len();
    let s = base_scores(names, base, vector);
    // Only differences matter, so shift by the median to keep the gadget small.
    let shift = median(offsets.iter().map(|&(c, x)| s[c] - x).collect());
    let adjust: Vec<(usize, i64)> = offsets.iter().map(|&(c, x)| (c, x - s[c] + shift)).collect();
    let margin = dummies.iter().map(|&d| s[d]).max().unwrap_or(0) - shift + gap + 1;
    let r = realize_scores(m, &adjust, dummies, vector, margin)?;
    Ok((r.votes, r.lambda + shift))
}

pub(crate) fn median(mut v: Vec<i64>) -> i64 {
    v.sort_unstable();
    v.get(v.len() / 2).copied().unwrap_or(0)
}

/// Frugal bribery under Borda. Candidates: the universe, `5|U|` dummies,
/// the target `p`, the winner `c` and a helper `z`.
pub fn gen_borda_x3c(src: &X3cInstance) -> Result<ReductionOutput> {
    let m = src.universe().len();
    let third = m / 3;
    let u: Vec<usize> = (0..m).collect();
    let d: Vec<usize> = (m..6 * m).collect();
    let (p, c, z) = (6 * m, 6 * m + 1, 6 * m + 2);
    let mut names = universe_names(src);
    names.extend(numbered("d", 5 * m));
    names.extend(["p", "c", "z"].map(String::from));

    let mut designated = Vec::new();
    let mut replacements = Vec::new();
    let mut companions = Vec::new();
    for i in 0..src.sets().len() {
        let s = src.sorted_set(i);
        let rest = complement(m, &s);
        let rest_rev: Vec<usize> = rest.iter().rev().copied().collect();
        let s_rev: Vec<usize> = s.iter().rev().copied().collect();
        let d_rev: Vec<usize> = d.iter().rev().copied().collect();
        designated.push(ranking(&[&[p], &d, &rest, &[c, z], &s]));
        replacements.push(ranking(&[&[p], &d, &rest, &[z], &s, &[c]]));
        companions.push(vec![ranking(&[&s_rev, &[z, c], &rest_rev, &d_rev, &[p]])]);
    }

    // Four disjoint dummy blocks for the two balancing votes.
    let (d1, tail) = d.split_at(4 * third - 2);
    let (d2, tail) = tail.split_at(m);
    let (d3, tail) = tail.split_at(m - 2);
    let (d4, unused) = tail.split_at(5 * third - 1);
    let others = |used: &[&[usize]]| -> Vec<usize> {
        u.iter()
            .chain(&d)
            .copied()
            .filter(|x| !used.iter().any(|b| b.contains(x)))
            .collect()
    };
    let u_rev: Vec<usize> = u.iter().rev().copied().collect();
    let mu1 = ranking(&[&[z, c], d1, &[p], d2, &u, &others(&[d1, d2, &u])]);
    let mu2 = ranking(&[&u_rev, d3, &[c, p], d4, &[z], &others(&[d3, d4, &u])]);
    debug_assert!(!unused.is_empty());

    let mut relations: Vec<ScoreRelation> = u.iter().map(|&x| ScoreRelation::eq(x, p, -1)).collect();
    relations.push(ScoreRelation::eq(c, p, 4 * third as i64));
    relations.push(ScoreRelation::eq(z, p, -(third as i64)));
    relations.extend(d.iter().map(|&x| ScoreRelation::gt(p, x, 0)));

    let mut tiebreak = vec![p, c, z];
    tiebreak.extend(u.iter().chain(&d));
    Draft {
        names,
        tiebreak,
        rule: Rule::Borda,
        target: p,
        stated_winner: c,
        designated,
        replacements,
        extra: vec![("balance".into(), vec![mu1, mu2])],
        companions,
        budget: None,
        relations,
        lambda: None,
        notes: vec!["the first balancing vote places |U| dummies after p, not |U|-1, so universe elements sit exactly one point below p".into()],
    }
    .finish(ReductionKind::BordaX3c)
}

/// Priced bribery under k-approval, `k >= 5`. Candidates: the universe,
/// `k - 1` dummies, the target `p` and the winner `q`.
pub fn gen_kapproval_x3c(src: &X3cInstance, k: usize) -> Result<ReductionOutput> {
    if k < 5 {
        return Err(Error::ConditionViolated(format!("k-approval reduction needs k >= 5, got {k}")));
    }
    let m = src.universe().len();
    let third = (m / 3) as i64;
    let u: Vec<usize> = (0..m).collect();
    let d: Vec<usize> = (m..m + k - 1).collect();
    let (p, q) = (m + k - 1, m + k);
    let mut names = universe_names(src);
    names.extend(numbered("d", k - 1));
    names.extend(["p", "q"].map(String::from));
    let n = names.len();

    let mut designated = Vec::new();
    let mut replacements = Vec::new();
    for i in 0..src.sets().len() {
        let s = src.sorted_set(i);
        let rest = complement(m, &s);
        designated.push(ranking(&[&[p, q], &s, &d, &rest]));
        replacements.push(ranking(&[&[p], &d, &[q], &s, &rest]));
    }

    let vector = Rule::KApproval(k).score_vector(n).expect("positional");
    let mut offsets: Vec<(usize, i64)> = u.iter().map(|&x| (x, 1)).collect();
    offsets.push((p, 0));
    offsets.push((q, third));
    let (gadget, lambda) = realize_on_top(&names, &designated, &vector, &offsets, &d, third)?;

    let mut relations = vec![ScoreRelation::eq(q, p, third)];
    relations.extend(u.iter().map(|&x| ScoreRelation::eq(x, p, 1)));
    relations.extend(d.iter().map(|&x| ScoreRelation::gt(p, x, third)));

    let mut tiebreak = vec![p, q];
    tiebreak.extend(u.iter().chain(&d));
    Draft {
        names,
        tiebreak,
        rule: Rule::KApproval(k),
        target: p,
        stated_winner: q,
        designated,
        replacements,
        extra: vec![("gadget".into(), gadget)],
        companions: Vec::new(),
        budget: Some(third as u64),
        relations,
        lambda: Some(lambda),
        notes: vec!["tie-break p > q > universe > dummies, so q wins even when |U| = 3".into()],
    }
    .finish(ReductionKind::KapprovalX3c)
}

/// Priced bribery under k-veto, `k >= 3`. Candidates: the universe, `k - 3`
/// fillers, the target `p`, three leaders and one dummy.
pub fn gen_kveto_x3c(src: &X3cInstance, k: usize) -> Result<ReductionOutput> {
    if k < 3 {
        return Err(Error::ConditionViolated(format!("k-veto reduction needs k >= 3, got {k}")));
    }
    let m = src.universe().len();
    let third = (m / 3) as i64;
    let u: Vec<usize> = (0..m).collect();
    let fill: Vec<usize> = (m..m + k - 3).collect();
    let p = m + k - 3;
    let leaders = [p + 1, p + 2, p + 3];
    let dummy = p + 4;
    let mut names = universe_names(src);
    names.extend(numbered("q", k - 3));
    names.extend(["p", "a1", "a2", "a3", "d"].map(String::from));
    let n = names.len();

    let mut designated = Vec::new();
    let mut replacements = Vec::new();
    for i in 0..src.sets().len() {
        let s = src.sorted_set(i);
        let rest = complement(m, &s);
        designated.push(ranking(&[&[p], &rest, &leaders, &[dummy], &s, &fill]));
        replacements.push(ranking(&[&[p], &u, &[dummy], &leaders, &fill]));
    }

    let vector = normalize_score_vector(&Rule::KVeto(k).score_vector(n).expect("positional"))?;
    let mut offsets: Vec<(usize, i64)> = u.iter().map(|&x| (x, -2)).collect();
    offsets.extend(fill.iter().map(|&x| (x, -1)));
    offsets.push((p, 0));
    offsets.extend(leaders.iter().map(|&a| (a, third - 1)));
    let (gadget, lambda) = realize_on_top(&names, &designated, &vector, &offsets, &[dummy], 0)?;

    let mut relations: Vec<ScoreRelation> = u.iter().map(|&x| ScoreRelation::eq(x, p, -2)).collect();
    relations.extend(fill.iter().map(|&x| ScoreRelation::eq(x, p, -1)));
    relations.extend(leaders.iter().map(|&a| ScoreRelation::eq(a, p, third - 1)));
    relations.push(ScoreRelation::gt(p, dummy, 0));

    let mut tiebreak = leaders.to_vec();
    tiebreak.extend(u.iter().chain(&fill));
    tiebreak.extend([dummy, p]);
    Draft {
        names,
        tiebreak,
        rule: Rule::KVeto(k),
        target: p,
        stated_winner: leaders[0],
        designated,
        replacements,
        extra: vec![("gadget".into(), gadget)],
        companions: Vec::new(),
        budget: Some(third as u64),
        relations,
        lambda: Some(lambda),
        notes: Vec::new(),
    }
    .finish(ReductionKind::KvetoX3c)
}

/// Priced bribery under a scoring rule with `vector.len()` candidates. The
/// displaced leader sits at one-based position `l` (default: the first
/// usable one) and entries `l..l+3` must drop by a common gap.
pub fn gen_scoring_x3c(src: &X3cInstance, vector: &[i64], l: Option<usize>) -> Result<ReductionOutput> {
    let m = src.universe().len();
    let n = vector.len();
    if n < m + 3 {
        return Err(Error::ConditionViolated(format!(
            "scoring reduction needs at least {} candidates, vector has {n}",
            m + 3
        )));
    }
    let vector = normalize_score_vector(vector).map_err(|e| Error::ConditionViolated(e.to_string()))?;
    let usable = |l: usize| l >= m && scoring_gap_at(&vector, l).is_some();
    let l = match l {
        Some(l) if usable(l) => l,
        Some(l) => {
            return Err(Error::ConditionViolated(format!(
                "position {l} is before |U| = {m} or entries {l}..{} do not drop by a common gap",
                l + 3
            )))
        }
        None => (m..=n - 3)
            .find(|&l| usable(l))
            .ok_or_else(|| Error::ConditionViolated("no position with three equal consecutive gaps".into()))?,
    };
    let g = scoring_gap_at(&vector, l).expect("checked");
    let third = (m / 3) as i64;
    let u: Vec<usize> = (0..m).collect();
    let fill: Vec<usize> = (m..n - 3).collect();
    let (p, a, dummy) = (n - 3, n - 2, n - 1);
    let mut names = universe_names(src);
    names.extend(numbered("q", fill.len()));
    names.extend(["p", "a", "d"].map(String::from));
    let (fill_before, fill_after) = fill.split_at(l - m);

    let mut designated = Vec::new();
    let mut replacements = Vec::new();
    for i in 0..src.sets().len() {
        let s = src.sorted_set(i);
        let rest = complement(m, &s);
        designated.push(ranking(&[&[p, dummy], &rest, fill_before, &[a], &s, fill_after]));
        replacements.push(ranking(&[&[p, dummy], &rest, fill_before, &s, &[a], fill_after]));
    }

    let lead = g * (m as i64 - 1);
    let mut offsets: Vec<(usize, i64)> = u.iter().map(|&x| (x, -2 * g)).collect();
    offsets.extend(fill.iter().map(|&x| (x, -g)));
    offsets.push((p, 0));
    offsets.push((a, lead));
    let (gadget, lambda) = realize_on_top(&names, &designated, &vector, &offsets, &[dummy], 0)?;

    let mut relations: Vec<ScoreRelation> = u.iter().map(|&x| ScoreRelation::eq(x, p, -2 * g)).collect();
    relations.extend(fill.iter().map(|&x| ScoreRelation::eq(x, p, -g)));
    relations.push(ScoreRelation::eq(a, p, lead));
    relations.push(ScoreRelation::gt(p, dummy, 0));

    let mut tiebreak = vec![a];
    tiebreak.extend(u.iter().chain(&fill));
    tiebreak.extend([dummy, p]);
    let mut notes = vec![format!("leader at position {l}, common gap {g}")];
    if !five_gap_condition_holds(&vector, l) {
        notes.push("the stronger five-gap condition does not hold at this position".into());
    }
    Draft {
        names,
        tiebreak,
        rule: Rule::Scoring(vector),
        target: p,
        stated_winner: a,
        designated,
        replacements,
        extra: vec![("gadget".into(), gadget)],
        companions: Vec::new(),
        budget: Some(third as u64),
        relations,
        lambda: Some(lambda),
        notes,
    }
    .finish(ReductionKind::ScoringX3c)
}

fn base_scores(names: &[String], votes: &[Ranking], vector: &[i64]) -> Vec<i64> {
    let e = Election::with_possibly_no_votes(names.to_vec(), None, votes.iter().cloned().map(Vote::new).collect())
        .expect("generated names are valid");
    positional_scores_unchecked(&e, vector)
}
