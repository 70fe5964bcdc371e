//! Brute-force solvers for the source problems, and a checker that runs a
//! generated reduction through them.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::election::{Election, Ranking, Vote};
use crate::error::{Error, Result};
use crate::reductions::{
    CmInstance, Designation, PartitionInstance, ReductionOutput, Source, SourceSolution, X3cInstance,
};
use crate::rules::winner_unchecked;
use crate::solvers::{solve_exact, validate_witness, Limits};

/// An exact cover (set indices in increasing order), if one exists. Always
/// branches on the lowest uncovered element, trying sets in index order.
pub fn solve_x3c(src: &X3cInstance) -> Option<Vec<usize>> {
    let n = src.universe().len();
    let mut containing = vec![Vec::new(); n];
    for (i, s) in src.sets().iter().enumerate() {
        for &x in s {
            containing[x].push(i);
        }
    }
    let mut covered = vec![false; n];
    let mut chosen = Vec::new();
    if cover(src, &containing, &mut covered, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

fn cover(src: &X3cInstance, containing: &[Vec<usize>], covered: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    let Some(x) = covered.iter().position(|&c| !c) else {
        return true;
    };
    for &i in &containing[x] {
        let s = src.sets()[i];
        if s.iter().any(|&y| covered[y]) {
            continue;
        }
        s.iter().for_each(|&y| covered[y] = true);
        chosen.push(i);
        if cover(src, containing, covered, chosen) {
            return true;
        }
        chosen.pop();
        s.iter().for_each(|&y| covered[y] = false);
    }
    false
}

/// A proper subset of the weights (indices in increasing order) summing to
/// the instance's goal, if one exists. Prefers the fewest weights, then the
/// lexicographically smallest index list.
pub fn solve_partition(src: &PartitionInstance) -> Option<Vec<usize>> {
    let w = src.weights();
    let goal = src.goal() as usize;
    // fewest[i][s]: fewest items from the suffix starting at i summing to s.
    let mut fewest = vec![vec![None; goal + 1]; w.len() + 1];
    fewest[w.len()][0] = Some(0usize);
    for i in (0..w.len()).rev() {
        let wi = w[i] as usize;
        for s in 0..=goal {
            let skip = fewest[i + 1][s];
            let take = if s >= wi { fewest[i + 1][s - wi].map(|c| c + 1) } else { None };
            fewest[i][s] = match (skip, take) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
    }
    let mut left = fewest[0][goal]?;
    let mut out = Vec::new();
    let mut s = goal;
    for (i, &wi) in w.iter().enumerate() {
        let wi = wi as usize;
        if left > 0 && s >= wi && fewest[i + 1][s - wi] == Some(left - 1) {
            out.push(i);
            s -= wi;
            left -= 1;
        }
    }
    // With positive weights the goal is below the total, so the subset is proper.
    debug_assert!(out.len() < w.len());
    Some(out)
}

/// Largest number of manipulator profiles [`solve_cm`] will enumerate.
pub const CM_PROFILE_LIMIT: u64 = 2_000_000;

/// A manipulation making the target the unique tie-broken winner, if one
/// exists. Manipulators are interchangeable, so only multisets of rankings
/// are tried; the first success in lexicographic order is returned.
pub fn solve_cm(src: &CmInstance) -> Result<Option<Vec<Ranking>>> {
    let e = &src.election;
    let m = e.num_candidates();
    src.rule.validate(m)?;
    if src.target >= m {
        return Err(Error::UnknownTarget(src.target.to_string()));
    }
    let rankings: Vec<Ranking> = (0..m).permutations(m).map(Ranking::from_vec_unchecked).collect();
    let profiles = multiset_count(rankings.len() as u64, src.manipulators as u64);
    if profiles.is_none_or(|c| c > CM_PROFILE_LIMIT) {
        return Err(Error::LimitExceeded(format!(
            "{} manipulators over {m} candidates is too many profiles to enumerate",
            src.manipulators
        )));
    }
    for combo in (0..rankings.len()).combinations_with_replacement(src.manipulators) {
        let mut votes = e.votes().to_vec();
        votes.extend(combo.iter().map(|&i| Vote::new(rankings[i].clone())));
        let profile = Election::with_possibly_no_votes(e.names().to_vec(), Some(e.tiebreak().to_vec()), votes)?;
        if winner_unchecked(&profile, &src.rule) == src.target {
            return Ok(Some(combo.into_iter().map(|i| rankings[i].clone()).collect()));
        }
    }
    Ok(None)
}

fn multiset_count(kinds: u64, size: u64) -> Option<u64> {
    // C(kinds + size - 1, size)
    let mut c: u64 = 1;
    for i in 0..size {
        c = c.checked_mul(kinds + i)? / (i + 1);
    }
    Some(c)
}

/// Solves a source instance: `Some(solution)` or `None` for a no instance.
pub fn solve_source(source: &Source) -> Result<Option<SourceSolution>> {
    Ok(match source {
        Source::X3c(s) => solve_x3c(s).map(SourceSolution::Cover),
        Source::Partition(s) => solve_partition(s).map(SourceSolution::Subset),
        Source::Cm(s) => solve_cm(s)?.map(SourceSolution::Manipulation),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "UPPERCASE")]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    Skipped(String),
}

impl CheckOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            CheckOutcome::Pass => "PASS",
            CheckOutcome::Fail(_) => "FAIL",
            CheckOutcome::Skipped(_) => "SKIPPED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: char,
    pub name: &'static str,
    pub outcome: CheckOutcome,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}: {}", self.id, self.name, self.outcome.label())?;
        match &self.outcome {
            CheckOutcome::Pass => Ok(()),
            CheckOutcome::Fail(d) | CheckOutcome::Skipped(d) => write!(f, " ({d})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Whether the source is a yes instance, when the oracle could tell.
    pub source_yes: Option<bool>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !matches!(c.outcome, CheckOutcome::Fail(_)))
    }

    pub fn outcome(&self, id: char) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.id == id).map(|c| &c.outcome)
    }
}

/// Checks a generated instance against its certificate and the source:
///
/// * (a) every generated vote belongs to exactly one source object;
/// * (b) the stated winner wins and the designated votes are exactly the
///   vulnerable (or purchasable) ones;
/// * (c) every recorded score relation holds;
/// * (d) for a yes source, the forward witness is a valid bribery;
/// * (e) exhaustive bribery search agrees with the source answer. Skipped
///   when the instance exceeds `limits`.
pub fn verify_reduction(output: &ReductionOutput, source: &Source, limits: Limits) -> VerifyReport {
    let inst = &output.instance;
    let cert = &output.certificate;
    let e = inst.election();
    let mut checks = Vec::new();
    let mut push = |id, name, outcome| checks.push(Check { id, name, outcome });

    let mut owner = vec![0usize; e.votes().len()];
    let mut stray = Vec::new();
    for (_, votes) in &cert.source_map {
        for &v in votes {
            match owner.get_mut(v) {
                Some(o) => *o += 1,
                None => stray.push(v),
            }
        }
    }
    let bad: Vec<usize> = (0..owner.len()).filter(|&i| owner[i] != 1).collect();
    push(
        'a',
        "source map covers every vote once",
        if stray.is_empty() && bad.is_empty() {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail(format!("votes mapped zero or several times: {bad:?}; out of range: {stray:?}"))
        },
    );

    let winner = inst.current_winner();
    let actual = match cert.designation {
        Designation::ExactVulnerable => inst.vulnerable_votes(),
        Designation::Purchasable => inst.changeable_votes(),
    };
    let designated: BTreeSet<usize> = cert.designated.iter().copied().collect();
    let actual_set: BTreeSet<usize> = actual.iter().copied().collect();
    push(
        'b',
        "stated winner and designated votes",
        if winner != cert.stated_winner {
            CheckOutcome::Fail(format!(
                "winner is `{}`, certificate says `{}`",
                e.name(winner),
                e.name(cert.stated_winner)
            ))
        } else if designated != actual_set {
            let extra: Vec<_> = actual_set.difference(&designated).collect();
            let missing: Vec<_> = designated.difference(&actual_set).collect();
            CheckOutcome::Fail(format!("undesignated: {extra:?}; designated but not: {missing:?}"))
        } else {
            CheckOutcome::Pass
        },
    );

    let relations = if cert.relations.is_empty() {
        CheckOutcome::Skipped("no score relations recorded".into())
    } else {
        let failures: Vec<String> = cert
            .relations
            .iter()
            .filter_map(|r| {
                r.check(e, inst.rule())
                    .err()
                    .map(|actual| format!("{} (actual {actual})", r.describe(e)))
            })
            .collect();
        if failures.is_empty() {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail(failures.join("; "))
        }
    };
    push('c', "score relations", relations);

    let solved = solve_source(source);
    let source_yes = solved.as_ref().ok().map(|s| s.is_some());
    let forward = match &solved {
        Err(err) => CheckOutcome::Skipped(format!("source oracle: {err}")),
        Ok(None) => CheckOutcome::Skipped("source is a no instance".into()),
        Ok(Some(sol)) => match output.forward_witness(sol).and_then(|w| validate_witness(inst, &w)) {
            Ok(_) => CheckOutcome::Pass,
            Err(err) => CheckOutcome::Fail(err.to_string()),
        },
    };
    push('d', "forward witness", forward);

    let reverse = match (source_yes, solve_exact(inst, limits)) {
        (_, Err(Error::LimitExceeded(why))) => CheckOutcome::Skipped(why),
        (_, Err(err)) => CheckOutcome::Fail(err.to_string()),
        (None, Ok(_)) => CheckOutcome::Skipped("source answer unknown".into()),
        (Some(yes), Ok(sol)) if sol.is_yes() == yes => CheckOutcome::Pass,
        (Some(yes), Ok(sol)) => CheckOutcome::Fail(format!(
            "source is {} but exhaustive search answers {}",
            if yes { "YES" } else { "NO" },
            sol.decision
        )),
    };
    push('e', "exhaustive equivalence", reverse);

    VerifyReport { checks, source_yes }
}
