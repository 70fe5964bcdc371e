//! Instance generators for the hardness reductions, each returning the
//! generated bribery instance together with a certificate that ties source
//! objects to generated votes and records the intended score relations.

mod cm;
mod gadget;
mod partition;
mod x3c;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::election::{positional_scores_unchecked, Election, Ranking};
use crate::error::{Error, Result};
use crate::rules::Rule;
use crate::vulnerability::BriberyInstance;

pub use cm::{embed_cm_dollar, gen_uniform_borda_cm};
pub use gadget::{realize_scores, Realization};
pub use partition::{
    gen_wbucklin_partition, gen_wcopeland_partition, gen_wmaximin_partition, gen_wplurality_partition,
    gen_wrunoff_quarter, gen_wstv_quarter, partition_to_quarter,
};
pub use x3c::{
    borda_vector, gen_borda_x3c, gen_kapproval_x3c, gen_kveto_x3c, gen_scoring_x3c, five_gap_condition_holds,
    scoring_gap_at,
};

/// Exact cover by 3-sets: `sets` index into `universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct X3cInstance {
    universe: Vec<String>,
    sets: Vec<[usize; 3]>,
}

impl X3cInstance {
    pub fn new(universe: Vec<String>, sets: Vec<[usize; 3]>) -> Result<Self> {
        if universe.is_empty() || !universe.len().is_multiple_of(3) {
            return Err(Error::InvalidSource(format!(
                "universe size {} is not a positive multiple of 3",
                universe.len()
            )));
        }
        let distinct: BTreeSet<&String> = universe.iter().collect();
        if distinct.len() != universe.len() {
            return Err(Error::InvalidSource("duplicate universe element".into()));
        }
        for (i, s) in sets.iter().enumerate() {
            if s.iter().any(|&x| x >= universe.len()) {
                return Err(Error::InvalidSource(format!("set {} mentions an unknown element", i + 1)));
            }
            if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
                return Err(Error::InvalidSource(format!("set {} has repeated elements", i + 1)));
            }
        }
        Ok(X3cInstance { universe, sets })
    }

    /// Builds an instance from element labels.
    pub fn from_labels(universe: &[&str], sets: &[[&str; 3]]) -> Result<Self> {
        let u: Vec<String> = universe.iter().map(|s| s.to_string()).collect();
        let find = |x: &str| {
            u.iter()
                .position(|y| y == x)
                .ok_or_else(|| Error::InvalidSource(format!("unknown element `{x}`")))
        };
        let sets = sets
            .iter()
            .map(|s| Ok([find(s[0])?, find(s[1])?, find(s[2])?]))
            .collect::<Result<Vec<_>>>()?;
        X3cInstance::new(u, sets)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Elements of set `i` in universe order.
    pub fn sorted_set(&self, i: usize) -> [usize; 3] {
        let mut s = self.sets[i];
        s.sort_unstable();
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionVariant {
    /// A subset summing to half the total.
    Half,
    /// A subset summing to a quarter of the total.
    Quarter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionInstance {
    weights: Vec<u64>,
    variant: PartitionVariant,
}

impl PartitionInstance {
    pub fn new(weights: Vec<u64>, variant: PartitionVariant) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::InvalidSource("weights must be a nonempty list of positive integers".into()));
        }
        let total: u64 = weights.iter().sum();
        let div = match variant {
            PartitionVariant::Half => 2,
            PartitionVariant::Quarter => 4,
        };
        if !total.is_multiple_of(div) {
            return Err(Error::InvalidSource(format!("total {total} is not divisible by {div}")));
        }
        Ok(PartitionInstance { weights, variant })
    }

    pub fn half(weights: Vec<u64>) -> Result<Self> {
        PartitionInstance::new(weights, PartitionVariant::Half)
    }

    pub fn quarter(weights: Vec<u64>) -> Result<Self> {
        PartitionInstance::new(weights, PartitionVariant::Quarter)
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn variant(&self) -> PartitionVariant {
        self.variant
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// The sum a solution subset must reach.
    pub fn goal(&self) -> u64 {
        match self.variant {
            PartitionVariant::Half => self.total() / 2,
            PartitionVariant::Quarter => self.total() / 4,
        }
    }
}

/// Coalitional manipulation: `manipulators` free voters join the fixed votes
/// of `election` and try to make `target` the winner under `rule`, ties
/// broken by the election's tie-break order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmInstance {
    pub election: Election,
    pub manipulators: usize,
    pub target: usize,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    X3c(X3cInstance),
    Partition(PartitionInstance),
    Cm(CmInstance),
}

/// A solution of a source instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSolution {
    /// Indices of the chosen sets.
    Cover(Vec<usize>),
    /// Indices of the chosen weights.
    Subset(Vec<usize>),
    /// One ranking per manipulator.
    Manipulation(Vec<Ranking>),
}

/// How the designated votes relate to the emitted instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Designation {
    /// Designated votes are exactly the vulnerable votes.
    ExactVulnerable,
    /// Designated votes are exactly the vulnerable votes the budget can buy.
    Purchasable,
}

/// `score(left) - score(right) == offset` (or `> offset` when strict) under
/// the instance's positional rule, ignoring the votes in `exclude`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreRelation {
    pub left: usize,
    pub right: usize,
    pub offset: i64,
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exclude: Vec<usize>,
}

impl ScoreRelation {
    pub fn eq(left: usize, right: usize, offset: i64) -> Self {
        ScoreRelation {
            left,
            right,
            offset,
            strict: false,
            exclude: Vec::new(),
        }
    }

    pub fn gt(left: usize, right: usize, offset: i64) -> Self {
        ScoreRelation {
            strict: true,
            ..ScoreRelation::eq(left, right, offset)
        }
    }

    pub fn excluding(mut self, votes: &[usize]) -> Self {
        self.exclude = votes.to_vec();
        self
    }

    /// Checks the relation on `election`; returns the actual difference on failure.
    pub fn check(&self, election: &Election, rule: &Rule) -> std::result::Result<(), i64> {
        let m = election.num_candidates();
        let vector = rule.score_vector(m).expect("relations are only recorded for positional rules");
        let skip: BTreeSet<usize> = self.exclude.iter().copied().collect();
        let votes = election
            .votes()
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, v)| v.clone())
            .collect();
        let s = positional_scores_unchecked(&election.with_votes(votes), &vector);
        let diff = s[self.left] - s[self.right];
        let ok = if self.strict { diff > self.offset } else { diff == self.offset };
        if ok {
            Ok(())
        } else {
            Err(diff)
        }
    }

    pub fn describe(&self, election: &Election) -> String {
        let op = if self.strict { ">" } else { "=" };
        let ex = if self.exclude.is_empty() {
            String::new()
        } else {
            format!(" (without votes {:?})", self.exclude)
        };
        format!(
            "s({}) - s({}) {op} {}{ex}",
            election.name(self.left),
            election.name(self.right),
            self.offset
        )
    }
}

/// Replacement votes for one source object, depending on whether the
/// source solution uses it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectItem {
    pub chosen: Vec<(usize, Ranking)>,
    pub unchosen: Vec<(usize, Ranking)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForwardPlan {
    /// One entry per set or weight of the source.
    Select(Vec<SelectItem>),
    /// Vote `slots[j]` becomes `head`, then manipulator `j`'s ranking
    /// without the `head` and `tail` candidates, then `tail`.
    ManipulatorSlots {
        slots: Vec<usize>,
        head: Vec<usize>,
        tail: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Source object label (`S1`, `w3`, `manipulator1`, ...) to the
    /// generated votes built from it.
    pub source_map: Vec<(String, Vec<usize>)>,
    pub designated: Vec<usize>,
    pub designation: Designation,
    pub stated_winner: usize,
    pub relations: Vec<ScoreRelation>,
    /// Common base score of the score-realization gadget, when used.
    pub lambda: Option<i64>,
    pub forward: ForwardPlan,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    BordaX3c,
    KapprovalX3c,
    KvetoX3c,
    ScoringX3c,
    UniformBordaCm,
    CmDollar,
    WpluralityPartition,
    WmaximinPartition,
    WcopelandPartition,
    WbucklinPartition,
    WstvQuarter,
    WrunoffQuarter,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 12] = [
        ReductionKind::BordaX3c,
        ReductionKind::KapprovalX3c,
        ReductionKind::KvetoX3c,
        ReductionKind::ScoringX3c,
        ReductionKind::UniformBordaCm,
        ReductionKind::CmDollar,
        ReductionKind::WpluralityPartition,
        ReductionKind::WmaximinPartition,
        ReductionKind::WcopelandPartition,
        ReductionKind::WbucklinPartition,
        ReductionKind::WstvQuarter,
        ReductionKind::WrunoffQuarter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::BordaX3c => "borda-x3c",
            ReductionKind::KapprovalX3c => "kapproval-x3c",
            ReductionKind::KvetoX3c => "kveto-x3c",
            ReductionKind::ScoringX3c => "scoring-x3c",
            ReductionKind::UniformBordaCm => "uniform-borda-cm",
            ReductionKind::CmDollar => "cm-dollar",
            ReductionKind::WpluralityPartition => "wplurality-partition",
            ReductionKind::WmaximinPartition => "wmaximin-partition",
            ReductionKind::WcopelandPartition => "wcopeland-partition",
            ReductionKind::WbucklinPartition => "wbucklin-partition",
            ReductionKind::WstvQuarter => "wstv-quarter",
            ReductionKind::WrunoffQuarter => "wrunoff-quarter",
        }
    }

    /// The kind of source instance the generator reads.
    pub fn source_kind(self) -> SourceKind {
        match self {
            ReductionKind::BordaX3c | ReductionKind::KapprovalX3c | ReductionKind::KvetoX3c | ReductionKind::ScoringX3c => {
                SourceKind::X3c
            }
            ReductionKind::UniformBordaCm | ReductionKind::CmDollar => SourceKind::Cm,
            ReductionKind::WstvQuarter | ReductionKind::WrunoffQuarter => SourceKind::Quarter,
            _ => SourceKind::Half,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    X3c,
    Half,
    Quarter,
    Cm,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::UnknownReduction(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub reduction: ReductionKind,
    pub instance: BriberyInstance,
    pub certificate: Certificate,
}

impl ReductionOutput {
    /// The bribery witness the reduction's forward direction builds from a
    /// source solution. Unchanged votes are omitted.
    pub fn forward_witness(&self, solution: &SourceSolution) -> Result<Vec<(usize, Ranking)>> {
        let m = self.instance.election().num_candidates();
        let mut w = match (&self.certificate.forward, solution) {
            (ForwardPlan::Select(items), SourceSolution::Cover(chosen) | SourceSolution::Subset(chosen)) => {
                let chosen: BTreeSet<usize> = chosen.iter().copied().collect();
                if let Some(bad) = chosen.iter().find(|&&i| i >= items.len()) {
                    return Err(Error::InvalidWitness(format!("source object {bad} does not exist")));
                }
                items
                    .iter()
                    .enumerate()
                    .flat_map(|(i, item)| if chosen.contains(&i) { item.chosen.clone() } else { item.unchosen.clone() })
                    .collect::<Vec<_>>()
            }
            (ForwardPlan::ManipulatorSlots { slots, head, tail }, SourceSolution::Manipulation(rows)) => {
                if rows.len() != slots.len() {
                    return Err(Error::InvalidWitness(format!(
                        "{} manipulator rankings for {} slots",
                        rows.len(),
                        slots.len()
                    )));
                }
                let mut out = Vec::new();
                for (&slot, row) in slots.iter().zip(rows) {
                    let mut r = head.clone();
                    r.extend(row.iter().copied().filter(|c| !head.contains(c) && !tail.contains(c)));
                    r.extend_from_slice(tail);
                    out.push((slot, Ranking::new(r, m).map_err(|e| Error::InvalidWitness(e.to_string()))?));
                }
                out
            }
            _ => return Err(Error::InvalidWitness("solution does not match the reduction's source".into())),
        };
        let votes = self.instance.election().votes();
        w.retain(|(i, r)| votes[*i].ranking != *r);
        w.sort_by_key(|(i, _)| *i);
        Ok(w)
    }
}

/// Runs the generator for `kind` on `source` with default parameters
/// (k = 5 for k-approval, k = 3 for k-veto, Borda with 2|U| candidates for
/// the scoring reduction, alpha = 0 for Copeland).
pub fn generate(kind: ReductionKind, source: &Source) -> Result<ReductionOutput> {
    let mismatch = || Error::InvalidSource(format!("{kind} needs a different source instance"));
    match (kind, source) {
        (ReductionKind::BordaX3c, Source::X3c(s)) => gen_borda_x3c(s),
        (ReductionKind::KapprovalX3c, Source::X3c(s)) => gen_kapproval_x3c(s, 5),
        (ReductionKind::KvetoX3c, Source::X3c(s)) => gen_kveto_x3c(s, 3),
        (ReductionKind::ScoringX3c, Source::X3c(s)) => gen_scoring_x3c(s, &borda_vector(2 * s.universe().len()), None),
        (ReductionKind::UniformBordaCm, Source::Cm(s)) => gen_uniform_borda_cm(s),
        (ReductionKind::CmDollar, Source::Cm(s)) => embed_cm_dollar(s),
        (ReductionKind::WpluralityPartition, Source::Partition(s)) => gen_wplurality_partition(s),
        (ReductionKind::WmaximinPartition, Source::Partition(s)) => gen_wmaximin_partition(s),
        (ReductionKind::WcopelandPartition, Source::Partition(s)) => {
            gen_wcopeland_partition(s, num_rational::Ratio::new(0, 1))
        }
        (ReductionKind::WbucklinPartition, Source::Partition(s)) => gen_wbucklin_partition(s),
        (ReductionKind::WstvQuarter, Source::Partition(s)) => gen_wstv_quarter(s),
        (ReductionKind::WrunoffQuarter, Source::Partition(s)) => gen_wrunoff_quarter(s),
        _ => Err(mismatch()),
    }
}

/// `base` if unused, otherwise `base` followed by the first free number.
pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
    if !taken.iter().any(|t| t == base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("some name is free")
}
