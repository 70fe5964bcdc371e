//! Candidates, rankings, weighted votes and the pairwise majority graph.
//!
//! Candidates are addressed by their index in [`Election::names`]. A weighted
//! vote counts as `weight` identical copies everywhere in this crate.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A complete strict order over the candidates, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    /// Builds a ranking, checking that it is a permutation of `0..m`.
    pub fn new(order: Vec<usize>, m: usize) -> Result<Self> {
        if order.len() != m {
            return Err(Error::InvalidElection(format!(
                "ranking has {} entries, expected {m}",
                order.len()
            )));
        }
        let mut seen = vec![false; m];
        for &c in &order {
            if c >= m || seen[c] {
                return Err(Error::InvalidElection(format!(
                    "ranking {order:?} is not a permutation of 0..{m}"
                )));
            }
            seen[c] = true;
        }
        Ok(Ranking(order))
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        Ranking(order)
    }

    pub fn identity(m: usize) -> Self {
        Ranking((0..m).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn top(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    /// Zero-based position of `c`.
    pub fn position(&self, c: usize) -> usize {
        self.0
            .iter()
            .position(|&x| x == c)
            .expect("candidate present in every complete ranking")
    }

    /// `true` when `a` is strictly above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &x in &self.0 {
            if x == a {
                return a != b;
            }
            if x == b {
                return false;
            }
        }
        false
    }

    /// Position lookup table indexed by candidate.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &c) in self.0.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }

    /// Same relative order with `c` moved to the front.
    pub fn with_front(&self, c: usize) -> Ranking {
        let mut v = Vec::with_capacity(self.0.len());
        v.push(c);
        v.extend(self.0.iter().copied().filter(|&x| x != c));
        Ranking(v)
    }

    /// Same relative order with `c` moved to the back.
    pub fn with_back(&self, c: usize) -> Ranking {
        let mut v: Vec<usize> = self.0.iter().copied().filter(|&x| x != c).collect();
        v.push(c);
        Ranking(v)
    }
}

impl Deref for Ranking {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Price of changing a vote. Absent prices are represented by `Option::None`
/// on the vote itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Price {
    Finite(u64),
    Infinite,
}

impl Price {
    pub fn finite(self) -> Option<u64> {
        match self {
            Price::Finite(p) => Some(p),
            Price::Infinite => None,
        }
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Price::Finite(p) => write!(f, "{p}"),
            Price::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    pub ranking: Ranking,
    pub weight: u64,
    pub price: Option<Price>,
}

impl Vote {
    pub fn new(ranking: Ranking) -> Self {
        Vote {
            ranking,
            weight: 1,
            price: None,
        }
    }

    pub fn weighted(ranking: Ranking, weight: u64) -> Self {
        Vote {
            ranking,
            weight,
            price: None,
        }
    }

    pub fn with_price(mut self, price: Price) -> Self {
        self.price = Some(price);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    names: Vec<String>,
    tiebreak: Vec<usize>,
    tiebreak_pos: Vec<usize>,
    votes: Vec<Vote>,
}

impl Election {
    /// Validated constructor. `tiebreak` defaults to declaration order.
    pub fn new(names: Vec<String>, tiebreak: Option<Vec<usize>>, votes: Vec<Vote>) -> Result<Self> {
        if votes.is_empty() {
            return Err(Error::InvalidElection("an election needs at least one vote".into()));
        }
        Self::build(names, tiebreak, votes)
    }

    /// Like [`Election::new`] but allows an empty vote list. Used for the
    /// fixed part of a manipulation instance.
    pub fn with_possibly_no_votes(
        names: Vec<String>,
        tiebreak: Option<Vec<usize>>,
        votes: Vec<Vote>,
    ) -> Result<Self> {
        Self::build(names, tiebreak, votes)
    }

    fn build(names: Vec<String>, tiebreak: Option<Vec<usize>>, votes: Vec<Vote>) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::InvalidElection("no candidates".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if n.is_empty() {
                return Err(Error::InvalidElection("empty candidate name".into()));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidElection(format!("duplicate candidate `{n}`")));
            }
        }
        let tiebreak = match tiebreak {
            Some(t) => Ranking::new(t, m)
                .map_err(|_| Error::InvalidElection("tie-break is not a permutation of the candidates".into()))?
                .into_vec(),
            None => (0..m).collect(),
        };
        for (i, v) in votes.iter().enumerate() {
            if v.weight == 0 {
                return Err(Error::InvalidElection(format!("vote {i} has weight 0")));
            }
            Ranking::new(v.ranking.0.clone(), m)
                .map_err(|e| Error::InvalidElection(format!("vote {i}: {e}")))?;
        }
        let mut tiebreak_pos = vec![0; m];
        for (i, &c) in tiebreak.iter().enumerate() {
            tiebreak_pos[c] = i;
        }
        Ok(Election {
            names,
            tiebreak,
            tiebreak_pos,
            votes,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    pub fn candidate(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn candidate_or_err(&self, name: &str) -> Result<usize> {
        self.candidate(name)
            .ok_or_else(|| Error::UnknownCandidate(name.to_string()))
    }

    /// Tie-break order, most preferred first.
    pub fn tiebreak(&self) -> &[usize] {
        &self.tiebreak
    }

    /// Smaller is better.
    pub fn tiebreak_position(&self, c: usize) -> usize {
        self.tiebreak_pos[c]
    }

    /// `a` beats `b` in the tie-break order.
    pub fn tiebreak_prefers(&self, a: usize, b: usize) -> bool {
        self.tiebreak_pos[a] < self.tiebreak_pos[b]
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub(crate) fn votes_mut(&mut self) -> &mut [Vote] {
        &mut self.votes
    }

    pub fn total_weight(&self) -> u64 {
        self.votes.iter().map(|v| v.weight).sum()
    }

    pub fn is_unweighted(&self) -> bool {
        self.votes.iter().all(|v| v.weight == 1)
    }

    /// Same candidates and tie-break with a different vote list.
    pub fn with_votes(&self, votes: Vec<Vote>) -> Election {
        Election {
            names: self.names.clone(),
            tiebreak: self.tiebreak.clone(),
            tiebreak_pos: self.tiebreak_pos.clone(),
            votes,
        }
    }

    /// Same candidates and votes with another tie-break order.
    pub fn with_tiebreak(&self, tiebreak: Vec<usize>) -> Result<Election> {
        Election::with_possibly_no_votes(self.names.clone(), Some(tiebreak), self.votes.clone())
    }

    /// Every vote replaced by `weight` unit-weight copies.
    pub fn expanded(&self) -> Election {
        let votes = self
            .votes
            .iter()
            .flat_map(|v| {
                std::iter::repeat_n(
                    Vote {
                        ranking: v.ranking.clone(),
                        weight: 1,
                        price: v.price,
                    },
                    v.weight as usize,
                )
            })
            .collect();
        self.with_votes(votes)
    }

    /// Parses `a>b>c` style orders against this election's names.
    pub fn ranking_from_names(&self, names: &[&str]) -> Result<Ranking> {
        let order = names
            .iter()
            .map(|n| self.candidate_or_err(n))
            .collect::<Result<Vec<_>>>()?;
        Ranking::new(order, self.num_candidates())
    }

    pub fn ranking_names(&self, r: &Ranking) -> Vec<&str> {
        r.iter().map(|&c| self.name(c)).collect()
    }
}

/// Weighted pairwise margins `D(x, y) = N(x, y) - N(y, x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginMatrix {
    m: usize,
    margins: Vec<i64>,
}

impl MarginMatrix {
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.margins[x * self.m + y]
    }
}

pub fn majority_graph(election: &Election) -> MarginMatrix {
    let m = election.num_candidates();
    let mut margins = vec![0i64; m * m];
    for v in election.votes() {
        let w = v.weight as i64;
        let r = v.ranking.as_slice();
        for i in 0..m {
            for j in (i + 1)..m {
                margins[r[i] * m + r[j]] += w;
                margins[r[j] * m + r[i]] -= w;
            }
        }
    }
    MarginMatrix { m, margins }
}

/// Weighted positional scores: `score(c) = sum of weight * vector[pos(c)]`.
pub fn positional_scores(election: &Election, vector: &[i64]) -> Result<Vec<i64>> {
    let m = election.num_candidates();
    if vector.len() != m {
        return Err(Error::InvalidRule(format!(
            "score vector has length {}, election has {m} candidates",
            vector.len()
        )));
    }
    Ok(positional_scores_unchecked(election, vector))
}

pub(crate) fn positional_scores_unchecked(election: &Election, vector: &[i64]) -> Vec<i64> {
    let mut scores = vec![0i64; election.num_candidates()];
    for v in election.votes() {
        let w = v.weight as i64;
        for (pos, &c) in v.ranking.iter().enumerate() {
            scores[c] += w * vector[pos];
        }
    }
    scores
}
