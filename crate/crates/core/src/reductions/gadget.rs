use crate::election::Ranking;
use crate::error::{Error, Result};
use crate::rules::unit_gap_position;

/// Votes produced by [`realize_scores`] and the common base score `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub votes: Vec<Ranking>,
    pub lambda: i64,
}

/// Builds votes over `m` candidates whose positional scores under `vector`
/// are `lambda + offset` for every `(candidate, offset)` in `named`, while
/// every candidate in `dummies` scores at most `lambda - margin`.
///
/// Votes come in blocks: all `m` rotations of one base order, with two
/// adjacent candidates swapped at a position where the vector drops by
/// exactly one. A block gives everybody the same score except the swapped
/// pair, which moves one point between them. The first dummy absorbs every
/// adjustment, and extra blocks push all dummies below the named
/// candidates. At most `m * (k + 1) * (sum |offset| + margin)` votes are
/// produced for `k` named candidates.
pub fn realize_scores(
    m: usize,
    named: &[(usize, i64)],
    dummies: &[usize],
    vector: &[i64],
    margin: i64,
) -> Result<Realization> {
    if vector.len() != m {
        return Err(Error::InvalidRule(format!("score vector has {} entries for {m} candidates", vector.len())));
    }
    let j = unit_gap_position(vector)
        .ok_or_else(|| Error::InvalidRule("score vector has no two adjacent entries differing by one".into()))?;
    let &pivot = dummies.first().ok_or(Error::EmptyDummySet)?;
    let mut seen = vec![false; m];
    for c in named.iter().map(|&(c, _)| c).chain(dummies.iter().copied()) {
        if c >= m || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidElection(format!("candidate {c} is out of range or listed twice")));
        }
    }
    if seen.contains(&false) {
        return Err(Error::InvalidElection("every candidate must be named or a dummy".into()));
    }

    let k = named.len() as i64;
    let total: i64 = named.iter().map(|&(_, x)| x).sum();
    // Raising every named candidate by `lift` lowers the pivot by k * lift and
    // leaves the other dummies behind by lift.
    let mut lift = ceil_div(margin - total, k + 1).max(0);
    if dummies.len() > 1 {
        lift = lift.max(margin);
    }

    let sum: i64 = vector.iter().sum();
    let mut votes = Vec::new();
    let mut blocks = 0i64;
    for &(c, x) in named {
        let (from, to, count) = if x >= 0 { (pivot, c, x + lift) } else { (c, pivot, -x) };
        for _ in 0..count {
            votes.extend(block(m, from, to, j));
        }
        blocks += count;
        if x < 0 {
            for _ in 0..lift {
                votes.extend(block(m, pivot, c, j));
            }
            blocks += lift;
        }
    }
    let lambda = if named.is_empty() { margin } else { sum * blocks + lift };
    Ok(Realization { votes, lambda })
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// All rotations of `from, to, rest...`, with `from` and `to` swapped in the
/// rotation that puts them at positions `j` and `j + 1`. Net effect: `from`
/// loses one point and `to` gains one.
fn block(m: usize, from: usize, to: usize, j: usize) -> Vec<Ranking> {
    let mut base = vec![from, to];
    base.extend((0..m).filter(|&c| c != from && c != to));
    (0..m)
        .map(|shift| {
            let mut r = vec![0; m];
            for (k, &c) in base.iter().enumerate() {
                r[(k + shift) % m] = c;
            }
            if shift == j {
                r.swap(j, j + 1);
            }
            Ranking::from_vec_unchecked(r)
        })
        .collect()
}
