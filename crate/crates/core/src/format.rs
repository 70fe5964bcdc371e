//! Plain-text documents.
//!
//! Elections:
//!
//! ```text
//! # comment
//! candidates: p,a,b
//! tiebreak: a>b>p
//! vote: a>b>p
//! vote [weight=3] [price=inf]: p>a>b
//! ```
//!
//! The tie-break line is optional and defaults to declaration order.
//! Manipulation sources add `target:`, `manipulators:` and `rule:` lines
//! and may have no votes. Exact-cover sources use `universe: 1,2,3` and
//! one `set: 1,2,3` line per set; partition sources use `weights: 1,2,3`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::election::{Election, Price, Ranking, Vote};
use crate::error::{Error, Result};
use crate::reductions::{CmInstance, PartitionInstance, PartitionVariant, ReductionOutput, X3cInstance};
use crate::rules::Rule;

/// Non-empty lines with comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn split_key(line: usize, l: &str) -> Result<(&str, &str)> {
    l.split_once(':')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| Error::parse(line, format!("expected `key: value`, found `{l}`")))
}

fn list(line: usize, v: &str, sep: char, what: &str) -> Result<Vec<String>> {
    let items: Vec<String> = v.split(sep).map(|s| s.trim().to_string()).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(Error::parse(line, format!("empty {what} in `{v}`")));
    }
    Ok(items)
}

fn valid_name(n: &str) -> bool {
    !n.is_empty() && n.chars().all(|c| !c.is_whitespace() && !",>#:[]=".contains(c))
}

/// An election document together with any extra header lines.
struct Parsed {
    election: Election,
    extra: BTreeMap<String, (usize, String)>,
}

fn parse_document(text: &str, extra_keys: &[&str], allow_empty: bool) -> Result<Parsed> {
    let mut names: Option<Vec<String>> = None;
    let mut tiebreak: Option<(usize, Vec<String>)> = None;
    let mut votes: Vec<(usize, Vec<String>, u64, Option<Price>)> = Vec::new();
    let mut extra = BTreeMap::new();
    for (n, l) in lines(text) {
        let (key, value) = split_key(n, l)?;
        if key == "candidates" {
            if names.is_some() {
                return Err(Error::parse(n, "candidates declared twice"));
            }
            let c = list(n, value, ',', "candidate name")?;
            if let Some(bad) = c.iter().find(|c| !valid_name(c)) {
                return Err(Error::parse(n, format!("invalid candidate name `{bad}`")));
            }
            names = Some(c);
        } else if key == "tiebreak" {
            if tiebreak.is_some() {
                return Err(Error::parse(n, "tiebreak declared twice"));
            }
            tiebreak = Some((n, list(n, value, '>', "candidate")?));
        } else if key == "vote" || key.starts_with("vote ") || key.starts_with("vote[") {
            let (weight, price) = vote_options(n, &key[4..])?;
            votes.push((n, list(n, value, '>', "candidate")?, weight, price));
        } else if extra_keys.contains(&key) {
            if extra.insert(key.to_string(), (n, value.to_string())).is_some() {
                return Err(Error::parse(n, format!("`{key}` declared twice")));
            }
        } else {
            return Err(Error::parse(n, format!("unknown key `{key}`")));
        }
    }
    let names = names.ok_or_else(|| Error::parse(0, "missing `candidates:` line"))?;
    let m = names.len();
    let index = |line: usize, c: &str| {
        names
            .iter()
            .position(|x| x == c)
            .ok_or_else(|| Error::parse(line, format!("unknown candidate `{c}`")))
    };
    let ranking = |line: usize, items: &[String]| -> Result<Ranking> {
        let order = items.iter().map(|c| index(line, c)).collect::<Result<Vec<_>>>()?;
        let mut seen = vec![false; m];
        for &c in &order {
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::parse(line, format!("candidate `{}` listed twice", names[c])));
            }
        }
        if order.len() != m {
            return Err(Error::IncompleteRanking {
                line,
                found: order.len(),
                expected: m,
            });
        }
        Ok(Ranking::from_vec_unchecked(order))
    };
    let tiebreak = tiebreak
        .map(|(line, t)| ranking(line, &t).map(Ranking::into_vec))
        .transpose()?;
    let votes = votes
        .iter()
        .map(|(line, items, weight, price)| {
            let mut v = Vote::weighted(ranking(*line, items)?, *weight);
            v.price = *price;
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    let election = if allow_empty {
        Election::with_possibly_no_votes(names.clone(), tiebreak, votes)?
    } else {
        if votes.is_empty() {
            return Err(Error::parse(0, "no `vote:` lines"));
        }
        Election::new(names.clone(), tiebreak, votes)?
    };
    Ok(Parsed { election, extra })
}

fn vote_options(line: usize, rest: &str) -> Result<(u64, Option<Price>)> {
    let mut weight = None;
    let mut price = None;
    let mut rest = rest.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.split_once(']'))
            .ok_or_else(|| Error::parse(line, format!("expected `[name=value]`, found `{rest}`")))?;
        let (opt, tail) = inner;
        rest = tail.trim_start();
        let (k, v) = opt
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(line, format!("expected `name=value` in `[{opt}]`")))?;
        match k {
            "weight" if weight.is_none() => {
                let w: u64 = v
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid weight `{v}`")))?;
                if w == 0 {
                    return Err(Error::parse(line, "weight must be positive"));
                }
                weight = Some(w);
            }
            "price" if price.is_none() => {
                price = Some(if v == "inf" {
                    Price::Infinite
                } else {
                    Price::Finite(v.parse().map_err(|_| Error::parse(line, format!("invalid price `{v}`")))?)
                });
            }
            "weight" | "price" => return Err(Error::parse(line, format!("`{k}` given twice"))),
            _ => return Err(Error::parse(line, format!("unknown vote option `{k}`"))),
        }
    }
    Ok((weight.unwrap_or(1), price))
}

pub fn parse_election(text: &str) -> Result<Election> {
    parse_document(text, &[], false).map(|p| p.election)
}

/// Canonical form: candidates, tiebreak, then one line per vote with
/// `weight` (if not 1) before `price` (if any).
pub fn write_election(e: &Election) -> String {
    let mut out = format!("candidates: {}\n", e.names().join(","));
    let tb: Vec<&str> = e.tiebreak().iter().map(|&c| e.name(c)).collect();
    out.push_str(&format!("tiebreak: {}\n", tb.join(">")));
    for v in e.votes() {
        out.push_str("vote");
        if v.weight != 1 {
            out.push_str(&format!(" [weight={}]", v.weight));
        }
        if let Some(p) = v.price {
            out.push_str(&format!(" [price={p}]"));
        }
        out.push_str(&format!(": {}\n", e.ranking_names(&v.ranking).join(">")));
    }
    out
}

pub fn parse_cm(text: &str) -> Result<CmInstance> {
    let p = parse_document(text, &["target", "manipulators", "rule"], true)?;
    let field = |k: &str| {
        p.extra
            .get(k)
            .cloned()
            .ok_or_else(|| Error::parse(0, format!("missing `{k}:` line")))
    };
    let (line, target) = field("target")?;
    let target = p
        .election
        .candidate(&target)
        .ok_or_else(|| Error::parse(line, format!("unknown candidate `{target}`")))?;
    let (line, count) = field("manipulators")?;
    let manipulators = count
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid manipulator count `{count}`")))?;
    let rule = match p.extra.get("rule") {
        Some((line, r)) => r.parse::<Rule>().map_err(|e| Error::parse(*line, e.to_string()))?,
        None => Rule::Borda,
    };
    Ok(CmInstance {
        election: p.election,
        manipulators,
        target,
        rule,
    })
}

pub fn write_cm(src: &CmInstance) -> String {
    let e = &src.election;
    let mut out = write_election(e);
    out.push_str(&format!(
        "target: {}\nmanipulators: {}\nrule: {}\n",
        e.name(src.target),
        src.manipulators,
        src.rule
    ));
    out
}

pub fn parse_x3c(text: &str) -> Result<X3cInstance> {
    let mut universe: Option<(usize, Vec<String>)> = None;
    let mut sets = Vec::new();
    for (n, l) in lines(text) {
        match split_key(n, l)? {
            ("universe", v) if universe.is_none() => universe = Some((n, list(n, v, ',', "element")?)),
            ("set", v) => sets.push((n, list(n, v, ',', "element")?)),
            (k, _) => return Err(Error::parse(n, format!("unexpected key `{k}`"))),
        }
    }
    let (uline, universe) = universe.ok_or_else(|| Error::parse(0, "missing `universe:` line"))?;
    let mut triples = Vec::new();
    for (n, s) in sets {
        if s.len() != 3 {
            return Err(Error::parse(n, format!("a set needs 3 elements, found {}", s.len())));
        }
        let mut t = [0; 3];
        for (slot, x) in t.iter_mut().zip(&s) {
            *slot = universe
                .iter()
                .position(|u| u == x)
                .ok_or_else(|| Error::parse(n, format!("unknown element `{x}`")))?;
        }
        triples.push(t);
    }
    X3cInstance::new(universe, triples).map_err(|e| match e {
        Error::InvalidSource(msg) => Error::parse(uline, msg),
        other => other,
    })
}

pub fn write_x3c(src: &X3cInstance) -> String {
    let u = src.universe();
    let mut out = format!("universe: {}\n", u.join(","));
    for s in src.sets() {
        out.push_str(&format!("set: {},{},{}\n", u[s[0]], u[s[1]], u[s[2]]));
    }
    out
}

pub fn parse_partition(text: &str, variant: PartitionVariant) -> Result<PartitionInstance> {
    let mut weights = None;
    for (n, l) in lines(text) {
        match split_key(n, l)? {
            ("weights", v) if weights.is_none() => {
                let w = list(n, v, ',', "weight")?
                    .iter()
                    .map(|x| x.parse::<u64>().map_err(|_| Error::parse(n, format!("invalid weight `{x}`"))))
                    .collect::<Result<Vec<_>>>()?;
                weights = Some((n, w));
            }
            (k, _) => return Err(Error::parse(n, format!("unexpected key `{k}`"))),
        }
    }
    let (n, w) = weights.ok_or_else(|| Error::parse(0, "missing `weights:` line"))?;
    PartitionInstance::new(w, variant).map_err(|e| match e {
        Error::InvalidSource(msg) => Error::parse(n, msg),
        other => other,
    })
}

pub fn write_partition(src: &PartitionInstance) -> String {
    let w: Vec<String> = src.weights().iter().map(u64::to_string).collect();
    format!("weights: {}\n", w.join(","))
}

/// The generated election, preceded by comment lines naming the rule,
/// target, budget and variant so the file is self-describing.
pub fn write_reduction_instance(out: &ReductionOutput) -> String {
    let inst = &out.instance;
    let e = inst.election();
    let mut s = format!(
        "# reduction: {}\n# rule: {}\n# target: {}\n# variant: {}\n",
        out.reduction,
        inst.rule(),
        e.name(inst.target()),
        inst.variant()
    );
    if let Some(b) = inst.budget() {
        s.push_str(&format!("# budget: {b}\n"));
    }
    s.push_str(&write_election(e));
    s
}

/// The certificate as JSON, with candidates by name.
pub fn certificate_json(out: &ReductionOutput) -> Value {
    let inst = &out.instance;
    let e = inst.election();
    let cert = &out.certificate;
    let relations: Vec<Value> = cert
        .relations
        .iter()
        .map(|r| {
            json!({
                "left": e.name(r.left),
                "right": e.name(r.right),
                "offset": r.offset,
                "strict": r.strict,
                "exclude": r.exclude,
                "text": r.describe(e),
            })
        })
        .collect();
    let source_map: serde_json::Map<String, Value> =
        cert.source_map.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "reduction": out.reduction.name(),
        "rule": inst.rule().to_string(),
        "target": e.name(inst.target()),
        "variant": inst.variant().to_string(),
        "budget": inst.budget(),
        "stated_winner": e.name(cert.stated_winner),
        "designation": cert.designation,
        "designated": cert.designated,
        "lambda": cert.lambda,
        "relations": relations,
        "source_map": source_map,
        "forward": cert.forward,
        "notes": cert.notes,
    })
}
