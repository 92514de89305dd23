//! The replayable exchange corpus: named proof states with their expected verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{check_exchange_quadruple, check_exchange_triple, ExchangeTriple, RootGroupSet};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::filtration::RootCharacter;
use crate::rootsys::{all_roots, Root};

const CORPUS_JSON: &str = include_str!("../../data/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Pass,
    Fail,
}

/// The check performed by an entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EntryCheck {
    Triple {
        alpha: Root,
        gamma: Root,
        beta: Root,
    },
    Quadruple {
        #[serde(rename = "X")]
        x: Vec<Root>,
        #[serde(rename = "Y")]
        y: Vec<Root>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Free-text description of the proof step.
    pub paper_ref: String,
    pub rank: usize,
    #[serde(rename = "C")]
    pub c: Vec<Root>,
    #[serde(with = "psi_serde")]
    pub psi: BTreeMap<Root, Rational>,
    #[serde(flatten)]
    pub check: EntryCheck,
    pub expect: Expect,
}

mod psi_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Root, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> = m
            .iter()
            .map(|(a, c)| (a.to_string(), exact::format_rational(c)))
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Root, Rational>, D::Error> {
        use serde::de::Error as _;
        let raw: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let a = crate::dsl::parse_root(&k, None).map_err(D::Error::custom)?;
            let text = match &v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                _ => {
                    return Err(D::Error::custom(format!(
                        "coefficient for {k} must be a string or integer"
                    )))
                }
            };
            let c =
                exact::parse_rational(&text).ok_or_else(|| D::Error::custom(format!("bad coefficient {text:?}")))?;
            out.insert(a, c);
        }
        Ok(out)
    }
}

/// Outcome of replaying one entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryOutcome {
    pub name: String,
    pub pass: bool,
    pub expected: Expect,
    /// 1-based numbers of failed conditions; empty on pass or on a structural error.
    pub failed: Vec<usize>,
    /// Set when the entry could not be checked at all.
    pub error: Option<String>,
}

impl EntryOutcome {
    pub fn as_expected(&self) -> bool {
        self.pass == (self.expected == Expect::Pass)
    }
}

/// Parses a corpus document.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(text).map_err(|e| Error::Malformed(format!("corpus: {e}")))?;
    for e in &entries {
        e.validate()?;
    }
    Ok(entries)
}

/// The corpus shipped with the crate.
pub fn load_corpus() -> Result<Vec<CorpusEntry>> {
    parse_corpus(CORPUS_JSON)
}

impl CorpusEntry {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Error::Malformed(format!("entry {}: {what}", self.name));
        let ranks = self.c.iter().chain(self.psi.keys()).chain(match &self.check {
            EntryCheck::Triple { alpha, gamma, beta } => vec![alpha, gamma, beta].into_iter(),
            EntryCheck::Quadruple { x, y } => x.iter().chain(y.iter()).collect::<Vec<_>>().into_iter(),
        });
        for a in ranks {
            if a.rank() != self.rank {
                return Err(bad(&format!("root {a} has rank {}", a.rank())));
            }
        }
        Ok(())
    }

    /// Runs the check; structural errors (non-closed C, character not carried) count as failures.
    pub fn run(&self) -> EntryOutcome {
        let verdict = self.evaluate();
        let (pass, failed, error) = match verdict {
            Ok((p, f)) => (p, f, None),
            Err(e) => (false, Vec::new(), Some(e.to_string())),
        };
        EntryOutcome {
            name: self.name.clone(),
            pass,
            expected: self.expect,
            failed,
            error,
        }
    }

    fn evaluate(&self) -> Result<(bool, Vec<usize>)> {
        let c = RootGroupSet::new(self.rank, self.c.iter().cloned())?;
        let psi = RootCharacter::new(self.rank, c.roots().clone(), self.psi.clone())?;
        match &self.check {
            EntryCheck::Triple { alpha, gamma, beta } => {
                let rep = check_exchange_triple(
                    &c,
                    &psi,
                    &ExchangeTriple::new(alpha.clone(), gamma.clone(), beta.clone()),
                )?;
                Ok((rep.pass, rep.failed()))
            }
            EntryCheck::Quadruple { x, y } => {
                let x = set_or_empty(self.rank, x)?;
                let y = set_or_empty(self.rank, y)?;
                let rep = check_exchange_quadruple(&c, &psi, &x, &y)?;
                Ok((rep.pass, rep.failed()))
            }
        }
    }

    /// Single mutations: each root of C deleted in turn, then for triples each
    /// replacement of β by a root of the support that is not α + γ.
    pub fn mutations(&self) -> Vec<(String, CorpusEntry)> {
        let mut out = Vec::new();
        for (i, d) in self.c.iter().enumerate() {
            let mut m = self.clone();
            m.c.remove(i);
            m.name = format!("{}/delete {d}", self.name);
            m.expect = Expect::Fail;
            out.push((format!("delete {d}"), m));
        }
        if let EntryCheck::Triple { alpha, gamma, beta } = &self.check {
            let sum: Vec<i64> = alpha.coords().iter().zip(gamma.coords()).map(|(a, b)| a + b).collect();
            for b in all_roots(self.rank) {
                if b.coords() == sum.as_slice() || &b == beta {
                    continue;
                }
                let mut m = self.clone();
                m.check = EntryCheck::Triple {
                    alpha: alpha.clone(),
                    gamma: gamma.clone(),
                    beta: b.clone(),
                };
                m.name = format!("{}/beta {b}", self.name);
                m.expect = Expect::Fail;
                out.push((format!("beta {b}"), m));
            }
        }
        out
    }
}

fn set_or_empty(rank: usize, roots: &[Root]) -> Result<RootGroupSet> {
    if roots.is_empty() {
        Ok(RootGroupSet::empty(rank))
    } else {
        RootGroupSet::new(rank, roots.iter().cloned())
    }
}

/// Replays every entry in corpus order.
pub fn run_all(entries: &[CorpusEntry]) -> Vec<EntryOutcome> {
    entries.iter().map(CorpusEntry::run).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn malformed_corpus_is_rejected() {
        assert!(parse_corpus("{").is_err());
        assert!(parse_corpus(r#"[{"name":"x","paper_ref":"","rank":2,"C":[[1,1,0]],"psi":{},"kind":"triple","alpha":[1,-1],"gamma":[0,2],"beta":[1,1],"expect":"pass"}]"#).is_err());
        assert_eq!(parse_corpus("[]").unwrap(), Vec::new());
    }

    #[test]
    fn numeric_coefficients_are_accepted() {
        let e = parse_corpus(r#"[{"name":"x","paper_ref":"","rank":2,"C":[[1,1],[2,0]],"psi":{"[1,1]":1},"kind":"quadruple","X":[],"Y":[],"expect":"pass"}]"#).unwrap();
        assert!(e[0].run().pass);
    }
}
