//! Formal Satake parameters: exceptional characters, the theta-lift parameter
//! transfer, Shimura squaring and Arthur composition.
//!
//! An entry (s, u) stands for the unramified value q^s·u with u a root of unity.
//! Labels live in ℚ/ℤ: the label a/b denotes e(a/b) = exp(2πi·a/b).
//!
//! ```
//! use sympcap::params::{arthur_compose, nearly_equivalent, shimura_square, theta_lift_params, ParamSet};
//!
//! let chi: ParamSet = serde_json::from_str(r#"{"sign":"+","entries":[{"s":"1/3","u":"-1"}]}"#)?;
//! let lifted = theta_lift_params(1, 3, &chi)?;
//! let left = shimura_square(&lifted);
//! let right = arthur_compose(&shimura_square(&chi), 2);
//! assert!(nearly_equivalent(&left, &right)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cover::{CoverDatum, Sign};
use crate::error::{Error, Result};
use crate::exact::{self, int, rat, Rational};

/// A root of unity e(x), x ∈ ℚ/ℤ, stored reduced into [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Rational);

impl Label {
    pub fn new(x: Rational) -> Label {
        let f = x.floor();
        Label(x - f)
    }

    pub fn trivial() -> Label {
        Label(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_zero()
    }

    pub fn inverse(&self) -> Label {
        Label::new(-self.0.clone())
    }

    pub fn square(&self) -> Label {
        Label::new(&self.0 * int(2))
    }

    pub fn order(&self) -> num_bigint::BigInt {
        self.0.denom().clone()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            f.write_str("1")
        } else if self.0 == rat(1, 2) {
            f.write_str("-1")
        } else {
            write!(f, "e({})", self.0)
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let t = s.trim();
        match t {
            "1" | "triv" => return Ok(Label::trivial()),
            "-1" => return Ok(Label::new(rat(1, 2))),
            _ => {}
        }
        let inner = t
            .strip_prefix("e(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Malformed(format!("label {t:?}; expected 1, -1 or e(a/b)")))?;
        let x = exact::parse_rational(inner).ok_or_else(|| Error::Malformed(format!("label {t:?}")))?;
        Ok(Label::new(x))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Label, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One formal Satake entry q^s·u.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SatakeEntry {
    #[serde(with = "exact::serde_rational")]
    pub s: Rational,
    pub u: Label,
}

impl SatakeEntry {
    pub fn new(s: Rational, u: Label) -> SatakeEntry {
        SatakeEntry { s, u }
    }

    pub fn unlabelled(s: Rational) -> SatakeEntry {
        SatakeEntry { s, u: Label::trivial() }
    }

    pub fn inverse(&self) -> SatakeEntry {
        SatakeEntry {
            s: -self.s.clone(),
            u: self.u.inverse(),
        }
    }

    /// Representative of the class {e, e⁻¹}: positive exponent, or the smaller label at s = 0.
    pub fn canonical(&self) -> SatakeEntry {
        if self.s.is_positive() {
            self.clone()
        } else if self.s.is_negative() {
            self.inverse()
        } else {
            let inv = self.inverse();
            if inv.u < self.u {
                inv
            } else {
                self.clone()
            }
        }
    }
}

/// A multiset of Satake entries tagged with the distinguished-character sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSet {
    pub sign: Sign,
    pub entries: Vec<SatakeEntry>,
}

impl ParamSet {
    pub fn new(sign: Sign, entries: Vec<SatakeEntry>) -> ParamSet {
        ParamSet { sign, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorted inversion-class representatives.
    pub fn canonical_multiset(&self) -> Vec<SatakeEntry> {
        let mut v: Vec<SatakeEntry> = self.entries.iter().map(SatakeEntry::canonical).collect();
        v.sort();
        v
    }
}

/// A character ∏ |t_i|^{s_i} of the torus, with its distinguished sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCharacter {
    #[serde(with = "exact::serde_rational_vec")]
    pub exponents: Vec<Rational>,
    pub sign: Sign,
}

/// s_i = (2(r−i)+1)/4.
pub fn chi_theta(r: usize) -> ExceptionalCharacter {
    let exponents = (1..=r).map(|i| rat(2 * (r - i) as i64 + 1, 4)).collect();
    ExceptionalCharacter {
        exponents,
        sign: Sign::Plus,
    }
}

/// s_i = (2(r−i)+3)/4 for i ≤ k.
pub fn chi_gl(k: usize, r: usize) -> Result<ExceptionalCharacter> {
    if k == 0 || k > r {
        return Err(Error::IndexOutOfRange(format!("k = {k} for r = {r}")));
    }
    let exponents = (1..=k).map(|i| rat(2 * (r - i) as i64 + 3, 4)).collect();
    Ok(ExceptionalCharacter {
        exponents,
        sign: Sign::Plus,
    })
}

/// Per-simple-root q-exponents of χ(h_α(ϖ^{n_α})).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalReport {
    #[serde(with = "exact::serde_rational_vec")]
    pub values: Vec<Rational>,
    pub exceptional: bool,
}

fn pairing(s: &[Rational], coroot: &[i64]) -> Rational {
    s.iter().zip(coroot).map(|(x, &c)| x * int(c)).sum()
}

/// The q-exponent of χ(h_α(ϖ^{n_α})) is −n_α⟨s, α^∨⟩; χ is exceptional when it is −1 for every simple α.
pub fn is_exceptional(chi: &ExceptionalCharacter, d: &CoverDatum) -> Result<ExceptionalReport> {
    let r = d.rank();
    if chi.exponents.len() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            found: chi.exponents.len(),
        });
    }
    let values: Vec<Rational> = (1..=r)
        .map(|i| -int(d.n_alpha(i) as i64) * pairing(&chi.exponents, &crate::cover::simple_coroot(i, r)))
        .collect();
    let exceptional = values.iter().all(|v| *v == -Rational::one());
    Ok(ExceptionalReport { values, exceptional })
}

/// The GL_k condition on the double cover: n_α = 2 on every A-type simple root.
pub fn is_exceptional_gl(chi: &ExceptionalCharacter) -> ExceptionalReport {
    let values: Vec<Rational> = chi.exponents.windows(2).map(|w| -int(2) * (&w[0] - &w[1])).collect();
    let exceptional = values.iter().all(|v| *v == -Rational::one());
    ExceptionalReport { values, exceptional }
}

/// Appends the k = n − m entries with exponents (2(k−i)+1)/4, i = 1..k.
pub fn theta_lift_params(m: usize, n: usize, chi: &ParamSet) -> Result<ParamSet> {
    if m > n {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n = {n}")));
    }
    if chi.len() != m {
        return Err(Error::SizeMismatch(chi.len(), m));
    }
    let k = n - m;
    let mut entries = chi.entries.clone();
    entries.extend((1..=k).map(|i| SatakeEntry::unlabelled(rat(2 * (k - i) as i64 + 1, 4))));
    Ok(ParamSet::new(chi.sign, entries))
}

/// (s, u) ↦ (2s, u²).
pub fn shimura_square(chi: &ParamSet) -> ParamSet {
    let entries = chi
        .entries
        .iter()
        .map(|e| SatakeEntry::new(&e.s * int(2), e.u.square()))
        .collect();
    ParamSet::new(chi.sign, entries)
}

/// Prepends exponents (2j−1)/2 for j = k..1 with trivial labels.
pub fn arthur_compose(psi: &ParamSet, k: usize) -> ParamSet {
    let mut entries: Vec<SatakeEntry> = (1..=k)
        .rev()
        .map(|j| SatakeEntry::unlabelled(rat(2 * j as i64 - 1, 2)))
        .collect();
    entries.extend(psi.entries.iter().cloned());
    ParamSet::new(psi.sign, entries)
}

pub fn is_tempered(psi: &ParamSet) -> bool {
    psi.entries.iter().all(|e| e.s.is_zero())
}

/// Multiset equality up to inversion classes.
pub fn nearly_equivalent(a: &ParamSet, b: &ParamSet) -> Result<bool> {
    if a.sign != b.sign {
        return Err(Error::SignMismatch);
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    Ok(a.canonical_multiset() == b.canonical_multiset())
}

/// Which representation carries the lift in a CAP triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapBase {
    Pi,
    Tau,
}

/// Parabolic label Q_{t,N}, base representation and exponents of χ_{Θ,2t}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapTriple {
    pub m: usize,
    pub t: i64,
    pub parabolic: String,
    pub base: CapBase,
    #[serde(with = "exact::serde_rational_vec")]
    pub exponents: Vec<Rational>,
}

/// t = n_pi − n; for t < 0 the roles of π and τ swap and the parabolic lives in rank n_pi.
pub fn cap_triple(m: usize, n_pi: usize, n: usize) -> CapTriple {
    let t = n_pi as i64 - n as i64;
    let (size, ambient, base) = if t >= 0 {
        (t, n, CapBase::Pi)
    } else {
        (-t, n_pi, CapBase::Tau)
    };
    let exponents = (1..=size).map(|i| rat(2 * (size - i) + 1, 4)).collect();
    CapTriple {
        m,
        t,
        parabolic: format!("Q_{{{size},{ambient}}}"),
        base,
        exponents,
    }
}
