//! Root exchange: unipotent subgroups as root sets, characters on them, and
//! the combinatorial conditions for exchanging root groups.
//!
//! A triple check takes the root set C left after removing α, a character
//! carried on C, and the triple (α, γ, β). After a successful exchange the
//! next state is C ∪ {γ}.
//!
//! ```
//! use std::collections::BTreeMap;
//! use sympcap::dsl::{parse_root, parse_root_set};
//! use sympcap::exchange::{check_exchange_triple, ExchangeTriple};
//! use sympcap::filtration::RootCharacter;
//! use sympcap::exact::int;
//!
//! let r = Some(3);
//! // The Sp_6 base step after conjugation: exchange −α_1 for α_1+α_2.
//! let c = parse_root_set("{[0,1,-1],[0,1,1],[1,0,1],[0,2,0],[2,0,0],[1,1,0],[0,0,2]}", r)?;
//! let support: BTreeMap<_, _> = [(parse_root("a2", r)?, int(1)), (parse_root("2*e3", r)?, int(5))].into();
//! let psi = RootCharacter::new(3, c.roots().clone(), support)?;
//! let t = ExchangeTriple::new(parse_root("-a1", r)?, parse_root("a1+a2", r)?, parse_root("a2", r)?);
//! assert!(check_exchange_triple(&c, &psi, &t)?.pass);
//! # Ok::<(), sympcap::Error>(())
//! ```

pub mod corpus;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, int, Rational};
use crate::filtration::RootCharacter;
use crate::rootsys::chevalley::{structure_constant, weyl_lift_sign};
use crate::rootsys::{commutator_support, Root, WeylElement};

/// A closed set of roots containing no opposite pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootGroupSet {
    rank: usize,
    roots: BTreeSet<Root>,
}

/// The first violation of closure or nilpotence, if any.
fn set_violation(roots: &BTreeSet<Root>) -> Option<String> {
    for a in roots {
        if roots.contains(&a.neg()) {
            return Some(format!("contains both {a} and its negative"));
        }
        for b in roots {
            if let Some(s) = a.checked_add(b) {
                if !roots.contains(&s) {
                    return Some(format!("{a} + {b} = {s} is missing"));
                }
            }
        }
    }
    None
}

/// True when the roots form a closed set with no opposite pair.
pub fn validate_root_group_set(roots: &[Root]) -> bool {
    let set: BTreeSet<Root> = roots.iter().cloned().collect();
    let rank = roots.first().map(Root::rank);
    roots.iter().all(|a| Some(a.rank()) == rank) && set_violation(&set).is_none()
}

impl RootGroupSet {
    pub fn new(rank: usize, roots: impl IntoIterator<Item = Root>) -> Result<RootGroupSet> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let roots: BTreeSet<Root> = roots.into_iter().collect();
        if let Some(a) = roots.iter().find(|a| a.rank() != rank) {
            return Err(Error::RankMismatch {
                left: rank,
                right: a.rank(),
            });
        }
        if let Some(v) = set_violation(&roots) {
            return Err(Error::InvalidRootSet(v));
        }
        Ok(RootGroupSet { rank, roots })
    }

    pub fn empty(rank: usize) -> RootGroupSet {
        RootGroupSet {
            rank,
            roots: BTreeSet::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &BTreeSet<Root> {
        &self.roots
    }

    pub fn contains(&self, a: &Root) -> bool {
        self.roots.contains(a)
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

impl Serialize for RootGroupSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.roots.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootGroupSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let roots = Vec::<Root>::deserialize(d)?;
        let rank = roots
            .first()
            .map(Root::rank)
            .ok_or_else(|| D::Error::custom("an empty set has no rank"))?;
        RootGroupSet::new(rank, roots).map_err(D::Error::custom)
    }
}

/// Conjugates a root set and a character by the standard lift of `w`.
///
/// Coefficients pick up the sign of the lift on each root space; only the
/// support is independent of the choice of lift.
pub fn conjugate(w: &WeylElement, c: &RootGroupSet, psi: &RootCharacter) -> Result<(RootGroupSet, RootCharacter)> {
    if w.rank() != c.rank() || w.rank() != psi.rank() {
        return Err(Error::RankMismatch {
            left: w.rank(),
            right: c.rank(),
        });
    }
    let roots: BTreeSet<Root> = c.roots.iter().map(|a| w.apply(a)).collect::<Result<_>>()?;
    let carrier: BTreeSet<Root> = psi.carrier().iter().map(|a| w.apply(a)).collect::<Result<_>>()?;
    let mut support = BTreeMap::new();
    for (a, coef) in psi.support() {
        support.insert(w.apply(a)?, coef * int(weyl_lift_sign(w, a)?));
    }
    Ok((
        RootGroupSet { rank: c.rank, roots },
        RootCharacter::new(psi.rank(), carrier, support)?,
    ))
}

/// Conjugation by the torus element with diagonal entries t: the coefficient on α
/// is multiplied by α(t) = ∏ t_i^{α_i}.
pub fn torus_scale(t: &[Rational], psi: &RootCharacter) -> Result<RootCharacter> {
    if t.len() != psi.rank() {
        return Err(Error::LengthMismatch {
            expected: psi.rank(),
            found: t.len(),
        });
    }
    if let Some(i) = t.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoefficient { index: i });
    }
    let mut support = BTreeMap::new();
    for (a, coef) in psi.support() {
        let mut v = coef.clone();
        for (ti, &ci) in t.iter().zip(a.coords()) {
            if ci > 0 {
                for _ in 0..ci {
                    v *= ti;
                }
            } else {
                for _ in 0..-ci {
                    v /= ti;
                }
            }
        }
        support.insert(a.clone(), v);
    }
    RootCharacter::new(psi.rank(), psi.carrier().clone(), support)
}

/// (α, γ, β); β = α + γ is checked, not assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeTriple {
    pub alpha: Root,
    pub gamma: Root,
    pub beta: Root,
}

impl ExchangeTriple {
    pub fn new(alpha: Root, gamma: Root, beta: Root) -> ExchangeTriple {
        ExchangeTriple { alpha, gamma, beta }
    }
}

/// Per-condition outcome of a triple check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    /// Conditions 1 to 4 in order.
    pub conditions: [bool; 4],
    pub pass: bool,
    /// Set when the support contains negative roots, where the quantifier of
    /// condition 4 is ambiguous.
    pub negative_support: bool,
    pub violations: Vec<String>,
}

impl TripleReport {
    /// 1-based numbers of the failed conditions.
    pub fn failed(&self) -> Vec<usize> {
        (0..4).filter(|&i| !self.conditions[i]).map(|i| i + 1).collect()
    }
}

fn ensure_carried(c: &RootGroupSet, psi: &RootCharacter) -> Result<()> {
    if c.rank != psi.rank() {
        return Err(Error::RankMismatch {
            left: c.rank,
            right: psi.rank(),
        });
    }
    if let Some(a) = psi.support().keys().find(|a| !c.contains(a)) {
        return Err(Error::InvalidCharacter(format!("support root {a} is not in C")));
    }
    psi.with_carrier(c.roots.clone())?;
    Ok(())
}

/// Commutator support, or `None` for an opposite pair.
fn comm(a: &Root, b: &Root) -> Option<Vec<Root>> {
    commutator_support(a, b).ok()
}

/// Checks the four exchange-triple conditions.
///
/// 1. every positive combination of α and γ lies in C;
/// 2. every positive combination of α or γ with a root of C lies in C;
/// 3. β = α + γ;
/// 4. no support root other than β is a positive combination of α and γ.
pub fn check_exchange_triple(c: &RootGroupSet, psi: &RootCharacter, t: &ExchangeTriple) -> Result<TripleReport> {
    ensure_carried(c, psi)?;
    for x in [&t.alpha, &t.gamma, &t.beta] {
        if x.rank() != c.rank {
            return Err(Error::RankMismatch {
                left: c.rank,
                right: x.rank(),
            });
        }
    }
    if !psi.support().contains_key(&t.beta) {
        return Err(Error::BetaNotInSupport(t.beta.to_string()));
    }
    let mut violations = Vec::new();
    let ag = comm(&t.alpha, &t.gamma);
    let c1 = match &ag {
        Some(s) => {
            let missing: Vec<&Root> = s.iter().filter(|x| !c.contains(x)).collect();
            for m in &missing {
                violations.push(format!("(1) {m} is not in C"));
            }
            missing.is_empty()
        }
        None => {
            violations.push("(1) α = −γ".into());
            false
        }
    };
    let mut c2 = true;
    for mu in &c.roots {
        for x in [&t.alpha, &t.gamma] {
            match comm(x, mu) {
                Some(s) => {
                    if let Some(m) = s.iter().find(|y| !c.contains(y)) {
                        c2 = false;
                        violations.push(format!("(2) [{x}, {mu}] reaches {m}"));
                    }
                }
                None => {
                    c2 = false;
                    violations.push(format!("(2) {mu} is opposite to {x}"));
                }
            }
        }
    }
    let c3 = t.alpha.checked_add(&t.gamma).as_ref() == Some(&t.beta)
        || t.alpha
            .coords()
            .iter()
            .zip(t.gamma.coords())
            .map(|(a, b)| a + b)
            .eq(t.beta.coords().iter().copied());
    if !c3 {
        violations.push(format!("(3) {} + {} ≠ {}", t.alpha, t.gamma, t.beta));
    }
    let mut c4 = true;
    if let Some(s) = &ag {
        for b in psi.support().keys() {
            if b != &t.beta && s.contains(b) {
                c4 = false;
                violations.push(format!("(4) support root {b} is a combination of α and γ"));
            }
        }
    }
    let conditions = [c1, c2, c3, c4];
    Ok(TripleReport {
        conditions,
        pass: conditions.iter().all(|&x| x),
        negative_support: psi.support().keys().any(|a| !a.is_positive()),
        violations,
    })
}

/// Per-property outcome of a quadruple check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrupleReport {
    /// Properties 1 to 6 in order.
    pub properties: [bool; 6],
    pub pass: bool,
    /// Rows indexed by X∖C, columns by Y∖C.
    #[serde(with = "pairing_serde")]
    pub pairing: Vec<Vec<Rational>>,
    pub violations: Vec<String>,
}

mod pairing_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = m
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let v: Vec<Vec<String>> = Vec::deserialize(d)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|x| crate::exact::parse_rational(x).ok_or_else(|| serde::de::Error::custom("bad rational")))
                    .collect()
            })
            .collect()
    }
}

impl QuadrupleReport {
    pub fn failed(&self) -> Vec<usize> {
        (0..6).filter(|&i| !self.properties[i]).map(|i| i + 1).collect()
    }
}

fn all_within(a: &Root, b: &Root, target: &BTreeSet<Root>) -> bool {
    comm(a, b).is_some_and(|s| s.iter().all(|x| target.contains(x)))
}

/// Checks the six root-level conditions for exchanging X and Y over (C, ψ).
///
/// 1. [X,C] ⊆ C and [Y,C] ⊆ C;
/// 2. X∩C is normal in X with abelian quotient, and likewise for Y;
/// 3. commutators of X or Y with C avoid the support of ψ;
/// 4. ψ vanishes on X and Y;
/// 5. [X,Y] ⊆ C;
/// 6. the pairing (x, y) ↦ N_{x,y}·ψ(x+y) on X∖C × Y∖C is square and nondegenerate.
pub fn check_exchange_quadruple(
    c: &RootGroupSet,
    psi: &RootCharacter,
    x: &RootGroupSet,
    y: &RootGroupSet,
) -> Result<QuadrupleReport> {
    ensure_carried(c, psi)?;
    for s in [x, y] {
        if s.rank != c.rank && !s.is_empty() {
            return Err(Error::RankMismatch {
                left: c.rank,
                right: s.rank,
            });
        }
    }
    let mut violations = Vec::new();
    let support: BTreeSet<Root> = psi.support().keys().cloned().collect();

    let mut p1 = true;
    for s in [x, y] {
        for a in &s.roots {
            for m in &c.roots {
                if !all_within(a, m, &c.roots) {
                    p1 = false;
                    violations.push(format!("(1) [{a}, {m}] leaves C"));
                }
            }
        }
    }

    let mut p2 = true;
    for s in [x, y] {
        let inter: BTreeSet<Root> = s.roots.intersection(&c.roots).cloned().collect();
        for a in &s.roots {
            for b in &s.roots {
                if a != b && !all_within(a, b, &inter) {
                    p2 = false;
                    violations.push(format!("(2) [{a}, {b}] leaves X∩C"));
                }
            }
        }
    }

    let mut p3 = true;
    for s in [x, y] {
        for a in &s.roots {
            for m in &c.roots {
                if let Some(hit) = comm(a, m).and_then(|v| v.into_iter().find(|z| support.contains(z))) {
                    p3 = false;
                    violations.push(format!("(3) [{a}, {m}] meets the support at {hit}"));
                }
            }
        }
    }

    let p4 = support.iter().all(|a| !x.contains(a) && !y.contains(a));
    if !p4 {
        violations.push("(4) ψ is nontrivial on X or Y".into());
    }

    let mut p5 = true;
    for a in &x.roots {
        for b in &y.roots {
            if !all_within(a, b, &c.roots) {
                p5 = false;
                violations.push(format!("(5) [{a}, {b}] leaves C"));
            }
        }
    }

    let xs: Vec<&Root> = x.roots.iter().filter(|a| !c.contains(a)).collect();
    let ys: Vec<&Root> = y.roots.iter().filter(|a| !c.contains(a)).collect();
    let pairing: Vec<Vec<Rational>> = xs
        .iter()
        .map(|a| {
            ys.iter()
                .map(|b| match a.checked_add(b) {
                    Some(s) => int(structure_constant(a, b).expect("sum is a root")) * psi.coefficient(&s),
                    None => Rational::zero(),
                })
                .collect()
        })
        .collect();
    let p6 = xs.len() == ys.len() && !exact::determinant(&pairing).is_zero();
    if !p6 {
        violations.push(format!(
            "(6) pairing of size {}×{} is degenerate or not square",
            xs.len(),
            ys.len()
        ));
    }

    let properties = [p1, p2, p3, p4, p5, p6];
    Ok(QuadrupleReport {
        properties,
        pass: properties.iter().all(|&v| v),
        pairing,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_root;
    use crate::exact::rat;
    use crate::rootsys::all_roots;
    use proptest::prelude::*;

    fn root(v: &[i64]) -> Root {
        Root::new(v.to_vec()).unwrap()
    }

    #[test]
    fn root_set_examples() {
        let a1 = root(&[1, -1]);
        let a2 = root(&[0, 2]);
        assert!(!validate_root_group_set(&[a1.clone(), a2.clone()]));
        assert!(validate_root_group_set(&[
            a1.clone(),
            a2.clone(),
            root(&[1, 1]),
            root(&[2, 0])
        ]));
        assert!(!validate_root_group_set(&[a1.clone(), a1.neg()]));
        assert!(RootGroupSet::new(2, [a1.clone(), a2]).is_err());
        assert!(crate::dsl::parse_root_set("{a1,a2}", Some(2)).is_err());
    }

    fn borel(r: usize) -> RootGroupSet {
        RootGroupSet::new(r, crate::rootsys::positive_roots(r)).unwrap()
    }

    #[test]
    fn torus_examples() {
        let r = 3;
        let c = borel(r);
        let psi = RootCharacter::new(
            r,
            c.roots().clone(),
            [(root(&[1, -1, 0]), int(1)), (root(&[0, 0, 2]), int(2))].into(),
        )
        .unwrap();
        assert_eq!(torus_scale(&[int(1), int(1), int(1)], &psi).unwrap(), psi);
        let s = torus_scale(&[int(3), int(1), int(5)], &psi).unwrap();
        assert_eq!(s.coefficient(&root(&[1, -1, 0])), int(3));
        assert_eq!(s.coefficient(&root(&[0, 0, 2])), int(50));
        let s = torus_scale(&[int(1), int(2), int(1)], &psi).unwrap();
        assert_eq!(s.coefficient(&root(&[1, -1, 0])), rat(1, 2));
        assert!(torus_scale(&[int(0), int(1), int(1)], &psi).is_err());
    }

    #[test]
    fn triple_sum_mismatch_fails_condition_three() {
        let r = 2;
        let c = borel(r);
        let a1 = parse_root("a1", Some(r)).unwrap();
        let a2 = parse_root("a2", Some(r)).unwrap();
        let c_minus: BTreeSet<Root> = c.roots().iter().filter(|x| **x != a1 && **x != a2).cloned().collect();
        let c2 = RootGroupSet::new(r, c_minus).unwrap();
        let beta = root(&[2, 0]);
        let psi = RootCharacter::new(r, c2.roots().clone(), [(beta.clone(), int(1))].into()).unwrap();
        let rep = check_exchange_triple(&c2, &psi, &ExchangeTriple::new(a1, a2, beta)).unwrap();
        assert!(!rep.conditions[2]);
        assert!(!rep.pass);
    }

    #[test]
    fn empty_quadruple_passes() {
        let c = borel(2);
        let psi = RootCharacter::new(2, c.roots().clone(), BTreeMap::new()).unwrap();
        let rep = check_exchange_quadruple(&c, &psi, &RootGroupSet::empty(2), &RootGroupSet::empty(2)).unwrap();
        assert!(rep.pass);
        assert!(rep.pairing.is_empty());
    }

    #[test]
    fn identity_conjugation_is_trivial() {
        let c = borel(3);
        let psi = RootCharacter::new(3, c.roots().clone(), [(root(&[1, -1, 0]), int(4))].into()).unwrap();
        let (c2, p2) = conjugate(&WeylElement::identity(3), &c, &psi).unwrap();
        assert_eq!(c2, c);
        assert_eq!(p2, psi);
    }

    fn arb_instance() -> impl Strategy<Value = (WeylElement, WeylElement, RootGroupSet, RootCharacter)> {
        (2usize..=5).prop_flat_map(|r| {
            let word = move || {
                proptest::collection::vec(1..=r, 0..10).prop_map(move |w| WeylElement::from_word(&w, r).unwrap())
            };
            (word(), word(), word(), proptest::collection::vec(-3i64..=3, r)).prop_map(move |(w1, w2, g, coefs)| {
                let c = borel(r);
                let (c, _) = conjugate(
                    &g,
                    &c,
                    &RootCharacter::new(r, c.roots().clone(), BTreeMap::new()).unwrap(),
                )
                .unwrap();
                let simple: Vec<Root> = c
                    .roots()
                    .iter()
                    .filter(|a| {
                        !c.roots()
                            .iter()
                            .any(|b| c.roots().iter().any(|d| b.checked_add(d).as_ref() == Some(*a)))
                    })
                    .cloned()
                    .collect();
                let support: BTreeMap<Root, Rational> = simple
                    .into_iter()
                    .zip(coefs)
                    .filter(|(_, k)| *k != 0)
                    .map(|(a, k)| (a, int(k)))
                    .collect();
                let psi = RootCharacter::new(r, c.roots().clone(), support).unwrap();
                (w1, w2, c, psi)
            })
        })
    }

    proptest! {
        #[test]
        fn conjugation_is_an_action_on_supports((w1, w2, c, psi) in arb_instance()) {
            let (c12, p12) = conjugate(&w1.compose(&w2).unwrap(), &c, &psi).unwrap();
            let (c2, p2) = conjugate(&w2, &c, &psi).unwrap();
            let (c1, p1) = conjugate(&w1, &c2, &p2).unwrap();
            prop_assert_eq!(c12, c1);
            prop_assert_eq!(p12.carrier(), p1.carrier());
            for (a, k) in p12.support() {
                let other = p1.coefficient(a);
                prop_assert!(&other == k || other == -k.clone());
            }
            prop_assert_eq!(p12.support().len(), p1.support().len());
        }

        #[test]
        fn torus_scaling_keeps_support(
            (_, _, c, psi) in arb_instance(),
            t in proptest::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], 5)
        ) {
            let t: Vec<Rational> = t.into_iter().take(c.rank()).map(int).collect();
            let s = torus_scale(&t, &psi).unwrap();
            prop_assert_eq!(s.support().keys().collect::<Vec<_>>(), psi.support().keys().collect::<Vec<_>>());
        }
    }

    #[test]
    fn every_root_pair_has_consistent_commutators() {
        for a in all_roots(3) {
            for b in all_roots(3) {
                if a != b.neg() {
                    assert!(comm(&a, &b).is_some());
                }
            }
        }
    }
}
