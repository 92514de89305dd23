//! The filtration of the unipotent radical by the grading of an orbit, generic
//! characters of V_2, and their stabilizers in the Levi.
//!
//! ```
//! use sympcap::filtration::{generic_character, grade_orbit, stabilizer_dimension};
//! use sympcap::exact::int;
//! use sympcap::orbits::SymplecticPartition;
//!
//! let siegel: SymplecticPartition = "2^4".parse()?;
//! let data = grade_orbit(&siegel);
//! assert_eq!(data.level(2).len(), 10);
//! assert!(data.level(1).iter().eq(data.level(2).iter()));
//!
//! let psi = generic_character(&siegel, &[int(1), int(1), int(-1), int(3)])?;
//! assert_eq!(stabilizer_dimension(&siegel, &psi)?, 6);
//! # Ok::<(), sympcap::Error>(())
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, int, Rational};
use crate::field::{FieldHandle, SquareClass};
use crate::orbits::{h_of_orbit, SymplecticPartition};
use crate::rootsys::chevalley::structure_constant;
use crate::rootsys::{all_roots, positive_roots, simple_root, Root};

/// The grading attached to an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedUnipotentData {
    pub orbit: SymplecticPartition,
    pub h: Vec<i64>,
    /// Weight of every positive root.
    pub weights: BTreeMap<Root, i64>,
    /// V_l for l ≥ 1, up to the largest weight.
    pub levels: BTreeMap<i64, Vec<Root>>,
    /// Roots of both signs with weight 0.
    pub levi: Vec<Root>,
}

fn weight_of(h: &[i64], a: &Root) -> i64 {
    h.iter().zip(a.coords()).map(|(x, y)| x * y).sum()
}

/// Computes weights, filtration levels and Levi roots for an orbit.
pub fn grade_orbit(lambda: &SymplecticPartition) -> GradedUnipotentData {
    let r = lambda.rank();
    let h = h_of_orbit(lambda);
    let weights: BTreeMap<Root, i64> = positive_roots(r)
        .into_iter()
        .map(|a| (a.clone(), weight_of(&h, &a)))
        .collect();
    let top = weights.values().copied().max().unwrap_or(0);
    let levels = (1..=top)
        .map(|l| {
            (
                l,
                weights
                    .iter()
                    .filter(|(_, &w)| w >= l)
                    .map(|(a, _)| a.clone())
                    .collect(),
            )
        })
        .collect();
    let levi: Vec<Root> = all_roots(r).into_iter().filter(|a| weight_of(&h, a) == 0).collect();
    let data = GradedUnipotentData {
        orbit: lambda.clone(),
        h,
        weights,
        levels,
        levi,
    };
    let graded: usize = data.weights.values().filter(|&&w| w >= 1).count();
    assert_eq!(
        2 * r * r + r,
        r + data.levi.len() + 2 * graded,
        "grading must exhaust sp_2r"
    );
    data
}

impl GradedUnipotentData {
    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn weight(&self, a: &Root) -> i64 {
        weight_of(&self.h, a)
    }

    /// V_l; for l ≤ 0 this is every positive root.
    pub fn level(&self, l: i64) -> Vec<Root> {
        if l <= 0 {
            return self.weights.keys().cloned().collect();
        }
        self.levels.get(&l).cloned().unwrap_or_default()
    }

    /// Positive roots of weight exactly `l`.
    pub fn graded_piece(&self, l: i64) -> Vec<Root> {
        self.weights
            .iter()
            .filter(|(_, &w)| w == l)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn levi_dimension(&self) -> usize {
        self.rank() + self.levi.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let levels: serde_json::Map<String, serde_json::Value> = self
            .levels
            .iter()
            .map(|(l, v)| (l.to_string(), serde_json::to_value(v).expect("roots serialize")))
            .collect();
        serde_json::json!({
            "schema": crate::SCHEMA,
            "orbit": self.orbit,
            "h": self.h,
            "levels": levels,
            "levi": self.levi,
        })
    }
}

/// Root set of V_2 as an ordered set.
pub fn v2_roots(lambda: &SymplecticPartition) -> BTreeSet<Root> {
    grade_orbit(lambda).level(2).into_iter().collect()
}

/// Dimension of the Heisenberg quotient of V_1 for the orbit (2m)1^{2(r−m)}, and its center.
pub fn heisenberg_quotient(m: usize, r: usize) -> Result<(usize, Root)> {
    if !(1 <= m && m <= r) {
        return Err(Error::IndexOutOfRange(format!(
            "heisenberg needs 1 ≤ m ≤ r, got m={m}, r={r}"
        )));
    }
    let mut parts = vec![2 * m as u32];
    parts.extend(std::iter::repeat_n(1, 2 * (r - m)));
    let orbit = SymplecticPartition::new(parts)?;
    let data = grade_orbit(&orbit);
    let psi = family_character(&orbit, &[int(1)])?;
    let center: Vec<&Root> = psi
        .support()
        .keys()
        .filter(|a| a.kind() == crate::rootsys::RootKind::Long)
        .collect();
    let center = center.first().copied().cloned().expect("support has a long root");
    let ones = data.graded_piece(1);
    for a in &ones {
        for b in &ones {
            if let Some(s) = a.checked_add(b) {
                if psi.support().contains_key(&s) {
                    debug_assert_eq!(s, center);
                }
            }
        }
    }
    Ok((ones.len(), center))
}

/// A character on a unipotent root group, given by coefficients on roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCharacter {
    rank: usize,
    carrier: BTreeSet<Root>,
    support: BTreeMap<Root, Rational>,
}

impl RootCharacter {
    /// Validates that the support lies in the carrier with nonzero coefficients
    /// and that no support root is a sum of two carrier roots.
    pub fn new(rank: usize, carrier: BTreeSet<Root>, support: BTreeMap<Root, Rational>) -> Result<RootCharacter> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        for a in carrier.iter().chain(support.keys()) {
            if a.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: a.rank(),
                });
            }
        }
        for (i, (a, c)) in support.iter().enumerate() {
            if c.is_zero() {
                return Err(Error::ZeroCoefficient { index: i });
            }
            if !carrier.contains(a) {
                return Err(Error::InvalidCharacter(format!(
                    "support root {a} is outside the carrier"
                )));
            }
        }
        for a in &carrier {
            for b in &carrier {
                if let Some(s) = a.checked_add(b) {
                    if support.contains_key(&s) {
                        return Err(Error::InvalidCharacter(format!("support root {s} is {a} + {b}")));
                    }
                }
            }
        }
        Ok(RootCharacter { rank, carrier, support })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn carrier(&self) -> &BTreeSet<Root> {
        &self.carrier
    }

    pub fn support(&self) -> &BTreeMap<Root, Rational> {
        &self.support
    }

    /// Coefficient on `a`, zero off the support.
    pub fn coefficient(&self, a: &Root) -> Rational {
        self.support.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    /// Same support moved to another carrier.
    pub fn with_carrier(&self, carrier: BTreeSet<Root>) -> Result<RootCharacter> {
        RootCharacter::new(self.rank, carrier, self.support.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct CharacterJson {
    rank: usize,
    carrier: Vec<Root>,
    psi: BTreeMap<String, String>,
}

impl Serialize for RootCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson {
            rank: self.rank,
            carrier: self.carrier.iter().cloned().collect(),
            psi: self
                .support
                .iter()
                .map(|(a, c)| (a.to_string(), c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = CharacterJson::deserialize(d)?;
        let support = psi_from_strings(&j.psi, Some(j.rank)).map_err(D::Error::custom)?;
        RootCharacter::new(j.rank, j.carrier.into_iter().collect(), support).map_err(D::Error::custom)
    }
}

/// Reads a `{root: coefficient}` map written with DSL root keys and rational values.
pub fn psi_from_strings(map: &BTreeMap<String, String>, rank: Option<usize>) -> Result<BTreeMap<Root, Rational>> {
    let mut out = BTreeMap::new();
    for (k, v) in map {
        let a = crate::dsl::parse_root(k, rank)?;
        let c = exact::parse_rational(v).ok_or_else(|| Error::Malformed(format!("coefficient {v:?}")))?;
        out.insert(a, c);
    }
    Ok(out)
}

/// Orbit families with a known generic character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// (2^a 1^{2c})
    Siegel { a: usize, c: usize },
    /// ((2m) 1^{2(r−m)}) with m ≥ 2
    Hook { m: usize, r: usize },
    /// (3² 1^{2c})
    ThreeSquared { c: usize },
}

impl Family {
    pub fn of(lambda: &SymplecticPartition) -> Result<Family> {
        let p = lambda.parts();
        let ones = p.iter().filter(|&&x| x == 1).count();
        if p.iter().all(|&x| x <= 2) {
            return Ok(Family::Siegel {
                a: p.len() - ones,
                c: ones / 2,
            });
        }
        if p[0].is_multiple_of(2) && p[1..].iter().all(|&x| x == 1) {
            return Ok(Family::Hook {
                m: p[0] as usize / 2,
                r: lambda.rank(),
            });
        }
        if p.len() >= 2 && p[0] == 3 && p[1] == 3 && p[2..].iter().all(|&x| x == 1) {
            return Ok(Family::ThreeSquared { c: ones / 2 });
        }
        Err(Error::UnsupportedFamily(lambda.to_string()))
    }

    /// Number of coefficients a character in this family takes.
    pub fn data_len(&self) -> usize {
        match self {
            Family::Siegel { a, .. } => *a,
            Family::Hook { .. } => 1,
            Family::ThreeSquared { .. } => 2,
        }
    }

    /// Dimension of the stabilizer of a generic character.
    pub fn expected_stabilizer_dimension(&self) -> usize {
        let sp = |c: usize| c * (2 * c + 1);
        match *self {
            Family::Siegel { a, c } => a * a.saturating_sub(1) / 2 + sp(c),
            Family::Hook { m, r } => sp(r - m),
            Family::ThreeSquared { c } => 3 + sp(c),
        }
    }

    fn support_roots(&self, r: usize) -> Vec<Root> {
        let e = |terms: &[(i64, usize)]| Root::from_terms(r, terms).expect("family roots are roots");
        match *self {
            Family::Siegel { a, .. } => (1..=a).map(|i| e(&[(2, i)])).collect(),
            Family::Hook { m, .. } => {
                let mut v: Vec<Root> = (1..m).map(|i| simple_root(i, r).expect("in range")).collect();
                v.push(e(&[(2, m)]));
                v
            }
            Family::ThreeSquared { .. } => vec![e(&[(1, 1), (-1, 3)]), e(&[(1, 2), (1, 3)])],
        }
    }
}

fn build_family(lambda: &SymplecticPartition, data: &[Rational], strict: bool) -> Result<RootCharacter> {
    let family = Family::of(lambda)?;
    if data.len() != family.data_len() {
        return Err(Error::DataLength {
            expected: family.data_len(),
            found: data.len(),
        });
    }
    let r = lambda.rank();
    let roots = family.support_roots(r);
    let coefs: Vec<Rational> = match family {
        Family::Hook { m, .. } => {
            let mut c = vec![Rational::one(); m - 1];
            c.push(data[0].clone());
            c
        }
        _ => data.to_vec(),
    };
    let mut support = BTreeMap::new();
    for (i, (a, c)) in roots.into_iter().zip(coefs).enumerate() {
        if c.is_zero() {
            if strict {
                let index = if matches!(family, Family::Hook { .. }) { 0 } else { i };
                return Err(Error::ZeroCoefficient { index });
            }
            continue;
        }
        support.insert(a, c);
    }
    RootCharacter::new(r.max(1), v2_roots(lambda), support)
}

/// The generic character of a supported family; every coefficient must be nonzero.
///
/// (2^a 1^{2c}) takes a coefficients on 2ε_i, ((2m)1^b) takes the coefficient
/// on 2ε_m (with 1 on α_1..α_{m−1}), and (3² 1^{2c}) takes coefficients on
/// ε_1−ε_3 and ε_2+ε_3.
pub fn generic_character(lambda: &SymplecticPartition, data: &[Rational]) -> Result<RootCharacter> {
    build_family(lambda, data, true)
}

/// As [`generic_character`], but zero coefficients drop out of the support.
pub fn family_character(lambda: &SymplecticPartition, data: &[Rational]) -> Result<RootCharacter> {
    build_family(lambda, data, false)
}

/// Dimension of the annihilator of ψ in Lie(M(O)).
///
/// Computes m − rank of X ↦ (Y ↦ ψ([X,Y])) for X over the Cartan and Levi
/// root vectors and Y over the weight-2 root vectors.
pub fn stabilizer_dimension(lambda: &SymplecticPartition, psi: &RootCharacter) -> Result<usize> {
    let data = grade_orbit(lambda);
    let r = data.rank();
    if psi.rank() != r.max(1) {
        return Err(Error::RankMismatch {
            left: r,
            right: psi.rank(),
        });
    }
    let two = data.graded_piece(2);
    if let Some(bad) = psi.support().keys().find(|a| data.weight(a) != 2) {
        return Err(Error::NotOnV2(format!("{bad} has weight {}", data.weight(bad))));
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for i in 0..r {
        rows.push(two.iter().map(|b| int(b.coords()[i]) * psi.coefficient(b)).collect());
    }
    for a in &data.levi {
        let row = two
            .iter()
            .map(|b| match a.checked_add(b) {
                Some(s) => int(structure_constant(a, b).expect("weights differ")) * psi.coefficient(&s),
                None => Rational::zero(),
            })
            .collect();
        rows.push(row);
    }
    Ok(rows.len() - exact::rank(&rows))
}

/// True when the stabilizer has the dimension expected for the family.
pub fn is_generic_character(lambda: &SymplecticPartition, psi: &RootCharacter) -> Result<bool> {
    let family = Family::of(lambda)?;
    Ok(stabilizer_dimension(lambda, psi)? == family.expected_stabilizer_dimension())
}

/// Verdict of [`split_form_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitVerdict {
    Split,
    Nonsplit,
    Undecided,
}

impl std::fmt::Display for SplitVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SplitVerdict::Split => "split",
            SplitVerdict::Nonsplit => "nonsplit",
            SplitVerdict::Undecided => "undecided",
        })
    }
}

/// Whether the classes can be perfectly matched so each pair multiplies to −1 times a square.
fn pairs_off(classes: &[SquareClass], negated: &[SquareClass]) -> bool {
    let mut count: BTreeMap<&SquareClass, usize> = BTreeMap::new();
    for c in classes {
        *count.entry(c).or_insert(0) += 1;
    }
    let partner: BTreeMap<&SquareClass, &SquareClass> = classes.iter().zip(negated).collect();
    count.iter().all(|(c, &n)| {
        let p = partner[c];
        if p == *c {
            n % 2 == 0
        } else {
            count.get(p).copied().unwrap_or(0) == n
        }
    })
}

/// Decides whether the diagonal form ⟨ε_1, …, ε_n⟩ is split over the field.
///
/// Split when the coordinates pair off with each product in −1·(K^×)²; for odd
/// length one coordinate is left unpaired. Nonsplit when the form is binary
/// and does not pair, when the signed discriminant of an even form is not a
/// square, or when the field is real and the form is definite. Anything else
/// is undecided, since pairing is sufficient but not necessary.
pub fn split_form_check(eps: &[Rational], field: &dyn FieldHandle) -> Result<SplitVerdict> {
    if let Some(i) = eps.iter().position(Zero::is_zero) {
        return Err(Error::ZeroCoefficient { index: i });
    }
    let classes: Vec<SquareClass> = eps.iter().map(|x| field.square_class(x)).collect::<Result<_>>()?;
    let negated: Vec<SquareClass> = eps.iter().map(|x| field.square_class(&-x)).collect::<Result<_>>()?;
    let n = eps.len();
    let split = if n.is_multiple_of(2) {
        pairs_off(&classes, &negated)
    } else {
        (0..n).any(|skip| {
            let c: Vec<SquareClass> = classes
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, c)| c.clone())
                .collect();
            let m: Vec<SquareClass> = negated
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, c)| c.clone())
                .collect();
            pairs_off(&c, &m)
        })
    };
    if split {
        return Ok(SplitVerdict::Split);
    }
    if n == 2 {
        return Ok(SplitVerdict::Nonsplit);
    }
    if n.is_multiple_of(2) {
        let mut disc: Rational = eps.iter().product();
        if (n / 2) % 2 == 1 {
            disc = -disc;
        }
        if !field.is_square(&disc)? {
            return Ok(SplitVerdict::Nonsplit);
        }
    }
    if field.has_real_embedding()
        && n >= 2
        && (eps.iter().all(Signed::is_positive) || eps.iter().all(Signed::is_negative))
    {
        return Ok(SplitVerdict::Nonsplit);
    }
    Ok(SplitVerdict::Undecided)
}
