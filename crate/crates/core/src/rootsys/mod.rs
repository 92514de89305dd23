//! The root system of type C_r in ε-coordinates.
//!
//! A root is stored by its coordinates in the basis ε_1..ε_r. Short roots are
//! ±ε_i±ε_j (i<j) and long roots are ±2ε_i. The simple roots are
//! α_i = ε_i − ε_{i+1} for i < r and α_r = 2ε_r.
//!
//! ```
//! use sympcap::rootsys::{commutator_support, eta, gamma, mu, Root};
//!
//! let r = 3;
//! assert_eq!(gamma(1, 2, r)?.coords(), &[1, 0, -1]);
//! assert_eq!(&eta(1, 1, r)?, &gamma(1, 1, r)?.checked_add(&mu(2, r)?).unwrap());
//!
//! let a1 = Root::new(vec![1, -1, 0])?;
//! let long = Root::new(vec![0, 2, 0])?;
//! let bracket = commutator_support(&a1, &long)?;
//! assert_eq!(bracket.len(), 2); // ε_1+ε_2 and 2ε_1
//! # Ok::<(), sympcap::Error>(())
//! ```

pub mod chevalley;
mod weyl;

pub use weyl::{weyl_apply, WeylElement};

use std::fmt;

use crate::error::{Error, Result};

/// Length class of a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    Short,
    Long,
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootKind::Short => "short",
            RootKind::Long => "long",
        })
    }
}

/// Classifies an integer vector; `None` when it is not a root.
pub fn classify(v: &[i64]) -> Option<RootKind> {
    let mut nz = v.iter().filter(|&&c| c != 0);
    match (nz.next(), nz.next(), nz.next()) {
        (Some(a), None, None) if a.abs() == 2 => Some(RootKind::Long),
        (Some(a), Some(b), None) if a.abs() == 1 && b.abs() == 1 => Some(RootKind::Short),
        _ => None,
    }
}

/// Root predicate with classification. Errors when `v.len() != r`.
pub fn is_root(v: &[i64], r: usize) -> Result<Option<RootKind>> {
    if v.len() != r {
        return Err(Error::LengthMismatch {
            expected: r,
            found: v.len(),
        });
    }
    Ok(classify(v))
}

/// A root of C_r. The rank is the length of the coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Result<Root> {
        if coords.is_empty() {
            return Err(Error::ZeroRank);
        }
        if classify(&coords).is_none() {
            return Err(Error::NotARoot(format_coords(&coords)));
        }
        Ok(Root { coords })
    }

    /// `sign·ε_i + sign2·ε_j` style constructor from 1-based sparse terms.
    pub fn from_terms(r: usize, terms: &[(i64, usize)]) -> Result<Root> {
        let mut v = vec![0i64; r];
        for &(c, i) in terms {
            if i == 0 || i > r {
                return Err(Error::IndexOutOfRange(format!("ε_{i} in rank {r}")));
            }
            v[i - 1] += c;
        }
        Root::new(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn kind(&self) -> RootKind {
        classify(&self.coords).expect("root invariant")
    }

    /// Positive roots have a positive first nonzero coordinate.
    pub fn is_positive(&self) -> bool {
        self.coords.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// `i·self + j·other` when that vector is a root.
    pub fn combination(&self, i: i64, other: &Root, j: i64) -> Option<Root> {
        if self.rank() != other.rank() {
            return None;
        }
        let v: Vec<i64> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| i * a + j * b)
            .collect();
        classify(&v).map(|_| Root { coords: v })
    }

    pub fn checked_add(&self, other: &Root) -> Option<Root> {
        self.combination(1, other, 1)
    }

    /// Coordinates in the basis of simple roots.
    pub fn simple_coords(&self) -> Vec<i64> {
        let r = self.rank();
        let mut out = Vec::with_capacity(r);
        let mut partial = 0;
        for (i, c) in self.coords.iter().enumerate() {
            partial += c;
            if i + 1 < r {
                out.push(partial);
            } else {
                out.push(partial / 2);
            }
        }
        out
    }

    pub fn height(&self) -> i64 {
        self.simple_coords().iter().sum()
    }

    /// Inverse of [`Root::simple_coords`].
    pub fn from_simple_coords(c: &[i64]) -> Result<Root> {
        let r = c.len();
        if r == 0 {
            return Err(Error::ZeroRank);
        }
        let mut v = vec![0i64; r];
        for (i, &ci) in c.iter().enumerate() {
            let a = simple_root_coords(i + 1, r);
            for (vk, ak) in v.iter_mut().zip(a) {
                *vk += ci * ak;
            }
        }
        Root::new(v)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_coords(&self.coords))
    }
}

impl serde::Serialize for Root {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Root {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Root, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Coords(Vec<i64>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Coords(c) => Root::new(c).map_err(serde::de::Error::custom),
            Raw::Text(t) => crate::dsl::parse_root(&t, None).map_err(serde::de::Error::custom),
        }
    }
}

pub(crate) fn format_coords(v: &[i64]) -> String {
    let inner: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn simple_root_coords(i: usize, r: usize) -> Vec<i64> {
    let mut v = vec![0i64; r];
    if i < r {
        v[i - 1] = 1;
        v[i] = -1;
    } else {
        v[r - 1] = 2;
    }
    v
}

/// Simple root α_i, 1 ≤ i ≤ r.
pub fn simple_root(i: usize, r: usize) -> Result<Root> {
    if r == 0 {
        return Err(Error::ZeroRank);
    }
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange(format!("α_{i} in rank {r}")));
    }
    Root::new(simple_root_coords(i, r))
}

/// All 2r² roots, sorted.
pub fn all_roots(r: usize) -> Vec<Root> {
    let mut out = Vec::with_capacity(2 * r * r);
    for i in 0..r {
        for j in i + 1..r {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![0; r];
                v[i] = si;
                v[j] = sj;
                out.push(Root { coords: v });
            }
        }
        for s in [2, -2] {
            let mut v = vec![0; r];
            v[i] = s;
            out.push(Root { coords: v });
        }
    }
    out.sort();
    out
}

pub fn positive_roots(r: usize) -> Vec<Root> {
    all_roots(r).into_iter().filter(Root::is_positive).collect()
}

/// The three families of named roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedKind {
    Gamma,
    Mu,
    Eta,
}

/// γ_{i,k} = ε_i − ε_{k+1}, 1 ≤ i ≤ k ≤ r−1.
pub fn gamma(i: usize, k: usize, r: usize) -> Result<Root> {
    if !(1 <= i && i <= k && k < r) {
        return Err(Error::IndexOutOfRange(format!(
            "gamma({i},{k}) needs 1 ≤ i ≤ k ≤ r−1 = {}",
            r.saturating_sub(1)
        )));
    }
    Root::from_terms(r, &[(1, i), (-1, k + 1)])
}

/// μ_k = 2ε_k, 1 ≤ k ≤ r.
pub fn mu(k: usize, r: usize) -> Result<Root> {
    if !(1 <= k && k <= r) {
        return Err(Error::IndexOutOfRange(format!("mu({k}) needs 1 ≤ k ≤ r = {r}")));
    }
    Root::from_terms(r, &[(2, k)])
}

/// η_{i,k} = ε_i + ε_{k+1}, 1 ≤ i ≤ k ≤ r−1.
pub fn eta(i: usize, k: usize, r: usize) -> Result<Root> {
    if !(1 <= i && i <= k && k < r) {
        return Err(Error::IndexOutOfRange(format!(
            "eta({i},{k}) needs 1 ≤ i ≤ k ≤ r−1 = {}",
            r.saturating_sub(1)
        )));
    }
    Root::from_terms(r, &[(1, i), (1, k + 1)])
}

/// Dispatches to [`gamma`], [`mu`] or [`eta`]; `i` is ignored for μ.
pub fn named_root(kind: NamedKind, i: usize, k: usize, r: usize) -> Result<Root> {
    match kind {
        NamedKind::Gamma => gamma(i, k, r),
        NamedKind::Mu => mu(k, r),
        NamedKind::Eta => eta(i, k, r),
    }
}

/// `{iα + jγ : i,j > 0} ∩ Φ`, sorted.
///
/// Errors when `α = −γ`. In type C the coefficients never exceed 2, so the
/// scan over `i, j ≤ 3` is exhaustive.
pub fn commutator_support(alpha: &Root, gamma: &Root) -> Result<Vec<Root>> {
    if alpha.rank() != gamma.rank() {
        return Err(Error::RankMismatch {
            left: alpha.rank(),
            right: gamma.rank(),
        });
    }
    if alpha == &gamma.neg() {
        return Err(Error::OppositeRoots(alpha.to_string()));
    }
    let mut out = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            if let Some(s) = alpha.combination(i, gamma, j) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Candidate vectors with entries in -2..=2, filtered by the predicate.
    fn brute_force_roots(r: usize) -> BTreeSet<Vec<i64>> {
        let mut out = BTreeSet::new();
        let mut v = vec![-2i64; r];
        loop {
            if classify(&v).is_some() {
                out.insert(v.clone());
            }
            let mut k = 0;
            while k < r && v[k] == 2 {
                v[k] = -2;
                k += 1;
            }
            if k == r {
                break;
            }
            v[k] += 1;
        }
        out
    }

    #[test]
    fn root_predicate_examples() {
        assert_eq!(is_root(&[1, -1], 2).unwrap(), Some(RootKind::Short));
        assert_eq!(is_root(&[2, 0], 2).unwrap(), Some(RootKind::Long));
        assert_eq!(is_root(&[1, 0], 2).unwrap(), None);
        assert!(is_root(&[1, 0, 0], 2).is_err());
    }

    #[test]
    fn root_count_matches_brute_force() {
        for r in 1..=6 {
            let enumerated: BTreeSet<Vec<i64>> = all_roots(r).into_iter().map(|a| a.coords).collect();
            assert_eq!(enumerated, brute_force_roots(r), "rank {r}");
        }
        for r in 1..=12 {
            assert_eq!(all_roots(r).len(), 2 * r * r);
            assert_eq!(positive_roots(r).len(), r * r);
        }
    }

    #[test]
    fn named_root_examples() {
        assert_eq!(gamma(1, 2, 3).unwrap().coords(), &[1, 0, -1]);
        assert_eq!(mu(1, 2).unwrap().coords(), &[2, 0]);
        assert_eq!(eta(1, 1, 2).unwrap().coords(), &[1, 1]);
        assert!(gamma(2, 1, 3).is_err());
        assert!(gamma(1, 3, 3).is_err());
        assert!(mu(0, 3).is_err());
        assert!(mu(4, 3).is_err());
        assert!(eta(1, 3, 3).is_err());
    }

    #[test]
    fn named_roots_agree_with_simple_root_sums() {
        for r in 2..=8 {
            let a = |i| simple_root(i, r).unwrap();
            for i in 1..r {
                for k in i..r {
                    let mut s = a(i);
                    for t in i + 1..=k {
                        s = s.checked_add(&a(t)).unwrap();
                    }
                    assert_eq!(gamma(i, k, r).unwrap(), s);
                    let e = gamma(i, k, r).unwrap().checked_add(&mu(k + 1, r).unwrap()).unwrap();
                    assert_eq!(eta(i, k, r).unwrap(), e);
                }
            }
            for k in 1..=r {
                let mut c = vec![0i64; r];
                for ct in c.iter_mut().take(r - 1).skip(k - 1) {
                    *ct = 2;
                }
                c[r - 1] = 1;
                assert_eq!(mu(k, r).unwrap(), Root::from_simple_coords(&c).unwrap());
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let r = |v: &[i64]| Root::new(v.to_vec()).unwrap();
        assert_eq!(
            commutator_support(&r(&[1, -1, 0]), &r(&[0, 1, -1])).unwrap(),
            vec![r(&[1, 0, -1])]
        );
        let s = commutator_support(&r(&[1, -1]), &r(&[0, 2])).unwrap();
        assert_eq!(s, vec![r(&[1, 1]), r(&[2, 0])]);
        assert!(commutator_support(&r(&[1, -1, 0, 0]), &r(&[0, 0, 1, -1]))
            .unwrap()
            .is_empty());
        assert!(commutator_support(&r(&[1, -1]), &r(&[-1, 1])).is_err());
    }

    #[test]
    fn commutator_support_matches_wide_scan() {
        for rank in 1..=4 {
            let roots = all_roots(rank);
            for a in &roots {
                for g in &roots {
                    if a == &g.neg() {
                        continue;
                    }
                    let mut wide = BTreeSet::new();
                    for i in 1..=6 {
                        for j in 1..=6 {
                            if let Some(s) = a.combination(i, g, j) {
                                wide.insert(s);
                            }
                        }
                    }
                    let got: BTreeSet<Root> = commutator_support(a, g).unwrap().into_iter().collect();
                    assert_eq!(got, wide);
                    assert!(got.len() <= 2);
                }
            }
        }
    }

    fn arb_root(r: usize) -> impl Strategy<Value = Root> {
        let roots = all_roots(r);
        (0..roots.len()).prop_map(move |i| roots[i].clone())
    }

    proptest! {
        #[test]
        fn simple_coords_round_trip(a in (1usize..9).prop_flat_map(arb_root)) {
            prop_assert_eq!(Root::from_simple_coords(&a.simple_coords()).unwrap(), a.clone());
            prop_assert_eq!(a.is_positive(), a.height() > 0);
        }

        #[test]
        fn commutators_raise_height(
            (a, g) in (2usize..7).prop_flat_map(|r| (arb_root(r), arb_root(r)))
        ) {
            prop_assume!(a.is_positive() && g.is_positive());
            for s in commutator_support(&a, &g).unwrap() {
                prop_assert!(s.height() > a.height().max(g.height()));
            }
        }
    }
}
