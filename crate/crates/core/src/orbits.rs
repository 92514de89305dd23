//! Symplectic partitions and the nilpotent orbits of sp_2r.
//!
//! ```
//! use sympcap::orbits::{dimension_equation_solve, gk_dimension, orbit_dimension, SymplecticPartition};
//! use sympcap::exact::int;
//!
//! let siegel: SymplecticPartition = "2^3".parse()?;
//! assert_eq!(orbit_dimension(&siegel), 12);
//! assert_eq!(gk_dimension(&siegel), int(6));
//!
//! let report = dimension_equation_solve(2, &int(4), 0..=4)?;
//! assert_eq!(report.solutions, vec![2, 3]);
//! # Ok::<(), sympcap::Error>(())
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, rat, rational_sqrt, Rational};
use crate::rootsys::all_roots;

/// Weakly decreasing positive parts in which every odd part has even multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticPartition {
    parts: Vec<u32>,
}

fn is_symplectic(parts: &[u32]) -> bool {
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        if parts[i] % 2 == 1 && (j - i) % 2 == 1 {
            return false;
        }
        i = j;
    }
    true
}

impl SymplecticPartition {
    /// Sorts the parts and validates the symplectic condition. Zero parts are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<SymplecticPartition> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let total: u64 = parts.iter().map(|&p| u64::from(p)).sum();
        if total % 2 == 1 {
            return Err(Error::OddTotal(total));
        }
        if !is_symplectic(&parts) {
            return Err(Error::NotSymplectic(format_parts(&parts)));
        }
        Ok(SymplecticPartition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    /// r, where the total is 2r.
    pub fn rank(&self) -> usize {
        (self.total() / 2) as usize
    }

    pub fn transpose(&self) -> Vec<u32> {
        let first = self.parts.first().copied().unwrap_or(0);
        (1..=first)
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count() as u32)
            .collect()
    }

    /// Exponent form, e.g. `2^2 1^2` for (2,2,1,1).
    pub fn exponent_form(&self) -> String {
        let mut out: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.parts.len() {
            let mut j = i;
            while j < self.parts.len() && self.parts[j] == self.parts[i] {
                j += 1;
            }
            out.push(if j - i == 1 {
                self.parts[i].to_string()
            } else {
                format!("{}^{}", self.parts[i], j - i)
            });
            i = j;
        }
        out.join(" ")
    }
}

fn format_parts(parts: &[u32]) -> String {
    let s: Vec<String> = parts.iter().map(u32::to_string).collect();
    format!("({})", s.join(","))
}

impl fmt::Display for SymplecticPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_parts(&self.parts))
    }
}

impl FromStr for SymplecticPartition {
    type Err = Error;

    /// Accepts `2,2,1,1`, `(2,2,1,1)`, `2^2,1^2` and whitespace-separated forms.
    fn from_str(s: &str) -> Result<SymplecticPartition> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|x| !x.is_empty())
        {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e),
                None => (tok, "1"),
            };
            let bad = || Error::InvalidPartition(format!("cannot read {tok:?} in {s:?}"));
            let b: u32 = base.parse().map_err(|_| bad())?;
            let e: usize = exp.parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            parts.extend(std::iter::repeat_n(b, e));
        }
        SymplecticPartition::new(parts)
    }
}

impl Serialize for SymplecticPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(d)?;
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(serde::de::Error::custom("parts must be positive and weakly decreasing"));
        }
        SymplecticPartition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `n` in descending lexicographic order.
fn all_partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every symplectic partition of `two_r`, in descending lexicographic order.
///
/// Descending lexicographic order refines dominance: a partition precedes every
/// partition it strictly dominates.
pub fn enumerate_symplectic_partitions(two_r: u64) -> Result<Vec<SymplecticPartition>> {
    if two_r % 2 == 1 {
        return Err(Error::OddTotal(two_r));
    }
    let n = u32::try_from(two_r).map_err(|_| Error::InvalidArgument(format!("{two_r} is too large")))?;
    Ok(all_partitions(n)
        .into_iter()
        .filter(|p| is_symplectic(p))
        .map(|parts| SymplecticPartition { parts })
        .collect())
}

/// Outcome of a dominance comparison of the left argument against the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dominance::Greater => "greater",
            Dominance::Less => "less",
            Dominance::Equal => "equal",
            Dominance::Incomparable => "incomparable",
        })
    }
}

pub fn dominance_compare(lambda: &SymplecticPartition, mu: &SymplecticPartition) -> Result<Dominance> {
    if lambda.total() != mu.total() {
        return Err(Error::TotalMismatch(lambda.total(), mu.total()));
    }
    let len = lambda.parts.len().max(mu.parts.len());
    let (mut sl, mut sm) = (0u64, 0u64);
    let (mut ge, mut le) = (true, true);
    for k in 0..len {
        sl += u64::from(lambda.parts.get(k).copied().unwrap_or(0));
        sm += u64::from(mu.parts.get(k).copied().unwrap_or(0));
        match sl.cmp(&sm) {
            Ordering::Greater => le = false,
            Ordering::Less => ge = false,
            Ordering::Equal => {}
        }
    }
    Ok(match (ge, le) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::Greater,
        (false, true) => Dominance::Less,
        (false, false) => Dominance::Incomparable,
    })
}

/// Symplectic partitions of the same total that are greater than or incomparable to `lambda`.
pub fn orbits_not_below(lambda: &SymplecticPartition) -> Vec<SymplecticPartition> {
    enumerate_symplectic_partitions(lambda.total())
        .expect("total of a symplectic partition is even")
        .into_iter()
        .filter(|mu| {
            matches!(
                dominance_compare(mu, lambda),
                Ok(Dominance::Greater | Dominance::Incomparable)
            )
        })
        .collect()
}

/// Exponents of the one-parameter subgroup attached to an orbit: the largest r
/// of the concatenated block exponents p−1, p−3, …, 1−p.
pub fn h_of_orbit(lambda: &SymplecticPartition) -> Vec<i64> {
    let mut all: Vec<i64> = lambda
        .parts
        .iter()
        .flat_map(|&p| (0..p).map(move |j| i64::from(p) - 1 - 2 * i64::from(j)))
        .collect();
    all.sort_unstable_by(|a, b| b.cmp(a));
    all.truncate(lambda.rank());
    all
}

/// [`h_of_orbit`] for raw parts; rejects partitions that are not symplectic.
pub fn h_of_parts(parts: &[u32]) -> Result<Vec<i64>> {
    Ok(h_of_orbit(&SymplecticPartition::new(parts.to_vec())?))
}

fn pair(h: &[i64], coords: &[i64]) -> i64 {
    h.iter().zip(coords).map(|(a, b)| a * b).sum()
}

/// dim g − dim g_0 − dim g_1 for the grading by [`h_of_orbit`].
pub fn orbit_dimension(lambda: &SymplecticPartition) -> u64 {
    let r = lambda.rank() as u64;
    let h = h_of_orbit(lambda);
    let (mut g0, mut g1) = (r, 0u64);
    for a in all_roots(lambda.rank()) {
        match pair(&h, a.coords()) {
            0 => g0 += 1,
            1 => g1 += 1,
            _ => {}
        }
    }
    2 * r * r + r - g0 - g1
}

/// 2r²+r − ½Σ(λᵀ_i)² − ½·#{odd parts}.
pub fn orbit_dimension_transpose(lambda: &SymplecticPartition) -> u64 {
    let r = lambda.rank() as u64;
    let sq: u64 = lambda.transpose().iter().map(|&c| u64::from(c) * u64::from(c)).sum();
    let odd = lambda.parts.iter().filter(|&&p| p % 2 == 1).count() as u64;
    2 * r * r + r - (sq + odd) / 2
}

/// Half the orbit dimension.
pub fn gk_dimension(lambda: &SymplecticPartition) -> Rational {
    rat(orbit_dimension(lambda) as i64, 2)
}

/// Solutions and required dimensions of the dimension equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEqReport {
    pub m: u64,
    #[serde(with = "crate::exact::serde_rational")]
    pub dim_pi: Rational,
    /// Every n ≥ 0 whose required dimension equals n².
    pub solutions: Vec<u64>,
    /// (n, required dimension) over the requested range.
    pub required: Vec<RequiredDim>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequiredDim {
    pub n: u64,
    #[serde(with = "crate::exact::serde_rational")]
    pub dim: Rational,
}

/// dim π + (n+m)(n+m+1)/2 − m(2m+1).
pub fn required_dimension(m: u64, dim_pi: &Rational, n: u64) -> Rational {
    let s = (n + m) as i64;
    let m = m as i64;
    dim_pi + rat(s * (s + 1), 2) - int(m * (2 * m + 1))
}

/// Solves n² − (2m+1)n + (3m²+m−2d) = 0 over the nonnegative integers.
pub fn dimension_equation_solve(m: u64, dim_pi: &Rational, range: RangeInclusive<u64>) -> Result<DimEqReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if dim_pi.is_negative() {
        return Err(Error::InvalidArgument("dim_pi must be nonnegative".into()));
    }
    let mi = m as i64;
    let disc = int(1 - 8 * mi * mi) + int(8) * dim_pi;
    let mut solutions = Vec::new();
    if let Some(s) = rational_sqrt(&disc) {
        for root in [(int(2 * mi + 1) - &s) / int(2), (int(2 * mi + 1) + &s) / int(2)] {
            if root.is_integer() && !root.is_negative() {
                let n = root.to_integer().to_u64().expect("small solution");
                if !solutions.contains(&n) {
                    solutions.push(n);
                }
            }
        }
    }
    solutions.sort_unstable();
    let required = range
        .map(|n| RequiredDim {
            n,
            dim: required_dimension(m, dim_pi, n),
        })
        .collect();
    Ok(DimEqReport {
        m,
        dim_pi: dim_pi.clone(),
        solutions,
        required,
    })
}

/// The dominance poset on symplectic partitions of a fixed total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitPoset {
    pub two_r: u64,
    pub nodes: Vec<SymplecticPartition>,
    /// `[i, j]` when node i covers node j.
    pub covers: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct PosetFile {
    schema: String,
    two_r: u64,
    nodes: Vec<SymplecticPartition>,
    covers: Vec<[usize; 2]>,
}

impl OrbitPoset {
    pub fn build(two_r: u64) -> Result<OrbitPoset> {
        let nodes = enumerate_symplectic_partitions(two_r)?;
        let n = nodes.len();
        let mut greater = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                greater[i][j] = dominance_compare(&nodes[i], &nodes[j])? == Dominance::Greater;
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if greater[i][j] && !(0..n).any(|k| greater[i][k] && greater[k][j]) {
                    covers.push([i, j]);
                }
            }
        }
        Ok(OrbitPoset { two_r, nodes, covers })
    }

    pub fn compare(&self, i: usize, j: usize) -> Result<Dominance> {
        dominance_compare(&self.nodes[i], &self.nodes[j])
    }

    pub fn cache_path(dir: &Path, two_r: u64) -> PathBuf {
        dir.join(format!("poset-{two_r}.json"))
    }

    pub fn to_json(&self) -> String {
        let file = PosetFile {
            schema: crate::SCHEMA.into(),
            two_r: self.two_r,
            nodes: self.nodes.clone(),
            covers: self.covers.clone(),
        };
        serde_json::to_string(&file).expect("poset serializes")
    }

    pub fn from_json(text: &str) -> Result<OrbitPoset> {
        let f: PosetFile = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        if f.schema != crate::SCHEMA {
            return Err(Error::Malformed(format!("unknown schema {}", f.schema)));
        }
        if f.nodes.iter().any(|p| p.total() != f.two_r)
            || f.covers.iter().any(|c| c[0] >= f.nodes.len() || c[1] >= f.nodes.len())
        {
            return Err(Error::Malformed("poset file is inconsistent".into()));
        }
        Ok(OrbitPoset {
            two_r: f.two_r,
            nodes: f.nodes,
            covers: f.covers,
        })
    }

    /// Reads the cached poset when it is present and valid, otherwise builds and writes it.
    pub fn load_or_build(two_r: u64, cache_dir: Option<&Path>) -> Result<OrbitPoset> {
        let Some(dir) = cache_dir else {
            return OrbitPoset::build(two_r);
        };
        let path = OrbitPoset::cache_path(dir, two_r);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(p) = OrbitPoset::from_json(&text) {
                if p.two_r == two_r {
                    return Ok(p);
                }
            }
        }
        let p = OrbitPoset::build(two_r)?;
        // A cache that cannot be written is not an error.
        let _ = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(&path, p.to_json()));
        Ok(p)
    }
}
