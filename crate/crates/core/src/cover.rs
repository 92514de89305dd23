//! Cover data for the degree-n cover of Sp_2r: the quadratic form on the
//! cocharacter lattice Y = ℤ^r, the lattices Y_{Q,n} ⊇ Y^sc_{Q,n}, the modified
//! root datum, tame Hilbert symbols and the torus cocycle σ_D.
//!
//! ```
//! use sympcap::cover::{lattice_y_qn, CoverDatum};
//!
//! let d = CoverDatum::standard(3, 4)?;
//! let lat = lattice_y_qn(&d);
//! assert_eq!(lat.index_in_y, 8);
//! assert_eq!(lat.sc_index, 2);
//! # Ok::<(), sympcap::Error>(())
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

/// Distinguished-character sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[default]
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sign> {
        match s.trim() {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!("sign {other:?}"))),
        }
    }
}

/// Coroots α_i^∨ = e_i − e_{i+1} for i < r and α_r^∨ = e_r.
pub fn simple_coroot(i: usize, r: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    if i < r {
        v[i - 1] = 1;
        v[i] = -1;
    } else {
        v[r - 1] = 1;
    }
    v
}

/// A W-invariant integer quadratic form on Y = ℤ^r and a cover degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDatum {
    rank: usize,
    n: u64,
    /// Gram matrix of B_Q on the standard basis; Q(y) = yᵀ B y / 2.
    gram: Vec<Vec<i64>>,
}

impl CoverDatum {
    /// Q(y) = −Σ y_i², so that Q(α_r^∨) = −1.
    pub fn standard(rank: usize, n: u64) -> Result<CoverDatum> {
        CoverDatum::with_form(rank, n, -1)
    }

    /// Q(y) = c·Σ y_i².
    pub fn with_form(rank: usize, n: u64, c: i64) -> Result<CoverDatum> {
        let gram = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { 2 * c } else { 0 }).collect())
            .collect();
        CoverDatum::from_gram(rank, n, gram)
    }

    /// Any symmetric Gram matrix with even diagonal that is invariant under the Weyl group.
    pub fn from_gram(rank: usize, n: u64, gram: Vec<Vec<i64>>) -> Result<CoverDatum> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if n == 0 {
            return Err(Error::InvalidArgument("cover degree must be positive".into()));
        }
        if gram.len() != rank || gram.iter().any(|row| row.len() != rank) {
            return Err(Error::LengthMismatch {
                expected: rank,
                found: gram.len(),
            });
        }
        for i in 0..rank {
            if gram[i][i] % 2 != 0 {
                return Err(Error::InvalidArgument(
                    "Gram diagonal must be even for an integral form".into(),
                ));
            }
            for j in 0..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix is not symmetric".into()));
                }
            }
        }
        let d = CoverDatum { rank, n, gram };
        for i in 1..=rank {
            let a = simple_coroot(i, rank);
            let pa = d.q(&a);
            for y in (0..rank).map(|k| unit(k, rank)) {
                let s = reflect(&y, i, rank);
                for z in (0..rank).map(|k| unit(k, rank)) {
                    let sz = reflect(&z, i, rank);
                    if d.b(&s, &sz) != d.b(&y, &z) {
                        return Err(Error::InvalidArgument(format!(
                            "form is not invariant under s_{i} (Q(α^∨) = {pa})"
                        )));
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn b(&self, y: &[i64], z: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += y[i] * self.gram[i][j] * z[j];
            }
        }
        s
    }

    pub fn q(&self, y: &[i64]) -> i64 {
        self.b(y, y) / 2
    }

    /// n_α = n / gcd(n, Q(α_i^∨)).
    pub fn n_alpha(&self, i: usize) -> u64 {
        let qa = self.q(&simple_coroot(i, self.rank)).unsigned_abs();
        self.n / num_integer::gcd(self.n, qa)
    }
}

fn unit(k: usize, r: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[k] = 1;
    v
}

/// Simple reflection on Y: transposition of coordinates i, i+1, or sign change of the last.
fn reflect(y: &[i64], i: usize, r: usize) -> Vec<i64> {
    let mut v = y.to_vec();
    if i < r {
        v.swap(i - 1, i);
    } else {
        v[r - 1] = -v[r - 1];
    }
    v
}

/// Bases of Y_{Q,n} and Y^sc_{Q,n} with their indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLattices {
    pub y_qn: Vec<Vec<i128>>,
    pub y_sc: Vec<Vec<i128>>,
    /// [Y : Y_{Q,n}].
    pub index_in_y: u128,
    /// [Y_{Q,n} : Y^sc_{Q,n}].
    pub sc_index: u128,
}

/// Y_{Q,n} = {y : B_Q(y, z) ∈ nℤ for all z} and Y^sc_{Q,n} = span of n_α α^∨.
pub fn lattice_y_qn(d: &CoverDatum) -> CoverLattices {
    let r = d.rank;
    let n = d.n as i128;
    // Solve G y = n z over ℤ and keep the y block.
    let a: Vec<Vec<i128>> = (0..r)
        .map(|i| {
            let mut row: Vec<i128> = d.gram[i].iter().map(|&x| i128::from(x)).collect();
            row.extend((0..r).map(|k| if k == i { -n } else { 0 }));
            row
        })
        .collect();
    let kernel = lattice::integer_kernel(&a, 2 * r);
    let y_qn = lattice::hnf(&kernel.iter().map(|v| v[..r].to_vec()).collect::<Vec<_>>());
    let sc_gens: Vec<Vec<i128>> = (1..=r)
        .map(|i| {
            let na = d.n_alpha(i) as i128;
            simple_coroot(i, r).into_iter().map(|x| na * i128::from(x)).collect()
        })
        .collect();
    let y_sc = lattice::hnf(&sc_gens);
    let index_in_y = lattice::index_in_standard(&y_qn, r).expect("Y_{Q,n} has full rank");
    let sc_index = lattice::index(&y_qn, &y_sc, r).expect("Y^sc lies in Y_{Q,n}");
    CoverLattices {
        y_qn,
        y_sc,
        index_in_y,
        sc_index,
    }
}

/// Cartan type letter of a connected Dynkin diagram of classical shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    Unknown,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The modified root datum: roots of the dual group are the modified coroots n_α α^∨.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualRootDatum {
    pub n_alpha: Vec<u64>,
    pub modified_coroots: Vec<Vec<i64>>,
    /// Cartan matrix of the modified coroots as simple roots, with the standard inner product.
    pub cartan: Vec<Vec<i64>>,
    pub cartan_type: CartanType,
    pub rank: usize,
}

/// Classifies a path-shaped Cartan matrix; the letter follows the long/short pattern at the end.
pub fn classify_cartan(c: &[Vec<i64>]) -> CartanType {
    let r = c.len();
    if r == 1 {
        return CartanType::A;
    }
    let mut double_at = None;
    for i in 0..r {
        for j in 0..r {
            let adjacent = i.abs_diff(j) == 1;
            if (i == j && c[i][j] != 2) || (!adjacent && i != j && c[i][j] != 0) {
                return CartanType::Unknown;
            }
            if adjacent && i < j {
                match (c[i][j], c[j][i]) {
                    (-1, -1) => {}
                    (-1, -2) | (-2, -1) if j == r - 1 && double_at.is_none() => double_at = Some((c[i][j], c[j][i])),
                    _ => return CartanType::Unknown,
                }
            }
        }
    }
    match double_at {
        None => CartanType::A,
        // c[r−2][r−1] = −2 means the last root is short.
        Some((-2, -1)) => CartanType::B,
        Some(_) => CartanType::C,
    }
}

pub fn dual_root_datum(d: &CoverDatum) -> DualRootDatum {
    let r = d.rank;
    let n_alpha: Vec<u64> = (1..=r).map(|i| d.n_alpha(i)).collect();
    let modified_coroots: Vec<Vec<i64>> = (1..=r)
        .map(|i| {
            simple_coroot(i, r)
                .into_iter()
                .map(|x| x * n_alpha[i - 1] as i64)
                .collect()
        })
        .collect();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let cartan: Vec<Vec<i64>> = modified_coroots
        .iter()
        .map(|a| modified_coroots.iter().map(|b| 2 * dot(a, b) / dot(b, b)).collect())
        .collect();
    let cartan_type = classify_cartan(&cartan);
    DualRootDatum {
        n_alpha,
        modified_coroots,
        cartan,
        cartan_type,
        rank: r,
    }
}

/// A tame local field context: residue field 𝔽_q with q ≡ 1 (mod n), and the
/// fixed generator g of 𝔽_q^× that defines μ_n exponents via ζ_n = g^{(q−1)/n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TameField {
    pub q: u64,
    pub n: u64,
    pub generator: u64,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

impl TameField {
    /// Requires q an odd prime with q ≡ 1 (mod n); the generator is the least primitive root.
    pub fn new(q: u64, n: u64) -> Result<TameField> {
        if n == 0 {
            return Err(Error::FieldContext("n must be positive".into()));
        }
        if !is_prime(q) || q == 2 {
            return Err(Error::FieldContext(format!("q = {q} must be an odd prime")));
        }
        if !(q - 1).is_multiple_of(n) {
            return Err(Error::FieldContext(format!("q = {q} is not 1 mod {n}")));
        }
        let factors = prime_factors(q - 1);
        let generator = (2..q)
            .find(|&g| factors.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1))
            .unwrap_or(1);
        Ok(TameField { q, n, generator })
    }

    /// The same residue field with another symbol degree.
    pub fn with_degree(&self, n: u64) -> Result<TameField> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return Err(Error::FieldContext(format!("q = {} is not 1 mod {n}", self.q)));
        }
        Ok(TameField { n, ..*self })
    }

    /// ζ_n = g^{(q−1)/n}.
    pub fn zeta(&self) -> u64 {
        pow_mod(self.generator, (self.q - 1) / self.n, self.q)
    }

    /// Exponent k with t^{(q−1)/n} = ζ_n^k.
    fn mu_n_exponent(&self, t: u64) -> u64 {
        let v = pow_mod(t, (self.q - 1) / self.n, self.q);
        let z = self.zeta();
        let mut acc = 1 % self.q;
        for k in 0..self.n {
            if acc == v {
                return k;
            }
            acc = (acc * z) % self.q;
        }
        unreachable!("t^((q-1)/n) lies in μ_n")
    }
}

/// ϖ^v·u with u a unit residue class mod q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TameElement {
    pub valuation: i64,
    pub unit: u64,
}

impl TameElement {
    pub fn new(valuation: i64, unit: i64, field: &TameField) -> Result<TameElement> {
        let u = unit.rem_euclid(field.q as i64) as u64;
        if u == 0 {
            return Err(Error::InvalidArgument(format!("unit {unit} vanishes mod {}", field.q)));
        }
        Ok(TameElement { valuation, unit: u })
    }

    pub fn one() -> TameElement {
        TameElement { valuation: 0, unit: 1 }
    }

    pub fn mul(&self, other: &TameElement, field: &TameField) -> TameElement {
        TameElement {
            valuation: self.valuation + other.valuation,
            unit: (self.unit * other.unit) % field.q,
        }
    }

    pub fn neg(&self, field: &TameField) -> TameElement {
        TameElement {
            valuation: self.valuation,
            unit: field.q - self.unit,
        }
    }

    pub fn square(&self, field: &TameField) -> TameElement {
        self.mul(self, field)
    }

    /// Parses "p^v*u", "p^v", "p", or "u".
    pub fn parse(text: &str, field: &TameField) -> Result<TameElement> {
        let bad = || Error::InvalidArgument(format!("tame element {text:?}; expected p^v*u"));
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (v, u) = match t.split_once('*') {
            Some((p, u)) => (parse_power(p).ok_or_else(bad)?, u.parse::<i64>().map_err(|_| bad())?),
            None => match parse_power(&t) {
                Some(v) => (v, 1),
                None => (0, t.parse::<i64>().map_err(|_| bad())?),
            },
        };
        TameElement::new(v, u, field)
    }
}

fn parse_power(p: &str) -> Option<i64> {
    if p == "p" {
        return Some(1);
    }
    p.strip_prefix("p^")?
        .trim_start_matches('(')
        .trim_end_matches(')')
        .parse()
        .ok()
}

impl fmt::Display for TameElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^{}*{}", self.valuation, self.unit)
    }
}

/// The tame degree-n Hilbert symbol as an exponent of ζ_n.
///
/// t = (−1)^{v(x)v(y)} x^{v(y)} y^{−v(x)} reduced to 𝔽_q^×, then t^{(q−1)/n}.
pub fn tame_hilbert(x: &TameElement, y: &TameElement, field: &TameField) -> u64 {
    let q = field.q;
    let inv = |u: u64| pow_mod(u, q - 2, q);
    let pow_signed = |u: u64, e: i64| {
        if e >= 0 {
            pow_mod(u, e as u64, q)
        } else {
            pow_mod(inv(u), e.unsigned_abs(), q)
        }
    };
    let mut t = pow_signed(x.unit, y.valuation) * pow_signed(y.unit, -x.valuation) % q;
    if (x.valuation * y.valuation).rem_euclid(2) == 1 {
        t = q - t;
    }
    field.mu_n_exponent(t)
}

fn quartic(field: &TameField) -> Result<TameField> {
    field.with_degree(4)
}

/// σ_D(t, s) = ∏ (t_k, s_k)_4^{−1}, as a μ_4 exponent.
pub fn sigma_d(t: &[TameElement], s: &[TameElement], field: &TameField) -> Result<u64> {
    if t.len() != s.len() {
        return Err(Error::SizeMismatch(t.len(), s.len()));
    }
    let f4 = quartic(field)?;
    let e: u64 = t.iter().zip(s).map(|(a, b)| tame_hilbert(a, b, &f4)).sum();
    Ok((4 - e % 4) % 4)
}

fn torus_mul(a: &[TameElement], b: &[TameElement], field: &TameField) -> Vec<TameElement> {
    a.iter().zip(b).map(|(x, y)| x.mul(y, field)).collect()
}

/// σ(a,b)·σ(ab,c) = σ(a,bc)·σ(b,c) for σ = σ_D.
pub fn cocycle_identity_check(
    a: &[TameElement],
    b: &[TameElement],
    c: &[TameElement],
    field: &TameField,
) -> Result<bool> {
    if a.len() != b.len() || b.len() != c.len() {
        return Err(Error::SizeMismatch(a.len(), c.len()));
    }
    let ab = torus_mul(a, b, field);
    let bc = torus_mul(b, c, field);
    let lhs = sigma_d(a, b, field)? + sigma_d(&ab, c, field)?;
    let rhs = sigma_d(a, &bc, field)? + sigma_d(b, c, field)?;
    Ok(lhs % 4 == rhs % 4)
}

/// Value of the distinguished character on (y_i(a), ζ) divided by ζ, as a μ_4 exponent:
/// 0 for i < r, and ±(a,a)_2 for i = r.
pub fn distinguished_char_eval(sign: Sign, i: usize, r: usize, a: &TameElement, field: &TameField) -> Result<u64> {
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange(format!("simple index {i} for rank {r}")));
    }
    quartic(field)?;
    if i < r {
        return Ok(0);
    }
    let quad = tame_hilbert(a, a, &field.with_degree(2)?);
    let minus = if sign == Sign::Minus { 2 } else { 0 };
    Ok((2 * quad + minus) % 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(q: u64) -> TameField {
        TameField::new(q, 4).unwrap()
    }

    #[test]
    fn lattice_examples() {
        for r in 1..=5 {
            let l4 = lattice_y_qn(&CoverDatum::standard(r, 4).unwrap());
            assert_eq!(l4.index_in_y, 1 << r);
            assert_eq!(l4.sc_index, 2);
            for n in [1, 2] {
                let l = lattice_y_qn(&CoverDatum::standard(r, n).unwrap());
                assert_eq!(l.index_in_y, 1);
            }
        }
    }

    #[test]
    fn dual_types() {
        for r in 2..=6 {
            assert_eq!(
                dual_root_datum(&CoverDatum::standard(r, 4).unwrap()).cartan_type,
                CartanType::C
            );
            assert_eq!(
                dual_root_datum(&CoverDatum::standard(r, 2).unwrap()).cartan_type,
                CartanType::C
            );
            let d1 = dual_root_datum(&CoverDatum::standard(r, 1).unwrap());
            assert_eq!(d1.cartan_type, CartanType::B);
            assert!(d1.n_alpha.iter().all(|&x| x == 1));
        }
        let d2 = dual_root_datum(&CoverDatum::standard(3, 2).unwrap());
        assert_eq!(d2.n_alpha, vec![1, 1, 2]);
    }

    #[test]
    fn non_invariant_form_is_rejected() {
        assert!(CoverDatum::from_gram(2, 4, vec![vec![-2, 0], vec![0, -4]]).is_err());
        assert!(CoverDatum::from_gram(2, 4, vec![vec![-2, 1], vec![1, -2]]).is_err());
        assert!(CoverDatum::with_form(2, 4, 3).is_ok());
    }

    #[test]
    fn hilbert_examples() {
        let k = f(5);
        assert_eq!(k.generator, 2);
        let p = TameElement::parse("p", &k).unwrap();
        let two = TameElement::parse("2", &k).unwrap();
        assert_eq!(tame_hilbert(&two, &TameElement::parse("3", &k).unwrap(), &k), 0);
        assert_eq!(tame_hilbert(&p, &p, &k), 2);
        assert_eq!(tame_hilbert(&two, &p, &k), 1);
        assert_eq!(
            sigma_d(&[p, TameElement::one()], &[p, TameElement::one()], &k).unwrap(),
            2
        );
        assert!(TameField::new(7, 4).is_err());
        assert!(TameField::new(9, 4).is_err());
    }

    #[test]
    fn distinguished_examples() {
        let k = f(5);
        let p = TameElement::parse("p^1*1", &k).unwrap();
        let u = TameElement::parse("3", &k).unwrap();
        assert_eq!(distinguished_char_eval(Sign::Plus, 1, 3, &p, &k).unwrap(), 0);
        assert_eq!(distinguished_char_eval(Sign::Plus, 3, 3, &u, &k).unwrap(), 0);
        assert_eq!(distinguished_char_eval(Sign::Minus, 3, 3, &u, &k).unwrap(), 2);
        assert_eq!(distinguished_char_eval(Sign::Plus, 3, 3, &p, &k).unwrap(), 0);
        let k7 = TameField::new(13, 4).unwrap();
        let p7 = TameElement::parse("p", &k7).unwrap();
        assert_eq!(distinguished_char_eval(Sign::Plus, 2, 2, &p7, &k7).unwrap(), 0);
    }

    #[test]
    fn parse_forms() {
        let k = f(13);
        assert_eq!(
            TameElement::parse("p^-2*5", &k).unwrap(),
            TameElement { valuation: -2, unit: 5 }
        );
        assert_eq!(
            TameElement::parse("-1", &k).unwrap(),
            TameElement { valuation: 0, unit: 12 }
        );
        assert!(TameElement::parse("p^x", &k).is_err());
        assert!(TameElement::parse("13", &k).is_err());
    }

    fn arb_elt(q: u64) -> impl Strategy<Value = TameElement> {
        (-3i64..=3, 1..q).prop_map(|(v, u)| TameElement { valuation: v, unit: u })
    }

    fn arb_field() -> impl Strategy<Value = TameField> {
        prop_oneof![Just(f(5)), Just(f(13)), Just(f(17))]
    }

    proptest! {
        #[test]
        fn hilbert_laws((k, x, y, z) in arb_field().prop_flat_map(|k| (Just(k), arb_elt(k.q), arb_elt(k.q), arb_elt(k.q)))) {
            let h = |a: &TameElement, b: &TameElement| tame_hilbert(a, b, &k);
            prop_assert_eq!((h(&x.mul(&y, &k), &z)) % 4, (h(&x, &z) + h(&y, &z)) % 4);
            prop_assert_eq!((h(&x, &y.mul(&z, &k))) % 4, (h(&x, &y) + h(&x, &z)) % 4);
            prop_assert_eq!(h(&x, &x.neg(&k)), 0);
            prop_assert_eq!((h(&x, &y) + h(&y, &x)) % 4, 0);
        }

        #[test]
        fn cocycle_holds((k, t) in arb_field().prop_flat_map(|k| (Just(k), proptest::collection::vec(arb_elt(k.q), 9)))) {
            prop_assert!(cocycle_identity_check(&t[0..3], &t[3..6], &t[6..9], &k).unwrap());
            let sq: Vec<TameElement> = t.iter().map(|x| x.square(&k)).collect();
            prop_assert_eq!(sigma_d(&sq[0..3], &sq[3..6], &k).unwrap(), 0);
        }
    }
}
