//! Field handles: square classes of rational elements in a field of characteristic 0.
//!
//! [`Rationals`] is ℚ itself. [`DeclaredSquares`] is the multiquadratic field
//! ℚ(√g₁, …, √g_k): a rational is a square there exactly when it lies in the
//! group generated by the g_i and the rational squares.
//!
//! ```
//! use sympcap::exact::int;
//! use sympcap::field::{DeclaredSquares, FieldHandle, Rationals};
//!
//! assert!(!Rationals.is_square(&int(-1))?);
//! let gaussian = DeclaredSquares::new(vec![int(-1)])?;
//! assert!(gaussian.is_square(&int(-4))?);
//! assert!(!gaussian.has_real_embedding());
//! # Ok::<(), sympcap::Error>(())
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// A square class, stored as its canonical squarefree integer representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass(pub BigInt);

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Exact square-class information for rational elements of a field.
pub trait FieldHandle: Send + Sync {
    fn name(&self) -> String;

    /// Canonical square class of a nonzero rational.
    fn square_class(&self, x: &Rational) -> Result<SquareClass>;

    fn is_square(&self, x: &Rational) -> Result<bool> {
        Ok(self.square_class(x)?.0.is_one())
    }

    /// True when the field embeds in ℝ, so definite forms are anisotropic.
    fn has_real_embedding(&self) -> bool;
}

/// Sign and primes of odd exponent: the ℚ-square class as an 𝔽₂-vector.
fn odd_support(x: &Rational) -> Result<(bool, BTreeSet<BigInt>)> {
    if x.is_zero() {
        return Err(Error::ZeroCoefficient { index: 0 });
    }
    let mut primes = BTreeSet::new();
    for part in [x.numer().abs(), x.denom().abs()] {
        for (p, e) in factor(&part) {
            if e % 2 == 1 && !primes.insert(p.clone()) {
                primes.remove(&p);
            }
        }
    }
    Ok((x.is_negative(), primes))
}

/// Trial-division factorization of a positive integer.
fn factor(n: &BigInt) -> BTreeMap<BigInt, u32> {
    let mut out = BTreeMap::new();
    let mut n = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        while n.is_multiple_of(&p) {
            *out.entry(p.clone()).or_insert(0) += 1;
            n /= &p;
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

fn representative(negative: bool, primes: &BTreeSet<BigInt>) -> SquareClass {
    let mut v: BigInt = primes.iter().product();
    if negative {
        v = -v;
    }
    SquareClass(v)
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl FieldHandle for Rationals {
    fn name(&self) -> String {
        "Q".into()
    }

    fn square_class(&self, x: &Rational) -> Result<SquareClass> {
        let (neg, primes) = odd_support(x)?;
        Ok(representative(neg, &primes))
    }

    fn has_real_embedding(&self) -> bool {
        true
    }
}

/// ℚ with the listed rationals adjoined as squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredSquares {
    generators: Vec<Rational>,
    /// Reduced 𝔽₂ basis of the declared classes; each row is (sign, primes) with a distinct pivot.
    basis: Vec<(bool, BTreeSet<BigInt>)>,
}

/// Pivot of an 𝔽₂ vector: the sign bit first, then the smallest prime.
fn pivot(v: &(bool, BTreeSet<BigInt>)) -> Option<Option<BigInt>> {
    if v.0 {
        Some(None)
    } else {
        v.1.iter().next().map(|p| Some(p.clone()))
    }
}

fn has_coord(v: &(bool, BTreeSet<BigInt>), c: &Option<BigInt>) -> bool {
    match c {
        None => v.0,
        Some(p) => v.1.contains(p),
    }
}

fn xor(a: &mut (bool, BTreeSet<BigInt>), b: &(bool, BTreeSet<BigInt>)) {
    a.0 ^= b.0;
    for p in &b.1 {
        if !a.1.insert(p.clone()) {
            a.1.remove(p);
        }
    }
}

impl DeclaredSquares {
    pub fn new(generators: Vec<Rational>) -> Result<DeclaredSquares> {
        let mut basis: Vec<(bool, BTreeSet<BigInt>)> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let mut v = odd_support(g).map_err(|_| Error::ZeroCoefficient { index: i })?;
            for b in &basis {
                let pv = pivot(b).expect("basis rows are nonzero");
                if has_coord(&v, &pv) {
                    xor(&mut v, b);
                }
            }
            if let Some(pv) = pivot(&v) {
                for b in basis.iter_mut() {
                    if has_coord(b, &pv) {
                        xor(b, &v);
                    }
                }
                basis.push(v);
            }
        }
        Ok(DeclaredSquares { generators, basis })
    }

    pub fn generators(&self) -> &[Rational] {
        &self.generators
    }

    /// Degree of the field over ℚ.
    pub fn degree(&self) -> u64 {
        1 << self.basis.len()
    }
}

impl FieldHandle for DeclaredSquares {
    fn name(&self) -> String {
        let g: Vec<String> = self.generators.iter().map(|x| format!("sqrt({x})")).collect();
        if g.is_empty() {
            "Q".into()
        } else {
            format!("Q({})", g.join(", "))
        }
    }

    fn square_class(&self, x: &Rational) -> Result<SquareClass> {
        let mut v = odd_support(x)?;
        for b in &self.basis {
            let pv = pivot(b).expect("basis rows are nonzero");
            if has_coord(&v, &pv) {
                xor(&mut v, b);
            }
        }
        Ok(representative(v.0, &v.1))
    }

    fn has_real_embedding(&self) -> bool {
        self.generators.iter().all(|g| g.is_positive())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn rational_classes() {
        let q = Rationals;
        assert_eq!(q.square_class(&int(12)).unwrap(), SquareClass(BigInt::from(3)));
        assert_eq!(q.square_class(&rat(-8, 3)).unwrap(), SquareClass(BigInt::from(-6)));
        assert_eq!(q.square_class(&rat(4, 9)).unwrap(), SquareClass(BigInt::from(1)));
        assert!(q.is_square(&rat(9, 4)).unwrap());
        assert!(!q.is_square(&int(-1)).unwrap());
        assert!(q.square_class(&int(0)).is_err());
    }

    #[test]
    fn declared_squares_reduce_classes() {
        let f = DeclaredSquares::new(vec![int(2), int(-3), int(-6)]).unwrap();
        assert_eq!(f.degree(), 4);
        assert!(!f.is_square(&int(-1)).unwrap());
        assert!(f.is_square(&int(-24)).unwrap());
        assert!(f.is_square(&int(8)).unwrap());
        assert!(!f.is_square(&int(5)).unwrap());
        assert_eq!(f.square_class(&int(-15)).unwrap(), f.square_class(&int(5)).unwrap());
        assert_ne!(f.square_class(&int(-5)).unwrap(), f.square_class(&int(5)).unwrap());
        assert!(!f.has_real_embedding());
        assert!(DeclaredSquares::new(vec![int(2)]).unwrap().has_real_embedding());
        assert!(DeclaredSquares::new(vec![int(0)]).is_err());
    }

    /// Brute force: x is a square in ℚ(√g…) iff x·∏g_i^{e_i} is a rational square for some e.
    #[test]
    fn declared_squares_match_subset_products() {
        let gens = vec![int(2), int(-1), int(15)];
        let f = DeclaredSquares::new(gens.clone()).unwrap();
        for num in -40i64..=40 {
            if num == 0 {
                continue;
            }
            let x = int(num);
            let mut brute = false;
            for mask in 0..8u32 {
                let mut y = x.clone();
                for (i, g) in gens.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        y *= g;
                    }
                }
                brute |= Rationals.is_square(&y).unwrap();
            }
            assert_eq!(f.is_square(&x).unwrap(), brute, "{num}");
        }
    }
}
