//! A matrix realization of sp_2r used for structure constants and conjugation signs.
//!
//! Positions `0..2r` index the standard basis of the 2r-dimensional space.
//! Position `p < r` has weight ε_{p+1}, position `p ≥ r` has weight −ε_{2r−p}.
//! The partner of `p` is `2r−1−p`. A matrix X lies in sp_2r when ΩX is
//! symmetric, where Ω pairs each position with its partner with sign −1 on
//! the first half and +1 on the second.
//!
//! Root vectors are normalized so the entry at the smallest row is 1. The
//! signs of the structure constants depend on that choice; their magnitudes
//! and supports do not.

use std::collections::BTreeMap;

use super::{Root, WeylElement};
use crate::error::{Error, Result};

/// Sparse integer matrix keyed by (row, column).
pub type Sparse = BTreeMap<(usize, usize), i64>;

fn partner(p: usize, r: usize) -> usize {
    2 * r - 1 - p
}

fn omega(p: usize, r: usize) -> i64 {
    if p < r {
        -1
    } else {
        1
    }
}

/// Weight of a basis position as (ε index, sign).
fn weight(p: usize, r: usize) -> (usize, i64) {
    if p < r {
        (p, 1)
    } else {
        (partner(p, r), -1)
    }
}

fn weight_difference(a: usize, b: usize, r: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    let (i, s) = weight(a, r);
    v[i] += s;
    let (j, t) = weight(b, r);
    v[j] -= t;
    v
}

/// Leading position (smallest row) of the root space of `alpha`.
fn leading_position(alpha: &Root) -> (usize, usize) {
    let r = alpha.rank();
    for a in 0..2 * r {
        for b in 0..2 * r {
            if a != b && weight_difference(a, b, r) == alpha.coords() {
                return (a, b);
            }
        }
    }
    unreachable!("every root occurs as a weight difference")
}

fn insert(m: &mut Sparse, key: (usize, usize), value: i64) {
    let e = m.entry(key).or_insert(0);
    *e += value;
    if *e == 0 {
        m.remove(&key);
    }
}

/// The Chevalley root vector E_α.
pub fn root_vector(alpha: &Root) -> Sparse {
    let r = alpha.rank();
    let (a, b) = leading_position(alpha);
    let mut m = Sparse::new();
    insert(&mut m, (a, b), 1);
    let mirror = (partner(b, r), partner(a, r));
    if mirror != (a, b) {
        insert(&mut m, mirror, omega(partner(a, r), r) * omega(b, r));
    }
    m
}

/// The coroot H_i = E_ii − E_{i'i'} for 1-based `i`.
pub fn cartan_vector(i: usize, r: usize) -> Sparse {
    let mut m = Sparse::new();
    m.insert((i - 1, i - 1), 1);
    m.insert((partner(i - 1, r), partner(i - 1, r)), -1);
    m
}

pub fn multiply(x: &Sparse, y: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (&(i, k), &a) in x {
        for (&(k2, j), &b) in y.range((k, 0)..=(k, usize::MAX)) {
            debug_assert_eq!(k, k2);
            insert(&mut out, (i, j), a * b);
        }
    }
    out
}

/// `[x, y] = xy − yx`.
pub fn bracket(x: &Sparse, y: &Sparse) -> Sparse {
    let mut out = multiply(x, y);
    for (k, v) in multiply(y, x) {
        insert(&mut out, k, -v);
    }
    out
}

/// True when ΩX is symmetric.
pub fn is_symplectic(x: &Sparse, r: usize) -> bool {
    let entry = |p: usize, q: usize| x.get(&(p, q)).copied().unwrap_or(0);
    (0..2 * r)
        .all(|p| (0..2 * r).all(|q| omega(p, r) * entry(partner(p, r), q) == omega(q, r) * entry(partner(q, r), p)))
}

/// N_{α,β} with [E_α, E_β] = N_{α,β} E_{α+β}; zero when α+β is not a root.
///
/// Errors when α = −β.
pub fn structure_constant(alpha: &Root, beta: &Root) -> Result<i64> {
    if alpha.rank() != beta.rank() {
        return Err(Error::RankMismatch {
            left: alpha.rank(),
            right: beta.rank(),
        });
    }
    if alpha == &beta.neg() {
        return Err(Error::OppositeRoots(alpha.to_string()));
    }
    let Some(sum) = alpha.checked_add(beta) else {
        return Ok(0);
    };
    let c = bracket(&root_vector(alpha), &root_vector(beta));
    Ok(c.get(&leading_position(&sum)).copied().unwrap_or(0))
}

/// Image of a basis position under the standard lift of `w`, with its sign.
fn lift_position(w: &WeylElement, p: usize) -> (usize, i64) {
    let r = w.rank();
    let (i, s) = weight(p, r);
    let target = w.perm()[i];
    match (w.signs()[i] > 0, s > 0) {
        (true, true) => (target, 1),
        (true, false) => (partner(target, r), 1),
        (false, true) => (partner(target, r), 1),
        (false, false) => (target, -1),
    }
}

/// Ad(M)X for the standard signed-permutation lift M of `w`.
pub fn lift_conjugate(w: &WeylElement, x: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (&(p, q), &v) in x {
        let (pp, sp) = lift_position(w, p);
        let (qq, sq) = lift_position(w, q);
        insert(&mut out, (pp, qq), sp * sq * v);
    }
    out
}

/// The sign c with Ad(M)E_α = c·E_{wα}.
pub fn weyl_lift_sign(w: &WeylElement, alpha: &Root) -> Result<i64> {
    let image = w.apply(alpha)?;
    let moved = lift_conjugate(w, &root_vector(alpha));
    Ok(moved.get(&leading_position(&image)).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{all_roots, commutator_support};

    #[test]
    fn root_vectors_lie_in_sp_and_carry_their_weight() {
        for r in 1..=4 {
            for a in all_roots(r) {
                let e = root_vector(&a);
                assert!(is_symplectic(&e, r), "{a}");
                for &(p, q) in e.keys() {
                    assert_eq!(weight_difference(p, q, r), a.coords());
                }
                for i in 1..=r {
                    let h = cartan_vector(i, r);
                    assert!(is_symplectic(&h, r));
                    let mut scaled = e.clone();
                    for v in scaled.values_mut() {
                        *v *= a.coords()[i - 1];
                    }
                    scaled.retain(|_, v| *v != 0);
                    assert_eq!(bracket(&h, &e), scaled);
                }
            }
        }
    }

    #[test]
    fn brackets_are_multiples_of_the_sum_vector() {
        for r in 1..=4 {
            let roots = all_roots(r);
            for a in &roots {
                for b in &roots {
                    if a == &b.neg() {
                        continue;
                    }
                    let c = bracket(&root_vector(a), &root_vector(b));
                    let n = structure_constant(a, b).unwrap();
                    match a.checked_add(b) {
                        Some(s) => {
                            let mut expected = root_vector(&s);
                            for v in expected.values_mut() {
                                *v *= n;
                            }
                            assert_eq!(c, expected, "{a} {b}");
                            assert_eq!(n, -structure_constant(b, a).unwrap());
                        }
                        None => assert!(c.is_empty()),
                    }
                }
            }
        }
    }

    /// |N_{α,β}| = p+1 where p is the largest integer with β − pα a root.
    #[test]
    fn structure_constant_magnitudes() {
        for r in 1..=4 {
            let roots = all_roots(r);
            for a in &roots {
                for b in &roots {
                    if a == &b.neg() || a.checked_add(b).is_none() {
                        continue;
                    }
                    let mut p = 0;
                    while b.combination(1, a, -(p + 1)).is_some() {
                        p += 1;
                    }
                    assert_eq!(structure_constant(a, b).unwrap().abs(), p + 1, "{a} {b}");
                    let support = commutator_support(a, b).unwrap();
                    assert!(support.contains(&a.checked_add(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn lifts_normalize_root_spaces() {
        for r in 1..=4 {
            let gens: Vec<WeylElement> = (1..=r).map(|i| WeylElement::simple_reflection(i, r).unwrap()).collect();
            let words = [vec![0usize], vec![0, 1], vec![1, 0, 1], vec![0, 1, 0, 1, 0]];
            for word in words {
                let mut w = WeylElement::identity(r);
                for i in word {
                    w = w.compose(&gens[i % r]).unwrap();
                }
                for a in all_roots(r) {
                    let c = weyl_lift_sign(&w, &a).unwrap();
                    assert!(c == 1 || c == -1);
                    let mut expected = root_vector(&w.apply(&a).unwrap());
                    for v in expected.values_mut() {
                        *v *= c;
                    }
                    assert_eq!(lift_conjugate(&w, &root_vector(&a)), expected);
                }
            }
        }
    }
}
