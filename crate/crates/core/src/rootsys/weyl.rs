use std::fmt;

use super::Root;
use crate::error::{Error, Result};

/// Element of the Weyl group of C_r, acting by `ε_i ↦ signs[i]·ε_{perm[i]}`.
///
/// Indices are 0-based internally. The pair (perm, signs) is canonical, so
/// equality of elements is equality of the pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(r: usize) -> WeylElement {
        WeylElement {
            perm: (0..r).collect(),
            signs: vec![1; r],
        }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<WeylElement> {
        let r = perm.len();
        if signs.len() != r {
            return Err(Error::InvalidWeylElement("perm and signs differ in length".into()));
        }
        let mut seen = vec![false; r];
        for &p in &perm {
            if p >= r || seen[p] {
                return Err(Error::InvalidWeylElement(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidWeylElement("signs must be ±1".into()));
        }
        Ok(WeylElement { perm, signs })
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Simple reflection w_i (1-based): swaps ε_i, ε_{i+1} for i < r, negates ε_r for i = r.
    pub fn simple_reflection(i: usize, r: usize) -> Result<WeylElement> {
        if i == 0 || i > r {
            return Err(Error::IndexOutOfRange(format!("w_{i} in rank {r}")));
        }
        let mut w = WeylElement::identity(r);
        if i < r {
            w.perm.swap(i - 1, i);
        } else {
            w.signs[r - 1] = -1;
        }
        Ok(w)
    }

    /// r_i (1-based): the reflection in the long root 2ε_i, i.e. negation of ε_i.
    pub fn sign_flip(i: usize, r: usize) -> Result<WeylElement> {
        if i == 0 || i > r {
            return Err(Error::IndexOutOfRange(format!("r_{i} in rank {r}")));
        }
        let mut w = WeylElement::identity(r);
        w.signs[i - 1] = -1;
        Ok(w)
    }

    /// Product w_{i_1} w_{i_2} ⋯ w_{i_k}; the rightmost factor acts first.
    pub fn from_word(word: &[usize], r: usize) -> Result<WeylElement> {
        let mut w = WeylElement::identity(r);
        for &i in word {
            w = w.compose(&WeylElement::simple_reflection(i, r)?)?;
        }
        Ok(w)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut signs = vec![1; r];
        for i in 0..r {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        Ok(WeylElement { perm, signs })
    }

    pub fn inverse(&self) -> WeylElement {
        let r = self.rank();
        let mut perm = vec![0; r];
        let mut signs = vec![1; r];
        for i in 0..r {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement { perm, signs }
    }

    pub fn apply_coords(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: v.len(),
            });
        }
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            out[self.perm[i]] += i64::from(self.signs[i]) * c;
        }
        Ok(out)
    }

    /// The signed-permutation action on a root.
    pub fn apply(&self, alpha: &Root) -> Result<Root> {
        Root::new(self.apply_coords(alpha.coords())?)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.rank())
            .map(|i| {
                let s = if self.signs[i] < 0 { "-" } else { "" };
                format!("e{}->{}e{}", i + 1, s, self.perm[i] + 1)
            })
            .collect();
        write!(f, "<{}>", parts.join(" "))
    }
}

/// Free-function form of [`WeylElement::apply`].
pub fn weyl_apply(w: &WeylElement, alpha: &Root) -> Result<Root> {
    w.apply(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{all_roots, eta, simple_root};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn generated_group_has_hyperoctahedral_order() {
        for r in 1..=6usize {
            let gens: Vec<WeylElement> = (1..=r).map(|i| WeylElement::simple_reflection(i, r).unwrap()).collect();
            let mut seen = BTreeSet::new();
            let mut frontier = vec![WeylElement::identity(r)];
            seen.insert(WeylElement::identity(r));
            while let Some(w) = frontier.pop() {
                for g in &gens {
                    let x = w.compose(g).unwrap();
                    if seen.insert(x.clone()) {
                        frontier.push(x);
                    }
                }
            }
            let expected = (1..=r).product::<usize>() * (1usize << r);
            assert_eq!(seen.len(), expected, "rank {r}");
        }
    }

    #[test]
    fn reflection_examples() {
        let w1 = WeylElement::simple_reflection(1, 3).unwrap();
        let a1 = simple_root(1, 3).unwrap();
        assert_eq!(w1.apply(&a1).unwrap(), a1.neg());
        for two_r in [4usize, 6, 8] {
            let r = two_r / 2;
            let flip = WeylElement::sign_flip(two_r, two_r).unwrap();
            let beta1 = eta(2 * r - 1, 2 * r - 1, two_r).unwrap();
            assert_eq!(flip.apply(&beta1).unwrap(), simple_root(two_r - 1, two_r).unwrap());
            let top = simple_root(two_r, two_r).unwrap();
            assert_eq!(flip.apply(&top).unwrap(), top.neg());
        }
    }

    #[test]
    fn word_and_inverse() {
        let w = WeylElement::from_word(&[1, 2, 3, 2], 3).unwrap();
        assert_eq!(w.compose(&w.inverse()).unwrap(), WeylElement::identity(3));
        assert!(WeylElement::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(WeylElement::simple_reflection(4, 3).is_err());
    }

    fn arb_word(r: usize) -> impl Strategy<Value = WeylElement> {
        proptest::collection::vec(1..=r, 0..12).prop_map(move |w| WeylElement::from_word(&w, r).unwrap())
    }

    proptest! {
        #[test]
        fn action_permutes_roots_and_preserves_length(w in (1usize..7).prop_flat_map(arb_word)) {
            let r = w.rank();
            let roots = all_roots(r);
            let image: BTreeSet<_> = roots.iter().map(|a| w.apply(a).unwrap()).collect();
            prop_assert_eq!(image.len(), roots.len());
            for a in &roots {
                prop_assert_eq!(w.apply(a).unwrap().kind(), a.kind());
            }
        }

        #[test]
        fn composition_is_the_action_law(
            (u, v) in (1usize..6).prop_flat_map(|r| (arb_word(r), arb_word(r)))
        ) {
            let uv = u.compose(&v).unwrap();
            for a in all_roots(u.rank()) {
                prop_assert_eq!(uv.apply(&a).unwrap(), u.apply(&v.apply(&a).unwrap()).unwrap());
            }
        }
    }
}
