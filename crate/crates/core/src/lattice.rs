//! Exact integer lattice arithmetic on ℤ^r: Hermite normal form, integer kernels,
//! indices and membership. Entries are `i128`; inputs are small.

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result has positive pivots, zeros below each pivot, entries above a
/// pivot reduced into `[0, pivot)`, and no zero rows.
pub fn hnf(rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut m: Vec<Vec<i128>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row >= m.len() {
            break;
        }
        loop {
            let Some(best) = (pivot_row..m.len())
                .filter(|&i| m[i][col] != 0)
                .min_by_key(|&i| m[i][col].abs())
            else {
                break;
            };
            m.swap(pivot_row, best);
            let p = m[pivot_row][col];
            let mut done = true;
            for i in pivot_row + 1..m.len() {
                let q = m[i][col].div_euclid(p);
                if q != 0 {
                    let (head, tail) = m.split_at_mut(i);
                    for (x, y) in tail[0].iter_mut().zip(&head[pivot_row]) {
                        *x -= q * y;
                    }
                }
                if m[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            m[pivot_row].iter_mut().for_each(|x| *x = -*x);
        }
        let p = m[pivot_row][col];
        for i in 0..pivot_row {
            let q = m[i][col].div_euclid(p);
            if q != 0 {
                let (head, tail) = m.split_at_mut(pivot_row);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= q * y;
                }
            }
        }
        pivot_row += 1;
    }
    m.retain(|r| r.iter().any(|&x| x != 0));
    m
}

/// Basis of the integer kernel {x ∈ ℤ^c : A x = 0} of an r×c matrix.
pub fn integer_kernel(a: &[Vec<i128>], c: usize) -> Vec<Vec<i128>> {
    let r = a.len();
    // Rows of [Aᵀ | I]; reducing the left block leaves kernel vectors on the right.
    let aug: Vec<Vec<i128>> = (0..c)
        .map(|j| {
            let mut row: Vec<i128> = (0..r).map(|i| a[i][j]).collect();
            row.extend((0..c).map(|k| i128::from(k == j)));
            row
        })
        .collect();
    let h = hnf(&aug);
    let kernel: Vec<Vec<i128>> = h
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect();
    hnf(&kernel)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Index [ℤ^r : L] of a full-rank lattice, or `None` when the rank is deficient.
pub fn index_in_standard(basis: &[Vec<i128>], r: usize) -> Option<u128> {
    let h = hnf(basis);
    if h.len() != r {
        return None;
    }
    Some(determinant(&h).unsigned_abs())
}

/// Index [L : M] for full-rank M ⊆ L.
pub fn index(sup: &[Vec<i128>], sub: &[Vec<i128>], r: usize) -> Option<u128> {
    let a = index_in_standard(sup, r)?;
    let b = index_in_standard(sub, r)?;
    (b % a == 0).then(|| b / a)
}

/// True when `v` lies in the lattice spanned by `basis`.
pub fn contains(basis: &[Vec<i128>], v: &[i128]) -> bool {
    let h = hnf(basis);
    let mut with = h.clone();
    with.push(v.to_vec());
    hnf(&with) == h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf(&[vec![2, 4], vec![3, 5]]), vec![vec![1, 1], vec![0, 2]]);
        assert_eq!(hnf(&[vec![0, 0]]), Vec::<Vec<i128>>::new());
        assert_eq!(hnf(&[vec![4, 0], vec![0, 6], vec![2, 3]]), vec![vec![2, 3], vec![0, 6]]);
    }

    #[test]
    fn kernel_example() {
        let k = integer_kernel(&[vec![2, 4, 6]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        assert!(contains(&k, &[1, 1, -1]));
        assert!(contains(&k, &[-2, 1, 0]));
    }

    #[test]
    fn indices() {
        let even: Vec<Vec<i128>> = vec![vec![2, 0], vec![0, 2]];
        assert_eq!(index_in_standard(&even, 2), Some(4));
        let sub: Vec<Vec<i128>> = vec![vec![2, 2], vec![0, 4]];
        assert_eq!(index(&even, &sub, 2), Some(2));
        assert_eq!(determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    }

    proptest! {
        #[test]
        fn hnf_preserves_lattice(rows in proptest::collection::vec(proptest::collection::vec(-6i128..=6, 3), 1..5)) {
            let h = hnf(&rows);
            for r in &rows {
                prop_assert!(contains(&h, r));
            }
            for r in &h {
                prop_assert!(contains(&rows, r));
            }
            prop_assert_eq!(hnf(&h), h);
        }

        #[test]
        fn kernel_vectors_vanish(a in proptest::collection::vec(proptest::collection::vec(-5i128..=5, 4), 1..3)) {
            for v in integer_kernel(&a, 4) {
                for row in &a {
                    prop_assert_eq!(row.iter().zip(&v).map(|(x, y)| x * y).sum::<i128>(), 0);
                }
            }
        }
    }
}
