//! Dense exact linear algebra over a [`Field`], plus small integer lattice
//! routines.

use crate::exact_scalar::{int, Field, Rational};

pub type Mat<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Mat<F> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { F::one_elem() } else { F::zero_elem() })
                .collect()
        })
        .collect()
}

pub fn mat_mul<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(F::zero_elem(), |acc, (x, brow)| {
                            if x.is_zero() {
                                acc
                            } else {
                                acc.plus(&x.times(&brow[j]))
                            }
                        })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Mat<F>, v: &[F]) -> Vec<F> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero_elem(), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            acc.plus(&x.times(y))
        }
    })
}

pub fn transpose<F: Clone>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(a: &mut Mat<F>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    if !a[r][j].is_zero() {
                        let t = f.times(&a[r][j]);
                        a[i][j] = a[i][j].minus(&t);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &Mat<F>) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : a x = 0}`.
pub fn kernel<F: Field>(a: &Mat<F>, cols: usize) -> Vec<Vec<F>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero_elem(); cols];
            v[f] = F::one_elem();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[r][f].negated();
            }
            v
        })
        .collect()
}

pub fn inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    let n = a.len();
    let mut aug: Mat<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one_elem() } else { F::zero_elem() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// One solution of `a x = b`, if any.
pub fn solve<F: Field>(a: &Mat<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Mat<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero_elem(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Gram–Schmidt without normalization under the given inner product;
/// dependent inputs are dropped.
pub fn gram_schmidt<F: Field>(vs: &[Vec<F>], ip: impl Fn(&[F], &[F]) -> F) -> Vec<Vec<F>> {
    let mut out: Vec<(Vec<F>, F)> = vec![];
    for v in vs {
        let mut w = v.clone();
        for (q, qq) in &out {
            let c = ip(&w, q).over(qq);
            if !c.is_zero() {
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = wi.minus(&c.times(qi));
                }
            }
        }
        let ww = ip(&w, &w);
        if !ww.is_zero() {
            out.push((w, ww));
        }
    }
    out.into_iter().map(|(w, _)| w).collect()
}

/// Characteristic polynomial `det(xI - a)`, lowest degree first, by the
/// Faddeev–LeVerrier recursion.
pub fn charpoly(a: &Mat<Rational>) -> Vec<Rational> {
    let n = a.len();
    let mut coeffs = vec![int(0); n + 1];
    coeffs[n] = int(1);
    let mut m: Mat<Rational> = vec![vec![int(0); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m);
        let tr: Rational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / int(k as i64);
    }
    coeffs
}

/// Row-style Hermite normal form of an integer matrix: returns `h = u a`
/// upper triangular with positive pivots and reduced entries above them,
/// zero rows removed.
pub fn hermite_rows(a: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let rows = h.len();
    let cols = h.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..rows).filter(|&i| h[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| h[i][c].abs()).unwrap();
            h.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[i][c] != 0 {
                    let q = h[i][c].div_euclid(h[r][c]);
                    for j in 0..cols {
                        h[i][j] -= q * h[r][j];
                    }
                    if h[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            for x in h[r].iter_mut() {
                *x = -*x;
            }
        }
        for i in 0..r {
            let q = h[i][c].div_euclid(h[r][c]);
            if q != 0 {
                for j in 0..cols {
                    h[i][j] -= q * h[r][j];
                }
            }
        }
        r += 1;
    }
    h.truncate(r);
    h
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix
/// (the diagonal of its Smith normal form).
pub fn smith_diagonal(a: &[Vec<i128>]) -> Vec<i128> {
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![];
    for t in 0..rows.min(cols) {
        let smallest = |m: &Vec<Vec<i128>>| {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.map_or(true, |(p, q)| m[i][j].abs() < m[p][q].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((p, q)) = smallest(&m) else {
            break;
        };
        m.swap(t, p);
        for row in m.iter_mut() {
            row.swap(t, q);
        }
        loop {
            let piv = m[t][t];
            for i in t + 1..rows {
                let f = m[i][t].div_euclid(piv);
                if f != 0 {
                    for j in t..cols {
                        m[i][j] -= f * m[t][j];
                    }
                }
            }
            for j in t + 1..cols {
                let f = m[t][j].div_euclid(piv);
                if f != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= f * row[t];
                    }
                }
            }
            let rest_row = (t + 1..cols).find(|&j| m[t][j] != 0);
            let rest_col = (t + 1..rows).find(|&i| m[i][t] != 0);
            if let Some(j) = rest_row {
                for row in m.iter_mut() {
                    row.swap(t, j);
                }
                continue;
            }
            if let Some(i) = rest_col {
                m.swap(t, i);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % piv != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        out.push(m[t][t].abs());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::rat;

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn inverse_and_solve() {
        let a = q(&[&[2, -1], &[-1, 2]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]]);
        assert_eq!(mat_mul(&a, &inv), identity(2));
        let x = solve(&a, &[int(1), int(0)]).unwrap();
        assert_eq!(x, vec![rat(2, 3), rat(1, 3)]);
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn kernel_basis() {
        let a = q(&[&[1, 1, 0], &[0, 0, 1]]);
        let k = kernel(&a, 3);
        assert_eq!(k, vec![vec![int(-1), int(1), int(0)]]);
    }

    #[test]
    fn charpoly_of_rotation() {
        // A2 Coxeter element in the simple-root basis: x^2 + x + 1.
        let a = q(&[&[-1, 1], &[-1, 0]]);
        assert_eq!(charpoly(&a), vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn hermite_example() {
        let h = hermite_rows(&[vec![4, 6], vec![2, 4]]);
        assert_eq!(h, vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(smith_diagonal(&[vec![0, 3]]), vec![3]);
        assert_eq!(smith_diagonal(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }
}
