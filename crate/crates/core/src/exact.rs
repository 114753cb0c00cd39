//! Exact linear algebra over the integers and rationals.
//!
//! Everything here is fraction-free or works in `BigRational`, so inertia
//! indices, eigenlattice bases, and index determinants carry no rounding.
//! Matrices are dense row-major `Vec<Vec<_>>`; ranks in this crate stay small
//! (at most a few dozen), so clarity wins over cleverness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::Signature;

fn rational_matrix(gram: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    gram.iter()
        .map(|row| row.iter().map(|&x| BigRational::from(BigInt::from(x))).collect())
        .collect()
}

/// Swap basis vectors `i` and `j` of a symmetric matrix (rows and columns).
fn swap_symmetric(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Inertia indices of an integer symmetric matrix, by congruence
/// diagonalization over the rationals.
///
/// Symmetric Gaussian elimination: a nonzero diagonal pivot clears its row and
/// column; if the trailing diagonal is all zero but some off-diagonal entry
/// `a[j][k]` survives, adding basis vector `k` to `j` makes `a[j][j] = 2a[j][k]`
/// nonzero. Pivot signs are exact, so the result is the true signature.
pub(crate) fn integer_signature(gram: &[Vec<i64>]) -> Signature {
    let n = gram.len();
    let mut a = rational_matrix(gram);
    let (mut pos, mut neg, mut null) = (0usize, 0usize, 0usize);

    for i in 0..n {
        if a[i][i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                swap_symmetric(&mut a, i, j);
            } else {
                // whole trailing diagonal is zero
                let mut off = None;
                'scan: for j in i..n {
                    for k in j + 1..n {
                        if !a[j][k].is_zero() {
                            off = Some((j, k));
                            break 'scan;
                        }
                    }
                }
                let Some((j, k)) = off else {
                    null += n - i;
                    break;
                };
                for t in 0..n {
                    let v = a[k][t].clone();
                    a[j][t] += v;
                }
                for t in 0..n {
                    let v = a[t][k].clone();
                    a[t][j] += v;
                }
                if j != i {
                    swap_symmetric(&mut a, i, j);
                }
            }
        }
        let p = a[i][i].clone();
        debug_assert!(!p.is_zero());
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for j in i + 1..n {
            if a[j][i].is_zero() {
                continue;
            }
            let f = &a[j][i] / &p;
            for t in 0..n {
                let v = &a[i][t] * &f;
                a[j][t] -= v;
            }
            for t in 0..n {
                let v = &a[t][i] * &f;
                a[t][j] -= v;
            }
        }
    }

    Signature { pos, neg, null }
}

/// Basis of `{x in Z^n : a x = 0}` as rows, in Hermite normal form with rows
/// sorted lexicographically.
///
/// Column reduction on `a` stacked over an identity block: unimodular column
/// operations clear one row of `a` at a time by repeated Euclidean division;
/// columns whose `a`-part ends up zero read off a basis of the kernel in the
/// identity block. The integer kernel of an integer matrix is saturated, so no
/// separate saturation pass is needed.
pub(crate) fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c: Vec<BigInt> = (0..m).map(|i| a[i][j].clone()).collect();
            c.extend((0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }));
            c
        })
        .collect();

    let mut fixed = 0usize;
    for r in 0..m {
        loop {
            let nz: Vec<usize> = (fixed..cols.len()).filter(|&j| !cols[j][r].is_zero()).collect();
            match nz.len() {
                0 => break,
                1 => {
                    cols.swap(fixed, nz[0]);
                    fixed += 1;
                    break;
                }
                _ => {
                    let &jmin = nz
                        .iter()
                        .min_by_key(|&&j| cols[j][r].abs())
                        .expect("nonempty");
                    for &j in &nz {
                        if j == jmin {
                            continue;
                        }
                        let q = &cols[j][r] / &cols[jmin][r];
                        if q.is_zero() {
                            continue;
                        }
                        for t in 0..m + n {
                            let v = &cols[jmin][t] * &q;
                            cols[j][t] -= v;
                        }
                    }
                }
            }
        }
    }

    let kernel: Vec<Vec<BigInt>> = cols[fixed..].iter().map(|c| c[m..].to_vec()).collect();
    hermite_rows(kernel)
}

/// Row Hermite normal form (positive pivots, entries above a pivot reduced
/// into `[0, pivot)`), with the rows then sorted lexicographically.
pub(crate) fn hermite_rows(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return rows;
    }
    let n = rows[0].len();
    let mut pivot_row = 0usize;
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .collect();
            match nz.len() {
                0 => break,
                1 => {
                    rows.swap(pivot_row, nz[0]);
                    if rows[pivot_row][col].is_negative() {
                        for t in 0..n {
                            let v = -rows[pivot_row][t].clone();
                            rows[pivot_row][t] = v;
                        }
                    }
                    let pivot = rows[pivot_row][col].clone();
                    for r in 0..pivot_row {
                        let q = rows[r][col].div_floor(&pivot);
                        if q.is_zero() {
                            continue;
                        }
                        for t in 0..n {
                            let v = &rows[pivot_row][t] * &q;
                            rows[r][t] -= v;
                        }
                    }
                    pivot_row += 1;
                    break;
                }
                _ => {
                    let &rmin = nz
                        .iter()
                        .min_by_key(|&&r| rows[r][col].abs())
                        .expect("nonempty");
                    for &r in &nz {
                        if r == rmin {
                            continue;
                        }
                        let q = &rows[r][col] / &rows[rmin][col];
                        if q.is_zero() {
                            continue;
                        }
                        for t in 0..n {
                            let v = &rows[rmin][t] * &q;
                            rows[r][t] -= v;
                        }
                    }
                }
            }
        }
    }
    rows.truncate(pivot_row);
    // echelon rows of an HNF matrix are exactly the lexicographically
    // descending ones; the sort pins the order without disturbing them
    rows.sort_by(|a, b| b.cmp(a));
    rows
}

/// Exact determinant by Bareiss fraction-free elimination.
pub(crate) fn integer_determinant(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = mat.to_owned();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(j) = (k + 1..n).find(|&j| !m[j][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, j);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

pub(crate) fn to_bigint_matrix(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()
}
