//! Small dense f64 routines backing the real-subspace operations.
//!
//! All tolerances are absolute. The matrices involved are restricted Gram
//! forms and eigenbasis systems of rank at most a few dozen, well away from
//! the scales where partial pivoting would need refinement.

pub(crate) fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub(crate) fn sup_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

pub(crate) fn scale(v: &[f64], s: f64) -> Vec<f64> {
    v.iter().map(|x| x * s).collect()
}

pub(crate) fn add_scaled(u: &[f64], v: &[f64], s: f64) -> Vec<f64> {
    u.iter().zip(v).map(|(a, b)| a + b * s).collect()
}

/// `u^T F v` for a symmetric form `F`.
pub(crate) fn bilinear(form: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
    form.iter()
        .zip(u)
        .map(|(row, &ui)| ui * dot(row, v))
        .sum()
}

pub(crate) fn quad(form: &[Vec<f64>], v: &[f64]) -> f64 {
    bilinear(form, v, v)
}

/// Gram matrix of `vecs` under `form`.
pub(crate) fn restricted_gram(form: &[Vec<f64>], vecs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let images: Vec<Vec<f64>> = vecs
        .iter()
        .map(|v| form.iter().map(|row| dot(row, v)).collect())
        .collect();
    vecs.iter()
        .map(|u| images.iter().map(|img| dot(u, img)).collect())
        .collect()
}

pub(crate) struct Diagonalization {
    /// Diagonal entries of `T^t M T`.
    pub diag: Vec<f64>,
    /// Columns of `T` are the coefficient vectors realizing each diagonal entry.
    pub transform: Vec<Vec<f64>>,
}

/// Congruence diagonalization of a symmetric matrix with diagonal pivoting.
///
/// Pivots below `tol` in absolute value are treated as zero. If the trailing
/// diagonal dies but an off-diagonal entry survives, one basis addition
/// revives a usable pivot, as in the exact routine.
pub(crate) fn congruence_diagonalize(m: &[Vec<f64>], tol: f64) -> Diagonalization {
    let n = m.len();
    let mut a = m.to_owned();
    let mut t: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let swap_basis = |a: &mut Vec<Vec<f64>>, t: &mut Vec<Vec<f64>>, i: usize, j: usize| {
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in t.iter_mut() {
            row.swap(i, j);
        }
    };
    // basis vector j += basis vector k
    let add_basis = |a: &mut Vec<Vec<f64>>, t: &mut Vec<Vec<f64>>, j: usize, k: usize| {
        for ti in 0..a.len() {
            let v = a[k][ti];
            a[j][ti] += v;
        }
        for row in a.iter_mut() {
            let v = row[k];
            row[j] += v;
        }
        for row in t.iter_mut() {
            let v = row[k];
            row[j] += v;
        }
    };

    for i in 0..n {
        let (jmax, dmax) = (i..n)
            .map(|j| (j, a[j][j].abs()))
            .fold((i, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if dmax > tol {
            if jmax != i {
                swap_basis(&mut a, &mut t, i, jmax);
            }
        } else {
            let mut best = (i, i, 0.0);
            for j in i..n {
                for k in j + 1..n {
                    if a[j][k].abs() > best.2 {
                        best = (j, k, a[j][k].abs());
                    }
                }
            }
            if best.2 <= tol {
                break; // trailing block is numerically zero
            }
            let (j, k, _) = best;
            add_basis(&mut a, &mut t, j, k);
            if j != i {
                swap_basis(&mut a, &mut t, i, j);
            }
        }
        let p = a[i][i];
        for j in i + 1..n {
            let f = a[j][i] / p;
            if f == 0.0 {
                continue;
            }
            for ti in 0..n {
                a[j][ti] -= f * a[i][ti];
            }
            for row in a.iter_mut() {
                let v = row[i];
                row[j] -= f * v;
            }
            for row in t.iter_mut() {
                let v = row[i];
                row[j] -= f * v;
            }
        }
    }

    let diag = (0..n).map(|i| a[i][i]).collect();
    let transform = t;
    Diagonalization { diag, transform }
}

pub(crate) fn positive_square_count(form: &[Vec<f64>], tol: f64) -> usize {
    congruence_diagonalize(form, tol)
        .diag
        .iter()
        .filter(|&&d| d > tol)
        .count()
}

/// Basis of `{x : a x = 0}` with pivots decided against `tol`.
pub(crate) fn nullspace(a: &[Vec<f64>], tol: f64, n: usize) -> Vec<Vec<f64>> {
    let mut m = a.to_owned();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..n {
        let Some((pr, pv)) = (r..rows)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
        else {
            break;
        };
        if pv <= tol {
            continue;
        }
        m.swap(r, pr);
        let inv = 1.0 / m[r][c];
        for t in 0..n {
            m[r][t] *= inv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = m[i][c];
            if f == 0.0 {
                continue;
            }
            for t in 0..n {
                m[i][t] -= f * m[r][t];
            }
        }
        pivots.push(c);
        r += 1;
    }

    let mut basis = Vec::new();
    let mut next_pivot = 0usize;
    for c in 0..n {
        if next_pivot < pivots.len() && pivots[next_pivot] == c {
            next_pivot += 1;
            continue;
        }
        let mut x = vec![0.0; n];
        x[c] = 1.0;
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[i][c];
        }
        basis.push(x);
    }
    basis
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `tol`.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for c in 0..n {
        let (pr, pv) = (c..n)
            .map(|i| (i, m[i][c].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pv <= tol {
            return None;
        }
        m.swap(c, pr);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f == 0.0 {
                continue;
            }
            for t in c..=n {
                m[i][t] -= f * m[c][t];
            }
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let mut s = m[c][n];
        for t in c + 1..n {
            s -= m[c][t] * x[t];
        }
        x[c] = s / m[c][c];
    }
    Some(x)
}

/// Least-squares coordinates of `v` in the span of `basis` (Euclidean normal
/// equations) together with the residual vector.
pub(crate) fn project_onto_span(basis: &[Vec<f64>], v: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    if basis.is_empty() {
        return Some((Vec::new(), v.to_vec()));
    }
    let e: Vec<Vec<f64>> = basis
        .iter()
        .map(|u| basis.iter().map(|w| dot(u, w)).collect())
        .collect();
    let rhs: Vec<f64> = basis.iter().map(|u| dot(u, v)).collect();
    let coords = solve(&e, &rhs, 1e-12)?;
    let mut residual = v.to_vec();
    for (c, u) in coords.iter().zip(basis) {
        for (ri, ui) in residual.iter_mut().zip(u) {
            *ri -= c * ui;
        }
    }
    Some((coords, residual))
}
