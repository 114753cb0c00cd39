//! Involutive isometries and their eigenlattices.
//!
//! An involution c acts on the lattice by an integer matrix with c^2 = id and
//! c^t G c = G. Its (+1)- and (-1)-eigenlattices are computed as exact integer
//! kernels of c -/+ id, which are automatically saturated; the lattice has
//! 2L ⊆ L₊ ⊕ L₋, so the subgroup index is a power of two. A real homological
//! type is an involution whose plus eigenlattice has positive inertia index 1.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::lattice::{Lattice, Signature};
use crate::numeric;

/// A validated involutive isometry of a fixed lattice.
/// Deserialization goes through [`Involution::new`] so no unchecked matrix
/// can enter through JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Involution {
    matrix: Vec<Vec<i64>>,
}

impl Involution {
    /// Checks shape, `c^2 = id`, then `c^t G c = G`, in that order.
    pub fn new(lat: &Lattice, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = lat.rank();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in 0..n {
                let sq: i64 = (0..n).map(|k| matrix[i][k] * matrix[k][j]).sum();
                if sq != i64::from(i == j) {
                    return Err(Error::NotInvolutive);
                }
            }
        }
        // c^t G c at (i, j) is b(c e_i, c e_j)
        let images: Vec<Vec<i64>> = (0..n).map(|j| column(&matrix, j)).collect();
        for i in 0..n {
            for j in 0..n {
                if lat.bilinear_int(&images[i], &images[j]) != lat.gram()[i][j] {
                    return Err(Error::NotIsometry);
                }
            }
        }
        Ok(Involution { matrix })
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(&m, &x)| m * x).sum())
            .collect()
    }

    /// Primitive bases of the (+1)- and (-1)-eigenlattices with their exact
    /// restricted signatures. Bases are Hermite-normalized with rows sorted
    /// lexicographically, so equal inputs give identical output.
    pub fn eigenlattices(&self, lat: &Lattice) -> EigenSplit {
        let n = lat.rank();
        let mut minus_id = exact::to_bigint_matrix(&self.matrix);
        let mut plus_id = minus_id.clone();
        for i in 0..n {
            minus_id[i][i] -= 1;
            plus_id[i][i] += 1;
        }
        let plus_basis = kernel_rows_i64(&minus_id);
        let minus_basis = kernel_rows_i64(&plus_id);
        let plus_sig = restricted_signature(lat, &plus_basis);
        let minus_sig = restricted_signature(lat, &minus_basis);
        EigenSplit { plus_basis, minus_basis, plus_sig, minus_sig }
    }
}

fn column(matrix: &[Vec<i64>], j: usize) -> Vec<i64> {
    matrix.iter().map(|row| row[j]).collect()
}

fn kernel_rows_i64(a: &[Vec<num_bigint::BigInt>]) -> Vec<Vec<i64>> {
    exact::integer_kernel(a)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| x.to_i64().expect("eigenbasis entry exceeds i64"))
                .collect()
        })
        .collect()
}

fn restricted_signature(lat: &Lattice, basis: &[Vec<i64>]) -> Signature {
    let k = basis.len();
    let mut gram = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = lat.bilinear_int(&basis[i], &basis[j]);
        }
    }
    exact::integer_signature(&gram)
}

/// The eigenlattice data of an involution.
#[derive(Clone, Debug, Serialize)]
pub struct EigenSplit {
    plus_basis: Vec<Vec<i64>>,
    minus_basis: Vec<Vec<i64>>,
    plus_sig: Signature,
    minus_sig: Signature,
}

impl EigenSplit {
    pub fn plus_basis(&self) -> &[Vec<i64>] {
        &self.plus_basis
    }

    pub fn minus_basis(&self) -> &[Vec<i64>] {
        &self.minus_basis
    }

    pub fn plus_sig(&self) -> Signature {
        self.plus_sig
    }

    pub fn minus_sig(&self) -> Signature {
        self.minus_sig
    }

    pub fn plus_basis_f64(&self) -> Vec<Vec<f64>> {
        to_f64_rows(&self.plus_basis)
    }

    pub fn minus_basis_f64(&self) -> Vec<Vec<f64>> {
        to_f64_rows(&self.minus_basis)
    }

    /// Gram matrix of the minus eigenlattice in its own basis.
    pub fn minus_gram(&self, lat: &Lattice) -> Vec<Vec<i64>> {
        let k = self.minus_basis.len();
        let mut gram = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = lat.bilinear_int(&self.minus_basis[i], &self.minus_basis[j]);
            }
        }
        gram
    }

    /// Coordinates of `v` in the minus basis, or `None` when the residual of
    /// the Euclidean projection exceeds `tol` in sup norm.
    pub fn minus_coords(&self, v: &[f64], tol: f64) -> Option<Vec<f64>> {
        coords_in(&self.minus_basis_f64(), v, tol)
    }

    pub fn minus_to_ambient(&self, coords: &[f64]) -> Vec<f64> {
        from_coords(&self.minus_basis, coords, ambient_dim(self))
    }

    /// Sup-norm distance from `v` to the span of the given eigenbasis.
    pub fn membership_residual(&self, plus: bool, v: &[f64]) -> f64 {
        let basis = if plus { self.plus_basis_f64() } else { self.minus_basis_f64() };
        match numeric::project_onto_span(&basis, v) {
            Some((_, residual)) => numeric::sup_norm(&residual),
            None => f64::INFINITY,
        }
    }
}

fn ambient_dim(split: &EigenSplit) -> usize {
    split
        .plus_basis
        .first()
        .or_else(|| split.minus_basis.first())
        .map_or(0, |v| v.len())
}

fn to_f64_rows(rows: &[Vec<i64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect()
}

fn coords_in(basis: &[Vec<f64>], v: &[f64], tol: f64) -> Option<Vec<f64>> {
    let (coords, residual) = numeric::project_onto_span(basis, v)?;
    if numeric::sup_norm(&residual) > tol {
        return None;
    }
    Some(coords)
}

fn from_coords(basis: &[Vec<i64>], coords: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (c, b) in coords.iter().zip(basis) {
        for (o, &x) in out.iter_mut().zip(b) {
            *o += c * x as f64;
        }
    }
    out
}

/// Whether the involution is a real homological type: positive inertia index
/// of the plus eigenlattice equal to 1.
pub fn is_real_homological_type(lat: &Lattice, c: &Involution) -> (bool, EigenSplit) {
    let split = c.eigenlattices(lat);
    (split.plus_sig().pos == 1, split)
}

/// Classification record for one involution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_rht: bool,
    pub plus_sig: Signature,
    pub minus_sig: Signature,
    /// log2 of the index `[L : L₊ ⊕ L₋]`.
    pub index_log2: u32,
}

/// Classify an involution: real-type flag, eigenlattice signatures, and the
/// index of `L₊ ⊕ L₋` in `L`.
pub fn classify(lat: &Lattice, c: &Involution) -> ClassificationReport {
    let (is_rht, split) = is_real_homological_type(lat, c);
    let mut rows = split.plus_basis().to_vec();
    rows.extend_from_slice(split.minus_basis());
    let det = exact::integer_determinant(&exact::to_bigint_matrix(&rows));
    // c^2 = id forces Q^n = ker(c-1) ⊕ ker(c+1) and 2L ⊆ L₊ ⊕ L₋, so the
    // determinant is a nonzero power of two up to sign.
    let index = det
        .magnitude()
        .to_u64()
        .expect("eigenlattice index exceeds u64");
    assert!(index.is_power_of_two(), "index {index} is not a power of two");
    ClassificationReport {
        is_rht,
        plus_sig: split.plus_sig(),
        minus_sig: split.minus_sig(),
        index_log2: index.trailing_zeros(),
    }
}

/// All involutive isometries with entries in `[-entry_bound, entry_bound]`,
/// sorted lexicographically by rows.
///
/// Columns are chosen left to right from the coefficient box; a candidate for
/// column j must reproduce the Gram products with every earlier column, which
/// prunes the search long before the `(2b+1)^(n^2)` raw space. The list is
/// complete only relative to the entry bound.
pub fn enumerate_involutions(lat: &Lattice, entry_bound: i64) -> Result<Vec<Involution>> {
    let n = lat.rank();
    if n == 0 {
        return Ok(vec![Involution { matrix: Vec::new() }]);
    }
    let candidates = lat.integer_vectors_in_box(entry_bound).map_err(|e| match e {
        Error::BoxTooLarge { cap, .. } => Error::SearchSpaceTooLarge { cap },
        other => other,
    })?;
    let norms: Vec<i64> = candidates.iter().map(|v| lat.quad_int(v)).collect();
    let gram_images: Vec<Vec<i64>> = candidates.iter().map(|v| lat.apply_gram_int(v)).collect();

    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    let mut results: Vec<Vec<Vec<i64>>> = Vec::new();
    search_columns(
        lat,
        &candidates,
        &norms,
        &gram_images,
        &mut chosen,
        &mut results,
    );
    results.sort();
    Ok(results.into_iter().map(|matrix| Involution { matrix }).collect())
}

fn search_columns(
    lat: &Lattice,
    candidates: &[Vec<i64>],
    norms: &[i64],
    gram_images: &[Vec<i64>],
    chosen: &mut Vec<usize>,
    results: &mut Vec<Vec<Vec<i64>>>,
) {
    let n = lat.rank();
    let j = chosen.len();
    if j == n {
        let matrix: Vec<Vec<i64>> = (0..n)
            .map(|i| chosen.iter().map(|&ci| candidates[ci][i]).collect())
            .collect();
        if is_involutive(&matrix) {
            results.push(matrix);
        }
        return;
    }
    'cand: for (ci, v) in candidates.iter().enumerate() {
        if norms[ci] != lat.gram()[j][j] {
            continue;
        }
        for (i, &prev) in chosen.iter().enumerate() {
            let prod: i64 = gram_images[prev].iter().zip(v).map(|(&a, &b)| a * b).sum();
            if prod != lat.gram()[i][j] {
                continue 'cand;
            }
        }
        chosen.push(ci);
        search_columns(lat, candidates, norms, gram_images, chosen, results);
        chosen.pop();
    }
}

fn is_involutive(matrix: &[Vec<i64>]) -> bool {
    let n = matrix.len();
    for i in 0..n {
        for j in 0..n {
            let sq: i64 = (0..n).map(|k| matrix[i][k] * matrix[k][j]).sum();
            if sq != i64::from(i == j) {
                return false;
            }
        }
    }
    true
}
