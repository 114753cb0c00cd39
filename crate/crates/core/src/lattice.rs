//! Integral lattices: validation, exact signatures, and real-subspace
//! searches against the bilinear form.
//!
//! A lattice is a free Z-module with a symmetric integer Gram matrix. Inertia
//! indices are computed exactly over the rationals; the searches that feed the
//! move layer (orthogonal complements, positive vectors) run in f64 with an
//! absolute tolerance.

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::{exact, numeric};

/// Hard cap on coefficient-box enumerations.
pub const BOX_CAP: u128 = 10_000_000;

/// Inertia indices `(pos, neg, null)` of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.pos, self.neg, self.null].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [pos, neg, null] = <[usize; 3]>::deserialize(d)?;
        Ok(Signature { pos, neg, null })
    }
}

/// A list of linearly independent real vectors spanning a subspace of `L ⊗ R`.
#[derive(Clone, Debug, Serialize)]
pub struct SubspaceBasis {
    vectors: Vec<Vec<f64>>,
}

impl SubspaceBasis {
    /// Checks mutual lengths and linear independence (Euclidean Gram
    /// determinant above `tol`).
    pub fn new(vectors: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if let Some(first) = vectors.first() {
            let len = first.len();
            for v in &vectors {
                if v.len() != len {
                    return Err(Error::DimensionMismatch { expected: len, got: v.len() });
                }
            }
            let gram: Vec<Vec<f64>> = vectors
                .iter()
                .map(|u| vectors.iter().map(|w| numeric::dot(u, w)).collect())
                .collect();
            if euclidean_det(&gram).abs() <= tol {
                return Err(Error::DegenerateSpan);
            }
        }
        Ok(SubspaceBasis { vectors })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

fn euclidean_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_owned();
    let mut det = 1.0;
    for c in 0..n {
        let (pr, pv) = (c..n)
            .map(|i| (i, a[i][c].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty range");
        if pv == 0.0 {
            return 0.0;
        }
        if pr != c {
            a.swap(c, pr);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for t in c..n {
                a[i][t] -= f * a[c][t];
            }
        }
    }
    det
}

/// An integral lattice: rank and symmetric integer Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct LatticeRepr {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LatticeRepr::deserialize(d)?;
        let lat = Lattice::new(repr.gram).map_err(serde::de::Error::custom)?;
        if lat.rank != repr.rank {
            return Err(serde::de::Error::custom(format!(
                "rank field {} does not match a {}x{} gram matrix",
                repr.rank, lat.rank, lat.rank
            )));
        }
        Ok(lat)
    }
}

impl Lattice {
    /// Accepts a square, symmetric integer Gram matrix.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let rank = gram.len();
        for row in &gram {
            if row.len() != rank {
                return Err(Error::NotSquare);
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Lattice { rank, gram })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_f64(&self) -> Vec<Vec<f64>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|&x| x as f64).collect())
            .collect()
    }

    pub(crate) fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        Ok(())
    }

    /// `G v` over the integers.
    pub fn apply_gram_int(&self, v: &[i64]) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(v).map(|(&g, &x)| g * x).sum())
            .collect()
    }

    /// `G v` with the Gram entries cast to f64.
    pub fn apply_gram(&self, v: &[f64]) -> Vec<f64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(v).map(|(&g, &x)| g as f64 * x).sum())
            .collect()
    }

    pub fn bilinear_int(&self, u: &[i64], v: &[i64]) -> i64 {
        u.iter().zip(self.apply_gram_int(v)).map(|(&a, b)| a * b).sum()
    }

    pub fn quad_int(&self, v: &[i64]) -> i64 {
        self.bilinear_int(v, v)
    }

    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        numeric::dot(u, &self.apply_gram(v))
    }

    pub fn quad(&self, v: &[f64]) -> f64 {
        self.bilinear(v, v)
    }

    /// Inertia indices by exact congruence diagonalization over Q.
    pub fn signature(&self) -> Signature {
        exact::integer_signature(&self.gram)
    }

    /// Whether the quadratic form `q(x) = x^t G x` is primitive in the
    /// polynomial sense: the gcd of its integer coefficients, which are the
    /// diagonal entries together with the doubled off-diagonal ones, is 1.
    /// Even forms such as the hyperbolic plane are therefore not primitive.
    pub fn is_primitive_form(&self) -> bool {
        let mut g: i128 = 0;
        for i in 0..self.rank {
            g = g.gcd(&(self.gram[i][i] as i128));
            for j in i + 1..self.rank {
                g = g.gcd(&(2 * self.gram[i][j] as i128));
            }
        }
        g == 1
    }

    /// Gram matrix of the given real vectors under the form.
    pub fn gram_of_span(&self, vecs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let images: Vec<Vec<f64>> = vecs.iter().map(|v| self.apply_gram(v)).collect();
        vecs.iter()
            .map(|u| images.iter().map(|img| numeric::dot(u, img)).collect())
            .collect()
    }

    /// Basis of `{u : b(u, v) = 0 for all v in vecs}`.
    ///
    /// Requires the restriction of the form to `span(vecs)` to be
    /// nondegenerate, so the complement is a true direct summand of dimension
    /// `rank - |vecs|`.
    pub fn orthogonal_complement(&self, vecs: &[Vec<f64>], tol: f64) -> Result<SubspaceBasis> {
        for v in vecs {
            self.check_dim(v)?;
        }
        let restricted = self.gram_of_span(vecs);
        let diag = numeric::congruence_diagonalize(&restricted, tol).diag;
        if diag.iter().any(|d| d.abs() <= tol) {
            return Err(Error::DegenerateSpan);
        }
        let equations: Vec<Vec<f64>> = vecs.iter().map(|v| self.apply_gram(v)).collect();
        let kernel = numeric::nullspace(&equations, tol, self.rank);
        SubspaceBasis::new(kernel, tol)
    }

    /// A vector of positive square in the span, found by diagonalizing the
    /// restricted form; `None` when the restriction is negative semidefinite.
    pub fn positive_vector(&self, sub: &SubspaceBasis, tol: f64) -> Option<Vec<f64>> {
        let restricted = self.gram_of_span(sub.vectors());
        let d = numeric::congruence_diagonalize(&restricted, tol);
        let k = sub.dim();
        let i = (0..k).find(|&i| d.diag[i] > tol)?;
        let mut v = vec![0.0; self.rank];
        for (j, basis_vec) in sub.vectors().iter().enumerate() {
            let c = d.transform[j][i];
            for (vt, bt) in v.iter_mut().zip(basis_vec) {
                *vt += c * bt;
            }
        }
        Some(v)
    }

    /// All nonzero integer vectors with coordinates in `[-coeff_bound,
    /// coeff_bound]`, in lexicographic order.
    pub fn integer_vectors_in_box(&self, coeff_bound: i64) -> Result<Vec<Vec<i64>>> {
        let size = checked_box_size(self.rank, coeff_bound)?;
        let mut out = Vec::with_capacity((size as usize).saturating_sub(1));
        let b = coeff_bound.max(0);
        if self.rank == 0 || b == 0 {
            return Ok(out);
        }
        let n = self.rank;
        let mut v = vec![-b; n];
        'outer: loop {
            if v.iter().any(|&x| x != 0) {
                out.push(v.clone());
            }
            for i in (0..n).rev() {
                if v[i] < b {
                    v[i] += 1;
                    continue 'outer;
                }
                v[i] = -b;
            }
            break;
        }
        Ok(out)
    }
}

/// Number of points in the coefficient box, checked against [`BOX_CAP`].
pub(crate) fn checked_box_size(rank: usize, coeff_bound: i64) -> Result<u128> {
    let side = (2 * coeff_bound.max(0) + 1) as u128;
    let mut size: u128 = 1;
    for _ in 0..rank {
        size = size.saturating_mul(side);
    }
    if size > BOX_CAP {
        return Err(Error::BoxTooLarge { size, cap: BOX_CAP });
    }
    Ok(size)
}
