//! Elementary moves on period triples.
//!
//! Three moves suffice to reach any admissible target class: a rotation of the
//! (ω₋, γ) plane, a small perturbation along the eigenlattices, and a
//! replacement of γ by a prescribed class. Each move validates its input
//! triple and fails loudly rather than producing an off-domain point.
//!
//! [`lemma_vector`] is the constructive core used by the planner: given two
//! positive vectors it produces a third one spanning a positive definite
//! plane with each of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::EigenSplit;
use crate::lattice::Lattice;
use crate::numeric;
use crate::period::{
    is_generic, normalize_triple, same_cone_component, validate_triple, GenericityReport,
    RealTriple,
};

/// Parameters of one move, self-contained enough to replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MoveParams {
    Rotate { theta: f64 },
    Perturb { delta: f64, seed: u64 },
    Retarget { new_gamma: Vec<f64> },
}

fn require_valid(lat: &Lattice, split: &EigenSplit, t: &RealTriple, tol: f64) -> Result<()> {
    let report = validate_triple(lat, split, t, tol);
    if report.pass {
        Ok(())
    } else {
        Err(Error::InvalidTriple(report.failed_names().join(", ")))
    }
}

/// Rotate the (ω₋, γ) plane by `theta`, fixing ω₊ bit for bit.
///
/// The rotation is taken in the frame (ω₋/√q(ω₋), γ/√q(γ)), so the squares
/// of ω₋ and γ are individually preserved, as is their orthogonality.
pub fn rotate(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    theta: f64,
    tol: f64,
) -> Result<RealTriple> {
    if !theta.is_finite() {
        return Err(Error::BadParameter("rotation angle must be finite"));
    }
    require_valid(lat, split, t, tol)?;
    let s_minus = lat.quad(&t.omega_minus).sqrt();
    let s_gamma = lat.quad(&t.gamma).sqrt();
    let u1 = numeric::scale(&t.omega_minus, 1.0 / s_minus);
    let u2 = numeric::scale(&t.gamma, 1.0 / s_gamma);
    let (sin, cos) = theta.sin_cos();
    let omega_minus =
        numeric::scale(&numeric::add_scaled(&numeric::scale(&u1, cos), &u2, sin), s_minus);
    let gamma =
        numeric::scale(&numeric::add_scaled(&numeric::scale(&u1, -sin), &u2, cos), s_gamma);
    Ok(RealTriple { omega_plus: t.omega_plus.clone(), omega_minus, gamma })
}

/// Perturb the triple by a seeded uniform draw in `[-delta, delta]` along
/// each eigenlattice basis vector, then renormalize.
///
/// The draw order is fixed — plus coordinates for ω₊, then minus coordinates
/// for ω₋, then for γ — so a (delta, seed) pair replays exactly. `delta = 0`
/// reduces to plain normalization.
pub fn perturb(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    delta: f64,
    seed: u64,
    tol: f64,
) -> Result<RealTriple> {
    if !delta.is_finite() {
        return Err(Error::BadParameter("perturbation size must be finite"));
    }
    let delta = delta.abs();
    require_valid(lat, split, t, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |v: &[f64], basis: &[Vec<f64>]| -> Vec<f64> {
        let mut out = v.to_vec();
        for b in basis {
            let eps: f64 = rng.gen_range(-delta..=delta);
            if eps != 0.0 {
                out = numeric::add_scaled(&out, b, eps);
            }
        }
        out
    };
    let plus = split.plus_basis_f64();
    let minus = split.minus_basis_f64();
    let omega_plus = draw(&t.omega_plus, &plus);
    let omega_minus = draw(&t.omega_minus, &minus);
    let gamma = draw(&t.gamma, &minus);
    normalize_triple(lat, &RealTriple { omega_plus, omega_minus, gamma }).map_err(|e| match e {
        Error::NotPositive(_) | Error::GammaDegenerate => Error::PositivityLost,
        other => other,
    })
}

fn retarget_checked(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    new_gamma: &[f64],
    tol: f64,
) -> Result<RealTriple> {
    lat.check_dim(new_gamma)?;
    require_valid(lat, split, t, tol)?;
    if split.membership_residual(false, new_gamma) > tol {
        return Err(Error::TargetNotInMinus);
    }
    let residual = lat.bilinear(&t.omega_minus, new_gamma).abs();
    if residual > tol {
        return Err(Error::NotOrthogonal { residual });
    }
    if lat.quad(new_gamma) <= tol {
        return Err(Error::TargetNotPositive);
    }
    if !same_cone_component(lat, &t.gamma, new_gamma)? {
        return Err(Error::WrongComponent);
    }
    Ok(RealTriple {
        omega_plus: t.omega_plus.clone(),
        omega_minus: t.omega_minus.clone(),
        gamma: new_gamma.to_vec(),
    })
}

/// Replace γ by `new_gamma`, keeping ω₊ and ω₋.
///
/// Legal only when the triple is generic (so the replacement cannot cross a
/// wall), `new_gamma` lies in the minus eigenspace orthogonal to ω₋ with
/// positive square, and it sits in the same cone component as the old γ.
pub fn retarget_gamma(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    new_gamma: &[f64],
    genericity: &GenericityReport,
    tol: f64,
) -> Result<RealTriple> {
    if !genericity.generic {
        return Err(Error::NotGeneric);
    }
    retarget_checked(lat, split, t, new_gamma, tol)
}

/// [`retarget_gamma`] without the genericity requirement. The step is still
/// checked for geometric legality but cannot be certified.
pub fn retarget_gamma_forced(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    new_gamma: &[f64],
    tol: f64,
) -> Result<RealTriple> {
    retarget_checked(lat, split, t, new_gamma, tol)
}

/// Apply recorded move parameters to a triple. Retarget runs a fresh
/// genericity scan at `coeff_bound` before being accepted.
pub fn apply_move(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    params: &MoveParams,
    coeff_bound: i64,
    tol: f64,
) -> Result<RealTriple> {
    match params {
        MoveParams::Rotate { theta } => rotate(lat, split, t, *theta, tol),
        MoveParams::Perturb { delta, seed } => perturb(lat, split, t, *delta, *seed, tol),
        MoveParams::Retarget { new_gamma } => {
            let genericity = is_generic(lat, t, coeff_bound, tol)?;
            retarget_gamma(lat, split, t, new_gamma, &genericity, tol)
        }
    }
}

/// Find `v` with q(v) > 0 spanning a positive definite plane with each of
/// `v1` and `v2` (both of positive square, in the coordinates of `form`).
///
/// When span(v1, v2) is itself positive definite, the normalized sum works.
/// Otherwise a positive direction in the orthogonal complement of the span
/// does, which exists because the form carries at least two positive squares.
/// A nearly degenerate span is rejected rather than decided by noise.
pub fn lemma_vector(form: &[Vec<f64>], v1: &[f64], v2: &[f64], tol: f64) -> Result<Vec<f64>> {
    let n = form.len();
    for w in [v1, v2] {
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
    }
    if numeric::positive_square_count(form, tol) < 2 {
        return Err(Error::NotEnoughPositiveSquares);
    }
    let q1 = numeric::quad(form, v1);
    if q1 <= tol {
        return Err(Error::NotPositive("first spanning vector"));
    }
    let q2 = numeric::quad(form, v2);
    if q2 <= tol {
        return Err(Error::NotPositive("second spanning vector"));
    }

    let independent = numeric::project_onto_span(&[v1.to_vec()], v2)
        .map(|(_, residual)| numeric::sup_norm(&residual) > tol)
        .unwrap_or(false);

    let v = if independent {
        let m = numeric::restricted_gram(form, &[v1.to_vec(), v2.to_vec()]);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det > tol {
            numeric::add_scaled(&numeric::scale(v1, 1.0 / q1.sqrt()), v2, 1.0 / q2.sqrt())
        } else if det < -tol {
            positive_vector_in_complement(form, &[v1.to_vec(), v2.to_vec()], tol)?
        } else {
            return Err(Error::DegenerateSpan);
        }
    } else {
        positive_vector_in_complement(form, &[v1.to_vec()], tol)?
    };

    for (w, name) in [(v1, "first"), (v2, "second")] {
        let m = numeric::restricted_gram(form, &[v.clone(), w.to_vec()]);
        let pos = m[0][0] > tol && m[0][0] * m[1][1] - m[0][1] * m[1][0] > tol;
        if !pos {
            return Err(Error::LemmaFailed(format!(
                "span with the {name} input vector is not positive definite"
            )));
        }
    }
    Ok(v)
}

fn positive_vector_in_complement(
    form: &[Vec<f64>],
    span: &[Vec<f64>],
    tol: f64,
) -> Result<Vec<f64>> {
    let n = form.len();
    let rows: Vec<Vec<f64>> = span
        .iter()
        .map(|u| form.iter().map(|row| numeric::dot(row, u)).collect())
        .collect();
    let basis = numeric::nullspace(&rows, tol, n);
    if basis.is_empty() {
        return Err(Error::LemmaFailed(
            "orthogonal complement of the span is trivial".into(),
        ));
    }
    let restricted = numeric::restricted_gram(form, &basis);
    let d = numeric::congruence_diagonalize(&restricted, tol);
    for (i, &di) in d.diag.iter().enumerate() {
        if di > tol {
            let mut v = vec![0.0; n];
            for (j, b) in basis.iter().enumerate() {
                let c = d.transform[j][i];
                if c != 0.0 {
                    v = numeric::add_scaled(&v, b, c);
                }
            }
            return Ok(v);
        }
    }
    Err(Error::LemmaFailed(
        "no positive direction orthogonal to the span".into(),
    ))
}
