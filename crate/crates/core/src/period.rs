//! Real period data for a lattice with involution.
//!
//! A point of the real period domain is encoded as a triple (ω₊, ω₋, γ):
//! ω₊ spans the plus period direction, ω₋ and γ span a positive definite
//! plane in the minus eigenspace, with γ orthogonal to ω₋. Normalized triples
//! carry q(ω₊) = q(ω₋) = 1 while γ keeps its own scale, which is later matched
//! to the target class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::EigenSplit;
use crate::lattice::{checked_box_size, Lattice};
use crate::numeric;

/// Ambient-coordinate triple (ω₊, ω₋, γ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealTriple {
    pub omega_plus: Vec<f64>,
    pub omega_minus: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// One named validation check with the measured residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
}

/// Outcome of `validate_triple`: `pass` iff every check passed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn failed_names(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn positivity_check(name: &str, value: f64, tol: f64) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass: value > tol,
        residual: (-value).max(0.0),
    }
}

fn equality_check(name: &str, residual: f64, tol: f64) -> CheckResult {
    CheckResult { name: name.to_string(), pass: residual.abs() <= tol, residual: residual.abs() }
}

/// Check the defining conditions of a period triple against `tol`:
/// positivity and equality of the ω squares, orthogonality of γ to ω₋,
/// positivity of q(γ), and membership of each vector in its eigenspace.
pub fn validate_triple(
    lat: &Lattice,
    split: &EigenSplit,
    t: &RealTriple,
    tol: f64,
) -> ValidationReport {
    let q_plus = lat.quad(&t.omega_plus);
    let q_minus = lat.quad(&t.omega_minus);
    let q_gamma = lat.quad(&t.gamma);
    let checks = vec![
        positivity_check("q_omega_plus_positive", q_plus, tol),
        positivity_check("q_omega_minus_positive", q_minus, tol),
        equality_check("q_omega_equal", q_plus - q_minus, tol),
        equality_check(
            "gamma_orthogonal_to_omega_minus",
            lat.bilinear(&t.omega_minus, &t.gamma),
            tol,
        ),
        positivity_check("q_gamma_positive", q_gamma, tol),
        equality_check(
            "omega_plus_in_plus_space",
            split.membership_residual(true, &t.omega_plus),
            tol,
        ),
        equality_check(
            "omega_minus_in_minus_space",
            split.membership_residual(false, &t.omega_minus),
            tol,
        ),
        equality_check(
            "gamma_in_minus_space",
            split.membership_residual(false, &t.gamma),
            tol,
        ),
    ];
    ValidationReport { pass: checks.iter().all(|c| c.pass), checks }
}

/// Rescale ω₊ and ω₋ to unit square and project γ into the orthogonal
/// complement of ω₋. γ is not rescaled. Idempotent on its own output.
pub fn normalize_triple(lat: &Lattice, t: &RealTriple) -> Result<RealTriple> {
    let q_plus = lat.quad(&t.omega_plus);
    if q_plus <= 0.0 {
        return Err(Error::NotPositive("omega_plus"));
    }
    let q_minus = lat.quad(&t.omega_minus);
    if q_minus <= 0.0 {
        return Err(Error::NotPositive("omega_minus"));
    }
    let omega_plus = numeric::scale(&t.omega_plus, 1.0 / q_plus.sqrt());
    let omega_minus = numeric::scale(&t.omega_minus, 1.0 / q_minus.sqrt());
    let overlap = lat.bilinear(&t.gamma, &omega_minus);
    let gamma = numeric::add_scaled(&t.gamma, &omega_minus, -overlap);
    if lat.quad(&gamma) <= 0.0 {
        return Err(Error::GammaDegenerate);
    }
    Ok(RealTriple { omega_plus, omega_minus, gamma })
}

/// Genericity scan result. `witness`, when present, is a nonzero integer
/// vector tol-orthogonal to both ω₊ and ω₋.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenericityReport {
    pub generic: bool,
    pub witness: Option<Vec<i64>>,
    pub coeff_bound: i64,
}

/// Scan the coefficient box for an integer vector orthogonal to both periods.
///
/// Witnesses are reported in the lexicographic order of the box. The scan
/// streams the box with incrementally updated inner products (refreshed
/// periodically to keep rounding drift far below `tol`), so it stays cheap at
/// the default bound.
pub fn is_generic(
    lat: &Lattice,
    t: &RealTriple,
    coeff_bound: i64,
    tol: f64,
) -> Result<GenericityReport> {
    lat.check_dim(&t.omega_plus)?;
    lat.check_dim(&t.omega_minus)?;
    checked_box_size(lat.rank(), coeff_bound)?;
    let report = |witness: Option<Vec<i64>>| GenericityReport {
        generic: witness.is_none(),
        witness,
        coeff_bound,
    };

    let n = lat.rank();
    let b = coeff_bound.max(0);
    if n == 0 || b == 0 {
        return Ok(report(None));
    }
    let w_plus = lat.apply_gram(&t.omega_plus);
    let w_minus = lat.apply_gram(&t.omega_minus);
    let exact_dots = |v: &[i64]| -> (f64, f64) {
        let vf: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        (numeric::dot(&vf, &w_plus), numeric::dot(&vf, &w_minus))
    };

    let mut v = vec![-b; n];
    let (mut d_plus, mut d_minus) = exact_dots(&v);
    let mut steps_since_refresh = 0u32;
    'outer: loop {
        if steps_since_refresh >= 4096 {
            (d_plus, d_minus) = exact_dots(&v);
            steps_since_refresh = 0;
        }
        if d_plus.abs() <= tol && d_minus.abs() <= tol && v.iter().any(|&x| x != 0) {
            // confirm against freshly computed products before reporting
            let (ep, em) = exact_dots(&v);
            if ep.abs() <= tol && em.abs() <= tol {
                return Ok(report(Some(v)));
            }
        }
        for i in (0..n).rev() {
            if v[i] < b {
                v[i] += 1;
                d_plus += w_plus[i];
                d_minus += w_minus[i];
                steps_since_refresh += 1;
                continue 'outer;
            }
            v[i] = -b;
            d_plus -= 2.0 * b as f64 * w_plus[i];
            d_minus -= 2.0 * b as f64 * w_minus[i];
        }
        break;
    }
    Ok(report(None))
}

/// Whether two positive-square vectors sit in the same component of the
/// positive cone, decided by the sign of their product.
pub fn same_cone_component(lat: &Lattice, g1: &[f64], g2: &[f64]) -> Result<bool> {
    if lat.quad(g1) <= 0.0 || lat.quad(g2) <= 0.0 {
        return Err(Error::NotInCone);
    }
    Ok(lat.bilinear(g1, g2) > 0.0)
}
