//! Six-step path planning toward a prescribed class.
//!
//! Given a valid triple and a target class l in the minus eigenlattice with
//! q(l) > 0, [`plan_path`] produces a trace of at most six moves — perturb,
//! retarget, rotate, perturb, retarget, rotate — whose final triple carries
//! γ = l up to the terminal tolerance. Each step records the triples before
//! and after, the validation report of the result, and enough parameters to
//! replay it; [`verify_trace`] is the independent re-checker.
//!
//! The outline: perturb the start to a generic triple; build a bridge vector
//! v spanning a positive plane with both ω₋ and l; retarget γ into the
//! (ω₋, v) plane and rotate ω₋ onto the positive ray of v; perturb again so
//! the (ω₋, l) plane is positive definite while staying generic; finally
//! retarget γ to the ω₋-orthogonal component of l with q matched to q(l) and
//! rotate it onto l exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::involution::{is_real_homological_type, EigenSplit, Involution};
use crate::lattice::Lattice;
use crate::moves::{lemma_vector, perturb, retarget_gamma, rotate, MoveParams};
use crate::numeric;
use crate::period::{is_generic, normalize_triple, validate_triple, RealTriple, ValidationReport};

/// Knobs for [`plan_path`]. `tol` guards per-step validation, `terminal_tol`
/// the final distance to the target.
#[derive(Clone, Debug)]
pub struct PlanParams {
    pub tol: f64,
    pub terminal_tol: f64,
    pub delta: f64,
    pub coeff_bound: i64,
    pub seed: u64,
    pub max_retries: u32,
}

impl Default for PlanParams {
    fn default() -> Self {
        PlanParams {
            tol: 1e-9,
            terminal_tol: 1e-6,
            delta: 1e-3,
            coeff_bound: 5,
            seed: 0,
            max_retries: 32,
        }
    }
}

/// One executed move with its full context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub index: usize,
    #[serde(rename = "move")]
    pub move_params: MoveParams,
    pub triple_before: RealTriple,
    pub triple_after: RealTriple,
    pub certified: bool,
    pub checks: ValidationReport,
}

/// The full planning record. Steps chain exactly: each `triple_before`
/// equals the previous `triple_after`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub target: Vec<i64>,
    pub success: bool,
    pub final_gamma_error: f64,
    pub steps: Vec<TraceStep>,
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a given (step, attempt) pair, decorrelated from the base seed.
/// Recorded in the trace, so replaying a step never needs the schedule.
fn step_seed(base: u64, step: u32, attempt: u32) -> u64 {
    splitmix64(base ^ splitmix64(((step as u64) << 32) | attempt as u64))
}

fn make_step(
    lat: &Lattice,
    split: &EigenSplit,
    tol: f64,
    index: usize,
    move_params: MoveParams,
    before: &RealTriple,
    after: &RealTriple,
) -> TraceStep {
    let checks = validate_triple(lat, split, after, tol);
    TraceStep {
        index,
        move_params,
        triple_before: before.clone(),
        triple_after: after.clone(),
        certified: checks.pass,
        checks,
    }
}

fn require_valid(lat: &Lattice, split: &EigenSplit, t: &RealTriple, tol: f64) -> Result<()> {
    let report = validate_triple(lat, split, t, tol);
    if report.pass {
        Ok(())
    } else {
        Err(Error::InvalidTriple(report.failed_names().join(", ")))
    }
}

/// The component of `v` orthogonal to `w` with respect to the lattice form.
fn reject_from(lat: &Lattice, v: &[f64], w: &[f64]) -> Vec<f64> {
    let coeff = lat.bilinear(v, w) / lat.quad(w);
    numeric::add_scaled(v, w, -coeff)
}

fn positive_plane(m: &[Vec<f64>], tol: f64) -> bool {
    m[0][0] > tol && m[0][0] * m[1][1] - m[0][1] * m[1][0] > tol
}

/// Drive `t0` to a triple whose γ equals the target class, recording a
/// certified trace of at most six moves.
pub fn plan_path(
    lat: &Lattice,
    c: &Involution,
    split: &EigenSplit,
    t0: &RealTriple,
    target: &[i64],
    params: &PlanParams,
) -> Result<Trace> {
    if target.len() != lat.rank() {
        return Err(Error::DimensionMismatch { expected: lat.rank(), got: target.len() });
    }
    let (rht, fresh) = is_real_homological_type(lat, c);
    if !rht {
        return Err(Error::NotRealType);
    }
    debug_assert_eq!(fresh.minus_basis(), split.minus_basis());
    if !params.delta.is_finite() {
        return Err(Error::BadParameter("perturbation size must be finite"));
    }

    let l: Vec<f64> = target.iter().map(|&x| x as f64).collect();
    let l_minus = split
        .minus_coords(&l, params.tol)
        .ok_or(Error::TargetNotInMinus)?;
    let q_l = lat.quad(&l);
    if q_l <= params.tol {
        return Err(Error::TargetNotPositive);
    }
    require_valid(lat, split, t0, params.tol)?;

    let mut steps: Vec<TraceStep> = Vec::new();

    // Already there: record a normalization and an identity rotation.
    let normalized = normalize_triple(lat, t0)?;
    if numeric::sup_distance(&normalized.gamma, &l) <= params.terminal_tol {
        let t1 = perturb(lat, split, t0, 0.0, 0, params.tol)?;
        steps.push(make_step(
            lat,
            split,
            params.tol,
            0,
            MoveParams::Perturb { delta: 0.0, seed: 0 },
            t0,
            &t1,
        ));
        let t2 = rotate(lat, split, &t1, 0.0, params.tol)?;
        steps.push(make_step(
            lat,
            split,
            params.tol,
            1,
            MoveParams::Rotate { theta: 0.0 },
            &t1,
            &t2,
        ));
        return Ok(finish(target, &t2, &l, params, steps));
    }

    // Step 1: perturb until the triple is generic. Retries re-seed and
    // halve delta, so the loop succeeds whenever either a typical
    // perturbation of this size works or the current point is already fine.
    let mut first = None;
    for attempt in 0..=params.max_retries {
        let seed = step_seed(params.seed, 1, attempt);
        let delta = params.delta * (0.5f64).powi(attempt as i32);
        let cand = match perturb(lat, split, t0, delta, seed, params.tol) {
            Ok(cand) => cand,
            Err(Error::PositivityLost) => continue,
            Err(e) => return Err(e),
        };
        let genericity = is_generic(lat, &cand, params.coeff_bound, params.tol)?;
        if genericity.generic {
            first = Some((cand, delta, seed, genericity));
            break;
        }
    }
    let Some((t1, delta1, seed1, gen1)) = first else {
        return Err(Error::GenericityUnreachable { attempts: params.max_retries + 1 });
    };
    steps.push(make_step(
        lat,
        split,
        params.tol,
        0,
        MoveParams::Perturb { delta: delta1, seed: seed1 },
        t0,
        &t1,
    ));

    // Step 2: bridge vector spanning a positive plane with both ω₋ and l,
    // built inside the minus eigenspace.
    let minus_form: Vec<Vec<f64>> = split
        .minus_gram(lat)
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    let om1 = split
        .minus_coords(&t1.omega_minus, params.tol)
        .ok_or_else(|| Error::LemmaFailed("omega_minus drifted off the minus eigenspace".into()))?;
    let v_minus = lemma_vector(&minus_form, &om1, &l_minus, params.tol).map_err(|e| match e {
        Error::LemmaFailed(msg) => Error::LemmaFailed(msg),
        other => Error::LemmaFailed(other.to_string()),
    })?;
    let v = split.minus_to_ambient(&v_minus);

    // Step 3: retarget γ to the ω₋-orthogonal component of v, signed into
    // the cone component of the current γ.
    let p = reject_from(lat, &v, &t1.omega_minus);
    let sign = if lat.bilinear(&t1.gamma, &p) >= 0.0 { 1.0 } else { -1.0 };
    let gamma2 = numeric::scale(&p, sign);
    let t2 = retarget_gamma(lat, split, &t1, &gamma2, &gen1, params.tol)?;
    steps.push(make_step(
        lat,
        split,
        params.tol,
        1,
        MoveParams::Retarget { new_gamma: gamma2 },
        &t1,
        &t2,
    ));

    // Step 4: rotate ω₋ onto the positive ray of v.
    let u1 = numeric::scale(&t2.omega_minus, 1.0 / lat.quad(&t2.omega_minus).sqrt());
    let u2 = numeric::scale(&t2.gamma, 1.0 / lat.quad(&t2.gamma).sqrt());
    let theta = lat.bilinear(&v, &u2).atan2(lat.bilinear(&v, &u1));
    let t3 = rotate(lat, split, &t2, theta, params.tol)?;
    steps.push(make_step(
        lat,
        split,
        params.tol,
        2,
        MoveParams::Rotate { theta },
        &t2,
        &t3,
    ));

    // Step 5: perturb until generic with span(ω₋, l) positive definite.
    // The halving schedule matters here: when the bridge direction is
    // nearly isotropic, ω₋ now has unit square but huge coordinates, and
    // only a perturbation small relative to that scale keeps positivity.
    let mut second = None;
    for attempt in 0..=params.max_retries {
        let seed = step_seed(params.seed, 5, attempt);
        let delta = params.delta * (0.5f64).powi(attempt as i32);
        let cand = match perturb(lat, split, &t3, delta, seed, params.tol) {
            Ok(cand) => cand,
            Err(Error::PositivityLost) => continue,
            Err(e) => return Err(e),
        };
        let genericity = is_generic(lat, &cand, params.coeff_bound, params.tol)?;
        if !genericity.generic {
            continue;
        }
        let span = lat.gram_of_span(&[cand.omega_minus.clone(), l.clone()]);
        if positive_plane(&span, params.tol) {
            second = Some((cand, delta, seed, genericity));
            break;
        }
    }
    let Some((t4, delta5, seed5, gen5)) = second else {
        return Err(Error::GenericityUnreachable { attempts: params.max_retries + 1 });
    };
    steps.push(make_step(
        lat,
        split,
        params.tol,
        3,
        MoveParams::Perturb { delta: delta5, seed: seed5 },
        &t3,
        &t4,
    ));

    // Step 6a: retarget γ to the ω₋-orthogonal component of l, rescaled so
    // q(γ) = q(l), signed into the current cone component.
    let p = reject_from(lat, &l, &t4.omega_minus);
    let q_p = lat.quad(&p);
    if q_p <= params.tol {
        // unreachable after the positive-plane check above; kept as a guard
        return Err(Error::LemmaFailed("target collapses onto omega_minus".into()));
    }
    let sign = if lat.bilinear(&t4.gamma, &p) >= 0.0 { 1.0 } else { -1.0 };
    let gamma5 = numeric::scale(&p, sign * (q_l / q_p).sqrt());
    let t5 = retarget_gamma(lat, split, &t4, &gamma5, &gen5, params.tol)?;
    steps.push(make_step(
        lat,
        split,
        params.tol,
        4,
        MoveParams::Retarget { new_gamma: gamma5 },
        &t4,
        &t5,
    ));

    // Step 6b: rotate γ onto l. Writing l = a·u1 + b·u2 in the
    // q-orthonormal frame of (ω₋, γ), the angle is atan2(-a, b); it lands
    // exactly because q(γ) was matched to q(l).
    let u1 = numeric::scale(&t5.omega_minus, 1.0 / lat.quad(&t5.omega_minus).sqrt());
    let u2 = numeric::scale(&t5.gamma, 1.0 / lat.quad(&t5.gamma).sqrt());
    let theta2 = (-lat.bilinear(&l, &u1)).atan2(lat.bilinear(&l, &u2));
    let t6 = rotate(lat, split, &t5, theta2, params.tol)?;
    steps.push(make_step(
        lat,
        split,
        params.tol,
        5,
        MoveParams::Rotate { theta: theta2 },
        &t5,
        &t6,
    ));

    Ok(finish(target, &t6, &l, params, steps))
}

fn finish(
    target: &[i64],
    last: &RealTriple,
    l: &[f64],
    params: &PlanParams,
    steps: Vec<TraceStep>,
) -> Trace {
    let final_gamma_error = numeric::sup_distance(&last.gamma, l);
    let success =
        final_gamma_error <= params.terminal_tol && steps.iter().all(|s| s.certified);
    Trace { target: target.to_vec(), success, final_gamma_error, steps }
}

/// Knobs for [`verify_trace`]; `coeff_bound` feeds the genericity re-check
/// of retarget steps.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub tol: f64,
    pub terminal_tol: f64,
    pub coeff_bound: i64,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { tol: 1e-9, terminal_tol: 1e-6, coeff_bound: 5 }
    }
}

/// Per-step verdict: `deviation` is the sup distance between the recorded
/// result and an independent replay of the move.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyStepReport {
    pub index: usize,
    pub pass: bool,
    pub deviation: f64,
    pub detail: Option<String>,
}

/// Whole-trace verdict. `notes` holds failures not tied to a single step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub steps: Vec<VerifyStepReport>,
    pub notes: Vec<String>,
}

fn triple_distance(a: &RealTriple, b: &RealTriple) -> f64 {
    numeric::sup_distance(&a.omega_plus, &b.omega_plus)
        .max(numeric::sup_distance(&a.omega_minus, &b.omega_minus))
        .max(numeric::sup_distance(&a.gamma, &b.gamma))
}

/// Re-check a trace from scratch: the involution must be a real homological
/// type, steps must chain, each recorded move must replay to the recorded
/// result within `tol`, every step must be certified with passing checks,
/// and the final γ must hit the target within `terminal_tol`.
pub fn verify_trace(
    lat: &Lattice,
    c: &Involution,
    split: &EigenSplit,
    trace: &Trace,
    params: &VerifyParams,
) -> VerifyReport {
    let mut notes: Vec<String> = Vec::new();
    let (rht, _) = is_real_homological_type(lat, c);
    if !rht {
        notes.push("involution is not a real homological type".into());
    }
    if !trace.success {
        notes.push("trace does not declare success".into());
    }

    let l: Vec<f64> = trace.target.iter().map(|&x| x as f64).collect();
    let mut steps = Vec::with_capacity(trace.steps.len());
    for (i, step) in trace.steps.iter().enumerate() {
        let mut failures: Vec<String> = Vec::new();
        if step.index != i {
            failures.push(format!("index {} out of order", step.index));
        }
        if i > 0 {
            let gap = triple_distance(&step.triple_before, &trace.steps[i - 1].triple_after);
            if gap > params.tol {
                failures.push(format!("does not chain from the previous step (gap {gap:e})"));
            }
        }
        let deviation = match crate::moves::apply_move(
            lat,
            split,
            &step.triple_before,
            &step.move_params,
            params.coeff_bound,
            params.tol,
        ) {
            Ok(replayed) => {
                let d = triple_distance(&replayed, &step.triple_after);
                if d > params.tol {
                    failures.push(format!("replay deviates from the recorded result by {d:e}"));
                }
                d
            }
            Err(e) => {
                failures.push(format!("move does not replay: {e}"));
                f64::INFINITY
            }
        };
        if !step.certified {
            failures.push("step is not certified".into());
        }
        let checks = validate_triple(lat, split, &step.triple_after, params.tol);
        if !checks.pass {
            failures.push(format!(
                "result fails validation: {}",
                checks.failed_names().join(", ")
            ));
        }
        steps.push(VerifyStepReport {
            index: step.index,
            pass: failures.is_empty(),
            deviation,
            detail: if failures.is_empty() { None } else { Some(failures.join("; ")) },
        });
    }

    if let Some(last) = trace.steps.last() {
        let err = numeric::sup_distance(&last.triple_after.gamma, &l);
        if (err - trace.final_gamma_error).abs() > params.tol {
            notes.push(format!(
                "recorded final_gamma_error {:e} disagrees with the actual distance {:e}",
                trace.final_gamma_error, err
            ));
        }
        if err > params.terminal_tol {
            notes.push(format!("final gamma misses the target by {err:e}"));
        }
    } else if trace.final_gamma_error > params.terminal_tol {
        notes.push("empty trace does not reach the target".into());
    }

    let pass = notes.is_empty() && steps.iter().all(|s| s.pass);
    VerifyReport { pass, steps, notes }
}
