//! Acceptance gate. Each test prints one summary line
//! (`acceptance N (<name>): PASS|FAIL`) and fails loudly with the
//! collected violations if its criterion is not met.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latplan_core::moves::{lemma_vector, perturb, retarget_gamma, rotate};
use latplan_core::{
    builtins, classify, enumerate_involutions, is_generic, plan_path, validate_triple,
    verify_trace, EigenSplit, Involution, Lattice, PlanParams, RealTriple, VerifyParams,
};

const TOL: f64 = 1e-9;

fn conclude(n: u32, name: &str, started: Instant, failures: Vec<String>) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {n} ({name}): {verdict} ({} ms)", started.elapsed().as_millis());
    assert!(
        failures.is_empty(),
        "acceptance {n} ({name}): {} violation(s):\n  {}",
        failures.len(),
        failures.join("\n  ")
    );
}

#[test]
fn acceptance_1_signature_correctness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let k3 = builtins::k3().signature();
    if (k3.pos, k3.neg, k3.null) != (3, 19, 0) {
        failures.push(format!("K3 signature was {k3:?}, expected (3, 19, 0)"));
    }
    let e8 = builtins::e8_negative().signature();
    if (e8.pos, e8.neg, e8.null) != (0, 8, 0) {
        failures.push(format!("E8(-1) signature was {e8:?}, expected (0, 8, 0)"));
    }
    if start.elapsed() >= Duration::from_secs(1) {
        failures.push(format!("took {:?}, budget 1 s", start.elapsed()));
    }
    conclude(1, "signature correctness", start, failures);
}

/// Test every candidate matrix with entries in [-1, 1].
fn brute_force_involutions(lat: &Lattice) -> usize {
    let n = lat.rank();
    let cells = (n * n) as u32;
    let mut count = 0;
    for code in 0..3u64.pow(cells) {
        let mut c = code;
        let mut m = vec![vec![0i64; n]; n];
        for row in m.iter_mut() {
            for x in row.iter_mut() {
                *x = (c % 3) as i64 - 1;
                c /= 3;
            }
        }
        if Involution::new(lat, m).is_ok() {
            count += 1;
        }
    }
    count
}

/// Integer determinant by fraction-free (Bareiss) elimination.
fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant fits i64")
}

#[test]
fn acceptance_2_enumeration_matches_oracle() {
    let start = Instant::now();
    let mut failures = Vec::new();

    for (name, lat, expected) in [
        ("[[2]]", Lattice::new(vec![vec![2]]).unwrap(), 2usize),
        ("U", builtins::hyperbolic_plane(), 4),
        ("diag(1,1)", Lattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap(), 6),
    ] {
        let found = enumerate_involutions(&lat, 1).unwrap().len();
        let oracle = brute_force_involutions(&lat);
        if found != oracle || found != expected {
            failures.push(format!(
                "{name}: enumerated {found}, oracle {oracle}, expected {expected}"
            ));
        }
    }

    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    for c in enumerate_involutions(&lat, 1).unwrap() {
        let report = classify(&lat, &c);
        let split = c.eigenlattices(&lat);
        let mut stacked: Vec<Vec<i64>> = split.plus_basis().to_vec();
        stacked.extend(split.minus_basis().iter().cloned());
        let det = int_det(&stacked).unsigned_abs();
        if !det.is_power_of_two() || det.trailing_zeros() != report.index_log2 {
            failures.push(format!(
                "matrix {:?}: index {det} is not 2^{}",
                c.matrix(),
                report.index_log2
            ));
        }
        let sums = (
            report.plus_sig.pos + report.minus_sig.pos,
            report.plus_sig.neg + report.minus_sig.neg,
            report.plus_sig.null + report.minus_sig.null,
        );
        if sums != (3, 1, 0) {
            failures.push(format!("matrix {:?}: signatures sum to {sums:?}", c.matrix()));
        }
    }

    if start.elapsed() >= Duration::from_secs(30) {
        failures.push(format!("took {:?}, budget 30 s", start.elapsed()));
    }
    conclude(2, "enumeration vs oracle", start, failures);
}

#[test]
fn acceptance_3_real_type_law() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    for c in enumerate_involutions(&lat, 1).unwrap() {
        let report = classify(&lat, &c);
        if report.is_rht != (report.plus_sig.pos == 1) {
            failures.push(format!(
                "matrix {:?}: is_rht {} but plus positive index {}",
                c.matrix(),
                report.is_rht,
                report.plus_sig.pos
            ));
        }
        if report.is_rht && report.minus_sig.pos != 2 {
            failures.push(format!(
                "matrix {:?}: real type with minus positive index {}",
                c.matrix(),
                report.minus_sig.pos
            ));
        }
    }
    conclude(3, "real type law", start, failures);
}

#[test]
fn acceptance_4_lemma_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC4);

    fn bil(form: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
        form.iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().map(|(j, &g)| u[i] * g * v[j]).sum::<f64>()
            })
            .sum()
    }

    let mut done = 0;
    while done < 1000 {
        // a form of signature (2, k), k ≤ 4
        let k = rng.gen_range(0..=4usize);
        let n = 2 + k;
        let mut form = vec![vec![0.0f64; n]; n];
        form[0][0] = 1.0;
        form[1][1] = 1.0;
        for i in 2..n {
            form[i][i] = -(rng.gen_range(1..=3) as f64);
        }
        let mut sample = || -> Option<Vec<f64>> {
            for _ in 0..64 {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
                if bil(&form, &v, &v) > 0.1 {
                    return Some(v);
                }
            }
            None
        };
        let (Some(v1), Some(v2)) = (sample(), sample()) else {
            continue;
        };
        done += 1;
        match lemma_vector(&form, &v1, &v2, TOL) {
            Err(e) => failures.push(format!("instance {done}: {e}")),
            Ok(v) => {
                for (tag, w) in [("v1", &v1), ("v2", &v2)] {
                    let a = bil(&form, &v, &v);
                    let b = bil(&form, &v, w);
                    let c = bil(&form, w, w);
                    if !(a > 1e-9 && a * c - b * b > 1e-9) {
                        failures.push(format!(
                            "instance {done}: span with {tag} has minors {a:.3e}, {:.3e}",
                            a * c - b * b
                        ));
                    }
                }
            }
        }
    }

    if start.elapsed() >= Duration::from_secs(5) {
        failures.push(format!("took {:?}, budget 5 s", start.elapsed()));
    }
    conclude(4, "positive-plane lemma suite", start, failures);
}

fn minkowski() -> (Lattice, Involution, EigenSplit, RealTriple) {
    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    let c = Involution::new(
        &lat,
        vec![
            vec![1, 0, 0, 0],
            vec![0, -1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
        ],
    )
    .unwrap();
    let split = c.eigenlattices(&lat);
    let t = RealTriple {
        omega_plus: vec![1.0, 0.0, 0.0, 0.0],
        omega_minus: vec![0.0, 1.0, 0.0, 0.0],
        gamma: vec![0.0, 0.0, 1.0, 0.0],
    };
    (lat, c, split, t)
}

/// Ambient diag(1) ⊕ U ⊕ U ⊕ diag(-1); the minus eigenlattice of the
/// reflection carries U ⊕ U ⊕ diag(-1).
fn rank6() -> (Lattice, Involution, EigenSplit, RealTriple) {
    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0, 0],
        vec![0, 1, 0, 0, 0, 0],
        vec![0, 0, 0, 0, 1, 0],
        vec![0, 0, 0, 1, 0, 0],
        vec![0, 0, 0, 0, 0, -1],
    ])
    .unwrap();
    let mut refl = vec![vec![0i64; 6]; 6];
    refl[0][0] = 1;
    for i in 1..6 {
        refl[i][i] = -1;
    }
    let c = Involution::new(&lat, refl).unwrap();
    let split = c.eigenlattices(&lat);
    let s = 0.5f64.sqrt();
    let t = RealTriple {
        omega_plus: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        omega_minus: vec![0.0, s, s, 0.0, 0.0, 0.0],
        gamma: vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0],
    };
    (lat, c, split, t)
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// A seeded random valid triple: a perturbation of the base; re-seeds until
/// the genericity proxy also passes so retargets can be certified.
fn random_generic_triple(
    lat: &Lattice,
    split: &EigenSplit,
    base: &RealTriple,
    seed: u64,
) -> (RealTriple, latplan_core::GenericityReport) {
    for bump in 0..10u64 {
        let t = perturb(lat, split, base, 1e-3, seed + 1_000_003 * bump, TOL)
            .expect("small perturbations keep positivity");
        let gen = is_generic(lat, &t, 5, TOL).unwrap();
        if gen.generic {
            return (t, gen);
        }
    }
    panic!("no generic perturbation in 10 reseeds of seed {seed}");
}

#[test]
fn acceptance_5_move_invariants() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (tag, (lat, _c, split, base)) in
        [("diag(1,1,1,-1)", minkowski()), ("U+U+diag(-1) minus part", rank6())]
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC5);
        for i in 0..200u64 {
            let (t, gen) = random_generic_triple(&lat, &split, &base, i);
            if !validate_triple(&lat, &split, &t, TOL).pass {
                failures.push(format!("{tag} #{i}: perturbed triple failed validation"));
                continue;
            }
            let th1: f64 = rng.gen_range(-3.0..3.0);
            let th2: f64 = rng.gen_range(-3.0..3.0);
            let a = rotate(&lat, &split, &t, th1, TOL).unwrap();
            let b = rotate(&lat, &split, &a, th2, TOL).unwrap();
            let direct = rotate(&lat, &split, &t, th1 + th2, TOL).unwrap();
            let gap = sup_dist(&b.omega_minus, &direct.omega_minus)
                .max(sup_dist(&b.gamma, &direct.gamma));
            if gap > 1e-12 {
                failures.push(format!("{tag} #{i}: rotation group law off by {gap:.3e}"));
            }
            if (lat.quad(&a.omega_minus) - lat.quad(&t.omega_minus)).abs() > 1e-12
                || (lat.quad(&a.gamma) - lat.quad(&t.gamma)).abs() > 1e-12
                || lat.bilinear(&a.omega_minus, &a.gamma).abs() > 1e-12
            {
                failures.push(format!("{tag} #{i}: rotation broke a conserved quantity"));
            }
            // retarget: a slightly rotated γ, re-orthogonalized against ω₋
            let coeff = lat.bilinear(&a.gamma, &t.omega_minus) / lat.quad(&t.omega_minus);
            let candidate: Vec<f64> = a
                .gamma
                .iter()
                .zip(&t.omega_minus)
                .map(|(x, w)| x - coeff * w)
                .collect();
            if lat.quad(&candidate) > TOL
                && lat.bilinear(&candidate, &t.gamma) > TOL
            {
                match retarget_gamma(&lat, &split, &t, &candidate, &gen, TOL) {
                    Err(e) => failures.push(format!("{tag} #{i}: retarget failed: {e}")),
                    Ok(r) => {
                        if !validate_triple(&lat, &split, &r, TOL).pass {
                            failures.push(format!("{tag} #{i}: retarget output invalid"));
                        }
                    }
                }
            }
        }
    }
    conclude(5, "move invariants", start, failures);
}

fn sample_target(
    rng: &mut ChaCha8Rng,
    lat: &Lattice,
    split: &EigenSplit,
    bound: i64,
) -> Vec<i64> {
    loop {
        let coords: Vec<i64> = (0..split.minus_basis().len())
            .map(|_| rng.gen_range(-bound..=bound))
            .collect();
        let mut v = vec![0i64; lat.rank()];
        for (c, b) in coords.iter().zip(split.minus_basis()) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        if lat.quad_int(&v) > 0 {
            return v;
        }
    }
}

#[test]
fn acceptance_6_planner_end_to_end() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let verify_params = VerifyParams { tol: TOL, terminal_tol: 1e-6, coeff_bound: 5 };
    for (tag, (lat, c, split, base)) in
        [("diag(1,1,1,-1)", minkowski()), ("U+U+diag(-1) minus part", rank6())]
    {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACC6);
        for i in 0..500u64 {
            let t0 = perturb(&lat, &split, &base, 1e-3, i, TOL).unwrap();
            let target = sample_target(&mut rng, &lat, &split, 3);
            let params = PlanParams {
                tol: TOL,
                terminal_tol: 1e-6,
                delta: 1e-3,
                coeff_bound: 5,
                seed: i,
                max_retries: 32,
            };
            let trace = match plan_path(&lat, &c, &split, &t0, &target, &params) {
                Ok(tr) => tr,
                Err(e) => {
                    failures.push(format!("{tag} #{i} target {target:?}: {e}"));
                    continue;
                }
            };
            let lf: Vec<f64> = target.iter().map(|&x| x as f64).collect();
            let final_gamma = trace
                .steps
                .last()
                .map(|s| s.triple_after.gamma.clone())
                .unwrap_or_else(|| lf.clone());
            if !trace.success
                || trace.steps.len() > 6
                || sup_dist(&final_gamma, &lf) > 1e-6
                || (lat.quad(&final_gamma) - lat.quad(&lf)).abs() > 1e-6
            {
                failures.push(format!(
                    "{tag} #{i} target {target:?}: success={} steps={} err={:.3e}",
                    trace.success,
                    trace.steps.len(),
                    sup_dist(&final_gamma, &lf)
                ));
                continue;
            }
            let report = verify_trace(&lat, &c, &split, &trace, &verify_params);
            if !report.pass {
                failures.push(format!(
                    "{tag} #{i} target {target:?}: trace did not verify: {:?}",
                    report.notes
                ));
            }
        }
    }
    if start.elapsed() >= Duration::from_secs(60) {
        failures.push(format!("took {:?}, budget 60 s", start.elapsed()));
    }
    conclude(6, "planner end-to-end", start, failures);
}

#[test]
fn acceptance_7_determinism() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("inv.json"),
        r#"{"matrix":[[1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]}"#,
    )
    .unwrap();
    fs::write(
        tmp.path().join("t.json"),
        r#"{"omega_plus":[1,0,0,0],"omega_minus":[0,1,0,0],"gamma":[0,0,1,0]}"#,
    )
    .unwrap();
    let run = |extra: &[&str]| -> (i32, Vec<u8>) {
        let out = Command::new(env!("CARGO_BIN_EXE_latplan"))
            .current_dir(tmp.path())
            .args([
                "plan",
                "diag(1,1,1,-1)",
                "inv.json",
                "t.json",
                "--target",
                "[0,2,1,0]",
                "--seed",
                "12345",
            ])
            .args(extra)
            .output()
            .expect("binary runs");
        (out.status.code().unwrap(), out.stdout)
    };
    let (c1, first) = run(&[]);
    for round in 0..2 {
        let (c, bytes) = run(&[]);
        if c != 0 || c1 != 0 {
            failures.push(format!("round {round}: exit codes {c1}, {c}"));
        }
        if bytes != first {
            failures.push(format!("round {round}: byte-level difference in traces"));
        }
    }
    let (b1, batch_first) = run(&["--batch", "2"]);
    let (b2, batch_second) = run(&["--batch", "2"]);
    if b1 != 0 || b2 != 0 || batch_first != batch_second {
        failures.push("batch runs are not reproducible".into());
    }
    conclude(7, "determinism", start, failures);
}
