//! Cross-cutting algebraic invariants, checked against independent oracles:
//! signatures are congruence invariants (random unimodular changes of basis),
//! the exact signature agrees with a floating-point Jacobi eigenvalue count,
//! eigenlattice splittings obey the index/signature/orthogonality laws for
//! every involution found by enumeration, and the JSON wire formats
//! round-trip bit for bit.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latplan_core::builtins;
use latplan_core::{classify, enumerate_involutions, Involution, Lattice, MoveParams, RealTriple};

fn gram(lat: &Lattice) -> Vec<Vec<i64>> {
    lat.gram().to_vec()
}

/// Random unimodular matrix: a seeded product of row shears, swaps, and
/// sign flips. Determinant ±1 by construction.
fn random_unimodular(n: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut t: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        match rng.gen_range(0..3) {
            0 => {
                let c: i64 = if rng.gen() { 1 } else { -1 };
                for k in 0..n {
                    t[i][k] += c * t[j][k];
                }
            }
            1 => t.swap(i, j),
            _ => {
                for x in t[i].iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    t
}

/// T^t G T computed in i128 and checked back into i64.
fn conjugate(g: &[Vec<i64>], t: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut gt = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i128;
            for k in 0..n {
                s += g[i][k] as i128 * t[k][j] as i128;
            }
            gt[i][j] = s;
        }
    }
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0i128;
            for k in 0..n {
                s += t[k][i] as i128 * gt[k][j];
            }
            out[i][j] = i64::try_from(s).expect("conjugated entry fits i64");
        }
    }
    out
}

#[test]
fn signature_is_a_congruence_invariant() {
    let lattices = [
        ("U", builtins::hyperbolic_plane()),
        ("E8(-1)", builtins::e8_negative()),
        (
            "diag(1,1,1,-1)",
            Lattice::new(vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, -1],
            ])
            .unwrap(),
        ),
    ];
    for (name, lat) in &lattices {
        let expected = lat.signature();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1A6);
        for _ in 0..100 {
            let t = random_unimodular(lat.rank(), 12, &mut rng);
            let conj = Lattice::new(conjugate(&gram(lat), &t)).unwrap();
            assert_eq!(conj.signature(), expected, "lattice {name}");
        }
    }
    // one deep-rank spot check
    let k3 = builtins::k3();
    let mut rng = ChaCha8Rng::seed_from_u64(0x33);
    for _ in 0..5 {
        let t = random_unimodular(22, 15, &mut rng);
        let conj = Lattice::new(conjugate(&gram(&k3), &t)).unwrap();
        assert_eq!(conj.signature(), k3.signature());
    }
}

/// Jacobi eigenvalue iteration for symmetric matrices — an oracle with
/// nothing in common with the exact congruence diagonalization.
fn jacobi_eigenvalues(m: &[Vec<i64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as f64).collect())
        .collect();
    for _ in 0..100 {
        let mut p = 0;
        let mut q = 1;
        let mut biggest = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                if a[i][j].abs() > biggest {
                    biggest = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if n < 2 || biggest < 1e-12 {
            break;
        }
        let theta = 0.5 * (2.0 * a[p][q]).atan2(a[p][p] - a[q][q]);
        let (s, c) = theta.sin_cos();
        for k in 0..n {
            let akp = a[k][p];
            let akq = a[k][q];
            a[k][p] = c * akp + s * akq;
            a[k][q] = -s * akp + c * akq;
        }
        for k in 0..n {
            let apk = a[p][k];
            let aqk = a[q][k];
            a[p][k] = c * apk + s * aqk;
            a[q][k] = -s * apk + c * aqk;
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[test]
fn exact_signature_matches_jacobi_eigenvalue_counts() {
    let mut cases = vec![
        gram(&builtins::hyperbolic_plane()),
        gram(&builtins::e8_negative()),
        gram(&builtins::k3()),
        vec![vec![2, -3, 0], vec![-3, 2, 1], vec![0, 1, -5]],
        vec![vec![0, 0], vec![0, 0]],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6);
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = rng.gen_range(-5..=5);
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        cases.push(m);
    }
    for m in cases {
        let sig = Lattice::new(m.clone()).unwrap().signature();
        let eig = jacobi_eigenvalues(&m);
        let pos = eig.iter().filter(|&&x| x > 1e-6).count();
        let neg = eig.iter().filter(|&&x| x < -1e-6).count();
        let null = eig.len() - pos - neg;
        assert_eq!(
            (sig.pos, sig.neg, sig.null),
            (pos, neg, null),
            "gram {m:?}, eigenvalues {eig:?}"
        );
    }
}

#[test]
fn orthogonal_complements_are_orthogonal_and_complementary() {
    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut tested = 0;
    while tested < 50 {
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
        if lat.quad(&v).abs() < 0.1 {
            continue; // needs a nondegenerate restriction
        }
        let comp = lat.orthogonal_complement(&[v.clone()], 1e-9).unwrap();
        assert_eq!(comp.dim(), 3);
        for u in comp.vectors() {
            assert!(lat.bilinear(u, &v).abs() <= 1e-9);
        }
        tested += 1;
    }
}

#[test]
fn eigen_splits_obey_index_signature_and_orthogonality_laws() {
    let lat = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    let sig = lat.signature();
    let involutions = enumerate_involutions(&lat, 1).unwrap();
    assert!(!involutions.is_empty());
    let mut rht_count = 0;
    for c in &involutions {
        let report = classify(&lat, c);
        let split = c.eigenlattices(&lat);
        // signatures add up to the ambient signature
        assert_eq!(report.plus_sig.pos + report.minus_sig.pos, sig.pos);
        assert_eq!(report.plus_sig.neg + report.minus_sig.neg, sig.neg);
        assert_eq!(report.plus_sig.null + report.minus_sig.null, sig.null);
        // rank bookkeeping
        assert_eq!(split.plus_basis().len() + split.minus_basis().len(), lat.rank());
        // eigenlattices pair to zero, exactly
        for p in split.plus_basis() {
            for m in split.minus_basis() {
                assert_eq!(lat.bilinear_int(p, m), 0);
            }
        }
        // index_log2 comes from a determinant that is a power of two; here
        // just pin the observed range for this lattice
        assert!(report.index_log2 <= 4);
        if report.is_rht {
            rht_count += 1;
            assert_eq!(report.plus_sig.pos, 1);
            assert_eq!(report.minus_sig.pos, 2);
        }
        // saturation spot check: any integer vector in the box fixed by c
        // must be an integer combination of the plus basis
        for w in lat.integer_vectors_in_box(1).unwrap() {
            if c.apply_int(&w) != w {
                continue;
            }
            let wf: Vec<f64> = w.iter().map(|&x| x as f64).collect();
            assert!(
                split.membership_residual(true, &wf) <= 1e-9,
                "fixed vector {w:?} outside the plus span"
            );
            let coords = integer_coords(split.plus_basis(), &w);
            assert!(coords.is_some(), "fixed vector {w:?} not an integer combination");
        }
    }
    assert!(rht_count > 0, "the reflection family should contain real types");
}

/// Solve `w = sum coeffs * basis` over the integers by forward elimination
/// on the echelon basis; None when a division fails.
fn integer_coords(basis: &[Vec<i64>], w: &[i64]) -> Option<Vec<i64>> {
    let mut rest = w.to_vec();
    let mut coeffs = Vec::with_capacity(basis.len());
    for b in basis {
        let pivot = b.iter().position(|&x| x != 0)?;
        if rest[pivot] % b[pivot] != 0 {
            return None;
        }
        let c = rest[pivot] / b[pivot];
        for (r, &x) in rest.iter_mut().zip(b) {
            *r -= c * x;
        }
        coeffs.push(c);
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

#[test]
fn enumeration_counts_match_a_brute_force_oracle() {
    // oracle: test every matrix with entries in the box
    fn brute_force(lat: &Lattice, bound: i64) -> usize {
        let n = lat.rank();
        let mut count = 0;
        let cells = n * n;
        let side = (2 * bound + 1) as u64;
        let total = side.pow(cells as u32);
        for code in 0..total {
            let mut c = code;
            let mut m = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = (c % side) as i64 - bound;
                    c /= side;
                }
            }
            if Involution::new(lat, m).is_ok() {
                count += 1;
            }
        }
        count
    }

    let u = builtins::hyperbolic_plane();
    let found = enumerate_involutions(&u, 1).unwrap();
    assert_eq!(found.len(), brute_force(&u, 1));
    assert_eq!(found.len(), 4);

    let diag11 = Lattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
    let found = enumerate_involutions(&diag11, 1).unwrap();
    assert_eq!(found.len(), brute_force(&diag11, 1));
    assert_eq!(found.len(), 6);

    let single = Lattice::new(vec![vec![2]]).unwrap();
    let found = enumerate_involutions(&single, 1).unwrap();
    assert_eq!(found.len(), brute_force(&single, 1));
    assert_eq!(found.len(), 2);
}

proptest! {
    #[test]
    fn lattice_json_round_trips(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=5);
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let x = rng.gen_range(-9..=9);
                m[i][j] = x;
                m[j][i] = x;
            }
        }
        let lat = Lattice::new(m).unwrap();
        let s = serde_json::to_string(&lat).unwrap();
        let back: Lattice = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, lat);
    }

    #[test]
    fn triple_json_round_trips(
        op in prop::collection::vec(-1e6f64..1e6, 4),
        om in prop::collection::vec(-1e6f64..1e6, 4),
        g in prop::collection::vec(-1e6f64..1e6, 4),
    ) {
        let t = RealTriple { omega_plus: op, omega_minus: om, gamma: g };
        let s = serde_json::to_string(&t).unwrap();
        let back: RealTriple = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn move_params_json_round_trips(theta in -10.0f64..10.0, delta in 0.0f64..1.0, seed: u64) {
        for m in [
            MoveParams::Rotate { theta },
            MoveParams::Perturb { delta, seed },
            MoveParams::Retarget { new_gamma: vec![theta, delta] },
        ] {
            let s = serde_json::to_string(&m).unwrap();
            let back: MoveParams = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
