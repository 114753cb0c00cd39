//! Shared fixtures for the criterion benches: small lattices with a
//! reflection-type involution and a base period triple, sized so that each
//! bench exercises one layer of the library (exact integer computations,
//! the genericity box scan, or the full planner).

use latplan_core::{builtins, EigenSplit, Involution, Lattice, RealTriple};

/// A lattice together with an involution, its eigenlattice splitting, and a
/// valid starting triple for the planner.
pub struct Scene {
    pub lattice: Lattice,
    pub involution: Involution,
    pub split: EigenSplit,
    pub base: RealTriple,
}

/// diag(1,1,1,-1) with the reflection fixing the first axis.
pub fn minkowski() -> Scene {
    let lattice = Lattice::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, -1],
    ])
    .unwrap();
    let involution = Involution::new(
        &lattice,
        vec![
            vec![1, 0, 0, 0],
            vec![0, -1, 0, 0],
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
        ],
    )
    .unwrap();
    let split = involution.eigenlattices(&lattice);
    let base = RealTriple {
        omega_plus: vec![1.0, 0.0, 0.0, 0.0],
        omega_minus: vec![0.0, 1.0, 0.0, 0.0],
        gamma: vec![0.0, 0.0, 1.0, 0.0],
    };
    Scene { lattice, involution, split, base }
}

/// diag(1) ⊕ U ⊕ U ⊕ diag(-1) with the reflection fixing the first axis;
/// the minus eigenlattice is U ⊕ U ⊕ diag(-1), signature (2, 3).
pub fn rank6() -> Scene {
    let lattice = Lattice::new(vec![
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
    let involution = Involution::new(&lattice, refl).unwrap();
    let split = involution.eigenlattices(&lattice);
    let s = 0.5f64.sqrt();
    let base = RealTriple {
        omega_plus: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        omega_minus: vec![0.0, s, s, 0.0, 0.0, 0.0],
        gamma: vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0],
    };
    Scene { lattice, involution, split, base }
}

/// The K3 lattice U³ ⊕ E8(-1)², rank 22.
pub fn k3() -> Lattice {
    builtins::named_lattice("K3").unwrap().unwrap()
}

/// The involution of the K3 lattice swapping the first two U blocks and the
/// two E8(-1) blocks, identity on the third U block.
pub fn k3_block_swap() -> (Lattice, Involution) {
    let lattice = k3();
    let n = lattice.rank();
    let mut m = vec![vec![0i64; n]; n];
    // U1 <-> U2 (rows 0..2 and 2..4), U3 fixed (4..6), E8a <-> E8b (6..14, 14..22).
    for i in 0..2 {
        m[i][i + 2] = 1;
        m[i + 2][i] = 1;
    }
    for i in 4..6 {
        m[i][i] = 1;
    }
    for i in 6..14 {
        m[i][i + 8] = 1;
        m[i + 8][i] = 1;
    }
    let involution = Involution::new(&lattice, m).unwrap();
    (lattice, involution)
}

/// A target class in the minus eigenlattice with positive square.
pub fn sample_target(scene: &Scene) -> Vec<i64> {
    let rank = scene.lattice.rank();
    let mut v = vec![0i64; rank];
    // 2·(first minus basis vector) + (second): positive square in both scenes.
    for (x, b) in v.iter_mut().zip(&scene.split.minus_basis()[0]) {
        *x += 2 * b;
    }
    for (x, b) in v.iter_mut().zip(&scene.split.minus_basis()[1]) {
        *x += b;
    }
    debug_assert!(scene.lattice.quad_int(&v) > 0);
    v
}
