//! Named lattices addressable from the CLI and tests.

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Gram matrix of the hyperbolic plane U.
pub fn hyperbolic_plane() -> Lattice {
    Lattice::new(vec![vec![0, 1], vec![1, 0]]).expect("fixed gram")
}

/// Negative definite E8: the Cartan matrix of the E8 diagram, negated.
///
/// Nodes 0..6 form a chain and node 7 hangs off node 4, giving arms of
/// lengths 1, 2, 4 at the trivalent node. Determinant 1, signature (0, 8, 0);
/// both are pinned by tests.
pub fn e8_negative() -> Lattice {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut gram = vec![vec![0i64; 8]; 8];
    for i in 0..8 {
        gram[i][i] = -2;
    }
    for (a, b) in edges {
        gram[a][b] = 1;
        gram[b][a] = 1;
    }
    Lattice::new(gram).expect("fixed gram")
}

/// The K3 lattice `U ⊕ U ⊕ U ⊕ E8(-1) ⊕ E8(-1)`, rank 22.
pub fn k3() -> Lattice {
    direct_sum(&[
        hyperbolic_plane(),
        hyperbolic_plane(),
        hyperbolic_plane(),
        e8_negative(),
        e8_negative(),
    ])
}

/// Block-diagonal sum of lattices.
pub fn direct_sum(parts: &[Lattice]) -> Lattice {
    let rank: usize = parts.iter().map(|l| l.rank()).sum();
    let mut gram = vec![vec![0i64; rank]; rank];
    let mut offset = 0;
    for part in parts {
        for (i, row) in part.gram().iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                gram[offset + i][offset + j] = x;
            }
        }
        offset += part.rank();
    }
    Lattice::new(gram).expect("blocks of valid grams")
}

/// Resolve a lattice name: `"U"`, `"E8(-1)"`, `"K3"`, or `"diag(a,b,...)"`.
/// `None` means the name is not recognized at all (e.g. it is a file path).
pub fn named_lattice(name: &str) -> Option<Result<Lattice>> {
    match name {
        "U" => Some(Ok(hyperbolic_plane())),
        "E8(-1)" => Some(Ok(e8_negative())),
        "K3" => Some(Ok(k3())),
        _ => {
            let body = name.strip_prefix("diag(")?.strip_suffix(')')?;
            Some(parse_diag(name, body))
        }
    }
}

fn parse_diag(name: &str, body: &str) -> Result<Lattice> {
    let entries: Vec<i64> = body
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::BadLatticeName(name.to_string()))?;
    let n = entries.len();
    let mut gram = vec![vec![0i64; n]; n];
    for (i, &d) in entries.iter().enumerate() {
        gram[i][i] = d;
    }
    Lattice::new(gram)
}
