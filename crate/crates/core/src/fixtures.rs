//! Standard small triangulations.

use alloc::vec::Vec;

use crate::simplicial::{SimplicialComplex, Vertex};

/// Boundary of the `(n+1)`-simplex on vertices `0..=n+1`: an `n`-sphere.
pub fn simplex_boundary(n: usize) -> SimplicialComplex {
    let top = (n + 1) as Vertex;
    let facets = (0..=top)
        .map(|omit| (0..=top).filter(|&v| v != omit).collect())
        .collect();
    SimplicialComplex::new(n, facets).expect("simplex boundary is valid")
}

/// Triangle boundary, the 3-vertex circle.
pub fn circle3() -> SimplicialComplex {
    simplex_boundary(1)
}

/// Tetrahedron boundary.
pub fn sphere2() -> SimplicialComplex {
    simplex_boundary(2)
}

pub fn sphere3() -> SimplicialComplex {
    simplex_boundary(3)
}

pub fn sphere4() -> SimplicialComplex {
    simplex_boundary(4)
}

/// Möbius' 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}`
/// mod 7.
pub fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(alloc::vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(alloc::vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::new(2, facets).expect("torus is valid")
}

/// 6-vertex real projective plane (non-orientable).
pub fn rp2_6() -> SimplicialComplex {
    const FACETS: [[Vertex; 3]; 10] = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 6, 2],
        [2, 3, 5],
        [3, 4, 6],
        [4, 5, 2],
        [5, 6, 3],
        [6, 2, 4],
    ];
    SimplicialComplex::new(2, FACETS.iter().map(|f| f.to_vec()).collect()).expect("RP^2 is valid")
}

const CP2_FACETS: [[Vertex; 5]; 36] = [
    [1, 2, 4, 5, 6],
    [2, 3, 5, 6, 4],
    [3, 1, 6, 4, 5],
    [1, 2, 4, 5, 9],
    [2, 3, 5, 6, 7],
    [3, 1, 6, 4, 8],
    [2, 3, 6, 4, 9],
    [3, 1, 4, 5, 7],
    [1, 2, 5, 6, 8],
    [3, 1, 5, 6, 9],
    [1, 2, 6, 4, 7],
    [2, 3, 4, 5, 8],
    [4, 5, 7, 8, 9],
    [5, 6, 8, 9, 7],
    [6, 4, 9, 7, 8],
    [4, 5, 7, 8, 3],
    [5, 6, 8, 9, 1],
    [6, 4, 9, 7, 2],
    [5, 6, 9, 7, 3],
    [6, 4, 7, 8, 1],
    [4, 5, 8, 9, 2],
    [6, 4, 8, 9, 3],
    [4, 5, 9, 7, 1],
    [5, 6, 7, 8, 2],
    [7, 8, 1, 2, 3],
    [8, 9, 2, 3, 1],
    [9, 7, 3, 1, 2],
    [7, 8, 1, 2, 6],
    [8, 9, 2, 3, 4],
    [9, 7, 3, 1, 5],
    [8, 9, 3, 1, 6],
    [9, 7, 1, 2, 4],
    [7, 8, 2, 3, 5],
    [9, 7, 2, 3, 6],
    [7, 8, 3, 1, 4],
    [8, 9, 1, 2, 5],
];

/// Kühnel's 9-vertex complex projective plane, unoriented.
pub fn cp2_9_unoriented() -> SimplicialComplex {
    SimplicialComplex::new(4, CP2_FACETS.iter().map(|f| f.to_vec()).collect())
        .expect("CP^2 is valid")
}

/// Kühnel's 9-vertex complex projective plane in the reference
/// orientation, the one with signature `+1`.
pub fn cp2_9() -> SimplicialComplex {
    let oriented = cp2_9_unoriented().orient().expect("CP^2 is orientable");
    if CP2_REVERSE {
        oriented.reversed()
    } else {
        oriented
    }
}

// Whether the breadth-first orientation has to be flipped to get signature +1.
const CP2_REVERSE: bool = true;
