//! Intersection form and signature of closed oriented triangulated
//! 4-manifolds, from simplicial cup products.
//!
//! Degree-2 cohomology representatives are integral cocycles taken from the
//! kernel columns of the Smith transform of the coboundary `δ²`, kept
//! greedily when they are independent modulo coboundaries. The pairing is
//! `⟨α ⌣ β, [K]⟩` with the front-face/back-face formula
//! `(α ⌣ β)[v0..v4] = α[v0 v1 v2] · β[v2 v3 v4]` in ascending vertex order.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exact_linalg::{smith_normal_form, symmetric_signature, EchelonBasis, RatMatrix};
use crate::simplicial::{boundary_between, SimplicialComplex, SimplicialError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("intersection forms need a 4-dimensional complex, got dimension {0}")]
    WrongDimension(usize),
    #[error("complex is not closed")]
    NotClosed,
    #[error("complex is not orientable")]
    NotOrientable,
    #[error("given orientation signs do not form a cycle")]
    InconsistentOrientation,
    #[error("intersection pairing is degenerate ({0} zero directions)")]
    DegeneratePairing(usize),
}

impl From<SimplicialError> for FormError {
    fn from(e: SimplicialError) -> Self {
        match e {
            SimplicialError::NotOrientable => FormError::NotOrientable,
            SimplicialError::InconsistentOrientation => FormError::InconsistentOrientation,
            _ => FormError::NotClosed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    /// Cocycle representatives, as values on the sorted list of triangles.
    pub basis: Vec<Vec<BigInt>>,
    /// Symmetrized pairing in that basis.
    pub pairing: RatMatrix,
    /// Pairing before symmetrization.
    pub raw_pairing: RatMatrix,
}

impl IntersectionMatrix {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Integral cocycles spanning `H²(K; Q)`.
fn cohomology_basis(k: &SimplicialComplex) -> Vec<Vec<BigInt>> {
    let edges = k.faces(1);
    let triangles = k.faces(2);
    let tets = k.faces(3);
    // δ¹ = ∂₂ᵀ (triangles × edges), δ² = ∂₃ᵀ (tets × triangles)
    let d2 = boundary_between(&edges, &triangles);
    let d3 = boundary_between(&triangles, &tets);
    let delta2 = d3.transpose();
    let snf = smith_normal_form(&delta2);
    let to_rat = |v: &[BigInt]| -> Vec<BigRational> {
        v.iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect()
    };
    let mut span = EchelonBasis::new(triangles.len());
    for i in 0..d2.rows() {
        span.insert(to_rat(d2.row(i)));
    }
    let mut basis = Vec::new();
    for j in snf.rank()..snf.right.cols() {
        let v = snf.right.column(j);
        if span.insert(to_rat(&v)) {
            basis.push(v);
        }
    }
    basis
}

pub fn intersection_matrix(k: &SimplicialComplex) -> Result<IntersectionMatrix, FormError> {
    if k.dim() != 4 {
        return Err(FormError::WrongDimension(k.dim()));
    }
    let oriented = k.orient()?;
    let signs = oriented.orientation().expect("orient sets signs");
    let basis = cohomology_basis(&oriented);
    let triangles = oriented.faces(2);
    let index: BTreeMap<&[Vertex], usize> = triangles
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let r = basis.len();
    let mut raw = RatMatrix::zeros(r, r);
    for (f, &s) in oriented.facets().iter().zip(signs) {
        let front = index[&f[0..3]];
        let back = index[&f[2..5]];
        for a in 0..r {
            let x = &basis[a][front];
            if x.is_zero() {
                continue;
            }
            for b in 0..r {
                let y = &basis[b][back];
                if y.is_zero() {
                    continue;
                }
                let term = BigRational::from_integer(x * y * BigInt::from(s));
                raw[(a, b)] += term;
            }
        }
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut pairing = RatMatrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            pairing[(a, b)] = (&raw[(a, b)] + &raw[(b, a)]) / &two;
        }
    }
    Ok(IntersectionMatrix {
        basis,
        pairing,
        raw_pairing: raw,
    })
}

pub fn signature(k: &SimplicialComplex) -> Result<i64, FormError> {
    let form = intersection_matrix(k)?;
    let triple = symmetric_signature(&form.pairing).expect("pairing is square and symmetric");
    if triple.n_zero > 0 {
        return Err(FormError::DegeneratePairing(triple.n_zero));
    }
    Ok(triple.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::Signed;

    #[test]
    fn sphere_has_empty_form() {
        let m = intersection_matrix(&fixtures::sphere4()).unwrap();
        assert_eq!(m.rank(), 0);
        assert_eq!(signature(&fixtures::sphere4()), Ok(0));
    }

    #[test]
    fn cp2_reference_orientation() {
        let m = intersection_matrix(&fixtures::cp2_9()).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.pairing[(0, 0)].is_positive());
        assert_eq!(m.raw_pairing, m.pairing);
        assert_eq!(signature(&fixtures::cp2_9()), Ok(1));
    }

    #[test]
    fn cp2_reversed() {
        let fwd = intersection_matrix(&fixtures::cp2_9()).unwrap();
        let rev = intersection_matrix(&fixtures::cp2_9().reversed()).unwrap();
        assert_eq!(rev.pairing[(0, 0)], -fwd.pairing[(0, 0)].clone());
        assert_eq!(signature(&fixtures::cp2_9().reversed()), Ok(-1));
    }

    #[test]
    fn cp2_plus_reversed_cp2() {
        let k = fixtures::cp2_9()
            .disjoint_union(&fixtures::cp2_9().reversed())
            .unwrap();
        assert_eq!(signature(&k), Ok(0));
        let k = fixtures::cp2_9()
            .disjoint_union(&fixtures::cp2_9())
            .unwrap();
        assert_eq!(signature(&k), Ok(2));
    }

    #[test]
    fn errors() {
        assert_eq!(
            intersection_matrix(&fixtures::sphere2()),
            Err(FormError::WrongDimension(2))
        );
        let open = SimplicialComplex::new(4, alloc::vec![alloc::vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(intersection_matrix(&open), Err(FormError::NotClosed));
    }
}
