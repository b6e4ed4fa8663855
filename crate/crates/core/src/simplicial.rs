//! Pure simplicial complexes as models of closed oriented manifolds.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::exact_linalg::{rank_mod_p, rational_rank, smith_diagonal, IntMatrix};

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("facet {index} has {found} vertices, expected {expected}")]
    WrongFacetSize {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("facet {index} repeats a vertex")]
    RepeatedVertex { index: usize },
    #[error("facet {index} duplicates an earlier facet")]
    DuplicateFacet { index: usize },
    #[error("{found} orientation signs given for {expected} facets")]
    OrientationLength { expected: usize, found: usize },
    #[error("orientation sign {value} of facet {index} is not +1 or -1")]
    BadSign { index: usize, value: i8 },
    #[error("complex is not closed: an {dim}-face lies in {count} facets")]
    NotClosed { dim: usize, count: usize },
    #[error("complex is not orientable")]
    NotOrientable,
    #[error("given orientation signs do not form a cycle")]
    InconsistentOrientation,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Euler characteristic {chi} is odd in even dimension")]
    OddEulerCharacteristic { chi: i64 },
}

/// A pure `dim`-dimensional complex given by its facets.
///
/// Facets are stored with vertices sorted ascending and the facet list
/// itself sorted, so two complexes are equal iff they have the same facets.
/// An orientation, when present, is one sign per facet relative to the
/// ascending vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    dim: usize,
    facets: Vec<Vec<Vertex>>,
    orientation: Option<Vec<i8>>,
}

/// Coefficients for [`SimplicialComplex::homology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Rationals,
    Mod2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    /// Elementary divisors greater than one, per degree.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyProfile {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Kervaire semicharacteristic: an integer in even dimension, a residue
/// mod 2 in odd dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semicharacteristic {
    Integer(i64),
    Mod2(u8),
}

// Sign of the permutation sorting `v`.
fn sort_parity(v: &mut [Vertex]) -> i8 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

impl SimplicialComplex {
    pub fn new(dim: usize, facets: Vec<Vec<Vertex>>) -> Result<Self, SimplicialError> {
        Self::build(dim, facets, None)
    }

    /// Signs are taken relative to the vertex order as listed; they are
    /// rewritten for the sorted order.
    pub fn with_orientation(
        dim: usize,
        facets: Vec<Vec<Vertex>>,
        signs: Vec<i8>,
    ) -> Result<Self, SimplicialError> {
        Self::build(dim, facets, Some(signs))
    }

    fn build(
        dim: usize,
        facets: Vec<Vec<Vertex>>,
        signs: Option<Vec<i8>>,
    ) -> Result<Self, SimplicialError> {
        if let Some(s) = &signs {
            if s.len() != facets.len() {
                return Err(SimplicialError::OrientationLength {
                    expected: facets.len(),
                    found: s.len(),
                });
            }
            if let Some((index, &value)) = s.iter().enumerate().find(|(_, &x)| x != 1 && x != -1) {
                return Err(SimplicialError::BadSign { index, value });
            }
        }
        let mut entries = Vec::with_capacity(facets.len());
        let mut seen = BTreeSet::new();
        for (index, mut f) in facets.into_iter().enumerate() {
            if f.len() != dim + 1 {
                return Err(SimplicialError::WrongFacetSize {
                    index,
                    expected: dim + 1,
                    found: f.len(),
                });
            }
            let parity = sort_parity(&mut f);
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::RepeatedVertex { index });
            }
            if !seen.insert(f.clone()) {
                return Err(SimplicialError::DuplicateFacet { index });
            }
            let sign = signs.as_ref().map(|s| s[index] * parity);
            entries.push((f, sign));
        }
        entries.sort();
        let orientation = signs.map(|_| entries.iter().map(|(_, s)| s.unwrap()).collect());
        Ok(SimplicialComplex {
            dim,
            facets: entries.into_iter().map(|(f, _)| f).collect(),
            orientation,
        })
    }

    /// The empty `dim`-manifold.
    pub fn empty(dim: usize) -> Self {
        SimplicialComplex {
            dim,
            facets: Vec::new(),
            orientation: Some(Vec::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Vec<Vertex>] {
        &self.facets
    }

    pub fn orientation(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.facets.iter().flatten().copied().collect()
    }

    /// Drops any orientation.
    pub fn unoriented(&self) -> Self {
        SimplicialComplex {
            orientation: None,
            ..self.clone()
        }
    }

    /// Flips every facet sign; unoriented complexes are returned unchanged.
    pub fn reversed(&self) -> Self {
        SimplicialComplex {
            orientation: self
                .orientation
                .as_ref()
                .map(|s| s.iter().map(|x| -x).collect()),
            ..self.clone()
        }
    }

    /// All `k`-simplices of the closure, sorted lexicographically.
    pub fn faces(&self, k: usize) -> Vec<Vec<Vertex>> {
        if k > self.dim {
            return Vec::new();
        }
        let mut out = BTreeSet::new();
        let mut buf = Vec::with_capacity(k + 1);
        for f in &self.facets {
            subsets(f, k + 1, 0, &mut buf, &mut out);
        }
        out.into_iter().collect()
    }

    /// Boundary map `C_k -> C_{k-1}` in the lexicographic face bases.
    pub fn boundary_matrix(&self, k: usize) -> IntMatrix {
        let cols = self.faces(k);
        let rows = if k == 0 {
            Vec::new()
        } else {
            self.faces(k - 1)
        };
        boundary_between(&rows, &cols)
    }

    fn ridge_incidence(&self) -> BTreeMap<Vec<Vertex>, Vec<(usize, usize)>> {
        // ridge -> list of (facet index, omitted position)
        let mut map: BTreeMap<Vec<Vertex>, Vec<(usize, usize)>> = BTreeMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for omit in 0..f.len() {
                let ridge: Vec<Vertex> = f
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                map.entry(ridge).or_default().push((fi, omit));
            }
        }
        map
    }

    fn closedness(&self) -> Result<(), SimplicialError> {
        if self.dim == 0 {
            return Ok(());
        }
        for incidences in self.ridge_incidence().values() {
            if incidences.len() != 2 {
                return Err(SimplicialError::NotClosed {
                    dim: self.dim - 1,
                    count: incidences.len(),
                });
            }
        }
        Ok(())
    }

    /// Every codimension-one face lies in exactly two facets. Every
    /// 0-dimensional complex counts as closed.
    pub fn validate_closed(&self) -> bool {
        self.closedness().is_ok()
    }

    /// Returns the complex with facet signs whose signed boundary vanishes.
    ///
    /// A complex that already carries signs is checked and returned as is;
    /// otherwise the first facet of every connected component gets `+1`.
    pub fn orient(&self) -> Result<Self, SimplicialError> {
        self.closedness()?;
        if self.dim == 0 {
            let signs = self
                .orientation
                .clone()
                .unwrap_or_else(|| vec![1; self.facets.len()]);
            return Ok(SimplicialComplex {
                orientation: Some(signs),
                ..self.clone()
            });
        }
        let incidence = self.ridge_incidence();
        if let Some(signs) = &self.orientation {
            if !signed_boundary_vanishes(&incidence, signs) {
                return Err(SimplicialError::InconsistentOrientation);
            }
            return Ok(self.clone());
        }
        let mut neighbours: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); self.facets.len()];
        for inc in incidence.values() {
            let (a, pa) = inc[0];
            let (b, pb) = inc[1];
            neighbours[a].push((b, pa, pb));
            neighbours[b].push((a, pb, pa));
        }
        let mut signs: Vec<i8> = vec![0; self.facets.len()];
        for start in 0..self.facets.len() {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                for &(g, pf, pg) in &neighbours[f] {
                    // s_f (-1)^pf + s_g (-1)^pg = 0
                    let parity = if (pf + pg) % 2 == 0 { 1 } else { -1 };
                    let want = -signs[f] * parity;
                    if signs[g] == 0 {
                        signs[g] = want;
                        queue.push_back(g);
                    } else if signs[g] != want {
                        return Err(SimplicialError::NotOrientable);
                    }
                }
            }
        }
        Ok(SimplicialComplex {
            orientation: Some(signs),
            ..self.clone()
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| {
                let n = self.faces(k).len() as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    pub fn homology(&self, coefficients: Coefficients) -> HomologyProfile {
        let n = self.dim;
        let counts: Vec<usize> = (0..=n).map(|k| self.faces(k).len()).collect();
        // ranks[k] = rank of boundary C_k -> C_{k-1}; ranks[0] = ranks[n+1] = 0
        let mut ranks = vec![0usize; n + 2];
        let mut torsion = vec![Vec::new(); n + 1];
        for k in 1..=n {
            let d = self.boundary_matrix(k);
            ranks[k] = match coefficients {
                Coefficients::Integers => {
                    let diag = smith_diagonal(&d);
                    torsion[k - 1] = diag.iter().filter(|x| !x.is_one()).cloned().collect();
                    diag.len()
                }
                Coefficients::Rationals => rational_rank(&d),
                Coefficients::Mod2 => rank_mod_p(&d, 2),
            };
        }
        let betti = (0..=n)
            .map(|k| counts[k] - ranks[k] - ranks[k + 1])
            .collect();
        HomologyProfile { betti, torsion }
    }

    pub fn kervaire_semicharacteristic(&self) -> Result<Semicharacteristic, SimplicialError> {
        self.closedness()?;
        if self.dim.is_multiple_of(2) {
            let chi = self.euler_characteristic();
            if chi % 2 != 0 {
                return Err(SimplicialError::OddEulerCharacteristic { chi });
            }
            Ok(Semicharacteristic::Integer(chi / 2))
        } else {
            let h = self.homology(Coefficients::Rationals);
            let even: usize = h.betti.iter().step_by(2).sum();
            Ok(Semicharacteristic::Mod2((even % 2) as u8))
        }
    }

    /// `self ⊔ other`; the second complex's vertices are shifted past the
    /// largest vertex of the first.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, SimplicialError> {
        if self.dim != other.dim {
            return Err(SimplicialError::DimensionMismatch(self.dim, other.dim));
        }
        let offset = self.vertices().last().map_or(0, |v| v + 1);
        let mut facets = self.facets.clone();
        facets.extend(
            other
                .facets
                .iter()
                .map(|f| f.iter().map(|v| v + offset).collect()),
        );
        // A given orientation on one side is kept; the other side then gets
        // its canonical one if it has one.
        let signs_of = |k: &Self| -> Option<Vec<i8>> {
            k.orientation
                .clone()
                .or_else(|| k.orient().ok().and_then(|o| o.orientation))
        };
        let orientation = match (&self.orientation, &other.orientation) {
            (None, None) => None,
            _ if self.is_empty() => other.orientation.clone(),
            _ if other.is_empty() => self.orientation.clone(),
            _ => signs_of(self)
                .zip(signs_of(other))
                .map(|(a, b)| a.into_iter().chain(b).collect()),
        };
        match orientation {
            Some(signs) => Self::with_orientation(self.dim, facets, signs),
            None => Self::new(self.dim, facets),
        }
    }
}

fn subsets(
    f: &[Vertex],
    size: usize,
    start: usize,
    buf: &mut Vec<Vertex>,
    out: &mut BTreeSet<Vec<Vertex>>,
) {
    if buf.len() == size {
        out.insert(buf.clone());
        return;
    }
    for i in start..f.len() {
        if f.len() - i < size - buf.len() {
            break;
        }
        buf.push(f[i]);
        subsets(f, size, i + 1, buf, out);
        buf.pop();
    }
}

fn signed_boundary_vanishes(
    incidence: &BTreeMap<Vec<Vertex>, Vec<(usize, usize)>>,
    signs: &[i8],
) -> bool {
    incidence.values().all(|inc| {
        inc.iter()
            .map(|&(f, omit)| {
                let s = signs[f] as i64;
                if omit % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum::<i64>()
            == 0
    })
}

/// Boundary matrix from `cols` (k-simplices) to `rows` ((k-1)-simplices).
pub(crate) fn boundary_between(rows: &[Vec<Vertex>], cols: &[Vec<Vertex>]) -> IntMatrix {
    let index: BTreeMap<&[Vertex], usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        if s.len() < 2 {
            continue;
        }
        for omit in 0..s.len() {
            let face: Vec<Vertex> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != omit)
                .map(|(_, &v)| v)
                .collect();
            let i = index[face.as_slice()];
            m[(i, j)] = if omit % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
    }
    m
}

/// Signed sum of induced orientations on each codimension-one face; all
/// zero for a correctly oriented closed complex.
pub fn ridge_sums(k: &SimplicialComplex) -> Option<Vec<i64>> {
    let signs = k.orientation()?;
    let inc = k.ridge_incidence();
    Some(
        inc.values()
            .map(|v| {
                v.iter()
                    .map(|&(f, omit)| {
                        let s = signs[f] as i64;
                        if omit % 2 == 0 {
                            s
                        } else {
                            -s
                        }
                    })
                    .sum()
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn closedness_examples() {
        assert!(fixtures::sphere2().validate_closed());
        let triangle = SimplicialComplex::new(2, vec![vec![0, 1, 2]]).unwrap();
        assert!(!triangle.validate_closed());
        let t = fixtures::torus7();
        assert_eq!(t.facets().len(), 14);
        assert_eq!(t.faces(1).len(), 21);
        assert_eq!(t.faces(0).len(), 7);
        assert!(t.validate_closed());
    }

    #[test]
    fn orientation_examples() {
        assert!(fixtures::sphere2().orient().is_ok());
        assert_eq!(
            fixtures::rp2_6().orient(),
            Err(SimplicialError::NotOrientable)
        );
        let t = fixtures::torus7().orient().unwrap();
        assert!(ridge_sums(&t).unwrap().iter().all(|&s| s == 0));
        let triangle = SimplicialComplex::new(2, vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            triangle.orient(),
            Err(SimplicialError::NotClosed { .. })
        ));
    }

    #[test]
    fn given_orientation_is_checked() {
        let s = fixtures::sphere2().orient().unwrap();
        let mut signs = s.orientation().unwrap().to_vec();
        signs[0] = -signs[0];
        let bad = SimplicialComplex::with_orientation(2, s.facets().to_vec(), signs).unwrap();
        assert_eq!(bad.orient(), Err(SimplicialError::InconsistentOrientation));
    }

    #[test]
    fn listed_order_sets_sign() {
        let a = SimplicialComplex::with_orientation(1, vec![vec![1, 0]], vec![1]).unwrap();
        assert_eq!(a.orientation(), Some(&[-1][..]));
        assert_eq!(a.facets(), &[vec![0, 1]]);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            SimplicialComplex::new(2, vec![vec![0, 1]]),
            Err(SimplicialError::WrongFacetSize { .. })
        ));
        assert!(matches!(
            SimplicialComplex::new(2, vec![vec![0, 1, 1]]),
            Err(SimplicialError::RepeatedVertex { .. })
        ));
        assert!(matches!(
            SimplicialComplex::new(1, vec![vec![0, 1], vec![1, 0]]),
            Err(SimplicialError::DuplicateFacet { index: 1 })
        ));
        assert!(matches!(
            SimplicialComplex::with_orientation(1, vec![vec![0, 1]], vec![2]),
            Err(SimplicialError::BadSign { .. })
        ));
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(fixtures::sphere2().euler_characteristic(), 2);
        assert_eq!(fixtures::torus7().euler_characteristic(), 0);
        let two = fixtures::sphere2()
            .disjoint_union(&fixtures::sphere2())
            .unwrap();
        assert_eq!(two.euler_characteristic(), 4);
    }

    #[test]
    fn homology_examples() {
        let h = fixtures::sphere2().homology(Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 0, 1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
        let h = fixtures::torus7().homology(Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 2, 1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
        let h = fixtures::sphere3().homology(Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 0, 0, 1]);
    }

    #[test]
    fn projective_plane_torsion() {
        let h = fixtures::rp2_6().homology(Coefficients::Integers);
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion[1], vec![BigInt::from(2)]);
        let h2 = fixtures::rp2_6().homology(Coefficients::Mod2);
        assert_eq!(h2.betti, vec![1, 1, 1]);
        assert!(h2.torsion.iter().all(Vec::is_empty));
    }

    #[test]
    fn semicharacteristics() {
        assert_eq!(
            fixtures::sphere2().kervaire_semicharacteristic(),
            Ok(Semicharacteristic::Integer(1))
        );
        assert_eq!(
            fixtures::circle3().kervaire_semicharacteristic(),
            Ok(Semicharacteristic::Mod2(1))
        );
        assert_eq!(
            fixtures::sphere3().kervaire_semicharacteristic(),
            Ok(Semicharacteristic::Mod2(1))
        );
        // RP^2 passes the closedness check but has odd chi
        assert_eq!(
            fixtures::rp2_6().kervaire_semicharacteristic(),
            Err(SimplicialError::OddEulerCharacteristic { chi: 1 })
        );
    }

    #[test]
    fn disjoint_unions() {
        let s = fixtures::sphere2();
        let t = fixtures::torus7();
        let u = s.disjoint_union(&t).unwrap();
        assert_eq!(u.homology(Coefficients::Rationals).betti, vec![2, 2, 2]);
        assert_eq!(
            s.disjoint_union(&SimplicialComplex::empty(2))
                .unwrap()
                .facets(),
            s.facets()
        );
        assert_eq!(
            s.disjoint_union(&fixtures::sphere3()),
            Err(SimplicialError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn empty_complex() {
        let e = SimplicialComplex::empty(2);
        assert!(e.validate_closed());
        assert_eq!(e.euler_characteristic(), 0);
        assert_eq!(e.homology(Coefficients::Integers).betti, vec![0, 0, 0]);
        assert_eq!(
            e.kervaire_semicharacteristic(),
            Ok(Semicharacteristic::Integer(0))
        );
    }

    #[test]
    fn zero_dimensional() {
        let pts = SimplicialComplex::new(0, vec![vec![0], vec![3], vec![5]]).unwrap();
        assert!(pts.validate_closed());
        assert_eq!(pts.euler_characteristic(), 3);
        assert_eq!(pts.homology(Coefficients::Integers).betti, vec![3]);
        assert_eq!(
            pts.kervaire_semicharacteristic(),
            Err(SimplicialError::OddEulerCharacteristic { chi: 3 })
        );
    }
}
