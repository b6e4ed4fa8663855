//! Compact oriented surfaces in normal form, with cut and paste moves.
//!
//! A surface is a list of connected components `(genus, boundary circles)`.
//! The list order only matters for naming boundary circles: circle ids run
//! over components in order, and within a component in birth order. Two
//! surfaces compare equal when their component multisets agree.
//!
//! Regluing data is a matching of boundary circles and nothing more:
//! orientation-preserving self-diffeomorphisms of a disjoint union of
//! circles are isotopic to permutations of the components.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::simplicial::{SimplicialComplex, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("invalid cut: {0}")]
    InvalidSpec(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("surface has boundary")]
    NotClosed,
}

/// Connected compact oriented surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub genus: u32,
    pub boundary: u32,
}

impl Component {
    pub const SPHERE: Component = Component::new(0, 0);
    pub const DISK: Component = Component::new(0, 1);
    pub const CYLINDER: Component = Component::new(0, 2);
    pub const PANTS: Component = Component::new(0, 3);
    pub const TORUS: Component = Component::new(1, 0);

    pub const fn new(genus: u32, boundary: u32) -> Self {
        Component { genus, boundary }
    }

    pub fn chi(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.genus, self.boundary) {
            (0, 0) => write!(f, "sphere"),
            (0, 1) => write!(f, "disk"),
            (0, 2) => write!(f, "cylinder"),
            (0, 3) => write!(f, "pants"),
            (1, 0) => write!(f, "torus"),
            (g, 0) => write!(f, "g{g}"),
            (g, b) => write!(f, "g{g}b{b}"),
        }
    }
}

#[derive(Debug, Clone, Default, Eq)]
pub struct Surface {
    components: Vec<Component>,
}

impl PartialEq for Surface {
    fn eq(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }
}

impl core::hash::Hash for Surface {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.normalized().hash(state);
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "empty");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Where a cut runs inside one component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurveKind {
    NonSeparating,
    /// The first piece gets `genus` and the listed boundary circles (local
    /// indices); the second piece gets the rest.
    Separating {
        genus: u32,
        circles: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutSpec {
    pub component: usize,
    pub kind: CurveKind,
}

/// Pairs of global circle ids glued together. Any two oriented boundary
/// circles can be glued by an orientation-reversing map, so every pair is
/// orientation compatible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PasteSpec {
    pub pairs: Vec<(usize, usize)>,
}

impl Surface {
    pub fn new(components: Vec<Component>) -> Self {
        Surface { components }
    }

    pub fn empty() -> Self {
        Surface::default()
    }

    pub fn connected(genus: u32, boundary: u32) -> Self {
        Surface::new(vec![Component::new(genus, boundary)])
    }

    pub fn sphere() -> Self {
        Self::connected(0, 0)
    }

    pub fn torus() -> Self {
        Self::connected(1, 0)
    }

    pub fn closed_genus(g: u32) -> Self {
        Self::connected(g, 0)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn normalized(&self) -> Vec<Component> {
        let mut c = self.components.clone();
        c.sort();
        c
    }

    pub fn chi(&self) -> i64 {
        self.components.iter().map(Component::chi).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(|c| c.boundary == 0)
    }

    pub fn circle_count(&self) -> usize {
        self.components.iter().map(|c| c.boundary as usize).sum()
    }

    /// `(component, local index)` of a global circle id.
    pub fn locate_circle(&self, id: usize) -> Option<(usize, u32)> {
        let mut rest = id;
        for (i, c) in self.components.iter().enumerate() {
            if rest < c.boundary as usize {
                return Some((i, rest as u32));
            }
            rest -= c.boundary as usize;
        }
        None
    }

    pub fn circle_id(&self, component: usize, local: u32) -> usize {
        self.components[..component]
            .iter()
            .map(|c| c.boundary as usize)
            .sum::<usize>()
            + local as usize
    }

    pub fn disjoint_union(&self, other: &Surface) -> Surface {
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Surface { components }
    }

    /// Cuts one component along a simple closed curve. New circles are
    /// appended after the existing ones of each resulting piece; a
    /// separating cut puts its second piece right after the first.
    pub fn cut(&self, spec: &CutSpec) -> Result<Surface, SurfaceError> {
        let Some(&c) = self.components.get(spec.component) else {
            return Err(SurfaceError::InvalidSpec(format!(
                "no component {}",
                spec.component
            )));
        };
        let mut components = self.components.clone();
        match &spec.kind {
            CurveKind::NonSeparating => {
                if c.genus == 0 {
                    return Err(SurfaceError::InvalidSpec(
                        "non-separating curve on a genus 0 component".into(),
                    ));
                }
                components[spec.component] = Component::new(c.genus - 1, c.boundary + 2);
            }
            CurveKind::Separating { genus, circles } => {
                if *genus > c.genus {
                    return Err(SurfaceError::InvalidSpec(format!(
                        "genus split {genus} exceeds genus {}",
                        c.genus
                    )));
                }
                let mut seen = vec![false; c.boundary as usize];
                for &k in circles {
                    match seen.get_mut(k as usize) {
                        Some(s) if !*s => *s = true,
                        Some(_) => {
                            return Err(SurfaceError::InvalidSpec(format!(
                                "circle {k} listed twice"
                            )))
                        }
                        None => {
                            return Err(SurfaceError::InvalidSpec(format!(
                                "component has no circle {k}"
                            )))
                        }
                    }
                }
                let first_b = circles.len() as u32;
                let first = Component::new(*genus, first_b + 1);
                let second = Component::new(c.genus - genus, c.boundary - first_b + 1);
                components[spec.component] = first;
                components.insert(spec.component + 1, second);
            }
        }
        Ok(Surface { components })
    }

    /// Glues the matched circles. Each merged component keeps the position
    /// of its lowest-indexed part; its genus is recovered from χ.
    pub fn paste(&self, spec: &PasteSpec) -> Result<Surface, SurfaceError> {
        let total = self.circle_count();
        let mut used = vec![false; total];
        for &(a, b) in &spec.pairs {
            if a == b {
                return Err(SurfaceError::InvalidMatching(format!(
                    "circle {a} matched with itself"
                )));
            }
            for x in [a, b] {
                match used.get_mut(x) {
                    None => {
                        return Err(SurfaceError::InvalidMatching(format!(
                            "no circle {x} (surface has {total})"
                        )))
                    }
                    Some(u) if *u => {
                        return Err(SurfaceError::InvalidMatching(format!(
                            "circle {x} matched twice"
                        )))
                    }
                    Some(u) => *u = true,
                }
            }
        }
        let n = self.components.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(a, b) in &spec.pairs {
            let (ca, _) = self.locate_circle(a).expect("checked above");
            let (cb, _) = self.locate_circle(b).expect("checked above");
            let (ra, rb) = (find(&mut parent, ca), find(&mut parent, cb));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut out = Vec::new();
        for root in 0..n {
            if find(&mut parent, root) != root {
                continue;
            }
            let members: Vec<usize> = (0..n).filter(|&i| find(&mut parent, i) == root).collect();
            let chi: i64 = members.iter().map(|&i| self.components[i].chi()).sum();
            let circles: usize = members
                .iter()
                .map(|&i| self.components[i].boundary as usize)
                .sum();
            let glued = spec
                .pairs
                .iter()
                .filter(|(a, _)| members.contains(&self.locate_circle(*a).unwrap().0))
                .count();
            let remaining = (circles - 2 * glued) as i64;
            let twice_genus = 2 - remaining - chi;
            debug_assert!(twice_genus >= 0 && twice_genus % 2 == 0);
            out.push(Component::new((twice_genus / 2) as u32, remaining as u32));
        }
        Ok(Surface { components: out })
    }

    /// Closed surface `S ∪_{id} S̄`.
    pub fn double(&self) -> Surface {
        let mut out = Vec::new();
        for c in &self.components {
            if c.boundary == 0 {
                out.push(*c);
                out.push(*c);
            } else {
                out.push(Component::new(2 * c.genus + c.boundary - 1, 0));
            }
        }
        Surface { components: out }
    }

    /// Triangulation with χ equal to `self.chi()`; closed components give
    /// closed orientable complexes.
    pub fn to_complex(&self) -> SimplicialComplex {
        let mut facets: Vec<Vec<Vertex>> = Vec::new();
        let mut next: Vertex = 0;
        for c in &self.components {
            triangulate_component(*c, &mut next, &mut facets);
        }
        SimplicialComplex::new(2, facets).expect("generated triangulation is valid")
    }
}

/// SK equivalence of closed surfaces: equal Euler characteristic.
pub fn sk_equivalent(m: &Surface, n: &Surface) -> Result<bool, SurfaceError> {
    if !m.is_closed() || !n.is_closed() {
        return Err(SurfaceError::NotClosed);
    }
    Ok(m.chi() == n.chi())
}

/// The mapping torus of an orientation-preserving circle diffeomorphism.
/// Every such map is isotopic to the identity, so this is the torus.
pub fn mapping_torus_demo() -> Surface {
    Surface::torus()
}

// A sphere built as a tube of triangle rings capped at both ends, with one
// face removed from every other layer to make 2g + b holes. Handles are
// two-layer collars with a fresh middle ring joining pairs of holes, so no
// vertices are ever identified.
fn triangulate_component(c: Component, next: &mut Vertex, facets: &mut Vec<Vec<Vertex>>) {
    let holes = (2 * c.genus + c.boundary) as usize;
    if holes == 0 {
        let base = *next;
        *next += 4;
        for omit in 0..4 {
            facets.push((0..4).filter(|&v| v != omit).map(|v| base + v).collect());
        }
        return;
    }
    let layers = 2 * holes - 1;
    let fresh_ring = |next: &mut Vertex| -> [Vertex; 3] {
        let r = [*next, *next + 1, *next + 2];
        *next += 3;
        r
    };
    let rings: Vec<[Vertex; 3]> = (0..=layers).map(|_| fresh_ring(next)).collect();
    facets.push(rings[0].to_vec());
    facets.push(rings[layers].to_vec());
    let mut hole_rings = Vec::new();
    for (layer, pair) in rings.windows(2).enumerate() {
        let (a, b) = (pair[0], pair[1]);
        for j in 0..3 {
            let j1 = (j + 1) % 3;
            let lower = vec![a[j], a[j1], b[j]];
            if layer % 2 == 0 && j == 0 {
                hole_rings.push([a[j], a[j1], b[j]]);
            } else {
                facets.push(lower);
            }
            facets.push(vec![a[j1], b[j], b[j1]]);
        }
    }
    for h in 0..c.genus as usize {
        let (x, y) = (hole_rings[2 * h], hole_rings[2 * h + 1]);
        let mid = fresh_ring(next);
        // the second hole's ring is traversed backwards so that the handle
        // is orientable
        let y = [y[0], y[2], y[1]];
        collar(&x, &mid, facets);
        collar(&mid, &y, facets);
    }
}

fn collar(a: &[Vertex; 3], b: &[Vertex; 3], facets: &mut Vec<Vec<Vertex>>) {
    for j in 0..3 {
        let j1 = (j + 1) % 3;
        facets.push(vec![a[j], a[j1], b[j]]);
        facets.push(vec![a[j1], b[j], b[j1]]);
    }
}

/// Random surface with at most `max_components` components of genus at
/// most `max_genus` and at most `max_boundary` circles each.
pub fn random_surface(
    rng: &mut impl Rng,
    max_components: usize,
    max_genus: u32,
    max_boundary: u32,
) -> Surface {
    let n = rng.gen_range(1..=max_components);
    Surface::new(
        (0..n)
            .map(|_| {
                Component::new(
                    rng.gen_range(0..=max_genus),
                    rng.gen_range(0..=max_boundary),
                )
            })
            .collect(),
    )
}

/// A random cut or paste that is valid on `s`, if any exists.
pub fn random_move(rng: &mut impl Rng, s: &Surface) -> Option<Move> {
    let circles = s.circle_count();
    let can_paste = circles >= 2;
    let cuttable: Vec<usize> = (0..s.components().len()).collect();
    let do_paste = can_paste && (cuttable.is_empty() || rng.gen_bool(0.5));
    if do_paste {
        let mut ids: Vec<usize> = (0..circles).collect();
        ids.shuffle(rng);
        let k = rng.gen_range(1..=circles / 2);
        let pairs = (0..k).map(|i| (ids[2 * i], ids[2 * i + 1])).collect();
        return Some(Move::Paste(PasteSpec { pairs }));
    }
    let &component = cuttable.choose(rng)?;
    let c = s.components()[component];
    let kind = if c.genus > 0 && rng.gen_bool(0.5) {
        CurveKind::NonSeparating
    } else {
        let genus = rng.gen_range(0..=c.genus);
        let circles = (0..c.boundary).filter(|_| rng.gen_bool(0.5)).collect();
        CurveKind::Separating { genus, circles }
    };
    Some(Move::Cut(CutSpec { component, kind }))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    Cut(CutSpec),
    Paste(PasteSpec),
}

impl Surface {
    pub fn apply(&self, m: &Move) -> Result<Surface, SurfaceError> {
        match m {
            Move::Cut(c) => self.cut(c),
            Move::Paste(p) => self.paste(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::Coefficients;

    fn cut(s: &Surface, component: usize, kind: CurveKind) -> Surface {
        s.cut(&CutSpec { component, kind }).unwrap()
    }

    fn paste(s: &Surface, pairs: &[(usize, usize)]) -> Surface {
        s.paste(&PasteSpec {
            pairs: pairs.to_vec(),
        })
        .unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(Surface::sphere().chi(), 2);
        assert_eq!(Surface::connected(0, 3).chi(), -1);
        assert_eq!(Surface::closed_genus(2).chi(), -2);
    }

    #[test]
    fn cut_examples() {
        assert_eq!(
            cut(&Surface::torus(), 0, CurveKind::NonSeparating),
            Surface::connected(0, 2)
        );
        let disks = cut(
            &Surface::sphere(),
            0,
            CurveKind::Separating {
                genus: 0,
                circles: vec![],
            },
        );
        assert_eq!(disks, Surface::new(vec![Component::DISK, Component::DISK]));
        let halves = cut(
            &Surface::closed_genus(2),
            0,
            CurveKind::Separating {
                genus: 1,
                circles: vec![],
            },
        );
        assert_eq!(
            halves,
            Surface::new(vec![Component::new(1, 1), Component::new(1, 1)])
        );
    }

    #[test]
    fn cut_errors() {
        let e = Surface::sphere().cut(&CutSpec {
            component: 0,
            kind: CurveKind::NonSeparating,
        });
        assert!(matches!(e, Err(SurfaceError::InvalidSpec(_))));
        let e = Surface::torus().cut(&CutSpec {
            component: 0,
            kind: CurveKind::Separating {
                genus: 2,
                circles: vec![],
            },
        });
        assert!(matches!(e, Err(SurfaceError::InvalidSpec(_))));
        let e = Surface::connected(0, 2).cut(&CutSpec {
            component: 0,
            kind: CurveKind::Separating {
                genus: 0,
                circles: vec![1, 1],
            },
        });
        assert!(matches!(e, Err(SurfaceError::InvalidSpec(_))));
        let e = Surface::torus().cut(&CutSpec {
            component: 3,
            kind: CurveKind::NonSeparating,
        });
        assert!(matches!(e, Err(SurfaceError::InvalidSpec(_))));
    }

    #[test]
    fn paste_examples() {
        assert_eq!(
            paste(&Surface::connected(0, 2), &[(0, 1)]),
            Surface::torus()
        );
        let disks = Surface::new(vec![Component::DISK, Component::DISK]);
        assert_eq!(paste(&disks, &[(0, 1)]), Surface::sphere());
        assert_eq!(
            paste(&Surface::connected(0, 3), &[(0, 1)]),
            Surface::connected(1, 1)
        );
    }

    #[test]
    fn paste_errors() {
        let s = Surface::connected(0, 2);
        for pairs in [vec![(0, 0)], vec![(0, 2)], vec![(0, 1), (1, 0)]] {
            assert!(matches!(
                s.paste(&PasteSpec { pairs }),
                Err(SurfaceError::InvalidMatching(_))
            ));
        }
    }

    #[test]
    fn circle_ids_follow_birth_order() {
        let s = Surface::new(vec![Component::new(0, 2), Component::new(1, 1)]);
        assert_eq!(s.locate_circle(2), Some((1, 0)));
        assert_eq!(s.locate_circle(3), None);
        assert_eq!(s.circle_id(1, 0), 2);
        let t = cut(&s, 1, CurveKind::NonSeparating);
        assert_eq!(t.components()[1], Component::new(0, 3));
        assert_eq!(t.circle_count(), 5);
    }

    #[test]
    fn sk_equivalence() {
        let lhs = Surface::torus();
        let rhs = Surface::sphere().disjoint_union(&Surface::closed_genus(2));
        assert_eq!(sk_equivalent(&lhs, &rhs), Ok(true));
        assert_eq!(
            sk_equivalent(&Surface::sphere(), &Surface::torus()),
            Ok(false)
        );
        assert_eq!(sk_equivalent(&lhs, &lhs), Ok(true));
        assert_eq!(
            sk_equivalent(&Surface::connected(0, 1), &lhs),
            Err(SurfaceError::NotClosed)
        );
    }

    #[test]
    fn doubles() {
        assert_eq!(Surface::connected(0, 1).double(), Surface::sphere());
        assert_eq!(Surface::connected(0, 2).double(), Surface::torus());
        assert_eq!(Surface::connected(0, 3).double(), Surface::closed_genus(2));
        let t = Surface::torus().double();
        assert_eq!(t, Surface::new(vec![Component::TORUS, Component::TORUS]));
    }

    #[test]
    fn mapping_torus() {
        let t = mapping_torus_demo();
        assert_eq!(t, Surface::torus());
        let c = cut(&t, 0, CurveKind::NonSeparating);
        assert_eq!(c, Surface::connected(0, 2));
        assert_eq!(paste(&c, &[(0, 1)]), t);
    }

    #[test]
    fn triangulations_match_normal_form() {
        for g in 0..4 {
            for b in 0..4 {
                let s = Surface::connected(g, b);
                let k = s.to_complex();
                assert_eq!(k.euler_characteristic(), s.chi(), "g{g} b{b}");
                if b == 0 {
                    assert!(k.validate_closed());
                    let h = k
                        .orient()
                        .expect("orientable")
                        .homology(Coefficients::Integers);
                    assert_eq!(h.betti, vec![1, 2 * g as usize, 1], "g{g}");
                    assert!(h.torsion.iter().all(Vec::is_empty));
                } else {
                    assert!(!k.validate_closed());
                    let h = k.homology(Coefficients::Rationals);
                    assert_eq!(h.betti, vec![1, (2 * g + b - 1) as usize, 0]);
                }
            }
        }
        let two = Surface::new(vec![Component::TORUS, Component::SPHERE]);
        assert_eq!(
            two.to_complex().homology(Coefficients::Rationals).betti,
            vec![2, 2, 2]
        );
    }
}
