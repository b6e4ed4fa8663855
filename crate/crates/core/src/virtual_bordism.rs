//! Symbolic manifold pieces that carry only their invariants: dimension,
//! χ, σ, labeled boundary and named characteristic numbers.
//!
//! Gluing adds χ minus the χ of the glued boundary and adds σ (Novikov
//! additivity). Reversal negates σ and every attribute. A glued piece is
//! recognized as a known closed manifold only through identities declared
//! in a [`Catalog`], matched on canonical recipes.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::surfaces::Surface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VirtualError {
    #[error("boundary labels do not match: {0}")]
    LabelMismatch(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("no B_Σ chosen for boundary label {0}")]
    MissingBSigma(String),
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
    #[error("recipe {recipe} resolves to {name}, but the invariants disagree")]
    Inconsistent { recipe: String, name: String },
    #[error("recipe syntax error at byte {pos}: {message}")]
    RecipeSyntax { pos: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// In-boundary.
    Negative,
    /// Out-boundary.
    Positive,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Negative => Orientation::Positive,
            Orientation::Positive => Orientation::Negative,
        }
    }
}

/// A closed connected boundary component, by type name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryLabel {
    pub name: String,
    pub chi: i64,
    pub orientation: Orientation,
}

impl BoundaryLabel {
    pub fn new(name: &str, chi: i64, orientation: Orientation) -> Self {
        BoundaryLabel {
            name: name.to_owned(),
            chi,
            orientation,
        }
    }

    pub fn positive(name: &str) -> Self {
        Self::new(name, 0, Orientation::Positive)
    }

    pub fn negative(name: &str) -> Self {
        Self::new(name, 0, Orientation::Negative)
    }

    pub fn reversed(&self) -> Self {
        BoundaryLabel {
            orientation: self.orientation.reversed(),
            ..self.clone()
        }
    }
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.orientation {
            Orientation::Positive => '+',
            Orientation::Negative => '-',
        };
        write!(f, "{}{s}", self.name)
    }
}

/// How a piece was built, up to the commutativity of union and gluing.
/// Reversal is pushed down to the atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Recipe {
    Atom { name: String, reversed: bool },
    Union(Vec<Recipe>),
    Glue(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn atom(name: &str) -> Recipe {
        Recipe::Atom {
            name: name.to_owned(),
            reversed: false,
        }
    }

    pub fn empty() -> Recipe {
        Recipe::Union(Vec::new())
    }

    pub fn reverse(&self) -> Recipe {
        match self {
            Recipe::Atom { name, reversed } => Recipe::Atom {
                name: name.clone(),
                reversed: !reversed,
            },
            Recipe::Union(parts) => Recipe::union(parts.iter().map(Recipe::reverse).collect()),
            Recipe::Glue(a, b) => Recipe::glue(a.reverse(), b.reverse()),
        }
    }

    pub fn union(parts: Vec<Recipe>) -> Recipe {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Recipe::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        flat.sort();
        Recipe::Union(flat)
    }

    pub fn glue(a: Recipe, b: Recipe) -> Recipe {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Recipe::Glue(Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str) -> Result<Recipe, VirtualError> {
        let mut p = RecipeParser { text, pos: 0 };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("trailing input"));
        }
        Ok(r)
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Atom {
                name,
                reversed: false,
            } => f.write_str(name),
            Recipe::Atom {
                name,
                reversed: true,
            } => write!(f, "reverse({name})"),
            Recipe::Union(parts) if parts.is_empty() => f.write_str("empty"),
            Recipe::Union(parts) => {
                f.write_str("union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            Recipe::Glue(a, b) => write!(f, "glue({a}, {b})"),
        }
    }
}

struct RecipeParser<'a> {
    text: &'a str,
    pos: usize,
}

impl RecipeParser<'_> {
    fn error(&self, message: &str) -> VirtualError {
        VirtualError::RecipeSyntax {
            pos: self.pos,
            message: message.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.text[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> Result<(), VirtualError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&str, VirtualError> {
        self.skip_ws();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| !(c.is_alphanumeric() || "_-.^".contains(c)))
            .unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }

    fn expr(&mut self) -> Result<Recipe, VirtualError> {
        let name = self.ident()?.to_owned();
        match name.as_str() {
            "empty" => Ok(Recipe::empty()),
            "reverse" => {
                self.eat('(')?;
                let r = self.expr()?;
                self.eat(')')?;
                Ok(r.reverse())
            }
            "glue" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                Ok(Recipe::glue(a, b))
            }
            "union" => {
                self.eat('(')?;
                let mut parts = vec![self.expr()?];
                loop {
                    self.skip_ws();
                    if self.text[self.pos..].starts_with(',') {
                        self.pos += 1;
                        parts.push(self.expr()?);
                    } else {
                        break;
                    }
                }
                self.eat(')')?;
                Ok(Recipe::union(parts))
            }
            _ => Ok(Recipe::atom(&name)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualPiece {
    pub dim: u32,
    pub chi: i64,
    pub sigma: i64,
    /// Sorted.
    pub boundary: Vec<BoundaryLabel>,
    pub attributes: BTreeMap<String, BigRational>,
    pub recipe: Recipe,
    /// Catalog name, when the piece is an entry or resolves to one.
    pub name: Option<String>,
}

/// The part of a piece that the calculus can see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub chi: i64,
    pub sigma: i64,
    pub boundary: Vec<BoundaryLabel>,
    pub attributes: BTreeMap<String, BigRational>,
}

impl VirtualPiece {
    pub fn new(
        name: &str,
        dim: u32,
        chi: i64,
        sigma: i64,
        mut boundary: Vec<BoundaryLabel>,
        attributes: BTreeMap<String, BigRational>,
    ) -> Result<Self, VirtualError> {
        if dim == 0 {
            return Err(VirtualError::InvalidPiece(format!("{name}: dimension 0")));
        }
        if sigma != 0 && !dim.is_multiple_of(4) {
            return Err(VirtualError::InvalidPiece(format!(
                "{name}: signature {sigma} in dimension {dim}"
            )));
        }
        if dim.is_multiple_of(2) {
            if let Some(l) = boundary.iter().find(|l| l.chi != 0) {
                return Err(VirtualError::InvalidPiece(format!(
                    "{name}: odd-dimensional boundary {l} with χ = {}",
                    l.chi
                )));
            }
        }
        boundary.sort();
        Ok(VirtualPiece {
            dim,
            chi,
            sigma,
            boundary,
            attributes,
            recipe: Recipe::atom(name),
            name: Some(name.to_owned()),
        })
    }

    pub fn empty(dim: u32) -> Self {
        VirtualPiece {
            dim,
            chi: 0,
            sigma: 0,
            boundary: Vec::new(),
            attributes: BTreeMap::new(),
            recipe: Recipe::empty(),
            name: None,
        }
    }

    /// A surface with each boundary circle as an out-label `S1`.
    pub fn from_surface(s: &Surface) -> Self {
        let boundary = vec![BoundaryLabel::positive("S1"); s.circle_count()];
        let mut p = VirtualPiece::new(&s.to_string(), 2, s.chi(), 0, boundary, BTreeMap::new())
            .expect("surfaces give valid pieces");
        p.name = None;
        p
    }

    pub fn with_attribute(mut self, key: &str, value: BigRational) -> Self {
        self.attributes.insert(key.to_owned(), value);
        self
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            chi: self.chi,
            sigma: self.sigma,
            boundary: self.boundary.clone(),
            attributes: self.attributes.clone(),
        }
    }

    pub fn attribute(&self, key: &str) -> Option<&BigRational> {
        self.attributes.get(key)
    }

    pub fn reverse(&self) -> VirtualPiece {
        let mut boundary: Vec<BoundaryLabel> =
            self.boundary.iter().map(BoundaryLabel::reversed).collect();
        boundary.sort();
        VirtualPiece {
            dim: self.dim,
            chi: self.chi,
            sigma: -self.sigma,
            boundary,
            attributes: self
                .attributes
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
            recipe: self.recipe.reverse(),
            name: None,
        }
    }

    pub fn disjoint_union(&self, other: &VirtualPiece) -> Result<VirtualPiece, VirtualError> {
        glue(self, other, &[])
    }
}

impl fmt::Display for VirtualPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => f.write_str(n),
            None => write!(f, "{}", self.recipe),
        }
    }
}

/// Glues boundary label `i` of `p` to label `j` of `q` for each `(i, j)`.
/// Matched labels must name the same manifold; either orientation is
/// accepted. Attributes survive only a gluing along nothing.
pub fn glue(
    p: &VirtualPiece,
    q: &VirtualPiece,
    matching: &[(usize, usize)],
) -> Result<VirtualPiece, VirtualError> {
    if p.dim != q.dim {
        return Err(VirtualError::DimensionMismatch(p.dim, q.dim));
    }
    let mut used_p = vec![false; p.boundary.len()];
    let mut used_q = vec![false; q.boundary.len()];
    let mut glued_chi = 0;
    for &(i, j) in matching {
        let (Some(a), Some(b)) = (p.boundary.get(i), q.boundary.get(j)) else {
            return Err(VirtualError::LabelMismatch(format!(
                "no label pair ({i}, {j}) between {p} and {q}"
            )));
        };
        if used_p[i] || used_q[j] {
            return Err(VirtualError::LabelMismatch(format!(
                "label used twice in matching ({i}, {j})"
            )));
        }
        if a.name != b.name || a.chi != b.chi {
            return Err(VirtualError::LabelMismatch(format!("{a} against {b}")));
        }
        used_p[i] = true;
        used_q[j] = true;
        glued_chi += a.chi;
    }
    let mut boundary: Vec<BoundaryLabel> = p
        .boundary
        .iter()
        .zip(&used_p)
        .chain(q.boundary.iter().zip(&used_q))
        .filter(|(_, &u)| !u)
        .map(|(l, _)| l.clone())
        .collect();
    boundary.sort();
    let attributes = if matching.is_empty() {
        let mut a = p.attributes.clone();
        for (k, v) in &q.attributes {
            let e = a.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += v;
        }
        // an attribute known on one side only is unknown on the union
        a.retain(|k, _| p.attributes.contains_key(k) == q.attributes.contains_key(k));
        a
    } else {
        BTreeMap::new()
    };
    let recipe = if matching.is_empty() {
        Recipe::union(vec![p.recipe.clone(), q.recipe.clone()])
    } else {
        Recipe::glue(p.recipe.clone(), q.recipe.clone())
    };
    Ok(VirtualPiece {
        dim: p.dim,
        chi: p.chi + q.chi - glued_chi,
        sigma: p.sigma + q.sigma,
        boundary,
        attributes,
        recipe,
        name: None,
    })
}

/// Glues `p` to `q` along label `i` ↔ `i` for every label.
pub fn identity_matching(p: &VirtualPiece) -> Vec<(usize, usize)> {
    (0..p.boundary.len()).map(|i| (i, i)).collect()
}

/// `P ∪ reverse(P)` along the identity of the boundary.
pub fn double(p: &VirtualPiece) -> VirtualPiece {
    let r = p.reverse();
    // reversal keeps the sort order up to the orientation flip, so match
    // labels by name and flipped orientation
    let mut matching = Vec::with_capacity(p.boundary.len());
    let mut taken = vec![false; r.boundary.len()];
    for (i, l) in p.boundary.iter().enumerate() {
        let j = (0..r.boundary.len())
            .find(|&j| !taken[j] && r.boundary[j] == l.reversed())
            .expect("reverse has the flipped label");
        taken[j] = true;
        matching.push((i, j));
    }
    let mut d = glue(p, &r, &matching).expect("labels match");
    if p.is_closed() {
        return d;
    }
    // a double is null-bordant, so its characteristic numbers vanish
    for k in p.attributes.keys() {
        d.attributes.insert(k.clone(), BigRational::zero());
    }
    d
}

/// Pieces, closing-up choices `B_Σ` and declared identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub dim: u32,
    /// Order of the bordism group in one dimension lower.
    pub l: u32,
    pieces: BTreeMap<String, VirtualPiece>,
    b_sigma: BTreeMap<String, String>,
    identities: Vec<(Recipe, String)>,
}

impl Catalog {
    pub fn new(
        dim: u32,
        l: u32,
        pieces: Vec<VirtualPiece>,
        b_sigma: BTreeMap<String, String>,
        identities: Vec<(Recipe, String)>,
    ) -> Result<Self, VirtualError> {
        if l == 0 {
            return Err(VirtualError::InvalidCatalog("l must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for p in pieces {
            let name = p
                .name
                .clone()
                .ok_or_else(|| VirtualError::InvalidCatalog("unnamed piece".into()))?;
            if p.dim != dim {
                return Err(VirtualError::DimensionMismatch(dim, p.dim));
            }
            if map.insert(name.clone(), p).is_some() {
                return Err(VirtualError::InvalidCatalog(format!(
                    "duplicate piece {name}"
                )));
            }
        }
        for (label, piece) in &b_sigma {
            let p = map.get(piece).ok_or_else(|| {
                VirtualError::InvalidCatalog(format!("B_Σ for {label} names unknown piece {piece}"))
            })?;
            let ok = p.boundary.len() == l as usize
                && p.boundary.iter().all(|b| &b.name == label)
                && p.boundary.windows(2).all(|w| w[0] == w[1]);
            if !ok {
                return Err(VirtualError::InvalidCatalog(format!(
                    "B_Σ for {label} must have boundary {l} copies of {label}, {piece} has {:?}",
                    p.boundary
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                )));
            }
        }
        for (recipe, name) in &identities {
            if !map.contains_key(name) {
                return Err(VirtualError::InvalidCatalog(format!(
                    "identity {recipe} = {name} names an unknown piece"
                )));
            }
        }
        Ok(Catalog {
            dim,
            l,
            pieces: map,
            b_sigma,
            identities,
        })
    }

    pub fn piece(&self, name: &str) -> Option<&VirtualPiece> {
        self.pieces.get(name)
    }

    pub fn pieces(&self) -> impl Iterator<Item = &VirtualPiece> {
        self.pieces.values()
    }

    pub fn b_sigma(&self) -> &BTreeMap<String, String> {
        &self.b_sigma
    }

    pub fn identities(&self) -> &[(Recipe, String)] {
        &self.identities
    }

    /// The same catalog with `B_Σ` for `label` replaced.
    pub fn with_b_sigma(&self, label: &str, piece: &str) -> Result<Catalog, VirtualError> {
        let mut b = self.b_sigma.clone();
        b.insert(label.to_owned(), piece.to_owned());
        Catalog::new(
            self.dim,
            self.l,
            self.pieces.values().cloned().collect(),
            b,
            self.identities.clone(),
        )
    }

    /// Replaces a piece by the catalog entry its recipe is declared equal
    /// to, taking over the entry's attributes.
    pub fn resolve(&self, p: VirtualPiece) -> Result<VirtualPiece, VirtualError> {
        let Some((_, name)) = self.identities.iter().find(|(r, _)| *r == p.recipe) else {
            return Ok(p);
        };
        let entry = &self.pieces[name];
        if entry.chi != p.chi || entry.sigma != p.sigma || entry.boundary != p.boundary {
            return Err(VirtualError::Inconsistent {
                recipe: p.recipe.to_string(),
                name: name.clone(),
            });
        }
        Ok(VirtualPiece {
            attributes: entry.attributes.clone(),
            name: Some(name.clone()),
            ..p
        })
    }

    pub fn glue(
        &self,
        p: &VirtualPiece,
        q: &VirtualPiece,
        matching: &[(usize, usize)],
    ) -> Result<VirtualPiece, VirtualError> {
        self.resolve(glue(p, q, matching)?)
    }

    /// `C(M)`: `l` copies of `M` with every boundary label capped by
    /// `B_Σ`, or by its reverse when `B_Σ` carries the same orientation as
    /// the label. In-labels thus receive `B_Σ` and out-labels `B̄_Σ`.
    pub fn close_up(&self, m: &VirtualPiece) -> Result<VirtualPiece, VirtualError> {
        if m.dim != self.dim {
            return Err(VirtualError::DimensionMismatch(self.dim, m.dim));
        }
        let l = self.l as usize;
        let mut cur = m.clone();
        for _ in 1..l {
            cur = glue(&cur, m, &[])?;
        }
        for label in &m.boundary {
            let b_name = self
                .b_sigma
                .get(&label.name)
                .ok_or_else(|| VirtualError::MissingBSigma(label.name.clone()))?;
            let b = &self.pieces[b_name];
            let cap = if b.boundary[0].orientation == label.orientation {
                b.reverse()
            } else {
                b.clone()
            };
            let mut matching = Vec::with_capacity(l);
            let mut start = 0;
            for k in 0..l {
                let i = (start..cur.boundary.len())
                    .find(|&i| cur.boundary[i] == *label)
                    .expect("each copy carries the label");
                matching.push((i, k));
                start = i + 1;
            }
            cur = glue(&cur, &cap, &matching)?;
        }
        self.resolve(cur)
    }

    pub fn dim2() -> Catalog {
        let s1 = || BoundaryLabel::positive("S1");
        let s1_in = || BoundaryLabel::negative("S1");
        let none = BTreeMap::new;
        let pieces = vec![
            VirtualPiece::new("disk", 2, 1, 0, vec![s1()], none()),
            VirtualPiece::new("cylinder", 2, 0, 0, vec![s1_in(), s1()], none()),
            VirtualPiece::new("pants", 2, -1, 0, vec![s1_in(), s1_in(), s1()], none()),
            VirtualPiece::new("sphere", 2, 2, 0, vec![], none()),
            VirtualPiece::new("torus", 2, 0, 0, vec![], none()),
        ];
        Catalog::new(
            2,
            1,
            pieces
                .into_iter()
                .map(|p| p.expect("valid piece"))
                .collect(),
            [("S1".to_owned(), "disk".to_owned())].into_iter().collect(),
            vec![(
                Recipe::parse("glue(disk, reverse(disk))").unwrap(),
                "sphere".into(),
            )],
        )
        .expect("valid catalog")
    }

    pub fn dim4() -> Catalog {
        let none = BTreeMap::new;
        let pieces = vec![
            VirtualPiece::new("D4", 4, 1, 0, vec![BoundaryLabel::positive("S3")], none()),
            VirtualPiece::new("S4", 4, 2, 0, vec![], none()),
            VirtualPiece::new("CP2", 4, 3, 1, vec![], none()),
            VirtualPiece::new(
                "CP2-D4",
                4,
                2,
                1,
                vec![BoundaryLabel::negative("S3")],
                none(),
            ),
        ];
        Catalog::new(
            4,
            1,
            pieces
                .into_iter()
                .map(|p| p.expect("valid piece"))
                .collect(),
            [("S3".to_owned(), "D4".to_owned())].into_iter().collect(),
            vec![
                (Recipe::parse("glue(D4, reverse(D4))").unwrap(), "S4".into()),
                (Recipe::parse("glue(CP2-D4, D4)").unwrap(), "CP2".into()),
            ],
        )
        .expect("valid catalog")
    }

    /// D⁸, S⁸, ℂP⁴ and ℂP⁴ minus an open disk, with `p2(ℂP⁴) = 10` and
    /// `p2(S⁸) = 0`.
    pub fn dim8() -> Catalog {
        let p2 = |v: i64| -> BTreeMap<String, BigRational> {
            [("p2".to_owned(), BigRational::from_integer(v.into()))]
                .into_iter()
                .collect()
        };
        let pieces = vec![
            VirtualPiece::new(
                "D8",
                8,
                1,
                0,
                vec![BoundaryLabel::positive("S7")],
                BTreeMap::new(),
            ),
            VirtualPiece::new("S8", 8, 2, 0, vec![], p2(0)),
            VirtualPiece::new("CP4", 8, 5, 1, vec![], p2(10)),
            VirtualPiece::new(
                "CP4-D8",
                8,
                4,
                1,
                vec![BoundaryLabel::negative("S7")],
                BTreeMap::new(),
            ),
        ];
        Catalog::new(
            8,
            1,
            pieces
                .into_iter()
                .map(|p| p.expect("valid piece"))
                .collect(),
            [("S7".to_owned(), "D8".to_owned())].into_iter().collect(),
            vec![
                (Recipe::parse("glue(D8, reverse(D8))").unwrap(), "S8".into()),
                (Recipe::parse("glue(CP4-D8, D8)").unwrap(), "CP4".into()),
            ],
        )
        .expect("valid catalog")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdditiveInvariant {
    Chi,
    Sigma,
}

impl AdditiveInvariant {
    pub fn of(self, p: &VirtualPiece) -> i64 {
        match self {
            AdditiveInvariant::Chi => p.chi,
            AdditiveInvariant::Sigma => p.sigma,
        }
    }
}

/// Both sides of `[X₁ ∪ X̄₂] + [X₂ ∪ X₃] = [X₁ ∪ X₃] + [D(X₂)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSides {
    pub lhs: i64,
    pub rhs: i64,
}

fn check_composable(a: &[BoundaryLabel], b: &[BoundaryLabel]) -> Result<(), VirtualError> {
    if a.len() != b.len()
        || a.iter()
            .zip(b)
            .any(|(x, y)| x.name != y.name || x.chi != y.chi)
    {
        return Err(VirtualError::LabelMismatch(format!(
            "{:?} against {:?}",
            a.iter().map(ToString::to_string).collect::<Vec<_>>(),
            b.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    Ok(())
}

fn name_order_matching(p: &VirtualPiece, q: &VirtualPiece) -> Vec<(usize, usize)> {
    // labels are sorted by (name, chi, orientation); pair the k-th label
    // of each name on both sides
    let mut taken = vec![false; q.boundary.len()];
    p.boundary
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let j = (0..q.boundary.len())
                .find(|&j| !taken[j] && q.boundary[j].name == l.name)
                .expect("composable");
            taken[j] = true;
            (i, j)
        })
        .collect()
}

fn names(p: &VirtualPiece) -> Vec<BoundaryLabel> {
    let mut v: Vec<BoundaryLabel> = p
        .boundary
        .iter()
        .map(|l| BoundaryLabel {
            orientation: Orientation::Positive,
            ..l.clone()
        })
        .collect();
    v.sort();
    v
}

/// Evaluates an additive invariant on both sides of the relation for
/// pieces with boundaries `Σ₁ ≅ Σ₂ ≅ Σ̄₃`.
pub fn relation_check(
    x1: &VirtualPiece,
    x2: &VirtualPiece,
    x3: &VirtualPiece,
    invariant: AdditiveInvariant,
) -> Result<RelationSides, VirtualError> {
    check_composable(&names(x1), &names(x2))?;
    check_composable(&names(x2), &names(x3))?;
    let x2_bar = x2.reverse();
    let a = glue(x1, &x2_bar, &name_order_matching(x1, &x2_bar))?;
    let b = glue(x2, x3, &name_order_matching(x2, x3))?;
    let c = glue(x1, x3, &name_order_matching(x1, x3))?;
    let d = double(x2);
    Ok(RelationSides {
        lhs: invariant.of(&a) + invariant.of(&b),
        rhs: invariant.of(&c) + invariant.of(&d),
    })
}

fn random_labels(rng: &mut impl Rng, dim: u32, n: usize) -> Vec<BoundaryLabel> {
    let names: &[&str] = if dim == 2 {
        &["S1"]
    } else {
        &["S3", "RP3", "T3"]
    };
    (0..n)
        .map(|_| BoundaryLabel::positive(names[rng.gen_range(0..names.len())]))
        .collect()
}

fn random_piece(
    rng: &mut impl Rng,
    name: &str,
    dim: u32,
    boundary: Vec<BoundaryLabel>,
) -> VirtualPiece {
    let sigma = if dim.is_multiple_of(4) {
        rng.gen_range(-3..=3)
    } else {
        0
    };
    VirtualPiece::new(
        name,
        dim,
        rng.gen_range(-6..=6),
        sigma,
        boundary,
        BTreeMap::new(),
    )
    .expect("valid random piece")
}

/// Three pieces with boundaries `Σ`, `Σ` and `Σ̄` for a random `Σ`.
pub fn random_triple(rng: &mut impl Rng, dim: u32) -> [VirtualPiece; 3] {
    let n = rng.gen_range(0..4);
    let sigma = random_labels(rng, dim, n);
    let bar: Vec<BoundaryLabel> = sigma.iter().map(BoundaryLabel::reversed).collect();
    [
        random_piece(rng, "X1", dim, sigma.clone()),
        random_piece(rng, "X2", dim, sigma),
        random_piece(rng, "X3", dim, bar),
    ]
}

/// Two pieces glued along two different matchings, and a second pair
/// glued along the same two matchings. Returns `(M, N, M′, N′)`.
pub fn random_quadruple(rng: &mut impl Rng, dim: u32) -> [VirtualPiece; 4] {
    use rand::seq::SliceRandom;
    let n = rng.gen_range(1..5);
    let sigma = vec![BoundaryLabel::positive(if dim == 2 { "S1" } else { "S3" }); n];
    let bar: Vec<BoundaryLabel> = sigma.iter().map(BoundaryLabel::reversed).collect();
    let mut f: Vec<usize> = (0..n).collect();
    let mut g = f.clone();
    f.shuffle(rng);
    g.shuffle(rng);
    let as_matching = |perm: &[usize]| -> Vec<(usize, usize)> {
        perm.iter().enumerate().map(|(i, &j)| (i, j)).collect()
    };
    let (a, b) = (
        random_piece(rng, "A", dim, sigma.clone()),
        random_piece(rng, "B", dim, bar.clone()),
    );
    let (c, d) = (
        random_piece(rng, "C", dim, sigma),
        random_piece(rng, "D", dim, bar),
    );
    [
        glue(&a, &b, &as_matching(&f)).unwrap(),
        glue(&a, &b, &as_matching(&g)).unwrap(),
        glue(&c, &d, &as_matching(&f)).unwrap(),
        glue(&c, &d, &as_matching(&g)).unwrap(),
    ]
}
