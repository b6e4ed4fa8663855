//! SK and SKK classes, the homomorphism Ψ from invertible TQFTs to SKK
//! invariants, its absolute value |Ψ|, and the splitting S.
//!
//! Classes are represented by complete invariant tuples: `χ/2` in
//! dimension 2, `(χ, σ)` in dimension 4 and the number of circles mod 2 in
//! dimension 1. Dimension-4 bordism detection by σ is configuration, as are
//! the ranks of the bordism groups used by [`hom_structure`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::intersection_form::{self, FormError};
use crate::report::CheckOutcome;
use crate::rng::seeded;
use crate::simplicial::{Coefficients, SimplicialComplex, SimplicialError};
use crate::surfaces::{random_move, random_surface, Component, Surface, SurfaceError};
use crate::tqft::{GroupScalar, InvertibleTqft2, ScalarKind, TqftError};
use crate::virtual_bordism::{Catalog, VirtualError, VirtualPiece};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkkError {
    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(u32),
    #[error("manifold is not closed")]
    NotClosed,
    #[error("χ − σ = {0} is odd")]
    OddParity(i64),
    #[error("χ = {0} is odd")]
    OddEulerCharacteristic(i64),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("attribute {0} is not known for this manifold")]
    MissingAttribute(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Virtual(#[from] VirtualError),
    #[error(transparent)]
    Tqft(#[from] TqftError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A closed oriented manifold in any of the supported models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedManifold {
    Surface(Surface),
    Complex(SimplicialComplex),
    Piece(VirtualPiece),
}

impl ClosedManifold {
    pub fn dim(&self) -> u32 {
        match self {
            ClosedManifold::Surface(_) => 2,
            ClosedManifold::Complex(k) => k.dim() as u32,
            ClosedManifold::Piece(p) => p.dim,
        }
    }

    /// Closed and, for complexes, orientable with any given orientation
    /// consistent.
    fn check_closed(&self) -> Result<(), SkkError> {
        let closed = match self {
            ClosedManifold::Surface(s) => s.is_closed(),
            ClosedManifold::Complex(k) => {
                if !k.validate_closed() {
                    return Err(SkkError::NotClosed);
                }
                k.orient()?;
                true
            }
            ClosedManifold::Piece(p) => p.is_closed(),
        };
        if closed {
            Ok(())
        } else {
            Err(SkkError::NotClosed)
        }
    }

    pub fn chi(&self) -> i64 {
        match self {
            ClosedManifold::Surface(s) => s.chi(),
            ClosedManifold::Complex(k) => k.euler_characteristic(),
            ClosedManifold::Piece(p) => p.chi,
        }
    }

    /// Signature; zero outside dimensions divisible by 4.
    pub fn sigma(&self) -> Result<i64, SkkError> {
        if !self.dim().is_multiple_of(4) {
            return Ok(0);
        }
        match self {
            ClosedManifold::Complex(k) if k.dim() == 4 => Ok(intersection_form::signature(k)?),
            ClosedManifold::Complex(k) => Err(SkkError::UnsupportedDimension(k.dim() as u32)),
            ClosedManifold::Piece(p) => Ok(p.sigma),
            ClosedManifold::Surface(_) => Ok(0),
        }
    }

    fn attribute(&self, key: &str) -> Result<BigRational, SkkError> {
        match self {
            ClosedManifold::Piece(p) => p
                .attribute(key)
                .cloned()
                .ok_or_else(|| SkkError::MissingAttribute(key.into())),
            _ => Err(SkkError::MissingAttribute(key.into())),
        }
    }

    fn components(&self) -> Result<usize, SkkError> {
        match self {
            ClosedManifold::Complex(k) => Ok(k.homology(Coefficients::Rationals).betti[0]),
            _ => Err(SkkError::UnsupportedDimension(self.dim())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkkClass {
    Dim1(u8),
    Dim2(i64),
    Dim4 { chi: i64, sigma: i64 },
}

impl SkkClass {
    pub fn checked_add(self, other: SkkClass) -> Option<SkkClass> {
        Some(match (self, other) {
            (SkkClass::Dim1(a), SkkClass::Dim1(b)) => SkkClass::Dim1((a + b) % 2),
            (SkkClass::Dim2(a), SkkClass::Dim2(b)) => SkkClass::Dim2(a + b),
            (SkkClass::Dim4 { chi: a, sigma: s }, SkkClass::Dim4 { chi: b, sigma: t }) => {
                SkkClass::Dim4 {
                    chi: a + b,
                    sigma: s + t,
                }
            }
            _ => return None,
        })
    }

    pub fn checked_sub(self, other: SkkClass) -> Option<SkkClass> {
        let neg = match other {
            SkkClass::Dim1(a) => SkkClass::Dim1(a),
            SkkClass::Dim2(a) => SkkClass::Dim2(-a),
            SkkClass::Dim4 { chi, sigma } => SkkClass::Dim4 {
                chi: -chi,
                sigma: -sigma,
            },
        };
        self.checked_add(neg)
    }
}

impl fmt::Display for SkkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkkClass::Dim1(a) => write!(f, "{a} mod 2"),
            SkkClass::Dim2(a) => write!(f, "{a}"),
            SkkClass::Dim4 { chi, sigma } => write!(f, "(χ {chi}, σ {sigma})"),
        }
    }
}

pub fn skk_class(m: &ClosedManifold) -> Result<SkkClass, SkkError> {
    m.check_closed()?;
    match m.dim() {
        1 => Ok(SkkClass::Dim1((m.components()? % 2) as u8)),
        2 => {
            let chi = m.chi();
            if chi % 2 != 0 {
                return Err(SkkError::OddEulerCharacteristic(chi));
            }
            Ok(SkkClass::Dim2(chi / 2))
        }
        4 => Ok(SkkClass::Dim4 {
            chi: m.chi(),
            sigma: m.sigma()?,
        }),
        d => Err(SkkError::UnsupportedDimension(d)),
    }
}

/// SK class: `χ/2` in dimension 2, `((χ − σ)/2, σ)` in dimension 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkClass {
    Dim2(i64),
    Dim4 { half_difference: i64, sigma: i64 },
}

impl fmt::Display for SkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkClass::Dim2(a) => write!(f, "{a}"),
            SkClass::Dim4 {
                half_difference,
                sigma,
            } => write!(f, "({half_difference}, {sigma})"),
        }
    }
}

pub fn sk_class(m: &ClosedManifold) -> Result<SkClass, SkkError> {
    m.check_closed()?;
    match m.dim() {
        2 => {
            let chi = m.chi();
            if chi % 2 != 0 {
                return Err(SkkError::OddEulerCharacteristic(chi));
            }
            Ok(SkClass::Dim2(chi / 2))
        }
        4 => {
            let (chi, sigma) = (m.chi(), m.sigma()?);
            if (chi - sigma) % 2 != 0 {
                return Err(SkkError::OddParity(chi - sigma));
            }
            Ok(SkClass::Dim4 {
                half_difference: (chi - sigma) / 2,
                sigma,
            })
        }
        d => Err(SkkError::UnsupportedDimension(d)),
    }
}

/// The kernel `I_n` of the map from `SKK_n` to the bordism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IGroup {
    Integers,
    Mod2,
    Zero,
}

impl fmt::Display for IGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IGroup::Integers => "Z",
            IGroup::Mod2 => "Z/2",
            IGroup::Zero => "0",
        })
    }
}

pub fn i_n_table(n: u32) -> IGroup {
    match n % 4 {
        0 | 2 => IGroup::Integers,
        1 => IGroup::Mod2,
        _ => IGroup::Zero,
    }
}

/// Integer or rational invariant that an SKK invariant exponentiates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LinearInvariant {
    HalfChi,
    Chi,
    Sigma,
    Attribute(String),
}

impl LinearInvariant {
    fn value(&self, m: &ClosedManifold) -> Result<BigRational, SkkError> {
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        Ok(match self {
            LinearInvariant::HalfChi => BigRational::new(m.chi().into(), 2.into()),
            LinearInvariant::Chi => int(m.chi()),
            LinearInvariant::Sigma => int(m.sigma()?),
            LinearInvariant::Attribute(k) => m.attribute(k)?,
        })
    }
}

impl fmt::Display for LinearInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearInvariant::HalfChi => f.write_str("χ/2"),
            LinearInvariant::Chi => f.write_str("χ"),
            LinearInvariant::Sigma => f.write_str("σ"),
            LinearInvariant::Attribute(k) => f.write_str(k),
        }
    }
}

/// `M ↦ ∏ baseᵢ^{invᵢ(M)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkkInvariant {
    pub dim: u32,
    pub kind: ScalarKind,
    pub terms: Vec<(LinearInvariant, GroupScalar)>,
}

impl SkkInvariant {
    pub fn trivial(dim: u32, kind: ScalarKind) -> Self {
        SkkInvariant {
            dim,
            kind,
            terms: Vec::new(),
        }
    }

    /// `exp(r·χ)`.
    pub fn exp_chi(dim: u32, r: BigRational) -> Self {
        Self::exp_of(dim, LinearInvariant::Chi, r)
    }

    /// `exp(r·inv)`.
    pub fn exp_of(dim: u32, inv: LinearInvariant, r: BigRational) -> Self {
        SkkInvariant {
            dim,
            kind: ScalarKind::Exp,
            terms: vec![(inv, GroupScalar::exp(r))],
        }
    }

    pub fn value(&self, m: &ClosedManifold) -> Result<GroupScalar, SkkError> {
        if m.dim() != self.dim {
            return Err(SkkError::UnsupportedDimension(m.dim()));
        }
        m.check_closed()?;
        let mut acc = GroupScalar::one(self.kind);
        for (inv, base) in &self.terms {
            let x = inv.value(m)?;
            acc = acc.try_mul(&base.pow_rational(&x)?)?;
        }
        Ok(acc)
    }

    pub fn product(&self, other: &SkkInvariant) -> Result<SkkInvariant, SkkError> {
        if self.dim != other.dim {
            return Err(SkkError::UnsupportedDimension(other.dim));
        }
        if self.kind != other.kind {
            return Err(TqftError::VariantMismatch(self.kind, other.kind).into());
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(SkkInvariant {
            dim: self.dim,
            kind: self.kind,
            terms,
        })
    }

    /// Collapses the χ-type terms of an exponential invariant into one
    /// rate `r` with value `exp(r·χ)`, and returns the remaining terms.
    fn split_exponential(
        &self,
    ) -> Result<(BigRational, Vec<(LinearInvariant, BigRational)>), SkkError> {
        let mut rate = BigRational::zero();
        let mut rest = Vec::new();
        for (inv, base) in &self.terms {
            let GroupScalar::Exp {
                negative: false,
                exponent,
            } = base
            else {
                return Err(SkkError::InvalidDescriptor(format!(
                    "base {base} is not a positive real"
                )));
            };
            match inv {
                LinearInvariant::Chi => rate += exponent,
                LinearInvariant::HalfChi => rate += exponent / BigRational::from_integer(2.into()),
                other => rest.push((other.clone(), exponent.clone())),
            }
        }
        Ok((rate, rest))
    }
}

impl fmt::Display for SkkInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("1");
        }
        for (i, (inv, base)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" · ")?;
            }
            match base {
                GroupScalar::Exp {
                    negative: false,
                    exponent,
                } => {
                    if exponent.is_one() {
                        write!(f, "exp({inv})")?
                    } else {
                        write!(f, "exp({exponent}·{inv})")?
                    }
                }
                _ => write!(f, "({base})^({inv})")?,
            }
        }
        Ok(())
    }
}

/// Ψ(T): the value of `T` on closed surfaces, `(a·e)^{χ/2}`.
pub fn psi(t: &InvertibleTqft2) -> SkkInvariant {
    SkkInvariant {
        dim: 2,
        kind: t.cap().kind(),
        terms: vec![(LinearInvariant::HalfChi, t.sphere_value())],
    }
}

/// |Ψ|(T) = `|a·e|^{χ/2}`.
pub fn abs_psi(t: &InvertibleTqft2) -> SkkInvariant {
    SkkInvariant {
        dim: 2,
        kind: t.cap().kind(),
        terms: vec![(LinearInvariant::HalfChi, t.sphere_value().abs())],
    }
}

/// Whether `T` takes only the values ±1 on closed surfaces.
pub fn kernel_membership(t: &InvertibleTqft2) -> bool {
    t.sphere_value().abs().is_one()
}

/// The splitting in dimension 2: `exp(r·χ) ↦ (a, e) = (exp(r), exp(r))`.
pub fn split_dim2(xi: &SkkInvariant) -> Result<InvertibleTqft2, SkkError> {
    if xi.dim != 2 {
        return Err(SkkError::UnsupportedDimension(xi.dim));
    }
    let (rate, rest) = xi.split_exponential()?;
    if let Some((inv, _)) = rest.first() {
        return Err(SkkError::InvalidDescriptor(format!(
            "{inv} is not an invariant of surfaces"
        )));
    }
    let v = GroupScalar::exp(rate);
    Ok(InvertibleTqft2::new(v.clone(), v)?)
}

/// The splitting in dimensions divisible by 4, evaluated on pieces:
/// `exp(r·χ(M))` directly, times `ξ_b(C(M))^{1/l}` for the bordism part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualSplitting {
    pub chi_rate: BigRational,
    pub bordism: Vec<(LinearInvariant, BigRational)>,
    pub catalog: Catalog,
}

impl VirtualSplitting {
    pub fn new(xi: &SkkInvariant, catalog: &Catalog) -> Result<Self, SkkError> {
        if !xi.dim.is_multiple_of(4) || xi.dim != catalog.dim {
            return Err(SkkError::UnsupportedDimension(xi.dim));
        }
        let (chi_rate, bordism) = xi.split_exponential()?;
        Ok(VirtualSplitting {
            chi_rate,
            bordism,
            catalog: catalog.clone(),
        })
    }

    pub fn evaluate(&self, m: &VirtualPiece) -> Result<GroupScalar, SkkError> {
        let chi_part = GroupScalar::exp(&self.chi_rate * BigRational::from_integer(m.chi.into()));
        if self.bordism.is_empty() {
            return Ok(chi_part);
        }
        let closed = ClosedManifold::Piece(self.catalog.close_up(m)?);
        let mut exponent = BigRational::zero();
        for (inv, r) in &self.bordism {
            exponent += r * inv.value(&closed)?;
        }
        let root = BigRational::new(1.into(), BigInt::from(self.catalog.l));
        let bordism_part = GroupScalar::exp(exponent).pow_rational(&root)?;
        Ok(chi_part.try_mul(&bordism_part)?)
    }
}

/// A χ-type invariant pushed through the closing-up. This is not a
/// splitting; it exists to show why χ must bypass `C(M)`.
pub fn chi_through_close_up(
    rate: &BigRational,
    catalog: &Catalog,
    m: &VirtualPiece,
) -> Result<GroupScalar, SkkError> {
    let closed = catalog.close_up(m)?;
    let r = rate * BigRational::new(closed.chi.into(), BigInt::from(catalog.l));
    Ok(GroupScalar::exp(r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitReport {
    pub kernel_is_image: CheckOutcome,
    pub surjectivity: CheckOutcome,
    pub section: CheckOutcome,
    pub homomorphism: CheckOutcome,
}

impl SplitReport {
    pub fn checks(&self) -> [&CheckOutcome; 4] {
        [
            &self.kernel_is_image,
            &self.surjectivity,
            &self.section,
            &self.homomorphism,
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed())
    }
}

/// Grid value for index `i`: `(−1)^i · exp(i/2)`.
pub fn grid_scalar(i: i64) -> GroupScalar {
    GroupScalar::signed_exp(i % 2 != 0, BigRational::new(i.into(), 2.into()))
}

fn sample_surfaces(rng: &mut impl Rng, extra: usize) -> Vec<ClosedManifold> {
    let mut out: Vec<ClosedManifold> = (0..4)
        .map(|g| ClosedManifold::Surface(Surface::closed_genus(g)))
        .collect();
    out.push(ClosedManifold::Surface(Surface::empty()));
    for _ in 0..extra {
        out.push(ClosedManifold::Surface(random_surface(rng, 3, 4, 0)));
    }
    out
}

fn agree(x: &SkkInvariant, y: &SkkInvariant, samples: &[ClosedManifold]) -> Result<(), String> {
    for m in samples {
        let (a, b) = (x.value(m), y.value(m));
        if a != b {
            let show = |v: Result<GroupScalar, SkkError>| match v {
                Ok(s) => s.to_string(),
                Err(e) => e.to_string(),
            };
            let name = match m {
                ClosedManifold::Surface(s) => s.to_string(),
                _ => "sample".into(),
            };
            return Err(format!("on {name}: {} vs {}", show(a), show(b)));
        }
    }
    Ok(())
}

fn is_trivial(x: &SkkInvariant, samples: &[ClosedManifold]) -> bool {
    samples
        .iter()
        .all(|m| x.value(m).map(|v| v.is_one()).unwrap_or(false))
}

/// Checks the split exact sequence in dimension 2 on the grid
/// `(a, e) = (grid_scalar(i), grid_scalar(j))`:
/// (i) kernel membership ⇔ |Ψ|(T) trivial, with kernel members taking
/// values ±1; (ii) every sampled `exp(r·χ)` is hit by |Ψ|;
/// (iii) |Ψ| ∘ S = id; (iv) |Ψ| is a homomorphism.
pub fn verify_split_sequence(
    grid: &[i64],
    seed: u64,
    splitting: impl Fn(&SkkInvariant) -> Result<InvertibleTqft2, SkkError>,
) -> SplitReport {
    let mut rng = seeded(seed);
    let samples = sample_surfaces(&mut rng, 4);
    let tqfts: Vec<InvertibleTqft2> = grid
        .iter()
        .flat_map(|&i| {
            grid.iter().map(move |&j| {
                InvertibleTqft2::new(grid_scalar(i), grid_scalar(j)).expect("same kind")
            })
        })
        .collect();
    let mut kernel_is_image = CheckOutcome::new("kernel of |Ψ| = image of inclusion");
    let mut surjectivity = CheckOutcome::new("|Ψ| surjective onto sampled χ*");
    let mut section = CheckOutcome::new("|Ψ| ∘ S = id");
    let mut homomorphism = CheckOutcome::new("|Ψ| homomorphism");

    for t in &tqfts {
        let member = kernel_membership(t);
        let trivial = is_trivial(&abs_psi(t), &samples);
        let signs_only = samples
            .iter()
            .all(|m| psi(t).value(m).map(|v| v.abs().is_one()).unwrap_or(false));
        kernel_is_image.record(member == trivial && member == signs_only, || {
            format!(
                "(a, e) = ({}, {}): membership {member}, |Ψ| trivial {trivial}",
                t.cap(),
                t.cup()
            )
        });

        let xi = abs_psi(t);
        match splitting(&xi) {
            Ok(s) => {
                let r = agree(&abs_psi(&s), &xi, &samples);
                section.record(r.is_ok(), || format!("ξ = {xi}: {}", r.unwrap_err()));
            }
            Err(e) => section.record(false, || format!("ξ = {xi}: {e}")),
        }
    }

    for _ in 0..tqfts.len() {
        let r = BigRational::new(rng.gen_range(-12..=12).into(), rng.gen_range(1..=6).into());
        let xi = SkkInvariant::exp_chi(2, r);
        match splitting(&xi) {
            Ok(s) => {
                let res = agree(&abs_psi(&s), &xi, &samples);
                surjectivity.record(res.is_ok(), || format!("ξ = {xi}: {}", res.unwrap_err()));
            }
            Err(e) => surjectivity.record(false, || format!("ξ = {xi}: {e}")),
        }
    }

    // χ ranges over a generating set of 2Z here, which suffices for exact
    // homomorphisms of the exponent lattice.
    let probe = &samples[..3];
    for t in &tqfts {
        for u in &tqfts {
            let tu = t.product(u).expect("same kind");
            let lhs = abs_psi(&tu);
            let rhs = abs_psi(t).product(&abs_psi(u)).expect("same kind");
            let res = agree(&lhs, &rhs, probe);
            homomorphism.record(res.is_ok(), || {
                format!(
                    "({}, {}) · ({}, {}): {}",
                    t.cap(),
                    t.cup(),
                    u.cap(),
                    u.cup(),
                    res.unwrap_err()
                )
            });
        }
    }

    SplitReport {
        kernel_is_image,
        surjectivity,
        section,
        homomorphism,
    }
}

/// The splitting with the cup value left at 1: `(a, e) = (exp(r), 1)`.
/// Only a negative control.
pub fn corrupted_split_dim2(xi: &SkkInvariant) -> Result<InvertibleTqft2, SkkError> {
    let (rate, _) = xi.split_exponential()?;
    Ok(InvertibleTqft2::new(
        GroupScalar::exp(rate),
        GroupScalar::exp(BigRational::zero()),
    )?)
}

/// `S(ξ)(D)` for `ξ = exp(attribute)` under two choices of `B_Σ` for the
/// boundary of `piece`.
pub fn b_sigma_dependence(
    catalog: &Catalog,
    piece: &str,
    attribute: &str,
    first: &str,
    second: &str,
) -> Result<(GroupScalar, GroupScalar), SkkError> {
    let p = catalog
        .piece(piece)
        .ok_or_else(|| SkkError::InvalidDescriptor(format!("no piece {piece}")))?;
    let label = p
        .boundary
        .first()
        .ok_or_else(|| SkkError::InvalidDescriptor(format!("{piece} is closed")))?
        .name
        .clone();
    let xi = SkkInvariant::exp_of(
        catalog.dim,
        LinearInvariant::Attribute(attribute.into()),
        BigRational::one(),
    );
    let mut values = Vec::with_capacity(2);
    for choice in [first, second] {
        let c = catalog.with_b_sigma(&label, choice)?;
        values.push(VirtualSplitting::new(&xi, &c)?.evaluate(p)?);
    }
    let second = values.pop().unwrap();
    Ok((values.pop().unwrap(), second))
}

/// `S(exp(p2))(D⁸)` with `B_{S⁷} = D⁸` and with `B_{S⁷} = ℂP⁴∖D̊⁸`.
pub fn b_sigma_dependence_demo() -> Result<(GroupScalar, GroupScalar), SkkError> {
    b_sigma_dependence(&Catalog::dim8(), "D8", "p2", "D8", "CP4-D8")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomStructure {
    Zero,
    ChiStar,
    /// `χ* ⊕ Hom(Ω_n, R₊)`, with the rank of `Ω_n ⊗ Q` when configured.
    ChiStarPlusBordism {
        rank: Option<u32>,
    },
}

impl fmt::Display for HomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomStructure::Zero => f.write_str("0"),
            HomStructure::ChiStar => f.write_str("χ*"),
            HomStructure::ChiStarPlusBordism { rank: Some(r) } => {
                write!(f, "χ* ⊕ Hom(Ω, R₊) (bordism rank {r})")
            }
            HomStructure::ChiStarPlusBordism { rank: None } => f.write_str("χ* ⊕ Hom(Ω, R₊)"),
        }
    }
}

/// Configured ranks of the oriented bordism groups in dimensions 4 and 8.
/// These are external facts, not derived here.
pub const DEFAULT_BORDISM_RANKS: [(u32, u32); 2] = [(4, 1), (8, 2)];

pub fn hom_structure_with(n: u32, ranks: &[(u32, u32)]) -> HomStructure {
    match n % 4 {
        1 | 3 => HomStructure::Zero,
        2 => HomStructure::ChiStar,
        _ => HomStructure::ChiStarPlusBordism {
            rank: ranks.iter().find(|(d, _)| *d == n).map(|&(_, r)| r),
        },
    }
}

pub fn hom_structure(n: u32) -> HomStructure {
    hom_structure_with(n, &DEFAULT_BORDISM_RANKS)
}

/// The bordism class of a closed 4-manifold, detected by σ.
pub fn bordism_projection(m: &ClosedManifold) -> Result<i64, SkkError> {
    if m.dim() != 4 {
        return Err(SkkError::UnsupportedDimension(m.dim()));
    }
    m.check_closed()?;
    m.sigma()
}

/// Random cut and paste sequences on surfaces of genus at most
/// `max_genus` with at most `max_components` components. χ must be
/// constant along every sequence, and closed endpoints must be
/// SK-equivalent to the start.
pub fn cut_paste_invariance(
    seed: u64,
    runs: usize,
    max_genus: u32,
    max_components: usize,
    max_moves: usize,
) -> CheckOutcome {
    let mut rng = seeded(seed);
    let mut out = CheckOutcome::new("cut and paste preserves χ");
    let within = |s: &Surface| {
        s.components().len() <= max_components
            && s.components().iter().all(|c| c.genus <= max_genus)
    };
    for _ in 0..runs {
        let start = loop {
            let s = random_surface(&mut rng, max_components, max_genus, 3);
            if s.is_closed() || s.circle_count().is_multiple_of(2) {
                break s;
            }
        };
        let mut cur = start.clone();
        let moves = rng.gen_range(1..=max_moves);
        for _ in 0..moves {
            let next = (0..20).find_map(|_| {
                let m = random_move(&mut rng, &cur)?;
                cur.apply(&m).ok().filter(within).map(|s| (m, s))
            });
            let Some((m, next)) = next else { break };
            out.record(next.chi() == cur.chi(), || {
                format!("{cur} --{m:?}--> {next}: χ {} ≠ {}", cur.chi(), next.chi())
            });
            cur = next;
        }
        if start.is_closed() && cur.is_closed() {
            let same = crate::surfaces::sk_equivalent(&start, &cur) == Ok(true);
            out.record(same, || format!("{start} and {cur} are not SK-equivalent"));
        }
    }
    out
}

/// Glues `m` to `n` by sending circle `i` of `m` to circle `perm[i]` of `n`.
fn glue_along(m: &Surface, n: &Surface, perm: &[usize]) -> Result<Surface, SurfaceError> {
    let k = m.circle_count();
    m.disjoint_union(n).paste(&crate::surfaces::PasteSpec {
        pairs: perm.iter().enumerate().map(|(i, &j)| (i, k + j)).collect(),
    })
}

fn random_piece(rng: &mut crate::SeededRng, circles: usize) -> Surface {
    let k = rng.gen_range(1..=circles.clamp(1, 3));
    let mut counts = vec![0u32; k];
    for c in counts.iter_mut() {
        *c = 1;
    }
    for _ in k..circles {
        let i = rng.gen_range(0..k);
        counts[i] += 1;
    }
    Surface::new(
        counts
            .into_iter()
            .map(|b| Component::new(rng.gen_range(0..3), b))
            .collect(),
    )
}

/// The SKK error-term property in dimension 2. For pieces `M, M'` with
/// the same boundary and `N, N'` with the same boundary, and two gluings
/// `f, g`, the class differences `[M ∪_f N] − [M ∪_g N]` and
/// `[M' ∪_f N'] − [M' ∪_g N']` agree.
pub fn error_term_property(seed: u64, trials: usize) -> CheckOutcome {
    use rand::seq::SliceRandom;
    let mut rng = seeded(seed);
    let mut out = CheckOutcome::new("SKK error term depends only on the gluings");
    for _ in 0..trials {
        let circles = rng.gen_range(1..=5usize);
        let m = random_piece(&mut rng, circles);
        let n = random_piece(&mut rng, circles);
        let m2 = random_piece(&mut rng, circles);
        let n2 = random_piece(&mut rng, circles);
        let mut f: Vec<usize> = (0..circles).collect();
        let mut g = f.clone();
        f.shuffle(&mut rng);
        g.shuffle(&mut rng);
        let class = |a: &Surface, b: &Surface, p: &[usize]| {
            glue_along(a, b, p)
                .map_err(SkkError::from)
                .and_then(|s| skk_class(&ClosedManifold::Surface(s)))
        };
        let lhs = class(&m, &n, &f).and_then(|x| Ok(x.checked_sub(class(&m, &n, &g)?)));
        let rhs = class(&m2, &n2, &f).and_then(|x| Ok(x.checked_sub(class(&m2, &n2, &g)?)));
        out.record(lhs.is_ok() && lhs == rhs, || {
            format!("M = {m}, N = {n}, M' = {m2}, N' = {n2}: {lhs:?} vs {rhs:?}")
        });
    }
    out
}

/// Dimension-4 classes of a few standard fixtures, as a sanity table.
pub fn fixture_classes() -> Vec<(String, Result<SkkClass, SkkError>)> {
    use crate::fixtures;
    vec![
        (
            "S4".to_string(),
            skk_class(&ClosedManifold::Complex(fixtures::sphere4())),
        ),
        (
            "CP2".to_string(),
            skk_class(&ClosedManifold::Complex(fixtures::cp2_9())),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn surf(s: Surface) -> ClosedManifold {
        ClosedManifold::Surface(s)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn skk_class_examples() {
        assert_eq!(skk_class(&surf(Surface::torus())), Ok(SkkClass::Dim2(0)));
        let two = Surface::sphere().disjoint_union(&Surface::sphere());
        assert_eq!(skk_class(&surf(two)), Ok(SkkClass::Dim2(2)));
        assert_eq!(
            skk_class(&ClosedManifold::Complex(fixtures::cp2_9())),
            Ok(SkkClass::Dim4 { chi: 3, sigma: 1 })
        );
        let circles = fixtures::circle3()
            .disjoint_union(&fixtures::circle3())
            .unwrap();
        assert_eq!(
            skk_class(&ClosedManifold::Complex(circles)),
            Ok(SkkClass::Dim1(0))
        );
        assert_eq!(
            skk_class(&ClosedManifold::Complex(fixtures::circle3())),
            Ok(SkkClass::Dim1(1))
        );
        assert_eq!(
            skk_class(&ClosedManifold::Complex(fixtures::sphere3())),
            Err(SkkError::UnsupportedDimension(3))
        );
        assert_eq!(
            skk_class(&surf(Surface::connected(0, 1))),
            Err(SkkError::NotClosed)
        );
        assert_eq!(
            skk_class(&ClosedManifold::Complex(fixtures::rp2_6())),
            Err(SkkError::Simplicial(SimplicialError::NotOrientable))
        );
    }

    #[test]
    fn skk_additivity() {
        let a = ClosedManifold::Complex(fixtures::cp2_9());
        let b = ClosedManifold::Complex(fixtures::sphere4());
        let ab = ClosedManifold::Complex(
            fixtures::cp2_9()
                .disjoint_union(&fixtures::sphere4())
                .unwrap(),
        );
        assert_eq!(
            skk_class(&ab).unwrap(),
            skk_class(&a)
                .unwrap()
                .checked_add(skk_class(&b).unwrap())
                .unwrap()
        );
        let s = Surface::torus();
        let t = Surface::closed_genus(3);
        assert_eq!(
            skk_class(&surf(s.disjoint_union(&t))).unwrap(),
            skk_class(&surf(s))
                .unwrap()
                .checked_add(skk_class(&surf(t)).unwrap())
                .unwrap()
        );
    }

    #[test]
    fn sk_class_examples() {
        assert_eq!(
            sk_class(&ClosedManifold::Complex(fixtures::sphere4())),
            Ok(SkClass::Dim4 {
                half_difference: 1,
                sigma: 0
            })
        );
        assert_eq!(
            sk_class(&ClosedManifold::Complex(fixtures::cp2_9())),
            Ok(SkClass::Dim4 {
                half_difference: 1,
                sigma: 1
            })
        );
        assert_eq!(sk_class(&surf(Surface::sphere())), Ok(SkClass::Dim2(1)));
        let odd = VirtualPiece::new("X", 4, 2, 1, vec![], Default::default()).unwrap();
        assert_eq!(
            sk_class(&ClosedManifold::Piece(odd)),
            Err(SkkError::OddParity(1))
        );
    }

    #[test]
    fn i_n_examples() {
        assert_eq!(i_n_table(2), IGroup::Integers);
        assert_eq!(i_n_table(5), IGroup::Mod2);
        assert_eq!(i_n_table(3), IGroup::Zero);
        assert_eq!(i_n_table(4), IGroup::Integers);
        assert_eq!(i_n_table(1), IGroup::Mod2);
    }

    #[test]
    fn psi_examples() {
        let t = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(3, 1)).unwrap();
        assert_eq!(
            psi(&t).value(&surf(Surface::sphere())),
            Ok(GroupScalar::ratio(6, 1))
        );
        assert_eq!(
            psi(&t).value(&surf(Surface::closed_genus(2))),
            Ok(GroupScalar::ratio(1, 6))
        );
        let k = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(1, 2)).unwrap();
        let mut rng = seeded(1);
        let samples = sample_surfaces(&mut rng, 5);
        assert!(is_trivial(&psi(&k), &samples));
        let u = InvertibleTqft2::new(GroupScalar::ratio(-5, 3), GroupScalar::ratio(7, 2)).unwrap();
        let lhs = psi(&t.product(&u).unwrap());
        let rhs = psi(&t).product(&psi(&u)).unwrap();
        assert!(agree(&lhs, &rhs, &samples).is_ok());
        // constant on SK-equivalent surfaces
        let x = surf(Surface::torus());
        let y = surf(Surface::sphere().disjoint_union(&Surface::closed_genus(2)));
        assert_eq!(psi(&u).value(&x), psi(&u).value(&y));
    }

    #[test]
    fn abs_psi_examples() {
        let minus = InvertibleTqft2::new(
            GroupScalar::signed_exp(true, q(0, 1)),
            GroupScalar::exp_int(0),
        )
        .unwrap();
        let mut rng = seeded(2);
        let samples = sample_surfaces(&mut rng, 3);
        assert!(is_trivial(&abs_psi(&minus), &samples));
        assert!(!is_trivial(&psi(&minus), &samples));
        let t = InvertibleTqft2::new(GroupScalar::exp_int(1), GroupScalar::exp_int(0)).unwrap();
        for g in 0..4 {
            let m = surf(Surface::closed_genus(g));
            assert_eq!(
                abs_psi(&t).value(&m),
                Ok(GroupScalar::exp_int(1 - g as i64))
            );
        }
    }

    #[test]
    fn kernel_membership_examples() {
        let t = |a, e| InvertibleTqft2::new(a, e).unwrap();
        assert!(kernel_membership(&t(
            GroupScalar::signed_exp(true, q(0, 1)),
            GroupScalar::exp_int(0)
        )));
        assert!(kernel_membership(&t(
            GroupScalar::exp_int(1),
            GroupScalar::exp_int(-1)
        )));
        assert!(!kernel_membership(&t(
            GroupScalar::exp_int(1),
            GroupScalar::exp_int(0)
        )));
    }

    #[test]
    fn splitting_dim2() {
        let xi = SkkInvariant::exp_chi(2, q(1, 1));
        let s = split_dim2(&xi).unwrap();
        assert_eq!(
            s,
            InvertibleTqft2::new(GroupScalar::exp_int(1), GroupScalar::exp_int(1)).unwrap()
        );
        assert_eq!(
            psi(&s).value(&surf(Surface::sphere())),
            Ok(GroupScalar::exp_int(2))
        );
        let handle = crate::cobordism::parse_word("copants ; pants").unwrap();
        use crate::tqft::WordEvaluator;
        assert_eq!(s.evaluate(&handle), Ok(GroupScalar::exp_int(-2)));
        let trivial = SkkInvariant::trivial(2, ScalarKind::Exp);
        assert_eq!(
            split_dim2(&trivial).unwrap(),
            InvertibleTqft2::trivial(ScalarKind::Exp)
        );
        let bad = SkkInvariant::exp_of(2, LinearInvariant::Sigma, q(1, 1));
        assert!(matches!(
            split_dim2(&bad),
            Err(SkkError::InvalidDescriptor(_))
        ));
    }

    #[test]
    fn splitting_dim4() {
        let c4 = Catalog::dim4();
        let xi = SkkInvariant::exp_of(4, LinearInvariant::Sigma, q(1, 1));
        let s = VirtualSplitting::new(&xi, &c4).unwrap();
        assert_eq!(
            s.evaluate(c4.piece("D4").unwrap()),
            Ok(GroupScalar::exp_int(0))
        );
        assert_eq!(
            s.evaluate(c4.piece("CP2").unwrap()),
            Ok(GroupScalar::exp_int(1))
        );
        assert_eq!(
            s.evaluate(c4.piece("CP2-D4").unwrap()),
            Ok(GroupScalar::exp_int(1))
        );
        // on closed pieces |Ψ| ∘ S = ξ
        for name in ["S4", "CP2"] {
            let p = c4.piece(name).unwrap();
            assert_eq!(
                s.evaluate(p).unwrap(),
                xi.value(&ClosedManifold::Piece(p.clone())).unwrap()
            );
        }
        let mixed = SkkInvariant::exp_chi(4, q(1, 2))
            .product(&SkkInvariant::exp_of(4, LinearInvariant::Sigma, q(3, 1)))
            .unwrap();
        let s = VirtualSplitting::new(&mixed, &c4).unwrap();
        assert_eq!(
            s.evaluate(c4.piece("D4").unwrap()),
            Ok(GroupScalar::exp(q(1, 2)))
        );
    }

    #[test]
    fn chi_must_bypass_close_up() {
        let c4 = Catalog::dim4();
        let d4 = c4.piece("D4").unwrap();
        let direct = VirtualSplitting::new(&SkkInvariant::exp_chi(4, q(1, 1)), &c4)
            .unwrap()
            .evaluate(d4)
            .unwrap();
        assert_eq!(direct, GroupScalar::exp_int(1));
        let wrong = chi_through_close_up(&q(1, 1), &c4, d4).unwrap();
        assert_eq!(wrong, GroupScalar::exp_int(2));
        // the cylinder D4 ∪ D̄4 along S3 would have to be sent to 1, and is not
        let cyl = VirtualPiece::new(
            "S3xI",
            4,
            0,
            0,
            vec![
                crate::virtual_bordism::BoundaryLabel::negative("S3"),
                crate::virtual_bordism::BoundaryLabel::positive("S3"),
            ],
            Default::default(),
        )
        .unwrap();
        assert!(!chi_through_close_up(&q(1, 1), &c4, &cyl).unwrap().is_one());
        let s = VirtualSplitting::new(&SkkInvariant::exp_chi(4, q(1, 1)), &c4).unwrap();
        assert!(s.evaluate(&cyl).unwrap().is_one());
    }

    #[test]
    fn split_sequence() {
        let grid: Vec<i64> = (-4..=4).collect();
        let report = verify_split_sequence(&grid, 3, split_dim2);
        assert!(report.passed(), "{report:?}");
        let bad = verify_split_sequence(&grid, 3, corrupted_split_dim2);
        assert!(!bad.section.passed());
        assert!(bad.kernel_is_image.passed());
        assert!(bad.homomorphism.passed());
    }

    #[test]
    fn b_sigma_demo() {
        let (a, b) = b_sigma_dependence_demo().unwrap();
        assert_eq!(a, GroupScalar::exp_int(0));
        assert_eq!(b, GroupScalar::exp_int(10));
        let c = Catalog::dim8();
        let (b2, a2) = b_sigma_dependence(&c, "D8", "p2", "CP4-D8", "D8").unwrap();
        assert_eq!((a2, b2), (a, b));
        let xi = SkkInvariant::exp_of(8, LinearInvariant::Attribute("p2".into()), q(1, 1));
        for choice in ["D8", "CP4-D8"] {
            let cat = c.with_b_sigma("S7", choice).unwrap();
            let s = VirtualSplitting::new(&xi, &cat).unwrap();
            assert!(s.evaluate(c.piece("S8").unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn hom_structure_examples() {
        assert_eq!(hom_structure(3), HomStructure::Zero);
        assert_eq!(hom_structure(2), HomStructure::ChiStar);
        assert_eq!(
            hom_structure(4),
            HomStructure::ChiStarPlusBordism { rank: Some(1) }
        );
        assert_eq!(
            hom_structure(12),
            HomStructure::ChiStarPlusBordism { rank: None }
        );
    }

    #[test]
    fn bordism_projection_examples() {
        assert_eq!(
            bordism_projection(&ClosedManifold::Complex(fixtures::cp2_9())),
            Ok(1)
        );
        assert_eq!(
            bordism_projection(&ClosedManifold::Complex(fixtures::sphere4())),
            Ok(0)
        );
        let both = fixtures::cp2_9()
            .disjoint_union(&fixtures::cp2_9().reversed())
            .unwrap();
        assert_eq!(bordism_projection(&ClosedManifold::Complex(both)), Ok(0));
        assert_eq!(
            bordism_projection(&surf(Surface::torus())),
            Err(SkkError::UnsupportedDimension(2))
        );
    }

    #[test]
    fn random_property_suites() {
        let c = cut_paste_invariance(4, 200, 5, 4, 12);
        assert!(c.passed(), "{c}");
        assert!(c.samples > 200);
        let e = error_term_property(4, 500);
        assert!(e.passed(), "{e}");
    }
}
