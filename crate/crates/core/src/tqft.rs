//! Invertible 2-dimensional TQFTs over exact scalar groups.
//!
//! An invertible TQFT sends every surface to a nonzero scalar. Once cap and
//! cup are fixed at `a` and `e`, the cylinder identities force
//! `pants ↦ a⁻¹` and `copants ↦ e⁻¹`, so the pair `(a, e)` is the whole
//! theory. Scalars are exact rationals, or signed powers `±exp(r)` with `r`
//! rational.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::cobordism::{
    canonical_word, close_off, compose, normal_form, parse_word, random_closed_word,
    random_rewrite, random_word, tensor, CobordismWord, Generator,
};
use crate::report::CheckOutcome;
use crate::rng::seeded;
use crate::surfaces::{random_surface, PasteSpec, Surface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TqftError {
    #[error("scalars of different kinds: {0} and {1}")]
    VariantMismatch(ScalarKind, ScalarKind),
    #[error("zero is not invertible")]
    ZeroScalar,
    #[error("{0} has no exact root of that order")]
    FractionalExponent(String),
    #[error("evaluation needs a 2-dimensional word, got dimension {0}")]
    WrongDimension(u8),
    #[error("not in the kernel: {0}")]
    NotInKernel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Rational,
    Exp,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Exp => "exponential",
        })
    }
}

/// Element of the target group: a nonzero rational, or `±exp(r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupScalar {
    Rational(BigRational),
    Exp {
        negative: bool,
        exponent: BigRational,
    },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GroupScalar {
    pub fn rational(q: BigRational) -> Result<Self, TqftError> {
        if q.is_zero() {
            return Err(TqftError::ZeroScalar);
        }
        Ok(GroupScalar::Rational(q))
    }

    /// `n / d` as a rational scalar. Panics on a zero numerator or
    /// denominator.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(n != 0 && d != 0, "scalar must be a nonzero ratio");
        GroupScalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn exp(exponent: BigRational) -> Self {
        GroupScalar::Exp {
            negative: false,
            exponent,
        }
    }

    pub fn signed_exp(negative: bool, exponent: BigRational) -> Self {
        GroupScalar::Exp { negative, exponent }
    }

    pub fn exp_int(n: i64) -> Self {
        Self::exp(rat(n))
    }

    pub fn one(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => GroupScalar::Rational(BigRational::one()),
            ScalarKind::Exp => Self::exp(BigRational::zero()),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            GroupScalar::Rational(_) => ScalarKind::Rational,
            GroupScalar::Exp { .. } => ScalarKind::Exp,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            GroupScalar::Rational(q) => q.is_one(),
            GroupScalar::Exp { negative, exponent } => !negative && exponent.is_zero(),
        }
    }

    pub fn try_mul(&self, other: &GroupScalar) -> Result<GroupScalar, TqftError> {
        match (self, other) {
            (GroupScalar::Rational(x), GroupScalar::Rational(y)) => {
                Ok(GroupScalar::Rational(x * y))
            }
            (
                GroupScalar::Exp {
                    negative: s,
                    exponent: x,
                },
                GroupScalar::Exp {
                    negative: t,
                    exponent: y,
                },
            ) => Ok(GroupScalar::Exp {
                negative: s ^ t,
                exponent: x + y,
            }),
            _ => Err(TqftError::VariantMismatch(self.kind(), other.kind())),
        }
    }

    pub fn inverse(&self) -> GroupScalar {
        match self {
            GroupScalar::Rational(q) => GroupScalar::Rational(q.recip()),
            GroupScalar::Exp { negative, exponent } => GroupScalar::Exp {
                negative: *negative,
                exponent: -exponent,
            },
        }
    }

    pub fn pow(&self, n: i64) -> GroupScalar {
        match self {
            GroupScalar::Rational(q) => {
                let base = if n < 0 { q.recip() } else { q.clone() };
                GroupScalar::Rational(num_traits::pow(base, n.unsigned_abs() as usize))
            }
            GroupScalar::Exp { negative, exponent } => GroupScalar::Exp {
                negative: *negative && n % 2 != 0,
                exponent: exponent * rat(n),
            },
        }
    }

    /// `self^r` when it exists exactly in the same group.
    pub fn pow_rational(&self, r: &BigRational) -> Result<GroupScalar, TqftError> {
        let (p, q) = (r.numer(), r.denom());
        let odd = |x: &BigInt| x % 2 != BigInt::zero();
        let p_small = || -> Result<i64, TqftError> {
            i64::try_from(p).map_err(|_| TqftError::FractionalExponent(self.to_string()))
        };
        match self {
            GroupScalar::Exp { negative, exponent } => {
                let negative = if *negative && odd(p) {
                    if !odd(q) {
                        return Err(TqftError::FractionalExponent(self.to_string()));
                    }
                    true
                } else {
                    false
                };
                Ok(GroupScalar::Exp {
                    negative,
                    exponent: exponent * r,
                })
            }
            GroupScalar::Rational(x) => {
                let order = u32::try_from(q)
                    .map_err(|_| TqftError::FractionalExponent(self.to_string()))?;
                let root = |v: &BigInt| -> Option<BigInt> {
                    let w = v.abs().nth_root(order);
                    (num_traits::pow(w.clone(), order as usize) == v.abs()).then_some(w)
                };
                let (Some(n), Some(d)) = (root(x.numer()), root(x.denom())) else {
                    return Err(TqftError::FractionalExponent(self.to_string()));
                };
                let n = if x.is_negative() {
                    if order % 2 == 0 {
                        return Err(TqftError::FractionalExponent(self.to_string()));
                    }
                    -n
                } else {
                    n
                };
                Ok(GroupScalar::Rational(BigRational::new(n, d)).pow(p_small()?))
            }
        }
    }

    pub fn abs(&self) -> GroupScalar {
        match self {
            GroupScalar::Rational(q) => GroupScalar::Rational(q.abs()),
            GroupScalar::Exp { exponent, .. } => GroupScalar::exp(exponent.clone()),
        }
    }
}

impl GroupScalar {
    /// Like `Display`, but exponentials always print as `exp(r)`.
    pub fn exp_form(&self) -> String {
        match self {
            GroupScalar::Exp { negative, exponent } => {
                format!("{}exp({exponent})", if *negative { "-" } else { "" })
            }
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for GroupScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupScalar::Rational(q) => write!(f, "{q}"),
            GroupScalar::Exp { negative, exponent } => {
                let sign = if *negative { "-" } else { "" };
                if exponent.is_zero() {
                    write!(f, "{sign}1")
                } else {
                    write!(f, "{sign}exp({exponent})")
                }
            }
        }
    }
}

fn product<'a>(
    kind: ScalarKind,
    values: impl IntoIterator<Item = &'a GroupScalar>,
) -> Result<GroupScalar, TqftError> {
    values
        .into_iter()
        .try_fold(GroupScalar::one(kind), |acc, v| acc.try_mul(v))
}

/// Anything that assigns scalars to 2-dimensional cobordism words.
pub trait WordEvaluator {
    fn kind(&self) -> ScalarKind;
    fn evaluate(&self, word: &CobordismWord) -> Result<GroupScalar, TqftError>;
}

/// The invertible TQFT with `cap ↦ a` and `cup ↦ e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvertibleTqft2 {
    cap: GroupScalar,
    cup: GroupScalar,
}

impl InvertibleTqft2 {
    pub fn new(cap: GroupScalar, cup: GroupScalar) -> Result<Self, TqftError> {
        if cap.kind() != cup.kind() {
            return Err(TqftError::VariantMismatch(cap.kind(), cup.kind()));
        }
        Ok(InvertibleTqft2 { cap, cup })
    }

    pub fn trivial(kind: ScalarKind) -> Self {
        InvertibleTqft2 {
            cap: GroupScalar::one(kind),
            cup: GroupScalar::one(kind),
        }
    }

    pub fn cap(&self) -> &GroupScalar {
        &self.cap
    }

    pub fn cup(&self) -> &GroupScalar {
        &self.cup
    }

    pub fn product(&self, other: &InvertibleTqft2) -> Result<Self, TqftError> {
        Ok(InvertibleTqft2 {
            cap: self.cap.try_mul(&other.cap)?,
            cup: self.cup.try_mul(&other.cup)?,
        })
    }

    pub fn inverse(&self) -> Self {
        InvertibleTqft2 {
            cap: self.cap.inverse(),
            cup: self.cup.inverse(),
        }
    }

    pub fn value(&self, g: Generator) -> GroupScalar {
        match g {
            Generator::Cap => self.cap.clone(),
            Generator::Cup => self.cup.clone(),
            Generator::Pants => self.cap.inverse(),
            Generator::Copants => self.cup.inverse(),
            _ => GroupScalar::one(self.cap.kind()),
        }
    }

    /// `a·e`, the value on the sphere.
    pub fn sphere_value(&self) -> GroupScalar {
        self.cap.try_mul(&self.cup).expect("same kind")
    }

    /// `(a·e)^(1−g)`: the value on a closed connected genus `g` surface.
    pub fn closed_value(&self, genus: u32) -> GroupScalar {
        self.sphere_value().pow(1 - genus as i64)
    }
}

impl WordEvaluator for InvertibleTqft2 {
    fn kind(&self) -> ScalarKind {
        self.cap.kind()
    }

    fn evaluate(&self, word: &CobordismWord) -> Result<GroupScalar, TqftError> {
        if word.dim() != 2 {
            return Err(TqftError::WrongDimension(word.dim()));
        }
        let caps = word.count(Generator::Cap) as i64 - word.count(Generator::Pants) as i64;
        let cups = word.count(Generator::Cup) as i64 - word.count(Generator::Copants) as i64;
        self.cap.pow(caps).try_mul(&self.cup.pow(cups))
    }
}

/// Free per-generator values, for testing which assignments are TQFTs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorAssignment {
    /// Values of id, swap, cap, cup, pants, copants.
    pub values: [GroupScalar; 6],
}

impl GeneratorAssignment {
    pub fn from_tqft(t: &InvertibleTqft2) -> Self {
        GeneratorAssignment {
            values: [
                Generator::Id,
                Generator::Swap,
                Generator::Cap,
                Generator::Cup,
                Generator::Pants,
                Generator::Copants,
            ]
            .map(|g| t.value(g)),
        }
    }

    /// The deliberately wrong assignment `pants ↦ a`.
    pub fn corrupted(t: &InvertibleTqft2) -> Self {
        let mut a = Self::from_tqft(t);
        a.values[4] = t.cap().clone();
        a
    }

    fn index(g: Generator) -> Option<usize> {
        Some(match g {
            Generator::Id => 0,
            Generator::Swap => 1,
            Generator::Cap => 2,
            Generator::Cup => 3,
            Generator::Pants => 4,
            Generator::Copants => 5,
            _ => return None,
        })
    }

    /// Whether this is the assignment of the TQFT `(cap, cup)`.
    pub fn as_tqft(&self) -> Option<InvertibleTqft2> {
        let t = InvertibleTqft2::new(self.values[2].clone(), self.values[3].clone()).ok()?;
        (Self::from_tqft(&t) == *self).then_some(t)
    }
}

impl WordEvaluator for GeneratorAssignment {
    fn kind(&self) -> ScalarKind {
        self.values[0].kind()
    }

    fn evaluate(&self, word: &CobordismWord) -> Result<GroupScalar, TqftError> {
        if word.dim() != 2 {
            return Err(TqftError::WrongDimension(word.dim()));
        }
        let values: Vec<&GroupScalar> = word
            .generators()
            .map(|g| &self.values[Self::index(g).expect("dimension 2")])
            .collect();
        product(self.kind(), values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<CheckOutcome>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_witness(&self) -> Option<&str> {
        self.checks
            .iter()
            .flat_map(|c| c.witnesses.iter())
            .next()
            .map(String::as_str)
    }
}

fn eval(t: &impl WordEvaluator, w: &CobordismWord) -> GroupScalar {
    t.evaluate(w).expect("2-dimensional word of matching kind")
}

fn mul(x: &GroupScalar, y: &GroupScalar) -> GroupScalar {
    x.try_mul(y).expect("same kind")
}

/// Value of the word rebuilt from its normal form.
fn eval_class(t: &impl WordEvaluator, w: &CobordismWord) -> GroupScalar {
    let canon = canonical_word(&normal_form(w).expect("valid word")).expect("dimension 2");
    eval(t, &canon)
}

fn small_cylinders() -> Vec<CobordismWord> {
    [
        "id",
        "cap | id ; pants",
        "id | cap ; pants",
        "copants ; id | cup",
        "copants ; cup | id",
        "cap | id ; swap ; pants",
    ]
    .iter()
    .map(|s| parse_word(s).expect("valid word"))
    .collect()
}

/// Samples `budget` random words per law and checks equivalence
/// invariance, functoriality, monoidality, the cylinder law and the empty
/// law. Composites are compared through their normal forms, so an
/// evaluator that is not a functor on the cobordism category is caught
/// even though it multiplies along words.
pub fn verify_axioms(t: &impl WordEvaluator, seed: u64, budget: usize) -> AxiomReport {
    let mut rng = seeded(seed);
    let mut equivalence = CheckOutcome::new("equivalence invariance");
    let mut functoriality = CheckOutcome::new("functoriality");
    let mut monoidality = CheckOutcome::new("monoidality");
    let mut cylinder = CheckOutcome::new("cylinder law");
    let mut empty = CheckOutcome::new("empty manifold law");

    let e = eval(t, &CobordismWord::empty(2));
    empty.record(e.is_one(), || format!("empty word: {e} ≠ 1"));
    for c in small_cylinders() {
        let v = eval(t, &c);
        cylinder.record(v.is_one(), || format!("{c}: {v} ≠ 1"));
    }

    for _ in 0..budget {
        let inputs = rng.gen_range(0..3);
        let h = rng.gen_range(1..6);
        let w = random_word(&mut rng, inputs, h, 5);

        let mut rewritten = w.clone();
        for _ in 0..rng.gen_range(1..5) {
            rewritten = random_rewrite(&mut rng, &rewritten).0;
        }
        let (x, y) = (eval(t, &w), eval(t, &rewritten));
        equivalence.record(x == y, || format!("{w} vs {rewritten}: {x} ≠ {y}"));
        let z = eval_class(t, &w);
        equivalence.record(x == z, || format!("{w} vs its normal form: {x} ≠ {z}"));

        let h = rng.gen_range(1..5);
        let v = random_word(&mut rng, w.out_arity(), h, 5);
        let composite = compose(&w, &v).expect("arities agree");
        let lhs = eval_class(t, &composite);
        let rhs = mul(&eval_class(t, &w), &eval_class(t, &v));
        functoriality.record(lhs == rhs, || format!("({w}) then ({v}): {lhs} ≠ {rhs}"));

        let k0 = rng.gen_range(0..3);
        let h = rng.gen_range(1..5);
        let u = random_word(&mut rng, k0, h, 4);
        let side = tensor(&w, &u).expect("same dimension");
        let lhs = eval_class(t, &side);
        let rhs = mul(&eval_class(t, &w), &eval_class(t, &u));
        monoidality.record(lhs == rhs, || format!("({w}) beside ({u}): {lhs} ≠ {rhs}"));

        let n = w.out_arity();
        if n > 0 {
            let with_id = compose(&w, &CobordismWord::identity(2, n)).expect("arities agree");
            let lhs = eval_class(t, &with_id);
            let rhs = eval_class(t, &w);
            cylinder.record(lhs == rhs, || format!("({w}) then identity: {lhs} ≠ {rhs}"));
        }
    }
    AxiomReport {
        checks: vec![equivalence, functoriality, monoidality, cylinder, empty],
    }
}

/// Checks `T(M) = (a·e)^(1−g)` per component on random closed words.
pub fn check_closed_law(t: &InvertibleTqft2, seed: u64, budget: usize) -> CheckOutcome {
    let mut rng = seeded(seed);
    let mut out = CheckOutcome::new("closed value law");
    for _ in 0..budget {
        let h = rng.gen_range(1..8);
        let w = random_closed_word(&mut rng, h, 5);
        let class = normal_form(&w).expect("valid word");
        let expected: Vec<GroupScalar> = class
            .closed_genera()
            .into_iter()
            .map(|g| t.closed_value(g))
            .collect();
        let expected = product(t.kind(), &expected).expect("same kind");
        let got = eval(t, &w);
        out.record(got == expected, || format!("{w}: {got} ≠ {expected}"));
    }
    out
}

/// Compact 1-manifold: arcs and circles. Arc `i` has endpoints `2i` and
/// `2i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OneManifold {
    pub arcs: u32,
    pub circles: u32,
}

impl OneManifold {
    pub fn chi(&self) -> i64 {
        self.arcs as i64
    }

    /// Glues endpoints of `self` to endpoints of `other` along `pairs`.
    /// A component is a circle when it has as many glued pairs as arcs.
    pub fn glue(&self, other: &OneManifold, pairs: &[(usize, usize)]) -> OneManifold {
        let n = (self.arcs + other.arcs) as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, j) in pairs {
            let (ra, rb) = (
                find(&mut parent, i / 2),
                find(&mut parent, self.arcs as usize + j / 2),
            );
            parent[ra] = rb;
        }
        let mut arcs_in = vec![0usize; n];
        let mut glued_in = vec![0usize; n];
        for v in 0..n {
            arcs_in[find(&mut parent, v)] += 1;
        }
        for &(i, _) in pairs {
            glued_in[find(&mut parent, i / 2)] += 1;
        }
        let mut result = OneManifold {
            arcs: 0,
            circles: self.circles + other.circles,
        };
        for (&a, &g) in arcs_in.iter().zip(&glued_in) {
            if a == 0 {
                continue;
            }
            if g == a {
                result.circles += 1;
            } else {
                result.arcs += 1;
            }
        }
        result
    }
}

impl fmt::Display for OneManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let noun = |n: u32, one: &str, many: &str| match n {
            1 => format!("an {one}").replace("an circle", "a circle"),
            _ => format!("{n} {many}"),
        };
        match (self.arcs, self.circles) {
            (0, 0) => f.write_str("empty"),
            (a, 0) => f.write_str(&noun(a, "arc", "arcs")),
            (0, c) => f.write_str(&noun(c, "circle", "circles")),
            (a, c) => write!(
                f,
                "{} and {}",
                noun(a, "arc", "arcs"),
                noun(c, "circle", "circles")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CompactManifold {
    Curve(OneManifold),
    Surface(Surface),
}

impl CompactManifold {
    pub fn chi(&self) -> i64 {
        match self {
            CompactManifold::Curve(c) => c.chi(),
            CompactManifold::Surface(s) => s.chi(),
        }
    }
}

impl fmt::Display for CompactManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactManifold::Curve(c) => write!(f, "{c}"),
            CompactManifold::Surface(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaReport {
    pub holds: bool,
    pub samples: usize,
    pub witness: Option<String>,
}

/// `exp(χ(·))`.
pub fn theta_exp_chi(m: &CompactManifold) -> GroupScalar {
    GroupScalar::exp_int(m.chi())
}

fn describe_pair(m: &CompactManifold, n: &CompactManifold) -> String {
    if m == n {
        if let CompactManifold::Curve(OneManifold {
            arcs: 1,
            circles: 0,
        }) = m
        {
            return "two arcs".into();
        }
        if let CompactManifold::Surface(s) = m {
            if s.components() == [crate::surfaces::Component::DISK] {
                return "two disks".into();
            }
        }
    }
    format!("{m} and {n}")
}

fn describe_result(r: &CompactManifold) -> String {
    match r {
        CompactManifold::Surface(s) if *s == Surface::sphere() => "a sphere".into(),
        _ => r.to_string(),
    }
}

/// Tests multiplicativity `Θ(M ∪ N) = Θ(M)·Θ(N)` on sampled gluings of
/// two pieces along matched boundary. The first probe is always two disks
/// (or two arcs) glued along their whole boundary.
pub fn check_theta_defines_tqft(
    theta: impl Fn(&CompactManifold) -> GroupScalar,
    dim: u8,
    seed: u64,
    budget: usize,
) -> ThetaReport {
    let mut rng = seeded(seed);
    let mut samples = 0;
    for i in 0..budget {
        let (m, n, glued) = if dim == 1 {
            let (m, n) = if i == 0 {
                (
                    OneManifold {
                        arcs: 1,
                        circles: 0,
                    },
                    OneManifold {
                        arcs: 1,
                        circles: 0,
                    },
                )
            } else {
                let mut piece = || OneManifold {
                    arcs: rng.gen_range(1..4),
                    circles: rng.gen_range(0..2),
                };
                (piece(), piece())
            };
            let k = if i == 0 {
                2
            } else {
                rng.gen_range(1..=2 * m.arcs.min(n.arcs) as usize)
            };
            let pairs = random_pairs(
                &mut rng,
                2 * m.arcs as usize,
                2 * n.arcs as usize,
                k,
                i == 0,
            );
            let g = m.glue(&n, &pairs);
            (
                CompactManifold::Curve(m),
                CompactManifold::Curve(n),
                CompactManifold::Curve(g),
            )
        } else {
            let (m, n) = if i == 0 {
                (Surface::connected(0, 1), Surface::connected(0, 1))
            } else {
                let mut piece = || loop {
                    let s = random_surface(&mut rng, 2, 2, 3);
                    if s.circle_count() > 0 {
                        break s;
                    }
                };
                (piece(), piece())
            };
            let (bm, bn) = (m.circle_count(), n.circle_count());
            let k = if i == 0 {
                1
            } else {
                rng.gen_range(1..=bm.min(bn))
            };
            let pairs: Vec<(usize, usize)> = random_pairs(&mut rng, bm, bn, k, i == 0)
                .into_iter()
                .map(|(x, y)| (x, bm + y))
                .collect();
            let g = m
                .disjoint_union(&n)
                .paste(&PasteSpec { pairs })
                .expect("valid matching");
            (
                CompactManifold::Surface(m),
                CompactManifold::Surface(n),
                CompactManifold::Surface(g),
            )
        };
        samples += 1;
        let (tm, tn, tg) = (theta(&m), theta(&n), theta(&glued));
        let ok = tm.try_mul(&tn).map(|p| p == tg).unwrap_or(false);
        if !ok {
            let witness = format!(
                "{} glued to {}: {}·{} ≠ {}",
                describe_pair(&m, &n),
                describe_result(&glued),
                tm.exp_form(),
                tn.exp_form(),
                tg.exp_form()
            );
            return ThetaReport {
                holds: false,
                samples,
                witness: Some(witness),
            };
        }
    }
    ThetaReport {
        holds: true,
        samples,
        witness: None,
    }
}

// `k` pairs between `0..left` and `0..right`, injective on both sides.
fn random_pairs(
    rng: &mut impl Rng,
    left: usize,
    right: usize,
    k: usize,
    in_order: bool,
) -> Vec<(usize, usize)> {
    use rand::seq::SliceRandom;
    let mut l: Vec<usize> = (0..left).collect();
    let mut r: Vec<usize> = (0..right).collect();
    if !in_order {
        l.shuffle(rng);
        r.shuffle(rng);
    }
    l.into_iter().zip(r).take(k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryReport {
    pub pairs: CheckOutcome,
    pub closed_form: CheckOutcome,
}

impl BoundaryReport {
    pub fn passed(&self) -> bool {
        self.pairs.passed() && self.closed_form.passed()
    }
}

/// Appends merging or splitting layers until the word has `n` outputs.
fn reshape(w: &CobordismWord, n: usize) -> CobordismWord {
    let mut cur = w.clone();
    while cur.out_arity() != n {
        let width = cur.out_arity();
        let step = if width == 1 && n == 0 {
            vec![Generator::Cup]
        } else if width > n {
            let mut l = vec![Generator::Pants];
            l.extend(vec![Generator::Id; width - 2]);
            l
        } else if width == 0 {
            vec![Generator::Cap]
        } else {
            let mut l = vec![Generator::Copants];
            l.extend(vec![Generator::Id; width - 1]);
            l
        };
        let step = CobordismWord::new(2, vec![step]).expect("valid layer");
        cur = compose(&cur, &step).expect("arities agree");
    }
    cur
}

/// For a TQFT trivial on closed surfaces, the value of a word depends only
/// on its arities and equals `e^(in − out)`.
pub fn boundary_dependence_check(
    t: &InvertibleTqft2,
    seed: u64,
    budget: usize,
) -> Result<BoundaryReport, TqftError> {
    let mut rng = seeded(seed);
    for _ in 0..budget {
        let h = rng.gen_range(1..8);
        let w = random_closed_word(&mut rng, h, 5);
        let v = eval(t, &w);
        if !v.is_one() {
            return Err(TqftError::NotInKernel(format!("{w} ↦ {v}")));
        }
    }
    let mut pairs = CheckOutcome::new("boundary dependence");
    let mut closed_form = CheckOutcome::new("closed form e^(in-out)");
    for _ in 0..budget {
        let inputs = rng.gen_range(0..4);
        let h = rng.gen_range(1..6);
        let w1 = random_word(&mut rng, inputs, h, 5);
        let h = rng.gen_range(1..6);
        let w2 = reshape(&random_word(&mut rng, inputs, h, 5), w1.out_arity());
        let (x, y) = (eval(t, &w1), eval(t, &w2));
        pairs.record(x == y, || format!("{w1} vs {w2}: {x} ≠ {y}"));
        let expected = t.cup().pow(w1.in_arity() as i64 - w1.out_arity() as i64);
        closed_form.record(x == expected, || format!("{w1}: {x} ≠ {expected}"));
    }
    Ok(BoundaryReport { pairs, closed_form })
}

/// A closed word of the given genus, for demonstrations.
pub fn closed_genus_word(genus: u32) -> CobordismWord {
    close_off(&crate::cobordism::connected_word(genus, 0, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GroupScalar {
        GroupScalar::ratio(n, d)
    }

    fn t(a: GroupScalar, e: GroupScalar) -> InvertibleTqft2 {
        InvertibleTqft2::new(a, e).unwrap()
    }

    fn w(s: &str) -> CobordismWord {
        parse_word(s).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let x = t(q(2, 1), q(3, 1));
        assert_eq!(x.evaluate(&w("cap ; cup")), Ok(q(6, 1)));
        assert_eq!(x.evaluate(&w("cap ; copants ; pants ; cup")), Ok(q(1, 1)));
        let k = t(q(2, 1), q(1, 2));
        assert_eq!(k.evaluate(&w("cap")), Ok(q(2, 1)));
        assert_eq!(k.evaluate(&w("cap ; cup")), Ok(q(1, 1)));
        assert!(matches!(
            x.evaluate(&w("acap ; acup")),
            Err(TqftError::WrongDimension(1))
        ));
    }

    #[test]
    fn group_operations() {
        let x = t(q(2, 1), q(3, 1));
        assert_eq!(
            x.product(&x.inverse()).unwrap(),
            InvertibleTqft2::trivial(ScalarKind::Rational)
        );
        let y = t(q(5, 1), q(7, 1));
        assert_eq!(x.product(&y).unwrap(), t(q(10, 1), q(21, 1)));
        let z = t(GroupScalar::exp_int(1), GroupScalar::exp_int(0));
        assert!(matches!(x.product(&z), Err(TqftError::VariantMismatch(..))));
        assert!(matches!(
            InvertibleTqft2::new(q(1, 1), GroupScalar::exp_int(0)),
            Err(TqftError::VariantMismatch(..))
        ));
    }

    #[test]
    fn scalar_arithmetic() {
        assert_eq!(
            GroupScalar::rational(BigRational::zero()),
            Err(TqftError::ZeroScalar)
        );
        assert_eq!(q(2, 3).pow(-2), q(9, 4));
        assert_eq!(
            q(-8, 27).pow_rational(&BigRational::new(1.into(), 3.into())),
            Ok(q(-2, 3))
        );
        assert!(q(2, 1)
            .pow_rational(&BigRational::new(1.into(), 2.into()))
            .is_err());
        assert!(q(-4, 1)
            .pow_rational(&BigRational::new(1.into(), 2.into()))
            .is_err());
        let m = GroupScalar::signed_exp(true, rat(3));
        assert_eq!(m.pow(2), GroupScalar::exp_int(6));
        assert_eq!(m.abs(), GroupScalar::exp_int(3));
        assert!(m
            .pow_rational(&BigRational::new(1.into(), 2.into()))
            .is_err());
        assert_eq!(
            m.pow_rational(&BigRational::new(1.into(), 3.into())),
            Ok(GroupScalar::signed_exp(true, rat(1)))
        );
        assert_eq!(GroupScalar::exp_int(0).to_string(), "1");
        assert_eq!(GroupScalar::signed_exp(true, rat(0)).to_string(), "-1");
        assert_eq!(
            GroupScalar::exp(BigRational::new(1.into(), 2.into())).to_string(),
            "exp(1/2)"
        );
        assert_eq!(q(-3, 6).to_string(), "-1/2");
    }

    #[test]
    fn axioms_hold_for_tqfts() {
        for x in [
            t(q(2, 1), q(3, 1)),
            t(q(-1, 2), q(5, 3)),
            InvertibleTqft2::trivial(ScalarKind::Rational),
            t(
                GroupScalar::signed_exp(true, rat(1)),
                GroupScalar::exp_int(-2),
            ),
        ] {
            let report = verify_axioms(&x, 1, 60);
            assert!(report.passed(), "{x:?}: {:?}", report.first_witness());
            assert!(check_closed_law(&x, 2, 60).passed());
        }
    }

    #[test]
    fn corrupted_evaluator_is_caught() {
        let x = t(q(2, 1), q(3, 1));
        let report = verify_axioms(&GeneratorAssignment::corrupted(&x), 1, 60);
        assert!(!report.passed());
        let f = report
            .checks
            .iter()
            .find(|c| c.name == "functoriality")
            .unwrap();
        assert!(!f.passed());
        assert!(!f.witnesses.is_empty());
    }

    #[test]
    fn valid_assignments_are_two_parameter() {
        let vals = [q(1, 1), q(2, 1), q(1, 2), q(-1, 1)];
        let mut found = 0;
        for code in 0..vals.len().pow(6) {
            let mut c = code;
            let values = core::array::from_fn(|_| {
                let v = vals[c % vals.len()].clone();
                c /= vals.len();
                v
            });
            let a = GeneratorAssignment { values };
            let quick = small_cylinders()
                .iter()
                .chain([w("swap ; swap")].iter())
                .all(|c| a.evaluate(c).unwrap().is_one());
            if !quick || !verify_axioms(&a, 5, 15).passed() {
                assert!(a.as_tqft().is_none() || !quick, "{a:?}");
                continue;
            }
            found += 1;
            assert!(a.as_tqft().is_some(), "{a:?}");
        }
        assert_eq!(found, vals.len() * vals.len());
    }

    #[test]
    fn kernel_characterization() {
        let mut grid = Vec::new();
        for n in -5..=5i64 {
            for d in 1..=5 {
                if n != 0 {
                    grid.push(q(n, d));
                }
            }
        }
        let mut rng = seeded(9);
        let closed: Vec<CobordismWord> = (0..20)
            .map(|_| random_closed_word(&mut rng, 6, 4))
            .chain([w("cap ; cup")])
            .collect();
        for a in &grid {
            for e in &grid {
                let x = t(a.clone(), e.clone());
                let trivial = closed.iter().all(|c| x.evaluate(c).unwrap().is_one());
                assert_eq!(trivial, x.sphere_value().is_one(), "{a} {e}");
            }
        }
    }

    #[test]
    fn boundary_dependence() {
        let k = t(q(2, 1), q(1, 2));
        assert_eq!(k.evaluate(&w("id")), k.evaluate(&w("copants ; pants")));
        assert_eq!(k.evaluate(&w("cap")), Ok(q(2, 1)));
        assert_eq!(k.evaluate(&w("cap | cap ; pants")), Ok(q(2, 1)));
        let report = boundary_dependence_check(&k, 3, 100).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(
            boundary_dependence_check(&InvertibleTqft2::trivial(ScalarKind::Rational), 3, 50)
                .unwrap()
                .passed()
        );
        assert!(matches!(
            boundary_dependence_check(&t(q(2, 1), q(3, 1)), 3, 50),
            Err(TqftError::NotInKernel(_))
        ));
    }

    #[test]
    fn theta_multiplicativity() {
        let r = check_theta_defines_tqft(theta_exp_chi, 2, 4, 300);
        assert!(r.holds, "{r:?}");
        let r = check_theta_defines_tqft(theta_exp_chi, 1, 4, 300);
        assert!(!r.holds);
        assert_eq!(
            r.witness.as_deref(),
            Some("two arcs glued to a circle: exp(1)·exp(1) ≠ exp(0)")
        );
        let one = |_: &CompactManifold| GroupScalar::exp_int(0);
        assert!(check_theta_defines_tqft(one, 1, 4, 100).holds);
        assert!(check_theta_defines_tqft(one, 2, 4, 100).holds);
    }

    #[test]
    fn mapping_cylinder_ratio() {
        let x = t(q(3, 1), q(5, 7));
        let mut rng = seeded(12);
        for _ in 0..50 {
            let bottom = random_word(&mut rng, 0, 3, 4);
            let middle = random_word(&mut rng, bottom.out_arity(), 3, 4);
            let top = close_off(&CobordismWord::identity(2, middle.out_arity()));
            let plain_top = close_off(&CobordismWord::identity(2, bottom.out_arity()));
            let with = compose(&compose(&bottom, &middle).unwrap(), &top).unwrap();
            let without = compose(&bottom, &plain_top).unwrap();
            let ratio = eval(&x, &with)
                .try_mul(&eval(&x, &without).inverse())
                .unwrap();
            let expected = eval(&x, &compose(&middle, &top).unwrap())
                .try_mul(&eval(&x, &plain_top).inverse())
                .unwrap();
            assert_eq!(ratio, expected);
        }
    }

    #[test]
    fn closed_words_of_each_genus() {
        let x = t(q(2, 1), q(3, 1));
        for g in 0..4 {
            assert_eq!(x.evaluate(&closed_genus_word(g)), Ok(x.closed_value(g)));
        }
    }

    #[test]
    fn one_manifold_gluing() {
        let arc = OneManifold {
            arcs: 1,
            circles: 0,
        };
        assert_eq!(
            arc.glue(&arc, &[(0, 0), (1, 1)]),
            OneManifold {
                arcs: 0,
                circles: 1
            }
        );
        assert_eq!(
            arc.glue(&arc, &[(1, 0)]),
            OneManifold {
                arcs: 1,
                circles: 0
            }
        );
        let two = OneManifold {
            arcs: 2,
            circles: 1,
        };
        assert_eq!(
            two.glue(&arc, &[(1, 0), (2, 1)]),
            OneManifold {
                arcs: 1,
                circles: 1
            }
        );
    }
}
