//! Every property suite of the crate behind one entry point, with
//! per-suite seeds derived from a master seed.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cobordism::{parse_word, random_closed_word};
use crate::fixtures;
use crate::intersection_form::signature;
use crate::report::CheckOutcome;
use crate::rng::{seeded, shard_seed};
use crate::simplicial::Coefficients;
use crate::skk::{
    self, b_sigma_dependence_demo, corrupted_split_dim2, i_n_table, kernel_membership, split_dim2,
    verify_split_sequence, IGroup,
};
use crate::tqft::{
    boundary_dependence_check, check_closed_law, check_theta_defines_tqft, theta_exp_chi,
    verify_axioms, GeneratorAssignment, GroupScalar, InvertibleTqft2, WordEvaluator,
};
use crate::virtual_bordism::{random_triple, relation_check, AdditiveInvariant, Catalog};

/// Rational values used for both `a` and `e` on the 5 × 5 grid.
pub fn rational_grid() -> Vec<GroupScalar> {
    [(2, 1), (-1, 2), (1, 1), (3, 4), (-3, 1)]
        .iter()
        .map(|&(n, d)| GroupScalar::ratio(n, d))
        .collect()
}

/// Indices of the 9 × 9 signed-exponent grid.
pub fn signed_grid() -> Vec<i64> {
    (-4..=4).collect()
}

pub fn homology_fixtures() -> CheckOutcome {
    let mut out = CheckOutcome::new("homology fixtures");
    let cases = [
        ("∂Δ³", fixtures::simplex_boundary(2), vec![1, 0, 1]),
        ("∂Δ⁴", fixtures::simplex_boundary(3), vec![1, 0, 0, 1]),
        ("7-vertex torus", fixtures::torus7(), vec![1, 2, 1]),
    ];
    for (name, k, expected) in cases {
        let got = k.homology(Coefficients::Integers).betti;
        out.record(got == expected, || {
            format!("{name}: betti {got:?}, expected {expected:?}")
        });
    }
    out
}

pub fn sk_classification() -> CheckOutcome {
    let mut out = CheckOutcome::new("SK classes of S⁴ and ℂP²");
    let cp2 = fixtures::cp2_9();
    let chi = cp2.euler_characteristic();
    let sigma = signature(&cp2);
    out.record(chi == 3 && sigma == Ok(1), || {
        format!("ℂP²: χ {chi}, σ {sigma:?}")
    });
    let cases = [
        (
            "S⁴",
            skk::ClosedManifold::Complex(fixtures::sphere4()),
            (1, 0),
        ),
        ("ℂP²", skk::ClosedManifold::Complex(cp2), (1, 1)),
    ];
    for (name, m, (h, s)) in cases {
        let got = skk::sk_class(&m);
        let want = skk::SkClass::Dim4 {
            half_difference: h,
            sigma: s,
        };
        out.record(got == Ok(want), || {
            format!("{name}: {got:?}, expected {want}")
        });
    }
    out
}

pub fn i_n_values() -> CheckOutcome {
    let mut out = CheckOutcome::new("I_n table for n = 1..12");
    for n in 1..=12u32 {
        let want = match n % 4 {
            0 | 2 => IGroup::Integers,
            1 => IGroup::Mod2,
            _ => IGroup::Zero,
        };
        let got = i_n_table(n);
        out.record(got == want, || format!("n = {n}: {got}, expected {want}"));
    }
    out
}

pub fn cut_paste(seed: u64) -> CheckOutcome {
    skk::cut_paste_invariance(seed, 200, 5, 4, 12)
}

pub fn error_term(seed: u64) -> CheckOutcome {
    skk::error_term_property(seed, 500)
}

/// Axioms and the closed-value law on the rational grid with `budget`
/// random words per point.
pub fn tqft_axioms(seed: u64, budget: usize) -> Vec<CheckOutcome> {
    let grid = rational_grid();
    let mut axioms = CheckOutcome::new("TQFT axioms on the rational grid");
    let mut closed = CheckOutcome::new("closed value law on the rational grid");
    let mut i = 0;
    for a in &grid {
        for e in &grid {
            let t = InvertibleTqft2::new(a.clone(), e.clone()).expect("same kind");
            let s = shard_seed(seed, i);
            i += 1;
            let report = verify_axioms(&t, s, budget);
            for c in &report.checks {
                axioms.samples += c.samples;
                axioms.violations += c.violations;
                for w in &c.witnesses {
                    if axioms.witnesses.len() < 3 {
                        axioms
                            .witnesses
                            .push(format!("(a, e) = ({a}, {e}), {}: {w}", c.name));
                    }
                }
            }
            let c = check_closed_law(&t, s, budget);
            closed.samples += c.samples;
            closed.violations += c.violations;
            closed.witnesses.extend(
                c.witnesses
                    .into_iter()
                    .take(3 - closed.witnesses.len().min(3)),
            );
        }
    }
    vec![axioms, closed]
}

pub fn kernel(seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new("kernel TQFT (2, 1/2) and kernel membership");
    let t = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(1, 2))
        .expect("same kind");
    let mut rng = seeded(seed);
    for _ in 0..100 {
        let w = random_closed_word(&mut rng, 8, 4);
        let v = t.evaluate(&w);
        out.record(v.as_ref().is_ok_and(GroupScalar::is_one), || {
            format!("{w} ↦ {v:?}")
        });
    }
    let cap = parse_word("cap").expect("valid");
    let v = t.evaluate(&cap);
    out.record(v == Ok(GroupScalar::ratio(2, 1)), || format!("cap ↦ {v:?}"));
    let mut probe = seeded(shard_seed(seed, 1));
    let samples: Vec<skk::ClosedManifold> = (0..6)
        .map(|g| skk::ClosedManifold::Surface(crate::surfaces::Surface::closed_genus(g)))
        .chain((0..4).map(|_| {
            skk::ClosedManifold::Surface(crate::surfaces::random_surface(&mut probe, 3, 4, 0))
        }))
        .collect();
    for &i in &signed_grid() {
        for &j in &signed_grid() {
            let t =
                InvertibleTqft2::new(skk::grid_scalar(i), skk::grid_scalar(j)).expect("same kind");
            let trivial = samples
                .iter()
                .all(|m| skk::abs_psi(&t).value(m).is_ok_and(|v| v.is_one()));
            out.record(kernel_membership(&t) == trivial, || {
                format!(
                    "(a, e) = ({}, {}): membership and |Ψ| disagree",
                    t.cap(),
                    t.cup()
                )
            });
        }
    }
    out
}

pub fn boundary_dependence(seed: u64) -> Vec<CheckOutcome> {
    let t = InvertibleTqft2::new(GroupScalar::ratio(3, 1), GroupScalar::ratio(1, 3))
        .expect("same kind");
    match boundary_dependence_check(&t, seed, 100) {
        Ok(r) => vec![r.pairs, r.closed_form],
        Err(e) => {
            let mut c = CheckOutcome::new("boundary dependence");
            c.record(false, || e.to_string());
            vec![c]
        }
    }
}

pub fn theta(seed: u64) -> Vec<CheckOutcome> {
    let mut dim2 = CheckOutcome::new("exp(χ) defines a TQFT in dimension 2");
    let r = check_theta_defines_tqft(theta_exp_chi, 2, seed, 300);
    dim2.samples = r.samples;
    dim2.record(r.holds, || r.witness.clone().unwrap_or_default());
    let mut dim1 = CheckOutcome::new("exp(χ) fails in dimension 1");
    let r = check_theta_defines_tqft(theta_exp_chi, 1, seed, 300);
    let expected = "two arcs glued to a circle: exp(1)·exp(1) ≠ exp(0)";
    dim1.record(!r.holds && r.witness.as_deref() == Some(expected), || {
        format!("holds {}, witness {:?}", r.holds, r.witness)
    });
    vec![dim2, dim1]
}

pub fn piece_relation(seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new("virtual-piece relation for χ and σ");
    for (k, dim) in [2u32, 4].into_iter().enumerate() {
        let mut rng = seeded(shard_seed(seed, k as u64));
        for _ in 0..300 {
            let [x1, x2, x3] = random_triple(&mut rng, dim);
            for inv in [AdditiveInvariant::Chi, AdditiveInvariant::Sigma] {
                let r = relation_check(&x1, &x2, &x3, inv);
                out.record(r.as_ref().is_ok_and(|s| s.lhs == s.rhs), || {
                    format!("dim {dim}, {inv:?}: {r:?}")
                });
            }
        }
    }
    out
}

pub fn split_sequence(seed: u64) -> Vec<CheckOutcome> {
    let r = verify_split_sequence(&signed_grid(), seed, split_dim2);
    r.checks().into_iter().cloned().collect()
}

pub fn b_sigma() -> CheckOutcome {
    let mut out = CheckOutcome::new("B_Σ dependence of the splitting");
    let r = b_sigma_dependence_demo();
    let want = (GroupScalar::exp_int(0), GroupScalar::exp_int(10));
    out.record(r.as_ref() == Ok(&want), || format!("{r:?}"));
    let c = Catalog::dim8();
    let p2 = c.piece("CP4").and_then(|p| p.attribute("p2")).cloned();
    out.record(
        p2 == Some(BigRational::from_integer(BigInt::from(10))),
        || format!("p2(ℂP⁴) = {p2:?}"),
    );
    out
}

/// Negative controls: each must fail.
pub fn negative_controls(seed: u64) -> CheckOutcome {
    let mut out = CheckOutcome::new("negative controls are detected");
    let t = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(3, 1))
        .expect("same kind");
    let bad = GeneratorAssignment::corrupted(&t);
    let report = verify_axioms(&bad, seed, 200);
    out.record(!report.passed() && report.first_witness().is_some(), || {
        "corrupted TQFT passed the axiom suite".into()
    });
    let split = verify_split_sequence(&signed_grid(), seed, corrupted_split_dim2);
    out.record(
        !split.section.passed() && !split.section.witnesses.is_empty(),
        || "mis-specified splitting passed |Ψ| ∘ S = id".into(),
    );
    out
}

/// Runs every suite. Each suite gets its own seed derived from `seed`.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let s = |i| shard_seed(seed, i);
    let mut out = vec![
        homology_fixtures(),
        sk_classification(),
        i_n_values(),
        cut_paste(s(4)),
        error_term(s(5)),
    ];
    out.extend(tqft_axioms(s(6), 200));
    out.push(kernel(s(7)));
    out.extend(boundary_dependence(s(8)));
    out.extend(theta(s(9)));
    out.push(piece_relation(s(10)));
    out.extend(split_sequence(s(11)));
    out.push(b_sigma());
    out.push(negative_controls(s(13)));
    out
}
