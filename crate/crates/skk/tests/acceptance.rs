//! Acceptance criteria 1 to 13. Prints one line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use skk_core::cobordism::{parse_word, random_closed_word};
use skk_core::fixtures;
use skk_core::intersection_form::signature;
use skk_core::simplicial::Coefficients;
use skk_core::skk::{
    abs_psi, b_sigma_dependence_demo, corrupted_split_dim2, cut_paste_invariance,
    error_term_property, grid_scalar, i_n_table, kernel_membership, sk_class, split_dim2,
    verify_split_sequence, ClosedManifold, SkClass,
};
use skk_core::surfaces::{random_surface, Surface};
use skk_core::tqft::{
    boundary_dependence_check, check_closed_law, check_theta_defines_tqft, theta_exp_chi,
    verify_axioms, GeneratorAssignment, GroupScalar, InvertibleTqft2, WordEvaluator,
};
use skk_core::virtual_bordism::{random_triple, relation_check, AdditiveInvariant};
use skk_core::{seeded, shard_seed};

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn rational_grid() -> Vec<GroupScalar> {
    [(2, 1), (-1, 2), (1, 1), (3, 4), (-3, 1)]
        .iter()
        .map(|&(n, d)| GroupScalar::ratio(n, d))
        .collect()
}

fn signed_grid() -> Vec<i64> {
    (-4..=4).collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("∂Δ³", fixtures::simplex_boundary(2), vec![1, 0, 1]),
        ("∂Δ⁴", fixtures::simplex_boundary(3), vec![1, 0, 0, 1]),
        ("torus", fixtures::torus7(), vec![1, 2, 1]),
    ];
    for (name, k, want) in cases {
        let h = k.homology(Coefficients::Integers);
        ensure(h.betti == want, || format!("{name}: betti {:?}", h.betti))?;
        ensure(h.torsion.iter().all(Vec::is_empty), || {
            format!("{name}: torsion {:?}", h.torsion)
        })?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("betti (1,0,1), (1,0,0,1), (1,2,1)".into())
}

fn c2() -> Outcome {
    let start = Instant::now();
    let cp2 = fixtures::cp2_9();
    ensure(cp2.euler_characteristic() == 3, || "χ(ℂP²) ≠ 3".into())?;
    ensure(signature(&cp2) == Ok(1), || {
        format!("σ(ℂP²) = {:?}", signature(&cp2))
    })?;
    let s4 = sk_class(&ClosedManifold::Complex(fixtures::sphere4()));
    ensure(
        s4 == Ok(SkClass::Dim4 {
            half_difference: 1,
            sigma: 0,
        }),
        || format!("S⁴: {s4:?}"),
    )?;
    let c = sk_class(&ClosedManifold::Complex(cp2));
    ensure(
        c == Ok(SkClass::Dim4 {
            half_difference: 1,
            sigma: 1,
        }),
        || format!("ℂP²: {c:?}"),
    )?;
    within(start, Duration::from_secs(30))?;
    Ok("S⁴ ↦ (1, 0), ℂP² ↦ (1, 1)".into())
}

fn c3() -> Outcome {
    let want = [
        "Z/2", "Z", "0", "Z", "Z/2", "Z", "0", "Z", "Z/2", "Z", "0", "Z",
    ];
    let got: Vec<String> = (1..=12).map(|n| i_n_table(n).to_string()).collect();
    ensure(got == want, || format!("table {got:?}"))?;
    Ok(format!("I_1..I_12 = {}", got.join(", ")))
}

fn c4() -> Outcome {
    let start = Instant::now();
    let c = cut_paste_invariance(SEED, 200, 5, 4, 12);
    ensure(c.passed(), || c.to_string())?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("200 sequences, {} checks, 0 violations", c.samples))
}

fn c5() -> Outcome {
    let c = error_term_property(SEED, 500);
    ensure(c.passed() && c.samples == 500, || c.to_string())?;
    Ok("500 quadruples".into())
}

fn c6() -> Outcome {
    let start = Instant::now();
    let mut words = 0;
    let mut i = 0;
    for a in rational_grid() {
        for e in rational_grid() {
            let t = InvertibleTqft2::new(a.clone(), e.clone()).unwrap();
            let s = shard_seed(SEED, i);
            i += 1;
            let r = verify_axioms(&t, s, 200);
            ensure(r.passed(), || {
                format!("(a, e) = ({a}, {e}): {:?}", r.first_witness())
            })?;
            let c = check_closed_law(&t, s, 200);
            ensure(c.passed(), || format!("(a, e) = ({a}, {e}): {c}"))?;
            words += c.samples;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("25 grid points, {words} closed words"))
}

fn c7() -> Outcome {
    let t = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(1, 2)).unwrap();
    let mut rng = seeded(SEED);
    for _ in 0..100 {
        let w = random_closed_word(&mut rng, 8, 4);
        let v = t.evaluate(&w).map_err(|e| e.to_string())?;
        ensure(v.is_one(), || format!("{w} ↦ {v}"))?;
    }
    let cap = t.evaluate(&parse_word("cap").unwrap()).unwrap();
    ensure(cap == GroupScalar::ratio(2, 1), || format!("cap ↦ {cap}"))?;
    let mut probe = seeded(SEED + 1);
    let samples: Vec<ClosedManifold> = (0..6)
        .map(|g| ClosedManifold::Surface(Surface::closed_genus(g)))
        .chain((0..6).map(|_| ClosedManifold::Surface(random_surface(&mut probe, 3, 4, 0))))
        .collect();
    for i in signed_grid() {
        for j in signed_grid() {
            let t = InvertibleTqft2::new(grid_scalar(i), grid_scalar(j)).unwrap();
            let trivial = samples
                .iter()
                .all(|m| abs_psi(&t).value(m).is_ok_and(|v| v.is_one()));
            ensure(kernel_membership(&t) == trivial, || {
                format!("grid point ({i}, {j})")
            })?;
        }
    }
    Ok("(2, 1/2) ↦ 1 on 100 closed words, cap ↦ 2; 81 grid points".into())
}

fn c8() -> Outcome {
    for (a, e) in [((2, 1), (1, 2)), ((-3, 5), (-5, 3))] {
        let t = InvertibleTqft2::new(GroupScalar::ratio(a.0, a.1), GroupScalar::ratio(e.0, e.1))
            .unwrap();
        let r = boundary_dependence_check(&t, SEED, 100).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{r:?}"))?;
        ensure(r.pairs.samples >= 100, || {
            format!("only {} pairs", r.pairs.samples)
        })?;
    }
    Ok("100 word pairs per kernel TQFT, closed form e^(in−out)".into())
}

fn c9() -> Outcome {
    let two = check_theta_defines_tqft(theta_exp_chi, 2, SEED, 300);
    ensure(two.holds && two.samples >= 300, || {
        format!("dim 2: {two:?}")
    })?;
    let one = check_theta_defines_tqft(theta_exp_chi, 1, SEED, 300);
    let want = "two arcs glued to a circle: exp(1)·exp(1) ≠ exp(0)";
    ensure(!one.holds && one.witness.as_deref() == Some(want), || {
        format!("dim 1: {one:?}")
    })?;
    Ok(format!("dim 2 holds; dim 1 fails: {want}"))
}

fn c10() -> Outcome {
    for dim in [2, 4] {
        let mut rng = seeded(SEED + dim as u64);
        for _ in 0..300 {
            let [x1, x2, x3] = random_triple(&mut rng, dim);
            for inv in [AdditiveInvariant::Chi, AdditiveInvariant::Sigma] {
                let r = relation_check(&x1, &x2, &x3, inv).map_err(|e| e.to_string())?;
                ensure(r.lhs == r.rhs, || format!("dim {dim} {inv:?}: {r:?}"))?;
            }
        }
    }
    Ok("300 triples in dims 2 and 4, χ and σ".into())
}

fn c11() -> Outcome {
    let start = Instant::now();
    let r = verify_split_sequence(&signed_grid(), SEED, split_dim2);
    for c in r.checks() {
        ensure(c.passed(), || c.to_string())?;
    }
    within(start, Duration::from_secs(5))?;
    Ok("9 × 9 grid, all four checks".into())
}

fn c12() -> Outcome {
    let (a, b) = b_sigma_dependence_demo().map_err(|e| e.to_string())?;
    ensure(a == GroupScalar::exp_int(0), || format!("first choice {a}"))?;
    let ten = BigRational::from_integer(BigInt::from(10));
    ensure(b == GroupScalar::exp(ten), || format!("second choice {b}"))?;
    let out = Command::new(env!("CARGO_BIN_EXE_skk"))
        .args(["skk", "demo-bsigma"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let want = "choice D⁸ ⇒ 1; choice ℂP⁴∖D̊⁸ ⇒ exp(10)";
    ensure(out.status.success() && text.trim() == want, || {
        format!("CLI printed {text:?}")
    })?;
    Ok(want.into())
}

fn c13() -> Outcome {
    let t = InvertibleTqft2::new(GroupScalar::ratio(2, 1), GroupScalar::ratio(3, 1)).unwrap();
    let r = verify_axioms(&GeneratorAssignment::corrupted(&t), SEED, 200);
    ensure(!r.passed(), || "corrupted TQFT passed".into())?;
    let w = r
        .first_witness()
        .ok_or("no witness for the corrupted TQFT")?
        .to_string();
    let s = verify_split_sequence(&signed_grid(), SEED, corrupted_split_dim2);
    ensure(
        !s.section.passed() && !s.section.witnesses.is_empty(),
        || "mis-specified splitting passed check (iii)".into(),
    )?;
    Ok(format!("corrupted TQFT witness: {w}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("homology fixtures", c1),
        ("SK classification values", c2),
        ("I_n table", c3),
        ("cut-and-paste invariance", c4),
        ("SKK error-term property", c5),
        ("TQFT axiom suite", c6),
        ("kernel TQFTs and kernel membership", c7),
        ("boundary dependence of kernel TQFTs", c8),
        ("exp(χ) defines a TQFT in dim 2 only", c9),
        ("virtual-piece relation", c10),
        ("split exact sequence", c11),
        ("B_Σ dependence", c12),
        ("negative controls", c13),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        match r {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{t:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{t:.2?}]: {why}", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} of 13 passed in {:.2?}",
        13 - failed,
        total.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
