//! One line per acceptance criterion. All comparisons are exact: the
//! tolerance on every integer is zero.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use chowlink::chow_core::DivisorClass;
use chowlink::cli;
use chowlink::compactify::{euler_solver_default, normalize, Certificate, Descriptor, FinalModel, P2Descriptor, QuadricDescriptor, Snapshot};
use chowlink::exprs::eval_str;
use chowlink::links::{fiber_type, inverse_qp_link, LinkKind};
use chowlink::models::{anticanonical_cube, hirzebruch, p2_bundle, quadric_fibration, CurveData, DF, DH, F, H, XI};
use chowlink::verify::{corpus, run_entry};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

const TOLERANCE: u32 = 0;
const PROPERTY_CASES: u32 = 1000;

type Outcome = Result<String, String>;

fn exact(what: &str, expected: impl Into<BigInt>, got: impl Into<BigInt>) -> Result<(), String> {
    let (e, g) = (expected.into(), got.into());
    if (&e - &g).magnitude() <= &BigUint::from(TOLERANCE) {
        Ok(())
    } else {
        Err(format!("{what}: expected {e}, got {g}"))
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn corpus_entries(names: &[&str]) -> Result<usize, String> {
    let all = corpus();
    let mut cases = 0;
    for n in names {
        let e = all.iter().find(|e| e.name == *n).ok_or_else(|| format!("corpus entry {n} missing"))?;
        let r = run_entry(e);
        if !r.pass {
            return Err(format!("corpus entry {n}: expected {}, computed {}", r.expected, r.computed));
        }
        cases += r.cases.max(1);
    }
    Ok(cases)
}

fn criterion_1() -> Outcome {
    let e = |r: Result<BigRational, chowlink::Error>| r.map_err(|e| e.to_string());
    let mut n = 0;
    for a in -5..=5 {
        for b in -5..=5 {
            for c in -5..=5 {
                exact(&format!("(-K)^3 on F({a},{b},{c})"), 54, anticanonical_cube(&p2_bundle(a, b, c)).map_err(|e| e.to_string())?)?;
                n += 1;
            }
        }
    }
    for d in 1..=6i64 {
        for i in [1, d] {
            let j = d + 1 - i;
            let v = e(eval_str(&format!("(xi - {j}*F)^2*(xi - {i}*F)"), &p2_bundle(0, 1, d)))?;
            if v != rat(-(d + 1 - i)) {
                return Err(format!("sub-bundle square d={d} i={i}: got {v}"));
            }
            n += 1;
        }
    }
    for g in 0..=4u64 {
        let bc = CurveData::new(g).hit(XI, g as i64 + 2).hit(F, 2);
        let sub = DivisorClass::gen(XI).with(F, -1);
        let (q, _, _) = inverse_qp_link(&p2_bundle(0, 1, 1), &bc, &sub).map_err(|e| e.to_string())?;
        exact(&format!("qp cube at p_a(B) = {g}"), 40 - 8 * g as i64, anticanonical_cube(&q).map_err(|e| e.to_string())?)?;
        n += 1;
    }
    for a in -2..=5i64 {
        let v = e(eval_str(&format!("(K + {a}*f)^2"), &hirzebruch(0)))?;
        if v != rat(8 - 4 * a) {
            return Err(format!("(K + a f)^2 at a = {a}: got {v}"));
        }
        let q = quadric_fibration(8 - 4 * a, a).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
        let v = e(eval_str(&format!("(2*Dh + {a}*Df)^3"), &q))?;
        if v != rat(64 - 8 * a) {
            return Err(format!("(2Dh + a Df)^3 at a = {a}: got {v}"));
        }
        n += 2;
    }
    let std_q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H));
    if e(eval_str("(2*Dh + 3*F)^3", &std_q))? != rat(40) {
        return Err("standard quadric model cube".into());
    }
    n += corpus_entries(&["minusK-P2bundle", "eq-2-4-2", "eq-2-4-3", "ex4-sub-bundle-square", "qp-cube-genus", "eq-main3-1", "eq-main3-2", "eq-7-3-4"])?;
    Ok(format!("{n} exact identities"))
}

fn criterion_2() -> Outcome {
    let got = euler_solver_default();
    let want: BTreeSet<(u32, u32, u32)> = [(0, 0, 3)].into_iter().collect();
    if got == want {
        Ok("solution set {(0,0,3)}".into())
    } else {
        Err(format!("solution set {got:?}"))
    }
}

fn criterion_3() -> Outcome {
    // (t in the singular-fiber locus, B meets the fiber, E = H on the fiber)
    let table: [((bool, bool, bool), Option<&str>); 8] = [
        ((false, false, false), Some("smooth")),
        ((false, false, true), None),
        ((false, true, false), Some("reducible")),
        ((false, true, true), None),
        ((true, false, false), Some("smooth")),
        ((true, false, true), None),
        ((true, true, false), Some("reducible")),
        ((true, true, true), Some("non-reduced")),
    ];
    for ((t, b, e), want) in table {
        let got = fiber_type(t, b, e).ok().map(|f| f.to_string());
        if got.as_deref() != want {
            return Err(format!("flags ({t}, {b}, {e}): expected {want:?}, got {got:?}"));
        }
    }
    Ok("all 8 flag combinations (3 boolean flags; inconsistent ones rejected)".into())
}

fn quadric_normal(m: u32, d: u32) -> QuadricDescriptor {
    QuadricDescriptor::normal(m, d, 40)
}

fn run(desc: &Descriptor) -> Result<Certificate, String> {
    let c = normalize(desc).map_err(|e| format!("{desc:?}: {e}"))?;
    if !c.all_checks_pass() {
        return Err(format!("{desc:?}: failing checks {:?}", c.failing_checks()));
    }
    Ok(c)
}

fn last_int(s: &str) -> Option<u32> {
    let digits: String = s.chars().rev().skip_while(|c| !c.is_ascii_digit()).take_while(|c| c.is_ascii_digit()).collect();
    digits.chars().rev().collect::<String>().parse().ok()
}

fn measure(s: &Snapshot) -> Option<(u32, u32)> {
    Some((s.type_m?, last_int(&s.surface)?))
}

/// (delta, e, d) of a P2 snapshot: xi^3, the F-coefficient of D_h = xi + eF,
/// and the Hirzebruch degree of the boundary.
fn p2_state(s: &Snapshot) -> Option<(BigInt, BigInt, u32)> {
    let xi = DivisorClass::gen(XI);
    Some((s.model.form.cube(&xi).ok()?, s.boundary_h.coeff(F), last_int(&s.surface)?))
}

fn p2_grid() -> Vec<(i64, i64, u32)> {
    let mut out = Vec::new();
    for dp in -6..=6i64 {
        for e in -6..=6i64 {
            if (dp + e) % 2 != 0 {
                continue;
            }
            for d in 0..=4u32 {
                out.push((dp, e, d));
            }
        }
    }
    out
}

fn check_p2_tail(steps: &[chowlink::compactify::CertStep], start: &Snapshot, dp: i64, e: i64, d: u32) -> Result<(), String> {
    let links = d as usize + ((dp + 3 * e) / 2 + 1).unsigned_abs() as usize;
    if steps.len() != links + 1 {
        return Err(format!("({dp}, {e}, {d}): {} steps, want {links} links and the blow-down", steps.len()));
    }
    let mut states = vec![p2_state(start).ok_or("unreadable start")?];
    for s in &steps[..links] {
        states.push(p2_state(&s.state).ok_or("unreadable state")?);
    }
    let even = |(delta, e, d): &(BigInt, BigInt, u32)| (delta + e + BigInt::from(*d)).is_even();
    if !states.iter().all(even) {
        return Err(format!("({dp}, {e}, {d}): parity of delta + e changed"));
    }
    let (delta, ee, dd) = states.last().unwrap();
    let n = -ee - BigInt::from(1);
    if *dd != 0 || *delta != BigInt::from(3) * &n + BigInt::from(1) {
        return Err(format!("({dp}, {e}, {d}): stopped at ({delta}, {ee}) on F_{dd}"));
    }
    if steps[links].step.kind != LinkKind::BlowDownToP3 {
        return Err(format!("({dp}, {e}, {d}): last step {}", steps[links].step.kind));
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    for d in 0..=5u32 {
        let c = run(&Descriptor::Quadric(quadric_normal(0, d)))?;
        exact(&format!("steps for m = 0, d = {d}"), 2 * d + 2, c.step_count() as u32)?;
        if c.final_model != FinalModel::StandardQ3 {
            return Err(format!("m = 0, d = {d} ends at {}", c.final_model.name()));
        }
    }
    let mut typed = 0;
    for m in 1..=5u32 {
        for d in 1..=5u32 {
            let mut branches = vec![quadric_normal(m, d)];
            if m == 1 {
                let mut meets = quadric_normal(m, d);
                meets.type1_meets_sigma = true;
                branches.push(meets);
            }
            for q in branches {
                let c = run(&Descriptor::Quadric(q))?;
                if c.final_model != FinalModel::StandardQ3 {
                    return Err(format!("m = {m}, d = {d} ends at {}", c.final_model.name()));
                }
                let mut last = measure(&c.start).ok_or("unreadable start")?;
                for s in &c.steps {
                    if s.step.checks.iter().any(|k| k.name == "(m, d) decreases") {
                        let now = measure(&s.state).ok_or("unreadable state")?;
                        if now >= last {
                            return Err(format!("m = {m}, d = {d}: measure {last:?} -> {now:?}"));
                        }
                        last = now;
                    }
                }
                if last.0 != 0 || last.1 != 0 {
                    return Err(format!("m = {m}, d = {d}: descent stopped at {last:?}"));
                }
                typed += 1;
            }
        }
    }
    let grid = p2_grid();
    for &(dp, e, d) in &grid {
        let c = run(&Descriptor::P2(P2Descriptor::new(dp + d as i64, e, d)))?;
        check_p2_tail(&c.steps, &c.start, dp, e, d)?;
    }
    let mut nonnormal = 0;
    for a in -2..=5i64 {
        for d in (0..=4u32).filter(|d| (*d as i64 - a) % 2 == 0) {
            let c = run(&Descriptor::Quadric(QuadricDescriptor::non_normal(a, d, 40)))?;
            if c.steps[0].step.kind != LinkKind::QPLink || c.final_model != FinalModel::StandardP3 {
                return Err(format!("non-normal a = {a}, d = {d}: first step {}", c.steps[0].step.kind));
            }
            // the P2 part starts at (delta, e) = (2 - a, 0) on F_d
            let dp = 2 - a - d as i64;
            check_p2_tail(&c.steps[1..], &c.steps[0].state, dp, 0, d)?;
            nonnormal += 1;
        }
    }
    Ok(format!("6 type-0, {typed} typed, {} P2-bundle and {nonnormal} non-normal descriptors", grid.len()))
}

fn property<S: proptest::strategy::Strategy>(name: &str, s: S, f: impl Fn(S::Value) -> common::Check) -> Result<(), String> {
    let mut runner = TestRunner::new_with_rng(
        Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&s, |v| f(v).map_err(TestCaseError::fail)).map_err(|e| format!("{name}: {e}"))
}

fn criterion_5() -> Outcome {
    use common::*;
    use proptest::prelude::*;
    property("trilinear", (model(), coeffs(), coeffs(), coeffs(), coeffs(), -4i64..=4), |(m, a, b, c, a2, k)| trilinear(&m, &a, &b, &c, &a2, k))?;
    property("point roundtrip", (base(), 0u32..3), |(b, k)| roundtrip_point(&b, k))?;
    property("curve roundtrip", (base(), 0u64..4, -4i64..=4, 0i64..=3, 0u32..3), |(b, g, x, y, k)| roundtrip_curve(&b, g, x, y, k))?;
    property("qq twice", (-12i64..=12, -4i64..=6), |(h, a)| qq_twice(h, a))?;
    property("blow-ups commute", (base(), 0u64..4, -4i64..=4, 0i64..=3, any::<bool>()), |(b, g, x, y, on)| blnorm(&b, g, x, y, on))?;
    property("link square", (-4i64..=6, 0i64..=12, -6i64..=6), |(a, k, s)| pqqpp(5 - 3 * a - k, a, s))?;
    Ok(format!("6 properties x {PROPERTY_CASES} cases"))
}

fn full_grid() -> Vec<Descriptor> {
    let mut out = Vec::new();
    for m in 0..=5u32 {
        for d in (if m == 0 { 0 } else { 1 })..=5u32 {
            out.push(Descriptor::Quadric(quadric_normal(m, d)));
        }
    }
    for (dp, e, d) in p2_grid() {
        out.push(Descriptor::P2(P2Descriptor::new(dp + d as i64, e, d)));
    }
    for a in -2..=5i64 {
        for d in (0..=4u32).filter(|d| (*d as i64 - a) % 2 == 0) {
            out.push(Descriptor::Quadric(QuadricDescriptor::non_normal(a, d, 40)));
        }
    }
    out
}

fn cli_bytes(path: &std::path::Path) -> Result<Vec<u8>, String> {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["chowlink", "normalize", "--descriptor", path.to_str().unwrap()], &mut out, &mut err);
    if code != 0 {
        return Err(format!("{}: exit {code}: {}", path.display(), String::from_utf8_lossy(&err)));
    }
    Ok(out)
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let grid = full_grid();
    for (i, desc) in grid.iter().enumerate() {
        let a = run(desc)?.to_canonical_string();
        let b = run(desc)?.to_canonical_string();
        if a != b {
            return Err(format!("{desc:?}: library output differs between runs"));
        }
        let path = dir.path().join(format!("d{i}.json"));
        std::fs::write(&path, desc.to_json().to_string()).map_err(|e| e.to_string())?;
        let (x, y) = (cli_bytes(&path)?, cli_bytes(&path)?);
        if x != y || x != a.as_bytes() {
            return Err(format!("{desc:?}: CLI output differs"));
        }
    }
    Ok(format!("{} descriptors, library and CLI", grid.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 6] = [
        ("corpus identities", criterion_1),
        ("euler solver", criterion_2),
        ("fiber-type table", criterion_3),
        ("normalization pipelines", criterion_4),
        ("property suites", criterion_5),
        ("certificate determinism", criterion_6),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
