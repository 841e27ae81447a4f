//! Strategies and property bodies shared by the property suite and the
//! acceptance target.

#![allow(dead_code)]

use chowlink::chow_core::DivisorClass;
use chowlink::compactify::commuting_square_check;
use chowlink::exprs::{eval, parse, Expr};
use chowlink::links::{commute_blowups_check, qq_link};
use chowlink::models::{
    blow_up_curve, blow_up_point, contract, p2_bundle, quadric_fibration, CurveData, LinkPatternTag, PointData, ThreefoldModel, DH, F, H, XI,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

#[derive(Debug, Clone)]
pub enum Base {
    Bundle(i64, i64, i64),
    Quadric(i64, i64),
}

impl Base {
    pub fn model(&self) -> ThreefoldModel {
        match *self {
            Base::Bundle(a, b, c) => p2_bundle(a, b, c).with_tracked(DH, DivisorClass::gen(XI)),
            Base::Quadric(h, a) => quadric_fibration(h, a).with_tracked(DH, DivisorClass::gen(H)),
        }
    }

    pub fn section_gen(&self) -> &'static str {
        match self {
            Base::Bundle(..) => XI,
            Base::Quadric(..) => H,
        }
    }
}

pub fn base() -> impl Strategy<Value = Base> {
    prop_oneof![
        (-4i64..=4, -4i64..=4, -4i64..=4).prop_map(|(a, b, c)| Base::Bundle(a, b, c)),
        (-8i64..=8, -3i64..=5).prop_map(|(h, a)| Base::Quadric(h, a)),
    ]
}

/// A model with zero to two exceptional divisors on top of a base.
pub fn model() -> impl Strategy<Value = ThreefoldModel> {
    (base(), proptest::collection::vec((any::<bool>(), 0u64..3, -3i64..=3, 0i64..=2), 0..=2)).prop_map(|(b, ups)| {
        let mut m = b.model();
        for (point, g, x, y) in ups {
            m = if point {
                blow_up_point(&m, &PointData::new())
            } else {
                let mut c = CurveData::new(g);
                for n in m.form.gen_names() {
                    c = c.hit(&n, 0);
                }
                blow_up_curve(&m, &c.hit(b.section_gen(), x).hit(F, y)).expect("complete curve data")
            };
        }
        m
    })
}

fn class_on(m: &ThreefoldModel, coeffs: &[i64]) -> DivisorClass {
    let mut d = DivisorClass::zero();
    for (n, c) in m.form.gen_names().iter().zip(coeffs) {
        d = d.with(n, *c);
    }
    d
}

pub fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-5i64..=5, 4)
}

/// Symmetry under all permutations and linearity in the first slot.
pub fn trilinear(m: &ThreefoldModel, a: &[i64], b: &[i64], c: &[i64], a2: &[i64], k: i64) -> Check {
    let (a, b, c, a2) = (class_on(m, a), class_on(m, b), class_on(m, c), class_on(m, a2));
    let t = |x: &DivisorClass, y: &DivisorClass, z: &DivisorClass| m.triple(x, y, z).map_err(|e| e.to_string());
    let abc = t(&a, &b, &c)?;
    for (x, y, z) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
        ensure(t(x, y, z)? == abc, || format!("asymmetric at {a}, {b}, {c}"))?;
    }
    let lhs = t(&(a.clone() + a2.clone() * k), &b, &c)?;
    let rhs = &abc + BigInt::from(k) * t(&a2, &b, &c)?;
    ensure(lhs == rhs, || format!("not linear: {lhs} vs {rhs}"))
}

pub fn roundtrip_point(b: &Base, mult: u32) -> Check {
    let m = b.model();
    let x = blow_up_point(&m, &PointData::new().mult(DH, mult));
    let back = contract(&x, &DivisorClass::gen("E"), LinkPatternTag::PointPattern).map_err(|e| e.to_string())?;
    ensure(back.same_lattice(&m), || "lattice changed".into())?;
    ensure(back.tracked == m.tracked, || format!("tracked {:?} vs {:?}", back.tracked, m.tracked))?;
    ensure(back.kind == m.kind, || "kind changed".into())
}

pub fn roundtrip_curve(b: &Base, genus: u64, x: i64, y: i64, mult: u32) -> Check {
    let m = b.model();
    let c = CurveData::new(genus).hit(b.section_gen(), x).hit(F, y).mult(DH, mult);
    let e3 = -c.normal_degree(&m).map_err(|e| e.to_string())?;
    let up = blow_up_curve(&m, &c).map_err(|e| e.to_string())?;
    let back = contract(&up, &DivisorClass::gen("E"), LinkPatternTag::CurvePattern { e3 }).map_err(|e| e.to_string())?;
    ensure(back.same_lattice(&m), || "lattice changed".into())?;
    ensure(back.tracked == m.tracked, || format!("tracked {:?} vs {:?}", back.tracked, m.tracked))?;
    ensure(back.kind == m.kind, || "kind changed".into())
}

fn ruling() -> CurveData {
    CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, 1)
}

pub fn qq_twice(h: i64, a: i64) -> Check {
    let q = quadric_fibration(h, a).with_tracked(DH, DivisorClass::gen(H));
    let (q1, l1, s1) = qq_link(&q, &ruling()).map_err(|e| e.to_string())?;
    ensure(s1.passed(), || format!("first link: {:?}", s1.checks))?;
    let (q2, _, s2) = qq_link(&q1, &l1).map_err(|e| e.to_string())?;
    ensure(s2.passed(), || format!("second link: {:?}", s2.checks))?;
    ensure(q2.same_lattice(&q), || "form or K changed".into())?;
    ensure(q2.tracked(DH) == q.tracked(DH), || format!("boundary {:?}", q2.tracked(DH)))
}

pub fn blnorm(b: &Base, genus: u64, x: i64, y: i64, on: bool) -> Check {
    let m = b.model();
    let c = CurveData::new(genus).hit(b.section_gen(), x).hit(F, y);
    let r = commute_blowups_check(&m, &c, on).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.checks))?;
    ensure(r.twist_shift == BigInt::from(i64::from(on)), || format!("shift {}", r.twist_shift))
}

/// Needs (-K)^3 = 8(h + 3a) <= 40, so that the qp-link target exists.
pub fn pqqpp(h: i64, a: i64, s: i64) -> Check {
    let q = quadric_fibration(h, a);
    let sec = CurveData::new(0).hit(H, s).hit(F, 1).mult(DH, 1);
    let r = commuting_square_check(&q, &sec, &ruling(), true).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{:?}", r.checks))
}

fn leaf(names: Vec<String>) -> impl Strategy<Value = Expr> {
    prop_oneof![
        proptest::sample::select(names).prop_map(Expr::Gen),
        Just(Expr::K),
        (0i64..20).prop_map(Expr::int),
    ]
}

pub fn expr(names: Vec<String>) -> impl Strategy<Value = Expr> {
    leaf(names).prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner, 1u32..=3).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

pub fn print_parse(e: &Expr) -> Check {
    let text = e.to_string();
    let back = parse(&text).map_err(|err| format!("{text}: {err}"))?;
    ensure(&back == e, || format!("{text} reparsed as {back:?}"))
}

fn linear_expr(m: &ThreefoldModel, coeffs: &[i64]) -> Expr {
    let terms = m.form.gen_names().into_iter().zip(coeffs).map(|(n, c)| Expr::int(*c) * Expr::gen(&n));
    terms.reduce(|a, b| a + b).expect("models have generators")
}

/// eval agrees with direct triple calls, is additive, and treats ^3 as a
/// triple product.
pub fn eval_linearity(m: &ThreefoldModel, a: &[i64], b: &[i64], c: &[i64]) -> Check {
    let (ea, eb, ec) = (linear_expr(m, a), linear_expr(m, b), linear_expr(m, c));
    let (da, db, dc) = (class_on(m, a), class_on(m, b), class_on(m, c));
    let ev = |e: &Expr| eval(e, m).map_err(|err| format!("{e}: {err}"));
    let q = |v: BigInt| BigRational::from_integer(v);
    let direct = q(m.triple(&da, &db, &dc).map_err(|e| e.to_string())?);
    ensure(ev(&(ea.clone() * eb.clone() * ec.clone()))? == direct, || "product differs from triple".into())?;
    let sum = ev(&((ea.clone() + eb.clone()) * ec.clone() * ec.clone()))?;
    let parts = ev(&(ea.clone() * ec.clone() * ec.clone()))? + ev(&(eb.clone() * ec.clone() * ec.clone()))?;
    ensure(sum == parts, || "not additive".into())?;
    let cube = ev(&Expr::Pow(Box::new(ea.clone()), 3))?;
    ensure(cube == q(m.triple(&da, &da, &da).map_err(|e| e.to_string())?), || "power differs from triple".into())?;
    let kk = ev(&(Expr::K * Expr::K * ea))?;
    let k = m.canonical.clone();
    ensure(kk == q(m.triple(&k, &k, &da).map_err(|e| e.to_string())?), || "K differs from the canonical class".into())
}
