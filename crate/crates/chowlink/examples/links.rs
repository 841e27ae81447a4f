//! The elementary links between quadric fibrations and P2-bundles.

use chowlink::chow_core::DivisorClass;
use chowlink::links::{commute_blowups_check, inverse_qp_link, pp_link, qp_link, qq_link};
use chowlink::models::{anticanonical_cube, p2_bundle, p2_bundle_of_degree, quadric_fibration, CurveData, DH, F, H, XI};
use num_bigint::BigInt;

fn main() {
    // qp: a section of the quadric fibration inside D_h
    let q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H));
    let s = CurveData::new(0).hit(H, -1).hit(F, 1).mult(DH, 1);
    let (p, b, step) = qp_link(&q, &s).unwrap();
    println!("{}: checks pass = {}, xi^3 = {}, p_a(B) = {}", step.kind, step.passed(), p.form.cube(&DivisorClass::gen(XI)).unwrap(), b.genus);

    // and back from F(0,1,1) along a bisection of genus 1
    let bc = CurveData::new(1).hit(XI, 3).hit(F, 2);
    let (q2, _, step) = inverse_qp_link(&p2_bundle(0, 1, 1), &bc, &DivisorClass::gen(XI).with(F, -1)).unwrap();
    println!("{}: (-K)^3 = {}", step.kind, anticanonical_cube(&q2).unwrap());

    // qq twice along the ruling and its image
    let l = CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, 1);
    let (q1, l1, _) = qq_link(&q, &l).unwrap();
    let (q3, _, _) = qq_link(&q1, &l1).unwrap();
    println!("qq then qq: H^3 {} -> {} -> {}, identity = {}", -4, q1.form.cube(&DivisorClass::gen(H)).unwrap(), q3.form.cube(&DivisorClass::gen(H)).unwrap(), q3.same_lattice(&q));

    // pp at a point in the boundary drops the degree by one
    let p5 = p2_bundle_of_degree(BigInt::from(5));
    let (p4, step) = pp_link(&p5, 0, &DivisorClass::gen(XI), true).unwrap();
    println!("{}: degree 5 -> {}", step.kind, p4.form.cube(&DivisorClass::gen(XI)).unwrap());

    for on in [true, false] {
        let r = commute_blowups_check(&q, &CurveData::new(0).hit(H, 1).hit(F, 0), on).unwrap();
        println!("point {} the ruling: blow-ups commute = {}, twist shift = {}", if on { "on" } else { "off" }, r.passed(), r.twist_shift);
    }
}
