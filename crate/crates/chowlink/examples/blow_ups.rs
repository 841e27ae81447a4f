//! Blowing up a ruling and a point, then contracting the point back.

use chowlink::chow_core::DivisorClass;
use chowlink::exprs::eval_str;
use chowlink::models::{anticanonical_cube, blow_up_curve, blow_up_point, contract, quadric_fibration, CurveData, LinkPatternTag, PointData, DF, DH, F, H};

fn main() {
    let q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));

    // a ruling of D_h inside D_f, with D_h singular along it
    let ruling = CurveData::new(0).hit(H, 1).hit(F, 0).mult(DH, 2).mult(DF, 1);
    let x = blow_up_curve(&q, &ruling).unwrap();
    println!("after the ruling: Dh = {}, Df = {}", x.tracked(DH).unwrap(), x.tracked(DF).unwrap());
    println!("  Dh^2 Df = {}", eval_str("Dh^2*Df", &x).unwrap());
    println!("  Dh Df^2 = {}", eval_str("Dh*Df^2", &x).unwrap());
    println!("  (-K)^3 = {}", anticanonical_cube(&x).unwrap());

    let y = blow_up_point(&q, &PointData::new().mult(DH, 1));
    println!("after a point on Dh: E^3 = {}, (-K)^3 = {}", eval_str("E^3", &y).unwrap(), anticanonical_cube(&y).unwrap());
    let back = contract(&y, &DivisorClass::gen("E"), LinkPatternTag::PointPattern).unwrap();
    println!("contracted back to the original lattice: {}", back.same_lattice(&q));
}
