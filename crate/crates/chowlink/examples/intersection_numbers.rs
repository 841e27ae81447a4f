//! Triple intersections on a P2-bundle and a quadric fibration.

use chowlink::chow_core::DivisorClass;
use chowlink::models::{anticanonical_cube, p2_bundle, quadric_fibration, F, H, XI};

fn main() {
    let p = p2_bundle(0, 1, 3);
    let xi = DivisorClass::gen(XI);
    let f = DivisorClass::gen(F);
    println!("F(0,1,3): xi^3 = {}, xi^2 F = {}", p.form.cube(&xi).unwrap(), p.triple(&xi, &xi, &f).unwrap());
    println!("  -K = {}, (-K)^3 = {}", p.anticanonical(), anticanonical_cube(&p).unwrap());

    for (h3, a) in [(-4, 3), (2, 1), (8, 0)] {
        let q = quadric_fibration(h3, a);
        let h = DivisorClass::gen(H);
        println!("Q({h3},{a}): H^3 = {}, -K = {}, (-K)^3 = {}", q.form.cube(&h).unwrap(), q.anticanonical(), anticanonical_cube(&q).unwrap());
    }
}
