//! Hirzebruch surfaces, their elementary transformations and boundary surfaces.

use chowlink::chow_core::DivisorClass;
use chowlink::models::{boundary_surface, elementary_transform, hirzebruch, FIB, SIGMA};

fn main() {
    for d in 1..4 {
        let s = hirzebruch(d);
        let sigma = DivisorClass::gen(SIGMA);
        println!("F_{d}: S^2 = {}, S.f = {}, K^2 = {}", s.pair(&sigma, &sigma).unwrap(), s.pair(&sigma, &DivisorClass::gen(FIB)).unwrap(), s.canonical_square());
        let down = elementary_transform(&s, true).unwrap();
        let up = elementary_transform(&s, false).unwrap();
        println!("  center on S gives F_{}, off S gives F_{}", down.degree().unwrap(), up.degree().unwrap());
    }
    for (m, d) in [(0, 2), (1, 2), (2, 3)] {
        let s = boundary_surface(m, d);
        println!("type {m} boundary over d = {d}: {:?}, K^2 = {}", s.kind, s.canonical_square());
    }
}
