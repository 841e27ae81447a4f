//! Normalizing a P2-bundle compactification and printing the certificate.

use chowlink::compactify::{normalize, Descriptor, P2Descriptor};

fn main() {
    let desc = Descriptor::P2(P2Descriptor::new(3, -1, 2));
    let cert = normalize(&desc).unwrap();
    for (i, s) in cert.steps.iter().enumerate() {
        println!("{i}: {} -> D_h = {} on {}", s.step.kind, s.state.boundary_h, s.state.surface);
    }
    println!("{}", cert.to_canonical_string());
}
