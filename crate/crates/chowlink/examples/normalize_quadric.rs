//! Normalizing a quadric fibration compactification down to the standard model.

use chowlink::compactify::{normalize, replay, Descriptor, QuadricDescriptor};
use chowlink::models::all_pass;

fn main() {
    for (m, d) in [(0, 0), (0, 2), (2, 3)] {
        let cert = normalize(&Descriptor::Quadric(QuadricDescriptor::normal(m, d, 40))).unwrap();
        println!("type {m}, d = {d}: {} steps to {}", cert.step_count(), cert.final_model.name());
        for s in &cert.steps {
            println!("  {:<28} {}", s.step.kind.to_string(), s.state.surface);
        }
        println!("  checks pass = {}, replay = {}", cert.all_checks_pass(), all_pass(&replay(&cert).unwrap()));
    }
    let cert = normalize(&Descriptor::Quadric(QuadricDescriptor::non_normal(1, 1, 40))).unwrap();
    println!("non-normal boundary: {} steps to {}", cert.step_count(), cert.final_model.name());
}
