//! Classification verdicts for quadric descriptors.

use chowlink::compactify::{classify_quadric, FiberShape, QuadricDescriptor};

fn main() {
    let good = QuadricDescriptor::normal(0, 1, 40);
    println!("type 0 over F_1, (-K)^3 = 40: {:?}", classify_quadric(&good));

    let mut smooth = good.clone();
    smooth.df_fiber = Some(FiberShape::Smooth);
    println!("smooth D_f: {:?}", classify_quadric(&smooth));

    let mut wrong_h12 = good.clone();
    wrong_h12.h12 = Some(2);
    println!("h12 = 2: {:?}", classify_quadric(&wrong_h12));

    let mut unknown = good;
    unknown.base_rational = None;
    unknown.other_fibers_smooth = None;
    println!("missing flags: {:?}", classify_quadric(&unknown));
}
