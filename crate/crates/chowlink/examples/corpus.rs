//! Running the identity corpus, optionally filtered by entry name.

use chowlink::verify::{anchors, corpus, run_corpus, unmapped_anchors};

fn main() {
    let filter = std::env::args().nth(1);
    let report = run_corpus(filter.as_deref());
    print!("{}", report.to_text());
    println!("unmapped anchors: {:?}", unmapped_anchors(&corpus(), &anchors()));
}
