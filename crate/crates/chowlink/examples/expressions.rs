//! Parsing and evaluating divisor expressions.

use chowlink::chow_core::DivisorClass;
use chowlink::exprs::{eval, eval_class, parse};
use chowlink::models::{hirzebruch, quadric_fibration, DF, DH, F, H};

fn main() {
    let q = quadric_fibration(-4, 3).with_tracked(DH, DivisorClass::gen(H)).with_tracked(DF, DivisorClass::gen(F));
    for text in ["(2*Dh + 3*F)^3", "-K^3", "Dh^2*Df", "K*K*F"] {
        let e = parse(text).unwrap();
        println!("{text:<16} parsed as {e:<16} = {}", eval(&e, &q).unwrap());
    }
    println!("class of -K - Dh: {}", eval_class(&parse("-K - Dh").unwrap(), &q).unwrap());
    println!("(K + 2f)^2 on F_0 = {}", eval(&parse("(K + 2*f)^2").unwrap(), &hirzebruch(0)).unwrap());
    for bad in ["Dh ^", "Dh^2", "Zz^3"] {
        println!("{bad:<8} -> {}", parse(bad).and_then(|e| eval(&e, &q)).unwrap_err());
    }
}
