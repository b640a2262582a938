//! Closed-form bounds: window measures, w(n,t,p) and the two family bounds.
//!
//! Usage: cargo run --example bounds -- [n] [s] [t]

use isecode::measures::{approx, power_bound, product_bound, rational, rational_string, w};
use isecode::TVector;

fn main() -> isecode::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u64 = args.first().map_or(Ok(9), |a| a.parse()).expect("n");
    let s: u64 = args.get(1).map_or(Ok(3), |a| a.parse()).expect("s");
    let t = TVector::parse(args.get(2).map_or("3,1,0", |a| a.as_str()))?;

    for ti in 0..=4 {
        let sel = w(n, ti, &rational(1, s as i64))?;
        println!(
            "w({n},{ti},1/{s}) = {} ({:.5}) via r = {} of r* = {}",
            rational_string(&sel.value),
            approx(&sel.value),
            sel.r,
            sel.r_star
        );
    }

    match power_bound(n, s, &t) {
        Ok(b) => println!("power bound for t = ({t}): {b} words"),
        Err(e) => println!("power bound for t = ({t}): {e}"),
    }
    match product_bound(n, s, &t) {
        Ok(b) => println!(
            "product bound for t = ({t}): {} words, density {}",
            b.words,
            rational_string(&b.density)
        ),
        Err(e) => println!("product bound for t = ({t}): {e}"),
    }
    Ok(())
}
