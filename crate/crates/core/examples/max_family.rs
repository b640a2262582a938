//! Exact maximum families by clique search, compared with the bounds.
//!
//! Usage: cargo run --release --example max_family -- [n] [s] [t] [threads]

use std::time::Duration;

use isecode::measures::{power_bound, product_bound};
use isecode::search::{max_family_with, SearchOptions};
use isecode::TVector;

fn main() -> isecode::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(Ok(6), |a| a.parse()).expect("n");
    let s: usize = args.get(1).map_or(Ok(3), |a| a.parse()).expect("s");
    let t = TVector::parse(args.get(2).map_or("3,0,0", |a| a.as_str()))?;
    let threads: usize = args.get(3).map_or(Ok(0), |a| a.parse()).expect("threads");

    let opts = SearchOptions {
        threads,
        timeout: Duration::from_secs(120),
        ..Default::default()
    };
    let r = max_family_with(n, s, &t, &opts)?;
    let label = if r.complete {
        "maximum"
    } else {
        "lower bound (timed out)"
    };
    println!(
        "n={n} s={s} t=({t}): {label} {} after {} nodes in {:?}",
        r.max_size, r.nodes_explored, r.elapsed
    );
    if let Ok(b) = power_bound(n as u64, s as u64, &t) {
        println!("power bound {b}");
    }
    if let Ok(b) = product_bound(n as u64, s as u64, &t) {
        println!("product bound {}", b.words);
    }
    for w in r.witness.words().take(12) {
        print!("{w} ");
    }
    println!();
    Ok(())
}
