//! Binary demands (t1,t2): exact maxima against the best two-block majority family.

use isecode::search::{best_k, max_family};
use isecode::TVector;

fn main() -> isecode::Result<()> {
    println!("n,t1,t2,q,max,best_k,n1,n2");
    for n in 2..=9usize {
        for t1 in 1..n {
            for t2 in 1..=(n - t1) {
                let q = n - t1 - t2;
                if q > 4 {
                    continue;
                }
                let r = max_family(n, 2, &TVector(vec![t1 as u32, t2 as u32]))?;
                let k = best_k(n, (t1, t2))?;
                println!(
                    "{n},{t1},{t2},{q},{},{},{},{}",
                    r.max_size, k.size, k.n1, k.n2
                );
            }
        }
    }
    Ok(())
}
