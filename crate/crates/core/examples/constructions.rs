//! The explicit families: block product, binary majority K, one-symbol majority L.

use isecode::constructions::{construct_k, construct_l, construct_product, k_density};
use isecode::measures::{approx, rational_string};
use isecode::TVector;

fn main() -> isecode::Result<()> {
    let t = TVector::parse("3,0,0")?;
    let pc = construct_product(5, 3, &t)?;
    println!(
        "product n=5 s=3 t=({t}): blocks {:?}, {} words, intersecting: {}",
        pc.partition.sizes(),
        pc.family.len(),
        pc.family.is_t_intersecting(&t)?
    );

    let k = construct_k(8, &[1, 2, 3], &[4, 5, 6, 7, 8], (1, 1))?;
    println!(
        "K n=8 |X|=(3,5) t=(1,1): density {}",
        rational_string(&k.density())
    );
    for size in [10, 50, 100, 200] {
        let d = k_density(size, size, (2, 2))?;
        println!("K |X|=({size},{size}) t=(2,2): density {:.6}", approx(&d));
    }

    let l = construct_l(5, 3, &[1, 2, 3, 4, 5], 1)?;
    println!(
        "L n=5 s=3 t=1: {} words, density {}",
        l.len(),
        rational_string(&l.density())
    );
    Ok(())
}
