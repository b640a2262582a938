//! Words, meets and intersection profiles in [3]^4.

use isecode::word::{leq_p, meet, profile, satisfies};
use isecode::{SpaceParams, SymbolSet, TVector, Word};

fn main() -> isecode::Result<()> {
    let params = SpaceParams::new(3, 4)?;
    let x = Word::parse(params, "1213")?;
    let y = Word::parse(params, "1233")?;
    println!(
        "x = {x} (index {}), y = {y} (index {})",
        x.index(),
        y.index()
    );

    let m = meet(&x, &y)?;
    println!("meet: {:?}", m.entries);
    println!("profile: {:?}", profile(&x, &y)?.counts);

    for t in ["1,1,1", "1,1,0", "2,0,0"] {
        let t = TVector::parse(t)?;
        println!("satisfies ({t}): {}", satisfies(&x, &y, &t)?);
    }

    let p = SymbolSet::parse(3, "1")?;
    println!("x <_{p} y: {}", leq_p(&x, &y, &p)?);
    println!("y <_{p} x: {}", leq_p(&y, &x, &p)?);
    Ok(())
}
