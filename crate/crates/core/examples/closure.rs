//! P-closure of a small family, its completeness witness, projection and slices.

use isecode::measures::{mu_p, rational, rational_string};
use isecode::{Family, SpaceParams, SymbolSet, Word};

fn main() -> isecode::Result<()> {
    let params = SpaceParams::new(3, 3)?;
    let words = ["112", "311"]
        .iter()
        .map(|w| Word::parse(params, w))
        .collect::<isecode::Result<Vec<_>>>()?;
    let f = Family::from_words(params, &words)?;
    let p = SymbolSet::parse(3, "1")?;

    if let Some((x, y, pos)) = f.completeness_violation(&p)? {
        println!("not {p}-complete: {x} is in, {y} is not, they differ at position {pos}");
    }
    let closed = f.closure_p(&p)?;
    println!(
        "closure has {} words, complete: {}",
        closed.len(),
        closed.is_p_complete(&p)?
    );
    for w in closed.words() {
        print!("{w} ");
    }
    println!();

    let sets = closed.project(1)?;
    let mu = mu_p(&sets, &rational(1, 3))?;
    println!(
        "density {} = mu_1/3 of the projection {}",
        rational_string(&closed.density()),
        rational_string(&mu)
    );

    for symbol in 1..=3 {
        println!(
            "slice at last position = {symbol}: {} words",
            closed.slice(symbol)?.len()
        );
    }
    Ok(())
}
