//! Explicit intersecting families: binary majority blocks, one-symbol
//! majority, window-threshold set families, lifts of set families to words,
//! and the block product that attains the product bound.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::family::{Family, SetFamily};
use crate::measures::{binomial_tail, block_demand, product_bound, rational, ProductBound};
use crate::word::{SpaceParams, TVector};

/// Disjoint blocks `X_1, …, X_s` of 1-based positions in `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        for block in &blocks {
            for &j in block {
                if j == 0 || j > n {
                    return param(format!("position {j} is outside [1, {n}]"));
                }
                if seen[j] {
                    return param(format!("position {j} appears in two blocks"));
                }
                seen[j] = true;
            }
        }
        Ok(Partition { n, blocks })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// Window-threshold family `F_{t,r} = {A : |A ∩ [t+2r]| ≥ t+r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowFamilySpec {
    pub t: usize,
    pub r: usize,
}

impl WindowFamilySpec {
    pub fn window(&self) -> usize {
        self.t + 2 * self.r
    }

    pub fn threshold(&self) -> usize {
        self.t + self.r
    }
}

/// `⌈(size + t) / 2⌉`: the majority threshold used by both majority constructions.
fn majority_threshold(size: usize, t: usize) -> usize {
    (size + t).div_ceil(2)
}

fn positions_mask(n: usize, xs: &[usize]) -> Result<Vec<usize>> {
    let part = Partition::new(n, vec![xs.to_vec()])?;
    Ok(part.blocks[0].iter().map(|j| j - 1).collect())
}

/// Binary words with at least `⌈(|X_i| + t_i)/2⌉` positions of `X_i`
/// carrying symbol `i`, for both `i = 1, 2`.
///
/// When `t_i > |X_i|` the result is empty. The family is
/// `(t_1, t_2)`-intersecting whenever `X_1` and `X_2` are disjoint.
pub fn construct_k(n: usize, x1: &[usize], x2: &[usize], t: (usize, usize)) -> Result<Family> {
    if t.0 < 1 || t.1 < 1 {
        return param("both demands must be at least 1");
    }
    let params = SpaceParams::new(2, n)?;
    let blocks = [positions_mask(n, x1)?, positions_mask(n, x2)?];
    let need = [
        majority_threshold(blocks[0].len(), t.0),
        majority_threshold(blocks[1].len(), t.1),
    ];
    Ok(Family::from_predicate(params, |y| {
        (0..2).all(|i| {
            let hits = blocks[i]
                .iter()
                .filter(|&&j| y[j] as usize == i + 1)
                .count();
            hits >= need[i]
        })
    }))
}

/// Density of the majority construction over disjoint blocks of sizes
/// `n1`, `n2`, from binomial tails; never materialises the family.
pub fn k_density(n1: u64, n2: u64, t: (u64, u64)) -> Result<BigRational> {
    let half = rational(1, 2);
    let a = binomial_tail(n1, (n1 + t.0).div_ceil(2), &half)?;
    let b = binomial_tail(n2, (n2 + t.1).div_ceil(2), &half)?;
    Ok(a * b)
}

/// Words with at least `⌈(|X| + t)/2⌉` positions of `X` equal to 1.
/// The family is `(t, 0, …, 0)`-intersecting.
pub fn construct_l(n: usize, s: usize, x: &[usize], t: usize) -> Result<Family> {
    if t < 1 || t > x.len() {
        return param(format!("need 1 <= t <= |X| = {}, got t = {t}", x.len()));
    }
    let params = SpaceParams::new(s, n)?;
    let block = positions_mask(n, x)?;
    let need = majority_threshold(block.len(), t);
    Ok(Family::from_predicate(params, |y| {
        block.iter().filter(|&&j| y[j] == 1).count() >= need
    }))
}

/// Density of the one-symbol majority family with `|X| = x_len`, from a
/// binomial tail at `p = 1/s`.
pub fn l_density(s: u64, x_len: u64, t: u64) -> Result<BigRational> {
    binomial_tail(x_len, (x_len + t).div_ceil(2), &rational(1, s as i64))
}

pub fn construct_ftr(n: usize, t: usize, r: usize) -> Result<SetFamily> {
    let spec = WindowFamilySpec { t, r };
    if spec.window() > n {
        return Err(Error::Refused(format!(
            "window t + 2r = {} exceeds n = {n}",
            spec.window()
        )));
    }
    let window = (1usize << spec.window()) - 1;
    SetFamily::from_predicate(n, |m| {
        (m & window).count_ones() as usize >= spec.threshold()
    })
}

/// Words `w ∈ [s]^n` whose position set `{j : w_j = symbol}` lies in `sets`.
pub fn lift(sets: &SetFamily, symbol: usize, s: usize) -> Result<Family> {
    if symbol == 0 || symbol > s {
        return param(format!("symbol {symbol} is outside 1..={s}"));
    }
    if !sets.is_upward_closed() {
        return param("lift needs an upward-closed set family");
    }
    let params = SpaceParams::new(s, sets.n())?;
    Ok(Family::from_predicate(params, |y| {
        sets.contains(symbol_mask(y.iter().copied(), symbol))
    }))
}

fn symbol_mask(symbols: impl Iterator<Item = u8>, symbol: usize) -> usize {
    symbols
        .enumerate()
        .filter(|(_, c)| *c as usize == symbol)
        .fold(0, |m, (j, _)| m | 1 << j)
}

/// Block product family together with its layout and target density.
#[derive(Clone, Debug)]
pub struct ProductConstruction {
    pub partition: Partition,
    pub windows: Vec<WindowFamilySpec>,
    pub bound: ProductBound,
    pub family: Family,
}

/// Block product: block `X_i` (consecutive positions, `|X_i| = t_i + 2r_i`
/// for `i < s`, `X_s` takes the rest) hosts the lift of `F_{t_i, r_i}` for
/// symbol `i`, and a word belongs iff every block restriction belongs.
pub fn construct_product(n: usize, s: usize, t: &TVector) -> Result<ProductConstruction> {
    if s < 3 {
        return Err(Error::Refused(format!(
            "product construction needs s >= 3, got {s}"
        )));
    }
    let params = SpaceParams::new(s, n)?;
    t.check_alphabet(&params)?;
    let bound = product_bound(n as u64, s as u64, t)?;
    let windows: Vec<WindowFamilySpec> =
        t.0.iter()
            .zip(&bound.selections)
            .map(|(&ti, sel)| WindowFamilySpec {
                t: ti as usize,
                r: sel.r as usize,
            })
            .collect();

    let mut blocks = Vec::with_capacity(s);
    let mut next = 1;
    for spec in &windows[..s - 1] {
        blocks.push((next..next + spec.window()).collect::<Vec<_>>());
        next += spec.window();
    }
    debug_assert!(n + 1 - next >= windows[s - 1].window());
    blocks.push((next..=n).collect());
    let partition = Partition::new(n, blocks)?;

    let block_sets = partition
        .blocks
        .iter()
        .zip(&windows)
        .map(|(block, spec)| construct_ftr(block.len(), spec.t, spec.r))
        .collect::<Result<Vec<_>>>()?;
    let family = Family::from_predicate(params, |y| {
        partition
            .blocks
            .iter()
            .zip(&block_sets)
            .enumerate()
            .all(|(i, (block, sets))| {
                sets.contains(symbol_mask(block.iter().map(|&j| y[j - 1]), i + 1))
            })
    });
    Ok(ProductConstruction {
        partition,
        windows,
        bound,
        family,
    })
}

/// Positions still free after all block windows are placed, or the deficit.
pub fn product_slack(n: usize, s: usize, t: &TVector) -> Result<i64> {
    Ok(n as i64 - block_demand(s as u64, t)? as i64)
}

/// `μ_{1/s}` of a set family scaled to words, i.e. the density the lift has.
pub fn lifted_density(sets: &SetFamily, s: usize) -> Result<BigRational> {
    crate::measures::mu_p(sets, &rational(1, s as i64))
}

/// Exact `(1/2)`-tail density of the majority family when `t = (1,1)` and
/// both blocks have odd size; always `1/4`.
pub fn odd_block_density(n1: u64, n2: u64) -> Result<BigRational> {
    if n1.is_multiple_of(2) || n2.is_multiple_of(2) {
        return param("block sizes must be odd");
    }
    k_density(n1, n2, (1, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::mu_p;
    use crate::word::Word;

    fn count_by_enumeration(s: usize, n: usize, pred: impl Fn(&Word) -> bool) -> usize {
        SpaceParams::new(s, n)
            .unwrap()
            .words()
            .filter(|w| pred(w))
            .count()
    }

    #[test]
    fn k_examples() {
        let k = construct_k(4, &[1, 2, 3], &[4], (1, 1)).unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k.density(), rational(1, 4));
        let k = construct_k(2, &[1], &[2], (1, 1)).unwrap();
        assert_eq!(
            k.words().map(|w| w.to_string()).collect::<Vec<_>>(),
            vec!["12"]
        );
        // demand larger than the block: empty, not an error
        assert!(construct_k(3, &[1], &[2], (2, 1)).unwrap().is_empty());
        assert!(construct_k(3, &[1], &[2], (0, 1)).is_err());
        assert!(construct_k(3, &[4], &[2], (1, 1)).is_err());
    }

    #[test]
    fn k_is_intersecting_for_disjoint_blocks() {
        for n in 2..=8usize {
            for n1 in 1..n {
                for n2 in 1..=n - n1 {
                    let x1: Vec<usize> = (1..=n1).collect();
                    let x2: Vec<usize> = (n1 + 1..=n1 + n2).collect();
                    for t1 in 1..=n1.min(3) {
                        for t2 in 1..=n2.min(3) {
                            let k = construct_k(n, &x1, &x2, (t1, t2)).unwrap();
                            let t = TVector(vec![t1 as u32, t2 as u32]);
                            assert!(k.is_t_intersecting(&t).unwrap());
                            assert!(k.density() <= rational(1, 4));
                            assert_eq!(
                                k.density(),
                                k_density(n1 as u64, n2 as u64, (t1 as u64, t2 as u64)).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn k_odd_blocks_give_a_quarter() {
        for n1 in (1..=11u64).step_by(2) {
            for n2 in (1..=11u64).step_by(2) {
                assert_eq!(odd_block_density(n1, n2).unwrap(), rational(1, 4));
            }
        }
        assert!(odd_block_density(2, 3).is_err());
        let k = construct_k(6, &[1, 2, 3], &[4, 5, 6], (1, 1)).unwrap();
        assert_eq!(k.density(), rational(1, 4));
    }

    #[test]
    fn l_examples() {
        let l = construct_l(3, 3, &[1], 1).unwrap();
        assert_eq!((l.len(), l.density()), (9, rational(1, 3)));
        let l = construct_l(3, 3, &[1, 2, 3], 1).unwrap();
        let oracle = count_by_enumeration(3, 3, |w| {
            w.symbols().iter().filter(|&&c| c == 1).count() >= 2
        });
        assert_eq!(oracle, 7);
        assert_eq!(l.len(), oracle);
        assert!(l.is_t_intersecting(&TVector(vec![1, 0, 0])).unwrap());
        assert_eq!(l.density(), l_density(3, 3, 1).unwrap());
        assert!(construct_l(3, 3, &[1], 2).is_err());
    }

    #[test]
    fn l_density_vanishes_against_concentration_bound() {
        // |X| = n = 20, s = 3, ε = 2/3 - 1/2
        let exact = crate::measures::approx(&l_density(3, 20, 1).unwrap());
        let eps: f64 = 2.0 / 3.0 - 0.5;
        let bound = (-2.0 * eps * eps * 20.0 / 9.0).exp();
        assert!(exact < bound, "{exact} vs {bound}");
        assert!(l_density(3, 60, 1).unwrap() < l_density(3, 20, 1).unwrap());
    }

    #[test]
    fn ftr_examples() {
        let f20 = construct_ftr(3, 2, 0).unwrap();
        assert_eq!(f20.masks().collect::<Vec<_>>(), vec![0b011, 0b111]);
        let f11 = construct_ftr(3, 1, 1).unwrap();
        assert_eq!(f11.len(), 4);
        for t in 0..=4 {
            let ft0 = construct_ftr(5, t, 0).unwrap();
            let prefix = (1usize << t) - 1;
            assert_eq!(
                ft0,
                SetFamily::from_predicate(5, |m| m & prefix == prefix).unwrap()
            );
        }
        assert!(construct_ftr(3, 2, 1).is_err());
        for t in 0..=3 {
            for r in 0..=2 {
                assert!(construct_ftr(t + 2 * r + 1, t, r)
                    .unwrap()
                    .is_upward_closed());
            }
        }
    }

    #[test]
    fn lift_examples() {
        let s1 = SetFamily::from_predicate(2, |m| m & 1 == 1).unwrap();
        assert_eq!(lift(&s1, 1, 3).unwrap().len(), 3);
        let f20 = construct_ftr(2, 2, 0).unwrap();
        let l = lift(&f20, 2, 3).unwrap();
        assert_eq!(
            l.words().map(|w| w.to_string()).collect::<Vec<_>>(),
            vec!["22"]
        );
        let not_up = SetFamily::from_masks(2, [1]).unwrap();
        assert!(lift(&not_up, 1, 3).is_err());
    }

    #[test]
    fn lift_is_complete_and_projects_back() {
        for s in 2..=4 {
            for n in 1..=4 {
                for t in 0..=n {
                    for r in 0..=(n - t) / 2 {
                        let sets = construct_ftr(n, t, r).unwrap();
                        for i in 1..=s {
                            let l = lift(&sets, i, s).unwrap();
                            let p = crate::word::SymbolSet::new(s, [i]).unwrap();
                            assert!(l.is_p_complete(&p).unwrap());
                            assert_eq!(l.project(i).unwrap(), sets);
                            assert_eq!(l.density(), lifted_density(&sets, s).unwrap());
                            assert_eq!(
                                l.density(),
                                mu_p(&l.project(i).unwrap(), &rational(1, s as i64)).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_examples() {
        let pc = construct_product(3, 3, &TVector(vec![1, 1, 0])).unwrap();
        let words: Vec<String> = pc.family.words().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["121", "122", "123"]);
        assert_eq!(pc.family.density(), rational(1, 9));

        let pc = construct_product(5, 3, &TVector(vec![3, 0, 0])).unwrap();
        assert_eq!(pc.partition.sizes(), vec![5, 0, 0]);
        assert_eq!(
            (pc.family.len(), pc.family.density()),
            (11, rational(11, 243))
        );

        let pc = construct_product(4, 3, &TVector::zeros(3)).unwrap();
        assert_eq!(pc.family.len(), 81);

        let err = construct_product(2, 3, &TVector(vec![3, 0, 0])).unwrap_err();
        assert!(matches!(err, Error::Refused(_)));
        assert!(construct_product(4, 2, &TVector(vec![1, 1])).is_err());
        assert_eq!(product_slack(2, 3, &TVector(vec![3, 0, 0])).unwrap(), -3);
    }

    #[test]
    fn product_is_intersecting_with_exact_density() {
        for s in 3..=4usize {
            for n in 1..=if s == 3 { 7 } else { 5 } {
                for t in TVector::all_with_sum_at_most(s, n as u32) {
                    let Ok(pc) = construct_product(n, s, &t) else {
                        assert!(product_slack(n, s, &t).unwrap() < 0);
                        continue;
                    };
                    assert!(
                        pc.family.is_t_intersecting(&t).unwrap(),
                        "s={s} n={n} t={t}"
                    );
                    assert_eq!(pc.family.density(), pc.bound.density);
                    assert_eq!(pc.family.len().to_string(), pc.bound.words);
                }
            }
        }
    }
}
