//! Exact p-biased measures and the closed-form extremal values built from them.
//!
//! Everything here is exact rational arithmetic; no floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::family::SetFamily;
use crate::word::TVector;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Param(format!("'{text}' is not a rational of the form p/q"));
    let (num, den) = match text.trim().split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `"num/den"` rendering, denominator always present.
pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal approximation for human-readable output only.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || *p > BigRational::one() {
        return param(format!("probability {} outside [0, 1]", rational_string(p)));
    }
    Ok(())
}

/// `P(Bin(m, p) ≥ k_min)`, exact.
pub fn binomial_tail(m: u64, k_min: u64, p: &BigRational) -> Result<BigRational> {
    check_probability(p)?;
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for k in k_min..=m {
        let weight = BigRational::from_integer(BigInt::from(binomial(m, k)));
        total += weight * Pow::pow(p, k) * Pow::pow(&q, m - k);
    }
    Ok(total)
}

/// `μ_p(S) = Σ_{A ∈ S} p^|A| (1-p)^(n-|A|)`.
pub fn mu_p(family: &SetFamily, p: &BigRational) -> Result<BigRational> {
    check_probability(p)?;
    let n = family.n();
    let mut by_size = vec![0u64; n + 1];
    for m in family.masks() {
        by_size[m.count_ones() as usize] += 1;
    }
    let q = BigRational::one() - p;
    Ok(by_size
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| {
            BigRational::from_integer(BigInt::from(c))
                * Pow::pow(p, k as u64)
                * Pow::pow(&q, (n - k) as u64)
        })
        .sum())
}

/// μ_p of the window family `{A : |A ∩ [t+2r]| ≥ t+r}`; independent of the
/// ambient ground set as long as it contains the window.
pub fn mu_p_window(t: u64, r: u64, p: &BigRational) -> Result<BigRational> {
    binomial_tail(t + 2 * r, t + r, p)
}

/// `⌊(n - t) / 2⌋`, the largest window parameter that fits in `[n]`.
pub fn r_star(n: u64, t: u64) -> Result<u64> {
    if n < t {
        return Err(Error::Refused(format!("n = {n} is smaller than t = {t}")));
    }
    Ok((n - t) / 2)
}

/// Outcome of the piecewise selection of the optimal window family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WSelection {
    pub t: u64,
    #[serde(serialize_with = "ser_rational")]
    pub p: BigRational,
    /// Window parameter of the chosen family `F_{t,r}`.
    pub r: u64,
    pub r_star: u64,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

pub(crate) fn ser_rational<S: serde::Serializer>(
    x: &BigRational,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&rational_string(x))
}

/// Maximum μ_p-measure of a `t`-intersecting family of subsets of `[n]`.
///
/// For `t ≥ 2` the window `r < r*` is the first one with
/// `r/(t+2r-1) ≤ p ≤ (r+1)/(t+2r+1)`; failing that, `r*` itself. Adjacent
/// intervals share an endpoint and the smaller `r` wins there (the values
/// coincide). `t = 0` gives 1 and `t = 1` gives `p`.
pub fn w(n: u64, t: u64, p: &BigRational) -> Result<WSelection> {
    let half = rational(1, 2);
    if !p.is_positive() || *p > half {
        return Err(Error::Refused(format!(
            "p = {} outside (0, 1/2]",
            rational_string(p)
        )));
    }
    let rs = r_star(n, t)?;
    let r = if t < 2 {
        0
    } else {
        let fits = |r: u64| {
            let lo = rational(r as i64, (t + 2 * r - 1) as i64);
            let hi = rational((r + 1) as i64, (t + 2 * r + 1) as i64);
            lo <= *p && *p <= hi
        };
        match (0..rs).find(|&r| fits(r)) {
            Some(r) => r,
            None => {
                let lo = rational(rs as i64, (t + 2 * rs - 1) as i64);
                if lo > *p {
                    return Err(Error::Refused(format!(
                        "no window applies at t = {t}, n = {n}, p = {}",
                        rational_string(p)
                    )));
                }
                rs
            }
        }
    };
    Ok(WSelection {
        t,
        p: p.clone(),
        r,
        r_star: rs,
        value: mu_p_window(t, r, p)?,
    })
}

/// Smallest window length that hosts the family selected by `w(·, t, 1/s)`:
/// `t + 2·max(0, ⌈(t - s + 1)/(s - 2)⌉)`.
pub fn window_length(t: u64, s: u64) -> Result<u64> {
    if s < 3 {
        return Err(Error::Refused(format!(
            "window length needs s >= 3, got {s}"
        )));
    }
    let num = t as i64 - s as i64 + 1;
    let den = (s - 2) as i64;
    let ceil = if num <= 0 { 0 } else { (num + den - 1) / den };
    Ok(t + 2 * ceil as u64)
}

/// `s^(n - Σt)`, the maximum size of a `t`-intersecting family when every
/// `t_i < s`.
pub fn power_bound(n: u64, s: u64, t: &TVector) -> Result<BigUint> {
    if t.len() as u64 != s {
        return param(format!("t has {} entries, expected s = {s}", t.len()));
    }
    if let Some((i, ti)) = t.0.iter().enumerate().find(|(_, &ti)| ti as u64 >= s) {
        return Err(Error::Refused(format!(
            "t_{} = {ti} is not below s = {s}",
            i + 1
        )));
    }
    let sum = t.sum();
    if sum > n {
        return Err(Error::Refused(format!("sum of t = {sum} exceeds n = {n}")));
    }
    Ok(Pow::pow(BigUint::from(s), n - sum))
}

/// Exact density and word count of the largest `t`-intersecting family when
/// the blocks fit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductBound {
    #[serde(serialize_with = "ser_rational")]
    pub density: BigRational,
    pub words: String,
    pub selections: Vec<WSelection>,
}

impl ProductBound {
    pub fn word_count(&self) -> BigUint {
        self.words.parse().expect("decimal word count")
    }
}

/// `Π_i w(n, t_i, 1/s)`, requiring `s ≥ 3` and `Σ window_length(t_i, s) ≤ n`.
pub fn product_bound(n: u64, s: u64, t: &TVector) -> Result<ProductBound> {
    if t.len() as u64 != s {
        return param(format!("t has {} entries, expected s = {s}", t.len()));
    }
    let need = block_demand(s, t)?;
    if need > n {
        return Err(Error::Refused(format!(
            "blocks need {need} positions but n = {n} (deficit {})",
            need - n
        )));
    }
    let p = rational(1, s as i64);
    let selections =
        t.0.iter()
            .map(|&ti| w(n, ti as u64, &p))
            .collect::<Result<Vec<_>>>()?;
    let density: BigRational = selections.iter().map(|sel| sel.value.clone()).product();
    let scaled = &density * BigRational::from_integer(Pow::pow(BigInt::from(s), n));
    debug_assert!(scaled.is_integer());
    Ok(ProductBound {
        words: scaled.to_integer().to_string(),
        density,
        selections,
    })
}

/// `Σ_i window_length(t_i, s)`.
pub fn block_demand(s: u64, t: &TVector) -> Result<u64> {
    t.0.iter().map(|&ti| window_length(ti as u64, s)).sum()
}
