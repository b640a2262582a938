//! Checks of the negative correlation between a `P`-complete and a
//! `Q`-complete family (`P`, `Q` disjoint): `|F|·|G| ≥ s^n·|F ∩ G|`.
//!
//! Exhaustive at `n = 1`, seeded random closures above that, plus the
//! slice facts that drive the induction on `n`.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::family::Family;
use crate::measures::{rational, rational_string, ser_rational};
use crate::word::{SpaceParams, SymbolSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrelationCheck {
    pub s: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_symbols")]
    pub p: SymbolSet,
    #[serde(serialize_with = "ser_symbols")]
    pub q: SymbolSet,
    pub f_size: usize,
    pub g_size: usize,
    pub both: usize,
    /// `|F|·|G|`
    pub lhs: u128,
    /// `s^n·|F ∩ G|`
    pub rhs: u128,
    pub slack: i128,
}

fn ser_symbols<S: serde::Serializer>(
    set: &SymbolSet,
    ser: S,
) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(set.members())
}

impl CorrelationCheck {
    pub fn holds(&self) -> bool {
        self.slack >= 0
    }
}

fn check_pair_sets(s: usize, p: &SymbolSet, q: &SymbolSet) -> Result<()> {
    p.check_proper_nonempty(s)?;
    q.check_proper_nonempty(s)?;
    if !p.is_disjoint(q) {
        return param(format!("P = {p} and Q = {q} must be disjoint"));
    }
    Ok(())
}

/// Computes both sides exactly after verifying the completeness preconditions.
pub fn check_correlation(
    f: &Family,
    g: &Family,
    p: &SymbolSet,
    q: &SymbolSet,
) -> Result<CorrelationCheck> {
    let params = f.params();
    params.check_same(&g.params())?;
    check_pair_sets(params.s(), p, q)?;
    for (name, fam, set) in [("F", f, p), ("G", g, q)] {
        if let Some((x, y, pos)) = fam.completeness_violation(set)? {
            return Err(Error::Refused(format!(
                "{name} is not {set}-complete: {x} is a member, {y} is not, they differ only at position {pos}"
            )));
        }
    }
    Ok(unchecked(f, g, p, q))
}

fn unchecked(f: &Family, g: &Family, p: &SymbolSet, q: &SymbolSet) -> CorrelationCheck {
    let params = f.params();
    let both = f.intersect(g).expect("same params").len();
    let lhs = f.len() as u128 * g.len() as u128;
    let rhs = params.size() as u128 * both as u128;
    CorrelationCheck {
        s: params.s(),
        n: params.n(),
        p: *p,
        q: *q,
        f_size: f.len(),
        g_size: g.len(),
        both,
        lhs,
        rhs,
        slack: lhs as i128 - rhs as i128,
    }
}

/// Includes each word independently with probability `rho`, then closes under `P`.
pub fn random_complete_family(
    params: SpaceParams,
    p: &SymbolSet,
    rho: &BigRational,
    seed: u64,
) -> Result<Family> {
    let (num, den) = match (rho.numer().to_u32(), rho.denom().to_u32()) {
        (Some(a), Some(b)) if a <= b => (a, b),
        _ => {
            return param(format!(
                "seed density {} must lie in [0, 1] with a 32-bit denominator",
                rational_string(rho)
            ))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds = (0..params.size()).filter(|_| rng.gen_ratio(num, den));
    Family::from_indices(params, seeds.collect::<Vec<_>>())?.closure_p(p)
}

/// Every pair of a `P`-complete and a `Q`-complete family in `[s]^1`.
pub fn exhaustive_correlation(
    s: usize,
    p: &SymbolSet,
    q: &SymbolSet,
) -> Result<Vec<CorrelationCheck>> {
    if s > 12 {
        return Err(Error::Refused(format!(
            "exhaustive enumeration limited to s <= 12, got {s}"
        )));
    }
    check_pair_sets(s, p, q)?;
    let params = SpaceParams::new(s, 1)?;
    let all: Vec<Family> = (0u32..1 << s)
        .map(|mask| {
            Family::from_indices(params, (0..s).filter(|&i| mask >> i & 1 == 1))
                .expect("index below s")
        })
        .collect();
    let fs: Vec<&Family> = all.iter().filter(|f| f.is_p_complete(p).unwrap()).collect();
    let gs: Vec<&Family> = all.iter().filter(|g| g.is_p_complete(q).unwrap()).collect();
    Ok(fs
        .iter()
        .flat_map(|f| gs.iter().map(move |g| unchecked(f, g, p, q)))
        .collect())
}

/// Slice sizes at the last position and any failed structural fact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub f_sizes: Vec<usize>,
    pub g_sizes: Vec<usize>,
    pub violations: Vec<String>,
}

impl SliceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies on actual data: slice sizes of `F` agree off `P` (and are the
/// smallest), those of `G` agree off `Q`, and `(f_i - f)(g_i - g) = 0` for
/// every symbol `i`, where `f`, `g` are the common off-set values.
pub fn slice_identity_check(
    f: &Family,
    g: &Family,
    p: &SymbolSet,
    q: &SymbolSet,
) -> Result<SliceReport> {
    let params = f.params();
    params.check_same(&g.params())?;
    if params.n() < 2 {
        return param("slice checks need n >= 2");
    }
    check_pair_sets(params.s(), p, q)?;
    let s = params.s();
    let sizes =
        |fam: &Family| -> Result<Vec<usize>> { (1..=s).map(|i| Ok(fam.slice(i)?.len())).collect() };
    let f_sizes = sizes(f)?;
    let g_sizes = sizes(g)?;
    let mut violations = Vec::new();

    let mut common = |name: &str, sizes: &[usize], set: &SymbolSet| -> i64 {
        let off: Vec<usize> = (1..=s).filter(|&i| !set.contains(i as u8)).collect();
        let base = sizes[off[0] - 1];
        for &i in &off {
            if sizes[i - 1] != base {
                violations.push(format!(
                    "{name}: slice {i} has {} words but slice {} has {base}",
                    sizes[i - 1],
                    off[0]
                ));
            }
            if let Some(j) = (1..=s).find(|&j| sizes[i - 1] > sizes[j - 1]) {
                violations.push(format!(
                    "{name}: slice {i} ({}) exceeds slice {j} ({})",
                    sizes[i - 1],
                    sizes[j - 1]
                ));
            }
        }
        base as i64
    };
    let fc = common("F", &f_sizes, p);
    let gc = common("G", &g_sizes, q);
    for i in 0..s {
        let prod = (f_sizes[i] as i64 - fc) * (g_sizes[i] as i64 - gc);
        if prod != 0 {
            violations.push(format!("(f_{0} - f)(g_{0} - g) = {prod}", i + 1));
        }
    }
    Ok(SliceReport {
        f_sizes,
        g_sizes,
        violations,
    })
}

/// Canonical disjoint `(P, Q)` patterns up to relabelling symbols:
/// `P = {1..a}`, `Q = {a+1..a+b}` with both proper and nonempty.
pub fn patterns(s: usize) -> Vec<(SymbolSet, SymbolSet)> {
    let mut out = Vec::new();
    for a in 1..s {
        for b in 1..=(s - a).min(s - 1) {
            let p = SymbolSet::new(s, 1..=a).expect("in range");
            let q = SymbolSet::new(s, a + 1..=a + b).expect("in range");
            out.push((p, q));
        }
    }
    out
}

/// Seed densities swept across trials by default: about 1, 2 and 4 expected
/// seed words in a space of `space` words, capped at 1/2. Larger densities
/// almost always close up to the whole space.
pub fn default_rhos(space: usize) -> Vec<BigRational> {
    let half = rational(1, 2);
    [1, 2, 4]
        .iter()
        .map(|&k| rational(k, space as i64).min(half.clone()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub s: usize,
    pub n: usize,
    pub p: SymbolSet,
    pub q: SymbolSet,
    pub trials: usize,
    /// Trial `k` uses seed `first_seed + k`.
    pub first_seed: u64,
    pub rhos: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    #[serde(serialize_with = "ser_rational")]
    pub rho: BigRational,
    pub f_size: usize,
    pub g_size: usize,
    pub both: usize,
    pub slack: i128,
    /// Text-format `F` and `G` for replay; only kept for violations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub s: usize,
    pub n: usize,
    #[serde(serialize_with = "ser_symbols")]
    pub p: SymbolSet,
    #[serde(serialize_with = "ser_symbols")]
    pub q: SymbolSet,
    pub trials: Vec<TrialRecord>,
    pub min_slack: Option<i128>,
    pub violations: usize,
    pub slice_violations: usize,
}

fn family_text(f: &Family) -> String {
    let mut buf = Vec::new();
    f.write_text(&mut buf).expect("write to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Runs the seeded trials (in parallel) and reports them sorted by seed.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    check_pair_sets(cfg.s, &cfg.p, &cfg.q)?;
    if cfg.rhos.is_empty() {
        return param("at least one seed density is required");
    }
    let params = SpaceParams::new(cfg.s, cfg.n)?;
    let results: Vec<(TrialRecord, bool)> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.first_seed + k as u64;
            let rho = &cfg.rhos[k % cfg.rhos.len()];
            let f = random_complete_family(params, &cfg.p, rho, seed.wrapping_mul(2))?;
            let g = random_complete_family(params, &cfg.q, rho, seed.wrapping_mul(2) + 1)?;
            let check = check_correlation(&f, &g, &cfg.p, &cfg.q)?;
            let slices_ok = cfg.n < 2 || slice_identity_check(&f, &g, &cfg.p, &cfg.q)?.ok();
            let replay = (!check.holds() || !slices_ok).then(|| (family_text(&f), family_text(&g)));
            Ok((
                TrialRecord {
                    seed,
                    rho: rho.clone(),
                    f_size: check.f_size,
                    g_size: check.g_size,
                    both: check.both,
                    slack: check.slack,
                    replay,
                },
                slices_ok,
            ))
        })
        .collect::<Result<_>>()?;
    let slice_violations = results.iter().filter(|(_, ok)| !ok).count();
    let trials: Vec<TrialRecord> = results.into_iter().map(|(t, _)| t).collect();
    Ok(CampaignReport {
        s: cfg.s,
        n: cfg.n,
        p: cfg.p,
        q: cfg.q,
        min_slack: trials.iter().map(|t| t.slack).min(),
        violations: trials.iter().filter(|t| t.slack < 0).count(),
        slice_violations,
        trials,
    })
}
