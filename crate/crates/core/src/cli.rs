//! Batch command-line front end. Every subcommand is a thin adapter over the
//! library; reports are rendered as text, JSON or CSV.
//!
//! Exit codes: 0 success, 2 precondition refusal, 3 timeout, 4 I/O or parse error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use crate::constructions::{
    construct_k, construct_l, construct_product, k_density, l_density, Partition,
};
use crate::correlation::{
    default_rhos, exhaustive_correlation, patterns, run_campaign, CampaignConfig, CampaignReport,
    CorrelationCheck,
};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::measures::{approx, parse_rational, power_bound, product_bound, rational_string};
use crate::search::{max_family_with, SearchOptions};
use crate::word::{SpaceParams, SymbolSet, TVector, Word};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "isecode",
    version,
    about = "Extremal (t1,...,ts)-intersecting word families"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form upper bounds and their applicability.
    Bound(Dims),
    /// Build an explicit family and write it out.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Exact maximum family by clique search.
    Search(SearchArgs),
    /// Check a family file against a demand vector.
    Verify(VerifyArgs),
    /// Seeded checks of the correlation inequality for complete families.
    Correlate(CorrelateArgs),
    /// CSV sweep of bounds (and optionally exact maxima) over a grid.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct Dims {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 's')]
    pub s: usize,
    /// Demand vector as a comma list, e.g. 3,0,0.
    #[arg(short = 't')]
    pub t: String,
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// Output family file; a `.bin` extension selects the binary format.
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructKind {
    /// Block product attaining the product bound (s >= 3).
    Product {
        #[command(flatten)]
        dims: Dims,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Binary two-block majority family.
    K {
        #[arg(short = 'n')]
        n: usize,
        /// Positions of X1, e.g. 1,2,3.
        #[arg(long)]
        x1: String,
        /// Positions of X2.
        #[arg(long)]
        x2: String,
        /// Demand t1,t2.
        #[arg(short = 't')]
        t: String,
        #[command(flatten)]
        out: OutputArg,
    },
    /// One-symbol majority family.
    L {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 's')]
        s: usize,
        /// Positions of X.
        #[arg(long)]
        x: String,
        #[arg(short = 't')]
        t: usize,
        #[command(flatten)]
        out: OutputArg,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub dims: Dims,
    #[arg(long = "timeout-ms", default_value_t = 60_000)]
    pub timeout_ms: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Only consider families containing this word (digit string).
    #[arg(long = "seed-word")]
    pub seed_word: Option<String>,
    #[command(flatten)]
    pub out: OutputArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(short = 't')]
    pub t: String,
    /// Word length to assume when the file is completely empty.
    #[arg(short = 'n')]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 's')]
    pub s: usize,
    /// P as a comma list; all canonical patterns when omitted.
    #[arg(long)]
    pub pset: Option<String>,
    #[arg(long)]
    pub qset: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed density num/den; sweeps 1/8, 1/4, 1/2 when omitted.
    #[arg(short = 'p')]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(short = 's')]
    pub s: usize,
    #[arg(long = "n-max")]
    pub n_max: usize,
    /// Also run the exact search for each row.
    #[arg(long)]
    pub search: bool,
    #[arg(long = "timeout-ms", default_value_t = 60_000)]
    pub timeout_ms: u64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    match &cfg.command {
        Command::Bound(dims) => cmd_bound(dims, cfg.format, out),
        Command::Construct { kind } => cmd_construct(kind, cfg.format, out),
        Command::Search(args) => cmd_search(args, cfg.format, out),
        Command::Verify(args) => cmd_verify(args, cfg.format, out),
        Command::Correlate(args) => cmd_correlate(args, cfg.format, out),
        Command::Table(args) => cmd_table(args, cfg.format, out),
    }
}

fn parse_positions(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Param(format!("bad position '{}'", p.trim())))
        })
        .collect()
}

fn json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

fn density_text(x: &BigRational) -> String {
    format!("{} ({:.6})", rational_string(x), approx(x))
}

fn scale(n: usize, s: usize) -> BigRational {
    BigRational::from_integer(Pow::pow(BigInt::from(s), n))
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct BoundEntry {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub words: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub s: usize,
    pub t: Vec<u32>,
    pub power_bound: BoundEntry,
    pub product_bound: BoundEntry,
}

impl BoundReport {
    pub fn compute(n: usize, s: usize, t: &TVector) -> Result<Self> {
        if t.len() != s {
            return Err(Error::Param(format!(
                "t has {} entries, expected s = {s}",
                t.len()
            )));
        }
        let power = match power_bound(n as u64, s as u64, t) {
            Ok(words) => BoundEntry {
                applicable: true,
                density: Some(rational_string(
                    &(BigRational::from_integer(words.clone().into()) / scale(n, s)),
                )),
                words: Some(words.to_string()),
                reason: None,
            },
            Err(Error::Refused(why)) => BoundEntry {
                applicable: false,
                words: None,
                density: None,
                reason: Some(why),
            },
            Err(e) => return Err(e),
        };
        let product = match product_bound(n as u64, s as u64, t) {
            Ok(b) => BoundEntry {
                applicable: true,
                words: Some(b.words.clone()),
                density: Some(rational_string(&b.density)),
                reason: None,
            },
            Err(Error::Refused(why)) => BoundEntry {
                applicable: false,
                words: None,
                density: None,
                reason: Some(why),
            },
            Err(e) => return Err(e),
        };
        Ok(BoundReport {
            n,
            s,
            t: t.0.clone(),
            power_bound: power,
            product_bound: product,
        })
    }
}

fn cmd_bound(dims: &Dims, format: Format, out: &mut dyn Write) -> Result<i32> {
    let t = TVector::parse(&dims.t)?;
    let report = BoundReport::compute(dims.n, dims.s, &t)?;
    match format {
        Format::Json => json(out, &report)?,
        Format::Csv => {
            writeln!(out, "n,s,t,power_bound,product_bound,product_density")?;
            writeln!(
                out,
                "{},{},\"{}\",{},{},{}",
                report.n,
                report.s,
                t,
                report.power_bound.words.as_deref().unwrap_or(""),
                report.product_bound.words.as_deref().unwrap_or(""),
                report.product_bound.density.as_deref().unwrap_or("")
            )?;
        }
        Format::Text => {
            writeln!(out, "n={} s={} t={}", report.n, report.s, t)?;
            for (name, entry) in [
                ("power bound", &report.power_bound),
                ("product bound", &report.product_bound),
            ] {
                match (&entry.words, &entry.reason) {
                    (Some(words), _) => {
                        let d = parse_rational(entry.density.as_deref().unwrap())?;
                        writeln!(out, "{name}: {words} words, density {}", density_text(&d))?
                    }
                    (None, Some(why)) => writeln!(out, "{name}: inapplicable ({why})")?,
                    _ => unreachable!(),
                }
            }
        }
    }
    if !report.power_bound.applicable && !report.product_bound.applicable {
        return Err(Error::Refused(format!(
            "no bound applies: {}; {}",
            report.power_bound.reason.as_deref().unwrap_or(""),
            report.product_bound.reason.as_deref().unwrap_or("")
        )));
    }
    Ok(0)
}

/// Metadata printed by `construct` and reproduced by `verify`.
#[derive(Debug, Serialize, PartialEq, Eq, Clone)]
pub struct FamilyMeta {
    pub n: usize,
    pub s: usize,
    pub t: Vec<u32>,
    /// Absent when only the density was computed.
    pub size: Option<usize>,
    pub density: String,
}

#[derive(Debug, Serialize)]
struct ConstructReport {
    construction: &'static str,
    #[serde(flatten)]
    meta: FamilyMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<usize>>,
}

pub fn write_family(family: &Family, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "bin") {
        family.write_binary(file)
    } else {
        family.write_text(file)
    }
}

pub fn read_family(path: &Path, fallback: Option<SpaceParams>) -> Result<Family> {
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "bin") {
        Family::read_binary(BufReader::new(file))
    } else {
        Family::read_text(BufReader::new(file), fallback)
    }
}

fn cmd_construct(kind: &ConstructKind, format: Format, out: &mut dyn Write) -> Result<i32> {
    let (name, n, s, t, built, output, blocks): (_, _, _, TVector, Result<Family>, _, _) =
        match kind {
            ConstructKind::Product { dims, out: o } => {
                let t = TVector::parse(&dims.t)?;
                match construct_product(dims.n, dims.s, &t) {
                    Ok(pc) => {
                        let sizes = pc.partition.sizes();
                        (
                            "product",
                            dims.n,
                            dims.s,
                            t,
                            Ok(pc.family),
                            &o.output,
                            Some(sizes),
                        )
                    }
                    Err(Error::Capacity { .. }) => {
                        let b = product_bound(dims.n as u64, dims.s as u64, &t)?;
                        return density_only(
                            "product", dims.n, dims.s, &t, &b.density, format, out,
                        );
                    }
                    Err(e) => return Err(e),
                }
            }
            ConstructKind::K {
                n,
                x1,
                x2,
                t,
                out: o,
            } => {
                let t = TVector::parse(t)?;
                if t.len() != 2 {
                    return Err(Error::Param("K needs t = t1,t2".into()));
                }
                let (x1, x2) = (parse_positions(x1)?, parse_positions(x2)?);
                let pair = (t.0[0] as usize, t.0[1] as usize);
                match construct_k(*n, &x1, &x2, pair) {
                    Err(Error::Capacity { .. }) => {
                        if x1.iter().any(|j| x2.contains(j)) {
                            return Err(Error::Refused(
                                "density-only output needs disjoint blocks".into(),
                            ));
                        }
                        Partition::new(*n, vec![x1.clone(), x2.clone()])?;
                        let d = k_density(
                            x1.len() as u64,
                            x2.len() as u64,
                            (pair.0 as u64, pair.1 as u64),
                        )?;
                        return density_only("K", *n, 2, &t, &d, format, out);
                    }
                    built => ("K", *n, 2, t, built, &o.output, None),
                }
            }
            ConstructKind::L { n, s, x, t, out: o } => {
                let xs = parse_positions(x)?;
                let mut tv = TVector::zeros(*s);
                if let Some(first) = tv.0.first_mut() {
                    *first = *t as u32;
                }
                match construct_l(*n, *s, &xs, *t) {
                    Err(Error::Capacity { .. }) => {
                        Partition::new(*n, vec![xs.clone()])?;
                        let d = l_density(*s as u64, xs.len() as u64, *t as u64)?;
                        return density_only("L", *n, *s, &tv, &d, format, out);
                    }
                    built => ("L", *n, *s, tv, built, &o.output, None),
                }
            }
        };
    let family = built?;
    if family.is_empty() {
        eprintln!("warning: the constructed family is empty");
    }
    if let Some(path) = output {
        write_family(&family, path)?;
    }
    let report = ConstructReport {
        construction: name,
        meta: FamilyMeta {
            n,
            s,
            t: t.0.clone(),
            size: Some(family.len()),
            density: rational_string(&family.density()),
        },
        file: output.as_ref().map(|p| p.display().to_string()),
        blocks,
    };
    match format {
        Format::Json => json(out, &report)?,
        Format::Csv => {
            writeln!(out, "construction,n,s,t,size,density")?;
            writeln!(
                out,
                "{name},{n},{s},\"{t}\",{},{}",
                family.len(),
                report.meta.density
            )?;
        }
        Format::Text => {
            if output.is_none() {
                family.write_text(&mut *out)?;
            } else {
                writeln!(
                    out,
                    "{name}: {} words, density {}",
                    family.len(),
                    density_text(&family.density())
                )?;
            }
        }
    }
    Ok(0)
}

fn density_only(
    name: &'static str,
    n: usize,
    s: usize,
    t: &TVector,
    d: &BigRational,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32> {
    match format {
        Format::Json => json(
            out,
            &ConstructReport {
                construction: name,
                meta: FamilyMeta {
                    n,
                    s,
                    t: t.0.clone(),
                    size: None,
                    density: rational_string(d),
                },
                file: None,
                blocks: None,
            },
        )?,
        Format::Text | Format::Csv => writeln!(out, "{}", rational_string(d))?,
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub s: usize,
    pub t: Vec<u32>,
    pub max: usize,
    pub density: String,
    pub witness_file: Option<String>,
    pub nodes: u64,
    pub ms: u128,
    /// False when the timeout hit; `max` is then a lower bound.
    pub complete: bool,
}

fn cmd_search(args: &SearchArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let t = TVector::parse(&args.dims.t)?;
    let seed_word = match &args.seed_word {
        Some(text) => Some(Word::parse(
            SpaceParams::new(args.dims.s, args.dims.n)?,
            text,
        )?),
        None => None,
    };
    let opts = SearchOptions {
        threads: args.threads,
        timeout: Duration::from_millis(args.timeout_ms),
        seed_word,
        ..Default::default()
    };
    let result = max_family_with(args.dims.n, args.dims.s, &t, &opts)?;
    if let Some(path) = &args.out.output {
        write_family(&result.witness, path)?;
    }
    let report = SearchReport {
        n: args.dims.n,
        s: args.dims.s,
        t: t.0.clone(),
        max: result.max_size,
        density: rational_string(&result.density()),
        witness_file: args.out.output.as_ref().map(|p| p.display().to_string()),
        nodes: result.nodes_explored,
        ms: result.elapsed.as_millis(),
        complete: result.complete,
    };
    match format {
        Format::Json => json(out, &report)?,
        Format::Csv => {
            writeln!(out, "n,s,t,max,density,nodes,ms,complete")?;
            writeln!(
                out,
                "{},{},\"{}\",{},{},{},{},{}",
                report.n,
                report.s,
                t,
                report.max,
                report.density,
                report.nodes,
                report.ms,
                report.complete
            )?;
        }
        Format::Text => {
            let label = if result.complete {
                "max"
            } else {
                "lower bound"
            };
            writeln!(
                out,
                "{label} {} (density {}), {} nodes, {} ms",
                report.max,
                density_text(&result.density()),
                report.nodes,
                report.ms
            )?;
        }
    }
    Ok(if result.complete { 0 } else { 3 })
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub meta: FamilyMeta,
    pub intersecting: bool,
    /// A violating pair, when not intersecting.
    pub violation: Option<(String, String)>,
    /// Nonempty proper symbol sets `P` for which the family is `P`-complete.
    pub complete_for: Vec<Vec<usize>>,
    pub power_bound: Option<String>,
    pub product_bound: Option<String>,
    pub within_power_bound: Option<bool>,
    pub within_product_bound: Option<bool>,
}

impl VerifyReport {
    pub fn compute(family: &Family, t: &TVector) -> Result<Self> {
        let params = family.params();
        let (n, s) = (params.n(), params.s());
        let violation = family
            .t_intersecting_violation(t)?
            .map(|(a, b)| (a.to_string(), b.to_string()));
        let complete_for = SymbolSet::nonempty_proper(s)
            .filter(|p| family.is_p_complete(p).unwrap_or(false))
            .map(|p| p.members().collect())
            .collect();
        let power = power_bound(n as u64, s as u64, t).ok();
        let product = product_bound(n as u64, s as u64, t).ok();
        let size = family.len();
        Ok(VerifyReport {
            meta: FamilyMeta {
                n,
                s,
                t: t.0.clone(),
                size: Some(size),
                density: rational_string(&family.density()),
            },
            intersecting: violation.is_none(),
            violation,
            complete_for,
            within_power_bound: power
                .as_ref()
                .map(|b| num_bigint::BigUint::from(size) <= *b),
            within_product_bound: product
                .as_ref()
                .map(|b| num_bigint::BigUint::from(size) <= b.word_count()),
            power_bound: power.map(|b| b.to_string()),
            product_bound: product.map(|b| b.words),
        })
    }
}

fn cmd_verify(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let t = TVector::parse(&args.t)?;
    let fallback_n = args.n.unwrap_or_else(|| (t.sum() as usize).max(1));
    let fallback = SpaceParams::new(t.len(), fallback_n).ok();
    let family = read_family(&args.file, fallback)?;
    let report = VerifyReport::compute(&family, &t)?;
    match format {
        Format::Json => json(out, &report)?,
        Format::Csv => {
            writeln!(out, "n,s,t,size,density,intersecting")?;
            writeln!(
                out,
                "{},{},\"{}\",{},{},{}",
                report.meta.n,
                report.meta.s,
                t,
                family.len(),
                report.meta.density,
                report.intersecting
            )?;
        }
        Format::Text => {
            writeln!(out, "intersecting: {}", report.intersecting)?;
            if let Some((a, b)) = &report.violation {
                writeln!(out, "violating pair: {a} {b}")?;
            }
            writeln!(out, "size: {}", family.len())?;
            writeln!(out, "density: {}", density_text(&family.density()))?;
            let sets: Vec<String> = report
                .complete_for
                .iter()
                .map(|p| {
                    format!(
                        "{{{}}}",
                        p.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            writeln!(
                out,
                "complete for: {}",
                if sets.is_empty() {
                    "none".into()
                } else {
                    sets.join(" ")
                }
            )?;
            for (name, bound, within) in [
                (
                    "power bound",
                    &report.power_bound,
                    report.within_power_bound,
                ),
                (
                    "product bound",
                    &report.product_bound,
                    report.within_product_bound,
                ),
            ] {
                match (bound, within) {
                    (Some(b), Some(w)) => writeln!(out, "{name}: {b} (within: {w})")?,
                    _ => writeln!(out, "{name}: inapplicable")?,
                }
            }
        }
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
pub struct CorrelateReport {
    pub campaigns: Vec<CampaignReport>,
    /// Present for `n = 1` runs: every complete pair.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exhaustive: Vec<CorrelationCheck>,
    pub min_slack: Option<i128>,
    pub violations: usize,
}

fn cmd_correlate(args: &CorrelateArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let pairs = match (&args.pset, &args.qset) {
        (Some(p), Some(q)) => vec![(SymbolSet::parse(args.s, p)?, SymbolSet::parse(args.s, q)?)],
        (None, None) => patterns(args.s),
        _ => {
            return Err(Error::Param(
                "give both --pset and --qset, or neither".into(),
            ))
        }
    };
    let rhos = match &args.p {
        Some(text) => vec![parse_rational(text)?],
        None => default_rhos(SpaceParams::new(args.s, args.n)?.size()),
    };
    let mut campaigns = Vec::new();
    let mut exhaustive = Vec::new();
    for (p, q) in pairs {
        if args.n == 1 {
            exhaustive.extend(exhaustive_correlation(args.s, &p, &q)?);
        }
        campaigns.push(run_campaign(&CampaignConfig {
            s: args.s,
            n: args.n,
            p,
            q,
            trials: args.trials,
            first_seed: args.seed,
            rhos: rhos.clone(),
        })?);
    }
    let min_slack = campaigns
        .iter()
        .filter_map(|c| c.min_slack)
        .chain(exhaustive.iter().map(|c| c.slack))
        .min();
    let violations = campaigns.iter().map(|c| c.violations).sum::<usize>()
        + exhaustive.iter().filter(|c| !c.holds()).count();
    let report = CorrelateReport {
        campaigns,
        exhaustive,
        min_slack,
        violations,
    };
    match format {
        Format::Json => json(out, &report)?,
        Format::Csv => {
            writeln!(out, "p,q,seed,rho,f_size,g_size,both,slack")?;
            for c in &report.campaigns {
                for tr in &c.trials {
                    writeln!(
                        out,
                        "\"{}\",\"{}\",{},{},{},{},{},{}",
                        c.p.members()
                            .map(|m| m.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        c.q.members()
                            .map(|m| m.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        tr.seed,
                        rational_string(&tr.rho),
                        tr.f_size,
                        tr.g_size,
                        tr.both,
                        tr.slack
                    )?;
                }
            }
        }
        Format::Text => {
            for c in &report.campaigns {
                writeln!(
                    out,
                    "s={} n={} P={} Q={}: {} trials, {} violations, min slack {}",
                    c.s,
                    c.n,
                    c.p,
                    c.q,
                    c.trials.len(),
                    c.violations,
                    c.min_slack.map_or("-".into(), |m| m.to_string())
                )?;
            }
            if !report.exhaustive.is_empty() {
                writeln!(out, "exhaustive n=1 pairs: {}", report.exhaustive.len())?;
            }
            writeln!(
                out,
                "total violations: {}, global min slack: {}",
                report.violations,
                report.min_slack.map_or("-".into(), |m| m.to_string())
            )?;
        }
    }
    Ok(0)
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct TableRow {
    pub n: usize,
    pub s: usize,
    pub t: Vec<u32>,
    pub power_bound: Option<String>,
    pub product_bound: Option<String>,
    pub product_density: Option<String>,
    pub max: Option<usize>,
    pub max_density: Option<String>,
}

pub fn table_rows(
    s: usize,
    n_max: usize,
    search: bool,
    timeout: Duration,
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        SpaceParams::new(s, n)?;
        for t in TVector::all_with_sum_at_most(s, n as u32) {
            let power = power_bound(n as u64, s as u64, &t).ok();
            let product = product_bound(n as u64, s as u64, &t).ok();
            let (max, max_density) = if search {
                let opts = SearchOptions {
                    timeout,
                    ..Default::default()
                };
                let r = max_family_with(n, s, &t, &opts)?;
                if !r.complete {
                    return Err(Error::Timeout {
                        ms: r.elapsed.as_millis(),
                        lower_bound: r.max_size,
                    });
                }
                (Some(r.max_size), Some(rational_string(&r.density())))
            } else {
                (None, None)
            };
            rows.push(TableRow {
                n,
                s,
                t: t.0.clone(),
                power_bound: power.map(|b| b.to_string()),
                product_density: product.as_ref().map(|b| rational_string(&b.density)),
                product_bound: product.map(|b| b.words),
                max,
                max_density,
            });
        }
    }
    Ok(rows)
}

fn cmd_table(args: &TableArgs, format: Format, out: &mut dyn Write) -> Result<i32> {
    let rows = table_rows(
        args.s,
        args.n_max,
        args.search,
        Duration::from_millis(args.timeout_ms),
    )?;
    if format == Format::Json {
        json(out, &rows)?;
        return Ok(0);
    }
    writeln!(
        out,
        "n,s,t,power_bound,product_bound,product_density,max,max_density"
    )?;
    for r in &rows {
        let t: Vec<String> = r.t.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "{},{},\"{}\",{},{},{},{},{}",
            r.n,
            r.s,
            t.join(","),
            r.power_bound.as_deref().unwrap_or(""),
            r.product_bound.as_deref().unwrap_or(""),
            r.product_density.as_deref().unwrap_or(""),
            r.max.map(|m| m.to_string()).unwrap_or_default(),
            r.max_density.as_deref().unwrap_or("")
        )?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("isecode").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bound_examples() {
        let (code, out, _) = run_capture(&["bound", "-n", "5", "-s", "3", "-t", "3,0,0"]);
        assert_eq!(code, 0);
        assert!(
            out.contains("product bound: 11 words, density 11/243"),
            "{out}"
        );
        assert!(out.contains("power bound: inapplicable"), "{out}");

        let (code, out, _) = run_capture(&["bound", "-n", "3", "-s", "3", "-t", "1,1,0"]);
        assert_eq!(code, 0);
        assert!(out.contains("power bound: 3 words"));
        assert!(out.contains("product bound: 3 words"));

        let (code, _, err) = run_capture(&["bound", "-n", "2", "-s", "3", "-t", "3,0,0"]);
        assert_eq!(code, 2);
        assert!(err.contains("no bound applies"), "{err}");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["bound", "-n", "x"]).0, 2);
        assert_eq!(
            run_capture(&["bound", "-n", "3", "-s", "3", "-t", "1,1"]).0,
            2
        );
        assert_eq!(
            run_capture(&["search", "-n", "3", "-s", "1", "-t", "1"]).0,
            2
        );
    }

    #[test]
    fn missing_file_exits_4() {
        let (code, _, _) = run_capture(&["verify", "/nonexistent/f.fam", "-t", "1,0"]);
        assert_eq!(code, 4);
    }

    #[test]
    fn table_rows_match_bounds() {
        let rows = table_rows(3, 2, true, Duration::from_secs(10)).unwrap();
        assert_eq!(rows.len(), 4 + 10);
        let row = rows
            .iter()
            .find(|r| r.n == 2 && r.t == vec![1, 0, 0])
            .unwrap();
        assert_eq!(row.power_bound.as_deref(), Some("3"));
        assert_eq!(row.max, Some(3));
    }
}
