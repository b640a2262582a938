//! Exact maximum `t`-intersecting families by maximum clique search.
//!
//! Vertices of the compatibility graph are the words that satisfy the demand
//! against themselves; edges join pairs that satisfy it against each other.
//! Maximum cliques are exactly the maximum families.
//!
//! The solver is a bitset branch-and-bound with greedy colouring bounds.
//! Root branches are processed in rounds of fixed width: every branch of a
//! round is pruned against the incumbent as it stood when the round began,
//! and results are merged in branch order afterwards. A round can therefore
//! be spread over any number of threads without changing the witness or
//! the node count.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::construct_k;
use crate::error::{param, Error, Result};
use crate::family::Family;
use crate::measures::binomial;
use crate::word::{slices_satisfy, SpaceParams, TVector, Word};

/// Hard cap on compatibility-graph vertices.
pub const MAX_VERTICES: usize = 1 << 16;

/// Root branches searched per round.
pub const DEFAULT_ROUND_WIDTH: usize = 16;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

#[derive(Clone, Debug)]
pub struct CompatGraph {
    params: SpaceParams,
    t: TVector,
    /// Word indices of the vertices, ascending.
    vertices: Vec<usize>,
    row_len: usize,
    adjacency: Vec<u64>,
}

impl CompatGraph {
    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn demand(&self) -> &TVector {
        &self.t
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adjacency[v * self.row_len..(v + 1) * self.row_len]
    }

    /// Whether vertices `a` and `b` (positions in [`Self::vertices`]) are adjacent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.row(a)[b / 64] >> (b % 64) & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.adjacency.iter().map(|w| w.count_ones() as usize).sum();
        total / 2
    }

    fn full_set(&self) -> Vec<u64> {
        let mut set = vec![u64::MAX; self.row_len];
        let rem = self.vertices.len() % 64;
        if rem != 0 {
            *set.last_mut().unwrap() = (1u64 << rem) - 1;
        }
        set
    }

    fn family_of(&self, clique: &[usize]) -> Family {
        Family::from_indices(self.params, clique.iter().map(|&v| self.vertices[v]))
            .expect("vertex indices are in range")
    }
}

/// Builds the compatibility graph; self-loops are implicit.
pub fn build_compat_graph(n: usize, s: usize, t: &TVector) -> Result<CompatGraph> {
    let params = SpaceParams::new(s, n)?;
    t.check_alphabet(&params)?;
    let mut buf = vec![0u8; n];
    let mut scratch = vec![0u32; s];
    let mut vertices = Vec::new();
    let mut rows: Vec<u8> = Vec::new();
    for idx in 0..params.size() {
        params.decode_into(idx, &mut buf);
        if slices_satisfy(&buf, &buf, &t.0, &mut scratch) {
            vertices.push(idx);
            rows.extend_from_slice(&buf);
            if vertices.len() > MAX_VERTICES {
                return Err(Error::Capacity {
                    what: "compatibility graph vertex count",
                    value: vertices.len() as u128,
                    cap: MAX_VERTICES as u128,
                });
            }
        }
    }
    let count = vertices.len();
    let row_len = count.div_ceil(64).max(1);
    let mut adjacency = vec![0u64; count * row_len];
    for a in 0..count {
        let ya = &rows[a * n..(a + 1) * n];
        for b in a + 1..count {
            if slices_satisfy(ya, &rows[b * n..(b + 1) * n], &t.0, &mut scratch) {
                adjacency[a * row_len + b / 64] |= 1 << (b % 64);
                adjacency[b * row_len + a / 64] |= 1 << (a % 64);
            }
        }
    }
    Ok(CompatGraph {
        params,
        t: t.clone(),
        vertices,
        row_len,
        adjacency,
    })
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Worker threads; `0` uses the rayon default.
    pub threads: usize,
    pub timeout: Duration,
    pub round_width: usize,
    /// Restrict to families containing this word. Off by default; the answer
    /// is then the maximum over families through the seed only.
    pub seed_word: Option<Word>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            threads: 0,
            timeout: DEFAULT_TIMEOUT,
            round_width: DEFAULT_ROUND_WIDTH,
            seed_word: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub max_size: usize,
    pub witness: Family,
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// False when the search timed out; `max_size` is then only a lower bound.
    pub complete: bool,
}

impl SearchResult {
    pub fn density(&self) -> BigRational {
        self.witness.density()
    }
}

pub fn max_family(n: usize, s: usize, t: &TVector) -> Result<SearchResult> {
    max_family_with(n, s, t, &SearchOptions::default())
}

pub fn max_family_with(
    n: usize,
    s: usize,
    t: &TVector,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let graph = build_compat_graph(n, s, t)?;
    max_clique(&graph, opts)
}

/// Maximum clique of `graph` as a family of words.
pub fn max_clique(graph: &CompatGraph, opts: &SearchOptions) -> Result<SearchResult> {
    let started = Instant::now();
    let round_width = opts.round_width.max(1);
    let stop = AtomicBool::new(false);
    let deadline = started + opts.timeout;

    let (forced, root_cand) = match &opts.seed_word {
        None => (Vec::new(), graph.full_set()),
        Some(w) => {
            graph.params.check_same(&w.params())?;
            let v = graph.vertices.binary_search(&w.index()).map_err(|_| {
                Error::Refused(format!("seed word {w} fails the demand against itself"))
            })?;
            (vec![v], graph.row(v).to_vec())
        }
    };

    let mut best = greedy_clique(graph, &forced, &root_cand);
    let mut nodes: u64 = 1;

    let mut order = colour_sort(graph, &root_cand);
    order.reverse();
    let mut remaining = root_cand.clone();

    let run_round = |round: &[(usize, usize, Vec<u64>)], incumbent: usize| -> Vec<Option<Branch>> {
        let work = |(v, colour, cand): &(usize, usize, Vec<u64>)| {
            if forced.len() + colour <= incumbent {
                return None;
            }
            let mut ctx = Ctx {
                graph,
                best: incumbent,
                best_clique: None,
                nodes: 0,
                deadline,
                stop: &stop,
            };
            let mut clique = forced.clone();
            clique.push(*v);
            if is_empty(cand) {
                ctx.offer(&clique);
            } else {
                ctx.expand(&mut clique, cand.clone());
            }
            Some(Branch {
                best: ctx.best_clique,
                nodes: ctx.nodes,
            })
        };
        if opts.threads == 1 {
            round.iter().map(work).collect()
        } else {
            round.par_iter().map(work).collect()
        }
    };

    let pool = if opts.threads > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::Param(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    for chunk in order.chunks(round_width) {
        let incumbent = best.len();
        if forced.len() + chunk[0].1 <= incumbent {
            break;
        }
        if Instant::now() > deadline {
            stop.store(true, Ordering::Relaxed);
            break;
        }
        let round: Vec<(usize, usize, Vec<u64>)> = chunk
            .iter()
            .map(|&(v, colour)| {
                let cand = and(&remaining, graph.row(v));
                remove(&mut remaining, v);
                (v, colour, cand)
            })
            .collect();
        let round = &round[..];
        let results = match &pool {
            Some(pool) => pool.install(|| run_round(round, incumbent)),
            None => run_round(round, incumbent),
        };
        for branch in results.into_iter().flatten() {
            nodes += branch.nodes;
            if let Some(clique) = branch.best {
                if clique.len() > best.len() {
                    best = clique;
                }
            }
        }
        if stop.load(Ordering::Relaxed) {
            break;
        }
    }

    best.sort_unstable();
    let witness = graph.family_of(&best);
    Ok(SearchResult {
        max_size: best.len(),
        witness,
        nodes_explored: nodes,
        elapsed: started.elapsed(),
        complete: !stop.load(Ordering::Relaxed),
    })
}

struct Branch {
    best: Option<Vec<usize>>,
    nodes: u64,
}

struct Ctx<'a> {
    graph: &'a CompatGraph,
    best: usize,
    best_clique: Option<Vec<usize>>,
    nodes: u64,
    deadline: Instant,
    stop: &'a AtomicBool,
}

impl Ctx<'_> {
    fn offer(&mut self, clique: &[usize]) {
        if clique.len() > self.best {
            self.best = clique.len();
            self.best_clique = Some(clique.to_vec());
        }
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Vec<u64>) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() > self.deadline {
            self.stop.store(true, Ordering::Relaxed);
        }
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        let order = colour_sort(self.graph, &cand);
        for &(v, colour) in order.iter().rev() {
            if clique.len() + colour <= self.best {
                return;
            }
            clique.push(v);
            let next = and(&cand, self.graph.row(v));
            if is_empty(&next) {
                self.offer(clique);
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            remove(&mut cand, v);
        }
    }
}

/// Greedy sequential colouring in ascending vertex order. Returns vertices
/// grouped by colour class with the class number (1-based), which bounds the
/// clique size among that vertex and those before it.
fn colour_sort(graph: &CompatGraph, cand: &[u64]) -> Vec<(usize, usize)> {
    let mut uncoloured = cand.to_vec();
    let mut out = Vec::new();
    let mut colour = 0;
    while !is_empty(&uncoloured) {
        colour += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = first(&q) {
            remove(&mut q, v);
            remove(&mut uncoloured, v);
            for (qw, rw) in q.iter_mut().zip(graph.row(v)) {
                *qw &= !rw;
            }
            out.push((v, colour));
        }
    }
    out
}

fn greedy_clique(graph: &CompatGraph, forced: &[usize], cand: &[u64]) -> Vec<usize> {
    let mut clique = forced.to_vec();
    let mut q = cand.to_vec();
    while let Some(v) = first(&q) {
        clique.push(v);
        q = and(&q, graph.row(v));
    }
    clique
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn remove(set: &mut [u64], v: usize) {
    set[v / 64] &= !(1 << (v % 64));
}

fn is_empty(set: &[u64]) -> bool {
    set.iter().all(|&w| w == 0)
}

fn first(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Exact maximum density `p(n, s, t)` of a `t`-intersecting family.
pub fn p_oracle(n: usize, s: usize, t: &TVector) -> Result<BigRational> {
    p_oracle_with(n, s, t, &SearchOptions::default())
}

pub fn p_oracle_with(n: usize, s: usize, t: &TVector, opts: &SearchOptions) -> Result<BigRational> {
    let result = max_family_with(n, s, t, opts)?;
    if !result.complete {
        return Err(Error::Timeout {
            ms: result.elapsed.as_millis(),
            lower_bound: result.max_size,
        });
    }
    Ok(result.density())
}

/// Best binary majority construction over disjoint blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KOptimum {
    pub size: u64,
    pub n1: usize,
    pub n2: usize,
}

impl KOptimum {
    /// The construction realising the optimum on `X_1 = [1, n1]`,
    /// `X_2 = [n1 + 1, n1 + n2]`.
    pub fn family(&self, n: usize, t: (usize, usize)) -> Result<Family> {
        let x1: Vec<usize> = (1..=self.n1).collect();
        let x2: Vec<usize> = (self.n1 + 1..=self.n1 + self.n2).collect();
        construct_k(n, &x1, &x2, t)
    }
}

/// Largest majority family over all disjoint block sizes `|X_1| + |X_2| ≤ n`.
/// Ties prefer `|X_i| ≡ t_i (mod 2)`, then the first pair in `(n1, n2)` order.
pub fn best_k(n: usize, t: (usize, usize)) -> Result<KOptimum> {
    if n > 14 {
        return Err(Error::Refused(format!(
            "block sweep limited to n <= 14, got {n}"
        )));
    }
    if t.0 < 1 || t.1 < 1 {
        return param("both demands must be at least 1");
    }
    if t.0 + t.1 > n {
        return Err(Error::Refused(format!(
            "t1 + t2 = {} exceeds n = {n}",
            t.0 + t.1
        )));
    }
    let tail = |m: usize, ti: usize| -> u64 {
        let need = (m + ti).div_ceil(2);
        (need..=m)
            .map(|k| binomial(m as u64, k as u64).to_u64().unwrap())
            .sum()
    };
    let mut best: Option<(KOptimum, bool)> = None;
    for n1 in t.0..=n {
        for n2 in t.1..=n - n1 {
            let free: u64 = Pow::pow(BigUint::from(2u8), (n - n1 - n2) as u32)
                .to_u64()
                .unwrap();
            let size = free * tail(n1, t.0) * tail(n2, t.1);
            let parity = n1 % 2 == t.0 % 2 && n2 % 2 == t.1 % 2;
            let better = match &best {
                None => true,
                Some((b, bp)) => size > b.size || (size == b.size && parity && !bp),
            };
            if better {
                best = Some((KOptimum { size, n1, n2 }, parity));
            }
        }
    }
    Ok(best.expect("t1 + t2 <= n leaves at least one block pair").0)
}

/// `s^n` as an exact rational, for density conversions.
pub fn space_size(n: usize, s: usize) -> BigRational {
    BigRational::from_integer(Pow::pow(num_bigint::BigInt::from(s), n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::rational;

    /// Maximum family by trying every subset of the vertex set.
    fn brute_max(graph: &CompatGraph) -> usize {
        let v = graph.vertex_count();
        assert!(v <= 20);
        (0u32..1 << v)
            .filter(|&mask| {
                (0..v).all(|a| {
                    mask >> a & 1 == 0
                        || (a + 1..v).all(|b| mask >> b & 1 == 0 || graph.adjacent(a, b))
                })
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn graph_examples() {
        let g = build_compat_graph(5, 3, &TVector(vec![3, 0, 0])).unwrap();
        assert_eq!(g.vertex_count(), 51);
        let g = build_compat_graph(2, 3, &TVector::zeros(3)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 36));
        let g = build_compat_graph(2, 3, &TVector(vec![1, 0, 0])).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert!(build_compat_graph(2, 3, &TVector(vec![1, 0])).is_err());
    }

    #[test]
    fn max_family_examples() {
        let r = max_family(2, 3, &TVector(vec![1, 0, 0])).unwrap();
        assert_eq!(r.max_size, 3);
        assert!(r.complete);
        assert!(r
            .witness
            .is_t_intersecting(&TVector(vec![1, 0, 0]))
            .unwrap());
        assert_eq!(max_family(4, 2, &TVector(vec![1, 1])).unwrap().max_size, 4);
        assert_eq!(
            max_family(5, 3, &TVector(vec![3, 0, 0])).unwrap().max_size,
            11
        );
    }

    #[test]
    fn solver_agrees_with_subset_enumeration() {
        for s in 2..=3 {
            for n in 1..=3 {
                for t in TVector::all_with_sum_at_most(s, n as u32) {
                    let g = build_compat_graph(n, s, &t).unwrap();
                    if g.vertex_count() > 20 {
                        continue;
                    }
                    let r = max_clique(&g, &SearchOptions::default()).unwrap();
                    assert_eq!(r.max_size, brute_max(&g), "s={s} n={n} t={t}");
                    assert!(r.witness.is_t_intersecting(&t).unwrap());
                }
            }
        }
    }

    #[test]
    fn round_width_does_not_change_the_maximum() {
        let t = TVector(vec![1, 1, 1]);
        let sizes: Vec<usize> = [1, 3, 16, 1000]
            .iter()
            .map(|&w| {
                let opts = SearchOptions {
                    round_width: w,
                    ..Default::default()
                };
                max_family_with(5, 3, &t, &opts).unwrap().max_size
            })
            .collect();
        assert_eq!(sizes, vec![9; 4]);
    }

    #[test]
    fn p_oracle_examples() {
        assert_eq!(
            p_oracle(2, 3, &TVector(vec![1, 0, 0])).unwrap(),
            rational(1, 3)
        );
        assert_eq!(p_oracle(3, 3, &TVector::zeros(3)).unwrap(), rational(1, 1));
        assert_eq!(
            p_oracle(3, 3, &TVector(vec![1, 1, 0])).unwrap(),
            rational(1, 9)
        );
    }

    #[test]
    fn seed_word_restricts_the_search() {
        let p = SpaceParams::new(3, 3).unwrap();
        let seed = Word::parse(p, "121").unwrap();
        let opts = SearchOptions {
            seed_word: Some(seed.clone()),
            ..Default::default()
        };
        let r = max_family_with(3, 3, &TVector(vec![1, 1, 0]), &opts).unwrap();
        assert_eq!(r.max_size, 3);
        assert!(r.witness.contains(&seed));
        let bad = Word::parse(p, "333").unwrap();
        let opts = SearchOptions {
            seed_word: Some(bad),
            ..Default::default()
        };
        assert!(max_family_with(3, 3, &TVector(vec![1, 1, 0]), &opts).is_err());
    }

    #[test]
    fn zero_timeout_reports_partial() {
        let opts = SearchOptions {
            timeout: Duration::ZERO,
            round_width: 1,
            ..Default::default()
        };
        let r = max_family_with(6, 3, &TVector(vec![1, 1, 1]), &opts).unwrap();
        assert!(!r.complete);
        // the greedy incumbent is always a valid family
        assert!(r
            .witness
            .is_t_intersecting(&TVector(vec![1, 1, 1]))
            .unwrap());
        assert!(matches!(
            p_oracle_with(6, 3, &TVector(vec![1, 1, 1]), &opts),
            Err(Error::Timeout { .. })
        ));
    }

    #[test]
    fn best_k_examples() {
        assert_eq!(best_k(4, (1, 1)).unwrap().size, 4);
        for (t1, t2) in [(1, 1), (2, 1), (2, 3), (4, 4)] {
            assert_eq!(best_k(t1 + t2, (t1, t2)).unwrap().size, 1);
            assert_eq!(best_k(t1 + t2 + 1, (t1, t2)).unwrap().size, 2);
        }
        let k = best_k(7, (2, 2)).unwrap();
        assert_eq!(k.family(7, (2, 2)).unwrap().len() as u64, k.size);
        assert!(best_k(15, (1, 1)).is_err());
        assert!(best_k(3, (2, 2)).is_err());
    }
}
