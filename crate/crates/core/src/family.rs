//! Dense families of words `F ⊆ [s]^n` and of subsets `S ⊆ 2^[n]`.
//!
//! Both are plain membership bitsets over the whole ambient space with a
//! cached cardinality. The space size is capped by [`dense_cap`]; going over
//! the cap is a construction-time error.

use std::io::{BufRead, Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{param, Error, Result};
use crate::word::{slices_satisfy, SpaceParams, SymbolSet, TVector, Word};

/// Default cap on the number of words (or subsets) a dense family may range over.
pub const DEFAULT_DENSE_CAP: usize = 1 << 26;

/// Environment variable that lowers the dense cap.
pub const DENSE_CAP_ENV: &str = "ISECODE_DENSE_CAP";

/// The active dense cap: `ISECODE_DENSE_CAP` when set to a value below the
/// default, otherwise [`DEFAULT_DENSE_CAP`].
pub fn dense_cap() -> usize {
    std::env::var(DENSE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(DEFAULT_DENSE_CAP, |v| v.min(DEFAULT_DENSE_CAP))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Bits {
    blocks: Vec<u64>,
    len: usize,
}

impl Bits {
    pub(crate) fn new(len: usize) -> Self {
        Bits {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub(crate) fn ones(len: usize) -> Self {
        let mut b = Bits {
            blocks: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        b.trim();
        b
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bi * 64 + tz)
            })
        })
    }

    fn zip_with(&self, other: &Bits, f: impl Fn(u64, u64) -> u64) -> Bits {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(&a, &b)| f(a, b))
            .collect();
        let mut out = Bits {
            blocks,
            len: self.len,
        };
        out.trim();
        out
    }
}

/// A family of words in `[s]^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    params: SpaceParams,
    members: Bits,
    size: usize,
}

impl Family {
    pub fn empty(params: SpaceParams) -> Self {
        Family {
            params,
            members: Bits::new(params.size()),
            size: 0,
        }
    }

    pub fn full(params: SpaceParams) -> Self {
        Family {
            params,
            members: Bits::ones(params.size()),
            size: params.size(),
        }
    }

    fn from_bits(params: SpaceParams, members: Bits) -> Self {
        let size = members.count();
        Family {
            params,
            members,
            size,
        }
    }

    /// Family of the given word indices; out-of-range indices are rejected.
    pub fn from_indices(
        params: SpaceParams,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut bits = Bits::new(params.size());
        for idx in indices {
            if idx >= params.size() {
                return param(format!("word index {idx} out of range"));
            }
            bits.set(idx);
        }
        Ok(Family::from_bits(params, bits))
    }

    pub fn from_words<'a>(
        params: SpaceParams,
        words: impl IntoIterator<Item = &'a Word>,
    ) -> Result<Self> {
        let mut bits = Bits::new(params.size());
        for w in words {
            params.check_same(&w.params())?;
            bits.set(w.index());
        }
        Ok(Family::from_bits(params, bits))
    }

    /// All words whose symbol slice satisfies `pred`.
    pub fn from_predicate(params: SpaceParams, mut pred: impl FnMut(&[u8]) -> bool) -> Self {
        let mut bits = Bits::new(params.size());
        let mut buf = vec![0u8; params.n()];
        for idx in 0..params.size() {
            params.decode_into(idx, &mut buf);
            if pred(&buf) {
                bits.set(idx);
            }
        }
        Family::from_bits(params, bits)
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        idx < self.params.size() && self.members.get(idx)
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.params() == self.params && self.members.get(w.index())
    }

    /// Member indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        self.indices()
            .map(|idx| Word::decode(self.params, idx).expect("member index in range"))
    }

    /// Exact `|F| / s^n`.
    pub fn density(&self) -> BigRational {
        BigRational::new(BigInt::from(self.size), BigInt::from(self.params.size()))
    }

    pub fn intersect(&self, other: &Family) -> Result<Family> {
        self.params.check_same(&other.params)?;
        Ok(Family::from_bits(
            self.params,
            self.members.zip_with(&other.members, |a, b| a & b),
        ))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        self.params.check_same(&other.params)?;
        Ok(Family::from_bits(
            self.params,
            self.members.zip_with(&other.members, |a, b| a | b),
        ))
    }

    pub fn complement(&self) -> Family {
        let full = Bits::ones(self.params.size());
        Family::from_bits(self.params, full.zip_with(&self.members, |a, b| a & !b))
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.params == other.params
            && self
                .members
                .blocks
                .iter()
                .zip(&other.members.blocks)
                .all(|(a, b)| a & !b == 0)
    }

    /// Member symbol slices, flattened row-major (`len() × n`).
    pub(crate) fn decoded_members(&self) -> Vec<u8> {
        let n = self.params.n();
        let mut out = vec![0u8; self.size * n];
        for (row, idx) in self.indices().enumerate() {
            self.params
                .decode_into(idx, &mut out[row * n..(row + 1) * n]);
        }
        out
    }

    /// Whether every ordered pair of members, including each member with
    /// itself, agrees on at least `t_ℓ` coordinates carrying `ℓ`.
    pub fn is_t_intersecting(&self, t: &TVector) -> Result<bool> {
        Ok(self.t_intersecting_violation(t)?.is_none())
    }

    /// First pair (in index order) violating the demand, if any.
    pub fn t_intersecting_violation(&self, t: &TVector) -> Result<Option<(Word, Word)>> {
        t.check_alphabet(&self.params)?;
        if t.is_zero() {
            return Ok(None);
        }
        let n = self.params.n();
        let rows = self.decoded_members();
        let idx: Vec<usize> = self.indices().collect();
        let mut scratch = vec![0u32; self.params.s()];
        for a in 0..idx.len() {
            let ya = &rows[a * n..(a + 1) * n];
            for b in a..idx.len() {
                let yb = &rows[b * n..(b + 1) * n];
                if !slices_satisfy(ya, yb, &t.0, &mut scratch) {
                    return Ok(Some((
                        Word::decode(self.params, idx[a])?,
                        Word::decode(self.params, idx[b])?,
                    )));
                }
            }
        }
        Ok(None)
    }

    /// The minimal `P`-complete superset `F(P) = {z : ∃ y ∈ F, y <_P z}`.
    ///
    /// Saturates fibres one coordinate at a time: whenever a member carries a
    /// symbol outside `P` at position `i`, all `s` variants at `i` are added.
    /// Sweeps repeat until a full pass adds nothing.
    pub fn closure_p(&self, p: &SymbolSet) -> Result<Family> {
        p.check_proper_nonempty(self.params.s())?;
        let s = self.params.s();
        let size = self.params.size();
        let free: Vec<usize> = (1..=s).filter(|&a| !p.contains(a as u8)).collect();
        let mut bits = self.members.clone();
        loop {
            let mut changed = false;
            for pos in 0..self.params.n() {
                let stride = self.params.stride(pos);
                let span = stride * s;
                for hi in (0..size).step_by(span) {
                    for base in hi..hi + stride {
                        let spawn = free.iter().any(|&a| bits.get(base + (a - 1) * stride));
                        if spawn {
                            for a in 0..s {
                                let idx = base + a * stride;
                                if !bits.get(idx) {
                                    bits.set(idx);
                                    changed = true;
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Family::from_bits(self.params, bits))
    }

    pub fn is_p_complete(&self, p: &SymbolSet) -> Result<bool> {
        Ok(self.completeness_violation(p)?.is_none())
    }

    /// A witness `(x, y, position)` with `x ∈ F`, `x <_P y`, `y ∉ F`, where
    /// `y` differs from `x` only at `position` (1-based).
    pub fn completeness_violation(&self, p: &SymbolSet) -> Result<Option<(Word, Word, usize)>> {
        p.check_proper_nonempty(self.params.s())?;
        let s = self.params.s();
        let mut buf = vec![0u8; self.params.n()];
        for idx in self.indices() {
            self.params.decode_into(idx, &mut buf);
            for (pos, &cur) in buf.iter().enumerate() {
                if p.contains(cur) {
                    continue;
                }
                let stride = self.params.stride(pos);
                let base = idx - (cur as usize - 1) * stride;
                for a in 0..s {
                    if !self.members.get(base + a * stride) {
                        return Ok(Some((
                            Word::decode(self.params, idx)?,
                            Word::decode(self.params, base + a * stride)?,
                            pos + 1,
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `P_i(F)`: the sets `{j : y_j = i}` realised by members `y`.
    pub fn project(&self, symbol: usize) -> Result<SetFamily> {
        if symbol == 0 || symbol > self.params.s() {
            return param(format!(
                "symbol {symbol} is outside 1..={}",
                self.params.s()
            ));
        }
        let n = self.params.n();
        let mut out = SetFamily::empty(n)?;
        let mut buf = vec![0u8; n];
        for idx in self.indices() {
            self.params.decode_into(idx, &mut buf);
            let mask = buf
                .iter()
                .enumerate()
                .filter(|(_, &c)| c as usize == symbol)
                .fold(0usize, |m, (j, _)| m | 1 << j);
            out.members.set(mask);
        }
        out.size = out.members.count();
        Ok(out)
    }

    /// `F_i = {x ∈ [s]^(n-1) : (x, i) ∈ F}`, slicing at the last position.
    pub fn slice(&self, symbol: usize) -> Result<Family> {
        if symbol == 0 || symbol > self.params.s() {
            return param(format!(
                "symbol {symbol} is outside 1..={}",
                self.params.s()
            ));
        }
        let shorter = self.params.shorter()?;
        let block = shorter.size();
        let offset = (symbol - 1) * block;
        let mut bits = Bits::new(block);
        for idx in self
            .indices()
            .filter(|&i| i >= offset && i < offset + block)
        {
            bits.set(idx - offset);
        }
        Ok(Family::from_bits(shorter, bits))
    }

    /// Text family format: header `"s n"`, then one digit-string word per line.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.params.s(), self.params.n())?;
        for w in self.words() {
            writeln!(out, "{w}")?;
        }
        Ok(())
    }

    /// Parses the text format. Duplicate words are rejected. An input with no
    /// header line at all yields the empty family over `fallback`, if given.
    pub fn read_text<R: BufRead>(input: R, fallback: Option<SpaceParams>) -> Result<Family> {
        let mut lines = input.lines().enumerate();
        let header = loop {
            match lines.next() {
                None => {
                    return fallback.map(Family::empty).ok_or(Error::Parse {
                        line: 1,
                        msg: "missing \"s n\" header".into(),
                    })
                }
                Some((i, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break (i + 1, line);
                    }
                }
            }
        };
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = header.1.split_whitespace().collect();
        let (s, n) = match fields.as_slice() {
            [s, n] => (
                s.parse::<usize>()
                    .map_err(|_| parse_err(header.0, format!("bad alphabet size '{s}'")))?,
                n.parse::<usize>()
                    .map_err(|_| parse_err(header.0, format!("bad word length '{n}'")))?,
            ),
            _ => return Err(parse_err(header.0, "header must be \"s n\"".into())),
        };
        let params = SpaceParams::new(s, n).map_err(|e| parse_err(header.0, e.to_string()))?;
        let mut bits = Bits::new(params.size());
        for (i, line) in lines {
            let line = line?;
            let text = line.trim();
            if text.is_empty() {
                continue;
            }
            let w = Word::parse(params, text).map_err(|e| parse_err(i + 1, e.to_string()))?;
            let idx = w.index();
            if bits.get(idx) {
                return Err(parse_err(i + 1, format!("duplicate word {text}")));
            }
            bits.set(idx);
        }
        Ok(Family::from_bits(params, bits))
    }

    /// Binary format: `s` and `n` as little-endian `u32`, then the membership
    /// bitset, least significant bit first.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&(self.params.s() as u32).to_le_bytes())?;
        out.write_all(&(self.params.n() as u32).to_le_bytes())?;
        let nbytes = self.params.size().div_ceil(8);
        let bytes: Vec<u8> = self
            .members
            .blocks
            .iter()
            .flat_map(|b| b.to_le_bytes())
            .take(nbytes)
            .collect();
        out.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Family> {
        let mut head = [0u8; 8];
        input.read_exact(&mut head).map_err(|_| Error::Parse {
            line: 1,
            msg: "truncated binary header".into(),
        })?;
        let s = u32::from_le_bytes(head[..4].try_into().unwrap()) as usize;
        let n = u32::from_le_bytes(head[4..].try_into().unwrap()) as usize;
        let params = SpaceParams::new(s, n)?;
        let mut body = Vec::new();
        input.read_to_end(&mut body)?;
        let nbytes = params.size().div_ceil(8);
        if body.len() != nbytes {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected {nbytes} bitset bytes, found {}", body.len()),
            });
        }
        let mut bits = Bits::new(params.size());
        for (bi, chunk) in body.chunks(8).enumerate() {
            let mut raw = [0u8; 8];
            raw[..chunk.len()].copy_from_slice(chunk);
            bits.blocks[bi] = u64::from_le_bytes(raw);
        }
        let before = bits.clone();
        bits.trim();
        if bits != before {
            return Err(Error::Parse {
                line: 1,
                msg: "bits set beyond s^n".into(),
            });
        }
        Ok(Family::from_bits(params, bits))
    }
}

/// A family of subsets of `[n]`, indexed by bit mask (bit `j-1` for element `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    members: Bits,
    size: usize,
}

impl SetFamily {
    pub fn empty(n: usize) -> Result<Self> {
        let len = Self::space(n)?;
        Ok(SetFamily {
            n,
            members: Bits::new(len),
            size: 0,
        })
    }

    /// All of `2^[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        let len = Self::space(n)?;
        Ok(SetFamily {
            n,
            members: Bits::ones(len),
            size: len,
        })
    }

    pub fn from_predicate(n: usize, mut pred: impl FnMut(usize) -> bool) -> Result<Self> {
        let len = Self::space(n)?;
        let mut members = Bits::new(len);
        for mask in (0..len).filter(|&m| pred(m)) {
            members.set(mask);
        }
        let size = members.count();
        Ok(SetFamily { n, members, size })
    }

    pub fn from_masks(n: usize, masks: impl IntoIterator<Item = usize>) -> Result<Self> {
        let len = Self::space(n)?;
        let mut members = Bits::new(len);
        for m in masks {
            if m >= len {
                return param(format!("set mask {m:#b} is not a subset of [{n}]"));
            }
            members.set(m);
        }
        let size = members.count();
        Ok(SetFamily { n, members, size })
    }

    fn space(n: usize) -> Result<usize> {
        let cap = dense_cap();
        if n >= usize::BITS as usize - 1 || (1usize << n) > cap {
            return Err(Error::Capacity {
                what: "set-family size 2^n",
                value: 1u128.checked_shl(n as u32).unwrap_or(u128::MAX),
                cap: cap as u128,
            });
        }
        Ok(1 << n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, mask: usize) -> bool {
        mask < (1 << self.n) && self.members.get(mask)
    }

    pub fn masks(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    /// Closed under adding elements.
    pub fn is_upward_closed(&self) -> bool {
        self.masks()
            .all(|m| (0..self.n).all(|j| self.members.get(m | 1 << j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(s: usize, n: usize) -> SpaceParams {
        SpaceParams::new(s, n).unwrap()
    }

    fn fam(s: usize, n: usize, words: &[&str]) -> Family {
        let p = params(s, n);
        let ws: Vec<Word> = words.iter().map(|t| Word::parse(p, t).unwrap()).collect();
        Family::from_words(p, &ws).unwrap()
    }

    fn sym(s: usize, members: &[usize]) -> SymbolSet {
        SymbolSet::new(s, members.iter().copied()).unwrap()
    }

    fn random_family(p: SpaceParams, rng: &mut ChaCha8Rng, density: f64) -> Family {
        Family::from_indices(p, (0..p.size()).filter(|_| rng.gen_bool(density))).unwrap()
    }

    /// Direct reading of `F(P) = {z : ∃ y ∈ F, y <_P z}`.
    fn closure_by_definition(f: &Family, p: &SymbolSet) -> Family {
        let params = f.params();
        let members: Vec<Word> = f.words().collect();
        let keep: Vec<Word> = params
            .words()
            .filter(|z| members.iter().any(|y| crate::word::leq_p(y, z, p).unwrap()))
            .collect();
        Family::from_words(params, &keep).unwrap()
    }

    #[test]
    fn t_intersecting_examples() {
        let f = fam(3, 3, &["121", "122", "123"]);
        assert!(f.is_t_intersecting(&TVector(vec![1, 1, 0])).unwrap());
        assert!(Family::full(params(3, 2))
            .is_t_intersecting(&TVector::zeros(3))
            .unwrap());
        let g = fam(2, 2, &["11", "12"]);
        assert!(!g.is_t_intersecting(&TVector(vec![2, 0])).unwrap());
        // a member must satisfy the demand against itself
        let h = fam(2, 2, &["12"]);
        assert!(!h.is_t_intersecting(&TVector(vec![2, 0])).unwrap());
        assert!(Family::empty(params(2, 2))
            .is_t_intersecting(&TVector(vec![2, 0]))
            .unwrap());
        assert!(g.is_t_intersecting(&TVector(vec![1, 0, 0])).is_err());
    }

    #[test]
    fn closure_examples() {
        let p1 = sym(2, &[1]);
        let f = fam(2, 2, &["21"]);
        assert_eq!(f.closure_p(&p1).unwrap(), fam(2, 2, &["11", "21"]));
        assert!(!f.is_p_complete(&p1).unwrap());
        let (x, y, pos) = f.completeness_violation(&p1).unwrap().unwrap();
        assert_eq!(
            (x.to_string(), y.to_string(), pos),
            ("21".into(), "11".into(), 1)
        );
        let single = fam(2, 2, &["11"]);
        assert_eq!(single.closure_p(&p1).unwrap(), single);
        let full = Family::full(params(3, 2));
        for p in SymbolSet::nonempty_proper(3) {
            assert!(full.is_p_complete(&p).unwrap());
        }
        assert!(f.closure_p(&SymbolSet::full(2)).is_err());
        assert!(f.closure_p(&SymbolSet::from_mask(0)).is_err());
    }

    #[test]
    fn closure_matches_definition_and_is_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in 2..=3 {
            for n in 1..=3 {
                let p = params(s, n);
                for pset in SymbolSet::nonempty_proper(s) {
                    for _ in 0..5 {
                        let f = random_family(p, &mut rng, 0.15);
                        let c = f.closure_p(&pset).unwrap();
                        assert_eq!(c, closure_by_definition(&f, &pset));
                        assert!(c.is_p_complete(&pset).unwrap());
                        // dropping any added word breaks completeness
                        for extra in c.indices().filter(|&i| !f.contains_index(i)) {
                            let smaller =
                                Family::from_indices(p, c.indices().filter(|&i| i != extra))
                                    .unwrap();
                            assert!(!smaller.is_p_complete(&pset).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closure_idempotent_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..100 {
            let s = 2 + trial % 2;
            let n = 1 + trial % 5;
            let p = params(s, n);
            let pset = SymbolSet::from_mask(1 + (trial as u64 % ((1 << s) - 2)));
            let f = random_family(p, &mut rng, 0.1);
            let g = f.union(&random_family(p, &mut rng, 0.1)).unwrap();
            let cf = f.closure_p(&pset).unwrap();
            assert_eq!(cf.closure_p(&pset).unwrap(), cf);
            assert!(f.is_subset(&cf));
            assert!(cf.is_subset(&g.closure_p(&pset).unwrap()));
        }
    }

    #[test]
    fn closure_preserves_single_symbol_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let p = params(3, 4);
        for sym_i in 1..=3usize {
            let mut t = TVector::zeros(3);
            t.0[sym_i - 1] = 2;
            // greedy t-intersecting family from a random order
            let mut order: Vec<usize> = (0..p.size()).collect();
            for k in (1..order.len()).rev() {
                order.swap(k, rng.gen_range(0..=k));
            }
            let mut chosen: Vec<Word> = Vec::new();
            for idx in order {
                let w = Word::decode(p, idx).unwrap();
                let ok = crate::word::satisfies(&w, &w, &t).unwrap()
                    && chosen
                        .iter()
                        .all(|c| crate::word::satisfies(c, &w, &t).unwrap());
                if ok {
                    chosen.push(w);
                }
            }
            let f = Family::from_words(p, &chosen).unwrap();
            assert!(f.is_t_intersecting(&t).unwrap());
            for pset in SymbolSet::nonempty_proper(3).filter(|q| q.contains(sym_i as u8)) {
                assert!(f.closure_p(&pset).unwrap().is_t_intersecting(&t).unwrap());
            }
            // both halves of a split cover F
            let head = SymbolSet::new(3, [1]).unwrap();
            let tail = SymbolSet::new(3, [2, 3]).unwrap();
            let cover = f
                .closure_p(&head)
                .unwrap()
                .intersect(&f.closure_p(&tail).unwrap())
                .unwrap();
            assert!(f.is_subset(&cover));
        }
    }

    #[test]
    fn projection_examples() {
        let f = fam(2, 2, &["12", "11"]);
        let pr = f.project(1).unwrap();
        assert_eq!(pr.masks().collect::<Vec<_>>(), vec![0b01, 0b11]);
        let full = Family::full(params(3, 3)).project(1).unwrap();
        assert_eq!(full, SetFamily::power_set(3).unwrap());
        assert!(f.project(3).is_err());
    }

    #[test]
    fn density_and_set_algebra() {
        let p = params(3, 3);
        assert_eq!(
            Family::full(p).density(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            Family::empty(p).density(),
            BigRational::from_integer(0.into())
        );
        let fixed = Family::from_predicate(p, |y| y[0] == 1 && y[1] == 2);
        assert_eq!(fixed.density(), BigRational::new(1.into(), 9.into()));
        assert_eq!(fixed.intersect(&fixed).unwrap(), fixed);
        assert!(fixed.intersect(&Family::empty(p)).unwrap().is_empty());
        let q = params(3, 2);
        let a = Family::from_predicate(q, |y| y[0] == 1);
        let b = Family::from_predicate(q, |y| y[1] == 2);
        assert_eq!(a.intersect(&b).unwrap().len(), 1);
        assert_eq!(a.union(&b).unwrap().len(), 5);
        assert_eq!(a.complement().len(), 6);
        assert_eq!(a.complement().complement(), a);
    }

    #[test]
    fn slice_examples() {
        let p = params(3, 3);
        for i in 1..=3 {
            assert_eq!(
                Family::full(p).slice(i).unwrap(),
                Family::full(params(3, 2))
            );
        }
        let f = fam(2, 2, &["11", "21"]);
        assert_eq!(f.slice(1).unwrap(), fam(2, 1, &["1", "2"]));
        assert!(f.slice(2).unwrap().is_empty());
        assert!(fam(2, 1, &["1"]).slice(1).is_err());
    }

    #[test]
    fn slice_sizes_are_ordered_for_complete_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = params(3, 3);
        for pset in SymbolSet::nonempty_proper(3) {
            for _ in 0..20 {
                let f = random_family(p, &mut rng, 0.1).closure_p(&pset).unwrap();
                let sizes: Vec<usize> = (1..=3).map(|i| f.slice(i).unwrap().len()).collect();
                assert_eq!(sizes.iter().sum::<usize>(), f.len());
                for i in (1..=3).filter(|&i| !pset.contains(i as u8)) {
                    assert!(sizes.iter().all(|&fj| sizes[i - 1] <= fj));
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let f = fam(3, 2, &["12", "33"]);
        let mut buf = Vec::new();
        f.write_text(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 2\n12\n33\n");
        assert_eq!(Family::read_text(&buf[..], None).unwrap(), f);

        let dup = Family::read_text("3 2\n12\n12\n".as_bytes(), None).unwrap_err();
        assert!(matches!(dup, Error::Parse { line: 3, .. }), "{dup}");
        let bad = Family::read_text("3 2\n12\n14\n".as_bytes(), None).unwrap_err();
        assert!(matches!(bad, Error::Parse { line: 3, .. }), "{bad}");
        assert!(Family::read_text("".as_bytes(), None).is_err());
        let fallback = Family::read_text("".as_bytes(), Some(params(2, 3))).unwrap();
        assert!(fallback.is_empty());
    }

    #[test]
    fn binary_format() {
        let f = Family::from_predicate(params(3, 3), |y| y[2] != 2);
        let mut buf = Vec::new();
        f.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..8], &[3, 0, 0, 0, 3, 0, 0, 0]);
        assert_eq!(buf.len(), 8 + 4);
        assert_eq!(Family::read_binary(&buf[..]).unwrap(), f);
        buf.push(0);
        assert!(Family::read_binary(&buf[..]).is_err());
    }

    #[test]
    fn upward_closed_sets() {
        let up = SetFamily::from_predicate(3, |m| m & 1 == 1).unwrap();
        assert!(up.is_upward_closed());
        let not_up = SetFamily::from_masks(3, [0b001]).unwrap();
        assert!(!not_up.is_upward_closed());
        assert!(SetFamily::from_masks(2, [4]).is_err());
    }

    proptest! {
        #[test]
        fn text_and_binary_round_trip(s in 2usize..=4, n in 1usize..=4, seed in any::<u64>()) {
            let p = params(s, n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_family(p, &mut rng, 0.3);
            let mut text = Vec::new();
            f.write_text(&mut text).unwrap();
            prop_assert_eq!(&Family::read_text(&text[..], None).unwrap(), &f);
            let mut bin = Vec::new();
            f.write_binary(&mut bin).unwrap();
            prop_assert_eq!(&Family::read_binary(&bin[..]).unwrap(), &f);
        }
    }
}
