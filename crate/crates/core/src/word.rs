//! Words over the alphabet `{1..s}`, their meets and intersection profiles,
//! the `<_P` preorder, and the integer index encoding.
//!
//! Symbols are 1-based. The value `0` only ever appears inside a [`MeetWord`]
//! where it marks a disagreeing coordinate.
//!
//! Index encoding is little-endian in positions: position 1 is the least
//! significant digit, so `index = Σ (symbol_i - 1) · s^(i-1)`.

use std::fmt;

use crate::error::{param, Error, Result};
use crate::family::dense_cap;

/// Largest supported alphabet. Symbol sets are stored as 64-bit masks.
pub const MAX_ALPHABET: usize = 64;

/// Alphabet size `s` and word length `n` of the ambient space `[s]^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceParams {
    s: usize,
    n: usize,
    size: usize,
}

impl SpaceParams {
    /// Validates `s ≥ 2`, `n ≥ 1` and `s^n` against the dense-storage cap.
    pub fn new(s: usize, n: usize) -> Result<Self> {
        if s < 2 {
            return param(format!("alphabet size s = {s} must be at least 2"));
        }
        if s > MAX_ALPHABET {
            return param(format!("alphabet size s = {s} exceeds {MAX_ALPHABET}"));
        }
        if n < 1 {
            return param("word length n must be at least 1");
        }
        let cap = dense_cap();
        let size = checked_pow(s, n)
            .filter(|&v| v as u128 <= cap as u128)
            .ok_or(Error::Capacity {
                what: "space size s^n",
                value: (s as u128).checked_pow(n as u32).unwrap_or(u128::MAX),
                cap: cap as u128,
            })?;
        Ok(SpaceParams { s, n, size })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of words, `s^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `s^(i)` for a 0-based position `i`; the stride of position `i + 1`.
    pub fn stride(&self, pos: usize) -> usize {
        self.s.pow(pos as u32)
    }

    /// The space with one fewer position, used by slicing.
    pub fn shorter(&self) -> Result<Self> {
        if self.n < 2 {
            return param("cannot drop a position from a space with n = 1");
        }
        SpaceParams::new(self.s, self.n - 1)
    }

    /// Iterates every word of the space in index order.
    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.size).map(move |idx| Word::decode_unchecked(*self, idx))
    }

    pub(crate) fn decode_into(&self, mut idx: usize, out: &mut [u8]) {
        for slot in out.iter_mut().take(self.n) {
            *slot = (idx % self.s) as u8 + 1;
            idx /= self.s;
        }
    }

    pub(crate) fn check_same(&self, other: &SpaceParams) -> Result<()> {
        if self != other {
            return param(format!(
                "dimension mismatch: (s={}, n={}) vs (s={}, n={})",
                self.s, self.n, other.s, other.n
            ));
        }
        Ok(())
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// A codeword of length `n` over `{1..s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    params: SpaceParams,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(params: SpaceParams, symbols: Vec<u8>) -> Result<Self> {
        if symbols.len() != params.n {
            return param(format!(
                "word has length {}, expected {}",
                symbols.len(),
                params.n
            ));
        }
        if let Some(bad) = symbols.iter().find(|&&c| c == 0 || c as usize > params.s) {
            return param(format!("symbol {bad} is outside 1..={}", params.s));
        }
        Ok(Word { params, symbols })
    }

    /// Inverse of [`Word::index`].
    pub fn decode(params: SpaceParams, idx: usize) -> Result<Self> {
        if idx >= params.size {
            return param(format!("index {idx} out of range 0..{}", params.size));
        }
        Ok(Self::decode_unchecked(params, idx))
    }

    fn decode_unchecked(params: SpaceParams, idx: usize) -> Self {
        let mut symbols = vec![0u8; params.n];
        params.decode_into(idx, &mut symbols);
        Word { params, symbols }
    }

    /// Little-endian index in `[0, s^n)`.
    pub fn index(&self) -> usize {
        self.symbols
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.params.s + (c as usize - 1))
    }

    /// Parses the digit-string text form, e.g. `"1231"`. Requires `s ≤ 9`.
    pub fn parse(params: SpaceParams, text: &str) -> Result<Self> {
        if params.s > 9 {
            return param("digit-string words require s <= 9");
        }
        let symbols = text
            .trim()
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Param(format!("'{c}' is not a digit")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(params, symbols)
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol histogram `(c_1, …, c_s)`; equals `profile(self, self)`.
    pub fn histogram(&self) -> IntersectionProfile {
        let mut counts = vec![0u32; self.params.s];
        for &c in &self.symbols {
            counts[c as usize - 1] += 1;
        }
        IntersectionProfile { counts }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.s <= 9 {
            for c in &self.symbols {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Coordinatewise agreement of two words; `0` marks disagreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetWord {
    pub entries: Vec<u8>,
}

impl MeetWord {
    /// Number of non-zero coordinates.
    pub fn agreements(&self) -> usize {
        self.entries.iter().filter(|&&e| e != 0).count()
    }
}

/// `counts[ℓ-1]` = number of coordinates where both words carry symbol `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub counts: Vec<u32>,
}

impl IntersectionProfile {
    /// True iff every count meets the corresponding demand.
    pub fn dominates(&self, t: &TVector) -> bool {
        self.counts.len() == t.0.len() && self.counts.iter().zip(&t.0).all(|(c, d)| c >= d)
    }
}

/// Intersection demand `(t_1, …, t_s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TVector(pub Vec<u32>);

impl TVector {
    pub fn zeros(s: usize) -> Self {
        TVector(vec![0; s])
    }

    /// Parses a comma list such as `"3,0,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        text.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Param(format!("bad t entry '{}'", p.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(TVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// The demand with entries outside `range` (0-based symbol positions) zeroed.
    pub fn restricted(&self, range: std::ops::Range<usize>) -> TVector {
        TVector(
            self.0
                .iter()
                .enumerate()
                .map(|(i, &x)| if range.contains(&i) { x } else { 0 })
                .collect(),
        )
    }

    pub(crate) fn check_alphabet(&self, params: &SpaceParams) -> Result<()> {
        if self.0.len() != params.s {
            return param(format!(
                "t has {} entries, expected s = {}",
                self.0.len(),
                params.s
            ));
        }
        Ok(())
    }

    /// Every vector of `s` non-negative entries summing to at most `max_sum`.
    pub fn all_with_sum_at_most(s: usize, max_sum: u32) -> Vec<TVector> {
        fn rec(s: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<TVector>) {
            if cur.len() == s {
                out.push(TVector(cur.clone()));
                return;
            }
            for v in 0..=left {
                cur.push(v);
                rec(s, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(s, max_sum, &mut Vec::with_capacity(s), &mut out);
        out
    }
}

impl fmt::Display for TVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A subset of the alphabet, stored as a bit mask (bit `ℓ-1` for symbol `ℓ`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolSet {
    mask: u64,
}

impl SymbolSet {
    pub fn new(s: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = 0u64;
        for m in members {
            if m == 0 || m > s {
                return param(format!("symbol {m} is outside 1..={s}"));
            }
            mask |= 1 << (m - 1);
        }
        Ok(SymbolSet { mask })
    }

    pub fn from_mask(mask: u64) -> Self {
        SymbolSet { mask }
    }

    /// The whole alphabet `{1..s}`.
    pub fn full(s: usize) -> Self {
        SymbolSet {
            mask: if s >= 64 { u64::MAX } else { (1u64 << s) - 1 },
        }
    }

    /// Parses a comma list such as `"1,2"`.
    pub fn parse(s: usize, text: &str) -> Result<Self> {
        let members = text
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Param(format!("bad symbol '{}'", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        SymbolSet::new(s, members)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, symbol: u8) -> bool {
        (1..=64).contains(&symbol) && self.mask & (1 << (symbol - 1)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_disjoint(&self, other: &SymbolSet) -> bool {
        self.mask & other.mask == 0
    }

    pub fn is_proper_in(&self, s: usize) -> bool {
        self.mask & !SymbolSet::full(s).mask == 0 && self.mask != SymbolSet::full(s).mask
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64)
            .filter(move |b| self.mask & (1 << b) != 0)
            .map(|b| b + 1)
    }

    /// Every nonempty proper subset of `{1..s}`, in mask order.
    pub fn nonempty_proper(s: usize) -> impl Iterator<Item = SymbolSet> {
        let full = SymbolSet::full(s).mask;
        (1..full).map(SymbolSet::from_mask)
    }

    pub(crate) fn check_proper_nonempty(&self, s: usize) -> Result<()> {
        if self.is_empty() {
            return param("symbol set P must be nonempty");
        }
        if !self.is_proper_in(s) {
            return param(format!(
                "symbol set {self} must be a proper subset of 1..={s}"
            ));
        }
        Ok(())
    }
}

impl fmt::Display for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn meet(y: &Word, z: &Word) -> Result<MeetWord> {
    y.params.check_same(&z.params)?;
    let entries = y
        .symbols
        .iter()
        .zip(&z.symbols)
        .map(|(&a, &b)| if a == b { a } else { 0 })
        .collect();
    Ok(MeetWord { entries })
}

pub fn profile(y: &Word, z: &Word) -> Result<IntersectionProfile> {
    y.params.check_same(&z.params)?;
    let mut counts = vec![0u32; y.params.s];
    profile_into(&y.symbols, &z.symbols, &mut counts);
    Ok(IntersectionProfile { counts })
}

/// Whether the pair meets the demand `t` symbol by symbol.
pub fn satisfies(y: &Word, z: &Word, t: &TVector) -> Result<bool> {
    t.check_alphabet(&y.params)?;
    Ok(profile(y, z)?.dominates(t))
}

/// `x <_P y`: every coordinate where `x` carries a symbol of `P` is kept in `y`.
pub fn leq_p(x: &Word, y: &Word, p: &SymbolSet) -> Result<bool> {
    x.params.check_same(&y.params)?;
    if !p.is_proper_in(x.params.s) {
        return param(format!(
            "<_P needs a proper subset of the alphabet, got {p}"
        ));
    }
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .all(|(&a, &b)| a == b || !p.contains(a)))
}

pub(crate) fn profile_into(a: &[u8], b: &[u8], counts: &mut [u32]) {
    counts.iter_mut().for_each(|c| *c = 0);
    for (&x, &y) in a.iter().zip(b) {
        if x == y {
            counts[x as usize - 1] += 1;
        }
    }
}

/// Profile check with early exit on decoded symbol slices.
pub(crate) fn slices_satisfy(a: &[u8], b: &[u8], t: &[u32], scratch: &mut [u32]) -> bool {
    profile_into(a, b, scratch);
    scratch.iter().zip(t).all(|(c, d)| c >= d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: usize, text: &str) -> Word {
        let p = SpaceParams::new(s, text.len()).unwrap();
        Word::parse(p, text).unwrap()
    }

    #[test]
    fn meet_examples() {
        assert_eq!(
            meet(&w(3, "123"), &w(3, "133")).unwrap().entries,
            vec![1, 0, 3]
        );
        assert_eq!(
            meet(&w(3, "213"), &w(3, "213")).unwrap().entries,
            vec![2, 1, 3]
        );
        assert_eq!(meet(&w(2, "11"), &w(2, "22")).unwrap().entries, vec![0, 0]);
        assert!(meet(&w(3, "12"), &w(3, "123")).is_err());
        assert!(meet(&w(3, "12"), &w(2, "12")).is_err());
    }

    #[test]
    fn profile_examples() {
        assert_eq!(
            profile(&w(3, "123"), &w(3, "133")).unwrap().counts,
            vec![1, 0, 1]
        );
        assert_eq!(
            profile(&w(2, "112"), &w(2, "121")).unwrap().counts,
            vec![1, 0]
        );
        let y = w(3, "1131");
        assert_eq!(profile(&y, &y).unwrap(), y.histogram());
        assert_eq!(y.histogram().counts, vec![3, 0, 1]);
    }

    #[test]
    fn satisfies_examples() {
        let (y, z) = (w(3, "123"), w(3, "133"));
        assert!(satisfies(&y, &z, &TVector(vec![1, 0, 1])).unwrap());
        assert!(!satisfies(&y, &z, &TVector(vec![1, 1, 0])).unwrap());
        assert!(satisfies(&y, &y, &TVector(vec![1, 1, 1])).unwrap());
        assert!(!satisfies(&y, &y, &TVector(vec![2, 0, 0])).unwrap());
        assert!(satisfies(&y, &z, &TVector(vec![1, 0])).is_err());
    }

    #[test]
    fn leq_p_examples() {
        let p1 = SymbolSet::new(2, [1]).unwrap();
        assert!(leq_p(&w(2, "21"), &w(2, "11"), &p1).unwrap());
        assert!(!leq_p(&w(2, "11"), &w(2, "21"), &p1).unwrap());
        // entries outside P are freely exchangeable in both directions
        let p3 = SymbolSet::new(3, [1]).unwrap();
        assert!(leq_p(&w(3, "23"), &w(3, "32"), &p3).unwrap());
        assert!(leq_p(&w(3, "32"), &w(3, "23"), &p3).unwrap());
        assert!(leq_p(&w(2, "21"), &w(2, "11"), &SymbolSet::full(2)).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(w(3, "1111").index(), 0);
        assert_eq!(w(2, "21").index(), 1);
        assert_eq!(w(3, "333").index(), 26);
        let p = SpaceParams::new(3, 2).unwrap();
        assert!(Word::decode(p, 9).is_err());
        assert_eq!(Word::decode(p, 5).unwrap().to_string(), "32");
    }

    #[test]
    fn params_validation() {
        assert!(SpaceParams::new(1, 3).is_err());
        assert!(SpaceParams::new(3, 0).is_err());
        assert!(matches!(
            SpaceParams::new(3, 40),
            Err(Error::Capacity { .. })
        ));
        assert!(Word::parse(SpaceParams::new(3, 3).unwrap(), "104").is_err());
    }

    #[test]
    fn round_trip_exhaustive() {
        for s in 2..=3 {
            for n in 1..=8 {
                let p = SpaceParams::new(s, n).unwrap();
                for (idx, word) in p.words().enumerate() {
                    assert_eq!(word.index(), idx);
                    assert_eq!(Word::decode(p, idx).unwrap(), word);
                    assert_eq!(Word::parse(p, &word.to_string()).unwrap(), word);
                }
            }
        }
    }

    #[test]
    fn leq_p_preorder_and_disjoint_pairs() {
        for s in 2..=3 {
            for n in 1..=2 {
                let params = SpaceParams::new(s, n).unwrap();
                let words: Vec<Word> = params.words().collect();
                for p in SymbolSet::nonempty_proper(s) {
                    for x in &words {
                        assert!(leq_p(x, x, &p).unwrap());
                        for y in &words {
                            for z in &words {
                                if leq_p(x, y, &p).unwrap() && leq_p(y, z, &p).unwrap() {
                                    assert!(leq_p(x, z, &p).unwrap());
                                }
                            }
                        }
                    }
                    for q in SymbolSet::nonempty_proper(s).filter(|q| q.is_disjoint(&p)) {
                        for x in &words {
                            for y in &words {
                                if leq_p(x, y, &p).unwrap() && leq_p(y, x, &q).unwrap() {
                                    for (a, b) in x.symbols().iter().zip(y.symbols()) {
                                        if a != b {
                                            assert!(!p.contains(*a) && !q.contains(*b));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    fn word_pair() -> impl Strategy<Value = (usize, Vec<u8>, Vec<u8>)> {
        (2usize..=5, 1usize..=7).prop_flat_map(|(s, n)| {
            let sym = 1..=(s as u8);
            (
                Just(s),
                proptest::collection::vec(sym.clone(), n),
                proptest::collection::vec(sym, n),
            )
        })
    }

    proptest! {
        #[test]
        fn meet_commutes_and_satisfies_is_symmetric((s, a, b) in word_pair(), t0 in 0u32..3) {
            let p = SpaceParams::new(s, a.len()).unwrap();
            let y = Word::new(p, a).unwrap();
            let z = Word::new(p, b).unwrap();
            prop_assert_eq!(meet(&y, &z).unwrap(), meet(&z, &y).unwrap());
            prop_assert_eq!(meet(&y, &y).unwrap().entries, y.symbols().to_vec());
            let mut t = TVector::zeros(s);
            t.0[0] = t0;
            prop_assert_eq!(satisfies(&y, &z, &t).unwrap(), satisfies(&z, &y, &t).unwrap());
            // monotone in t
            let mut bigger = t.clone();
            bigger.0[s - 1] += 1;
            if satisfies(&y, &z, &bigger).unwrap() {
                prop_assert!(satisfies(&y, &z, &t).unwrap());
            }
            let total: u32 = profile(&y, &z).unwrap().counts.iter().sum();
            prop_assert!(total as usize <= y.symbols().len());
        }
    }
}
