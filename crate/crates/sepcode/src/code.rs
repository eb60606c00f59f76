//! Alphabet, word and code data model, plus descendant-set machinery.
//!
//! Words are sequences of `n` symbols over the integer alphabet
//! `{0, 1, ..., q-1}`. The descendant set of a set of words `X` is the
//! Cartesian product `X(1) x X(2) x ... x X(n)`, where `X(k)` collects the
//! `k`th symbols of the words in `X`; it models every hybrid word a
//! coalition holding `X` can forge. [`DescendantProfile`] stores the
//! component sets `X(k)` and stands in for the (possibly huge) product.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("word length must be at least 2, got {0}")]
    LengthTooSmall(usize),
    #[error("word has {got} symbols, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("symbol {symbol} out of range for alphabet of size {q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },
    #[error("duplicate codeword at position {0}")]
    DuplicateWord(usize),
    #[error("descendant profile of the empty set is undefined")]
    EmptySubset,
    #[error("codeword index {index} out of range for code of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("invalid canonical profile encoding: {0}")]
    BadEncoding(String),
}

/// Shared parameters of a code: alphabet size `q >= 2` and word length `n >= 2`.
///
/// The alphabet is always `{0, ..., q-1}`; external alphabets must be mapped
/// to integers by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u32,
    n: usize,
}

impl CodeParams {
    pub fn new(q: u32, n: usize) -> Result<Self, CodeError> {
        if q < 2 {
            return Err(CodeError::AlphabetTooSmall(q));
        }
        if n < 2 {
            return Err(CodeError::LengthTooSmall(n));
        }
        Ok(CodeParams { q, n })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of words in the full space, `q^n`.
    pub fn universe_size(&self) -> BigUint {
        BigUint::from(self.q).pow(self.n as u32)
    }
}

/// An immutable word of `n` symbols, each in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Box<[u32]>,
}

impl Word {
    pub fn new(symbols: Vec<u32>, params: &CodeParams) -> Result<Self, CodeError> {
        if symbols.len() != params.n() {
            return Err(CodeError::WrongLength {
                got: symbols.len(),
                expected: params.n(),
            });
        }
        for &s in &symbols {
            if s >= params.q() {
                return Err(CodeError::SymbolOutOfRange {
                    symbol: s,
                    q: params.q(),
                });
            }
        }
        Ok(Word {
            symbols: symbols.into_boxed_slice(),
        })
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.symbols.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Number of positions where `u` and `v` carry the same symbol.
pub fn agreement_count(u: &Word, v: &Word) -> Result<usize, CodeError> {
    if u.len() != v.len() {
        return Err(CodeError::WrongLength {
            got: v.len(),
            expected: u.len(),
        });
    }
    Ok(u.symbols()
        .iter()
        .zip(v.symbols())
        .filter(|(a, b)| a == b)
        .count())
}

/// Every word of the space `F^n` in lexicographic order.
///
/// Intended for small universes; callers bound `q^n` before use.
pub fn all_words(params: &CodeParams) -> Vec<Word> {
    let q = params.q();
    let n = params.n();
    let total = (q as u64).pow(n as u32) as usize;
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0u32; n];
    loop {
        out.push(Word {
            symbols: digits.clone().into_boxed_slice(),
        });
        // increment base-q, most significant digit first
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < q {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// One component set `X(k)` of a descendant profile.
///
/// Uses a fixed-width bitmask when `q <= 64` and a sorted symbol list
/// otherwise. The variant is determined by `q` at construction, so values
/// built over the same parameters always share a representation and the
/// derived equality is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SymbolSet {
    Mask(u64),
    Sorted(Vec<u32>),
}

impl SymbolSet {
    fn empty(q: u32) -> Self {
        if q <= 64 {
            SymbolSet::Mask(0)
        } else {
            SymbolSet::Sorted(Vec::new())
        }
    }

    fn insert(&mut self, symbol: u32) {
        match self {
            SymbolSet::Mask(bits) => *bits |= 1u64 << symbol,
            SymbolSet::Sorted(v) => {
                if let Err(pos) = v.binary_search(&symbol) {
                    v.insert(pos, symbol);
                }
            }
        }
    }

    pub fn contains(&self, symbol: u32) -> bool {
        match self {
            SymbolSet::Mask(bits) => symbol < 64 && bits & (1u64 << symbol) != 0,
            SymbolSet::Sorted(v) => v.binary_search(&symbol).is_ok(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SymbolSet::Mask(bits) => bits.count_ones() as usize,
            SymbolSet::Sorted(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Symbols in ascending order.
    pub fn iter(&self) -> SymbolIter<'_> {
        match self {
            SymbolSet::Mask(bits) => SymbolIter::Mask(*bits),
            SymbolSet::Sorted(v) => SymbolIter::Sorted(v.iter()),
        }
    }

    pub fn is_subset_of(&self, other: &SymbolSet) -> bool {
        self.iter().all(|s| other.contains(s))
    }
}

pub enum SymbolIter<'a> {
    Mask(u64),
    Sorted(std::slice::Iter<'a, u32>),
}

impl Iterator for SymbolIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        match self {
            SymbolIter::Mask(bits) => {
                if *bits == 0 {
                    None
                } else {
                    let s = bits.trailing_zeros();
                    *bits &= *bits - 1;
                    Some(s)
                }
            }
            SymbolIter::Sorted(it) => it.next().copied(),
        }
    }
}

/// The per-component symbol sets `(X(1), ..., X(n))` of a word set `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DescendantProfile {
    sets: Vec<SymbolSet>,
}

impl DescendantProfile {
    /// Profile of a nonempty collection of words.
    pub fn from_words<'a, I>(words: I, params: &CodeParams) -> Result<Self, CodeError>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        let mut sets = vec![SymbolSet::empty(params.q()); params.n()];
        let mut seen_any = false;
        for w in words {
            if w.len() != params.n() {
                return Err(CodeError::WrongLength {
                    got: w.len(),
                    expected: params.n(),
                });
            }
            for (k, &s) in w.symbols().iter().enumerate() {
                if s >= params.q() {
                    return Err(CodeError::SymbolOutOfRange {
                        symbol: s,
                        q: params.q(),
                    });
                }
                sets[k].insert(s);
            }
            seen_any = true;
        }
        if !seen_any {
            return Err(CodeError::EmptySubset);
        }
        Ok(DescendantProfile { sets })
    }

    pub fn num_components(&self) -> usize {
        self.sets.len()
    }

    pub fn component(&self, k: usize) -> &SymbolSet {
        &self.sets[k]
    }

    pub fn components(&self) -> &[SymbolSet] {
        &self.sets
    }

    /// Cardinality of the full descendant set: the product of the component
    /// set sizes.
    pub fn size(&self) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for s in &self.sets {
            acc *= BigUint::from(s.len());
        }
        acc
    }

    /// Whether `w` lies in the descendant set, i.e. `w[k]` is in `X(k)` for
    /// every component `k`.
    pub fn contains(&self, w: &Word) -> Result<bool, CodeError> {
        if w.len() != self.sets.len() {
            return Err(CodeError::WrongLength {
                got: w.len(),
                expected: self.sets.len(),
            });
        }
        Ok(w.symbols()
            .iter()
            .zip(&self.sets)
            .all(|(&s, set)| set.contains(s)))
    }

    /// Canonical byte encoding: for each of the `n` components, a
    /// length-prefixed ascending symbol list, every value an unsigned
    /// little-endian 32-bit integer. Profile equality coincides with
    /// encoding equality, so the encoding doubles as a hash key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.sets.iter().map(|s| 4 * (s.len() + 1)).sum());
        for set in &self.sets {
            out.extend_from_slice(&(set.len() as u32).to_le_bytes());
            for s in set.iter() {
                out.extend_from_slice(&s.to_le_bytes());
            }
        }
        out
    }

    /// Inverse of [`canonical_bytes`](Self::canonical_bytes).
    pub fn from_canonical_bytes(bytes: &[u8], params: &CodeParams) -> Result<Self, CodeError> {
        let mut sets = Vec::with_capacity(params.n());
        let mut pos = 0usize;
        let take_u32 = |pos: &mut usize| -> Result<u32, CodeError> {
            let end = *pos + 4;
            if end > bytes.len() {
                return Err(CodeError::BadEncoding("truncated".into()));
            }
            let v = u32::from_le_bytes(bytes[*pos..end].try_into().unwrap());
            *pos = end;
            Ok(v)
        };
        for _ in 0..params.n() {
            let len = take_u32(&mut pos)?;
            if len == 0 {
                return Err(CodeError::BadEncoding("empty component set".into()));
            }
            let mut set = SymbolSet::empty(params.q());
            let mut prev: Option<u32> = None;
            for _ in 0..len {
                let s = take_u32(&mut pos)?;
                if s >= params.q() {
                    return Err(CodeError::SymbolOutOfRange {
                        symbol: s,
                        q: params.q(),
                    });
                }
                if prev.is_some_and(|p| p >= s) {
                    return Err(CodeError::BadEncoding("symbols not ascending".into()));
                }
                prev = Some(s);
                set.insert(s);
            }
            sets.push(set);
        }
        if pos != bytes.len() {
            return Err(CodeError::BadEncoding("trailing bytes".into()));
        }
        Ok(DescendantProfile { sets })
    }
}

impl fmt::Display for DescendantProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, set) in self.sets.iter().enumerate() {
            if k > 0 {
                write!(f, "x")?;
            }
            write!(f, "{{")?;
            for (i, s) in set.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{s}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// An ordered collection of distinct words sharing one set of parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    params: CodeParams,
    words: Vec<Word>,
}

impl Code {
    /// Builds a code, rejecting duplicate words and words that do not fit
    /// the parameters. Raw sampled multisets live outside this type.
    pub fn new(params: CodeParams, words: Vec<Word>) -> Result<Self, CodeError> {
        let mut seen: HashSet<&[u32]> = HashSet::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if w.len() != params.n() {
                return Err(CodeError::WrongLength {
                    got: w.len(),
                    expected: params.n(),
                });
            }
            if let Some(&s) = w.symbols().iter().find(|&&s| s >= params.q()) {
                return Err(CodeError::SymbolOutOfRange { symbol: s, q: params.q() });
            }
            if !seen.insert(w.symbols()) {
                return Err(CodeError::DuplicateWord(i));
            }
        }
        Ok(Code { params, words })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, index: usize) -> Result<&Word, CodeError> {
        self.words.get(index).ok_or(CodeError::IndexOutOfRange {
            index,
            size: self.words.len(),
        })
    }

    /// Descendant profile of the subset of codewords selected by `indices`.
    pub fn subset_profile(&self, indices: &[usize]) -> Result<DescendantProfile, CodeError> {
        let mut selected = Vec::with_capacity(indices.len());
        for &i in indices {
            selected.push(self.word(i)?);
        }
        DescendantProfile::from_words(selected.into_iter(), &self.params)
    }
}
