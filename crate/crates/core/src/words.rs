//! Finite words over a small alphabet and their generators: the Sturmian
//! recursion driven by continued-fraction coefficients, primitive
//! substitutions, subword enumeration, occurrence counting, and complexity.
//!
//! Words are flat byte sequences. Very long generated words are guarded by
//! an explicit byte budget; exceeding it is a hard error, never truncation.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Default cap on generated word storage: 64 MiB.
pub const DEFAULT_BUDGET_BYTES: usize = 64 << 20;

/// Cap on prefix-doubling rounds when saturating a language sample.
pub const SATURATION_DOUBLING_CAP: usize = 8;

/// Finite Sturmian coefficient lists with max coefficient at most this
/// bound are treated as certified linearly repetitive.
pub const LR_COEFFICIENT_BOUND: u64 = 8;

#[derive(Debug, Error)]
pub enum WordsError {
    #[error("memory budget exceeded at level {level}: need {needed} bytes, budget {budget}")]
    BudgetExceeded {
        level: i64,
        needed: BigUint,
        budget: usize,
    },
    #[error("generator cannot produce {requested} letters (has {available})")]
    InsufficientDepth { requested: usize, available: usize },
    #[error("requested depth {requested} exceeds the {available} coefficients of the spec")]
    DepthExceedsSpec { requested: usize, available: usize },
    #[error("empty pattern is not searchable")]
    EmptyPattern,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("symbol {symbol} cannot be written as a single ASCII digit")]
    SymbolNotPrintable { symbol: u8 },
}

/// One alphabet letter: a symbol index plus an optional real decoration
/// (consumed as a potential value by the spectral layer).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Letter {
    pub symbol: u8,
    pub decoration: Option<f64>,
}

impl Letter {
    pub fn new(symbol: u8) -> Self {
        Letter {
            symbol,
            decoration: None,
        }
    }

    pub fn decorated(symbol: u8, value: f64) -> Self {
        Letter {
            symbol,
            decoration: Some(value),
        }
    }
}

/// A finite word: flat symbol sequence. Concatenation is associative with
/// the empty word as identity; ordering is lexicographic.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    symbols: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_symbols(symbols: Vec<u8>) -> Self {
        Word { symbols }
    }

    /// Parse a line of ASCII digits, e.g. "10110".
    pub fn parse(line: &str) -> Result<Self, WordsError> {
        let mut symbols = Vec::with_capacity(line.len());
        for c in line.trim_end_matches(['\n', '\r']).chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| WordsError::Parse(format!("not a digit: {c:?}")))?;
            symbols.push(d as u8);
        }
        Ok(Word { symbols })
    }

    /// Render as one line of digits (the word file format).
    pub fn to_line(&self) -> Result<String, WordsError> {
        let mut s = String::with_capacity(self.symbols.len());
        for &b in &self.symbols {
            if b > 9 {
                return Err(WordsError::SymbolNotPrintable { symbol: b });
            }
            s.push((b'0' + b) as char);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> u8 {
        self.symbols[i]
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Word { symbols }
    }

    pub fn repeated(&self, k: usize) -> Word {
        let mut symbols = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            symbols.extend_from_slice(&self.symbols);
        }
        Word { symbols }
    }

    /// The factor w[start..start+len).
    pub fn factor(&self, start: usize, len: usize) -> Word {
        Word {
            symbols: self.symbols[start..start + len].to_vec(),
        }
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.symbols.starts_with(&prefix.symbols)
    }

    pub fn count_symbol(&self, s: u8) -> usize {
        self.symbols.iter().filter(|&&b| b == s).count()
    }

    pub fn max_symbol(&self) -> Option<u8> {
        self.symbols.iter().copied().max()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(")?;
        for &b in &self.symbols {
            if b <= 9 {
                write!(f, "{b}")?;
            } else {
                write!(f, "<{b}>")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.symbols {
            if b <= 9 {
                write!(f, "{b}")?;
            } else {
                write!(f, "<{b}>")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.symbols.iter().all(|&b| b <= 9) {
            serializer.serialize_str(&self.to_line().expect("digits checked"))
        } else {
            let mut seq = serializer.serialize_seq(Some(self.symbols.len()))?;
            for b in &self.symbols {
                seq.serialize_element(b)?;
            }
            seq.end()
        }
    }
}

/// Byte budget for word materialization.
#[derive(Clone, Copy, Debug)]
pub struct ByteBudget {
    pub max_bytes: usize,
}

impl Default for ByteBudget {
    fn default() -> Self {
        ByteBudget {
            max_bytes: DEFAULT_BUDGET_BYTES,
        }
    }
}

impl ByteBudget {
    pub fn new(max_bytes: usize) -> Self {
        ByteBudget { max_bytes }
    }

    fn check(&self, needed: &BigUint, level: i64) -> Result<usize, WordsError> {
        if *needed > BigUint::from(self.max_bytes) {
            return Err(WordsError::BudgetExceeded {
                level,
                needed: needed.clone(),
                budget: self.max_bytes,
            });
        }
        Ok(needed.to_usize().expect("fits budget, fits usize"))
    }
}

/// Continued-fraction coefficients a_1..a_N driving the Sturmian recursion
///   s_{-1} = 1,  s_0 = 0,  s_1 = s_0^{a_1 - 1} s_{-1},  s_n = s_{n-1}^{a_n} s_{n-2}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SturmianSpec {
    coefficients: Vec<u64>,
}

impl SturmianSpec {
    pub fn new(coefficients: Vec<u64>) -> Result<Self, WordsError> {
        if coefficients.is_empty() {
            return Err(WordsError::InvalidParameter(
                "coefficient list must be nonempty".into(),
            ));
        }
        if coefficients.iter().any(|&a| a == 0) {
            return Err(WordsError::InvalidParameter(
                "all coefficients must be >= 1".into(),
            ));
        }
        Ok(SturmianSpec { coefficients })
    }

    /// The golden spec: a_n = 1 for `depth` coefficients.
    pub fn golden(depth: usize) -> Self {
        SturmianSpec {
            coefficients: vec![1; depth.max(1)],
        }
    }

    /// The fast-growth spec a_n = 2^n, n = 1..=depth.
    pub fn powers_of_two(depth: usize) -> Self {
        SturmianSpec {
            coefficients: (1..=depth.max(1) as u32).map(|n| 1u64 << n).collect(),
        }
    }

    /// Parse a comma-separated list of positive integers.
    pub fn parse(text: &str) -> Result<Self, WordsError> {
        let coefficients = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| WordsError::Parse(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SturmianSpec::new(coefficients)
    }

    pub fn to_spec_string(&self) -> String {
        self.coefficients
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn depth(&self) -> usize {
        self.coefficients.len()
    }

    /// a_n for 1 <= n <= depth.
    pub fn coefficient(&self, n: usize) -> u64 {
        self.coefficients[n - 1]
    }

    pub fn max_coefficient(&self) -> u64 {
        *self.coefficients.iter().max().expect("nonempty")
    }

    /// Exact lengths |s_{-1}|, |s_0|, ..., |s_{n_max}|.
    pub fn lengths(&self, n_max: usize) -> Result<Vec<BigUint>, WordsError> {
        self.check_depth(n_max)?;
        let mut lens = vec![BigUint::one(), BigUint::one()];
        if n_max >= 1 {
            lens.push(BigUint::from(self.coefficient(1)));
        }
        for n in 2..=n_max {
            let l = BigUint::from(self.coefficient(n)) * &lens[n] + &lens[n - 1];
            lens.push(l);
        }
        Ok(lens)
    }

    /// Exact counts of the symbol 1 in s_{-1}, s_0, ..., s_{n_max}.
    /// These satisfy the same three-term recursion as the lengths.
    pub fn ones_counts(&self, n_max: usize) -> Result<Vec<BigUint>, WordsError> {
        self.check_depth(n_max)?;
        let mut ones = vec![BigUint::one(), BigUint::zero()];
        if n_max >= 1 {
            ones.push(BigUint::one());
        }
        for n in 2..=n_max {
            let c = BigUint::from(self.coefficient(n)) * &ones[n] + &ones[n - 1];
            ones.push(c);
        }
        Ok(ones)
    }

    fn check_depth(&self, n_max: usize) -> Result<(), WordsError> {
        if n_max > self.depth() {
            return Err(WordsError::DepthExceedsSpec {
                requested: n_max,
                available: self.depth(),
            });
        }
        Ok(())
    }

    /// Materialize s_{-1}..s_{n_max}. The combined storage must fit the budget.
    pub fn words(&self, n_max: usize, budget: ByteBudget) -> Result<SturmianWords, WordsError> {
        self.check_depth(n_max)?;
        let lens = self.lengths(n_max)?;
        let mut total = BigUint::zero();
        for (i, l) in lens.iter().enumerate() {
            total += l;
            budget.check(&total, i as i64 - 1)?;
        }
        let mut words: Vec<Word> = vec![
            Word::from_symbols(vec![1]), // s_{-1}
            Word::from_symbols(vec![0]), // s_0
        ];
        if n_max >= 1 {
            // a_1 = 1 degenerates to s_1 = s_{-1}; the recursion is applied literally.
            let a1 = self.coefficient(1) as usize;
            let mut w = words[1].repeated(a1 - 1);
            w = w.concat(&words[0]);
            words.push(w);
        }
        for n in 2..=n_max {
            let a_n = self.coefficient(n) as usize;
            let w = words[n].repeated(a_n).concat(&words[n - 1]);
            words.push(w);
        }
        Ok(SturmianWords { words })
    }

    /// First `len` letters of the one-sided limit word. Works whenever some
    /// s_n reaches the requested length; only pieces shorter than `len` are
    /// ever fully materialized.
    pub fn prefix(&self, len: usize, budget: ByteBudget) -> Result<Word, WordsError> {
        if len == 0 {
            return Ok(Word::empty());
        }
        budget.check(&(BigUint::from(len) * 3u32), -1)?;
        let lens = self.lengths(self.depth())?;
        // first level m with |s_m| >= len
        let mut m: Option<usize> = None;
        for (i, l) in lens.iter().enumerate() {
            if *l >= BigUint::from(len) {
                m = Some(i); // index i corresponds to level i-1
                break;
            }
        }
        let Some(mi) = m else {
            let available = lens
                .last()
                .and_then(|l| l.to_usize())
                .unwrap_or(usize::MAX);
            return Err(WordsError::InsufficientDepth {
                requested: len,
                available,
            });
        };
        let level = mi as i64 - 1;
        if level <= 1 {
            // s_{-1}, s_0, s_1 are cheap; materialize directly.
            let words = self.words(level.max(1) as usize, budget)?;
            let w = words.s(level);
            return Ok(w.factor(0, len));
        }
        // All of s_{-1}..s_{level-1} are shorter than len; build them fully,
        // then assemble prefix_len(s_level) = prefix of s_{level-1}^{a} s_{level-2}.
        let words = self.words(level as usize - 1, budget)?;
        let mut out: Vec<u8> = Vec::with_capacity(len);
        let body = words.s(level - 1);
        let tail = words.s(level - 2);
        let a = self.coefficient(level as usize) as usize;
        for _ in 0..a {
            if out.len() >= len {
                break;
            }
            let take = (len - out.len()).min(body.len());
            out.extend_from_slice(&body.symbols()[..take]);
        }
        if out.len() < len {
            let take = (len - out.len()).min(tail.len());
            out.extend_from_slice(&tail.symbols()[..take]);
        }
        debug_assert_eq!(out.len(), len);
        Ok(Word::from_symbols(out))
    }
}

/// The materialized tower s_{-1}..s_{n_max}.
#[derive(Clone, Debug)]
pub struct SturmianWords {
    words: Vec<Word>,
}

impl SturmianWords {
    /// s_n for -1 <= n <= n_max.
    pub fn s(&self, n: i64) -> &Word {
        &self.words[(n + 1) as usize]
    }

    pub fn n_max(&self) -> i64 {
        self.words.len() as i64 - 2
    }

    /// All words in level order s_{-1}, s_0, ...
    pub fn all(&self) -> &[Word] {
        &self.words
    }
}

/// A substitution rule: a total map from alphabet letters to nonempty words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionRule {
    images: Vec<Word>,
}

impl SubstitutionRule {
    pub fn new(images: Vec<Word>) -> Result<Self, WordsError> {
        if images.is_empty() {
            return Err(WordsError::InvalidParameter("empty alphabet".into()));
        }
        let size = images.len();
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(WordsError::InvalidParameter(format!(
                    "image of letter {i} is empty"
                )));
            }
            if let Some(m) = img.max_symbol() {
                if m as usize >= size {
                    return Err(WordsError::InvalidParameter(format!(
                        "image of letter {i} uses symbol {m} outside the alphabet of size {size}"
                    )));
                }
            }
        }
        Ok(SubstitutionRule { images })
    }

    /// The Fibonacci rule 0 -> 01, 1 -> 0.
    pub fn fibonacci() -> Self {
        SubstitutionRule {
            images: vec![
                Word::from_symbols(vec![0, 1]),
                Word::from_symbols(vec![0]),
            ],
        }
    }

    /// Parse "0->01;1->0".
    pub fn parse(text: &str) -> Result<Self, WordsError> {
        let mut map: HashMap<u8, Word> = HashMap::new();
        for part in text.split(';') {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| WordsError::Parse(format!("missing '->' in {part:?}")))?;
            let sym = lhs
                .trim()
                .parse::<u8>()
                .map_err(|e| WordsError::Parse(format!("bad letter {lhs:?}: {e}")))?;
            let img = Word::parse(rhs.trim())?;
            if map.insert(sym, img).is_some() {
                return Err(WordsError::Parse(format!("duplicate image for {sym}")));
            }
        }
        let size = map.len() as u8;
        let mut images = Vec::with_capacity(size as usize);
        for s in 0..size {
            let img = map
                .remove(&s)
                .ok_or_else(|| WordsError::Parse(format!("no image for letter {s}")))?;
            images.push(img);
        }
        SubstitutionRule::new(images)
    }

    pub fn to_rule_string(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{i}->{w}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, symbol: u8) -> &Word {
        &self.images[symbol as usize]
    }

    /// Letter-count (abelianization) matrix: m[i][j] = occurrences of letter i
    /// in the image of letter j.
    pub fn abelianization(&self) -> Vec<Vec<u64>> {
        let s = self.alphabet_size();
        let mut m = vec![vec![0u64; s]; s];
        for (j, img) in self.images.iter().enumerate() {
            for &b in img.symbols() {
                m[b as usize][j] += 1;
            }
        }
        m
    }

    /// True iff some power of the abelianization matrix is entrywise positive.
    /// Powers up to alphabet_size^2 are examined on the positivity pattern.
    pub fn is_primitive(&self) -> bool {
        let s = self.alphabet_size();
        let base: Vec<Vec<bool>> = self
            .abelianization()
            .iter()
            .map(|row| row.iter().map(|&x| x > 0).collect())
            .collect();
        let mut power = base.clone();
        for _ in 0..s * s {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            power = bool_mat_mul(&power, &base);
        }
        power.iter().all(|row| row.iter().all(|&x| x))
    }

    /// k-fold application of the rule to a single seed letter.
    pub fn iterate(&self, seed: Letter, k: usize, budget: ByteBudget) -> Result<Word, WordsError> {
        if seed.symbol as usize >= self.alphabet_size() {
            return Err(WordsError::InvalidParameter(format!(
                "seed {} outside alphabet of size {}",
                seed.symbol,
                self.alphabet_size()
            )));
        }
        let mut w = Word::from_symbols(vec![seed.symbol]);
        for _ in 0..k {
            let mut next: BigUint = BigUint::zero();
            for &b in w.symbols() {
                next += self.image(b).len();
            }
            let cap = budget.check(&next, k as i64)?;
            let mut out = Vec::with_capacity(cap);
            for &b in w.symbols() {
                out.extend_from_slice(self.image(b).symbols());
            }
            w = Word::from_symbols(out);
        }
        Ok(w)
    }

    /// First `len` letters of the fixed point grown from `seed`. Requires the
    /// rule to be prolongable at the seed: image(seed) starts with seed and
    /// iterates must keep growing.
    pub fn prefix_from(
        &self,
        seed: Letter,
        len: usize,
        budget: ByteBudget,
    ) -> Result<Word, WordsError> {
        if len == 0 {
            return Ok(Word::empty());
        }
        let img = self.image(seed.symbol);
        if img.symbol(0) != seed.symbol {
            return Err(WordsError::InvalidParameter(format!(
                "rule is not prolongable at {}: image {} does not start with the seed",
                seed.symbol, img
            )));
        }
        budget.check(&(BigUint::from(len) * 2u32), -1)?;
        let mut w = Word::from_symbols(vec![seed.symbol]);
        loop {
            if w.len() >= len {
                return Ok(w.factor(0, len));
            }
            let mut out = Vec::with_capacity((2 * len).min(w.len() * 2 + 16));
            for &b in w.symbols() {
                out.extend_from_slice(self.image(b).symbols());
                if out.len() >= 2 * len {
                    break;
                }
            }
            if out.len() <= w.len() {
                return Err(WordsError::InsufficientDepth {
                    requested: len,
                    available: out.len(),
                });
            }
            w = Word::from_symbols(out);
        }
    }
}

fn bool_mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    let mut c = vec![vec![false; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] {
                for j in 0..n {
                    if b[k][j] {
                        c[i][j] = true;
                    }
                }
            }
        }
    }
    c
}

/// A word generator: either a Sturmian coefficient spec or a substitution
/// rule iterated from letter 0.
#[derive(Clone, Debug, Serialize)]
pub enum Generator {
    Sturmian(SturmianSpec),
    Substitution(SubstitutionRule),
}

impl Generator {
    pub fn prefix(&self, len: usize, budget: ByteBudget) -> Result<Word, WordsError> {
        match self {
            Generator::Sturmian(spec) => spec.prefix(len, budget),
            Generator::Substitution(rule) => rule.prefix_from(Letter::new(0), len, budget),
        }
    }

    /// Linear-repetitivity certificate: primitive substitutions qualify;
    /// Sturmian specs qualify when all coefficients stay at or below
    /// [`LR_COEFFICIENT_BOUND`]. Larger coefficients need an explicit
    /// override from the caller.
    pub fn lr_certified(&self) -> bool {
        match self {
            Generator::Sturmian(spec) => spec.max_coefficient() <= LR_COEFFICIENT_BOUND,
            Generator::Substitution(rule) => rule.is_primitive(),
        }
    }

    /// Parse "sturmian:1,1,1,1" or "substitution:0->01;1->0".
    pub fn parse(text: &str) -> Result<Self, WordsError> {
        if let Some(rest) = text.strip_prefix("sturmian:") {
            Ok(Generator::Sturmian(SturmianSpec::parse(rest)?))
        } else if let Some(rest) = text.strip_prefix("substitution:") {
            Ok(Generator::Substitution(SubstitutionRule::parse(rest)?))
        } else {
            Err(WordsError::Parse(format!(
                "generator must start with 'sturmian:' or 'substitution:', got {text:?}"
            )))
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Generator::Sturmian(spec) => format!("sturmian:{}", spec.to_spec_string()),
            Generator::Substitution(rule) => format!("substitution:{}", rule.to_rule_string()),
        }
    }
}

/// Occurrence positions of a pattern, overlaps included.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrences {
    pub positions: Vec<usize>,
}

impl Occurrences {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// All start positions of `v` in `w` (overlapping occurrences counted),
/// via Knuth-Morris-Pratt. The empty pattern is rejected.
pub fn occurrences(v: &Word, w: &Word) -> Result<Occurrences, WordsError> {
    if v.is_empty() {
        return Err(WordsError::EmptyPattern);
    }
    Ok(Occurrences {
        positions: kmp_positions(v.symbols(), w.symbols()),
    })
}

pub(crate) fn kmp_positions(pat: &[u8], text: &[u8]) -> Vec<usize> {
    let m = pat.len();
    if m == 0 || m > text.len() {
        return Vec::new();
    }
    // failure function
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && pat[i] != pat[k] {
            k = fail[k - 1];
        }
        if pat[i] == pat[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    let mut q = 0;
    for (i, &c) in text.iter().enumerate() {
        while q > 0 && c != pat[q] {
            q = fail[q - 1];
        }
        if c == pat[q] {
            q += 1;
        }
        if q == m {
            out.push(i + 1 - m);
            q = fail[q - 1];
        }
    }
    out
}

// Rolling double hash over symbol+1 values, mod two Mersenne primes.
// Collisions across both channels are negligible for any realistic input;
// distinct hash pairs are treated as distinct windows.
const HASH_MOD: [u128; 2] = [(1 << 61) - 1, (1 << 61) - 129];
const HASH_BASE: [u128; 2] = [1_000_003, 10_000_019];

fn mod_mul(a: u128, b: u128, m: u128) -> u128 {
    // operands stay below 2^61, product below 2^122: fits u128
    (a * b) % m
}

/// Visit every length-n window of `text` as (start, rolling hash pair).
pub(crate) fn for_each_window_hash(
    text: &[u8],
    n: usize,
    mut visit: impl FnMut(usize, (u64, u64)),
) {
    if n == 0 || n > text.len() {
        return;
    }
    let mut pow = [1u128; 2];
    for _ in 0..n - 1 {
        for c in 0..2 {
            pow[c] = mod_mul(pow[c], HASH_BASE[c], HASH_MOD[c]);
        }
    }
    let mut h = [0u128; 2];
    for &b in &text[..n] {
        for c in 0..2 {
            h[c] = (mod_mul(h[c], HASH_BASE[c], HASH_MOD[c]) + (b as u128 + 1)) % HASH_MOD[c];
        }
    }
    visit(0, (h[0] as u64, h[1] as u64));
    for i in 1..=text.len() - n {
        let gone = text[i - 1] as u128 + 1;
        let come = text[i + n - 1] as u128 + 1;
        for c in 0..2 {
            let sub = mod_mul(gone, pow[c], HASH_MOD[c]);
            h[c] = (h[c] + HASH_MOD[c] - sub) % HASH_MOD[c];
            h[c] = (mod_mul(h[c], HASH_BASE[c], HASH_MOD[c]) + come) % HASH_MOD[c];
        }
        visit(i, (h[0] as u64, h[1] as u64));
    }
}

/// First-occurrence start positions of the distinct length-n windows of
/// `text`, in order of first appearance.
pub(crate) fn distinct_window_starts(text: &[u8], n: usize) -> Vec<usize> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut out = Vec::new();
    for_each_window_hash(text, n, |i, key| {
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
            e.insert(i);
            out.push(i);
        }
    });
    out
}

/// All distinct factors of `w` of length `n`. For n > |w| the set is empty;
/// for n = 0 it holds the empty word only.
pub fn subwords(w: &Word, n: usize) -> BTreeSet<Word> {
    let mut set = BTreeSet::new();
    if n == 0 {
        set.insert(Word::empty());
        return set;
    }
    for start in distinct_window_starts(w.symbols(), n) {
        set.insert(w.factor(start, n));
    }
    set
}

/// Subword complexity p(n) of `w`: the number of distinct length-n factors.
pub fn complexity(w: &Word, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    distinct_window_starts(w.symbols(), n).len()
}

/// Distinct length-n factors sampled from a generator prefix, with the
/// prefix doubled until the member set stabilizes.
#[derive(Clone, Debug, Serialize)]
pub struct LanguageSample {
    pub n: usize,
    /// Lexicographically sorted members.
    pub members: Vec<Word>,
    pub source_prefix_length: usize,
    pub saturated: bool,
}

impl LanguageSample {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Enumerate the length-n members of the generated language from a prefix of
/// length ceil(safety_factor * n), doubling the prefix until the member set
/// stabilizes (up to [`SATURATION_DOUBLING_CAP`] rounds). Non-stabilization
/// is flagged via `saturated`, never silently dropped.
pub fn language_sample(
    generator: &Generator,
    n: usize,
    safety_factor: f64,
    budget: ByteBudget,
) -> Result<LanguageSample, WordsError> {
    if n == 0 {
        return Err(WordsError::InvalidParameter(
            "sample length n must be >= 1".into(),
        ));
    }
    if !(safety_factor >= 2.0) {
        return Err(WordsError::InvalidParameter(format!(
            "safety_factor must be >= 2, got {safety_factor}"
        )));
    }
    let mut len = ((n as f64) * safety_factor).ceil() as usize;
    let mut prefix = generator.prefix(len, budget)?;
    let mut members = collect_members(&prefix, n, budget)?;
    let mut saturated = false;
    for _ in 0..SATURATION_DOUBLING_CAP {
        let next_len = len * 2;
        let next_prefix = match generator.prefix(next_len, budget) {
            Ok(p) => p,
            Err(WordsError::InsufficientDepth { .. }) => break,
            Err(e) => return Err(e),
        };
        let next_members = collect_members(&next_prefix, n, budget)?;
        let stable = next_members == members;
        len = next_len;
        prefix = next_prefix;
        members = next_members;
        if stable {
            saturated = true;
            break;
        }
    }
    let _ = prefix;
    Ok(LanguageSample {
        n,
        members,
        source_prefix_length: len,
        saturated,
    })
}

fn collect_members(prefix: &Word, n: usize, budget: ByteBudget) -> Result<Vec<Word>, WordsError> {
    let starts = distinct_window_starts(prefix.symbols(), n);
    let needed = BigUint::from(starts.len()) * BigUint::from(n);
    budget.check(&needed, -1)?;
    let mut members: Vec<Word> = starts.iter().map(|&s| prefix.factor(s, n)).collect();
    members.sort_unstable();
    members
        .windows(2)
        .for_each(|w| debug_assert!(w[0] != w[1], "hash dedupe produced duplicates"));
    Ok(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn golden_recursion_matches_examples() {
        let spec = SturmianSpec::golden(4);
        let words = spec.words(4, ByteBudget::default()).unwrap();
        assert_eq!(words.s(1), &w("1"));
        assert_eq!(words.s(2), &w("10"));
        assert_eq!(words.s(3), &w("101"));
        assert_eq!(words.s(4), &w("10110"));
    }

    #[test]
    fn a1_two_gives_s1_01() {
        let spec = SturmianSpec::new(vec![2]).unwrap();
        let words = spec.words(1, ByteBudget::default()).unwrap();
        assert_eq!(words.s(1), &w("01"));
    }

    #[test]
    fn base_case_words() {
        let spec = SturmianSpec::golden(1);
        let words = spec.words(0, ByteBudget::default()).unwrap();
        assert_eq!(words.s(-1), &w("1"));
        assert_eq!(words.s(0), &w("0"));
    }

    #[test]
    fn recursion_identity_letter_by_letter() {
        for spec in [
            SturmianSpec::golden(10),
            SturmianSpec::new(vec![2, 4, 8, 2, 4]).unwrap(),
            SturmianSpec::new(vec![1, 5, 1, 5, 1, 5]).unwrap(),
        ] {
            let d = spec.depth();
            let words = spec.words(d, ByteBudget::default()).unwrap();
            for n in 2..=d as i64 {
                let rebuilt = words
                    .s(n - 1)
                    .repeated(spec.coefficient(n as usize) as usize)
                    .concat(words.s(n - 2));
                assert_eq!(words.s(n), &rebuilt, "recursion at n={n}");
            }
        }
    }

    #[test]
    fn length_law() {
        let spec = SturmianSpec::new(vec![3, 1, 4, 1, 5]).unwrap();
        let words = spec.words(5, ByteBudget::default()).unwrap();
        let lens = spec.lengths(5).unwrap();
        for (i, word) in words.all().iter().enumerate() {
            assert_eq!(BigUint::from(word.len()), lens[i]);
        }
        let ones = spec.ones_counts(5).unwrap();
        for (i, word) in words.all().iter().enumerate() {
            assert_eq!(BigUint::from(word.count_symbol(1)), ones[i]);
        }
    }

    #[test]
    fn prefix_matches_examples() {
        let spec = SturmianSpec::golden(5);
        assert_eq!(
            spec.prefix(5, ByteBudget::default()).unwrap(),
            w("10110")
        );
        assert_eq!(spec.prefix(0, ByteBudget::default()).unwrap(), Word::empty());
        let spec6 = SturmianSpec::golden(6);
        assert_eq!(
            spec6.prefix(8, ByteBudget::default()).unwrap(),
            w("10110101")
        );
    }

    #[test]
    fn prefix_is_prefix_of_every_long_enough_level() {
        let spec = SturmianSpec::new(vec![2, 3, 1, 2, 2]).unwrap();
        let words = spec.words(5, ByteBudget::default()).unwrap();
        let p = spec.prefix(10, ByteBudget::default()).unwrap();
        for n in 0..=5i64 {
            if words.s(n).len() >= 10 {
                assert!(words.s(n).starts_with(&p));
            }
        }
    }

    #[test]
    fn prefix_insufficient_depth_errors() {
        let spec = SturmianSpec::golden(3);
        let err = spec.prefix(100, ByteBudget::default()).unwrap_err();
        assert!(matches!(err, WordsError::InsufficientDepth { .. }));
    }

    #[test]
    fn budget_error_names_level() {
        let spec = SturmianSpec::powers_of_two(10);
        let err = spec.words(10, ByteBudget::default()).unwrap_err();
        match err {
            WordsError::BudgetExceeded { level, .. } => assert_eq!(level, 7),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn substitution_iterate_examples() {
        let fib = SubstitutionRule::fibonacci();
        let b = ByteBudget::default();
        assert_eq!(fib.iterate(Letter::new(0), 0, b).unwrap(), w("0"));
        assert_eq!(fib.iterate(Letter::new(0), 3, b).unwrap(), w("01001"));
        let doubling = SubstitutionRule::parse("0->00").unwrap();
        assert_eq!(doubling.iterate(Letter::new(0), 2, b).unwrap(), w("0000"));
    }

    #[test]
    fn iterate_prefix_nesting() {
        let fib = SubstitutionRule::fibonacci();
        let b = ByteBudget::default();
        for k in 0..8 {
            let a = fib.iterate(Letter::new(0), k, b).unwrap();
            let c = fib.iterate(Letter::new(0), k + 1, b).unwrap();
            assert!(c.starts_with(&a));
        }
    }

    #[test]
    fn primitivity_examples() {
        assert!(SubstitutionRule::fibonacci().is_primitive());
        assert!(!SubstitutionRule::parse("0->00;1->11").unwrap().is_primitive());
        assert!(SubstitutionRule::parse("0->01;1->01").unwrap().is_primitive());
        // period-2 swap: primitive fails (powers alternate off-diagonal)
        assert!(!SubstitutionRule::parse("0->1;1->0").unwrap().is_primitive());
    }

    #[test]
    fn subwords_examples() {
        let set = subwords(&w("10110"), 2);
        let expect: BTreeSet<Word> = [w("10"), w("01"), w("11")].into_iter().collect();
        assert_eq!(set, expect);
        assert_eq!(subwords(&w("1010"), 0).len(), 1);
        assert_eq!(subwords(&w("1010"), 4).len(), 1);
        assert!(subwords(&w("10"), 5).is_empty());
    }

    #[test]
    fn occurrences_examples() {
        let occ = occurrences(&w("10"), &w("1010")).unwrap();
        assert_eq!(occ.positions, vec![0, 2]);
        assert_eq!(occurrences(&w("11"), &w("1010")).unwrap().count(), 0);
        // overlaps are counted
        let occ = occurrences(&w("101"), &w("10101")).unwrap();
        assert_eq!(occ.positions, vec![0, 2]);
        assert!(matches!(
            occurrences(&Word::empty(), &w("10")),
            Err(WordsError::EmptyPattern)
        ));
    }

    #[test]
    fn complexity_examples() {
        let spec = SturmianSpec::golden(20);
        let p = spec.prefix(1000, ByteBudget::default()).unwrap();
        assert_eq!(complexity(&p, 3), 4);
        assert_eq!(complexity(&p, 0), 1);
        let periodic = w("01").repeated(500);
        assert_eq!(complexity(&periodic, 5), 2);
    }

    #[test]
    fn sturmian_complexity_is_n_plus_1() {
        let spec = SturmianSpec::golden(25);
        let p = spec.prefix(20000, ByteBudget::default()).unwrap();
        for n in 1..=32 {
            assert_eq!(complexity(&p, n), n + 1, "p({n})");
        }
    }

    #[test]
    fn language_sample_fibonacci() {
        let gen = Generator::Sturmian(SturmianSpec::golden(25));
        let sample = language_sample(&gen, 4, 2.0, ByteBudget::default()).unwrap();
        assert!(sample.saturated);
        assert_eq!(sample.count(), 5);
        let sample1 = language_sample(&gen, 1, 2.0, ByteBudget::default()).unwrap();
        assert_eq!(sample1.count(), 2);
    }

    #[test]
    fn language_sample_window_scan_matches_brute() {
        let spec = SturmianSpec::new(vec![1, 5, 1, 5, 1, 5, 1, 5, 1, 5, 1, 5]).unwrap();
        let gen = Generator::Sturmian(spec);
        let sample = language_sample(&gen, 6, 2.0, ByteBudget::default()).unwrap();
        assert!(sample.saturated);
        // brute enumeration over a long prefix
        let p = gen.prefix(10000, ByteBudget::default()).unwrap();
        let brute = subwords(&p, 6);
        let got: BTreeSet<Word> = sample.members.iter().cloned().collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn safety_factor_below_two_rejected() {
        let gen = Generator::Sturmian(SturmianSpec::golden(10));
        assert!(language_sample(&gen, 4, 1.5, ByteBudget::default()).is_err());
    }

    #[test]
    fn word_line_round_trip() {
        let word = w("0110");
        assert_eq!(word.to_line().unwrap(), "0110");
        assert_eq!(Word::parse("0110\n").unwrap(), word);
        let bad = Word::from_symbols(vec![12]);
        assert!(bad.to_line().is_err());
    }

    #[test]
    fn spec_string_round_trip() {
        let spec = SturmianSpec::parse("2,4,8").unwrap();
        assert_eq!(spec.to_spec_string(), "2,4,8");
        assert!(SturmianSpec::parse("2,0,1").is_err());
        assert!(SturmianSpec::parse("").is_err());
    }

    #[test]
    fn generator_parse_round_trip() {
        let g = Generator::parse("sturmian:1,1,1").unwrap();
        assert_eq!(g.describe(), "sturmian:1,1,1");
        let g = Generator::parse("substitution:0->01;1->0").unwrap();
        assert_eq!(g.describe(), "substitution:0->01;1->0");
        assert!(g.lr_certified());
        let fast = Generator::parse("sturmian:2,4,8,16").unwrap();
        assert!(!fast.lr_certified());
    }

    #[test]
    fn substitution_prefix_from_seed() {
        let fib = SubstitutionRule::fibonacci();
        let p = fib
            .prefix_from(Letter::new(0), 13, ByteBudget::default())
            .unwrap();
        assert_eq!(p, w("0100101001001"));
        // non-prolongable rule rejected
        let swap = SubstitutionRule::parse("0->1;1->0").unwrap();
        assert!(swap
            .prefix_from(Letter::new(0), 4, ByteBudget::default())
            .is_err());
    }
}
