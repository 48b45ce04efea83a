//! Mixed alphabets, words, row multisets, and the counting definition of
//! orthogonal-array strength.
//!
//! An array over the alphabet `(q_1, ..., q_n)` has strength `t` when every
//! projection onto `t` columns hits every value tuple exactly `N / (q_{i_1}
//! ... q_{i_t})` times. All counting here is exact: expected frequencies are
//! rationals, never floats.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::{BigInt, BigRational, Integer, One, Zero};

use crate::error::{Error, Result};

/// Ordered list of factor levels `q_1, ..., q_n`, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedAlphabet {
    levels: Vec<u32>,
    lcm: i64,
}

impl MixedAlphabet {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidLevels("no levels given".into()));
        }
        if let Some(&bad) = levels.iter().find(|&&q| q < 2) {
            return Err(Error::InvalidLevels(format!("level {bad} is below 2")));
        }
        let mut lcm: i64 = 1;
        for &q in &levels {
            let q = i64::from(q);
            lcm = lcm
                .checked_div(lcm.gcd(&q))
                .and_then(|l| l.checked_mul(q))
                .ok_or(Error::Overflow("lcm of levels"))?;
        }
        Ok(Self { levels, lcm })
    }

    /// All `n` levels equal to `q`.
    pub fn pure(n: usize, q: u32) -> Result<Self> {
        Self::new(vec![q; n])
    }

    /// Parses either a plain list (`"2 4 4 4 4"`) or exponent form
    /// (`"2^1 4^4"`); exponent groups expand left to right and both token
    /// kinds may be mixed.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut levels = Vec::new();
        for token in spec.split_whitespace() {
            let (base, count) = match token.split_once('^') {
                Some((b, e)) => {
                    let e: usize = e
                        .parse()
                        .map_err(|_| Error::InvalidLevels(format!("bad exponent in {token:?}")))?;
                    (b, e)
                }
                None => (token, 1),
            };
            let q: u32 = base
                .parse()
                .map_err(|_| Error::InvalidLevels(format!("bad level token {token:?}")))?;
            levels.extend(std::iter::repeat_n(q, count));
        }
        Self::new(levels)
    }

    /// Canonical exponent form, grouping runs of equal consecutive levels:
    /// `(2,4,4,4,4)` renders as `"2^1 4^4"`.
    pub fn canonical_format(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.levels.len() {
            let q = self.levels[i];
            let mut j = i;
            while j < self.levels.len() && self.levels[j] == q {
                j += 1;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&format!("{q}^{}", j - i));
            i = j;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires n >= 1
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> u32 {
        self.levels[i]
    }

    /// `Q`, the least common multiple of the levels.
    pub fn level_lcm(&self) -> i64 {
        self.lcm
    }

    /// `q_1 q_2 ... q_n`, the number of possible words.
    pub fn word_count(&self) -> BigInt {
        self.levels
            .iter()
            .fold(BigInt::one(), |acc, &q| acc * BigInt::from(q))
    }

    pub(crate) fn word_count_u128(&self) -> Option<u128> {
        self.levels
            .iter()
            .try_fold(1u128, |acc, &q| acc.checked_mul(u128::from(q)))
    }

    /// Harmonic mean of the levels, `n / (1/q_1 + ... + 1/q_n)`.
    pub fn harmonic_mean(&self) -> BigRational {
        let inv_sum: BigRational = self
            .levels
            .iter()
            .map(|&q| BigRational::new(BigInt::one(), BigInt::from(q)))
            .sum();
        BigRational::from_integer(BigInt::from(self.len())) / inv_sum
    }

    /// `Q_t = lcm { q_{i_1} ... q_{i_t} }` over all t-column choices, computed
    /// per prime: the exponent of each prime is the sum of its `t` largest
    /// exponents across the levels.
    pub fn q_t_modulus(&self, t: usize) -> Result<BigInt> {
        if t < 1 || t > self.len() {
            return Err(Error::StrengthOutOfRange { t, n: self.len() });
        }
        let mut per_prime: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &q in &self.levels {
            for (p, e) in factorize(q) {
                per_prime.entry(p).or_default().push(e);
            }
        }
        let mut result = BigInt::one();
        for (p, mut exps) in per_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            let top: u32 = exps.iter().take(t).sum();
            result *= BigInt::from(p).pow(top);
        }
        Ok(result)
    }

    /// Positional strides for the mixed-radix encoding (last position varies
    /// fastest); `None` when the word count does not fit in `u64`.
    pub(crate) fn strides_u64(&self) -> Option<Vec<u64>> {
        let mut strides = vec![1u64; self.len()];
        for i in (0..self.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1].checked_mul(u64::from(self.levels[i + 1]))?;
        }
        // the full product must fit too, or indices would wrap
        strides[0].checked_mul(u64::from(self.levels[0]))?;
        Some(strides)
    }

    /// Decodes a mixed-radix index (lexicographic rank) into a word.
    pub fn word_at(&self, mut index: u64) -> Word {
        let mut symbols = vec![0u32; self.len()];
        for i in (0..self.len()).rev() {
            let q = u64::from(self.levels[i]);
            symbols[i] = (index % q) as u32;
            index /= q;
        }
        Word::new(symbols)
    }

    /// Mixed-radix rank of a word; inverse of [`word_at`](Self::word_at).
    pub fn index_of(&self, word: &Word) -> u64 {
        let mut idx = 0u64;
        for (i, &s) in word.symbols().iter().enumerate() {
            idx = idx * u64::from(self.levels[i]) + u64::from(s);
        }
        idx
    }

    pub fn contains(&self, word: &Word) -> bool {
        word.len() == self.len()
            && word
                .symbols()
                .iter()
                .zip(&self.levels)
                .all(|(&s, &q)| s < q)
    }

    /// Iterates every word in mixed-radix ascending (lexicographic) order.
    pub fn words(&self) -> Words<'_> {
        Words {
            alphabet: self,
            current: Some(vec![0; self.len()]),
        }
    }
}

impl fmt::Display for MixedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_format())
    }
}

fn factorize(mut x: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            let mut e = 0;
            while x.is_multiple_of(p) {
                x /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

/// One row: symbol `i` lies in `[0, q_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.iter().map(|s| s.to_string()).join(" "))
    }
}

impl From<Vec<u32>> for Word {
    fn from(symbols: Vec<u32>) -> Self {
        Word(symbols)
    }
}

pub struct Words<'a> {
    alphabet: &'a MixedAlphabet,
    current: Option<Vec<u32>>,
}

impl Iterator for Words<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let digits = self.current.as_mut()?;
        let result = Word::new(digits.clone());
        // odometer increment, last position fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.alphabet.level(i) {
                break;
            }
            digits[i] = 0;
        }
        Some(result)
    }
}

/// A multiset of rows over a mixed alphabet; the orthogonal-array candidate.
///
/// Rows are kept in a canonical ordered map so iteration, witnesses, and the
/// text rendering are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayMultiset {
    alphabet: MixedAlphabet,
    rows: BTreeMap<Word, u64>,
    runs: u64,
}

impl ArrayMultiset {
    pub fn new(alphabet: MixedAlphabet) -> Self {
        Self {
            alphabet,
            rows: BTreeMap::new(),
            runs: 0,
        }
    }

    pub fn from_rows<I>(alphabet: MixedAlphabet, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Word>,
    {
        let mut array = Self::new(alphabet);
        for word in rows {
            array.insert(word, 1)?;
        }
        Ok(array)
    }

    /// Every word of the alphabet exactly `multiplicity` times.
    pub fn full_product(alphabet: MixedAlphabet, multiplicity: u64) -> Result<Self> {
        const GUARD: u128 = 1 << 24;
        let size = alphabet
            .word_count_u128()
            .ok_or(Error::Overflow("word count"))?;
        if size > GUARD {
            return Err(Error::GuardExceeded {
                what: "full product set",
                size,
                guard: GUARD,
            });
        }
        let mut array = Self::new(alphabet.clone());
        for word in alphabet.words() {
            array.insert(word, multiplicity)?;
        }
        Ok(array)
    }

    pub fn insert(&mut self, word: Word, multiplicity: u64) -> Result<()> {
        if !self.alphabet.contains(&word) {
            return Err(Error::InvalidWord {
                word: word.symbols().to_vec(),
            });
        }
        if multiplicity == 0 {
            return Ok(());
        }
        self.runs += multiplicity;
        *self.rows.entry(word).or_insert(0) += multiplicity;
        Ok(())
    }

    pub fn alphabet(&self) -> &MixedAlphabet {
        &self.alphabet
    }

    /// `N`, the number of rows counted with multiplicity.
    pub fn runs(&self) -> u64 {
        self.runs
    }

    pub fn distinct_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn multiplicity(&self, word: &Word) -> u64 {
        self.rows.get(word).copied().unwrap_or(0)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Word, u64)> {
        self.rows.iter().map(|(w, &m)| (w, m))
    }

    /// True when no row repeats.
    pub fn is_simple(&self) -> bool {
        self.rows.values().all(|&m| m == 1)
    }

    /// Exact counting check of strength `t`: every `t`-column projection must
    /// hit every value tuple exactly `N / (q_{i_1} ... q_{i_t})` times.
    ///
    /// A non-integer expected count can never be met, so the first value
    /// tuple becomes the witness. Witnesses are the lexicographically first
    /// failing (columns, values) pair.
    pub fn check_strength(&self, t: usize) -> Result<StrengthReport> {
        let n = self.alphabet.len();
        if t > n {
            return Err(Error::StrengthOutOfRange { t, n });
        }
        if self.runs == 0 {
            return Err(Error::EmptyArray);
        }
        if t == 0 {
            return Ok(StrengthReport {
                t,
                holds: true,
                witness: None,
            });
        }
        let runs = BigInt::from(self.runs);
        for columns in (0..n).combinations(t) {
            let prod = columns
                .iter()
                .fold(BigInt::one(), |acc, &c| acc * BigInt::from(self.alphabet.level(c)));
            let expected = BigRational::new(runs.clone(), prod);

            let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for (word, mult) in self.rows() {
                let key: Vec<u32> = columns.iter().map(|&c| word.symbols()[c]).collect();
                *counts.entry(key).or_insert(0) += mult;
            }

            if !expected.is_integer() {
                // every (integer) observed count differs; first tuple witnesses
                let values = vec![0u32; t];
                let observed = counts.get(&values).copied().unwrap_or(0);
                return Ok(StrengthReport {
                    t,
                    holds: false,
                    witness: Some(StrengthWitness {
                        columns,
                        values,
                        observed,
                        expected,
                    }),
                });
            }

            // expected is a positive integer, so the tuple space is at most N
            let mut values = vec![0u32; t];
            loop {
                let observed = counts.get(&values).copied().unwrap_or(0);
                if BigRational::from_integer(BigInt::from(observed)) != expected {
                    return Ok(StrengthReport {
                        t,
                        holds: false,
                        witness: Some(StrengthWitness {
                            columns,
                            values,
                            observed,
                            expected,
                        }),
                    });
                }
                // odometer over the projected alphabet
                let mut i = t;
                let mut done = false;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    values[i] += 1;
                    if values[i] < self.alphabet.level(columns[i]) {
                        break;
                    }
                    values[i] = 0;
                }
                if done {
                    break;
                }
            }
        }
        Ok(StrengthReport {
            t,
            holds: true,
            witness: None,
        })
    }

    /// Largest `t` for which [`check_strength`](Self::check_strength) holds.
    /// Strength is downward closed, so the scan stops at the first failure.
    pub fn max_strength(&self) -> Result<usize> {
        let mut best = 0;
        for t in 1..=self.alphabet.len() {
            if self.check_strength(t)?.holds {
                best = t;
            } else {
                break;
            }
        }
        Ok(best)
    }

    /// Parses the OA text format: first content line `levels q1 ... qn`, then
    /// one row per line with an optional `x <mult>` suffix; `#` starts a
    /// comment.
    pub fn from_oa_text(text: &str) -> Result<Self> {
        let mut array: Option<ArrayMultiset> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            match &mut array {
                None => {
                    let rest = line.strip_prefix("levels").ok_or(Error::Parse {
                        line: lineno,
                        msg: "expected a `levels q1 q2 ...` header".into(),
                    })?;
                    let alphabet = MixedAlphabet::parse(rest)?;
                    array = Some(ArrayMultiset::new(alphabet));
                }
                Some(array) => {
                    let mut tokens: Vec<&str> = line.split_whitespace().collect();
                    let mut mult = 1u64;
                    if tokens.len() >= 2 && tokens[tokens.len() - 2] == "x" {
                        mult = tokens[tokens.len() - 1].parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad multiplicity {:?}", tokens[tokens.len() - 1]),
                        })?;
                        if mult == 0 {
                            return Err(Error::Parse {
                                line: lineno,
                                msg: "multiplicity must be positive".into(),
                            });
                        }
                        tokens.truncate(tokens.len() - 2);
                    }
                    if tokens.len() != array.alphabet.len() {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!(
                                "expected {} symbols, found {}",
                                array.alphabet.len(),
                                tokens.len()
                            ),
                        });
                    }
                    let symbols: Vec<u32> = tokens
                        .iter()
                        .map(|tok| {
                            tok.parse().map_err(|_| Error::Parse {
                                line: lineno,
                                msg: format!("bad symbol {tok:?}"),
                            })
                        })
                        .collect::<Result<_>>()?;
                    let word = Word::new(symbols);
                    if !array.alphabet.contains(&word) {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("symbol out of range in row {word}"),
                        });
                    }
                    array.insert(word, mult)?;
                }
            }
        }
        let array = array.ok_or(Error::Parse {
            line: 0,
            msg: "missing `levels` header".into(),
        })?;
        if array.runs == 0 {
            return Err(Error::EmptyArray);
        }
        Ok(array)
    }

    /// Renders the OA text format; inverse of [`from_oa_text`](Self::from_oa_text).
    pub fn to_oa_text(&self) -> String {
        let mut out = String::from("levels ");
        out.push_str(
            &self
                .alphabet
                .levels()
                .iter()
                .map(|q| q.to_string())
                .join(" "),
        );
        out.push('\n');
        for (word, mult) in self.rows() {
            out.push_str(&word.to_string());
            if mult > 1 {
                out.push_str(&format!(" x {mult}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Outcome of a strength check.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthReport {
    pub t: usize,
    pub holds: bool,
    pub witness: Option<StrengthWitness>,
}

/// Lexicographically first failing projection: the column set, value tuple,
/// observed count, and exact expected count.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthWitness {
    pub columns: Vec<usize>,
    pub values: Vec<u32>,
    pub observed: u64,
    pub expected: BigRational,
}

/// True when the raw bound is positive and `N` fails the `Q_t | N`
/// divisibility that any strength-`t` array must satisfy.
pub fn violates_qt_divisibility(array: &ArrayMultiset, t: usize) -> Result<bool> {
    let qt = array.alphabet().q_t_modulus(t)?;
    Ok(!(BigInt::from(array.runs()) % &qt).is_zero())
}
