//! Character sums over the mixed product group and the algebraic design test.
//!
//! The characters `chi_b(x) = prod_i xi_i^{b_i x_i}` (with `xi_i` a primitive
//! `q_i`-th root of unity) form an orthogonal eigenbasis of the product
//! multigraph; a multiset is an algebraic `t`-design exactly when its
//! multiplicity function is orthogonal to every character of weight `1..=t`.
//!
//! Sums are evaluated in double-precision complex arithmetic. The exact
//! counting check in [`crate::alphabet::ArrayMultiset::check_strength`] is
//! the authoritative verdict whenever the two are combined.

use itertools::Itertools;
use num::complex::Complex64;
use num::{BigInt, One};

use crate::alphabet::{ArrayMultiset, MixedAlphabet, Word};
use crate::error::{check_guard, Error, Result};

/// Character enumeration ceiling for [`is_algebraic_design`]; forcing raises
/// it to [`CHARACTER_HARD_CAP`].
pub const CHARACTER_GUARD: u128 = 10_000_000;
const CHARACTER_HARD_CAP: u128 = 100_000_000;

/// Index `b = (b_1, ..., b_n)` of a product-group character, `b_i` in `[0, q_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterIndex {
    indices: Vec<u32>,
}

impl CharacterIndex {
    pub fn new(indices: Vec<u32>, alphabet: &MixedAlphabet) -> Result<Self> {
        if indices.len() != alphabet.len()
            || indices
                .iter()
                .zip(alphabet.levels())
                .any(|(&b, &q)| b >= q)
        {
            return Err(Error::InvalidWord { word: indices });
        }
        Ok(Self { indices })
    }

    pub fn zero(alphabet: &MixedAlphabet) -> Self {
        Self {
            indices: vec![0; alphabet.len()],
        }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Number of nonzero components; the eigenvalue ladder index.
    pub fn weight(&self) -> usize {
        self.indices.iter().filter(|&&b| b != 0).count()
    }
}

/// Evaluates all characters through a common root of unity of order
/// `Q = lcm(q_1, ..., q_n)`: each factor `xi_i^{b_i x_i}` contributes the
/// exponent `(Q/q_i) (b_i x_i mod q_i)` so a row costs one table lookup.
struct CharacterEvaluator {
    q_lcm: u64,
    roots: Option<Vec<Complex64>>,
}

const ROOT_TABLE_LIMIT: u64 = 1 << 16;

impl CharacterEvaluator {
    fn new(alphabet: &MixedAlphabet) -> Self {
        let q_lcm = alphabet.level_lcm() as u64;
        let roots = (q_lcm <= ROOT_TABLE_LIMIT).then(|| {
            (0..q_lcm)
                .map(|e| {
                    Complex64::from_polar(
                        1.0,
                        std::f64::consts::TAU * (e as f64) / (q_lcm as f64),
                    )
                })
                .collect()
        });
        Self { q_lcm, roots }
    }

    fn root(&self, exponent: u64) -> Complex64 {
        match &self.roots {
            Some(table) => table[exponent as usize],
            None => Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * (exponent as f64) / (self.q_lcm as f64),
            ),
        }
    }

    /// Per-position exponent contributions for a fixed character index.
    fn contributions(&self, alphabet: &MixedAlphabet, chi: &CharacterIndex) -> Vec<Vec<u64>> {
        alphabet
            .levels()
            .iter()
            .zip(chi.indices())
            .map(|(&q, &b)| {
                let scale = self.q_lcm / u64::from(q);
                (0..q)
                    .map(|x| scale * ((u64::from(b) * u64::from(x)) % u64::from(q)))
                    .collect()
            })
            .collect()
    }

    fn sum(&self, array: &ArrayMultiset, contributions: &[Vec<u64>]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (word, mult) in array.rows() {
            let mut e: u64 = 0;
            for (i, &x) in word.symbols().iter().enumerate() {
                e = (e + contributions[i][x as usize]) % self.q_lcm;
            }
            acc += (mult as f64) * self.root(e);
        }
        acc
    }
}

/// `sum over rows (with multiplicity) of prod_i xi_i^{b_i x_i}`.
pub fn character_sum(array: &ArrayMultiset, chi: &CharacterIndex) -> Complex64 {
    assert_eq!(chi.indices().len(), array.alphabet().len());
    let evaluator = CharacterEvaluator::new(array.alphabet());
    let contributions = evaluator.contributions(array.alphabet(), chi);
    evaluator.sum(array, &contributions)
}

/// Value of a single character at one word.
pub fn character_value(alphabet: &MixedAlphabet, chi: &CharacterIndex, word: &Word) -> Complex64 {
    let q_lcm = alphabet.level_lcm() as u64;
    let mut e: u64 = 0;
    for ((&x, &b), &q) in word
        .symbols()
        .iter()
        .zip(chi.indices())
        .zip(alphabet.levels())
    {
        let scale = q_lcm / u64::from(q);
        e = (e + scale * ((u64::from(b) * u64::from(x)) % u64::from(q))) % q_lcm;
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * (e as f64) / (q_lcm as f64))
}

/// Number of weight-`w` characters: the degree-`w` elementary symmetric
/// polynomial in `(q_1 - 1, ..., q_n - 1)`.
pub fn count_characters_of_weight(alphabet: &MixedAlphabet, w: usize) -> BigInt {
    let mut coeffs = vec![BigInt::one()];
    for &q in alphabet.levels() {
        let factor = BigInt::from(q - 1);
        let mut next = vec![BigInt::ZERO; coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c * &factor;
        }
        coeffs = next;
    }
    coeffs.get(w).cloned().unwrap_or(BigInt::ZERO)
}

/// Iterates every character of the given weight: support sets in
/// lexicographic order, then nonzero values per position.
pub fn characters_of_weight(
    alphabet: &MixedAlphabet,
    w: usize,
) -> impl Iterator<Item = CharacterIndex> + '_ {
    let n = alphabet.len();
    (0..n).combinations(w).flat_map(move |support| {
        let qs: Vec<u32> = support.iter().map(|&i| alphabet.level(i)).collect();
        NonzeroValues::new(qs).map(move |values| {
            let mut indices = vec![0u32; n];
            for (&pos, &v) in support.iter().zip(&values) {
                indices[pos] = v;
            }
            CharacterIndex { indices }
        })
    })
}

/// Odometer over value tuples with each component in `1..q_i`.
struct NonzeroValues {
    qs: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl NonzeroValues {
    fn new(qs: Vec<u32>) -> Self {
        let current = Some(vec![1; qs.len()]);
        Self { qs, current }
    }
}

impl Iterator for NonzeroValues {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let values = self.current.as_mut()?;
        let result = values.clone();
        let mut i = values.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            values[i] += 1;
            if values[i] < self.qs[i] {
                break;
            }
            values[i] = 1;
        }
        Some(result)
    }
}

/// Per-weight maxima of `|(f_C, chi_b)|` over all characters of that weight;
/// entry 0 is always `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierProfile {
    pub max_modulus: Vec<f64>,
}

impl FourierProfile {
    pub fn weight_max(&self, w: usize) -> f64 {
        self.max_modulus[w]
    }
}

/// Outcome of the algebraic design test up to weight `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignReport {
    pub t: usize,
    pub tol: f64,
    pub is_design: bool,
    pub profile: FourierProfile,
}

/// Tests whether every character of weight `1..=t` sums to (numerically)
/// zero over the array: `|sum| <= tol * N` per character. Enumeration of
/// more than [`CHARACTER_GUARD`] characters is refused unless forced.
pub fn is_algebraic_design(
    array: &ArrayMultiset,
    t: usize,
    tol: f64,
    force: bool,
) -> Result<DesignReport> {
    let alphabet = array.alphabet();
    let n = alphabet.len();
    if t > n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    if array.runs() == 0 {
        return Err(Error::EmptyArray);
    }
    let total: BigInt = (1..=t)
        .map(|w| count_characters_of_weight(alphabet, w))
        .sum();
    check_guard(
        "character enumeration",
        num::ToPrimitive::to_u128(&total).unwrap_or(u128::MAX),
        CHARACTER_GUARD,
        CHARACTER_HARD_CAP,
        force,
    )?;

    let evaluator = CharacterEvaluator::new(alphabet);
    let runs = array.runs() as f64;
    let mut max_modulus = vec![0.0f64; t + 1];
    max_modulus[0] = runs; // the all-ones character sums the multiplicities
    let mut is_design = true;
    for w in 1..=t {
        let mut worst = 0.0f64;
        for chi in characters_of_weight(alphabet, w) {
            let contributions = evaluator.contributions(alphabet, &chi);
            let modulus = evaluator.sum(array, &contributions).norm();
            if modulus > worst {
                worst = modulus;
            }
        }
        max_modulus[w] = worst;
        if worst > tol * runs {
            is_design = false;
        }
    }
    Ok(DesignReport {
        t,
        tol,
        is_design,
        profile: FourierProfile { max_modulus },
    })
}
