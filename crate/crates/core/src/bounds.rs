//! Lower bounds on the size of a strength-`t` array, all in exact rational
//! arithmetic: the harmonic-mean bound, its pure-level specialization, the
//! min/mean/max comparison bound, the generic design bound, and the `Q_t`
//! rounding. Attainment is an exact equality test, never a float comparison.

use num::{BigInt, BigRational, One, Zero};

use crate::alphabet::{ArrayMultiset, MixedAlphabet};
use crate::error::{Error, Result};
use crate::multigraph::{CrReport, MultigraphParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `prod q_i (1 - (1 - 1/q) n/(t+1))` with `q` the harmonic mean.
    HarmonicMean,
    /// Pure-level form `q^n (1 - (1 - 1/q) n/(t+1))`.
    Pure,
    /// `q_min^n (1 - (n q~ - n)/(n q~ + (t+1-n) q_max))`, valid only when the
    /// denominator is positive.
    MinMeanMax,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            BoundKind::HarmonicMean => "harmonic-mean",
            BoundKind::Pure => "pure-level",
            BoundKind::MinMeanMax => "min-mean-max",
        };
        f.write_str(name)
    }
}

/// Parameter echo accompanying every bound value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    pub n: usize,
    pub t: usize,
    pub harmonic_mean: BigRational,
    pub min_level: u32,
    pub arithmetic_mean: BigRational,
    pub max_level: u32,
}

impl BoundParams {
    fn of(alphabet: &MixedAlphabet, t: usize) -> Self {
        let n = alphabet.len();
        let sum: u64 = alphabet.levels().iter().map(|&q| u64::from(q)).sum();
        Self {
            n,
            t,
            harmonic_mean: alphabet.harmonic_mean(),
            min_level: *alphabet.levels().iter().min().expect("nonempty"),
            arithmetic_mean: BigRational::new(BigInt::from(sum), BigInt::from(n)),
            max_level: *alphabet.levels().iter().max().expect("nonempty"),
        }
    }
}

/// A lower bound on `N`. `raw` is the exact value (possibly nonpositive, in
/// which case the bound is trivial); `rounded` lifts it to the next multiple
/// of `Q_t`, which is also the floor when the raw value is nonpositive.
/// `applicable` is false when the bound's side condition fails; `raw` and
/// `rounded` are absent in that case.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub raw: Option<BigRational>,
    pub rounded: Option<BigInt>,
    pub applicable: bool,
    pub params: BoundParams,
}

impl BoundReport {
    pub fn raw(&self) -> &BigRational {
        self.raw.as_ref().expect("bound is applicable")
    }
}

/// `N >= q_1 ... q_n (1 - (1 - 1/q) n/(t+1))`, `1/q = (1/n) sum 1/q_i`.
pub fn bf_mixed(alphabet: &MixedAlphabet, t: usize) -> Result<BoundReport> {
    let n = alphabet.len();
    if t < 1 || t > n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    let inv_sum: BigRational = alphabet
        .levels()
        .iter()
        .map(|&q| BigRational::new(BigInt::one(), BigInt::from(q)))
        .sum();
    let n_rat = BigRational::from_integer(BigInt::from(n));
    let one = BigRational::one();
    // 1 - (1 - 1/q) n/(t+1)  with  (1 - 1/q) = 1 - inv_sum/n
    let shortfall = (&one - inv_sum / &n_rat) * &n_rat
        / BigRational::from_integer(BigInt::from(t as u64 + 1));
    let raw = BigRational::from_integer(alphabet.word_count()) * (one - shortfall);
    let rounded = rounded_bound(alphabet, t, &raw)?;
    Ok(BoundReport {
        kind: BoundKind::HarmonicMean,
        raw: Some(raw),
        rounded: Some(rounded),
        applicable: true,
        params: BoundParams::of(alphabet, t),
    })
}

/// Pure-level bound `N >= q^n (1 - (1 - 1/q) n/(t+1))`, computed from its
/// own formula; agrees exactly with [`bf_mixed`] on a pure alphabet.
pub fn bf_pure(n: usize, q: u32, t: usize) -> Result<BoundReport> {
    let alphabet = MixedAlphabet::pure(n, q)?;
    if t < 1 || t > n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    let q_rat = BigRational::from_integer(BigInt::from(q));
    let one = BigRational::one();
    let raw = BigRational::from_integer(BigInt::from(q).pow(n as u32))
        * (&one
            - (&one - one.clone() / q_rat)
                * BigRational::new(BigInt::from(n), BigInt::from(t as u64 + 1)));
    let rounded = rounded_bound(&alphabet, t, &raw)?;
    Ok(BoundReport {
        kind: BoundKind::Pure,
        raw: Some(raw),
        rounded: Some(rounded),
        applicable: true,
        params: BoundParams::of(&alphabet, t),
    })
}

/// `N >= q_min^n (1 - (n q~ - n)/(n q~ + (t+1-n) q_max))` whenever the
/// denominator is positive; inapplicable otherwise.
pub fn diestelkamp(alphabet: &MixedAlphabet, t: usize) -> Result<BoundReport> {
    let n = alphabet.len();
    if t < 1 || t > n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    let params = BoundParams::of(alphabet, t);
    let n_rat = BigRational::from_integer(BigInt::from(n));
    let q_max = BigRational::from_integer(BigInt::from(params.max_level));
    let denom = &n_rat * &params.arithmetic_mean
        + BigRational::from_integer(BigInt::from(t as i64 + 1 - n as i64)) * q_max;
    if denom <= BigRational::zero() {
        return Ok(BoundReport {
            kind: BoundKind::MinMeanMax,
            raw: None,
            rounded: None,
            applicable: false,
            params,
        });
    }
    let numer = &n_rat * &params.arithmetic_mean - &n_rat;
    let raw = BigRational::from_integer(BigInt::from(params.min_level).pow(n as u32))
        * (BigRational::one() - numer / denom);
    let rounded = rounded_bound(alphabet, t, &raw)?;
    Ok(BoundReport {
        kind: BoundKind::MinMeanMax,
        raw: Some(raw),
        rounded: Some(rounded),
        applicable: true,
        params,
    })
}

/// Generic design bound `|C| >= |V| (-theta)/(k - theta)` for an algebraic
/// `t`-design in a `k`-regular graph whose `(t+1)`-st eigenvalue is `theta`.
pub fn generic_design_bound(k: &BigInt, theta: &BigInt, v_size: &BigInt) -> Result<BigRational> {
    if k <= theta {
        return Err(Error::DegenerateDesignBound {
            k: k.to_string(),
            theta: theta.to_string(),
        });
    }
    Ok(BigRational::new(v_size * -theta, k - theta))
}

/// Rounds a raw bound up to the next multiple of `Q_t`; a nonpositive raw
/// value still yields the divisibility floor `N >= Q_t`.
pub fn rounded_bound(alphabet: &MixedAlphabet, t: usize, raw: &BigRational) -> Result<BigInt> {
    let qt = alphabet.q_t_modulus(t)?;
    if raw <= &BigRational::zero() {
        return Ok(qt);
    }
    let quotient = raw / BigRational::from_integer(qt.clone());
    Ok(quotient.ceil().to_integer() * qt)
}

/// Structural checks run when an array attains the harmonic-mean bound: by
/// the attainment characterization it must be a simple independent set that
/// is completely regular with intersection array `{k; -theta_{t+1}}`.
#[derive(Debug, Clone)]
pub struct StructureChecks {
    pub simple: bool,
    pub independent: bool,
    pub expected_b: i64,
    pub expected_c: i64,
    pub cr: Option<CrReport>,
    /// All structural predictions confirmed.
    pub consistent: bool,
}

/// Bound-attainment verdict for an array already known to have strength `t`.
#[derive(Debug, Clone)]
pub struct TightnessVerdict {
    pub runs: u64,
    pub bound: BigRational,
    pub attains: bool,
    pub structure: Option<StructureChecks>,
}

/// Requires `check_strength(array, t)` to hold. Reports `N`, the exact
/// harmonic-mean bound, and—on exact attainment—the structural checks.
pub fn tightness_verdict(array: &ArrayMultiset, t: usize, force: bool) -> Result<TightnessVerdict> {
    if !array.check_strength(t)?.holds {
        return Err(Error::StrengthPreconditionFailed { t });
    }
    let bound = bf_mixed(array.alphabet(), t)?.raw().clone();
    let attains = BigRational::from_integer(BigInt::from(array.runs())) == bound;
    if !attains {
        return Ok(TightnessVerdict {
            runs: array.runs(),
            bound,
            attains,
            structure: None,
        });
    }
    let graph = MultigraphParams::new(array.alphabet())?;
    let expected_b = graph.degree();
    let expected_c = -graph.eigenvalue(t + 1)?;
    let simple = array.is_simple();
    let independent = graph.is_independent(array)?;
    let cr = if simple {
        Some(graph.check_cr1(array, force)?)
    } else {
        None
    };
    let consistent = simple
        && independent
        && cr
            .as_ref()
            .map(|r| r.is_cr && r.b == Some(expected_b) && r.c == Some(expected_c))
            .unwrap_or(false);
    Ok(TightnessVerdict {
        runs: array.runs(),
        bound,
        attains,
        structure: Some(StructureChecks {
            simple,
            independent,
            expected_b,
            expected_c,
            cr,
            consistent,
        }),
    })
}
