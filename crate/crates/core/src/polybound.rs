//! Distance polynomials of the pure-level Hamming graph H(n,q) and the
//! polynomial refinement of the design bound: for a nonnegative combination
//! `P = sum alpha_i K^(i)` with `mu = max{P(theta_{t+1}), ..., P(theta_n)}`
//! negative, every algebraic t-design satisfies
//! `|C|/|V| >= -mu/(P(k) - mu)`.
//!
//! The best such bound is a tiny linear program — minimize `mu` over the
//! `alpha_i` — solved here in exact rationals so optimality and the
//! reproduction of the plain design bound at degree 1 are exact statements,
//! not float coincidences.

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::simplex::{solve_min, Constraint, LpOutcome, Relation};

/// Eigenvalue lattice of H(n,q): `theta_j = (q-1)n - qj`, `j = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KrawtchoukContext {
    n: usize,
    q: u32,
}

impl KrawtchoukContext {
    pub fn new(n: usize, q: u32) -> Result<Self> {
        if n == 0 || q < 2 {
            return Err(Error::InvalidLevels(format!(
                "H(n,q) needs n >= 1 and q >= 2, got n={n} q={q}"
            )));
        }
        Ok(Self { n, q })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Graph diameter; also the number of nontrivial eigenvalues.
    pub fn diameter(&self) -> usize {
        self.n
    }

    pub fn eigenvalue(&self, j: usize) -> Result<i64> {
        if j > self.n {
            return Err(Error::EigenvalueOutOfRange { w: j, n: self.n });
        }
        Ok((i64::from(self.q) - 1) * self.n as i64 - i64::from(self.q) * j as i64)
    }

    pub fn eigenvalues(&self) -> Vec<i64> {
        (0..=self.n)
            .map(|j| self.eigenvalue(j).expect("j <= n"))
            .collect()
    }
}

fn generalized_binomial(x: i64, j: usize) -> BigRational {
    let mut result = BigRational::one();
    for i in 0..j {
        result *= BigRational::new(BigInt::from(x - i as i64), BigInt::from(i as i64 + 1));
    }
    result
}

/// Krawtchouk polynomial
/// `P_w(x; n, q) = sum_j (-1)^j (q-1)^{w-j} C(x,j) C(n-x, w-j)`,
/// with generalized binomials so any integer `x` is legal.
pub fn krawtchouk(w: usize, x: i64, n: usize, q: u32) -> BigRational {
    let mut sum = BigRational::zero();
    for j in 0..=w {
        let mut term = BigRational::from_integer(BigInt::from(q - 1).pow((w - j) as u32));
        if j % 2 == 1 {
            term = -term;
        }
        term *= generalized_binomial(x, j);
        term *= generalized_binomial(n as i64 - x, w - j);
        sum += term;
    }
    sum
}

/// Distance polynomial by eigenvalue: `K^(i)(theta) = P_i(P_1^{-1}(theta))`
/// with `P_1^{-1}(y) = ((q-1)n - y)/q`; `theta` must lie on the lattice.
pub fn distance_poly_value(degree: usize, theta: i64, n: usize, q: u32) -> Result<BigRational> {
    let numerator = (i64::from(q) - 1) * n as i64 - theta;
    if numerator.rem_euclid(i64::from(q)) != 0 {
        return Err(Error::OffLattice { value: theta, n, q });
    }
    Ok(krawtchouk(degree, numerator.div_euclid(i64::from(q)), n, q))
}

/// Evaluation of one polynomial combination together with the bound it
/// implies. `alpha[i]` is the coefficient of `K^(i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBoundResult {
    pub n: usize,
    pub q: u32,
    pub t: usize,
    pub alpha: Vec<BigRational>,
    /// `P(theta_j)` for `j = 0..=n`.
    pub values: Vec<BigRational>,
    /// `max { P(theta_j) : j = t+1..=n }`.
    pub mu: BigRational,
    /// `-mu / (P(theta_0) - mu)` when `mu < 0`; `None` marks a trivial bound.
    pub ratio: Option<BigRational>,
    /// `ratio * q^n`, the implied lower bound on `N`.
    pub bound_n: Option<BigRational>,
    /// The maximum is attained at `j = t+1` only; attaining designs are then
    /// covering-radius-1 completely regular.
    pub unique_maximizer: bool,
}

impl PolyBoundResult {
    pub fn is_trivial(&self) -> bool {
        self.ratio.is_none()
    }
}

/// Evaluates the bound for a fixed coefficient vector `alpha` (length `n`,
/// entry `i` multiplying `K^(i+1)`), all entries nonnegative, not all zero.
pub fn eval_poly_bound(
    alpha: &[BigRational],
    n: usize,
    q: u32,
    t: usize,
) -> Result<PolyBoundResult> {
    let context = KrawtchoukContext::new(n, q)?;
    if t >= n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    if alpha.len() != n {
        return Err(Error::InvalidCombination(format!(
            "expected {n} coefficients, got {}",
            alpha.len()
        )));
    }
    if alpha.iter().any(|a| a < &BigRational::zero()) {
        return Err(Error::InvalidCombination(
            "coefficients must be nonnegative".into(),
        ));
    }
    if alpha.iter().all(|a| a.is_zero()) {
        return Err(Error::InvalidCombination(
            "at least one coefficient must be positive".into(),
        ));
    }
    // P(theta_j) = sum_i alpha_i K^(i)(theta_j) = sum_i alpha_i P_i(j)
    let values: Vec<BigRational> = (0..=n)
        .map(|j| {
            alpha
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| a * krawtchouk(i + 1, j as i64, n, q))
                .sum()
        })
        .collect();
    let mu = values[t + 1..]
        .iter()
        .max()
        .expect("t < n leaves at least one value")
        .clone();
    let unique_maximizer =
        values[t + 1] == mu && values[t + 2..].iter().all(|v| v < &mu);
    let (ratio, bound_n) = if mu < BigRational::zero() {
        let ratio = -&mu / (&values[0] - &mu);
        let bound = &ratio * BigRational::from_integer(BigInt::from(q).pow(n as u32));
        (Some(ratio), Some(bound))
    } else {
        (None, None)
    };
    let _ = context;
    Ok(PolyBoundResult {
        n,
        q,
        t,
        alpha: alpha.to_vec(),
        values,
        mu,
        ratio,
        bound_n,
        unique_maximizer,
    })
}

/// Solves, in exact rationals, the linear program
///
/// ```text
/// minimize mu
/// s.t.     sum_{i in degrees} alpha_i K^(i)(theta_j) <= mu   (j = t+1..=n)
///          sum_{i in degrees} alpha_i K^(i)(theta_0)  = 1
///          alpha_i >= 0
/// ```
///
/// The normalization fixes the free positive scale of `P` (the bound ratio
/// is scale-invariant), keeping the rationals small.
pub fn lp_bound(n: usize, q: u32, t: usize, degrees: &[usize]) -> Result<PolyBoundResult> {
    let context = KrawtchoukContext::new(n, q)?;
    if t >= n {
        return Err(Error::StrengthOutOfRange { t, n });
    }
    let mut degrees: Vec<usize> = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    if degrees.is_empty() {
        return Err(Error::InvalidCombination("no degrees given".into()));
    }
    if degrees.iter().any(|&d| d == 0 || d > n) {
        return Err(Error::InvalidCombination(format!(
            "degrees must lie in 1..={n}"
        )));
    }

    // variables: alpha_i (one per degree), then mu+ and mu- (mu is free)
    let d = degrees.len();
    let nv = d + 2;
    let mut constraints = Vec::new();
    for j in t + 1..=n {
        let mut coeffs = vec![BigRational::zero(); nv];
        for (idx, &deg) in degrees.iter().enumerate() {
            coeffs[idx] = krawtchouk(deg, j as i64, n, q);
        }
        coeffs[d] = -BigRational::one();
        coeffs[d + 1] = BigRational::one();
        constraints.push(Constraint {
            coeffs,
            relation: Relation::Le,
            rhs: BigRational::zero(),
        });
    }
    let mut coeffs = vec![BigRational::zero(); nv];
    for (idx, &deg) in degrees.iter().enumerate() {
        coeffs[idx] = krawtchouk(deg, 0, n, q);
    }
    constraints.push(Constraint {
        coeffs,
        relation: Relation::Eq,
        rhs: BigRational::one(),
    });
    let mut objective = vec![BigRational::zero(); nv];
    objective[d] = BigRational::one();
    objective[d + 1] = -BigRational::one();

    let (x, lp_mu) = match solve_min(&objective, &constraints) {
        LpOutcome::Optimal { x, objective } => (x, objective),
        LpOutcome::Infeasible => {
            return Err(Error::Internal(
                "normalized polynomial program reported infeasible".into(),
            ))
        }
        LpOutcome::Unbounded => {
            return Err(Error::Internal(
                "normalized polynomial program reported unbounded".into(),
            ))
        }
    };

    let mut alpha = vec![BigRational::zero(); n];
    for (idx, &deg) in degrees.iter().enumerate() {
        alpha[deg - 1] = x[idx].clone();
    }
    let result = eval_poly_bound(&alpha, n, q, t)?;
    if result.mu != lp_mu {
        return Err(Error::Internal(format!(
            "optimizer value {lp_mu} disagrees with re-evaluated mu {}",
            result.mu
        )));
    }
    let _ = context;
    Ok(result)
}

/// Closed form of the hand-built cubic combination for H(2m,2) at
/// `t = m-1`: the density bound `1/(m(5/sqrt(3)+2))`, about `0.2046/m`.
pub fn cubic_reference_bound(m: u64) -> f64 {
    1.0 / (m as f64 * (5.0 / 3f64.sqrt() + 2.0))
}

/// The cubic combination `K^(3) + beta K^(2) + (beta^2/2 + m - 1/3) K^(1)`
/// with `beta = m/sqrt(3)` replaced by a rational approximation accurate to
/// better than 1e-9; returns the full coefficient vector for `n = 2m`.
/// Needs `m >= 2` so that degree 3 exists on H(2m,2).
pub fn cubic_combination(m: u64) -> Vec<BigRational> {
    assert!(m >= 2, "the cubic combination needs diameter 2m >= 4");
    let n = 2 * m as usize;
    let scale: i64 = 1_000_000_000_000;
    let beta_scaled = ((m as f64) / 3f64.sqrt() * scale as f64).round() as i64;
    let beta = BigRational::new(BigInt::from(beta_scaled), BigInt::from(scale));
    let mut alpha = vec![BigRational::zero(); n];
    alpha[0] = &beta * &beta / BigRational::from_integer(BigInt::from(2))
        + BigRational::from_integer(BigInt::from(m))
        - BigRational::new(BigInt::one(), BigInt::from(3));
    alpha[1] = beta;
    alpha[2] = BigRational::one();
    alpha
}

/// Convenience: the exact optimal density ratio of [`lp_bound`], when the
/// bound is nontrivial.
pub fn lp_ratio(result: &PolyBoundResult) -> Option<f64> {
    result.ratio.as_ref().and_then(|r| r.to_f64())
}
