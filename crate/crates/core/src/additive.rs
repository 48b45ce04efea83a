//! GF(p) check matrices with block structure, null-space expansion into a
//! mixed-alphabet array, and the audit of the six equivalent
//! characterizations of additive arrays attaining the harmonic-mean bound.
//!
//! A check matrix has columns grouped into blocks of sizes `1..=s`; a block
//! of size `i` carries one symbol from the alphabet `p^i` (a block vector is
//! read as big-endian base-`p` notation). The audited assertions:
//!
//! 1. the null-space is an array attaining the bound at strength `t`,
//! 2. it has strength `t = (mu + k)/p^s - 1`,
//! 3. the row space is an alphabet-effective one-weight code of block weight
//!    `mu p^{m-s}`,
//! 4. the block spans, each repeated `p^{s-i}` times, cover every nonzero
//!    vector of GF(p)^m exactly `mu` times,
//! 5. their duals cover every nonzero vector exactly `nu` times.
//!
//! The audit reports each verdict and whether they are unanimous — they must
//! be, so a split verdict signals a bug rather than a property of the input.

use std::collections::HashSet;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use crate::alphabet::{ArrayMultiset, MixedAlphabet, StrengthReport, Word};
use crate::bounds::generic_design_bound;
use crate::error::{check_guard, Error, Result};
use crate::gf::{add_scaled_row, is_prime, GfMatrix};
use crate::multigraph::{CrReport, MultigraphParams};

/// Null-space enumeration ceiling (number of rows emitted); forcing raises
/// it to [`ENUMERATION_HARD_CAP`].
pub const ENUMERATION_GUARD: u128 = 1 << 24;
const ENUMERATION_HARD_CAP: u128 = 1 << 28;
/// Coverage-scan ceiling on `p^m` (and on `p^s` block multiplicities);
/// forcing raises it to [`COVERAGE_HARD_CAP`].
pub const COVERAGE_GUARD: u128 = 1 << 20;
const COVERAGE_HARD_CAP: u128 = 1 << 24;
/// Violation tables keep at most this many entries, in vector order.
pub const VIOLATION_CAP: usize = 1024;

/// Full-row-rank matrix over GF(p) with its column-block structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    p: u32,
    m: usize,
    block_sizes: Vec<usize>,
    rows: Vec<Vec<u32>>,
    s: usize,
}

impl CheckMatrix {
    pub fn new(p: u32, block_sizes: Vec<usize>, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(u64::from(p)));
        }
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::InvalidLevels("block sizes must be positive".into()));
        }
        let m = rows.len();
        if m == 0 {
            return Err(Error::RankDeficient { rank: 0, expected: 1 });
        }
        let cols: usize = block_sizes.iter().sum();
        for row in &rows {
            if row.len() != cols {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("expected {cols} columns, found {}", row.len()),
                });
            }
            if row.iter().any(|&x| x >= p) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("matrix entry out of range for GF({p})"),
                });
            }
        }
        let s = *block_sizes.iter().max().expect("nonempty");
        let matrix = Self {
            p,
            m,
            block_sizes,
            rows,
            s,
        };
        let rank = matrix.as_gf_matrix().rank();
        if rank != m {
            return Err(Error::RankDeficient { rank, expected: m });
        }
        Ok(matrix)
    }

    /// Text format: `p <prime> m <rows>`, then `blocks i1 i2 ...`, then `m`
    /// rows of space-separated GF(p) digits; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut block_sizes: Option<Vec<usize>> = None;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            if header.is_none() {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != 4 || tokens[0] != "p" || tokens[2] != "m" {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected header `p <prime> m <rows>`".into(),
                    });
                }
                let p = tokens[1].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad prime {:?}", tokens[1]),
                })?;
                let m = tokens[3].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad row count {:?}", tokens[3]),
                })?;
                header = Some((p, m));
            } else if block_sizes.is_none() {
                let rest = line.strip_prefix("blocks").ok_or(Error::Parse {
                    line: lineno,
                    msg: "expected `blocks i1 i2 ...`".into(),
                })?;
                let sizes: Vec<usize> = rest
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad block size {tok:?}"),
                        })
                    })
                    .collect::<Result<_>>()?;
                block_sizes = Some(sizes);
            } else {
                let row: Vec<u32> = line
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad digit {tok:?}"),
                        })
                    })
                    .collect::<Result<_>>()?;
                rows.push(row);
            }
        }
        let (p, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let block_sizes = block_sizes.ok_or(Error::Parse {
            line: 0,
            msg: "missing `blocks` line".into(),
        })?;
        if rows.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {m} matrix rows, found {}", rows.len()),
            });
        }
        Self::new(p, block_sizes, rows)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn row_count(&self) -> usize {
        self.m
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    /// Largest block size `s`; the common level lcm is `p^s`.
    pub fn max_block_size(&self) -> usize {
        self.s
    }

    pub fn column_count(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    fn as_gf_matrix(&self) -> GfMatrix {
        GfMatrix::new(
            self.p,
            self.m,
            self.column_count(),
            self.rows.iter().flatten().copied().collect(),
        )
    }

    fn block_offset(&self, index: usize) -> usize {
        self.block_sizes[..index].iter().sum()
    }

    /// Mixed alphabet of the null-space array: level `p^i` per size-`i`
    /// block, in block order.
    pub fn alphabet(&self) -> Result<MixedAlphabet> {
        let levels: Vec<u32> = self
            .block_sizes
            .iter()
            .map(|&b| {
                u32::try_from(b)
                    .ok()
                    .and_then(|b| self.p.checked_pow(b))
                    .ok_or(Error::Overflow("block level p^i"))
            })
            .collect::<Result<_>>()?;
        MixedAlphabet::new(levels)
    }

    /// Subspace of GF(p)^m spanned by the columns of one block.
    pub fn block_span(&self, index: usize) -> Result<Subspace> {
        if index >= self.block_sizes.len() {
            return Err(Error::BlockOutOfRange {
                index,
                count: self.block_sizes.len(),
            });
        }
        let offset = self.block_offset(index);
        let vectors: Vec<Vec<u32>> = (offset..offset + self.block_sizes[index])
            .map(|c| (0..self.m).map(|r| self.rows[r][c]).collect())
            .collect();
        Ok(Subspace::from_spanning(self.p, self.m, &vectors))
    }

    /// Expands the null-space into the mixed-alphabet array: one word per
    /// solution of `Hx = 0`, each size-`i` block read as a base-`p` symbol.
    pub fn null_space_array(&self, force: bool) -> Result<ArrayMultiset> {
        let alphabet = self.alphabet()?;
        let basis = self.as_gf_matrix().null_space_basis();
        let dim = basis.len();
        let count = (0..dim).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(self.p)));
        check_guard(
            "null-space enumeration",
            count.unwrap_or(u128::MAX),
            ENUMERATION_GUARD,
            ENUMERATION_HARD_CAP,
            force,
        )?;
        let mut array = ArrayMultiset::new(alphabet);
        let cols = self.column_count();
        let mut x = vec![0u32; cols];
        let mut coeff = vec![0u32; dim];
        loop {
            array.insert(self.vector_to_word(&x), 1)?;
            // odometer over the coefficient space; every digit change adds
            // one copy of the corresponding basis vector (a rollover from
            // p-1 to 0 is also +1 mod p)
            let mut i = dim;
            loop {
                if i == 0 {
                    return Ok(array);
                }
                i -= 1;
                add_scaled_row(&mut x, &basis[i], 1, self.p);
                coeff[i] += 1;
                if coeff[i] < self.p {
                    break;
                }
                coeff[i] = 0;
            }
        }
    }

    fn vector_to_word(&self, x: &[u32]) -> Word {
        let mut symbols = Vec::with_capacity(self.block_sizes.len());
        let mut offset = 0;
        for &b in &self.block_sizes {
            let mut v: u64 = 0;
            for j in 0..b {
                v = v * u64::from(self.p) + u64::from(x[offset + j]);
            }
            symbols.push(v as u32);
            offset += b;
        }
        Word::new(symbols)
    }

    /// Derived audit parameters.
    pub fn parameters(&self) -> Result<AdditiveParameters> {
        let p = BigInt::from(self.p);
        let p_s = p.pow(self.s as u32);
        let p_m = p.pow(self.m as u32);
        let k: BigInt = self
            .block_sizes
            .iter()
            .map(|&b| &p_s - p.pow((self.s - b) as u32))
            .sum();
        let mu = BigRational::new(k.clone(), &p_m - BigInt::one());
        let blocks = BigInt::from(self.block_sizes.len());
        // nu = n_1 + ... + n_s - p^{m-s} mu, kept rational (m may be < s)
        let nu = BigRational::from_integer(blocks)
            - BigRational::new(&p_m * mu.numer(), &p_s * mu.denom());
        let one_weight = BigRational::new(&p_m * mu.numer(), &p_s * mu.denom());
        let lambda: BigInt = self
            .block_sizes
            .iter()
            .map(|&b| p.pow((self.s - b) as u32) - BigInt::one())
            .sum();
        let t_exact = (&mu + BigRational::from_integer(k.clone()))
            / BigRational::from_integer(p_s)
            - BigRational::one();
        let strength_t = if t_exact.is_integer() && t_exact >= BigRational::zero() {
            t_exact
                .to_integer()
                .to_usize()
                .filter(|&t| t <= self.block_sizes.len())
        } else {
            None
        };
        Ok(AdditiveParameters {
            p: self.p,
            m: self.m,
            s: self.s,
            factors: self.block_sizes.len(),
            k,
            mu,
            t_exact,
            strength_t,
            nu,
            one_weight,
            lambda,
        })
    }

    /// Coverage counts of the block spans, each taken `p^{s-i}` times, over
    /// the nonzero vectors of GF(p)^m.
    pub fn multispread_check(&self, force: bool) -> Result<MultispreadReport> {
        let params = self.parameters()?;
        let coverage = self.coverage(force, |index| {
            let span = self.block_span(index)?;
            let mult_exp = (self.s - self.block_sizes[index]) as u32;
            let mult = u64::from(self.p)
                .checked_pow(mult_exp)
                .ok_or(Error::Overflow("block multiplicity p^(s-i)"))?;
            check_guard(
                "block multiplicity p^(s-i)",
                u128::from(mult),
                COVERAGE_GUARD,
                COVERAGE_HARD_CAP,
                force,
            )?;
            Ok((span, mult))
        })?;
        let (uniform, violations) = split_violations(&coverage, &params.mu, self.p, self.m);
        Ok(MultispreadReport {
            mu: params.mu,
            is_mu_fold: uniform,
            lambda: params.lambda,
            violations,
        })
    }

    /// Coverage counts of the dual subspaces (each once) over the nonzero
    /// vectors of GF(p)^m.
    pub fn dual_partition_check(&self, force: bool) -> Result<DualPartitionReport> {
        let params = self.parameters()?;
        let coverage = self.coverage(force, |index| Ok((self.block_span(index)?.dual(), 1)))?;
        let (uniform, violations) = split_violations(&coverage, &params.nu, self.p, self.m);
        Ok(DualPartitionReport {
            nu: params.nu,
            is_nu_fold: uniform,
            violations,
        })
    }

    fn coverage<F>(&self, force: bool, subspace_of: F) -> Result<Vec<u64>>
    where
        F: Fn(usize) -> Result<(Subspace, u64)>,
    {
        let size = (0..self.m).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(self.p)));
        check_guard(
            "coverage scan p^m",
            size.unwrap_or(u128::MAX),
            COVERAGE_GUARD,
            COVERAGE_HARD_CAP,
            force,
        )?;
        let size = size.expect("within guard") as usize;
        let mut counts = vec![0u64; size];
        for index in 0..self.block_sizes.len() {
            let (subspace, mult) = subspace_of(index)?;
            for v in subspace.elements() {
                counts[encode_vector(&v, self.p)] += mult;
            }
        }
        Ok(counts)
    }

    /// Enumerates the row space `C^perp` and checks whether it is a
    /// one-weight code (constant number of nonzero blocks over nonzero
    /// codewords) of the expected weight, and alphabet-effective (each block
    /// realizes all `p^i` values across codewords).
    pub fn one_weight_check(&self, force: bool) -> Result<OneWeightReport> {
        let params = self.parameters()?;
        let size = (0..self.m).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(self.p)));
        check_guard(
            "row-space enumeration p^m",
            size.unwrap_or(u128::MAX),
            COVERAGE_GUARD,
            COVERAGE_HARD_CAP,
            force,
        )?;
        let cols = self.column_count();
        let blocks = self.block_sizes.len();
        let mut block_values: Vec<HashSet<u64>> = vec![HashSet::new(); blocks];
        let mut weights: HashSet<u64> = HashSet::new();
        let mut codeword = vec![0u32; cols];
        let mut coeff = vec![0u32; self.m];
        'outer: loop {
            if coeff.iter().any(|&c| c != 0) {
                let mut weight = 0u64;
                let mut offset = 0;
                for &b in &self.block_sizes {
                    if codeword[offset..offset + b].iter().any(|&x| x != 0) {
                        weight += 1;
                    }
                    offset += b;
                }
                weights.insert(weight);
            }
            let mut offset = 0;
            for (bi, &b) in self.block_sizes.iter().enumerate() {
                let mut v: u64 = 0;
                for j in 0..b {
                    v = v * u64::from(self.p) + u64::from(codeword[offset + j]);
                }
                block_values[bi].insert(v);
                offset += b;
            }
            let mut i = self.m;
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                add_scaled_row(&mut codeword, &self.rows[i], 1, self.p);
                coeff[i] += 1;
                if coeff[i] < self.p {
                    break;
                }
                coeff[i] = 0;
            }
        }
        let is_one_weight = weights.len() == 1;
        let weight = is_one_weight.then(|| *weights.iter().next().expect("nonempty"));
        let weight_matches = weight
            .map(|w| BigRational::from_integer(BigInt::from(w)) == params.one_weight)
            .unwrap_or(false);
        let alphabet_effective = self
            .block_sizes
            .iter()
            .zip(&block_values)
            .all(|(&b, values)| values.len() as u128 == u128::from(self.p).pow(b as u32));
        Ok(OneWeightReport {
            is_one_weight,
            weight,
            expected_weight: params.one_weight,
            weight_matches,
            alphabet_effective,
            verdict: is_one_weight && weight_matches && alphabet_effective,
        })
    }

    /// Runs all six equivalent checks and reports the verdicts.
    pub fn audit(&self, force: bool) -> Result<AdditiveAuditReport> {
        let params = self.parameters()?;
        let array = self.null_space_array(force)?;
        let graph = MultigraphParams::new(array.alphabet())?;
        debug_assert_eq!(BigInt::from(graph.degree()), params.k);

        // (i') strength t; (i) additionally exact attainment of the bound
        let strength = match params.strength_t {
            Some(t) => Some(array.check_strength(t)?),
            None => None,
        };
        let has_design_strength = strength.as_ref().map(|r| r.holds).unwrap_or(false);
        let attains_bound = match (&strength, params.strength_t) {
            (Some(report), Some(t)) if report.holds => {
                // bound via the design-bound identity, defined for all t >= 0
                let theta = BigInt::from(graph.degree())
                    - BigInt::from(t as i64 + 1) * BigInt::from(graph.level_lcm());
                let bound = generic_design_bound(
                    &BigInt::from(graph.degree()),
                    &theta,
                    &array.alphabet().word_count(),
                )?;
                BigRational::from_integer(BigInt::from(array.runs())) == bound
            }
            _ => false,
        };

        // (ii) completely regular with intersection array {k; mu}
        let cr = graph.check_cr1(&array, force)?;
        let completely_regular = cr.is_cr
            && cr.b == Some(graph.degree())
            && cr
                .c
                .map(|c| BigRational::from_integer(BigInt::from(c)) == params.mu)
                .unwrap_or(false);

        let one_weight = self.one_weight_check(force)?;
        let multispread = self.multispread_check(force)?;
        let dual_partition = self.dual_partition_check(force)?;

        let verdicts = AuditVerdicts {
            attains_bound,
            has_design_strength,
            completely_regular,
            one_weight: one_weight.verdict,
            multispread: multispread.is_mu_fold,
            dual_partition: dual_partition.is_nu_fold,
        };
        Ok(AdditiveAuditReport {
            params,
            strength,
            cr,
            one_weight,
            multispread,
            dual_partition,
            unanimous: verdicts.unanimous(),
            verdicts,
        })
    }
}

fn encode_vector(v: &[u32], p: u32) -> usize {
    v.iter()
        .fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

fn decode_vector(mut index: usize, p: u32, m: usize) -> Vec<u32> {
    let mut v = vec![0u32; m];
    for i in (0..m).rev() {
        v[i] = (index % p as usize) as u32;
        index /= p as usize;
    }
    v
}

/// Splits a coverage table into (uniform-and-expected, violations); entry 0
/// (the zero vector) is skipped. At most [`VIOLATION_CAP`] violations are
/// retained, in ascending vector order.
fn split_violations(
    counts: &[u64],
    expected: &BigRational,
    p: u32,
    m: usize,
) -> (bool, Vec<CoverageViolation>) {
    let mut violations = Vec::new();
    let mut uniform = true;
    for (index, &count) in counts.iter().enumerate().skip(1) {
        if &BigRational::from_integer(BigInt::from(count)) != expected {
            uniform = false;
            if violations.len() < VIOLATION_CAP {
                violations.push(CoverageViolation {
                    vector: decode_vector(index, p, m),
                    observed: count,
                });
            }
        }
    }
    (uniform, violations)
}

/// Subspace of GF(p)^m in canonical reduced-echelon form; equal subspaces
/// compare equal as values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    ambient: usize,
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn from_spanning(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut matrix = GfMatrix::new(
            p,
            vectors.len(),
            ambient,
            vectors.iter().flatten().copied().collect(),
        );
        let pivots = matrix.rref();
        let basis = (0..pivots.len())
            .map(|r| matrix.row(r).to_vec())
            .collect();
        Self { p, ambient, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let p = u64::from(self.p);
        let mut residue: Vec<u32> = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|&x| x != 0).expect("echelon row");
            let c = u64::from(residue[pivot]);
            if c == 0 {
                continue;
            }
            // subtract c * row
            for (r, &b) in residue.iter_mut().zip(row) {
                *r = ((u64::from(*r) + (p - u64::from(b) * c % p) % p) % p) as u32;
            }
        }
        residue.iter().all(|&x| x == 0)
    }

    /// All `p^dim` elements.
    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let dim = self.basis.len();
        let total: u64 = (0..dim).fold(1, |acc, _| acc * u64::from(self.p));
        (0..total).map(move |mut index| {
            let mut v = vec![0u32; self.ambient];
            for row in &self.basis {
                let c = (index % u64::from(self.p)) as u32;
                index /= u64::from(self.p);
                if c != 0 {
                    add_scaled_row(&mut v, row, c, self.p);
                }
            }
            v
        })
    }

    /// Orthogonal complement: the null-space of the basis matrix.
    pub fn dual(&self) -> Subspace {
        let matrix = GfMatrix::new(
            self.p,
            self.basis.len(),
            self.ambient,
            self.basis.iter().flatten().copied().collect(),
        );
        Subspace::from_spanning(self.p, self.ambient, &matrix.null_space_basis())
    }
}

/// Parameters derived from a check matrix alone.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveParameters {
    pub p: u32,
    pub m: usize,
    pub s: usize,
    /// Number of blocks (array factors).
    pub factors: usize,
    /// `k = sum_i n_i (p^s - p^{s-i})`; the degree of the ambient multigraph.
    pub k: BigInt,
    /// `mu = k / (p^m - 1)`.
    pub mu: BigRational,
    /// `(mu + k)/p^s - 1`, before integrality screening.
    pub t_exact: BigRational,
    /// `t_exact` when it is an integer in `0..=factors`.
    pub strength_t: Option<usize>,
    /// `nu = factors - p^{m-s} mu`.
    pub nu: BigRational,
    /// Expected one-weight block weight `mu p^{m-s}`.
    pub one_weight: BigRational,
    /// Zero-vector multiplicity `sum_i n_i (p^{s-i} - 1)`.
    pub lambda: BigInt,
}

/// A nonzero vector whose coverage misses the expected fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageViolation {
    pub vector: Vec<u32>,
    pub observed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultispreadReport {
    pub mu: BigRational,
    pub is_mu_fold: bool,
    pub lambda: BigInt,
    pub violations: Vec<CoverageViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualPartitionReport {
    pub nu: BigRational,
    pub is_nu_fold: bool,
    pub violations: Vec<CoverageViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneWeightReport {
    pub is_one_weight: bool,
    pub weight: Option<u64>,
    pub expected_weight: BigRational,
    pub weight_matches: bool,
    pub alphabet_effective: bool,
    /// Constant weight, matching the expectation, alphabet-effective.
    pub verdict: bool,
}

/// The six audited verdicts, in assertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditVerdicts {
    pub attains_bound: bool,
    pub has_design_strength: bool,
    pub completely_regular: bool,
    pub one_weight: bool,
    pub multispread: bool,
    pub dual_partition: bool,
}

impl AuditVerdicts {
    pub fn all(&self) -> [bool; 6] {
        [
            self.attains_bound,
            self.has_design_strength,
            self.completely_regular,
            self.one_weight,
            self.multispread,
            self.dual_partition,
        ]
    }

    pub fn unanimous(&self) -> bool {
        let v = self.all();
        v.iter().all(|&x| x == v[0])
    }
}

#[derive(Debug, Clone)]
pub struct AdditiveAuditReport {
    pub params: AdditiveParameters,
    /// Strength report at the derived `t`, when that `t` is an integer.
    pub strength: Option<StrengthReport>,
    pub cr: CrReport,
    pub one_weight: OneWeightReport,
    pub multispread: MultispreadReport,
    pub dual_partition: DualPartitionReport,
    pub verdicts: AuditVerdicts,
    pub unanimous: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EXAMPLE_MATRIX: &str = "\
p 2 m 3
blocks 1 2 2 2 2
1 1 0 1 0 0 0 1 0
1 0 1 0 0 1 0 1 1
1 0 0 0 1 0 1 0 1
";

    fn example() -> CheckMatrix {
        CheckMatrix::parse(EXAMPLE_MATRIX).unwrap()
    }

    #[test]
    fn parse_and_validate() {
        let h = example();
        assert_eq!(h.p(), 2);
        assert_eq!(h.row_count(), 3);
        assert_eq!(h.block_sizes(), &[1, 2, 2, 2, 2]);
        assert_eq!(h.max_block_size(), 2);
        assert_eq!(h.column_count(), 9);

        // identity matrix, all blocks of size 1
        let id = CheckMatrix::new(3, vec![1, 1, 1], vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
        ])
        .unwrap();
        assert_eq!(id.alphabet().unwrap().levels(), &[3, 3, 3]);

        // repeated row: rank deficient
        let bad = CheckMatrix::new(2, vec![1, 1, 1], vec![vec![1, 1, 0], vec![1, 1, 0]]);
        assert!(matches!(bad, Err(Error::RankDeficient { rank: 1, expected: 2 })));

        // composite characteristic
        assert!(matches!(
            CheckMatrix::new(4, vec![1], vec![vec![1]]),
            Err(Error::NotPrime(4))
        ));

        // column/block mismatch
        assert!(CheckMatrix::new(2, vec![2], vec![vec![1]]).is_err());

        // entry out of range
        assert!(CheckMatrix::new(2, vec![1], vec![vec![2]]).is_err());
    }

    #[test]
    fn null_space_of_example() {
        let array = example().null_space_array(false).unwrap();
        assert_eq!(array.alphabet().levels(), &[2, 4, 4, 4, 4]);
        assert_eq!(array.runs(), 64);
        assert!(array.is_simple());
        assert_eq!(array.max_strength().unwrap(), 3);
    }

    #[test]
    fn null_space_degenerate_cases() {
        let id = CheckMatrix::new(2, vec![1, 1], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let array = id.null_space_array(false).unwrap();
        assert_eq!(array.runs(), 1);
        assert_eq!(array.rows().next().unwrap().0, &Word::new(vec![0, 0]));

        // one block of size 3 over GF(2), rank 1: 2^(3-1) = 4 solutions
        let h = CheckMatrix::new(2, vec![3], vec![vec![1, 1, 1]]).unwrap();
        let array = h.null_space_array(false).unwrap();
        assert_eq!(array.alphabet().levels(), &[8]);
        assert_eq!(array.runs(), 4);
    }

    #[test]
    fn block_spans_of_example() {
        let h = example();
        let first = h.block_span(0).unwrap();
        assert_eq!(first.dim(), 1);
        assert_eq!(first.basis(), &[vec![1, 1, 1]]);
        let second = h.block_span(1).unwrap();
        assert_eq!(second.dim(), 2);
        assert_eq!(second.basis(), &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(h.block_span(5).is_err());

        // a zero block has dimension 0 (overall rank supplied by the others)
        let h0 = CheckMatrix::new(2, vec![1, 1, 1], vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(h0.block_span(2).unwrap().dim(), 0);
    }

    #[test]
    fn subspace_membership_and_dual() {
        let space = Subspace::from_spanning(2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(space.contains(&[1, 1, 0]));
        assert!(!space.contains(&[0, 0, 1]));
        assert_eq!(space.elements().count(), 4);
        let dual = space.dual();
        assert_eq!(dual.dim(), 1);
        assert!(dual.contains(&[0, 0, 1]));

        // dual of the full space is the zero space
        let full = Subspace::from_spanning(3, 2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(full.dual().dim(), 0);
    }

    #[test]
    fn multispread_of_example() {
        let report = example().multispread_check(false).unwrap();
        assert!(report.is_mu_fold);
        assert_eq!(report.mu, BigRational::from_integer(BigInt::from(2)));
        assert_eq!(report.lambda, BigInt::from(1));
        assert!(report.violations.is_empty());
    }

    #[test]
    fn multispread_oracle_recount() {
        // independent recount: test every nonzero vector against every block
        // span via explicit membership
        let h = example();
        let spans: Vec<(Subspace, u64)> = (0..5)
            .map(|i| {
                let mult = 2u64.pow((h.max_block_size() - h.block_sizes()[i]) as u32);
                (h.block_span(i).unwrap(), mult)
            })
            .collect();
        for index in 1..8usize {
            let v = decode_vector(index, 2, 3);
            let covered: u64 = spans
                .iter()
                .map(|(s, mult)| if s.contains(&v) { *mult } else { 0 })
                .sum();
            assert_eq!(covered, 2, "vector {v:?}");
        }
    }

    #[test]
    fn full_space_single_block_is_trivial_spread() {
        let h = CheckMatrix::new(2, vec![2], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let report = h.multispread_check(false).unwrap();
        assert!(report.is_mu_fold);
        assert_eq!(report.mu, BigRational::from_integer(BigInt::from(1)));
        assert_eq!(report.lambda, BigInt::ZERO);
    }

    #[test]
    fn dual_partition_of_example() {
        let report = example().dual_partition_check(false).unwrap();
        assert!(report.is_nu_fold);
        assert_eq!(report.nu, BigRational::from_integer(BigInt::from(1)));
    }

    #[test]
    fn doubling_blocks_doubles_both_folds() {
        let h = example();
        let mut sizes = h.block_sizes().to_vec();
        sizes.extend_from_slice(h.block_sizes());
        let rows: Vec<Vec<u32>> = h
            .rows()
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.extend_from_slice(r);
                row
            })
            .collect();
        let doubled = CheckMatrix::new(2, sizes, rows).unwrap();
        let spread = doubled.multispread_check(false).unwrap();
        assert!(spread.is_mu_fold);
        assert_eq!(spread.mu, BigRational::from_integer(BigInt::from(4)));
        let dual = doubled.dual_partition_check(false).unwrap();
        assert!(dual.is_nu_fold);
        assert_eq!(dual.nu, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn one_weight_of_example() {
        let report = example().one_weight_check(false).unwrap();
        assert!(report.is_one_weight);
        assert_eq!(report.weight, Some(4));
        assert_eq!(
            report.expected_weight,
            BigRational::from_integer(BigInt::from(4))
        );
        assert!(report.weight_matches);
        assert!(report.alphabet_effective);
        assert!(report.verdict);
    }

    #[test]
    fn identity_is_not_one_weight() {
        let id = CheckMatrix::new(2, vec![1, 1], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let report = id.one_weight_check(false).unwrap();
        assert!(!report.is_one_weight); // e1 has weight 1, e1+e2 weight 2
        assert!(report.weight.is_none());
    }

    #[test]
    fn audit_of_example_is_unanimously_true() {
        let report = example().audit(false).unwrap();
        assert_eq!(report.params.k, BigInt::from(14));
        assert_eq!(report.params.mu, BigRational::from_integer(BigInt::from(2)));
        assert_eq!(report.params.strength_t, Some(3));
        assert_eq!(report.params.nu, BigRational::from_integer(BigInt::from(1)));
        assert_eq!(report.verdicts.all(), [true; 6]);
        assert!(report.unanimous);
        assert_eq!((report.cr.b, report.cr.c), (Some(14), Some(2)));
    }

    #[test]
    fn audit_of_triple_repetition_code() {
        // H = (1 1 1) over GF(2): even-weight code, mu = 3, t = 2
        let h = CheckMatrix::new(2, vec![1, 1, 1], vec![vec![1, 1, 1]]).unwrap();
        let report = h.audit(false).unwrap();
        assert_eq!(report.params.k, BigInt::from(3));
        assert_eq!(report.params.mu, BigRational::from_integer(BigInt::from(3)));
        assert_eq!(report.params.strength_t, Some(2));
        assert_eq!(report.params.nu, BigRational::from_integer(BigInt::ZERO));
        assert_eq!(report.verdicts.all(), [true; 6]);
    }

    #[test]
    fn audit_with_non_integer_parameters_is_unanimously_false() {
        // identity over GF(2), blocks 1 1: mu = 2/3, t = 1/3
        let id = CheckMatrix::new(2, vec![1, 1], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let report = id.audit(false).unwrap();
        assert_eq!(report.params.strength_t, None);
        assert!(!report.params.t_exact.is_integer());
        assert_eq!(report.verdicts.all(), [false; 6]);
        assert!(report.unanimous);
    }

    #[test]
    fn audit_of_full_space_block() {
        // single block of size s = m: C = {0}, t = 0, all assertions true
        let h = CheckMatrix::new(3, vec![2], vec![vec![1, 0], vec![0, 1]]).unwrap();
        let report = h.audit(false).unwrap();
        assert_eq!(report.params.strength_t, Some(0));
        assert_eq!(report.verdicts.all(), [true; 6]);
    }
}
