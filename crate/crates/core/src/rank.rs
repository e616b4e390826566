//! Exact rank, kernels and null-vector structure.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix01, SignedMatrix};
use crate::sampler::RrdSampler;
use crate::scalar::fraction;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let data = (0..rows * cols).map(|t| f(t / cols.max(1), t % cols.max(1))).collect();
        IntMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scaled(&self, c: i64) -> Self {
        IntMatrix { data: self.data.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let data = keep.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        IntMatrix { rows: keep.len(), cols: self.cols, data }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul_rational(&self, x: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| **a != 0)
                    .fold(BigRational::zero(), |acc, (&a, v)| acc + v * BigInt::from(a))
            })
            .collect()
    }
}

impl From<&Matrix01> for IntMatrix {
    fn from(m: &Matrix01) -> Self {
        IntMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m.get(i, j) as i64)
    }
}

impl From<&SignedMatrix> for IntMatrix {
    fn from(m: &SignedMatrix) -> Self {
        IntMatrix::from_fn(m.n(), m.n(), |i, j| m.get(i, j) as i64)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The 20 largest primes below `2^31`.
pub fn screening_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (1u64..1 << 31).rev().filter(|&q| is_prime(q)).take(20).collect())
}

/// Rank over the field with `prime` elements.
pub fn rank_mod_p(a: &IntMatrix, prime: u64) -> Result<usize> {
    if !is_prime(prime) || prime >= 1 << 31 {
        return Err(Error::NotPrime(prime));
    }
    let p = prime as i128;
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<u64> = a.data.iter().map(|&x| (x as i128).rem_euclid(p) as u64).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + c] != 0) else { continue };
        if piv != rank {
            for j in c..cols {
                m.swap(rank * cols + j, piv * cols + j);
            }
        }
        let inv = pow_mod(m[rank * cols + c], prime - 2, prime);
        let (head, tail) = m.split_at_mut((rank + 1) * cols);
        let pivot_row = &head[rank * cols..];
        for row in tail.chunks_exact_mut(cols) {
            if row[c] == 0 {
                continue;
            }
            let f = prime - row[c] * inv % prime;
            for j in c..cols {
                row[j] = (row[j] + f * pivot_row[j]) % prime;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMethod {
    GfpScreen,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub corank: usize,
    /// Right kernel, each vector scaled so its first nonzero entry is 1.
    #[serde(with = "fraction::vecvec")]
    pub kernel_basis: Vec<Vec<BigRational>>,
    pub method: RankMethod,
}

/// Fraction-free row echelon form; returns the reduced rows and pivot columns.
fn bareiss(a: &IntMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = (0..a.rows).map(|i| a.row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(piv) = (r..a.rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..a.cols {
                let t = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { t } else { t.div_floor(&prev) };
            }
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Exact rank and a rational basis of the right kernel.
pub fn corank_exact(a: &IntMatrix) -> RankResult {
    let (ech, pivots) = bareiss(a);
    let n = a.cols;
    let rank = pivots.len();
    let is_pivot: Vec<bool> = (0..n).map(|c| pivots.contains(&c)).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = vec![BigRational::zero(); n];
        x[free] = BigRational::one();
        for (row, &pc) in ech.iter().zip(&pivots).rev() {
            let s = (pc + 1..n)
                .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                .fold(BigRational::zero(), |acc, j| acc + &x[j] * &row[j]);
            x[pc] = -s / BigRational::from_integer(row[pc].clone());
        }
        let lead = x.iter().find(|v| !v.is_zero()).cloned().expect("x[free] = 1");
        x.iter_mut().for_each(|v| *v = &*v / &lead);
        basis.push(x);
    }
    debug_assert!(basis.iter().all(|x| a.mul_rational(x).iter().all(Zero::is_zero)));
    RankResult { rank, corank: n - rank, kernel_basis: basis, method: RankMethod::Exact }
}

pub fn rank_exact(a: &IntMatrix) -> usize {
    bareiss(a).1.len()
}

/// Every kernel vector multiplies back to exactly zero.
pub fn verify_kernel(a: &IntMatrix, r: &RankResult) -> bool {
    r.rank + r.corank == a.cols
        && r.kernel_basis.len() == r.corank
        && r.kernel_basis.iter().all(|x| a.mul_rational(x).iter().all(Zero::is_zero))
}

fn screen(a: &IntMatrix, primes: &[u64]) -> bool {
    let full = a.rows.min(a.cols);
    primes.iter().any(|&p| rank_mod_p(a, p).is_ok_and(|r| r == full))
}

/// Singularity of a square matrix: a full-rank screen modulo a prime is
/// conclusive, a deficient one is settled exactly.
pub fn is_singular(a: &IntMatrix) -> bool {
    let primes = screening_primes();
    if screen(a, &primes[..2]) {
        return false;
    }
    rank_exact(a) < a.rows.min(a.cols)
}

/// As `is_singular`, with the two screening primes drawn at random.
pub fn is_singular_with<R: Rng + ?Sized>(a: &IntMatrix, rng: &mut R) -> bool {
    let all = screening_primes();
    let picked: Vec<u64> = sample(rng, all.len(), 2).into_iter().map(|i| all[i]).collect();
    if screen(a, &picked) {
        return false;
    }
    rank_exact(a) < a.rows.min(a.cols)
}

/// Corank, taking the cheap path when a screen shows full rank.
pub fn rank_screened(a: &IntMatrix) -> RankResult {
    if a.rows == a.cols && screen(a, &screening_primes()[..2]) {
        return RankResult { rank: a.cols, corank: 0, kernel_basis: Vec::new(), method: RankMethod::GfpScreen };
    }
    corank_exact(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSetProfile {
    #[serde(with = "fraction")]
    pub max_level_fraction: BigRational,
    #[serde(with = "fraction")]
    pub support_fraction: BigRational,
    /// Value (as `p/q`) to multiplicity.
    pub level_map: BTreeMap<String, usize>,
    #[serde(skip)]
    levels: BTreeMap<BigRational, usize>,
}

impl LevelSetProfile {
    pub fn largest_level(&self) -> Option<(&BigRational, usize)> {
        self.levels.iter().max_by_key(|(v, c)| (**c, std::cmp::Reverse(*v))).map(|(v, c)| (v, *c))
    }

    pub fn count(&self, value: &BigRational) -> usize {
        self.levels.get(value).copied().unwrap_or(0)
    }

    /// Distinct values with their multiplicities, in increasing order.
    pub fn iter_levels(&self) -> impl Iterator<Item = (&BigRational, usize)> {
        self.levels.iter().map(|(v, c)| (v, *c))
    }
}

pub fn level_profile(x: &[BigRational]) -> LevelSetProfile {
    let mut levels: BTreeMap<BigRational, usize> = BTreeMap::new();
    for v in x {
        *levels.entry(v.clone()).or_default() += 1;
    }
    let n = BigInt::from(x.len().max(1));
    let max = levels.values().copied().max().unwrap_or(0);
    let support = x.iter().filter(|v| !v.is_zero()).count();
    LevelSetProfile {
        max_level_fraction: BigRational::new(max.into(), n.clone()),
        support_fraction: BigRational::new(support.into(), n),
        level_map: levels.iter().map(|(v, c)| (fraction::to_string(v), *c)).collect(),
        levels,
    }
}

/// A level value of `x` whose level set exceeds `eta · n`.
pub fn sls_violation(x: &[BigRational], eta: f64) -> Option<BigRational> {
    let p = level_profile(x);
    let bound = eta * x.len() as f64;
    p.levels.into_iter().filter(|(_, c)| *c as f64 > bound).max_by_key(|(_, c)| *c).map(|(v, _)| v)
}

fn require_null(m: &Matrix01, x: &[BigRational]) -> Result<usize> {
    let d = m.require_regular()?;
    if x.len() != m.n() {
        return Err(Error::DimensionMismatch { expected: m.n(), got: x.len() });
    }
    if x.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("zero vector".into()));
    }
    if !IntMatrix::from(m).mul_rational(x).iter().all(Zero::is_zero) {
        return Err(Error::Precondition("x is not a null vector".into()));
    }
    Ok(d)
}

/// `y = λ1 - x`, scaled so that `My = 1` when `λ ≠ 0`; `My = 0` when `λ = 0`.
pub fn sls_witness_to_sparse(m: &Matrix01, x: &[BigRational], lambda: &BigRational) -> Result<Vec<BigRational>> {
    let d = require_null(m, x)?;
    let y: Vec<BigRational> = x.iter().map(|v| lambda - v).collect();
    if lambda.is_zero() {
        return Ok(y);
    }
    let scale = (lambda * BigInt::from(d)).recip();
    Ok(y.into_iter().map(|v| v * &scale).collect())
}

/// Inverse direction: from `y ≠ 0` with `My ∈ {0, 1}` to a null vector
/// `x` and the value `λ` whose level set is the zero set of `y`.
pub fn sparse_to_sls_witness(y: &[BigRational], m: &Matrix01) -> Result<(Vec<BigRational>, BigRational)> {
    let d = m.require_regular()?;
    if y.len() != m.n() {
        return Err(Error::DimensionMismatch { expected: m.n(), got: y.len() });
    }
    if y.iter().all(Zero::is_zero) {
        return Err(Error::Precondition("zero vector".into()));
    }
    let my = IntMatrix::from(m).mul_rational(y);
    if my.iter().all(Zero::is_zero) {
        return Ok((y.to_vec(), BigRational::zero()));
    }
    if my.iter().all(One::is_one) {
        let shift = BigRational::new(BigInt::one(), BigInt::from(d));
        let x: Vec<BigRational> = y.iter().map(|v| v - &shift).collect();
        if x.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("y maps to the zero null vector".into()));
        }
        return Ok((x, -shift));
    }
    Err(Error::Precondition("My is neither 0 nor the all-ones vector".into()))
}

fn level_hits(x: &[BigRational], cols: &[usize]) -> BTreeMap<BigRational, usize> {
    let mut map = BTreeMap::new();
    for &j in cols {
        *map.entry(x[j].clone()).or_insert(0usize) += 1;
    }
    map
}

/// Some level set of `x` meets both row neighborhoods in more than `eps1 · d` columns.
pub fn structured_set_membership(x: &[BigRational], m: &Matrix01, i1: usize, i2: usize, eps1: f64) -> Result<bool> {
    if i1 == i2 {
        return Err(Error::EqualIndices(i1));
    }
    let d = m.require_regular()? as f64;
    let h1 = level_hits(x, &m.neighborhood(i1)?);
    let h2 = level_hits(x, &m.neighborhood(i2)?);
    Ok(h1.iter().any(|(v, &c1)| {
        let c2 = h2.get(v).copied().unwrap_or(0);
        c1.min(c2) as f64 > eps1 * d
    }))
}

/// Some level set of `x` meets `Ex(i1,i2) ∪ Ex(i2,i1)` in more than
/// `eps2 · p(1-p)n` columns.
pub fn h2_membership(x: &[BigRational], m: &Matrix01, i1: usize, i2: usize, eps2: f64) -> Result<bool> {
    let coex = m.co_ex_sets(i1, i2)?;
    let n = m.n() as f64;
    let d = m.require_regular()? as f64;
    let cols: Vec<usize> = coex.ex12.iter().chain(&coex.ex21).copied().collect();
    let bound = eps2 * d * (n - d) / n;
    Ok(level_hits(x, &cols).values().any(|&c| c as f64 > bound))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Xi0Report {
    pub corank: usize,
    pub kernel_contains_ones: bool,
    pub zero_line_sums: bool,
}

/// Samples `M` uniformly with `d = n/2`, forms `Ξ0 = 2M - 11ᵀ`, and reports its corank.
pub fn xi0_kernel_check<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Xi0Report> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n must be even and positive, got {n}")));
    }
    let m = RrdSampler::best(n, n / 2)?.sample(rng);
    Ok(xi0_report(&m))
}

pub fn xi0_report(m: &Matrix01) -> Xi0Report {
    let n = m.n();
    let xi = IntMatrix::from_fn(n, n, |i, j| if m.get(i, j) { 1 } else { -1 });
    let zero_line_sums = (0..n).all(|i| xi.row(i).iter().sum::<i64>() == 0)
        && (0..n).all(|j| (0..n).map(|i| xi.get(i, j)).sum::<i64>() == 0);
    let ones = vec![BigRational::one(); n];
    let kernel_contains_ones = xi.mul_rational(&ones).iter().all(Zero::is_zero);
    Xi0Report { corank: corank_exact(&xi).corank, kernel_contains_ones, zero_line_sums }
}

/// Whether every listed row lies in the span of the rows not listed.
pub fn row_in_span(a: &IntMatrix, rows: &[usize]) -> Result<bool> {
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::EqualIndices(w[0]));
    }
    if let Some(&i) = sorted.iter().find(|&&i| i >= a.rows) {
        return Err(Error::IndexOutOfRange { index: i, n: a.rows });
    }
    let rest: Vec<usize> = (0..a.rows).filter(|i| sorted.binary_search(i).is_err()).collect();
    Ok(rank_exact(&a.select_rows(&rest)) == rank_exact(a))
}

/// `|det|` of a small square integer matrix, for cross-checks.
pub fn abs_det(a: &IntMatrix) -> BigInt {
    let (ech, pivots) = bareiss(a);
    if pivots.len() < a.rows || a.rows != a.cols {
        return BigInt::zero();
    }
    ech.last().map_or(BigInt::one(), |r| r[a.cols - 1].abs())
}
