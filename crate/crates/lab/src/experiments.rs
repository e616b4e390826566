//! Monte Carlo studies and exact audits built on `rrd-core`.

use std::collections::{BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rrd_core::coupling::{apply_plan, enumerate_plans};
use rrd_core::discrepancy::{check_codegree, check_good_d, DiscrepancyReport, EventReport, GoodEventConfig};
use rrd_core::matrix::{hadamard, Matrix01};
use rrd_core::rank::{is_singular, IntMatrix};
use rrd_core::rng::trial_stream;
use rrd_core::sampler::{
    derangement_count, enumerate_all, sample_permutation, sample_signs, RrdSampler, SampleConfig, SampleMode,
};
use rrd_core::scalar::fraction;

use crate::error::{LabError, Result};
use crate::stats::{chi_square_uniform, total_variation, wilson, ChiSquareResult, Z95};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub trials: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    /// Seconds. Left out of JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: f64,
}

impl MCEstimate {
    pub fn new(hits: u64, trials: u64, seed: u64, wall_time: f64) -> Self {
        let (ci_low, ci_high) = wilson(hits, trials, Z95);
        let p_hat = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
        MCEstimate { trials, hits, p_hat, ci_low, ci_high, seed, wall_time }
    }

    pub fn p_hat_exact(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.trials.max(1))
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub grid: Vec<(usize, usize)>,
    pub trials: u64,
    pub mode: SampleMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    pub seed: u64,
    pub out: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(LabError::EmptyGrid);
        }
        if self.trials == 0 {
            return Err(LabError::InvalidSpec("trials must be at least 1".into()));
        }
        if self.trials > u32::MAX as u64 {
            return Err(LabError::InvalidSpec(format!("at most {} trials per cell", u32::MAX)));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(LabError::InvalidSpec(format!("bad experiment name {:?}", self.name)));
        }
        for &(n, d) in &self.grid {
            SampleConfig::new(n, d, self.mode, self.seed).validate()?;
        }
        Ok(())
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 || trials > u32::MAX as u64 {
        return Err(LabError::InvalidSpec(format!("trials must be in 1..={}, got {trials}", u32::MAX)));
    }
    Ok(())
}

fn singular01(m: &Matrix01) -> bool {
    is_singular(&IntMatrix::from(m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEstimate {
    pub n: usize,
    pub d: usize,
    pub exhaustive: bool,
    pub plain: MCEstimate,
    pub signed: MCEstimate,
}

/// Singularity rates of `M` and `M±` for every grid cell.
///
/// Trial `t` of cell `c` draws `M` and then the signs from stream `(seed, c, t)`.
/// In enumerate mode every member of the cell is visited once.
pub fn mc_singularity(spec: &ExperimentSpec) -> Result<Vec<CellEstimate>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(spec.grid.len());
    for (c, &(n, d)) in spec.grid.iter().enumerate() {
        let start = Instant::now();
        let cell = c as u32;
        let (trials, plain, signed, exhaustive) = if spec.mode == SampleMode::Enumerate {
            let all = enumerate_all(n, d)?;
            let (p, s) = all
                .par_iter()
                .enumerate()
                .map(|(t, m)| {
                    let mut rng = trial_stream(spec.seed, cell, t as u32);
                    singular_pair(m, &mut rng)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            (all.len() as u64, p, s, true)
        } else {
            let sampler = RrdSampler::new(n, d, spec.mode, spec.steps)?;
            let (p, s) = (0..spec.trials as u32)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_stream(spec.seed, cell, t);
                    let m = sampler.sample(&mut rng);
                    singular_pair(&m, &mut rng)
                })
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            (spec.trials, p, s, false)
        };
        let secs = start.elapsed().as_secs_f64();
        out.push(CellEstimate {
            n,
            d,
            exhaustive,
            plain: MCEstimate::new(plain, trials, spec.seed, secs),
            signed: MCEstimate::new(signed, trials, spec.seed, secs),
        });
    }
    Ok(out)
}

fn singular_pair<R: rand::Rng>(m: &Matrix01, rng: &mut R) -> (u64, u64) {
    let signs = sample_signs(m.n(), rng);
    let pm = hadamard(m, &signs).expect("same dimension");
    (singular01(m) as u64, is_singular(&IntMatrix::from(&pm)) as u64)
}

fn falling(m: usize, l: usize) -> BigUint {
    // (m-1)! / (m-l)!: ways to close a cycle of length l through a fixed point
    (m - l + 1..m).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Weighted count of fixed-point-free permutations of `[n]` whose cycle
/// lengths pass `keep`, each cycle weighted by `w`.
fn cycle_dp(n: usize, keep: impl Fn(usize) -> bool, w: &BigRational) -> BigRational {
    let mut a = vec![BigRational::zero(); n + 1];
    a[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for l in 2..=m {
            if keep(l) {
                acc += BigRational::from_integer(BigInt::from(falling(m, l))) * w * &a[m - l];
            }
        }
        a[m] = acc;
    }
    a[n].clone()
}

/// `1 - q_n`: probability that a uniform derangement of `[n]` has an even cycle.
pub fn even_cycle_probability(n: usize) -> BigRational {
    let odd = cycle_dp(n, |l| l % 2 == 1, &BigRational::one());
    let all = BigRational::from_integer(BigInt::from(derangement_count(n)));
    if all.is_zero() {
        return BigRational::zero();
    }
    BigRational::one() - odd / all
}

/// Singular probability in `M_{n,2}` itself: a matrix splits into
/// derangements in `2^(cycles)` ways, so each derangement carries weight
/// `2^-(cycles)`.
pub fn even_cycle_probability_weighted(n: usize) -> BigRational {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let odd = cycle_dp(n, |l| l % 2 == 1, &half);
    let all = cycle_dp(n, |_| true, &half);
    if all.is_zero() {
        return BigRational::zero();
    }
    BigRational::one() - odd / all
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct D2Row {
    pub n: usize,
    pub exhaustive: bool,
    pub estimate: MCEstimate,
    #[serde(with = "fraction")]
    pub one_minus_q: BigRational,
    pub one_minus_q_f64: f64,
    #[serde(with = "fraction")]
    pub weighted: BigRational,
    pub weighted_f64: f64,
    pub within_ci: bool,
    pub within_ci_weighted: bool,
}

/// Singular fraction of `M_{n,2}` against the derangement cycle-parity
/// benchmarks. `steps` overrides the default chain length in MCMC mode.
pub fn d2_cycle_experiment(
    n_list: &[usize],
    trials: u64,
    mode: SampleMode,
    steps: Option<u64>,
    seed: u64,
) -> Result<Vec<D2Row>> {
    check_trials(trials)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for (c, &n) in n_list.iter().enumerate() {
        if n < 2 {
            return Err(LabError::InvalidSpec(format!("d=2 needs n >= 2, got {n}")));
        }
        let start = Instant::now();
        let (hits, total, exhaustive) = if mode == SampleMode::Enumerate {
            let all = enumerate_all(n, 2)?;
            let hits = all.par_iter().filter(|m| singular01(m)).count() as u64;
            (hits, all.len() as u64, true)
        } else {
            let sampler = RrdSampler::new(n, 2, mode, steps)?;
            let hits = (0..trials as u32)
                .into_par_iter()
                .filter(|&t| singular01(&sampler.sample(&mut trial_stream(seed, c as u32, t))))
                .count() as u64;
            (hits, trials, false)
        };
        let estimate = MCEstimate::new(hits, total, seed, start.elapsed().as_secs_f64());
        let one_minus_q = even_cycle_probability(n);
        let weighted = even_cycle_probability_weighted(n);
        let one_minus_q_f64 = one_minus_q.to_f64().unwrap_or(f64::NAN);
        let weighted_f64 = weighted.to_f64().unwrap_or(f64::NAN);
        rows.push(D2Row {
            n,
            exhaustive,
            within_ci: estimate.covers(one_minus_q_f64),
            within_ci_weighted: estimate.covers(weighted_f64),
            estimate,
            one_minus_q,
            one_minus_q_f64,
            weighted,
            weighted_f64,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermSumRow {
    pub n: usize,
    pub exhaustive: bool,
    pub estimate: MCEstimate,
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).permutations(n).collect()
}

fn perm_sum_singular(p1: &[usize], p2: &[usize]) -> bool {
    let n = p1.len();
    is_singular(&IntMatrix::from_fn(n, n, |i, j| (p1[i] == j) as i64 + (p2[i] == j) as i64))
}

/// Singular fraction of `P1 + P2` for independent uniform permutations,
/// exhaustive over `S_n × S_n` when that is no more than `trials` pairs.
pub fn perm_sum_experiment(n_list: &[usize], trials: u64, seed: u64) -> Result<Vec<PermSumRow>> {
    check_trials(trials)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for (c, &n) in n_list.iter().enumerate() {
        if n == 0 {
            return Err(LabError::InvalidSpec("n must be at least 1".into()));
        }
        let start = Instant::now();
        let pairs = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).and_then(|f| f.checked_mul(f));
        let exhaustive = pairs.is_some_and(|p| p <= trials);
        let (hits, total) = if exhaustive {
            let perms = all_permutations(n);
            let hits = perms
                .par_iter()
                .map(|p1| perms.iter().filter(|p2| perm_sum_singular(p1, p2)).count() as u64)
                .sum();
            (hits, (perms.len() * perms.len()) as u64)
        } else {
            let hits = (0..trials as u32)
                .into_par_iter()
                .filter(|&t| {
                    let mut rng = trial_stream(seed, c as u32, t);
                    let p1 = sample_permutation(n, &mut rng);
                    let p2 = sample_permutation(n, &mut rng);
                    perm_sum_singular(&p1, &p2)
                })
                .count() as u64;
            (hits, trials)
        };
        let estimate = MCEstimate::new(hits, total, seed, start.elapsed().as_secs_f64());
        rows.push(PermSumRow { n, exhaustive, estimate });
    }
    Ok(rows)
}

/// Largest support handled by `erdos_oracle`.
pub const ERDOS_MAX_SUPPORT: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErdosResult {
    pub m: usize,
    /// Number of sign patterns hitting the most likely value.
    pub atom_count: u64,
    #[serde(with = "fraction")]
    pub max_atom: BigRational,
    /// `C(m, floor(m/2)) / 2^m`.
    #[serde(with = "fraction")]
    pub bound: BigRational,
    pub inv_sqrt_m: f64,
    pub within_bound: bool,
    pub within_sqrt: bool,
}

pub fn central_binomial_bound(m: usize) -> BigRational {
    let c = num_integer::binomial(BigUint::from(m), BigUint::from(m / 2));
    BigRational::new(BigInt::from(c), BigInt::one() << m)
}

pub fn all_ones(m: usize) -> Vec<BigRational> {
    vec![BigRational::one(); m]
}

/// Exact largest atom of `Σ x(i) ξ(i)` over iid uniform signs, restricted to
/// the support of `x`.
pub fn erdos_oracle(x: &[BigRational]) -> Result<ErdosResult> {
    let support: Vec<&BigRational> = x.iter().filter(|v| !v.is_zero()).collect();
    let m = support.len();
    if m == 0 {
        return Err(LabError::InvalidSpec("x has empty support".into()));
    }
    if m > ERDOS_MAX_SUPPORT {
        return Err(LabError::Budget(format!("support {m} exceeds {ERDOS_MAX_SUPPORT} for exact enumeration")));
    }
    let lcm = support.iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    let scaled: Vec<i128> = support
        .iter()
        .map(|v| (v.numer() * (&lcm / v.denom())).to_i128())
        .collect::<Option<_>>()
        .ok_or_else(|| LabError::Budget("scaled coefficients overflow i128".into()))?;
    let total: Option<i128> = scaled.iter().try_fold(0i128, |acc, v| acc.checked_add(v.checked_abs()?));
    if total.is_none() {
        return Err(LabError::Budget("sum of coefficients overflows i128".into()));
    }
    let atom_count = if m <= 20 { max_atom_direct(&scaled) } else { max_atom_split(&scaled) };
    let max_atom = BigRational::new(BigInt::from(atom_count), BigInt::one() << m);
    let bound = central_binomial_bound(m);
    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    Ok(ErdosResult {
        m,
        atom_count,
        within_bound: max_atom <= bound,
        within_sqrt: max_atom.to_f64().unwrap_or(1.0) <= inv_sqrt_m,
        max_atom,
        bound,
        inv_sqrt_m,
    })
}

fn subset_sums(v: &[i128]) -> Vec<i128> {
    let mut sums = vec![0i128];
    for &x in v {
        sums = sums.iter().flat_map(|&s| [s + x, s - x]).collect();
    }
    sums
}

fn max_atom_direct(v: &[i128]) -> u64 {
    let mut sums = subset_sums(v);
    sums.sort_unstable();
    sums.chunk_by(|a, b| a == b).map(|c| c.len() as u64).max().unwrap_or(0)
}

fn grouped(v: &[i128]) -> Vec<(i128, u64)> {
    let mut sums = subset_sums(v);
    sums.sort_unstable();
    sums.chunk_by(|a, b| a == b).map(|c| (c[0], c.len() as u64)).collect()
}

/// Meet in the middle: merges the sorted sequences `a + B` for every
/// distinct half-sum `a`, so the full distribution is never stored.
fn max_atom_split(v: &[i128]) -> u64 {
    let (left, right) = v.split_at(v.len() / 2);
    let a = grouped(left);
    let b = grouped(right);
    let mut heap: BinaryHeap<Reverse<(i128, usize, usize)>> =
        a.iter().enumerate().map(|(ia, &(x, _))| Reverse((x + b[0].0, ia, 0))).collect();
    let mut best = 0u64;
    let mut current: Option<(i128, u64)> = None;
    while let Some(Reverse((sum, ia, ib))) = heap.pop() {
        let w = a[ia].1 * b[ib].1;
        current = match current {
            Some((s, c)) if s == sum => Some((s, c + w)),
            Some((_, c)) => {
                best = best.max(c);
                Some((sum, w))
            }
            None => Some((sum, w)),
        };
        if ib + 1 < b.len() {
            heap.push(Reverse((a[ia].0 + b[ib + 1].0, ia, ib + 1)));
        }
    }
    best.max(current.map_or(0, |c| c.1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Exact,
    Chi2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingAuditSpec {
    pub n: usize,
    pub d: usize,
    pub i1: usize,
    pub i2: usize,
    /// `None` for the full shuffle.
    pub restricted: Option<(Vec<usize>, usize)>,
    pub mode: AuditMode,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingVerdict {
    pub n: usize,
    pub d: usize,
    pub i1: usize,
    pub i2: usize,
    pub frozen: Vec<usize>,
    pub s: Option<usize>,
    pub mode: AuditMode,
    /// Matrices on which the plan is defined.
    pub support: usize,
    pub tv: f64,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_fraction")]
    pub tv_exact: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquareResult>,
    pub pass: bool,
}

mod opt_fraction {
    use num_rational::BigRational;
    use rrd_core::scalar::fraction;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, ser: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => fraction::serialize(q, ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigRational>, D::Error> {
        let s = Option::<String>::deserialize(de)?;
        s.map(|s| fraction::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad fraction {s:?}"))))
            .transpose()
    }
}

fn plans_for(m: &Matrix01, spec: &CouplingAuditSpec) -> Option<Vec<rrd_core::ShufflePlan>> {
    match &spec.restricted {
        None => {
            let s = m.ex_count(spec.i1, spec.i2);
            enumerate_plans(m, spec.i1, spec.i2, &[], s).ok()
        }
        Some((frozen, s)) => enumerate_plans(m, spec.i1, spec.i2, frozen, *s).ok(),
    }
}

/// Pushes the uniform law on the matrices where the plan is defined
/// through a random shuffle and compares the result with that law.
pub fn coupling_audit(spec: &CouplingAuditSpec) -> Result<CouplingVerdict> {
    let (n, d) = (spec.n, spec.d);
    if spec.i1 == spec.i2 || spec.i1.max(spec.i2) >= n {
        return Err(LabError::InvalidSpec(format!("rows ({}, {}) invalid for n={n}", spec.i1, spec.i2)));
    }
    let all = enumerate_all(n, d)?;
    let legal: Vec<&Matrix01> = all.iter().filter(|m| plans_for(m, spec).is_some()).collect();
    if legal.is_empty() {
        return Err(LabError::InvalidSpec("no matrix admits the requested plan".into()));
    }
    let index: HashMap<&Matrix01, usize> = legal.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    let size = legal.len();
    let (frozen, s) = match &spec.restricted {
        None => (Vec::new(), None),
        Some((f, s)) => {
            let mut f = f.clone();
            f.sort_unstable();
            (f, Some(*s))
        }
    };
    let mut verdict = CouplingVerdict {
        n,
        d,
        i1: spec.i1,
        i2: spec.i2,
        frozen,
        s,
        mode: spec.mode,
        support: size,
        tv: 0.0,
        tv_exact: None,
        chi_square: None,
        pass: false,
    };
    match spec.mode {
        AuditMode::Exact => {
            // masses scaled by `size`, so uniform is 1 per matrix
            let mut mass = vec![BigRational::zero(); size];
            let mut outside = BigRational::zero();
            for m in &legal {
                let plans = plans_for(m, spec).expect("legal");
                let w = BigRational::new(BigInt::one(), BigInt::from(plans.len()));
                for plan in &plans {
                    let image = apply_plan(m, plan)?;
                    match index.get(&image) {
                        Some(&k) => mass[k] += &w,
                        None => outside += &w,
                    }
                }
            }
            let dev: BigRational = mass.iter().map(|x| (x - BigRational::one()).abs()).sum::<BigRational>() + outside;
            let tv = dev / BigRational::from_integer(BigInt::from(2 * size));
            verdict.tv = tv.to_f64().unwrap_or(f64::NAN);
            verdict.pass = tv.is_zero();
            verdict.tv_exact = Some(tv);
        }
        AuditMode::Chi2 => {
            check_trials(spec.trials)?;
            let sampler = RrdSampler::best(n, d)?;
            let hits: Vec<Option<usize>> = (0..spec.trials as u32)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_stream(spec.seed, 0, t);
                    // condition on the plan being defined
                    let m = loop {
                        let m = sampler.sample(&mut rng);
                        if index.contains_key(&m) {
                            break m;
                        }
                    };
                    let plan = match &spec.restricted {
                        None => rrd_core::make_shuffle_plan(&m, spec.i1, spec.i2, &mut rng),
                        Some((f, s)) => rrd_core::make_restricted_plan(&m, spec.i1, spec.i2, f, *s, &mut rng),
                    }
                    .expect("legal matrix");
                    let image = apply_plan(&m, &plan).expect("plan built for m");
                    index.get(&image).copied()
                })
                .collect();
            let mut counts = vec![0u64; size];
            let mut outside = 0u64;
            for h in hits {
                match h {
                    Some(k) => counts[k] += 1,
                    None => outside += 1,
                }
            }
            let trials = spec.trials as f64;
            let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / trials).collect();
            verdict.tv = total_variation(&emp, &vec![1.0 / size as f64; size]) + outside as f64 / (2.0 * trials);
            let chi = chi_square_uniform(&counts, 0.99);
            verdict.pass = chi.pass && outside == 0;
            verdict.chi_square = Some(chi);
        }
    }
    Ok(verdict)
}

/// Exact audits for every frozen set and every shuffle size that some
/// matrix admits.
pub fn restricted_sweep(n: usize, d: usize, i1: usize, i2: usize) -> Result<Vec<CouplingVerdict>> {
    use itertools::Itertools;
    let mut out = Vec::new();
    for size in 0..=n {
        for frozen in (0..n).combinations(size) {
            for s in 0..=d {
                let spec = CouplingAuditSpec {
                    n,
                    d,
                    i1,
                    i2,
                    restricted: Some((frozen.clone(), s)),
                    mode: AuditMode::Exact,
                    trials: 1,
                    seed: 0,
                };
                match coupling_audit(&spec) {
                    Ok(v) => out.push(v),
                    Err(LabError::InvalidSpec(_)) => break,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancySample {
    pub trial: u64,
    pub pass: bool,
    pub good_d: DiscrepancyReport,
    pub codegree: EventReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyAudit {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub passed: u64,
    pub estimate: MCEstimate,
    pub samples: Vec<DiscrepancySample>,
}

/// Runs the good-event checks and the codegree check on `trials` samples.
pub fn discrepancy_audit(
    n: usize,
    d: usize,
    trials: u64,
    mode: SampleMode,
    cfg: &GoodEventConfig,
    seed: u64,
) -> Result<DiscrepancyAudit> {
    check_trials(trials)?;
    cfg.validate()?;
    let start = Instant::now();
    let sampler = RrdSampler::new(n, d, mode, None)?;
    let samples: Vec<DiscrepancySample> = (0..trials as u32)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_stream(seed, 0, t);
            let m = sampler.sample(&mut rng);
            let good_d = check_good_d(&m, d, cfg, &mut rng)?;
            let codegree = check_codegree(&m, cfg.delta)?;
            Ok(DiscrepancySample { trial: t as u64, pass: good_d.pass && codegree.pass, good_d, codegree })
        })
        .collect::<Result<_>>()?;
    let passed = samples.iter().filter(|s| s.pass).count() as u64;
    Ok(DiscrepancyAudit {
        n,
        d,
        seed,
        passed,
        estimate: MCEstimate::new(passed, trials, seed, start.elapsed().as_secs_f64()),
        samples,
    })
}
