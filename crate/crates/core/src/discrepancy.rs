//! Checkers for codegree concentration, edge discrepancy, thin minors,
//! small-set expansion and the expansion conditions for general 0/1
//! supports.
//!
//! Logarithms are natural. Every check is exact in the column set `B`:
//! for a fixed row set the extremal `B` of each size is read off sorted
//! column masses.

use itertools::Itertools;
use num_integer::binomial;
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix01;

pub type Rational128 = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodEventConfig {
    pub delta: f64,
    pub eps: f64,
    pub eps0: f64,
    pub gamma: f64,
    pub eta: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "C2")]
    pub big_c2: f64,
    /// Constant in the large-minor size threshold `(C0/ε²)(log n/p)`.
    #[serde(rename = "C0")]
    pub c0: f64,
    /// Largest family enumerated exhaustively.
    pub budget: u64,
    /// Random candidates drawn when a family exceeds the budget.
    pub samples: u64,
}

impl Default for GoodEventConfig {
    fn default() -> Self {
        GoodEventConfig {
            delta: 0.5,
            eps: 0.5,
            eps0: 0.5,
            gamma: 0.1,
            eta: 0.5,
            c1: 0.1,
            c2: 0.3,
            big_c2: 8.0,
            c0: 1.0,
            budget: 1_000_000,
            samples: 10_000,
        }
    }
}

impl GoodEventConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = [("delta", self.delta), ("eps", self.eps), ("eps0", self.eps0), ("gamma", self.gamma), ("eta", self.eta)];
        for (name, v) in unit {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0,1], got {v}")));
            }
        }
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("C2", self.big_c2), ("C0", self.c0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    Exact,
    Sampled,
}

impl CheckMode {
    fn and(self, other: CheckMode) -> CheckMode {
        if self == CheckMode::Exact && other == CheckMode::Exact {
            CheckMode::Exact
        } else {
            CheckMode::Sampled
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    None,
    Pair { i1: usize, i2: usize, transposed: bool },
    Line { index: usize, column: bool },
    Set { set: Vec<usize>, transposed: bool },
    Sets { rows: Vec<usize>, cols: Vec<usize>, transposed: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeClassReport {
    pub size: usize,
    pub threshold: f64,
    /// Settled by the degree-counting bound without search.
    pub certified: bool,
    pub mode: CheckMode,
    pub pass: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventReport {
    pub name: String,
    pub pass: bool,
    /// Extremal value of the event's statistic.
    pub statistic: Option<f64>,
    /// Smallest slack; negative on failure, `None` when the family is empty.
    pub margin: Option<f64>,
    pub witness: Witness,
    pub mode: CheckMode,
    pub samples_used: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub classes: Vec<SizeClassReport>,
}

impl EventReport {
    fn vacuous(name: &str) -> Self {
        EventReport {
            name: name.to_string(),
            pass: true,
            statistic: None,
            margin: None,
            witness: Witness::None,
            mode: CheckMode::Exact,
            samples_used: 0,
            classes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub pass: bool,
    pub mode: CheckMode,
    pub events: Vec<EventReport>,
}

impl DiscrepancyReport {
    pub fn new(events: Vec<EventReport>) -> Self {
        let pass = events.iter().all(|e| e.pass);
        let mode = events.iter().fold(CheckMode::Exact, |m, e| m.and(e.mode));
        DiscrepancyReport { pass, mode, events }
    }

    pub fn event(&self, name: &str) -> Option<&EventReport> {
        self.events.iter().find(|e| e.name == name)
    }
}

fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn ln_n(n: usize) -> f64 {
    (n as f64).ln()
}

fn density(m: &Matrix01) -> Result<(usize, f64)> {
    let d = m.require_regular()?;
    let n = m.n();
    if d == 0 || d == n {
        return Err(Error::DegenerateDegree { n, d, reason: "p(1-p) vanishes" });
    }
    Ok((d, d as f64 / n as f64))
}

fn random_subset<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut s = sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}

/// `max |ex(i1,i2)/(p(1-p)n) - 1|` over ordered pairs, for `M` and `Mᵀ`.
pub fn check_codegree(m: &Matrix01, delta: f64) -> Result<EventReport> {
    let (d, _) = density(m)?;
    let n = m.n();
    let scale = (d * (n - d)) as f64 / n as f64;
    let mut worst = (-1.0f64, Witness::None);
    for (mat, transposed) in [(m.clone(), false), (m.transpose(), true)] {
        for i1 in 0..n {
            for i2 in 0..n {
                if i1 == i2 {
                    continue;
                }
                let dev = (mat.ex_count(i1, i2) as f64 / scale - 1.0).abs();
                if dev > worst.0 {
                    worst = (dev, Witness::Pair { i1, i2, transposed });
                }
            }
        }
    }
    let (dev, witness) = if n < 2 { (0.0, Witness::None) } else { worst };
    Ok(EventReport {
        name: "codegree".into(),
        pass: dev <= delta,
        statistic: Some(dev),
        margin: Some(delta - dev),
        witness,
        mode: CheckMode::Exact,
        samples_used: 0,
        classes: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDeviation {
    pub e: usize,
    pub mu: Rational128,
    pub mu_hat: Rational128,
    /// `e - mu`.
    pub deviation: Rational128,
    /// `|e - mu| / mu_hat`; `None` stands for infinity.
    pub tau: Option<Rational128>,
}

/// Exact `e(A,B)`, `μ = p|A||B|`, `μ̂ = p min(|A||B|, |Aᶜ||Bᶜ|)` and `τ`.
pub fn edge_deviation(m: &Matrix01, a: &[usize], b: &[usize]) -> Result<EdgeDeviation> {
    let n = m.n() as i128;
    let d = m.require_regular()? as i128;
    let e = m.edge_count(a, b)?;
    let (sa, sb) = (a.len() as i128, b.len() as i128);
    let mu = Rational128::new(d * sa * sb, n);
    let mu_hat = Rational128::new(d * (sa * sb).min((n - sa) * (n - sb)), n);
    let deviation = Rational128::from_integer(e as i128) - mu;
    let tau = if mu_hat.is_zero() {
        deviation.is_zero().then(Rational128::zero)
    } else {
        Some(deviation.abs() / mu_hat)
    };
    Ok(EdgeDeviation { e, mu, mu_hat, deviation, tau })
}

/// Column masses `|{i ∈ rows : M(i,j) = 1}|`.
fn column_masses(m: &Matrix01, rows: &[usize]) -> Vec<usize> {
    let mut mass = vec![0usize; m.ncols()];
    for &i in rows {
        for j in m.row_ones(i) {
            mass[j] += 1;
        }
    }
    mass
}

/// Columns sorted by decreasing mass, ties by index.
fn order_by_mass(mass: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..mass.len()).collect();
    idx.sort_by(|&x, &y| mass[y].cmp(&mass[x]).then(x.cmp(&y)));
    idx
}

struct LargeScan {
    worst_tau: f64,
    witness: Witness,
}

/// Worst `τ` over all `B` with `|B| >= t` for a fixed row set.
fn scan_large_rows(m: &Matrix01, rows: &[usize], t: usize, scan: &mut LargeScan) {
    let n = m.n();
    let p = m.row_sum(0) as f64 / n as f64;
    let mass = column_masses(m, rows);
    let order = order_by_mass(&mass);
    let a = rows.len() as f64;
    let (mut top, mut bottom) = (0usize, 0usize);
    for b in 1..=n {
        top += mass[order[b - 1]];
        bottom += mass[order[n - b]];
        if b < t {
            continue;
        }
        let bf = b as f64;
        let mu = p * a * bf;
        let mu_hat = p * (a * bf).min((n as f64 - a) * (n as f64 - bf));
        for (e, heavy) in [(top, true), (bottom, false)] {
            let dev = (e as f64 - mu).abs();
            let tau = if mu_hat == 0.0 {
                if dev < 1e-9 { 0.0 } else { f64::INFINITY }
            } else {
                dev / mu_hat
            };
            if tau > scan.worst_tau {
                let cols: Vec<usize> =
                    if heavy { order[..b].to_vec() } else { order[n - b..].to_vec() };
                let mut cols = cols;
                cols.sort_unstable();
                scan.worst_tau = tau;
                scan.witness = Witness::Sets { rows: rows.to_vec(), cols, transposed: false };
            }
        }
    }
}

/// `|e(A,B) - μ| <= ε μ̂` for every `(A,B)` with both sides at least
/// `(C0/ε²)(log n/p)`.
pub fn check_large_minors<R: Rng + ?Sized>(
    m: &Matrix01,
    eps: f64,
    c0: f64,
    budget: u64,
    samples: u64,
    rng: &mut R,
) -> Result<EventReport> {
    let n = m.n();
    let d = m.require_regular()?;
    if n == 0 || d == 0 {
        return Err(Error::DegenerateDegree { n, d, reason: "empty matrix" });
    }
    let p = d as f64 / n as f64;
    let t = ((c0 / (eps * eps)) * ln_n(n) / p).ceil().max(1.0) as usize;
    if t > n {
        return Ok(EventReport::vacuous("large_minors"));
    }
    let family: f64 = (t..=n).map(|a| binom_f64(n, a)).sum();
    let mut scan = LargeScan { worst_tau: -1.0, witness: Witness::None };
    let (mode, used) = if family <= budget as f64 {
        for a in t..=n {
            for rows in (0..n).combinations(a) {
                scan_large_rows(m, &rows, t, &mut scan);
            }
        }
        (CheckMode::Exact, family as u64)
    } else {
        for _ in 0..samples {
            let a = rng.gen_range(t..=n);
            let rows = random_subset(n, a, rng);
            scan_large_rows(m, &rows, t, &mut scan);
        }
        (CheckMode::Sampled, samples)
    };
    Ok(EventReport {
        name: "large_minors".into(),
        pass: scan.worst_tau <= eps,
        statistic: Some(scan.worst_tau),
        margin: Some(eps - scan.worst_tau),
        witness: scan.witness,
        mode,
        samples_used: used,
        classes: Vec::new(),
    })
}

/// `s0(γ) = (log n / 2γ)(n/d)`.
pub fn s0(n: usize, d: usize, gamma: f64) -> f64 {
    ln_n(n) / (2.0 * gamma) * n as f64 / d as f64
}

/// How one size class is searched.
enum Search {
    Certified,
    Exhaustive,
    Sampled,
}

fn plan_search(n: usize, s: usize, certified: bool, budget: u64) -> Search {
    if certified {
        Search::Certified
    } else if binom_f64(n, s) <= budget as f64 {
        Search::Exhaustive
    } else {
        Search::Sampled
    }
}

fn candidates<R: Rng + ?Sized>(n: usize, s: usize, how: &Search, samples: u64, rng: &mut R) -> Box<dyn Iterator<Item = Vec<usize>>> {
    match how {
        Search::Certified => Box::new(std::iter::empty()),
        Search::Exhaustive => Box::new((0..n).combinations(s)),
        Search::Sampled => {
            let drawn: Vec<Vec<usize>> = (0..samples).map(|_| random_subset(n, s, rng)).collect();
            Box::new(drawn.into_iter())
        }
    }
}

/// Greedy sets with small neighborhoods: grow from each start by the row
/// adding the fewest new columns.
fn greedy_small_neighborhoods<R: Rng + ?Sized>(m: &Matrix01, s: usize, starts: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let n = m.n();
    let mut out = Vec::new();
    for start in sample(rng, n, starts.min(n)) {
        let mut set = vec![start];
        let mut mask = m.row_words(start).to_vec();
        while set.len() < s {
            let best = (0..n)
                .filter(|i| !set.contains(i))
                .min_by_key(|&i| {
                    m.row_words(i).iter().zip(&mask).map(|(a, b)| (a & !b).count_ones()).sum::<u32>()
                })
                .expect("s <= n");
            for (w, x) in mask.iter_mut().zip(m.row_words(best)) {
                *w |= x;
            }
            set.push(best);
        }
        set.sort_unstable();
        out.push(set);
    }
    out
}

/// Shared scan: `|N(S)| >= threshold(|S|)` for all sizes in `sizes`.
#[allow(clippy::too_many_arguments)]
fn expansion_scan<R: Rng + ?Sized>(
    name: &str,
    m: &Matrix01,
    transposed: bool,
    sizes: std::ops::RangeInclusive<usize>,
    threshold: &dyn Fn(usize) -> f64,
    budget: u64,
    samples: u64,
    rng: &mut R,
) -> EventReport {
    let n = m.n();
    let min_row = m.row_sums().iter().copied().min().unwrap_or(0);
    let max_col = m.col_sums().iter().copied().max().unwrap_or(0).max(1);
    let mut report = EventReport::vacuous(name);
    let mut worst = f64::INFINITY;
    for s in sizes {
        if s == 0 || s > n {
            continue;
        }
        let thr = threshold(s);
        let lower = min_row.max((s * min_row).div_ceil(max_col));
        let how = plan_search(n, s, lower as f64 >= thr, budget);
        let mut class_worst = lower as f64 - thr;
        let mut class_mode = CheckMode::Exact;
        let mut witness = None;
        if !matches!(how, Search::Certified) {
            class_worst = f64::INFINITY;
            let mut sets: Vec<Vec<usize>> = candidates(n, s, &how, samples, rng).collect();
            if matches!(how, Search::Sampled) {
                class_mode = CheckMode::Sampled;
                report.samples_used += samples;
                sets.extend(greedy_small_neighborhoods(m, s, 20, rng));
            }
            for set in sets {
                let slack = m.set_neighborhood_size(&set) as f64 - thr;
                if slack < class_worst {
                    class_worst = slack;
                    witness = Some(set);
                }
            }
        }
        let pass = class_worst >= 0.0;
        if class_worst < worst {
            worst = class_worst;
            if let Some(set) = witness {
                report.witness = Witness::Set { set, transposed };
            }
        }
        report.mode = report.mode.and(class_mode);
        report.pass &= pass;
        report.classes.push(SizeClassReport {
            size: s,
            threshold: thr,
            certified: matches!(how, Search::Certified),
            mode: class_mode,
            pass,
            margin: class_worst,
        });
    }
    if worst.is_finite() {
        report.margin = Some(worst);
    }
    report
}

/// `|N(S)| >= (γ/log n) d|S|` for every `|S| <= s0(γ)`.
pub fn check_expansion<R: Rng + ?Sized>(m: &Matrix01, gamma: f64, budget: u64, samples: u64, rng: &mut R) -> Result<EventReport> {
    let d = m.require_regular()?;
    let n = m.n();
    if d == 0 {
        return Err(Error::DegenerateDegree { n, d, reason: "no edges" });
    }
    let top = (s0(n, d, gamma).floor() as usize).min(n);
    let thr = move |s: usize| gamma * d as f64 * s as f64 / ln_n(n);
    Ok(expansion_scan("expansion", m, false, 1..=top, &thr, budget, samples, rng))
}

/// No `(S,B)` with `|S| <= s0(γ)`, `|B| <= (ε0γ/log n) d|S|` and
/// `max(e(S,B), e(B,S)) >= ε0 d|S|`.
pub fn check_thin_minors<R: Rng + ?Sized>(
    m: &Matrix01,
    eps0: f64,
    gamma: f64,
    budget: u64,
    samples: u64,
    rng: &mut R,
) -> Result<EventReport> {
    let d = m.require_regular()?;
    let n = m.n();
    if d == 0 {
        return Err(Error::DegenerateDegree { n, d, reason: "no edges" });
    }
    let mt = m.transpose();
    let top = (s0(n, d, gamma).floor() as usize).min(n);
    let mut report = EventReport::vacuous("thin_minors");
    let mut worst = f64::INFINITY;
    for s in 1..=top {
        let limit = eps0 * d as f64 * s as f64;
        let b = ((eps0 * gamma * d as f64 * s as f64 / ln_n(n)).floor() as usize).min(n);
        let per_line = s.min(d);
        let certified = ((b * per_line) as f64) < limit;
        let how = plan_search(n, s, certified, budget);
        let mut class_worst = 1.0 - (b * per_line) as f64 / limit;
        let mut class_mode = CheckMode::Exact;
        let mut witness = None;
        if !certified {
            class_worst = f64::INFINITY;
            let mut sets: Vec<Vec<usize>> = candidates(n, s, &how, samples, rng).collect();
            if matches!(how, Search::Sampled) {
                class_mode = CheckMode::Sampled;
                report.samples_used += samples;
            }
            sets.sort_unstable();
            for set in sets {
                for (mat, transposed) in [(m, false), (&mt, true)] {
                    let mass = column_masses(mat, &set);
                    let order = order_by_mass(&mass);
                    let e: usize = order[..b].iter().map(|&j| mass[j]).sum();
                    let slack = 1.0 - e as f64 / limit;
                    if slack < class_worst {
                        class_worst = slack;
                        let mut cols = order[..b].to_vec();
                        cols.sort_unstable();
                        witness = Some(Witness::Sets { rows: set.clone(), cols, transposed });
                    }
                }
            }
        }
        let pass = class_worst > 0.0;
        if class_worst < worst {
            worst = class_worst;
            if let Some(w) = witness {
                report.witness = w;
            }
        }
        report.mode = report.mode.and(class_mode);
        report.pass &= pass;
        report.classes.push(SizeClassReport {
            size: s,
            threshold: limit,
            certified,
            mode: class_mode,
            pass,
            margin: class_worst,
        });
    }
    if worst.is_finite() {
        report.margin = Some(worst);
    }
    Ok(report)
}

/// The four expansion conditions for a general 0/1 support with degree
/// parameter `d`.
pub fn check_good_d<R: Rng + ?Sized>(sigma: &Matrix01, d: usize, cfg: &GoodEventConfig, rng: &mut R) -> Result<DiscrepancyReport> {
    cfg.validate()?;
    let n = sigma.n();
    if d == 0 || d > n {
        return Err(Error::InvalidParameter(format!("need 1 <= d <= n, got d={d} n={n}")));
    }
    let st = sigma.transpose();
    let rows = sigma.row_sums();
    let cols = sigma.col_sums();

    let min_line = |v: &[usize]| v.iter().copied().enumerate().min_by_key(|&(_, x)| x).unwrap_or((0, 0));
    let (ri, rmin) = min_line(rows);
    let (ci, cmin) = min_line(cols);
    let (index, column, low) = if rmin <= cmin { (ri, false, rmin) } else { (ci, true, cmin) };
    let cond0 = EventReport {
        name: "min_degree".into(),
        pass: low >= d,
        statistic: Some(low as f64),
        margin: Some(low as f64 - d as f64),
        witness: Witness::Line { index, column },
        mode: CheckMode::Exact,
        samples_used: 0,
        classes: Vec::new(),
    };

    let thr = move |s: usize| (cfg.c1 * d as f64 * s as f64 / ln_n(n)).min(n as f64 / 2.0);
    let e1 = expansion_scan("small_set_expansion", sigma, false, 1..=n, &thr, cfg.budget, cfg.samples, rng);
    let e2 = expansion_scan("small_set_expansion", &st, true, 1..=n, &thr, cfg.budget, cfg.samples, rng);
    let cond1 = merge("small_set_expansion", e1, e2);

    let cond2 = no_large_sparse(sigma, d, cfg, rng);

    let max_line = |v: &[usize]| v.iter().copied().enumerate().max_by_key(|&(_, x)| x).unwrap_or((0, 0));
    let (ri, rmax) = max_line(rows);
    let (ci, cmax) = max_line(cols);
    let (index, column, high) = if rmax >= cmax { (ri, false, rmax) } else { (ci, true, cmax) };
    let cond3 = EventReport {
        name: "no_thin_dense".into(),
        pass: high <= d,
        statistic: Some(high as f64),
        margin: Some(d as f64 - high as f64),
        witness: Witness::Line { index, column },
        mode: CheckMode::Exact,
        samples_used: 0,
        classes: Vec::new(),
    };
    Ok(DiscrepancyReport::new(vec![cond0, cond1, cond2, cond3]))
}

fn merge(name: &str, a: EventReport, b: EventReport) -> EventReport {
    let margin = match (a.margin, b.margin) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let witness = if b.margin.is_some() && b.margin == margin && a.margin != margin { b.witness } else { a.witness };
    let mut classes = a.classes;
    classes.extend(b.classes);
    EventReport {
        name: name.into(),
        pass: a.pass && b.pass,
        statistic: None,
        margin,
        witness,
        mode: a.mode.and(b.mode),
        samples_used: a.samples_used + b.samples_used,
        classes,
    }
}

/// `e(A,B) >= c2 (d/n)|A||B|` whenever `|A|,|B| >= C2 (n/d) log n`.
fn no_large_sparse<R: Rng + ?Sized>(sigma: &Matrix01, d: usize, cfg: &GoodEventConfig, rng: &mut R) -> EventReport {
    let n = sigma.n();
    let name = "no_large_sparse";
    let t = (cfg.big_c2 * n as f64 / d as f64 * ln_n(n)).ceil().max(1.0) as usize;
    if t > n {
        return EventReport::vacuous(name);
    }
    let p = d as f64 / n as f64;
    let min_row = sigma.row_sums().iter().copied().min().unwrap_or(0);
    // e(A,B) >= |A| (min_row - (n - |B|)) is enough when it clears the bound everywhere
    let certified = (t..=n).all(|b| {
        let per_row = min_row as f64 - (n - b) as f64;
        per_row >= cfg.c2 * p * b as f64
    });
    if certified {
        let mut r = EventReport::vacuous(name);
        r.margin = Some((t..=n).map(|b| min_row as f64 - (n - b) as f64 - cfg.c2 * p * b as f64).fold(f64::INFINITY, f64::min));
        return r;
    }
    let family: f64 = (t..=n).map(|a| binom_f64(n, a)).sum();
    let exhaustive = family <= cfg.budget as f64;
    let mut worst = f64::INFINITY;
    let mut witness = Witness::None;
    let mut visit = |rows: Vec<usize>| {
        let mass = column_masses(sigma, &rows);
        let mut order = order_by_mass(&mass);
        order.reverse();
        let mut e = 0usize;
        for b in 1..=n {
            e += mass[order[b - 1]];
            if b < t {
                continue;
            }
            let slack = (e as f64 - cfg.c2 * p * (rows.len() * b) as f64) / (p * (rows.len() * b) as f64);
            if slack < worst {
                worst = slack;
                let mut cols = order[..b].to_vec();
                cols.sort_unstable();
                witness = Witness::Sets { rows: rows.clone(), cols, transposed: false };
            }
        }
    };
    let (mode, used) = if exhaustive {
        for a in t..=n {
            for rows in (0..n).combinations(a) {
                visit(rows);
            }
        }
        (CheckMode::Exact, family as u64)
    } else {
        for _ in 0..cfg.samples {
            let a = rng.gen_range(t..=n);
            visit(random_subset(n, a, rng));
        }
        (CheckMode::Sampled, cfg.samples)
    };
    EventReport {
        name: name.into(),
        pass: worst >= 0.0,
        statistic: None,
        margin: Some(worst),
        witness,
        mode,
        samples_used: used,
        classes: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub tau: f64,
    pub empirical: f64,
    pub exact: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymGroupReport {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    pub trials: u64,
    pub mean: f64,
    pub expected_mean: f64,
    /// Exact standard deviation of a single draw.
    pub sd: f64,
    pub mean_within_3sigma: bool,
    pub empirical: Vec<f64>,
    pub hypergeometric: Vec<f64>,
    pub tv_distance: f64,
    pub tail_constant: f64,
    pub tails: Vec<TailRow>,
    pub tails_below_bound: bool,
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits().saturating_sub(60);
    let (nn, dd) = (num >> shift, den >> shift);
    nn.to_f64().unwrap_or(f64::INFINITY) / dd.to_f64().unwrap_or(f64::INFINITY)
}

/// Law of `|A ∩ π⁻¹(B)|` for uniform `π`: hypergeometric.
pub fn hypergeometric_pmf(m: usize, a: usize, b: usize) -> Vec<f64> {
    let big = |x: usize| BigUint::from(x);
    let total = binomial(big(m), big(b));
    (0..=a.min(b))
        .map(|k| {
            if b < k || m - a < b - k {
                return 0.0;
            }
            ratio_f64(&(binomial(big(a), big(k)) * binomial(big(m - a), big(b - k))), &total)
        })
        .collect()
}

pub const SYM_GROUP_TAIL_CONSTANT: f64 = 0.25;

/// Empirical law of `e_π(A,B) = |{i ∈ A : π(i) ∈ B}|` against the exact
/// hypergeometric law and the tail bound `2 exp(-c τ²/(1+τ) |A||B|/m)`.
pub fn sym_group_concentration<R: Rng + ?Sized>(
    m: usize,
    a: &[usize],
    b: &[usize],
    trials: u64,
    rng: &mut R,
) -> Result<SymGroupReport> {
    if let Some(&x) = a.iter().chain(b).find(|&&x| x >= m) {
        return Err(Error::IndexOutOfRange { index: x, n: m });
    }
    let in_b: Vec<bool> = (0..m).map(|j| b.contains(&j)).collect();
    let mut counts = vec![0u64; a.len().min(b.len()) + 1];
    let mut perm: Vec<usize> = (0..m).collect();
    let mut sum = 0u64;
    for _ in 0..trials {
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
        let e = a.iter().filter(|&&i| in_b[perm[i]]).count();
        counts[e] += 1;
        sum += e as u64;
    }
    let tf = trials.max(1) as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / tf).collect();
    let exact = hypergeometric_pmf(m, a.len(), b.len());
    let tv_distance = 0.5 * empirical.iter().zip(&exact).map(|(x, y)| (x - y).abs()).sum::<f64>();
    let expected_mean = (a.len() * b.len()) as f64 / m as f64;
    let variance: f64 = exact.iter().enumerate().map(|(k, p)| p * (k as f64 - expected_mean).powi(2)).sum();
    let sd = variance.sqrt();
    let mean = sum as f64 / tf;
    let mean_within_3sigma = (mean - expected_mean).abs() <= 3.0 * sd / tf.sqrt() + 1e-12;
    let mut tails = Vec::new();
    if expected_mean > 0.0 {
        for tau in [0.1, 0.25, 0.5, 1.0, 2.0] {
            let far = |k: usize| (k as f64 - expected_mean).abs() >= tau * expected_mean - 1e-12;
            let emp: f64 = empirical.iter().enumerate().filter(|(k, _)| far(*k)).map(|(_, p)| p).sum();
            let ex: f64 = exact.iter().enumerate().filter(|(k, _)| far(*k)).map(|(_, p)| p).sum();
            let bound = 2.0 * (-SYM_GROUP_TAIL_CONSTANT * tau * tau / (1.0 + tau) * expected_mean).exp();
            tails.push(TailRow { tau, empirical: emp, exact: ex, bound });
        }
    }
    let tails_below_bound = tails.iter().all(|t| t.empirical <= t.bound);
    Ok(SymGroupReport {
        m,
        a: a.len(),
        b: b.len(),
        trials,
        mean,
        expected_mean,
        sd,
        mean_within_3sigma,
        empirical,
        hypergeometric: exact,
        tv_distance,
        tail_constant: SYM_GROUP_TAIL_CONSTANT,
        tails,
        tails_below_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadPairReport {
    pub b_size: usize,
    pub eps: f64,
    /// `|A \ A_ε|`.
    pub outside_a_eps: usize,
    /// `(i, |S_ε(i)|)` for `i ∈ A_ε`.
    pub s_eps_sizes: Vec<(usize, usize)>,
    pub max_s_eps: usize,
    /// `|A \ A'|` with `A' = {i : |B(i)| >= c2 p|B|}`.
    pub below_c2: usize,
    pub c2: f64,
    /// `10 p⁻¹ log n`.
    pub bound: f64,
    pub within_bound: bool,
    pub all_pairs_bad: bool,
}

/// Counts rows whose neighborhoods split `B` and `Bᶜ` unevenly, and, for
/// the remaining rows, the partners forming ε-bad pairs.
pub fn bad_pair_audit(m: &Matrix01, b: &[usize], eps: f64, c2: f64) -> Result<BadPairReport> {
    let rows: Vec<usize> = (0..m.n()).collect();
    bad_pair_audit_rows(m, &rows, b, eps, c2)
}

pub fn bad_pair_audit_rows(m: &Matrix01, a: &[usize], b: &[usize], eps: f64, c2: f64) -> Result<BadPairReport> {
    let n = m.n();
    let d = m.require_regular()?;
    let mut bset: Vec<usize> = b.to_vec();
    bset.sort_unstable();
    bset.dedup();
    if bset.is_empty() || bset.len() >= n {
        return Err(Error::InvalidParameter("B must be a nonempty proper subset".into()));
    }
    if let Some(&j) = bset.iter().chain(a).find(|&&j| j >= n) {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let p = d as f64 / n as f64;
    let bsz = bset.len() as f64;
    let csz = (n - bset.len()) as f64;
    let bmask = m.col_mask(&bset);
    let in_b = |j: usize| bset.binary_search(&j).is_ok();
    let b_of = |i: usize| m.row_ones(i).into_iter().filter(|&j| in_b(j)).count();
    let mut a_eps = Vec::new();
    let mut below_c2 = 0;
    for &i in a {
        let bi = b_of(i) as f64;
        let ci = (d - b_of(i)) as f64;
        if ((bi / (p * bsz)) - 1.0).abs() <= eps && ((ci / (p * csz)) - 1.0).abs() <= eps {
            a_eps.push(i);
        }
        if bi < c2 * p * bsz {
            below_c2 += 1;
        }
    }
    let ex_in = |i1: usize, i2: usize, inside: bool| -> usize {
        m.row_words(i1)
            .iter()
            .zip(m.row_words(i2))
            .zip(&bmask)
            .map(|((x, y), bm)| {
                let ex = x & !y;
                (if inside { ex & bm } else { ex & !bm }).count_ones() as usize
            })
            .sum()
    };
    let mut s_eps_sizes = Vec::new();
    let mut all_bad = true;
    for &i in &a_eps {
        let mut size = 0;
        for &i2 in &a_eps {
            if i2 == i {
                continue;
            }
            let bad = ex_in(i, i2, true) as f64 <= eps * p * bsz || ex_in(i2, i, false) as f64 <= eps * p * csz;
            all_bad &= bad;
            size += bad as usize;
        }
        s_eps_sizes.push((i, size));
    }
    let max_s_eps = s_eps_sizes.iter().map(|x| x.1).max().unwrap_or(0);
    let outside = a.len() - a_eps.len();
    let bound = 10.0 / p * ln_n(n);
    Ok(BadPairReport {
        b_size: bset.len(),
        eps,
        outside_a_eps: outside,
        s_eps_sizes,
        max_s_eps,
        below_c2,
        c2,
        bound,
        within_bound: (outside as f64) <= bound && (max_s_eps as f64) <= bound,
        all_pairs_bad: all_bad && a_eps.len() > 1,
    })
}
