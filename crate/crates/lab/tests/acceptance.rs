//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use rrd_core::coupling::{apply_plan, determinant_walk, locate_patches, make_restricted_plan, make_shuffle_plan, walk_decomposition, PatchParams};
use rrd_core::discrepancy::{edge_deviation, sym_group_concentration, GoodEventConfig};
use rrd_core::matrix::Matrix01;
use rrd_core::rank::{corank_exact, is_singular, level_profile, sls_witness_to_sparse, sparse_to_sls_witness, xi0_kernel_check, IntMatrix};
use rrd_core::rng::{seeded, trial_stream};
use rrd_core::sampler::{count, count_budget_ok, default_mcmc_steps, enumerate_all, sample_permutation, RrdSampler, SampleMode};
use rrd_core::scalar::sum_over;

use rrd_lab::experiments::{all_ones, central_binomial_bound, even_cycle_probability_weighted};
use rrd_lab::{
    coupling_audit, d2_cycle_experiment, discrepancy_audit, erdos_oracle, mc_singularity, restricted_sweep, AuditMode,
    CouplingAuditSpec, ExperimentSpec,
};

fn verdict(id: u32, what: &str, pass: bool, detail: String, start: Instant) {
    let line = format!(
        "criterion {id:>2} {what}: {} ({detail}; {:.1}s)\n",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    // straight to the process stdout so the line survives output capture
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {id} failed: {detail}");
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn criterion_01_counts() {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 2..=6usize {
        let fact: BigUint = (1..=n).map(BigUint::from).product();
        if count(n, 1).unwrap() != fact {
            bad.push(format!("count({n},1)"));
        }
    }
    if count(4, 2).unwrap() != BigUint::from(enumerate_all(4, 2).unwrap().len()) {
        bad.push("count(4,2) vs enumeration".into());
    }
    let mut pairs = 0;
    for n in 1..=14usize {
        for d in 0..=n {
            if count_budget_ok(n, d) && count_budget_ok(n, n - d) {
                pairs += 1;
                if count(n, d).unwrap() != count(n, n - d).unwrap() {
                    bad.push(format!("symmetry at ({n},{d})"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(1, "enumeration/count oracle", bad.is_empty() && secs < 10.0, format!("{pairs} symmetric pairs, problems {bad:?}"), start);
}

#[test]
fn criterion_02_coupling_law() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, d) in [(3, 1), (4, 2), (5, 2)] {
        let spec = CouplingAuditSpec { n, d, i1: 0, i2: 1, restricted: None, mode: AuditMode::Exact, trials: 1, seed: 0 };
        let v = coupling_audit(&spec).unwrap();
        pass &= v.pass && v.tv_exact.as_ref().is_some_and(Zero::is_zero);
        lines.push(format!("({n},{d}) tv={}", v.tv));
    }
    let sweep = restricted_sweep(4, 2, 0, 1).unwrap();
    let restricted_ok = sweep.iter().all(|v| v.pass);
    pass &= restricted_ok && !sweep.is_empty();
    lines.push(format!("{} restricted (frozen, s) at (4,2) exact", sweep.len()));
    pass &= start.elapsed().as_secs_f64() < 60.0;
    verdict(2, "coupling law", pass, lines.join(", "), start);
}

fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<BigRational> {
    (0..n).map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=4))).collect()
}

#[test]
fn criterion_03_walk_identities() {
    let start = Instant::now();
    let mut rng = seeded(303);
    let (mut walk_bad, mut det_bad, mut restricted) = (0, 0, 0);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=12usize);
        let d = rng.gen_range(1..n);
        let m = RrdSampler::best(n, d).unwrap().sample(&mut rng);
        let i1 = rng.gen_range(0..n);
        let i2 = (i1 + rng.gen_range(1..n)) % n;
        let plan = if rng.gen_bool(0.5) {
            make_shuffle_plan(&m, i1, i2, &mut rng).unwrap()
        } else {
            restricted += 1;
            let frozen: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let ex = m.co_ex_sets(i1, i2).unwrap();
            let room = ex.ex12.iter().filter(|j| !frozen.contains(j)).count().min(ex.ex21.iter().filter(|j| !frozen.contains(j)).count());
            make_restricted_plan(&m, i1, i2, &frozen, rng.gen_range(0..=room), &mut rng).unwrap()
        };
        let u = random_vector(n, &mut rng);
        let after = apply_plan(&m, &plan).unwrap();
        let direct = (sum_over(&u, after.row_ones(i1)), sum_over(&u, after.row_ones(i2)));
        if walk_decomposition(&m, &plan, &u).unwrap().reconstruct() != direct {
            walk_bad += 1;
        }
        let u2 = random_vector(n, &mut rng);
        let dw = determinant_walk(&m, &plan, &u, &u2).unwrap();
        let full = plan.frozen.is_empty() && plan.s() == m.ex_count(i1, i2);
        if !dw.identity_holds || (full && dw.d_after != dw.w_v) {
            det_bad += 1;
        }
    }
    let pass = walk_bad == 0 && det_bad == 0 && start.elapsed().as_secs_f64() < 30.0;
    verdict(
        3,
        "walk identities",
        pass,
        format!("1000 instances ({restricted} restricted), {walk_bad} walk and {det_bad} determinant mismatches"),
        start,
    );
}

#[test]
fn criterion_04_d2_singularity() {
    let start = Instant::now();
    let exhaustive = d2_cycle_experiment(&[4], 1, SampleMode::Enumerate, None, 0).unwrap();
    let all_singular = exhaustive[0].estimate.hits == exhaustive[0].estimate.trials && exhaustive[0].estimate.trials == 90;
    // ten times the default chain length; the default is borderline at n = 8
    let rows: Vec<_> = [8usize, 10, 12]
        .into_iter()
        .flat_map(|n| d2_cycle_experiment(&[n], 10_000, SampleMode::Mcmc, Some(10 * default_mcmc_steps(n, 2)), 404 + n as u64).unwrap())
        .collect();
    let mut detail = vec![format!("(4,2) {}/{}", exhaustive[0].estimate.hits, exhaustive[0].estimate.trials)];
    for r in &rows {
        detail.push(format!(
            "n={} p_hat={:.4} ci=[{:.4},{:.4}] 1-q_n={:.4}{} uniform-law value={:.4}{}",
            r.n,
            r.estimate.p_hat,
            r.estimate.ci_low,
            r.estimate.ci_high,
            r.one_minus_q_f64,
            if r.within_ci { "" } else { " outside" },
            r.weighted_f64,
            if r.within_ci_weighted { "" } else { " outside" },
        ));
    }
    let pass = all_singular && rows.iter().all(|r| r.within_ci) && start.elapsed().as_secs_f64() < 300.0;
    verdict(4, "d=2 singularity", pass, detail.join("; "), start);
}

#[test]
fn criterion_05_erdos() {
    let start = Instant::now();
    let mut rng = seeded(505);
    let mut violations = 0;
    let mut equality = true;
    for m in 1..=16usize {
        let bound = central_binomial_bound(m);
        let ones = erdos_oracle(&all_ones(m)).unwrap();
        equality &= ones.max_atom == bound;
        for _ in 0..200 {
            let x: Vec<BigRational> = (0..m)
                .map(|_| {
                    let num = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
                    q(num, rng.gen_range(1..=4))
                })
                .collect();
            let r = erdos_oracle(&x).unwrap();
            if r.m != m || r.max_atom > bound || r.max_atom > ones.max_atom {
                violations += 1;
            }
        }
    }
    let pass = violations == 0 && equality && start.elapsed().as_secs_f64() < 120.0;
    verdict(5, "anti-concentration oracle", pass, format!("3200 vectors, {violations} violations, all-equal attains bound: {equality}"), start);
}

#[test]
fn criterion_06_invertibility() {
    let start = Instant::now();
    let spec = ExperimentSpec {
        name: "invertibility".into(),
        grid: vec![(100, 20), (150, 30), (200, 40)],
        trials: 1000,
        mode: SampleMode::Mcmc,
        steps: None,
        seed: 606,
        out: std::env::temp_dir(),
    };
    let cells = mc_singularity(&spec).unwrap();
    let pass = cells.iter().all(|c| c.plain.hits == 0 && c.signed.hits == 0 && c.plain.ci_high < 0.004 && c.signed.ci_high < 0.004)
        && start.elapsed().as_secs_f64() < 1200.0;
    let detail = cells
        .iter()
        .map(|c| format!("({},{}) M {}/{} M± {}/{} ci_high {:.4}", c.n, c.d, c.plain.hits, c.plain.trials, c.signed.hits, c.signed.trials, c.plain.ci_high))
        .collect::<Vec<_>>()
        .join("; ");
    verdict(6, "invertibility", pass, detail, start);
}

#[test]
fn criterion_07_xi0_kernel() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for (c, n) in [8usize, 12].into_iter().enumerate() {
        let mut ones_in_kernel = true;
        let mut corank_one = 0;
        for t in 0..500u32 {
            let r = xi0_kernel_check(n, &mut trial_stream(707, c as u32, t)).unwrap();
            ones_in_kernel &= r.kernel_contains_ones && r.zero_line_sums && r.corank >= 1;
            corank_one += (r.corank == 1) as u32;
        }
        let frac = corank_one as f64 / 500.0;
        pass &= ones_in_kernel && frac >= 0.9;
        detail.push(format!("n={n} corank 1 in {corank_one}/500, Xi0·1 = 0 always: {ones_in_kernel}"));
    }
    pass &= start.elapsed().as_secs_f64() < 300.0;
    verdict(7, "xi0 kernel", pass, detail.join("; "), start);
}

fn random_subset<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

#[test]
fn criterion_08_discrepancy_invariants() {
    let start = Instant::now();
    let mut rng = seeded(808);
    let mut samplers = std::collections::HashMap::new();
    let (mut duality_bad, mut degree_bad) = (0, 0);
    for _ in 0..10_000 {
        let n = rng.gen_range(4..=10usize);
        let d = rng.gen_range(1..n);
        let m = samplers.entry((n, d)).or_insert_with(|| RrdSampler::best(n, d).unwrap()).sample(&mut rng);
        let a = random_subset(n, &mut rng);
        let b = random_subset(n, &mut rng);
        let comp = |s: &[usize]| (0..n).filter(|i| !s.contains(i)).collect::<Vec<_>>();
        let dev = edge_deviation(&m, &a, &b).unwrap();
        let dual = edge_deviation(&m, &comp(&a), &comp(&b)).unwrap();
        duality_bad += (dev.deviation != dual.deviation) as u32;
        degree_bad += (dev.e > d * a.len()) as u32;
    }
    let a: Vec<usize> = (0..7).collect();
    let b: Vec<usize> = (5..15).collect();
    let sym = sym_group_concentration(20, &a, &b, 100_000, &mut rng).unwrap();
    let pass = duality_bad == 0 && degree_bad == 0 && sym.tv_distance < 0.01 && start.elapsed().as_secs_f64() < 120.0;
    verdict(
        8,
        "discrepancy invariants",
        pass,
        format!("{duality_bad} duality and {degree_bad} degree violations in 10^4 pairs, hypergeometric tv {:.4}", sym.tv_distance),
        start,
    );
}

#[test]
fn criterion_09_good_event_rates() {
    let start = Instant::now();
    let audit = discrepancy_audit(100, 25, 100, SampleMode::Mcmc, &GoodEventConfig::default(), 909).unwrap();
    let pass = audit.passed >= 95 && start.elapsed().as_secs_f64() < 600.0;
    let failing: BTreeSet<String> = audit
        .samples
        .iter()
        .flat_map(|s| s.good_d.events.iter().chain(std::iter::once(&s.codegree)))
        .filter(|e| !e.pass)
        .map(|e| e.name.clone())
        .collect();
    verdict(9, "good-event pass rate", pass, format!("{}/100 samples pass, failing checks {failing:?}", audit.passed), start);
}

/// `b = c a` for some nonzero `c`.
fn is_dilation(a: &[BigRational], b: &[BigRational]) -> bool {
    let Some(c) = a.iter().zip(b).find(|(v, _)| !v.is_zero()).map(|(v, w)| w / v) else {
        return false;
    };
    !c.is_zero() && a.iter().zip(b).all(|(v, w)| &(v * &c) == w)
}

#[test]
fn criterion_10_sparse_witness_round_trip() {
    let start = Instant::now();
    let (mut instances, mut vectors, mut bad) = (0, 0, 0);
    for (n, d) in [(4, 2), (5, 2)] {
        for m in enumerate_all(n, d).unwrap() {
            let a = IntMatrix::from(&m);
            if !is_singular(&a) {
                continue;
            }
            instances += 1;
            for x in corank_exact(&a).kernel_basis {
                let profile = level_profile(&x);
                for (lambda, size) in profile.iter_levels() {
                    vectors += 1;
                    let ok = (|| {
                        let y = sls_witness_to_sparse(&m, &x, lambda).ok()?;
                        let my = a.mul_rational(&y);
                        let target = if lambda.is_zero() { BigRational::zero() } else { BigRational::one() };
                        let support = y.iter().filter(|v| !v.is_zero()).count();
                        let (x2, l2) = sparse_to_sls_witness(&y, &m).ok()?;
                        let same_level = (0..n).all(|i| (&x[i] == lambda) == (x2[i] == l2));
                        let back = is_dilation(&sls_witness_to_sparse(&m, &x2, &l2).ok()?, &y);
                        let dilation = is_dilation(&x, &x2);
                        Some(my.iter().all(|v| *v == target) && support == n - size && dilation && same_level && back)
                    })();
                    bad += (ok != Some(true)) as u32;
                }
            }
        }
    }
    let pass = bad == 0 && instances > 0 && start.elapsed().as_secs_f64() < 60.0;
    verdict(10, "sparse witness round trip", pass, format!("{instances} singular matrices, {vectors} (vector, level) pairs, {bad} failures"), start);
}

#[test]
fn criterion_11_patches() {
    let start = Instant::now();
    let (n, d, k) = (60usize, 12usize, 6usize);
    let params = PatchParams::default();
    let sampler = RrdSampler::new(n, d, SampleMode::Mcmc, None).unwrap();
    let (mut bad, mut patches, mut successes) = (0, 0, 0);
    for t in 0..50u32 {
        let mut rng = trial_stream(1111, 0, t);
        let m: Matrix01 = sampler.sample(&mut rng);
        let perm = sample_permutation(k, &mut rng);
        let sigma: Vec<usize> = perm.iter().map(|&p| n - k + p).collect();
        let r = locate_patches(&m, &sigma, k, &params).unwrap();
        successes += r.success as u32;
        patches += r.patches.len();
        let mut seen: BTreeSet<usize> = (0..k).collect();
        if r.fix_seq.first().is_some_and(|f| f != &(0..k).collect::<Vec<_>>()) {
            bad += 1;
        }
        for (l, (plus, minus)) in r.patches.iter().enumerate() {
            let large = plus.len() as f64 >= params.patch_fraction * d as f64 && minus.len() as f64 >= params.patch_fraction * d as f64;
            let fix: BTreeSet<usize> = r.fix_seq[l].iter().copied().collect();
            let monotone = fix == seen;
            let rows: Vec<usize> = plus.iter().chain(minus).copied().collect();
            let disjoint = rows.iter().all(|i| !seen.contains(i)) && rows.iter().collect::<BTreeSet<_>>().len() == rows.len();
            if !(large && monotone && disjoint) {
                bad += 1;
            }
            seen.extend(rows);
        }
        if r.final_fix_size != seen.len() {
            bad += 1;
        }
    }
    let pass = bad == 0 && start.elapsed().as_secs_f64() < 60.0;
    verdict(11, "patches", pass, format!("50 samples, {patches} patches, {successes} successes, {bad} violations"), start);
}

#[test]
fn uniform_law_benchmark_is_exact_at_small_n() {
    // the uniform law on M_{n,2} agrees with the weighted benchmark
    for n in [5usize, 6] {
        let rows = d2_cycle_experiment(&[n], 1, SampleMode::Enumerate, None, 0).unwrap();
        let hits = rows[0].estimate.hits as i64;
        let total = rows[0].estimate.trials as i64;
        assert_eq!(q(hits, total), even_cycle_probability_weighted(n));
    }
}
