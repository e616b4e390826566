//! Shufflings of a row pair, the walk decomposition of a shuffled row pair,
//! and the greedy search for disjoint row patches.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix01;
use crate::scalar::{sum_over, Scalar};

/// One shuffle at rows `(i1, i2)`: column `s1[t]` is paired with `pi[t]`
/// and the pair's minor is set to `I` when `xi[t] = +1` and to `J` when
/// `xi[t] = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PlanRecord", try_from = "PlanRecord")]
pub struct ShufflePlan {
    pub i1: usize,
    pub i2: usize,
    /// Sorted.
    pub frozen: Vec<usize>,
    /// Sorted.
    pub s1: Vec<usize>,
    /// Sorted.
    pub s2: Vec<usize>,
    /// `pi[t]` is the image of `s1[t]`.
    pub pi: Vec<usize>,
    pub xi: Vec<i8>,
}

/// JSON form of a plan, with 1-based indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanRecord {
    pub i1: usize,
    pub i2: usize,
    pub frozen: Vec<usize>,
    #[serde(rename = "S1")]
    pub s1: Vec<usize>,
    #[serde(rename = "S2")]
    pub s2: Vec<usize>,
    pub pi: Vec<(usize, usize)>,
    pub xi: Vec<i8>,
}

impl From<ShufflePlan> for PlanRecord {
    fn from(p: ShufflePlan) -> Self {
        let up = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        PlanRecord {
            i1: p.i1 + 1,
            i2: p.i2 + 1,
            frozen: up(&p.frozen),
            s1: up(&p.s1),
            s2: up(&p.s2),
            pi: p.s1.iter().zip(&p.pi).map(|(a, b)| (a + 1, b + 1)).collect(),
            xi: p.xi,
        }
    }
}

impl TryFrom<PlanRecord> for ShufflePlan {
    type Error = Error;

    fn try_from(r: PlanRecord) -> Result<Self> {
        let down = |v: &[usize]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&x| x.checked_sub(1).ok_or_else(|| Error::InconsistentPlan("index 0 in 1-based record".into())))
                .collect()
        };
        let pairs: Vec<(usize, usize)> =
            r.pi.iter().map(|&(a, b)| Ok((down(&[a])?[0], down(&[b])?[0]))).collect::<Result<_>>()?;
        let s1 = down(&r.s1)?;
        if pairs.iter().map(|p| p.0).collect::<Vec<_>>() != s1 {
            return Err(Error::InconsistentPlan("pi domain must list S1 in order".into()));
        }
        let plan = ShufflePlan {
            i1: down(&[r.i1])?[0],
            i2: down(&[r.i2])?[0],
            frozen: down(&r.frozen)?,
            s1,
            s2: down(&r.s2)?,
            pi: pairs.iter().map(|p| p.1).collect(),
            xi: r.xi,
        };
        plan.check_shape()?;
        Ok(plan)
    }
}

impl ShufflePlan {
    pub fn s(&self) -> usize {
        self.s1.len()
    }

    /// `(j, pi(j), xi(j))` over `S1`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.s1.iter().zip(&self.pi).zip(&self.xi).map(|((&j, &k), &x)| (j, k, x))
    }

    pub fn image(&self, j: usize) -> Option<usize> {
        self.s1.binary_search(&j).ok().map(|t| self.pi[t])
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InconsistentPlan(m.to_string()));
        if self.i1 == self.i2 {
            return Err(Error::EqualIndices(self.i1));
        }
        let s = self.s1.len();
        if self.s2.len() != s || self.pi.len() != s || self.xi.len() != s {
            return bad("S1, S2, pi and xi must have equal length");
        }
        for v in [&self.frozen, &self.s1, &self.s2] {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return bad("index sets must be sorted and duplicate free");
            }
        }
        let mut img = self.pi.clone();
        img.sort_unstable();
        if img != self.s2 {
            return bad("pi is not a bijection onto S2");
        }
        if self.xi.iter().any(|&x| x != 1 && x != -1) {
            return bad("signs must be +1 or -1");
        }
        let frozen: BTreeSet<_> = self.frozen.iter().collect();
        if self.s1.iter().chain(&self.s2).any(|j| frozen.contains(j)) {
            return bad("S1 and S2 must avoid the frozen columns");
        }
        if self.s1.iter().any(|j| self.s2.binary_search(j).is_ok()) {
            return bad("S1 and S2 must be disjoint");
        }
        Ok(())
    }

    /// Checks the plan against `m`: `S1 ⊆ Ex(i1,i2)`, `S2 ⊆ Ex(i2,i1)`.
    pub fn check(&self, m: &Matrix01) -> Result<()> {
        self.check_shape()?;
        let n = m.n();
        for &i in &[self.i1, self.i2] {
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, n });
            }
        }
        if let Some(&j) = self.frozen.iter().chain(&self.s1).chain(&self.s2).find(|&&j| j >= n) {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        let ok1 = self.s1.iter().all(|&j| m.get(self.i1, j) && !m.get(self.i2, j));
        let ok2 = self.s2.iter().all(|&j| !m.get(self.i1, j) && m.get(self.i2, j));
        if ok1 && ok2 {
            Ok(())
        } else {
            Err(Error::InconsistentPlan("S1 or S2 is not inside the current exclusive sets".into()))
        }
    }
}

fn random_signs<R: Rng + ?Sized>(s: usize, rng: &mut R) -> Vec<i8> {
    (0..s).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect()
}

/// Full shuffle: `S1 = Ex(i1,i2)`, `S2 = Ex(i2,i1)`, uniform `pi`, iid `xi`.
pub fn make_shuffle_plan<R: Rng + ?Sized>(m: &Matrix01, i1: usize, i2: usize, rng: &mut R) -> Result<ShufflePlan> {
    let coex = m.co_ex_sets(i1, i2)?;
    if coex.ex12.len() != coex.ex21.len() {
        return Err(Error::InconsistentPlan("rows have different sums".into()));
    }
    let mut pi = coex.ex21.clone();
    pi.shuffle(rng);
    let xi = random_signs(pi.len(), rng);
    Ok(ShufflePlan { i1, i2, frozen: Vec::new(), s1: coex.ex12, s2: coex.ex21, pi, xi })
}

fn available(m: &Matrix01, i1: usize, i2: usize, frozen: &[usize]) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let n = m.n();
    if let Some(&j) = frozen.iter().find(|&&j| j >= n) {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let coex = m.co_ex_sets(i1, i2)?;
    let f: BTreeSet<usize> = frozen.iter().copied().collect();
    let a1 = coex.ex12.into_iter().filter(|j| !f.contains(j)).collect();
    let a2 = coex.ex21.into_iter().filter(|j| !f.contains(j)).collect();
    Ok((f.into_iter().collect(), a1, a2))
}

/// Restricted shuffle of size `s` avoiding the `frozen` columns.
pub fn make_restricted_plan<R: Rng + ?Sized>(
    m: &Matrix01,
    i1: usize,
    i2: usize,
    frozen: &[usize],
    s: usize,
    rng: &mut R,
) -> Result<ShufflePlan> {
    let (frozen, a1, a2) = available(m, i1, i2, frozen)?;
    if s > a1.len().min(a2.len()) {
        return Err(Error::InvalidParameter(format!(
            "shuffle size {s} exceeds available sizes {} and {}",
            a1.len(),
            a2.len()
        )));
    }
    let mut s1: Vec<usize> = a1.choose_multiple(rng, s).copied().collect();
    s1.sort_unstable();
    let mut pi: Vec<usize> = a2.choose_multiple(rng, s).copied().collect();
    pi.shuffle(rng);
    let mut s2 = pi.clone();
    s2.sort_unstable();
    let xi = random_signs(s, rng);
    Ok(ShufflePlan { i1, i2, frozen, s1, s2, pi, xi })
}

/// Every plan with the given frozen set and size, each equally likely
/// under `make_restricted_plan`.
pub fn enumerate_plans(m: &Matrix01, i1: usize, i2: usize, frozen: &[usize], s: usize) -> Result<Vec<ShufflePlan>> {
    let (frozen, a1, a2) = available(m, i1, i2, frozen)?;
    if s > a1.len().min(a2.len()) {
        return Err(Error::InvalidParameter(format!("shuffle size {s} too large")));
    }
    let mut out = Vec::new();
    for s1 in a1.iter().copied().combinations(s) {
        for s2 in a2.iter().copied().combinations(s) {
            for pi in s2.iter().copied().permutations(s) {
                for signs in 0u64..(1u64 << s) {
                    let xi = (0..s).map(|t| if signs >> t & 1 == 0 { 1 } else { -1 }).collect();
                    out.push(ShufflePlan {
                        i1,
                        i2,
                        frozen: frozen.clone(),
                        s1: s1.clone(),
                        s2: s2.clone(),
                        pi: pi.clone(),
                        xi,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Performs the shuffle. Only rows `i1, i2` change.
pub fn apply_plan(m: &Matrix01, plan: &ShufflePlan) -> Result<Matrix01> {
    plan.check(m)?;
    let mut out = m.clone();
    for (j, k, x) in plan.pairs() {
        let plus = x == 1;
        out.set(plan.i1, j, plus);
        out.set(plan.i1, k, !plus);
        out.set(plan.i2, j, !plus);
        out.set(plan.i2, k, plus);
    }
    Ok(out)
}

/// `(R~_{i1}·u, R~_{i2}·u) = (A + offset + W, A - offset - W)`.
///
/// `offset` carries the columns outside `S1 ∪ S2` that sit in only one of
/// the two rows; it vanishes for full shuffles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkDecomposition<S> {
    pub a_u: S,
    pub offset: S,
    pub w: S,
    pub steps: BTreeMap<usize, S>,
    pub steps_set: Vec<usize>,
    pub flats_set: Vec<usize>,
}

impl<S: Scalar> WalkDecomposition<S> {
    pub fn reconstruct(&self) -> (S, S) {
        let b = self.offset.clone() + self.w.clone();
        (self.a_u.clone() + b.clone(), self.a_u.clone() - b)
    }
}

fn check_len<S>(m: &Matrix01, u: &[S]) -> Result<()> {
    if u.len() != m.n() {
        return Err(Error::DimensionMismatch { expected: m.n(), got: u.len() });
    }
    Ok(())
}

fn dot<S: Scalar>(m: &Matrix01, i: usize, u: &[S]) -> S {
    sum_over(u, m.row_ones(i))
}

pub fn walk_decomposition<S: Scalar>(m: &Matrix01, plan: &ShufflePlan, u: &[S]) -> Result<WalkDecomposition<S>> {
    check_len(m, u)?;
    plan.check(m)?;
    let a_u = (dot(m, plan.i1, u) + dot(m, plan.i2, u)).half();
    let in_s1: BTreeSet<usize> = plan.s1.iter().copied().collect();
    let in_s2: BTreeSet<usize> = plan.s2.iter().copied().collect();
    let rest1 = sum_over(u, m.row_ones(plan.i1).into_iter().filter(|j| !in_s1.contains(j)));
    let rest2 = sum_over(u, m.row_ones(plan.i2).into_iter().filter(|j| !in_s2.contains(j)));
    let offset = (rest1 - rest2).half();
    let mut steps = BTreeMap::new();
    let (mut steps_set, mut flats_set) = (Vec::new(), Vec::new());
    let mut w = S::zero();
    for (j, k, x) in plan.pairs() {
        let step = (u[j].clone() - u[k].clone()).half();
        if step.is_zero() {
            flats_set.push(j);
        } else {
            steps_set.push(j);
        }
        w = if x == 1 { w + step.clone() } else { w - step.clone() };
        steps.insert(j, step);
    }
    Ok(WalkDecomposition { a_u, offset, w, steps, steps_set, flats_set })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminantWalk<S> {
    pub d_before: S,
    pub d_after: S,
    /// `[(R_{i1}+R_{i2})·u2] u1 - [(R_{i1}+R_{i2})·u1] u2`.
    pub v: Vec<S>,
    pub w_v: S,
    /// Zero for full shuffles; otherwise `D_after = W(v) + offset(v)`.
    pub offset_v: S,
    /// Whether `u1, u2` are orthogonal to every row other than `i1, i2`.
    pub kernel_condition: bool,
    pub identity_holds: bool,
}

fn det2<S: Scalar>(m: &Matrix01, i1: usize, i2: usize, u1: &[S], u2: &[S]) -> S {
    dot(m, i1, u1) * dot(m, i2, u2) - dot(m, i2, u1) * dot(m, i1, u2)
}

pub fn determinant_walk<S: Scalar>(m: &Matrix01, plan: &ShufflePlan, u1: &[S], u2: &[S]) -> Result<DeterminantWalk<S>> {
    check_len(m, u1)?;
    check_len(m, u2)?;
    plan.check(m)?;
    let (i1, i2) = (plan.i1, plan.i2);
    let kernel_condition = (0..m.n())
        .filter(|&i| i != i1 && i != i2)
        .all(|i| dot(m, i, u1).is_zero() && dot(m, i, u2).is_zero());
    let shuffled = apply_plan(m, plan)?;
    let d_before = det2(m, i1, i2, u1, u2);
    let d_after = det2(&shuffled, i1, i2, u1, u2);
    let c2 = dot(m, i1, u2) + dot(m, i2, u2);
    let c1 = dot(m, i1, u1) + dot(m, i2, u1);
    let v: Vec<S> = u1.iter().zip(u2).map(|(a, b)| c2.clone() * a.clone() - c1.clone() * b.clone()).collect();
    let wd = walk_decomposition(m, plan, &v)?;
    let identity_holds = d_after == wd.w.clone() + wd.offset.clone();
    Ok(DeterminantWalk { d_before, d_after, v, w_v: wd.w, offset_v: wd.offset, kernel_condition, identity_holds })
}

/// `{j ∈ S1 : j < k <= pi(j)}`, zero-based.
pub fn cross_set(plan: &ShufflePlan, k: usize) -> Vec<usize> {
    plan.pairs().filter(|&(j, p, _)| j < k && p >= k).map(|(j, _, _)| j).collect()
}

/// Mean of `|cross_set|` over a uniform bijection for the full shuffle.
pub fn expected_cross_size(m: &Matrix01, i1: usize, i2: usize, k: usize) -> Result<f64> {
    let coex = m.co_ex_sets(i1, i2)?;
    if coex.ex21.is_empty() {
        return Ok(0.0);
    }
    let left = coex.ex12.iter().filter(|&&j| j < k).count() as f64;
    let right = coex.ex21.iter().filter(|&&j| j >= k).count() as f64;
    Ok(left * right / coex.ex21.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchParams {
    pub eps0: f64,
    pub gamma: f64,
    /// Patches must have at least `patch_fraction · d` rows each.
    pub patch_fraction: f64,
    /// A column pair is taken when both exclusive sets keep `trigger_fraction · d` rows.
    pub trigger_fraction: f64,
    pub min_patches: usize,
}

impl Default for PatchParams {
    fn default() -> Self {
        PatchParams { eps0: 0.5, gamma: 0.1, patch_fraction: 0.01, trigger_fraction: 0.1, min_patches: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchResult {
    pub j_seq: Vec<usize>,
    /// `fix_seq[l]` is the set of rows excluded when forming patch `l`; starts at `0..k`.
    pub fix_seq: Vec<Vec<usize>>,
    pub patches: Vec<(Vec<usize>, Vec<usize>)>,
    pub m: usize,
    pub success: bool,
    /// Size of the final fixed set and the size it must reach off the thin-minor bad event.
    pub final_fix_size: usize,
    pub fix_lower_bound: f64,
}

/// Greedy search for column pairs `(j, sigma[j])`, `j < k`, whose exclusive
/// row sets stay large after removing everything already fixed.
///
/// `sigma[j]` must map `0..k` bijectively onto `n-k..n`.
pub fn locate_patches(m: &Matrix01, sigma: &[usize], k: usize, params: &PatchParams) -> Result<PatchResult> {
    let n = m.n();
    let d = m.require_regular()?;
    if 2 * k > n {
        return Err(Error::InvalidParameter(format!("need 2k <= n, got k={k} n={n}")));
    }
    if sigma.len() != k {
        return Err(Error::DimensionMismatch { expected: k, got: sigma.len() });
    }
    let mut img: Vec<usize> = sigma.to_vec();
    img.sort_unstable();
    if img != (n - k..n).collect::<Vec<_>>() {
        return Err(Error::InvalidParameter("sigma is not a bijection onto the last k columns".into()));
    }
    let mt = m.transpose();
    let trigger = params.trigger_fraction * d as f64;
    let mut fixed = vec![false; n];
    for f in fixed.iter_mut().take(k) {
        *f = true;
    }
    let fixed_set = |fixed: &[bool]| (0..n).filter(|&i| fixed[i]).collect::<Vec<_>>();
    let mut result = PatchResult {
        j_seq: Vec::new(),
        fix_seq: Vec::new(),
        patches: Vec::new(),
        m: 0,
        success: false,
        final_fix_size: 0,
        fix_lower_bound: params.eps0 * params.gamma * d as f64 * k as f64 / (n as f64).ln(),
    };
    loop {
        let found = (0..k).find_map(|j| {
            let coex = mt.co_ex_sets(j, sigma[j]).ok()?;
            let plus: Vec<usize> = coex.ex12.into_iter().filter(|&i| !fixed[i]).collect();
            let minus: Vec<usize> = coex.ex21.into_iter().filter(|&i| !fixed[i]).collect();
            (plus.len() as f64 >= trigger && minus.len() as f64 >= trigger).then_some((j, plus, minus))
        });
        let Some((j, plus, minus)) = found else { break };
        result.fix_seq.push(fixed_set(&fixed));
        for &i in plus.iter().chain(&minus) {
            fixed[i] = true;
        }
        result.j_seq.push(j);
        result.patches.push((plus, minus));
    }
    result.m = result.j_seq.len();
    result.success = result.m >= params.min_patches;
    result.final_fix_size = fixed.iter().filter(|&&f| f).count();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::sampler::sample_exact;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn trivial_plans() {
        let mut rng = seeded(0);
        let ones = Matrix01::ones(5);
        let p = make_shuffle_plan(&ones, 0, 1, &mut rng).unwrap();
        assert_eq!(p.s(), 0);
        assert_eq!(apply_plan(&ones, &p).unwrap(), ones);

        let id = Matrix01::identity(4);
        let p = make_shuffle_plan(&id, 0, 1, &mut rng).unwrap();
        assert_eq!((p.s1.clone(), p.s2.clone(), p.pi.clone()), (vec![0], vec![1], vec![1]));

        let m = Matrix01::circulant(6, 3);
        let coex = m.co_ex_sets(0, 2).unwrap();
        let frozen: Vec<usize> = coex.ex12.iter().chain(&coex.ex21).copied().collect();
        assert!(make_restricted_plan(&m, 0, 2, &frozen, 1, &mut rng).is_err());
        assert_eq!(make_restricted_plan(&m, 0, 2, &frozen, 0, &mut rng).unwrap().s(), 0);
        assert!(matches!(make_shuffle_plan(&m, 2, 2, &mut rng), Err(Error::EqualIndices(2))));
    }

    #[test]
    fn sign_extremes() {
        let mut rng = seeded(4);
        let m = sample_exact(8, 3, &mut rng).unwrap();
        let mut p = make_shuffle_plan(&m, 1, 4, &mut rng).unwrap();
        p.xi.iter_mut().for_each(|x| *x = 1);
        assert_eq!(apply_plan(&m, &p).unwrap(), m);
        p.xi.iter_mut().for_each(|x| *x = -1);
        let out = apply_plan(&m, &p).unwrap();
        let (a, b) = (m.co_ex_sets(1, 4).unwrap(), out.co_ex_sets(1, 4).unwrap());
        assert_eq!((b.co, b.ex12, b.ex21), (a.co, a.ex21, a.ex12));
    }

    #[test]
    fn application_preserves_structure() {
        let mut rng = seeded(9);
        for _ in 0..50 {
            let m = sample_exact(9, 4, &mut rng).unwrap();
            let a = m.co_ex_sets(2, 7).unwrap();
            let room = a.ex12.iter().filter(|&&j| j != 0 && j != 5).count()
                .min(a.ex21.iter().filter(|&&j| j != 0 && j != 5).count());
            let p = make_restricted_plan(&m, 2, 7, &[0, 5], room.min(1), &mut rng).unwrap();
            let out = apply_plan(&m, &p).unwrap();
            assert!(out.regularity_witness(4).holds);
            assert_eq!(out.co_ex_sets(2, 7).unwrap().co, m.co_ex_sets(2, 7).unwrap().co);
            assert_eq!(out.set_neighborhood(&[2, 7]).unwrap(), m.set_neighborhood(&[2, 7]).unwrap());
            for i in (0..9).filter(|&i| i != 2 && i != 7) {
                assert_eq!(out.row_ones(i), m.row_ones(i));
            }
            assert_eq!(apply_plan(&m, &p).unwrap(), out);
        }
    }

    #[test]
    fn inconsistent_plan_is_rejected() {
        let mut rng = seeded(2);
        let m = Matrix01::circulant(6, 2);
        let mut p = make_shuffle_plan(&m, 0, 3, &mut rng).unwrap();
        p.s1[0] = 3;
        assert!(matches!(apply_plan(&m, &p), Err(Error::InconsistentPlan(_))));
    }

    #[test]
    fn plan_json_is_one_based_and_round_trips() {
        let mut rng = seeded(11);
        let m = sample_exact(7, 3, &mut rng).unwrap();
        let p = make_restricted_plan(&m, 0, 1, &[2], 1, &mut rng).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"i1\":1,\"i2\":2"));
        let back: ShufflePlan = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(apply_plan(&m, &back).unwrap(), apply_plan(&m, &p).unwrap());
    }

    #[test]
    fn walk_trivial_vectors() {
        let mut rng = seeded(3);
        let m = sample_exact(8, 3, &mut rng).unwrap();
        let p = make_shuffle_plan(&m, 0, 1, &mut rng).unwrap();
        let ones = vec![q(1); 8];
        let w = walk_decomposition(&m, &p, &ones).unwrap();
        assert!(w.steps_set.is_empty());
        assert!(w.w.is_zero());
        assert_eq!(w.reconstruct(), (q(3), q(3)));

        let nb = m.set_neighborhood(&[0, 1]).unwrap();
        let u: Vec<BigRational> = (0..8).map(|j| if nb.contains(&j) { q(0) } else { q(j as i64 + 1) }).collect();
        let w = walk_decomposition(&m, &p, &u).unwrap();
        assert!(w.a_u.is_zero() && w.w.is_zero());
    }

    #[test]
    fn walk_reconstruction_exact() {
        let mut rng = seeded(21);
        for trial in 0..100 {
            let m = sample_exact(8, 3, &mut rng).unwrap();
            let p = if trial % 2 == 0 {
                make_shuffle_plan(&m, 3, 5, &mut rng).unwrap()
            } else {
                let a = m.co_ex_sets(3, 5).unwrap();
                let s = a.ex12.len().min(a.ex21.len()).saturating_sub(1);
                make_restricted_plan(&m, 3, 5, &[a.ex12[0]], s, &mut rng).unwrap()
            };
            let u: Vec<BigRational> =
                (0..8).map(|_| BigRational::new(rng.gen_range(-9..10).into(), rng.gen_range(1..7).into())).collect();
            let w = walk_decomposition(&m, &p, &u).unwrap();
            let out = apply_plan(&m, &p).unwrap();
            let direct = (sum_over(&u, out.row_ones(3)), sum_over(&u, out.row_ones(5)));
            assert_eq!(w.reconstruct(), direct);
            if trial % 2 == 0 {
                assert!(w.offset.is_zero());
            }
        }
    }

    #[test]
    fn determinant_walk_basics() {
        let mut rng = seeded(5);
        let m = sample_exact(8, 3, &mut rng).unwrap();
        let mut p = make_shuffle_plan(&m, 0, 1, &mut rng).unwrap();
        let u: Vec<BigRational> = (0..8).map(|j| q(j as i64 * j as i64 - 3)).collect();
        let dw = determinant_walk(&m, &p, &u, &u).unwrap();
        assert!(dw.v.iter().all(Zero::is_zero));
        assert!(dw.d_after.is_zero() && dw.identity_holds);
        let u2: Vec<BigRational> = (0..8).map(|j| q(1 - j as i64)).collect();
        p.xi.iter_mut().for_each(|x| *x = 1);
        let dw = determinant_walk(&m, &p, &u, &u2).unwrap();
        assert_eq!(dw.d_after, dw.d_before);
        assert!(dw.identity_holds);
    }

    #[test]
    fn walk_works_for_floats() {
        let mut rng = seeded(8);
        let m = sample_exact(6, 2, &mut rng).unwrap();
        let p = make_shuffle_plan(&m, 0, 1, &mut rng).unwrap();
        let u: Vec<f64> = (0..6).map(|j| j as f64).collect();
        let w = walk_decomposition(&m, &p, &u).unwrap();
        let out = apply_plan(&m, &p).unwrap();
        let (a, b) = w.reconstruct();
        assert_eq!(a, sum_over(&u, out.row_ones(0)));
        assert_eq!(b, sum_over(&u, out.row_ones(1)));
        let one: BigRational = One::one();
        assert!(one.is_one());
    }

    #[test]
    fn cross_sets() {
        let mut rng = seeded(6);
        let m = sample_exact(10, 4, &mut rng).unwrap();
        let p = make_shuffle_plan(&m, 0, 1, &mut rng).unwrap();
        assert!(cross_set(&p, 0).is_empty());
        assert!(cross_set(&p, 10).is_empty());
        for k in 0..=10 {
            let u: Vec<BigRational> = (0..10).map(|j| if j < k { q(j as i64 + 1) } else { q(0) }).collect();
            let steps = walk_decomposition(&m, &p, &u).unwrap().steps_set;
            let cross = cross_set(&p, k);
            assert!(cross.iter().all(|j| steps.contains(j)));
        }
    }

    #[test]
    fn patches_on_all_ones_fail() {
        let r = locate_patches(&Matrix01::ones(8), &[6, 7], 2, &PatchParams::default()).unwrap();
        assert!(!r.success);
        assert_eq!(r.m, 0);
        assert!(locate_patches(&Matrix01::ones(8), &[6, 6], 2, &PatchParams::default()).is_err());
        assert!(locate_patches(&Matrix01::ones(8), &[5, 6, 7, 4, 3], 5, &PatchParams::default()).is_err());
    }

    #[test]
    fn patches_are_large_and_disjoint() {
        let mut rng = seeded(12);
        let (n, d, k) = (30, 8, 4);
        let m = crate::sampler::sample_mcmc(n, d, crate::sampler::default_mcmc_steps(n, d), &mut rng).unwrap();
        let sigma: Vec<usize> = (n - k..n).rev().collect();
        let r = locate_patches(&m, &sigma, k, &PatchParams::default()).unwrap();
        let mut seen = BTreeSet::new();
        for (l, (plus, minus)) in r.patches.iter().enumerate() {
            assert!(plus.len() as f64 >= 0.01 * d as f64 && minus.len() as f64 >= 0.01 * d as f64);
            for i in plus.iter().chain(minus) {
                assert!(seen.insert(*i));
                assert!(!r.fix_seq[l].contains(i));
            }
        }
        assert!(r.j_seq.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(r.fix_seq.first().cloned(), r.success.then(|| (0..k).collect()));
    }
}
