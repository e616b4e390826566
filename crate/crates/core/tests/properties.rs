use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rrd_core::coupling::{apply_plan, determinant_walk, make_restricted_plan, make_shuffle_plan, walk_decomposition};
use rrd_core::discrepancy::edge_deviation;
use rrd_core::rank::{corank_exact, rank_exact, rank_mod_p, screening_primes, verify_kernel, IntMatrix};
use rrd_core::rng::seeded;
use rrd_core::sampler::{switch, RrdSampler};
use rrd_core::scalar::sum_over;

fn instance() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..=12).prop_flat_map(|n| (Just(n), 1..n, any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_keeps_structure((n, d, seed) in instance(), frozen_bits in any::<u16>()) {
        let mut rng = seeded(seed);
        let m = RrdSampler::best(n, d).unwrap().sample(&mut rng);
        let frozen: Vec<usize> = (0..n).filter(|j| frozen_bits >> j & 1 == 1).collect();
        let full = make_shuffle_plan(&m, 0, n - 1, &mut rng).unwrap();
        let co = m.co_ex_sets(0, n - 1).unwrap();
        let room = co.ex12.iter().filter(|j| !frozen.contains(j)).count()
            .min(co.ex21.iter().filter(|j| !frozen.contains(j)).count());
        let restricted = make_restricted_plan(&m, 0, n - 1, &frozen, room / 2, &mut rng).unwrap();
        for plan in [full, restricted] {
            let out = apply_plan(&m, &plan).unwrap();
            prop_assert!(out.regularity_witness(d).holds);
            prop_assert_eq!(out.co_ex_sets(0, n - 1).unwrap().co, co.co.clone());
            for i in 1..n - 1 {
                prop_assert_eq!(out.row_ones(i), m.row_ones(i));
            }
            let u: Vec<BigRational> = (0..n).map(|j| BigRational::new(((j * 7 + seed as usize % 5) as i64 - 9).into(), 3.into())).collect();
            let w = walk_decomposition(&m, &plan, &u).unwrap();
            prop_assert_eq!(w.reconstruct(), (sum_over(&u, out.row_ones(0)), sum_over(&u, out.row_ones(n - 1))));
            let flipped: Vec<BigRational> = {
                let mut v = u.clone();
                for (j, k, _) in plan.pairs() { v.swap(j, k); }
                v
            };
            let wf = walk_decomposition(&m, &plan, &flipped).unwrap();
            for (j, s) in &w.steps {
                prop_assert_eq!(&-s.clone(), &wf.steps[j]);
            }
            let u2: Vec<BigRational> = (0..n).map(|j| BigRational::from_integer(((j * j) % 5).into())).collect();
            prop_assert!(determinant_walk(&m, &plan, &u, &u2).unwrap().identity_holds);
        }
    }

    #[test]
    fn switch_is_involution((n, d, seed) in instance(), idx in any::<[u8; 4]>()) {
        let mut rng = seeded(seed);
        let m = RrdSampler::best(n, d).unwrap().sample(&mut rng);
        let [a, b, c, e] = idx.map(|x| x as usize % n);
        let mut t = m.clone();
        if switch(&mut t, a, b, c, e) {
            prop_assert!(t.regularity_witness(d).holds);
            prop_assert!(switch(&mut t, a, b, c, e));
        }
        prop_assert_eq!(t, m);
    }

    #[test]
    fn kernels_and_screens(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 6), 1..7)) {
        let a = IntMatrix::from_rows(&rows).unwrap();
        let r = corank_exact(&a);
        prop_assert!(verify_kernel(&a, &r));
        for &p in &screening_primes()[..3] {
            prop_assert!(rank_mod_p(&a, p).unwrap() <= r.rank);
        }
        prop_assert_eq!(rank_exact(&a.transpose()), r.rank);
        for x in &r.kernel_basis {
            let lead = x.iter().find(|v| !v.is_zero()).unwrap();
            prop_assert_eq!(lead, &BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn deviation_duality((n, d, seed) in instance(), abits in any::<u16>(), bbits in any::<u16>()) {
        let mut rng = seeded(seed);
        let m = RrdSampler::best(n, d).unwrap().sample(&mut rng);
        let pick = |bits: u16, inside: bool| (0..n).filter(|j| (bits >> j & 1 == 1) == inside).collect::<Vec<_>>();
        let x = edge_deviation(&m, &pick(abits, true), &pick(bbits, true)).unwrap();
        let y = edge_deviation(&m, &pick(abits, false), &pick(bbits, false)).unwrap();
        prop_assert_eq!(x.deviation, y.deviation);
        prop_assert_eq!(x.tau, y.tau);
    }

    #[test]
    fn text_round_trip((n, d, seed) in instance()) {
        let mut rng = seeded(seed);
        let m = RrdSampler::best(n, d).unwrap().sample(&mut rng);
        let (back, dd) = rrd_core::Matrix01::parse_text(&m.to_text(d)).unwrap();
        prop_assert_eq!(back, m);
        prop_assert_eq!(dd, d);
    }
}
