use num_traits::Zero;
use proptest::collection::btree_set;
use proptest::prelude::*;

use shifted_subset::bits;
use shifted_subset::bounds::{
    copies_bound, hy_lower_bound, trace_distance_cube, walsh_transform, CubeFunction,
};
use shifted_subset::distributions::{pi_ball, pi_points, pi_sphere};
use shifted_subset::exact::{self, Rational};
use shifted_subset::krawtchouk::{kraw_degree_row, kraw_direct, kraw_table};
use shifted_subset::oracle::build_instance;
use shifted_subset::sampler::ShiftedState;
use shifted_subset::subset::SubsetSpec;

fn point_set(n: u32) -> impl Strategy<Value = Vec<u64>> {
    btree_set(0..1u64 << n, 1..=(1usize << n) / 2).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn table_and_degree_row_match_direct_sum(n in 1u32..=30, r in 0u32..=30, x in 0u32..=30) {
        let (r, x) = (r % (n + 1), x % (n + 1));
        let direct = kraw_direct(n, r, x).unwrap();
        let table = kraw_table(n);
        prop_assert_eq!(table.get(r, x).unwrap(), &direct);
        prop_assert_eq!(&kraw_degree_row(n, r).unwrap()[x as usize], &direct);
    }

    #[test]
    fn weight_laws_are_normalised(n in 1u32..=48, r in 0u32..=48) {
        prop_assert!(pi_ball(n, r % (n + 1)).unwrap().is_normalised());
        prop_assert!(pi_sphere(n, r % (n / 2 + 1)).unwrap().is_normalised());
    }

    #[test]
    fn outcome_law_ignores_shift(pts in point_set(7), shift in 0u64..128) {
        let moved: Vec<u64> = pts.iter().map(|p| p ^ shift).collect();
        let law = pi_points(7, &pts).unwrap();
        prop_assert!(law.is_normalised());
        prop_assert_eq!(&law, &pi_points(7, &moved).unwrap());
        prop_assert_eq!(law.prob(0), exact::ratio(pts.len() as u64, 128u64));
        let state = ShiftedState::from_support(7, &pts, shift).unwrap();
        prop_assert!(state.is_valid());
        let sim = state.outcome_probabilities();
        for z in 0..128u64 {
            prop_assert!((sim[z as usize] - law.prob_f64(z)).abs() < 1e-12);
        }
    }

    #[test]
    fn hausdorff_young_lower_bound(s in point_set(6), t in point_set(6)) {
        let lower = hy_lower_bound(6, &s, &t).unwrap();
        let trace = trace_distance_cube(&pi_points(6, &s).unwrap(), &pi_points(6, &t).unwrap()).unwrap();
        prop_assert!(lower <= trace);
        prop_assert!(trace <= exact::int(2));
        if s == t {
            prop_assert!(lower.is_zero() && trace.is_zero());
        }
    }

    #[test]
    fn walsh_is_an_involution(vals in proptest::collection::vec(-10.0f64..10.0, 64)) {
        let f = CubeFunction::new(6, vals).unwrap();
        let back = walsh_transform(&walsh_transform(&f));
        prop_assert!(back.max_abs_diff(&f) < 1e-12);
        prop_assert!((walsh_transform(&f).norm2() - f.norm2()).abs() < 1e-9);
    }

    #[test]
    fn copies_bound_is_monotone(
        family in 2u64..1000,
        f_num in 1i64..99,
        eps_den in 2i64..1000,
    ) {
        let f = exact::ratio(f_num, 100);
        let eps = exact::ratio(1, eps_den);
        let k = copies_bound(family, &f, &eps).unwrap();
        prop_assert!(copies_bound(family + 1, &f, &eps).unwrap() >= k);
        prop_assert!(copies_bound(family, &f, &exact::ratio(1, eps_den + 1)).unwrap() >= k);
        if f_num > 1 {
            prop_assert!(copies_bound(family, &exact::ratio(f_num - 1, 100), &eps).unwrap() <= k);
        }
        // k is the least integer with (1/F)^k >= (N/eps)^2
        let target: Rational = (exact::int(family) / &eps) * (exact::int(family) / &eps);
        let inv: Rational = exact::ratio(100, f_num);
        prop_assert!(num_traits::pow::pow(inv.clone(), k as usize) >= target);
        prop_assert!(k == 1 || num_traits::pow::pow(inv, k as usize - 1) < target);
    }

    #[test]
    fn oracle_round_trip(n in 2u32..=10, r in 0u32..=5, seed in any::<u64>(), x in any::<u64>()) {
        let spec = SubsetSpec::ball(n, r.min(n)).unwrap();
        let inst = build_instance(&spec, seed).unwrap();
        let x = x & bits::mask(2 * n);
        let c0 = inst.query_c(x);
        prop_assert!(c0 >= 1 && c0 <= inst.colour_count());
        let y = inst.query_s(x, c0);
        prop_assert!(inst.hidden_set().binary_search(&(y ^ inst.sigma(c0))).is_ok());
        prop_assert_eq!(inst.query_c_inv(c0, y), x);
    }
}
