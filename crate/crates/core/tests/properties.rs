use proptest::prelude::*;

use schoenberg_core::gram::{gram_section, Base, ShiftFamily};
use schoenberg_core::points::{euclid, layer_bound, layer_counts, PointSet};
use schoenberg_core::report::fmt17;
use schoenberg_core::schoenberg::{assemble, eigen_extremes, eigenvalues, row_sup};
use schoenberg_core::specfun::{omega_n, theta3};
use schoenberg_core::symbols::RadialSymbol;

fn cloud(dim: usize, max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(prop::collection::vec(-6.0f64..6.0, dim), 2..max)
        .prop_filter_map("duplicate points", move |pts| PointSet::new(dim, pts).ok())
}

fn symbol() -> impl Strategy<Value = RadialSymbol> {
    prop_oneof![
        (0.1f64..4.0).prop_map(|a| RadialSymbol::gaussian(a).unwrap()),
        (0.1f64..4.0).prop_map(|a| RadialSymbol::exponential(a).unwrap()),
        (0.2f64..3.0, 0.5f64..2.0).prop_map(|(p, a)| RadialSymbol::matern(p, a).unwrap()),
        (0.5f64..4.0).prop_map(|b| RadialSymbol::inverse_power(b).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sections_of_pd_symbols_are_psd(ps in cloud(3, 40), sym in symbol()) {
        let ms = assemble(&ps, &sym, 0..ps.len()).unwrap();
        let (lo, hi) = eigen_extremes(&ms).unwrap();
        prop_assert!(lo >= -1e-10 * hi, "{lo} {hi}");
        prop_assert!(hi <= row_sup(&ms).full_row_sup * (1.0 + 1e-12));
    }

    #[test]
    fn gram_sections_are_psd(ps in cloud(2, 30), a in 0.2f64..3.0, mu in 0.0f64..0.45) {
        for base in [Base::gaussian(a, 2).unwrap(), Base::matern(a, mu, 2).unwrap()] {
            let fam = ShiftFamily::new(base, ps.clone()).unwrap();
            let ev = eigenvalues(&gram_section(&fam, 0..ps.len()).unwrap()).unwrap();
            prop_assert!(ev[0] >= -1e-8 * ev[ev.len() - 1]);
        }
    }

    #[test]
    fn separation_is_min_pair_distance(ps in cloud(2, 60)) {
        let mut brute = f64::INFINITY;
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                brute = brute.min(euclid(ps.point(i), ps.point(j)));
            }
        }
        prop_assert_eq!(ps.separation().unwrap(), brute);
    }

    #[test]
    fn layer_counts_respect_bound(ps in cloud(2, 80), center in 0usize..80) {
        let c = center % ps.len();
        let eps = ps.separation().unwrap();
        let prof = layer_counts(&ps, c, eps, 12).unwrap();
        for m in 1..=12u64 {
            prop_assert!(prof.counts[m as usize] as u128 <= layer_bound(2, m).unwrap().0);
        }
    }

    #[test]
    fn omega_is_bounded_by_one(n in 1u32..8, s in 0.0f64..60.0) {
        prop_assert!(omega_n(n, s).unwrap().abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn theta_is_positive(z in -4.0f64..4.0, q in 0.0f64..0.98) {
        prop_assert!(theta3(z, q).unwrap() > 0.0);
    }

    #[test]
    fn csv_numbers_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt17(v).parse::<f64>().unwrap(), v);
    }
}
