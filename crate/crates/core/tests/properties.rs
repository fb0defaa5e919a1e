use proptest::prelude::*;
use xband_core::beampattern::Beampattern;
use xband_core::channel::{BandChannel, LinkPair, Ray};
use xband_core::pas::{filter_pas, AngularGrid};
use xband_core::psp::total_variation;
use xband_core::similarity::{analyze_pair, false_directions, power_ratio, select_m1, select_m2, SimilarityConfig};

fn rays(on_grid: bool) -> impl Strategy<Value = Vec<Ray<f64>>> {
    prop::collection::vec((-40.0..0.0f64, 0.0..360.0f64, 0.0..300.0f64), 1..20).prop_map(move |v| {
        v.into_iter()
            .map(|(p_db, aoa, tau_ns)| {
                let aoa = if on_grid { aoa.floor() } else { aoa };
                Ray::new(10f64.powf(p_db / 10.0), tau_ns * 1e-9, aoa).unwrap()
            })
            .collect()
    })
}

fn channel(freq: f64) -> impl Strategy<Value = BandChannel<f64>> {
    rays(false).prop_map(move |r| BandChannel::new("p", freq, r).unwrap())
}

fn grid_channel(freq: f64) -> impl Strategy<Value = BandChannel<f64>> {
    rays(true).prop_map(move |r| BandChannel::new("p", freq, r).unwrap())
}

fn pattern() -> impl Strategy<Value = Beampattern<f64>> {
    prop_oneof![
        (5.0..60.0f64, 10.0..40.0f64).prop_map(|(w, a)| Beampattern::gpp3(w, a).unwrap()),
        (2usize..10).prop_map(|n| Beampattern::ula(n, 0.5, -60.0).unwrap()),
    ]
}

fn grid() -> AngularGrid<f64> {
    AngularGrid::new(1.0).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn total_gain_ignores_ray_order(c in channel(28.0)) {
        let mut rev = c.rays().to_vec();
        rev.reverse();
        let r = BandChannel::new("p", 28.0, rev).unwrap();
        prop_assert!(close(c.total_gain(), r.total_gain(), 1e-12));
    }

    #[test]
    fn cull_is_idempotent_and_never_empties(c in channel(28.0), range in 1.0..50.0f64) {
        let once = c.cull_dynamic_range(range).unwrap();
        let twice = once.cull_dynamic_range(range).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(!once.rays().is_empty());
        prop_assert!(once.total_gain() <= c.total_gain());
    }

    #[test]
    fn filtering_is_linear(a in channel(28.0), b in channel(28.0), p in pattern()) {
        let merged = filter_pas(&a.merged(&b).unwrap(), &p, &grid());
        let summed = filter_pas(&a, &p, &grid()).add(&filter_pas(&b, &p, &grid())).unwrap();
        for (x, y) in merged.values().iter().zip(summed.values()) {
            prop_assert!(close(*x, *y, 1e-12));
        }
    }

    #[test]
    fn rotation_shifts_the_spectrum(c in grid_channel(28.0), shift in 0usize..360, p in pattern()) {
        let base = filter_pas(&c, &p, &grid());
        let rot = filter_pas(&c.rotated(shift as f64), &p, &grid());
        for k in 0..360 {
            prop_assert_eq!(rot.values()[(k + shift) % 360], base.values()[k]);
        }
    }

    #[test]
    fn rotation_shifts_off_grid_rays_up_to_rounding(c in channel(28.0), shift in 0usize..360, p in pattern()) {
        let base = filter_pas(&c, &p, &grid());
        let rot = filter_pas(&c.rotated(shift as f64), &p, &grid());
        for k in 0..360 {
            prop_assert!(close(rot.values()[(k + shift) % 360], base.values()[k], 1e-9));
        }
    }

    #[test]
    fn scaling_scales_filtered_and_keeps_normalized(c in channel(28.0), p in pattern(), s in 1e-6..1e6f64) {
        let base = filter_pas(&c, &p, &grid());
        let scaled = filter_pas(&c.scaled(s).unwrap(), &p, &grid());
        for (x, y) in base.values().iter().zip(scaled.values()) {
            prop_assert!(close(x * s, *y, 1e-12));
        }
        let (nb, ns) = (base.normalize(), scaled.normalize());
        for (x, y) in nb.density().iter().zip(ns.density()) {
            prop_assert!(close(*x, *y, 1e-12));
        }
        prop_assert!((nb.total_mass() - 1.0).abs() < 1e-9);
        prop_assert!(nb.density().iter().all(|d| *d >= 0.0));
    }

    #[test]
    fn refinement_is_bit_identical(c in channel(28.0), p in pattern()) {
        let coarse = filter_pas(&c, &p, &AngularGrid::new(1.0).unwrap());
        let fine = filter_pas(&c, &p, &AngularGrid::new(0.5).unwrap());
        for (k, v) in coarse.values().iter().enumerate() {
            prop_assert_eq!(*v, fine.values()[2 * k]);
        }
    }

    #[test]
    fn total_variation_axioms(a in channel(4.0), b in channel(28.0), c in channel(86.0), p in pattern(), s in 1e-3..1e3f64) {
        let na = filter_pas(&a, &p, &grid()).normalize();
        let nb = filter_pas(&b, &p, &grid()).normalize();
        let nc = filter_pas(&c, &p, &grid()).normalize();
        let ab = total_variation(&na, &nb).unwrap();
        prop_assert_eq!(ab, total_variation(&nb, &na).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        let ac = total_variation(&na, &nc).unwrap();
        let bc = total_variation(&nb, &nc).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
        let nas = filter_pas(&a.scaled(s).unwrap(), &p, &grid()).normalize();
        prop_assert!((total_variation(&nas, &nb).unwrap() - ab).abs() <= 1e-12);
    }

    #[test]
    fn m1_is_scale_invariant_and_thresholded(c in channel(28.0), p in pattern(), th in 1.0..25.0f64, e in -20i32..20) {
        let pas = filter_pas(&c, &p, &grid());
        let set = select_m1(&pas, th).unwrap();
        // powers of two scale every value exactly
        let scaled = filter_pas(&c.scaled(2f64.powi(e)).unwrap(), &p, &grid());
        let again = select_m1(&scaled, th).unwrap();
        prop_assert_eq!(again.angles(), set.angles());
        let max = pas.max();
        prop_assert!(set.angles().contains(&pas.grid().angle(pas.argmax())));
        for a in set.angles() {
            prop_assert!(10.0 * (pas.value_at(*a).unwrap() / max).log10() >= -th);
        }
    }

    #[test]
    fn m2_always_selects_and_degenerates(c in channel(28.0), p in pattern()) {
        let cfg = SimilarityConfig::default();
        let set = select_m2(&c, &p, &grid(), &cfg).unwrap();
        prop_assert!(!set.is_empty());
        let pas = filter_pas(&c, &p, &grid());
        prop_assert!(set.angles().contains(&pas.grid().angle(pas.argmax())));
        let tight = SimilarityConfig { m2_correlation_threshold: 1e-12, ..cfg };
        let single = select_m2(&c, &p, &grid(), &tight).unwrap();
        prop_assert_eq!(single.angles(), &[pas.grid().angle(pas.argmax())]);
    }

    #[test]
    fn direction_metric_properties(c in channel(86.0), p in pattern(), th in 3.0..20.0f64) {
        let pas = filter_pas(&c, &p, &grid());
        let a = select_m1(&pas, th).unwrap();
        prop_assert_eq!(power_ratio(&a, &a, &pas).unwrap(), 0.0);
        prop_assert_eq!(false_directions(&a, &a, &pas, -30.0).unwrap(), 0);
    }

    #[test]
    fn singleton_ratio_bounded_by_pattern_range(c in channel(86.0), lo in 0usize..360, hi in 0usize..360, amax in 10.0..40.0f64) {
        let p = Beampattern::gpp3(10.0, amax).unwrap();
        let pas = filter_pas(&c, &p, &grid());
        let one = |k: usize| xband_core::DirectionSet::new(vec![k as f64], xband_core::similarity::Band::Low, xband_core::similarity::Method::M1, 10.0).unwrap();
        prop_assert!(power_ratio(&one(lo), &one(hi), &pas).unwrap() >= -amax - 1e-9);
    }

    #[test]
    fn false_directions_monotone_in_threshold(lo in channel(4.0), hi in channel(86.0), p in pattern()) {
        let pl = filter_pas(&lo, &p, &grid());
        let ph = filter_pas(&hi, &p, &grid());
        let a_l = select_m1(&pl, 15.0).unwrap();
        let a_h = select_m1(&ph, 15.0).unwrap();
        let counts: Vec<usize> = [-50.0, -40.0, -30.0, -20.0, -10.0, -1.0]
            .iter()
            .map(|d| false_directions(&a_l, &a_h, &ph, *d).unwrap())
            .collect();
        prop_assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{:?}", counts);
        prop_assert!(counts.iter().all(|n| *n <= a_l.len()));
    }

    #[test]
    fn common_rotation_keeps_ratio_and_false_count(lo in grid_channel(4.0), hi in grid_channel(86.0), shift in 0usize..360) {
        let p_l = Beampattern::ula(4, 0.5, -60.0).unwrap();
        let p_h = Beampattern::ula(8, 0.5, -60.0).unwrap();
        let lo = BandChannel::new("x", 4.0, lo.rays().to_vec()).unwrap();
        let hi = BandChannel::new("x", 86.0, hi.rays().to_vec()).unwrap();
        let cfg = SimilarityConfig::default();
        let base = analyze_pair(&LinkPair::new(lo.clone(), hi.clone()).unwrap(), &p_l, &p_h, &grid(), &cfg).unwrap();
        let d = shift as f64;
        let rot = analyze_pair(&LinkPair::new(lo.rotated(d), hi.rotated(d)).unwrap(), &p_l, &p_h, &grid(), &cfg).unwrap();
        // set sums run in a different order once angles wrap past zero
        prop_assert!((base.power_ratio_db - rot.power_ratio_db).abs() < 1e-9);
        let mut shifted: Vec<f64> = base.directions_low_deg.iter().map(|a| (a + d) % 360.0).collect();
        shifted.sort_by(f64::total_cmp);
        prop_assert_eq!(&shifted, &rot.directions_low_deg);
        prop_assert_eq!(base.n_false, rot.n_false);
        prop_assert_eq!(base.card_low, rot.card_low);
    }
}
