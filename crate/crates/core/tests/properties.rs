use std::f64::consts::{LN_2, TAU};

use kleinpinch::beltrami::{example1_profile, example1_zero, invariance_residual, sup_norm};
use kleinpinch::group::{desk_schottky, enumerate_words, hausdorff_distance, limit_set, EnumerationOptions, Letter};
use kleinpinch::pinch::{a_family, pinch_trajectory, w_example1};
use kleinpinch::{
    chordal_distance, mu_example1, BeltramiField, Complex64, MoebiusTransform, SampleGrid, SampleRegion, SpherePoint,
};
use proptest::prelude::*;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn complex(range: f64) -> impl Strategy<Value = Complex64> {
    (-range..range, -range..range).prop_map(|(x, y)| c(x, y))
}

fn transform() -> impl Strategy<Value = MoebiusTransform> {
    (complex(3.0), complex(3.0), complex(3.0), complex(3.0))
        .prop_filter("well conditioned", |(a, b, cc, d)| (a * d - b * cc).norm() > 0.05)
        .prop_map(|(a, b, cc, d)| MoebiusTransform::normalize(a, b, cc, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_acts_as_successive_application(f in transform(), g in transform(), z in complex(5.0)) {
        let p = SpherePoint::Finite(z);
        let lhs = f.compose(&g).apply(p);
        let rhs = f.apply(g.apply(p));
        // the chordal metric absorbs poles; scale tolerance by conditioning
        let tol = 1e-9 * (1.0 + f.scale() * g.scale()).powi(2);
        prop_assert!(chordal_distance(lhs, rhs) <= tol, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn classification_is_conjugation_invariant(s in transform()) {
        let samples = [
            MoebiusTransform::dilation(c(2.0, 0.0)).unwrap(),
            MoebiusTransform::translation(c(1.0, 0.0)),
            MoebiusTransform::dilation(Complex64::from_polar(1.0, 1.0)).unwrap(),
            MoebiusTransform::dilation(c(1.5, 1.5)).unwrap(),
        ];
        for t in samples {
            let conj = t.conjugate_by(&s);
            prop_assert_eq!(conj.classify_with(1e-6), t.classify());
            let scale = 1.0 + (s.scale() * s.inverse().scale()).powi(2);
            prop_assert!((conj.trace_squared() - t.trace_squared()).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn chordal_triangle_inequality(a in complex(50.0), b in complex(50.0), d in complex(50.0), inf in 0..3usize) {
        let mut pts = [SpherePoint::Finite(a), SpherePoint::Finite(b), SpherePoint::Finite(d)];
        pts[inf] = SpherePoint::Infinity;
        let [p, q, r] = pts;
        prop_assert!(chordal_distance(p, r) <= chordal_distance(p, q) + chordal_distance(q, r) + 1e-12);
        prop_assert!(chordal_distance(p, q) <= 2.0);
        prop_assert!((chordal_distance(p, q) - chordal_distance(q, p)).abs() < 1e-15);
    }

    #[test]
    fn modulus_depends_only_on_the_argument(r in 1e-3f64..1e3, eta in 1e-6f64..(TAU - 1e-6)) {
        let on_ray = mu_example1(SpherePoint::Finite(Complex64::from_polar(r, eta))).unwrap().norm();
        let on_circle = mu_example1(SpherePoint::Finite(Complex64::from_polar(1.0, eta))).unwrap().norm();
        prop_assert!((on_ray - on_circle).abs() <= 1e-12);
        prop_assert!(on_ray <= 1.0);
    }

    #[test]
    fn phase_is_the_radial_direction_squared(r in 0.1f64..10.0, eta in 0.01f64..(TAU - 0.01)) {
        let z = Complex64::from_polar(r, eta);
        let mu = mu_example1(SpherePoint::Finite(z)).unwrap();
        // μ · conj(z)^2 / |z|^2 is real
        let real = mu * z.conj() * z.conj() / (r * r);
        prop_assert!(real.im.abs() <= 1e-12);
        prop_assert!((real.re - example1_profile(eta)).abs() <= 1e-12);
    }

    #[test]
    fn coefficient_is_invariant_under_doubling(r in 0.1f64..10.0, eta in 0.01f64..(TAU - 0.01)) {
        let g = MoebiusTransform::dilation(c(2.0, 0.0)).unwrap();
        let z = Complex64::from_polar(r, eta);
        prop_assert!(invariance_residual(&BeltramiField::Example1, &g, &[z]).unwrap() <= 1e-12);
    }

    #[test]
    fn noded_map_is_equivariant(r in 1e-3f64..1e3, eta in 1e-3f64..(TAU - 1e-3)) {
        let z = Complex64::from_polar(r, eta);
        let lhs = w_example1(SpherePoint::Finite(2.0 * z));
        let rhs = SpherePoint::Finite(w_example1(SpherePoint::Finite(z)).finite().unwrap() + 1.0);
        prop_assert!(chordal_distance(lhs, rhs) <= 1e-9);
    }
}

#[test]
fn profile_zeros_by_bisection() {
    let bisect = |mut lo: f64, mut hi: f64| {
        let f = example1_profile;
        while hi - lo > 1e-13 {
            let mid = 0.5 * (lo + hi);
            if f(lo).signum() == f(mid).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let eta_star = 2.0 * (LN_2 / 2.0).sqrt().asin();
    assert!((bisect(0.5, 2.0) - eta_star).abs() <= 1e-9);
    assert!((bisect(4.0, 6.0) - (TAU - eta_star)).abs() <= 1e-9);
    assert!((example1_zero() - eta_star).abs() <= 1e-15);
    // no other sign changes
    let changes = (1..10_000)
        .map(|k| example1_profile(TAU * k as f64 / 10_000.0).signum())
        .collect::<Vec<_>>()
        .windows(2)
        .filter(|w| w[0] != w[1])
        .count();
    assert_eq!(changes, 2);
}

#[test]
fn sup_norm_grows_toward_one_under_refinement() {
    let region = SampleRegion::Sector { r_min: 1.0, r_max: 2.0, eta_min: 0.0, eta_max: TAU };
    let mut last = 0.0;
    let mut n = 8;
    for _ in 0..6 {
        let s = sup_norm(&BeltramiField::Example1, &SampleGrid::open(region, n));
        assert!(s >= last && s < 1.0);
        last = s;
        n = 2 * n + 1;
    }
    assert!(last > 0.99);
}

#[test]
fn pinch_gap_collapses() {
    let rows = pinch_trajectory(100).unwrap();
    for r in &rows {
        let m = (r.n as f64 + 1.0) / 2.0;
        assert!((r.gap - 2.0 / (1.0 + m * m).sqrt()).abs() <= 1e-12);
        assert!(r.gap <= 4.0 / r.n as f64);
    }
    assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap));
    // fixed points of A_n: (n+1)/2 and ∞
    let fixed = a_family(7).unwrap().fixed_points().unwrap();
    assert!(fixed.contains(&SpherePoint::Infinity));
    assert!(fixed.iter().any(|p| chordal_distance(*p, SpherePoint::real(4.0)) < 1e-14));
}

#[test]
fn words_multiply_out_to_their_elements() {
    let group = desk_schottky();
    let words = enumerate_words(&group, 4, &EnumerationOptions::default()).unwrap();
    for w in &words {
        assert!(w.is_reduced());
        let product = w
            .letters
            .iter()
            .fold(MoebiusTransform::IDENTITY, |acc: MoebiusTransform, l: &Letter| acc.compose(&l.transform(&group)));
        assert!(product.approx_eq(&w.element, 1e-9), "{}", w.spelling());
    }
}

#[test]
fn limit_set_clouds_nest_and_converge() {
    let group = desk_schottky();
    let opts = EnumerationOptions::default();
    let clouds: Vec<_> = (2..=7).map(|d| limit_set(&group, d, &opts).unwrap()).collect();
    // fixed points found at depth d are found again at depth d + 1
    for pair in clouds.windows(2) {
        for &p in &pair[0].points {
            assert!(pair[1].distance_to(p) <= 1e-12);
        }
    }
    let gaps: Vec<f64> = clouds[1..].windows(2).map(|w| hausdorff_distance(&w[0], &w[1]).unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
}

#[test]
fn limit_set_is_group_invariant() {
    // g·fix⁺(w) = fix⁺(g w g⁻¹), a word of length at most |w| + 2
    let group = desk_schottky();
    let opts = EnumerationOptions::default();
    let depth = 4;
    let small = limit_set(&group, depth, &opts).unwrap();
    let large = limit_set(&group, depth + 2, &opts).unwrap();
    for g in group.generators() {
        for &p in &small.points {
            assert!(large.distance_to(g.apply(p)) <= 1e-9);
        }
    }
}
