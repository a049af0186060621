use neocalc_core::derivatives::{
    classify, combine_reports, dini_bounds, gallery, ApproachMode, Classification, FunctionOracle,
    GalleryFunction, ReportOp, ScaleLadder,
};
use neocalc_core::interval::union_distance;
use neocalc_core::reference_oracles::{default_k_grid, weak_quotient_limit_direct};
use neocalc_core::{Interval, SequenceWindow};
use proptest::prelude::*;

const SET_TOL: f64 = 1e-6;

fn ladder() -> ScaleLadder {
    ScaleLadder::default()
}

/// Continuous gallery members with a point in their domain.
fn continuous_case() -> impl Strategy<Value = (GalleryFunction, f64)> {
    prop_oneof![
        (-5.0..5.0f64).prop_map(|x| (GalleryFunction::Abs, x)),
        Just((GalleryFunction::Abs, 0.0)),
        (-5.0..5.0f64).prop_map(|x| (GalleryFunction::Square, x)),
        (-5.0..5.0f64, -4.0..4.0f64, -4.0..4.0f64)
            .prop_map(|(x, m, c)| (GalleryFunction::Linear { m, c }, x)),
        (0.05..0.95f64, -1.0..1.0f64, 0.0..1.0f64)
            .prop_map(|(a, b, x)| (GalleryFunction::SkewTent { a, b }, x)),
        (0.05..0.95f64, -1.0..1.0f64).prop_map(|(a, b)| (GalleryFunction::SkewTent { a, b }, a)),
        (2u32..7, -1.0..1.0f64)
            .prop_map(|(depth, x)| (GalleryFunction::VanDerWaerden { depth }, x)),
    ]
}

fn interior(f: &GalleryFunction, x: f64) -> bool {
    match f {
        GalleryFunction::SkewTent { .. } => x > 1e-3 && x < 1.0 - 1e-3,
        _ => true,
    }
}

fn close_subset(a: &Interval, b: &Interval) -> bool {
    a.is_subset_of_approx(b, SET_TOL)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mode_relations((g, x) in continuous_case(), r in 0.0..3.0f64) {
        prop_assume!(interior(&g, x));
        let report = classify(&g.oracle(), x, &ladder(), &[r]).unwrap();
        let set = |m| report.bounds(m).unwrap().strong_set(r);
        let (c, l, rt, t) = (
            set(ApproachMode::Centered),
            set(ApproachMode::Left),
            set(ApproachMode::Right),
            set(ApproachMode::TwoSided),
        );
        prop_assert!(close_subset(&c, &t), "centered {c} two-sided {t}");
        prop_assert!(close_subset(&c, &l) && close_subset(&c, &rt));
        if !t.is_empty() {
            prop_assert!(!l.is_empty() && !rt.is_empty());
        }
        prop_assert!(close_subset(&l.intersect(&rt), &c));
    }

    #[test]
    fn strong_sets_monotone_and_inside_weak(
        (g, x) in continuous_case(),
        r in 0.0..3.0f64,
        dr in 0.0..2.0f64,
    ) {
        let f = g.oracle();
        for mode in ApproachMode::ALL {
            let Ok(b) = dini_bounds(&f, x, mode, &ladder()) else { continue };
            prop_assert!(b.strong_set(r).is_subset_of(&b.strong_set(r + dr)));
            if let Some((lo, hi)) = b.strong_set(r).bounds() {
                let weak = b.weak_set(r);
                for z in [lo, (lo + hi) / 2.0, hi] {
                    prop_assert!(union_distance(&weak, z) <= SET_TOL, "{mode:?} {z}");
                }
            }
            if b.bounded {
                prop_assert!(b.d_lower <= b.d_upper);
                for side in [b.left_cluster, b.right_cluster] {
                    prop_assert!(side.is_subset_of_approx(&Interval::new(b.d_lower, b.d_upper), SET_TOL));
                }
            }
        }
    }

    #[test]
    fn neighborhood_inflation(
        (g, x) in continuous_case(),
        r in 0.0..3.0f64,
        t in 0.0..1.0f64,
        k in 1e-3..1.0f64,
        u in -1.0..1.0f64,
    ) {
        let b = dini_bounds(&g.oracle(), x, ApproachMode::Centered, &ladder()).unwrap();
        if let Some((lo, hi)) = b.strong_set(r).bounds() {
            let bb = lo + t * (hi - lo);
            let e = bb + 0.999 * k * u;
            prop_assert!(b.strong_set(r + k).contains(e));
            // within r of the weak 0-set
            prop_assert!(union_distance(&b.weak_set(0.0), bb) <= r + SET_TOL);
        }
    }

    #[test]
    fn singleton_weak_set_iff_classical((g, x) in continuous_case()) {
        let report = classify(&g.oracle(), x, &ladder(), &[0.0]).unwrap();
        let c = report.mode(ApproachMode::Centered).unwrap();
        let weak = &c.weak_sets[0].components;
        let singleton = weak.len() == 1 && weak[0].width().unwrap() <= c.bounds.resolution_tolerance();
        prop_assert_eq!(
            singleton,
            report.classification == Classification::ClassicallyDifferentiable,
            "{:?} at {}: {:?}", g, x, weak
        );
    }

    #[test]
    fn smooth_linearity(x in -5.0..5.0f64, m in -4.0..4.0f64, c in -4.0..4.0f64, k in -5.0..5.0f64) {
        let f = gallery("square").unwrap();
        let g = GalleryFunction::Linear { m, c }.oracle();
        let rf = classify(&f, x, &ladder(), &[]).unwrap();
        let rg = classify(&g, x, &ladder(), &[]).unwrap();
        let cases: [(ReportOp, FunctionOracle, f64); 3] = [
            (ReportOp::Add(&rg), f.sum(&g), 2.0 * x + m),
            (ReportOp::Sub(&rg), f.difference(&g), 2.0 * x - m),
            (ReportOp::Scale(k), f.scaled(k), 2.0 * k * x),
        ];
        for (op, combined, expected) in cases {
            let p = combine_reports(&rf, op, ApproachMode::Centered).unwrap();
            prop_assert!((p.d_lower - expected).abs() < 1e-4 && (p.d_upper - expected).abs() < 1e-4);
            let direct = dini_bounds(&combined, x, ApproachMode::Centered, &ladder()).unwrap();
            prop_assert!((direct.center() - expected).abs() < 1e-4);
            prop_assert!(p.contains(&direct, 1e-4));
        }
    }

    #[test]
    fn kink_combinations_contained(x in prop_oneof![Just(0.5), 1e-3..0.999f64], s in -3.0..3.0f64) {
        let f = gallery("abs").unwrap();
        let g = gallery("skew_tent:0.5,0").unwrap().scaled(s);
        let rf = classify(&f, x, &ladder(), &[]).unwrap();
        let rg = classify(&g, x, &ladder(), &[]).unwrap();
        for (op, combined) in [(ReportOp::Add(&rg), f.sum(&g)), (ReportOp::Sub(&rg), f.difference(&g))] {
            let p = combine_reports(&rf, op, ApproachMode::Centered).unwrap();
            let direct = dini_bounds(&combined, x, ApproachMode::Centered, &ladder()).unwrap();
            prop_assert!(p.contains(&direct, 1e-6));
            prop_assert!(direct.derivative_defect() <= p.defect_bound + 1e-6);
        }
    }

    #[test]
    fn central_difference_sanity(x in -5.0..5.0f64, m in -4.0..4.0f64, c in -4.0..4.0f64) {
        for f in [gallery("square").unwrap(), GalleryFunction::Linear { m, c }.oracle()] {
            let b = dini_bounds(&f, x, ApproachMode::Centered, &ladder()).unwrap();
            let h = 1e-5;
            let fd = (f.evaluate(x + h).unwrap() - f.evaluate(x - h).unwrap()) / (2.0 * h);
            prop_assert!((b.strong_set(0.0).midpoint().unwrap() - fd).abs() < 1e-4);
        }
    }
}

#[test]
fn continuity_defect_vanishes_on_refinement() {
    let fine = ScaleLadder {
        floor_factor: 1e-10,
        levels: 60,
        ..ScaleLadder::default()
    };
    let cases = [
        ("abs", 0.0),
        ("skew_tent:0.5,0", 0.5),
        ("skew_tent:0.7,0.2", 0.7),
        ("square", 1.0),
        ("vdw:12", 0.3),
        ("vdw:12", 1.0 / 3.0),
    ];
    for (spec, x) in cases {
        let f = gallery(spec).unwrap();
        let coarse = classify(&f, x, &ladder(), &[]).unwrap();
        let refined = classify(&f, x, &fine, &[]).unwrap();
        assert!(refined.defect.is_finite());
        assert!(
            refined.continuity_defect <= coarse.continuity_defect + 1e-12,
            "{spec}"
        );
        assert!(
            refined.continuity_defect < 1e-6,
            "{spec} {}",
            refined.continuity_defect
        );
    }
}

#[test]
fn spike_two_sided_is_direct() {
    let r = classify(&gallery("spike33").unwrap(), 0.0, &ladder(), &[1.0, 3.0]).unwrap();
    let t = r.mode(ApproachMode::TwoSided).unwrap();
    assert!((t.bounds.d_lower + 1.0).abs() < 1e-9);
    assert!((t.bounds.d_upper - 1.0).abs() < 1e-9);
    assert!(t
        .strong_sets
        .iter()
        .all(|s| s.set.contains_approx(0.0, 1e-9)));
    assert!(!r.bounds(ApproachMode::Left).unwrap().bounded);
    assert!(!r.bounds(ApproachMode::Right).unwrap().bounded);
    assert_eq!(r.classification, Classification::NotFuzzyDifferentiable);
}

/// `f(x) = x` on `{1/n : n odd}`, `g(x) = x` on `{1/n : n even}`, both zero
/// elsewhere. Each has weak 0-derivative 1 at 0 along its own spikes.
fn spike_quotients(
    n: usize,
    on: impl Fn(usize) -> bool,
    points: impl Fn(usize) -> f64,
) -> SequenceWindow {
    SequenceWindow::from_fn(n, |i| {
        let u = points(i);
        // u is 1/m for some m; the function is u there when `on(m)`
        let m = (1.0 / u).round() as usize;
        let value = if (1.0 / m as f64 - u).abs() < 1e-15 && on(m) {
            u
        } else {
            0.0
        };
        value / u
    })
    .unwrap()
}

#[test]
fn weak_derivatives_are_not_additive() {
    let odd = |m: usize| m % 2 == 1;
    let even = |m: usize| m.is_multiple_of(2);
    let both = |_: usize| true;
    let n = 4000;
    let grid = default_k_grid();
    let f_along_odd = spike_quotients(n, odd, |i| 1.0 / (2 * i - 1) as f64);
    let g_along_even = spike_quotients(n, even, |i| 1.0 / (2 * i) as f64);
    assert!(weak_quotient_limit_direct(&f_along_odd, 1.0, 0.0, &grid).holds);
    assert!(weak_quotient_limit_direct(&g_along_even, 1.0, 0.0, &grid).holds);

    // f + g is x on every 1/n: quotients are 1 there and 0 off the spikes
    let approaches: [Box<dyn Fn(usize) -> f64>; 4] = [
        Box::new(|i| 1.0 / i as f64),
        Box::new(|i| 1.0 / (2 * i) as f64),
        Box::new(|i| 1.0 / (i as f64 + 0.5)),
        Box::new(|i| {
            if i % 2 == 0 {
                1.0 / i as f64
            } else {
                1.0 / (i as f64 + 0.5)
            }
        }),
    ];
    for points in approaches {
        let q = spike_quotients(n, both, points);
        assert!(!weak_quotient_limit_direct(&q, 2.0, 0.0, &grid).holds);
    }
}

#[test]
fn rational_indicator_weak_derivative() {
    // quotients of the indicator of the rationals along rational points
    let zeros = SequenceWindow::new(vec![0.0; 500]).unwrap();
    assert!(weak_quotient_limit_direct(&zeros, 0.0, 0.0, &default_k_grid()).holds);
}

#[test]
fn sampled_data_is_mesh_limited() {
    let pts: Vec<(f64, f64)> = (0..=200)
        .map(|i| {
            let x = -1.0 + i as f64 / 100.0;
            (x, x.abs())
        })
        .collect();
    let f = FunctionOracle::from_samples("abs samples", &pts).unwrap();
    let b = dini_bounds(&f, 0.0, ApproachMode::Centered, &ladder()).unwrap();
    assert!(b.mesh_limited);
    assert!(b.smallest_scale >= 0.01 - 1e-12);
    assert!((b.d_lower + 1.0).abs() < 1e-9 && (b.d_upper - 1.0).abs() < 1e-9);
    let r = classify(&f, 0.5, &ladder(), &[0.0]).unwrap();
    assert_eq!(r.classification, Classification::ClassicallyDifferentiable);
}
