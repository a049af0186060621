use neocalc_core::sequence_limits::{combine, Combination};
use neocalc_core::{tail_bounds, Interval, SequenceWindow, TailConfig};
use proptest::prelude::*;

/// `c + A·pattern[i mod p] + B / i^q`: bounded, with known limit points
/// `c + A·pattern[j]`.
#[derive(Debug, Clone)]
struct Family {
    c: f64,
    amplitude: f64,
    pattern: Vec<f64>,
    decay: f64,
    power: f64,
}

impl Family {
    fn window(&self, n: usize) -> SequenceWindow {
        SequenceWindow::from_fn(n, |i| {
            self.c
                + self.amplitude * self.pattern[i % self.pattern.len()]
                + self.decay / (i as f64).powf(self.power)
        })
        .unwrap()
    }

    /// Size of the decay term over the tail of an `n`-prefix; a bound on
    /// what the tail estimate can miss when the decay is not a pure power law.
    fn residual(&self, n: usize) -> f64 {
        self.decay.abs() / (0.75 * n as f64).powf(self.power)
    }

    fn limits(&self) -> (f64, f64) {
        let hi = self
            .pattern
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let lo = self.pattern.iter().copied().fold(f64::INFINITY, f64::min);
        let (a, b) = (self.c + self.amplitude * hi, self.c + self.amplitude * lo);
        (a.max(b), a.min(b))
    }
}

fn family(with_decay: bool) -> impl Strategy<Value = Family> {
    (
        -5.0..5.0f64,
        0.0..3.0f64,
        prop::collection::vec(-1.0..1.0f64, 1..5),
        if with_decay {
            -2.0..2.0f64
        } else {
            0.0..f64::MIN_POSITIVE
        },
        prop::sample::select(vec![0.5, 1.0, 2.0]),
    )
        .prop_map(|(c, amplitude, pattern, decay, power)| Family {
            c,
            amplitude,
            pattern,
            decay,
            power,
        })
}

fn cfg() -> TailConfig {
    TailConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelopes_recover_limit_points(f in family(true)) {
        let b = tail_bounds(&f.window(4000), &cfg()).unwrap();
        let (sup, inf) = f.limits();
        // generous bound on the decay term over the window
        let slack = f.decay.abs() / 1000f64.powf(f.power) + 1e-9;
        prop_assert!(b.bounded);
        prop_assert!((b.sup_estimate - sup).abs() <= slack, "{} vs {}", b.sup_estimate, sup);
        prop_assert!((b.inf_estimate - inf).abs() <= slack, "{} vs {}", b.inf_estimate, inf);
    }

    #[test]
    fn limit_sets_grow_with_r(f in family(true), r in 0.0..4.0f64, dr in 0.0..2.0f64) {
        let b = tail_bounds(&f.window(1000), &cfg()).unwrap();
        prop_assert!(b.r_limit_set(r).is_subset_of(&b.r_limit_set(r + dr)));
    }

    #[test]
    fn width_at_most_two_r(f in family(true), r in 0.0..4.0f64) {
        let b = tail_bounds(&f.window(1000), &cfg()).unwrap();
        if let Some(w) = b.r_limit_set(r).width() {
            prop_assert!(w <= 2.0 * r + 1e-12);
            let converges = b.measure_of_convergence().measure == 0.0;
            prop_assert_eq!((w - 2.0 * r).abs() <= 1e-12, converges || r == 0.0 && w == 0.0);
        }
    }

    #[test]
    fn cauchy_equivalence(f in family(true), r in 0.0..4.0f64) {
        let b = tail_bounds(&f.window(1000), &cfg()).unwrap();
        prop_assert_eq!(b.is_r_fundamental(r), !b.r_limit_set(r).is_empty());
        prop_assert_eq!(b.fuzzy_converges(), b.bounded);
    }

    #[test]
    fn members_are_r_limits(f in family(true), r in 0.0..4.0f64, t in 0.0..1.0f64, out in 1e-6..1.0f64) {
        let b = tail_bounds(&f.window(1000), &cfg()).unwrap();
        match b.r_limit_set(r) {
            Interval::Closed { lo, hi } => {
                prop_assert!(b.is_r_limit(lo + t * (hi - lo), r));
                prop_assert!(!b.is_r_limit(hi + out + b.slack(), r));
                prop_assert!(!b.is_r_limit(lo - out - b.slack(), r));
            }
            Interval::Empty => prop_assert!(!b.is_r_limit(b.measure_of_convergence().best_point.unwrap(), r)),
        }
    }

    #[test]
    fn interleave_is_conjunction(
        f in family(false),
        g in family(false),
        a in -8.0..8.0f64,
        r in 0.0..6.0f64,
    ) {
        let (h, k) = (f.window(1000), g.window(1000));
        let l = SequenceWindow::interleave(&h, &k).unwrap();
        let (bl, bh, bk) = (
            tail_bounds(&l, &cfg()).unwrap(),
            tail_bounds(&h, &cfg()).unwrap(),
            tail_bounds(&k, &cfg()).unwrap(),
        );
        let margin = [bl.limit_defect(a), bh.limit_defect(a), bk.limit_defect(a)]
            .iter()
            .map(|m| (m - r).abs())
            .fold(f64::INFINITY, f64::min);
        prop_assume!(margin > 1e-9);
        prop_assert_eq!(bl.is_r_limit(a, r), bh.is_r_limit(a, r) && bk.is_r_limit(a, r));
    }

    #[test]
    fn order_of_limits(f in family(false), r in 0.0..3.0f64, b in -10.0..10.0f64) {
        let seq = f.window(1000);
        let bounds = tail_bounds(&seq, &cfg()).unwrap();
        let tail = &seq.values()[seq.len() - bounds.window_size..];
        if let Some(hi) = bounds.r_limit_set(r).hi() {
            if hi > b + r {
                prop_assert!(tail.iter().all(|&v| v > b));
            }
        }
        let q = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if let Some(hi) = bounds.r_limit_set(r).hi() {
            prop_assert!(hi <= q + r + 1e-12);
        }
    }

    #[test]
    fn subsequences_stay_fundamental(f in family(true), keep in prop::collection::vec(any::<bool>(), 2000)) {
        let seq = f.window(2000);
        let b = tail_bounds(&seq, &cfg()).unwrap();
        let r = b.measure_of_convergence().measure + 1e-3;
        prop_assert!(b.is_r_fundamental(r));
        let r = r + f.residual(2000);
        let positions: Vec<usize> = (0..seq.len()).filter(|&p| keep[p] || p % 7 == 0).collect();
        let sub = seq.select(&positions).unwrap();
        prop_assert!(tail_bounds(&sub, &cfg()).unwrap().is_r_fundamental(r));
    }

    #[test]
    fn convergent_sequences_have_point_sets(c in -5.0..5.0f64, d in -2.0..2.0f64) {
        let seq = SequenceWindow::from_fn(2000, |i| c + d / i as f64).unwrap();
        let b = tail_bounds(&seq, &cfg()).unwrap();
        prop_assert_eq!(b.measure_of_convergence().measure, 0.0);
        let set = b.r_limit_set(0.0);
        prop_assert!(set.width() == Some(0.0));
        prop_assert!(set.contains_approx(c, 1e-6));
        prop_assert_eq!(b.membership_lim(set.lo().unwrap()), 1.0);
    }

    #[test]
    fn arithmetic_predictions_are_contained(
        f in family(true),
        g in family(true),
        r in 0.0..3.0f64,
        q in 0.0..3.0f64,
        k in -4.0..4.0f64,
    ) {
        let (l, h) = (f.window(2000), g.window(2000));
        for op in [Combination::Add(&h), Combination::Sub(&h), Combination::Scale(k)] {
            let c = combine(&l, op, r, q, &cfg()).unwrap();
            let slack = f.residual(2000) * k.abs().max(1.0) + g.residual(2000);
            let actual = tail_bounds(&c.sequence, &cfg()).unwrap().r_limit_set(c.radius + slack);
            prop_assert!(c.predicted.is_subset_of_approx(&actual, 1e-6), "{:?} vs {:?}", c.predicted, actual);
        }
    }
}

#[test]
fn harmonic_example() {
    let l = SequenceWindow::from_fn(10_000, |i| 1.0 / i as f64).unwrap();
    let b = tail_bounds(&l, &cfg()).unwrap();
    assert!(b.is_r_limit(1.0, 1.0));
    assert!(b.is_r_limit(-1.0, 1.0));
    assert!(b.is_r_limit(0.5, 0.5));
    assert!(!b.is_r_limit(1.0, 0.5));
    assert!((b.limit_defect(1.0) - 1.0).abs() < 1e-9);
    assert!((b.membership_lim(1.0) - 0.5).abs() < 1e-9);
}

#[test]
fn oscillating_power_example() {
    let k = SequenceWindow::from_fn(2000, |i| {
        let i = i as f64;
        1.0 + ((1.0 - i) / i).powf(i)
    })
    .unwrap();
    let b = tail_bounds(&k, &cfg()).unwrap();
    let e = (-1f64).exp();
    let conv = b.measure_of_convergence();
    assert!((conv.measure - e).abs() < 1e-3);
    assert!((conv.best_point.unwrap() - 1.0).abs() < 1e-3);
    assert!(b.is_r_limit(1.0, 1.0));
    for a in [2.0, 0.0, 1.5, 1.7, 0.5] {
        assert!(b.is_r_limit(a, 2.0), "{a}");
    }
    assert!((b.membership_lim(1.0) - 1.0 / (1.0 + e)).abs() < 1e-3);
}

#[test]
fn alternating_example() {
    let h = SequenceWindow::from_fn(1000, |i| 1.0 + (-1f64).powi(i as i32)).unwrap();
    let b = tail_bounds(&h, &cfg().with_tail_fraction(0.2)).unwrap();
    assert_eq!((b.sup_estimate, b.inf_estimate), (2.0, 0.0));
    assert_eq!(b.r_limit_set(1.5), Interval::new(0.5, 1.5));
    assert!(b.r_limit_set(0.5).is_empty());
    assert!(b.is_r_limit(1.0, 2.0));
    assert!(!b.is_r_limit(0.0, 1.0));
    assert!(!b.is_r_limit(-1.0, 2.0));
    assert!(b.is_r_fundamental(1.0));
    assert!(!b.is_r_fundamental(0.9));
}

#[test]
fn unbounded_examples() {
    for seq in [
        SequenceWindow::from_fn(1000, |i| i as f64).unwrap(),
        SequenceWindow::from_fn(60, |i| (-2f64).powi(i as i32)).unwrap(),
    ] {
        let b = tail_bounds(&seq, &cfg()).unwrap();
        assert!(!b.fuzzy_converges());
        assert!(!b.is_r_fundamental(1e6));
        assert!(b.r_limit_set(1e6).is_empty());
        assert_eq!(b.membership_lim(0.0), 0.0);
    }
}

#[test]
fn combination_examples() {
    let l = SequenceWindow::from_fn(4000, |i| 1.0 / i as f64).unwrap();
    let h = SequenceWindow::from_fn(4000, |i| (-1f64).powi(i as i32)).unwrap();
    let c = combine(&l, Combination::Add(&h), 0.0, 1.0, &cfg()).unwrap();
    assert!(c.predicted.contains_approx(0.0, 1e-12));
    assert!(c.actual(&cfg()).unwrap().contains_approx(0.0, 1e-12));

    let h = SequenceWindow::from_fn(1000, |i| 1.0 + (-1f64).powi(i as i32)).unwrap();
    let c = combine(&h, Combination::Scale(-2.0), 1.0, 0.0, &cfg()).unwrap();
    assert_eq!(c.radius, 2.0);
    assert!(c.predicted.contains(-2.0));
    assert!(tail_bounds(&c.sequence, &cfg())
        .unwrap()
        .is_r_limit(-2.0, 2.0));

    let a = SequenceWindow::new(vec![1.5; 100]).unwrap();
    let b = SequenceWindow::new(vec![-4.0; 100]).unwrap();
    let c = combine(&a, Combination::Add(&b), 0.0, 0.0, &cfg()).unwrap();
    assert_eq!(c.predicted, Interval::point(-2.5));
    assert!(c.sequence.values().iter().all(|&v| v == -2.5));

    let short = SequenceWindow::new(vec![0.0; 99]).unwrap();
    assert!(combine(&a, Combination::Sub(&short), 0.0, 0.0, &cfg()).is_err());
}
