//! Closed real intervals with an explicit empty value.
//!
//! Every r-limit set and r-derivative set produced by this crate is either a
//! closed interval `[lo, hi]` or empty, so this is the value type shared by
//! all of the analysis modules. Endpoints are always included.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

/// A closed interval `[lo, hi]` with `lo <= hi`, or the empty set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Interval {
    #[default]
    Empty,
    Closed {
        lo: f64,
        hi: f64,
    },
}

impl Interval {
    /// Builds `[lo, hi]`. Returns `Empty` when `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            Interval::Empty
        } else {
            Interval::Closed { lo, hi }
        }
    }

    pub fn point(x: f64) -> Self {
        Interval::new(x, x)
    }

    /// The whole real line, used for unrestricted function domains.
    pub fn real_line() -> Self {
        Interval::Closed {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn lo(&self) -> Option<f64> {
        match *self {
            Interval::Closed { lo, .. } => Some(lo),
            Interval::Empty => None,
        }
    }

    pub fn hi(&self) -> Option<f64> {
        match *self {
            Interval::Closed { hi, .. } => Some(hi),
            Interval::Empty => None,
        }
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            Interval::Closed { lo, hi } => Some((lo, hi)),
            Interval::Empty => None,
        }
    }

    /// `hi - lo`, or `None` for the empty set.
    pub fn width(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| hi - lo)
    }

    pub fn midpoint(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| lo + (hi - lo) / 2.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Interval::Closed { lo, hi } => lo <= x && x <= hi,
            Interval::Empty => false,
        }
    }

    /// Membership with both endpoints relaxed by `tol`.
    pub fn contains_approx(&self, x: f64, tol: f64) -> bool {
        match *self {
            Interval::Closed { lo, hi } => lo - tol <= x && x <= hi + tol,
            Interval::Empty => false,
        }
    }

    /// `self ⊆ other`. The empty set is a subset of everything.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_subset_of_approx(other, 0.0)
    }

    pub fn is_subset_of_approx(&self, other: &Interval, tol: f64) -> bool {
        match (*self, *other) {
            (Interval::Empty, _) => true,
            (_, Interval::Empty) => false,
            (Interval::Closed { lo: a, hi: b }, Interval::Closed { lo: c, hi: d }) => {
                c - tol <= a && b <= d + tol
            }
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        match (*self, *other) {
            (Interval::Closed { lo: a, hi: b }, Interval::Closed { lo: c, hi: d }) => {
                Interval::new(a.max(c), b.min(d))
            }
            _ => Interval::Empty,
        }
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        match (*self, *other) {
            (Interval::Empty, x) | (x, Interval::Empty) => x,
            (Interval::Closed { lo: a, hi: b }, Interval::Closed { lo: c, hi: d }) => {
                Interval::new(a.min(c), b.max(d))
            }
        }
    }

    /// `{k·x : x ∈ self}`.
    pub fn scale(&self, k: f64) -> Interval {
        match *self {
            Interval::Closed { lo, hi } => {
                let (p, q) = (k * lo, k * hi);
                Interval::new(p.min(q), p.max(q))
            }
            Interval::Empty => Interval::Empty,
        }
    }

    /// Minkowski sum with `[-r, r]`.
    pub fn inflate(&self, r: f64) -> Interval {
        match *self {
            Interval::Closed { lo, hi } => Interval::new(lo - r, hi + r),
            Interval::Empty => Interval::Empty,
        }
    }

    /// Distance from `x` to the nearest point of the interval.
    pub fn distance_to(&self, x: f64) -> f64 {
        match *self {
            Interval::Closed { lo, hi } => {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            }
            Interval::Empty => f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Interval::Closed { lo, hi } => lo.is_finite() && hi.is_finite(),
            Interval::Empty => true,
        }
    }
}

/// Sorts and merges overlapping (or touching) intervals, dropping empties.
///
/// The result is a disjoint union of closed intervals ordered by `lo`.
pub fn merge_intervals<I: IntoIterator<Item = Interval>>(items: I) -> Vec<Interval> {
    let mut parts: Vec<(f64, f64)> = items.into_iter().filter_map(|i| i.bounds()).collect();
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(parts.len());
    for (lo, hi) in parts {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out.into_iter()
        .map(|(lo, hi)| Interval::new(lo, hi))
        .collect()
}

/// True when `x` lies in one of the (disjoint) components.
pub fn union_contains(parts: &[Interval], x: f64) -> bool {
    parts.iter().any(|p| p.contains(x))
}

/// Distance from `x` to a union of intervals.
pub fn union_distance(parts: &[Interval], x: f64) -> f64 {
    parts
        .iter()
        .map(|p| p.distance_to(x))
        .fold(f64::INFINITY, f64::min)
}

impl Add for Interval {
    type Output = Interval;

    /// Minkowski sum.
    fn add(self, rhs: Interval) -> Interval {
        match (self, rhs) {
            (Interval::Closed { lo: a, hi: b }, Interval::Closed { lo: c, hi: d }) => {
                Interval::new(a + c, b + d)
            }
            _ => Interval::Empty,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        self.scale(-1.0)
    }
}

impl Sub for Interval {
    type Output = Interval;

    /// Minkowski difference `{x - y}`.
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Interval::Closed { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Interval::Empty => write!(f, "∅"),
        }
    }
}

// Empty serializes as `null`, anything else as a two-element array.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            Interval::Empty => serializer.serialize_none(),
            Interval::Closed { lo, hi } => {
                let mut t = serializer.serialize_tuple(2)?;
                t.serialize_element(&lo)?;
                t.serialize_element(&hi)?;
                t.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IntervalVisitor;

        impl<'de> Visitor<'de> for IntervalVisitor {
            type Value = Interval;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("null or a [lo, hi] pair")
            }

            fn visit_none<E: de::Error>(self) -> Result<Interval, E> {
                Ok(Interval::Empty)
            }

            fn visit_unit<E: de::Error>(self) -> Result<Interval, E> {
                Ok(Interval::Empty)
            }

            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Interval, D::Error> {
                d.deserialize_seq(self)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Interval, A::Error> {
                let lo: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let hi: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if lo > hi {
                    return Err(de::Error::custom("interval with lo > hi"));
                }
                Ok(Interval::Closed { lo, hi })
            }
        }

        deserializer.deserialize_option(IntervalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversed_bounds_are_empty() {
        assert!(Interval::new(2.0, 1.0).is_empty());
        assert!(Interval::new(f64::NAN, 1.0).is_empty());
        assert_eq!(Interval::new(1.0, 1.0), Interval::point(1.0));
    }

    #[test]
    fn basic_measures() {
        let i = Interval::new(-1.0, 3.0);
        assert_eq!(i.width(), Some(4.0));
        assert_eq!(i.midpoint(), Some(1.0));
        assert!(i.contains(-1.0) && i.contains(3.0));
        assert!(!i.contains(3.000001));
        assert_eq!(Interval::Empty.width(), None);
    }

    #[test]
    fn set_operations() {
        let a = Interval::new(0.0, 2.0);
        let b = Interval::new(1.0, 5.0);
        assert_eq!(a.intersect(&b), Interval::new(1.0, 2.0));
        assert_eq!(a.hull(&b), Interval::new(0.0, 5.0));
        assert!(a.intersect(&Interval::new(3.0, 4.0)).is_empty());
        assert_eq!(a.hull(&Interval::Empty), a);
        assert!(Interval::Empty.is_subset_of(&a));
        assert!(!a.is_subset_of(&Interval::Empty));
        assert!(Interval::new(0.5, 1.5).is_subset_of(&a));
    }

    #[test]
    fn minkowski_arithmetic() {
        let a = Interval::new(0.0, 2.0);
        let b = Interval::new(-1.0, 1.0);
        assert_eq!(a + b, Interval::new(-1.0, 3.0));
        assert_eq!(a - b, Interval::new(-1.0, 3.0));
        assert_eq!(a.scale(-2.0), Interval::new(-4.0, 0.0));
        assert_eq!(a.inflate(0.5), Interval::new(-0.5, 2.5));
        assert!((a + Interval::Empty).is_empty());
    }

    #[test]
    fn merging_joins_overlaps_only() {
        let merged = merge_intervals(vec![
            Interval::new(1.0, 1.0),
            Interval::new(-1.0, -1.0),
            Interval::Empty,
        ]);
        assert_eq!(merged, vec![Interval::point(-1.0), Interval::point(1.0)]);

        let merged = merge_intervals(vec![Interval::new(-2.5, 0.5), Interval::new(-0.5, 2.5)]);
        assert_eq!(merged, vec![Interval::new(-2.5, 2.5)]);
    }

    #[test]
    fn distances() {
        let i = Interval::new(0.0, 1.0);
        assert_eq!(i.distance_to(0.5), 0.0);
        assert_eq!(i.distance_to(3.0), 2.0);
        assert_eq!(Interval::Empty.distance_to(0.0), f64::INFINITY);
        let parts = [Interval::point(-1.0), Interval::point(1.0)];
        assert_eq!(union_distance(&parts, 0.25), 0.75);
    }

    #[test]
    fn empty_serializes_as_null() {
        assert_eq!(serde_json::to_string(&Interval::Empty).unwrap(), "null");
        assert_eq!(
            serde_json::to_string(&Interval::new(0.5, 1.5)).unwrap(),
            "[0.5,1.5]"
        );
        let back: Interval = serde_json::from_str("null").unwrap();
        assert!(back.is_empty());
        let back: Interval = serde_json::from_str("[0.1,0.30000000000000004]").unwrap();
        assert_eq!(back, Interval::new(0.1, 0.30000000000000004));
        assert!(serde_json::from_str::<Interval>("[2,1]").is_err());
    }
}
