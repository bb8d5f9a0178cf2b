//! Exact predicates over the rationals.
//!
//! Every finite `f64` is a dyadic rational, so lifting coordinates into
//! [`BigRational`] loses nothing; differences and cross products computed
//! there have the exact sign of the real-number expression.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;

use super::Point;

/// Lifts a finite float into the rationals without rounding.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

/// Rational pair lifted from a [`Point`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint {
    pub u: BigRational,
    pub v: BigRational,
}

impl RationalPoint {
    pub fn from_point(p: Point) -> Self {
        Self {
            u: rational(p.u),
            v: rational(p.v),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            u: &self.u - &other.u,
            v: &self.v - &other.v,
        }
    }

    pub fn cross(&self, other: &Self) -> BigRational {
        &self.u * &other.v - &self.v * &other.u
    }

    pub fn dot(&self, other: &Self) -> BigRational {
        &self.u * &other.u + &self.v * &other.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }
}

fn sign(x: &BigRational) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// Exact sign of `a × b`.
pub fn cross_sign(a: Point, b: Point) -> Ordering {
    let a = RationalPoint::from_point(a);
    let b = RationalPoint::from_point(b);
    sign(&a.cross(&b))
}

/// Exact sign of `(b - a) × (c - a)`: `Greater` for a left turn.
pub fn orient(a: Point, b: Point, c: Point) -> Ordering {
    let a = RationalPoint::from_point(a);
    let b = RationalPoint::from_point(b).sub(&a);
    let c = RationalPoint::from_point(c).sub(&a);
    sign(&b.cross(&c))
}

/// Exact sign of `(b1 - a1) × (b2 - a2)`.
pub fn direction_cross_sign(a1: Point, b1: Point, a2: Point, b2: Point) -> Ordering {
    let d1 = RationalPoint::from_point(b1).sub(&RationalPoint::from_point(a1));
    let d2 = RationalPoint::from_point(b2).sub(&RationalPoint::from_point(a2));
    sign(&d1.cross(&d2))
}

/// Exact sign of `(b1 - a1) · (b2 - a2)`.
pub fn direction_dot_sign(a1: Point, b1: Point, a2: Point, b2: Point) -> Ordering {
    let d1 = RationalPoint::from_point(b1).sub(&RationalPoint::from_point(a1));
    let d2 = RationalPoint::from_point(b2).sub(&RationalPoint::from_point(a2));
    sign(&d1.dot(&d2))
}
