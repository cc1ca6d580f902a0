//! Sign predicates shared by the exact rational points and a scaled 128-bit integer
//! representation used by the searches when coordinates are small.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::drawing::Drawing;
use crate::geom::{Point, Rational};

/// Bit budget per scaled coordinate so that every dot product of differences fits in i128.
const SMALL_COORD_BITS: u64 = 60;

pub(crate) trait Scalar: Clone + Ord {
    fn zero() -> Self;
    fn diff(&self, other: &Self) -> Self;
    /// `a * b + c * d`
    fn dot2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn diff(&self, other: &Self) -> Self {
        self - other
    }
    fn dot2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a * b + c * d
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn diff(&self, other: &Self) -> Self {
        self - other
    }
    fn dot2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a * b + c * d
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn diff(&self, other: &Self) -> Self {
        self - other
    }
    fn dot2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a * b + c * d
    }
}

pub(crate) trait PlanePoint: Clone {
    type S: Scalar;
    fn px(&self) -> &Self::S;
    fn py(&self) -> &Self::S;
}

impl PlanePoint for Point {
    type S = Rational;
    fn px(&self) -> &Rational {
        &self.x
    }
    fn py(&self) -> &Rational {
        &self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SmallPoint {
    x: i128,
    y: i128,
}

impl PlanePoint for SmallPoint {
    type S = i128;
    fn px(&self) -> &i128 {
        &self.x
    }
    fn py(&self) -> &i128 {
        &self.y
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BigPoint {
    pub(crate) x: BigInt,
    pub(crate) y: BigInt,
}

impl PlanePoint for BigPoint {
    type S = BigInt;
    fn px(&self) -> &BigInt {
        &self.x
    }
    fn py(&self) -> &BigInt {
        &self.y
    }
}

/// `(p - o) . (b - a)`.
pub(crate) fn dot_along<P: PlanePoint>(p: &P, o: &P, a: &P, b: &P) -> P::S {
    P::S::dot2(
        &p.px().diff(o.px()),
        &b.px().diff(a.px()),
        &p.py().diff(o.py()),
        &b.py().diff(a.py()),
    )
}

/// Sign of `(p - o) . (b - a)`.
pub(crate) fn ahead<P: PlanePoint>(p: &P, o: &P, a: &P, b: &P) -> Ordering {
    dot_along(p, o, a, b).cmp(&P::S::zero())
}

pub(crate) fn can_extend<P: PlanePoint>(prefix: &[P], v: &P) -> bool {
    let Some(last) = prefix.last() else {
        return true;
    };
    prefix
        .windows(2)
        .all(|e| ahead(v, &e[1], &e[0], &e[1]) != Ordering::Less)
        && prefix[..prefix.len() - 1]
            .iter()
            .all(|q| ahead(q, last, last, v) != Ordering::Greater)
}

pub(crate) fn forward_ok<P: PlanePoint>(points: &[P]) -> bool {
    points.windows(2).enumerate().all(|(k, e)| {
        points[k + 2..]
            .iter()
            .all(|q| ahead(q, &e[1], &e[0], &e[1]) != Ordering::Less)
    })
}

pub(crate) fn backward_ok<P: PlanePoint>(points: &[P]) -> bool {
    points.windows(2).enumerate().all(|(k, e)| {
        points[..k]
            .iter()
            .all(|q| ahead(q, &e[0], &e[0], &e[1]) != Ordering::Greater)
    })
}

/// Coordinates multiplied by the common denominator of all of them. Every sign
/// predicate is invariant under this scaling.
pub(crate) fn integer_points(points: &[Point]) -> Vec<BigPoint> {
    let lcm = points
        .iter()
        .flat_map(|p| [p.x.denom(), p.y.denom()])
        .fold(BigInt::one(), |acc, den| acc.lcm(den));
    let scale = |v: &Rational| v.numer() * (&lcm / v.denom());
    points
        .iter()
        .map(|p| BigPoint {
            x: scale(&p.x),
            y: scale(&p.y),
        })
        .collect()
}

/// Scaled coordinates as 128-bit integers, when they are small enough.
pub(crate) fn small_points(d: &Drawing) -> Option<Vec<SmallPoint>> {
    integer_points(d.vertices())
        .into_iter()
        .map(|p| {
            (p.x.bits() <= SMALL_COORD_BITS && p.y.bits() <= SMALL_COORD_BITS).then(|| SmallPoint {
                x: p.x.to_i128().expect("fits"),
                y: p.y.to_i128().expect("fits"),
            })
        })
        .collect()
}
