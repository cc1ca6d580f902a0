//! Exact rational plane geometry: points, segments, lines, slabs and upper envelopes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

/// Number of bits of the larger of numerator and denominator.
pub fn bit_length(value: &Rational) -> u64 {
    value.numer().bits().max(value.denom().bits())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn dot(&self, other: &Point) -> Rational {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, factor: &Rational) -> Point {
        Point::new(&self.x * factor, &self.y * factor)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = rat(1, 2);
        Point::new((&self.x + &other.x) * &half, (&self.y + &other.y) * &half)
    }

    pub fn mirror_x(&self) -> Point {
        Point::new(-&self.x, self.y.clone())
    }

    pub fn bit_length(&self) -> u64 {
        bit_length(&self.x).max(bit_length(&self.y))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.x), to_f64(&self.y))
    }
}

impl<'a> Sub<&'a Point> for &'a Point {
    type Output = Point;
    fn sub(self, rhs: &'a Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl<'a> Add<&'a Point> for &'a Point {
    type Output = Point;
    fn add(self, rhs: &'a Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn b(&self) -> &Point {
        &self.b
    }

    pub fn direction(&self) -> Point {
        &self.b - &self.a
    }

    pub fn line(&self) -> Line {
        Line::through(&self.a, &self.b).expect("segment endpoints are distinct")
    }

    /// True if `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        let d = self.direction();
        let cross = &d.x * (&p.y - &self.a.y) - &d.y * (&p.x - &self.a.x);
        if !cross.is_zero() {
            return false;
        }
        let t = (p - &self.a).dot(&d);
        !t.is_negative() && t <= d.norm_squared()
    }

    /// True if `p` lies on the segment but is neither endpoint.
    pub fn contains_in_interior(&self, p: &Point) -> bool {
        p != &self.a && p != &self.b && self.contains(p)
    }
}

/// Where a point sits relative to a closed slab.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabPosition {
    StrictlyInside,
    OnBoundary,
    Outside,
}

/// The strip between the two lines through a segment's endpoints perpendicular to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slab {
    base: Segment,
}

impl Slab {
    pub fn base(&self) -> &Segment {
        &self.base
    }

    /// Signed projection of `p - a` onto the base direction.
    pub fn projection(&self, p: &Point) -> Rational {
        (p - self.base.a()).dot(&self.base.direction())
    }

    /// Projection value of the far boundary line (the one through `b`).
    pub fn width_parameter(&self) -> Rational {
        self.base.direction().norm_squared()
    }

    pub fn position(&self, p: &Point) -> SlabPosition {
        let d = self.base.direction();
        let from_a = (p - self.base.a()).dot(&d);
        let from_b = (p - self.base.b()).dot(&d);
        if from_a.is_zero() || from_b.is_zero() {
            SlabPosition::OnBoundary
        } else if from_a.is_positive() && from_b.is_negative() {
            SlabPosition::StrictlyInside
        } else {
            SlabPosition::Outside
        }
    }

    /// The boundary lines through `a` and through `b`.
    pub fn boundary_lines(&self) -> (Line, Line) {
        let d = self.base.direction();
        let through = |p: &Point| {
            Line::new(d.x.clone(), d.y.clone(), p.dot(&d)).expect("direction is nonzero")
        };
        (through(self.base.a()), through(self.base.b()))
    }

    /// True if some point of `seg` lies in the open slab.
    pub fn meets_properly(&self, seg: &Segment) -> bool {
        let (lo, hi) = self.projection_range(seg);
        lo < self.width_parameter() && hi.is_positive()
    }

    /// True if some point of `seg` lies in the closed slab.
    pub fn meets(&self, seg: &Segment) -> bool {
        let (lo, hi) = self.projection_range(seg);
        lo <= self.width_parameter() && !hi.is_negative()
    }

    fn projection_range(&self, seg: &Segment) -> (Rational, Rational) {
        let pa = self.projection(seg.a());
        let pb = self.projection(seg.b());
        if pa <= pb {
            (pa, pb)
        } else {
            (pb, pa)
        }
    }
}

pub fn slab_of(seg: &Segment) -> Slab {
    Slab { base: seg.clone() }
}

pub fn slab_position(slab: &Slab, p: &Point) -> SlabPosition {
    slab.position(p)
}

/// The line `A x + B y = C` with integral coefficients, gcd 1 and the first nonzero of
/// `(A, B)` positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateLine);
        }
        let lcm = [&a, &b, &c]
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Vec<BigInt> = [&a, &b, &c]
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        let gcd = scaled
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let flip = if scaled[0].is_zero() {
            scaled[1].is_negative()
        } else {
            scaled[0].is_negative()
        };
        let finish = |v: &BigInt| {
            let q = v / &gcd;
            Rational::from_integer(if flip { -q } else { q })
        };
        Ok(Line {
            a: finish(&scaled[0]),
            b: finish(&scaled[1]),
            c: finish(&scaled[2]),
        })
    }

    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        if p == q {
            return Err(Error::DegenerateSegment(p.clone()));
        }
        let d = q - p;
        let a = d.y.clone();
        let b = -d.x;
        let c = &a * &p.x + &b * &p.y;
        Line::new(a, b, c)
    }

    pub fn vertical(x: Rational) -> Self {
        Line::new(Rational::one(), Rational::zero(), x).expect("nonzero normal")
    }

    pub fn horizontal(y: Rational) -> Self {
        Line::new(Rational::zero(), Rational::one(), y).expect("nonzero normal")
    }

    /// The line through `p` with the given slope.
    pub fn with_slope(p: &Point, slope: &Rational) -> Self {
        let c = &p.y - slope * &p.x;
        Line::new(-slope.clone(), Rational::one(), c).expect("nonzero normal")
    }

    pub fn coefficients(&self) -> (&Rational, &Rational, &Rational) {
        (&self.a, &self.b, &self.c)
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    pub fn slope(&self) -> Option<Rational> {
        (!self.is_vertical()).then(|| -&self.a / &self.b)
    }

    /// The y-intercept, for non-vertical lines.
    pub fn intercept(&self) -> Option<Rational> {
        (!self.is_vertical()).then(|| &self.c / &self.b)
    }

    pub fn y_at(&self, x: &Rational) -> Option<Rational> {
        (!self.is_vertical()).then(|| (&self.c - &self.a * x) / &self.b)
    }

    pub fn x_at(&self, y: &Rational) -> Option<Rational> {
        (!self.a.is_zero()).then(|| (&self.c - &self.b * y) / &self.a)
    }

    /// `A x + B y - C`; zero exactly on the line.
    pub fn evaluate(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y - &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.evaluate(p).is_zero()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

pub fn line_intersection(l1: &Line, l2: &Line) -> Option<Point> {
    let det = &l1.a * &l2.b - &l2.a * &l1.b;
    if det.is_zero() {
        return None;
    }
    let x = (&l1.c * &l2.b - &l2.c * &l1.b) / &det;
    let y = (&l1.a * &l2.c - &l2.a * &l1.c) / &det;
    Some(Point::new(x, y))
}

/// Walks from `p` along the perpendicular of `through` until reaching `x = vertical_x`.
pub fn perpendicular_foot_on_vertical(
    p: &Point,
    through: &Line,
    vertical_x: &Rational,
) -> Result<Point> {
    if !through.contains(p) {
        return Err(Error::PointOffLine(p.clone()));
    }
    let (a, b, _) = through.coefficients();
    if a.is_zero() {
        return Err(Error::VerticalLine);
    }
    let y = &p.y + b / a * (vertical_x - &p.x);
    Ok(Point::new(vertical_x.clone(), y))
}

/// One maximal piece of an upper envelope. `start`/`end` are `None` when unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopePiece {
    pub line: usize,
    pub start: Option<Point>,
    pub end: Option<Point>,
}

#[derive(Clone, Debug)]
pub struct UpperEnvelope {
    lines: Vec<Line>,
    pieces: Vec<EnvelopePiece>,
}

impl UpperEnvelope {
    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    /// Pieces from left to right.
    pub fn pieces(&self) -> &[EnvelopePiece] {
        &self.pieces
    }

    /// Line ids of the pieces from left to right.
    pub fn order(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.line).collect()
    }

    pub fn breakpoints(&self) -> Vec<Point> {
        self.pieces.iter().filter_map(|p| p.end.clone()).collect()
    }

    pub fn piece_of(&self, line: usize) -> Option<&EnvelopePiece> {
        self.pieces.iter().find(|p| p.line == line)
    }

    pub fn height_at(&self, x: &Rational) -> Rational {
        let idx = self
            .pieces
            .iter()
            .position(|p| p.end.as_ref().is_none_or(|e| x <= &e.x))
            .expect("last piece is unbounded");
        self.lines[self.pieces[idx].line]
            .y_at(x)
            .expect("envelope lines are not vertical")
    }
}

/// Upper envelope of non-vertical lines, computed by insertion in slope order.
pub fn upper_envelope(lines: &[Line]) -> Result<UpperEnvelope> {
    if lines.is_empty() {
        return Err(Error::EmptyLineSet);
    }
    if lines.iter().any(Line::is_vertical) {
        return Err(Error::VerticalLine);
    }
    let slopes: Vec<Rational> = lines.iter().map(|l| l.slope().unwrap()).collect();
    let intercepts: Vec<Rational> = lines.iter().map(|l| l.intercept().unwrap()).collect();

    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        slopes[i]
            .cmp(&slopes[j])
            .then_with(|| intercepts[j].cmp(&intercepts[i]))
            .then(i.cmp(&j))
    });
    order.dedup_by(|later, earlier| slopes[*later] == slopes[*earlier]);

    let cross_x = |i: usize, j: usize| (&intercepts[j] - &intercepts[i]) / (&slopes[i] - &slopes[j]);
    let mut hull: Vec<usize> = Vec::new();
    for id in order {
        while hull.len() >= 2 {
            let top = hull[hull.len() - 1];
            let below = hull[hull.len() - 2];
            if cross_x(top, id) <= cross_x(below, top) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(id);
    }

    let mut pieces = Vec::with_capacity(hull.len());
    let mut start: Option<Point> = None;
    for (k, &id) in hull.iter().enumerate() {
        let end = hull.get(k + 1).map(|&next| {
            let x = cross_x(id, next);
            let y = &slopes[id] * &x + &intercepts[id];
            Point::new(x, y)
        });
        pieces.push(EnvelopePiece {
            line: id,
            start: start.take(),
            end: end.clone(),
        });
        start = end;
    }
    Ok(UpperEnvelope {
        lines: lines.to_vec(),
        pieces,
    })
}

/// Sign of the cross product `(b - a) x (c - a)`.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> Ordering {
    let ab = b - a;
    let ac = c - a;
    (&ab.x * &ac.y - &ab.y * &ac.x).cmp(&Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn slab_of_axis_aligned_segments() {
        let horizontal = slab_of(&Segment::new(p(0, 0), p(1, 0)).unwrap());
        let (lo, hi) = horizontal.boundary_lines();
        assert_eq!(lo, Line::vertical(int(0)));
        assert_eq!(hi, Line::vertical(int(1)));
        let vertical = slab_of(&Segment::new(p(0, 0), p(0, 1)).unwrap());
        let (lo, hi) = vertical.boundary_lines();
        assert_eq!(lo, Line::horizontal(int(0)));
        assert_eq!(hi, Line::horizontal(int(1)));
    }

    #[test]
    fn slab_of_diagonal_segment() {
        let slab = slab_of(&Segment::new(p(0, 0), p(1, 1)).unwrap());
        let (lo, hi) = slab.boundary_lines();
        assert_eq!(lo, Line::new(int(1), int(1), int(0)).unwrap());
        assert_eq!(hi, Line::new(int(1), int(1), int(2)).unwrap());
        assert_eq!(slab.position(&p(3, 0)), SlabPosition::Outside);
        assert_eq!(slab.position(&p(3, -1)), SlabPosition::OnBoundary);
        assert_eq!(slab.position(&Point::new(rat(1, 2), int(0))), SlabPosition::StrictlyInside);
    }

    #[test]
    fn slab_position_examples() {
        let slab = slab_of(&Segment::new(p(0, 0), p(1, 0)).unwrap());
        assert_eq!(slab_position(&slab, &Point::new(rat(1, 2), int(7))), SlabPosition::StrictlyInside);
        assert_eq!(slab_position(&slab, &p(0, -3)), SlabPosition::OnBoundary);
        assert_eq!(slab_position(&slab, &p(2, 0)), SlabPosition::Outside);
    }

    #[test]
    fn zero_length_segment_is_rejected() {
        assert!(matches!(Segment::new(p(1, 1), p(1, 1)), Err(Error::DegenerateSegment(_))));
    }

    #[test]
    fn line_normalization() {
        let l = Line::new(rat(-1, 2), rat(3, 4), rat(5, 6)).unwrap();
        assert_eq!(l.coefficients(), (&int(6), &int(-9), &int(-10)));
        let h = Line::new(int(0), int(-4), int(8)).unwrap();
        assert_eq!(h, Line::horizontal(int(-2)));
        assert!(Line::new(int(0), int(0), int(1)).is_err());
    }

    #[test]
    fn line_intersection_examples() {
        let through = Line::through(&p(0, 1), &p(20, -4)).unwrap();
        assert_eq!(
            line_intersection(&Line::vertical(int(5)), &through),
            Some(Point::new(int(5), rat(-1, 4)))
        );
        assert_eq!(
            line_intersection(&Line::vertical(int(0)), &Line::horizontal(int(0))),
            Some(p(0, 0))
        );
        assert_eq!(line_intersection(&Line::horizontal(int(1)), &Line::horizontal(int(2))), None);
        assert_eq!(line_intersection(&through, &through), None);
    }

    #[test]
    fn perpendicular_foot_examples() {
        let q = Point::new(int(5), rat(-1, 4));
        let shallow = Line::with_slope(&q, &rat(-1, 4));
        assert_eq!(
            perpendicular_foot_on_vertical(&q, &shallow, &rat(39, 8)).unwrap(),
            Point::new(rat(39, 8), rat(-3, 4))
        );
        let diag = Line::with_slope(&p(0, 0), &int(-1));
        assert_eq!(perpendicular_foot_on_vertical(&p(0, 0), &diag, &int(0)).unwrap(), p(0, 0));
        let steep = Line::with_slope(&p(5, -16), &int(-4));
        assert_eq!(
            perpendicular_foot_on_vertical(&p(5, -16), &steep, &rat(39, 8)).unwrap(),
            Point::new(rat(39, 8), rat(-513, 32))
        );
    }

    #[test]
    fn perpendicular_foot_rejects_bad_input() {
        let flat = Line::horizontal(int(0));
        assert!(matches!(
            perpendicular_foot_on_vertical(&p(1, 0), &flat, &int(3)),
            Err(Error::VerticalLine)
        ));
        assert!(matches!(
            perpendicular_foot_on_vertical(&p(1, 1), &flat, &int(3)),
            Err(Error::PointOffLine(_))
        ));
        let upright = Line::vertical(int(2));
        assert_eq!(
            perpendicular_foot_on_vertical(&p(2, 7), &upright, &int(-4)).unwrap(),
            p(-4, 7)
        );
    }

    #[test]
    fn envelope_of_single_line() {
        let env = upper_envelope(&[Line::horizontal(int(0))]).unwrap();
        assert_eq!(env.pieces(), &[EnvelopePiece { line: 0, start: None, end: None }]);
    }

    #[test]
    fn envelope_breakpoint_of_two_lines() {
        let l1 = Line::with_slope(&p(0, 1), &rat(-1, 4));
        let l2 = Line::with_slope(&p(0, 2), &rat(-2, 3));
        let env = upper_envelope(&[l1, l2]).unwrap();
        assert_eq!(env.order(), vec![1, 0]);
        assert_eq!(env.breakpoints(), vec![Point::new(rat(12, 5), rat(2, 5))]);
    }

    #[test]
    fn envelope_collapses_duplicates_to_smallest_id() {
        let a = Line::with_slope(&p(0, 0), &int(1));
        let b = Line::with_slope(&p(0, 0), &int(-1));
        let env = upper_envelope(&[b.clone(), a.clone(), b, a]).unwrap();
        assert_eq!(env.order(), vec![0, 1]);
        assert_eq!(env.breakpoints(), vec![p(0, 0)]);
    }

    #[test]
    fn envelope_drops_lines_through_a_breakpoint() {
        let lines = [
            Line::with_slope(&p(0, 0), &int(-1)),
            Line::horizontal(int(0)),
            Line::with_slope(&p(0, 0), &int(1)),
        ];
        let env = upper_envelope(&lines).unwrap();
        assert_eq!(env.order(), vec![0, 2]);
    }

    #[test]
    fn envelope_rejects_vertical_lines() {
        assert!(matches!(
            upper_envelope(&[Line::vertical(int(1))]),
            Err(Error::VerticalLine)
        ));
        assert!(matches!(upper_envelope(&[]), Err(Error::EmptyLineSet)));
    }

    #[test]
    fn segment_containment() {
        let s = Segment::new(p(0, 0), p(4, 2)).unwrap();
        assert!(s.contains_in_interior(&p(2, 1)));
        assert!(!s.contains_in_interior(&p(4, 2)));
        assert!(!s.contains(&p(6, 3)));
        assert!(!s.contains(&p(2, 2)));
    }
}
