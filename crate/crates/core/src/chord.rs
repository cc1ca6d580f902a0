//! Increasing-chord, self-approaching and greedy tests for polygonal paths.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geom::{to_f64, Point};
use crate::kernel;

/// A polygonal path given by its vertices; at least two, all distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPath(Vec<Point>);

impl VertexPath {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::InvalidPath(format!("vertex {p} repeats")));
            }
        }
        Ok(VertexPath(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> &Point {
        &self.0[0]
    }

    pub fn last(&self) -> &Point {
        &self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> VertexPath {
        VertexPath(self.0.iter().rev().cloned().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Increasing-chord test on raw points: no vertex enters the open slab of a
/// non-incident edge from the wrong side.
pub fn is_increasing_chord_points(points: &[Point]) -> bool {
    kernel::forward_ok(points) && kernel::backward_ok(points)
}

pub fn is_increasing_chord(path: &VertexPath) -> bool {
    is_increasing_chord_points(path.points())
}

pub fn is_self_approaching(path: &VertexPath, dir: Direction) -> bool {
    match dir {
        Direction::Forward => kernel::forward_ok(path.points()),
        Direction::Backward => kernel::forward_ok(path.reversed().points()),
    }
}

/// Whether appending `v` to the increasing-chord path `prefix` keeps it increasing-chord.
/// Only the conditions involving `v` or the new edge are checked.
pub fn can_extend(prefix: &[Point], v: &Point) -> bool {
    kernel::can_extend(prefix, v)
}

pub fn is_ic_extension(base: &VertexPath, extended: &VertexPath) -> Result<bool> {
    if base.len() > extended.len() || extended.points()[..base.len()] != *base.points() {
        return Err(Error::InvalidPath("base is not a prefix of the extension".into()));
    }
    Ok(is_increasing_chord(extended))
}

pub fn is_greedy_path(path: &VertexPath) -> bool {
    let target = path.last();
    let dists: Vec<_> = path.points().iter().map(|p| (p - target).norm_squared()).collect();
    dists.windows(2).all(|w| w[0] > w[1])
}

/// Path length over endpoint distance, in floating point.
pub fn dilation(path: &VertexPath) -> Result<f64> {
    if path.first() == path.last() {
        return Err(Error::InvalidPath("closed path has no dilation".into()));
    }
    let length: f64 = path
        .points()
        .windows(2)
        .map(|e| to_f64(&(&e[1] - &e[0]).norm_squared()).sqrt())
        .sum();
    let chord = to_f64(&(path.last() - path.first()).norm_squared()).sqrt();
    Ok(length / chord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat};

    fn path(pts: &[(i64, i64)]) -> VertexPath {
        VertexPath::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).unwrap()
    }

    fn hook() -> VertexPath {
        VertexPath::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::new(int(0), rat(1, 10)),
        ])
        .unwrap()
    }

    #[test]
    fn increasing_chord_examples() {
        assert!(is_increasing_chord(&path(&[(0, 0), (1, 0), (1, 1)])));
        assert!(!is_increasing_chord(&hook()));
        assert!(is_increasing_chord(&path(&[(3, -7), (-2, 5)])));
    }

    #[test]
    fn self_approaching_examples() {
        assert!(is_self_approaching(&path(&[(0, 0), (1, 0), (1, 1)]), Direction::Forward));
        assert!(!is_self_approaching(&hook(), Direction::Forward));
    }

    #[test]
    fn doubling_back_is_not_self_approaching() {
        // a = (3/2, 0), b = (2, 0), c = (1, 1) gives |bc| > |ac|.
        let p = path(&[(0, 0), (2, 0), (1, 1), (1, 3)]);
        assert!(!is_self_approaching(&p, Direction::Forward));
        let a = Point::new(rat(3, 2), int(0));
        let b = Point::from_ints(2, 0);
        let c = Point::from_ints(1, 1);
        assert!((&c - &b).norm_squared() > (&c - &a).norm_squared());
    }

    #[test]
    fn self_approaching_one_way_only() {
        let p = path(&[(-10, 0), (0, 0), (1, 1), (0, 2)]);
        assert!(is_self_approaching(&p, Direction::Forward));
        assert!(!is_self_approaching(&p, Direction::Backward));
        assert!(!is_increasing_chord(&p));
    }

    #[test]
    fn extension_examples() {
        let base = path(&[(0, 0), (1, 0)]);
        assert!(is_ic_extension(&base, &path(&[(0, 0), (1, 0), (2, 1)])).unwrap());
        assert!(!is_ic_extension(&base, &hook()).unwrap());
        assert!(is_ic_extension(&base, &base).unwrap());
        assert!(is_ic_extension(&path(&[(5, 5), (1, 0)]), &base).is_err());
    }

    #[test]
    fn incremental_extension_matches_full_test() {
        let pts = hook().points().to_vec();
        assert!(can_extend(&pts[..1], &pts[1]));
        assert!(!can_extend(&pts[..2], &pts[2]));
        let mono = path(&[(0, 0), (1, 0), (1, 1), (3, 2)]);
        assert!(can_extend(&mono.points()[..3], &mono.points()[3]));
    }

    #[test]
    fn greedy_examples() {
        assert!(is_greedy_path(&path(&[(0, 0), (1, 0), (1, 1)])));
        assert!(!is_greedy_path(&path(&[(0, 0), (3, 0), (1, 1)])));
        assert!(is_greedy_path(&path(&[(0, 0), (4, 4)])));
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(dilation(&path(&[(0, 0), (3, 4)])).unwrap(), 1.0);
        let d = dilation(&path(&[(0, 0), (1, 0), (1, 1)])).unwrap();
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn invalid_paths_are_rejected() {
        assert!(VertexPath::new(vec![Point::from_ints(0, 0)]).is_err());
        assert!(VertexPath::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 0)
        ])
        .is_err());
    }
}
