use std::collections::BTreeMap;

use proptest::prelude::*;

use icchord::chord::{dilation, is_increasing_chord_points, is_self_approaching, Direction, VertexPath};
use icchord::drawing::{Drawing, RootedTree};
use icchord::geom::{line_intersection, rat, slab_of, upper_envelope, Line, Point, Rational, Segment, SlabPosition};
use icchord::reduction::build_arrangement;
use icchord::search::{
    find_ic_path, find_ic_rooted_spanning_tree, for_each_simple_path, verify_ic_rooted_tree, SearchOutcome,
};

fn coord() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
}

fn distinct_points(min: usize, max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(), min..=max).prop_map(|mut pts| {
        let mut seen = Vec::new();
        pts.retain(|p| {
            let fresh = !seen.contains(p);
            seen.push(p.clone());
            fresh
        });
        pts
    })
}

fn monotone_chain() -> impl Strategy<Value = Vec<Point>> {
    (point(), prop::collection::vec((0i64..=9, 0i64..=9, 1i64..=5), 1..10), any::<(bool, bool)>()).prop_map(
        |(start, steps, (fx, fy))| {
            let mut pts = vec![start];
            for (dx, dy, den) in steps {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let last = pts.last().unwrap();
                let sx = if fx { -dx } else { dx };
                let sy = if fy { -dy } else { dy };
                pts.push(Point::new(&last.x + rat(sx, den), &last.y + rat(sy, den)));
            }
            pts
        },
    )
}

fn line() -> impl Strategy<Value = Line> {
    (coord(), coord()).prop_map(|(m, c)| Line::with_slope(&Point::new(rat(0, 1), c), &m))
}

fn dist2(a: &Point, b: &Point) -> Rational {
    (a - b).norm_squared()
}

fn random_drawing() -> impl Strategy<Value = Drawing> {
    distinct_points(3, 6).prop_flat_map(|pts| {
        let n = pts.len();
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |mask| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges = pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            Drawing::from_parts(pts.iter().map(|p| (p.clone(), None)).collect(), edges).unwrap()
        })
    })
}

/// Every choice of one neighbor per non-root vertex that forms a tree.
fn brute_force_tree(d: &Drawing, root: usize) -> Option<RootedTree> {
    let others: Vec<usize> = (0..d.len()).filter(|&v| v != root).collect();
    let mut choice = vec![0usize; others.len()];
    if others.iter().any(|&v| d.neighbors(v).is_empty()) {
        return None;
    }
    loop {
        let parents: BTreeMap<usize, usize> =
            others.iter().zip(&choice).map(|(&v, &k)| (v, d.neighbors(v)[k])).collect();
        if let Ok(tree) = RootedTree::from_parents(root, parents) {
            if tree.len() == d.len() && verify_ic_rooted_tree(d, &tree).unwrap() {
                return Some(tree);
            }
        }
        let mut k = 0;
        loop {
            if k == others.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < d.neighbors(others[k]).len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn slab_position_matches_triangle_angles(a in point(), b in point(), p in point()) {
        prop_assume!(a != b);
        let slab = slab_of(&Segment::new(a.clone(), b.clone()).unwrap());
        let (ab, pa, pb) = (dist2(&a, &b), dist2(&p, &a), dist2(&p, &b));
        let at_a = &pb - &pa - &ab;
        let at_b = &pa - &pb - &ab;
        let expected = if at_a == rat(0, 1) || at_b == rat(0, 1) {
            SlabPosition::OnBoundary
        } else if at_a < rat(0, 1) && at_b < rat(0, 1) {
            SlabPosition::StrictlyInside
        } else {
            SlabPosition::Outside
        };
        prop_assert_eq!(slab.position(&p), expected);
    }

    #[test]
    fn envelope_height_is_max_of_lines(lines in prop::collection::vec(line(), 1..8), x in coord()) {
        let env = upper_envelope(&lines).unwrap();
        let max = lines.iter().map(|l| l.y_at(&x).unwrap()).max().unwrap();
        prop_assert_eq!(env.height_at(&x), max);
    }

    #[test]
    fn intersection_lies_on_both_lines(l1 in line(), l2 in line()) {
        match line_intersection(&l1, &l2) {
            Some(p) => {
                prop_assert!(l1.contains(&p));
                prop_assert!(l2.contains(&p));
            }
            None => prop_assert_eq!(l1.slope(), l2.slope()),
        }
    }

    #[test]
    fn monotone_chains_are_increasing_chord(pts in monotone_chain()) {
        prop_assume!(pts.len() >= 2);
        prop_assert!(is_increasing_chord_points(&pts));
        let bound = 2.0 * std::f64::consts::PI / 3.0 + 1e-9;
        prop_assert!(dilation(&VertexPath::new(pts).unwrap()).unwrap() <= bound);
    }

    #[test]
    fn reversal_and_self_approach(pts in distinct_points(2, 6)) {
        prop_assume!(pts.len() >= 2);
        let path = VertexPath::new(pts.clone()).unwrap();
        let ic = is_increasing_chord_points(&pts);
        prop_assert_eq!(ic, is_increasing_chord_points(path.reversed().points()));
        let both = is_self_approaching(&path, Direction::Forward) && is_self_approaching(&path, Direction::Backward);
        prop_assert_eq!(ic, both);
    }

    #[test]
    fn subpaths_inherit_increasing_chord(pts in distinct_points(2, 6)) {
        prop_assume!(pts.len() >= 2 && is_increasing_chord_points(&pts));
        for i in 0..pts.len() {
            for j in i + 1..=pts.len() {
                prop_assert!(is_increasing_chord_points(&pts[i..j]));
            }
        }
        let bound = 2.0 * std::f64::consts::PI / 3.0 + 1e-9;
        prop_assert!(dilation(&VertexPath::new(pts).unwrap()).unwrap() <= bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn path_search_matches_enumeration(d in random_drawing()) {
        let t = d.len() - 1;
        let mut exists = false;
        for_each_simple_path(&d, 0, t, |p| exists |= is_increasing_chord_points(&d.points_of(p)));
        let search = find_ic_path(&d, 0, t, 1_000_000).unwrap();
        match &search.outcome {
            SearchOutcome::Found(p) => {
                prop_assert!(exists);
                prop_assert_eq!((p[0], *p.last().unwrap()), (0, t));
                prop_assert!(is_increasing_chord_points(&d.points_of(p)));
            }
            SearchOutcome::Absent => prop_assert!(!exists),
            SearchOutcome::Unknown => prop_assert!(false, "budget exhausted"),
        }
    }

    #[test]
    fn tree_search_matches_enumeration(d in random_drawing()) {
        let brute = brute_force_tree(&d, 0);
        let search = find_ic_rooted_spanning_tree(&d, 0, 1_000_000).unwrap();
        match &search.outcome {
            SearchOutcome::Found(tree) => {
                prop_assert!(brute.is_some());
                prop_assert!(verify_ic_rooted_tree(&d, tree).unwrap());
            }
            SearchOutcome::Absent => prop_assert!(brute.is_none()),
            SearchOutcome::Unknown => prop_assert!(false, "budget exhausted"),
        }
    }
}

#[test]
fn arrangement_envelope_order() {
    for alpha in 1..=5 {
        let arr = build_arrangement(alpha).unwrap();
        let expected: Vec<usize> = (0..2 * alpha).rev().collect();
        assert_eq!(arr.envelope().order(), expected);
    }
}
