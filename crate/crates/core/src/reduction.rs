//! The 3-SAT to increasing-chord spanning tree reduction.
//!
//! Construction order: the line arrangement, the variable gadget (needles on a
//! vertical line), the clause gadgets (peaks and literal points) and finally the root
//! with one anchor per literal point. Every geometric claim the equivalence relies on
//! is re-checked on the built drawing.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::chord::{can_extend, is_increasing_chord_points};
use crate::cnf::{Assignment, CnfInstance, Literal};
use crate::drawing::{Drawing, RootedTree};
use crate::error::{Error, Result};
use crate::geom::{
    int, line_intersection, perpendicular_foot_on_vertical, rat, slab_of, upper_envelope, Line,
    Point, Rational, Segment, UpperEnvelope,
};
use crate::search::verify_ic_rooted_tree;

/// Smallest variable count for which the tree reduction's drawing is sound; smaller
/// instances are padded with unused variables.
pub const MIN_TREE_ALPHA: usize = 3;

/// Largest construction variable count for which literal-point access is checked over
/// every variable path.
const ACCESS_CHECK_MAX_ALPHA: usize = 12;

fn pow(base: usize, exp: u32) -> Rational {
    Rational::from_integer((base as u64).pow(exp).into())
}

pub fn epsilon(alpha: usize) -> Rational {
    pow(alpha, 3).recip()
}

pub fn root_point(alpha: usize) -> Point {
    Point::new(Rational::zero(), -pow(alpha, 5))
}

/// Peak of clause `i` (1-based).
pub fn peak_point(alpha: usize, i: usize) -> Point {
    Point::new(Rational::zero(), int((2 * alpha + i) as i64))
}

/// Upper and lower endpoint of the vertical segment carrying the needles.
pub fn needle_line_ends(alpha: usize) -> (Point, Point) {
    let x = int(2 * alpha as i64 + 1);
    (
        Point::new(x.clone(), int(2 * alpha as i64)),
        Point::new(x, -pow(alpha, 2) * int(5)),
    )
}

/// One arrangement segment, numbered `1..=2 alpha`.
#[derive(Clone, Debug)]
pub struct ArrangementLine {
    pub index: usize,
    pub upper: Point,
    pub lower: Point,
    pub extended_lower: Point,
    pub line: Line,
}

impl ArrangementLine {
    pub fn slope(&self) -> Rational {
        self.line.slope().expect("arrangement lines are not vertical")
    }

    /// The segment before extension.
    pub fn segment(&self) -> Segment {
        Segment::new(self.upper.clone(), self.lower.clone()).expect("distinct ends")
    }

    pub fn extended_segment(&self) -> Segment {
        Segment::new(self.upper.clone(), self.extended_lower.clone()).expect("distinct ends")
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    alpha: usize,
    lines: Vec<ArrangementLine>,
}

impl Arrangement {
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn lines(&self) -> &[ArrangementLine] {
        &self.lines
    }

    /// Odd-numbered lines carry positive literals, even-numbered ones the negations.
    pub fn literal_of(index: usize) -> Literal {
        Literal::new(index.div_ceil(2), index % 2 == 1)
    }

    pub fn index_of(lit: Literal) -> usize {
        if lit.is_positive() {
            2 * lit.var() - 1
        } else {
            2 * lit.var()
        }
    }

    pub fn line(&self, lit: Literal) -> &ArrangementLine {
        &self.lines[Self::index_of(lit) - 1]
    }

    pub fn envelope(&self) -> UpperEnvelope {
        let lines: Vec<Line> = self.lines.iter().map(|l| l.line.clone()).collect();
        upper_envelope(&lines).expect("arrangement lines are not vertical")
    }

    /// The part of the envelope on the line of `lit`, clipped to the original segments,
    /// as (left end, right end).
    pub fn lambda(&self, lit: Literal) -> (Point, Point) {
        let env = self.envelope();
        let idx = Self::index_of(lit) - 1;
        let piece = env.piece_of(idx).expect("every arrangement line is on the envelope");
        let left = piece.start.clone().unwrap_or_else(|| self.lines[idx].upper.clone());
        let right = piece.end.clone().unwrap_or_else(|| self.lines[idx].lower.clone());
        (left, right)
    }
}

pub fn build_arrangement(alpha: usize) -> Result<Arrangement> {
    if alpha == 0 {
        return Err(Error::InvalidInstance("alpha must be at least 1".into()));
    }
    let n = 2 * alpha as i64;
    let lines = (1..=n)
        .map(|i| {
            let upper = Point::from_ints(0, i);
            let lower = Point::from_ints(n - i + 1, 0);
            let extended_lower = Point::from_ints((n + 1) * (n - i + 1), -n * i);
            let line = Line::through(&upper, &lower).expect("distinct ends");
            ArrangementLine {
                index: i as usize,
                upper,
                lower,
                extended_lower,
                line,
            }
        })
        .collect();
    let arrangement = Arrangement { alpha, lines };
    let (steepest, shallowest) = (-int(n), -rat(1, n));
    for l in &arrangement.lines {
        let m = l.slope();
        if m < steepest || m > shallowest {
            return Err(Error::construction(
                "slope range",
                format!("L{} has slope {m}", l.index),
            ));
        }
        if !l.line.contains(&l.extended_lower) {
            return Err(Error::construction("extension", format!("L{} extension left its line", l.index)));
        }
    }
    let expected: Vec<usize> = (0..2 * alpha).rev().collect();
    if arrangement.envelope().order() != expected {
        return Err(Error::construction(
            "envelope order",
            "arrangement lines do not appear on the envelope in variable order",
        ));
    }
    Ok(arrangement)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Needle {
    pub p: usize,
    pub p_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralPoint {
    /// 1-based clause number.
    pub clause: usize,
    pub literal: Literal,
    pub vertex: usize,
    pub anchor: Option<usize>,
}

/// Named parts of a reduction drawing.
#[derive(Clone, Debug)]
pub struct ReductionLayout {
    /// The instance as given, before padding.
    pub instance: CnfInstance,
    /// Variable count the drawing was built for.
    pub alpha: usize,
    pub arrangement: Arrangement,
    pub epsilon: Rational,
    pub horizontal: Line,
    pub needle_line: Segment,
    pub needle_tips: Line,
    pub s: usize,
    pub t: usize,
    pub root: Option<usize>,
    pub needles: BTreeMap<Literal, Needle>,
    pub peaks: Vec<usize>,
    pub literal_points: Vec<LiteralPoint>,
}

impl ReductionLayout {
    pub fn needle(&self, lit: Literal) -> Needle {
        self.needles[&lit]
    }

    pub fn root(&self) -> Result<usize> {
        self.root
            .ok_or_else(|| Error::InvalidDrawing("drawing has no root".into()))
    }

    /// Literal point of `lit` in clause `clause` (1-based).
    pub fn literal_point(&self, clause: usize, lit: Literal) -> Option<&LiteralPoint> {
        self.literal_points
            .iter()
            .find(|lp| lp.clause == clause && lp.literal == lit)
    }

    /// The `s`-`t` path that passes `p` of the negation of each true literal:
    /// `p(!x_j)` when `x_j` is true and `p(x_j)` otherwise.
    pub fn variable_path(&self, asg: &Assignment) -> Vec<usize> {
        let mut ids = vec![self.s];
        for j in (1..=self.alpha).rev() {
            let needle = self.needle(Literal::new(j, !asg.value(j)));
            ids.extend([needle.p_prime, needle.p]);
        }
        ids.push(self.t);
        ids
    }

    /// The `y`-monotone path from `s` through the needles not used by `variable_path`.
    pub fn complementary_path(&self, asg: &Assignment) -> Vec<usize> {
        let mut ids = vec![self.s];
        for j in (1..=self.alpha).rev() {
            let needle = self.needle(Literal::new(j, asg.value(j)));
            ids.extend([needle.p_prime, needle.p]);
        }
        ids
    }
}

/// Drawing plus its layout.
#[derive(Clone, Debug)]
pub struct Construction {
    pub drawing: Drawing,
    pub layout: ReductionLayout,
}

fn lit_tag(prefix: &str, lit: Literal) -> String {
    format!("{prefix}:{}", lit.tag())
}

pub fn build_hb(alpha: usize) -> Result<Construction> {
    build_hb_for(CnfInstance::new(alpha.max(1), vec![])?, alpha, true)
}

/// The variable gadget without the needle slab isolation check, for inspecting
/// parameters where that check fails.
pub fn build_hb_unchecked(alpha: usize) -> Result<Construction> {
    build_hb_for(CnfInstance::new(alpha.max(1), vec![])?, alpha, false)
}

fn build_hb_for(instance: CnfInstance, alpha: usize, check_isolation: bool) -> Result<Construction> {
    let arrangement = build_arrangement(alpha)?;
    let (top, bottom) = needle_line_ends(alpha);
    let needle_line = Segment::new(top.clone(), bottom.clone())?;
    let eps = epsilon(alpha);
    let tips_x = &top.x - &eps;
    let needle_tips = Line::vertical(tips_x.clone());
    let horizontal = Line::horizontal(Rational::zero());

    let mut d = Drawing::new();
    let s = d.add_labeled(bottom.clone(), "s")?;
    let t_point = line_intersection(&horizontal, &needle_line.line()).expect("perpendicular");
    let t = d.add_labeled(t_point, "t")?;

    let mut needles = BTreeMap::new();
    for l in arrangement.lines() {
        let lit = Arrangement::literal_of(l.index);
        let p_point = line_intersection(&l.line, &needle_line.line()).expect("non-vertical");
        if !l.extended_segment().contains(&p_point) || !needle_line.contains(&p_point) {
            return Err(Error::construction(
                "needle placement",
                format!("extended L{} misses the needle line", l.index),
            ));
        }
        let tip = perpendicular_foot_on_vertical(&p_point, &l.line, &tips_x)?;
        let p = d.add_labeled(p_point, lit_tag("p", lit))?;
        let p_prime = d.add_labeled(tip, lit_tag("pprime", lit))?;
        d.add_edge(p, p_prime)?;
        needles.insert(lit, Needle { p, p_prime });
    }
    let pair = |j: usize| [Literal::positive(j), Literal::negative(j)];
    for k in 2..=alpha {
        for upper in pair(k) {
            for lower in pair(k - 1) {
                d.add_edge(needles[&upper].p, needles[&lower].p_prime)?;
            }
        }
    }
    for lit in pair(alpha) {
        d.add_edge(s, needles[&lit].p_prime)?;
    }
    for lit in pair(1) {
        d.add_edge(t, needles[&lit].p)?;
    }

    let segments: Vec<(Literal, Segment)> = needles
        .iter()
        .map(|(&lit, n)| (lit, d.segment(n.p, n.p_prime)))
        .collect();
    for (lit, seg) in &segments {
        let slab = slab_of(seg);
        for (other, other_seg) in &segments {
            if check_isolation && other != lit && slab.meets(other_seg) {
                return Err(Error::construction(
                    "needle slab isolation",
                    format!("the slab of needle {lit} meets needle {other}"),
                ));
            }
        }
    }
    Ok(Construction {
        drawing: d,
        layout: ReductionLayout {
            instance,
            alpha,
            arrangement,
            epsilon: eps,
            horizontal,
            needle_line,
            needle_tips,
            s,
            t,
            root: None,
            needles,
            peaks: Vec::new(),
            literal_points: Vec::new(),
        },
    })
}

/// True iff the path visits exactly one needle base per variable. Errors unless the
/// path runs from `s` to `t`.
pub fn check_variable_path(layout: &ReductionLayout, path: &[usize]) -> Result<bool> {
    if path.first() != Some(&layout.s) || path.last() != Some(&layout.t) {
        return Err(Error::InvalidPath("a variable path runs from s to t".into()));
    }
    Ok((1..=layout.alpha).all(|j| {
        let pos = path.contains(&layout.needle(Literal::positive(j)).p);
        let neg = path.contains(&layout.needle(Literal::negative(j)).p);
        pos != neg
    }))
}

/// Reads the truth values off a variable path: passing `p(x_j)` sets `x_j` false.
pub fn assignment_from_variable_path(layout: &ReductionLayout, path: &[usize]) -> Assignment {
    Assignment::new(
        (1..=layout.alpha)
            .map(|j| !path.contains(&layout.needle(Literal::positive(j)).p))
            .collect(),
    )
}

/// Variable gadget plus clause gadgets. Instances with fewer than [`MIN_TREE_ALPHA`]
/// variables are drawn with unused extra variables.
pub fn build_h(instance: &CnfInstance) -> Result<Construction> {
    let alpha = instance.alpha().max(MIN_TREE_ALPHA);
    let mut c = build_hb_for(instance.clone(), alpha, true)?;
    let d = &mut c.drawing;
    let layout = &mut c.layout;
    let shift = pow(alpha, 4).recip();
    let step = pow(alpha, 6).recip();

    for i in 1..=instance.beta() {
        let peak = d.add_labeled(peak_point(alpha, i), format!("peak:{i}"))?;
        layout.peaks.push(peak);
    }
    let mut repeats: BTreeMap<Literal, i64> = BTreeMap::new();
    for (ci, clause) in instance.clauses().iter().enumerate() {
        let i = ci + 1;
        for &lit in clause {
            let k = repeats.entry(lit).or_insert(0);
            let (left, right) = layout.arrangement.lambda(lit);
            let mid = left.midpoint(&right);
            let q = Point::new(mid.x.clone(), &mid.y - &shift - &step * int(*k));
            *k += 1;
            check_in_cell(&layout.arrangement, lit, &q, &left, &right)?;
            let vertex = d.add_labeled(q, format!("lit:{}:c:{i}", lit.tag()))?;
            d.add_edge(layout.t, vertex)?;
            d.add_edge(vertex, layout.peaks[ci])?;
            layout.literal_points.push(LiteralPoint {
                clause: i,
                literal: lit,
                vertex,
                anchor: None,
            });
        }
    }
    Ok(c)
}

/// `q` must lie strictly inside the arrangement cell just below the envelope piece of `lit`.
fn check_in_cell(arr: &Arrangement, lit: Literal, q: &Point, left: &Point, right: &Point) -> Result<()> {
    let own = arr.line(lit).line.y_at(&q.x).expect("non-vertical");
    let below_own = left.x < q.x && q.x < right.x && q.y < own;
    let above_rest = arr
        .lines()
        .iter()
        .filter(|l| l.index != Arrangement::index_of(lit))
        .all(|l| q.y > l.line.y_at(&q.x).expect("non-vertical"));
    if below_own && above_rest {
        Ok(())
    } else {
        Err(Error::construction(
            "literal point cell",
            format!("literal point {q} of {lit} is outside its cell"),
        ))
    }
}

/// The full drawing: `H`, the root, and one anchor per literal point.
pub fn build_gamma(instance: &CnfInstance) -> Result<Construction> {
    let mut c = build_h(instance)?;
    let alpha = c.layout.alpha;
    let d = &mut c.drawing;
    let layout = &mut c.layout;

    let r = d.add_labeled(root_point(alpha), "root")?;
    layout.root = Some(r);
    check_root_edge(d, layout, r)?;
    d.add_edge(r, layout.s)?;

    let step = pow(alpha, 6).recip();
    for k in 0..layout.literal_points.len() {
        let lp = layout.literal_points[k].clone();
        let q = d.vertex(lp.vertex).clone();
        let a_point = Point::new(&step * int(k as i64), q.y.clone());
        let a = d.add_labeled(a_point, format!("anchor:{}:c:{}", lp.literal.tag(), lp.clause))?;
        d.add_edge(r, a)?;
        d.add_edge(a, lp.vertex)?;
        layout.literal_points[k].anchor = Some(a);
    }
    check_anchors(d, layout)?;
    if alpha <= ACCESS_CHECK_MAX_ALPHA {
        check_literal_access(d, layout)?;
    }
    Ok(c)
}

/// The slab of the root edge meets the rest only at `s`, and no slab of an edge or of an
/// arrangement segment meets the root edge.
fn check_root_edge(d: &Drawing, layout: &ReductionLayout, r: usize) -> Result<()> {
    let s = layout.s;
    let root_edge = d.segment(r, s);
    let slab = slab_of(&root_edge);
    let reach = slab.width_parameter();
    for v in (0..d.len()).filter(|&v| v != r && v != s) {
        if slab.projection(d.vertex(v)) <= reach {
            return Err(Error::construction(
                "root slab isolation",
                format!("vertex {v} is not beyond the slab of the root edge"),
            ));
        }
    }
    let edges = d.edges().iter().map(|&(u, v)| (format!("edge {u}-{v}"), d.segment(u, v)));
    let lines = layout
        .arrangement
        .lines()
        .iter()
        .map(|l| (format!("L{}", l.index), l.segment()));
    for (name, seg) in edges.chain(lines) {
        if slab_of(&seg).meets_properly(&root_edge) {
            return Err(Error::construction(
                "root slab isolation",
                format!("the slab of {name} meets the root edge"),
            ));
        }
    }
    for l in layout.arrangement.lines() {
        if slab.meets_properly(&l.segment()) {
            return Err(Error::construction(
                "root slab isolation",
                format!("the root edge slab meets L{}", l.index),
            ));
        }
    }
    Ok(())
}

/// Each path root, anchor, literal point is increasing-chord and cannot be extended.
fn check_anchors(d: &Drawing, layout: &ReductionLayout) -> Result<()> {
    let r = layout.root()?;
    for lp in &layout.literal_points {
        let a = lp.anchor.expect("anchors are placed");
        let path = d.points_of(&[r, a, lp.vertex]);
        if !is_increasing_chord_points(&path) {
            return Err(Error::construction(
                "anchor path",
                format!("root, anchor, literal point {} is not increasing-chord", lp.vertex),
            ));
        }
        if let Some(&w) = d
            .neighbors(lp.vertex)
            .iter()
            .find(|&&w| w != a && can_extend(&path, d.vertex(w)))
        {
            return Err(Error::construction(
                "anchor non-extensibility",
                format!("the anchor path to {} extends to {w}", lp.vertex),
            ));
        }
    }
    Ok(())
}

/// Over every variable path: the path is increasing-chord, and a literal point is an
/// increasing-chord extension of it exactly when its literal is true, in which case the
/// peak extends it further.
fn check_literal_access(d: &Drawing, layout: &ReductionLayout) -> Result<()> {
    let r = layout.root()?;
    let alpha = layout.alpha;
    for bits in 0u64..1 << alpha {
        let asg = Assignment::new((0..alpha).map(|j| bits >> j & 1 == 1).collect());
        let mut ids = vec![r];
        ids.extend(layout.variable_path(&asg));
        let mut path = d.points_of(&ids);
        if !is_increasing_chord_points(&path) {
            return Err(Error::construction(
                "variable path",
                format!("the variable path for {asg} is not increasing-chord"),
            ));
        }
        for lp in &layout.literal_points {
            let q = d.vertex(lp.vertex);
            let open = can_extend(&path, q);
            if open != lp.literal.value_under(&asg) {
                return Err(Error::construction(
                    "literal access",
                    format!("literal point of {} in clause {} under {asg}", lp.literal, lp.clause),
                ));
            }
            if open {
                path.push(q.clone());
                let peak = d.vertex(layout.peaks[lp.clause - 1]);
                let climbs = can_extend(&path, peak);
                path.pop();
                if !climbs {
                    return Err(Error::construction(
                        "literal access",
                        format!("peak {} unreachable from its literal point under {asg}", lp.clause),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Builds the tree certifying that `asg` satisfies the instance of `gamma`.
pub fn witness_tree_from_assignment(gamma: &Construction, asg: &Assignment) -> Result<RootedTree> {
    let layout = &gamma.layout;
    let instance = &layout.instance;
    if asg.len() != instance.alpha() {
        return Err(Error::InvalidAssignment(format!(
            "expected {} values, got {}",
            instance.alpha(),
            asg.len()
        )));
    }
    if !asg.satisfies(instance) {
        return Err(Error::InvalidAssignment(format!("{asg} does not satisfy {instance}")));
    }
    let full = asg.extended(layout.alpha);
    let r = layout.root()?;
    let mut tree = RootedTree::new(r);
    for path in [layout.variable_path(&full), layout.complementary_path(&full)] {
        for w in path.windows(2) {
            tree.attach(w[1], w[0]);
        }
    }
    tree.attach(layout.s, r);
    for (ci, clause) in instance.clauses().iter().enumerate() {
        let lit = *clause
            .iter()
            .find(|l| l.value_under(asg))
            .expect("satisfied clause has a true literal");
        let q = layout.literal_point(ci + 1, lit).expect("literal point exists").vertex;
        tree.attach(q, layout.t);
        tree.attach(layout.peaks[ci], q);
    }
    for lp in &layout.literal_points {
        let a = lp.anchor.expect("anchors are placed");
        tree.attach(a, r);
        if !tree.contains(lp.vertex) {
            tree.attach(lp.vertex, a);
        }
    }
    if !verify_ic_rooted_tree(&gamma.drawing, &tree)? {
        return Err(Error::construction(
            "witness tree",
            format!("the tree built from {asg} fails verification"),
        ));
    }
    Ok(tree)
}

/// Reads a satisfying assignment off a verified tree of `gamma`.
pub fn assignment_from_tree(gamma: &Construction, tree: &RootedTree) -> Result<Assignment> {
    let layout = &gamma.layout;
    if tree.root() != layout.root()? {
        return Err(Error::InvalidTree("the tree is not rooted at the root vertex".into()));
    }
    if !verify_ic_rooted_tree(&gamma.drawing, tree)? {
        return Err(Error::InvalidTree("not an increasing-chord spanning tree".into()));
    }
    let to_t = tree.path_to(layout.t).expect("spanning tree reaches t");
    if !check_variable_path(layout, &to_t[1..])? {
        return Err(Error::construction(
            "variable path",
            "the tree path to t does not pick one needle per variable",
        ));
    }
    let asg = assignment_from_variable_path(layout, &to_t).truncated(layout.instance.alpha());
    if !asg.satisfies(&layout.instance) {
        return Err(Error::construction(
            "extracted assignment",
            format!("{asg} read from the tree does not satisfy the instance"),
        ));
    }
    Ok(asg)
}
