//! The layered drawing for increasing-chord paths between two terminals.
//!
//! Stage `i` handles clause `i`. Its arrangement is a set of lines, one per literal,
//! whose upper-envelope intervals are stacked bottom to top in pairs per variable. A
//! ladder copy per satisfying assignment of the clause climbs through one q-point per
//! variable, placed at interval midpoints. The lines of stage `i + 1` pass through the
//! stage-`i` q-points and meet a steep ray above everything built so far; each q-point
//! then becomes a short segment perpendicular to its next-stage line. Odd stages are
//! built to the right, even stages are mirrored to the left.
//!
//! Every "large enough" or "small enough" choice is a doubling or halving search with
//! exact checks, and the finished drawing is re-checked.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::chord::is_increasing_chord_points;
use crate::cnf::{clause_assignments, Assignment, CnfInstance, Literal};
use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::geom::{int, slab_of, upper_envelope, Line, Point, Rational, Segment, SlabPosition};
use crate::kernel::{dot_along, integer_points};
use crate::reduction::{build_arrangement, Arrangement};

/// Smallest variable count the gadget is built for; smaller instances are padded.
pub const MIN_GADGET_ALPHA: usize = 2;

pub const DEFAULT_MAX_ALPHA: usize = 3;
pub const DEFAULT_MAX_BETA: usize = 2;

const MAX_DOUBLINGS: u32 = 64;
const MAX_HALVINGS: u32 = 10;

/// Size limits checked before building, since coordinates grow exponentially with the
/// number of clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetOptions {
    pub max_alpha: usize,
    pub max_beta: usize,
}

impl GadgetOptions {
    pub fn unbounded() -> Self {
        GadgetOptions {
            max_alpha: usize::MAX,
            max_beta: usize::MAX,
        }
    }
}

impl Default for GadgetOptions {
    fn default() -> Self {
        GadgetOptions {
            max_alpha: DEFAULT_MAX_ALPHA,
            max_beta: DEFAULT_MAX_BETA,
        }
    }
}

/// The ray that the lines of a stage meet, with the two points found on it.
#[derive(Clone, Debug)]
pub struct Ray {
    /// Slope in real coordinates; negative for mirrored stages.
    pub slope: Rational,
    pub origin: Point,
    /// Above every earlier edge slab.
    pub a: Point,
    /// Above `a`, beyond every earlier vertex, with a clear slab towards the terminal.
    pub b: Point,
    /// Where the steepest line of the stage leaves the ray.
    pub apex: Point,
}

/// One copy of a q-point. `exit` is the far end of its s-segment, or the q-point itself
/// in the last stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoint {
    pub copy: usize,
    pub literal: Literal,
    pub vertex: usize,
    pub exit: usize,
}

#[derive(Clone, Debug)]
pub struct GadgetStage {
    pub index: usize,
    /// Literals bottom to top.
    pub literals: Vec<Literal>,
    /// The line of each literal, same order.
    pub lines: Vec<Line>,
    /// Envelope interval of each literal as (bottom end, top end).
    pub intervals: Vec<(Point, Point)>,
    pub midpoints: Vec<Point>,
    /// Smallest height of the envelope over the next line, taken over the midpoints.
    pub gap: Rational,
    pub start_terminal: usize,
    pub end_terminal: usize,
    /// Satisfying assignments of the clause; copy `k` follows assignment `k`.
    pub assignments: Vec<Vec<(usize, bool)>>,
    pub q_points: Vec<QPoint>,
    /// `None` for stage 0.
    pub ray: Option<Ray>,
    /// Largest x-coordinate, in this stage's frame, of everything built before it.
    pub max_x_before: Option<Rational>,
    /// Length factor of the s-segments leaving this stage.
    pub s_segment_factor: Option<Rational>,
}

impl GadgetStage {
    /// Mirrored stages are the even ones after stage 0.
    pub fn is_mirrored(&self) -> bool {
        self.index > 0 && self.index % 2 == 0
    }
}

#[derive(Clone, Debug)]
pub struct Gadget {
    pub instance: CnfInstance,
    pub drawing: Drawing,
    pub stages: Vec<GadgetStage>,
    pub start: usize,
    pub end: usize,
}

impl Gadget {
    pub fn alpha(&self) -> usize {
        self.instance.alpha()
    }

    /// Terminals from start to end.
    pub fn terminals(&self) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.stages.iter().map(|s| s.end_terminal));
        out
    }

    /// The ladder path of an assignment that satisfies every clause.
    pub fn path_for_assignment(&self, asg: &Assignment) -> Result<Vec<usize>> {
        if asg.values().len() != self.alpha() {
            return Err(Error::InvalidAssignment(format!(
                "expected {} values, got {}",
                self.alpha(),
                asg.values().len()
            )));
        }
        let mut path = vec![self.start];
        for stage in &self.stages {
            let copy = stage
                .assignments
                .iter()
                .position(|a| a.iter().all(|&(v, b)| asg.value(v) == b))
                .ok_or_else(|| {
                    Error::InvalidAssignment(format!("clause {} is not satisfied", stage.index + 1))
                })?;
            for pair in stage.literals.chunks(2) {
                let var = pair[0].var();
                let lit = Literal::new(var, asg.value(var));
                let q = stage
                    .q_points
                    .iter()
                    .find(|q| q.copy == copy && q.literal == lit)
                    .expect("every consistent literal has a q-point");
                path.push(q.vertex);
                if q.exit != q.vertex {
                    path.push(q.exit);
                }
            }
            path.push(stage.end_terminal);
        }
        Ok(path)
    }
}

/// Stage data carried from one stage to the next, in real coordinates.
struct StageFrame {
    literals: Vec<Literal>,
    lines: Vec<(Rational, Rational)>,
    intervals: Vec<(Point, Point)>,
    gap: Rational,
    end_terminal: Point,
}

/// What building the next stage's lines produced.
struct Transition {
    ray: Ray,
    max_x_before: Rational,
    next: StageFrame,
    /// Real slope of the next-stage line through each current midpoint.
    slopes: Vec<Rational>,
    next_midpoints: Vec<Point>,
}

fn pow(base: usize, exp: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..exp {
        out *= int(base as i64);
    }
    out
}

fn two_pow(k: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::one() << k)
}

fn frame(p: &Point, mirrored: bool) -> Point {
    if mirrored {
        p.mirror_x()
    } else {
        p.clone()
    }
}

fn height(line: &(Rational, Rational), x: &Rational) -> Rational {
    &line.0 * x + &line.1
}

fn line_of(line: &(Rational, Rational)) -> Line {
    Line::with_slope(&Point::new(Rational::zero(), line.1.clone()), &line.0)
}

/// Smallest difference between the two highest lines, over the given points' abscissae.
fn gap_of(lines: &[(Rational, Rational)], points: &[Point]) -> Rational {
    points
        .iter()
        .map(|p| {
            let mut hs: Vec<Rational> = lines.iter().map(|l| height(l, &p.x)).collect();
            hs.sort_unstable_by(|a, b| b.cmp(a));
            &hs[0] - &hs[1]
        })
        .min()
        .expect("at least two lines")
}

/// Whether the segment `u w` meets the open slab of `a b`.
fn meets_open_slab(u: &Point, w: &Point, a: &Point, b: &Point) -> bool {
    let d = b - a;
    let len = d.norm_squared();
    let pu = (u - a).dot(&d);
    let pw = (w - a).dot(&d);
    pu.clone().max(pw.clone()) > Rational::zero() && pu.min(pw) < len
}

/// Builds the gadget drawing for `instance`. Instances with fewer than
/// [`MIN_GADGET_ALPHA`] variables are padded with unused ones.
pub fn build_gadget(instance: &CnfInstance, options: GadgetOptions) -> Result<Gadget> {
    if instance.alpha() > options.max_alpha || instance.beta() > options.max_beta {
        return Err(Error::OverCap {
            max_alpha: options.max_alpha,
            max_beta: options.max_beta,
        });
    }
    if instance.beta() == 0 {
        return Err(Error::InvalidInstance("the path gadget needs at least one clause".into()));
    }
    let instance = instance.padded(MIN_GADGET_ALPHA);
    let alpha = instance.alpha();
    let mut d = Drawing::new();
    let mut stages: Vec<GadgetStage> = Vec::new();

    let mut current = build_stage0(alpha)?;
    let start = d.add_labeled(current.intervals[0].0.clone(), "terminal:0")?;
    let mut start_terminal = start;
    let mut pending: Option<Transition> = None;
    let beta = instance.beta();
    for (i, clause) in instance.clauses().iter().enumerate() {
        let transition = if i + 1 < beta {
            Some(build_stage(alpha, i + 1, &d, &current)?)
        } else {
            None
        };
        let midpoints: Vec<Point> = current
            .intervals
            .iter()
            .map(|(b, t)| b.midpoint(t))
            .collect();
        let assignments = clause_assignments(clause);
        let s_factor = match &transition {
            Some(t) => Some(s_segment_factor(&midpoints, t)?),
            None => None,
        };
        let (ray, max_x_before) = match pending.take() {
            Some(t) => (Some(t.ray), Some(t.max_x_before)),
            None => (None, None),
        };
        let mut stage = GadgetStage {
            index: i,
            literals: current.literals.clone(),
            lines: current.lines.iter().map(line_of).collect(),
            intervals: current.intervals.clone(),
            midpoints,
            gap: current.gap.clone(),
            start_terminal,
            end_terminal: usize::MAX,
            assignments,
            q_points: Vec::new(),
            ray,
            max_x_before,
            s_segment_factor: s_factor,
        };
        place_q_points(&mut d, &mut stage, transition.as_ref())?;
        stage.end_terminal = d.add_labeled(current.end_terminal.clone(), format!("terminal:{}", i + 1))?;
        add_ladder(&mut d, &stage, alpha)?;
        start_terminal = stage.end_terminal;
        stages.push(stage);
        if let Some(t) = transition {
            current = StageFrame {
                literals: t.next.literals.clone(),
                lines: t.next.lines.clone(),
                intervals: t.next.intervals.clone(),
                gap: t.next.gap.clone(),
                end_terminal: t.next.end_terminal.clone(),
            };
            pending = Some(t);
        }
    }

    let gadget = Gadget {
        instance,
        end: start_terminal,
        drawing: d,
        stages,
        start,
    };
    check_gadget(&gadget)?;
    Ok(gadget)
}

/// The first arrangement: the tree reduction's lines, with intervals clipped to the
/// original segments so the bottom and top ends are the terminals.
fn build_stage0(alpha: usize) -> Result<StageFrame> {
    let arrangement = build_arrangement(alpha)?;
    let mut literals = Vec::new();
    let mut lines = Vec::new();
    let mut intervals = Vec::new();
    for l in arrangement.lines() {
        let lit = Arrangement::literal_of(l.index);
        let (left, right) = arrangement.lambda(lit);
        literals.push(lit);
        lines.push((l.slope(), l.upper.y.clone()));
        intervals.push((right, left));
    }
    let midpoints: Vec<Point> = intervals.iter().map(|(b, t)| b.midpoint(t)).collect();
    let gap = gap_of(&lines, &midpoints);
    let end_terminal = intervals.last().expect("at least one line").1.clone();
    Ok(StageFrame {
        literals,
        lines,
        intervals,
        gap,
        end_terminal,
    })
}

/// Chooses the lines of stage `next_index` from the midpoints of the current stage.
fn build_stage(alpha: usize, next_index: usize, d: &Drawing, current: &StageFrame) -> Result<Transition> {
    let mirrored = next_index % 2 == 0;
    let to_frame = |p: &Point| frame(p, mirrored);
    let n = current.literals.len();
    let slope = pow(alpha, 2 * next_index as u32 + 1);
    let mids: Vec<Point> = current
        .intervals
        .iter()
        .map(|(b, t)| to_frame(&b.midpoint(t)))
        .collect();
    let top = to_frame(&current.end_terminal);

    // Edges so far, plus a chain standing in for the current stage's ladder.
    let mut edges: Vec<(Point, Point)> = d
        .edges()
        .iter()
        .map(|&(u, v)| (to_frame(d.vertex(u)), to_frame(d.vertex(v))))
        .collect();
    let mut chain = vec![to_frame(&current.intervals[0].0)];
    chain.extend(mids.iter().cloned());
    chain.push(top.clone());
    edges.extend(chain.windows(2).map(|w| (w[0].clone(), w[1].clone())));
    let max_x = d
        .vertices()
        .iter()
        .map(to_frame)
        .chain(chain.iter().cloned())
        .map(|p| p.x)
        .max()
        .expect("drawing is not empty");

    let origin = mids[0].clone();
    let on_ray = |y: Rational| Point::new(&origin.x + (&y - &origin.y) / &slope, y);

    let in_front = |p: &Point| {
        edges.iter().all(|(u, w)| {
            let (u, w) = if w.y < u.y { (w, u) } else { (u, w) };
            (p - w).dot(&(w - u)) > Rational::zero()
        })
    };
    let a = (0..MAX_DOUBLINGS)
        .map(|k| on_ray(&origin.y + two_pow(k)))
        .find(|p| in_front(p))
        .ok_or_else(|| Error::construction("ray point a", format!("stage {next_index}: doubling cap reached")))?;

    let clear_towards_top = |b: &Point| edges.iter().all(|(u, w)| !meets_open_slab(u, w, &top, b));
    let b = (0..MAX_DOUBLINGS)
        .map(|k| on_ray(&a.y + two_pow(k)))
        .find(|p| p.x > max_x && clear_towards_top(p))
        .ok_or_else(|| Error::construction("ray point b", format!("stage {next_index}: doubling cap reached")))?;
    let apex = on_ray(&b.y + Rational::one());
    let ray_line = (slope.clone(), &apex.y - &slope * &apex.x);

    // Each line through a midpoint aims slightly below the apex, by an amount that
    // shrinks until the lines appear on the envelope in reverse order.
    let mut shrink = Rational::one();
    let mut chosen = None;
    for _ in 0..MAX_DOUBLINGS {
        let lines: Vec<(Rational, Rational)> = mids
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if k == 0 {
                    return ray_line.clone();
                }
                let s0 = (&apex.y - &m.y) / (&apex.x - &m.x);
                let drop = -&shrink * (&s0 - &slope) * (&s0 - &slope);
                let aim_y = &apex.y + drop;
                let s = (&aim_y - &m.y) / (&apex.x - &m.x);
                let c = &m.y - &s * &m.x;
                (s, c)
            })
            .collect();
        let env = upper_envelope(&lines.iter().map(line_of).collect::<Vec<_>>())?;
        let ordered = env.order() == (0..n).rev().collect::<Vec<_>>();
        let crossings_high = lines[1..].iter().all(|l| {
            let x = (&l.1 - &ray_line.1) / (&slope - &l.0);
            height(&ray_line, &x) > b.y
        });
        let bps = env.breakpoints();
        if ordered && crossings_high && bps.iter().all(|p| p.x > max_x) {
            chosen = Some((lines, bps));
            break;
        }
        shrink /= int(2);
    }
    let (lines, bps) = chosen.ok_or_else(|| {
        Error::construction("next-stage envelope", format!("stage {next_index}: halving cap reached"))
    })?;

    // Line k sits at envelope position n - 1 - k; the leftmost is clipped to the width
    // of the rightmost.
    let width = &apex.x - &bps[n - 2].x;
    let mut intervals = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let pos = n - 1 - k;
        let left = if pos > 0 {
            bps[pos - 1].clone()
        } else {
            let x = &bps[0].x - &width;
            Point::new(x.clone(), height(&lines[k], &x))
        };
        let right = if pos < n - 1 { bps[pos].clone() } else { apex.clone() };
        intervals.push((left, right));
    }
    let next_mids: Vec<Point> = intervals.iter().map(|(l, r)| l.midpoint(r)).collect();
    let gap = gap_of(&lines, &next_mids);
    let end_terminal = Point::new(apex.x.clone(), &apex.y + &gap);

    let sign = if mirrored { -Rational::one() } else { Rational::one() };
    let real_line = |l: &(Rational, Rational)| (&l.0 * &sign, l.1.clone());
    let next = StageFrame {
        literals: current.literals.iter().rev().map(|l| l.negated()).collect(),
        lines: lines.iter().rev().map(real_line).collect(),
        intervals: intervals
            .iter()
            .map(|(l, r)| (to_frame(l), to_frame(r)))
            .collect(),
        gap,
        end_terminal: to_frame(&end_terminal),
    };
    Ok(Transition {
        ray: Ray {
            slope: &slope * &sign,
            origin: to_frame(&origin),
            a: to_frame(&a),
            b: to_frame(&b),
            apex: to_frame(&apex),
        },
        max_x_before: max_x,
        slopes: lines.iter().map(|l| &l.0 * &sign).collect(),
        next_midpoints: next_mids.iter().map(to_frame).collect(),
        next,
    })
}

/// Length factor of the s-segments: the segment from `q` is `factor * (-m, 1)` for a
/// next-stage line of slope `m`. Halved until no s-segment slab swallows a next-stage
/// midpoint of another line.
fn s_segment_factor(mids: &[Point], t: &Transition) -> Result<Rational> {
    let slope = &t.ray.slope;
    let mut factor = &t.next.gap / (int(8) * (Rational::one() + slope * slope));
    let n = mids.len();
    for _ in 0..=MAX_HALVINGS {
        let ok = (0..n).all(|k| {
            let m = &t.slopes[k];
            let q = &mids[k];
            let q2 = Point::new(&q.x - &factor * m, &q.y + &factor);
            let slab = slab_of(&Segment::new(q.clone(), q2).expect("nonzero length"));
            // Next-stage line k is at index n - 1 - k.
            t.next_midpoints
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != n - 1 - k)
                .all(|(_, p)| slab.position(p) != SlabPosition::StrictlyInside)
        });
        if ok {
            return Ok(factor);
        }
        factor /= int(2);
    }
    Err(Error::construction("s-segment length", "no length in the halving schedule isolates the slabs"))
}

/// Adds the q-point copies of a stage and, unless it is the last, their s-segments.
fn place_q_points(d: &mut Drawing, stage: &mut GadgetStage, transition: Option<&Transition>) -> Result<()> {
    let copies = stage.assignments.len();
    let slots = int(copies as i64 + 1);
    let step = &stage.gap / (int(4) * &slots);
    let i = stage.index;
    for (k, asg) in stage.assignments.iter().enumerate() {
        let kk = int(k as i64);
        for (li, &lit) in stage.literals.iter().enumerate() {
            if asg.iter().any(|&(v, b)| v == lit.var() && b != lit.is_positive()) {
                continue;
            }
            let mid = &stage.midpoints[li];
            let tag = format!("{}:{}:{}", i, k, lit.tag());
            let (vertex, exit) = match transition {
                Some(t) => {
                    let m = &t.slopes[li];
                    let p = Point::new(&mid.x - &kk * &step / m, &mid.y - &kk * &step);
                    let factor = stage.s_segment_factor.as_ref().expect("set for inner stages");
                    let q2 = Point::new(&p.x - factor * m, &p.y + factor);
                    let v = d.add_labeled(p, format!("qpt:{tag}"))?;
                    let e = d.add_labeled(q2, format!("sseg:{tag}"))?;
                    d.add_edge(v, e)?;
                    (v, e)
                }
                None => {
                    let (bottom, top) = &stage.intervals[li];
                    let offset = (top - bottom).scale(&(&kk / (int(8) * &slots)));
                    let v = d.add_labeled(mid + &offset, format!("qpt:{tag}"))?;
                    (v, v)
                }
            };
            stage.q_points.push(QPoint {
                copy: k,
                literal: lit,
                vertex,
                exit,
            });
        }
    }
    Ok(())
}

/// Joins, per copy, the start terminal to the first variable's q-points, the exit of
/// each variable's q-points to the next variable's, and the last to the end terminal.
fn add_ladder(d: &mut Drawing, stage: &GadgetStage, alpha: usize) -> Result<()> {
    let mut by_slot: BTreeMap<(usize, usize), Vec<&QPoint>> = BTreeMap::new();
    for q in &stage.q_points {
        let li = stage
            .literals
            .iter()
            .position(|&l| l == q.literal)
            .expect("stage literal");
        by_slot.entry((q.copy, li / 2)).or_default().push(q);
    }
    for k in 0..stage.assignments.len() {
        for pair in 0..alpha {
            let here = by_slot.get(&(k, pair)).cloned().unwrap_or_default();
            if pair == 0 {
                for q in &here {
                    d.add_edge(stage.start_terminal, q.vertex)?;
                }
            }
            if pair + 1 < alpha {
                let above = by_slot.get(&(k, pair + 1)).cloned().unwrap_or_default();
                for q in &here {
                    for w in &above {
                        d.add_edge(q.exit, w.vertex)?;
                    }
                }
            } else {
                for q in &here {
                    d.add_edge(q.exit, stage.end_terminal)?;
                }
            }
        }
    }
    Ok(())
}

/// The stage an edge belongs to: the latest stage among its non-terminal endpoints.
fn edge_stage(d: &Drawing, u: usize, v: usize) -> Option<usize> {
    [u, v]
        .iter()
        .filter_map(|&w| {
            let label = d.label(w)?;
            let mut parts = label.split(':');
            match parts.next()? {
                "qpt" | "sseg" => parts.next()?.parse().ok(),
                _ => None,
            }
        })
        .max()
}

fn check_gadget(g: &Gadget) -> Result<()> {
    let d = &g.drawing;
    let alpha = g.alpha();
    for stage in &g.stages[1..] {
        let ray = stage.ray.as_ref().expect("inner stages have a ray");
        let i = stage.index;
        let expected = pow(alpha, 2 * i as u32 + 1);
        let signed = if stage.is_mirrored() { -expected } else { expected };
        if ray.slope != signed {
            return Err(Error::construction(
                "ray slope",
                format!("stage {i} ray slope {} is not {signed}", ray.slope),
            ));
        }
        let bound = stage.max_x_before.as_ref().expect("inner stages record it");
        let mut ids: Vec<usize> = stage.q_points.iter().flat_map(|q| [q.vertex, q.exit]).collect();
        ids.push(stage.end_terminal);
        for v in ids {
            if frame(d.vertex(v), stage.is_mirrored()).x <= *bound {
                return Err(Error::construction(
                    "stage placement",
                    format!("vertex {v} of stage {i} is not beyond the earlier stages"),
                ));
            }
        }
    }

    let pts = integer_points(d.vertices());
    let staged: Vec<(Option<usize>, usize, usize)> =
        d.edges().iter().map(|&(u, v)| (edge_stage(d, u, v), u, v)).collect();
    for &(si, a, b) in &staged {
        let Some(i) = si else { continue };
        if i == 0 {
            continue;
        }
        let (pa, pb) = (&pts[a], &pts[b]);
        let len = dot_along(pb, pa, pa, pb);
        for &(sj, u, w) in &staged {
            if !sj.is_some_and(|j| j < i) {
                continue;
            }
            let pu = dot_along(&pts[u], pa, pa, pb);
            let pw = dot_along(&pts[w], pa, pa, pb);
            if pu.clone().max(pw.clone()).is_positive() && pu.min(pw) < len {
                return Err(Error::construction(
                    "earlier stages outside slabs",
                    format!("slab of {a}-{b} meets {u}-{w}"),
                ));
            }
        }
    }

    for (prev, next) in g.stages.iter().zip(&g.stages[1..]) {
        let n = prev.literals.len();
        for k in 0..n {
            if next.literals[n - 1 - k] != prev.literals[k].negated() {
                return Err(Error::construction(
                    "polarity inversion",
                    format!("stage {} interval {k} does not invert stage {}", next.index, prev.index),
                ));
            }
        }
    }
    Ok(())
}

/// Bit length of the largest coordinate numerator or denominator.
pub fn coordinate_bits(g: &Gadget) -> u64 {
    g.drawing.max_bit_length()
}

/// Reads the assignment off an increasing-chord path between the outer terminals: a
/// literal is true when the path uses one of its q-points. Fails if stages disagree.
pub fn extract_assignment(d: &Drawing, path: &[usize]) -> Result<Assignment> {
    let pts = d.path(path)?;
    if !is_increasing_chord_points(pts.points()) {
        return Err(Error::InvalidPath("the path is not increasing-chord".into()));
    }
    let mut alpha = 0;
    let mut last_stage = 0;
    for v in 0..d.len() {
        if let Some((stage, _, lit)) = parse_q_label(d.label(v)) {
            alpha = alpha.max(lit.var());
            last_stage = last_stage.max(stage);
        }
    }
    if alpha == 0 {
        return Err(Error::InvalidDrawing("no q-points in the drawing".into()));
    }
    let terminal = |v: usize| d.label(v).and_then(|l| l.strip_prefix("terminal:")?.parse::<usize>().ok());
    if terminal(path[0]) != Some(0) || terminal(path[path.len() - 1]) != Some(last_stage + 1) {
        return Err(Error::InvalidPath("the path does not join the outer terminals".into()));
    }

    let mut used: Vec<BTreeMap<usize, bool>> = vec![BTreeMap::new(); last_stage + 1];
    for &v in path {
        if let Some((stage, _, lit)) = parse_q_label(d.label(v)) {
            if used[stage].insert(lit.var(), lit.is_positive()).is_some() {
                return Err(Error::construction(
                    "one literal per variable",
                    format!("stage {stage} visits variable {} twice", lit.var()),
                ));
            }
        }
    }
    for (stage, vars) in used.iter().enumerate() {
        if vars.len() != alpha {
            return Err(Error::construction(
                "one literal per variable",
                format!("stage {stage} fixes {} of {alpha} variables", vars.len()),
            ));
        }
        if *vars != used[0] {
            return Err(Error::construction(
                "cross-stage consistency",
                format!("stage {stage} disagrees with stage 0"),
            ));
        }
    }
    Ok(Assignment::new(used[0].values().copied().collect()))
}

/// Parses `qpt:stage:copy:x:var` or `qpt:stage:copy:nx:var`.
fn parse_q_label(label: Option<&str>) -> Option<(usize, usize, Literal)> {
    let parts: Vec<&str> = label?.split(':').collect();
    if parts.len() != 5 || parts[0] != "qpt" {
        return None;
    }
    let positive = match parts[3] {
        "x" => true,
        "nx" => false,
        _ => return None,
    };
    Some((parts[1].parse().ok()?, parts[2].parse().ok()?, Literal::new(parts[4].parse().ok()?, positive)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::is_increasing_chord_points;
    use crate::cnf::brute_force_sat;
    use crate::search::find_ic_path;

    fn gadget(alpha: usize, clauses: &[&[i64]]) -> Gadget {
        build_gadget(&CnfInstance::from_ints(alpha, clauses).unwrap(), GadgetOptions::default()).unwrap()
    }

    #[test]
    fn copies_per_clause_width() {
        let g = gadget(2, &[&[1, -2]]);
        assert_eq!(g.stages[0].assignments.len(), 3);
        let g = gadget(3, &[&[1, 2, 3]]);
        assert_eq!(g.stages[0].assignments.len(), 7);
    }

    #[test]
    fn first_q_point_is_interval_midpoint() {
        let g = gadget(2, &[&[1]]);
        let arrangement = build_arrangement(2).unwrap();
        let (left, right) = arrangement.lambda(Literal::positive(1));
        let q = g.stages[0]
            .q_points
            .iter()
            .find(|q| q.copy == 0 && q.literal == Literal::positive(1))
            .unwrap();
        assert_eq!(*g.drawing.vertex(q.vertex), left.midpoint(&right));
        assert_eq!(*g.drawing.vertex(g.start), right);
    }

    #[test]
    fn ladder_paths_are_increasing_chord() {
        let g = gadget(2, &[&[1, 2], &[-1, 2]]);
        for bits in [[false, true], [true, true]] {
            let path = g.path_for_assignment(&Assignment::new(bits.to_vec())).unwrap();
            assert!(is_increasing_chord_points(&g.drawing.points_of(&path)));
            assert_eq!(extract_assignment(&g.drawing, &path).unwrap().values(), &bits);
        }
        assert!(g.path_for_assignment(&Assignment::new(vec![true, false])).is_err());
    }

    #[test]
    fn ray_slopes_alternate() {
        let g = gadget(3, &[&[1], &[2]]);
        assert_eq!(g.stages[1].ray.as_ref().unwrap().slope, int(27));
        assert!(g.stages[1].literals.iter().rev().eq(g.stages[0].literals.iter().map(|l| l.negated()).collect::<Vec<_>>().iter()));
    }

    #[test]
    fn s_segments_are_perpendicular() {
        let g = gadget(2, &[&[1], &[2]]);
        let stage = &g.stages[0];
        let next = &g.stages[1];
        for q in &stage.q_points {
            let seg = g.drawing.vertex(q.exit) - g.drawing.vertex(q.vertex);
            let li = stage.literals.iter().position(|&l| l == q.literal).unwrap();
            let n = stage.literals.len();
            let m = next.lines[n - 1 - li].slope().unwrap();
            assert!((&seg.x * Rational::one() + &seg.y * &m).is_zero());
            assert!(seg.x.is_negative() == m.is_positive());
        }
    }

    #[test]
    fn two_clause_instance_extracts() {
        let g = gadget(3, &[&[1, 3], &[-2, -3]]);
        let asg = Assignment::new(vec![true, false, true]);
        let path = g.path_for_assignment(&asg).unwrap();
        assert_eq!(extract_assignment(&g.drawing, &path).unwrap(), asg);
    }

    #[test]
    fn unsatisfiable_has_no_path() {
        let inst = CnfInstance::from_ints(1, &[&[1], &[-1]]).unwrap();
        let g = build_gadget(&inst, GadgetOptions::default()).unwrap();
        let found = find_ic_path(&g.drawing, g.start, g.end, 1_000_000).unwrap();
        assert!(!found.outcome.is_found() && !found.outcome.is_unknown());
        assert!(brute_force_sat(&inst).unwrap().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let inst = CnfInstance::from_ints(4, &[&[1]]).unwrap();
        assert!(matches!(build_gadget(&inst, GadgetOptions::default()), Err(Error::OverCap { .. })));
        assert!(build_gadget(&inst, GadgetOptions::unbounded()).is_ok());
        let empty = CnfInstance::new(2, vec![]).unwrap();
        assert!(build_gadget(&empty, GadgetOptions::default()).is_err());
    }
}
