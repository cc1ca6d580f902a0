//! Exhaustive searches for increasing-chord paths and rooted spanning trees, and their verifiers.

use std::collections::{BTreeMap, VecDeque};

use crate::chord::is_increasing_chord_points;
use crate::drawing::{Drawing, RootedTree};
use crate::error::{Error, Result};
use crate::geom::Rational;
use crate::kernel::{can_extend, integer_points, small_points, PlanePoint};

pub const DEFAULT_TREE_BUDGET: u64 = 10_000_000;
pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

/// Result of a budgeted search. `Unknown` means the budget ran out, never absence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Absent,
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SearchOutcome::Unknown)
    }
}

#[derive(Clone, Debug)]
pub struct Search<T> {
    pub outcome: SearchOutcome<T>,
    pub expansions: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

fn check_vertex(d: &Drawing, v: usize, what: &str) -> Result<()> {
    if v >= d.len() {
        return Err(Error::InvalidDrawing(format!("{what} {v} is not a vertex")));
    }
    Ok(())
}

/// Depth-first search over simple paths from `s`, pruning every prefix that is not
/// increasing-chord.
pub fn find_ic_path(d: &Drawing, s: usize, t: usize, budget: u64) -> Result<Search<Vec<usize>>> {
    check_vertex(d, s, "source")?;
    check_vertex(d, t, "target")?;
    if s == t {
        return Err(Error::InvalidPath("source and target coincide".into()));
    }
    Ok(match small_points(d) {
        Some(pts) => path_search(d, &pts, s, t, budget),
        None => path_search(d, &integer_points(d.vertices()), s, t, budget),
    })
}

fn path_search<P: PlanePoint>(d: &Drawing, pts: &[P], s: usize, t: usize, budget: u64) -> Search<Vec<usize>> {
    let mut search = PathSearch {
        d,
        pts,
        target: t,
        budget,
        expansions: 0,
        ids: vec![s],
        points: vec![pts[s].clone()],
        on_path: vec![false; d.len()],
    };
    search.on_path[s] = true;
    let outcome = match search.dfs() {
        Step::Found => SearchOutcome::Found(search.ids),
        Step::Exhausted => SearchOutcome::Absent,
        Step::OutOfBudget => SearchOutcome::Unknown,
    };
    Search {
        outcome,
        expansions: search.expansions,
    }
}

struct PathSearch<'a, P> {
    d: &'a Drawing,
    pts: &'a [P],
    target: usize,
    budget: u64,
    expansions: u64,
    ids: Vec<usize>,
    points: Vec<P>,
    on_path: Vec<bool>,
}

impl<P: PlanePoint> PathSearch<'_, P> {
    fn dfs(&mut self) -> Step {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Step::OutOfBudget;
        }
        let cur = *self.ids.last().unwrap();
        if cur == self.target {
            return Step::Found;
        }
        let d = self.d;
        for &w in d.neighbors(cur) {
            if self.on_path[w] || !can_extend(&self.points, &self.pts[w]) {
                continue;
            }
            self.ids.push(w);
            self.points.push(self.pts[w].clone());
            self.on_path[w] = true;
            match self.dfs() {
                Step::Exhausted => {}
                other => return other,
            }
            self.on_path[w] = false;
            self.points.pop();
            self.ids.pop();
        }
        Step::Exhausted
    }
}

/// Calls `visit` on every increasing-chord simple path (two or more vertices) starting
/// at `start`. Returning `false` from `visit` stops the enumeration.
pub fn for_each_ic_path(d: &Drawing, start: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    match small_points(d) {
        Some(pts) => enumerate_ic_paths(d, &pts, start, &mut visit),
        None => enumerate_ic_paths(d, &integer_points(d.vertices()), start, &mut visit),
    }
}

fn enumerate_ic_paths<P: PlanePoint>(
    d: &Drawing,
    pts: &[P],
    start: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    fn go<P: PlanePoint>(
        d: &Drawing,
        pts: &[P],
        ids: &mut Vec<usize>,
        points: &mut Vec<P>,
        on_path: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let cur = *ids.last().unwrap();
        for &w in d.neighbors(cur) {
            if on_path[w] || !can_extend(points, &pts[w]) {
                continue;
            }
            ids.push(w);
            points.push(pts[w].clone());
            on_path[w] = true;
            let keep_going = visit(ids) && go(d, pts, ids, points, on_path, visit);
            on_path[w] = false;
            points.pop();
            ids.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    let mut on_path = vec![false; d.len()];
    on_path[start] = true;
    go(d, pts, &mut vec![start], &mut vec![pts[start].clone()], &mut on_path, visit);
}

/// Calls `visit` on every simple path from `s` to `t`, increasing-chord or not.
pub fn for_each_simple_path(d: &Drawing, s: usize, t: usize, mut visit: impl FnMut(&[usize])) {
    fn go(d: &Drawing, t: usize, ids: &mut Vec<usize>, on_path: &mut [bool], visit: &mut dyn FnMut(&[usize])) {
        let cur = *ids.last().unwrap();
        if cur == t {
            visit(ids);
            return;
        }
        for &w in d.neighbors(cur) {
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            ids.push(w);
            go(d, t, ids, on_path, visit);
            ids.pop();
            on_path[w] = false;
        }
    }
    let mut on_path = vec![false; d.len()];
    on_path[s] = true;
    go(d, t, &mut vec![s], &mut on_path, &mut visit);
}

/// Grows a spanning tree from `r` one vertex at a time.
///
/// Each node picks an unattached vertex `v` with the fewest attachable parents (ties by
/// distance to the root) and branches on every attachable parent, plus one branch that
/// forbids all of them so that `v` is attached later through a vertex that is not yet in
/// the tree. A node is cut when some unattached vertex has no increasing-chord route
/// through unattached vertices from the current tree.
pub fn find_ic_rooted_spanning_tree(d: &Drawing, r: usize, budget: u64) -> Result<Search<RootedTree>> {
    check_vertex(d, r, "root")?;
    let (outcome, expansions) = match small_points(d) {
        Some(pts) => tree_search(d, &pts, r, budget),
        None => tree_search(d, &integer_points(d.vertices()), r, budget),
    };
    let outcome = match outcome {
        SearchOutcome::Found(parent) => {
            let parents: BTreeMap<usize, usize> = parent
                .iter()
                .enumerate()
                .filter_map(|(v, p)| p.map(|p| (v, p)))
                .collect();
            SearchOutcome::Found(RootedTree::from_parents(r, parents)?)
        }
        SearchOutcome::Absent => SearchOutcome::Absent,
        SearchOutcome::Unknown => SearchOutcome::Unknown,
    };
    Ok(Search { outcome, expansions })
}

type ParentMap = Vec<Option<usize>>;

fn tree_search<P: PlanePoint>(
    d: &Drawing,
    pts: &[P],
    r: usize,
    budget: u64,
) -> (SearchOutcome<ParentMap>, u64) {
    let root_point = d.vertex(r);
    let n = d.len();
    let mut search = TreeSearch {
        d,
        pts,
        budget,
        expansions: 0,
        dist: d.vertices().iter().map(|p| (p - root_point).norm_squared()).collect(),
        parent: vec![None; n],
        paths: vec![None; n],
        excluded: vec![Vec::new(); n],
        unattached: n - 1,
    };
    search.paths[r] = Some(vec![pts[r].clone()]);
    let outcome = match search.grow() {
        Step::Found => SearchOutcome::Found(search.parent),
        Step::Exhausted => SearchOutcome::Absent,
        Step::OutOfBudget => SearchOutcome::Unknown,
    };
    (outcome, search.expansions)
}

struct TreeSearch<'a, P> {
    d: &'a Drawing,
    pts: &'a [P],
    budget: u64,
    expansions: u64,
    dist: Vec<Rational>,
    parent: ParentMap,
    paths: Vec<Option<Vec<P>>>,
    excluded: Vec<Vec<usize>>,
    unattached: usize,
}

impl<P: PlanePoint> TreeSearch<'_, P> {
    fn attached(&self, v: usize) -> bool {
        self.paths[v].is_some()
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        self.d
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| {
                !self.excluded[v].contains(&u)
                    && self.paths[u]
                        .as_ref()
                        .is_some_and(|path| can_extend(path, &self.pts[v]))
            })
            .collect()
    }

    fn attach(&mut self, v: usize, u: usize) {
        let mut path = self.paths[u].clone().expect("parent is attached");
        path.push(self.pts[v].clone());
        self.paths[v] = Some(path);
        self.parent[v] = Some(u);
        self.unattached -= 1;
    }

    fn detach(&mut self, v: usize) {
        self.paths[v] = None;
        self.parent[v] = None;
        self.unattached += 1;
    }

    fn grow(&mut self) -> Step {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Step::OutOfBudget;
        }
        if self.unattached == 0 {
            return Step::Found;
        }
        if !self.all_reachable() {
            return Step::Exhausted;
        }
        let n = self.d.len();
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in (0..n).filter(|&v| !self.attached(v)) {
            let cands = self.candidates(v);
            if cands.is_empty() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((b, bc)) => (cands.len(), &self.dist[v]) < (bc.len(), &self.dist[*b]),
            };
            if better {
                best = Some((v, cands));
            }
        }
        let Some((v, cands)) = best else {
            return Step::Exhausted;
        };
        for &u in &cands {
            self.attach(v, u);
            match self.grow() {
                Step::Exhausted => self.detach(v),
                other => return other,
            }
        }
        if self.d.neighbors(v).iter().any(|&w| !self.attached(w)) {
            let before = self.excluded[v].len();
            self.excluded[v].extend(cands);
            let step = self.grow();
            self.excluded[v].truncate(before);
            return step;
        }
        Step::Exhausted
    }

    /// Necessary condition for completing the tree: every unattached vertex is the end of
    /// some increasing-chord walk that leaves the tree at an attached vertex through an
    /// allowed edge and then only visits unattached vertices.
    fn all_reachable(&self) -> bool {
        let n = self.d.len();
        let mut reached: Vec<bool> = (0..n).map(|v| self.attached(v)).collect();
        let mut missing = self.unattached;
        let mut on_walk = vec![false; n];
        for u in 0..n {
            let Some(path) = &self.paths[u] else { continue };
            for &w in self.d.neighbors(u) {
                if self.attached(w) || self.excluded[w].contains(&u) || !can_extend(path, &self.pts[w]) {
                    continue;
                }
                let mut points = path.clone();
                points.push(self.pts[w].clone());
                on_walk[w] = true;
                let done = self.explore(w, &mut points, &mut on_walk, &mut reached, &mut missing);
                on_walk[w] = false;
                if done {
                    return true;
                }
            }
        }
        false
    }

    fn explore(
        &self,
        cur: usize,
        points: &mut Vec<P>,
        on_walk: &mut [bool],
        reached: &mut [bool],
        missing: &mut usize,
    ) -> bool {
        if !reached[cur] {
            reached[cur] = true;
            *missing -= 1;
            if *missing == 0 {
                return true;
            }
        }
        for &w in self.d.neighbors(cur) {
            if self.attached(w) || on_walk[w] || !can_extend(points, &self.pts[w]) {
                continue;
            }
            points.push(self.pts[w].clone());
            on_walk[w] = true;
            let done = self.explore(w, points, on_walk, reached, missing);
            on_walk[w] = false;
            points.pop();
            if done {
                return true;
            }
        }
        false
    }
}

fn check_tree_edges(d: &Drawing, tree: &RootedTree) -> Result<()> {
    check_vertex(d, tree.root(), "root")?;
    for (&child, &parent) in tree.parents() {
        check_vertex(d, child, "tree vertex")?;
        if !d.has_edge(child, parent) {
            return Err(Error::InvalidTree(format!("{child}-{parent} is not an edge of the drawing")));
        }
    }
    Ok(())
}

/// True iff `tree` spans `d` and every root path is increasing-chord.
pub fn verify_ic_rooted_tree(d: &Drawing, tree: &RootedTree) -> Result<bool> {
    check_tree_edges(d, tree)?;
    if tree.len() != d.len() {
        return Ok(false);
    }
    for v in 0..d.len() {
        let ids = tree
            .path_to(v)
            .ok_or_else(|| Error::InvalidTree(format!("vertex {v} does not reach the root")))?;
        if !is_increasing_chord_points(&d.points_of(&ids)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a drawing that is a tree: true iff every vertex pair is joined by an
/// increasing-chord path.
pub fn verify_ic_tree_drawing(d: &Drawing) -> Result<bool> {
    let n = d.len();
    if n == 0 || d.edges().len() != n - 1 {
        return Err(Error::InvalidDrawing("not a tree: wrong edge count".into()));
    }
    for source in 0..n {
        let mut parent = vec![usize::MAX; n];
        parent[source] = source;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &w in d.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent.contains(&usize::MAX) {
            return Err(Error::InvalidDrawing("not a tree: disconnected".into()));
        }
        for target in source + 1..n {
            let mut ids = vec![target];
            while *ids.last().unwrap() != source {
                ids.push(parent[*ids.last().unwrap()]);
            }
            if !is_increasing_chord_points(&d.points_of(&ids)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, rat, Point};

    fn hook_drawing() -> Drawing {
        Drawing::from_parts(
            vec![
                (Point::from_ints(0, 0), None),
                (Point::from_ints(1, 0), None),
                (Point::new(int(0), rat(1, 10)), None),
            ],
            vec![(0, 1), (1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_path() {
        let d = Drawing::from_parts(
            vec![(Point::from_ints(0, 0), None), (Point::from_ints(3, 1), None)],
            vec![(0, 1)],
        )
        .unwrap();
        let found = find_ic_path(&d, 0, 1, DEFAULT_PATH_BUDGET).unwrap();
        assert_eq!(found.outcome, SearchOutcome::Found(vec![0, 1]));
        assert!(find_ic_path(&d, 1, 1, DEFAULT_PATH_BUDGET).is_err());
    }

    #[test]
    fn hook_has_no_path_and_no_tree() {
        let d = hook_drawing();
        assert_eq!(find_ic_path(&d, 0, 2, DEFAULT_PATH_BUDGET).unwrap().outcome, SearchOutcome::Absent);
        assert_eq!(
            find_ic_rooted_spanning_tree(&d, 0, DEFAULT_TREE_BUDGET).unwrap().outcome,
            SearchOutcome::Absent
        );
    }

    #[test]
    fn star_tree() {
        let pts = [(3, 0), (0, 3), (-3, 0), (0, -3), (2, 2)];
        let mut vertices = vec![(Point::from_ints(0, 0), Some("root".to_string()))];
        vertices.extend(pts.iter().map(|&(x, y)| (Point::from_ints(x, y), None)));
        let edges = (1..=pts.len()).map(|i| (0, i)).collect();
        let d = Drawing::from_parts(vertices, edges).unwrap();
        let found = find_ic_rooted_spanning_tree(&d, 0, DEFAULT_TREE_BUDGET).unwrap();
        let tree = found.outcome.found().unwrap();
        assert!((1..=pts.len()).all(|v| tree.parent(v) == Some(0)));
        assert!(verify_ic_rooted_tree(&d, tree).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let d = hook_drawing();
        let run = find_ic_rooted_spanning_tree(&d, 0, 0).unwrap();
        assert_eq!(run.outcome, SearchOutcome::Unknown);
    }

    #[test]
    fn verifier_examples() {
        let d = hook_drawing();
        let mut chain = RootedTree::new(0);
        chain.attach(1, 0);
        chain.attach(2, 1);
        assert!(!verify_ic_rooted_tree(&d, &chain).unwrap());
        let mut partial = RootedTree::new(0);
        partial.attach(1, 0);
        assert!(!verify_ic_rooted_tree(&d, &partial).unwrap());
        let mut bogus = RootedTree::new(0);
        bogus.attach(2, 0);
        assert!(verify_ic_rooted_tree(&d, &bogus).is_err());
    }

    #[test]
    fn tree_drawing_examples() {
        let path = Drawing::from_parts(
            vec![
                (Point::from_ints(0, 0), None),
                (Point::from_ints(1, 0), None),
                (Point::from_ints(2, 1), None),
            ],
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert!(verify_ic_tree_drawing(&path).unwrap());
        let star = Drawing::from_parts(
            vec![
                (Point::from_ints(0, 0), None),
                (Point::from_ints(-2, 1), None),
                (Point::from_ints(2, -1), None),
            ],
            vec![(0, 1), (0, 2)],
        )
        .unwrap();
        assert!(verify_ic_tree_drawing(&star).unwrap());
        assert!(!verify_ic_tree_drawing(&hook_drawing()).unwrap());
        let cycle = Drawing::from_parts(
            vec![
                (Point::from_ints(0, 0), None),
                (Point::from_ints(1, 0), None),
                (Point::from_ints(0, 1), None),
            ],
            vec![(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        assert!(verify_ic_tree_drawing(&cycle).is_err());
    }

    #[test]
    fn ic_path_enumeration_counts() {
        let d = hook_drawing();
        let mut seen = Vec::new();
        for_each_ic_path(&d, 0, |ids| {
            seen.push(ids.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1]]);
        let mut all = Vec::new();
        for_each_simple_path(&d, 0, 2, |ids| all.push(ids.to_vec()));
        assert_eq!(all, vec![vec![0, 1, 2]]);
    }
}
