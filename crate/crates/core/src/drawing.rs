//! Straight-line drawings and rooted trees inside them.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::chord::VertexPath;
use crate::error::{Error, Result};
use crate::geom::{Point, Segment};

/// Vertices at distinct rational points joined by straight edges, with optional role tags.
#[derive(Clone, Debug, Default)]
pub struct Drawing {
    vertices: Vec<Point>,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<Point, usize>,
    edge_set: HashSet<(usize, usize)>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl Drawing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        vertices: Vec<(Point, Option<String>)>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut d = Drawing::new();
        for (p, label) in vertices {
            d.add_vertex(p, label)?;
        }
        for (u, v) in edges {
            d.add_edge(u, v)?;
        }
        Ok(d)
    }

    pub fn add_vertex(&mut self, p: Point, label: Option<String>) -> Result<usize> {
        if let Some(&existing) = self.index.get(&p) {
            return Err(Error::InvalidDrawing(format!(
                "point {p} already used by vertex {existing}"
            )));
        }
        let id = self.vertices.len();
        self.index.insert(p.clone(), id);
        self.vertices.push(p);
        self.labels.push(label);
        self.adjacency.push(Vec::new());
        Ok(id)
    }

    pub fn add_labeled(&mut self, p: Point, label: impl Into<String>) -> Result<usize> {
        self.add_vertex(p, Some(label.into()))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertices.len();
        if u >= n || v >= n {
            return Err(Error::InvalidDrawing(format!("edge {u}-{v} names a missing vertex")));
        }
        if u == v {
            return Err(Error::InvalidDrawing(format!("self-loop at vertex {u}")));
        }
        if !self.edge_set.insert(key(u, v)) {
            return Err(Error::InvalidDrawing(format!("duplicate edge {u}-{v}")));
        }
        self.edges.push(key(u, v));
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.edge_set.remove(&key(u, v)) {
            return Err(Error::InvalidDrawing(format!("no edge {u}-{v} to remove")));
        }
        self.edges.retain(|&e| e != key(u, v));
        self.adjacency[u].retain(|&w| w != v);
        self.adjacency[v].retain(|&w| w != u);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: usize) -> &Point {
        &self.vertices[id]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn label(&self, id: usize) -> Option<&str> {
        self.labels[id].as_deref()
    }

    pub fn set_label(&mut self, id: usize, label: Option<String>) {
        self.labels[id] = label;
    }

    /// First vertex carrying exactly this role tag.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn vertex_at(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Edges as `(min, max)` pairs in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_set.contains(&key(u, v))
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn segment(&self, u: usize, v: usize) -> Segment {
        Segment::new(self.vertices[u].clone(), self.vertices[v].clone())
            .expect("distinct vertices have distinct points")
    }

    pub fn points_of(&self, ids: &[usize]) -> Vec<Point> {
        ids.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// The points of a walk along edges of this drawing.
    pub fn path(&self, ids: &[usize]) -> Result<VertexPath> {
        for w in ids.windows(2) {
            if !self.has_edge(w[0], w[1]) {
                return Err(Error::InvalidPath(format!("{}-{} is not an edge", w[0], w[1])));
            }
        }
        VertexPath::new(self.points_of(ids))
    }

    /// First vertex lying in the relative interior of an edge, if any.
    pub fn vertex_on_edge_interior(&self) -> Option<(usize, (usize, usize))> {
        for &(u, v) in &self.edges {
            let seg = self.segment(u, v);
            for (w, p) in self.vertices.iter().enumerate() {
                if w != u && w != v && seg.contains_in_interior(p) {
                    return Some((w, (u, v)));
                }
            }
        }
        None
    }

    pub fn max_bit_length(&self) -> u64 {
        self.vertices.iter().map(Point::bit_length).max().unwrap_or(0)
    }
}

/// A tree given by parent pointers; the root has no parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: BTreeMap<usize, usize>,
}

impl RootedTree {
    pub fn new(root: usize) -> Self {
        RootedTree {
            root,
            parent: BTreeMap::new(),
        }
    }

    pub fn from_parents(root: usize, parent: BTreeMap<usize, usize>) -> Result<Self> {
        if parent.contains_key(&root) {
            return Err(Error::InvalidTree("the root has a parent".into()));
        }
        let tree = RootedTree { root, parent };
        for &v in tree.parent.keys() {
            if tree.path_to(v).is_none() {
                return Err(Error::InvalidTree(format!("vertex {v} does not reach the root")));
            }
        }
        Ok(tree)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied()
    }

    pub fn parents(&self) -> &BTreeMap<usize, usize> {
        &self.parent
    }

    pub fn attach(&mut self, child: usize, parent: usize) {
        self.parent.insert(child, parent);
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Vertices in the tree, root first.
    pub fn vertices(&self) -> Vec<usize> {
        std::iter::once(self.root).chain(self.parent.keys().copied()).collect()
    }

    pub fn len(&self) -> usize {
        1 + self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Root-to-`v` vertex sequence, or `None` if `v` is absent or the chain cycles.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        let mut chain = vec![v];
        let mut cur = v;
        while cur != self.root {
            cur = *self.parent.get(&cur)?;
            if chain.len() > self.parent.len() {
                return None;
            }
            chain.push(cur);
        }
        chain.reverse();
        Some(chain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn duplicate_points_and_edges_are_rejected() {
        let mut d = Drawing::new();
        let a = d.add_vertex(p(0, 0), None).unwrap();
        let b = d.add_vertex(p(1, 0), None).unwrap();
        assert!(d.add_vertex(p(0, 0), None).is_err());
        d.add_edge(a, b).unwrap();
        assert!(d.add_edge(b, a).is_err());
        assert!(d.add_edge(a, a).is_err());
        assert!(d.add_edge(a, 7).is_err());
        d.remove_edge(b, a).unwrap();
        assert!(d.edges().is_empty());
        assert!(d.neighbors(a).is_empty());
    }

    #[test]
    fn vertex_on_edge_is_reported() {
        let d = Drawing::from_parts(
            vec![(p(0, 0), None), (p(2, 2), None), (p(1, 1), None)],
            vec![(0, 1)],
        )
        .unwrap();
        assert_eq!(d.vertex_on_edge_interior(), Some((2, (0, 1))));
    }

    #[test]
    fn tree_paths() {
        let mut t = RootedTree::new(0);
        t.attach(1, 0);
        t.attach(2, 1);
        assert_eq!(t.path_to(2), Some(vec![0, 1, 2]));
        assert_eq!(t.path_to(5), None);
        let cyclic = BTreeMap::from([(1, 2), (2, 1)]);
        assert!(RootedTree::from_parents(0, cyclic).is_err());
    }
}
