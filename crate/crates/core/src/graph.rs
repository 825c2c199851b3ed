//! Graphs of groups with trivial edge groups, oriented edges and metrics.

use std::fmt::Write as _;

use num::{BigRational, One, Signed, Zero};

use crate::group::{Elem, GroupKind, VertexGroup};

pub type Q = BigRational;

/// Oriented edge: `2 * edge` is the declared orientation, `2 * edge + 1` its reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OEdge(pub u32);

impl OEdge {
    pub fn fwd(edge: usize) -> OEdge {
        OEdge(2 * edge as u32)
    }
    pub fn bwd(edge: usize) -> OEdge {
        OEdge(2 * edge as u32 + 1)
    }
    pub fn rev(self) -> OEdge {
        OEdge(self.0 ^ 1)
    }
    pub fn edge(self) -> usize {
        (self.0 / 2) as usize
    }
    pub fn is_fwd(self) -> bool {
        self.0 & 1 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub group: VertexGroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn new() -> Graph {
        Graph { vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, group: VertexGroup) -> usize {
        self.vertices.push(Vertex { name: name.into(), group });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, name: impl Into<String>, from: usize, to: usize) -> usize {
        self.edges.push(Edge { name: name.into(), from, to });
        self.edges.len() - 1
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn origin(&self, e: OEdge) -> usize {
        let edge = &self.edges[e.edge()];
        if e.is_fwd() {
            edge.from
        } else {
            edge.to
        }
    }

    pub fn terminus(&self, e: OEdge) -> usize {
        self.origin(e.rev())
    }

    pub fn group(&self, v: usize) -> &VertexGroup {
        &self.vertices[v].group
    }

    pub fn group_at(&self, e: OEdge) -> &VertexGroup {
        self.group(self.origin(e))
    }

    pub fn oedges(&self) -> impl Iterator<Item = OEdge> {
        (0..2 * self.edges.len() as u32).map(OEdge)
    }

    /// Oriented edges starting at `v`, in increasing order.
    pub fn star(&self, v: usize) -> Vec<OEdge> {
        self.oedges().filter(|&e| self.origin(e) == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.star(v).len()
    }

    pub fn is_free_vertex(&self, v: usize) -> bool {
        self.group(v).is_trivial()
    }

    /// Vertices with a non-trivial vertex group.
    pub fn nonfree_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| !self.is_free_vertex(v)).collect()
    }

    /// First Betti number of the underlying graph.
    pub fn rank(&self) -> usize {
        (self.n_edges() + 1).saturating_sub(self.n_vertices())
    }

    pub fn max_finite_order(&self) -> usize {
        self.vertices
            .iter()
            .filter_map(|v| match v.group.kind() {
                GroupKind::Finite => v.group.order(),
                _ => None,
            })
            .max()
            .unwrap_or(1)
    }

    pub fn oedge_name(&self, e: OEdge) -> String {
        let n = &self.edges[e.edge()].name;
        if e.is_fwd() {
            n.clone()
        } else {
            format!("{n}'")
        }
    }

    pub fn edge_by_name(&self, name: &str) -> Option<OEdge> {
        let (base, inv) = match name.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (name, false),
        };
        let i = self.edges.iter().position(|e| e.name == base)?;
        Some(if inv { OEdge::bwd(i) } else { OEdge::fwd(i) })
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_with(&vec![true; self.n_edges()])
    }

    /// Connectivity of the subgraph spanned by all vertices and the edges in `keep`.
    pub fn is_connected_with(&self, keep: &[bool]) -> bool {
        let n = self.n_vertices();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (i, e) in self.edges.iter().enumerate() {
                if !keep[i] {
                    continue;
                }
                for (x, y) in [(e.from, e.to), (e.to, e.from)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Every violated structural invariant, empty if the graph is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push("graph has no vertices".to_string());
            return out;
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.n_vertices() || e.to >= self.n_vertices() {
                out.push(format!("edge {} ({i}) has an endpoint out of range", e.name));
            }
        }
        if !out.is_empty() {
            return out;
        }
        if !self.is_connected() {
            out.push("graph is not connected".to_string());
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            let val = self.valence(v);
            if vx.group.is_trivial() && val <= 2 {
                out.push(format!("vertex {} has valence {val} and trivial vertex group", vx.name));
            }
            if let VertexGroup::Free { rank, .. } = vx.group {
                if rank == 0 {
                    out.push(format!("vertex {} has a free group of rank 0", vx.name));
                }
            }
        }
        let mut names: Vec<&str> = self.edges.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            out.push("duplicate edge names".to_string());
        }
        out
    }

    pub fn to_dot(&self, metric: Option<&Metric>) -> String {
        let mut s = String::from("graph G {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{} ({})\"];", v.name, v.group.kind());
        }
        for (i, e) in self.edges.iter().enumerate() {
            let label = match metric {
                Some(m) => format!("{} {}", e.name, m.0[i]),
                None => e.name.clone(),
            };
            let _ = writeln!(s, "  v{} -- v{} [label=\"{label}\"];", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

/// Edge lengths, indexed by unoriented edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Metric(pub Vec<Q>);

impl Metric {
    pub fn unit(n: usize) -> Metric {
        Metric(vec![Q::one(); n])
    }

    pub fn from_ints(v: &[i64]) -> Metric {
        Metric(v.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    pub fn len(&self, e: OEdge) -> &Q {
        &self.0[e.edge()]
    }

    pub fn volume(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, x| acc + x)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    pub fn normalized(&self) -> Metric {
        let v = self.volume();
        Metric(self.0.iter().map(|x| x / &v).collect())
    }

    pub fn scaled(&self, c: &Q) -> Metric {
        Metric(self.0.iter().map(|x| x * c).collect())
    }
}

/// One non-trivial element `h_v` per non-free vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenElements(pub Vec<Option<Elem>>);

impl ChosenElements {
    /// `h_v` = first generator for free groups, element id 1 for finite groups.
    pub fn default_for(g: &Graph) -> ChosenElements {
        ChosenElements(
            g.vertices
                .iter()
                .map(|v| match &v.group {
                    VertexGroup::Trivial => None,
                    VertexGroup::Finite(_) => Some(Elem::Fin(1)),
                    VertexGroup::Free { .. } => Some(Elem::Word(vec![1])),
                })
                .collect(),
        )
    }

    pub fn check(&self, g: &Graph) -> crate::Result<()> {
        if self.0.len() != g.n_vertices() {
            return crate::error::structural("chosen elements do not match the vertex count");
        }
        for (v, h) in self.0.iter().enumerate() {
            match (g.group(v).is_trivial(), h) {
                (true, None) => {}
                (false, Some(h)) if g.group(v).contains(h) && !g.group(v).is_identity(h) => {}
                _ => {
                    return crate::error::structural(format!(
                        "chosen element at vertex {} must be a non-trivial element",
                        g.vertices[v].name
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, v: usize) -> Option<&Elem> {
        self.0.get(v).and_then(|x| x.as_ref())
    }
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    pub fn rose2() -> Graph {
        let mut g = Graph::new();
        let v = g.add_vertex("v", VertexGroup::Trivial);
        g.add_edge("a", v, v);
        g.add_edge("b", v, v);
        g
    }

    #[test]
    fn oriented_edges_are_involutive() {
        let g = rose2();
        for e in g.oedges() {
            assert_eq!(e.rev().rev(), e);
            assert_eq!(g.origin(e.rev()), g.terminus(e));
        }
        assert_eq!(g.star(0).len(), 4);
        assert_eq!(g.edge_by_name("b'"), Some(OEdge::bwd(1)));
        assert_eq!(g.oedge_name(OEdge::bwd(0)), "a'");
    }

    #[test]
    fn validation_examples() {
        assert!(rose2().validate().is_empty());

        let mut bad = Graph::new();
        let v = bad.add_vertex("v", VertexGroup::Trivial);
        bad.add_edge("e", v, v);
        assert!(!bad.validate().is_empty());

        let mut ex3 = Graph::new();
        let v = ex3.add_vertex("v", VertexGroup::free(1));
        ex3.add_edge("e", v, v);
        assert!(ex3.validate().is_empty());

        let mut ex2 = Graph::new();
        let v = ex2.add_vertex("v", VertexGroup::finite(FiniteGroup::cyclic(2)));
        ex2.add_edge("e", v, v);
        assert!(ex2.validate().is_empty());
    }

    #[test]
    fn disconnected_is_rejected() {
        let mut g = rose2();
        let w = g.add_vertex("w", VertexGroup::free(1));
        let _ = w;
        assert!(g.validate().iter().any(|d| d.contains("connected")));
    }

    #[test]
    fn metric_volume() {
        let m = Metric(vec![q(1, 1), q(13, 21)]);
        assert_eq!(m.volume(), q(34, 21));
        assert_eq!(m.normalized().volume(), q(1, 1));
        assert!(m.is_positive());
    }
}
