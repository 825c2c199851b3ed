//! Maps between graphs of groups, given simplicially by vertex images,
//! vertex-group isomorphisms and edge-image paths.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{structural, Result};
use crate::graph::{ChosenElements, Graph, Metric, OEdge, Q};
use crate::group::{Elem, GroupHom};
use crate::path::{Class, Loop, Path, Turn};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    pub dom: Graph,
    pub cod: Graph,
    pub vmap: Vec<usize>,
    pub homs: Vec<GroupHom>,
    /// Image of each edge in its declared orientation.
    pub images: Vec<Path>,
}

/// Image of a turn under a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TurnImage {
    Turn(Turn),
    Trivial,
    Collapsed,
}

impl GraphMap {
    pub fn identity(g: &Graph) -> GraphMap {
        GraphMap {
            dom: g.clone(),
            cod: g.clone(),
            vmap: (0..g.n_vertices()).collect(),
            homs: g.vertices.iter().map(|v| GroupHom::identity(&v.group)).collect(),
            images: (0..g.n_edges()).map(|i| Path::plain(g, &[OEdge::fwd(i)])).collect(),
        }
    }

    pub fn check(&self) -> Result<()> {
        let (d, c) = (&self.dom, &self.cod);
        if self.vmap.len() != d.n_vertices() || self.homs.len() != d.n_vertices() || self.images.len() != d.n_edges() {
            return structural("map data does not match the domain size");
        }
        for v in 0..d.n_vertices() {
            let w = self.vmap[v];
            if w >= c.n_vertices() {
                return structural(format!("vertex {} maps out of range", d.vertices[v].name));
            }
            self.homs[v].check(d.group(v), c.group(w)).map_err(|e| {
                crate::Error::Structural(format!("vertex {}: {e}", d.vertices[v].name))
            })?;
        }
        for (i, p) in self.images.iter().enumerate() {
            p.check(c)?;
            let e = OEdge::fwd(i);
            if p.start != self.vmap[d.origin(e)] || p.end(c) != self.vmap[d.terminus(e)] {
                return structural(format!("image of edge {} has wrong endpoints", d.edges[i].name));
            }
        }
        Ok(())
    }

    pub fn is_self_map(&self) -> bool {
        self.dom == self.cod
    }

    pub fn image_oedge(&self, e: OEdge) -> Path {
        let p = &self.images[e.edge()];
        if e.is_fwd() {
            p.clone()
        } else {
            p.reverse(&self.cod)
        }
    }

    pub fn apply_elem(&self, v: usize, g: &Elem) -> Elem {
        if self.dom.group(v).is_trivial() {
            return self.cod.group(self.vmap[v]).identity();
        }
        self.homs[v].apply(g).expect("element belongs to the vertex group")
    }

    pub fn preimage_elem(&self, v: usize, g: &Elem) -> Elem {
        if self.dom.group(v).is_trivial() {
            return self.dom.group(v).identity();
        }
        self.homs[v].preimage(g).expect("element belongs to the image group")
    }

    /// `φ(g_1) f(e_1) φ(g_2) ... f(e_k) φ(g_{k+1})`, not reduced.
    pub fn image_path_raw(&self, p: &Path) -> Path {
        let d = &self.dom;
        let mut at = p.start;
        let mut out = Path::point(self.vmap[at], self.apply_elem(at, &p.decs[0]));
        for (i, &e) in p.edges.iter().enumerate() {
            out = out.concat(&self.cod, &self.image_oedge(e));
            at = d.terminus(e);
            out = out.right_mul(&self.cod, &self.apply_elem(at, &p.decs[i + 1]));
        }
        out
    }

    pub fn image_path(&self, p: &Path) -> Path {
        self.image_path_raw(p).reduce(&self.cod)
    }

    pub fn image_loop(&self, l: &Loop) -> Class {
        let p = self.image_path_raw(&l.to_path(&self.dom));
        match Loop::from_closed_path(&self.cod, &p) {
            Some(l) => l.cyclic_reduce(&self.cod),
            None => {
                let v = p.start;
                Class::Elliptic { vertex: v, elem: self.cod.group(v).conjugacy_canonical(&p.decs[0]) }
            }
        }
    }

    pub fn image_class(&self, c: &Class) -> Class {
        match c {
            Class::Loop(l) => self.image_loop(l),
            Class::Elliptic { vertex, elem } => {
                let w = self.vmap[*vertex];
                Class::Elliptic { vertex: w, elem: self.cod.group(w).conjugacy_canonical(&self.apply_elem(*vertex, elem)) }
            }
        }
    }

    /// First decorated germ of `φ_v(x) f(a)`, or `None` if `f(a)` is a point.
    pub fn germ_image(&self, x: &Elem, a: OEdge) -> Option<(Elem, OEdge)> {
        let v = self.dom.origin(a);
        let img = self.image_oedge(a).reduce(&self.cod);
        let first = *img.edges.first()?;
        let w = self.vmap[v];
        Some((self.cod.group(w).mul(&self.apply_elem(v, x), &img.decs[0]), first))
    }

    pub fn image_turn(&self, t: &Turn) -> TurnImage {
        let id = self.dom.group_at(t.a).identity();
        match (self.germ_image(&id, t.a), self.germ_image(&t.g, t.b)) {
            (Some((x, a)), Some((y, b))) => {
                let img = Turn::new(&self.cod, a, &x, b, &y);
                if img.is_trivial(&self.cod) {
                    TurnImage::Trivial
                } else {
                    TurnImage::Turn(img)
                }
            }
            _ => TurnImage::Collapsed,
        }
    }

    /// `self` followed by `after`.
    pub fn then(&self, after: &GraphMap) -> GraphMap {
        debug_assert_eq!(self.cod, after.dom);
        GraphMap {
            dom: self.dom.clone(),
            cod: after.cod.clone(),
            vmap: self.vmap.iter().map(|&w| after.vmap[w]).collect(),
            homs: (0..self.dom.n_vertices())
                .map(|v| self.homs[v].compose(&after.homs[self.vmap[v]]))
                .collect(),
            images: self.images.iter().map(|p| after.image_path_raw(p)).collect(),
        }
    }

    /// Reduces every edge image; a straight map may not collapse an edge.
    pub fn straighten(&self) -> Result<GraphMap> {
        let mut out = self.clone();
        for (i, p) in self.images.iter().enumerate() {
            let r = p.reduce(&self.cod);
            if r.is_empty() {
                return structural(format!("edge {} is collapsed to a point", self.dom.edges[i].name));
            }
            out.images[i] = r;
        }
        Ok(out)
    }

    /// Reduces edge images, allowing collapsed edges.
    pub fn tighten(&self) -> GraphMap {
        let mut out = self.clone();
        for p in out.images.iter_mut() {
            *p = p.reduce(&self.cod);
        }
        out
    }

    pub fn is_straight(&self) -> bool {
        self.images.iter().all(|p| !p.is_empty() && p.is_reduced(&self.cod))
    }

    /// Edges occurring in the images of `seed`, closed under iteration.
    pub fn invariant_closure(&self, seed: usize) -> BTreeSet<usize> {
        let mut set = BTreeSet::from([seed]);
        let mut stack = vec![seed];
        while let Some(e) = stack.pop() {
            for x in &self.images[e].edges {
                if set.insert(x.edge()) {
                    stack.push(x.edge());
                }
            }
        }
        set
    }

    pub fn display_edge(&self, i: usize) -> String {
        format!("{} -> {}", self.dom.edges[i].name, self.images[i].display(&self.cod))
    }
}

/// Per-edge stretch, Lipschitz constant and tension graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StretchData {
    pub stretch: Vec<Q>,
    pub lip: Q,
    pub tension: Vec<usize>,
}

pub fn stretch_data(f: &GraphMap, dom: &Metric, cod: &Metric) -> StretchData {
    let stretch: Vec<Q> = f
        .images
        .iter()
        .enumerate()
        .map(|(i, p)| p.length(cod) / &dom.0[i])
        .collect();
    let lip = stretch.iter().cloned().fold(Q::zero(), |a, b| if b > a { b } else { a });
    let tension = (0..stretch.len()).filter(|&i| stretch[i] == lip).collect();
    StretchData { stretch, lip, tension }
}

/// A point of the deformation space together with a straight self-map
/// representing the automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedPoint {
    pub graph: Graph,
    pub metric: Metric,
    pub map: GraphMap,
    pub chosen: ChosenElements,
}

impl MarkedPoint {
    pub fn new(graph: Graph, metric: Metric, map: GraphMap) -> Result<MarkedPoint> {
        let chosen = ChosenElements::default_for(&graph);
        MarkedPoint::with_chosen(graph, metric, map, chosen)
    }

    pub fn with_chosen(graph: Graph, metric: Metric, map: GraphMap, chosen: ChosenElements) -> Result<MarkedPoint> {
        let diag = graph.validate();
        if !diag.is_empty() {
            return structural(diag.join("; "));
        }
        if metric.0.len() != graph.n_edges() {
            return structural("metric does not match the edge count");
        }
        if !metric.is_positive() {
            return structural("edge lengths must be positive");
        }
        if map.dom != graph || map.cod != graph {
            return structural("representative is not a self-map of the graph");
        }
        map.check()?;
        chosen.check(&graph)?;
        let map = map.straighten()?;
        Ok(MarkedPoint { graph, metric, map, chosen })
    }

    /// Like `with_chosen`, but only tightens the representative, so edges
    /// collapsed by a transported map are allowed.
    pub fn from_parts(graph: Graph, metric: Metric, map: GraphMap, chosen: ChosenElements) -> Result<MarkedPoint> {
        let diag = graph.validate();
        if !diag.is_empty() {
            return structural(diag.join("; "));
        }
        if metric.0.len() != graph.n_edges() || !metric.is_positive() {
            return structural("metric must assign a positive length to every edge");
        }
        if map.dom != graph || map.cod != graph {
            return structural("representative is not a self-map of the graph");
        }
        map.check()?;
        chosen.check(&graph)?;
        let map = map.tighten();
        Ok(MarkedPoint { graph, metric, map, chosen })
    }

    pub fn with_metric(&self, metric: Metric) -> MarkedPoint {
        MarkedPoint { metric, ..self.clone() }
    }

    pub fn stretch(&self) -> StretchData {
        stretch_data(&self.map, &self.metric, &self.metric)
    }

    /// Smallest invariant subgraph containing each edge.
    pub fn invariant_subgraphs(&self) -> Vec<BTreeSet<usize>> {
        (0..self.graph.n_edges()).map(|e| self.map.invariant_closure(e)).collect()
    }

    /// A proper invariant subgraph, if some seed closure is not everything.
    pub fn proper_invariant_subgraph(&self) -> Option<BTreeSet<usize>> {
        self.invariant_subgraphs().into_iter().find(|s| s.len() < self.graph.n_edges())
    }
}
