use crate::error::{structural, Result};
use crate::graph::{Graph, Metric, OEdge};
use crate::group::{Elem, GroupHom};
use crate::map::GraphMap;
use crate::path::Path;

use super::forest::svol;

/// An available identification: germs `a` and `g·b` at `vertex` share their image germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldChoice {
    pub vertex: usize,
    pub a: OEdge,
    pub g: Elem,
    pub b: OEdge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldStep {
    pub choice: FoldChoice,
    /// Edge removed and vertex merged away, in the indices before the step.
    pub removed_edge: usize,
    pub removed_vertex: usize,
    pub survivor: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingPath {
    pub steps: Vec<FoldStep>,
    pub svol: u64,
    /// Residual maps `p_i : X_i -> Y`, starting with the subdivided input.
    pub residuals: Vec<GraphMap>,
    /// Quotient maps `q_i : X_i -> X_{i+1}`.
    pub quotients: Vec<GraphMap>,
}

/// Map sending every edge to a single decorated edge.
#[derive(Clone, Debug)]
struct Simplicial {
    g: Graph,
    vimg: Vec<usize>,
    homs: Vec<GroupHom>,
    d0: Vec<Elem>,
    img: Vec<OEdge>,
    d1: Vec<Elem>,
}

impl Simplicial {
    fn from_map(p: &GraphMap) -> Simplicial {
        let (d, c) = (&p.dom, &p.cod);
        let mut g = Graph::new();
        for v in &d.vertices {
            g.add_vertex(v.name.clone(), v.group.clone());
        }
        let mut vimg = p.vmap.clone();
        let homs_in = p.homs.clone();
        let (mut d0, mut img, mut d1) = (Vec::new(), Vec::new(), Vec::new());
        for (i, im) in p.images.iter().enumerate() {
            let e = &d.edges[i];
            let k = im.len();
            let mut prev = e.from;
            for j in 0..k {
                let next = if j + 1 == k {
                    e.to
                } else {
                    vimg.push(c.terminus(im.edges[j]));
                    g.add_vertex(format!("{}.{}", e.name, j + 1), crate::group::VertexGroup::Trivial)
                };
                let name = if k == 1 { e.name.clone() } else { format!("{}.{}", e.name, j) };
                g.add_edge(name, prev, next);
                d0.push(im.decs[j].clone());
                img.push(im.edges[j]);
                d1.push(if j + 1 == k { im.decs[k].clone() } else { c.group(c.terminus(im.edges[j])).identity() });
                prev = next;
            }
        }
        let mut homs = homs_in;
        homs.resize(g.n_vertices(), GroupHom::Trivial);
        Simplicial { g, vimg, homs, d0, img, d1 }
    }

    fn image_edge(&self, o: OEdge) -> OEdge {
        let e = self.img[o.edge()];
        if o.is_fwd() {
            e
        } else {
            e.rev()
        }
    }

    fn start_dec(&self, c: &Graph, o: OEdge) -> Elem {
        if o.is_fwd() {
            self.d0[o.edge()].clone()
        } else {
            c.group(c.origin(self.image_edge(o))).invert(&self.d1[o.edge()])
        }
    }

    fn end_dec(&self, c: &Graph, o: OEdge) -> Elem {
        let x = self.start_dec(c, o.rev());
        c.group(c.terminus(self.image_edge(o))).invert(&x)
    }

    fn to_map(&self, c: &Graph) -> GraphMap {
        let images = (0..self.g.n_edges())
            .map(|i| Path {
                start: self.vimg[self.g.edges[i].from],
                decs: vec![self.d0[i].clone(), self.d1[i].clone()],
                edges: vec![self.img[i]],
            })
            .collect();
        GraphMap { dom: self.g.clone(), cod: c.clone(), vmap: self.vimg.clone(), homs: self.homs.clone(), images }
    }

    fn choices(&self, c: &Graph) -> Vec<FoldChoice> {
        let g = &self.g;
        let mut out = Vec::new();
        for u in 0..g.n_vertices() {
            let st = g.star(u);
            let cg = c.group(self.vimg[u]);
            for (i, &a) in st.iter().enumerate() {
                for &b in &st[i + 1..] {
                    if a.edge() == b.edge() || self.image_edge(a) != self.image_edge(b) {
                        continue;
                    }
                    let h = cg.mul(&self.start_dec(c, a), &cg.invert(&self.start_dec(c, b)));
                    let g_elem = if g.is_free_vertex(u) {
                        if !cg.is_identity(&h) {
                            continue;
                        }
                        g.group(u).identity()
                    } else {
                        match self.homs[u].preimage(&h) {
                            Ok(x) => x,
                            Err(_) => continue,
                        }
                    };
                    out.push(FoldChoice { vertex: u, a, g: g_elem, b });
                }
            }
        }
        out
    }

    /// Identifies the whole edges of a choice; returns the step and the quotient map.
    fn apply(&self, c: &Graph, ch: &FoldChoice) -> Result<(Simplicial, FoldStep, GraphMap)> {
        let g = &self.g;
        let (a, b) = (ch.a, ch.b);
        let (r, s) = (g.terminus(a), g.terminus(b));
        if r == s {
            return structural("identified edges share both endpoints; the fold would create an edge group");
        }
        let cg = c.group(self.vimg[r]);
        let delta = cg.mul(&cg.invert(&self.end_dec(c, a)), &self.end_dec(c, b));
        let (keep, drop, victim, survivor, twist) = if g.is_free_vertex(s) {
            (a, b, s, r, delta)
        } else if g.is_free_vertex(r) {
            (b, a, r, s, cg.invert(&delta))
        } else {
            return structural("fold identifies two non-free vertices");
        };
        let nv = |x: usize| {
            let x = if x == victim { survivor } else { x };
            if x > victim {
                x - 1
            } else {
                x
            }
        };
        let ne = |i: usize| if i > drop.edge() { i - 1 } else { i };

        let mut out = Graph::new();
        for (u, vx) in g.vertices.iter().enumerate() {
            if u != victim {
                out.add_vertex(vx.name.clone(), vx.group.clone());
            }
        }
        let mut next = Simplicial {
            g: Graph::new(),
            vimg: (0..g.n_vertices()).filter(|&u| u != victim).map(|u| self.vimg[u]).collect(),
            homs: (0..g.n_vertices()).filter(|&u| u != victim).map(|u| self.homs[u].clone()).collect(),
            d0: Vec::new(),
            img: Vec::new(),
            d1: Vec::new(),
        };
        for (i, e) in g.edges.iter().enumerate() {
            if i == drop.edge() {
                continue;
            }
            let mut d0 = self.d0[i].clone();
            let mut d1 = self.d1[i].clone();
            if e.from == victim {
                d0 = cg.mul(&twist, &d0);
            }
            if e.to == victim {
                d1 = cg.mul(&d1, &cg.invert(&twist));
            }
            out.add_edge(e.name.clone(), nv(e.from), nv(e.to));
            next.d0.push(d0);
            next.img.push(self.img[i]);
            next.d1.push(d1);
        }
        next.g = out;

        // quotient map
        let u = ch.vertex;
        let kept = if keep.is_fwd() { OEdge::fwd(ne(keep.edge())) } else { OEdge::bwd(ne(keep.edge())) };
        let dec = if drop == b { g.group(u).invert(&ch.g) } else { ch.g.clone() };
        let gu = next.g.group(nv(u)).clone();
        let dec = if gu.is_trivial() { gu.identity() } else { dec };
        let p = Path { start: nv(u), decs: vec![dec, next.g.group(next.g.terminus(kept)).identity()], edges: vec![kept] };
        let p = if drop.is_fwd() { p } else { p.reverse(&next.g) };
        let images = (0..g.n_edges())
            .map(|i| if i == drop.edge() { p.clone() } else { Path::plain(&next.g, &[OEdge::fwd(ne(i))]) })
            .collect();
        let homs = (0..g.n_vertices())
            .map(|x| if x == victim { GroupHom::Trivial } else { GroupHom::identity(g.group(x)) })
            .collect();
        let q = GraphMap { dom: g.clone(), cod: next.g.clone(), vmap: (0..g.n_vertices()).map(nv).collect(), homs, images };
        let step = FoldStep { choice: ch.clone(), removed_edge: drop.edge(), removed_vertex: victim, survivor };
        Ok((next, step, q))
    }

    fn is_isomorphism(&self, c: &Graph) -> bool {
        let mut hit = vec![0usize; c.n_edges()];
        for e in &self.img {
            hit[e.edge()] += 1;
        }
        let mut vhit = vec![0usize; c.n_vertices()];
        for &v in &self.vimg {
            vhit[v] += 1;
        }
        hit.iter().all(|&h| h == 1) && vhit.iter().all(|&h| h == 1)
    }
}

pub fn first_choice(_: &GraphMap, _: &[FoldChoice]) -> usize {
    0
}

/// Folds the pullback subdivision of `p` by repeatedly identifying pairs of
/// edges with a common vertex and the same image, until `p` is an isomorphism.
pub fn directed_folding_path(
    p: &GraphMap,
    dom: &Metric,
    cod: &Metric,
    chooser: &mut dyn FnMut(&GraphMap, &[FoldChoice]) -> usize,
) -> Result<FoldingPath> {
    let sv = svol(p, dom, cod)?;
    let c = &p.cod;
    let mut cur = Simplicial::from_map(p);
    let mut residuals = vec![cur.to_map(c)];
    let mut quotients = Vec::new();
    let mut steps = Vec::new();
    loop {
        let choices = cur.choices(c);
        if choices.is_empty() {
            break;
        }
        let k = chooser(residuals.last().unwrap(), &choices).min(choices.len() - 1);
        let (next, step, q) = cur.apply(c, &choices[k])?;
        for v in c.nonfree_vertices() {
            if next.vimg.iter().filter(|&&w| w == v).count() > 1 {
                return structural("a non-free vertex acquired two preimages along the folding path");
            }
        }
        steps.push(step);
        quotients.push(q);
        cur = next;
        residuals.push(cur.to_map(c));
    }
    if !cur.is_isomorphism(c) {
        return structural("no identification available but the map is not an isomorphism");
    }
    Ok(FoldingPath { steps, svol: sv, residuals, quotients })
}
