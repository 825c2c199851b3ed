use num::{Signed, Zero};

use crate::error::{precondition, structural, Result};
use crate::graph::{ChosenElements, Graph, Metric, OEdge, Q};
use crate::group::{GroupHom, VertexGroup};
use crate::map::{GraphMap, MarkedPoint};
use crate::path::{Path, Turn};

/// Everything needed to undo or replay a turn fold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldRecord {
    pub turn: Turn,
    pub amount: Q,
    pub source: MarkedPoint,
    /// Target edge carrying each source edge (remainder or merged edge).
    pub x_to_y: Vec<usize>,
    /// Length change of each carried edge per unit of fold amount.
    pub coef: Vec<i64>,
    /// The new edge, unless it was absorbed by smoothing a free bivalent vertex.
    pub new_edge: Option<usize>,
    pub target_graph: Graph,
    /// Fold map, source to target.
    pub q: GraphMap,
    /// Homotopy inverse of `q`.
    pub s: GraphMap,
}

impl FoldRecord {
    pub fn is_loop_case(&self) -> bool {
        self.turn.a.edge() == self.turn.b.edge()
    }

    pub fn smoothed(&self) -> bool {
        self.new_edge.is_none()
    }
}

pub(crate) fn fresh_name(taken: impl Iterator<Item = String>, stem: &str) -> String {
    let taken: Vec<String> = taken.collect();
    (0..).map(|i| format!("{stem}{i}")).find(|n| !taken.contains(n)).unwrap()
}

fn plain_or_point(g: &Graph, v: usize, edges: &[OEdge]) -> Path {
    if edges.is_empty() {
        Path::trivial(g, v)
    } else {
        Path::plain(g, edges)
    }
}

/// Path assigned to the declared orientation of an edge, given the path of `o`.
fn oriented(g: &Graph, o: OEdge, p: Path) -> Path {
    if o.is_fwd() {
        p
    } else {
        p.reverse(g)
    }
}

pub fn fold_amount_bound(x: &MarkedPoint, t: &Turn) -> Q {
    let la = x.metric.len(t.a).clone();
    let lb = x.metric.len(t.b).clone();
    if t.a.edge() == t.b.edge() {
        la / Q::from_integer(2.into())
    } else if la < lb {
        la
    } else {
        lb
    }
}

pub(crate) struct Smoothing {
    pub graph: Graph,
    pub forward: GraphMap,
    pub backward: GraphMap,
    /// Index of the merged edge in the new graph.
    pub merged: usize,
    /// Old edge kept (as the merged edge) and old edge removed.
    pub kept: usize,
    pub removed: usize,
}

/// Removes the free bivalent vertex `v`, merging its two edges.
pub(crate) fn smooth(g: &Graph, v: usize) -> Result<Smoothing> {
    let st = g.star(v);
    if st.len() != 2 || st[0].edge() == st[1].edge() || !g.is_free_vertex(v) {
        return structural("only a free bivalent vertex on two distinct edges can be smoothed");
    }
    let (x, y) = (st[0], st[1]);
    let nv = |u: usize| if u > v { u - 1 } else { u };
    let ne = |i: usize| if i > y.edge() { i - 1 } else { i };
    let mut out = Graph::new();
    for (u, vx) in g.vertices.iter().enumerate() {
        if u != v {
            out.add_vertex(vx.name.clone(), vx.group.clone());
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if i == y.edge() {
            continue;
        }
        if i == x.edge() {
            out.add_edge(e.name.clone(), nv(g.terminus(x)), nv(g.terminus(y)));
        } else {
            out.add_edge(e.name.clone(), nv(e.from), nv(e.to));
        }
    }
    let m = OEdge::fwd(ne(x.edge()));
    let ty = nv(g.terminus(y));

    let mut vmap: Vec<usize> = (0..g.n_vertices()).map(nv).collect();
    vmap[v] = ty;
    let homs: Vec<GroupHom> = g.vertices.iter().map(|vx| GroupHom::identity(&vx.group)).collect();
    let mut images = Vec::with_capacity(g.n_edges());
    for i in 0..g.n_edges() {
        images.push(if i == x.edge() {
            oriented(&out, x, Path::plain(&out, &[m.rev()]))
        } else if i == y.edge() {
            Path::trivial(&out, ty)
        } else {
            Path::plain(&out, &[OEdge::fwd(ne(i))])
        });
    }
    let forward = GraphMap { dom: g.clone(), cod: out.clone(), vmap, homs, images };

    let back_vmap: Vec<usize> = (0..g.n_vertices()).filter(|&u| u != v).collect();
    let back_homs = out.vertices.iter().map(|vx| GroupHom::identity(&vx.group)).collect();
    let mut back_images = Vec::with_capacity(out.n_edges());
    for i in 0..g.n_edges() {
        if i == y.edge() {
            continue;
        }
        back_images.push(if i == x.edge() {
            Path::plain(g, &[x.rev(), y])
        } else {
            Path::plain(g, &[OEdge::fwd(i)])
        });
    }
    let backward = GraphMap { dom: out.clone(), cod: g.clone(), vmap: back_vmap, homs: back_homs, images: back_images };
    Ok(Smoothing { graph: out, forward, backward, merged: m.edge(), kept: x.edge(), removed: y.edge() })
}

/// Metric of the fold of `rec.source`'s simplex by `amount`.
pub fn fold_metric(rec: &FoldRecord, x: &Metric, amount: &Q) -> Metric {
    let n = rec.target_graph.n_edges();
    let mut out = vec![Q::zero(); n];
    for (i, l) in x.0.iter().enumerate() {
        out[rec.x_to_y[i]] = l + amount * Q::from_integer(rec.coef[i].into());
    }
    if let Some(e) = rec.new_edge {
        out[e] = amount.clone();
    }
    Metric(out)
}

/// The unfolding projection: recovers source lengths from target lengths.
pub fn unfold_metric(rec: &FoldRecord, y: &Metric) -> Metric {
    let amount = match rec.new_edge {
        Some(e) => y.0[e].clone(),
        None => rec.amount.clone(),
    };
    Metric(
        (0..rec.x_to_y.len())
            .map(|i| &y.0[rec.x_to_y[i]] - &amount * Q::from_integer(rec.coef[i].into()))
            .collect(),
    )
}

/// Folds initial segments of length `amount` of the two germs of `t`.
pub fn fold_turn(x: &MarkedPoint, t: &Turn, amount: &Q) -> Result<(MarkedPoint, FoldRecord)> {
    let g = &x.graph;
    if t.is_degenerate() {
        return precondition(format!("turn {} is degenerate; folding it creates a non-trivial edge group", t.display(g)));
    }
    if t.a.edge() >= g.n_edges() || t.b.edge() >= g.n_edges() || g.origin(t.a) != g.origin(t.b) {
        return structural("turn does not belong to the graph");
    }
    if !amount.is_positive() || *amount >= fold_amount_bound(x, t) {
        return precondition(format!("fold amount {amount} out of range for {}", t.display(g)));
    }
    let v = t.vertex(g);
    let loop_case = t.a.edge() == t.b.edge();
    let grp = g.group(v);
    let gi = grp.invert(&t.g);

    let mut y = g.clone();
    let w = y.add_vertex(fresh_name(g.vertices.iter().map(|v| v.name.clone()), "w"), VertexGroup::Trivial);
    let n = y.add_edge(fresh_name(g.edges.iter().map(|e| e.name.clone()), "n"), v, w);
    let nf = OEdge::fwd(n);
    let reattach = |y: &mut Graph, o: OEdge| {
        let e = &mut y.edges[o.edge()];
        if o.is_fwd() {
            e.from = w;
        } else {
            e.to = w;
        }
    };
    reattach(&mut y, t.a);
    reattach(&mut y, t.b);

    let mut coef = vec![0i64; g.n_edges()];
    coef[t.a.edge()] -= 1;
    coef[t.b.edge()] -= 1;

    // fold map q : X -> Y
    let mut q = GraphMap::identity(g);
    q.cod = y.clone();
    let ida = y.group(v).identity();
    let idw = y.group(w).identity();
    let idt = |o: OEdge| y.group(y.terminus(o)).identity();
    if loop_case {
        let pa = Path { start: v, decs: vec![ida.clone(), idw.clone(), idw.clone(), t.g.clone()], edges: vec![nf, t.a, nf.rev()] };
        q.images[t.a.edge()] = oriented(&y, t.a, pa);
    } else {
        let pa = Path { start: v, decs: vec![ida.clone(), idw.clone(), idt(t.a)], edges: vec![nf, t.a] };
        let pb = Path { start: v, decs: vec![gi.clone(), idw.clone(), idt(t.b)], edges: vec![nf, t.b] };
        q.images[t.a.edge()] = oriented(&y, t.a, pa);
        q.images[t.b.edge()] = oriented(&y, t.b, pb);
    }
    for i in 0..g.n_edges() {
        if i != t.a.edge() && i != t.b.edge() {
            q.images[i] = Path::plain(&y, &[OEdge::fwd(i)]);
        }
    }

    // homotopy inverse s : Y -> X, collapsing the new edge
    let mut s = GraphMap::identity(g);
    s.dom = y.clone();
    s.vmap.push(v);
    s.homs.push(GroupHom::Trivial);
    if loop_case {
        let pa = Path { start: v, decs: vec![ida.clone(), gi.clone()], edges: vec![t.a] };
        s.images[t.a.edge()] = oriented(g, t.a, pa);
    } else {
        let pb = Path { start: v, decs: vec![t.g.clone(), g.group(g.terminus(t.b)).identity()], edges: vec![t.b] };
        s.images[t.b.edge()] = oriented(g, t.b, pb);
    }
    s.images.push(plain_or_point(g, v, &[]));

    let mut x_to_y: Vec<usize> = (0..g.n_edges()).collect();
    let mut new_edge = Some(n);
    let mut target = y;
    let mut chosen = x.chosen.0.clone();
    chosen.push(None);
    if target.is_free_vertex(v) && target.valence(v) == 2 {
        let sm = smooth(&target, v)?;
        // the new edge is the removed one, since it has the largest index
        debug_assert_eq!(sm.removed, n);
        let partner = sm.kept;
        coef[partner] += 1;
        for i in x_to_y.iter_mut() {
            if *i > sm.removed {
                *i -= 1;
            }
        }
        x_to_y[partner] = sm.merged;
        new_edge = None;
        q = q.then(&sm.forward);
        s = sm.backward.then(&s);
        chosen.remove(v);
        target = sm.graph;
    }
    let rep = s.then(&x.map).then(&q);
    let rec = FoldRecord {
        turn: t.clone(),
        amount: amount.clone(),
        source: x.clone(),
        x_to_y,
        coef,
        new_edge,
        target_graph: target.clone(),
        q,
        s,
    };
    let metric = fold_metric(&rec, &x.metric, amount);
    let point = MarkedPoint::from_parts(target, metric, rep, ChosenElements(chosen))?;
    Ok((point, rec))
}

/// The unfolding projection applied to a point of the fold's target simplex.
pub fn unfold_turn(y: &MarkedPoint, rec: &FoldRecord) -> Result<MarkedPoint> {
    if y.graph != rec.target_graph {
        return precondition("point does not lie in the simplex created by the fold");
    }
    let m = unfold_metric(rec, &y.metric);
    if !m.is_positive() {
        return precondition("unfolded lengths must stay positive");
    }
    Ok(rec.source.with_metric(m))
}
