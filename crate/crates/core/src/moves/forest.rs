use num::Zero;

use crate::error::{precondition, structural, Result};
use crate::graph::{ChosenElements, Graph, Metric, OEdge, Q};
use crate::group::GroupHom;
use crate::map::{GraphMap, MarkedPoint};
use crate::path::Path;

/// Data of a forest collapse `X -> X/F` and its section `X/F -> X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseRecord {
    pub forest: Vec<usize>,
    /// Root of each component, indexed by the vertices of the quotient.
    pub roots: Vec<usize>,
    /// Source edge of each quotient edge.
    pub kept: Vec<usize>,
    pub collapse: GraphMap,
    /// Sends each quotient edge `e` to `γ_o e γ̄_t` through the forest.
    pub section: GraphMap,
}

fn component_data(g: &Graph, forest: &[usize]) -> Result<(Vec<usize>, Vec<usize>, Vec<Vec<OEdge>>)> {
    let n = g.n_vertices();
    let mut in_forest = vec![false; g.n_edges()];
    for &e in forest {
        if e >= g.n_edges() || in_forest[e] {
            return structural("forest lists an unknown or repeated edge");
        }
        in_forest[e] = true;
    }
    let mut comp = vec![usize::MAX; n];
    let mut roots = Vec::new();
    let mut gamma: Vec<Vec<OEdge>> = vec![Vec::new(); n];
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        let mut seen_edges = 0usize;
        let mut i = 0;
        let mut local = vec![start];
        comp[start] = roots.len();
        while i < local.len() {
            let u = local[i];
            i += 1;
            for o in g.star(u) {
                if !in_forest[o.edge()] {
                    continue;
                }
                if g.origin(o) == g.terminus(o) {
                    return structural("edge set is not a forest");
                }
                seen_edges += 1;
                let t = g.terminus(o);
                if comp[t] == usize::MAX {
                    comp[t] = roots.len();
                    local.push(t);
                    members.push(t);
                }
            }
        }
        // every forest edge was counted from both endpoints
        if seen_edges / 2 + 1 != members.len() {
            return structural("edge set is not a forest");
        }
        let nonfree: Vec<usize> = members.iter().copied().filter(|&u| !g.is_free_vertex(u)).collect();
        if nonfree.len() > 1 {
            return structural("forest component joins two non-free vertices");
        }
        let root = nonfree.first().copied().unwrap_or_else(|| *members.iter().min().unwrap());
        // paths from the root inside the tree
        let mut stack = vec![root];
        let mut done = vec![root];
        gamma[root] = Vec::new();
        while let Some(u) = stack.pop() {
            for o in g.star(u) {
                let t = g.terminus(o);
                if in_forest[o.edge()] && !done.contains(&t) {
                    let mut p = gamma[u].clone();
                    p.push(o);
                    gamma[t] = p;
                    done.push(t);
                    stack.push(t);
                }
            }
        }
        roots.push(root);
    }
    Ok((comp, roots, gamma))
}

fn tree_path(g: &Graph, start: usize, edges: Vec<OEdge>) -> Path {
    let mut decs: Vec<_> = edges.iter().map(|&e| g.group_at(e).identity()).collect();
    let end = edges.last().map_or(start, |&e| g.terminus(e));
    decs.push(g.group(end).identity());
    Path { start, decs, edges }
}

fn collapse_maps(g: &Graph, forest: &[usize]) -> Result<CollapseRecord> {
    let (comp, roots, gamma) = component_data(g, forest)?;
    let mut y = Graph::new();
    for &r in &roots {
        y.add_vertex(g.vertices[r].name.clone(), g.group(r).clone());
    }
    let kept: Vec<usize> = (0..g.n_edges()).filter(|e| !forest.contains(e)).collect();
    for &i in &kept {
        let e = &g.edges[i];
        y.add_edge(e.name.clone(), comp[e.from], comp[e.to]);
    }
    let homs: Vec<GroupHom> = (0..g.n_vertices())
        .map(|u| if roots.contains(&u) { GroupHom::identity(g.group(u)) } else { GroupHom::Trivial })
        .collect();
    let images = (0..g.n_edges())
        .map(|i| match kept.iter().position(|&k| k == i) {
            Some(j) => Path::plain(&y, &[OEdge::fwd(j)]),
            None => Path::trivial(&y, comp[g.edges[i].from]),
        })
        .collect();
    let collapse = GraphMap { dom: g.clone(), cod: y.clone(), vmap: comp.clone(), homs, images };

    let mut sec_images = Vec::with_capacity(kept.len());
    for &i in &kept {
        let e = OEdge::fwd(i);
        let (o, t) = (g.origin(e), g.terminus(e));
        let mut edges = gamma[o].clone();
        edges.push(e);
        edges.extend(gamma[t].iter().rev().map(|x| x.rev()));
        sec_images.push(tree_path(g, roots[comp[o]], edges).reduce(g));
    }
    let section = GraphMap {
        dom: y.clone(),
        cod: g.clone(),
        vmap: roots.clone(),
        homs: roots.iter().map(|&r| GroupHom::identity(g.group(r))).collect(),
        images: sec_images,
    };
    Ok(CollapseRecord { forest: forest.to_vec(), roots, kept, collapse, section })
}

/// Collapses each tree of `forest` to a point, transporting the representative.
pub fn collapse_forest(x: &MarkedPoint, forest: &[usize]) -> Result<(MarkedPoint, CollapseRecord)> {
    let rec = collapse_maps(&x.graph, forest)?;
    let y = rec.collapse.cod.clone();
    let metric = Metric(rec.kept.iter().map(|&i| x.metric.0[i].clone()).collect());
    let chosen = ChosenElements(rec.roots.iter().map(|&r| x.chosen.0[r].clone()).collect());
    let rep = rec.section.then(&x.map).then(&rec.collapse);
    let point = MarkedPoint::from_parts(y, metric, rep, chosen)?;
    Ok((point, rec))
}

/// Result of unfolding a point of a simplex into one of its faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnfoldForest {
    pub point: MarkedPoint,
    /// Locally isometric map from the unfolded point onto the original point.
    pub p: GraphMap,
    pub svol: u64,
    pub record: CollapseRecord,
}

/// Unfolds `y` into the face obtained by collapsing `forest`: each quotient
/// edge gets the length of its section path, and `p` is that section.
pub fn unfold_forest(y: &MarkedPoint, forest: &[usize]) -> Result<UnfoldForest> {
    let (face, record) = collapse_forest(y, forest)?;
    let p = record.section.clone();
    let metric = Metric(p.images.iter().map(|im| im.length(&y.metric)).collect());
    let point = face.with_metric(metric);
    let svol = svol(&p, &point.metric, &y.metric)?;
    // a non-free vertex has a single preimage, and edge images cross only free vertices
    for v in y.graph.nonfree_vertices() {
        if p.vmap.iter().filter(|&&w| w == v).count() != 1 {
            return structural("unfolding map has several preimages over a non-free vertex");
        }
    }
    for im in &p.images {
        for e in &im.edges[..im.edges.len().saturating_sub(1)] {
            if !y.graph.is_free_vertex(y.graph.terminus(*e)) {
                return structural("unfolding map crosses a non-free vertex inside an edge");
            }
        }
    }
    let d = y.graph.n_edges() as u64;
    if svol > 2 * d * d {
        return structural(format!("svol {svol} exceeds 2D² = {}", 2 * d * d));
    }
    Ok(UnfoldForest { point, p, svol, record })
}

/// Number of edges of the pullback subdivision of a map that is locally
/// isometric on edges.
pub fn svol(p: &GraphMap, dom: &Metric, cod: &Metric) -> Result<u64> {
    let mut total = 0u64;
    for (i, im) in p.images.iter().enumerate() {
        if im.length(cod) != dom.0[i] || im.length(cod) == Q::zero() {
            return precondition(format!("map is not locally isometric on edge {}", p.dom.edges[i].name));
        }
        total += im.len() as u64;
    }
    Ok(total)
}
