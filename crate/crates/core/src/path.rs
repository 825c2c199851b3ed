//! Decorated edge paths, loops, reduction and turns.

use std::fmt;

use num::Zero;

use crate::error::{precondition, structural, Result};
use crate::graph::{Graph, Metric, OEdge, Q};
use crate::group::{Elem, GroupKind};

/// `decs[0] edges[0] decs[1] ... edges[k-1] decs[k]`, where `decs[i]` lies in
/// the vertex group at the origin of `edges[i]` and the final decoration
/// lies at the terminus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub start: usize,
    pub decs: Vec<Elem>,
    pub edges: Vec<OEdge>,
}

impl Path {
    pub fn trivial(g: &Graph, v: usize) -> Path {
        Path { start: v, decs: vec![g.group(v).identity()], edges: Vec::new() }
    }

    pub fn point(v: usize, g: Elem) -> Path {
        Path { start: v, decs: vec![g], edges: Vec::new() }
    }

    /// Path made of the given edges with identity decorations.
    pub fn plain(g: &Graph, edges: &[OEdge]) -> Path {
        let start = g.origin(edges[0]);
        let mut decs: Vec<Elem> = edges.iter().map(|&e| g.group_at(e).identity()).collect();
        decs.push(g.group(g.terminus(*edges.last().unwrap())).identity());
        Path { start, decs, edges: edges.to_vec() }
    }

    pub fn end(&self, g: &Graph) -> usize {
        self.edges.last().map_or(self.start, |&e| g.terminus(e))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.decs.len() != self.edges.len() + 1 {
            return structural("path decoration count mismatch");
        }
        let mut at = self.start;
        for (i, &e) in self.edges.iter().enumerate() {
            if e.edge() >= g.n_edges() || g.origin(e) != at {
                return structural(format!("path does not concatenate at position {i}"));
            }
            if !g.group(at).contains(&self.decs[i]) {
                return structural(format!("decoration {i} is not in the vertex group"));
            }
            at = g.terminus(e);
        }
        if !g.group(at).contains(self.decs.last().unwrap()) {
            return structural("final decoration is not in the vertex group");
        }
        Ok(())
    }

    pub fn reverse(&self, g: &Graph) -> Path {
        let edges: Vec<OEdge> = self.edges.iter().rev().map(|e| e.rev()).collect();
        let mut decs = Vec::with_capacity(self.decs.len());
        let mut at = self.end(g);
        for (i, d) in self.decs.iter().rev().enumerate() {
            decs.push(g.group(at).invert(d));
            if i < edges.len() {
                at = g.terminus(edges[i]);
            }
        }
        Path { start: self.end(g), decs, edges }
    }

    /// Concatenation, multiplying the junction decorations.
    pub fn concat(&self, g: &Graph, other: &Path) -> Path {
        debug_assert_eq!(self.end(g), other.start);
        let v = other.start;
        let mut decs = self.decs[..self.decs.len() - 1].to_vec();
        decs.push(g.group(v).mul(self.decs.last().unwrap(), &other.decs[0]));
        decs.extend_from_slice(&other.decs[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { start: self.start, decs, edges }
    }

    pub fn left_mul(&self, g: &Graph, h: &Elem) -> Path {
        let mut p = self.clone();
        p.decs[0] = g.group(self.start).mul(h, &p.decs[0]);
        p
    }

    pub fn right_mul(&self, g: &Graph, h: &Elem) -> Path {
        let mut p = self.clone();
        let v = self.end(g);
        let last = p.decs.len() - 1;
        p.decs[last] = g.group(v).mul(&p.decs[last], h);
        p
    }

    /// The unique reduced path with the same endpoints.
    pub fn reduce(&self, g: &Graph) -> Path {
        let mut edges: Vec<OEdge> = Vec::with_capacity(self.edges.len());
        let mut decs: Vec<Elem> = vec![self.decs[0].clone()];
        for (i, &e) in self.edges.iter().enumerate() {
            let next = &self.decs[i + 1];
            let cancels = edges.last() == Some(&e.rev())
                && g.group(g.origin(e)).is_identity(decs.last().unwrap());
            if cancels {
                edges.pop();
                decs.pop();
                let v = g.terminus(e);
                let top = decs.pop().unwrap();
                decs.push(g.group(v).mul(&top, next));
            } else {
                edges.push(e);
                decs.push(next.clone());
            }
        }
        Path { start: self.start, decs, edges }
    }

    pub fn is_reduced(&self, g: &Graph) -> bool {
        self.edges.windows(2).enumerate().all(|(i, w)| {
            !(w[1] == w[0].rev() && g.group(g.terminus(w[0])).is_identity(&self.decs[i + 1]))
        })
    }

    pub fn length(&self, m: &Metric) -> Q {
        self.edges.iter().fold(Q::zero(), |acc, e| acc + m.len(*e))
    }

    /// Edge-occurrence counts per unoriented edge.
    pub fn edge_counts(&self, n_edges: usize) -> Vec<u64> {
        let mut c = vec![0u64; n_edges];
        for e in &self.edges {
            c[e.edge()] += 1;
        }
        c
    }

    /// Turns at interior vertices, `[ē_i, g_{i+1} e_{i+1}]`.
    pub fn turns(&self, g: &Graph) -> Vec<Turn> {
        self.edges
            .windows(2)
            .enumerate()
            .map(|(i, w)| Turn::new(g, w[0].rev(), &g.group_at(w[1]).identity(), w[1], &self.decs[i + 1]))
            .collect()
    }

    pub fn display(&self, g: &Graph) -> String {
        let mut parts = Vec::new();
        if self.edges.is_empty() {
            parts.push(format!("<{}>", g.vertices[self.start].name));
        }
        for (i, d) in self.decs.iter().enumerate() {
            let v = if i == 0 { self.start } else { g.terminus(self.edges[i - 1]) };
            if !g.group(v).is_identity(d) {
                parts.push(format!("{{{}}}", g.group(v).format(d)));
            }
            if i < self.edges.len() {
                parts.push(g.oedge_name(self.edges[i]));
            }
        }
        parts.join(" ")
    }
}

/// Closed path read cyclically: `(g_i, e_i)` with `g_i` at the origin of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    pub items: Vec<(Elem, OEdge)>,
}

/// Conjugacy class of a loop: hyperbolic (cyclically reduced loop) or elliptic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Loop(Loop),
    Elliptic { vertex: usize, elem: Elem },
}

impl Class {
    /// Representative independent of the starting point of the loop.
    pub fn canonical(&self) -> Class {
        match self {
            Class::Loop(l) => Class::Loop(l.canonical_rotation()),
            e => e.clone(),
        }
    }

    pub fn as_loop(&self) -> Option<&Loop> {
        match self {
            Class::Loop(l) => Some(l),
            Class::Elliptic { .. } => None,
        }
    }
}

impl Loop {
    pub fn plain(g: &Graph, edges: &[OEdge]) -> Loop {
        Loop { items: edges.iter().map(|&e| (g.group_at(e).identity(), e)).collect() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = OEdge> + '_ {
        self.items.iter().map(|(_, e)| *e)
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.items.is_empty() {
            return structural("empty loop");
        }
        let k = self.items.len();
        for i in 0..k {
            let (d, e) = &self.items[i];
            if e.edge() >= g.n_edges() || !g.group_at(*e).contains(d) {
                return structural(format!("bad decoration at position {i}"));
            }
            let next = self.items[(i + 1) % k].1;
            if g.terminus(*e) != g.origin(next) {
                return structural(format!("loop does not concatenate after position {i}"));
            }
        }
        Ok(())
    }

    /// Open path `g_1 e_1 ... g_k e_k 1` based at the origin of `e_1`.
    pub fn to_path(&self, g: &Graph) -> Path {
        let start = g.origin(self.items[0].1);
        let mut decs: Vec<Elem> = self.items.iter().map(|(d, _)| d.clone()).collect();
        decs.push(g.group(start).identity());
        Path { start, decs, edges: self.edges().collect() }
    }

    /// Closes a path whose endpoints agree, multiplying its end decorations.
    pub fn from_closed_path(g: &Graph, p: &Path) -> Option<Loop> {
        if p.edges.is_empty() || p.end(g) != p.start {
            return None;
        }
        let k = p.edges.len();
        let mut items: Vec<(Elem, OEdge)> =
            (0..k).map(|i| (p.decs[i].clone(), p.edges[i])).collect();
        items[0].0 = g.group(p.start).mul(&p.decs[k], &p.decs[0]);
        Some(Loop { items })
    }

    /// `[ē_{i-1}, g_i e_i]` for every cyclic position `i`.
    pub fn turn_at(&self, g: &Graph, i: usize) -> Turn {
        let k = self.items.len();
        let prev = self.items[(i + k - 1) % k].1;
        let (d, e) = &self.items[i];
        Turn::new(g, prev.rev(), &g.group_at(*e).identity(), *e, d)
    }

    pub fn turns_raw(&self, g: &Graph) -> Vec<Turn> {
        (0..self.items.len()).map(|i| self.turn_at(g, i)).collect()
    }

    pub fn is_cyclically_reduced(&self, g: &Graph) -> bool {
        !self.items.is_empty() && self.turns_raw(g).iter().all(|t| !t.is_trivial(g))
    }

    /// Turns crossed by a cyclically reduced loop.
    pub fn turns_crossed(&self, g: &Graph) -> Result<Vec<Turn>> {
        if !self.is_cyclically_reduced(g) {
            return precondition("loop is not cyclically reduced");
        }
        Ok(self.turns_raw(g))
    }

    pub fn cyclic_reduce(&self, g: &Graph) -> Class {
        let p = self.to_path(g).reduce(g);
        let start = p.start;
        if p.edges.is_empty() {
            return Class::Elliptic {
                vertex: start,
                elem: g.group(start).conjugacy_canonical(&p.decs[0]),
            };
        }
        let k = p.edges.len();
        let mut decs: Vec<Elem> = p.decs[..k].to_vec();
        decs[0] = g.group(start).mul(&p.decs[k], &p.decs[0]);
        let mut edges = p.edges;
        loop {
            let k = edges.len();
            if k >= 2 && edges[k - 1] == edges[0].rev() && g.group_at(edges[0]).is_identity(&decs[0]) {
                // drop the last and first edge, joining decs[k-1] and decs[1]
                let v = g.origin(edges[k - 1]);
                let joined = if k == 2 { decs[1].clone() } else { g.group(v).mul(&decs[k - 1], &decs[1]) };
                edges.pop();
                decs.pop();
                edges.remove(0);
                decs.remove(0);
                if edges.is_empty() {
                    return Class::Elliptic { vertex: v, elem: g.group(v).conjugacy_canonical(&joined) };
                }
                decs[0] = joined;
            } else {
                break;
            }
        }
        Class::Loop(Loop { items: decs.into_iter().zip(edges).collect() })
    }

    pub fn length(&self, m: &Metric) -> Q {
        self.items.iter().fold(Q::zero(), |acc, (_, e)| acc + m.len(*e))
    }

    pub fn edge_counts(&self, n_edges: usize) -> Vec<u64> {
        let mut c = vec![0u64; n_edges];
        for (_, e) in &self.items {
            c[e.edge()] += 1;
        }
        c
    }

    pub fn oriented_counts(&self, n_edges: usize) -> Vec<u64> {
        let mut c = vec![0u64; 2 * n_edges];
        for (_, e) in &self.items {
            c[e.0 as usize] += 1;
        }
        c
    }

    pub fn rotate(&self, r: usize) -> Loop {
        let mut items = self.items[r..].to_vec();
        items.extend_from_slice(&self.items[..r]);
        Loop { items }
    }

    /// Lexicographically least rotation, comparing `(edge, decoration)` pairs.
    pub fn canonical_rotation(&self) -> Loop {
        let key = |l: &Loop| l.items.iter().map(|(d, e)| (*e, d.clone())).collect::<Vec<_>>();
        (0..self.items.len())
            .map(|r| self.rotate(r))
            .min_by(|a, b| key(a).cmp(&key(b)))
            .unwrap_or_else(|| self.clone())
    }

    pub fn inverse(&self, g: &Graph) -> Loop {
        let k = self.items.len();
        let mut items = Vec::with_capacity(k);
        // (g_1⁻¹, ē_k), (g_k⁻¹, ē_{k-1}), ..., (g_2⁻¹, ē_1)
        for j in 0..k {
            let dec_idx = (k - j) % k;
            let edge_idx = k - 1 - j;
            let e = self.items[edge_idx].1.rev();
            let d = &self.items[dec_idx].0;
            items.push((g.group_at(e).invert(d), e));
        }
        Loop { items }
    }

    /// Canonical representative up to rotation and inversion.
    pub fn canonical_unoriented(&self, g: &Graph) -> Loop {
        let a = self.canonical_rotation();
        let b = self.inverse(g).canonical_rotation();
        let key = |l: &Loop| l.items.iter().map(|(d, e)| (*e, d.clone())).collect::<Vec<_>>();
        if key(&b) < key(&a) {
            b
        } else {
            a
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        let mut parts = Vec::new();
        for (d, e) in &self.items {
            let grp = g.group_at(*e);
            if !grp.is_identity(d) {
                parts.push(format!("{{{}}}", grp.format(d)));
            }
            parts.push(g.oedge_name(*e));
        }
        parts.join(" ")
    }
}

pub fn crossing_count(g: &Graph, l: &Loop, t: &Turn) -> usize {
    match l.cyclic_reduce(g) {
        Class::Loop(r) => r.turns_raw(g).iter().filter(|x| *x == t).count(),
        Class::Elliptic { .. } => 0,
    }
}

pub fn class_length(c: &Class, m: &Metric) -> Q {
    match c {
        Class::Loop(l) => l.length(m),
        Class::Elliptic { .. } => Q::zero(),
    }
}

/// Turn `[a, g b]` at the common origin of `a` and `b`, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Turn {
    pub a: OEdge,
    pub g: Elem,
    pub b: OEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TurnKind {
    Free,
    FiniteNonFree,
    InfiniteNonFree,
}

impl fmt::Display for TurnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurnKind::Free => write!(f, "free"),
            TurnKind::FiniteNonFree => write!(f, "finite"),
            TurnKind::InfiniteNonFree => write!(f, "infinite"),
        }
    }
}

impl Turn {
    /// Canonical form of the turn spanned by decorated germs `x·a` and `y·b`.
    pub fn new(g: &Graph, a: OEdge, x: &Elem, b: OEdge, y: &Elem) -> Turn {
        let grp = g.group_at(a);
        debug_assert_eq!(g.origin(a), g.origin(b));
        use std::cmp::Ordering::*;
        match a.cmp(&b) {
            Less => Turn { a, g: grp.mul(&grp.invert(x), y), b },
            Greater => Turn { a: b, g: grp.mul(&grp.invert(y), x), b: a },
            Equal => {
                let h = grp.mul(&grp.invert(x), y);
                let hi = grp.invert(&h);
                Turn { a, g: h.min(hi), b }
            }
        }
    }

    pub fn plain(g: &Graph, a: OEdge, b: OEdge) -> Turn {
        let id = g.group_at(a).identity();
        Turn::new(g, a, &id, b, &id)
    }

    pub fn vertex(&self, g: &Graph) -> usize {
        g.origin(self.a)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn is_trivial(&self, g: &Graph) -> bool {
        self.a == self.b && g.group_at(self.a).is_identity(&self.g)
    }

    pub fn kind(&self, g: &Graph) -> TurnKind {
        match g.group_at(self.a).kind() {
            GroupKind::Trivial => TurnKind::Free,
            GroupKind::Finite => TurnKind::FiniteNonFree,
            GroupKind::Free => TurnKind::InfiniteNonFree,
        }
    }

    pub fn display(&self, g: &Graph) -> String {
        let grp = g.group_at(self.a);
        if grp.is_identity(&self.g) {
            format!("[{}, {}]", g.oedge_name(self.a), g.oedge_name(self.b))
        } else {
            format!("[{}, {{{}}} {}]", g.oedge_name(self.a), grp.format(&self.g), g.oedge_name(self.b))
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::q;
    use crate::group::{FiniteGroup, VertexGroup};
    use proptest::prelude::*;

    pub fn rose2() -> Graph {
        let mut g = Graph::new();
        let v = g.add_vertex("v", VertexGroup::Trivial);
        g.add_edge("a", v, v);
        g.add_edge("b", v, v);
        g
    }

    pub fn ex3() -> Graph {
        let mut g = Graph::new();
        let v = g.add_vertex("v", VertexGroup::free(1));
        g.add_edge("e", v, v);
        g
    }

    pub fn ex2() -> Graph {
        let mut g = Graph::new();
        let v = g.add_vertex("v", VertexGroup::finite(FiniteGroup::cyclic(2)));
        g.add_edge("e", v, v);
        g
    }

    const A: OEdge = OEdge(0);
    const AB: OEdge = OEdge(1);
    const B: OEdge = OEdge(2);
    const BB: OEdge = OEdge(3);
    const E: OEdge = OEdge(0);
    const EB: OEdge = OEdge(1);

    fn c(m: i32) -> Elem {
        Elem::word(&vec![m.signum(); m.unsigned_abs() as usize])
    }

    #[test]
    fn reduce_examples() {
        let g = ex3();
        let p = Path { start: 0, decs: vec![c(0), c(0), c(0)], edges: vec![E, EB] };
        assert!(p.reduce(&g).is_empty());

        let g2 = ex2();
        let s = Elem::Fin(1);
        let p = Path { start: 0, decs: vec![Elem::Fin(0), s, Elem::Fin(0)], edges: vec![E, EB] };
        assert_eq!(p.reduce(&g2), p);

        let r = rose2();
        let p = Path::plain(&r, &[A, B, AB, A, BB]);
        assert_eq!(p.reduce(&r), Path::plain(&r, &[A]));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let g = ex3();
        let l = Loop { items: vec![(c(0), E), (c(1), EB)] };
        assert_eq!(l.cyclic_reduce(&g), Class::Elliptic { vertex: 0, elem: c(1) });

        let r = rose2();
        let ab = Loop::plain(&r, &[A, B]);
        assert_eq!(ab.cyclic_reduce(&r), Class::Loop(ab.clone()));

        let conj = Loop::plain(&r, &[AB, A, B, A, AB]);
        let red = conj.cyclic_reduce(&r);
        assert_eq!(red, Class::Loop(Loop::plain(&r, &[B])));
    }

    #[test]
    fn turns_crossed_examples() {
        let r = rose2();
        let ab = Loop::plain(&r, &[A, B]);
        assert_eq!(
            ab.turns_crossed(&r).unwrap(),
            vec![Turn::plain(&r, BB, A), Turn::plain(&r, AB, B)]
        );

        let g = ex3();
        let ce = Loop { items: vec![(c(1), E)] };
        let t = ce.turns_crossed(&g).unwrap();
        assert_eq!(t, vec![Turn::new(&g, EB, &c(0), E, &c(1))]);

        let ece = Loop { items: vec![(c(0), E), (c(1), E)] };
        let t = ece.turns_crossed(&g).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains(&Turn::new(&g, EB, &c(0), E, &c(1))));
        assert!(t.contains(&Turn::plain(&g, EB, E)));
    }

    #[test]
    fn crossing_counts() {
        let r = rose2();
        let ab = Loop::plain(&r, &[A, B]);
        let abab = Loop::plain(&r, &[A, B, A, B]);
        assert_eq!(crossing_count(&r, &ab, &Turn::plain(&r, AB, B)), 1);
        assert_eq!(crossing_count(&r, &ab, &Turn::plain(&r, AB, BB)), 0);
        assert_eq!(crossing_count(&r, &abab, &Turn::plain(&r, AB, B)), 2);
    }

    #[test]
    fn lengths() {
        let r = rose2();
        assert_eq!(Loop::plain(&r, &[A, B]).length(&Metric::unit(2)), q(2, 1));
        let m = Metric(vec![q(1, 1), q(13, 21)]);
        assert_eq!(Loop::plain(&r, &[A, B, A]).length(&m), q(2, 1) + q(13, 21));
        let g = ex3();
        let l = Loop { items: vec![(c(0), E), (c(1), EB)] };
        assert_eq!(class_length(&l.cyclic_reduce(&g), &Metric::unit(1)), q(0, 1));
    }

    #[test]
    fn inverse_loop_is_cyclic_inverse() {
        let g = ex3();
        let l = Loop { items: vec![(c(1), E), (c(2), E), (c(-1), E)] };
        let li = l.inverse(&g);
        li.check(&g).unwrap();
        let rev = Loop::from_closed_path(&g, &l.to_path(&g).reverse(&g)).unwrap();
        assert_eq!(li.canonical_rotation(), rev.canonical_rotation());
        assert_eq!(li.inverse(&g).canonical_rotation(), l.canonical_rotation());
    }

    fn arb_rose_path(max: usize) -> impl Strategy<Value = Vec<OEdge>> {
        proptest::collection::vec((0u32..4).prop_map(OEdge), 1..max)
    }

    fn arb_ex3_loop() -> impl Strategy<Value = Loop> {
        proptest::collection::vec((-3i32..=3, 0u32..2), 1..8)
            .prop_map(|v| Loop { items: v.into_iter().map(|(m, e)| (c(m), OEdge(e))).collect() })
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent_and_cancels_inverse(es in arb_rose_path(12)) {
            let r = rose2();
            let p = Path::plain(&r, &es);
            let red = p.reduce(&r);
            prop_assert!(red.is_reduced(&r));
            prop_assert_eq!(red.reduce(&r), red.clone());
            let pp = p.concat(&r, &p.reverse(&r));
            prop_assert!(pp.reduce(&r).is_empty());
        }

        #[test]
        fn decorated_reduce_cancels_inverse(l in arb_ex3_loop()) {
            let g = ex3();
            let p = l.to_path(&g);
            prop_assert!(p.concat(&g, &p.reverse(&g)).reduce(&g).is_empty());
            prop_assert!(p.reverse(&g).reverse(&g) == p);
        }

        #[test]
        fn cyclic_reduce_fixed_points(l in arb_ex3_loop()) {
            let g = ex3();
            match l.cyclic_reduce(&g) {
                Class::Loop(r) => {
                    prop_assert!(r.is_cyclically_reduced(&g));
                    prop_assert_eq!(r.cyclic_reduce(&g), Class::Loop(r.clone()));
                    let total: usize = {
                        let mut ts = r.turns_raw(&g);
                        ts.sort();
                        ts.dedup();
                        ts.iter().map(|t| crossing_count(&g, &r, t)).sum()
                    };
                    prop_assert_eq!(total, r.len());
                }
                Class::Elliptic { .. } => {}
            }
            if l.is_cyclically_reduced(&g) {
                prop_assert_eq!(l.cyclic_reduce(&g), Class::Loop(l.clone()));
            }
        }

        #[test]
        fn conjugation_preserves_class(l in arb_ex3_loop(), h in -3i32..=3) {
            let g = ex3();
            let canon = |x: &Loop| match x.cyclic_reduce(&g) {
                Class::Loop(r) => Class::Loop(r.canonical_rotation()),
                e => e,
            };
            let p = Path::point(0, c(h)).concat(&g, &l.to_path(&g)).right_mul(&g, &c(-h));
            let back = Loop::from_closed_path(&g, &p).unwrap();
            prop_assert_eq!(canon(&back), canon(&l));
        }

        #[test]
        fn turn_canonicalization_is_diagonal_invariant(a in 0u32..2, b in 0u32..2, x in -3i32..=3, y in -3i32..=3, h in -3i32..=3) {
            let g = ex3();
            let grp = g.group(0);
            let t1 = Turn::new(&g, OEdge(a), &c(x), OEdge(b), &c(y));
            let t2 = Turn::new(&g, OEdge(a), &grp.mul(&c(h), &c(x)), OEdge(b), &grp.mul(&c(h), &c(y)));
            let t3 = Turn::new(&g, OEdge(b), &c(y), OEdge(a), &c(x));
            prop_assert_eq!(&t1, &t2);
            prop_assert_eq!(&t1, &t3);
        }
    }

    #[test]
    fn turn_canonicalization_exhaustive_finite() {
        let g = ex2();
        let els = g.group(0).elements().unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for x in &els {
                    for y in &els {
                        let t = Turn::new(&g, OEdge(a), x, OEdge(b), y);
                        for h in &els {
                            let grp = g.group(0);
                            let t2 = Turn::new(&g, OEdge(a), &grp.mul(h, x), OEdge(b), &grp.mul(h, y));
                            assert_eq!(t, t2);
                        }
                        assert_eq!(t, Turn::new(&g, OEdge(b), y, OEdge(a), x));
                    }
                }
            }
        }
    }
}
