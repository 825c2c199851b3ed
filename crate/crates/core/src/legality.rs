//! Illegal turns, iterated legality, gates, train tracks and legal loops.

use std::collections::{BTreeSet, HashMap};

use crate::error::{precondition, Error, Result};
use crate::graph::{Graph, Metric, OEdge, Q};
use crate::group::{Elem, GroupHom, VertexGroup};
use crate::map::{GraphMap, MarkedPoint, TurnImage};
use crate::path::{Loop, Path, Turn, TurnKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Legality {
    Legal,
    /// `f^step` maps the turn to a trivial turn (step 0: the turn itself is trivial).
    Illegal { step: usize },
    Unresolved,
}

impl Legality {
    pub fn is_legal(self) -> bool {
        self == Legality::Legal
    }

    fn and(self, other: Legality) -> Legality {
        use Legality::*;
        match (self, other) {
            (Illegal { step: a }, Illegal { step: b }) => Illegal { step: a.min(b) },
            (Illegal { step }, _) | (_, Illegal { step }) => Illegal { step },
            (Unresolved, _) | (_, Unresolved) => Unresolved,
            _ => Legal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `∼_f`: the image turn is non-trivial.
    F,
    /// `⟨∼_{f^k}⟩`: every iterate of the turn is non-trivial.
    Fk { kmax: usize },
}

/// Default iteration bound: squared number of oriented germ pairs plus 16.
pub fn default_kmax(g: &Graph) -> usize {
    let pairs: usize = (0..g.n_vertices()).map(|v| g.valence(v) * g.valence(v)).sum();
    pairs * pairs + 16
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IllegalTurns {
    pub turns: Vec<Turn>,
    /// Germs whose edge is collapsed by the map.
    pub collapsed: Vec<OEdge>,
}

/// All `∼_f`-illegal non-trivial turns. For germs `a < b` with the same first
/// image edge the unique bad decoration solves `φ_v(g) d_b = d_a`.
pub fn illegal_turns(f: &GraphMap) -> IllegalTurns {
    let g = &f.dom;
    let mut turns = BTreeSet::new();
    let mut collapsed = Vec::new();
    for v in 0..g.n_vertices() {
        let star = g.star(v);
        let id = g.group(v).identity();
        let germs: Vec<Option<(Elem, OEdge)>> = star.iter().map(|&a| f.germ_image(&id, a)).collect();
        for (i, &a) in star.iter().enumerate() {
            if germs[i].is_none() {
                collapsed.push(a);
            }
        }
        let w = f.vmap[v];
        let cg = f.cod.group(w);
        for i in 0..star.len() {
            for j in i + 1..star.len() {
                if let (Some((da, ea)), Some((db, eb))) = (&germs[i], &germs[j]) {
                    if ea == eb {
                        let x = cg.mul(da, &cg.invert(db));
                        let gdec = f.preimage_elem(v, &x);
                        let t = Turn::new(g, star[i], &id, star[j], &gdec);
                        if !t.is_trivial(g) {
                            turns.insert(t);
                        }
                    }
                }
            }
        }
    }
    IllegalTurns { turns: turns.into_iter().collect(), collapsed }
}

/// Ordered decorated germ pair `(a, g·b)` with `a` undecorated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    a: OEdge,
    g: Elem,
    b: OEdge,
}

fn step(f: &GraphMap, s: &State) -> Option<State> {
    let v = f.dom.origin(s.a);
    let id = f.dom.group(v).identity();
    let (x, a) = f.germ_image(&id, s.a)?;
    let (y, b) = f.germ_image(&s.g, s.b)?;
    let grp = f.cod.group(f.vmap[v]);
    Some(State { a, g: grp.mul(&grp.invert(&x), &y), b })
}

fn is_trivial_state(g: &Graph, s: &State) -> bool {
    s.a == s.b && g.group_at(s.a).is_identity(&s.g)
}

fn rank_one_int(g: &Elem) -> i64 {
    match g {
        Elem::Word(w) => w.iter().map(|&l| l.signum() as i64).sum(),
        Elem::Fin(_) => 0,
    }
}

fn rank_one_sign(h: &GroupHom) -> Option<i64> {
    match h {
        GroupHom::Free { images, .. } if images.len() == 1 && images[0].len() == 1 => Some(images[0][0].signum() as i64),
        _ => None,
    }
}

/// Decides a periodic germ-pair orbit at rank-one vertices, where decorations
/// evolve by `m ↦ σ m + s` in `ℤ`.
fn drift_verdict(f: &GraphMap, cycle: &[State], offset: usize) -> Option<Legality> {
    let p = cycle.len();
    let mut affine = Vec::with_capacity(p);
    for s in cycle {
        let v = f.dom.origin(s.a);
        if !matches!(f.dom.group(v), VertexGroup::Free { rank: 1, .. }) {
            return None;
        }
        let sigma = rank_one_sign(&f.homs[v])?;
        let id = f.dom.group(v).identity();
        let (x, _) = f.germ_image(&id, s.a)?;
        let (y0, _) = f.germ_image(&id, s.b)?;
        affine.push((sigma, rank_one_int(&y0) - rank_one_int(&x)));
    }
    // composite over one full period starting from each phase
    for i in 0..p {
        let (mut sig, mut shift) = (1i64, 0i64);
        for k in 0..p {
            let (s2, t2) = affine[(i + k) % p];
            sig *= s2;
            shift = s2 * shift + t2;
        }
        if sig != 1 {
            return None;
        }
        let st = &cycle[i];
        if st.a != st.b {
            continue;
        }
        let m0 = rank_one_int(&st.g);
        if shift == 0 {
            if m0 == 0 {
                return Some(Legality::Illegal { step: offset + i });
            }
        } else if m0 % shift == 0 && -m0 / shift >= 0 {
            let j = (-m0 / shift) as usize;
            return Some(Legality::Illegal { step: offset + i + j * p });
        }
    }
    Some(Legality::Legal)
}

/// `⟨∼_{f^k}⟩`-legality by orbit iteration with cycle detection.
pub fn fk_legality(f: &GraphMap, t: &Turn, kmax: usize) -> Legality {
    let g = &f.dom;
    if t.is_trivial(g) {
        return Legality::Illegal { step: 0 };
    }
    let mut s = State { a: t.a, g: t.g.clone(), b: t.b };
    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut pairs: HashMap<(OEdge, OEdge), usize> = HashMap::new();
    let mut history: Vec<State> = Vec::new();
    for r in 0..=kmax {
        if r > 0 && is_trivial_state(g, &s) {
            return Legality::Illegal { step: r };
        }
        if seen.contains_key(&s) {
            return Legality::Legal;
        }
        if let Some(&r0) = pairs.get(&(s.a, s.b)) {
            // germ pairs are periodic from r0 with period r - r0
            if let Some(v) = drift_verdict(f, &history[r0..r], r0) {
                return v;
            }
        }
        seen.insert(s.clone(), r);
        pairs.entry((s.a, s.b)).or_insert(r);
        history.push(s.clone());
        match step(f, &s) {
            Some(n) => s = n,
            None => return Legality::Illegal { step: r + 1 },
        }
    }
    Legality::Unresolved
}

pub fn turn_legality(f: &GraphMap, t: &Turn, mode: Mode) -> Legality {
    match mode {
        Mode::F => {
            if t.is_trivial(&f.dom) {
                return Legality::Illegal { step: 0 };
            }
            match f.image_turn(t) {
                TurnImage::Turn(_) => Legality::Legal,
                _ => Legality::Illegal { step: 1 },
            }
        }
        Mode::Fk { kmax } => fk_legality(f, t, kmax),
    }
}

pub fn loop_legality(f: &GraphMap, l: &Loop, mode: Mode) -> Legality {
    l.turns_raw(&f.dom)
        .iter()
        .fold(Legality::Legal, |acc, t| acc.and(turn_legality(f, t, mode)))
}

pub fn path_legality(f: &GraphMap, p: &Path, mode: Mode) -> Legality {
    p.turns(&f.dom)
        .iter()
        .fold(Legality::Legal, |acc, t| acc.and(turn_legality(f, t, mode)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certified {
    Yes,
    No(String),
    Unresolved(String),
}

impl Certified {
    pub fn is_yes(&self) -> bool {
        matches!(self, Certified::Yes)
    }
}

/// Gate count at each vertex; non-free vertices have infinitely or at least
/// two gates and report `None`.
pub fn gates(f: &GraphMap, mode: Mode, edges: Option<&[usize]>) -> Result<Vec<Option<usize>>> {
    let g = &f.dom;
    let allowed = |e: OEdge| edges.is_none_or(|s| s.contains(&e.edge()));
    let mut out = Vec::new();
    for v in 0..g.n_vertices() {
        if !g.is_free_vertex(v) {
            out.push(None);
            continue;
        }
        let star: Vec<OEdge> = g.star(v).into_iter().filter(|&e| allowed(e)).collect();
        let mut parent: Vec<usize> = (0..star.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..star.len() {
            for j in i + 1..star.len() {
                match turn_legality(f, &Turn::plain(g, star[i], star[j]), mode) {
                    Legality::Legal => {}
                    Legality::Illegal { .. } => {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                    Legality::Unresolved => {
                        return Err(Error::Unresolved(format!(
                            "legality of [{}, {}]",
                            g.oedge_name(star[i]),
                            g.oedge_name(star[j])
                        )))
                    }
                }
            }
        }
        let roots: BTreeSet<usize> = (0..star.len()).map(|i| find(&mut parent, i)).collect();
        out.push(Some(roots.len()));
    }
    Ok(out)
}

/// Edge images are legal paths and every vertex has at least two gates.
pub fn is_train_track(f: &GraphMap, kmax: usize) -> Certified {
    let mode = Mode::Fk { kmax };
    let g = &f.dom;
    let mut unresolved = None;
    for (i, p) in f.images.iter().enumerate() {
        for t in p.turns(&f.cod) {
            match turn_legality(f, &t, mode) {
                Legality::Legal => {}
                Legality::Illegal { step } => {
                    return Certified::No(format!(
                        "image of {} crosses {} (trivial after {step} iterations)",
                        g.edges[i].name,
                        t.display(g)
                    ))
                }
                Legality::Unresolved => unresolved = Some(format!("turn {} in image of {}", t.display(g), g.edges[i].name)),
            }
        }
    }
    if let Some(u) = unresolved {
        return Certified::Unresolved(u);
    }
    match gates(f, mode, None) {
        Ok(gs) => {
            for (v, c) in gs.iter().enumerate() {
                if let Some(c) = c {
                    if *c < 2 {
                        return Certified::No(format!("vertex {} has a single gate", g.vertices[v].name));
                    }
                }
            }
            Certified::Yes
        }
        Err(e) => Certified::Unresolved(e.to_string()),
    }
}

/// Optimality against a given displacement value: Lip equals it and every
/// tension vertex is at least two-gated in the tension graph.
pub fn is_optimal(x: &MarkedPoint, lambda: &Q) -> Certified {
    let s = x.stretch();
    if &s.lip != lambda {
        return Certified::No(format!("Lip {} differs from displacement {}", s.lip, lambda));
    }
    match gates(&x.map, Mode::F, Some(&s.tension)) {
        Ok(gs) => {
            for e in &s.tension {
                for v in [x.graph.edges[*e].from, x.graph.edges[*e].to] {
                    if let Some(c) = gs[v] {
                        if c < 2 {
                            return Certified::No(format!("tension vertex {} is one-gated", x.graph.vertices[v].name));
                        }
                    }
                }
            }
            Certified::Yes
        }
        Err(e) => Certified::Unresolved(e.to_string()),
    }
}

/// Optimal, and every tension edge lies on an `f`-legal loop inside the tension graph.
pub fn is_minimal_optimal(x: &MarkedPoint, lambda: &Q) -> Certified {
    match is_optimal(x, lambda) {
        Certified::Yes => {}
        other => return other,
    }
    let s = x.stretch();
    for &e in &s.tension {
        if legal_loop_through(x, Through::Edge(OEdge::fwd(e)), Mode::F, Some(&s.tension)).is_err() {
            return Certified::No(format!("no legal loop in the tension graph through {}", x.graph.edges[e].name));
        }
    }
    Certified::Yes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Through {
    Edge(OEdge),
    Turn(Turn),
}

/// A legal loop crossing every oriented edge at most once and crossing `xi`,
/// with non-trivial decorations from the chosen elements.
pub fn legal_loop_through(x: &MarkedPoint, xi: Through, mode: Mode, edges: Option<&[usize]>) -> Result<Loop> {
    let g = &x.graph;
    let allowed = |e: OEdge| edges.is_none_or(|s| s.contains(&e.edge()));
    let decs = |v: usize| -> Vec<Elem> {
        let mut d = vec![g.group(v).identity()];
        if let Some(h) = x.chosen.get(v) {
            d.push(h.clone());
        }
        d
    };
    let (prefix, desc): (Vec<(Elem, OEdge)>, String) = match &xi {
        Through::Edge(e) => (vec![(g.group_at(*e).identity(), *e)], g.oedge_name(*e)),
        Through::Turn(t) => {
            if t.kind(g) != TurnKind::Free {
                return precondition("legal_loop_through takes edges or free turns");
            }
            if turn_legality(&x.map, t, mode) != Legality::Legal {
                return Err(Error::NotFound(format!("turn {} is not legal", t.display(g))));
            }
            let id = g.group_at(t.a).identity();
            (vec![(id.clone(), t.a.rev()), (t.g.clone(), t.b)], t.display(g))
        }
    };
    if prefix.iter().any(|(_, e)| !allowed(*e)) {
        return Err(Error::NotFound(format!("{desc} is outside the allowed subgraph")));
    }
    let mut used = vec![false; 2 * g.n_edges()];
    for (_, e) in &prefix {
        if used[e.0 as usize] {
            return Err(Error::NotFound(format!("no legal loop through {desc}")));
        }
        used[e.0 as usize] = true;
    }
    let mut items = prefix.clone();
    let mut found = None;
    search(x, mode, &allowed, &decs, &mut items, &mut used, &mut found);
    found.ok_or_else(|| Error::NotFound(format!("no legal loop through {desc}")))
}

#[allow(clippy::too_many_arguments)]
fn search(
    x: &MarkedPoint,
    mode: Mode,
    allowed: &dyn Fn(OEdge) -> bool,
    decs: &dyn Fn(usize) -> Vec<Elem>,
    items: &mut Vec<(Elem, OEdge)>,
    used: &mut Vec<bool>,
    found: &mut Option<Loop>,
) {
    if found.is_some() {
        return;
    }
    let g = &x.graph;
    let f = &x.map;
    let last = items.last().unwrap().1;
    let v = g.terminus(last);
    let start = items[0].1;
    if v == g.origin(start) {
        for d in decs(v) {
            let mut cand = items.clone();
            cand[0].0 = d;
            let l = Loop { items: cand };
            if l.is_cyclically_reduced(g) && loop_legality(f, &l, mode).is_legal() {
                *found = Some(l);
                return;
            }
        }
    }
    for e in g.star(v) {
        if used[e.0 as usize] || !allowed(e) {
            continue;
        }
        for d in decs(v) {
            let t = Turn::new(g, last.rev(), &g.group(v).identity(), e, &d);
            if !turn_legality(f, &t, mode).is_legal() {
                continue;
            }
            used[e.0 as usize] = true;
            items.push((d, e));
            search(x, mode, allowed, decs, items, used, found);
            items.pop();
            used[e.0 as usize] = false;
            if found.is_some() {
                return;
            }
        }
    }
}

/// Legal loop through a non-free turn `[a, g b]`, built by joining a legal
/// loop ending in `ā` with a legal loop starting with `b` and choosing the
/// closing decoration so that the closing turn is legal.
pub fn legal_loop_through_turn(x: &MarkedPoint, t: &Turn, mode: Mode, ladder: u32) -> Result<Loop> {
    let g = &x.graph;
    if t.kind(g) == TurnKind::Free {
        return precondition("legal_loop_through_turn needs a non-free turn");
    }
    if !turn_legality(&x.map, t, mode).is_legal() {
        return precondition(format!("turn {} is not certified legal", t.display(g)));
    }
    let la = legal_loop_through(x, Through::Edge(t.a), mode, None)?.inverse(g);
    let lb = legal_loop_through(x, Through::Edge(t.b), mode, None)?;
    let ra = la.items.iter().position(|(_, e)| *e == t.a.rev()).unwrap();
    let rb = lb.items.iter().position(|(_, e)| *e == t.b).unwrap();
    // la rotated so that it ends with ā; lb rotated so that it starts with b
    let la = la.rotate((ra + 1) % la.len());
    let lb = lb.rotate(rb);
    let v = t.vertex(g);
    let grp = g.group(v);
    let mut cands = vec![grp.identity()];
    cands.extend(grp.ladder(ladder));
    for h in cands {
        let mut items = la.items.clone();
        items[0].0 = h.clone();
        let mut tail = lb.items.clone();
        tail[0].0 = t.g.clone();
        items.extend(tail);
        let l = Loop { items };
        if l.check(g).is_ok() && l.is_cyclically_reduced(g) && loop_legality(&x.map, &l, mode).is_legal() {
            return Ok(l);
        }
    }
    Err(Error::NotFound(format!("no closing decoration makes a legal loop through {}", t.display(g))))
}

/// Stretch factor of a loop.
pub fn loop_stretch(f: &GraphMap, l: &Loop, m: &Metric) -> Q {
    crate::path::class_length(&f.image_loop(l), m) / l.length(m)
}
