//! Candidate-critical and simplex-critical turns, the effective
//! regular-turn filter and single fold comparisons.

use std::collections::BTreeMap;

use crate::displacement::lambda_point;
use crate::error::{Error, Result};
use crate::graph::{Graph, OEdge, Q};
use crate::group::Elem;
use crate::legality::{illegal_turns, is_train_track, legal_loop_through_turn, turn_legality, Certified, Legality, Mode};
use crate::map::{GraphMap, MarkedPoint, TurnImage};
use crate::moves::fold_turn;
use crate::path::{Class, Loop, Path, Turn, TurnKind};
use crate::surgery::a_delta_decorations;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Free,
    FiniteVertex,
    /// Crossed by the image of this loop of `A_Δ`.
    ADeltaImage(Loop),
    /// Illegal for the representative, which is a train track.
    Illegal,
    /// Illegal for a representative not certified to be a train track.
    IllegalUncertified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalTurnSet {
    /// Explicit members, each with its first provenance.
    pub turns: BTreeMap<Turn, Provenance>,
    /// The search over `A_Δ` was cut short, or illegal turns come from a
    /// representative not certified as a train track.
    pub uncertain: bool,
    pub train_track: Option<bool>,
    /// Nodes visited by the search over `A_Δ`.
    pub nodes: u64,
}

impl CriticalTurnSet {
    /// Membership; free and finite non-free turns belong by their kind.
    pub fn contains(&self, g: &Graph, t: &Turn) -> bool {
        t.kind(g) != TurnKind::InfiniteNonFree || self.turns.contains_key(t)
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    pub fn candidate_part(&self) -> impl Iterator<Item = &Turn> {
        self.turns
            .iter()
            .filter(|(_, p)| !matches!(p, Provenance::Illegal | Provenance::IllegalUncertified))
            .map(|(t, _)| t)
    }

    fn add(&mut self, t: Turn, p: Provenance) {
        self.turns.entry(t).or_insert(p);
    }
}

/// Every non-trivial turn at vertices with trivial or finite group.
pub fn finite_turns(g: &Graph) -> Vec<Turn> {
    let mut out = Vec::new();
    for v in 0..g.n_vertices() {
        let grp = g.group(v);
        let Some(elems) = grp.elements() else { continue };
        let st = g.star(v);
        for (i, &a) in st.iter().enumerate() {
            for &b in &st[i..] {
                for h in &elems {
                    let t = Turn::new(g, a, &grp.identity(), b, h);
                    if !t.is_trivial(g) && !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Default node budget for the search over `A_Δ`.
pub const A_DELTA_BUDGET: u64 = 20_000_000;

/// `C_C(Δ)`: free and finite non-free turns, and every turn crossed by the
/// image of a loop of `A_Δ`.
pub fn candidate_critical_turns(x: &MarkedPoint) -> CriticalTurnSet {
    candidate_critical_turns_within(x, A_DELTA_BUDGET)
}

/// As [`candidate_critical_turns`]; when the search over `A_Δ` exceeds
/// `budget` nodes the set found so far is returned with `uncertain` set.
pub fn candidate_critical_turns_within(x: &MarkedPoint, budget: u64) -> CriticalTurnSet {
    let g = &x.graph;
    let mut set = CriticalTurnSet { turns: BTreeMap::new(), uncertain: false, train_track: None, nodes: 0 };
    for t in finite_turns(g) {
        let p = if t.kind(g) == TurnKind::Free { Provenance::Free } else { Provenance::FiniteVertex };
        set.add(t, p);
    }
    let infinite = g.nonfree_vertices().into_iter().any(|v| g.group(v).elements().is_none());
    if !infinite {
        return set;
    }
    let decs: Vec<Vec<Elem>> = (0..g.n_vertices()).map(a_delta_decorations(g, &x.chosen)).collect();
    let pieces = g
        .oedges()
        .map(|e| decs[g.origin(e)].iter().map(|d| piece(x, d, e)).collect())
        .collect();
    let mut s = ImageSearch {
        x,
        decs,
        pieces,
        counts: vec![0; g.n_edges()],
        nodes: 0,
        budget,
        found: BTreeMap::new(),
    };
    let complete = s.run().is_ok();
    for (t, l) in s.found {
        set.add(t, Provenance::ADeltaImage(l));
    }
    set.uncertain = !complete;
    set.nodes = s.nodes;
    set
}

/// Reduced image of the decorated edge `d e`.
fn piece(x: &MarkedPoint, d: &Elem, e: OEdge) -> Path {
    let f = &x.map;
    let v = x.graph.origin(e);
    Path::point(f.vmap[v], f.apply_elem(v, d)).concat(&f.cod, &f.image_oedge(e)).reduce(&f.cod)
}

/// Depth-first search over rooted loops of `A_Δ`, carrying the reduced image
/// of each prefix.
struct ImageSearch<'a> {
    x: &'a MarkedPoint,
    decs: Vec<Vec<Elem>>,
    /// Reduced image of each decorated oriented edge, by decoration index.
    pieces: Vec<Vec<Path>>,
    counts: Vec<u64>,
    nodes: u64,
    budget: u64,
    found: BTreeMap<Turn, Loop>,
}

impl ImageSearch<'_> {
    fn run(&mut self) -> Result<()> {
        let g = &self.x.graph;
        for e0 in g.oedges() {
            for (i, d0) in self.decs[g.origin(e0)].clone().into_iter().enumerate() {
                let it = (d0, e0);
                let img = self.pieces[e0.0 as usize][i].clone();
                self.counts[e0.edge()] += 1;
                let mut items = vec![it];
                let r = self.extend(&mut items, img);
                self.counts[e0.edge()] -= 1;
                r?;
            }
        }
        Ok(())
    }

    fn extend(&mut self, items: &mut Vec<(Elem, OEdge)>, img: Path) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("A_Δ search exceeded {} nodes", self.budget)));
        }
        let g = &self.x.graph;
        let cod = &self.x.map.cod;
        let first = items[0].clone();
        let last = items.last().unwrap().1;
        let v = g.terminus(last);
        if v == g.origin(first.1) {
            let closes = !(first.1 == last.rev() && g.group(v).is_identity(&first.0));
            if closes {
                if let Some(Class::Loop(r)) = Loop::from_closed_path(cod, &img).map(|c| c.cyclic_reduce(cod)) {
                    for t in r.turns_raw(cod) {
                        if !t.is_trivial(cod) && !self.found.contains_key(&t) {
                            self.found.insert(t, Loop { items: items.clone() });
                        }
                    }
                }
            }
        }
        for e in g.star(v) {
            if self.counts[e.edge()] >= 4 {
                continue;
            }
            for (i, d) in self.decs[v].clone().into_iter().enumerate() {
                let it = (d, e);
                if (it.1, &it.0) < (first.1, &first.0) {
                    continue;
                }
                if e == last.rev() && g.group(v).is_identity(&it.0) {
                    continue;
                }
                let next = img.concat(cod, &self.pieces[e.0 as usize][i]).reduce(cod);
                self.counts[e.edge()] += 1;
                items.push(it);
                let r = self.extend(items, next);
                items.pop();
                self.counts[e.edge()] -= 1;
                r?;
            }
        }
        Ok(())
    }
}

/// `C_Δ`: when the simplex meets the minset, `C_C` together with the illegal
/// turns of the representative; otherwise `C_C`.
pub fn simplex_critical_turns(x: &MarkedPoint, meets_minset: bool, kmax: usize) -> CriticalTurnSet {
    simplex_critical_turns_within(x, meets_minset, kmax, A_DELTA_BUDGET)
}

/// As [`simplex_critical_turns`] with a node budget for the search over `A_Δ`.
pub fn simplex_critical_turns_within(x: &MarkedPoint, meets_minset: bool, kmax: usize, budget: u64) -> CriticalTurnSet {
    let mut set = candidate_critical_turns_within(x, budget);
    if !meets_minset {
        return set;
    }
    let tt = is_train_track(&x.map, kmax);
    let certified = matches!(tt, Certified::Yes);
    set.train_track = Some(certified);
    set.uncertain |= !certified;
    let p = if certified { Provenance::Illegal } else { Provenance::IllegalUncertified };
    for t in illegal_turns(&x.map).turns {
        set.add(t, p.clone());
    }
    set
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    CertifiedRegular,
    PossiblyCritical(String),
}

/// Non-trivial turns at `v` with decorations from `decs`.
fn turns_with(g: &Graph, v: usize, decs: &[Elem]) -> Vec<Turn> {
    let st = g.star(v);
    let id = g.group(v).identity();
    let mut out = Vec::new();
    for (i, &a) in st.iter().enumerate() {
        for &b in &st[i..] {
            for h in decs {
                let t = Turn::new(g, a, &id, b, h);
                if !t.is_trivial(g) {
                    out.push(t);
                }
            }
        }
    }
    out
}

fn is_image_of(f: &GraphMap, sources: &[Turn], t: &Turn) -> bool {
    sources.iter().any(|s| f.image_turn(s) == TurnImage::Turn(t.clone()))
}

/// The five-condition test for a train track representative: a turn that is
/// none of free or finite, crossed by an edge image, the image of a free
/// turn, the image of a turn decorated by `H`, or illegal, is simplex regular.
pub fn effective_regular_filter(t: &Turn, x: &MarkedPoint) -> Regularity {
    let g = &x.graph;
    let f = &x.map;
    if t.kind(g) != TurnKind::InfiniteNonFree {
        return Regularity::PossiblyCritical("free or finite vertex group".into());
    }
    for (i, p) in f.images.iter().enumerate() {
        if p.turns(&f.cod).contains(t) {
            return Regularity::PossiblyCritical(format!("crossed by the image of {}", g.edges[i].name));
        }
    }
    let free: Vec<Turn> = finite_turns(g).into_iter().filter(|s| s.kind(g) == TurnKind::Free).collect();
    if is_image_of(f, &free, t) {
        return Regularity::PossiblyCritical("image of a free turn".into());
    }
    let mut h_turns = Vec::new();
    for v in g.nonfree_vertices() {
        let grp = g.group(v);
        let mut decs = vec![grp.identity()];
        if let Some(h) = x.chosen.get(v) {
            decs.push(h.clone());
            decs.push(grp.invert(h));
        }
        h_turns.extend(turns_with(g, v, &decs));
    }
    if is_image_of(f, &h_turns, t) {
        return Regularity::PossiblyCritical("image of a turn decorated by H".into());
    }
    if turn_legality(f, t, Mode::F) != Legality::Legal {
        return Regularity::PossiblyCritical("illegal".into());
    }
    Regularity::CertifiedRegular
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldComparison {
    pub before: Q,
    pub after: Q,
    pub candidate_regular: bool,
    /// Legal loop through the turn, when the turn is candidate regular.
    pub witness: Option<Loop>,
    /// Strict increase is predicted: regular, legal, inside the tension graph, `λ > 1`.
    pub strict_expected: bool,
}

/// Displacement before and after folding `t` by `amount`.
pub fn fold_and_compare(x: &MarkedPoint, t: &Turn, amount: &Q) -> Result<FoldComparison> {
    let g = &x.graph;
    let before = lambda_point(x)?.value;
    let (y, _) = fold_turn(x, t, amount)?;
    let after = lambda_point(&y)?.value;
    let cc = candidate_critical_turns(x);
    let candidate_regular = !cc.contains(g, t);
    let legal = turn_legality(&x.map, t, Mode::F) == Legality::Legal;
    let witness = if candidate_regular && legal { legal_loop_through_turn(x, t, Mode::F, 2).ok() } else { None };
    let tension = x.stretch().tension;
    let in_tension = tension.contains(&t.a.edge()) && tension.contains(&t.b.edge());
    let strict_expected = candidate_regular && legal && in_tension && before > Q::from_integer(1.into());
    Ok(FoldComparison { before, after, candidate_regular, witness, strict_expected })
}
