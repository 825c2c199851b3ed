//! Critical neighbourhoods of a simplex and the exploration of the minset
//! around a minimally displaced simplex.
//!
//! Simplices are identified through their marking: every entry carries a map
//! from the origin graph, and two entries are the same simplex when the edge
//! counts of the images of a fixed family of test loops agree up to a
//! relabelling of edges.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num::One;

use crate::critical::{finite_turns, simplex_critical_turns_within, CriticalTurnSet};
use crate::displacement::{centre, default_tol, dimension, lambda_simplex, point_candidates, SimplexResult};
use crate::error::{precondition, Error, Result};
use crate::graph::{Graph, Q};
use crate::legality::{default_kmax, is_train_track, Certified};
use crate::map::{GraphMap, MarkedPoint};
use crate::moves::{collapse_forest, fold_amount_bound, fold_turn};
use crate::path::{Class, Loop, Turn, TurnKind};

/// Relative width of the window around `λ(φ)` used for verdicts.
pub fn window() -> Q {
    Q::new(1.into(), 1_000_000.into())
}

/// The radius `2D²` of the critical neighbourhood containing every adjacent
/// minset simplex.
pub fn radius_bound(g: &Graph) -> u64 {
    let d = dimension(g);
    2 * d * d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreConfig {
    /// Defaults to [`radius_bound`] of the origin.
    pub radius: Option<u64>,
    pub max_entries: usize,
    pub tol: Q,
    pub kmax: Option<usize>,
    /// Node budget of each search over `A_Δ`.
    pub a_delta_budget: u64,
    /// Exponent bound of the decorations of sampled regular turns.
    pub ladder: u32,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            radius: None,
            max_entries: 500,
            tol: default_tol(),
            kmax: None,
            a_delta_budget: 2_000_000,
            ladder: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Fold { turn: String, amount: Q },
    Collapse { forest: Vec<String> },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Fold { turn, amount } => write!(f, "fold {turn} by {amount}"),
            Move::Collapse { forest } => write!(f, "collapse {{{}}}", forest.join(",")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    In,
    Out,
    BoundaryUncertain,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::In => "in",
            Verdict::Out => "out",
            Verdict::BoundaryUncertain => "boundary-uncertain",
        })
    }
}

/// Verdict for a simplex with infimum interval `s` against `λ(φ)`: `in` when
/// the interval meets the window and the infimum is attained inside the
/// open simplex, `boundary-uncertain` when it is only approached at a face.
pub fn verdict(s: &SimplexResult, lambda: &SimplexResult) -> Verdict {
    let w = window();
    let hi = &lambda.hi * (Q::one() + &w);
    if s.lo > hi {
        Verdict::Out
    } else if s.boundary {
        Verdict::BoundaryUncertain
    } else {
        Verdict::In
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodEntry {
    pub id: usize,
    pub parent: Option<usize>,
    pub path: Vec<Move>,
    /// The centre of the simplex, with the transported representative.
    pub point: MarkedPoint,
    /// Map from the origin graph realising the marking.
    pub marking: GraphMap,
    pub interval: Option<SimplexResult>,
    pub verdict: Option<Verdict>,
    /// Reached by folding a simplex-regular turn; the verdict is not computed.
    pub pruned: bool,
    /// Explicit members of `C_Δ`, when computed.
    pub critical: Option<usize>,
    pub uncertain: bool,
}

impl NeighborhoodEntry {
    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub entries: Vec<NeighborhoodEntry>,
    /// Moves between entries: source, target and the move.
    pub adjacency: Vec<(usize, usize, Move)>,
    pub radius: u64,
    pub lambda: Option<SimplexResult>,
    /// False when the entry budget stopped the search.
    pub complete: bool,
    pub test_loops: usize,
}

impl Neighborhood {
    pub fn in_set(&self) -> impl Iterator<Item = &NeighborhoodEntry> {
        self.entries.iter().filter(|e| e.verdict == Some(Verdict::In))
    }

    pub fn pruned(&self) -> impl Iterator<Item = &NeighborhoodEntry> {
        self.entries.iter().filter(|e| e.pruned)
    }
}

/// Edge counts of the images of the test loops, one column per edge,
/// columns sorted.
pub fn simplex_key(marking: &GraphMap, test: &[Loop]) -> Vec<Vec<u64>> {
    let n = marking.cod.n_edges();
    let mut cols = vec![Vec::with_capacity(test.len()); n];
    for l in test {
        let counts = match marking.image_loop(l) {
            Class::Loop(r) => r.edge_counts(n),
            Class::Elliptic { .. } => vec![0; n],
        };
        for (c, k) in cols.iter_mut().zip(counts) {
            c.push(k);
        }
    }
    cols.sort();
    cols
}

struct Explorer<'a> {
    cfg: &'a ExploreConfig,
    kmax: usize,
    test: Vec<Loop>,
    keys: BTreeMap<Vec<Vec<u64>>, usize>,
    nb: Neighborhood,
    sets: Vec<Option<CriticalTurnSet>>,
}

impl Explorer<'_> {
    /// Adds a simplex unless already present; returns its id and whether it is new.
    fn insert(&mut self, point: MarkedPoint, marking: GraphMap, parent: Option<usize>, mv: Option<Move>, pruned: bool) -> Result<(usize, bool)> {
        let key = simplex_key(&marking, &self.test);
        if let Some(&id) = self.keys.get(&key) {
            if let (Some(p), Some(m)) = (parent, mv) {
                self.nb.adjacency.push((p, id, m));
            }
            return Ok((id, false));
        }
        if self.nb.entries.len() >= self.cfg.max_entries {
            return Err(Error::Budget(format!("neighbourhood exceeded {} entries", self.cfg.max_entries)));
        }
        let id = self.nb.entries.len();
        let mut path = parent.map(|p| self.nb.entries[p].path.clone()).unwrap_or_default();
        if let (Some(p), Some(m)) = (parent, mv) {
            path.push(m.clone());
            self.nb.adjacency.push((p, id, m));
        }
        self.keys.insert(key, id);
        self.nb.entries.push(NeighborhoodEntry {
            id,
            parent,
            path,
            point: centre(&point),
            marking,
            interval: None,
            verdict: pruned.then_some(Verdict::Out),
            pruned,
            critical: None,
            uncertain: false,
        });
        self.sets.push(None);
        Ok((id, true))
    }

    fn evaluate(&mut self, id: usize) -> Result<()> {
        let x = self.nb.entries[id].point.clone();
        let mut meets = false;
        if let Some(lambda) = &self.nb.lambda {
            let s = lambda_simplex(&x, &self.cfg.tol)?;
            let v = verdict(&s, lambda);
            meets = v == Verdict::In;
            let e = &mut self.nb.entries[id];
            e.interval = Some(s);
            e.verdict = Some(v);
        }
        let cd = simplex_critical_turns_within(&x, meets, self.kmax, self.cfg.a_delta_budget);
        let e = &mut self.nb.entries[id];
        e.critical = Some(cd.len());
        e.uncertain = cd.uncertain;
        self.sets[id] = Some(cd);
        Ok(())
    }

    fn fold_from(&mut self, id: usize, t: &Turn, pruned: bool) -> Result<Option<usize>> {
        let x = self.nb.entries[id].point.clone();
        let amount = fold_amount_bound(&x, t) / Q::from_integer(2.into());
        let (y, rec) = fold_turn(&x, t, &amount)?;
        let marking = self.nb.entries[id].marking.then(&rec.q).tighten();
        let mv = Move::Fold { turn: t.display(&x.graph), amount };
        let (nid, new) = self.insert(y, marking, Some(id), Some(mv), pruned)?;
        Ok(new.then_some(nid))
    }

    fn faces(&mut self, id: usize, queue: &mut VecDeque<usize>) -> Result<()> {
        let x = self.nb.entries[id].point.clone();
        let n = x.graph.n_edges();
        for mask in 1u64..(1 << n) {
            let forest: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let Ok((y, rec)) = collapse_forest(&x, &forest) else { continue };
            let marking = self.nb.entries[id].marking.then(&rec.collapse).tighten();
            let names = forest.iter().map(|&i| x.graph.edges[i].name.clone()).collect();
            let (nid, new) = self.insert(y, marking, Some(id), Some(Move::Collapse { forest: names }), false)?;
            if new {
                queue.push_back(nid);
            }
        }
        Ok(())
    }

    fn run(&mut self, explore: bool) -> Result<()> {
        let mut queue = VecDeque::from([0usize]);
        let mut faces_done = !explore;
        while let Some(id) = queue.pop_front() {
            self.evaluate(id)?;
            if !faces_done {
                faces_done = true;
                self.faces(id, &mut queue)?;
            }
            let e = &self.nb.entries[id];
            if e.depth() as u64 >= self.nb.radius || (explore && e.verdict != Some(Verdict::In)) {
                continue;
            }
            let cd = self.sets[id].clone().expect("evaluated");
            let g = e.point.graph.clone();
            for t in foldable_turns(&g, &cd) {
                if let Some(nid) = self.fold_from(id, &t, false)? {
                    queue.push_back(nid);
                }
            }
            if explore && cd.train_track == Some(true) && !cd.uncertain {
                for t in regular_sample(&g, &cd, self.cfg.ladder) {
                    self.fold_from(id, &t, true)?;
                }
            }
        }
        Ok(())
    }
}

/// Non-degenerate members of `C_Δ`, including every free and finite non-free turn.
pub fn foldable_turns(g: &Graph, cd: &CriticalTurnSet) -> Vec<Turn> {
    let mut out: Vec<Turn> = finite_turns(g);
    out.extend(cd.turns.keys().cloned());
    out.sort();
    out.dedup();
    out.retain(|t| !t.is_degenerate() && !t.is_trivial(g));
    out
}

/// Infinite non-free turns outside `C_Δ` whose decoration lies on the ladder.
pub fn regular_sample(g: &Graph, cd: &CriticalTurnSet, ladder: u32) -> Vec<Turn> {
    let mut out = Vec::new();
    for v in g.nonfree_vertices() {
        let grp = g.group(v);
        if !grp.is_infinite() {
            continue;
        }
        let st = g.star(v);
        let id = grp.identity();
        let mut decs = vec![id.clone()];
        decs.extend(grp.ladder(ladder));
        for (i, &a) in st.iter().enumerate() {
            for &b in &st[i..] {
                for h in &decs {
                    let t = Turn::new(g, a, &id, b, h);
                    if t.kind(g) == TurnKind::InfiniteNonFree && !t.is_degenerate() && !t.is_trivial(g) && !cd.contains(g, &t) && !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn explorer<'a>(x0: &'a MarkedPoint, cfg: &'a ExploreConfig, radius: u64, lambda: Option<SimplexResult>) -> Result<Explorer<'a>> {
    let test = point_candidates(x0)?.loops;
    let nb = Neighborhood { entries: Vec::new(), adjacency: Vec::new(), radius, lambda, complete: true, test_loops: test.len() };
    let kmax = cfg.kmax.unwrap_or_else(|| default_kmax(&x0.graph));
    let mut ex = Explorer { cfg, kmax, test, keys: BTreeMap::new(), nb, sets: Vec::new() };
    ex.insert(x0.clone(), GraphMap::identity(&x0.graph), None, None, false)?;
    Ok(ex)
}

fn finish(mut ex: Explorer<'_>, explore: bool) -> Result<Neighborhood> {
    match ex.run(explore) {
        Ok(()) => {}
        Err(Error::Budget(_)) => ex.nb.complete = false,
        Err(e) => return Err(e),
    }
    Ok(ex.nb)
}

/// Simplices reachable from the simplex of `x0` by at most `radius`
/// simplex-critical folds. Without a value of `λ(φ)` the critical sets are
/// the candidate-critical ones.
pub fn critical_neighborhood(x0: &MarkedPoint, radius: u64, cfg: &ExploreConfig) -> Result<Neighborhood> {
    let ex = explorer(x0, cfg, radius, None)?;
    finish(ex, false)
}

/// Explores the minset around the simplex of `x0`, whose representative must
/// be a train track: the faces of the simplex and the critical neighbourhood
/// of radius `2D²`, expanding only simplices that meet the minset. Folds of
/// sampled simplex-regular turns are recorded as pruned `out` entries.
pub fn explore_minset(x0: &MarkedPoint, cfg: &ExploreConfig) -> Result<Neighborhood> {
    let kmax = cfg.kmax.unwrap_or_else(|| default_kmax(&x0.graph));
    match is_train_track(&x0.map, kmax) {
        Certified::Yes => {}
        Certified::No(why) => return precondition(format!("representative on the origin is not a train track: {why}")),
        Certified::Unresolved(why) => return Err(Error::Unresolved(why)),
    }
    let lambda = lambda_simplex(x0, &cfg.tol)?;
    if lambda.hi <= Q::one() + window() {
        return precondition("λ(φ) must exceed 1");
    }
    let radius = cfg.radius.unwrap_or_else(|| radius_bound(&x0.graph));
    let ex = explorer(x0, cfg, radius, Some(lambda))?;
    finish(ex, true)
}
