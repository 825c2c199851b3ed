//! Displacement of the automorphism: candidate loops, exact values at a
//! point, the infimum over a simplex, an exhaustive oracle and the
//! quantitative bounds used by the explorer.

mod bounds;
mod oracle;
mod simplex;

pub use bounds::{bounds_report, centre, dimension, BoundCheck, BoundsReport};
pub use oracle::{oracle_lambda, OracleResult};
pub use simplex::{default_tol, lambda_simplex, lambda_simplex_with, SimplexResult, BOUNDARY_THRESHOLD};

use std::fmt;

use num::{One, Zero};

use crate::error::{precondition, Result};
use crate::graph::{ChosenElements, Graph, Metric, Q};
use crate::group::Elem;
use crate::map::{GraphMap, MarkedPoint};
use crate::path::{class_length, Class, Loop};
use crate::surgery::enumerate_loops;

/// Default node budget for candidate enumeration.
pub const CANDIDATE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidatePolicy {
    Sausage,
    ADeltaExtended,
    User,
}

impl fmt::Display for CandidatePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidatePolicy::Sausage => "sausage-shape",
            CandidatePolicy::ADeltaExtended => "A_Delta-extended",
            CandidatePolicy::User => "user",
        })
    }
}

/// Metric-independent loops used to evaluate displacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub loops: Vec<Loop>,
    pub policy: CandidatePolicy,
    /// Decorations allowed at each vertex.
    pub decorations: Vec<Vec<Elem>>,
}

/// Decorations at each vertex: every element of a finite group; for an
/// infinite group the identity, `h_v^{±1}`, the extra elements and every
/// decoration of the representative at that vertex, closed under inverses.
pub fn decoration_policy(g: &Graph, h: &ChosenElements, extra: &[(usize, Elem)], rep: Option<&GraphMap>) -> Vec<Vec<Elem>> {
    let mut out = Vec::with_capacity(g.n_vertices());
    for v in 0..g.n_vertices() {
        let grp = g.group(v);
        if let Some(all) = grp.elements() {
            out.push(all);
            continue;
        }
        let mut seeds = vec![grp.identity()];
        if let Some(x) = h.get(v) {
            seeds.push(x.clone());
        }
        seeds.extend(extra.iter().filter(|(u, _)| *u == v).map(|(_, x)| x.clone()));
        if let Some(f) = rep {
            for p in &f.images {
                let mut at = p.start;
                for (j, d) in p.decs.iter().enumerate() {
                    if j > 0 {
                        at = f.cod.terminus(p.edges[j - 1]);
                    }
                    if at == v {
                        seeds.push(d.clone());
                    }
                }
            }
        }
        let mut set: Vec<Elem> = Vec::new();
        for x in seeds {
            for y in [grp.invert(&x), x] {
                if !set.contains(&y) {
                    set.push(y);
                }
            }
        }
        set.sort();
        let id = grp.identity();
        set.retain(|x| *x != id);
        set.insert(0, id);
        out.push(set);
    }
    out
}

/// Sausage-shaped loops: each unoriented edge crossed at most twice,
/// decorated by the policy.
pub fn candidate_loops(g: &Graph, h: &ChosenElements, extra: &[(usize, Elem)], rep: Option<&GraphMap>) -> Result<CandidateSet> {
    let decorations = decoration_policy(g, h, extra, rep);
    let decs = |v: usize| decorations[v].clone();
    let loops = enumerate_loops(g, 2, &decs, None, Some(CANDIDATE_BUDGET))?;
    let policy = if extra.is_empty() { CandidatePolicy::Sausage } else { CandidatePolicy::User };
    Ok(CandidateSet { loops, policy, decorations })
}

/// Candidates of a marked point under the default policy.
pub fn point_candidates(x: &MarkedPoint) -> Result<CandidateSet> {
    candidate_loops(&x.graph, &x.chosen, &[], Some(&x.map))
}

/// Edge-count rows of a candidate and of its image class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub index: usize,
    pub image: Vec<u64>,
    pub source: Vec<u64>,
}

pub fn rows(f: &GraphMap, c: &CandidateSet) -> Vec<Row> {
    let n = f.cod.n_edges();
    c.loops
        .iter()
        .enumerate()
        .map(|(index, l)| {
            let image = match f.image_loop(l) {
                Class::Loop(r) => r.edge_counts(n),
                Class::Elliptic { .. } => vec![0; n],
            };
            Row { index, image, source: l.edge_counts(f.dom.n_edges()) }
        })
        .collect()
}

pub(crate) fn dot(counts: &[u64], m: &Metric) -> Q {
    counts.iter().zip(&m.0).fold(Q::zero(), |acc, (&c, l)| acc + l * Q::from_integer(c.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisplacementResult {
    pub value: Q,
    pub witness: Loop,
    pub witness_image: Class,
    pub candidates: usize,
}

/// Exact displacement at a point: the largest stretch of a candidate loop.
pub fn lambda_point(x: &MarkedPoint) -> Result<DisplacementResult> {
    let c = point_candidates(x)?;
    lambda_point_with(x, &c)
}

pub fn lambda_point_with(x: &MarkedPoint, c: &CandidateSet) -> Result<DisplacementResult> {
    let mut best: Option<(Q, usize)> = None;
    for (i, l) in c.loops.iter().enumerate() {
        let img = x.map.image_loop(l);
        if matches!(img, Class::Elliptic { .. }) {
            continue;
        }
        let r = class_length(&img, &x.metric) / l.length(&x.metric);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, i));
        }
    }
    let Some((value, i)) = best else {
        return precondition("no candidate loop has a hyperbolic image");
    };
    let witness = c.loops[i].clone();
    let witness_image = x.map.image_loop(&witness);
    Ok(DisplacementResult { value, witness, witness_image, candidates: c.loops.len() })
}

/// Largest ratio `L_Y([p(γ)]) / L_X(γ)` over the domain candidates.
pub fn stretch_between(p: &GraphMap, x: &Metric, y: &Metric, c: &CandidateSet) -> Result<(Q, Loop)> {
    let mut best: Option<(Q, usize)> = None;
    for (i, l) in c.loops.iter().enumerate() {
        let r = class_length(&p.image_loop(l), y) / l.length(x);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, i));
        }
    }
    best.map(|(r, i)| (r, c.loops[i].clone()))
        .ok_or_else(|| crate::Error::Precondition("empty candidate set".into()))
}

/// Displacement at `steps + 1` evenly spaced points of the segment from
/// `x` to `y` inside the closure of one simplex.
pub fn segment_profile(x: &MarkedPoint, y: &Metric, steps: usize) -> Result<Vec<Q>> {
    if y.0.len() != x.metric.0.len() {
        return precondition("endpoints do not lie in a common simplex");
    }
    if steps == 0 {
        return precondition("a profile needs at least one step");
    }
    let c = point_candidates(x)?;
    let rs = rows(&x.map, &c);
    let n = Q::from_integer((steps as i64).into());
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = Q::from_integer((k as i64).into()) / &n;
        let m = Metric(x.metric.0.iter().zip(&y.0).map(|(a, b)| a * (Q::one() - &t) + b * &t).collect());
        out.push(max_ratio(&rs, &m).ok_or_else(|| crate::Error::Precondition("degenerate point on the segment".into()))?);
    }
    Ok(out)
}

/// Largest row ratio at a metric; rows whose loop has zero length are ignored.
pub(crate) fn max_ratio(rs: &[Row], m: &Metric) -> Option<Q> {
    let mut best: Option<Q> = None;
    for r in rs {
        let den = dot(&r.source, m);
        if den.is_zero() {
            continue;
        }
        let v = dot(&r.image, m) / den;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best
}
