use num::Zero;

use crate::error::{Error, Result};
use crate::graph::{OEdge, Q};
use crate::group::Elem;
use crate::map::MarkedPoint;
use crate::path::{class_length, Class, Loop, Path};

use super::decoration_policy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub value: Q,
    pub witness: Loop,
    pub nodes: u64,
}

struct Search<'a> {
    x: &'a MarkedPoint,
    decs: Vec<Vec<Elem>>,
    lmax: usize,
    budget: u64,
    nodes: u64,
    lip: Q,
    longest: Q,
    best: Option<(Q, Loop)>,
}

/// Largest stretch over every cyclically reduced loop with at most `lmax`
/// edges and decorations from the candidate policy, by depth-first search.
/// A prefix is abandoned only when no completion can beat the best value.
pub fn oracle_lambda(x: &MarkedPoint, lmax: usize, budget: u64) -> Result<OracleResult> {
    let g = &x.graph;
    let decs = decoration_policy(g, &x.chosen, &[], Some(&x.map));
    let st = x.stretch();
    let longest = x.metric.0.iter().cloned().fold(Q::zero(), |a, b| if b > a { b } else { a });
    let mut s = Search { x, decs, lmax: 0, budget, nodes: 0, lip: st.lip, longest, best: None };
    // deepening the length bound finds good loops early, which sharpens pruning
    for depth in 1..=lmax {
        s.lmax = depth;
        for e0 in g.oedges() {
            for d0 in s.decs[g.origin(e0)].clone() {
                let item = (d0, e0);
                let img = piece(x, &item);
                let len = x.metric.len(e0).clone();
                let mut items = vec![item];
                s.extend(&mut items, img, len)?;
            }
        }
    }
    let nodes = s.nodes;
    match s.best {
        Some((value, witness)) => Ok(OracleResult { value, witness, nodes }),
        None => Err(Error::Precondition("no loop with a hyperbolic image within the length bound".into())),
    }
}

/// Reduced image of one decorated edge.
fn piece(x: &MarkedPoint, (d, e): &(Elem, OEdge)) -> Path {
    let f = &x.map;
    let v = x.graph.origin(*e);
    Path::point(f.vmap[v], f.apply_elem(v, d)).concat(&f.cod, &f.image_oedge(*e)).reduce(&f.cod)
}

fn key(it: &(Elem, OEdge)) -> (OEdge, &Elem) {
    (it.1, &it.0)
}

impl Search<'_> {
    fn extend(&mut self, items: &mut Vec<(Elem, OEdge)>, img: Path, len: Q) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("oracle exceeded {} nodes", self.budget)));
        }
        let g = &self.x.graph;
        let m = &self.x.metric;
        let first = items[0].clone();
        let last = items.last().unwrap().1;
        let v = g.terminus(last);
        if v == g.origin(first.1) {
            let l = Loop { items: items.clone() };
            if l.is_cyclically_reduced(g) {
                let c = self.x.map.image_loop(&l);
                if !matches!(c, Class::Elliptic { .. }) {
                    let r = class_length(&c, m) / &len;
                    if self.best.as_ref().is_none_or(|(b, _)| r > *b) {
                        self.best = Some((r, l));
                    }
                }
            }
        }
        let rest = self.lmax - items.len();
        if rest == 0 {
            return Ok(());
        }
        if let Some((b, _)) = &self.best {
            let a = img.length(m);
            let y = &self.longest * Q::from_integer((rest as i64).into());
            let now = &a / &len;
            let later = (&a + &self.lip * &y) / (&len + &y);
            let bound = if now > later { now } else { later };
            if bound <= *b {
                return Ok(());
            }
        }
        for e in g.star(v) {
            for d in self.decs[v].clone() {
                let it = (d, e);
                if key(&it) < key(&first) {
                    continue;
                }
                if e == last.rev() && g.group(v).is_identity(&it.0) {
                    continue;
                }
                let next = img.concat(&self.x.map.cod, &piece(self.x, &it)).reduce(&self.x.map.cod);
                let nlen = &len + m.len(e);
                items.push(it);
                self.extend(items, next, nlen)?;
                items.pop();
            }
        }
        Ok(())
    }
}
