use num::{BigInt, One};

use crate::error::Result;
use crate::graph::{Graph, Metric, Q};
use crate::map::MarkedPoint;

use super::lambda_point;

/// The point of the same simplex with all edges of length one.
pub fn centre(x: &MarkedPoint) -> MarkedPoint {
    x.with_metric(Metric::unit(x.graph.n_edges()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

impl BoundCheck {
    fn new(name: impl Into<String>, lhs: Q, rhs: Q) -> BoundCheck {
        let holds = lhs <= rhs;
        BoundCheck { name: name.into(), lhs, rhs, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    /// Largest edge count of a graph in the space, `3n − 3 + 2k`.
    pub d: u64,
    /// Largest order of a finite vertex group, or 1.
    pub m: u64,
    pub k: u64,
    pub centre: Q,
    pub neighbour_centre: Option<Q>,
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `3·rank − 3 + 2·(non-free vertices)`, at least the edge count of `g`.
pub fn dimension(g: &Graph) -> u64 {
    let n = g.rank() as i64;
    let k = g.nonfree_vertices().len() as i64;
    (3 * n - 3 + 2 * k).max(g.n_edges() as i64).max(1) as u64
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Evaluates the three quantitative bounds at the centre of the simplex of
/// `x`. `lambda` must not exceed the true minimal displacement; `neighbour`
/// is an adjacent simplex and `critical` the number of candidate critical turns.
pub fn bounds_report(x: &MarkedPoint, neighbour: Option<&MarkedPoint>, lambda: &Q, critical: Option<usize>) -> Result<BoundsReport> {
    let d = dimension(&x.graph);
    let m = x.graph.max_finite_order().max(1) as u64;
    let k = d + m + 1;
    let lc = lambda_point(&centre(x))?.value;
    let qd = Q::from_integer(d.into());
    let mut checks = Vec::new();
    let mut neighbour_centre = None;
    if let Some(y) = neighbour {
        let ln = lambda_point(&centre(y))?.value;
        let two_d = Q::from_integer(2.into()) * &qd;
        checks.push(BoundCheck::new("fold step: λ(X_Δ') ≤ 2D·λ(X_Δ)", ln.clone(), &two_d * &lc));
        checks.push(BoundCheck::new("fold step: λ(X_Δ) ≤ 2D·λ(X_Δ')", lc.clone(), &two_d * &ln));
        neighbour_centre = Some(ln);
    }
    if let Some(c) = critical {
        let rhs = Q::from_integer(factorial(10 * k)) * &lc;
        checks.push(BoundCheck::new("critical count: |C_C(Δ)| ≤ (10K)!·λ(X_Δ)", Q::from_integer((c as i64).into()), rhs));
    }
    let rhs = Q::from_integer(9.into()) * &qd * num::pow(lambda.clone(), (3 * d + 2) as usize);
    checks.push(BoundCheck::new("irreducible centre: λ(X_Δ) ≤ 9D·λ^(3D+2)", lc.clone(), rhs));
    Ok(BoundsReport { d, m, k, centre: lc, neighbour_centre, checks })
}
