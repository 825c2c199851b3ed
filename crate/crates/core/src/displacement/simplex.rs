use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Metric, Q};
use crate::lp::{solve, LpResult};
use crate::map::{stretch_data, MarkedPoint};
use crate::util::to_f64;

use super::{dot, point_candidates, rows, CandidateSet, Row};

/// Infimum of the displacement over the closed simplex of a marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexResult {
    pub lo: Q,
    pub hi: Q,
    /// Volume-one metric with displacement at most `hi`, as deep inside the
    /// simplex as the constraints allow.
    pub minimizer: Metric,
    /// No point at level `hi` keeps every length above the boundary threshold.
    pub boundary: bool,
    /// Candidate index attaining the maximum at the minimizer.
    pub witness: usize,
    pub probes: usize,
}

impl SimplexResult {
    pub fn midpoint(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn contains(&self, v: &Q) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Relative tolerance `2⁻⁴⁰`.
pub fn default_tol() -> Q {
    Q::new(1.into(), num::BigInt::from(1u64 << 40))
}

/// A minimizer whose smallest length is below this is reported as a boundary minimizer.
pub const BOUNDARY_THRESHOLD: f64 = 1e-6;

pub fn lambda_simplex(x: &MarkedPoint, tol: &Q) -> Result<SimplexResult> {
    let c = point_candidates(x)?;
    lambda_simplex_with(x, &c, tol)
}

/// Bisection on λ; each probe decides `∃x ∈ simplex: a_γ·x ≤ λ b_γ·x ∀γ`
/// with an exact cutting-plane linear program.
pub fn lambda_simplex_with(x: &MarkedPoint, c: &CandidateSet, tol: &Q) -> Result<SimplexResult> {
    let rs: Vec<Row> = rows(&x.map, c).into_iter().filter(|r| r.image.iter().any(|&v| v > 0)).collect();
    if rs.is_empty() {
        return Err(Error::Precondition("no candidate loop has a hyperbolic image".into()));
    }
    let n = x.graph.n_edges();
    let bary = Metric(vec![Q::new(1.into(), (n as i64).into()); n]);
    let mut active = seed_rows(&rs, &bary);
    let mut probes = 0usize;
    let mut lo = Q::one();
    let mut hi = stretch_data(&x.map, &bary, &bary).lip;
    if hi < lo {
        hi = lo.clone();
    }
    probes += 1;
    if probe(&rs, &mut active, &lo)?.0 <= Q::zero() {
        hi = lo.clone();
    } else {
        probes += 1;
        if probe(&rs, &mut active, &hi)?.0 > Q::zero() {
            return Err(Error::Structural("displacement infeasible at the Lipschitz constant of the barycentre".into()));
        }
        let two = Q::from_integer(2.into());
        while &hi - &lo > tol * &lo {
            let mid = (&lo + &hi) / &two;
            probes += 1;
            if probe(&rs, &mut active, &mid)?.0 <= Q::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let (minimizer, depth) = deepest(&rs, &mut active, &hi, n)?;
    let boundary = to_f64(&depth) < BOUNDARY_THRESHOLD;
    let witness = argmax(&rs, &minimizer).map(|i| rs[i].index).unwrap_or(0);
    Ok(SimplexResult { lo, hi, minimizer, boundary, witness, probes })
}

fn seed_rows(rs: &[Row], m: &Metric) -> Vec<usize> {
    argmax(rs, m).into_iter().collect()
}

fn argmax(rs: &[Row], m: &Metric) -> Option<usize> {
    let mut best: Option<(Q, usize)> = None;
    for (i, r) in rs.iter().enumerate() {
        let den = dot(&r.source, m);
        if den.is_zero() {
            continue;
        }
        let v = dot(&r.image, m) / den;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, i));
        }
    }
    best.map(|(_, i)| i)
}

fn coeffs(r: &Row, lam: &Q) -> Vec<Q> {
    r.image
        .iter()
        .zip(&r.source)
        .map(|(&a, &b)| Q::from_integer(a.into()) - lam * Q::from_integer(b.into()))
        .collect()
}

fn value(r: &Row, lam: &Q, x: &[Q]) -> Q {
    coeffs(r, lam).iter().zip(x).fold(Q::zero(), |acc, (c, v)| acc + c * v)
}

/// Most violated row at `x` beyond `level`, if any.
fn violated(rs: &[Row], lam: &Q, x: &[Q], level: &Q) -> Option<usize> {
    let mut best: Option<(Q, usize)> = None;
    for (i, r) in rs.iter().enumerate() {
        let v = value(r, lam, x);
        if &v > level && best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, i));
        }
    }
    best.map(|(_, i)| i)
}

/// `min_x max_γ (a_γ − λ b_γ)·x` over the simplex, with a minimizer.
fn probe(rs: &[Row], active: &mut Vec<usize>, lam: &Q) -> Result<(Q, Vec<Q>)> {
    let n = rs[0].source.len();
    loop {
        // variables: x (n), t⁺, t⁻, one slack per active row
        let k = active.len();
        let width = n + 2 + k;
        let mut a = Vec::with_capacity(k + 1);
        let mut b = Vec::with_capacity(k + 1);
        for (j, &i) in active.iter().enumerate() {
            let mut row = coeffs(&rs[i], lam);
            row.resize(width, Q::zero());
            row[n] = -Q::one();
            row[n + 1] = Q::one();
            row[n + 2 + j] = Q::one();
            a.push(row);
            b.push(Q::zero());
        }
        let mut sum = vec![Q::zero(); width];
        for v in sum.iter_mut().take(n) {
            *v = Q::one();
        }
        a.push(sum);
        b.push(Q::one());
        let mut cost = vec![Q::zero(); width];
        cost[n] = Q::one();
        cost[n + 1] = -Q::one();
        let (y, t) = match solve(&a, &b, &cost) {
            LpResult::Optimal { y, value } => (y, value),
            other => return Err(Error::Structural(format!("feasibility program failed: {other:?}"))),
        };
        let x: Vec<Q> = y[..n].to_vec();
        match violated(rs, lam, &x, &t) {
            Some(i) if !active.contains(&i) => active.push(i),
            _ => return Ok((t, x)),
        }
    }
}

/// A point of the level set `{max ratio ≤ lam}` maximizing its smallest length.
fn deepest(rs: &[Row], active: &mut Vec<usize>, lam: &Q, n: usize) -> Result<(Metric, Q)> {
    loop {
        // variables: x (n), s, row slacks (k), coordinate slacks (n)
        let k = active.len();
        let width = n + 1 + k + n;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (j, &i) in active.iter().enumerate() {
            let mut row = coeffs(&rs[i], lam);
            row.resize(width, Q::zero());
            row[n + 1 + j] = Q::one();
            a.push(row);
            b.push(Q::zero());
        }
        for i in 0..n {
            let mut row = vec![Q::zero(); width];
            row[i] = Q::one();
            row[n] = -Q::one();
            row[n + 1 + k + i] = -Q::one();
            a.push(row);
            b.push(Q::zero());
        }
        let mut sum = vec![Q::zero(); width];
        for v in sum.iter_mut().take(n) {
            *v = Q::one();
        }
        a.push(sum);
        b.push(Q::one());
        let mut cost = vec![Q::zero(); width];
        cost[n] = -Q::one();
        let (y, s) = match solve(&a, &b, &cost) {
            LpResult::Optimal { y, value } => (y, -value),
            other => return Err(Error::Structural(format!("level-set program failed: {other:?}"))),
        };
        let x: Vec<Q> = y[..n].to_vec();
        match violated(rs, lam, &x, &Q::zero()) {
            Some(i) if !active.contains(&i) => active.push(i),
            Some(_) => return Err(Error::Structural("level-set program returned an infeasible point".into())),
            None => {
                debug_assert!(!s.is_negative());
                return Ok((Metric(x), s));
            }
        }
    }
}
