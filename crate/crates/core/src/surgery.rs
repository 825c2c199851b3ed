//! Turn-surgery, edge-surgery, edge-reduction and the loop family `A_Δ`.

use std::collections::BTreeMap;

use crate::error::{precondition, Error, Result};
use crate::graph::{ChosenElements, Graph, OEdge};
use crate::group::Elem;
use crate::legality::{illegal_turns, turn_legality, Legality, Mode};
use crate::map::{GraphMap, TurnImage};
use crate::path::{crossing_count, Loop, Turn, TurnKind};

/// Replaces the decoration `g_i` by `g`, changing the turn at position `i`.
pub fn turn_surgery(g: &Graph, l: &Loop, i: usize, dec: &Elem) -> Result<Loop> {
    if !l.is_cyclically_reduced(g) {
        return precondition("loop is not cyclically reduced");
    }
    if i >= l.len() {
        return precondition(format!("site {i} is out of range"));
    }
    let (gi, e) = &l.items[i];
    let grp = g.group_at(*e);
    if !grp.contains(dec) {
        return precondition("replacement element is not in the vertex group");
    }
    let t = l.turn_at(g, i);
    if t.is_degenerate() {
        if grp.is_identity(dec) {
            return precondition("degenerate site needs a non-trivial replacement");
        }
    } else if dec == gi {
        return precondition("replacement must differ from the current decoration");
    }
    let mut out = l.clone();
    out.items[i].0 = dec.clone();
    Ok(out)
}

/// Repetitions of oriented edges, counted with multiplicity.
pub fn repetitions(l: &Loop, n_edges: usize) -> u64 {
    l.oriented_counts(n_edges).iter().map(|&c| c.saturating_sub(1)).sum()
}

/// `g_j e_i ... g_{j-1} e_{j-1}` for consecutive occurrences `i`, `j` of an edge.
pub fn edge_surgery(g: &Graph, l: &Loop, i: usize, j: usize) -> Result<Loop> {
    if !l.is_cyclically_reduced(g) {
        return precondition("loop is not cyclically reduced");
    }
    let k = l.len();
    if i >= k || j >= k || i == j {
        return precondition("edge surgery needs two distinct occurrences");
    }
    let e = l.items[i].1;
    if l.items[j].1 != e {
        return precondition("occurrences are on different oriented edges");
    }
    let span = (j + k - i) % k;
    if (1..span).any(|d| l.items[(i + d) % k].1 == e) {
        return precondition("second occurrence is not the next one");
    }
    let mut items: Vec<(Elem, OEdge)> = (0..span).map(|d| l.items[(i + d) % k].clone()).collect();
    items[0].0 = l.items[j].0.clone();
    Ok(Loop { items })
}

fn occurrences(l: &Loop, e: OEdge) -> Vec<usize> {
    l.items.iter().enumerate().filter(|(_, x)| x.1 == e).map(|(i, _)| i).collect()
}

/// The pair of consecutive occurrences of `x` whose surgery keeps the
/// junction at position `p` (the turn before item `p`) or the item `p`.
fn interval_containing(l: &Loop, x: OEdge, p: usize, junction: bool) -> (usize, usize) {
    let k = l.len();
    let occ = occurrences(l, x);
    for (n, &i) in occ.iter().enumerate() {
        let j = occ[(n + 1) % occ.len()];
        let span = (j + k - i) % k;
        let d = (p + k - i) % k;
        let inside = if junction { d >= 1 && d <= span } else { d < span };
        if inside {
            return (i, j);
        }
    }
    unreachable!("occurrences partition the loop")
}

/// Recursive edge-surgeries until every oriented edge is crossed at most
/// once, keeping a crossing of `e` (or of `ē` if `e` itself is not crossed).
pub fn edge_reduce_through(g: &Graph, l: &Loop, e: OEdge) -> Result<Loop> {
    if !l.is_cyclically_reduced(g) {
        return precondition("loop is not cyclically reduced");
    }
    let target = if l.edges().any(|x| x == e) {
        e
    } else if l.edges().any(|x| x == e.rev()) {
        e.rev()
    } else {
        return precondition(format!("loop does not cross {}", g.oedge_name(e)));
    };
    let mut cur = l.clone();
    while let Some(x) = repeated_edge(&cur, g.n_edges()) {
        let p = cur.items.iter().position(|it| it.1 == target).unwrap();
        let (i, j) = interval_containing(&cur, x, p, false);
        cur = edge_surgery(g, &cur, i, j)?;
    }
    Ok(cur)
}

fn repeated_edge(l: &Loop, n_edges: usize) -> Option<OEdge> {
    l.oriented_counts(n_edges).iter().position(|&c| c > 1).map(|i| OEdge(i as u32))
}

/// Recursive edge-surgeries keeping one crossing of `t`.
pub fn edge_reduce_through_turn(g: &Graph, l: &Loop, t: &Turn) -> Result<Loop> {
    if t.is_trivial(g) {
        return precondition("turn is trivial");
    }
    if !l.is_cyclically_reduced(g) {
        return precondition("loop is not cyclically reduced");
    }
    let mut p = (0..l.len())
        .find(|&i| &l.turn_at(g, i) == t)
        .ok_or_else(|| Error::Precondition(format!("loop does not cross {}", t.display(g))))?;
    let mut cur = l.clone();
    while let Some(x) = repeated_edge(&cur, g.n_edges()) {
        let k = cur.len();
        let (i, j) = interval_containing(&cur, x, p, true);
        cur = edge_surgery(g, &cur, i, j)?;
        p = ((p + k - i) % k) % cur.len();
        debug_assert_eq!(&cur.turn_at(g, p), t);
    }
    Ok(cur)
}

/// Cyclically reduced loops crossing every unoriented edge at most `cap`
/// times whose non-trivial decorations come from `decs(v)`, one
/// representative per class up to rotation and inversion.
pub fn enumerate_loops(
    g: &Graph,
    cap: u64,
    decs: &dyn Fn(usize) -> Vec<Elem>,
    oriented_cap: Option<u64>,
    budget: Option<u64>,
) -> Result<Vec<Loop>> {
    let mut out = BTreeMap::new();
    let mut nodes = 0u64;
    let n = g.n_edges();
    for e0 in g.oedges() {
        for d0 in decs(g.origin(e0)) {
            let mut items = vec![(d0.clone(), e0)];
            let mut counts = vec![0u64; n];
            let mut ocounts = vec![0u64; 2 * n];
            counts[e0.edge()] += 1;
            ocounts[e0.0 as usize] += 1;
            let ctx = Ctx { g, cap, oriented_cap, decs, budget };
            extend(&ctx, &mut items, &mut counts, &mut ocounts, &mut out, &mut nodes)?;
        }
    }
    Ok(out.into_values().collect())
}

struct Ctx<'a> {
    g: &'a Graph,
    cap: u64,
    oriented_cap: Option<u64>,
    decs: &'a dyn Fn(usize) -> Vec<Elem>,
    budget: Option<u64>,
}

fn key_of(it: &(Elem, OEdge)) -> (OEdge, &Elem) {
    (it.1, &it.0)
}

fn extend(
    ctx: &Ctx,
    items: &mut Vec<(Elem, OEdge)>,
    counts: &mut Vec<u64>,
    ocounts: &mut Vec<u64>,
    out: &mut BTreeMap<Loop, Loop>,
    nodes: &mut u64,
) -> Result<()> {
    *nodes += 1;
    if let Some(b) = ctx.budget {
        if *nodes > b {
            return Err(Error::Budget(format!("loop enumeration exceeded {b} nodes")));
        }
    }
    let g = ctx.g;
    let last = items.last().unwrap().1;
    let v = g.terminus(last);
    let first = items[0].clone();
    if v == g.origin(first.1) {
        let l = Loop { items: items.clone() };
        if l.is_cyclically_reduced(g) && l.canonical_rotation() == l {
            let u = l.canonical_unoriented(g);
            // keep a representative whose own decorations are admissible
            let rep = if admissible(ctx, &u) { u.clone() } else { l };
            out.entry(u).or_insert(rep);
        }
    }
    for e in g.star(v) {
        if counts[e.edge()] >= ctx.cap {
            continue;
        }
        if let Some(oc) = ctx.oriented_cap {
            if ocounts[e.0 as usize] >= oc {
                continue;
            }
        }
        for d in (ctx.decs)(v) {
            let it = (d, e);
            if key_of(&it) < key_of(&first) {
                continue;
            }
            if e == last.rev() && g.group(v).is_identity(&it.0) {
                continue;
            }
            items.push(it);
            counts[e.edge()] += 1;
            ocounts[e.0 as usize] += 1;
            extend(ctx, items, counts, ocounts, out, nodes)?;
            ocounts[e.0 as usize] -= 1;
            counts[e.edge()] -= 1;
            items.pop();
        }
    }
    Ok(())
}

fn admissible(ctx: &Ctx, l: &Loop) -> bool {
    l.items.iter().all(|(d, e)| (ctx.decs)(ctx.g.origin(*e)).contains(d))
}

/// Decorations allowed in `A_Δ`: the identity and the chosen `h_v`.
pub fn a_delta_decorations<'a>(g: &'a Graph, h: &'a ChosenElements) -> impl Fn(usize) -> Vec<Elem> + 'a {
    move |v| {
        let mut d = vec![g.group(v).identity()];
        if let Some(x) = h.get(v) {
            d.push(x.clone());
        }
        d
    }
}

/// The finite family `A_Δ`: each unoriented edge crossed at most four times,
/// non-trivial decorations in `H`.
pub fn enumerate_a_delta(g: &Graph, h: &ChosenElements) -> Vec<Loop> {
    let decs = a_delta_decorations(g, h);
    enumerate_loops(g, 4, &decs, None, None).expect("no budget set")
}

/// Membership test for `A_Δ` of a single loop.
pub fn in_a_delta(g: &Graph, h: &ChosenElements, l: &Loop) -> bool {
    l.is_cyclically_reduced(g)
        && l.edge_counts(g.n_edges()).iter().all(|&c| c <= 4)
        && l.items.iter().all(|(d, e)| {
            let v = g.origin(*e);
            g.group(v).is_identity(d) || h.get(v) == Some(d)
        })
}

/// Turn-surgeries at infinite non-free turns making `l` cross `taboo[j]` once,
/// no other taboo turn, and making `f(l)` avoid the taboo turns unless `f`
/// maps `taboo[j]` onto one of them.
pub fn avoid_turns_surgery(f: &GraphMap, l: &Loop, taboo: &[Turn], j: usize, mode: Mode, ladder: Option<u32>) -> Result<Loop> {
    let g = &f.dom;
    if let Some(t) = taboo.iter().find(|t| t.kind(g) != TurnKind::InfiniteNonFree) {
        return precondition(format!("turn {} is {} and never candidate regular", t.display(g), t.kind(g)));
    }
    if j >= taboo.len() {
        return precondition("taboo index out of range");
    }
    if !crate::legality::loop_legality(f, l, mode).is_legal() {
        return precondition("input loop is not legal");
    }
    let p = (0..l.len())
        .find(|&i| l.turn_at(g, i) == taboo[j])
        .ok_or_else(|| Error::Precondition(format!("loop does not cross {}", taboo[j].display(g))))?;
    let bound = ladder.unwrap_or(2 * (1 + taboo.len() as u32 + illegal_turns(f).turns.len() as u32));
    let admissible = |t: &Turn| {
        !taboo.contains(t)
            && turn_legality(f, t, mode) == Legality::Legal
            && match f.image_turn(t) {
                TurnImage::Turn(img) => !taboo.contains(&img),
                _ => false,
            }
    };
    let mut cur = l.clone();
    for i in 0..l.len() {
        if i == p {
            continue;
        }
        let t = cur.turn_at(g, i);
        if t.kind(g) != TurnKind::InfiniteNonFree {
            continue;
        }
        if admissible(&t) {
            continue;
        }
        let e = cur.items[i].1;
        let grp = g.group_at(e);
        let mut done = false;
        for a in grp.ladder(bound) {
            if a == cur.items[i].0 {
                continue;
            }
            let mut cand = cur.clone();
            cand.items[i].0 = a.clone();
            let ta = cand.turn_at(g, i);
            if ta.is_trivial(g) || !admissible(&ta) {
                continue;
            }
            cur = turn_surgery(g, &cur, i, &a)?;
            done = true;
            break;
        }
        if !done {
            return Err(Error::NotFound(format!(
                "no admissible element within the ladder at vertex {}",
                g.vertices[g.origin(e)].name
            )));
        }
    }
    Ok(cur)
}

/// Total crossings of a list of turns.
pub fn total_crossings(g: &Graph, l: &Loop, ts: &[Turn]) -> usize {
    ts.iter().map(|t| crossing_count(g, l, t)).sum()
}
