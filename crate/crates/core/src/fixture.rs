//! Fixture files: a marked point with its representative, the chosen
//! elements and default task parameters.
//!
//! ```text
//! # ⟨c⟩ vertex with two loops
//! [groups]
//! Z = free c
//!
//! [graph]
//! vertex v = Z
//! edge a = v -> v : 1
//! edge b = v -> v : 1/2
//!
//! [map]
//! a = a {c} b
//! b = a
//!
//! [H]
//! v = c
//!
//! [task]
//! command = min-simplex
//! ```
//!
//! Groups are `free <generator names>`, `cyclic <n>` or
//! `table <names> ; <row> ; …` where row `i` lists the products `x_i·x_j`.
//! Vertices without a group are trivial. Map lines are edge images written
//! with edge names, `'` for reversal and `{…}` for decorations; optional
//! `vertex v = w`, `hom v = gen -> word, …` and `inverse v = …` lines give
//! the vertex map and the vertex-group isomorphisms, which default to the
//! identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::graph::{ChosenElements, Graph, Metric, OEdge, Q};
use crate::group::{Elem, FiniteGroup, GroupHom, Letter, VertexGroup};
use crate::map::{GraphMap, MarkedPoint};
use crate::path::{Path, Turn};

/// Keys accepted in the task block.
pub const TASK_KEYS: &[&str] =
    &["command", "name", "tol", "kmax", "radius", "budget", "seed", "lmax", "format", "turn", "amount", "forest", "expect"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub point: MarkedPoint,
    pub task: BTreeMap<String, String>,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

/// Exact rational written as an integer or `p/q`.
pub fn parse_exact(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| Q::new(n, d))
}

/// Element of `grp` written as a finite-group name, or as a product of
/// powers `x^k` of free generators; `1` is the identity.
pub fn parse_elem(grp: &VertexGroup, s: &str) -> std::result::Result<Elem, String> {
    let s = s.trim();
    match grp {
        VertexGroup::Trivial if s == "1" || s.is_empty() => Ok(grp.identity()),
        VertexGroup::Trivial => Err(format!("trivial group has no element {s}")),
        VertexGroup::Finite(t) => match t.names.iter().position(|n| n == s) {
            Some(i) => Ok(Elem::Fin(i as u32)),
            None if s == "1" => Ok(grp.identity()),
            None => Err(format!("unknown element {s}")),
        },
        VertexGroup::Free { names, .. } => Ok(Elem::word(&parse_word(names, s)?)),
    }
}

fn parse_word(names: &[String], s: &str) -> std::result::Result<Vec<Letter>, String> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (n, e.parse::<i32>().map_err(|_| format!("bad exponent in {tok}"))?),
            None => (tok, 1),
        };
        let g = names.iter().position(|n| n == name).ok_or_else(|| format!("unknown generator {name}"))? as i32 + 1;
        for _ in 0..exp.unsigned_abs() {
            out.push(g * exp.signum());
        }
    }
    Ok(out)
}

/// A decorated edge path such as `{c} a b' {c^-1}`.
pub fn parse_path(g: &Graph, s: &str) -> std::result::Result<Path, String> {
    enum Tok {
        Dec(String),
        Edge(OEdge),
    }
    let mut toks = Vec::new();
    let mut rest = s.trim();
    let mut anchor = None;
    if let Some(r) = rest.strip_prefix('<') {
        let end = r.find('>').ok_or("unclosed vertex")?;
        let name = r[..end].trim();
        anchor = Some(g.vertex_by_name(name).ok_or_else(|| format!("unknown vertex {name}"))?);
        rest = r[end + 1..].trim_start();
    }
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('{') {
            let end = r.find('}').ok_or("unclosed decoration")?;
            toks.push(Tok::Dec(r[..end].to_string()));
            rest = r[end + 1..].trim_start();
        } else {
            let end = rest.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(rest.len());
            let name = &rest[..end];
            toks.push(Tok::Edge(g.edge_by_name(name).ok_or_else(|| format!("unknown edge {name}"))?));
            rest = rest[end..].trim_start();
        }
    }
    let edges: Vec<OEdge> = toks.iter().filter_map(|t| if let Tok::Edge(e) = t { Some(*e) } else { None }).collect();
    let start = match (edges.first(), anchor) {
        (Some(&e), Some(v)) if g.origin(e) != v => return Err(format!("{} does not start at <{}>", g.oedge_name(e), g.vertices[v].name)),
        (Some(&e), _) => g.origin(e),
        (None, Some(v)) => v,
        (None, None) => return Err("a path needs an edge or a <vertex> start".into()),
    };
    for w in edges.windows(2) {
        if g.terminus(w[0]) != g.origin(w[1]) {
            return Err(format!("{} does not continue {}", g.oedge_name(w[1]), g.oedge_name(w[0])));
        }
    }
    let at = |i: usize| if i == 0 { start } else { g.terminus(edges[i - 1]) };
    let mut decs: Vec<Elem> = (0..=edges.len()).map(|i| g.group(at(i)).identity()).collect();
    let mut slot = 0;
    for t in toks {
        match t {
            Tok::Edge(_) => slot += 1,
            Tok::Dec(d) => {
                let grp = g.group(at(slot));
                let x = parse_elem(grp, &d)?;
                decs[slot] = grp.mul(&decs[slot], &x);
            }
        }
    }
    Ok(Path { start, decs, edges })
}

/// A turn written `[a, {g} b]`, each germ an oriented edge name with an
/// optional leading decoration.
pub fn parse_turn(g: &Graph, s: &str) -> std::result::Result<Turn, String> {
    let body = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or("a turn is written [x, y]")?;
    let (x, y) = body.split_once(',').ok_or("a turn has two germs")?;
    let germ = |t: &str| -> std::result::Result<(Elem, OEdge), String> {
        let t = t.trim();
        let (dec, name) = match t.strip_prefix('{') {
            Some(r) => {
                let end = r.find('}').ok_or("unclosed decoration")?;
                (Some(&r[..end]), r[end + 1..].trim())
            }
            None => (None, t),
        };
        let e = g.edge_by_name(name).ok_or_else(|| format!("unknown edge {name}"))?;
        let grp = g.group(g.origin(e));
        let d = dec.map(|d| parse_elem(grp, d)).transpose()?.unwrap_or_else(|| grp.identity());
        Ok((d, e))
    };
    let ((ga, a), (gb, b)) = (germ(x)?, germ(y)?);
    if g.origin(a) != g.origin(b) {
        return Err("the germs of a turn start at the same vertex".into());
    }
    Ok(Turn::new(g, a, &ga, b, &gb))
}

fn parse_group(line: usize, spec: &str) -> Result<VertexGroup> {
    let mut words = spec.split_whitespace();
    match words.next() {
        Some("free") => {
            let names: Vec<String> = words.map(str::to_string).collect();
            if names.is_empty() {
                return err(line, "free group needs generator names");
            }
            Ok(VertexGroup::Free { rank: names.len() as u32, names })
        }
        Some("cyclic") => {
            let n: usize = words.next().and_then(|n| n.parse().ok()).ok_or(Error::Parse { line, msg: "cyclic needs an order".into() })?;
            if n == 0 || words.next().is_some() {
                return err(line, "cyclic takes one positive order");
            }
            Ok(VertexGroup::finite(FiniteGroup::cyclic(n)))
        }
        Some("table") => {
            let body = spec.trim_start().strip_prefix("table").unwrap_or_default();
            let mut parts = body.split(';');
            let names: Vec<String> = parts.next().unwrap_or_default().split_whitespace().map(str::to_string).collect();
            let rows: Vec<Vec<u32>> = parts
                .map(|r| {
                    r.split_whitespace()
                        .map(|x| names.iter().position(|n| n == x).map(|i| i as u32).ok_or(Error::Parse { line, msg: format!("unknown element {x}") }))
                        .collect::<Result<Vec<u32>>>()
                })
                .collect::<Result<_>>()?;
            let t = FiniteGroup::from_table(rows, Some(names)).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            Ok(VertexGroup::finite(t))
        }
        _ => err(line, format!("unknown group kind in '{spec}'")),
    }
}

fn key_value(line: usize, s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or(Error::Parse { line, msg: format!("expected 'key = value', found '{s}'") })?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Parses a fixture and validates the resulting marked point.
pub fn parse(text: &str) -> Result<Fixture> {
    let mut section = String::new();
    let mut groups: BTreeMap<String, VertexGroup> = BTreeMap::new();
    let mut g = Graph::new();
    let mut lengths: Vec<Q> = Vec::new();
    let mut images: Vec<(usize, String, String)> = Vec::new();
    let mut vmap: Vec<(usize, String, String)> = Vec::new();
    let mut homs: Vec<(usize, String, String)> = Vec::new();
    let mut inverses: Vec<(usize, String, String)> = Vec::new();
    let mut chosen: Vec<(usize, String, String)> = Vec::new();
    let mut task = BTreeMap::new();
    let mut seen_sections = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.split('#').next().unwrap_or_default().trim();
        if s.is_empty() {
            continue;
        }
        if let Some(name) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if !["groups", "graph", "map", "H", "task"].contains(&name) {
                return err(line, format!("unknown section [{name}]"));
            }
            if seen_sections.contains(&name.to_string()) {
                return err(line, format!("repeated section [{name}]"));
            }
            seen_sections.push(name.to_string());
            section = name.to_string();
            continue;
        }
        match section.as_str() {
            "groups" => {
                let (k, v) = key_value(line, s)?;
                let grp = parse_group(line, &v)?;
                if groups.insert(k.clone(), grp).is_some() {
                    return err(line, format!("group {k} declared twice"));
                }
            }
            "graph" => {
                if let Some(r) = s.strip_prefix("vertex ") {
                    let (name, grp) = match r.split_once('=') {
                        Some((n, gname)) => {
                            let gname = gname.trim();
                            let grp = groups.get(gname).cloned().ok_or(Error::Parse { line, msg: format!("unknown group {gname}") })?;
                            (n.trim(), grp)
                        }
                        None => (r.trim(), VertexGroup::Trivial),
                    };
                    if g.vertex_by_name(name).is_some() {
                        return err(line, format!("vertex {name} declared twice"));
                    }
                    g.add_vertex(name, grp);
                } else if let Some(r) = s.strip_prefix("edge ") {
                    let (name, rest) = r.split_once('=').ok_or(Error::Parse { line, msg: "expected 'edge e = u -> v : length'".into() })?;
                    let (ends, len) = rest.split_once(':').ok_or(Error::Parse { line, msg: "edge needs ': length'".into() })?;
                    let (u, v) = ends.split_once("->").ok_or(Error::Parse { line, msg: "edge needs 'u -> v'".into() })?;
                    let vid = |n: &str| g.vertex_by_name(n.trim()).ok_or(Error::Parse { line, msg: format!("unknown vertex {}", n.trim()) });
                    let (u, v) = (vid(u)?, vid(v)?);
                    let name = name.trim();
                    if name.is_empty() || name.contains('\'') || g.edges.iter().any(|e| e.name == name) {
                        return err(line, format!("bad or repeated edge name '{name}'"));
                    }
                    let l = parse_exact(len).ok_or(Error::Parse { line, msg: format!("length '{}' is not p/q", len.trim()) })?;
                    g.add_edge(name, u, v);
                    lengths.push(l);
                } else {
                    return err(line, format!("expected a vertex or edge line, found '{s}'"));
                }
            }
            "map" => {
                let (k, v) = key_value(line, s)?;
                if let Some(name) = k.strip_prefix("vertex ") {
                    vmap.push((line, name.trim().to_string(), v));
                } else if let Some(name) = k.strip_prefix("hom ") {
                    homs.push((line, name.trim().to_string(), v));
                } else if let Some(name) = k.strip_prefix("inverse ") {
                    inverses.push((line, name.trim().to_string(), v));
                } else {
                    images.push((line, k, v));
                }
            }
            "H" => {
                let (k, v) = key_value(line, s)?;
                chosen.push((line, k, v));
            }
            "task" => {
                let (k, v) = key_value(line, s)?;
                if !TASK_KEYS.contains(&k.as_str()) {
                    return err(line, format!("unknown task key '{k}'"));
                }
                task.insert(k, v);
            }
            _ => return err(line, "content before the first section"),
        }
    }
    if g.n_vertices() == 0 {
        return err(0, "the graph block declares no vertices");
    }

    let mut f = GraphMap::identity(&g);
    let vertex = |line: usize, n: &str| g.vertex_by_name(n).ok_or(Error::Parse { line, msg: format!("unknown vertex {n}") });
    for (line, name, target) in &vmap {
        let v = vertex(*line, name)?;
        f.vmap[v] = vertex(*line, target)?;
    }
    for (line, name, spec) in &homs {
        let v = vertex(*line, name)?;
        f.homs[v] = parse_hom(*line, &g, v, f.vmap[v], spec, inverses.iter().find(|(_, n, _)| n == name).map(|(_, _, s)| s.as_str()))?;
    }
    if let Some((line, name, _)) = inverses.iter().find(|(_, n, _)| !homs.iter().any(|(_, m, _)| m == n)) {
        return err(*line, format!("inverse for vertex {name} without a hom line"));
    }
    let mut done = vec![false; g.n_edges()];
    for (line, name, image) in &images {
        let e = g.edge_by_name(name).filter(|e| e.is_fwd()).ok_or(Error::Parse { line: *line, msg: format!("unknown edge {name}") })?;
        if done[e.edge()] {
            return err(*line, format!("image of {name} given twice"));
        }
        done[e.edge()] = true;
        f.images[e.edge()] = parse_path(&g, image).map_err(|m| Error::Parse { line: *line, msg: m })?;
    }
    let mut h = ChosenElements::default_for(&g);
    for (line, name, elem) in &chosen {
        let v = vertex(*line, name)?;
        h.0[v] = Some(parse_elem(g.group(v), elem).map_err(|m| Error::Parse { line: *line, msg: m })?);
    }
    let point = MarkedPoint::from_parts(g, Metric(lengths), f, h)?;
    Ok(Fixture { point, task })
}

fn parse_hom(line: usize, g: &Graph, v: usize, w: usize, spec: &str, inverse: Option<&str>) -> Result<GroupHom> {
    let (src, dst) = (g.group(v), g.group(w));
    let pe = |m: String| Error::Parse { line, msg: m };
    match (src, dst) {
        (VertexGroup::Finite(s), VertexGroup::Finite(_)) => {
            let mut m: Vec<u32> = (0..s.order() as u32).collect();
            for pair in spec.split(',') {
                let (a, b) = pair.split_once("->").ok_or_else(|| pe(format!("expected 'x -> y' in '{pair}'")))?;
                let Elem::Fin(a) = parse_elem(src, a).map_err(pe)? else { unreachable!() };
                let Elem::Fin(b) = parse_elem(dst, b).map_err(pe)? else { unreachable!() };
                m[a as usize] = b;
            }
            Ok(GroupHom::Finite(m))
        }
        (VertexGroup::Free { names, rank }, VertexGroup::Free { names: dn, .. }) => {
            let gens = |s: &str, from: &[String], to: &[String]| -> Result<Vec<Vec<Letter>>> {
                let mut out: Vec<Option<Vec<Letter>>> = vec![None; *rank as usize];
                for pair in s.split(',') {
                    let (a, b) = pair.split_once("->").ok_or_else(|| pe(format!("expected 'gen -> word' in '{pair}'")))?;
                    let i = from.iter().position(|n| n == a.trim()).ok_or_else(|| pe(format!("unknown generator {}", a.trim())))?;
                    out[i] = Some(parse_word(to, b).map_err(pe)?);
                }
                out.into_iter().map(|x| x.ok_or_else(|| pe("every generator needs an image".into()))).collect()
            };
            let images = gens(spec, names, dn)?;
            let inv = inverse.map(|s| gens(s, dn, names)).transpose()?;
            GroupHom::free(images, inv).map_err(|e| pe(e.to_string()))
        }
        _ => err(line, "hom lines are only meaningful for non-trivial vertex groups"),
    }
}

/// Writes a marked point in fixture syntax; `parse` reads it back.
pub fn to_fixture_string(x: &MarkedPoint, task: &BTreeMap<String, String>) -> String {
    let g = &x.graph;
    let mut names: Vec<(VertexGroup, String)> = Vec::new();
    let mut out = String::new();
    let mut group_lines = String::new();
    for v in 0..g.n_vertices() {
        let grp = g.group(v);
        if grp.is_trivial() || names.iter().any(|(h, _)| h == grp) {
            continue;
        }
        let name = format!("G{}", names.len());
        let spec = match grp {
            VertexGroup::Free { names, .. } => format!("free {}", names.join(" ")),
            VertexGroup::Finite(t) => {
                let rows: Vec<String> = t
                    .table
                    .iter()
                    .map(|r| r.iter().map(|&k| t.names[k as usize].clone()).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("table {} ; {}", t.names.join(" "), rows.join(" ; "))
            }
            VertexGroup::Trivial => unreachable!(),
        };
        let _ = writeln!(group_lines, "{name} = {spec}");
        names.push((grp.clone(), name));
    }
    if !group_lines.is_empty() {
        let _ = writeln!(out, "[groups]\n{group_lines}");
    }
    let _ = writeln!(out, "[graph]");
    for (v, vx) in g.vertices.iter().enumerate() {
        match names.iter().find(|(h, _)| h == g.group(v)) {
            Some((_, n)) => {
                let _ = writeln!(out, "vertex {} = {n}", vx.name);
            }
            None => {
                let _ = writeln!(out, "vertex {}", vx.name);
            }
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        let _ = writeln!(out, "edge {} = {} -> {} : {}", e.name, g.vertices[e.from].name, g.vertices[e.to].name, x.metric.0[i]);
    }
    let f = &x.map;
    let _ = writeln!(out, "\n[map]");
    for v in 0..g.n_vertices() {
        if f.vmap[v] != v {
            let _ = writeln!(out, "vertex {} = {}", g.vertices[v].name, g.vertices[f.vmap[v]].name);
        }
        if f.homs[v] != GroupHom::identity(g.group(v)) {
            let (hom, inv) = format_hom(g, v, f.vmap[v], &f.homs[v]);
            let _ = writeln!(out, "hom {} = {hom}", g.vertices[v].name);
            if let Some(inv) = inv {
                let _ = writeln!(out, "inverse {} = {inv}", g.vertices[v].name);
            }
        }
    }
    for (i, p) in f.images.iter().enumerate() {
        let _ = writeln!(out, "{} = {}", g.edges[i].name, p.display(g));
    }
    let h: Vec<String> = (0..g.n_vertices())
        .filter_map(|v| x.chosen.get(v).map(|e| format!("{} = {}", g.vertices[v].name, g.group(v).format(e))))
        .collect();
    if !h.is_empty() {
        let _ = writeln!(out, "\n[H]\n{}", h.join("\n"));
    }
    if !task.is_empty() {
        let _ = writeln!(out, "\n[task]");
        for (k, v) in task {
            let _ = writeln!(out, "{k} = {v}");
        }
    }
    out
}

fn format_hom(g: &Graph, v: usize, w: usize, h: &GroupHom) -> (String, Option<String>) {
    let (src, dst) = (g.group(v), g.group(w));
    match (h, src, dst) {
        (GroupHom::Finite(m), _, _) => {
            let pairs: Vec<String> = m
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{} -> {}", src.format(&Elem::Fin(a as u32)), dst.format(&Elem::Fin(b))))
                .collect();
            (pairs.join(", "), None)
        }
        (GroupHom::Free { images, inverse }, VertexGroup::Free { names: sn, .. }, VertexGroup::Free { names: dn, .. }) => {
            let fmt = |from: &[String], grp: &VertexGroup, ws: &[Vec<Letter>]| -> String {
                ws.iter().enumerate().map(|(i, w)| format!("{} -> {}", from[i], grp.format(&Elem::Word(w.clone())))).collect::<Vec<_>>().join(", ")
            };
            let inv = (images.len() > 1).then(|| fmt(dn, src, inverse));
            (fmt(sn, dst, images), inv)
        }
        _ => (String::new(), None),
    }
}

#[cfg(test)]
mod tests;
