//! Command-line front end: reads a fixture, runs one computation and emits
//! a report. Exit codes: 0 success, 1 property violation, 2 input error,
//! 3 resource budget exceeded, 4 unresolved certification.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num::{One, Zero};

use crate::critical::{candidate_critical_turns, effective_regular_filter, simplex_critical_turns_within, Provenance, Regularity, A_DELTA_BUDGET};
use crate::displacement::{
    bounds_report, centre, default_tol, lambda_point, lambda_simplex, oracle_lambda, point_candidates, CandidatePolicy,
};
use crate::error::{Error, Result};
use crate::explore::{explore_minset, foldable_turns, ExploreConfig, Neighborhood};
use crate::fixture::{parse, parse_turn, to_fixture_string, Fixture};
use crate::graph::Q;
use crate::legality::{default_kmax, gates, illegal_turns, is_train_track, Certified, Mode};
use crate::map::MarkedPoint;
use crate::moves::{fold_amount_bound, fold_turn, unfold_forest, unfold_turn};
use crate::path::Class;
use crate::report::{Format, Report};
use crate::util::{parse_rational, to_f64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_UNRESOLVED: i32 = 4;

const ORACLE_BUDGET: u64 = 50_000_000;

#[derive(Parser, Debug)]
#[command(name = "minset", version, about = "Displacement, critical turns and minset exploration for automorphisms of free splittings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Bisection tolerance, relative (decimal, scientific or p/q).
    #[arg(long, global = true)]
    pub tol: Option<String>,
    /// Iteration bound for legality under iterates.
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    /// Radius of the explored neighbourhood.
    #[arg(long, global = true)]
    pub radius: Option<u64>,
    /// Entry budget for `explore`, node budget for `oracle` and `critical-turns`.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Recorded in the footer; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format: text, csv or dot.
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a fixture.
    Validate { fixture: PathBuf },
    /// Displacement at the point of the fixture.
    Displace { fixture: PathBuf },
    /// Infimum of the displacement over the simplex of the fixture.
    MinSimplex { fixture: PathBuf },
    /// Fold a turn; the default amount is half the largest allowed.
    Fold {
        fixture: PathBuf,
        #[arg(long)]
        turn: Option<String>,
        #[arg(long)]
        amount: Option<String>,
        /// Write the folded point as a fixture.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Fold then project back, or unfold into the face collapsing a forest.
    Unfold {
        fixture: PathBuf,
        #[arg(long)]
        turn: Option<String>,
        #[arg(long)]
        amount: Option<String>,
        /// Comma-separated edge names.
        #[arg(long)]
        forest: Option<String>,
    },
    /// Candidate-critical and simplex-critical turns with the effective filter.
    CriticalTurns { fixture: PathBuf },
    /// Train track certification, illegal turns and gates.
    TraintrackCheck { fixture: PathBuf },
    /// Exhaustive displacement over loops of bounded length.
    Oracle {
        fixture: PathBuf,
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Explore the minset around the simplex of the fixture.
    Explore { fixture: PathBuf },
    /// Quantitative bounds at the centre of the simplex.
    Bounds { fixture: PathBuf },
    /// Run the command named in the task block.
    Run { fixture: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub format: Format,
    pub report: Option<Report>,
    pub message: Option<String>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Unresolved(_) => EXIT_UNRESOLVED,
        _ => EXIT_INPUT,
    }
}

/// Flags resolved against the task block; flags win.
struct Settings {
    tol: Q,
    kmax: Option<usize>,
    radius: Option<u64>,
    budget: Option<u64>,
    seed: u64,
    lmax: usize,
    turn: Option<String>,
    amount: Option<String>,
    forest: Option<String>,
    expect: Option<String>,
    name: String,
}

fn input(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

impl Settings {
    fn new(cli: &Cli, task: &BTreeMap<String, String>) -> Result<Settings> {
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| task.get(key).cloned());
        let num = |flag: Option<u64>, key: &str| -> Result<Option<u64>> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => task.get(key).map(|s| s.parse().map_err(|_| input(format!("task key {key} must be an integer")))).transpose(),
            }
        };
        let tol = match pick(cli.tol.clone(), "tol") {
            Some(s) => parse_rational(&s).filter(|t| *t > Q::zero() && *t < Q::one()).ok_or_else(|| input(format!("bad tolerance '{s}'")))?,
            None => default_tol(),
        };
        Ok(Settings {
            tol,
            kmax: num(cli.kmax.map(|k| k as u64), "kmax")?.map(|k| k as usize),
            radius: num(cli.radius, "radius")?,
            budget: num(cli.budget, "budget")?,
            seed: num(cli.seed, "seed")?.unwrap_or(0),
            lmax: num(None, "lmax")?.map_or(10, |l| l as usize),
            turn: task.get("turn").cloned(),
            amount: task.get("amount").cloned(),
            forest: task.get("forest").cloned(),
            expect: task.get("expect").cloned(),
            name: task.get("name").cloned().unwrap_or_default(),
        })
    }

    fn footer(&self, r: &mut Report, x: &MarkedPoint) {
        if !self.name.is_empty() {
            r.note("fixture", &self.name);
        }
        r.note("candidate policy", CandidatePolicy::Sausage);
        r.note("kmax", self.kmax.unwrap_or_else(|| default_kmax(&x.graph)));
        r.note("tol", &self.tol);
        r.note("seed", self.seed);
        r.note("version", env!("CARGO_PKG_VERSION"));
    }
}

fn dec(x: &Q) -> String {
    format!("{:.12}", to_f64(x))
}

fn class_display(x: &MarkedPoint, c: &Class) -> String {
    match c {
        Class::Loop(l) => l.display(&x.graph),
        Class::Elliptic { vertex, elem } => format!("elliptic {} at {}", x.graph.group(*vertex).format(elem), x.graph.vertices[*vertex].name),
    }
}

fn metric_display(x: &MarkedPoint, m: &[Q]) -> String {
    x.graph.edges.iter().zip(m).map(|(e, l)| format!("{}={}", e.name, dec(l))).collect::<Vec<_>>().join(" ")
}

fn load(path: &PathBuf) -> Result<Fixture> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    parse(&text)
}

/// Runs the parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let fixture_path = match &cli.command {
        Command::Validate { fixture }
        | Command::Displace { fixture }
        | Command::MinSimplex { fixture }
        | Command::Fold { fixture, .. }
        | Command::Unfold { fixture, .. }
        | Command::CriticalTurns { fixture }
        | Command::TraintrackCheck { fixture }
        | Command::Oracle { fixture, .. }
        | Command::Explore { fixture }
        | Command::Bounds { fixture }
        | Command::Run { fixture } => fixture,
    };
    let result = load(fixture_path).and_then(|fx| {
        let mut st = Settings::new(cli, &fx.task)?;
        let command = match &cli.command {
            Command::Run { .. } => fx.task.get("command").cloned().ok_or_else(|| input("the task block names no command"))?,
            other => command_name(other).to_string(),
        };
        match &cli.command {
            Command::Fold { turn, amount, .. } | Command::Unfold { turn, amount, .. } => {
                st.turn = turn.clone().or(st.turn.take());
                st.amount = amount.clone().or(st.amount.take());
            }
            _ => {}
        }
        if let Command::Unfold { forest: Some(f), .. } = &cli.command {
            st.forest = Some(f.clone());
        }
        if let Command::Oracle { lmax: Some(l), .. } = &cli.command {
            st.lmax = *l;
        }
        let emit = match &cli.command {
            Command::Fold { emit, .. } => emit.clone(),
            _ => None,
        };
        let format = match cli.format {
            Some(f) => f,
            None => fx.task.get("format").map(|f| f.parse::<Format>().map_err(input)).transpose()?.unwrap_or(Format::Text),
        };
        dispatch(&command, &fx, &st, emit.as_ref()).map(|(code, r)| (code, r, format))
    });
    match result {
        Ok((code, report, format)) => Outcome { code, format, report: Some(report), message: None },
        Err(e) => Outcome { code: exit_code(&e), format: Format::Text, report: None, message: Some(e.to_string()) },
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Displace { .. } => "displace",
        Command::MinSimplex { .. } => "min-simplex",
        Command::Fold { .. } => "fold",
        Command::Unfold { .. } => "unfold",
        Command::CriticalTurns { .. } => "critical-turns",
        Command::TraintrackCheck { .. } => "traintrack-check",
        Command::Oracle { .. } => "oracle",
        Command::Explore { .. } => "explore",
        Command::Bounds { .. } => "bounds",
        Command::Run { .. } => "run",
    }
}

fn dispatch(command: &str, fx: &Fixture, st: &Settings, emit: Option<&PathBuf>) -> Result<(i32, Report)> {
    let x = &fx.point;
    let (code, mut r) = match command {
        "validate" => validate(x, st),
        "displace" => displace(x, st),
        "min-simplex" => min_simplex(x, st),
        "fold" => fold(x, st, emit),
        "unfold" => unfold(x, st),
        "critical-turns" => critical(x, st),
        "traintrack-check" => traintrack(x, st),
        "oracle" => oracle(x, st),
        "explore" => explore(x, st),
        "bounds" => bounds(x, st),
        other => Err(input(format!("unknown command '{other}'"))),
    }?;
    st.footer(&mut r, x);
    if r.dot.is_none() {
        r.dot = Some(x.graph.to_dot(Some(&x.metric)));
    }
    Ok((code, r))
}

fn validate(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let g = &x.graph;
    let mut r = Report::new("validate", &["vertices", "edges", "rank", "non-free vertices", "dimension", "train track"]);
    let kmax = st.kmax.unwrap_or_else(|| default_kmax(g));
    let tt = match is_train_track(&x.map, kmax) {
        Certified::Yes => "yes".to_string(),
        Certified::No(why) => format!("no ({why})"),
        Certified::Unresolved(why) => format!("unresolved ({why})"),
    };
    r.row(vec![
        g.n_vertices().to_string(),
        g.n_edges().to_string(),
        g.rank().to_string(),
        g.nonfree_vertices().len().to_string(),
        crate::displacement::dimension(g).to_string(),
        tt,
    ]);
    Ok((EXIT_OK, r))
}

fn check_expect(st: &Settings, value: &Q, exact: bool) -> Result<i32> {
    let Some(e) = &st.expect else { return Ok(EXIT_OK) };
    let want = parse_rational(e).ok_or_else(|| input(format!("bad expected value '{e}'")))?;
    let ok = if exact { *value == want } else { (to_f64(value) - to_f64(&want)).abs() <= 1e-8 * to_f64(&want).abs().max(1.0) };
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn displace(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let d = lambda_point(x)?;
    let mut r = Report::new("displace", &["value", "decimal", "witness", "image", "candidates"]);
    r.row(vec![d.value.to_string(), dec(&d.value), d.witness.display(&x.graph), class_display(x, &d.witness_image), d.candidates.to_string()]);
    r.note("metric", metric_display(x, &x.metric.0));
    Ok((check_expect(st, &d.value, true)?, r))
}

fn min_simplex(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let s = lambda_simplex(x, &st.tol)?;
    let mut r = Report::new("min-simplex", &["lo", "hi", "midpoint", "boundary", "minimizer", "probes"]);
    r.row(vec![dec(&s.lo), dec(&s.hi), format!("{:.12}", s.midpoint()), s.boundary.to_string(), metric_display(x, &s.minimizer.0), s.probes.to_string()]);
    r.note("lo exact", &s.lo);
    r.note("hi exact", &s.hi);
    r.note("candidates", point_candidates(x)?.loops.len());
    r.note("boundary threshold", crate::displacement::BOUNDARY_THRESHOLD);
    let mid = Q::new(((&s.lo + &s.hi) * Q::from_integer(1_000_000_000_000i64.into()) / Q::from_integer(2.into())).to_integer(), 1_000_000_000_000i64.into());
    Ok((check_expect(st, &mid, false)?, r))
}

fn turn_arg(x: &MarkedPoint, st: &Settings) -> Result<crate::path::Turn> {
    let t = st.turn.as_deref().ok_or_else(|| input("--turn is required"))?;
    parse_turn(&x.graph, t).map_err(input)
}

fn amount_arg(x: &MarkedPoint, st: &Settings, t: &crate::path::Turn) -> Result<Q> {
    match &st.amount {
        Some(a) => crate::fixture::parse_exact(a).ok_or_else(|| input(format!("amount '{a}' is not p/q"))),
        None => Ok(fold_amount_bound(x, t) / Q::from_integer(2.into())),
    }
}

fn fold(x: &MarkedPoint, st: &Settings, emit: Option<&PathBuf>) -> Result<(i32, Report)> {
    let t = turn_arg(x, st)?;
    let amount = amount_arg(x, st, &t)?;
    let (y, rec) = fold_turn(x, &t, &amount)?;
    let mut r = Report::new("fold", &["edge", "from", "to", "length", "representative"]);
    for (i, e) in y.graph.edges.iter().enumerate() {
        r.row(vec![
            e.name.clone(),
            y.graph.vertices[e.from].name.clone(),
            y.graph.vertices[e.to].name.clone(),
            y.metric.0[i].to_string(),
            y.map.images[i].display(&y.graph),
        ]);
    }
    r.note("turn", t.display(&x.graph));
    r.note("amount", &amount);
    r.note("new edge", rec.new_edge.map_or("smoothed".to_string(), |n| y.graph.edges[n].name.clone()));
    r.dot = Some(y.graph.to_dot(Some(&y.metric)));
    if let Some(path) = emit {
        std::fs::write(path, to_fixture_string(&y, &BTreeMap::new())).map_err(|e| input(format!("{}: {e}", path.display())))?;
    }
    Ok((EXIT_OK, r))
}

fn unfold(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    if let Some(forest) = &st.forest {
        let ids: Vec<usize> = forest
            .split(',')
            .map(|n| x.graph.edge_by_name(n.trim()).filter(|e| e.is_fwd()).map(|e| e.edge()).ok_or_else(|| input(format!("unknown edge {n}"))))
            .collect::<Result<_>>()?;
        let u = unfold_forest(x, &ids)?;
        let mut r = Report::new("unfold", &["edge", "length", "section"]);
        for (i, e) in u.point.graph.edges.iter().enumerate() {
            r.row(vec![e.name.clone(), u.point.metric.0[i].to_string(), u.p.images[i].display(&x.graph)]);
        }
        let d = x.graph.n_edges() as u64;
        r.note("svol", u.svol);
        r.note("2D^2", 2 * d * d);
        r.dot = Some(u.point.graph.to_dot(Some(&u.point.metric)));
        return Ok((if u.svol <= 2 * d * d { EXIT_OK } else { EXIT_VIOLATION }, r));
    }
    let t = turn_arg(x, st)?;
    let amount = amount_arg(x, st, &t)?;
    let (y, rec) = fold_turn(x, &t, &amount)?;
    let back = unfold_turn(&y, &rec)?;
    let mut r = Report::new("unfold", &["edge", "original", "unfolded", "equal"]);
    let mut all = true;
    for (i, e) in x.graph.edges.iter().enumerate() {
        let eq = x.metric.0[i] == back.metric.0[i];
        all &= eq;
        r.row(vec![e.name.clone(), x.metric.0[i].to_string(), back.metric.0[i].to_string(), eq.to_string()]);
    }
    r.note("turn", t.display(&x.graph));
    r.note("amount", &amount);
    Ok((if all { EXIT_OK } else { EXIT_VIOLATION }, r))
}

fn provenance(x: &MarkedPoint, p: &Provenance) -> String {
    match p {
        Provenance::Free => "free".into(),
        Provenance::FiniteVertex => "finite vertex group".into(),
        Provenance::ADeltaImage(l) => format!("image of {}", l.display(&x.graph)),
        Provenance::Illegal => "illegal for the train track".into(),
        Provenance::IllegalUncertified => "illegal, representative not certified".into(),
    }
}

fn critical(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let g = &x.graph;
    let kmax = st.kmax.unwrap_or_else(|| default_kmax(g));
    let budget = st.budget.unwrap_or(A_DELTA_BUDGET);
    let tt = is_train_track(&x.map, kmax);
    let cd = simplex_critical_turns_within(x, tt.is_yes(), kmax, budget);
    let mut r = Report::new("critical-turns", &["turn", "kind", "provenance", "filter"]);
    for (t, p) in &cd.turns {
        let filter = match effective_regular_filter(t, x) {
            Regularity::CertifiedRegular => "certified regular".to_string(),
            Regularity::PossiblyCritical(why) => format!("possibly critical: {why}"),
        };
        r.row(vec![t.display(g), t.kind(g).to_string(), provenance(x, p), filter]);
    }
    r.note("candidate critical", cd.candidate_part().count());
    r.note("simplex critical", cd.len());
    r.note("train track", format!("{tt:?}"));
    r.note("A_Delta nodes", cd.nodes);
    r.note("A_Delta budget", budget);
    r.note("uncertain", cd.uncertain);
    let code = if cd.nodes > budget {
        EXIT_BUDGET
    } else if matches!(tt, Certified::Unresolved(_)) {
        EXIT_UNRESOLVED
    } else {
        EXIT_OK
    };
    Ok((code, r))
}

fn traintrack(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let g = &x.graph;
    let kmax = st.kmax.unwrap_or_else(|| default_kmax(g));
    let tt = is_train_track(&x.map, kmax);
    let il = illegal_turns(&x.map);
    let gs = gates(&x.map, Mode::Fk { kmax }, None)?;
    let sd = x.stretch();
    let mut r = Report::new("traintrack-check", &["train track", "detail", "lip", "tension", "illegal turns", "gates"]);
    let (verdict, detail) = match &tt {
        Certified::Yes => ("yes", String::new()),
        Certified::No(w) => ("no", w.clone()),
        Certified::Unresolved(w) => ("unresolved", w.clone()),
    };
    let gates = gs
        .iter()
        .enumerate()
        .map(|(v, k)| format!("{}:{}", g.vertices[v].name, k.map_or("-".to_string(), |k| k.to_string())))
        .collect::<Vec<_>>()
        .join(" ");
    r.row(vec![
        verdict.into(),
        detail,
        sd.lip.to_string(),
        sd.tension.iter().map(|&i| g.edges[i].name.clone()).collect::<Vec<_>>().join(" "),
        il.turns.iter().map(|t| t.display(g)).collect::<Vec<_>>().join(" "),
        gates,
    ]);
    let code = if matches!(tt, Certified::Unresolved(_)) { EXIT_UNRESOLVED } else { EXIT_OK };
    Ok((code, r))
}

fn oracle(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let budget = st.budget.unwrap_or(ORACLE_BUDGET);
    let o = oracle_lambda(x, st.lmax, budget)?;
    let d = lambda_point(x)?;
    let agree = o.value == d.value;
    let mut r = Report::new("oracle", &["lmax", "oracle", "candidates", "agree", "witness", "nodes"]);
    r.row(vec![st.lmax.to_string(), o.value.to_string(), d.value.to_string(), agree.to_string(), o.witness.display(&x.graph), o.nodes.to_string()]);
    r.note("node budget", budget);
    Ok((if agree { EXIT_OK } else { EXIT_VIOLATION }, r))
}

/// DOT rendering of the adjacency between neighbourhood entries.
pub fn neighborhood_dot(nb: &Neighborhood) -> String {
    let mut s = String::from("digraph N {\n");
    for e in &nb.entries {
        let v = e.verdict.map_or("-".to_string(), |v| v.to_string());
        let label = format!("{} ({}E, {v}{})", e.id, e.point.graph.n_edges(), if e.pruned { ", pruned" } else { "" });
        s.push_str(&format!("  n{} [label=\"{label}\"];\n", e.id));
    }
    for (a, b, m) in &nb.adjacency {
        s.push_str(&format!("  n{a} -> n{b} [label=\"{}\"];\n", m.to_string().replace('"', "'")));
    }
    s.push_str("}\n");
    s
}

fn explore(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let mut cfg = ExploreConfig { radius: st.radius, tol: st.tol.clone(), kmax: st.kmax, ..ExploreConfig::default() };
    if let Some(b) = st.budget {
        cfg.max_entries = b as usize;
    }
    let nb = explore_minset(x, &cfg)?;
    let mut r = Report::new("explore", &["id", "parent", "depth", "edges", "move", "lo", "hi", "verdict", "boundary", "pruned", "critical"]);
    for e in &nb.entries {
        let (lo, hi, boundary) = match &e.interval {
            Some(s) => (dec(&s.lo), dec(&s.hi), s.boundary.to_string()),
            None => ("-".into(), "-".into(), "-".into()),
        };
        r.row(vec![
            e.id.to_string(),
            e.parent.map_or("-".to_string(), |p| p.to_string()),
            e.depth().to_string(),
            e.point.graph.n_edges().to_string(),
            e.path.last().map_or("origin".to_string(), |m| m.to_string()),
            lo,
            hi,
            e.verdict.map_or("-".to_string(), |v| v.to_string()),
            boundary,
            e.pruned.to_string(),
            e.critical.map_or("-".to_string(), |c| format!("{c}{}", if e.uncertain { "?" } else { "" })),
        ]);
    }
    let lam = nb.lambda.as_ref().expect("explore computes λ(φ)");
    r.note("lambda(phi)", dec(&lam.lo));
    r.note("radius", nb.radius);
    r.note("complete", nb.complete);
    r.note("in", nb.in_set().count());
    r.note("test loops", nb.test_loops);
    r.note("entry budget", cfg.max_entries);
    r.note("A_Delta budget", cfg.a_delta_budget);
    r.note("regular ladder", cfg.ladder);
    r.dot = Some(neighborhood_dot(&nb));
    Ok((if nb.complete { EXIT_OK } else { EXIT_BUDGET }, r))
}

fn bounds(x: &MarkedPoint, st: &Settings) -> Result<(i32, Report)> {
    let lam = lambda_simplex(x, &st.tol)?;
    let c = centre(x);
    let cc = candidate_critical_turns(&c);
    let neighbour = foldable_turns(&c.graph, &cc).first().map(|t| fold_turn(&c, t, &(fold_amount_bound(&c, t) / Q::from_integer(2.into())))).transpose()?;
    let b = bounds_report(x, neighbour.as_ref().map(|(y, _)| y), &lam.lo, Some(cc.len()))?;
    let mut r = Report::new("bounds", &["bound", "lhs", "rhs", "holds"]);
    for ch in &b.checks {
        let rhs = if ch.rhs.to_string().len() > 40 { format!("{:.6e}", to_f64(&ch.rhs)) } else { ch.rhs.to_string() };
        r.row(vec![ch.name.clone(), ch.lhs.to_string(), rhs, ch.holds.to_string()]);
    }
    r.note("D", b.d);
    r.note("M", b.m);
    r.note("K", b.k);
    r.note("lambda", dec(&lam.lo));
    r.note("centre displacement", &b.centre);
    Ok((if b.all_hold() { EXIT_OK } else { EXIT_VIOLATION }, r))
}

/// Parses arguments, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let out = execute(&cli);
    if let Some(r) = &out.report {
        match r.render(out.format) {
            Ok(s) => {
                print!("{s}");
                if let Some(p) = &cli.out {
                    if let Err(e) = std::fs::write(p, &s) {
                        eprintln!("error: {}: {e}", p.display());
                        return EXIT_INPUT;
                    }
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return exit_code(&e);
            }
        }
    }
    if let Some(m) = &out.message {
        eprintln!("error: {m}");
    }
    out.code
}

#[cfg(test)]
mod tests;
