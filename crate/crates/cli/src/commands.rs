use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use gfmatroid::code::{check_good_prefix, random_code};
use gfmatroid::frame::{frame_normalize, graph_representation, is_frame_matrix};
use gfmatroid::perturb::{compose, connectivity_degradation_check, rank_deviation_check};
use gfmatroid::random::{self, derive_seed, InstanceRng};
use gfmatroid::short_circuits::{build_cover, moore_bound_check, rank_deficient_set};
use gfmatroid::{
    Error, FieldSpec, FrameRep, GoodnessParams, LinearCode, Mat, MatrixJson, ReprMatroid, UGraph,
    VerticalConnectivity,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CodeCmd, Command, CoverCmd, FrameCmd, MatroidCmd, RunConfig};

pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("csv: {e}"))
    }
}

type Res<T = ()> = Result<T, Failure>;

pub fn run(command: &Command, cfg: &RunConfig) -> Res {
    match command {
        Command::Code(c) => code(c, cfg),
        Command::Matroid(c) => matroid(c, cfg),
        Command::Frame(FrameCmd::Repr(_)) => frame_repr(cfg),
        Command::Cover(CoverCmd::Build(_)) => cover_build(cfg),
        Command::GoodnessScan(_) => goodness_scan(cfg),
        Command::FrameGirth(_) => frame_girth(cfg),
        Command::PerturbDemo(_) => perturb_demo(cfg),
        Command::MooreCheck(_) => moore_check(cfg),
    }
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Res<(Mat, Option<String>)> {
    let j: MatrixJson = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((j.to_mat()?, j.name))
}

fn load_matroid(path: &Path) -> Res<ReprMatroid> {
    let (m, name) = load_matrix(path)?;
    let m = ReprMatroid::new(m)?;
    Ok(match name {
        Some(n) => m.with_name(n),
        None => m,
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Res {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)? + "\n";
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn opt(v: Option<usize>) -> String {
    v.map_or("none".into(), |d| d.to_string())
}

fn code(c: &CodeCmd, cfg: &RunConfig) -> Res {
    let code: LinearCode = load_matroid(cfg.input()?)?.into();
    match c {
        CodeCmd::Dist(_) => {
            let d = code.min_distance(&cfg.limits)?;
            println!("n={} k={} d={}", code.n(), code.k(), opt(d));
        }
        CodeCmd::Puncture(_) => emit_json(
            &code.puncture(&cfg.at()?)?.matroid().to_json(),
            cfg.out.as_deref(),
        )?,
        CodeCmd::Shorten(_) => emit_json(
            &code.shorten(&cfg.at()?)?.matroid().to_json(),
            cfg.out.as_deref(),
        )?,
    }
    Ok(())
}

fn matroid(c: &MatroidCmd, cfg: &RunConfig) -> Res {
    let m = load_matroid(cfg.input()?)?;
    match c {
        MatroidCmd::Info(_) => {
            let name = m.name().map(|n| format!("name={n} ")).unwrap_or_default();
            let loops = (0..m.len())
                .filter(|&i| m.rank_of_indices(&[i]) == 0)
                .count();
            println!(
                "{name}field={} elements={} rank={} loops={loops} frame={}",
                m.field(),
                m.len(),
                m.rank(),
                is_frame_matrix(m.gen())
            );
        }
        MatroidCmd::Girth(_) => {
            let g = m.girth(&cfg.limits)?;
            let d = m.cogirth(&cfg.limits)?;
            println!("girth={} cogirth={}", opt(g), opt(d));
        }
        MatroidCmd::Dual(_) => emit_json(&m.dual().to_json(), cfg.out.as_deref())?,
        MatroidCmd::Vconn(_) => {
            let t = cfg.t()?;
            match m.vertical_connectivity(t, &cfg.limits)? {
                VerticalConnectivity::Connected => println!("vertically {t}-connected"),
                VerticalConnectivity::Separated(s) => {
                    println!("not vertically {t}-connected");
                    emit_json(&s, None)?;
                }
            }
        }
    }
    Ok(())
}

fn frame_rep_from(path: &Path, cfg: &RunConfig) -> Res<(FrameRep, String)> {
    let (a, name) = load_matrix(path)?;
    let a = if is_frame_matrix(&a) {
        a
    } else {
        frame_normalize(&ReprMatroid::new(a)?, &cfg.limits)?
    };
    let name = name.unwrap_or_else(|| {
        path.file_stem()
            .map_or("G".into(), |s| s.to_string_lossy().into_owned())
    });
    Ok((FrameRep::from_matrix(a)?, name))
}

fn frame_repr(cfg: &RunConfig) -> Res {
    let m = load_matroid(cfg.input()?)?;
    let a = frame_normalize(&m, &cfg.limits)?;
    let g = graph_representation(&a)?;
    println!(
        "vertices={} arcs={} connected={}",
        g.vertices().len(),
        g.arcs().len(),
        g.is_connected()
    );
    if let Some(p) = &cfg.dot {
        std::fs::write(p, g.to_dot(m.name().unwrap_or("G")))?;
    }
    if let Some(p) = &cfg.out {
        emit_json(&g, Some(p))?;
    }
    Ok(())
}

fn cover_build(cfg: &RunConfig) -> Res {
    let (rep, name) = frame_rep_from(cfg.input()?, cfg)?;
    let cover = build_cover(&rep)?;
    println!(
        "levels={} vertices={} edges={} tree_arcs={}",
        cover.levels().len(),
        cover.vertex_count(),
        cover.edge_count(),
        cover.tree().len()
    );
    if let Some(p) = &cfg.dot {
        std::fs::write(p, cover.to_dot(&format!("{name}_cover")))?;
    }
    if let Some(p) = &cfg.out {
        emit_json(&cover.edges(), Some(p))?;
    }
    Ok(())
}

fn csv_writer(path: Option<&Path>) -> Res<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

/// Runs `trials` independent trials in parallel, returning results in trial
/// order. The first failing trial, by index, wins.
fn trials<T: Send>(n: usize, f: impl Fn(usize) -> Res<T> + Sync + Send) -> Res<Vec<T>> {
    let out: Vec<Res<T>> = (0..n).into_par_iter().map(f).collect();
    out.into_iter().collect()
}

fn check_positive(name: &str, v: usize) -> Res {
    if v == 0 {
        return Err(Failure::Usage(format!("--{name} must be positive")));
    }
    Ok(())
}

fn goodness_scan(cfg: &RunConfig) -> Res {
    let f = cfg.field()?;
    let params = GoodnessParams::new(cfg.alpha()?, cfg.beta()?)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let nmax = cfg.nmax()?;
    let count = cfg.trials()?;
    let seed = cfg.seed()?;
    check_positive("trials", count)?;
    if nmax < 2 {
        return Err(Failure::Usage("--nmax must be at least 2".into()));
    }
    let limits = &cfg.limits;
    let rows = trials(count, |trial| {
        let trial_seed = derive_seed(seed, trial as u64);
        let mut codes = Vec::new();
        for n in (2..=nmax).step_by(2) {
            let s = derive_seed(trial_seed, n as u64);
            let c = random_code(n, n / 2, &f, s)?;
            c.min_distance(limits)?;
            codes.push((c, s));
        }
        let seq: Vec<LinearCode> = codes.iter().map(|(c, _)| c.clone()).collect();
        let first_failure = check_good_prefix(&seq, params, limits)?;
        Ok((codes, first_failure))
    })?;
    let mut w = csv_writer(cfg.csv.as_deref())?;
    w.write_record(["n", "k", "d", "rate", "reldist", "seed"])?;
    let mut summary = String::new();
    for (trial, (codes, failure)) in rows.iter().enumerate() {
        for (c, s) in codes {
            let d = c.min_distance(limits)?;
            let reldist = d.map_or(1.0, |d| d as f64 / c.n() as f64);
            w.write_record([
                c.n().to_string(),
                c.k().to_string(),
                opt(d),
                format!("{:.6}", c.rate()),
                format!("{reldist:.6}"),
                s.to_string(),
            ])?;
        }
        match failure {
            None => writeln!(summary, "trial {trial}: good through n={nmax}").unwrap(),
            Some(v) => writeln!(
                summary,
                "trial {trial}: first failure at n={} ({})",
                codes[v.index].0.n(),
                serde_json::to_value(v.failed)
                    .map_err(Error::from)?
                    .as_str()
                    .unwrap_or("?")
            )
            .unwrap(),
        }
    }
    w.flush()?;
    if cfg.csv.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn frame_girth(cfg: &RunConfig) -> Res {
    let f = cfg.field()?;
    let t = cfg.t()?;
    let beta = cfg.beta()?;
    let count = cfg.trials()?;
    let seed = cfg.seed()?;
    let v = cfg.vertices.unwrap_or(8);
    let e = cfg.edges.unwrap_or(5 * v / 2);
    check_positive("t", t)?;
    check_positive("trials", count)?;
    check_positive("vertices", v)?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Failure::Usage("--beta must lie in (0, 1]".into()));
    }
    let loops = if f.q() == 2 { 0.0 } else { 0.05 };
    let reports = trials(count, |trial| {
        let mut rng = random::substream(seed, trial as u64);
        let g = random::labelled_digraph(&f, v, e, true, loops, &mut rng);
        let rep = FrameRep::from_graph(g)?;
        let r = rank_deficient_set(&rep, t, beta)?;
        let m = rep.matroid();
        Ok((m.rank(), m.len(), r))
    })?;
    let mut w = csv_writer(cfg.csv.as_deref())?;
    w.write_record([
        "trial",
        "r",
        "|M|",
        "t",
        "|X|",
        "bound",
        "deficit",
        "preconds_met",
    ])?;
    for (trial, (rank, size, r)) in reports.iter().enumerate() {
        w.write_record([
            trial.to_string(),
            rank.to_string(),
            size.to_string(),
            t.to_string(),
            r.size().to_string(),
            format!("{:.6}", r.size_bound),
            r.deficit.to_string(),
            r.preconditions_met.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn random_witness(
    m: &ReprMatroid,
    steps: usize,
    rng: &mut InstanceRng,
) -> Res<gfmatroid::PerturbWitness> {
    let f = m.field();
    let lifts = rng.random_range(0..=steps);
    let lift_rows: Vec<_> = (0..lifts)
        .map(|_| random::vector(f, m.len(), rng))
        .collect();
    let rows = m.gen().rows() + lifts;
    let proj: Vec<_> = (0..steps - lifts)
        .map(|_| random::vector(f, rows, rng))
        .collect();
    Ok(compose(m, &lift_rows, &proj)?)
}

struct DemoRow {
    rank_m: usize,
    rank_n: usize,
    deviation: usize,
    exhaustive: bool,
    m_connected: bool,
    n_connected: Option<bool>,
}

fn perturb_demo(cfg: &RunConfig) -> Res {
    let f: FieldSpec = cfg.field()?;
    let n = cfg.n()?;
    let k = cfg.k()?;
    let t = cfg.t()?;
    let count = cfg.trials()?;
    let seed = cfg.seed()?;
    check_positive("n", n)?;
    check_positive("t", t)?;
    check_positive("trials", count)?;
    let limits = &cfg.limits;
    let rows = trials(count, |trial| {
        let mut rng = random::substream(seed, trial as u64);
        let m = random::matroid(&f, n, n / 2, &mut rng);
        let w = random_witness(&m, k, &mut rng)?;
        let pert = w.second()?;
        let dev = rank_deviation_check(&m, &pert, k, limits)?;
        if !dev.within {
            return Err(Error::Violation {
                lemma: "rank deviation",
                detail: serde_json::json!({
                    "trial": trial,
                    "m": m.to_json(),
                    "n": pert.to_json(),
                    "report": dev,
                }),
            }
            .into());
        }
        let conn = connectivity_degradation_check(&m, &pert, k, t, limits)?;
        Ok(DemoRow {
            rank_m: m.rank(),
            rank_n: pert.rank(),
            deviation: dev.max_deviation,
            exhaustive: dev.exhaustive,
            m_connected: conn.m_connected,
            n_connected: conn.n_connected,
        })
    })?;
    let tn = t.saturating_sub(2 * k);
    println!(
        "{:>5}  {:>4}  {:>4}  {:>7}  {:>2}  {:>10}  {:>10}  result",
        "trial",
        "r(M)",
        "r(N)",
        "max_dev",
        "k",
        format!("M vc{t}"),
        format!("N vc{tn}")
    );
    for (trial, r) in rows.iter().enumerate() {
        let n_conn = match r.n_connected {
            Some(b) => b.to_string(),
            None => "-".into(),
        };
        let dev = format!("{}{}", r.deviation, if r.exhaustive { "" } else { "~" });
        println!(
            "{trial:>5}  {:>4}  {:>4}  {dev:>7}  {k:>2}  {:>10}  {n_conn:>10}  pass",
            r.rank_m, r.rank_n, r.m_connected
        );
    }
    Ok(())
}

fn moore_check(cfg: &RunConfig) -> Res {
    let path = cfg.input()?;
    let g = UGraph::from_json(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let r = moore_bound_check(&g)?;
    println!(
        "n={} avg_degree={:.4} girth={} bound={:.4} holds={}",
        r.n, r.avg_degree, r.girth, r.bound, r.holds
    );
    Ok(())
}
