//! Acceptance suite: one PASS/FAIL line per criterion. Exact checks are
//! compared against oracles written here, independent of the library's own
//! elimination and search code.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use gfmatroid::code::{random_code, LinearCode};
use gfmatroid::frame::check_dependent_structure;
use gfmatroid::perturb::{
    compose, connectivity_degradation_check, lift_by_row, project_by_covector, rank_deviation_check,
};
use gfmatroid::random::{self, derive_seed, InstanceRng};
use gfmatroid::short_circuits::{
    build_cover, moore_bound_check, near_coframe_circuit, near_frame_circuit, rank_deficient_set,
};
use gfmatroid::{Elem, FieldSpec, FrameRep, Limits, Mat, PerturbWitness, ReprMatroid, UGraph};
use rand::Rng;

const DISTANCE_TIME: Duration = Duration::from_secs(10);
const DUALITY_TIME: Duration = Duration::from_secs(10);
const MOORE_TIME: Duration = Duration::from_secs(60);
/// Relative distance threshold for random rate-1/2 binary codes.
const RELDIST_FLOOR: f64 = 0.05;
const RELDIST_PASS_SHARE: f64 = 0.90;
/// Trials meeting the floor in the seeded run, out of 160.
const RELDIST_GOLDEN_PASSES: usize = 160;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn field(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

// ---- oracles -------------------------------------------------------------

/// Rank of a list of vectors by plain Gaussian elimination.
fn rank_of_vectors(f: &FieldSpec, vectors: &[Vec<Elem>]) -> usize {
    let mut rows: Vec<Vec<Elem>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = f.inv(rows[rank][col]).unwrap();
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = f.mul(rows[i][col], inv);
                for j in 0..width {
                    let v = f.sub(rows[i][j], f.mul(factor, rows[rank][j]));
                    rows[i][j] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_of_columns(a: &Mat, cols: &[usize]) -> usize {
    let vectors: Vec<Vec<Elem>> = cols.iter().map(|&j| a.column(j)).collect();
    rank_of_vectors(a.field(), &vectors)
}

fn matrix_rank(a: &Mat) -> usize {
    rank_of_vectors(a.field(), &a.row_vecs())
}

fn same_row_space(a: &Mat, b: &Mat) -> bool {
    let mut all = a.row_vecs();
    all.extend(b.row_vecs());
    let r = rank_of_vectors(a.field(), &all);
    r == matrix_rank(a) && r == matrix_rank(b)
}

fn dependent(a: &Mat, cols: &[usize]) -> bool {
    rank_of_columns(a, cols) < cols.len()
}

/// Dependent with every one-smaller subset independent.
fn minimally_dependent(a: &Mat, cols: &[usize]) -> bool {
    dependent(a, cols)
        && (0..cols.len()).all(|skip| {
            let rest: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &c)| c)
                .collect();
            !dependent(a, &rest)
        })
}

/// Minimum weight over every nonzero message.
fn distance_by_codewords(c: &LinearCode) -> Option<usize> {
    let f = c.field();
    let basis = c.matroid().basis();
    let k = basis.rows();
    let q = f.q() as u64;
    let mut best: Option<usize> = None;
    for msg in 1..q.pow(k as u32) {
        let mut word = vec![Elem(0); c.n()];
        let mut x = msg;
        for i in 0..k {
            let y = Elem((x % q) as u32);
            x /= q;
            for (w, &b) in word.iter_mut().zip(basis.row(i)) {
                *w = f.add(*w, f.mul(y, b));
            }
        }
        let w = word.iter().filter(|e| !e.is_zero()).count();
        best = Some(best.map_or(w, |b| b.min(w)));
    }
    best
}

/// Girth of a simple graph: the shortest route between the ends of each
/// edge that avoids it.
fn girth_by_edge_removal(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut best = None;
    for (skip, &(u, v)) in edges.iter().enumerate() {
        let mut dist = vec![usize::MAX; n];
        dist[u] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for (i, &(a, b)) in edges.iter().enumerate() {
                if i == skip {
                    continue;
                }
                let y = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[v] != usize::MAX {
            let len = dist[v] + 1;
            best = Some(best.map_or(len, |b: usize| b.min(len)));
        }
    }
    best
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts <= 1
}

/// Vertical t-connectivity from the definition, over every bipartition.
fn vertically_connected(m: &ReprMatroid, t: usize) -> bool {
    let a = m.gen();
    let n = m.len();
    let r = matrix_rank(a);
    let full = (1u64 << n) - 1;
    (0..=full).all(|mask| {
        let side = |s: u64| -> Vec<usize> { (0..n).filter(|&i| s >> i & 1 == 1).collect() };
        let ra = rank_of_columns(a, &side(mask));
        let rb = rank_of_columns(a, &side(full & !mask));
        ra + rb >= r + t - 1 || ra == r || rb == r
    })
}

// ---- instance generators ---------------------------------------------------

fn random_rep(q: u64, vertices: usize, edges: usize, loops: f64, seed: u64) -> FrameRep {
    let g = random::labelled_digraph(
        &field(q),
        vertices,
        edges,
        true,
        loops,
        &mut random::rng(seed),
    );
    FrameRep::from_graph(g).unwrap()
}

fn random_steps(m: &ReprMatroid, steps: usize, rng: &mut InstanceRng) -> PerturbWitness {
    let f = m.field();
    let lifts = rng.random_range(0..=steps);
    let lift_rows: Vec<_> = (0..lifts)
        .map(|_| random::vector(f, m.len(), rng))
        .collect();
    let rows = m.gen().rows() + lifts;
    let proj: Vec<_> = (0..steps - lifts)
        .map(|_| random::vector(f, rows, rng))
        .collect();
    compose(m, &lift_rows, &proj).unwrap()
}

fn hamming74() -> ReprMatroid {
    let h = Mat::from_rows(
        &field(2),
        &[
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
    )
    .unwrap();
    ReprMatroid::new(h).unwrap()
}

// ---- criteria ----------------------------------------------------------------

fn distance_oracle() -> Check {
    let start = Instant::now();
    let l = Limits::default();
    let h: LinearCode = hamming74().into();
    ensure!(
        h.min_distance(&l).unwrap() == Some(3),
        "Hamming [7,4] distance is not 3"
    );
    ensure!(
        h.dual().min_distance(&l).unwrap() == Some(4),
        "dual Hamming distance is not 4"
    );
    let mut rng = random::rng(1);
    for trial in 0..200u64 {
        let q = [2u64, 3, 4][trial as usize % 3];
        // keep q^k small enough to list every codeword
        let kmax = [12usize, 9, 7][trial as usize % 3];
        let n = rng.random_range(1..=12);
        let k = rng.random_range(0..=n.min(kmax));
        let c = random_code(n, k, &field(q), derive_seed(1, trial)).unwrap();
        let fast = c.min_distance(&l).unwrap();
        let slow = distance_by_codewords(&c);
        ensure!(
            fast == slow,
            "trial {trial}: GF({q}) [{n},{k}] cogirth {fast:?} vs enumeration {slow:?}"
        );
    }
    let took = start.elapsed();
    ensure!(took < DISTANCE_TIME, "took {took:?}");
    Ok(format!("Hamming d=3/4, 200 random codes agree, {took:.2?}"))
}

fn duality_and_minors() -> Check {
    let start = Instant::now();
    let mut rng = random::rng(2);
    for trial in 0..500 {
        let f = field([2u64, 3, 4, 5][trial % 4]);
        let n = rng.random_range(1..=10);
        let m = random::matroid(&f, n, rng.random_range(0..=n), &mut rng);
        let d = m.dual();
        ensure!(
            same_row_space(d.dual().gen(), m.gen()),
            "trial {trial}: (M*)* differs from M"
        );
        ensure!(
            matrix_rank(m.gen()) + matrix_rank(d.gen()) == n,
            "trial {trial}: r + r* != |E|"
        );
        for (x, y) in m
            .gen()
            .row_vecs()
            .iter()
            .flat_map(|x| d.gen().row_vecs().into_iter().map(move |y| (x.clone(), y)))
        {
            let dot = x
                .iter()
                .zip(&y)
                .fold(Elem(0), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
            ensure!(dot.is_zero(), "trial {trial}: dual is not orthogonal");
        }
        let c: LinearCode = m.into();
        let id = c.matroid().ground()[rng.random_range(0..n)].clone();
        let lhs = c.puncture(&id).unwrap().dual();
        let rhs = c.dual().shorten(&id).unwrap();
        ensure!(
            lhs.matroid().ground() == rhs.matroid().ground()
                && same_row_space(lhs.matroid().gen(), rhs.matroid().gen()),
            "trial {trial}: dual(puncture) != shorten(dual) at {id}"
        );
    }
    let took = start.elapsed();
    ensure!(took < DUALITY_TIME, "took {took:?}");
    Ok(format!("500 matroids, {took:.2?}"))
}

fn rank_axioms() -> Check {
    let mut pairs = 0u64;
    for seed in 0..60u64 {
        let q = [2u64, 3, 4, 5][seed as usize % 4];
        let n = 1 + seed as usize % 6;
        let mut rng = random::rng(seed);
        let m = random::matroid(&field(q), n, rng.random_range(0..=n), &mut rng);
        let ranks: Vec<usize> = (0u64..1 << n)
            .map(|s| {
                let cols: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
                let r = m.rank_of_mask(s);
                assert_eq!(
                    r,
                    rank_of_columns(m.gen(), &cols),
                    "seed {seed} subset {s:b}"
                );
                r
            })
            .collect();
        for a in 0..ranks.len() {
            ensure!(
                ranks[a] <= (a as u64).count_ones() as usize,
                "seed {seed}: r({a:b}) exceeds size"
            );
            for b in 0..ranks.len() {
                pairs += 1;
                ensure!(
                    a & b != a || ranks[a] <= ranks[b],
                    "seed {seed}: monotonicity at {a:b} {b:b}"
                );
                ensure!(
                    ranks[a | b] + ranks[a & b] <= ranks[a] + ranks[b],
                    "seed {seed}: submodularity at {a:b} {b:b}"
                );
            }
        }
    }
    Ok(format!("{pairs} subset pairs"))
}

fn balanced_cycles(rep: &FrameRep) -> Result<Vec<Vec<usize>>, String> {
    let g = rep.graph();
    let mut out = Vec::new();
    for c in g.underlying().enumerate_cycles(None) {
        let balanced = g.is_balanced(&c).unwrap();
        // a cycle's columns are dependent exactly when it is balanced
        ensure!(
            balanced == dependent(rep.matrix(), &c),
            "cycle {c:?}: sign and rank disagree"
        );
        if balanced {
            out.push(c);
        }
    }
    Ok(out)
}

fn resigning() -> Check {
    let mut cycles = 0;
    for seed in 0..50u64 {
        let q = if seed % 2 == 0 { 3 } else { 4 };
        let mut rng = random::rng(100 + seed);
        let v = rng.random_range(2..=8);
        let e = rng.random_range(v..=v + 5).min(13);
        let rep = random_rep(q, v, e, 0.1, 200 + seed);
        let gamma = random::unit(rep.field(), &mut rng);
        let w: Vec<usize> = (0..v).filter(|_| rng.random_bool(0.5)).collect();
        let after = rep.resign(gamma, &w).unwrap();
        let (b0, b1) = (balanced_cycles(&rep)?, balanced_cycles(&after)?);
        ensure!(b0 == b1, "seed {seed}: balanced cycles changed");
        cycles += rep.graph().underlying().enumerate_cycles(None).len();
    }
    Ok(format!("50 graphs, {cycles} cycles compared"))
}

fn bicycles_dependent() -> Check {
    let (mut balanced, mut thetas) = (0, 0);
    for seed in 0..50u64 {
        let q = [3u64, 4, 5][seed as usize % 3];
        let rep = random_rep(
            q,
            4 + seed as usize % 3,
            7 + seed as usize % 4,
            0.0,
            300 + seed,
        );
        let g = rep.graph().underlying();
        let a = rep.matrix();
        let cycles = g.enumerate_cycles(None);
        for c in &cycles {
            if rep.graph().is_balanced(c).unwrap() {
                balanced += 1;
                ensure!(
                    dependent(a, c),
                    "seed {seed}: balanced cycle {c:?} independent"
                );
            }
        }
        // two cycles sharing an edge, with |E| = |V| + 1, form a theta
        for (i, x) in cycles.iter().enumerate() {
            for y in &cycles[i + 1..] {
                if !x.iter().any(|e| y.contains(e)) {
                    continue;
                }
                let mut u: Vec<usize> = x.iter().chain(y).copied().collect();
                u.sort_unstable();
                u.dedup();
                let mut verts: Vec<usize> = u
                    .iter()
                    .flat_map(|&e| [g.edges[e].0, g.edges[e].1])
                    .collect();
                verts.sort_unstable();
                verts.dedup();
                if u.len() != verts.len() + 1 {
                    continue;
                }
                thetas += 1;
                ensure!(dependent(a, &u), "seed {seed}: theta {u:?} independent");
                ensure!(
                    check_dependent_structure(&rep, &u).unwrap().dependent(),
                    "seed {seed}: library disagrees on {u:?}"
                );
            }
        }
    }
    ensure!(thetas > 0, "no thetas constructed");
    Ok(format!("{balanced} balanced cycles, {thetas} thetas"))
}

fn cover_soundness() -> Check {
    let mut projected = 0;
    for seed in 0..30u64 {
        let mut rng = random::rng(400 + seed);
        let v = rng.random_range(2..=6);
        let e = rng.random_range(v..=10);
        let rep = random_rep(3, v, e, 0.15, 500 + seed);
        let cover = build_cover(&rep).unwrap();
        let t = cover.tree().len();
        ensure!(
            cover.vertex_count() == 2 * v,
            "seed {seed}: {} cover vertices",
            cover.vertex_count()
        );
        ensure!(
            cover.edge_count() == 2 * t + (e - t),
            "seed {seed}: {} cover edges",
            cover.edge_count()
        );
        for c in cover.to_ugraph().enumerate_cycles(None) {
            let x = cover.project(&c);
            projected += 1;
            ensure!(
                dependent(rep.matrix(), &x),
                "seed {seed}: cover cycle {c:?} projects to independent {x:?}"
            );
        }
    }
    Ok(format!("30 covers, {projected} cycles projected"))
}

fn moore_exhaustive() -> Check {
    let start = Instant::now();
    let mut graphs = 0u64;
    for n in 1..=7usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u64..1 << pairs.len() {
            // average degree above 2 means more edges than vertices
            if (mask.count_ones() as usize) <= n {
                continue;
            }
            let edges: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            if !connected(n, &edges) {
                continue;
            }
            graphs += 1;
            let girth = girth_by_edge_removal(n, &edges).unwrap();
            let d = 2.0 * edges.len() as f64 / n as f64;
            let bound = 4.0 + (n as f64).ln() / (d - 1.0).ln();
            ensure!(
                girth as f64 <= bound,
                "n={n} edges {edges:?}: girth {girth} above {bound}"
            );
            let r = moore_bound_check(&UGraph::new(n, edges.clone()).unwrap())
                .map_err(|e| e.to_string())?;
            ensure!(
                r.girth == girth && r.holds,
                "n={n} edges {edges:?}: library reports {r:?}"
            );
        }
    }
    let took = start.elapsed();
    ensure!(took < MOORE_TIME, "took {took:?}");
    Ok(format!("{graphs} labelled graphs, {took:.2?}"))
}

fn run_cli(args: &[&str], threads: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gfmatroid"));
    cmd.args(args).env_remove("MC_BUDGET");
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    cmd.output().unwrap()
}

fn deficiency_contract() -> Check {
    let mut full = 0;
    for seed in 0..100u64 {
        let q = [2u64, 3, 4][seed as usize % 3];
        let mut rng = random::rng(600 + seed);
        let v = rng.random_range(4..=9);
        let e = (2 * v + rng.random_range(0..=v)).min(24);
        let rep = random_rep(q, v, e, if q == 2 { 0.0 } else { 0.05 }, 700 + seed);
        let t = 1 + seed as usize % 3;
        let r = rank_deficient_set(&rep, t, 0.5).map_err(|e| format!("seed {seed}: {e}"))?;
        if r.cycles_found == t {
            full += 1;
            let idx = rep.matroid().indices(&r.x).unwrap();
            let rank = rank_of_columns(rep.matrix(), &idx);
            ensure!(
                rank + t <= idx.len(),
                "seed {seed}: r(X)={rank} |X|={} t={t}",
                idx.len()
            );
        }
    }
    ensure!(full > 0, "no trial found all t cycles");
    let o = run_cli(
        &[
            "frame-girth",
            "--field",
            "3",
            "--t",
            "2",
            "--beta",
            "0.5",
            "--trials",
            "100",
            "--seed",
            "8",
        ],
        None,
    );
    ensure!(
        o.status.code() == Some(0),
        "frame-girth exited with {:?}",
        o.status.code()
    );
    Ok(format!(
        "{full}/100 trials with t cycles, zero violations; CLI exit 0"
    ))
}

fn perturbation() -> Check {
    let l = Limits::default();
    for seed in 0..50u64 {
        let mut rng = random::rng(800 + seed);
        let q = [2u64, 3, 4][seed as usize % 3];
        let n = rng.random_range(3..=7);
        let m = random::matroid(&field(q), n, rng.random_range(0..=n), &mut rng);
        let k = 1 + seed as usize % 3;
        let w = random_steps(&m, k, &mut rng);
        let pert = w.second().unwrap();
        ensure!(
            w.k() == k && w.first().unwrap() == m,
            "seed {seed}: bad witness"
        );
        let report = rank_deviation_check(&m, &pert, k, &l).unwrap();
        let perm = pert.indices(m.ground()).unwrap();
        let mut worst = 0;
        for mask in 0u64..1 << n {
            let y: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let img: Vec<usize> = y.iter().map(|&i| perm[i]).collect();
            worst =
                worst.max(rank_of_columns(m.gen(), &y).abs_diff(rank_of_columns(pert.gen(), &img)));
        }
        ensure!(worst <= k, "seed {seed}: deviation {worst} after {k} steps");
        ensure!(
            report.exhaustive && report.max_deviation == worst,
            "seed {seed}: library reports {report:?}"
        );
    }
    let (mut instances, mut nonvacuous, mut seed) = (0, 0, 0u64);
    while instances < 30 {
        seed += 1;
        let mut rng = random::rng(900 + seed);
        let q = [3u64, 4, 5][seed as usize % 3];
        let m = random::matroid(
            &field(q),
            rng.random_range(6..=8),
            rng.random_range(3..=4),
            &mut rng,
        );
        let t = rng.random_range(2..=4);
        if !vertically_connected(&m, t) {
            continue;
        }
        instances += 1;
        let k = rng.random_range(0..=2);
        let pert = random_steps(&m, k, &mut rng).second().unwrap();
        let v = connectivity_degradation_check(&m, &pert, k, t, &l)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        if t > 2 * k + 1 {
            nonvacuous += 1;
            ensure!(
                vertically_connected(&pert, t - 2 * k),
                "seed {seed}: N not vertically {}-connected",
                t - 2 * k
            );
            ensure!(
                v.n_connected == Some(true),
                "seed {seed}: library verdict {v:?}"
            );
        }
    }
    Ok(format!(
        "50 deviation trials; 30 connectivity instances, {nonvacuous} non-vacuous"
    ))
}

fn circuit_minimality() -> Check {
    let l = Limits::default();
    let (mut frame, mut coframe) = (0, 0);
    for seed in 0..60u64 {
        let q = [2u64, 3, 5][seed as usize % 3];
        let f = field(q);
        let mut rng = random::rng(1000 + seed);
        let v = rng.random_range(3..=5);
        let n = random_rep(q, v, (2 * v + 1).min(12), 0.0, 1100 + seed).matroid();
        let k = seed as usize % 3;
        let lifts: Vec<_> = (0..k.div_ceil(2))
            .map(|_| random::vector(&f, n.len(), &mut rng))
            .collect();
        let rows = n.gen().rows() + lifts.len();
        let proj: Vec<_> = (0..k / 2)
            .map(|_| random::vector(&f, rows, &mut rng))
            .collect();
        let w = compose(&n, &lifts, &proj).unwrap().reversed();
        let m = w.first().unwrap();
        if (m.len() as f64) < 1.5 * m.rank() as f64 {
            continue;
        }
        let out =
            near_frame_circuit(&m, &w, 0.5, &l).map_err(|e| format!("frame seed {seed}: {e}"))?;
        let idx = m.indices(&out.circuit).unwrap();
        ensure!(
            minimally_dependent(m.gen(), &idx),
            "frame seed {seed}: {:?} is not a circuit",
            out.circuit
        );
        frame += 1;
    }
    for seed in 0..60u64 {
        let q = [2u64, 3, 4][seed as usize % 3];
        let f = field(q);
        let mut rng = random::rng(1200 + seed);
        let v = rng.random_range(3..=6);
        let n = random_rep(q, v, v + 3, 0.0, 1300 + seed).matroid();
        let w = match seed % 3 {
            0 => compose(&n, &[], &[]).unwrap(),
            1 => {
                lift_by_row(&n, &random::vector(&f, n.len(), &mut rng))
                    .unwrap()
                    .1
            }
            _ => {
                project_by_covector(&n, &random::vector(&f, n.gen().rows(), &mut rng))
                    .unwrap()
                    .1
            }
        }
        .reversed();
        let m = w.first().unwrap().dual();
        if m.is_empty() || (m.len() as f64) < 1.25 * m.rank() as f64 {
            continue;
        }
        let out = near_coframe_circuit(&m, &w, 0.25, &l)
            .map_err(|e| format!("coframe seed {seed}: {e}"))?;
        let idx = m.indices(&out.circuit).unwrap();
        ensure!(
            minimally_dependent(m.gen(), &idx),
            "coframe seed {seed}: {:?} is not a circuit",
            out.circuit
        );
        coframe += 1;
    }
    ensure!(
        frame > 0 && coframe > 0,
        "too few instances ({frame}, {coframe})"
    );
    Ok(format!(
        "{frame} near-frame and {coframe} near-coframe circuits minimal"
    ))
}

fn reproducibility() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Vec<&str>); 2] = [
        (
            "goodness-scan",
            vec![
                "--field", "2", "--alpha", "0.5", "--beta", "0.05", "--nmax", "18", "--trials",
                "6", "--seed", "11",
            ],
        ),
        (
            "frame-girth",
            vec![
                "--field", "4", "--t", "2", "--beta", "0.5", "--trials", "12", "--seed", "11",
            ],
        ),
    ];
    for (cmd, flags) in &runs {
        let mut outputs = Vec::new();
        for (i, threads) in [None, None, Some("1")].into_iter().enumerate() {
            let path = dir.path().join(format!("{cmd}{i}.csv"));
            let mut args = vec![*cmd];
            args.extend(flags);
            args.extend(["--csv", path.to_str().unwrap()]);
            let o = run_cli(&args, threads);
            ensure!(
                o.status.success(),
                "{cmd} failed: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            outputs.push(std::fs::read(&path).unwrap());
        }
        ensure!(outputs[0] == outputs[1], "{cmd}: two runs differ");
        ensure!(
            outputs[0] == outputs[2],
            "{cmd}: single-threaded run differs"
        );
    }
    Ok("goodness-scan and frame-girth byte-identical across runs and thread counts".into())
}

fn random_code_sanity() -> Check {
    let l = Limits::default();
    let (mut passes, mut total) = (0, 0);
    for n in (10..=24).step_by(2) {
        for trial in 0..20u64 {
            let c = random_code(
                n,
                n / 2,
                &field(2),
                derive_seed(12, (n as u64) << 8 | trial),
            )
            .unwrap();
            let fast = c.min_distance(&l).unwrap();
            ensure!(
                fast == distance_by_codewords(&c),
                "n={n} trial {trial}: distance disagrees with enumeration"
            );
            let d = fast.unwrap_or(n);
            total += 1;
            passes += (d as f64 / n as f64 >= RELDIST_FLOOR) as usize;
        }
    }
    let share = passes as f64 / total as f64;
    ensure!(
        share >= RELDIST_PASS_SHARE,
        "{passes}/{total} meet the floor"
    );
    ensure!(
        passes == RELDIST_GOLDEN_PASSES,
        "{passes}/{total} meet the floor, golden {RELDIST_GOLDEN_PASSES}"
    );
    Ok(format!("{passes}/{total} with d/n >= {RELDIST_FLOOR}"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("distance oracle exactness", distance_oracle),
        ("duality and minors", duality_and_minors),
        ("rank axioms", rank_axioms),
        ("resigning invariance", resigning),
        ("balanced cycles and thetas dependent", bicycles_dependent),
        ("cover soundness", cover_soundness),
        ("Moore bound, all graphs on <= 7 vertices", moore_exhaustive),
        ("rank-deficient set contract", deficiency_contract),
        ("perturbation lemmas", perturbation),
        ("circuit minimality", circuit_minimality),
        ("CSV reproducibility", reproducibility),
        ("random-code relative distance", random_code_sanity),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| f == &id.to_string()) {
            continue;
        }
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
