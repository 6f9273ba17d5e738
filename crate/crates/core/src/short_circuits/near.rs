use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{frame_normalize, FrameRep};
use crate::linalg::Limits;
use crate::matroid::ReprMatroid;
use crate::perturb::PerturbWitness;

use super::constants::{bound_constant_c, BoundConstants};
use super::deficiency::{rank_deficient_set, DeficiencyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitRoute {
    /// From the rank-deficient set of the nearby frame matroid.
    Deficiency,
    /// From the arcs at the lowest-degree vertices of the nearby frame
    /// matroid's graph.
    LowDegreeVertices,
    /// The instance is below the size where the bound needs the
    /// construction; the circuit comes from the whole ground set.
    SmallInstance,
}

/// Shrinks the dependent set `idx` to a circuit by dropping elements in
/// order while the rest stays dependent. `None` if `idx` is independent.
pub fn minimize_dependent(m: &ReprMatroid, idx: &[usize]) -> Option<Vec<usize>> {
    if !m.is_dependent_indices(idx) {
        return None;
    }
    let mut cur = idx.to_vec();
    let mut i = 0;
    while i < cur.len() {
        let mut rest = cur.clone();
        rest.remove(i);
        if m.is_dependent_indices(&rest) {
            cur = rest;
        } else {
            i += 1;
        }
    }
    Some(cur)
}

fn check_common(m: &ReprMatroid, beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Precondition(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    if m.is_empty() {
        return Err(Error::Precondition("matroid is empty".into()));
    }
    if (m.len() as f64) < (1.0 + beta) * m.rank() as f64 {
        return Err(Error::Precondition(format!(
            "|M| = {} is below (1 + beta) r(M) = {}",
            m.len(),
            (1.0 + beta) * m.rank() as f64
        )));
    }
    Ok(())
}

fn connected_frame(n: &ReprMatroid, limits: &Limits) -> Result<FrameRep> {
    let rep = FrameRep::from_matrix(frame_normalize(n, limits)?)?;
    if !rep.graph().is_connected() {
        return Err(Error::Precondition(
            "graph of the frame matroid is disconnected".into(),
        ));
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearFrameOutcome {
    pub circuit: Vec<String>,
    pub route: CircuitRoute,
    pub k: usize,
    pub rank: usize,
    pub constants: BoundConstants,
    /// `c ln r(M)`
    pub bound: f64,
    pub within_bound: bool,
    pub deficiency: DeficiencyReport,
}

/// A circuit of `m`, where `w` certifies that `m` is within distance `k`
/// of a matroid `N` with a connected frame representation (`m` is
/// `w.first()`, `N` is `w.second()`).
///
/// A set `X` with `r_N(X) <= |X| - (k+1)` is extracted from `N` with
/// parameter `beta / 2`; ranks in `M` and `N` differ by at most `k`, so `X`
/// is dependent in `M` and is shrunk to a circuit. When too few cover
/// cycles exist and `r(M) < c`, the whole ground set is shrunk instead.
pub fn near_frame_circuit(
    m: &ReprMatroid,
    w: &PerturbWitness,
    beta: f64,
    limits: &Limits,
) -> Result<NearFrameOutcome> {
    check_common(m, beta)?;
    if w.first()? != *m {
        return Err(Error::Precondition("witness does not start at M".into()));
    }
    let k = w.k();
    let n = w.second()?;
    let rep = connected_frame(&n, limits)?;
    let constants = bound_constant_c(k, beta, m.field().q())?;
    let deficiency = rank_deficient_set(&rep, k + 1, beta / 2.0)?;
    let x = m.indices(&deficiency.x)?;
    let r = m.rank();
    let (circuit, route) = if let Some(c) = minimize_dependent(m, &x) {
        (c, CircuitRoute::Deficiency)
    } else if deficiency.cycles_found == k + 1 {
        return Err(Error::Violation {
            lemma: "rank deviation under perturbation",
            detail: serde_json::json!({
                "m": m.to_json(),
                "n": n.to_json(),
                "x": deficiency.x,
            }),
        });
    } else if (r as u64) < constants.c {
        let all: Vec<usize> = (0..m.len()).collect();
        let c = minimize_dependent(m, &all).expect("|M| > r(M) forces dependence");
        (c, CircuitRoute::SmallInstance)
    } else {
        return Err(Error::Precondition(format!(
            "found {} of {} cover cycles at rank {r} >= c",
            deficiency.cycles_found,
            k + 1
        )));
    };
    let bound = constants.c as f64 * (r as f64).ln();
    Ok(NearFrameOutcome {
        within_bound: circuit.len() as f64 <= bound + 1e-9,
        circuit: m.ids(&circuit),
        route,
        k,
        rank: r,
        constants,
        bound,
        deficiency,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearCoframeOutcome {
    pub circuit: Vec<String>,
    pub route: CircuitRoute,
    pub k: usize,
    /// `ceil(12 (3k + 1) / beta)`
    pub c: u64,
    pub within_bound: bool,
    /// Chosen low-degree vertices and their incident arcs.
    pub vertices: Vec<String>,
    pub f: Vec<String>,
    pub degree_sum: usize,
    /// `r(N \ F)` against `r(N) + 1 - 2(k+1)`.
    pub rank_n_rest: usize,
    pub rank_n_rest_bound: i64,
    /// `r(M* \ F)` against `r(M*)`.
    pub rank_dual_rest: usize,
    pub rank_dual: usize,
}

/// A circuit of `m`, where `w` certifies that `M*` is within distance `k`
/// of a matroid `N` with a connected frame representation (`M*` is
/// `w.first()`, `N` is `w.second()`).
///
/// `F` is the set of arcs at the `2(k+1)` lowest-degree vertices (ties by
/// vertex order). Deleting `F` zeroes those rows, so `r(N \ F)` drops by
/// about `2(k+1)` and `r(M* \ F) < r(M*)`; hence `F` contains a cocircuit
/// of `M*`, a circuit of `M`, found by shrinking `F`. A graph with fewer
/// than `2(k+1)` vertices is a small instance.
pub fn near_coframe_circuit(
    m: &ReprMatroid,
    w: &PerturbWitness,
    beta: f64,
    limits: &Limits,
) -> Result<NearCoframeOutcome> {
    check_common(m, beta)?;
    let dual = m.dual();
    if w.first()? != dual {
        return Err(Error::Precondition(
            "witness does not start at the dual of M".into(),
        ));
    }
    let k = w.k();
    let c = (12.0 * (3 * k + 1) as f64 / beta).ceil() as u64;
    let n = w.second()?;
    let rep = connected_frame(&n, limits)?;
    let g = rep.graph();
    let need = 2 * (k + 1);
    let nv = g.vertices().len();
    let rank_n_rest_bound = n.rank() as i64 + 1 - need as i64;
    let mut out = NearCoframeOutcome {
        circuit: Vec::new(),
        route: CircuitRoute::SmallInstance,
        k,
        c,
        within_bound: false,
        vertices: Vec::new(),
        f: Vec::new(),
        degree_sum: 0,
        rank_n_rest: n.rank(),
        rank_n_rest_bound,
        rank_dual_rest: dual.rank(),
        rank_dual: dual.rank(),
    };
    if nv < need {
        let all: Vec<usize> = (0..m.len()).collect();
        let circ = minimize_dependent(m, &all).expect("|M| > r(M) forces dependence");
        out.circuit = m.ids(&circ);
        out.within_bound = circ.len() as u64 <= c;
        return Ok(out);
    }
    let degrees = g.underlying().degrees();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| (degrees[v], v));
    let chosen = &order[..need];
    let mut at_chosen = vec![false; nv];
    for &v in chosen {
        at_chosen[v] = true;
    }
    let f_arcs: Vec<usize> = (0..g.arcs().len())
        .filter(|&i| at_chosen[g.arcs()[i].tail] || at_chosen[g.arcs()[i].head])
        .collect();
    let f_ids: Vec<String> = f_arcs.iter().map(|&i| g.arcs()[i].id.clone()).collect();
    let rest_ids: Vec<&String> = g
        .arcs()
        .iter()
        .map(|a| &a.id)
        .filter(|id| !f_ids.contains(id))
        .collect();
    out.vertices = chosen.iter().map(|&v| g.vertices()[v].clone()).collect();
    out.degree_sum = chosen.iter().map(|&v| degrees[v]).sum();
    out.rank_n_rest = n.rank_of(&rest_ids)?;
    out.rank_dual_rest = dual.rank_of(&rest_ids)?;
    out.route = CircuitRoute::LowDegreeVertices;
    let violation = |what: &str, out: &NearCoframeOutcome| Error::Violation {
        lemma: "rank drop at low-degree vertices",
        detail: serde_json::json!({
            "failed": what,
            "m": m.to_json(),
            "n": n.to_json(),
            "outcome": out,
        }),
    };
    if out.rank_n_rest as i64 > rank_n_rest_bound {
        return Err(violation("r(N \\ F) <= r(N) + 1 - 2(k+1)", &out));
    }
    if out.rank_dual_rest >= out.rank_dual {
        return Err(violation("r(M* \\ F) < r(M*)", &out));
    }
    let f_idx = m.indices(&f_ids)?;
    let Some(circ) = minimize_dependent(m, &f_idx) else {
        return Err(violation("F is dependent in M", &out));
    };
    out.within_bound = circ.len() as u64 <= c;
    out.circuit = m.ids(&circ);
    out.f = f_ids;
    Ok(out)
}
