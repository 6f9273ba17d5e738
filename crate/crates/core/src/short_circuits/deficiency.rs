use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::FrameRep;

use super::cover::build_cover;
use super::cycles::disjoint_short_cycles;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficiencyReport {
    /// Element IDs of `X`, in ground order.
    pub x: Vec<String>,
    pub rank_x: usize,
    pub t: usize,
    pub beta: f64,
    pub cycles_found: usize,
    /// Projection of each cover cycle, as element IDs.
    pub projected: Vec<Vec<String>>,
    /// `|X| - r(X)`
    pub deficit: usize,
    /// `4 t ln r(M) / ln(1 + beta)`
    pub size_bound: f64,
    pub within_size_bound: bool,
    /// The size preconditions of the disjoint-cycle step, on `G+`.
    pub cycle_preconditions_met: bool,
    /// The rank and size hypotheses under which `t` cycles are guaranteed.
    pub preconditions_met: bool,
}

impl DeficiencyReport {
    pub fn size(&self) -> usize {
        self.x.len()
    }
}

fn corollary_preconditions(q: f64, rank: f64, size: f64, t: f64, beta: f64) -> bool {
    let l = (1.0 + beta).ln();
    let floor = q
        .max((2.0 * q - 3.0) / beta + 1.0 - q)
        .max((4.0 * t / (beta * l)).powi(2) / (q - 1.0))
        .max((1.0 + beta) * 4f64.exp() / (q - 1.0));
    rank >= floor && size >= (1.0 + q * beta) * rank
}

/// Finds `X` with `r(X) <= |X| - t` from `t` edge-disjoint short cycles of
/// the cover graph.
///
/// Every projected cycle is checked to be dependent, and when all `t`
/// cycles are found the deficit of their union is checked directly; either
/// failure is a violation. Fewer than `t` cycles is not an error unless the
/// size preconditions of the cycle step held.
pub fn rank_deficient_set(rep: &FrameRep, t: usize, beta: f64) -> Result<DeficiencyReport> {
    let cover = build_cover(rep)?;
    let g = cover.to_ugraph();
    let found = disjoint_short_cycles(&g, t, beta)?;
    let m = rep.matroid();
    let ids = m.ground();
    let mut union = vec![false; m.len()];
    let mut projected = Vec::with_capacity(found.found());
    for c in &found.cycles {
        let arcs = cover.project(c);
        if !m.is_dependent_indices(&arcs) {
            return Err(Error::Violation {
                lemma: "cover cycles project to dependent sets",
                detail: serde_json::json!({
                    "matrix": rep.matrix().to_packed_rows(),
                    "cover_cycle": c,
                    "projection": m.ids(&arcs),
                }),
            });
        }
        for &a in &arcs {
            union[a] = true;
        }
        projected.push(m.ids(&arcs));
    }
    let x: Vec<usize> = (0..m.len()).filter(|&i| union[i]).collect();
    let rank_x = m.rank_of_indices(&x);
    let r = m.rank();
    let size_bound = if r > 1 {
        4.0 * t as f64 * (r as f64).ln() / (1.0 + beta).ln()
    } else {
        0.0
    };
    let q = m.field().q() as f64;
    let report = DeficiencyReport {
        x: x.iter().map(|&i| ids[i].clone()).collect(),
        rank_x,
        t,
        beta,
        cycles_found: found.found(),
        projected,
        deficit: x.len() - rank_x,
        size_bound,
        within_size_bound: x.len() as f64 <= size_bound + 1e-9,
        cycle_preconditions_met: found.preconditions_met,
        preconditions_met: corollary_preconditions(q, r as f64, m.len() as f64, t as f64, beta),
    };
    if report.cycles_found == t && report.deficit < t {
        return Err(Error::Violation {
            lemma: "rank deficiency of disjoint cover cycles",
            detail: serde_json::json!({
                "matrix": rep.matrix().to_packed_rows(),
                "labels": ids,
                "report": report,
            }),
        });
    }
    Ok(report)
}
