use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::UGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisjointCycles {
    /// Sorted edge lists, in the order found.
    pub cycles: Vec<Vec<usize>>,
    pub t: usize,
    pub beta: f64,
    /// `2 ln n / ln(1 + beta)`
    pub threshold: f64,
    /// `n >= max((4t / (beta ln(1 + beta)))^2, (1 + beta) e^4)` and
    /// `|E| >= (1 + beta) n`.
    pub preconditions_met: bool,
}

impl DisjointCycles {
    pub fn found(&self) -> usize {
        self.cycles.len()
    }
}

pub(crate) fn lemma_preconditions(n: usize, m: usize, t: usize, beta: f64) -> bool {
    let l = (1.0 + beta).ln();
    let n_min = (4.0 * t as f64 / (beta * l))
        .powi(2)
        .max((1.0 + beta) * 4f64.exp());
    n as f64 >= n_min && m as f64 >= (1.0 + beta) * n as f64
}

/// Greedily collects up to `t` pairwise edge-disjoint cycles of length at
/// most `2 ln n / ln(1 + beta)`: repeatedly take the lexicographically first
/// shortest cycle of the remaining graph while it is short enough.
///
/// The size preconditions are computed and reported; if they hold and fewer
/// than `t` cycles are found, that is a violation.
pub fn disjoint_short_cycles(g: &UGraph, t: usize, beta: f64) -> Result<DisjointCycles> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Precondition(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let n = g.n;
    let threshold = if n == 0 {
        0.0
    } else {
        2.0 * (n as f64).ln() / (1.0 + beta).ln()
    };
    let mut active = vec![true; g.edge_count()];
    let mut cycles = Vec::new();
    while cycles.len() < t {
        let Some(c) = g.shortest_cycle_lex(&active) else {
            break;
        };
        if c.len() as f64 > threshold + 1e-9 {
            break;
        }
        for &e in &c {
            active[e] = false;
        }
        cycles.push(c);
    }
    let out = DisjointCycles {
        cycles,
        t,
        beta,
        threshold,
        preconditions_met: lemma_preconditions(n, g.edge_count(), t, beta),
    };
    if out.preconditions_met && out.found() < t {
        return Err(Error::Violation {
            lemma: "edge-disjoint short cycles",
            detail: serde_json::json!({ "graph": g, "result": out }),
        });
    }
    Ok(out)
}
