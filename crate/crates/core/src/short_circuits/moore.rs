use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::UGraph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MooreReport {
    pub n: usize,
    pub avg_degree: f64,
    pub girth: usize,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `g <= 4 + ln n / ln(d - 1)` for a graph of girth `g` and average
/// degree `d > 2`. A graph with `d <= 2` is a precondition error.
pub fn moore_bound_check(g: &UGraph) -> Result<MooreReport> {
    let d = g.average_degree();
    if d <= 2.0 {
        return Err(Error::Precondition(format!(
            "average degree {d} is not above 2"
        )));
    }
    let girth = g.girth().expect("average degree above 2 forces a cycle");
    let bound = 4.0 + (g.n as f64).ln() / (d - 1.0).ln();
    let report = MooreReport {
        n: g.n,
        avg_degree: d,
        girth,
        bound,
        holds: girth as f64 <= bound + 1e-9,
    };
    if !report.holds {
        return Err(Error::Violation {
            lemma: "girth bound for average degree above 2",
            detail: serde_json::json!({ "graph": g, "report": report }),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{complete, petersen};

    #[test]
    fn known_graphs() {
        let p = moore_bound_check(&petersen()).unwrap();
        assert_eq!(p.girth, 5);
        assert!((p.bound - (4.0 + 10f64.ln() / 2f64.ln())).abs() < 1e-12);
        assert!((p.bound - 7.3219).abs() < 1e-3);
        let k4 = moore_bound_check(&complete(4)).unwrap();
        assert_eq!((k4.girth, k4.bound), (3, 6.0));
        let c5 = UGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        assert!(matches!(
            moore_bound_check(&c5),
            Err(Error::Precondition(_))
        ));
    }
}
