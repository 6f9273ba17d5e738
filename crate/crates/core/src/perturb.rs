//! Elementary lifts and projections and witnesses for perturbation
//! distance.
//!
//! A witness is a matroid `M+` on `E + C + D` together with the disjoint
//! sets `C`, `D`; it certifies `dist(M+ / C \ D, M+ / D \ C) <= |C| + |D|`.

use std::collections::HashSet;

use rand::seq::index;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg::{Limits, Mat};
use crate::matroid::ReprMatroid;
use crate::random;

#[derive(Clone, Debug)]
pub struct PerturbWitness {
    mplus: ReprMatroid,
    c: Vec<String>,
    d: Vec<String>,
}

impl PerturbWitness {
    pub fn new(mplus: ReprMatroid, c: Vec<String>, d: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for id in c.iter().chain(&d) {
            if !mplus.contains(id) {
                return Err(Error::UnknownElement(id.clone()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidPartition(format!(
                    "`{id}` is in both C and D"
                )));
            }
        }
        Ok(PerturbWitness { mplus, c, d })
    }

    pub fn mplus(&self) -> &ReprMatroid {
        &self.mplus
    }

    pub fn c(&self) -> &[String] {
        &self.c
    }

    pub fn d(&self) -> &[String] {
        &self.d
    }

    pub fn k(&self) -> usize {
        self.c.len() + self.d.len()
    }

    /// `M+ / C \ D`
    pub fn first(&self) -> Result<ReprMatroid> {
        self.mplus.contract(&self.c)?.delete(&self.d)
    }

    /// `M+ / D \ C`
    pub fn second(&self) -> Result<ReprMatroid> {
        self.mplus.contract(&self.d)?.delete(&self.c)
    }

    /// The same witness read from the other end.
    pub fn reversed(&self) -> PerturbWitness {
        PerturbWitness {
            mplus: self.mplus.clone(),
            c: self.d.clone(),
            d: self.c.clone(),
        }
    }

    /// Whether the two minors have the row spaces of `m1` and `m2`.
    pub fn certifies(&self, m1: &ReprMatroid, m2: &ReprMatroid) -> Result<bool> {
        Ok(self.first()? == *m1 && self.second()? == *m2)
    }
}

fn fresh_ids(taken: &[String], count: usize, prefix: &str) -> Vec<String> {
    let taken: HashSet<&str> = taken.iter().map(String::as_str).collect();
    (0..)
        .map(|i| format!("{prefix}{i}"))
        .filter(|id| !taken.contains(id.as_str()))
        .take(count)
        .collect()
}

/// Lifts `m` by the rows `lifts`, then projects by the columns
/// `projections`, as one witness.
///
/// With `G` the generator of `m` (`r` rows), `W` the lift rows and `Y` the
/// projection columns (`r + |W|` entries each, in the coordinates of the
/// stacked rows `G`, `W`), `M+` is generated by
///
/// ```text
/// [ G  0  Y_G ]
/// [ W  I  Y_W ]
/// ```
///
/// with `C` the identity columns and `D` the `Y` columns. Then `M+ / C \ D`
/// is `m` and `M+ / D \ C` is the perturbed matroid.
pub fn compose(
    m: &ReprMatroid,
    lifts: &[Vec<Elem>],
    projections: &[Vec<Elem>],
) -> Result<PerturbWitness> {
    let f = m.field().clone();
    let gen = m.gen();
    let (r, n, l) = (gen.rows(), m.len(), lifts.len());
    if let Some(w) = lifts.iter().find(|w| w.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "lift row of length {} for {n} elements",
            w.len()
        )));
    }
    if let Some(y) = projections.iter().find(|y| y.len() != r + l) {
        return Err(Error::DimensionMismatch(format!(
            "projection column of length {} for {} rows",
            y.len(),
            r + l
        )));
    }
    let mut ground = m.ground().to_vec();
    let c = fresh_ids(&ground, l, "lift");
    ground.extend(c.iter().cloned());
    let d = fresh_ids(&ground, projections.len(), "proj");
    ground.extend(d.iter().cloned());

    let width = n + l + projections.len();
    let mut rows = Vec::with_capacity(r + l);
    for i in 0..r + l {
        let mut row = Vec::with_capacity(width);
        if i < r {
            row.extend_from_slice(gen.row(i));
        } else {
            row.extend_from_slice(&lifts[i - r]);
        }
        row.extend((0..l).map(|j| if i == r + j { Elem::ONE } else { Elem::ZERO }));
        row.extend(projections.iter().map(|y| y[i]));
        rows.push(row);
    }
    let mplus = ReprMatroid::new(Mat::from_elem_rows(&f, width, &rows)?.with_labels(ground)?)?;
    PerturbWitness::new(mplus, c, d)
}

/// An elementary projection: `M+` is `m` plus a new element `e` whose
/// column is `c` (one entry per generator row); returns `M+ / e`.
pub fn project_by_covector(m: &ReprMatroid, c: &[Elem]) -> Result<(ReprMatroid, PerturbWitness)> {
    let w = compose(m, &[], &[c.to_vec()])?;
    Ok((w.second()?, w))
}

/// An elementary lift: `M+` is generated by `[[G, 0], [w, 1]]`, so
/// `M+ / e = m`; returns `M+ \ e`, the row space of `G` plus `w`.
pub fn lift_by_row(m: &ReprMatroid, w: &[Elem]) -> Result<(ReprMatroid, PerturbWitness)> {
    let wit = compose(m, &[w.to_vec()], &[])?;
    Ok((wit.second()?, wit))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationReport {
    pub max_deviation: usize,
    /// A subset attaining the maximum.
    pub worst: Vec<String>,
    pub subsets_checked: u64,
    pub exhaustive: bool,
    pub within: bool,
}

/// `max_Y |r_M(Y) - r_N(Y)|`, over all subsets when `|E|` is within the
/// exhaustive limit and over a fixed-seed sample otherwise.
pub fn rank_deviation_check(
    m: &ReprMatroid,
    n: &ReprMatroid,
    k: usize,
    limits: &Limits,
) -> Result<DeviationReport> {
    if m.len() != n.len() || m.ground().iter().any(|id| !n.contains(id)) {
        return Err(Error::InvalidPartition("ground sets differ".into()));
    }
    let perm = n.indices(m.ground())?;
    let size = m.len();
    let mut best = (0usize, Vec::new());
    let mut check = |y: &[usize]| {
        let img: Vec<usize> = y.iter().map(|&i| perm[i]).collect();
        let dev = m.rank_of_indices(y).abs_diff(n.rank_of_indices(&img));
        if dev > best.0 {
            best = (dev, y.to_vec());
        }
    };
    let (checked, exhaustive) = if size <= limits.exhaustive_subsets {
        let mut y = Vec::with_capacity(size);
        for mask in 0u64..1 << size {
            y.clear();
            y.extend((0..size).filter(|&i| mask >> i & 1 == 1));
            check(&y);
        }
        (1u64 << size, true)
    } else {
        const SAMPLES: u64 = 1 << 14;
        let mut rng = random::rng(0x5eed);
        for s in 0..SAMPLES {
            let amount = (s as usize) % (size + 1);
            let mut y = index::sample(&mut rng, size, amount).into_vec();
            y.sort_unstable();
            check(&y);
        }
        (SAMPLES, false)
    };
    Ok(DeviationReport {
        max_deviation: best.0,
        worst: m.ids(&best.1),
        subsets_checked: checked,
        exhaustive,
        within: best.0 <= k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityVerdict {
    pub t: usize,
    pub k: usize,
    /// `t - 2k <= 1`: vertical 1-connectivity always holds.
    pub vacuous: bool,
    pub m_connected: bool,
    /// `None` when not evaluated.
    pub n_connected: Option<bool>,
}

/// If `m` is vertically `t`-connected then `n`, within perturbation
/// distance `k` of it, must be vertically `(t - 2k)`-connected. A failure is
/// reported as a violation carrying both matroids.
pub fn connectivity_degradation_check(
    m: &ReprMatroid,
    n: &ReprMatroid,
    k: usize,
    t: usize,
    limits: &Limits,
) -> Result<ConnectivityVerdict> {
    let m_connected = m.vertical_connectivity(t, limits)?.is_connected();
    let vacuous = t <= 2 * k + 1;
    let n_connected = if m_connected && !vacuous {
        Some(n.vertical_connectivity(t - 2 * k, limits)?.is_connected())
    } else {
        None
    };
    let verdict = ConnectivityVerdict {
        t,
        k,
        vacuous,
        m_connected,
        n_connected,
    };
    if n_connected == Some(false) {
        return Err(Error::Violation {
            lemma: "connectivity under perturbation",
            detail: serde_json::json!({
                "m": m.to_json(),
                "n": n.to_json(),
                "verdict": verdict,
            }),
        });
    }
    Ok(verdict)
}
