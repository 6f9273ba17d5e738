//! Linear codes viewed as represented matroids: a code's length, dimension
//! and minimum distance are `|M|`, `r(M)` and `g(M*)`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Limits;
use crate::matroid::ReprMatroid;
use crate::random;

#[derive(Clone, Debug)]
pub struct LinearCode {
    matroid: ReprMatroid,
    distance: OnceLock<Option<usize>>,
}

impl From<ReprMatroid> for LinearCode {
    fn from(matroid: ReprMatroid) -> Self {
        LinearCode {
            matroid,
            distance: OnceLock::new(),
        }
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.distance.get() {
            Some(Some(d)) => write!(f, "[{}, {}, {}]", self.n(), self.k(), d),
            _ => write!(f, "[{}, {}]", self.n(), self.k()),
        }
    }
}

impl LinearCode {
    pub fn matroid(&self) -> &ReprMatroid {
        &self.matroid
    }

    pub fn into_matroid(self) -> ReprMatroid {
        self.matroid
    }

    pub fn field(&self) -> &FieldSpec {
        self.matroid.field()
    }

    pub fn n(&self) -> usize {
        self.matroid.len()
    }

    pub fn k(&self) -> usize {
        self.matroid.rank()
    }

    pub fn rate(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.k() as f64 / self.n() as f64
        }
    }

    /// Minimum distance, i.e. the cogirth of the matroid. `None` for the
    /// zero code. Cached after the first successful computation.
    pub fn min_distance(&self, limits: &Limits) -> Result<Option<usize>> {
        if let Some(d) = self.distance.get() {
            return Ok(*d);
        }
        let d = self.matroid.cogirth(limits)?;
        Ok(*self.distance.get_or_init(|| d))
    }

    /// Removes coordinate `id` from every codeword (matroid deletion).
    pub fn puncture(&self, id: &str) -> Result<LinearCode> {
        Ok(self.matroid.delete(&[id])?.into())
    }

    /// Keeps the codewords vanishing at `id`, then punctures there
    /// (matroid contraction).
    pub fn shorten(&self, id: &str) -> Result<LinearCode> {
        Ok(self.matroid.contract(&[id])?.into())
    }

    pub fn dual(&self) -> LinearCode {
        self.matroid.dual().into()
    }
}

/// A random `[n, k]` code: i.i.d. uniform generator entries, resampled until
/// the generator has rank `k`. Deterministic in `seed`.
pub fn random_code(n: usize, k: usize, field: &FieldSpec, seed: u64) -> Result<LinearCode> {
    if k > n {
        return Err(Error::Precondition(format!(
            "dimension {k} exceeds length {n}"
        )));
    }
    let mut rng = random::rng(seed);
    Ok(random::matroid(field, n, k, &mut rng).into())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GoodnessParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x <= 1.0;
        if !ok(alpha) || !ok(beta) {
            return Err(Error::Precondition(format!(
                "alpha and beta must lie in (0, 1], got ({alpha}, {beta})"
            )));
        }
        Ok(GoodnessParams { alpha, beta })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GoodnessInequality {
    /// `|M_i| >= i`
    Length,
    /// `r(M_i) >= alpha |M_i|`
    Rate,
    /// `g(M_i*) >= beta |M_i|`
    Distance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessViolation {
    pub index: usize,
    pub failed: GoodnessInequality,
}

/// Checks the three `(alpha, beta)`-goodness inequalities on a finite prefix
/// of a sequence indexed from 0, returning the first failure. Passing says
/// nothing about the infinite sequence.
pub fn check_good_prefix(
    seq: &[LinearCode],
    params: GoodnessParams,
    limits: &Limits,
) -> Result<Option<GoodnessViolation>> {
    for (i, c) in seq.iter().enumerate() {
        let n = c.n() as f64;
        let failed = if c.n() < i {
            Some(GoodnessInequality::Length)
        } else if (c.k() as f64) < params.alpha * n {
            Some(GoodnessInequality::Rate)
        } else {
            match c.min_distance(limits)? {
                // the zero code has no nonzero codeword; its distance is unbounded
                None => None,
                Some(d) if (d as f64) < params.beta * n => Some(GoodnessInequality::Distance),
                Some(_) => None,
            }
        };
        if let Some(failed) = failed {
            return Ok(Some(GoodnessViolation { index: i, failed }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    fn gf2() -> FieldSpec {
        FieldSpec::of_order(2).unwrap()
    }

    fn code(rows: &[Vec<u32>]) -> LinearCode {
        ReprMatroid::new(Mat::from_rows(&gf2(), rows).unwrap())
            .unwrap()
            .into()
    }

    fn hamming() -> LinearCode {
        code(&[
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ])
    }

    fn repetition(n: usize) -> LinearCode {
        code(&[vec![1; n]])
    }

    fn identity(n: usize) -> LinearCode {
        ReprMatroid::new(Mat::identity(&gf2(), n)).unwrap().into()
    }

    #[test]
    fn distances() {
        let l = Limits::default();
        let h = hamming();
        assert_eq!(h.min_distance(&l).unwrap(), Some(3));
        assert_eq!(h.to_string(), "[7, 4, 3]");
        assert_eq!(h.dual().min_distance(&l).unwrap(), Some(4));
        assert_eq!(repetition(6).min_distance(&l).unwrap(), Some(6));
        assert_eq!(identity(5).min_distance(&l).unwrap(), Some(1));
        assert_eq!(
            random_code(6, 0, &gf2(), 1)
                .unwrap()
                .min_distance(&l)
                .unwrap(),
            None
        );
    }

    #[test]
    fn puncture_and_shorten() {
        let l = Limits::default();
        let rep = repetition(3).puncture("0").unwrap();
        assert_eq!(
            (rep.n(), rep.k(), rep.min_distance(&l).unwrap()),
            (2, 1, Some(2))
        );
        let full = identity(3).shorten("2").unwrap();
        assert_eq!(
            (full.n(), full.k(), full.min_distance(&l).unwrap()),
            (2, 2, Some(1))
        );
        let h = hamming().puncture("0").unwrap();
        assert_eq!((h.n(), h.k(), h.min_distance(&l).unwrap()), (6, 4, Some(2)));
        assert!(hamming().puncture("x").is_err());
    }

    #[test]
    fn random_code_edges() {
        let l = Limits::default();
        let f = gf2();
        assert_eq!(
            random_code(7, 7, &f, 3).unwrap().min_distance(&l).unwrap(),
            Some(1)
        );
        assert!(random_code(3, 4, &f, 3).is_err());
        let a = random_code(10, 5, &f, 7).unwrap();
        let b = random_code(10, 5, &f, 7).unwrap();
        assert_eq!(a.matroid(), b.matroid());
    }

    #[test]
    fn goodness_prefix_violations() {
        let l = Limits::default();
        let ids: Vec<LinearCode> = (1..=10).map(identity).collect();
        let v = check_good_prefix(&ids, GoodnessParams::new(0.5, 0.2).unwrap(), &l).unwrap();
        // identity of length 6 is the first with 1 < 0.2 * n
        assert_eq!(
            v,
            Some(GoodnessViolation {
                index: 5,
                failed: GoodnessInequality::Distance
            })
        );
        let reps: Vec<LinearCode> = (1..=6).map(repetition).collect();
        let v = check_good_prefix(&reps, GoodnessParams::new(0.5, 0.1).unwrap(), &l).unwrap();
        assert_eq!(
            v,
            Some(GoodnessViolation {
                index: 2,
                failed: GoodnessInequality::Rate
            })
        );
        let short = vec![identity(1), identity(1), identity(1)];
        let v = check_good_prefix(&short, GoodnessParams::new(0.5, 0.5).unwrap(), &l).unwrap();
        assert_eq!(v.map(|v| v.failed), Some(GoodnessInequality::Length));
        assert!(GoodnessParams::new(0.0, 0.5).is_err());
        assert!(GoodnessParams::new(0.5, 1.5).is_err());
    }
}
