use serde::Serialize;

use crate::error::{Error, Result};

/// The constant `c` for the near-frame girth bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub k: usize,
    pub beta: f64,
    /// `beta / 2`
    pub beta_prime: f64,
    pub q: u32,
    /// `max((2q - 3)/beta + 1 - q, q, (4(k+1) / (b' ln(1+b')))^2, (1+b') e^4) + k`
    pub floor: f64,
    pub c: u64,
}

impl BoundConstants {
    /// Whether `4(k+1) ln(x+k) <= c ln(1+b') ln x` at `x`.
    pub fn inequality_at(&self, c: f64, x: f64) -> bool {
        4.0 * (self.k as f64 + 1.0) * (x + self.k as f64).ln()
            <= c * (1.0 + self.beta_prime).ln() * x.ln()
    }

    /// Whether `c` is at least the floor and the inequality holds for every
    /// `x >= c`.
    ///
    /// With `L = ln(1+b')` and `A = 4(k+1)`, `h(x) = cL ln x - A ln(x+k)` has
    /// `h'(x) >= 0` for all `x > 0` exactly when `cL >= A`; otherwise `h`
    /// tends to minus infinity. So validity is `cL >= A` and `h(c) >= 0`.
    pub fn is_valid(&self, c: u64) -> bool {
        let cf = c as f64;
        let a = 4.0 * (self.k as f64 + 1.0);
        cf >= self.floor && cf * (1.0 + self.beta_prime).ln() >= a && self.inequality_at(cf, cf)
    }
}

/// The smallest integer `c` satisfying the floor and the functional
/// inequality. The first floor term uses `beta` itself, the others `b'`.
pub fn bound_constant_c(k: usize, beta: f64, q: u32) -> Result<BoundConstants> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Precondition(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    if q < 2 {
        return Err(Error::Precondition(format!("field order {q} is below 2")));
    }
    let bp = beta / 2.0;
    let (qf, kf) = (q as f64, k as f64);
    let l = (1.0 + bp).ln();
    let floor = ((2.0 * qf - 3.0) / beta + 1.0 - qf)
        .max(qf)
        .max((4.0 * (kf + 1.0) / (bp * l)).powi(2))
        .max((1.0 + bp) * 4f64.exp())
        + kf;
    let mut out = BoundConstants {
        k,
        beta,
        beta_prime: bp,
        q,
        floor,
        c: floor.ceil() as u64,
    };
    // validity is monotone in c; the floor is already within a few steps
    while !out.is_valid(out.c) {
        out.c += 1;
    }
    Ok(out)
}
