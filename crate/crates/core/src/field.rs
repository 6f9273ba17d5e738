//! Arithmetic in GF(p^n).
//!
//! An element is stored as an integer in `[0, q)` whose base-`p` digits are the
//! coefficients of its polynomial representative, lowest digit first. Fields
//! with `q <= 256` multiply through exp/log tables keyed on a primitive
//! element; larger fields reduce polynomial products against the modulus.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// A raw field element. Only meaningful together with the [`FieldSpec`] that
/// produced it.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

/// A finite field GF(p^n) with a fixed modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("n", &self.0.n)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.n == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.n)
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^n` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut n) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let coef = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - coef * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let p = p as u64;
    let (mut acc, mut base) = (1u64, b as u64 % p);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc as u32
}

fn digits(mut v: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Whether the monic polynomial `m` (degree >= 1) is irreducible over GF(p).
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d as u32);
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^n), using the default modulus when `modulus` is `None`.
    ///
    /// The default is the monic irreducible of degree `n` whose packed
    /// lower coefficients form the smallest integer.
    pub fn new(p: u64, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::BadModulus("extension degree must be >= 1".into()));
        }
        let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, n });
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 {
                    return Err(Error::BadModulus(format!(
                        "expected {} coefficients for degree {n}, got {}",
                        n + 1,
                        m.len()
                    )));
                }
                if m[n as usize] != 1 {
                    return Err(Error::BadModulus("modulus must be monic".into()));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!(
                        "coefficient out of range for p = {p}"
                    )));
                }
                if !is_irreducible(m, p) {
                    return Err(Error::BadModulus(format!(
                        "{m:?} is reducible over GF({p})"
                    )));
                }
                m.to_vec()
            }
            None => (0..q)
                .map(|low| {
                    let mut m = digits(low, p, n);
                    m.push(1);
                    m
                })
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists"),
        };
        let mut t = Tables {
            p,
            n,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add: Vec::new(),
            neg: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            build_tables(&mut t);
        }
        Ok(FieldSpec(Arc::new(t)))
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrime(q))?;
        Self::new(p, n, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elem(&self, value: u32) -> Result<Elem> {
        if value < self.0.q {
            Ok(Elem(value))
        } else {
            Err(Error::NotAnElement {
                value: value as u64,
                q: self.0.q,
            })
        }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        (1..self.0.q).map(Elem)
    }

    /// Membership in the prime subfield: no coefficients above degree 0.
    pub fn in_prime_subfield(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.0;
        if t.p == 2 {
            Elem(a.0 ^ b.0)
        } else if t.n == 1 {
            Elem((a.0 + b.0) % t.p)
        } else if !t.add.is_empty() {
            Elem(t.add[(a.0 * t.q + b.0) as usize] as u32)
        } else {
            let (da, db) = (digits(a.0, t.p, t.n), digits(b.0, t.p, t.n));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % t.p).collect();
            Elem(from_digits(&s, t.p))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let t = &*self.0;
        if t.p == 2 {
            a
        } else if t.n == 1 {
            Elem((t.p - a.0) % t.p)
        } else if !t.neg.is_empty() {
            Elem(t.neg[a.0 as usize] as u32)
        } else {
            let d: Vec<u32> = digits(a.0, t.p, t.n)
                .iter()
                .map(|x| (t.p - x) % t.p)
                .collect();
            Elem(from_digits(&d, t.p))
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.0;
        if !t.log.is_empty() {
            let s = t.log[a.0 as usize] + t.log[b.0 as usize];
            Elem(t.exp[(s % (t.q - 1)) as usize])
        } else if t.n == 1 {
            Elem(((a.0 as u64 * b.0 as u64) % t.p as u64) as u32)
        } else {
            Elem(poly_mul(t, a.0, b.0))
        }
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = &*self.0;
        if !t.log.is_empty() {
            let l = t.log[a.0 as usize];
            Ok(Elem(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]))
        } else if t.n == 1 {
            Ok(Elem(pow_mod(a.0, t.p - 2, t.p)))
        } else {
            Ok(self.pow(a, t.q - 2))
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u32) -> Elem {
        let (mut acc, mut base) = (Elem::ONE, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The smallest element different from 0 and 1, if any.
    pub fn smallest_non_identity_unit(&self) -> Option<Elem> {
        (self.0.q > 2).then_some(Elem(2))
    }
}

fn poly_mul(t: &Tables, a: u32, b: u32) -> u32 {
    let (da, db) = (digits(a, t.p, t.n), digits(b, t.p, t.n));
    let mut prod = vec![0u32; (2 * t.n - 1) as usize];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % t.p;
        }
    }
    let mut r = poly_rem(&prod, &t.modulus, t.p);
    r.resize(t.n as usize, 0);
    from_digits(&r, t.p)
}

fn build_tables(t: &mut Tables) {
    let q = t.q;
    if t.n > 1 {
        t.add = (0..q * q)
            .map(|ab| {
                let (da, db) = (digits(ab / q, t.p, t.n), digits(ab % q, t.p, t.n));
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % t.p).collect();
                from_digits(&s, t.p) as u16
            })
            .collect();
        t.neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, t.p, t.n)
                    .iter()
                    .map(|x| (t.p - x) % t.p)
                    .collect();
                from_digits(&d, t.p) as u16
            })
            .collect();
    }
    let slow_mul = |t: &Tables, a: u32, b: u32| -> u32 {
        if t.n == 1 {
            a * b % t.p
        } else {
            poly_mul(t, a, b)
        }
    };
    if q == 2 {
        t.exp = vec![1];
        t.log = vec![0, 0];
        return;
    }
    for g in 2..q {
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut x = 1;
        loop {
            exp.push(x);
            x = slow_mul(t, x, g);
            if x == 1 {
                break;
            }
        }
        if exp.len() == (q - 1) as usize {
            let mut log = vec![0; q as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            t.exp = exp;
            t.log = log;
            return;
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic");
}

/// An element paired with its field, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: FieldSpec,
    value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Inv,
}

impl FieldElem {
    pub fn new(field: &FieldSpec, value: u32) -> Result<Self> {
        Ok(FieldElem {
            value: field.elem(value)?,
            field: field.clone(),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    /// Applies `op`. Binary ops need `rhs` from the same field.
    pub fn apply(&self, op: ArithOp, rhs: Option<&FieldElem>) -> Result<FieldElem> {
        let f = &self.field;
        let binary = |rhs: Option<&FieldElem>| -> Result<Elem> {
            let r = rhs
                .ok_or_else(|| Error::Precondition("binary operation needs two operands".into()))?;
            if r.field != *f {
                return Err(Error::FieldMismatch);
            }
            Ok(r.value)
        };
        let value = match op {
            ArithOp::Add => f.add(self.value, binary(rhs)?),
            ArithOp::Mul => f.mul(self.value, binary(rhs)?),
            ArithOp::Neg => f.neg(self.value),
            ArithOp::Inv => f.inv(self.value)?,
        };
        Ok(FieldElem {
            field: f.clone(),
            value,
        })
    }
}

/// Serialized form of a field: `{"p":2,"n":1,"modulus":[0,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    #[serde(default = "one")]
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl From<&FieldSpec> for FieldJson {
    fn from(f: &FieldSpec) -> Self {
        FieldJson {
            p: f.p() as u64,
            n: f.n(),
            modulus: Some(f.modulus().to_vec()),
        }
    }
}

impl TryFrom<&FieldJson> for FieldSpec {
    type Error = Error;

    fn try_from(j: &FieldJson) -> Result<Self> {
        FieldSpec::new(j.p, j.n, j.modulus.as_deref())
    }
}
