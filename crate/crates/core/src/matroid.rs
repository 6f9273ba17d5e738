//! Represented matroids `(E, U)` given by a labelled generator matrix.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{axpy, min_weight, projective_count, Limits, Mat, MatrixJson};

/// A matroid `M(A)` whose ground set is the labelled columns of `A`.
///
/// The generator is kept as supplied (so a frame generator stays a frame
/// generator under deletion); a reduced row basis is cached for rank queries.
#[derive(Clone, Debug)]
pub struct ReprMatroid {
    ground: Vec<String>,
    index: HashMap<String, usize>,
    gen: Mat,
    basis: Mat,
    name: Option<String>,
}

impl PartialEq for ReprMatroid {
    /// Same ground set (in order) and same row space.
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.basis == other.basis
    }
}

/// A partition `(A, B)` of the ground set with its connectivity order
/// `r(A) + r(B) - r(M) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub part_a: Vec<String>,
    pub part_b: Vec<String>,
    pub rank_a: usize,
    pub rank_b: usize,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerticalConnectivity {
    Connected,
    Separated(Separation),
}

impl VerticalConnectivity {
    pub fn is_connected(&self) -> bool {
        matches!(self, VerticalConnectivity::Connected)
    }
}

/// The quantities checked when a matroid is split along a separation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub cogirth_m: Option<usize>,
    pub cogirth_n1: Option<usize>,
    pub cogirth_n2: Option<usize>,
    /// `g(M*) <= min(g(N1*), g(N2*))`, absent cogirth counting as infinite.
    pub cogirth_bound_holds: bool,
    /// `|M| = |N1| + |N2|`
    pub sizes_add_up: bool,
    /// `r(N1) = r(M) - r(B)` and `r(N2) = r(M) - r(A)`
    pub ranks_match: bool,
}

impl SplitReport {
    pub fn all_hold(&self) -> bool {
        self.cogirth_bound_holds && self.sizes_add_up && self.ranks_match
    }
}

fn le_inf(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn min_inf(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `true`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl ReprMatroid {
    /// The matroid generated by `gen`; element IDs are the column labels
    /// (default `"0"`, `"1"`, ...).
    pub fn new(gen: Mat) -> Result<Self> {
        let ground = gen.labels_or_default();
        let mut index = HashMap::with_capacity(ground.len());
        for (i, id) in ground.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        let gen = gen.without_labels().with_labels(ground.clone())?;
        let basis = gen.row_basis().without_labels();
        Ok(ReprMatroid {
            ground,
            index,
            gen,
            basis,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self> {
        let m = ReprMatroid::new(j.to_mat()?)?;
        Ok(match &j.name {
            Some(n) => m.with_name(n.clone()),
            None => m,
        })
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from_mat(&self.gen, self.name.clone())
    }

    pub fn field(&self) -> &FieldSpec {
        self.gen.field()
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    /// `r(M)`
    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// The generator as supplied, with element labels.
    pub fn gen(&self) -> &Mat {
        &self.gen
    }

    /// Canonical full-row-rank generator (RREF).
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn indices<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        ids.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn ids(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.ground[i].clone()).collect()
    }

    /// `r_M(X)`.
    pub fn rank_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<usize> {
        let mut idx = self.indices(ids)?;
        idx.sort_unstable();
        idx.dedup();
        Ok(self.rank_of_indices(&idx))
    }

    pub fn rank_of_indices(&self, idx: &[usize]) -> usize {
        self.basis.rank_of_columns(idx)
    }

    /// Rank of the elements selected by a bitmask over ground positions.
    pub fn rank_of_mask(&self, mask: u64) -> usize {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| mask >> i & 1 == 1).collect();
        self.rank_of_indices(&idx)
    }

    pub fn is_dependent_indices(&self, idx: &[usize]) -> bool {
        self.rank_of_indices(idx) < idx.len()
    }

    pub fn is_spanning_indices(&self, idx: &[usize]) -> bool {
        self.rank_of_indices(idx) == self.rank()
    }

    /// A minimal dependent set: dependent, and every single-element deletion
    /// is independent.
    pub fn is_circuit_indices(&self, idx: &[usize]) -> bool {
        if !self.is_dependent_indices(idx) {
            return false;
        }
        (0..idx.len()).all(|skip| {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &e)| e)
                .collect();
            !self.is_dependent_indices(&rest)
        })
    }

    /// `M \ X`: survivors keep their IDs and generator columns.
    pub fn delete<S: AsRef<str>>(&self, ids: &[S]) -> Result<ReprMatroid> {
        let drop: HashSet<usize> = self.indices(ids)?.into_iter().collect();
        let keep: Vec<usize> = (0..self.len()).filter(|i| !drop.contains(i)).collect();
        let mut m = ReprMatroid::new(self.gen.select_columns(&keep))?;
        m.name = self.name.clone();
        Ok(m)
    }

    /// `M / X`, eliminating one column of the generator at a time: pivot on
    /// its first nonzero entry, clear the column from the other rows, then
    /// drop the pivot row and the column. Contracting a unit-vector column
    /// just removes a row, so frame generators often stay frame.
    pub fn contract<S: AsRef<str>>(&self, ids: &[S]) -> Result<ReprMatroid> {
        let targets = self.indices(ids)?;
        let f = self.field().clone();
        let mut rows = self.gen.row_vecs();
        for &j in &targets {
            let Some(p) = rows.iter().position(|r| !r[j].is_zero()) else {
                continue;
            };
            let pivot = rows.remove(p);
            let inv = f.inv(pivot[j])?;
            for r in &mut rows {
                if !r[j].is_zero() {
                    let c = f.neg(f.mul(r[j], inv));
                    axpy(&f, r, c, &pivot);
                }
            }
        }
        let gen = Mat::from_elem_rows(&f, self.len(), &rows)?.with_labels(self.ground.clone())?;
        let mut m = ReprMatroid::new(gen)?.delete(ids)?;
        m.name = self.name.clone();
        Ok(m)
    }

    /// `M* = (E, U^perp)`.
    pub fn dual(&self) -> ReprMatroid {
        let field = self.field();
        let null = self.basis.nullspace();
        let gen = Mat::from_elem_rows(field, self.len(), &null)
            .and_then(|m| m.with_labels(self.ground.clone()))
            .expect("nullspace vectors have one entry per element");
        let mut m = ReprMatroid::new(gen).expect("ground IDs already unique");
        m.name = self.name.clone();
        m
    }

    /// Size of a smallest circuit, or `None` when `E` is independent.
    ///
    /// Chooses the cheaper of two exact routes: enumerate the nullspace of
    /// the generator up to scalars, or test column subsets by increasing
    /// size (a smallest circuit has at most `r(M) + 1` elements).
    pub fn girth(&self, limits: &Limits) -> Result<Option<usize>> {
        let n = self.len();
        let r = self.rank();
        if n == r {
            return Ok(None);
        }
        let span_cost = projective_count(self.field().q(), n - r);
        let subset_cost: u128 = (1..=(r + 1).min(n))
            .map(|w| binomial(n, w))
            .fold(0, u128::saturating_add);
        let budget = limits.enumeration as u128;
        if span_cost.min(subset_cost) > budget {
            return Err(Error::BudgetExceeded {
                needed: span_cost.min(subset_cost),
                limit: limits.enumeration,
            });
        }
        if span_cost <= subset_cost {
            let null = self.basis.nullspace();
            Ok(min_weight(&null, self.field(), limits)?.map(|(w, _)| w))
        } else {
            Ok((1..=r + 1).find(|&w| for_each_subset(n, w, |s| self.is_dependent_indices(s))))
        }
    }

    /// `g(M*)`: the minimum distance of the code `U`. `None` when `r(M) = 0`.
    pub fn cogirth(&self, limits: &Limits) -> Result<Option<usize>> {
        self.dual().girth(limits)
    }

    /// A smallest circuit, by subset search. Intended for small ground sets.
    pub fn smallest_circuit(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut found = None;
        for w in 1..=(self.rank() + 1).min(n) {
            if for_each_subset(n, w, |s| {
                if self.is_dependent_indices(s) {
                    found = Some(s.to_vec());
                    true
                } else {
                    false
                }
            }) {
                break;
            }
        }
        found
    }

    /// Whether some nonsingular diagonal `D` maps this row space onto the
    /// other's.
    ///
    /// Both sides are brought to RREF; a scaling exists iff the pivot columns
    /// and zero patterns agree and `R2[i][j] = a_i R1[i][j] b_j` is solvable
    /// with nonzero `a`, `b`. The latter is decided by propagating values
    /// along the bipartite row/column graph of nonzero entries, fixing one
    /// free scalar per component.
    pub fn proj_equivalent(&self, other: &ReprMatroid) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::InvalidPartition("ground sets differ".into()));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(scaling_between(&self.basis, &other.basis).is_some())
    }

    /// `proj_equivalent(M / C \ D, N)`.
    pub fn minor_witness_check<S: AsRef<str>>(
        &self,
        contract: &[S],
        delete: &[S],
        n: &ReprMatroid,
    ) -> Result<bool> {
        let minor = self.delete(delete)?.contract(contract)?;
        if minor.ground != n.ground {
            return Ok(false);
        }
        minor.proj_equivalent(n)
    }

    /// `PG(m, F)`: one column per 1-dimensional subspace of `F^(m+1)`, each
    /// normalized so its first nonzero entry is 1.
    pub fn projective_geometry(m: usize, field: &FieldSpec) -> Result<ReprMatroid> {
        if m == 0 {
            return Err(Error::Precondition(
                "projective dimension must be >= 1".into(),
            ));
        }
        let q = field.q();
        let count = projective_count(q, m + 1);
        const MAX_POINTS: u128 = 1 << 16;
        if count > MAX_POINTS {
            return Err(Error::LimitExceeded {
                what: "projective geometry points",
                size: count.min(usize::MAX as u128) as usize,
                limit: MAX_POINTS as usize,
            });
        }
        let dim = m + 1;
        let mut columns: Vec<Vec<Elem>> = Vec::with_capacity(count as usize);
        for lead in 0..dim {
            let free = dim - lead - 1;
            for code in 0..(q as u64).pow(free as u32) {
                let mut v = vec![Elem::ZERO; dim];
                v[lead] = Elem::ONE;
                let mut c = code;
                for slot in v.iter_mut().skip(lead + 1) {
                    *slot = Elem((c % q as u64) as u32);
                    c /= q as u64;
                }
                columns.push(v);
            }
        }
        let mut gen = Mat::zeros(field, dim, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                gen.set(i, j, v);
            }
        }
        let labels = (0..columns.len()).map(|j| format!("p{j}")).collect();
        Ok(ReprMatroid::new(gen.with_labels(labels)?)?.with_name(format!("PG({m},{q})")))
    }

    /// `M1 (+) M2` with a block-diagonal generator. Clashing IDs from the
    /// second summand get a `'` suffix until unique.
    pub fn direct_sum(&self, other: &ReprMatroid) -> Result<ReprMatroid> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let (r1, r2) = (self.gen.rows(), other.gen.rows());
        let (n1, n2) = (self.len(), other.len());
        let mut gen = Mat::zeros(self.field(), r1 + r2, n1 + n2);
        for i in 0..r1 {
            for j in 0..n1 {
                gen.set(i, j, self.gen.get(i, j));
            }
        }
        for i in 0..r2 {
            for j in 0..n2 {
                gen.set(r1 + i, n1 + j, other.gen.get(i, j));
            }
        }
        let mut taken: HashSet<String> = self.ground.iter().cloned().collect();
        let mut labels = self.ground.clone();
        for id in &other.ground {
            let mut id = id.clone();
            while taken.contains(&id) {
                id.push('\'');
            }
            taken.insert(id.clone());
            labels.push(id);
        }
        ReprMatroid::new(gen.with_labels(labels)?)
    }

    /// Whether every partition `(A, B)` with `r(A) + r(B) < r(M) + t - 1`
    /// has a spanning side; otherwise a violating separation of minimum
    /// order (ties broken by the lexicographically smallest side `A`, where
    /// `A` is the smaller side of the partition).
    pub fn vertical_connectivity(&self, t: usize, limits: &Limits) -> Result<VerticalConnectivity> {
        let n = self.len();
        if n > limits.connectivity_elements || n > 63 {
            return Err(Error::LimitExceeded {
                what: "vertical connectivity scan",
                size: n,
                limit: limits.connectivity_elements.min(63),
            });
        }
        let r = self.rank();
        if t <= 1 || n < 2 {
            return Ok(VerticalConnectivity::Connected);
        }
        let threshold = r + t - 1;
        let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        let mut best: Option<(usize, Vec<usize>, usize, usize)> = None;
        for size in 1..=n / 2 {
            for_each_subset(n, size, |a| {
                if 2 * size == n && a[0] != 0 {
                    return false;
                }
                let ra = self.rank_of_indices(a);
                if ra == r {
                    return false;
                }
                let mask = a.iter().fold(0u64, |m, &i| m | 1 << i);
                let rb = self.rank_of_mask(full & !mask);
                if rb == r || ra + rb >= threshold {
                    return false;
                }
                let order = ra + rb + 1 - r;
                let better = match &best {
                    None => true,
                    Some((o, ba, _, _)) => order < *o || (order == *o && a < ba.as_slice()),
                };
                if better {
                    best = Some((order, a.to_vec(), ra, rb));
                }
                false
            });
        }
        Ok(match best {
            None => VerticalConnectivity::Connected,
            Some((order, a, rank_a, rank_b)) => {
                let b: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
                VerticalConnectivity::Separated(Separation {
                    part_a: self.ids(&a),
                    part_b: self.ids(&b),
                    rank_a,
                    rank_b,
                    order,
                })
            }
        })
    }

    /// The separation induced by `part_a` and its complement.
    pub fn separation<S: AsRef<str>>(&self, part_a: &[S]) -> Result<Separation> {
        let a = self.indices(part_a)?;
        let set: HashSet<usize> = a.iter().copied().collect();
        if set.len() != a.len() {
            return Err(Error::InvalidPartition("repeated element".into()));
        }
        let b: Vec<usize> = (0..self.len()).filter(|i| !set.contains(i)).collect();
        let (rank_a, rank_b) = (self.rank_of_indices(&a), self.rank_of_indices(&b));
        Ok(Separation {
            part_a: self.ids(&a),
            part_b: self.ids(&b),
            rank_a,
            rank_b,
            order: rank_a + rank_b + 1 - self.rank(),
        })
    }

    /// Splits along `(A, B)` into `N1 = M / B` and `N2 = M / A` and checks
    /// the cogirth, size and rank relations between the three matroids.
    pub fn separation_split(
        &self,
        s: &Separation,
        limits: &Limits,
    ) -> Result<(ReprMatroid, ReprMatroid, SplitReport)> {
        let a = self.indices(&s.part_a)?;
        let b = self.indices(&s.part_b)?;
        let mut seen = vec![false; self.len()];
        for &i in a.iter().chain(&b) {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPartition(format!(
                    "`{}` appears twice",
                    self.ground[i]
                )));
            }
        }
        if let Some(i) = seen.iter().position(|&x| !x) {
            return Err(Error::InvalidPartition(format!(
                "`{}` is in neither part",
                self.ground[i]
            )));
        }
        let n1 = self.contract(&s.part_b)?;
        let n2 = self.contract(&s.part_a)?;
        let (ra, rb) = (self.rank_of_indices(&a), self.rank_of_indices(&b));
        let cogirth_m = self.cogirth(limits)?;
        let cogirth_n1 = n1.cogirth(limits)?;
        let cogirth_n2 = n2.cogirth(limits)?;
        let report = SplitReport {
            cogirth_bound_holds: le_inf(cogirth_m, min_inf(cogirth_n1, cogirth_n2)),
            sizes_add_up: self.len() == n1.len() + n2.len(),
            ranks_match: n1.rank() + rb == self.rank() && n2.rank() + ra == self.rank(),
            cogirth_m,
            cogirth_n1,
            cogirth_n2,
        };
        Ok((n1, n2, report))
    }
}

/// Row and column scalings `(a, b)` with `to[i][j] = a_i from[i][j] b_j`, if
/// any, for two RREF bases.
fn scaling_between(from: &Mat, to: &Mat) -> Option<(Vec<Elem>, Vec<Elem>)> {
    let f = from.field();
    let (rows, cols) = (from.rows(), from.cols());
    if to.rows() != rows || to.cols() != cols {
        return None;
    }
    for i in 0..rows {
        for j in 0..cols {
            if from.get(i, j).is_zero() != to.get(i, j).is_zero() {
                return None;
            }
        }
    }
    let mut a: Vec<Option<Elem>> = vec![None; rows];
    let mut b: Vec<Option<Elem>> = vec![None; cols];
    // Node ids: rows are 0..rows, columns rows..rows+cols.
    for start in 0..rows + cols {
        let assigned = if start < rows {
            a[start].is_some()
        } else {
            b[start - rows].is_some()
        };
        if assigned {
            continue;
        }
        if start < rows {
            a[start] = Some(Elem::ONE);
        } else {
            b[start - rows] = Some(Elem::ONE);
        }
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            if node < rows {
                let i = node;
                let ai = a[i].expect("visited rows are assigned");
                for j in 0..cols {
                    let x = from.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    // b_j = to / (a_i x)
                    let want = f.div(to.get(i, j), f.mul(ai, x)).expect("nonzero");
                    match b[j] {
                        None => {
                            b[j] = Some(want);
                            stack.push(rows + j);
                        }
                        Some(bj) if bj != want => return None,
                        Some(_) => {}
                    }
                }
            } else {
                let j = node - rows;
                let bj = b[j].expect("visited columns are assigned");
                for i in 0..rows {
                    let x = from.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let want = f.div(to.get(i, j), f.mul(x, bj)).expect("nonzero");
                    match a[i] {
                        None => {
                            a[i] = Some(want);
                            stack.push(i);
                        }
                        Some(ai) if ai != want => return None,
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Some((
        a.into_iter()
            .map(|x| x.expect("all rows assigned"))
            .collect(),
        b.into_iter()
            .map(|x| x.expect("all columns assigned"))
            .collect(),
    ))
}
