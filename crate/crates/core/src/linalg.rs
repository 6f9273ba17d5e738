//! Dense matrices over a [`FieldSpec`] and the exact linear algebra the rest
//! of the crate is built on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldJson, FieldSpec};

/// Size limits for the exhaustive routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of vectors (or subsets) a minimum-weight search may visit.
    pub enumeration: u64,
    /// Ground-set size up to which partitions are scanned exhaustively.
    pub connectivity_elements: usize,
    /// Ground-set size up to which a frame generator is searched for.
    pub frame_search_elements: usize,
    /// Ground-set size up to which all subsets are scanned for rank deviation.
    pub exhaustive_subsets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 1 << 22,
            connectivity_elements: 18,
            frame_search_elements: 10,
            exhaustive_subsets: 18,
        }
    }
}

impl Limits {
    /// Defaults, with the enumeration budget taken from `MC_BUDGET` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(b) = std::env::var("MC_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            limits.enumeration = b;
        }
        limits
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|e| e.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
            labels: None,
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    /// Builds a matrix from packed integer entries.
    pub fn from_rows(field: &FieldSpec, rows: &[Vec<u32>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, rows, cols)
    }

    fn from_rows_with_cols(field: &FieldSpec, rows: &[Vec<u32>], cols: usize) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for &v in r {
                data.push(field.elem(v)?);
            }
        }
        Ok(Mat {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
            labels: None,
        })
    }

    pub fn from_elem_rows(field: &FieldSpec, cols: usize, rows: &[Vec<Elem>]) -> Result<Mat> {
        let mut m = Mat::zeros(field, 0, cols);
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Mat> {
        if labels.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} columns",
                labels.len(),
                self.cols
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Mat {
        self.labels = None;
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Column labels, defaulting to `"0"`, `"1"`, ...
    pub fn labels_or_default(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => (0..self.cols).map(|i| i.to_string()).collect(),
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_packed_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|e| e.0).collect())
            .collect()
    }

    pub fn push_row(&mut self, row: &[Elem]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} for {} columns",
                row.len(),
                self.cols
            )));
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Appends a column; the label is required iff the matrix is labelled.
    pub fn push_column(&mut self, col: &[Elem], label: Option<String>) -> Result<()> {
        if col.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "column of length {} for {} rows",
                col.len(),
                self.rows
            )));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.push(col[i]);
        }
        self.data = data;
        self.cols += 1;
        match (&mut self.labels, label) {
            (Some(l), Some(name)) => l.push(name),
            (None, None) => {}
            (Some(_), None) => return Err(Error::DimensionMismatch("missing label".into())),
            (None, Some(_)) => return Err(Error::DimensionMismatch("unexpected label".into())),
        }
        Ok(())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Submatrix on the given columns, in the given order. Labels follow.
    pub fn select_columns(&self, cols: &[usize]) -> Mat {
        let mut m = Mat::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, j));
            }
        }
        m.labels = self
            .labels
            .as_ref()
            .map(|l| cols.iter().map(|&j| l[j].clone()).collect());
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut m = Mat::zeros(&self.field, rows.len(), self.cols);
        for (k, &i) in rows.iter().enumerate() {
            m.data[k * self.cols..(k + 1) * self.cols].copy_from_slice(self.row(i));
        }
        m.labels = self.labels.clone();
        m
    }

    /// `A * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// `y^T * A`: the row combination with coefficients `y`.
    pub fn combine_rows(&self, y: &[Elem]) -> Result<Vec<Elem>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} rows",
                y.len(),
                self.rows
            )));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &c) in y.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            axpy(f, &mut out, c, self.row(i));
        }
        Ok(out)
    }

    pub fn scale_row(&mut self, i: usize, s: Elem) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, f.mul(s, v));
        }
    }

    /// Reduced row-echelon form and pivot columns (leftmost pivot, rows
    /// scanned top-down). Labels are kept.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut r = self.clone();
        let pivots = rref_in_place(&self.field, &mut r.data, r.rows, r.cols);
        (r, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rref_in_place(&self.field, &mut data, self.rows, self.cols).len()
    }

    /// Rank of the submatrix on `cols`.
    pub fn rank_of_columns(&self, cols: &[usize]) -> usize {
        let w = cols.len();
        if w == 0 || self.rows == 0 {
            return 0;
        }
        let mut data = Vec::with_capacity(self.rows * w);
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        rref_in_place(&self.field, &mut data, self.rows, w).len()
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        r.select_rows(&keep)
    }

    /// A basis of `{x : A x = 0}`, one vector per free column in increasing
    /// column order.
    pub fn nullspace(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut x = vec![Elem::ZERO; self.cols];
                x[free] = Elem::ONE;
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = f.neg(r.get(i, free));
                }
                x
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[Elem]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut m = self.clone();
        let before = m.rank();
        m.push_row(v)?;
        Ok(m.rank() == before)
    }

    /// Row-space equality (labels ignored).
    pub fn same_row_space(&self, other: &Mat) -> bool {
        self.field == other.field
            && self.cols == other.cols
            && self.row_basis().data == other.row_basis().data
    }

    pub fn nonzeros_in_column(&self, j: usize) -> usize {
        (0..self.rows)
            .filter(|&i| !self.get(i, j).is_zero())
            .count()
    }
}

/// `out += c * row`
#[inline]
pub(crate) fn axpy(f: &FieldSpec, out: &mut [Elem], c: Elem, row: &[Elem]) {
    for (o, &a) in out.iter_mut().zip(row) {
        if !a.is_zero() {
            *o = f.add(*o, f.mul(c, a));
        }
    }
}

fn rref_in_place(f: &FieldSpec, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top == rows {
            break;
        }
        let Some(pr) = (top..rows).find(|&i| !data[i * cols + col].is_zero()) else {
            continue;
        };
        if pr != top {
            for j in 0..cols {
                data.swap(pr * cols + j, top * cols + j);
            }
        }
        let inv = f.inv(data[top * cols + col]).expect("pivot is nonzero");
        for j in col..cols {
            data[top * cols + j] = f.mul(inv, data[top * cols + j]);
        }
        for i in 0..rows {
            if i == top {
                continue;
            }
            let factor = data[i * cols + col];
            if factor.is_zero() {
                continue;
            }
            let neg = f.neg(factor);
            for j in col..cols {
                let pv = data[top * cols + j];
                if !pv.is_zero() {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(neg, pv));
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}

pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|e| !e.is_zero()).count()
}

/// Number of vectors visited when enumerating a `dim`-dimensional span up to
/// scalar multiples.
pub fn projective_count(q: u32, dim: usize) -> u128 {
    if dim == 0 {
        return 0;
    }
    let q = q as u128;
    match q.checked_pow(dim as u32) {
        Some(total) => (total - 1) / (q - 1),
        None => u128::MAX,
    }
}

/// Minimum Hamming weight over the nonzero vectors of `span(basis)`, with a
/// witness. `Ok(None)` when the span is zero.
///
/// Every vector whose leading nonzero coefficient is 1 is visited once,
/// in q-ary Gray-code order so each step is a single vector update.
pub fn min_weight(
    basis: &[Vec<Elem>],
    field: &FieldSpec,
    limits: &Limits,
) -> Result<Option<(usize, Vec<Elem>)>> {
    let Some(len) = basis.first().map(Vec::len) else {
        return Ok(None);
    };
    if basis.iter().any(|b| b.len() != len) {
        return Err(Error::DimensionMismatch(
            "basis vectors differ in length".into(),
        ));
    }
    let needed = projective_count(field.q(), basis.len());
    if needed > limits.enumeration as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            limit: limits.enumeration,
        });
    }
    let q = field.q();
    let k = basis.len();
    let mut best: Option<(usize, Vec<Elem>)> = None;
    // lead = index of the coefficient fixed to 1; later coefficients vary.
    for lead in 0..k {
        let tail = &basis[lead + 1..];
        let mut cur = basis[lead].clone();
        let mut gray = vec![0u32; tail.len()];
        let mut counter = vec![0u32; tail.len()];
        loop {
            let w = weight(&cur);
            if w > 0 && best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, cur.clone()));
                if w == 1 {
                    return Ok(best);
                }
            }
            // Increment the base-q counter. The modular Gray digit at the
            // position where the carry stops advances by one.
            let Some(pos) = counter.iter().position(|&d| d != q - 1) else {
                break;
            };
            for d in &mut counter[..pos] {
                *d = 0;
            }
            counter[pos] += 1;
            let old = Elem(gray[pos]);
            gray[pos] = (gray[pos] + 1) % q;
            let delta = field.sub(Elem(gray[pos]), old);
            axpy(field, &mut cur, delta, &tail[pos]);
        }
    }
    Ok(best)
}

/// Serialized matrix: `{"field":{...},"rows":[[...]],"labels":[...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Column count; only needed when `rows` is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cols: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl MatrixJson {
    pub fn to_mat(&self) -> Result<Mat> {
        let field = FieldSpec::try_from(&self.field)?;
        let cols = match (self.rows.first(), &self.labels, self.cols) {
            (Some(r), _, _) => r.len(),
            (None, Some(l), _) => l.len(),
            (None, None, Some(c)) => c,
            (None, None, None) => 0,
        };
        let m = Mat::from_rows_with_cols(&field, &self.rows, cols)?;
        match &self.labels {
            Some(l) => m.with_labels(l.clone()),
            None => Ok(m),
        }
    }

    pub fn from_mat(m: &Mat, name: Option<String>) -> MatrixJson {
        MatrixJson {
            field: FieldJson::from(m.field()),
            rows: m.to_packed_rows(),
            labels: m.labels().map(<[String]>::to_vec),
            cols: (m.rows() == 0).then_some(m.cols()),
            name,
        }
    }
}
