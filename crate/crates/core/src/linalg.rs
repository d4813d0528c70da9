//! Sparse exact matrices: rank, kernel witnesses and matrix-vector products.

use std::collections::{BTreeMap, HashSet};

use indexmap::IndexMap;
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, FieldValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("duplicate {kind} id {id:?}")]
    DuplicateId { kind: &'static str, id: String },
    #[error("empty {kind} id")]
    EmptyId { kind: &'static str },
    #[error("unknown row id {0:?}")]
    UnknownRow(String),
    #[error("unknown column id {0:?}")]
    UnknownColumn(String),
    #[error("duplicate entry ({row:?}, {col:?})")]
    DuplicateEntry { row: String, col: String },
    #[error("explicit zero stored at ({row:?}, {col:?})")]
    ZeroEntry { row: String, col: String },
    #[error("no value given for column {0:?}")]
    MissingValue(String),
    #[error("assignment is not a kernel witness: {0}")]
    NotAWitness(&'static str),
}

/// A finite matrix with named rows and columns; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    entries: BTreeMap<(usize, usize), FieldValue>,
}

fn check_ids(kind: &'static str, ids: &[String]) -> Result<(), MatrixError> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if id.is_empty() {
            return Err(MatrixError::EmptyId { kind });
        }
        if !seen.insert(id.as_str()) {
            return Err(MatrixError::DuplicateId {
                kind,
                id: id.clone(),
            });
        }
    }
    Ok(())
}

impl SparseMatrix {
    pub fn new<I>(
        field: FieldSpec,
        row_ids: Vec<String>,
        col_ids: Vec<String>,
        entries: I,
    ) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (String, String, FieldValue)>,
    {
        check_ids("row", &row_ids)?;
        check_ids("column", &col_ids)?;
        let row_pos: IndexMap<&str, usize> = row_ids
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_str(), i))
            .collect();
        let col_pos: IndexMap<&str, usize> = col_ids
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_str(), i))
            .collect();
        let mut stored = BTreeMap::new();
        for (row, col, value) in entries {
            if value.spec() != field {
                return Err(FieldError::SpecMismatch {
                    left: field,
                    right: value.spec(),
                }
                .into());
            }
            let r = *row_pos
                .get(row.as_str())
                .ok_or_else(|| MatrixError::UnknownRow(row.clone()))?;
            let c = *col_pos
                .get(col.as_str())
                .ok_or_else(|| MatrixError::UnknownColumn(col.clone()))?;
            if value.is_zero() {
                return Err(MatrixError::ZeroEntry { row, col });
            }
            if stored.insert((r, c), value).is_some() {
                return Err(MatrixError::DuplicateEntry { row, col });
            }
        }
        Ok(SparseMatrix {
            field,
            row_ids,
            col_ids,
            entries: stored,
        })
    }

    /// Builds a matrix from dense integer rows, naming rows `r1..` and columns `c1..`.
    /// Zeros are dropped.
    pub fn from_dense(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        let n_cols = rows.first().map_or(0, Vec::len);
        let values = rows
            .iter()
            .map(|row| {
                assert_eq!(row.len(), n_cols, "ragged dense matrix");
                row.iter()
                    .map(|&v| FieldValue::from_int(field, v))
                    .collect()
            })
            .collect::<Vec<Vec<_>>>();
        Self::from_dense_values(field, rows.len(), n_cols, &values)
    }

    pub(crate) fn from_dense_values(
        field: FieldSpec,
        n_rows: usize,
        n_cols: usize,
        values: &[Vec<FieldValue>],
    ) -> Self {
        let row_ids = (1..=n_rows).map(|i| format!("r{i}")).collect();
        let col_ids = (1..=n_cols).map(|j| format!("c{j}")).collect();
        let mut entries = BTreeMap::new();
        for (r, row) in values.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    entries.insert((r, c), v.clone());
                }
            }
        }
        SparseMatrix {
            field,
            row_ids,
            col_ids,
            entries,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn n_rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn row_index(&self, id: &str) -> Option<usize> {
        self.row_ids.iter().position(|r| r == id)
    }

    pub fn col_index(&self, id: &str) -> Option<usize> {
        self.col_ids.iter().position(|c| c == id)
    }

    /// Entry at positional indices, `None` for zero.
    pub fn entry_at(&self, row: usize, col: usize) -> Option<&FieldValue> {
        self.entries.get(&(row, col))
    }

    pub fn get(&self, row: &str, col: &str) -> Option<&FieldValue> {
        self.entry_at(self.row_index(row)?, self.col_index(col)?)
    }

    /// Stored entries in row-major declared order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &FieldValue)> {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (self.row_ids[r].as_str(), self.col_ids[c].as_str(), v))
    }

    pub(crate) fn positional_entries(&self) -> impl Iterator<Item = (usize, usize, &FieldValue)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            field: self.field,
            row_ids: self.col_ids.clone(),
            col_ids: self.row_ids.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&(r, c), v)| ((c, r), v.clone()))
                .collect(),
        }
    }

    /// Same rows, only the given columns (positional indices, in the given order).
    pub fn select_columns(&self, cols: &[usize]) -> SparseMatrix {
        let remap: BTreeMap<usize, usize> = cols
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        SparseMatrix {
            field: self.field,
            row_ids: self.row_ids.clone(),
            col_ids: cols.iter().map(|&c| self.col_ids[c].clone()).collect(),
            entries: self
                .entries
                .iter()
                .filter_map(|(&(r, c), v)| remap.get(&c).map(|&nc| ((r, nc), v.clone())))
                .collect(),
        }
    }

    fn dense(&self) -> Vec<Vec<FieldValue>> {
        let zero = FieldValue::zero(self.field);
        let mut rows = vec![vec![zero; self.n_cols()]; self.n_rows()];
        for (&(r, c), v) in &self.entries {
            rows[r][c] = v.clone();
        }
        rows
    }
}

/// Reduced row echelon form of a dense matrix, in place.
///
/// Pivoting is deterministic: columns are scanned in order and the pivot is
/// the first unused row (in original row order) holding a nonzero entry.
/// Rows are never physically swapped. Returns `(column, row)` pivot pairs.
fn reduce(rows: &mut [Vec<FieldValue>], n_cols: usize) -> Vec<(usize, usize)> {
    let mut used = vec![false; rows.len()];
    let mut pivots = Vec::new();
    for col in 0..n_cols {
        let Some(prow) = (0..rows.len()).find(|&r| !used[r] && !rows[r][col].is_zero()) else {
            continue;
        };
        used[prow] = true;
        let inv = rows[prow][col].inv().expect("pivot is nonzero");
        for v in rows[prow].iter_mut().skip(col) {
            *v = v.try_mul(&inv).expect("homogeneous field");
        }
        let pivot_row = rows[prow].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == prow || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..n_cols {
                if pivot_row[c].is_zero() {
                    continue;
                }
                let delta = factor.try_mul(&pivot_row[c]).expect("homogeneous field");
                row[c] = row[c].try_sub(&delta).expect("homogeneous field");
            }
        }
        pivots.push((col, prow));
    }
    pivots
}

/// Exact rank over the matrix's field.
pub fn rank(m: &SparseMatrix) -> usize {
    let mut rows = m.dense();
    reduce(&mut rows, m.n_cols()).len()
}

/// Whether the listed columns (positional indices) are linearly independent.
pub(crate) fn columns_independent(m: &SparseMatrix, cols: &[usize]) -> bool {
    if cols.len() > m.n_rows() {
        return false;
    }
    let zero = FieldValue::zero(m.field);
    let mut rows = vec![vec![zero; cols.len()]; m.n_rows()];
    for (k, &c) in cols.iter().enumerate() {
        for (r, row) in rows.iter_mut().enumerate() {
            if let Some(v) = m.entries.get(&(r, c)) {
                row[k] = v.clone();
            }
        }
    }
    reduce(&mut rows, cols.len()).len() == cols.len()
}

/// A nonzero assignment to the columns that the matrix maps to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    assignment: IndexMap<String, FieldValue>,
}

impl KernelWitness {
    /// Validates `assignment` against `m`: every column assigned, at least one
    /// nonzero value, and `m * assignment = 0`.
    pub fn new(
        m: &SparseMatrix,
        assignment: IndexMap<String, FieldValue>,
    ) -> Result<Self, MatrixError> {
        if assignment.values().all(FieldValue::is_zero) {
            return Err(MatrixError::NotAWitness("all coordinates are zero"));
        }
        if assignment.len() != m.n_cols() {
            return Err(MatrixError::NotAWitness(
                "assignment does not match the columns",
            ));
        }
        let image = mat_vec(m, &assignment)?;
        if !image.values().all(FieldValue::is_zero) {
            return Err(MatrixError::NotAWitness(
                "matrix does not annihilate the assignment",
            ));
        }
        Ok(KernelWitness { assignment })
    }

    pub fn assignment(&self) -> &IndexMap<String, FieldValue> {
        &self.assignment
    }
}

/// Returns `None` iff the homogeneous system has only the trivial solution.
///
/// Otherwise the first free column gets 1, the remaining free columns 0, and
/// pivot columns are back-substituted from the reduced form.
pub fn kernel_witness(m: &SparseMatrix) -> Option<KernelWitness> {
    let mut rows = m.dense();
    let pivots = reduce(&mut rows, m.n_cols());
    if pivots.len() == m.n_cols() {
        return None;
    }
    let pivot_cols: HashSet<usize> = pivots.iter().map(|&(c, _)| c).collect();
    let free = (0..m.n_cols())
        .find(|c| !pivot_cols.contains(c))
        .expect("rank below column count");
    let mut values = vec![FieldValue::zero(m.field); m.n_cols()];
    values[free] = FieldValue::one(m.field);
    for &(col, row) in &pivots {
        values[col] = rows[row][free].neg();
    }
    let assignment = m.col_ids.iter().cloned().zip(values).collect();
    Some(KernelWitness::new(m, assignment).expect("back-substitution yields a kernel vector"))
}

/// `m * x`, keyed by row id in declared order.
pub fn mat_vec(
    m: &SparseMatrix,
    x: &IndexMap<String, FieldValue>,
) -> Result<IndexMap<String, FieldValue>, MatrixError> {
    let mut xs = Vec::with_capacity(m.n_cols());
    for c in &m.col_ids {
        let v = x
            .get(c)
            .ok_or_else(|| MatrixError::MissingValue(c.clone()))?;
        if v.spec() != m.field {
            return Err(FieldError::SpecMismatch {
                left: m.field,
                right: v.spec(),
            }
            .into());
        }
        xs.push(v);
    }
    let mut out: Vec<FieldValue> = vec![FieldValue::zero(m.field); m.n_rows()];
    for (&(r, c), a) in &m.entries {
        out[r] = out[r].try_add(&a.try_mul(xs[c])?)?;
    }
    Ok(m.row_ids.iter().cloned().zip(out).collect())
}
