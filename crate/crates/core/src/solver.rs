//! Variables-to-equations injections for homogeneous systems.
//!
//! If `A x = 0` has only the trivial solution then every column of `A` can be
//! assigned its own row with a nonzero entry in that position. The matroid
//! route builds the augmented family (the columns of `A` together with a unit
//! vector per row), in which the rows form a base and the columns are
//! independent, and reads the assignment off a base-exchange injection of the
//! columns into the rows. The Hall route matches columns to rows directly on
//! the support graph; it is kept as an independent cross-check.

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exchange::{self, ExchangeError, InjectionMap};
use crate::field::{FieldSpec, FieldValue};
use crate::linalg::{self, KernelWitness, SparseMatrix};
use crate::matching::maximum_matching;
use crate::matroid::{ElementSet, Matroid};
use crate::par;

pub const ROW_TAG: &str = "row:";
pub const COL_TAG: &str = "col:";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("internal contract violation: {0}")]
    InternalContractViolation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

impl From<ExchangeError> for SolveError {
    fn from(e: ExchangeError) -> Self {
        SolveError::InternalContractViolation(e.to_string())
    }
}

/// Where an element of the augmented ground set came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Row(String),
    Column(String),
}

/// The vector matroid on rows ∪ columns: row `i` is the unit vector at `i`,
/// column `j` is column `j` of the input matrix.
#[derive(Debug, Clone)]
pub struct AugmentedFamily {
    pub matroid: Matroid,
    pub vectors: SparseMatrix,
    pub origins: Vec<Origin>,
    pub rows: ElementSet,
    pub cols: ElementSet,
    pub rows_form_base: bool,
    pub cols_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Column id -> row id, each pair a nonzero entry.
    Injection(InjectionMap),
    Witness(KernelWitness),
}

pub fn build_augmented_matroid(m: &SparseMatrix) -> AugmentedFamily {
    let field = m.field();
    let mut ground = Vec::with_capacity(m.n_rows() + m.n_cols());
    let mut origins = Vec::with_capacity(ground.capacity());
    for r in m.row_ids() {
        ground.push(format!("{ROW_TAG}{r}"));
        origins.push(Origin::Row(r.clone()));
    }
    for c in m.col_ids() {
        ground.push(format!("{COL_TAG}{c}"));
        origins.push(Origin::Column(c.clone()));
    }
    let mut entries: Vec<(String, String, FieldValue)> = m
        .row_ids()
        .iter()
        .map(|r| (r.clone(), format!("{ROW_TAG}{r}"), FieldValue::one(field)))
        .collect();
    entries.extend(
        m.entries()
            .map(|(r, c, v)| (r.to_string(), format!("{COL_TAG}{c}"), v.clone())),
    );
    let vectors = SparseMatrix::new(field, m.row_ids().to_vec(), ground, entries)
        .expect("tagged ids are distinct and entries nonzero");
    let matroid = Matroid::from_matrix(vectors.clone());
    let n = matroid.len();
    let rows = ElementSet::from_indices(n, 0..m.n_rows());
    let cols = ElementSet::from_indices(n, m.n_rows()..n);
    let rows_form_base = matroid.is_base(&rows).expect("same ground");
    debug_assert!(rows_form_base, "unit vectors always span");
    let cols_independent = matroid.is_independent(&cols).expect("same ground");
    AugmentedFamily {
        matroid,
        vectors,
        origins,
        rows,
        cols,
        rows_form_base,
        cols_independent,
    }
}

fn untag<'a>(id: &'a str, tag: &str) -> Result<&'a str, SolveError> {
    id.strip_prefix(tag)
        .ok_or_else(|| SolveError::InternalContractViolation(format!("{id:?} lacks tag {tag:?}")))
}

/// Kernel witness if the system has a nontrivial solution, otherwise an
/// injection `φ: columns -> rows` with `a[φ(j)][j] != 0`, obtained through
/// the base-exchange route and verified before it is returned.
pub fn solve_variable_equation_matching(m: &SparseMatrix) -> Result<SolveOutcome, SolveError> {
    if let Some(witness) = linalg::kernel_witness(m) {
        return Ok(SolveOutcome::Witness(witness));
    }
    let family = build_augmented_matroid(m);
    if !family.cols_independent {
        return Err(SolveError::InternalContractViolation(
            "trivial kernel but dependent columns in the augmented family".into(),
        ));
    }
    let tagged =
        exchange::independent_into_base_injection(&family.matroid, &family.cols, &family.rows)?;
    let mut pairs = IndexMap::with_capacity(tagged.len());
    for (col, row) in tagged.iter() {
        pairs.insert(
            untag(col, COL_TAG)?.to_string(),
            untag(row, ROW_TAG)?.to_string(),
        );
    }
    let phi = InjectionMap::new(pairs)?;
    if !verify_injection(m, &phi) {
        return Err(SolveError::InternalContractViolation(format!(
            "matroid route produced {phi}, which uses a zero entry"
        )));
    }
    Ok(SolveOutcome::Injection(phi))
}

/// Maximum matching on the support graph; `Some` iff every column is matched.
pub fn hall_matching_oracle(m: &SparseMatrix) -> Option<InjectionMap> {
    let mut adjacency = vec![Vec::new(); m.n_cols()];
    for (r, c, _) in m.positional_entries() {
        adjacency[c].push(r);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let matched = maximum_matching(m.n_rows(), &adjacency);
    let mut pairs = IndexMap::with_capacity(m.n_cols());
    for (c, r) in matched.iter().enumerate() {
        pairs.insert(m.col_ids()[c].clone(), m.row_ids()[(*r)?].clone());
    }
    Some(InjectionMap::new(pairs).expect("a matching is injective"))
}

/// Defined on every column, injective into the rows, and supported on stored entries.
pub fn verify_injection(m: &SparseMatrix, phi: &InjectionMap) -> bool {
    if phi.len() != m.n_cols() {
        return false;
    }
    let mut used = std::collections::HashSet::with_capacity(phi.len());
    m.col_ids().iter().all(|c| match phi.get(c) {
        Some(r) => used.insert(r) && m.get(r, c).is_some(),
        None => false,
    })
}

/// Solves every matrix, in parallel when the `parallel` feature is on.
pub fn solve_batch(matrices: &[SparseMatrix]) -> Vec<Result<SolveOutcome, SolveError>> {
    par::map_slice(matrices, solve_variable_equation_matching)
}

pub fn solve_batch_sequential(matrices: &[SparseMatrix]) -> Vec<Result<SolveOutcome, SolveError>> {
    matrices
        .iter()
        .map(solve_variable_equation_matching)
        .collect()
}

fn random_value(field: FieldSpec, rng: &mut ChaCha8Rng, nonzero: bool) -> FieldValue {
    match field {
        FieldSpec::Rationals => {
            let range = if nonzero { 1..=9 } else { 0..=9 };
            let v: i64 = rng.random_range(range);
            let sign = if rng.random_bool(0.5) { -1 } else { 1 };
            FieldValue::from_int(field, sign * v)
        }
        FieldSpec::Prime(p) => {
            let lo = u32::from(nonzero);
            FieldValue::from_int(field, i64::from(rng.random_range(lo..p.get())))
        }
    }
}

/// A reproducible random `n_rows x n_cols` matrix whose kernel is trivial.
///
/// An invertible `n_cols x n_cols` block (unit upper times unit lower
/// triangular) is planted in the top rows, extra nonzeros are sprinkled until
/// about `density * n_rows * n_cols` entries are set (cells inside the block
/// only when invertibility survives), and rows and columns are then permuted.
pub fn generate_instance(
    field: FieldSpec,
    n_rows: usize,
    n_cols: usize,
    density: f64,
    seed: u64,
) -> Result<SparseMatrix, SolveError> {
    if n_cols > n_rows {
        return Err(SolveError::Parameter(format!(
            "n_cols ({n_cols}) must not exceed n_rows ({n_rows})"
        )));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(SolveError::Parameter(format!(
            "density {density} not in (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = FieldValue::zero(field);
    let one = FieldValue::one(field);

    let mut upper = vec![vec![zero.clone(); n_cols]; n_cols];
    let mut lower = vec![vec![zero.clone(); n_cols]; n_cols];
    for i in 0..n_cols {
        upper[i][i] = one.clone();
        lower[i][i] = one.clone();
        for j in 0..n_cols {
            if i < j {
                upper[i][j] = random_value(field, &mut rng, false);
            } else if i > j {
                lower[i][j] = random_value(field, &mut rng, false);
            }
        }
    }
    let mut dense = vec![vec![zero.clone(); n_cols]; n_rows];
    for i in 0..n_cols {
        for j in 0..n_cols {
            let mut acc = zero.clone();
            for k in 0..n_cols {
                let term = upper[i][k].try_mul(&lower[k][j]).expect("one field");
                acc = acc.try_add(&term).expect("one field");
            }
            dense[i][j] = acc;
        }
    }

    let total = n_rows * n_cols;
    let target = ((density * total as f64).ceil() as usize).min(total);
    let mut nnz = dense.iter().flatten().filter(|v| !v.is_zero()).count();

    let mut outside: Vec<(usize, usize)> = (n_cols..n_rows)
        .flat_map(|r| (0..n_cols).map(move |c| (r, c)))
        .collect();
    outside.shuffle(&mut rng);
    for (r, c) in outside {
        if nnz >= target {
            break;
        }
        dense[r][c] = random_value(field, &mut rng, true);
        nnz += 1;
    }

    let mut inside: Vec<(usize, usize)> = (0..n_cols)
        .flat_map(|r| (0..n_cols).map(move |c| (r, c)))
        .filter(|&(r, c)| dense[r][c].is_zero())
        .collect();
    inside.shuffle(&mut rng);
    for (r, c) in inside {
        if nnz >= target {
            break;
        }
        for _ in 0..4 {
            dense[r][c] = random_value(field, &mut rng, true);
            let block = SparseMatrix::from_dense_values(field, n_cols, n_cols, &dense[..n_cols]);
            if linalg::rank(&block) == n_cols {
                nnz += 1;
                break;
            }
            dense[r][c] = zero.clone();
        }
    }

    let mut row_order: Vec<usize> = (0..n_rows).collect();
    let mut col_order: Vec<usize> = (0..n_cols).collect();
    row_order.shuffle(&mut rng);
    col_order.shuffle(&mut rng);
    let permuted: Vec<Vec<FieldValue>> = row_order
        .iter()
        .map(|&r| col_order.iter().map(|&c| dense[r][c].clone()).collect())
        .collect();
    Ok(SparseMatrix::from_dense_values(
        field, n_rows, n_cols, &permuted,
    ))
}
