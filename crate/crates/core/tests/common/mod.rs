//! Brute-force oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls the elimination code: ranks come from determinant
//! expansion, kernels from enumeration, injections from exhaustive search.

#![allow(dead_code)]

use indexmap::IndexMap;
use matroid_hall::field::{FieldSpec, FieldValue};
use matroid_hall::linalg::SparseMatrix;
use matroid_hall::matroid::{ElementSet, Matroid};
use matroid_hall::{InjectionMap, SwapForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

pub fn ids(names: &str) -> Vec<String> {
    names.chars().map(|c| c.to_string()).collect()
}

pub fn dense(m: &SparseMatrix) -> Vec<Vec<FieldValue>> {
    (0..m.n_rows())
        .map(|r| {
            (0..m.n_cols())
                .map(|c| {
                    m.entry_at(r, c)
                        .cloned()
                        .unwrap_or_else(|| FieldValue::zero(m.field()))
                })
                .collect()
        })
        .collect()
}

/// Determinant by the Leibniz permutation sum.
pub fn determinant(a: &[Vec<FieldValue>], field: FieldSpec) -> FieldValue {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = FieldValue::zero(field);
    permutations(&mut perm, 0, &mut |p| {
        let mut term = FieldValue::one(field);
        for (i, &j) in p.iter().enumerate() {
            term = term.try_mul(&a[i][j]).unwrap();
        }
        if inversions(p) % 2 == 1 {
            term = term.neg();
        }
        total = total.try_add(&term).unwrap();
    });
    total
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count()
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Columns `cols` are independent iff some |cols| x |cols| minor is nonzero.
pub fn brute_columns_independent(m: &SparseMatrix, cols: &[usize]) -> bool {
    let a = dense(m);
    let k = cols.len();
    if k == 0 {
        return true;
    }
    combinations(m.n_rows(), k).into_iter().any(|rows| {
        let minor: Vec<Vec<FieldValue>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| a[r][c].clone()).collect())
            .collect();
        !determinant(&minor, m.field()).is_zero()
    })
}

/// Rank as the largest independent column subset.
pub fn brute_rank(m: &SparseMatrix) -> usize {
    (0..=m.n_cols())
        .rev()
        .find(|&k| {
            combinations(m.n_cols(), k)
                .iter()
                .any(|cols| brute_columns_independent(m, cols))
        })
        .unwrap()
}

/// All nonzero kernel vectors over GF(p), by enumerating `p^n_cols` assignments.
pub fn brute_kernel_nontrivial(m: &SparseMatrix) -> bool {
    let p = m.field().characteristic() as usize;
    assert!(p > 0);
    let a = dense(m);
    let n = m.n_cols();
    let total = p.pow(n as u32);
    (1..total).any(|code| {
        let x: Vec<FieldValue> = (0..n)
            .map(|j| FieldValue::from_int(m.field(), ((code / p.pow(j as u32)) % p) as i64))
            .collect();
        a.iter().all(|row| {
            row.iter()
                .zip(&x)
                .fold(FieldValue::zero(m.field()), |acc, (aij, xj)| {
                    acc.try_add(&aij.try_mul(xj).unwrap()).unwrap()
                })
                .is_zero()
        })
    })
}

/// Every injection columns -> rows supported on nonzero entries.
pub fn valid_injections(m: &SparseMatrix) -> Vec<InjectionMap> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend_injection(m, 0, &mut chosen, &mut out);
    out
}

fn extend_injection(
    m: &SparseMatrix,
    col: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<InjectionMap>,
) {
    if col == m.n_cols() {
        let pairs: IndexMap<String, String> = chosen
            .iter()
            .enumerate()
            .map(|(c, &r)| (m.col_ids()[c].clone(), m.row_ids()[r].clone()))
            .collect();
        out.push(InjectionMap::new(pairs).unwrap());
        return;
    }
    for r in 0..m.n_rows() {
        if !chosen.contains(&r) && m.entry_at(r, col).is_some() {
            chosen.push(r);
            extend_injection(m, col + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Some valid injection exists (early exit).
pub fn injection_exists(m: &SparseMatrix) -> bool {
    fn go(m: &SparseMatrix, col: usize, used: &mut Vec<bool>) -> bool {
        if col == m.n_cols() {
            return true;
        }
        for r in 0..m.n_rows() {
            if !used[r] && m.entry_at(r, col).is_some() {
                used[r] = true;
                if go(m, col + 1, used) {
                    return true;
                }
                used[r] = false;
            }
        }
        false
    }
    go(m, 0, &mut vec![false; m.n_rows()])
}

/// Every column subset touches at least as many rows as it has columns.
pub fn hall_condition(m: &SparseMatrix) -> bool {
    (0u32..1 << m.n_cols()).all(|mask| {
        let touched = (0..m.n_rows())
            .filter(|&r| (0..m.n_cols()).any(|c| mask >> c & 1 == 1 && m.entry_at(r, c).is_some()))
            .count();
        touched >= mask.count_ones() as usize
    })
}

pub fn random_value(field: FieldSpec, rng: &mut ChaCha8Rng) -> FieldValue {
    match field {
        FieldSpec::Rationals => {
            let num: i64 = rng.random_range(-3..=3);
            let den: i64 = rng.random_range(1..=2);
            FieldValue::from_ratio(field, num, den).unwrap()
        }
        FieldSpec::Prime(p) => FieldValue::from_int(field, rng.random_range(0..p.get()) as i64),
    }
}

/// A random matrix where each entry is zero with probability `1 - density`.
pub fn random_matrix(
    field: FieldSpec,
    rows: usize,
    cols: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> SparseMatrix {
    let values: Vec<Vec<i64>> = vec![vec![0; cols]; rows];
    let zero = SparseMatrix::from_dense(field, &values);
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.random_bool(density) {
                let v = random_value(field, rng);
                if !v.is_zero() {
                    entries.push((zero.row_ids()[r].clone(), zero.col_ids()[c].clone(), v));
                }
            }
        }
    }
    SparseMatrix::new(
        field,
        zero.row_ids().to_vec(),
        zero.col_ids().to_vec(),
        entries,
    )
    .unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vector matroid of a random matrix with `n` columns (elements `e0..`).
pub fn random_vector_matroid(seed: u64, n: usize) -> Matroid {
    Matroid::from_matrix(random_vector_matrix(seed, n))
}

/// The matrix behind [`random_vector_matroid`].
pub fn random_vector_matrix(seed: u64, n: usize) -> SparseMatrix {
    let mut r = rng(seed);
    let field = match seed % 3 {
        0 => gf(2),
        1 => gf(3),
        _ => FieldSpec::Rationals,
    };
    let dim = r.random_range(1..=4usize);
    let m = random_matrix(field, dim, n, 0.6, &mut r);
    let cols: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    SparseMatrix::new(
        field,
        m.row_ids().to_vec(),
        cols.clone(),
        m.entries().map(|(row, c, v)| {
            let j = m.col_index(c).unwrap();
            (row.to_string(), cols[j].clone(), v.clone())
        }),
    )
    .unwrap()
}

/// Fixture matroids with small ground sets: uniform matroids, a few named
/// vector matroids and random ones.
pub fn fixture_matroids(max_ground: usize, random: usize) -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 0..=max_ground.min(6) {
        for r in 0..=n {
            let ground: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
            out.push((format!("U({r},{n})"), Matroid::uniform(r, ground).unwrap()));
        }
    }
    let gf2 = gf(2);
    // Fano plane: the seven nonzero vectors of GF(2)^3.
    if max_ground >= 7 {
        let cols: Vec<Vec<i64>> = (1..8)
            .map(|v: i64| vec![v & 1, v >> 1 & 1, v >> 2 & 1])
            .collect();
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|k| cols.iter().map(|c| c[k]).collect())
            .collect();
        out.push((
            "Fano".into(),
            Matroid::from_matrix(SparseMatrix::from_dense(gf2, &rows)),
        ));
    }
    let q = FieldSpec::Rationals;
    out.push((
        "parallel-pair".into(),
        Matroid::from_matrix(SparseMatrix::from_dense(
            q,
            &[vec![1, 2, 0, 1], vec![0, 0, 1, 1]],
        )),
    ));
    out.push((
        "with-loop".into(),
        Matroid::from_matrix(SparseMatrix::from_dense(
            q,
            &[vec![1, 0, 0, 3], vec![0, 0, 1, -1]],
        )),
    ));
    for seed in 0..random as u64 {
        let n = 3 + (seed as usize % (max_ground - 2));
        out.push((format!("random#{seed}"), random_vector_matroid(seed, n)));
    }
    out
}

/// All bases by enumeration of subsets.
pub fn all_bases(m: &Matroid) -> Vec<ElementSet> {
    let n = m.len();
    (0u64..1 << n)
        .map(|mask| ElementSet::from_mask(n, mask))
        .filter(|s| m.is_base(s).unwrap())
        .collect()
}

/// Random disjoint pair of subsets.
pub fn random_disjoint_pair(n: usize, r: &mut ChaCha8Rng) -> (ElementSet, ElementSet) {
    let mut x = ElementSet::empty(n);
    let mut y = ElementSet::empty(n);
    for i in 0..n {
        match r.random_range(0..3) {
            0 => x.insert(i),
            1 => y.insert(i),
            _ => {}
        }
    }
    (x, y)
}

/// Base test done by hand: independent and of size rank(E).
pub fn base_by_rank(m: &Matroid, s: &ElementSet) -> bool {
    s.len() == m.rank() && m.is_independent(s).unwrap()
}

/// `f` maps `from` injectively into `to`, fixes `from ∩ to`, and every swap
/// it prescribes yields a base. `SwapInB0` swaps `x` out of `from` for
/// `f(x)`; `SwapInB1` swaps `f(x)` out of `to` for `x`. Bases need not be
/// full: `from` may be any independent set when `form` is `SwapInB1`.
pub fn check_exchange(
    m: &Matroid,
    from: &ElementSet,
    to: &ElementSet,
    f: &InjectionMap,
    form: SwapForm,
) -> Result<(), String> {
    if f.len() != from.len() {
        return Err(format!(
            "{f} has {} pairs, expected {}",
            f.len(),
            from.len()
        ));
    }
    let mut targets = ElementSet::empty(m.len());
    for (x, y) in f.iter() {
        let (xi, yi) = (m.index_of(x).unwrap(), m.index_of(y).unwrap());
        if !from.contains(xi) || !to.contains(yi) || targets.contains(yi) {
            return Err(format!("{f} is not an injection from {from:?} into {to:?}"));
        }
        targets.insert(yi);
        if to.contains(xi) && x != y {
            return Err(format!("{f} moves {x}, which lies in both sets"));
        }
        let swapped = match form {
            SwapForm::SwapInB0 => from.without(xi).with(yi),
            SwapForm::SwapInB1 => to.without(yi).with(xi),
        };
        if !base_by_rank(m, &swapped) {
            return Err(format!("swap {x}->{y} of {f} is not a base"));
        }
    }
    Ok(())
}
