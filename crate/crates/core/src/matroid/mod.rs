//! Finite matroids given by independence oracles.
//!
//! A [`Matroid`] is an ordered ground set of string ids plus a pure oracle
//! deciding independence of subsets. Ground order is the tie-break for every
//! greedy step (rank, base extension, the fixed maximal set used by
//! contraction), so all results are reproducible.
//!
//! Minors and duals wrap their parent's oracle rather than materialising an
//! independence family, so they compose freely: `m.contract(x)?.delete(y)?.dual()`
//! is again a `Matroid`.

mod axioms;
mod set;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

pub use axioms::{check_axioms, check_axioms_with_cap, Axiom, AxiomReport, AxiomViolation};
pub use axioms::{DEFAULT_AXIOM_CAP, MAX_AXIOM_CAP};
pub use set::ElementSet;

use crate::field::{FieldError, FieldSpec, FieldValue};
use crate::linalg::{self, MatrixError, SparseMatrix};
use crate::par;

/// Largest ground set for which whole independence tables are built.
pub const MAX_TABLE_GROUND: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatroidError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("vectors disagree on their coordinate set (element {0:?})")]
    InconsistentCoordinates(String),
    #[error("rank {rank} exceeds ground set size {size}")]
    RankTooLarge { rank: usize, size: usize },
    #[error("set is not a subset of the ground set")]
    NotASubset,
    #[error("{0:?} is not an element of the ground set")]
    NotAnElement(String),
    #[error("duplicate element id {0:?}")]
    DuplicateElement(String),
    #[error("seed set is dependent")]
    SeedDependent,
    #[error("ground set of size {size} exceeds the cap {cap}")]
    GroundTooLarge { size: usize, cap: usize },
    #[error("the two matroids have different ground sets")]
    GroundMismatch,
}

type OracleFn = dyn Fn(&ElementSet) -> bool + Send + Sync;

#[derive(Clone)]
enum Oracle {
    /// Columns of the matrix, in ground order.
    Vector(Arc<SparseMatrix>),
    Uniform(usize),
    Family(Arc<HashSet<ElementSet>>),
    Custom(Arc<OracleFn>),
    Dual(Arc<Matroid>),
    /// `lift[i]` is the parent index of child element `i`.
    Restrict {
        parent: Arc<Matroid>,
        lift: Arc<[usize]>,
    },
    Contract {
        parent: Arc<Matroid>,
        lift: Arc<[usize]>,
        fixed: ElementSet,
    },
}

#[derive(Clone)]
pub struct Matroid {
    ground: Arc<[String]>,
    lookup: Arc<HashMap<String, usize>>,
    oracle: Oracle,
    rank_total: usize,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.oracle {
            Oracle::Vector(_) => "vector",
            Oracle::Uniform(_) => "uniform",
            Oracle::Family(_) => "family",
            Oracle::Custom(_) => "custom",
            Oracle::Dual(_) => "dual",
            Oracle::Restrict { .. } => "deletion",
            Oracle::Contract { .. } => "contraction",
        };
        f.debug_struct("Matroid")
            .field("kind", &kind)
            .field("ground", &self.ground)
            .field("rank", &self.rank_total)
            .finish()
    }
}

impl Matroid {
    fn build(ground: Vec<String>, oracle: Oracle) -> Result<Self, MatroidError> {
        let mut lookup = HashMap::with_capacity(ground.len());
        for (i, id) in ground.iter().enumerate() {
            if id.is_empty() || lookup.insert(id.clone(), i).is_some() {
                return Err(MatroidError::DuplicateElement(id.clone()));
            }
        }
        let mut m = Matroid {
            ground: ground.into(),
            lookup: Arc::new(lookup),
            oracle,
            rank_total: 0,
        };
        m.rank_total = m.greedy_within(&m.empty(), &m.full()).len();
        Ok(m)
    }

    /// Vector matroid of the matrix columns: a set of columns is independent
    /// iff only the zero combination of them vanishes.
    pub fn from_matrix(matrix: SparseMatrix) -> Self {
        let ground = matrix.col_ids().to_vec();
        Self::build(ground, Oracle::Vector(Arc::new(matrix)))
            .expect("matrix column ids are distinct")
    }

    /// Vector matroid from element id -> (coordinate id -> value). Every vector
    /// must list the same coordinate ids; zero values are allowed.
    pub fn vector(
        field: FieldSpec,
        vectors: &IndexMap<String, IndexMap<String, FieldValue>>,
    ) -> Result<Self, MatroidError> {
        let coords: Vec<String> = vectors
            .values()
            .next()
            .map(|v| v.keys().cloned().collect())
            .unwrap_or_default();
        let coord_set: HashSet<&String> = coords.iter().collect();
        let mut entries = Vec::new();
        for (element, vector) in vectors {
            if vector.len() != coords.len() || !vector.keys().all(|k| coord_set.contains(k)) {
                return Err(MatroidError::InconsistentCoordinates(element.clone()));
            }
            for (coord, value) in vector {
                if value.spec() != field {
                    return Err(FieldError::SpecMismatch {
                        left: field,
                        right: value.spec(),
                    }
                    .into());
                }
                if !value.is_zero() {
                    entries.push((coord.clone(), element.clone(), value.clone()));
                }
            }
        }
        let matrix = SparseMatrix::new(field, coords, vectors.keys().cloned().collect(), entries)?;
        Ok(Self::from_matrix(matrix))
    }

    /// `U(rank, |ground|)`: a set is independent iff it has at most `rank` elements.
    pub fn uniform(rank: usize, ground: Vec<String>) -> Result<Self, MatroidError> {
        if rank > ground.len() {
            return Err(MatroidError::RankTooLarge {
                rank,
                size: ground.len(),
            });
        }
        Self::build(ground, Oracle::Uniform(rank))
    }

    /// An explicitly listed independence family. Nothing is checked here; the
    /// result need not satisfy the matroid axioms (see [`check_axioms`]).
    pub fn from_family(
        ground: Vec<String>,
        independent: &[Vec<String>],
    ) -> Result<Self, MatroidError> {
        let index: HashMap<&str, usize> = ground
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut family = HashSet::new();
        for set in independent {
            let mut s = ElementSet::empty(ground.len());
            for id in set {
                s.insert(
                    *index
                        .get(id.as_str())
                        .ok_or_else(|| MatroidError::NotAnElement(id.clone()))?,
                );
            }
            family.insert(s);
        }
        Self::build(ground, Oracle::Family(Arc::new(family)))
    }

    pub fn from_oracle<F>(ground: Vec<String>, oracle: F) -> Result<Self, MatroidError>
    where
        F: Fn(&ElementSet) -> bool + Send + Sync + 'static,
    {
        Self::build(ground, Oracle::Custom(Arc::new(oracle)))
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

    /// Rank of the whole ground set.
    pub fn rank(&self) -> usize {
        self.rank_total
    }

    pub fn index_of(&self, id: &str) -> Result<usize, MatroidError> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| MatroidError::NotAnElement(id.to_string()))
    }

    pub fn empty(&self) -> ElementSet {
        ElementSet::empty(self.len())
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// The subset named by `ids`.
    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<ElementSet, MatroidError> {
        let mut set = self.empty();
        for id in ids {
            set.insert(self.index_of(id.as_ref())?);
        }
        Ok(set)
    }

    /// Ids of `set` in ground order.
    pub fn ids(&self, set: &ElementSet) -> Vec<String> {
        set.iter().map(|i| self.ground[i].clone()).collect()
    }

    fn check_subset(&self, set: &ElementSet) -> Result<(), MatroidError> {
        if set.universe() != self.len() {
            return Err(MatroidError::NotASubset);
        }
        Ok(())
    }

    pub fn is_independent(&self, set: &ElementSet) -> Result<bool, MatroidError> {
        self.check_subset(set)?;
        Ok(self.indep(set))
    }

    /// Independent and of full rank.
    pub fn is_base(&self, set: &ElementSet) -> Result<bool, MatroidError> {
        self.check_subset(set)?;
        Ok(set.len() == self.rank_total && self.indep(set))
    }

    pub(crate) fn indep(&self, set: &ElementSet) -> bool {
        debug_assert_eq!(set.universe(), self.len());
        match &self.oracle {
            Oracle::Vector(matrix) => {
                let cols: Vec<usize> = set.iter().collect();
                linalg::columns_independent(matrix, &cols)
            }
            Oracle::Uniform(r) => set.len() <= *r,
            Oracle::Family(family) => family.contains(set),
            Oracle::Custom(f) => f(set),
            Oracle::Dual(parent) => {
                let rest = set.complement();
                parent.greedy_within(&parent.empty(), &rest).len() == parent.rank_total
            }
            Oracle::Restrict { parent, lift } => parent.indep(&lift_set(parent, lift, set)),
            Oracle::Contract {
                parent,
                lift,
                fixed,
            } => parent.indep(&lift_set(parent, lift, set).union(fixed)),
        }
    }

    /// Greedily extends independent `seed` with elements of `within`, in ground order.
    fn greedy_within(&self, seed: &ElementSet, within: &ElementSet) -> ElementSet {
        let mut current = seed.clone();
        for e in within.iter() {
            if current.contains(e) {
                continue;
            }
            let candidate = current.with(e);
            if self.indep(&candidate) {
                current = candidate;
            }
        }
        current
    }

    /// Size of a maximal independent subset of `x`, found greedily in ground order.
    pub fn rank_of(&self, x: &ElementSet) -> Result<usize, MatroidError> {
        self.check_subset(x)?;
        Ok(self.greedy_within(&self.empty(), x).len())
    }

    /// A base containing `seed`, extended greedily in ground order.
    pub fn find_base(&self, seed: &ElementSet) -> Result<ElementSet, MatroidError> {
        self.check_subset(seed)?;
        if !self.indep(seed) {
            return Err(MatroidError::SeedDependent);
        }
        Ok(self.greedy_within(seed, &self.full()))
    }

    /// The dual: a set is independent iff it avoids some base, i.e. iff its
    /// complement has full rank.
    pub fn dual(&self) -> Matroid {
        Self::build(self.ground.to_vec(), Oracle::Dual(Arc::new(self.clone())))
            .expect("ground already validated")
    }

    fn minor_ground(&self, x: &ElementSet) -> (Vec<String>, Arc<[usize]>) {
        let keep: Vec<usize> = x.complement().iter().collect();
        let ground = keep.iter().map(|&i| self.ground[i].clone()).collect();
        (ground, keep.into())
    }

    /// `M - X`: the restriction to the complement of `x`.
    pub fn delete(&self, x: &ElementSet) -> Result<Matroid, MatroidError> {
        self.check_subset(x)?;
        let (ground, lift) = self.minor_ground(x);
        Self::build(
            ground,
            Oracle::Restrict {
                parent: Arc::new(self.clone()),
                lift,
            },
        )
    }

    /// `M / X`. A maximal independent subset `J` of `x` is fixed once (greedy in
    /// ground order); `S` is independent in the contraction iff `S ∪ J` is
    /// independent here.
    pub fn contract(&self, x: &ElementSet) -> Result<Matroid, MatroidError> {
        self.check_subset(x)?;
        let fixed = self.greedy_within(&self.empty(), x);
        self.contract_with_basis(x, fixed)
    }

    /// Contraction using a caller-chosen maximal independent subset of `x`.
    pub fn contract_with_basis(
        &self,
        x: &ElementSet,
        basis: ElementSet,
    ) -> Result<Matroid, MatroidError> {
        self.check_subset(x)?;
        self.check_subset(&basis)?;
        if !basis.is_subset(x) {
            return Err(MatroidError::NotASubset);
        }
        let (ground, lift) = self.minor_ground(x);
        Self::build(
            ground,
            Oracle::Contract {
                parent: Arc::new(self.clone()),
                lift,
                fixed: basis,
            },
        )
    }

    /// `x` spans `e` iff `e ∈ x` or `{e}` is dependent in `M / x`.
    pub fn spans(&self, x: &ElementSet, e: &str) -> Result<bool, MatroidError> {
        self.check_subset(x)?;
        let e_index = self.index_of(e)?;
        if x.contains(e_index) {
            return Ok(true);
        }
        let minor = self.contract(x)?;
        let single = minor.subset(&[e])?;
        Ok(!minor.indep(&single))
    }

    /// Independence of all `2^n` subsets, indexed by bitmask.
    pub fn independence_table(&self) -> Result<Vec<bool>, MatroidError> {
        self.check_table_size()?;
        let n = self.len();
        Ok(par::map_range(1 << n, |mask| {
            self.indep(&ElementSet::from_mask(n, mask as u64))
        }))
    }

    /// Same as [`Matroid::independence_table`], always on the calling thread.
    pub fn independence_table_sequential(&self) -> Result<Vec<bool>, MatroidError> {
        self.check_table_size()?;
        let n = self.len();
        Ok((0..1usize << n)
            .map(|mask| self.indep(&ElementSet::from_mask(n, mask as u64)))
            .collect())
    }

    fn check_table_size(&self) -> Result<(), MatroidError> {
        if self.len() > MAX_TABLE_GROUND {
            return Err(MatroidError::GroundTooLarge {
                size: self.len(),
                cap: MAX_TABLE_GROUND,
            });
        }
        Ok(())
    }

    /// Oracle equality: same ground ids (in any order) and the same answer on every subset.
    pub fn same_independence(&self, other: &Matroid) -> Result<bool, MatroidError> {
        if self.len() != other.len() {
            return Ok(false);
        }
        let mut to_other = Vec::with_capacity(self.len());
        for id in self.ground.iter() {
            match other.lookup.get(id) {
                Some(&j) => to_other.push(j),
                None => return Err(MatroidError::GroundMismatch),
            }
        }
        let mine = self.independence_table()?;
        let theirs = other.independence_table()?;
        Ok(mine.iter().enumerate().all(|(mask, &ind)| {
            let translated = to_other
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(0usize, |acc, (_, &j)| acc | 1 << j);
            theirs[translated] == ind
        }))
    }
}

fn lift_set(parent: &Matroid, lift: &[usize], set: &ElementSet) -> ElementSet {
    ElementSet::from_indices(parent.len(), set.iter().map(|i| lift[i]))
}
