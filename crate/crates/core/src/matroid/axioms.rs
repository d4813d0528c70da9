//! Exhaustive check of the four independence axioms on small ground sets.
//!
//! The oracle is tabulated once over all `2^n` subsets and every quantifier
//! is then evaluated on the table. Nothing here assumes the family is a
//! matroid: maximality is "no independent proper superset", not "no
//! independent one-element extension".

use std::fmt;

use super::{ElementSet, Matroid, MatroidError};
use crate::par;

pub const DEFAULT_AXIOM_CAP: usize = 10;
pub const MAX_AXIOM_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// (I) the empty set is independent.
    EmptySet,
    /// (II) subsets of independent sets are independent.
    SubsetClosure,
    /// (III) a non-maximal independent set augments from any maximal one.
    Augmentation,
    /// (IV) independent subsets of any X extend to maximal ones inside X.
    Maximality,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::EmptySet => "I",
            Axiom::SubsetClosure => "II",
            Axiom::Augmentation => "III",
            Axiom::Maximality => "IV",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptySetDependent,
    /// `independent` is independent but `subset = independent - {e}` is not.
    SubsetClosure {
        independent: ElementSet,
        subset: ElementSet,
    },
    /// No `e ∈ maximal \ non_maximal` augments `non_maximal`.
    Augmentation {
        maximal: ElementSet,
        non_maximal: ElementSet,
    },
    /// `independent ⊆ within` lies in no maximal independent subset of `within`.
    Maximality {
        within: ElementSet,
        independent: ElementSet,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> Axiom {
        match self {
            AxiomViolation::EmptySetDependent => Axiom::EmptySet,
            AxiomViolation::SubsetClosure { .. } => Axiom::SubsetClosure,
            AxiomViolation::Augmentation { .. } => Axiom::Augmentation,
            AxiomViolation::Maximality { .. } => Axiom::Maximality,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub ground_size: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &AxiomViolation> {
        self.violations.iter().filter(move |v| v.axiom() == axiom)
    }
}

pub fn check_axioms(m: &Matroid) -> Result<AxiomReport, MatroidError> {
    check_axioms_with_cap(m, DEFAULT_AXIOM_CAP)
}

/// Checks (I)-(IV) exhaustively. `cap` bounds the ground set size and may not exceed
/// [`MAX_AXIOM_CAP`].
pub fn check_axioms_with_cap(m: &Matroid, cap: usize) -> Result<AxiomReport, MatroidError> {
    if cap > MAX_AXIOM_CAP {
        return Err(MatroidError::GroundTooLarge {
            size: cap,
            cap: MAX_AXIOM_CAP,
        });
    }
    let n = m.len();
    if n > cap {
        return Err(MatroidError::GroundTooLarge { size: n, cap });
    }
    let table = m.independence_table()?;
    let full = (1usize << n) - 1;
    let set = |mask: usize| ElementSet::from_mask(n, mask as u64);
    let mut violations = Vec::new();

    if !table[0] {
        violations.push(AxiomViolation::EmptySetDependent);
    }

    for (mask, _) in table.iter().enumerate().filter(|(_, &ind)| ind) {
        for e in (0..n).filter(|e| mask >> e & 1 == 1) {
            if !table[mask & !(1 << e)] {
                violations.push(AxiomViolation::SubsetClosure {
                    independent: set(mask),
                    subset: set(mask & !(1 << e)),
                });
            }
        }
    }

    // (III): maximal in the whole family.
    let up = upward_closure(&table, full);
    let is_maximal =
        |mask: usize| table[mask] && (0..n).all(|e| mask >> e & 1 == 1 || !up[mask | 1 << e]);
    let maximal: Vec<usize> = (0..=full).filter(|&s| is_maximal(s)).collect();
    let non_maximal: Vec<usize> = (0..=full).filter(|&s| table[s] && !is_maximal(s)).collect();
    for &j in &maximal {
        for &i in &non_maximal {
            let candidates = j & !i;
            if !(0..n).any(|e| candidates >> e & 1 == 1 && table[i | 1 << e]) {
                violations.push(AxiomViolation::Augmentation {
                    maximal: set(j),
                    non_maximal: set(i),
                });
            }
        }
    }

    // (IV): for each X, every independent I ⊆ X lies below a maximal element of 𝓘 ∩ P(X).
    let per_x = par::map_range(full + 1, |x| {
        let within = local_maximal_extensions(&table, x);
        submasks_descending(x)
            .filter(|&i| table[i] && !within[i])
            .map(|i| AxiomViolation::Maximality {
                within: set(x),
                independent: set(i),
            })
            .collect::<Vec<_>>()
    });
    violations.extend(per_x.into_iter().flatten());

    Ok(AxiomReport {
        ground_size: n,
        violations,
    })
}

/// `up[s]`: some independent superset of `s` inside `universe` exists.
fn upward_closure(table: &[bool], universe: usize) -> Vec<bool> {
    let mut up = vec![false; table.len()];
    for s in submasks_descending(universe) {
        up[s] = table[s] || bits(universe & !s).any(|e| up[s | 1 << e]);
    }
    up
}

/// `ext[s]` for `s ⊆ x`: some set maximal in 𝓘 ∩ P(x) contains `s`.
/// Entries outside `x` are left false.
fn local_maximal_extensions(table: &[bool], x: usize) -> Vec<bool> {
    let mut up = vec![false; table.len()];
    let mut ext = vec![false; table.len()];
    for s in submasks_descending(x) {
        let free = x & !s;
        up[s] = table[s] || bits(free).any(|e| up[s | 1 << e]);
        let maximal_here = table[s] && !bits(free).any(|e| up[s | 1 << e]);
        ext[s] = maximal_here || bits(free).any(|e| ext[s | 1 << e]);
    }
    ext
}

fn bits(mut mask: usize) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let e = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(e)
    })
}

/// All submasks of `x`, each superset before its subsets.
fn submasks_descending(x: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(x);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & x) };
        Some(cur)
    })
}
