//! Base exchange bijections.
//!
//! For bases `B0`, `B1` of a finite matroid there is a bijection
//! `f: B0 -> B1` such that every single swap `B0 - x + f(x)` is again a base.
//! [`base_exchange_bijection`] finds one as a perfect matching of the
//! [`ExchangeGraph`]. [`dual_base_exchange`] reaches the same contract by
//! reduction to disjoint bases, dualisation and inversion, and the remaining
//! functions build the symmetric form and the independent-set injection on
//! top of it.
//!
//! Every returned map is re-checked against the independence oracle before
//! it is handed out.

use std::fmt;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::matching::maximum_matching;
use crate::matroid::{ElementSet, Matroid, MatroidError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExchangeError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("{0} is not a base")]
    NotABase(&'static str),
    #[error("{0} is not independent")]
    NotIndependent(&'static str),
    #[error("target {0:?} is hit twice")]
    NotInjective(String),
    #[error("internal contract violation: {reason}")]
    InternalContractViolation {
        reason: String,
        graph: Option<Box<ExchangeGraph>>,
    },
}

impl ExchangeError {
    fn violation(reason: impl Into<String>, graph: Option<ExchangeGraph>) -> Self {
        ExchangeError::InternalContractViolation {
            reason: reason.into(),
            graph: graph.map(Box::new),
        }
    }
}

/// An injective map between element ids, kept in source insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct InjectionMap {
    pairs: IndexMap<String, String>,
}

impl InjectionMap {
    pub fn new(pairs: IndexMap<String, String>) -> Result<Self, ExchangeError> {
        let mut seen = std::collections::HashSet::with_capacity(pairs.len());
        for target in pairs.values() {
            if !seen.insert(target) {
                return Err(ExchangeError::NotInjective(target.clone()));
            }
        }
        Ok(InjectionMap { pairs })
    }

    pub fn identity<S: AsRef<str>>(ids: &[S]) -> Self {
        InjectionMap {
            pairs: ids
                .iter()
                .map(|s| (s.as_ref().to_string(), s.as_ref().to_string()))
                .collect(),
        }
    }

    pub fn get(&self, source: &str) -> Option<&str> {
        self.pairs.get(source).map(String::as_str)
    }

    pub fn pairs(&self) -> &IndexMap<String, String> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn inverse(&self) -> InjectionMap {
        InjectionMap {
            pairs: self
                .pairs
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// Keeps only the sources listed in `sources`, in that order.
    pub fn restrict<S: AsRef<str>>(&self, sources: &[S]) -> InjectionMap {
        InjectionMap {
            pairs: sources
                .iter()
                .filter_map(|s| {
                    self.pairs
                        .get(s.as_ref())
                        .map(|t| (s.as_ref().to_string(), t.clone()))
                })
                .collect(),
        }
    }

    /// Re-keys the map so that sources appear in the given order.
    fn ordered_by(&self, order: &[String]) -> InjectionMap {
        self.restrict(order)
    }
}

impl fmt::Display for InjectionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Bipartite graph between `B0 \ B1` and `B1 \ B0` with an edge `(x, y)` iff
/// `B0 - x + y` is a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeGraph {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub edges: Vec<(String, String)>,
    adjacency: Vec<Vec<usize>>,
}

impl ExchangeGraph {
    pub fn has_edge(&self, x: &str, y: &str) -> bool {
        self.edges.iter().any(|(a, b)| a == x && b == y)
    }
}

/// Which side of the exchange the single swaps happen on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapForm {
    /// `B0 - x + f(x)` is a base for every `x ∈ B0`.
    SwapInB0,
    /// `B1 - f(x) + x` is a base for every `x ∈ B0`.
    SwapInB1,
}

fn require_base(m: &Matroid, set: &ElementSet, name: &'static str) -> Result<(), ExchangeError> {
    if !m.is_base(set)? {
        return Err(ExchangeError::NotABase(name));
    }
    Ok(())
}

pub fn exchange_graph(
    m: &Matroid,
    b0: &ElementSet,
    b1: &ElementSet,
) -> Result<ExchangeGraph, ExchangeError> {
    require_base(m, b0, "b0")?;
    require_base(m, b1, "b1")?;
    let left: Vec<usize> = b0.difference(b1).iter().collect();
    let right: Vec<usize> = b1.difference(b0).iter().collect();
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); left.len()];
    for (li, &x) in left.iter().enumerate() {
        for (ri, &y) in right.iter().enumerate() {
            if m.is_base(&b0.without(x).with(y))? {
                adjacency[li].push(ri);
                edges.push((m.ground()[x].clone(), m.ground()[y].clone()));
            }
        }
    }
    let name = |i: &usize| m.ground()[*i].clone();
    Ok(ExchangeGraph {
        left: left.iter().map(name).collect(),
        right: right.iter().map(name).collect(),
        edges,
        adjacency,
    })
}

/// Every `x ∈ b0` is mapped into `b1`, bijectively, and each swap is checked
/// through the oracle.
pub fn is_valid_exchange(
    m: &Matroid,
    b0: &ElementSet,
    b1: &ElementSet,
    f: &InjectionMap,
    form: SwapForm,
) -> Result<bool, MatroidError> {
    if f.len() != b0.len() || b0.len() != b1.len() {
        return Ok(false);
    }
    for (x, y) in f.iter() {
        let (xi, yi) = (m.index_of(x)?, m.index_of(y)?);
        if !b0.contains(xi) || !b1.contains(yi) {
            return Ok(false);
        }
        let swapped = match form {
            SwapForm::SwapInB0 => b0.without(xi).with(yi),
            SwapForm::SwapInB1 => b1.without(yi).with(xi),
        };
        if !m.is_base(&swapped)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Direct route: perfect matching in the exchange graph, identity on `b0 ∩ b1`.
pub fn base_exchange_bijection(
    m: &Matroid,
    b0: &ElementSet,
    b1: &ElementSet,
) -> Result<InjectionMap, ExchangeError> {
    let graph = exchange_graph(m, b0, b1)?;
    let matched = maximum_matching(graph.right.len(), &graph.adjacency);
    if matched.iter().any(Option::is_none) {
        return Err(ExchangeError::violation(
            "exchange graph has no perfect matching",
            Some(graph),
        ));
    }
    let mut pairs = IndexMap::with_capacity(b0.len());
    let mut next_left = graph.left.iter().zip(&matched);
    for x in b0.iter() {
        let id = m.ground()[x].clone();
        if b1.contains(x) {
            pairs.insert(id.clone(), id);
        } else {
            let (l, r) = next_left
                .next()
                .expect("left side enumerates b0 \\ b1 in ground order");
            debug_assert_eq!(*l, id);
            pairs.insert(id, graph.right[r.expect("perfect")].clone());
        }
    }
    let f = InjectionMap::new(pairs)?;
    if !is_valid_exchange(m, b0, b1, &f, SwapForm::SwapInB0)? {
        return Err(ExchangeError::violation(
            "matched swap is not a base",
            Some(graph),
        ));
    }
    Ok(f)
}

/// Route through minors and duality:
///
/// 1. contract `b0 ∩ b1` and delete everything outside `b0 ∪ b1`, leaving
///    `b0 \ b1` and `b1 \ b0` as complementary bases;
/// 2. in the dual of that minor, exchange from `b1 \ b0` to `b0 \ b1`,
///    giving `g` with `(b1 \ b0) - y + g(y)` a dual base;
/// 3. complements of dual bases are bases, so `f = g⁻¹` works on `b0 \ b1`;
/// 4. extend by the identity on `b0 ∩ b1`.
pub fn dual_base_exchange(
    m: &Matroid,
    b0: &ElementSet,
    b1: &ElementSet,
) -> Result<InjectionMap, ExchangeError> {
    require_base(m, b0, "b0")?;
    require_base(m, b1, "b1")?;
    let common = b0.intersection(b1);
    let outside = b0.union(b1).complement();

    let contracted = m.contract(&common)?;
    let minor = contracted.delete(&contracted.subset(&m.ids(&outside))?)?;
    let dual = minor.dual();
    let only0 = m.ids(&b0.difference(b1));
    let only1 = m.ids(&b1.difference(b0));
    let d0 = dual.subset(&only0)?;
    let d1 = dual.subset(&only1)?;

    let g = base_exchange_bijection(&dual, &d1, &d0).map_err(|e| match e {
        ExchangeError::NotABase(which) => ExchangeError::violation(
            format!("reduced {which} is not a base of the dual minor"),
            None,
        ),
        other => other,
    })?;

    let mut pairs: IndexMap<String, String> = g.inverse().pairs().clone();
    for id in m.ids(&common) {
        pairs.insert(id.clone(), id);
    }
    let f = InjectionMap::new(pairs)?.ordered_by(&m.ids(b0));
    if !is_valid_exchange(m, b0, b1, &f, SwapForm::SwapInB0)? {
        return Err(ExchangeError::violation(
            "dual route produced an invalid swap",
            exchange_graph(m, b0, b1).ok(),
        ));
    }
    Ok(f)
}

/// Either swap form. `SwapInB1` applies the `SwapInB0` construction with the
/// bases' roles switched and inverts the result.
pub fn reform_bijection(
    m: &Matroid,
    b0: &ElementSet,
    b1: &ElementSet,
    form: SwapForm,
) -> Result<InjectionMap, ExchangeError> {
    match form {
        SwapForm::SwapInB0 => dual_base_exchange(m, b0, b1),
        SwapForm::SwapInB1 => {
            require_base(m, b0, "b0")?;
            require_base(m, b1, "b1")?;
            let h = dual_base_exchange(m, b1, b0)?;
            let f = h.inverse().ordered_by(&m.ids(b0));
            if !is_valid_exchange(m, b0, b1, &f, SwapForm::SwapInB1)? {
                return Err(ExchangeError::violation(
                    "inverted map fails the swap-in-b1 test",
                    exchange_graph(m, b1, b0).ok(),
                ));
            }
            Ok(f)
        }
    }
}

/// An injection `f: j -> b` with `b - f(x) + x` a base for each `x ∈ j`:
/// extend `j` to a base greedily, take the `SwapInB1` bijection to `b`, and
/// restrict it to `j`.
pub fn independent_into_base_injection(
    m: &Matroid,
    j: &ElementSet,
    b: &ElementSet,
) -> Result<InjectionMap, ExchangeError> {
    if !m.is_independent(j)? {
        return Err(ExchangeError::NotIndependent("j"));
    }
    require_base(m, b, "b")?;
    let extended = m.find_base(j)?;
    let full = reform_bijection(m, &extended, b, SwapForm::SwapInB1)?;
    let f = full.restrict(&m.ids(j));
    for (x, y) in f.iter() {
        let swapped = b.without(m.index_of(y)?).with(m.index_of(x)?);
        if !m.is_base(&swapped)? {
            return Err(ExchangeError::violation(
                format!("b - {y} + {x} is not a base"),
                None,
            ));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, FieldValue};
    use crate::linalg::SparseMatrix;

    fn ids(names: &str) -> Vec<String> {
        names.chars().map(|c| c.to_string()).collect()
    }

    /// e1 = (1,0), e2 = (0,1), e3 = (1,1) over GF(2).
    fn gf2_triangle() -> Matroid {
        let gf2 = FieldSpec::prime(2).unwrap();
        Matroid::from_matrix(
            SparseMatrix::new(
                gf2,
                vec!["x".into(), "y".into()],
                vec!["e1".into(), "e2".into(), "e3".into()],
                [("x", "e1"), ("y", "e2"), ("x", "e3"), ("y", "e3")]
                    .into_iter()
                    .map(|(r, c)| (r.to_string(), c.to_string(), FieldValue::one(gf2))),
            )
            .unwrap(),
        )
    }

    fn map(pairs: &[(&str, &str)]) -> InjectionMap {
        InjectionMap::new(
            pairs
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn graph_examples() {
        let tri = gf2_triangle();
        let b0 = tri.subset(&["e1", "e2"]).unwrap();
        let b1 = tri.subset(&["e2", "e3"]).unwrap();
        assert!(exchange_graph(&tri, &b0, &b0).unwrap().edges.is_empty());
        let g = exchange_graph(&tri, &b0, &b1).unwrap();
        assert_eq!(g.edges, vec![("e1".to_string(), "e3".to_string())]);

        let u24 = Matroid::uniform(2, ids("abcd")).unwrap();
        let g = exchange_graph(
            &u24,
            &u24.subset(&["a", "b"]).unwrap(),
            &u24.subset(&["c", "d"]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.edges.len(), 4);
        assert!(g.has_edge("b", "c"));
    }

    #[test]
    fn not_a_base_names_the_input() {
        let tri = gf2_triangle();
        let b = tri.subset(&["e1", "e2"]).unwrap();
        let small = tri.subset(&["e1"]).unwrap();
        assert_eq!(
            exchange_graph(&tri, &small, &b).unwrap_err(),
            ExchangeError::NotABase("b0")
        );
        assert_eq!(
            base_exchange_bijection(&tri, &b, &small).unwrap_err(),
            ExchangeError::NotABase("b1")
        );
        assert_eq!(
            dual_base_exchange(&tri, &b, &tri.full()).unwrap_err(),
            ExchangeError::NotABase("b1")
        );
    }

    #[test]
    fn direct_route_examples() {
        let tri = gf2_triangle();
        let b0 = tri.subset(&["e1", "e2"]).unwrap();
        let b1 = tri.subset(&["e2", "e3"]).unwrap();
        assert_eq!(
            base_exchange_bijection(&tri, &b0, &b0).unwrap(),
            map(&[("e1", "e1"), ("e2", "e2")])
        );
        let f = base_exchange_bijection(&tri, &b0, &b1).unwrap();
        assert_eq!(f, map(&[("e1", "e3"), ("e2", "e2")]));
    }

    #[test]
    fn dual_route_examples() {
        let tri = gf2_triangle();
        let b0 = tri.subset(&["e1", "e2"]).unwrap();
        let b1 = tri.subset(&["e2", "e3"]).unwrap();
        assert_eq!(
            dual_base_exchange(&tri, &b0, &b0).unwrap(),
            map(&[("e1", "e1"), ("e2", "e2")])
        );
        let f = dual_base_exchange(&tri, &b0, &b1).unwrap();
        assert!(is_valid_exchange(&tri, &b0, &b1, &f, SwapForm::SwapInB0).unwrap());
    }

    #[test]
    fn reform_examples() {
        let tri = gf2_triangle();
        let b0 = tri.subset(&["e1", "e2"]).unwrap();
        let b1 = tri.subset(&["e2", "e3"]).unwrap();
        for form in [SwapForm::SwapInB0, SwapForm::SwapInB1] {
            assert_eq!(
                reform_bijection(&tri, &b0, &b0, form).unwrap(),
                map(&[("e1", "e1"), ("e2", "e2")])
            );
        }
        let f = reform_bijection(&tri, &b0, &b1, SwapForm::SwapInB1).unwrap();
        assert_eq!(f, map(&[("e1", "e3"), ("e2", "e2")]));
        assert!(tri.is_base(&tri.subset(&["e1", "e2"]).unwrap()).unwrap());

        let u24 = Matroid::uniform(2, ids("abcd")).unwrap();
        let bases: Vec<ElementSet> = (0..16u64)
            .map(|mask| ElementSet::from_mask(4, mask))
            .filter(|s| s.len() == 2)
            .collect();
        for b0 in &bases {
            for b1 in &bases {
                for form in [SwapForm::SwapInB0, SwapForm::SwapInB1] {
                    let f = reform_bijection(&u24, b0, b1, form).unwrap();
                    assert!(is_valid_exchange(&u24, b0, b1, &f, form).unwrap());
                }
            }
        }
    }

    #[test]
    fn injection_examples() {
        let q = FieldSpec::Rationals;
        let one = || FieldValue::one(q);
        let m = Matroid::from_matrix(
            SparseMatrix::new(
                q,
                vec!["x".into(), "y".into()],
                vec!["p".into(), "s".into(), "d".into()],
                vec![
                    ("x".into(), "p".into(), one()),
                    ("y".into(), "s".into(), one()),
                    ("x".into(), "d".into(), one()),
                    ("y".into(), "d".into(), one()),
                ],
            )
            .unwrap(),
        );
        let b = m.subset(&["p", "s"]).unwrap();
        assert!(independent_into_base_injection(&m, &m.empty(), &b)
            .unwrap()
            .is_empty());
        assert_eq!(
            independent_into_base_injection(&m, &b, &b).unwrap(),
            map(&[("p", "p"), ("s", "s")])
        );

        // j = {(1,1)}: the greedy extension is {(1,0), (1,1)}, which shares (1,0)
        // with b, so (1,1) must go to (0,1).
        let j = m.subset(&["d"]).unwrap();
        let f = independent_into_base_injection(&m, &j, &b).unwrap();
        assert_eq!(f, map(&[("d", "s")]));
        assert!(m.is_base(&m.subset(&["p", "d"]).unwrap()).unwrap());

        assert_eq!(
            independent_into_base_injection(&m, &m.full(), &b).unwrap_err(),
            ExchangeError::NotIndependent("j")
        );
        assert_eq!(
            independent_into_base_injection(&m, &j, &j).unwrap_err(),
            ExchangeError::NotABase("b")
        );
    }

    #[test]
    fn inconsistent_oracle_is_reported_not_panicked() {
        // {a,b} and {c,d} are the only "bases" and no single swap works.
        let family: Vec<Vec<String>> = ["", "a", "b", "c", "d", "ab", "cd"]
            .iter()
            .map(|s| ids(s))
            .collect();
        let m = Matroid::from_family(ids("abcd"), &family).unwrap();
        let err = base_exchange_bijection(
            &m,
            &m.subset(&["a", "b"]).unwrap(),
            &m.subset(&["c", "d"]).unwrap(),
        )
        .unwrap_err();
        match err {
            ExchangeError::InternalContractViolation { graph: Some(g), .. } => {
                assert!(g.edges.is_empty())
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn injection_map_rejects_collisions() {
        let pairs = [("a", "x"), ("b", "x")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(
            InjectionMap::new(pairs).unwrap_err(),
            ExchangeError::NotInjective("x".into())
        );
    }
}
