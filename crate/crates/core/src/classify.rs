//! Spherical / affine / non-affine classification of Coxeter groups and their
//! special subgroups.
//!
//! Irreducible components are the connected components of the Coxeter diagram.
//! A component is spherical when its Gram matrix is positive definite,
//! Euclidean when it is positive semidefinite with a one-dimensional kernel,
//! and non-affine otherwise. A group is affine when no component is non-affine.

use std::collections::HashMap;

use serde::Serialize;

use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::gram::GramMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentKind {
    Spherical,
    AffineEuclidean,
    NonAffine,
}

impl ComponentKind {
    pub fn is_affine(self) -> bool {
        self != ComponentKind::NonAffine
    }
}

impl std::fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ComponentKind::Spherical => "Spherical",
            ComponentKind::AffineEuclidean => "AffineEuclidean",
            ComponentKind::NonAffine => "NonAffine",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeVerdict {
    pub kind: ComponentKind,
    /// 0-based generator subsets with their kinds, ordered by smallest index.
    pub components: Vec<(Vec<usize>, ComponentKind)>,
    pub minimal_nonaffine: bool,
}

/// Connected components of the diagram restricted to `subset`, each sorted.
pub fn components_of(cm: &CoxeterMatrix, subset: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; cm.rank()];
    let in_subset: Vec<bool> = (0..cm.rank()).map(|i| subset.contains(&i)).collect();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for &start in &sorted {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in 0..cm.rank() {
                if in_subset[w] && !seen[w] && w != v && cm.get(v, w).is_edge() {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Partition of the generators into irreducible components.
pub fn irreducible_components(cm: &CoxeterMatrix) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..cm.rank()).collect();
    components_of(cm, &all)
}

/// Kind of the special subgroup on a connected generator subset.
pub fn classify_component(cm: &CoxeterMatrix, subset: &[usize]) -> Result<ComponentKind> {
    if subset.is_empty() || components_of(cm, subset).len() != 1 {
        return Err(Error::NotIrreducible(subset.to_vec()));
    }
    let sub = cm.restrict(subset)?;
    let gram = GramMatrix::new(&sub);
    if gram
        .matrix()
        .leading_minors()
        .iter()
        .all(|m| m.is_positive())
    {
        return Ok(ComponentKind::Spherical);
    }
    let sig = gram.signature();
    if sig.negative == 0 && sig.zero == 1 {
        Ok(ComponentKind::AffineEuclidean)
    } else {
        Ok(ComponentKind::NonAffine)
    }
}

/// Memoizing classifier for many special subgroups of one group.
pub struct SubgroupClassifier<'a> {
    cm: &'a CoxeterMatrix,
    cache: HashMap<Vec<usize>, ComponentKind>,
}

impl<'a> SubgroupClassifier<'a> {
    pub fn new(cm: &'a CoxeterMatrix) -> Self {
        Self {
            cm,
            cache: HashMap::new(),
        }
    }

    fn component(&mut self, comp: Vec<usize>) -> ComponentKind {
        if let Some(&k) = self.cache.get(&comp) {
            return k;
        }
        let k = classify_component(self.cm, &comp).expect("component is connected");
        self.cache.insert(comp, k);
        k
    }

    /// Kind of the special subgroup on `subset` (the empty subgroup is spherical).
    pub fn kind(&mut self, subset: &[usize]) -> ComponentKind {
        let mut kind = ComponentKind::Spherical;
        for comp in components_of(self.cm, subset) {
            match self.component(comp) {
                ComponentKind::NonAffine => return ComponentKind::NonAffine,
                ComponentKind::AffineEuclidean => kind = ComponentKind::AffineEuclidean,
                ComponentKind::Spherical => {}
            }
        }
        kind
    }

    pub fn verdict(&mut self, subset: &[usize]) -> TypeVerdict {
        let comps = components_of(self.cm, subset);
        let components: Vec<(Vec<usize>, ComponentKind)> = comps
            .into_iter()
            .map(|c| {
                let k = self.component(c.clone());
                (c, k)
            })
            .collect();
        let kind = combine(components.iter().map(|(_, k)| *k));
        // Special subgroups of affine groups are affine, so the maximal proper
        // subsets decide minimality.
        let minimal_nonaffine = kind == ComponentKind::NonAffine
            && (0..subset.len()).all(|drop| {
                let rest: Vec<usize> = subset
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &s)| s)
                    .collect();
                self.kind(&rest).is_affine()
            });
        TypeVerdict {
            kind,
            components,
            minimal_nonaffine,
        }
    }
}

fn combine(kinds: impl Iterator<Item = ComponentKind>) -> ComponentKind {
    let mut kind = ComponentKind::Spherical;
    for k in kinds {
        match k {
            ComponentKind::NonAffine => return ComponentKind::NonAffine,
            ComponentKind::AffineEuclidean => kind = ComponentKind::AffineEuclidean,
            ComponentKind::Spherical => {}
        }
    }
    kind
}

pub fn classify_group(cm: &CoxeterMatrix) -> TypeVerdict {
    let all: Vec<usize> = (0..cm.rank()).collect();
    SubgroupClassifier::new(cm).verdict(&all)
}

/// All inclusion-minimal generator subsets spanning a non-affine special subgroup.
///
/// A minimal non-affine subset is connected (otherwise one of its components
/// would already be non-affine), and by the affine-closure property it is
/// enough to test its maximal proper subsets.
pub fn minimal_nonaffine_subsets(cm: &CoxeterMatrix) -> Result<Vec<Vec<usize>>> {
    let n = cm.rank();
    let mut clf = SubgroupClassifier::new(cm);
    let all: Vec<usize> = (0..n).collect();
    if clf.kind(&all).is_affine() {
        return Err(Error::GroupIsAffine);
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if components_of(cm, &subset).len() != 1 {
            continue;
        }
        if clf.kind(&subset).is_affine() {
            continue;
        }
        let minimal = (0..subset.len()).all(|drop| {
            let rest: Vec<usize> = subset
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &s)| s)
                .collect();
            clf.kind(&rest).is_affine()
        });
        if minimal {
            out.push(subset);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(text: &str) -> CoxeterMatrix {
        CoxeterMatrix::parse(text).unwrap()
    }

    #[test]
    fn components_examples() {
        assert_eq!(irreducible_components(&cm("rank 2; m12=3")), vec![vec![0, 1]]);
        assert_eq!(irreducible_components(&cm("rank 2; m12=2")), vec![vec![0], vec![1]]);
        assert_eq!(
            irreducible_components(&cm("rank 4; m12=inf m34=inf")),
            vec![vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn component_kinds() {
        assert_eq!(classify_component(&cm("rank 2; m12=3"), &[0, 1]).unwrap(), ComponentKind::Spherical);
        assert_eq!(
            classify_component(&cm("rank 2; m12=inf"), &[0, 1]).unwrap(),
            ComponentKind::AffineEuclidean
        );
        assert_eq!(
            classify_component(&cm("rank 3; m12=3 m13=3 m23=4"), &[0, 1, 2]).unwrap(),
            ComponentKind::NonAffine
        );
        assert_eq!(
            classify_component(&cm("rank 2; m12=2"), &[0, 1]).unwrap_err(),
            Error::NotIrreducible(vec![0, 1])
        );
    }

    #[test]
    fn group_verdicts() {
        let v = classify_group(&cm("rank 3; m12=3 m13=3 m23=3"));
        assert_eq!(v.kind, ComponentKind::AffineEuclidean);
        assert!(!v.minimal_nonaffine);

        let v = classify_group(&cm("rank 3; m12=3 m13=3 m23=4"));
        assert_eq!(v.kind, ComponentKind::NonAffine);
        assert!(v.minimal_nonaffine);

        let v = classify_group(&cm("rank 4; m12=3 m13=3 m14=3 m23=3 m24=3 m34=3"));
        assert_eq!(v.kind, ComponentKind::NonAffine);
        assert!(v.minimal_nonaffine);

        // mixed spherical x Euclidean is affine
        let v = classify_group(&cm("rank 3; m12=inf"));
        assert_eq!(v.kind, ComponentKind::AffineEuclidean);
        assert_eq!(
            v.components,
            vec![(vec![0, 1], ComponentKind::AffineEuclidean), (vec![2], ComponentKind::Spherical)]
        );
    }

    #[test]
    fn minimal_subsets_examples() {
        assert_eq!(
            minimal_nonaffine_subsets(&cm("rank 3; m12=3 m13=3 m23=4")).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            minimal_nonaffine_subsets(&cm("rank 4; m12=3 m13=3 m23=4")).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            minimal_nonaffine_subsets(&cm("rank 3; m12=3 m13=3 m23=3")).unwrap_err(),
            Error::GroupIsAffine
        );
    }

    #[test]
    fn rank_one_is_spherical() {
        let v = classify_group(&cm("rank 1"));
        assert_eq!(v.kind, ComponentKind::Spherical);
        assert!(!v.minimal_nonaffine);
    }
}
