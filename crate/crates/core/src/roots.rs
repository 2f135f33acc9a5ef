//! Reflections enumerated through the orbit of the simple roots.

use std::collections::HashSet;

use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::tits::{vector_key, CoxeterGroup, GroupElement, Key};

/// A reflection `w s w^-1` together with its positive root.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub element: GroupElement,
    /// Positive root on the simple-root basis, `B(root, root) = 1`.
    pub root: Vec<Scalar>,
    /// `2 B(root, .)`, cached for products `g * r = g - (g root) (2 B root)^T`.
    pub two_b_root: Vec<Scalar>,
    /// Breadth-first root depth (simple roots have depth 0).
    pub depth: usize,
    /// A word `w s w^-1` for the reflection.
    pub word: Vec<usize>,
}

impl Reflection {
    /// `g * self`.
    pub fn right_mul(&self, g: &Matrix) -> Matrix {
        let g_root = g.mul_vec(&self.root);
        g.sub_outer(&g_root, &self.two_b_root)
    }
}

fn root_key(v: &[Scalar]) -> Key {
    vector_key(v)
}

/// All reflections whose positive root has depth at most `depth_cap`, ordered by
/// depth and then by canonical root key.
pub fn enumerate_reflections(group: &CoxeterGroup, depth_cap: usize) -> Vec<Reflection> {
    let n = group.rank();
    let field = group.field().clone();
    // (root, word w with root = w e_s, s)
    let mut level: Vec<(Vec<Scalar>, Vec<usize>, usize)> = (0..n)
        .map(|s| {
            let mut e = vec![Scalar::zero(&field); n];
            e[s] = Scalar::one(&field);
            (e, Vec::new(), s)
        })
        .collect();
    let mut seen: HashSet<Key> = level.iter().map(|(r, _, _)| root_key(r)).collect();
    let mut out = Vec::new();
    let mut depth = 0;
    loop {
        level.sort_by_cached_key(|(r, _, _)| root_key(r));
        for (root, w, s) in &level {
            out.push(make_reflection(group, root.clone(), w, *s, depth));
        }
        if depth == depth_cap {
            break;
        }
        let mut next = Vec::new();
        for (root, w, s) in &level {
            let two_b = group.two_b_row(root);
            for t in 0..n {
                // sigma_t(root) = root - 2 B(e_t, root) e_t; positive unless root = e_t.
                if two_b[t].is_zero() {
                    continue;
                }
                let mut r = root.clone();
                r[t] = &r[t] - &two_b[t];
                if r.iter().any(Scalar::is_negative) {
                    continue;
                }
                let k = root_key(&r);
                if seen.insert(k) {
                    let mut tw = vec![t];
                    tw.extend_from_slice(w);
                    next.push((r, tw, *s));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
        depth += 1;
    }
    out
}

fn make_reflection(
    group: &CoxeterGroup,
    root: Vec<Scalar>,
    w: &[usize],
    s: usize,
    depth: usize,
) -> Reflection {
    let two_b_root = group.two_b_row(&root);
    let id = Matrix::identity(group.field(), group.rank());
    let m = id.sub_outer(&root, &two_b_root);
    let mut word = w.to_vec();
    word.push(s);
    word.extend(w.iter().rev());
    Reflection {
        element: GroupElement::from_matrix(m, Some(word.clone())),
        root,
        two_b_root,
        depth,
        word,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use crate::tits::fixed_space_codim;

    fn group(text: &str) -> CoxeterGroup {
        CoxeterGroup::new(&CoxeterMatrix::parse(text).unwrap())
    }

    #[test]
    fn depth_zero_is_simple_reflections() {
        let g = group("rank 3; m12=3 m13=3 m23=4");
        let r = enumerate_reflections(&g, 0);
        assert_eq!(r.len(), 3);
        for refl in &r {
            assert!(g.generators().iter().any(|x| x == &refl.element));
        }
    }

    #[test]
    fn a2_has_three_reflections() {
        assert_eq!(enumerate_reflections(&group("rank 2; m12=3"), 1).len(), 3);
        assert_eq!(enumerate_reflections(&group("rank 2; m12=3"), 10).len(), 3);
    }

    /// Conjugates `w s w^-1` with `|w| <= d`, deduplicated by matrix.
    fn conjugate_oracle(g: &CoxeterGroup, d: usize) -> HashSet<Key> {
        let n = g.rank();
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut out = HashSet::new();
        for len in 0..=d {
            for w in &words {
                for s in 0..n {
                    let mut x = w.clone();
                    x.push(s);
                    x.extend(w.iter().rev());
                    out.insert(g.evaluate(&x).unwrap().key().clone());
                }
            }
            if len < d {
                words = words
                    .iter()
                    .flat_map(|w| (0..n).map(move |s| {
                        let mut x = w.clone();
                        x.push(s);
                        x
                    }))
                    .collect();
            }
        }
        out
    }

    #[test]
    fn infinite_dihedral_depths() {
        let g = group("rank 2; m12=inf");
        for d in 0..5 {
            let r = enumerate_reflections(&g, d);
            assert_eq!(r.len(), 2 * d + 2);
            let keys: HashSet<Key> = r.iter().map(|x| x.element.key().clone()).collect();
            assert_eq!(keys, conjugate_oracle(&g, d));
        }
    }

    #[test]
    fn finite_groups_stabilize() {
        for (text, count) in [("rank 2; m12=3", 3), ("rank 2; m12=4", 4), ("rank 3; m12=3 m23=3", 6)] {
            let g = group(text);
            let r = enumerate_reflections(&g, 20);
            assert_eq!(r.len(), count);
            let small: HashSet<Key> = enumerate_reflections(&g, 1).iter().map(|x| x.element.key().clone()).collect();
            let big: HashSet<Key> = r.iter().map(|x| x.element.key().clone()).collect();
            assert!(small.is_subset(&big));
            assert_eq!(big, conjugate_oracle(&g, 4));
        }
    }

    #[test]
    fn reflections_are_valid() {
        let g = group("rank 3; m12=3 m13=3 m23=4");
        for r in enumerate_reflections(&g, 3) {
            assert!(r.element.mul(&r.element).is_identity());
            assert!(!r.element.is_identity());
            assert_eq!(fixed_space_codim(&r.element), 1);
            assert!(g.gram().form(&r.root, &r.root).is_one());
            assert_eq!(g.evaluate(&r.word).unwrap(), r.element);
        }
    }
}
