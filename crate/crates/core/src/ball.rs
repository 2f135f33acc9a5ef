//! Breadth-first enumeration of the ball of standard (word) length.

use std::collections::HashMap;

use crate::par::par_map;
use crate::tits::{CoxeterGroup, GroupElement, Key};

/// Default cap on stored elements.
pub const DEFAULT_NODE_CAP: usize = 5_000_000;

/// Elements of standard length at most `radius`, in breadth-first order with
/// keys sorted inside each level.
#[derive(Clone, Debug)]
pub struct StandardBall {
    radius: usize,
    elements: Vec<GroupElement>,
    lengths: Vec<usize>,
    index: HashMap<Key, usize>,
    partial: bool,
}

impl StandardBall {
    pub fn enumerate(group: &CoxeterGroup, radius: usize, node_cap: usize) -> Self {
        let mut elements = vec![group.identity().clone()];
        let mut lengths = vec![0];
        let mut index = HashMap::new();
        index.insert(group.identity().key().clone(), 0);
        let mut frontier = vec![0usize];
        let mut partial = false;
        for len in 1..=radius {
            let parents: Vec<&GroupElement> = frontier.iter().map(|&i| &elements[i]).collect();
            let children: Vec<Vec<GroupElement>> = par_map(&parents, |g| {
                (0..group.rank()).map(|s| group.mul_generator(g, s)).collect()
            });
            let mut level = Vec::new();
            for child in children.into_iter().flatten() {
                if index.contains_key(child.key()) {
                    continue;
                }
                index.insert(child.key().clone(), usize::MAX);
                level.push(child);
            }
            if level.is_empty() {
                break;
            }
            level.sort_by(|a, b| a.key().cmp(b.key()));
            if elements.len() + level.len() > node_cap {
                for g in &level {
                    index.remove(g.key());
                }
                partial = true;
                break;
            }
            frontier.clear();
            for g in level {
                let i = elements.len();
                index.insert(g.key().clone(), i);
                elements.push(g);
                lengths.push(len);
                frontier.push(i);
            }
        }
        Self {
            radius,
            elements,
            lengths,
            index,
            partial,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// True when the node cap stopped the enumeration early.
    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn position(&self, key: &Key) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Number of elements of each standard length.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.lengths.last().map_or(0, |l| l + 1)];
        for &l in &self.lengths {
            out[l] += 1;
        }
        out
    }
}

/// Standard length of `g`, searching up to `radius`.
pub fn standard_length(group: &CoxeterGroup, g: &GroupElement, radius: usize) -> Option<usize> {
    let ball = StandardBall::enumerate(group, radius, DEFAULT_NODE_CAP);
    ball.position(g.key()).map(|i| ball.length(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;

    fn group(text: &str) -> CoxeterGroup {
        CoxeterGroup::new(&CoxeterMatrix::parse(text).unwrap())
    }

    #[test]
    fn finite_groups_have_full_balls() {
        assert_eq!(StandardBall::enumerate(&group("rank 2; m12=3"), 10, 100).sphere_sizes(), vec![1, 2, 2, 1]);
        assert_eq!(StandardBall::enumerate(&group("rank 3; m12=3 m23=3"), 10, 100).len(), 24);
        assert_eq!(StandardBall::enumerate(&group("rank 3; m12=3 m23=4"), 20, 100).len(), 48);
    }

    #[test]
    fn infinite_dihedral_spheres() {
        let b = StandardBall::enumerate(&group("rank 2; m12=inf"), 5, 100);
        assert_eq!(b.sphere_sizes(), vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn free_group_spheres() {
        let b = StandardBall::enumerate(&group("rank 3; m12=inf m13=inf m23=inf"), 4, 1000);
        assert_eq!(b.sphere_sizes(), vec![1, 3, 6, 12, 24]);
    }

    #[test]
    fn words_match_lengths() {
        let g = group("rank 3; m12=3 m13=3 m23=3");
        let b = StandardBall::enumerate(&g, 5, 1000);
        for (i, x) in b.elements().iter().enumerate() {
            let w = x.word().unwrap();
            assert_eq!(w.len(), b.length(i));
            assert_eq!(&g.evaluate(w).unwrap(), x);
        }
    }

    #[test]
    fn node_cap_marks_partial() {
        let b = StandardBall::enumerate(&group("rank 3; m12=inf m13=inf m23=inf"), 6, 20);
        assert!(b.is_partial());
        assert!(b.len() <= 20);
        assert_eq!(b.len(), 10);
    }
}
