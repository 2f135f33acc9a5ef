//! The Tits (geometric) representation and canonical element keys.
//!
//! Elements of `W` are identified with their matrices acting on the span of
//! the simple roots `e_s`; the representation is faithful, so matrix equality
//! is group equality.

use std::fmt;
use std::sync::Arc;

use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::field::{CosineField, Scalar};
use crate::gram::GramMatrix;
use crate::matrix::Matrix;

/// Deterministic byte serialization of a normalized matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key(Box<[u8]>);

impl Key {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex, used in reports.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.0.len() * 2);
        for b in self.0.iter() {
            s.push_str(&format!("{b:02x}"));
        }
        s
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.to_hex())
    }
}

fn push_int(out: &mut Vec<u8>, v: &num_bigint::BigInt) {
    let bytes = v.to_signed_bytes_le();
    out.push(bytes.len() as u8);
    out.extend_from_slice(&bytes);
}

/// Injective key of a vector of scalars.
pub fn vector_key(v: &[Scalar]) -> Key {
    let mut out = Vec::with_capacity(v.len() * 4);
    for s in v {
        push_int(&mut out, s.denominator());
        for c in s.numerators() {
            push_int(&mut out, c);
        }
    }
    Key(out.into_boxed_slice())
}

/// Injective key of a matrix: every entry's denominator and numerators, length-prefixed.
pub fn matrix_key(m: &Matrix) -> Key {
    vector_key(m.entries())
}

/// An element of `W` as a matrix in the Tits representation.
#[derive(Clone)]
pub struct GroupElement {
    matrix: Matrix,
    word: Option<Vec<usize>>,
    key: Key,
}

impl GroupElement {
    pub fn from_matrix(matrix: Matrix, word: Option<Vec<usize>>) -> Self {
        let key = matrix_key(&matrix);
        Self { matrix, word, key }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn word(&self) -> Option<&[usize]> {
        self.word.as_deref()
    }

    pub fn key(&self) -> &Key {
        &self.key
    }

    pub fn with_word(mut self, word: Vec<usize>) -> Self {
        self.word = Some(word);
        self
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Product `self * rhs`; the word is concatenated when both are known.
    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        let word = match (&self.word, &rhs.word) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        GroupElement::from_matrix(self.matrix.mul(&rhs.matrix), word)
    }

    /// `det = (-1)^(standard length)`.
    pub fn length_parity(&self) -> usize {
        if self.matrix.determinant().is_negative() {
            1
        } else {
            0
        }
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for GroupElement {}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupElement")
            .field("word", &self.word)
            .field("matrix", &self.matrix)
            .finish()
    }
}

pub fn canonical_key(g: &GroupElement) -> Key {
    g.key.clone()
}

/// Simple reflection `sigma_s(x) = x - 2 B(e_s, x) e_s` as a matrix on the simple-root basis.
pub fn tits_generator(gm: &GramMatrix, s: usize) -> GroupElement {
    let n = gm.rank();
    let mut m = Matrix::identity(gm.field(), n);
    for t in 0..n {
        let v = &m.get(s, t).clone() - &gm.get(s, t).scale(2, 1);
        m.set(s, t, v);
    }
    GroupElement::from_matrix(m, Some(vec![s]))
}

/// Product of generators along `word`, left to right. The empty word is the identity.
pub fn evaluate_word(gens: &[GroupElement], word: &[usize]) -> Result<GroupElement> {
    let n = gens
        .first()
        .map(|g| g.matrix.size())
        .ok_or(Error::EmptyRank)?;
    let field = gens[0].matrix.field().clone();
    let mut m = Matrix::identity(&field, n);
    for &i in word {
        let g = gens.get(i).ok_or(Error::GeneratorOutOfRange {
            index: i,
            rank: gens.len(),
        })?;
        m = m.mul(&g.matrix);
    }
    Ok(GroupElement::from_matrix(m, Some(word.to_vec())))
}

/// `rank(M - I)`: codimension of the fixed subspace.
pub fn fixed_space_codim(g: &GroupElement) -> usize {
    let id = Matrix::identity(g.matrix.field(), g.matrix.size());
    g.matrix.sub(&id).rank()
}

/// A Coxeter group with its Tits representation.
#[derive(Clone)]
pub struct CoxeterGroup {
    gram: GramMatrix,
    gens: Vec<GroupElement>,
    /// Row `s` holds `2 B(e_s, .)`.
    two_b: Vec<Vec<Scalar>>,
    identity: GroupElement,
}

impl CoxeterGroup {
    pub fn new(cm: &CoxeterMatrix) -> Self {
        Self::from_gram(GramMatrix::new(cm))
    }

    pub fn with_field(cm: &CoxeterMatrix, field: Arc<CosineField>) -> Self {
        Self::from_gram(GramMatrix::with_field(cm, field))
    }

    pub fn from_gram(gram: GramMatrix) -> Self {
        let n = gram.rank();
        let gens = (0..n).map(|s| tits_generator(&gram, s)).collect();
        let two_b = (0..n)
            .map(|s| (0..n).map(|t| gram.get(s, t).scale(2, 1)).collect())
            .collect();
        let identity = GroupElement::from_matrix(Matrix::identity(gram.field(), n), Some(vec![]));
        Self {
            gram,
            gens,
            two_b,
            identity,
        }
    }

    pub fn coxeter(&self) -> &CoxeterMatrix {
        self.gram.coxeter()
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn field(&self) -> &Arc<CosineField> {
        self.gram.field()
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    pub fn identity(&self) -> &GroupElement {
        &self.identity
    }

    pub fn evaluate(&self, word: &[usize]) -> Result<GroupElement> {
        if word.is_empty() {
            return Ok(self.identity.clone());
        }
        evaluate_word(&self.gens, word)
    }

    /// `g * s`, computed as a rank-one update.
    pub fn mul_generator(&self, g: &GroupElement, s: usize) -> GroupElement {
        let n = self.rank();
        let col: Vec<Scalar> = (0..n).map(|i| g.matrix.get(i, s).clone()).collect();
        let m = g.matrix.sub_outer(&col, &self.two_b[s]);
        let word = g.word.as_ref().map(|w| {
            let mut w = w.clone();
            w.push(s);
            w
        });
        GroupElement::from_matrix(m, word)
    }

    /// `2 B(v, .)` as a row vector.
    pub fn two_b_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        let n = self.rank();
        (0..n)
            .map(|t| {
                let mut acc = Scalar::zero(self.field());
                for (s, vs) in v.iter().enumerate() {
                    if !vs.is_zero() && !self.two_b[s][t].is_zero() {
                        acc = &acc + &(vs * &self.two_b[s][t]);
                    }
                }
                acc
            })
            .collect()
    }

    /// `M^T B M = B`.
    pub fn preserves_form(&self, g: &GroupElement) -> bool {
        let b = self.gram.matrix();
        g.matrix.transpose().mul(b).mul(&g.matrix) == *b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn group(text: &str) -> CoxeterGroup {
        CoxeterGroup::new(&CoxeterMatrix::parse(text).unwrap())
    }

    fn ints(g: &GroupElement) -> Vec<Vec<f64>> {
        g.matrix().to_f64()
    }

    #[test]
    fn generator_matrices() {
        assert_eq!(ints(&group("rank 1").generators()[0]), vec![vec![-1.0]]);
        assert_eq!(
            ints(&group("rank 2; m12=3").generators()[0]),
            vec![vec![-1.0, 1.0], vec![0.0, 1.0]]
        );
        assert_eq!(
            ints(&group("rank 2; m12=inf").generators()[0]),
            vec![vec![-1.0, 2.0], vec![0.0, 1.0]]
        );
    }

    #[test]
    fn words_and_relations() {
        let g = group("rank 2; m12=3");
        assert!(g.evaluate(&[]).unwrap().is_identity());
        assert!(g.evaluate(&[0, 0]).unwrap().is_identity());
        assert!(g.evaluate(&[0, 1, 0, 1, 0, 1]).unwrap().is_identity());
        assert!(!g.evaluate(&[0, 1, 0, 1]).unwrap().is_identity());
        assert!(matches!(
            g.evaluate(&[2]),
            Err(Error::GeneratorOutOfRange { index: 2, rank: 2 })
        ));
    }

    #[test]
    fn keys_identify_group_elements() {
        let g = group("rank 2; m12=3");
        let a = g.evaluate(&[0, 1, 0]).unwrap();
        let b = g.evaluate(&[1, 0, 1]).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_eq!(canonical_key(g.identity()), canonical_key(&g.evaluate(&[]).unwrap()));
        let words: [&[usize]; 6] = [&[], &[0], &[1], &[0, 1], &[1, 0], &[0, 1, 0]];
        let keys: HashSet<Key> = words
            .iter()
            .map(|w| canonical_key(&g.evaluate(w).unwrap()))
            .collect();
        assert_eq!(keys.len(), 6);
    }

    #[test]
    fn rank_one_update_matches_product() {
        let g = group("rank 3; m12=3 m13=3 m23=4");
        let x = g.evaluate(&[0, 1, 2, 1]).unwrap();
        for s in 0..3 {
            assert_eq!(g.mul_generator(&x, s), x.mul(&g.generators()[s]));
        }
    }

    #[test]
    fn fixed_space_codims() {
        let g = group("rank 2; m12=3");
        assert_eq!(fixed_space_codim(g.identity()), 0);
        assert_eq!(fixed_space_codim(&g.generators()[1]), 1);
        assert_eq!(fixed_space_codim(&g.evaluate(&[0, 1]).unwrap()), 2);
    }

    #[test]
    fn form_is_preserved() {
        let g = group("rank 4; m12=5 m23=3 m34=inf m14=4");
        let x = g.evaluate(&[0, 1, 2, 3, 2, 0, 1]).unwrap();
        assert!(g.preserves_form(&x));
        assert_eq!(x.length_parity(), 1);
    }
}
