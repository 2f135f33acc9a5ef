//! The Gram matrix `B(e_i, e_j) = -cos(pi/m_ij)` of a Coxeter matrix.

use std::sync::Arc;

use serde::Serialize;

use crate::coxeter::{CoxeterMatrix, Exponent};
use crate::field::{CosineField, Scalar};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct GramMatrix {
    coxeter: CoxeterMatrix,
    field: Arc<CosineField>,
    matrix: Matrix,
}

/// Inertia of the Gram form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn as_tuple(self) -> (usize, usize, usize) {
        (self.positive, self.negative, self.zero)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Gram entry for a single exponent in the given field.
pub fn gram_entry(field: &Arc<CosineField>, m: Exponent) -> Scalar {
    match m {
        Exponent::Finite(1) => Scalar::one(field),
        Exponent::Finite(2) => Scalar::zero(field),
        Exponent::Finite(m) => Scalar::two_cos_pi_over(field, m).scale(-1, 2),
        Exponent::Infinite => Scalar::from_integer(field, -1),
    }
}

impl GramMatrix {
    /// Gram matrix over `Q(2cos(pi/N))`, `N` the lcm of the finite exponents.
    pub fn new(cm: &CoxeterMatrix) -> Self {
        let field = CosineField::new(cm.finite_lcm());
        Self::with_field(cm, field)
    }

    /// Gram matrix over a caller-chosen field (its conductor must be a multiple
    /// of every finite exponent).
    pub fn with_field(cm: &CoxeterMatrix, field: Arc<CosineField>) -> Self {
        let n = cm.rank();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| gram_entry(&field, cm.get(i, j))).collect())
            .collect();
        Self {
            coxeter: cm.clone(),
            field,
            matrix: Matrix::from_rows(rows),
        }
    }

    pub fn coxeter(&self) -> &CoxeterMatrix {
        &self.coxeter
    }

    pub fn field(&self) -> &Arc<CosineField> {
        &self.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.matrix.get(i, j)
    }

    /// `B(x, y)`.
    pub fn form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let by = self.matrix.mul_vec(y);
        let mut acc = Scalar::zero(&self.field);
        for (a, b) in x.iter().zip(&by) {
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
        }
        acc
    }

    pub fn signature(&self) -> Signature {
        let (positive, negative, zero) = self.matrix.inertia();
        Signature {
            positive,
            negative,
            zero,
        }
    }
}

/// Exact inertia of the Gram form.
pub fn gram_signature(gm: &GramMatrix) -> Signature {
    gm.signature()
}
