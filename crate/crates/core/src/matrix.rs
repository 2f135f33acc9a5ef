//! Dense square matrices over the exact field.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::field::{CosineField, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &Arc<CosineField>, n: usize) -> Self {
        Self {
            n,
            data: vec![Scalar::zero(field); n * n],
        }
    }

    pub fn identity(field: &Arc<CosineField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one(field);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<CosineField> {
        self.data[0].field()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(self.get(j, i).clone());
            }
        }
        Self { n, data }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let field = self.field().clone();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero(&field);
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                data.push(acc);
            }
        }
        Self { n, data }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                let mut acc = Scalar::zero(self.field());
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self - u v^T`, the rank-one update used for products with reflections.
    pub fn sub_outer(&self, u: &[Scalar], v: &[Scalar]) -> Self {
        let n = self.n;
        let mut data = self.data.clone();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let idx = i * n + j;
                data[idx] = &data[idx] - &(&u[i] * &v[j]);
            }
        }
        Self { n, data }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(self.field());
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Principal submatrix on the given indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let rows = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Rank, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut rows = self.rows();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank][col].clone();
            for r in rank + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone();
                for c in col..n {
                    let v = &(&pivot * &rows[r][c]) - &(&f * &rows[rank][c]);
                    rows[r][c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Characteristic polynomial `det(xI - A)`, lowest coefficient first
    /// (Faddeev-LeVerrier; only integer divisions are needed).
    pub fn char_poly(&self) -> Vec<Scalar> {
        let n = self.n;
        let field = self.field().clone();
        let mut coeffs = vec![Scalar::zero(&field); n + 1];
        coeffs[n] = Scalar::one(&field);
        let mut m = Matrix::zeros(&field, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&m);
            for i in 0..n {
                let v = &next.data[i * n + i] + &coeffs[n - k + 1];
                next.data[i * n + i] = v;
            }
            let am = self.mul(&next);
            coeffs[n - k] = am.trace().scale(-1, k as i64);
            m = next;
        }
        coeffs
    }

    pub fn determinant(&self) -> Scalar {
        let c0 = self.char_poly().swap_remove(0);
        if self.n % 2 == 0 {
            c0
        } else {
            -c0
        }
    }

    /// Inertia `(positive, negative, zero)` of a symmetric matrix, via
    /// Descartes' rule on its (real-rooted) characteristic polynomial.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let p = self.char_poly();
        let zeros = p.iter().position(|c| !c.is_zero()).unwrap_or(self.n);
        let signs: Vec<Ordering> = p.iter().map(Scalar::signum).collect();
        let changes = |flip: bool| {
            let mut last = Ordering::Equal;
            let mut count = 0;
            for (i, s) in signs.iter().enumerate().rev() {
                let s = if flip && i % 2 == 1 { s.reverse() } else { *s };
                if s == Ordering::Equal {
                    continue;
                }
                if last != Ordering::Equal && s != last {
                    count += 1;
                }
                last = s;
            }
            count
        };
        let pos = changes(false);
        let neg = changes(true);
        debug_assert_eq!(pos + neg + zeros, self.n, "characteristic polynomial not real-rooted");
        (pos, neg, zeros)
    }

    /// Leading principal minors `det A[0..k, 0..k]` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.n)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.principal(&idx).determinant()
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.row(i).iter().map(Scalar::to_f64).collect())
            .collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.n).map(|i| self.row(i))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(&CosineField::new(2), v)
    }

    #[test]
    fn char_poly_of_small_integer_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3: x^2 - 4x + 3
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(2)]]);
        let p = m.char_poly();
        assert_eq!(p, vec![q(3), q(-4), q(1)]);
        assert_eq!(m.determinant(), q(3));
        assert_eq!(m.inertia(), (2, 0, 0));
    }

    #[test]
    fn inertia_of_indefinite_and_singular() {
        let m = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(-1)]]);
        assert_eq!(m.inertia(), (1, 1, 0));
        let z = Matrix::from_rows(vec![vec![q(1), q(-1)], vec![q(-1), q(1)]]);
        assert_eq!(z.inertia(), (1, 0, 1));
        assert_eq!(z.rank(), 1);
    }

    #[test]
    fn rank_fraction_free() {
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(Matrix::identity(m.field(), 3).rank(), 3);
    }
}
