//! Isometries of the upper half-plane as rational 2x2 matrices.
//!
//! A matrix with positive determinant acts by `z -> (az + b)/(cz + d)`; one
//! with negative determinant acts by `z -> (a conj(z) + b)/(c conj(z) + d)`.
//! For rational matrices composition is the matrix product in both cases.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{mulmod, powmod};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A point of the boundary `R u {inf}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ideal {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ideal::Finite(x) => write!(f, "{x}"),
            Ideal::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    /// Row-major `[a, b, c, d]`.
    m: [BigRational; 4],
}

impl Isometry {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { m: [a, b, c, d] }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(qi(a), qi(b), qi(c), qi(d))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn entries(&self) -> &[BigRational; 4] {
        &self.m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &o.m;
        Self::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn det(&self) -> BigRational {
        &self.m[0] * &self.m[3] - &self.m[1] * &self.m[2]
    }

    pub fn trace(&self) -> BigRational {
        &self.m[0] + &self.m[3]
    }

    /// Orientation reversing.
    pub fn is_anti(&self) -> bool {
        self.det().is_negative()
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        let [a, b, c, d] = &self.m;
        Self::new(d / &det, -b / &det, -c / &det, a / &det)
    }

    /// Equal as isometries: proportional matrices.
    pub fn projectively_eq(&self, o: &Self) -> bool {
        (0..4).all(|i| (0..4).all(|j| &self.m[i] * &o.m[j] == &self.m[j] * &o.m[i]))
    }

    pub fn is_projective_identity(&self) -> bool {
        self.projectively_eq(&Self::identity())
    }

    /// `|tr|^2 / |det|`, the conjugacy invariant deciding elliptic / parabolic / hyperbolic.
    pub fn normalized_trace_sq(&self) -> BigRational {
        let t = self.trace();
        &t * &t / self.det().abs()
    }

    /// Action on the boundary (the conjugation is invisible on the real line).
    pub fn act(&self, x: &Ideal) -> Ideal {
        let [a, b, c, d] = &self.m;
        match x {
            Ideal::Infinity => {
                if c.is_zero() {
                    Ideal::Infinity
                } else {
                    Ideal::Finite(a / c)
                }
            }
            Ideal::Finite(x) => {
                let den = c * x + d;
                if den.is_zero() {
                    Ideal::Infinity
                } else {
                    Ideal::Finite((a * x + b) / den)
                }
            }
        }
    }

    /// For a reflection fixing `inf`: the vertical mirror `x = value`.
    pub fn vertical_mirror(&self) -> Option<BigRational> {
        let [a, b, c, d] = &self.m;
        if !c.is_zero() || !self.is_anti() || (a + d) != BigRational::zero() {
            return None;
        }
        Some(b / (d * qi(2)))
    }

    /// For a reflection in a semicircle: `(center, radius^2)`.
    pub fn mirror_circle(&self) -> Option<(BigRational, BigRational)> {
        let [a, b, c, d] = &self.m;
        if c.is_zero() || !self.is_anti() || (a + d) != BigRational::zero() {
            return None;
        }
        let x0 = a / c;
        let r2 = b / c + &x0 * &x0;
        Some((x0, r2))
    }

    /// Reduction to `PGL(2, F_p)`; `None` when a denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<ModIsometry> {
        let mut out = [0u64; 4];
        for (o, x) in out.iter_mut().zip(&self.m) {
            *o = reduce_rational(x, p)?;
        }
        let det = (mulmod(out[0], out[3], p) + p - mulmod(out[1], out[2], p)) % p;
        if det == 0 {
            return None;
        }
        Some(ModIsometry::new(out, p))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        [f(&self.m[0]), f(&self.m[1]), f(&self.m[2]), f(&self.m[3])]
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m[0], self.m[1], self.m[2], self.m[3])
    }
}

pub fn reduce_rational(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    Some(mulmod(num, powmod(den, p - 2, p), p))
}

/// An element of `PGL(2, F_p)`, stored scaled so the first nonzero entry is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModIsometry {
    m: [u64; 4],
    p: u64,
}

impl ModIsometry {
    pub fn new(m: [u64; 4], p: u64) -> Self {
        let lead = *m.iter().find(|&&x| x != 0).expect("nonzero matrix");
        let inv = powmod(lead, p - 2, p);
        let mut out = [0; 4];
        for (o, x) in out.iter_mut().zip(m) {
            *o = mulmod(x, inv, p);
        }
        Self { m: out, p }
    }

    pub fn identity(p: u64) -> Self {
        Self::new([1, 0, 0, 1], p)
    }

    pub fn entries(&self) -> [u64; 4] {
        self.m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        let add = |x: u64, y: u64| (x + y) % p;
        Self::new(
            [
                add(mulmod(a, e, p), mulmod(b, g, p)),
                add(mulmod(a, f, p), mulmod(b, h, p)),
                add(mulmod(c, e, p), mulmod(d, g, p)),
                add(mulmod(c, f, p), mulmod(d, h, p)),
            ],
            p,
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p)
    }

    /// Order in `PGL(2, F_p)`.
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.mul(self);
            k += 1;
        }
        k
    }
}

/// Order of the subgroup of `PGL(2, F_p)` generated by `gens`.
pub fn generated_order(gens: &[ModIsometry], p: u64) -> usize {
    let mut seen = std::collections::HashSet::new();
    let id = ModIsometry::identity(p);
    seen.insert(id);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len()
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflections_and_mirrors() {
        let s = Isometry::from_ints(-1, 1, 0, 1);
        assert_eq!(s.vertical_mirror(), Some(q(1, 2)));
        assert!(s.mul(&s).is_projective_identity());
        let c = Isometry::from_ints(0, 1, 1, 0);
        assert_eq!(c.mirror_circle(), Some((qi(0), qi(1))));
        let c2 = Isometry::from_ints(1, 0, 2, -1);
        assert_eq!(c2.mirror_circle(), Some((q(1, 2), q(1, 4))));
    }

    #[test]
    fn boundary_action() {
        let n = Isometry::from_ints(1, -1, 1, 0);
        assert_eq!(n.act(&Ideal::Infinity), Ideal::Finite(qi(1)));
        assert_eq!(n.act(&Ideal::Finite(qi(0))), Ideal::Infinity);
    }

    #[test]
    fn modular_orders() {
        let t = Isometry::from_ints(1, 1, 0, 1);
        assert_eq!(t.reduce_mod(7).unwrap().order(), 7);
        assert_eq!(t.reduce_mod(5).unwrap().order(), 5);
        let r = Isometry::from_ints(0, 1, -1, 1);
        assert_eq!(r.reduce_mod(7).unwrap().order(), 3);
        assert!(Isometry::new(q(1, 7), qi(0), qi(0), qi(1)).reduce_mod(7).is_none());
    }
}
