//! Exact arithmetic in the real cyclotomic field `Q(2cos(pi/N))`.
//!
//! An element is stored as a coefficient vector over the power basis
//! `1, t, t^2, ..., t^(d-1)` where `t = 2cos(pi/N)` and `d` is the degree of
//! the minimal polynomial of `t`. All numerators share one positive
//! denominator, and the representation is kept normalized so that structural
//! equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::RationalInterval;

/// The field `Q(t)`, `t = 2cos(pi/N)`, with its integer minimal polynomial.
#[derive(Debug)]
pub struct CosineField {
    conductor: u32,
    /// Monic minimal polynomial of `t`, lowest degree first.
    minpoly: Vec<BigInt>,
    theta: f64,
}

impl PartialEq for CosineField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}

impl Eq for CosineField {}

/// Integer coefficients of the cyclotomic polynomial `Phi_n`, lowest first.
fn cyclotomic(n: u32) -> Vec<i64> {
    // Phi_n = (z^n - 1) / prod_{d | n, d < n} Phi_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    debug_assert!(lead == 1 || lead == -1);
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd] / lead;
        q[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Polynomials `C_k` with `C_k(z + 1/z) = z^k + z^-k`, i.e. `2cos(k a)` in terms of `2cos(a)`.
pub(crate) fn chebyshev_c(k: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::from(2)];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

impl CosineField {
    /// Builds `Q(2cos(pi/n))`. Conductors below 2 are promoted to 2 (the field `Q`).
    pub fn new(n: u32) -> Arc<Self> {
        let n = n.max(2);
        let phi = cyclotomic(2 * n);
        let d = (phi.len() - 1) / 2;
        // z^-d Phi(z) = a_d + sum_k a_{d+k} (z^k + z^-k)
        let mut minpoly = vec![BigInt::zero(); d + 1];
        minpoly[0] = BigInt::from(phi[d]);
        for k in 1..=d {
            let a = BigInt::from(phi[d + k]);
            for (i, c) in chebyshev_c(k).into_iter().enumerate() {
                minpoly[i] += &a * c;
            }
        }
        assert!(minpoly[d].is_one(), "minimal polynomial must be monic");
        let theta = 2.0 * (std::f64::consts::PI / n as f64).cos();
        Arc::new(Self {
            conductor: n,
            minpoly,
            theta,
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minimal_polynomial(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn theta_f64(&self) -> f64 {
        self.theta
    }

    /// Reduces an integer polynomial in `t` modulo the minimal polynomial.
    fn reduce(&self, mut p: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for i in (d..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut p[i]);
            for (j, m) in self.minpoly[..d].iter().enumerate() {
                p[i - d + j] -= &c * m;
            }
        }
        p.resize(d, BigInt::zero());
        p
    }

    /// Rational interval isolating `t` among the roots of the minimal polynomial.
    pub fn theta_enclosure(&self) -> RationalInterval {
        if self.degree() == 1 {
            let v = BigRational::from_integer(-self.minpoly[0].clone());
            return RationalInterval::point(v);
        }
        let eps = 1e-9;
        let lo = BigRational::from_float(self.theta - eps).expect("finite");
        let hi = BigRational::from_float(self.theta + eps).expect("finite");
        let flo = eval_rational(&self.minpoly, &lo);
        let fhi = eval_rational(&self.minpoly, &hi);
        assert!(
            flo.signum() * fhi.signum() < BigRational::zero(),
            "theta enclosure for N={} is not isolating",
            self.conductor
        );
        RationalInterval::new(lo, hi)
    }

    /// Halves an isolating interval of `t`.
    fn bisect(&self, iv: &RationalInterval) -> RationalInterval {
        let mid = iv.midpoint();
        let fmid = eval_rational(&self.minpoly, &mid);
        if fmid.is_zero() {
            return RationalInterval::point(mid);
        }
        let flo = eval_rational(&self.minpoly, iv.lo());
        if flo.signum() == fmid.signum() {
            RationalInterval::new(mid, iv.hi().clone())
        } else {
            RationalInterval::new(iv.lo().clone(), mid)
        }
    }
}

fn eval_rational(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Element of `Q(2cos(pi/N))` with exact sign determination.
#[derive(Clone)]
pub struct Scalar {
    field: Arc<CosineField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scalar {
    pub fn zero(field: &Arc<CosineField>) -> Self {
        Self {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CosineField>) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: &Arc<CosineField>, v: i64) -> Self {
        let mut s = Self::zero(field);
        s.num[0] = BigInt::from(v);
        s
    }

    pub fn from_rational(field: &Arc<CosineField>, numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        let mut s = Self::zero(field);
        s.num[0] = BigInt::from(numer);
        s.den = BigInt::from(denom);
        s.normalize();
        s
    }

    /// The generator `t = 2cos(pi/N)` itself.
    pub fn theta(field: &Arc<CosineField>) -> Self {
        let p = vec![BigInt::zero(), BigInt::one()];
        Self::from_poly(field, p, BigInt::one())
    }

    /// `2cos(pi/m)` for `m` dividing the conductor.
    pub fn two_cos_pi_over(field: &Arc<CosineField>, m: u32) -> Self {
        assert!(
            m >= 1 && field.conductor % m == 0,
            "m={m} does not divide conductor {}",
            field.conductor
        );
        let k = (field.conductor / m) as usize;
        Self::from_poly(field, chebyshev_c(k), BigInt::one())
    }

    fn from_poly(field: &Arc<CosineField>, p: Vec<BigInt>, den: BigInt) -> Self {
        let num = field.reduce(p);
        let mut s = Self {
            field: field.clone(),
            num,
            den,
        };
        s.normalize();
        s
    }

    /// Builds an element from rational coefficients over the power basis.
    pub fn from_coefficients(field: &Arc<CosineField>, coeffs: &[BigRational]) -> Self {
        assert!(coeffs.len() <= field.degree(), "too many coefficients");
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let p = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_poly(field, p, den)
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for c in &mut self.num {
                *c = -std::mem::take(c);
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    pub fn field(&self) -> &Arc<CosineField> {
        &self.field
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Rational coefficients over the power basis of `t`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Z[t]`.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        let t = self.field.theta;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = 0.0;
        for c in self.num.iter().rev() {
            acc = acc * t + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / den
    }

    /// Exact sign: a floating filter with a rigorous error margin, falling back to
    /// interval refinement of `t` when the filter is inconclusive.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(s) = self.sign_filter() {
            return s;
        }
        self.sign_exact()
    }

    fn sign_filter(&self) -> Option<Ordering> {
        let t = self.field.theta;
        let base = t.abs().max(1.0);
        let mut acc = 0.0f64;
        let mut mag = 0.0f64;
        for (i, c) in self.num.iter().enumerate().rev() {
            let cf = c.to_f64()?;
            if !cf.is_finite() {
                return None;
            }
            acc = acc * t + cf;
            mag += (1.0 + i as f64) * cf.abs() * base.powi(i as i32);
        }
        if !acc.is_finite() || !mag.is_finite() {
            return None;
        }
        // Covers rounding in the Horner loop and the error in the f64 value of t.
        let err = 1e-12 * mag;
        if acc > err {
            Some(Ordering::Greater)
        } else if acc < -err {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn sign_exact(&self) -> Ordering {
        let mut iv = self.field.theta_enclosure();
        loop {
            let val = self.eval_interval(&iv);
            if val.lo().is_positive() {
                return Ordering::Greater;
            }
            if val.hi().is_negative() {
                return Ordering::Less;
            }
            if iv.is_point() {
                // t rational and the numerator vanishes there: only possible for zero.
                unreachable!("nonzero element evaluated to zero at a rational root");
            }
            iv = self.field.bisect(&iv);
        }
    }

    fn eval_interval(&self, x: &RationalInterval) -> RationalInterval {
        let mut acc = RationalInterval::point(BigRational::zero());
        for c in self.num.iter().rev() {
            acc = acc.mul(x).add_scalar(&BigRational::from_integer(c.clone()));
        }
        acc
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Multiplies by a rational number.
    pub fn scale(&self, numer: i64, denom: i64) -> Self {
        assert!(denom != 0);
        let mut s = Self {
            field: self.field.clone(),
            num: self.num.iter().map(|c| c * numer).collect(),
            den: &self.den * denom,
        };
        s.normalize();
        s
    }

    /// Multiplicative inverse, by solving `a * x = 1` over `Q`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.field.degree();
        // Column j holds the coefficients of self * t^j.
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
        let mut power = Scalar::one(&self.field);
        let theta = Scalar::theta(&self.field);
        for _ in 0..d {
            cols.push((self * &power).coefficients());
            power = &power * &theta;
        }
        let mut rows: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                r.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                r
            })
            .collect();
        for c in 0..d {
            let p = (c..d).find(|&r| !rows[r][c].is_zero())?;
            rows.swap(c, p);
            let piv = rows[c][c].clone();
            for v in rows[c].iter_mut() {
                *v = &*v / &piv;
            }
            for r in 0..d {
                if r != c && !rows[r][c].is_zero() {
                    let f = rows[r][c].clone();
                    for k in c..=d {
                        let sub = &f * &rows[c][k];
                        rows[r][k] -= sub;
                    }
                }
            }
        }
        let x: Vec<BigRational> = rows.into_iter().map(|r| r[d].clone()).collect();
        Some(Scalar::from_coefficients(&self.field, &x))
    }

    /// Image under the ring map `Z[t] -> F_p`, `t -> root`. Returns `None` when
    /// the denominator is not invertible mod `p`.
    pub fn reduce_mod(&self, p: u64, root: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let den = self.den.mod_floor(&pb).to_u64()?;
        if den == 0 {
            return None;
        }
        let mut acc: u64 = 0;
        for c in self.num.iter().rev() {
            let cm = c.mod_floor(&pb).to_u64()?;
            acc = (mulmod(acc, root, p) + cm) % p;
        }
        Some(mulmod(acc, powmod(den, p - 2, p), p))
    }

    fn check_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "scalars from different fields"
        );
    }
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.den == other.den && self.num == other.num
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.den.hash(state);
        self.num.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// Order of the real numbers (the field is embedded via `t = 2cos(pi/N) > 0`).
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        let num = if self.den == rhs.den {
            self.num.iter().zip(&rhs.num).map(|(a, b)| a + b).collect()
        } else {
            self.num
                .iter()
                .zip(&rhs.num)
                .map(|(a, b)| a * &rhs.den + b * &self.den)
                .collect()
        };
        let den = if self.den == rhs.den {
            self.den.clone()
        } else {
            &self.den * &rhs.den
        };
        let mut s = Scalar {
            field: self.field.clone(),
            num,
            den,
        };
        s.normalize();
        s
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero(&self.field);
        }
        let d = self.field.degree();
        let mut p = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(p);
        let mut s = Scalar {
            field: self.field.clone(),
            num,
            den: &self.den * &rhs.den,
        };
        if !s.den.is_one() {
            s.normalize();
        }
        s
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            });
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomials_of_small_conductors() {
        // 2cos(pi/3) = 1
        assert_eq!(CosineField::new(3).minimal_polynomial(), &[BigInt::from(-1), BigInt::one()]);
        // 2cos(pi/4) = sqrt 2
        let f4 = CosineField::new(4);
        assert_eq!(f4.minimal_polynomial(), &[BigInt::from(-2), BigInt::zero(), BigInt::one()]);
        // 2cos(pi/5) = golden ratio: x^2 - x - 1
        let f5 = CosineField::new(5);
        assert_eq!(f5.minimal_polynomial(), &[BigInt::from(-1), BigInt::from(-1), BigInt::one()]);
        // 2cos(pi/2) = 0
        assert_eq!(CosineField::new(2).minimal_polynomial(), &[BigInt::zero(), BigInt::one()]);
        assert_eq!(CosineField::new(12).degree(), 4);
        assert_eq!(CosineField::new(60).degree(), 16);
    }

    #[test]
    fn theta_root_of_minpoly_numerically() {
        for n in [3u32, 4, 5, 6, 7, 8, 10, 12, 15, 24, 30, 60] {
            let f = CosineField::new(n);
            let t = f.theta_f64();
            let v: f64 = f
                .minimal_polynomial()
                .iter()
                .rev()
                .fold(0.0, |acc, c| acc * t + c.to_f64().unwrap());
            assert!(v.abs() < 1e-6, "N={n}: {v}");
        }
    }

    #[test]
    fn cosines_match_floats() {
        let f = CosineField::new(60);
        for m in [1u32, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60] {
            let c = Scalar::two_cos_pi_over(&f, m);
            let want = 2.0 * (std::f64::consts::PI / m as f64).cos();
            assert!((c.to_f64() - want).abs() < 1e-9, "m={m}");
        }
    }

    #[test]
    fn sqrt_two_squared() {
        let f = CosineField::new(4);
        let r2 = Scalar::two_cos_pi_over(&f, 4);
        assert_eq!(&r2 * &r2, Scalar::from_integer(&f, 2));
        let half = r2.scale(-1, 2);
        assert_eq!(format!("{half}"), "(-1*t)/2");
    }

    #[test]
    fn inverse_roundtrip() {
        let f = CosineField::new(12);
        let t = Scalar::theta(&f);
        let a = &(&t * &t) + &Scalar::from_rational(&f, 3, 7);
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert!(Scalar::zero(&f).inverse().is_none());
    }

    #[test]
    fn exact_sign_of_tiny_values() {
        // golden ratio phi: phi^20 - F20*phi - F19 = 0 exactly; perturb by tiny rationals
        let f = CosineField::new(5);
        let phi = Scalar::theta(&f);
        let mut p = Scalar::one(&f);
        for _ in 0..40 {
            p = &p * &phi;
        }
        // phi^40 = F40 phi + F39
        let f40 = 102_334_155i64;
        let f39 = 63_245_986i64;
        let lin = &phi.scale(f40, 1) + &Scalar::from_integer(&f, f39);
        assert!((&p - &lin).is_zero());
        // phi - 1.6180339887... bracketed by continued fraction convergents
        let above = &phi - &Scalar::from_rational(&f, f40, f39);
        let below = &phi - &Scalar::from_rational(&f, 165_580_141, 102_334_155);
        assert_ne!(above.signum(), below.signum());
        assert_eq!(above.signum(), above.sign_exact());
        assert_eq!(below.signum(), below.sign_exact());
    }

    #[test]
    fn reduction_mod_prime_is_a_ring_map() {
        // x^2 - 2 has root 3 mod 7
        let f = CosineField::new(4);
        let r2 = Scalar::theta(&f);
        assert_eq!(r2.reduce_mod(7, 3), Some(3));
        assert_eq!((&r2 * &r2).reduce_mod(7, 3), Some(2));
        assert_eq!(Scalar::from_rational(&f, 1, 7).reduce_mod(7, 3), None);
    }
}
