//! Closed intervals with exact rational endpoints, and a certified enclosure of pi.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalInterval {
    lo: BigRational,
    hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::point(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.hi, -&self.lo)
    }

    pub fn add_scalar(&self, v: &BigRational) -> Self {
        Self::new(&self.lo + v, &self.hi + v)
    }

    pub fn scale(&self, v: &BigRational) -> Self {
        let a = &self.lo * v;
        let b = &self.hi * v;
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    /// True when every point of the interval is strictly greater than every point of `o`.
    pub fn certainly_gt(&self, o: &Self) -> bool {
        self.lo > o.hi
    }

    pub fn certainly_le(&self, o: &Self) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64().unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_sig15(self.lo_f64()), fmt_sig15(self.hi_f64()))
    }
}

/// Formats with 15 significant digits, fixed notation.
pub fn fmt_sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (14 - mag).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Enclosure of `arctan(1/x)` with width below `tol`, from the alternating series.
fn arctan_inv(x: u32, tol: &BigRational) -> RationalInterval {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = BigInt::from(x);
    let mut sum = BigRational::zero();
    let mut k: u32 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), BigInt::from(2 * k + 1) * &power);
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        if &term < tol {
            // Alternating series with decreasing terms: the limit lies between
            // consecutive partial sums.
            return if sum <= next {
                RationalInterval::new(sum, next)
            } else {
                RationalInterval::new(next, sum)
            };
        }
        sum = next;
        power *= &x2;
        k += 1;
    }
}

/// Certified rational enclosure of pi of width below `10^-digits` (Machin's formula).
pub fn pi_enclosure(digits: u32) -> RationalInterval {
    let tol = BigRational::new(BigInt::one(), BigInt::from(10).pow(digits + 2));
    let a = arctan_inv(5, &tol).scale(&BigRational::from_integer(16.into()));
    let b = arctan_inv(239, &tol).scale(&BigRational::from_integer(4.into()));
    a.sub(&b)
}

/// Enclosure of `2*pi`.
pub fn two_pi_enclosure(digits: u32) -> RationalInterval {
    pi_enclosure(digits).scale(&BigRational::from_integer(2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_is_enclosed() {
        let pi = pi_enclosure(30);
        assert!(pi.lo_f64() <= std::f64::consts::PI + 1e-15);
        assert!(pi.hi_f64() >= std::f64::consts::PI - 1e-15);
        let w = pi.width();
        assert!(w < BigRational::new(1.into(), BigInt::from(10).pow(30)));
        // 3.14159265358979 < pi < 3.14159265358980
        let lo = BigRational::new(314159265358979i64.into(), BigInt::from(10).pow(14));
        let hi = BigRational::new(314159265358980i64.into(), BigInt::from(10).pow(14));
        assert!(pi.lo() > &lo && pi.hi() < &hi);
    }

    #[test]
    fn interval_product_signs() {
        let a = RationalInterval::new(BigRational::from_integer((-2).into()), BigRational::from_integer(3.into()));
        let b = RationalInterval::new(BigRational::from_integer((-5).into()), BigRational::from_integer(1.into()));
        let p = a.mul(&b);
        assert_eq!(p.lo(), &BigRational::from_integer((-15).into()));
        assert_eq!(p.hi(), &BigRational::from_integer(10.into()));
    }

    #[test]
    fn sig15_formatting() {
        assert_eq!(fmt_sig15(6.283185307179586), "6.28318530717959");
        assert_eq!(fmt_sig15(0.216814692820414), "0.216814692820414");
        assert_eq!(fmt_sig15(-1.0), "-1.00000000000000");
    }
}
