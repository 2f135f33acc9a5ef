//! Cusp data: horoballs, the flat horocycle, and the sets `A_s`.
//!
//! A cusp is normalized to `inf` by the normalizer `N_s`, where its stabilizer
//! `V_s` is generated by reflections in two vertical lines `x = lo`, `x = hi`.
//! The horoball of height `h` is `{y > h}` in normalized coordinates. The
//! horocycle `y = h` carries the flat distance `|dx| / h`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::hyperbolic::{qi, Ideal, Isometry};
use crate::filling::model::{TriangleModel, Vertex};
use crate::interval::{two_pi_enclosure, RationalInterval};

#[derive(Clone, Debug)]
pub struct CuspData {
    pub s: usize,
    pub vertex: Ideal,
    pub normalizer: Isometry,
    /// Generator whose normalized mirror is `x = lo`.
    pub gen_lo: usize,
    /// Generator whose normalized mirror is `x = hi`.
    pub gen_hi: usize,
    pub lo: BigRational,
    pub hi: BigRational,
    pub h: BigRational,
}

impl CuspData {
    /// Translation length of `V_s` along the horizontal line.
    pub fn width(&self) -> BigRational {
        (&self.hi - &self.lo) * qi(2)
    }

    /// The fundamental segment `tau_s = [lo, hi]`; its length is `width / 2`.
    pub fn tau(&self) -> (BigRational, BigRational) {
        (self.lo.clone(), self.hi.clone())
    }

    /// Word of the translation `x -> x + width`.
    pub fn translation_word(&self) -> Vec<usize> {
        vec![self.gen_hi, self.gen_lo]
    }

    /// Horocycle distance between points at horizontal offset `dx`.
    pub fn horocycle_distance(&self, dx: &BigRational) -> BigRational {
        dx.abs() / &self.h
    }
}

/// Normalized copy `N^-1 g N`.
fn conj(n: &Isometry, g: &Isometry) -> Isometry {
    n.inverse().mul(g).mul(n)
}

/// Horoball shape in the original coordinates.
enum Horoball {
    Above(BigRational),
    /// Tangent point and Euclidean diameter.
    Disk(BigRational, BigRational),
}

fn horoball(model: &TriangleModel, s: usize, h: &BigRational) -> Result<Horoball> {
    match model.vertex_opposite(s) {
        Vertex::Ideal(Ideal::Infinity) => Ok(Horoball::Above(h.clone())),
        Vertex::Ideal(Ideal::Finite(v)) => Ok(Horoball::Disk(v.clone(), qi(1) / h)),
        Vertex::Finite { .. } => Err(Error::NoIdealVertex(s)),
    }
}

/// Checks that every horoball of height `h` misses the side opposite its cusp
/// and that the horoballs at distinct cusps are disjoint (tangency allowed).
pub fn check_horoballs(model: &TriangleModel, h: &BigRational) -> Result<()> {
    if !h.is_positive() {
        return Err(Error::HoroballOverlap {
            height: h.to_string(),
            detail: "height must be positive".into(),
        });
    }
    let cusps = model.cusps();
    for &s in &cusps {
        let n = model.normalizer(s)?;
        let side = conj(&n, &model.generators()[s]);
        let (_, r2) = side
            .mirror_circle()
            .ok_or_else(|| Error::Malformed(format!("side {s} is not a semicircle at its cusp")))?;
        if h * h < r2 {
            return Err(Error::HoroballOverlap {
                height: h.to_string(),
                detail: format!("horoball at cusp {s} crosses the opposite side (radius^2 {r2})"),
            });
        }
    }
    for (i, &s) in cusps.iter().enumerate() {
        for &t in &cusps[i + 1..] {
            let ok = match (horoball(model, s, h)?, horoball(model, t, h)?) {
                (Horoball::Above(y), Horoball::Disk(_, d)) | (Horoball::Disk(_, d), Horoball::Above(y)) => d <= y,
                (Horoball::Disk(u, d1), Horoball::Disk(v, d2)) => {
                    let du = &u - &v;
                    &du * &du >= d1 * d2
                }
                (Horoball::Above(_), Horoball::Above(_)) => false,
            };
            if !ok {
                return Err(Error::HoroballOverlap {
                    height: h.to_string(),
                    detail: format!("horoballs at cusps {s} and {t} intersect"),
                });
            }
        }
    }
    Ok(())
}

/// Cusp data at the ideal vertex opposite `s`, after the disjointness check.
pub fn cusp_data(model: &TriangleModel, s: usize, h: &BigRational) -> Result<CuspData> {
    check_horoballs(model, h)?;
    cusp_data_unchecked(model, s, h)
}

/// Cusp data without the horoball check.
pub fn cusp_data_unchecked(model: &TriangleModel, s: usize, h: &BigRational) -> Result<CuspData> {
    let vertex = match model.vertex_opposite(s) {
        Vertex::Ideal(v) => v.clone(),
        Vertex::Finite { .. } => return Err(Error::NoIdealVertex(s)),
    };
    let n = model.normalizer(s)?;
    let others: Vec<usize> = (0..3).filter(|&t| t != s).collect();
    let mirrors: Vec<BigRational> = others
        .iter()
        .map(|&t| {
            conj(&n, &model.generators()[t])
                .vertical_mirror()
                .ok_or_else(|| Error::Malformed(format!("generator {t} does not fix the cusp")))
        })
        .collect::<Result<_>>()?;
    let (gen_lo, gen_hi, lo, hi) = if mirrors[0] <= mirrors[1] {
        (others[0], others[1], mirrors[0].clone(), mirrors[1].clone())
    } else {
        (others[1], others[0], mirrors[1].clone(), mirrors[0].clone())
    };
    Ok(CuspData {
        s,
        vertex,
        normalizer: n,
        gen_lo,
        gen_hi,
        lo,
        hi,
        h: h.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CuspElementKind {
    /// `t^k`.
    Translation,
    /// `t^k sigma_lo`.
    Reflection,
}

/// An element of `V_s` with its displacement of `tau_s`.
#[derive(Clone, Debug)]
pub struct CuspElement {
    pub kind: CuspElementKind,
    pub k: i64,
    pub word: Vec<usize>,
    pub matrix: Isometry,
    /// `v(tau_s)` in normalized coordinates.
    pub image: (BigRational, BigRational),
    /// `dist(tau_s, v(tau_s))` on the horocycle.
    pub displacement: BigRational,
}

impl CuspElement {
    pub fn name(&self) -> String {
        match self.kind {
            CuspElementKind::Translation => format!("t^{}", self.k),
            CuspElementKind::Reflection => format!("t^{} r", self.k),
        }
    }
}

/// Gap between two intervals (zero when they meet).
fn gap(a: &(BigRational, BigRational), b: &(BigRational, BigRational)) -> BigRational {
    let x = &b.0 - &a.1;
    let y = &a.0 - &b.1;
    let z = BigRational::zero();
    x.max(y).max(z)
}

/// Certified comparison of a rational with `2 pi`.
pub fn cmp_two_pi(x: &BigRational) -> Ordering {
    let p = RationalInterval::point(x.clone());
    let mut digits = 30;
    loop {
        let tp = two_pi_enclosure(digits);
        if p.certainly_le(&tp) {
            return Ordering::Less;
        }
        if p.certainly_gt(&tp) {
            return Ordering::Greater;
        }
        digits *= 2;
    }
}

/// `v in V_s` with shift `k`: `x -> x + k w` or `x -> 2 lo - x + k w`.
pub fn cusp_element(model: &TriangleModel, cusp: &CuspData, kind: CuspElementKind, k: i64) -> CuspElement {
    let w = cusp.width();
    let shift = &w * qi(k);
    let mut word = Vec::new();
    let step = if k >= 0 {
        cusp.translation_word()
    } else {
        vec![cusp.gen_lo, cusp.gen_hi]
    };
    for _ in 0..k.unsigned_abs() {
        word.extend_from_slice(&step);
    }
    let image = match kind {
        CuspElementKind::Translation => (&cusp.lo + &shift, &cusp.hi + &shift),
        CuspElementKind::Reflection => {
            word.push(cusp.gen_lo);
            (&cusp.lo * qi(2) - &cusp.hi + &shift, &cusp.lo + &shift)
        }
    };
    let displacement = gap(&cusp.tau(), &image) / &cusp.h;
    CuspElement {
        kind,
        k,
        matrix: model.evaluate(&word),
        word,
        image,
        displacement,
    }
}

/// `A_s = {v in V_s \ {1} : dist(tau_s, v tau_s) <= 2 pi}`.
pub fn compute_as(model: &TriangleModel, s: usize, h: &BigRational) -> Result<Vec<CuspElement>> {
    let cusp = cusp_data(model, s, h)?;
    Ok(a_set(model, &cusp))
}

/// `A_s` for given cusp data (no horoball check).
pub fn a_set(model: &TriangleModel, cusp: &CuspData) -> Vec<CuspElement> {
    let mut out = Vec::new();
    for kind in [CuspElementKind::Translation, CuspElementKind::Reflection] {
        for sign in [1i64, -1] {
            let start = if kind == CuspElementKind::Reflection && sign == -1 { 1 } else { 0 };
            for m in start.. {
                let k = sign * m;
                if kind == CuspElementKind::Translation && k == 0 {
                    continue;
                }
                let e = cusp_element(model, cusp, kind, k);
                if cmp_two_pi(&e.displacement) == Ordering::Greater {
                    break;
                }
                out.push(e);
            }
        }
    }
    out.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.k.cmp(&b.k)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filling::hyperbolic::q;

    fn model(p: &str, qq: &str) -> TriangleModel {
        TriangleModel::build_str(p, qq).unwrap()
    }

    #[test]
    fn modular_cusp() {
        let m = model("2", "3");
        let c = cusp_data(&m, 0, &qi(1)).unwrap();
        assert_eq!(c.tau(), (qi(0), q(1, 2)));
        assert_eq!(c.width(), qi(1));
        let t = m.evaluate(&c.translation_word());
        assert!(t.projectively_eq(&Isometry::from_ints(1, 1, 0, 1)));
    }

    #[test]
    fn modular_a_set() {
        let m = model("2", "3");
        let a = compute_as(&m, 0, &qi(1)).unwrap();
        let ks: Vec<i64> = a
            .iter()
            .filter(|e| e.kind == CuspElementKind::Translation)
            .map(|e| e.k)
            .collect();
        assert_eq!(ks, vec![-6, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5, 6]);
        for e in &a {
            if e.kind == CuspElementKind::Translation {
                assert_eq!(e.displacement, qi(e.k.abs()) - q(1, 2));
            }
            assert!(!e.matrix.is_projective_identity());
        }
    }

    #[test]
    fn small_horoballs_overlap() {
        let m = model("2", "3");
        assert!(matches!(cusp_data(&m, 0, &q(1, 2)), Err(Error::HoroballOverlap { .. })));
        assert!(cusp_data(&m, 1, &qi(1)).is_err());
        let m = model("inf", "inf");
        assert!(check_horoballs(&m, &qi(1)).is_ok());
        assert!(check_horoballs(&m, &q(9, 10)).is_err());
    }

    #[test]
    fn finite_cusp_normalization() {
        let m = model("inf", "inf");
        for s in 0..3 {
            let c = cusp_data(&m, s, &qi(1)).unwrap();
            assert!(c.width().is_positive());
            let t = m.evaluate(&c.translation_word());
            assert_eq!(t.normalized_trace_sq(), qi(4));
            assert_eq!(t.act(&c.vertex), c.vertex);
        }
    }
}
