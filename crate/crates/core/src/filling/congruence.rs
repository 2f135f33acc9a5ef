//! Congruence quotients `W -> PGL(2, F_p)` whose kernel avoids every `A_s`,
//! and the resulting lower bound on closed horocycle geodesics.
//!
//! Finite-order elements of `W` are conjugate into finite standard parabolics,
//! so injectivity on those makes the kernel torsion-free.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::coxeter::Exponent;
use crate::error::{Error, Result};
use crate::filling::cusp::{a_set, cusp_data, CuspData, CuspElement, CuspElementKind};
use crate::filling::hyperbolic::{generated_order, ModIsometry};
use crate::filling::model::TriangleModel;
use crate::interval::{fmt_sig15, two_pi_enclosure, RationalInterval};

/// `A_s` together with the cusp it belongs to.
#[derive(Clone, Debug)]
pub struct CuspAvoidance {
    pub cusp: CuspData,
    pub elements: Vec<CuspElement>,
    /// Projective images mod `p`, in the order of `elements`.
    pub images: Vec<[u64; 4]>,
}

/// A finite standard parabolic and the order of its image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParabolicCheck {
    pub generators: Vec<usize>,
    pub order: usize,
    pub image_order: usize,
}

#[derive(Clone, Debug)]
pub struct AvoidanceCertificate {
    pub prime: u64,
    pub cusps: Vec<CuspAvoidance>,
    pub parabolics: Vec<ParabolicCheck>,
    /// Primes tried before `prime`, with the reason each failed.
    pub rejected: Vec<(u64, String)>,
}

/// Finite standard parabolics: single generators and finite dihedral pairs.
fn finite_parabolics(model: &TriangleModel) -> Vec<(Vec<usize>, usize)> {
    let mut out: Vec<(Vec<usize>, usize)> = (0..3).map(|s| (vec![s], 2)).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            if let Exponent::Finite(m) = model.coxeter().get(i, j) {
                out.push((vec![i, j], 2 * m as usize));
            }
        }
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Why reduction mod `p` fails, or the images when it works.
fn try_prime(
    model: &TriangleModel,
    cusps: &[(CuspData, Vec<CuspElement>)],
    p: u64,
) -> std::result::Result<AvoidanceCertificate, String> {
    let gens: Vec<ModIsometry> = model
        .generators()
        .iter()
        .map(|g| g.reduce_mod(p))
        .collect::<Option<_>>()
        .ok_or_else(|| "a generator entry does not reduce".to_string())?;
    let mut parabolics = Vec::new();
    for (subset, order) in finite_parabolics(model) {
        let sub: Vec<ModIsometry> = subset.iter().map(|&s| gens[s]).collect();
        let image_order = generated_order(&sub, p);
        if image_order != order {
            return Err(format!(
                "parabolic {subset:?} of order {order} has image of order {image_order}"
            ));
        }
        parabolics.push(ParabolicCheck {
            generators: subset,
            order,
            image_order,
        });
    }
    let mut out = Vec::new();
    for (cusp, elements) in cusps {
        let mut images = Vec::with_capacity(elements.len());
        for e in elements {
            let m = e
                .matrix
                .reduce_mod(p)
                .ok_or_else(|| format!("{} does not reduce", e.name()))?;
            if m.is_identity() {
                return Err(format!("{} at cusp {} lies in the kernel", e.name(), cusp.s));
            }
            images.push(m.entries());
        }
        out.push(CuspAvoidance {
            cusp: cusp.clone(),
            elements: elements.clone(),
            images,
        });
    }
    Ok(AvoidanceCertificate {
        prime: p,
        cusps: out,
        parabolics,
        rejected: Vec::new(),
    })
}

fn cusp_sets(model: &TriangleModel, h: &BigRational) -> Result<Vec<(CuspData, Vec<CuspElement>)>> {
    model
        .cusps()
        .into_iter()
        .map(|s| {
            let c = cusp_data(model, s, h)?;
            let a = a_set(model, &c);
            Ok((c, a))
        })
        .collect()
}

/// Checks one given odd prime.
pub fn certify_prime(model: &TriangleModel, h: &BigRational, p: u64) -> Result<AvoidanceCertificate> {
    if p < 3 || !is_prime(p) {
        return Err(Error::CertificateInvalid(format!("{p} is not an odd prime")));
    }
    try_prime(model, &cusp_sets(model, h)?, p).map_err(Error::CertificateInvalid)
}

/// Smallest prime up to `prime_cap` whose reduction is injective on finite
/// parabolics and nontrivial on every `A_s`.
pub fn congruence_search(model: &TriangleModel, h: &BigRational, prime_cap: u64) -> Result<AvoidanceCertificate> {
    let cusps = cusp_sets(model, h)?;
    let excluded: Vec<u64> = finite_parabolics(model).iter().map(|(_, o)| *o as u64).collect();
    let mut rejected = Vec::new();
    for p in (2..=prime_cap).filter(|&p| is_prime(p)) {
        if p == 2 {
            rejected.push((2, "even characteristic: order-2 parabolics cannot inject".to_string()));
            continue;
        }
        if excluded.iter().any(|o| o % p == 0) {
            rejected.push((p, "divides the order of a finite parabolic".to_string()));
            continue;
        }
        match try_prime(model, &cusps, p) {
            Ok(mut cert) => {
                cert.rejected = rejected;
                return Ok(cert);
            }
            Err(reason) => rejected.push((p, reason)),
        }
    }
    let diagnostics = rejected
        .iter()
        .map(|(p, r)| format!("{p}: {r}"))
        .collect::<Vec<_>>()
        .join("; ");
    Err(Error::SearchExhausted {
        cap: prime_cap,
        diagnostics,
    })
}

/// Shortest kernel displacement at one cusp, certified against `2 pi`.
#[derive(Clone, Debug)]
pub struct TwoPiMargin {
    pub s: usize,
    /// Order of the translation `t` mod `p`.
    pub translation_order: u64,
    /// `dist(tau_s, t^n tau_s)`, exact.
    pub min_displacement: BigRational,
    /// Enclosure of `min_displacement - 2 pi`.
    pub margin: RationalInterval,
}

impl TwoPiMargin {
    pub fn margin_string(&self) -> String {
        format!("[{}, {}]", fmt_sig15(self.margin.lo_f64()), fmt_sig15(self.margin.hi_f64()))
    }

    pub fn displacement_f64(&self) -> f64 {
        self.min_displacement.to_f64().unwrap_or(f64::NAN)
    }
}

/// The nontrivial kernel elements of `V_s` are the powers `t^(jn)`, `n` the
/// order of `t` mod `p`; reflections never lie in the torsion-free kernel.
pub fn two_pi_certificate(model: &TriangleModel, cert: &AvoidanceCertificate, s: usize) -> Result<TwoPiMargin> {
    let cusp = cert
        .cusps
        .iter()
        .find(|c| c.cusp.s == s)
        .ok_or(Error::NoIdealVertex(s))?;
    let t = model.evaluate(&cusp.cusp.translation_word());
    let n = t
        .reduce_mod(cert.prime)
        .ok_or_else(|| Error::CertificateInvalid("translation does not reduce".into()))?
        .order();
    let e = crate::filling::cusp::cusp_element(model, &cusp.cusp, CuspElementKind::Translation, n as i64);
    if !e.matrix.reduce_mod(cert.prime).is_some_and(|m| m.is_identity()) {
        return Err(Error::CertificateInvalid("t^n is not in the kernel".into()));
    }
    let margin = RationalInterval::point(e.displacement.clone()).sub(&two_pi_enclosure(30));
    if !margin.certainly_positive() {
        return Err(Error::CertificateInvalid(format!(
            "kernel displacement {} does not exceed 2 pi",
            e.displacement
        )));
    }
    Ok(TwoPiMargin {
        s,
        translation_order: n,
        min_displacement: e.displacement,
        margin,
    })
}
