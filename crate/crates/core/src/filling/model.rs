//! Rank-3 hyperbolic triangle reflection groups with rational matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coxeter::{CoxeterMatrix, Exponent};
use crate::error::{Error, Result};
use crate::filling::hyperbolic::{qi, Ideal, Isometry};

/// A vertex of the triangle: the fixed point of a pair of mirrors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    /// Interior vertex with angle `pi/m`.
    Finite { m: u32 },
    Ideal(Ideal),
}

#[derive(Clone, Debug)]
pub struct TriangleModel {
    p: Exponent,
    q: Exponent,
    coxeter: CoxeterMatrix,
    generators: [Isometry; 3],
    /// `vertices[s]` is the vertex opposite to generator `s`.
    vertices: [Vertex; 3],
}

/// Relation check for one pair of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub pair: (usize, usize),
    pub exponent: String,
    /// `tr^2 / |det|` of the product.
    pub trace_sq: String,
    pub ok: bool,
}

impl TriangleModel {
    /// `m12 = p`, `m13 = q`, `m23 = inf`; `p, q` in `{(2,3), (2,inf), (inf,inf)}`.
    pub fn build(p: Exponent, q_exp: Exponent) -> Result<Self> {
        use Exponent::{Finite, Infinite};
        let ideal = |x: i64| Vertex::Ideal(Ideal::Finite(qi(x)));
        let (generators, vertices) = match (p, q_exp) {
            (Finite(2), Finite(3)) => (
                [
                    Isometry::from_ints(0, 1, 1, 0),
                    Isometry::from_ints(-1, 0, 0, 1),
                    Isometry::from_ints(-1, 1, 0, 1),
                ],
                [Vertex::Ideal(Ideal::Infinity), Vertex::Finite { m: 3 }, Vertex::Finite { m: 2 }],
            ),
            (Finite(2), Infinite) => (
                [
                    Isometry::from_ints(0, 1, 1, 0),
                    Isometry::from_ints(-1, 0, 0, 1),
                    Isometry::from_ints(-1, 2, 0, 1),
                ],
                [Vertex::Ideal(Ideal::Infinity), ideal(1), Vertex::Finite { m: 2 }],
            ),
            (Infinite, Infinite) => (
                [
                    Isometry::from_ints(1, 0, 2, -1),
                    Isometry::from_ints(-1, 0, 0, 1),
                    Isometry::from_ints(-1, 2, 0, 1),
                ],
                [Vertex::Ideal(Ideal::Infinity), ideal(1), ideal(0)],
            ),
            _ => {
                return Err(Error::UnsupportedParameters {
                    p: p.to_string(),
                    q: q_exp.to_string(),
                })
            }
        };
        let coxeter = CoxeterMatrix::from_pairs(3, &[(0, 1, p), (0, 2, q_exp), (1, 2, Infinite)])?;
        Ok(Self {
            p,
            q: q_exp,
            coxeter,
            generators,
            vertices,
        })
    }

    /// Parses the parameters as exponents (`inf` allowed).
    pub fn build_str(p: &str, q_exp: &str) -> Result<Self> {
        let parse = |s: &str| {
            s.parse::<Exponent>()
                .map_err(|_| Error::UnsupportedParameters { p: p.into(), q: q_exp.into() })
        };
        Self::build(parse(p)?, parse(q_exp)?)
    }

    pub fn params(&self) -> (Exponent, Exponent) {
        (self.p, self.q)
    }

    pub fn coxeter(&self) -> &CoxeterMatrix {
        &self.coxeter
    }

    pub fn generators(&self) -> &[Isometry; 3] {
        &self.generators
    }

    pub fn vertex_opposite(&self, s: usize) -> &Vertex {
        &self.vertices[s]
    }

    /// Generators whose opposite vertex is ideal.
    pub fn cusps(&self) -> Vec<usize> {
        (0..3)
            .filter(|&s| matches!(self.vertices[s], Vertex::Ideal(_)))
            .collect()
    }

    /// Product of generators along `word` (left to right).
    pub fn evaluate(&self, word: &[usize]) -> Isometry {
        word.iter()
            .fold(Isometry::identity(), |acc, &s| acc.mul(&self.generators[s]))
    }

    /// Involution and order checks: `tr^2/|det|` is `0, 1, 2, 4` for orders
    /// `2, 3, 4, inf` (parabolic).
    pub fn relation_checks(&self) -> Vec<RelationCheck> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                let m = self.coxeter.get(i, j);
                let t2 = self.generators[i].mul(&self.generators[j]).normalized_trace_sq();
                let want = match m {
                    Exponent::Infinite => Some(qi(4)),
                    Exponent::Finite(2) => Some(qi(0)),
                    Exponent::Finite(3) => Some(qi(1)),
                    Exponent::Finite(4) => Some(qi(2)),
                    Exponent::Finite(6) => Some(qi(3)),
                    Exponent::Finite(_) => None,
                };
                out.push(RelationCheck {
                    pair: (i, j),
                    exponent: m.to_string(),
                    trace_sq: t2.to_string(),
                    ok: want.as_ref() == Some(&t2),
                });
            }
        }
        out
    }

    /// Every generator is an orientation-reversing involution fixing its
    /// mirror, and the mirrors meet at the listed vertices.
    pub fn verify(&self) -> bool {
        let gens_ok = self.generators.iter().all(|g| {
            g.is_anti()
                && g.mul(g).is_projective_identity()
                && (g.vertical_mirror().is_some() || g.mirror_circle().is_some())
        });
        let vertices_ok = (0..3).all(|s| match &self.vertices[s] {
            Vertex::Ideal(v) => (0..3)
                .filter(|&t| t != s)
                .all(|t| self.generators[t].act(v) == *v),
            Vertex::Finite { .. } => true,
        });
        gens_ok && vertices_ok && self.relation_checks().iter().all(|c| c.ok)
    }

    /// Isometry moving `inf` to the ideal vertex opposite `s`.
    pub fn normalizer(&self, s: usize) -> Result<Isometry> {
        match &self.vertices[s] {
            Vertex::Ideal(Ideal::Infinity) => Ok(Isometry::identity()),
            Vertex::Ideal(Ideal::Finite(v)) => Ok(Isometry::new(
                v.clone(),
                -BigRational::one(),
                BigRational::one(),
                BigRational::zero(),
            )),
            Vertex::Finite { .. } => Err(Error::NoIdealVertex(s)),
        }
    }
}
