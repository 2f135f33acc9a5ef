//! Reflection length by breadth-first search over truncated reflection sets.
//!
//! `l_R^(D)(w)` is the least number of reflections of root depth at most `D`
//! whose product is `w`, with every partial product kept inside the standard
//! ball. It is an upper bound for `||w||_R` and never increases with `D`.
//! Lower bounds come from the fixed-space codimension, finite congruence
//! images, registered quasimorphism certificates, and the length parity.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::ball::{StandardBall, DEFAULT_NODE_CAP};
use crate::classify::{classify_group, irreducible_components, ComponentKind};
use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::par::par_map;
use crate::quasi::{FreeCoxeterWord, QuasimorphismCert};
use crate::quotient::QuotientBounds;
use crate::roots::{enumerate_reflections, Reflection};
use crate::tits::{fixed_space_codim, CoxeterGroup, GroupElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Exact,
    Bracketed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exact => "Exact",
            Status::Bracketed => "Bracketed",
        })
    }
}

/// The individual lower bounds before the parity adjustment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LowerBounds {
    pub codim: usize,
    pub quotient: usize,
    pub certificate: usize,
}

impl LowerBounds {
    /// Least `n >= max(..)` with `n = parity (mod 2)`.
    pub fn combined(&self, parity: usize) -> usize {
        let m = self.codim.max(self.quotient).max(self.certificate);
        if m % 2 == parity % 2 {
            m
        } else {
            m + 1
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReflLenResult {
    pub element: GroupElement,
    pub standard_length: usize,
    /// `None` when no factorization was found inside the ball.
    pub upper: Option<usize>,
    pub lower: usize,
    pub status: Status,
    /// Words of the witness reflections; their product is the element.
    pub witness: Vec<Vec<usize>>,
    pub depth_used: usize,
    pub bounds: LowerBounds,
}

impl ReflLenResult {
    pub fn upper_string(&self) -> String {
        self.upper.map_or_else(|| "inf".to_string(), |u| u.to_string())
    }

    pub fn exact(&self) -> Option<usize> {
        match self.status {
            Status::Exact => self.upper,
            Status::Bracketed => None,
        }
    }
}

/// Options shared by the ball and element computations.
#[derive(Clone, Debug)]
pub struct ReflenOptions {
    /// Extra standard-length room for intermediate products.
    pub slack: usize,
    pub node_cap: usize,
    pub use_quotients: bool,
    /// Quasimorphism certificate on a free Coxeter group.
    pub certificate: Option<QuasimorphismCert>,
}

impl Default for ReflenOptions {
    fn default() -> Self {
        Self {
            slack: 0,
            node_cap: DEFAULT_NODE_CAP,
            use_quotients: true,
            certificate: None,
        }
    }
}

/// Stopping rule for increasing `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Protocol {
    pub radius: usize,
    pub d_start: usize,
    pub d_cap: usize,
    /// Stop once the upper bound is unchanged for this many increments.
    pub stable_steps: usize,
}

impl Default for Protocol {
    fn default() -> Self {
        Self {
            radius: 8,
            d_start: 0,
            d_cap: 6,
            stable_steps: 2,
        }
    }
}

/// Breadth-first distances from the identity inside a ball.
#[derive(Clone, Debug)]
pub struct Distances {
    pub depth: usize,
    dist: Vec<Option<u32>>,
    parent: Vec<Option<(usize, usize)>>,
}

impl Distances {
    pub fn get(&self, node: usize) -> Option<u32> {
        self.dist[node]
    }
}

/// A group with its standard ball, reflections, and lower-bound data.
pub struct ReflenEngine {
    group: CoxeterGroup,
    ball: StandardBall,
    reflections: Vec<Reflection>,
    quotients: QuotientBounds,
    options: ReflenOptions,
}

impl ReflenEngine {
    pub fn new(cm: &CoxeterMatrix, radius: usize, max_depth: usize, options: ReflenOptions) -> Self {
        let group = CoxeterGroup::new(cm);
        Self::with_group(group, radius, max_depth, options)
    }

    pub fn with_group(group: CoxeterGroup, radius: usize, max_depth: usize, options: ReflenOptions) -> Self {
        let ball = StandardBall::enumerate(&group, radius + options.slack, options.node_cap);
        let reflections = enumerate_reflections(&group, max_depth);
        let quotients = if options.use_quotients {
            QuotientBounds::standard(&group)
        } else {
            QuotientBounds::none()
        };
        Self {
            group,
            ball,
            reflections,
            quotients,
            options,
        }
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn ball(&self) -> &StandardBall {
        &self.ball
    }

    pub fn quotients(&self) -> &QuotientBounds {
        &self.quotients
    }

    pub fn reflections(&self, depth: usize) -> &[Reflection] {
        let end = self.reflections.partition_point(|r| r.depth <= depth);
        &self.reflections[..end]
    }

    /// Breadth-first search with reflections of depth at most `depth`; stops
    /// early once `target` is reached.
    pub fn distances(&self, depth: usize, target: Option<usize>) -> Distances {
        let refl = self.reflections(depth);
        let n = self.ball.len();
        let mut dist = vec![None; n];
        let mut parent = vec![None; n];
        dist[0] = Some(0);
        let mut frontier = vec![0usize];
        let mut d = 0;
        while !frontier.is_empty() {
            if target.is_some_and(|t| dist[t].is_some()) {
                break;
            }
            d += 1;
            let hits: Vec<Vec<(usize, usize)>> = par_map(&frontier, |&i| {
                let g = self.ball.element(i).matrix();
                refl.iter()
                    .enumerate()
                    .filter_map(|(ri, r)| {
                        let h = GroupElement::from_matrix(r.right_mul(g), None);
                        self.ball.position(h.key()).map(|j| (j, ri))
                    })
                    .collect()
            });
            let mut next = Vec::new();
            for (&i, row) in frontier.iter().zip(hits) {
                for (j, ri) in row {
                    if dist[j].is_none() {
                        dist[j] = Some(d);
                        parent[j] = Some((i, ri));
                        next.push(j);
                    }
                }
            }
            next.sort_unstable();
            frontier = next;
        }
        Distances { depth, dist, parent }
    }

    fn witness(&self, dists: &Distances, node: usize) -> Vec<Vec<usize>> {
        let refl = self.reflections(dists.depth);
        let mut out = Vec::new();
        let mut cur = node;
        while let Some((prev, ri)) = dists.parent[cur] {
            out.push(refl[ri].word.clone());
            cur = prev;
        }
        out.reverse();
        out
    }

    fn certificate_bound(&self, g: &GroupElement) -> Result<usize> {
        let Some(cert) = &self.options.certificate else {
            return Ok(0);
        };
        let word = g.word().ok_or_else(|| Error::Malformed("element without word".into()))?;
        let fw = FreeCoxeterWord::parse(
            &word.iter().map(|&l| (b'a' + l as u8) as char).collect::<String>(),
            cert.alphabet,
        )?;
        let phi = cert.phi(&fw)?.abs();
        Ok((phi * cert.constant).ceil().to_integer().max(0) as usize)
    }

    pub fn lower_bounds(&self, g: &GroupElement) -> Result<LowerBounds> {
        Ok(LowerBounds {
            codim: fixed_space_codim(g),
            quotient: self.quotients.lower_bound(g),
            certificate: self.certificate_bound(g)?,
        })
    }

    /// Result for ball node `node` under the given distances.
    pub fn result(&self, dists: &Distances, node: usize, extra_lower: usize) -> Result<ReflLenResult> {
        let element = self.ball.element(node).clone();
        let standard_length = self.ball.length(node);
        let mut bounds = self.lower_bounds(&element)?;
        bounds.certificate = bounds.certificate.max(extra_lower);
        let lower = bounds.combined(standard_length);
        let upper = dists.get(node).map(|u| u as usize);
        if let Some(u) = upper {
            if u % 2 != standard_length % 2 {
                return Err(Error::Malformed(format!(
                    "parity violated: upper {u}, standard length {standard_length}"
                )));
            }
            if lower > u {
                return Err(Error::BoundsInconsistent {
                    lower: lower as u32,
                    upper: u as u32,
                });
            }
        }
        let status = if upper == Some(lower) {
            Status::Exact
        } else {
            Status::Bracketed
        };
        Ok(ReflLenResult {
            witness: if upper.is_some() { self.witness(dists, node) } else { Vec::new() },
            element,
            standard_length,
            upper,
            lower,
            status,
            depth_used: dists.depth,
            bounds,
        })
    }

    /// Runs the protocol for a single ball node.
    pub fn run_protocol(&self, node: usize, protocol: &Protocol, extra_lower: usize) -> Result<ReflLenResult> {
        let mut prev: Option<ReflLenResult> = None;
        let mut unchanged = 0;
        for d in protocol.d_start..=protocol.d_cap {
            let dists = self.distances(d, Some(node));
            let res = self.result(&dists, node, extra_lower)?;
            if let Some(p) = &prev {
                match (p.upper, res.upper) {
                    (Some(a), None) => {
                        return Err(Error::MonotonicityViolated { before: a as u32, after: u32::MAX })
                    }
                    (Some(a), Some(b)) if b > a => {
                        return Err(Error::MonotonicityViolated { before: a as u32, after: b as u32 })
                    }
                    _ => {}
                }
                if p.upper == res.upper && res.upper.is_some() {
                    unchanged += 1;
                } else {
                    unchanged = 0;
                }
            }
            let done = res.status == Status::Exact || unchanged >= protocol.stable_steps;
            prev = Some(res);
            if done {
                break;
            }
        }
        Ok(prev.expect("protocol runs at least once"))
    }
}

/// Ball report: one result per element of standard length at most `radius`.
#[derive(Clone, Debug)]
pub struct ReflenBall {
    pub radius: usize,
    pub depth: usize,
    pub partial: bool,
    pub results: Vec<ReflLenResult>,
}

impl ReflenBall {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,len_S,upper,lower,status\n");
        for r in &self.results {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.element.key().to_hex(),
                r.standard_length,
                r.upper_string(),
                r.lower,
                r.status
            ));
        }
        out
    }

    /// Number of elements with each upper value (`None` for unreached).
    pub fn histogram(&self) -> Vec<(Option<usize>, usize)> {
        let mut map = std::collections::BTreeMap::new();
        for r in &self.results {
            *map.entry(r.upper).or_insert(0) += 1;
        }
        map.into_iter().collect()
    }
}

/// `l_R^(D)` with bounds on every element of standard length at most `radius`.
pub fn reflen_ball(cm: &CoxeterMatrix, radius: usize, depth: usize, options: ReflenOptions) -> Result<ReflenBall> {
    let engine = ReflenEngine::new(cm, radius, depth, options);
    engine_ball(&engine, radius, depth)
}

pub fn engine_ball(engine: &ReflenEngine, radius: usize, depth: usize) -> Result<ReflenBall> {
    let dists = engine.distances(depth, None);
    let nodes: Vec<usize> = (0..engine.ball.len())
        .filter(|&i| engine.ball.length(i) <= radius)
        .collect();
    let results = par_map(&nodes, |&i| engine.result(&dists, i, 0))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ReflenBall {
        radius,
        depth,
        partial: engine.ball.is_partial(),
        results,
    })
}

/// Protocol run for the element spelled by `word`.
pub fn reflen_element(
    cm: &CoxeterMatrix,
    word: &[usize],
    protocol: &Protocol,
    options: ReflenOptions,
) -> Result<ReflLenResult> {
    reflen_element_with(cm, word, protocol, options, 0)
}

fn reflen_element_with(
    cm: &CoxeterMatrix,
    word: &[usize],
    protocol: &Protocol,
    options: ReflenOptions,
    extra_lower: usize,
) -> Result<ReflLenResult> {
    let radius = protocol.radius.max(word.len());
    let engine = ReflenEngine::new(cm, radius, protocol.d_cap, options);
    let g = engine.group.evaluate(word)?;
    let node = engine
        .ball
        .position(g.key())
        .ok_or(Error::OutsideBall { radius })?;
    engine.run_protocol(node, protocol, extra_lower)
}

/// Fixed-space codimension, which equals reflection length in finite groups.
pub fn carter_length_finite(cm: &CoxeterMatrix, word: &[usize]) -> Result<usize> {
    if classify_group(cm).kind != ComponentKind::Spherical {
        return Err(Error::NotSpherical);
    }
    let g = CoxeterGroup::new(cm).evaluate(word)?;
    Ok(fixed_space_codim(&g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineBoundReport {
    pub n: usize,
    pub two_n: usize,
    pub max_exact: usize,
    pub attained: bool,
    pub exact_count: usize,
    pub total: usize,
    pub partial: bool,
}

/// Largest Exact reflection length on the ball, checked against `2n`.
pub fn affine_bound_experiment(cm: &CoxeterMatrix, radius: usize, depth: usize) -> Result<AffineBoundReport> {
    let verdict = classify_group(cm);
    if verdict
        .components
        .iter()
        .any(|(_, k)| *k != ComponentKind::AffineEuclidean)
    {
        return Err(Error::NotAffineEuclidean);
    }
    let n = cm.rank() - irreducible_components(cm).len();
    let ball = reflen_ball(cm, radius, depth, ReflenOptions::default())?;
    let exact: Vec<usize> = ball.results.iter().filter_map(|r| r.exact()).collect();
    let max_exact = *exact.iter().max().ok_or(Error::NoExactValues)?;
    if max_exact > 2 * n {
        return Err(Error::AffineBoundViolated {
            value: max_exact as u32,
            bound: 2 * n as u32,
        });
    }
    Ok(AffineBoundReport {
        n,
        two_n: 2 * n,
        max_exact,
        attained: max_exact == 2 * n,
        exact_count: exact.len(),
        total: ball.results.len(),
        partial: ball.partial,
    })
}

#[derive(Clone, Debug)]
pub struct GrowthRecord {
    pub base_word: Vec<usize>,
    pub metric_name: String,
    pub powers: Vec<(usize, ReflLenResult)>,
    /// Certified lower bounds from a quasimorphism, if one was supplied.
    pub certified: Vec<usize>,
}

impl GrowthRecord {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,upper,lower,status\n");
        for (k, r) in &self.powers {
            out.push_str(&format!("{},{},{},{}\n", k, r.upper_string(), r.lower, r.status));
        }
        out
    }
}

/// Results for `g, g^2, ..., g^K`.
pub fn growth_profile(
    cm: &CoxeterMatrix,
    base: &[usize],
    max_k: usize,
    protocol: &Protocol,
    certificate: Option<&QuasimorphismCert>,
) -> Result<GrowthRecord> {
    if max_k == 0 {
        return Err(Error::Malformed("K must be at least 1".into()));
    }
    let mut certified = Vec::new();
    if let Some(cert) = certificate {
        let g = FreeCoxeterWord::parse(
            &base.iter().map(|&l| (b'a' + l as u8) as char).collect::<String>(),
            cert.alphabet,
        )?;
        let (_, bounds) = crate::quasi::certify_lower_bound(cert, &g, max_k)?;
        certified = bounds.into_iter().map(|b| b.bound).collect();
    }
    let radius = protocol.radius.max(base.len() * max_k);
    let engine = ReflenEngine::new(cm, radius, protocol.d_cap, ReflenOptions::default());
    let mut powers = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let word: Vec<usize> = base.iter().copied().cycle().take(base.len() * k).collect();
        let g = engine.group.evaluate(&word)?;
        let node = engine
            .ball
            .position(g.key())
            .ok_or(Error::OutsideBall { radius })?;
        let extra = certified.get(k - 1).copied().unwrap_or(0);
        powers.push((k, engine.run_protocol(node, protocol, extra)?));
    }
    Ok(GrowthRecord {
        base_word: base.to_vec(),
        metric_name: "reflection".into(),
        powers,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(text: &str) -> CoxeterMatrix {
        CoxeterMatrix::parse(text).unwrap()
    }

    #[test]
    fn a2_values() {
        let b = reflen_ball(&cm("rank 2; m12=3"), 3, 1, ReflenOptions::default()).unwrap();
        let mut v: Vec<usize> = b.results.iter().map(|r| r.upper.unwrap()).collect();
        v.sort();
        assert_eq!(v, vec![0, 1, 1, 1, 2, 2]);
        assert!(b.results.iter().all(|r| r.status == Status::Exact));
    }

    #[test]
    fn infinite_dihedral_power() {
        let p = Protocol { radius: 6, d_start: 6, d_cap: 6, stable_steps: 2 };
        let r = reflen_element(&cm("rank 2; m12=inf"), &[0, 1, 0, 1, 0, 1], &p, ReflenOptions::default()).unwrap();
        assert_eq!(r.upper, Some(2));
        assert_eq!(r.status, Status::Exact);
    }

    #[test]
    fn witnesses_multiply_out() {
        let c = cm("rank 3; m12=3 m13=3 m23=3");
        let g = CoxeterGroup::new(&c);
        let b = reflen_ball(&c, 5, 4, ReflenOptions::default()).unwrap();
        for r in &b.results {
            let u = r.upper.unwrap();
            assert_eq!(r.witness.len(), u);
            let word: Vec<usize> = r.witness.concat();
            assert_eq!(g.evaluate(&word).unwrap(), r.element);
        }
    }
}
