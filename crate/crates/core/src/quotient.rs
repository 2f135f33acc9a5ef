//! Finite congruence images of the Tits representation and the conjugation-
//! invariant length they carry.
//!
//! Reduction `Z[t] -> F_p` at a root of the minimal polynomial is a ring map,
//! so it induces a surjection from `W` onto a finite matrix group `Q`. The
//! images of the reflections are exactly the conjugates of the generator
//! images in `Q`, and the word length over that set is a lower bound for
//! reflection length in `W`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::field::{mulmod, CosineField};
use crate::matrix::Matrix;
use crate::tits::{CoxeterGroup, GroupElement};

type ModMatrix = Vec<u32>;

/// Roots of the minimal polynomial of the field generator in `F_p`.
pub fn roots_mod(field: &CosineField, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let coeffs: Vec<u64> = field
        .minimal_polynomial()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    (0..p)
        .filter(|&x| {
            let mut acc = 0;
            for &c in coeffs.iter().rev() {
                acc = (mulmod(acc, x, p) + c) % p;
            }
            acc == 0
        })
        .collect()
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A finite image of `W` with the reflection-length table of the image.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    p: u64,
    root: u64,
    n: usize,
    order: usize,
    reflections: usize,
    dist: HashMap<ModMatrix, u32>,
}

impl FiniteQuotient {
    /// `None` when some generator entry does not reduce or the image exceeds `cap`.
    pub fn new(group: &CoxeterGroup, p: u64, root: u64, cap: usize) -> Option<Self> {
        let n = group.rank();
        let gens: Vec<ModMatrix> = group
            .generators()
            .iter()
            .map(|g| reduce_matrix(g.matrix(), p, root))
            .collect::<Option<_>>()?;
        let id: ModMatrix = (0..n * n).map(|i| u32::from(i % (n + 1) == 0)).collect();
        let mul = |a: &ModMatrix, b: &ModMatrix| mat_mul(a, b, n, p);

        let mut elements: HashSet<ModMatrix> = HashSet::new();
        elements.insert(id.clone());
        let mut frontier = vec![id.clone()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = mul(g, s);
                    if elements.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            if elements.len() > cap {
                return None;
            }
            frontier = next;
        }

        // Conjugation closure of the generator images; generators are involutions.
        let mut refl: HashSet<ModMatrix> = gens.iter().cloned().collect();
        let mut todo: Vec<ModMatrix> = refl.iter().cloned().collect();
        while let Some(x) = todo.pop() {
            for s in &gens {
                let y = mul(&mul(s, &x), s);
                if refl.insert(y.clone()) {
                    todo.push(y);
                }
            }
        }
        let mut refl: Vec<ModMatrix> = refl.into_iter().collect();
        refl.sort();

        let mut dist = HashMap::with_capacity(elements.len());
        dist.insert(id.clone(), 0u32);
        let mut frontier = vec![id];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for g in &frontier {
                for r in &refl {
                    let h = mul(g, r);
                    if !dist.contains_key(&h) {
                        dist.insert(h.clone(), d);
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        Some(Self {
            p,
            root,
            n,
            order: elements.len(),
            reflections: refl.len(),
            dist,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn reflection_count(&self) -> usize {
        self.reflections
    }

    /// Largest reflection length in the image.
    pub fn diameter(&self) -> u32 {
        self.dist.values().copied().max().unwrap_or(0)
    }

    /// Reflection length of the image of `g` (a lower bound for `g` in `W`).
    pub fn lower_bound(&self, g: &GroupElement) -> Option<u32> {
        let m = reduce_matrix(g.matrix(), self.p, self.root)?;
        debug_assert_eq!(m.len(), self.n * self.n);
        self.dist.get(&m).copied()
    }
}

fn reduce_matrix(m: &Matrix, p: u64, root: u64) -> Option<ModMatrix> {
    m.entries()
        .iter()
        .map(|s| s.reduce_mod(p, root).map(|v| v as u32))
        .collect()
}

fn mat_mul(a: &[u32], b: &[u32], n: usize, p: u64) -> ModMatrix {
    let mut out = vec![0u32; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k] as u64;
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let v = (out[i * n + j] as u64 + aik * b[k * n + j] as u64) % p;
                out[i * n + j] = v as u32;
            }
        }
    }
    out
}

/// A collection of finite images used as a combined lower bound.
#[derive(Clone, Debug, Default)]
pub struct QuotientBounds {
    quotients: Vec<FiniteQuotient>,
}

impl QuotientBounds {
    /// Tries primes below `prime_cap` in increasing order and keeps at most
    /// `max_quotients` images of order at most `order_cap`.
    pub fn search(group: &CoxeterGroup, prime_cap: u64, order_cap: usize, max_quotients: usize) -> Self {
        let mut quotients = Vec::new();
        for p in (2..prime_cap).filter(|&p| is_prime(p)) {
            if quotients.len() >= max_quotients {
                break;
            }
            if let Some(&root) = roots_mod(group.field(), p).first() {
                if let Some(q) = FiniteQuotient::new(group, p, root, order_cap) {
                    quotients.push(q);
                }
            }
        }
        Self { quotients }
    }

    /// Default search used by the engine.
    pub fn standard(group: &CoxeterGroup) -> Self {
        Self::search(group, 40, 20_000, 4)
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn quotients(&self) -> &[FiniteQuotient] {
        &self.quotients
    }

    pub fn lower_bound(&self, g: &GroupElement) -> usize {
        self.quotients
            .iter()
            .filter_map(|q| q.lower_bound(g))
            .max()
            .unwrap_or(0) as usize
    }
}
