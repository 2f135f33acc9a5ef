//! Warp profile `f` for the cone metric `f(r)^2 ds_T^2 + dr^2` on `[r_T, 0]`.
//!
//! `f` is the apex piece `(2 pi / L) sinh(r - r_T)` on `[r_T, r_a]`, the
//! boundary piece `e^r` on `[r_b, 0]`, and a bridge on `[r_a, r_b]` whose
//! second derivative is
//!
//! ```text
//! f'' = phi * g_apex'' + psi * e^r + (1 - phi - psi) * (a (1 - x)^k + b x^k),   x = (r - r_a) / (r_b - r_a)
//! ```
//!
//! with `phi`, `psi` flat smoothstep cutoffs of relative width `w`. The bridge
//! agrees with both pieces to infinite order at the junctions, `(a, b)` are
//! fixed by matching `f` and `f'` at `r_b`, and `f'' >= 0` holds iff
//! `min(a, b) >= 0`. Larger `k` pushes the free curvature toward the ends.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filling::cusp::cmp_two_pi;
use crate::interval::fmt_sig15;

pub const DEFAULT_GRID: usize = 512;
const PANELS: usize = 400;
const BLEND_PANELS: usize = 40;
const GL_ORDER: usize = 20;
/// Relative tolerance for the discrete second difference.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// `(r_a - r_T, -r_b, w, k)` tried in order.
pub fn bridge_schedule() -> Vec<(f64, f64, f64, i32)> {
    let mut out = Vec::new();
    for k in [1, 4, 16, 64] {
        for da in [0.1, 0.05, 0.01, 0.2, 0.005, 0.002, 0.001] {
            for db in [0.001, 0.003, 0.01, 0.0003, 0.0001] {
                for w in [0.005, 0.01, 0.02, 0.002] {
                    out.push((da, db, w, k));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WarpSample {
    pub r: f64,
    pub f: f64,
    pub fp: f64,
    pub fpp: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridChecks {
    pub positive: bool,
    pub increasing: bool,
    pub convex: bool,
    /// Most negative central second difference, relative to `max |f|`.
    pub min_second_difference: f64,
    /// Grid points on the analytic pieces.
    pub apex_matches: usize,
    pub boundary_matches: usize,
    pub endpoint_pieces_exact: bool,
}

impl GridChecks {
    pub fn all_pass(&self) -> bool {
        self.positive && self.increasing && self.convex && self.endpoint_pieces_exact
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WarpProfile {
    pub l: f64,
    pub r_t: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub blend_width: f64,
    pub power: i32,
    pub a: f64,
    pub b: f64,
    pub samples: Vec<WarpSample>,
    pub checks: GridChecks,
}

impl WarpProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,f,fp,fpp\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_sig15(s.r),
                fmt_sig15(s.f),
                fmt_sig15(s.fp),
                fmt_sig15(s.fpp)
            ));
        }
        out
    }

    /// Bridge convexity margin `min(a, b)`.
    pub fn convexity_margin(&self) -> f64 {
        self.a.min(self.b)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

fn gl() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// `e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)})`, flat at both ends.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let u = (-1.0 / x).exp();
        let v = (-1.0 / (1.0 - x)).exp();
        u / (u + v)
    }
}

#[derive(Clone, Copy, Debug)]
struct Bridge {
    l: f64,
    r_t: f64,
    r_a: f64,
    r_b: f64,
    w: f64,
    k: i32,
    a: f64,
    b: f64,
}

impl Bridge {
    fn apex(&self, r: f64) -> (f64, f64, f64) {
        let c = 2.0 * PI / self.l;
        let s = r - self.r_t;
        (c * s.sinh(), c * s.cosh(), c * s.sinh())
    }

    fn x(&self, r: f64) -> f64 {
        (r - self.r_a) / (self.r_b - self.r_a)
    }

    /// `(fixed, weight of a, weight of b)` parts of `f''`.
    fn fpp_parts(&self, r: f64) -> (f64, f64, f64) {
        let x = self.x(r);
        let phi = 1.0 - smoothstep(x / self.w);
        let psi = smoothstep((x - 1.0 + self.w) / self.w);
        let mid = 1.0 - phi - psi;
        (phi * self.apex(r).2 + psi * r.exp(), mid * (1.0 - x).powi(self.k), mid * x.powi(self.k))
    }

    fn fpp(&self, r: f64) -> f64 {
        let (c, m0, m1) = self.fpp_parts(r);
        c + self.a * m0 + self.b * m1
    }

    /// `(int_lo^hi g, int_lo^hi (hi - s) g)` for each part of `f''`, with
    /// the two blend zones and the middle integrated on separate panels.
    fn moments(&self, lo: f64, hi: f64) -> [[f64; 3]; 2] {
        let len = self.r_b - self.r_a;
        let zones = [
            (self.r_a, self.r_a + self.w * len, BLEND_PANELS),
            (self.r_a + self.w * len, self.r_b - self.w * len, PANELS),
            (self.r_b - self.w * len, self.r_b, BLEND_PANELS),
        ];
        let (nodes, weights) = gl();
        let mut out = [[0.0; 3]; 2];
        for (z0, z1, zone_panels) in zones {
            let (a, b) = (lo.max(z0), hi.min(z1));
            if a >= b {
                continue;
            }
            let panels = ((b - a) / (z1 - z0) * zone_panels as f64).ceil().max(1.0) as usize;
            let step = (b - a) / panels as f64;
            for p in 0..panels {
                let c = a + (p as f64 + 0.5) * step;
                for (z, wt) in nodes.iter().zip(weights) {
                    let s = c + 0.5 * step * z;
                    let wq = 0.5 * step * wt;
                    let (f0, f1, f2) = self.fpp_parts(s);
                    for (k, v) in [f0, f1, f2].into_iter().enumerate() {
                        out[0][k] += wq * v;
                        out[1][k] += wq * (hi - s) * v;
                    }
                }
            }
        }
        out
    }

    /// Solves for `(a, b)` so that `f, f'` match `e^r` at `r_b`.
    fn solve(mut self) -> Self {
        let (g0, g1, _) = self.apex(self.r_a);
        let len = self.r_b - self.r_a;
        let m = self.moments(self.r_a, self.r_b);
        let target = self.r_b.exp();
        // Rows: f'(r_b), f(r_b).
        let rhs = [target - g1 - m[0][0], target - g0 - g1 * len - m[1][0]];
        let det = m[0][1] * m[1][2] - m[0][2] * m[1][1];
        self.a = (rhs[0] * m[1][2] - m[0][2] * rhs[1]) / det;
        self.b = (m[0][1] * rhs[1] - rhs[0] * m[1][1]) / det;
        self
    }

    fn eval(&self, r: f64) -> (f64, f64, f64) {
        if r <= self.r_a {
            return self.apex(r);
        }
        if r >= self.r_b {
            let e = r.exp();
            return (e, e, e);
        }
        let (g0, g1, _) = self.apex(self.r_a);
        let m = self.moments(self.r_a, r);
        let int = |k: usize| m[k][0] + self.a * m[k][1] + self.b * m[k][2];
        (g0 + g1 * (r - self.r_a) + int(1), g1 + int(0), self.fpp(r))
    }
}

fn grid_points(r_t: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|i| r_t - r_t * i as f64 / n as f64).collect()
}

fn grid_checks(b: &Bridge, samples: &[WarpSample]) -> GridChecks {
    let max_f = samples.iter().map(|s| s.f.abs()).fold(0.0, f64::max);
    let positive = samples.iter().all(|s| s.f > 0.0);
    let increasing = samples.windows(2).all(|w| w[1].f - w[0].f > 0.0);
    let min_dd = samples
        .windows(3)
        .map(|w| {
            let h = w[1].r - w[0].r;
            (w[2].f - 2.0 * w[1].f + w[0].f) / (h * h)
        })
        .fold(f64::INFINITY, f64::min);
    let convex = min_dd >= -CONVEXITY_TOL * max_f;
    let c = 2.0 * PI / b.l;
    let mut apex_matches = 0;
    let mut boundary_matches = 0;
    let mut exact = true;
    for s in samples {
        if s.r <= b.r_a {
            apex_matches += 1;
            exact &= s.f == c * (s.r - b.r_t).sinh();
        } else if s.r >= b.r_b {
            boundary_matches += 1;
            exact &= s.f == s.r.exp();
        }
    }
    for i in 1..=8 {
        let r = b.r_t + (b.r_a - b.r_t) * i as f64 / 8.0;
        exact &= b.eval(r).0 == c * (r - b.r_t).sinh();
        let r = b.r_b - b.r_b * (i - 1) as f64 / 7.0;
        exact &= b.eval(r).0 == r.exp();
    }
    GridChecks {
        positive,
        increasing,
        convex,
        min_second_difference: min_dd / max_f,
        apex_matches,
        boundary_matches,
        endpoint_pieces_exact: exact,
    }
}

/// Certifies `L > 2 pi` and `-L / 2 pi < r_T < -1` exactly.
pub fn check_preconditions(l: f64, r_t: f64) -> Result<()> {
    let (lq, rq) = match (BigRational::from_f64(l), BigRational::from_f64(r_t)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::WarpPrecondition("L and r_T must be finite".into())),
    };
    if cmp_two_pi(&lq) != std::cmp::Ordering::Greater {
        return Err(Error::WarpPrecondition(format!("L = {l} is not greater than 2 pi")));
    }
    let minus_one = BigRational::from_integer((-1).into());
    if rq >= minus_one {
        return Err(Error::WarpPrecondition(format!("r_T = {r_t} is not below -1")));
    }
    if cmp_two_pi(&(lq / rq.abs())) != std::cmp::Ordering::Greater {
        return Err(Error::WarpPrecondition(format!("r_T = {r_t} is not above -L/(2 pi)")));
    }
    Ok(())
}

/// Midpoint of `(-L / 2 pi, -1)`.
pub fn midpoint_r_t(l: f64) -> f64 {
    (-l / (2.0 * PI) - 1.0) / 2.0
}

/// Builds `f` with the first convex bridge in the schedule and samples it on
/// `grid` equally spaced points of `(r_T, 0]`.
pub fn warp_profile(l: f64, r_t: f64, grid: usize) -> Result<WarpProfile> {
    check_preconditions(l, r_t)?;
    if grid < 3 {
        return Err(Error::WarpPrecondition("grid needs at least 3 points".into()));
    }
    let mut best = f64::NEG_INFINITY;
    for (da, db, w, k) in bridge_schedule() {
        let r_a = r_t + da;
        let r_b = -db;
        if r_a >= r_b {
            continue;
        }
        let bridge = Bridge {
            l,
            r_t,
            r_a,
            r_b,
            w,
            k,
            a: 0.0,
            b: 0.0,
        }
        .solve();
        let margin = bridge.a.min(bridge.b);
        if !margin.is_finite() {
            continue;
        }
        best = best.max(margin);
        if margin < 0.0 {
            continue;
        }
        let samples: Vec<WarpSample> = grid_points(r_t, grid)
            .into_iter()
            .map(|r| {
                let (f, fp, fpp) = bridge.eval(r);
                WarpSample { r, f, fp, fpp }
            })
            .collect();
        let checks = grid_checks(&bridge, &samples);
        if !checks.all_pass() {
            continue;
        }
        return Ok(WarpProfile {
            l,
            r_t,
            r_a,
            r_b,
            blend_width: w,
            power: k,
            a: bridge.a,
            b: bridge.b,
            samples,
            checks,
        });
    }
    Err(Error::WarpConstructionFailed { best_violation: best })
}

/// Profiles keyed by the boundary isometry class `(L, r_T, grid)`, so that
/// isometric boundaries get identical profiles.
#[derive(Default)]
pub struct WarpRegistry {
    profiles: Mutex<HashMap<(u64, u64, usize), Arc<WarpProfile>>>,
}

impl WarpRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, l: f64, r_t: f64, grid: usize) -> Result<Arc<WarpProfile>> {
        let key = (l.to_bits(), r_t.to_bits(), grid);
        let mut map = self.profiles.lock().expect("registry poisoned");
        if let Some(p) = map.get(&key) {
            return Ok(Arc::clone(p));
        }
        let p = Arc::new(warp_profile(l, r_t, grid)?);
        map.insert(key, Arc::clone(&p));
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.profiles.lock().expect("registry poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_exact_on_polynomials() {
        let (x, w) = gauss_legendre(GL_ORDER);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        let s4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((s4 - 0.4).abs() < 1e-13);
    }

    #[test]
    fn profile_from_prime_seven() {
        let l = 6.5;
        let p = warp_profile(l, midpoint_r_t(l), DEFAULT_GRID).unwrap();
        assert!(p.checks.all_pass(), "{:?}", p.checks);
        assert!(p.convexity_margin() >= 0.0);
        assert_eq!(p.samples.len(), 512);
        assert_eq!(p.samples.last().unwrap().r, 0.0);
        assert_eq!(p.samples.last().unwrap().f, 1.0);
        let p2 = warp_profile(l, -1.02, DEFAULT_GRID).unwrap();
        assert!(p2.checks.all_pass());
    }

    #[test]
    fn bridge_matches_at_junctions() {
        let p = warp_profile(6.5, -1.02, 64).unwrap();
        let b = Bridge {
            l: p.l,
            r_t: p.r_t,
            r_a: p.r_a,
            r_b: p.r_b,
            w: p.blend_width,
            k: p.power,
            a: p.a,
            b: p.b,
        };
        let below = b.eval(p.r_b - 1e-12);
        let e = p.r_b.exp();
        assert!((below.0 - e).abs() < 1e-9);
        assert!((below.1 - e).abs() < 1e-9);
        let above = b.eval(p.r_a + 1e-12);
        let apex = b.apex(p.r_a);
        assert!((above.0 - apex.0).abs() < 1e-9);
    }

    #[test]
    #[ignore]
    fn feasibility_scan() {
        for l in [6.4, 6.5, 7.0, 7.5, 8.0, 10.0] {
            let lo = -l / (2.0 * PI);
            let ok: Vec<String> = (1..20)
                .map(|i| {
                    let t = i as f64 / 20.0;
                    match warp_profile(l, lo + t * (-1.0 - lo), 256) {
                        Ok(_) => "+".to_string(),
                        Err(Error::WarpConstructionFailed { best_violation }) => format!("{best_violation:.0e}"),
                        Err(e) => format!("{e}"),
                    }
                })
                .collect();
            println!("{l}: {}", ok.join(" "));
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(warp_profile(6.0, -1.1, 512), Err(Error::WarpPrecondition(_))));
        assert!(matches!(warp_profile(6.5, -0.9, 512), Err(Error::WarpPrecondition(_))));
        assert!(matches!(warp_profile(6.5, -1.05, 512), Err(Error::WarpPrecondition(_))));
        assert!(matches!(warp_profile(6.5, -1.01, 2), Err(Error::WarpPrecondition(_))));
    }

    #[test]
    fn registry_shares_profiles() {
        let reg = WarpRegistry::new();
        let a = reg.get(6.5, -1.02, 128).unwrap();
        let b = reg.get(6.5, -1.02, 128).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(reg.len(), 1);
    }
}
