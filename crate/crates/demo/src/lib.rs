//! wasm-bindgen entry points for the static page in `www/`. Every function
//! takes plain strings and numbers and returns a JSON string; errors come
//! back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use reflen_core::catalog::diagram_name;
use reflen_core::filling::{midpoint_r_t, warp_profile};
use reflen_core::*;

fn respond(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

/// Verdict, signature and minimal non-affine subsets of a Coxeter matrix.
#[wasm_bindgen]
pub fn classify(matrix: &str) -> String {
    respond((|| {
        let cm = CoxeterMatrix::parse_any(matrix)?;
        let v = classify_group(&cm);
        let sig = gram_signature(&GramMatrix::new(&cm));
        let minimal = minimal_nonaffine_subsets(&cm).unwrap_or_default();
        let name = |s: &[usize]| s.iter().map(|&i| cm.generator_name(i)).collect::<Vec<_>>();
        Ok(json!({
            "kind": v.kind.to_string(),
            "type": diagram_name(&cm),
            "signature": sig.to_string(),
            "minimal_nonaffine": v.minimal_nonaffine,
            "components": v.components.iter().map(|(c, k)| json!({"generators": name(c), "kind": k.to_string()})).collect::<Vec<_>>(),
            "minimal_subsets": minimal.iter().map(|s| name(s)).collect::<Vec<_>>(),
        }))
    })())
}

/// Histogram of reflection length over the standard ball of `radius`.
#[wasm_bindgen]
pub fn reflen_histogram(matrix: &str, radius: usize, depth: usize) -> String {
    respond((|| {
        let cm = CoxeterMatrix::parse_any(matrix)?;
        let options = ReflenOptions { node_cap: 200_000, ..ReflenOptions::default() };
        let ball = reflen_ball(&cm, radius, depth, options)?;
        let exact = ball.results.iter().filter(|r| r.exact().is_some()).count();
        Ok(json!({
            "elements": ball.results.len(),
            "exact": exact,
            "partial": ball.partial,
            "histogram": ball.histogram().iter().map(|(u, c)| json!({
                "upper": u.map_or(json!("inf"), |v| json!(v)),
                "count": c,
            })).collect::<Vec<_>>(),
        }))
    })())
}

/// Warp profile samples; `r_t` outside (-L/2pi, -1) selects the midpoint.
#[wasm_bindgen]
pub fn warp(length: f64, r_t: f64, grid: usize) -> String {
    respond((|| {
        let r_t = if r_t.is_finite() && r_t < -1.0 && r_t > -length / std::f64::consts::TAU {
            r_t
        } else {
            midpoint_r_t(length)
        };
        let p = warp_profile(length, r_t, grid)?;
        Ok(json!({
            "L": p.l,
            "r_T": p.r_t,
            "bridge": [p.r_a, p.r_b],
            "convexity_margin": p.convexity_margin(),
            "checks_pass": p.checks.all_pass(),
            "r": p.samples.iter().map(|s| s.r).collect::<Vec<_>>(),
            "f": p.samples.iter().map(|s| s.f).collect::<Vec<_>>(),
        }))
    })())
}
