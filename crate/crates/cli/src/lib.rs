//! `reflen` command-line front end.
//!
//! Every command produces one report: pretty JSON with sorted keys (the
//! default) or CSV where a table is natural. Reports embed the tool version
//! and the full configuration, and are byte-identical across runs and thread
//! counts.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use reflen_core::catalog::{diagram_name, lookup};
use reflen_core::filling::warp::DEFAULT_GRID;
use reflen_core::filling::{
    congruence_search, cusp_data, midpoint_r_t, two_pi_certificate, warp_profile, TriangleModel, WarpProfile,
};
use reflen_core::interval::fmt_sig15;
use reflen_core::quasi::DEFAULT_POWER_CAP;
use reflen_core::reflen::engine_ball;
use reflen_core::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// The full run configuration; serialized into every report.
#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "reflen", version, about = "Reflection length and bi-invariant metrics on Coxeter groups")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Worker threads (reports do not depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct MatrixInput {
    /// Coxeter matrix, e.g. "rank 3; m12=3 m13=3 m23=4".
    #[arg(long)]
    pub inline: Option<String>,
    /// File with the matrix (text or JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl MatrixInput {
    pub fn load(&self) -> anyhow::Result<CoxeterMatrix> {
        let text = match (&self.inline, &self.input) {
            (Some(t), None) => t.clone(),
            (None, Some(p)) => std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?,
            _ => bail!("give exactly one of --inline or --input"),
        };
        Ok(CoxeterMatrix::parse_any(&text)?)
    }
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "name")]
pub enum Command {
    /// Spherical / affine / non-affine verdict with the Gram signature.
    Classify {
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Minimal non-affine special subgroups.
    Subgroups {
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Reflection length of one element, or of the whole ball.
    Reflen {
        #[command(flatten)]
        matrix: MatrixInput,
        /// Word such as "abc" or "1 2 3"; omit for the ball report.
        #[arg(long)]
        word: Option<String>,
        #[arg(long = "L", default_value_t = 8)]
        radius: usize,
        #[arg(long = "D", default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = ball::DEFAULT_NODE_CAP)]
        node_cap: usize,
        #[arg(long)]
        no_quotients: bool,
    },
    /// Bounds on the powers g, g^2, ..., g^K.
    Growth {
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long)]
        g: String,
        #[arg(long = "K", default_value_t = 6)]
        max_k: usize,
        #[arg(long = "L", default_value_t = 8)]
        radius: usize,
        #[arg(long = "D", default_value_t = 6)]
        depth: usize,
        /// Counting pattern for certified lower bounds (free groups only).
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Largest exact reflection length against 2n on an affine group.
    AffineBound {
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long = "L", default_value_t = 8)]
        radius: usize,
        #[arg(long = "D", default_value_t = 6)]
        depth: usize,
    },
    /// Counting quasimorphism certificate on the free Coxeter group W_k.
    QmCertify {
        #[arg(long = "k", default_value_t = 3)]
        alphabet: usize,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        g: Option<String>,
        #[arg(long = "K", default_value_t = 6)]
        max_k: usize,
        /// Defaults to 3|pattern|.
        #[arg(long)]
        window: Option<usize>,
    },
    /// Cusp data, congruence quotient, 2 pi margins and warp profile.
    Filling {
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long, default_value = "3")]
        q: String,
        #[arg(long, default_value = "1")]
        h: String,
        #[arg(long, default_value_t = 100)]
        prime_cap: u64,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Warp profile for given L and r_T.
    Warp {
        #[arg(long = "L", default_value_t = 8.0)]
        length: f64,
        /// Defaults to the midpoint of (-L/2pi, -1).
        #[arg(long = "r-T", allow_hyphen_values = true)]
        r_t: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

/// Report text and exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
}

/// 0 on success, 2 when a resource cap was hit, 1 on any other error.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::WindowTooLarge { .. }
            | Error::HomogenizeNotStable { .. }
            | Error::OutsideBall { .. }
            | Error::SearchExhausted { .. },
        ) => 2,
        _ => 1,
    }
}

/// Parses `abc`-style letters or 1-based indices separated by spaces/commas.
pub fn parse_word(text: &str) -> anyhow::Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    if t.chars().all(|c| c.is_ascii_lowercase()) {
        return Ok(t.bytes().map(|b| (b - b'a') as usize).collect());
    }
    t.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(anyhow!("bad generator {s:?} in word {text:?}")),
        })
        .collect()
}

fn word_string(cm: &CoxeterMatrix, word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    let names: Vec<String> = word.iter().map(|&s| cm.generator_name(s)).collect();
    if names.iter().all(|n| n.len() == 1) {
        names.concat()
    } else {
        names.join(" ")
    }
}

fn upper_json(u: Option<usize>) -> Value {
    u.map_or(json!("inf"), |v| json!(v))
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

fn envelope(cfg: &RunConfig, result: Value) -> anyhow::Result<String> {
    let v = json!({
        "tool": "reflen",
        "version": VERSION,
        "config": serde_json::to_value(cfg)?,
        "result": result,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn csv_only_for(cfg: &RunConfig, what: &str) -> anyhow::Result<()> {
    if cfg.format == Format::Csv {
        bail!("csv output is not available for {what}");
    }
    Ok(())
}

fn classify_report(cm: &CoxeterMatrix) -> Value {
    let v = classify_group(cm);
    let sig = gram_signature(&GramMatrix::new(cm));
    let comps: Vec<Value> = v
        .components
        .iter()
        .map(|(c, k)| {
            json!({
                "generators": c.iter().map(|&s| cm.generator_name(s)).collect::<Vec<_>>(),
                "kind": k.to_string(),
                "type": lookup(cm, c).name,
            })
        })
        .collect();
    let mut summary = v.kind.to_string();
    if v.minimal_nonaffine {
        summary.push_str(", minimal non-affine");
    }
    summary.push_str(&format!(", signature {sig}"));
    json!({
        "kind": v.kind.to_string(),
        "components": comps,
        "minimal_nonaffine": v.minimal_nonaffine,
        "signature": sig.to_string(),
        "type": diagram_name(cm),
        "summary": summary,
    })
}

fn result_json(cm: &CoxeterMatrix, word: &[usize], r: &ReflLenResult) -> Value {
    json!({
        "word": word_string(cm, word),
        "standard_length": r.standard_length,
        "upper": upper_json(r.upper),
        "lower": r.lower,
        "status": r.status.to_string(),
        "witness": r.witness.iter().map(|w| word_string(cm, w)).collect::<Vec<_>>(),
        "depth_used": r.depth_used,
        "bounds": {
            "codim": r.bounds.codim,
            "quotient": r.bounds.quotient,
            "certificate": r.bounds.certificate,
        },
    })
}

fn ball_json(cm: &CoxeterMatrix, ball: &ReflenBall) -> Value {
    let rows: Vec<Value> = ball
        .results
        .iter()
        .map(|r| {
            json!({
                "key": r.element.key().to_hex(),
                "word": word_string(cm, r.element.word().unwrap_or(&[])),
                "len_S": r.standard_length,
                "upper": upper_json(r.upper),
                "lower": r.lower,
                "status": r.status.to_string(),
            })
        })
        .collect();
    let exact: Vec<usize> = ball.results.iter().filter_map(|r| r.exact()).collect();
    json!({
        "radius": ball.radius,
        "depth": ball.depth,
        "partial": ball.partial,
        "elements": ball.results.len(),
        "exact_count": exact.len(),
        "max_exact": exact.iter().max(),
        "histogram": ball.histogram().iter().map(|(u, c)| json!({"upper": upper_json(*u), "count": c})).collect::<Vec<_>>(),
        "rows": rows,
    })
}

fn cert_json(cert: &QuasimorphismCert) -> Value {
    json!({
        "alphabet": cert.alphabet,
        "pattern": cert.pattern.to_string(),
        "raw_defect": cert.raw_defect,
        "window": cert.window,
        "stabilized": cert.stabilized,
        "homogeneous_defect": cert.homogeneous_defect.to_string(),
        "generator_max": cert.generator_max.to_string(),
        "constant": cert.constant.to_string(),
        "attaining_pair": [cert.attaining_pair.0, cert.attaining_pair.1],
    })
}

fn warp_json(p: &WarpProfile) -> Value {
    json!({
        "L": fmt_sig15(p.l),
        "r_T": fmt_sig15(p.r_t),
        "bridge": [fmt_sig15(p.r_a), fmt_sig15(p.r_b)],
        "blend_width": fmt_sig15(p.blend_width),
        "power": p.power,
        "convexity_margin": fmt_sig15(p.convexity_margin()),
        "checks": {
            "positive": p.checks.positive,
            "increasing": p.checks.increasing,
            "convex": p.checks.convex,
            "endpoint_pieces_exact": p.checks.endpoint_pieces_exact,
            "min_second_difference": fmt_sig15(p.checks.min_second_difference),
        },
        "samples": p.samples.iter().map(|s| [fmt_sig15(s.r), fmt_sig15(s.f), fmt_sig15(s.fp), fmt_sig15(s.fpp)]).collect::<Vec<_>>(),
    })
}

fn filling_report(p: &str, q: &str, h: &str, prime_cap: u64, grid: usize) -> anyhow::Result<Value> {
    let model = TriangleModel::build_str(p, q)?;
    let h: BigRational = h.parse().map_err(|_| anyhow!("bad height {h:?}; use an integer or a/b"))?;
    let cert = congruence_search(&model, &h, prime_cap)?;
    let mut cusps = Vec::new();
    let mut shortest: Option<(BigRational, f64)> = None;
    for c in &cert.cusps {
        let tp = two_pi_certificate(&model, &cert, c.cusp.s)?;
        if shortest.as_ref().map_or(true, |(d, _)| tp.min_displacement < *d) {
            shortest = Some((tp.min_displacement.clone(), tp.displacement_f64()));
        }
        let data = cusp_data(&model, c.cusp.s, &h)?;
        cusps.push(json!({
            "generator": c.cusp.s + 1,
            "vertex": c.cusp.vertex.to_string(),
            "tau": [data.lo.to_string(), data.hi.to_string()],
            "width": data.width().to_string(),
            "a_s_size": c.elements.len(),
            "a_s": c.elements.iter().zip(&c.images).map(|(e, img)| json!({
                "element": e.name(),
                "displacement": e.displacement.to_string(),
                "image_mod_p": img,
            })).collect::<Vec<_>>(),
            "translation_order_mod_p": tp.translation_order,
            "min_kernel_displacement": tp.min_displacement.to_string(),
            "margin_over_two_pi": tp.margin_string(),
        }));
    }
    let (_, l) = shortest.ok_or_else(|| anyhow!("model has no cusps"))?;
    let profile = warp_profile(l, midpoint_r_t(l), grid)?;
    Ok(json!({
        "model": {
            "p": model.params().0.to_string(),
            "q": model.params().1.to_string(),
            "relations": model.relation_checks().iter().map(|c| json!({
                "pair": [c.pair.0 + 1, c.pair.1 + 1],
                "exponent": c.exponent,
                "trace_sq": c.trace_sq,
                "ok": c.ok,
            })).collect::<Vec<_>>(),
        },
        "h": h.to_string(),
        "prime": cert.prime,
        "rejected_primes": cert.rejected.iter().map(|(p, r)| json!({"prime": p, "reason": r})).collect::<Vec<_>>(),
        "parabolics": cert.parabolics.iter().map(|c| json!({
            "generators": one_based(&c.generators),
            "order": c.order,
            "image_order": c.image_order,
        })).collect::<Vec<_>>(),
        "cusps": cusps,
        "warp": warp_json(&profile),
    }))
}

/// Runs one configured command and renders its report.
pub fn execute(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut exit_code = 0;
    let body = match &cfg.command {
        Command::Classify { matrix } => {
            csv_only_for(cfg, "classify")?;
            envelope(cfg, classify_report(&matrix.load()?))?
        }
        Command::Subgroups { matrix } => {
            csv_only_for(cfg, "subgroups")?;
            let cm = matrix.load()?;
            let subs = minimal_nonaffine_subsets(&cm)?;
            let list: Vec<Value> = subs
                .iter()
                .map(|s| {
                    let sub = cm.restrict(s).expect("subset in range");
                    json!({
                        "generators": s.iter().map(|&i| cm.generator_name(i)).collect::<Vec<_>>(),
                        "signature": gram_signature(&GramMatrix::new(&sub)).to_string(),
                    })
                })
                .collect();
            envelope(cfg, json!({ "minimal_nonaffine": list }))?
        }
        Command::Reflen { matrix, word, radius, depth, node_cap, no_quotients } => {
            let cm = matrix.load()?;
            let options = ReflenOptions {
                node_cap: *node_cap,
                use_quotients: !no_quotients,
                ..ReflenOptions::default()
            };
            match word {
                Some(w) => {
                    csv_only_for(cfg, "a single element")?;
                    let word = parse_word(w)?;
                    let protocol = Protocol { radius: *radius, d_cap: *depth, ..Protocol::default() };
                    let r = reflen_element(&cm, &word, &protocol, options)?;
                    envelope(cfg, result_json(&cm, &word, &r))?
                }
                None => {
                    let engine = ReflenEngine::new(&cm, *radius, *depth, options);
                    let ball = engine_ball(&engine, *radius, *depth)?;
                    if ball.partial {
                        exit_code = 2;
                    }
                    match cfg.format {
                        Format::Csv => ball.to_csv(),
                        Format::Json => envelope(cfg, ball_json(&cm, &ball))?,
                    }
                }
            }
        }
        Command::Growth { matrix, g, max_k, radius, depth, pattern } => {
            let cm = matrix.load()?;
            let base = parse_word(g)?;
            let cert = match pattern {
                Some(p) => {
                    if !cm.is_free() {
                        return Err(Error::NotFreeCoxeter.into());
                    }
                    Some(QuasimorphismCert::build(cm.rank(), &FreeCoxeterWord::parse(p, cm.rank())?, None)?)
                }
                None => None,
            };
            let protocol = Protocol { radius: *radius, d_cap: *depth, ..Protocol::default() };
            let rec = growth_profile(&cm, &base, *max_k, &protocol, cert.as_ref())?;
            match cfg.format {
                Format::Csv => rec.to_csv(),
                Format::Json => {
                    let rows: Vec<Value> = rec
                        .powers
                        .iter()
                        .map(|(k, r)| {
                            json!({
                                "k": k,
                                "upper": upper_json(r.upper),
                                "lower": r.lower,
                                "status": r.status.to_string(),
                                "certified_lower": rec.certified.get(k - 1),
                            })
                        })
                        .collect();
                    envelope(
                        cfg,
                        json!({
                            "base": word_string(&cm, &base),
                            "metric": rec.metric_name,
                            "certificate": cert.as_ref().map(cert_json),
                            "powers": rows,
                        }),
                    )?
                }
            }
        }
        Command::AffineBound { matrix, radius, depth } => {
            csv_only_for(cfg, "affine-bound")?;
            let r = affine_bound_experiment(&matrix.load()?, *radius, *depth)?;
            let summary = if r.attained {
                format!("max reflection length {} = 2n, attained", r.max_exact)
            } else {
                format!("max reflection length {} < 2n = {}, not attained", r.max_exact, r.two_n)
            };
            envelope(
                cfg,
                json!({
                    "n": r.n,
                    "two_n": r.two_n,
                    "max_exact": r.max_exact,
                    "attained": r.attained,
                    "exact_count": r.exact_count,
                    "total": r.total,
                    "partial": r.partial,
                    "summary": summary,
                }),
            )?
        }
        Command::QmCertify { alphabet, pattern, g, max_k, window } => {
            csv_only_for(cfg, "qm-certify")?;
            let w = FreeCoxeterWord::parse(pattern, *alphabet)?;
            let cert = QuasimorphismCert::build(*alphabet, &w, *window)?;
            let g = FreeCoxeterWord::parse(g.as_deref().unwrap_or(pattern), *alphabet)?;
            let phi = homogenize(&w, &g, DEFAULT_POWER_CAP)?;
            let (c, bounds) = certify_lower_bound(&cert, &g, *max_k)?;
            envelope(
                cfg,
                json!({
                    "certificate": cert_json(&cert),
                    "g": g.to_string(),
                    "phi_g": phi.to_string(),
                    "C": c.to_string(),
                    "bounds": bounds.iter().map(|b| json!({"k": b.k, "lower": b.bound})).collect::<Vec<_>>(),
                }),
            )?
        }
        Command::Filling { p, q, h, prime_cap, grid } => {
            csv_only_for(cfg, "filling")?;
            envelope(cfg, filling_report(p, q, h, *prime_cap, *grid)?)?
        }
        Command::Warp { length, r_t, grid } => {
            let r_t = r_t.unwrap_or_else(|| midpoint_r_t(*length));
            let p = warp_profile(*length, r_t, *grid)?;
            match cfg.format {
                Format::Csv => p.to_csv(),
                Format::Json => envelope(cfg, warp_json(&p))?,
            }
        }
    };
    Ok(Outcome { body, exit_code })
}

/// Runs `execute` inside a pool of `threads` workers when given.
pub fn execute_with_threads(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()?
            .install(|| execute(cfg)),
        None => execute(cfg),
    }
}

/// Parses arguments, runs, writes the report, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = execute_with_threads(&cfg).and_then(|out| {
        match &cfg.output {
            Some(p) => std::fs::write(p, &out.body).with_context(|| format!("cannot write {}", p.display()))?,
            None => print!("{}", out.body),
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
