//! Example registry and run drivers: build a chart from a name plus
//! key=value parameters, sample points, certify them in parallel, and
//! assemble the report.
//!
//! Points are certified with seeds derived from the point index, so the
//! report content is independent of thread count and completion order;
//! output ordering is always by point index.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::gauss_curvature;
use crate::error::{PinchError, Result};
use crate::harness::{
    aggregate, certify_point, certify_prop_ell, CertKind, PointVerdict, Tolerances,
    HYPOTHESIS_LEVEL_NOTE,
};
use crate::immersion::{
    gen_cp2, gen_ellipsoid, gen_product_spheres, gen_sphere, gen_veronese, pointwise_sff,
    sample_points, ImmersionChart,
};
use crate::report::{format_float, unix_timestamp, ReportFormat, RunReport};
use crate::search::{k_min, min_isotropic, sup_theta, SearchConfig, DOMINANCE_TOL};

/// One registry entry: what the example is and how to parameterize it.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub exercises: &'static str,
}

/// The built-in examples, in presentation order.
pub fn list_examples() -> Vec<ExampleInfo> {
    vec![
        ExampleInfo {
            name: "sphere",
            params: "n (dimension, default 4); r (radius > 0, default 1)",
            exercises: "umbilic hypersurface of flat space with closed-form margins: the \
                        pinching margin is 1/r^2 - b(n, 1/r, 0), positive for n <= 7, zero \
                        at n = 8, negative for n >= 9",
        },
        ExampleInfo {
            name: "ellipsoid",
            params: "axes (comma-separated semi-axes, length n+1, default 1,1,1,1,1.1)",
            exercises: "convex hypersurface for the principal-curvature criterion \
                        (prop-ell); curvature extremes are attained at the axis endpoints",
        },
        ExampleInfo {
            name: "product-spheres",
            params: "r1, r2 (factor radii, default 1); on_sphere (true/false, default \
                     true: realize the product inside the sphere of radius \
                     sqrt(r1^2+r2^2))",
            exercises: "S^2 x S^2 negative control: mixed planes have zero sectional \
                        curvature, so the pinching condition fails while the isotropic \
                        minimum sits exactly on the boundary",
        },
        ExampleInfo {
            name: "veronese",
            params: "n (dimension >= 2, default 4)",
            exercises: "minimal submanifold of the unit sphere with constant sectional \
                        curvature n/(2(n+1)); at n = 4 it satisfies the pinching \
                        condition with margin 1/15",
        },
        ExampleInfo {
            name: "cp2-s7",
            params: "composed (true/false, default true: treat the image as a \
                     submanifold of flat R^8 rather than of the sphere)",
            exercises: "the equality case: pinching margin zero, isotropic minimum zero, \
                        adapted-frame structure, degenerate self-dual spectrum {0, 12k, \
                        12k} against anti-self-dual {8k, 8k, 8k}",
        },
    ]
}

/// Parse repeated `key=value` arguments into a map, rejecting malformed
/// entries and duplicate keys.
pub fn parse_param_list(pairs: &[String]) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for pair in pairs {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            PinchError::BadParameter(format!("parameter {pair:?} is not of the form key=value"))
        })?;
        if map.insert(key.trim().to_string(), value.trim().to_string()).is_some() {
            return Err(PinchError::BadParameter(format!("parameter {key:?} given twice")));
        }
    }
    Ok(map)
}

fn reject_unknown_keys(params: &BTreeMap<String, String>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(PinchError::BadParameter(format!(
                "unknown parameter {key:?}; this example accepts {allowed:?}"
            )));
        }
    }
    Ok(())
}

fn parse_f64(params: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => {
            let v: f64 = s.parse().map_err(|_| {
                PinchError::BadParameter(format!("parameter {key}={s:?} is not a number"))
            })?;
            if !v.is_finite() {
                return Err(PinchError::BadParameter(format!("parameter {key} must be finite")));
            }
            Ok(v)
        }
    }
}

fn parse_usize(params: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s.parse().map_err(|_| {
            PinchError::BadParameter(format!("parameter {key}={s:?} is not a nonnegative integer"))
        }),
    }
}

fn parse_bool(params: &BTreeMap<String, String>, key: &str, default: bool) -> Result<bool> {
    match params.get(key).map(String::as_str) {
        None => Ok(default),
        Some("true") | Some("1") => Ok(true),
        Some("false") | Some("0") => Ok(false),
        Some(other) => Err(PinchError::BadParameter(format!(
            "parameter {key}={other:?} is not a boolean (true/false)"
        ))),
    }
}

fn parse_axes(params: &BTreeMap<String, String>, key: &str, default: &[f64]) -> Result<Vec<f64>> {
    match params.get(key) {
        None => Ok(default.to_vec()),
        Some(s) => s
            .split(',')
            .map(|part| {
                let v: f64 = part.trim().parse().map_err(|_| {
                    PinchError::BadParameter(format!(
                        "axis entry {part:?} in {key}={s:?} is not a number"
                    ))
                })?;
                Ok(v)
            })
            .collect(),
    }
}

const DEFAULT_AXES: [f64; 5] = [1.0, 1.0, 1.0, 1.0, 1.1];

/// Build the chart for a named example from its parameter map.
pub fn build_chart(example: &str, params: &BTreeMap<String, String>) -> Result<ImmersionChart> {
    match example {
        "sphere" => {
            reject_unknown_keys(params, &["n", "r"])?;
            gen_sphere(parse_usize(params, "n", 4)?, parse_f64(params, "r", 1.0)?)
        }
        "ellipsoid" => {
            reject_unknown_keys(params, &["axes"])?;
            gen_ellipsoid(&parse_axes(params, "axes", &DEFAULT_AXES)?)
        }
        "product-spheres" => {
            reject_unknown_keys(params, &["r1", "r2", "on_sphere"])?;
            gen_product_spheres(
                parse_f64(params, "r1", 1.0)?,
                parse_f64(params, "r2", 1.0)?,
                parse_bool(params, "on_sphere", true)?,
            )
        }
        "veronese" => {
            reject_unknown_keys(params, &["n"])?;
            gen_veronese(parse_usize(params, "n", 4)?)
        }
        "cp2-s7" => {
            reject_unknown_keys(params, &["composed"])?;
            let chart = gen_cp2()?;
            Ok(if parse_bool(params, "composed", true)? { chart.composed() } else { chart })
        }
        other => Err(PinchError::BadParameter(format!(
            "unknown example {other:?}; available: sphere, ellipsoid, product-spheres, \
             veronese, cp2-s7"
        ))),
    }
}

/// Everything a run needs besides the output destination.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub example: String,
    pub params: BTreeMap<String, String>,
    pub samples: usize,
    pub seed: u64,
    /// Requested certificates; empty means the default set for the
    /// example's dimension.
    pub certs: Vec<CertKind>,
    pub tolerances: Tolerances,
    pub search: SearchConfig,
}

impl RunConfig {
    pub fn new(example: impl Into<String>) -> Self {
        RunConfig {
            example: example.into(),
            params: BTreeMap::new(),
            samples: 25,
            seed: 0,
            certs: Vec::new(),
            tolerances: Tolerances::for_charts(),
            search: SearchConfig::default(),
        }
    }
}

/// The semi-axes backing a hypersurface example, for the example-level
/// principal-curvature certificate.
fn hypersurface_axes(cfg: &RunConfig, n: usize) -> Result<Vec<f64>> {
    match cfg.example.as_str() {
        "ellipsoid" => parse_axes(&cfg.params, "axes", &DEFAULT_AXES),
        "sphere" => Ok(vec![parse_f64(&cfg.params, "r", 1.0)?; n + 1]),
        other => Err(PinchError::BadConfig(format!(
            "prop-ell applies to convex hypersurface examples (sphere, ellipsoid), not {other:?}"
        ))),
    }
}

/// Run the requested certificates over sampled points of the example.
pub fn run_check(cfg: &RunConfig) -> Result<RunReport> {
    let start = Instant::now();
    cfg.tolerances.validate()?;
    cfg.search.validate()?;
    if cfg.samples == 0 {
        return Err(PinchError::BadConfig("samples must be at least 1".into()));
    }
    let chart = build_chart(&cfg.example, &cfg.params)?;
    let n = chart.n();

    let mut requested: Vec<CertKind> = Vec::new();
    for cert in if cfg.certs.is_empty() { CertKind::default_set(n) } else { cfg.certs.clone() } {
        if !requested.contains(&cert) {
            requested.push(cert);
        }
    }

    let search = SearchConfig { seed: cfg.seed, ..cfg.search.clone() };
    let prop_ell = if requested.contains(&CertKind::PropEll) {
        let axes = hypersurface_axes(cfg, n)?;
        Some(certify_prop_ell(&axes, n, 0.0, cfg.samples, &cfg.tolerances, &search)?)
    } else {
        None
    };

    let pointwise: Vec<CertKind> =
        requested.iter().copied().filter(|c| *c != CertKind::PropEll).collect();
    let points: Vec<PointVerdict> = if pointwise.is_empty() {
        Vec::new()
    } else {
        sample_points(&chart, cfg.samples)
            .par_iter()
            .enumerate()
            .map(|(id, u)| {
                let pd = pointwise_sff(&chart, u)?;
                certify_point(id, u, &pd.sff, &pd.amb, &pointwise, &cfg.tolerances, &search)
            })
            .collect::<Result<Vec<_>>>()?
    };

    let (certificates, points_pass) = aggregate(&points, &pointwise);
    let overall_pass = points_pass && prop_ell.as_ref().map_or(true, |p| p.pass);

    Ok(RunReport {
        tool_version: crate::TOOL_VERSION.to_string(),
        example: cfg.example.clone(),
        params: cfg.params.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        tolerances: cfg.tolerances.clone(),
        certificates,
        prop_ell,
        points,
        overall_pass,
        note: HYPOTHESIS_LEVEL_NOTE.to_string(),
        runtime_seconds: start.elapsed().as_secs_f64(),
        timestamp: unix_timestamp(),
    })
}

/// Bochner spectra across sampled points; the example must have n = 4.
pub fn run_spectrum(cfg: &RunConfig) -> Result<RunReport> {
    let chart = build_chart(&cfg.example, &cfg.params)?;
    if chart.n() != 4 {
        return Err(PinchError::NotDimensionFour(chart.n()));
    }
    let mut inner = cfg.clone();
    inner.certs = vec![CertKind::Bochner];
    run_check(&inner)
}

/// One optimizer-vs-oracle dominance gap.
#[derive(Debug, Clone, Serialize)]
pub struct OracleGap {
    pub label: String,
    pub gap: f64,
}

/// All dominance gaps at one point.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub id: usize,
    pub gaps: Vec<OracleGap>,
    pub dominance_ok: bool,
}

/// Cross-check report: every frame search against its sampling oracle.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub tool_version: String,
    pub example: String,
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub samples: usize,
    pub dominance_tol: f64,
    pub rows: Vec<OracleRow>,
    pub all_dominant: bool,
    pub runtime_seconds: f64,
    pub timestamp: u64,
}

impl OracleReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| PinchError::ReportIo(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let labels: Vec<&str> = self
            .rows
            .first()
            .map(|r| r.gaps.iter().map(|g| g.label.as_str()).collect())
            .unwrap_or_default();
        let mut out = String::from("id");
        for label in &labels {
            out.push_str(&format!(",{label}_gap"));
        }
        out.push_str(",dominance_ok\n");
        for row in &self.rows {
            out.push_str(&row.id.to_string());
            for gap in &row.gaps {
                out.push(',');
                out.push_str(&format_float(gap.gap));
            }
            out.push_str(if row.dominance_ok { ",1\n" } else { ",0\n" });
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => Ok(self.to_csv()),
        }
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let content = self.render(format)?;
        std::fs::write(path, content)
            .map_err(|e| PinchError::ReportIo(format!("{}: {e}", path.display())))
    }
}

/// Run every applicable frame search at every sampled point and report the
/// oracle dominance gaps.
pub fn run_oracle(cfg: &RunConfig) -> Result<OracleReport> {
    let start = Instant::now();
    cfg.search.validate()?;
    if cfg.samples == 0 {
        return Err(PinchError::BadConfig("samples must be at least 1".into()));
    }
    let chart = build_chart(&cfg.example, &cfg.params)?;
    let n = chart.n();
    let search = SearchConfig { seed: cfg.seed, ..cfg.search.clone() };

    let rows: Vec<OracleRow> = sample_points(&chart, cfg.samples)
        .par_iter()
        .enumerate()
        .map(|(id, u)| {
            let pd = pointwise_sff(&chart, u)?;
            let r = gauss_curvature(&pd.sff, &pd.amb);
            let scfg = search.for_point(id as u64);
            let mut gaps = Vec::new();
            gaps.push(OracleGap { label: "k_min".into(), gap: k_min(&r, &scfg)?.gap });
            for p in 2..=n.saturating_sub(2) {
                gaps.push(OracleGap {
                    label: format!("theta_p{p}"),
                    gap: sup_theta(&pd.sff, &pd.amb, p, &scfg)?.gap,
                });
            }
            if n == 4 {
                gaps.push(OracleGap { label: "iso".into(), gap: min_isotropic(&r, &scfg)?.gap });
            }
            let dominance_ok = gaps.iter().all(|g| g.gap >= -DOMINANCE_TOL);
            Ok(OracleRow { id, gaps, dominance_ok })
        })
        .collect::<Result<Vec<_>>>()?;

    let all_dominant = rows.iter().all(|r| r.dominance_ok);
    Ok(OracleReport {
        tool_version: crate::TOOL_VERSION.to_string(),
        example: cfg.example.clone(),
        params: cfg.params.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        dominance_tol: DOMINANCE_TOL,
        rows,
        all_dominant,
        runtime_seconds: start.elapsed().as_secs_f64(),
        timestamp: unix_timestamp(),
    })
}
