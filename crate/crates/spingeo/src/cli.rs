//! Config ingestion and table emission for the command-line interface.
//!
//! Angles are radians inside config files and in the pinned sweep schema;
//! human-readable tables report them in degree columns carrying a `_deg`
//! suffix. Floating output is printed with 12 significant digits so that
//! tolerances down to 1e-10 stay visible, and identical configs always
//! produce byte-identical output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::classical::Line3;
use crate::empirical::{
    classical_limit_distance, empirical_angle, empirical_distance, empirical_volume, E3Placement,
    PlacedState,
};
use crate::geom::Vec3;
use crate::half::HalfInt;
use crate::operators::{spectra, ElementaryParams};
use crate::oracle::{run_suite, SuiteLimits};
use crate::swsh::QNum;
use crate::Error;

/// Errors surfaced to the binary; `Config` maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    #[serde(default)]
    systems: Vec<RawSystem>,
    #[serde(default = "default_hbar")]
    hbar: f64,
    #[serde(default)]
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: Option<RawOutput>,
}

fn default_hbar() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
struct RawSystem {
    #[serde(rename = "P")]
    p: f64,
    s: f64,
    j: f64,
    m: f64,
    #[serde(default)]
    euler: [f64; 3],
    #[serde(default)]
    xi: [f64; 3],
}

#[derive(Debug, Deserialize)]
struct RawSweep {
    j_values: Vec<f64>,
    p_scale: f64,
    lines: Vec<RawLine>,
}

#[derive(Debug, Deserialize)]
struct RawLine {
    point: [f64; 3],
    dir: [f64; 3],
}

#[derive(Debug, Deserialize)]
struct RawOutput {
    format: OutputFormat,
    #[serde(default)]
    path: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One configured elementary system; the placement is applied lazily so a
/// degenerate `P` shows up as a per-row marker instead of aborting a run.
#[derive(Debug, Clone, Copy)]
pub struct SystemSpec {
    pub p: f64,
    pub s: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
    pub euler: [f64; 3],
    pub xi: Vec3,
}

impl SystemSpec {
    fn placed(&self, hbar: f64) -> Result<PlacedState, Error> {
        let params = ElementaryParams::with_hbar(self.p, self.s, hbar)?;
        let q = QNum::new(self.s, self.j, self.m)?;
        PlacedState::new(
            params,
            q,
            E3Placement {
                euler: self.euler,
                xi: self.xi,
            },
        )
    }
}

/// Fully validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub systems: Vec<SystemSpec>,
    pub hbar: f64,
    pub sweep: Option<SweepSpec>,
    pub output: Option<OutputSpec>,
}

#[derive(Debug)]
pub struct SweepSpec {
    pub j_values: Vec<HalfInt>,
    pub p_scale: f64,
    pub lines: Vec<Line3>,
}

#[derive(Debug)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: Option<String>,
}

/// Parse and validate a JSON config document.
pub fn load_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;

    if !raw.hbar.is_finite() || raw.hbar <= 0.0 {
        return Err(CliError::Config(format!(
            "hbar = {} must be positive",
            raw.hbar
        )));
    }

    let mut systems = Vec::with_capacity(raw.systems.len());
    for (i, sys) in raw.systems.iter().enumerate() {
        let context =
            |what: &str, e: Error| CliError::Config(format!("system {}: {what}: {e}", i + 1));
        let s = HalfInt::try_from_f64(sys.s).map_err(|e| context("s", e))?;
        let j = HalfInt::try_from_f64(sys.j).map_err(|e| context("j", e))?;
        let m = HalfInt::try_from_f64(sys.m).map_err(|e| context("m", e))?;
        QNum::new(s, j, m).map_err(|e| context("quantum numbers", e))?;
        systems.push(SystemSpec {
            p: sys.p,
            s,
            j,
            m,
            euler: sys.euler,
            xi: Vec3::from(sys.xi),
        });
    }

    let sweep = match raw.sweep {
        None => None,
        Some(raw_sweep) => {
            if !raw_sweep.p_scale.is_finite() || raw_sweep.p_scale <= 0.0 {
                return Err(CliError::Config("sweep: p_scale must be positive".into()));
            }
            let mut j_values = Vec::with_capacity(raw_sweep.j_values.len());
            for v in &raw_sweep.j_values {
                let j = HalfInt::try_from_f64(*v)
                    .map_err(|e| CliError::Config(format!("sweep: j value {v}: {e}")))?;
                if j.doubled() <= 0 {
                    return Err(CliError::Config(format!("sweep: j value {v} must be > 0")));
                }
                j_values.push(j);
            }
            let mut lines = Vec::with_capacity(raw_sweep.lines.len());
            for (i, line) in raw_sweep.lines.iter().enumerate() {
                let l = Line3::new(Vec3::from(line.point), Vec3::from(line.dir))
                    .map_err(|e| CliError::Config(format!("sweep: line {}: {e}", i + 1)))?;
                lines.push(l);
            }
            for i in 0..lines.len() {
                for k in (i + 1)..lines.len() {
                    if lines[i].dir().cross(lines[k].dir()).norm() < crate::classical::PARALLEL_TOL
                    {
                        return Err(CliError::Config(format!(
                            "sweep: lines {} and {} are parallel",
                            i + 1,
                            k + 1
                        )));
                    }
                }
            }
            Some(SweepSpec {
                j_values,
                p_scale: raw_sweep.p_scale,
                lines,
            })
        }
    };

    Ok(RunConfig {
        systems,
        hbar: raw.hbar,
        sweep,
        output: raw.output.map(|o| OutputSpec {
            format: o.format,
            path: o.path,
        }),
    })
}

/// Format a float with 12 significant digits, trimming redundant zeros.
pub fn fmt_sig(x: f64) -> String {
    const SIG: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..SIG as i32).contains(&exp) {
        let s = format!("{:.*e}", SIG - 1, x);
        let (mantissa, exponent) = s.split_once('e').expect("exponent present");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (SIG as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_sig(v),
        None => "nan".into(),
    }
}

fn marker(e: &Error) -> String {
    match e {
        Error::DegenerateSystem(_) => "error:degenerate-system".into(),
        Error::UndefinedUncertainty => "error:undefined-uncertainty".into(),
        Error::ParallelMomenta => "error:parallel-momenta".into(),
        other => format!("error:{other}"),
    }
}

/// Run the verification suite; the flag says whether every check passed.
pub fn cmd_verify(s_max: HalfInt, j_max: HalfInt, tol: f64) -> (String, bool) {
    let report = run_suite(SuiteLimits { s_max, j_max }, tol);
    (format!("{report}"), report.all_pass())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            out.push((i, k));
        }
    }
    out
}

/// Pairwise empirical distances of the configured systems.
pub fn cmd_distance(config: &RunConfig) -> Result<String, CliError> {
    let mut out = String::from("pair,d12,d_abs,dsq,beta12_deg,uncertainty,classical_ref,status\n");
    for (i, k) in pairs(config.systems.len()) {
        let row = config.systems[i]
            .placed(config.hbar)
            .and_then(|a| Ok((a, config.systems[k].placed(config.hbar)?)))
            .and_then(|(a, b)| empirical_distance(&a, &b));
        match row {
            Ok(g) => {
                writeln!(
                    out,
                    "{}-{},{},{},{},{},{},{},ok",
                    i + 1,
                    k + 1,
                    fmt_sig(g.d12),
                    fmt_sig(g.d12.abs()),
                    fmt_sig(g.dsq),
                    fmt_sig(g.beta12.to_degrees()),
                    fmt_opt(g.uncertainty),
                    fmt_sig(g.classical_ref),
                )
                .expect("write to string");
            }
            Err(e) => {
                writeln!(
                    out,
                    "{}-{},nan,nan,nan,nan,nan,nan,{}",
                    i + 1,
                    k + 1,
                    marker(&e)
                )
                .expect("write to string");
            }
        }
    }
    Ok(out)
}

/// Pairwise empirical angles.
pub fn cmd_angle(config: &RunConfig) -> Result<String, CliError> {
    let mut out = String::from("pair,omega12_deg,beta12_deg,status\n");
    for (i, k) in pairs(config.systems.len()) {
        let row = config.systems[i]
            .placed(config.hbar)
            .and_then(|a| Ok((a, config.systems[k].placed(config.hbar)?)))
            .and_then(|(a, b)| {
                let omega = empirical_angle(&a, &b)?;
                let beta =
                    crate::clamped_acos(crate::empirical::cos_beta12(&a.placement, &b.placement))?;
                Ok((omega, beta))
            });
        match row {
            Ok((omega, beta)) => writeln!(
                out,
                "{}-{},{},{},ok",
                i + 1,
                k + 1,
                fmt_sig(omega.to_degrees()),
                fmt_sig(beta.to_degrees())
            )
            .expect("write to string"),
            Err(e) => writeln!(out, "{}-{},nan,nan,{}", i + 1, k + 1, marker(&e)).expect("write"),
        }
    }
    Ok(out)
}

/// Empirical 3-volume elements of all system triples.
pub fn cmd_volume(config: &RunConfig) -> Result<String, CliError> {
    let mut out = String::from("triple,v123,euclidean_vol,status\n");
    let n = config.systems.len();
    for i in 0..n {
        for k in (i + 1)..n {
            for l in (k + 1)..n {
                let row = config.systems[i].placed(config.hbar).and_then(|a| {
                    let b = config.systems[k].placed(config.hbar)?;
                    let c = config.systems[l].placed(config.hbar)?;
                    let v = empirical_volume(&a, &b, &c)?;
                    let euclid = crate::geom::det3(
                        a.placement.axis(),
                        b.placement.axis(),
                        c.placement.axis(),
                    ) / 6.0;
                    Ok((v, euclid))
                });
                match row {
                    Ok((v, e)) => writeln!(
                        out,
                        "{}-{}-{},{},{},ok",
                        i + 1,
                        k + 1,
                        l + 1,
                        fmt_sig(v),
                        fmt_sig(e)
                    )
                    .expect("write"),
                    Err(e) => writeln!(out, "{}-{}-{},nan,nan,{}", i + 1, k + 1, l + 1, marker(&e))
                        .expect("write"),
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalue table of the centre-of-mass-square family per system.
pub fn cmd_spectra(config: &RunConfig) -> Result<String, CliError> {
    let mut out = String::from("system,P,s,j,c2,j2,l2,status\n");
    for (i, sys) in config.systems.iter().enumerate() {
        let row = ElementaryParams::with_hbar(sys.p, sys.s, config.hbar)
            .and_then(|params| spectra(&params, sys.j));
        match row {
            Ok(sp) => writeln!(
                out,
                "{},{},{},{},{},{},{},ok",
                i + 1,
                fmt_sig(sys.p),
                sys.s,
                sys.j,
                fmt_sig(sp.c2),
                fmt_sig(sp.j2),
                fmt_sig(sp.l2)
            )
            .expect("write"),
            Err(e) => writeln!(
                out,
                "{},{},{},{},nan,nan,nan,{}",
                i + 1,
                fmt_sig(sys.p),
                sys.s,
                sys.j,
                marker(&e)
            )
            .expect("write"),
        }
    }
    Ok(out)
}

/// One row of the classical-limit sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub j: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub pair: String,
    pub d_abs: f64,
    pub classical_ref: f64,
    pub rel_err: Option<f64>,
    pub uncertainty: Option<f64>,
    pub beta12: f64,
}

/// Run the classical-limit sweep over all line pairs and j values; rows
/// are computed in parallel and emitted ordered by (pair, j).
pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>, CliError> {
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep section missing".into()))?;
    let mut j_values = sweep.j_values.clone();
    j_values.sort();
    let mut tasks = Vec::new();
    for (i, k) in pairs(sweep.lines.len()) {
        for &j in &j_values {
            tasks.push((i, k, j));
        }
    }
    let hbar = config.hbar;
    let rows: Vec<SweepRecord> = tasks
        .par_iter()
        .map(|&(i, k, j)| {
            let g =
                classical_limit_distance(&sweep.lines[i], &sweep.lines[k], j, sweep.p_scale, hbar)
                    .expect("lines validated non-parallel, j validated positive");
            let d_abs = g.d12.abs();
            SweepRecord {
                j: j.as_f64(),
                p: sweep.p_scale * j.as_f64(),
                pair: format!("{}-{}", i + 1, k + 1),
                d_abs,
                classical_ref: g.classical_ref,
                rel_err: (g.classical_ref > 0.0)
                    .then(|| (d_abs - g.classical_ref).abs() / g.classical_ref),
                uncertainty: g.uncertainty,
                beta12: g.beta12,
            }
        })
        .collect();
    Ok(rows)
}

/// Pinned CSV schema for sweep records.
pub const SWEEP_CSV_HEADER: &str = "j,P,pair,d_abs,classical_ref,rel_err,uncertainty,beta12";

pub fn render_sweep_csv(rows: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_sig(r.j),
            fmt_sig(r.p),
            r.pair,
            fmt_sig(r.d_abs),
            fmt_sig(r.classical_ref),
            fmt_opt(r.rel_err),
            fmt_opt(r.uncertainty),
            fmt_sig(r.beta12),
        )
        .expect("write to string");
    }
    out
}

pub fn render_sweep_json(rows: &[SweepRecord]) -> String {
    serde_json::to_string_pretty(rows).expect("serializable") + "\n"
}
