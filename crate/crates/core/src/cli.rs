//! Configuration and writers for the `gapfield` binary.
//!
//! A run is described by one JSON document; every field can also be given
//! (and overridden) as a kebab-case flag. CSV output uses 17 significant
//! digits, `.` decimals and `\n` line endings, and rows are written in grid
//! order regardless of how many threads computed them, so identical
//! configurations produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::geometry::{CartesianPoint, DiskPairGeometry};
use crate::series::{Conductivity, ConductivityPair, FieldSolver, HarmonicDrive};
use crate::singular::{
    bipolar_grid, decompose_with, infinity_gap_with, make_params, profiles_with, theta_grid_with_zero,
    Decomposition,
};
use crate::stats::log_log_slope;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_EVALUATION: i32 = 3;

/// Largest accepted `nx·ny`.
pub const MAX_GRID_POINTS: usize = 4096 * 4096;
/// Fraction of failed points above which a run exits with code 3.
pub const FAILURE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Parser)]
#[command(name = "gapfield", version, about = "Fields between two nearly touching circular inclusions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Geometry,
    Field,
    Boundary,
    Sweep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// JSON report of the derived geometry (and β when conductivities are given).
    Geometry(Flags),
    /// CSV of u, ∇u, q and u_b over a rectangular grid.
    Field(Flags),
    /// CSV of exact and singular boundary profiles on ∂B_j.
    Boundary(Flags),
    /// CSV of scalar diagnostics against ε or k, with fitted slopes.
    Sweep(Flags),
}

/// Flat flags mirroring every configuration field.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Flags {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub r2: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Conductivity of B₁: a number, `inf` or `0`.
    #[arg(long)]
    pub k1: Option<String>,
    /// Conductivity of B₂: a number, `inf` or `0`.
    #[arg(long)]
    pub k2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hy: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ymin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ymax: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    /// Boundary index (1 or 2).
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long)]
    pub n_theta: Option<usize>,
    /// Add the gap to the perfect-conductor solution (k₁ = k₂ > 1, H = x).
    #[arg(long)]
    pub u_inf_gap: Option<bool>,
    /// Swept parameter: `eps` or `k`.
    #[arg(long)]
    pub param: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    /// In an ε sweep, set k₁ = k₂ = ε^exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub k_exponent: Option<f64>,
}

/// A conductivity as written in JSON: a number or one of `"inf"`, `"0"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KValue {
    Number(f64),
    Text(String),
}

impl KValue {
    fn parse(&self) -> Result<Conductivity, String> {
        let r = match self {
            KValue::Number(v) if *v == 0.0 => Ok(Conductivity::Insulating),
            KValue::Number(v) => Conductivity::finite(*v),
            KValue::Text(s) => Conductivity::parse(s),
        };
        r.map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub ymin: Option<f64>,
    pub ymax: Option<f64>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub j: Option<usize>,
    pub n_theta: Option<usize>,
    pub u_inf_gap: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: Option<String>,
    pub values: Option<Vec<f64>>,
    pub k_exponent: Option<f64>,
}

/// The JSON configuration document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    pub eps: Option<f64>,
    pub k1: Option<KValue>,
    pub k2: Option<KValue>,
    pub hx: Option<f64>,
    pub hy: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub sweep: SweepSpec,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config JSON: {e}")))
    }

    /// Reads `flags.config` (if any) and applies the flag overrides.
    pub fn load(flags: &Flags) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                Self::from_json(&text)?
            }
            None => Self::default(),
        };
        cfg.apply(flags);
        Ok(cfg)
    }

    pub fn apply(&mut self, f: &Flags) {
        fn set<T: Clone>(dst: &mut Option<T>, src: &Option<T>) {
            if src.is_some() {
                dst.clone_from(src);
            }
        }
        set(&mut self.r1, &f.r1);
        set(&mut self.r2, &f.r2);
        set(&mut self.eps, &f.eps);
        if let Some(k) = &f.k1 {
            self.k1 = Some(KValue::Text(k.clone()));
        }
        if let Some(k) = &f.k2 {
            self.k2 = Some(KValue::Text(k.clone()));
        }
        set(&mut self.hx, &f.hx);
        set(&mut self.hy, &f.hy);
        set(&mut self.tol, &f.tol);
        set(&mut self.out, &f.out);
        set(&mut self.grid.xmin, &f.xmin);
        set(&mut self.grid.xmax, &f.xmax);
        set(&mut self.grid.ymin, &f.ymin);
        set(&mut self.grid.ymax, &f.ymax);
        set(&mut self.grid.nx, &f.nx);
        set(&mut self.grid.ny, &f.ny);
        set(&mut self.boundary.j, &f.j);
        set(&mut self.boundary.n_theta, &f.n_theta);
        set(&mut self.boundary.u_inf_gap, &f.u_inf_gap);
        set(&mut self.sweep.param, &f.param);
        set(&mut self.sweep.values, &f.values);
        set(&mut self.sweep.k_exponent, &f.k_exponent);
    }

    pub fn geometry(&self) -> Result<DiskPairGeometry, CliError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| CliError::Config(format!("missing {name}")));
        DiskPairGeometry::new(need(self.r1, "r1")?, need(self.r2, "r2")?, need(self.eps, "eps")?).map_err(config_err)
    }

    pub fn conductivities(&self) -> Result<Option<ConductivityPair>, CliError> {
        match (&self.k1, &self.k2) {
            (None, None) => Ok(None),
            (Some(a), Some(b)) => ConductivityPair::new(a.parse().map_err(config_err)?, b.parse().map_err(config_err)?)
                .map(Some)
                .map_err(config_err),
            _ => Err(CliError::Config("give both k1 and k2".into())),
        }
    }

    fn require_conductivities(&self) -> Result<ConductivityPair, CliError> {
        self.conductivities()?.ok_or_else(|| CliError::Config("missing k1/k2".into()))
    }

    pub fn drive(&self) -> Result<HarmonicDrive, CliError> {
        let d = HarmonicDrive::new(self.hx.unwrap_or(1.0), self.hy.unwrap_or(0.0));
        if !(d.hx.is_finite() && d.hy.is_finite()) {
            return Err(CliError::Config("hx, hy must be finite".into()));
        }
        Ok(d)
    }

    pub fn tol(&self) -> Result<f64, CliError> {
        let t = self.tol.unwrap_or(1e-10);
        if !(t >= 1e-12 && t < 1.0) {
            return Err(CliError::Config(format!("tol must lie in [1e-12, 1), got {t}")));
        }
        Ok(t)
    }
}

/// Fixed-width float formatting shared by every CSV writer.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// Output of a command: the text to write and the failure count.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub points: usize,
    pub failures: usize,
}

impl Output {
    pub fn failure_fraction(&self) -> f64 {
        if self.points == 0 {
            0.0
        } else {
            self.failures as f64 / self.points as f64
        }
    }
}

/// `geometry`: JSON report with stable key names.
pub fn geometry_report(cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    let g = cfg.geometry()?;
    let pt = |p: CartesianPoint| json!([p.x, p.y]);
    let mut report = json!({
        "r1": g.r1(),
        "r2": g.r2(),
        "eps": g.eps,
        "alpha": g.alpha,
        "xi1": g.xi1,
        "xi2": g.xi2,
        "xi_s": g.xi_small(),
        "xi_M": g.xi_large(),
        "r_star": g.r_star,
        "p1": pt(g.p1),
        "p2": pt(g.p2),
        "c1": pt(g.disk1.center),
        "c2": pt(g.disk2.center),
        "x1": pt(g.closest_point(1)),
        "x2": pt(g.closest_point(2)),
        "p": pt(g.p),
        "n": pt(g.n),
        "t": pt(g.t),
    });
    if let Some(k) = cfg.conductivities()? {
        let params = make_params(&g, &k, cfg.drive()?).map_err(config_err)?;
        let obj = report.as_object_mut().expect("report is an object");
        obj.insert("k1".into(), json!(k.k1.label()));
        obj.insert("k2".into(), json!(k.k2.label()));
        obj.insert("tau1".into(), json!(k.tau1()));
        obj.insert("tau2".into(), json!(k.tau2()));
        obj.insert("tau".into(), json!(k.tau()));
        obj.insert("beta".into(), json!(params.beta));
        obj.insert("regime".into(), json!(params.regime.as_str()));
        obj.insert("within_theorem".into(), json!(params.within_theorem()));
        obj.insert("c_n".into(), json!(params.c_n));
        obj.insert("c_t".into(), json!(params.c_t));
    }
    Ok(report)
}

pub const FIELD_HEADER: &str = "x,y,xi,theta,region,u,ux,uy,grad_norm,q_re,q_im,ub,ub_grad_norm";

/// `field`: one row per grid point, row-major with `y` outermost.
pub fn field_csv(cfg: &RunConfig) -> Result<Output, CliError> {
    let g = cfg.geometry()?;
    let k = cfg.require_conductivities()?;
    let d = cfg.drive()?;
    let gs = &cfg.grid;
    let need = |v: Option<f64>, n: &str| v.ok_or_else(|| CliError::Config(format!("missing grid.{n}")));
    let (xmin, xmax) = (need(gs.xmin, "xmin")?, need(gs.xmax, "xmax")?);
    let (ymin, ymax) = (need(gs.ymin, "ymin")?, need(gs.ymax, "ymax")?);
    let nx = gs.nx.ok_or_else(|| CliError::Config("missing grid.nx".into()))?;
    let ny = gs.ny.ok_or_else(|| CliError::Config("missing grid.ny".into()))?;
    if nx < 1 || ny < 1 || nx.saturating_mul(ny) > MAX_GRID_POINTS {
        return Err(CliError::Config(format!("grid {nx}x{ny} outside 1..=4096^2 points")));
    }
    if !(xmax >= xmin && ymax >= ymin) {
        return Err(CliError::Config("grid bounds must satisfy min <= max".into()));
    }
    let params = make_params(&g, &k, d).map_err(config_err)?;
    if !params.within_theorem() {
        eprintln!("warning: mixed conductivities are outside the decomposition theorems; u_b is reported anyway");
    }
    let solver = FieldSolver::new(&g, k, d, cfg.tol()?).map_err(config_err)?;
    let dec = Decomposition::with_params(solver, params).map_err(config_err)?;
    let coord = |lo: f64, hi: f64, n: usize, i: usize| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    };
    let rows: Vec<Option<String>> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (iy, ix) = (idx / nx, idx % nx);
            let pt = CartesianPoint::new(coord(xmin, xmax, nx, ix), coord(ymin, ymax, ny, iy));
            let s = dec.residual(pt).ok()?;
            let region = dec.solver().region(pt);
            let vals = [
                pt.x,
                pt.y,
                s.bipolar.xi,
                s.bipolar.theta,
                s.u,
                s.grad_u.x,
                s.grad_u.y,
                s.grad_u.norm(),
                s.q.re,
                s.q.im,
                s.ub,
                s.grad_ub.norm(),
            ];
            if vals.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let mut cells: Vec<String> = vals[..4].iter().map(|v| fmt_f64(*v)).collect();
            cells.push(region.as_str().to_string());
            cells.extend(vals[4..].iter().map(|v| fmt_f64(*v)));
            Some(cells.join(","))
        })
        .collect();
    let mut text = String::with_capacity(rows.len() * 260);
    text.push_str(FIELD_HEADER);
    text.push('\n');
    let mut failures = 0;
    for r in &rows {
        match r {
            Some(line) => {
                text.push_str(line);
                text.push('\n');
            }
            None => failures += 1,
        }
    }
    Ok(Output { text, points: rows.len(), failures })
}

pub const BOUNDARY_HEADER: &str =
    "theta,exact_normal,exact_tangential,Q,corollary_prediction,singular_normal,singular_tangential";

/// `boundary`: profiles on `∂B_j` over the default angle grid.
pub fn boundary_csv(cfg: &RunConfig) -> Result<Output, CliError> {
    let g = cfg.geometry()?;
    let k = cfg.require_conductivities()?;
    let d = cfg.drive()?;
    let tol = cfg.tol()?;
    let j = cfg.boundary.j.unwrap_or(1);
    if !(j == 1 || j == 2) {
        return Err(CliError::Config(format!("boundary.j must be 1 or 2, got {j}")));
    }
    let n = cfg.boundary.n_theta.unwrap_or(512);
    if !(2..=1_000_000).contains(&n) {
        return Err(CliError::Config(format!("boundary.n_theta out of range: {n}")));
    }
    let with_gap = cfg.boundary.u_inf_gap.unwrap_or(false);
    let k_gap = if with_gap {
        match (k.k1, k.k2) {
            (Conductivity::Finite(a), Conductivity::Finite(b)) if a == b && a > 1.0 && d.hy == 0.0 => Some(a),
            _ => {
                return Err(CliError::Config("u_inf_gap needs k1 = k2 > 1 (finite) and hy = 0".into()));
            }
        }
    } else {
        None
    };
    let thetas = theta_grid_with_zero(n);
    let params = make_params(&g, &k, d).map_err(config_err)?;
    let solver = FieldSolver::new(&g, k, d, tol).map_err(config_err)?;
    let dec = Decomposition::with_params(solver, params).map_err(config_err)?;
    let prof = profiles_with(&dec, j, &thetas).map_err(config_err)?;
    let gap = match k_gap {
        Some(kv) => {
            let uinf = FieldSolver::perfect(&g, d, tol).map_err(config_err)?;
            Some(infinity_gap_with(dec.solver(), &uinf, kv, j, &thetas).map_err(config_err)?)
        }
        None => None,
    };
    let mut text = String::from(BOUNDARY_HEADER);
    if gap.is_some() {
        text.push_str(",u_inf_gap,u_inf_gap_prediction");
    }
    text.push('\n');
    for i in 0..thetas.len() {
        let mut cells = vec![
            fmt_f64(thetas[i]),
            fmt_f64(prof.exact_normal[i]),
            fmt_f64(prof.exact_tangential[i]),
            fmt_f64(prof.q_profile[i]),
            fmt_f64(prof.corollary_prediction[i]),
            fmt_f64(prof.singular_normal[i]),
            fmt_f64(prof.singular_tangential[i]),
        ];
        if let Some(gp) = &gap {
            cells.push(fmt_f64(gp.exact[i]));
            cells.push(fmt_f64(gp.prediction[i]));
        }
        push_row(&mut text, &cells);
    }
    Ok(Output { text, points: thetas.len(), failures: 0 })
}

pub const SWEEP_HEADER: &str = "value,eps,k1,k2,beta,grad_x1,sup_grad_ub,gap_x1,gap_w1inf";

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eps,
    K,
}

/// One sweep row; absent diagnostics are written as empty cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub eps: f64,
    pub k1: Conductivity,
    pub k2: Conductivity,
    pub beta: f64,
    pub grad_x1: f64,
    pub sup_grad_ub: Option<f64>,
    pub gap_x1: Option<f64>,
    pub gap_w1inf: Option<f64>,
}

fn sweep_row(cfg: &RunConfig, g: &DiskPairGeometry, k: ConductivityPair, value: f64) -> crate::Result<SweepRow> {
    let d = cfg.drive().map_err(|e| crate::Error::InvalidParameter(e.to_string()))?;
    let tol = cfg.tol.unwrap_or(1e-10);
    let params = make_params(g, &k, d)?;
    let solver = FieldSolver::new(g, k, d, tol)?;
    let grad_x1 = solver.gradient_at_closest_point(1)?;
    let sup_grad_ub = if params.within_theorem() {
        let dec = Decomposition::with_params(solver.clone(), params)?;
        let grid = bipolar_grid(g, 17, 128, true)?;
        let rep = decompose_with(&dec, &grid);
        (rep.failures == 0).then_some(rep.sup_grad_ub)
    } else {
        None
    };
    let (gap_x1, gap_w1inf) = match (k.k1, k.k2) {
        (Conductivity::Finite(a), Conductivity::Finite(b)) if a == b && a > 1.0 && d.hy == 0.0 && d.hx != 0.0 => {
            let uinf = FieldSolver::perfect(g, d, tol)?;
            let n = cfg.boundary.n_theta.unwrap_or(129);
            let thetas = theta_grid_with_zero(n);
            let gap = infinity_gap_with(&solver, &uinf, a, 1, &thetas)?;
            let zero = thetas.iter().position(|&t| t == 0.0).expect("grid contains zero");
            (Some(gap.exact[zero]), Some(gap.max_grad_norm()))
        }
        _ => (None, None),
    };
    Ok(SweepRow {
        value,
        eps: g.eps,
        k1: k.k1,
        k2: k.k2,
        beta: params.beta,
        grad_x1,
        sup_grad_ub,
        gap_x1,
        gap_w1inf,
    })
}

/// `sweep`: one row per value, then `# summary {json}` with log-log slopes
/// of every complete, non-zero column against the swept value.
pub fn sweep_csv(cfg: &RunConfig) -> Result<Output, CliError> {
    let param = match cfg.sweep.param.as_deref() {
        Some("eps") => SweepParam::Eps,
        Some("k") => SweepParam::K,
        other => return Err(CliError::Config(format!("sweep.param must be 'eps' or 'k', got {other:?}"))),
    };
    let values = cfg.sweep.values.clone().unwrap_or_default();
    if values.len() < 3 {
        return Err(CliError::Config("a sweep needs at least three values".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(CliError::Config("sweep values must be positive".into()));
    }
    cfg.tol()?;
    cfg.drive()?;
    // validate the fixed part of the configuration up front
    let mut setups = Vec::with_capacity(values.len());
    for &v in &values {
        let (g, k) = match param {
            SweepParam::Eps => {
                let mut c = cfg.clone();
                c.eps = Some(v);
                let g = c.geometry()?;
                let k = match cfg.sweep.k_exponent {
                    Some(p) => ConductivityPair::finite(v.powf(p), v.powf(p)).map_err(config_err)?,
                    None => cfg.require_conductivities()?,
                };
                (g, k)
            }
            SweepParam::K => (cfg.geometry()?, ConductivityPair::finite(v, v).map_err(config_err)?),
        };
        setups.push((g, k, v));
    }
    let rows: Vec<crate::Result<SweepRow>> = setups.iter().map(|(g, k, v)| sweep_row(cfg, g, *k, *v)).collect();
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    let mut ok_rows = Vec::new();
    let mut failures = 0;
    for r in rows {
        match r {
            Ok(row) => {
                let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
                push_row(
                    &mut text,
                    &[
                        fmt_f64(row.value),
                        fmt_f64(row.eps),
                        row.k1.label(),
                        row.k2.label(),
                        fmt_f64(row.beta),
                        fmt_f64(row.grad_x1),
                        opt(row.sup_grad_ub),
                        opt(row.gap_x1),
                        opt(row.gap_w1inf),
                    ],
                );
                ok_rows.push(row);
            }
            Err(e) => {
                eprintln!("warning: sweep value skipped: {e}");
                failures += 1;
            }
        }
    }
    let xs: Vec<f64> = ok_rows.iter().map(|r| r.value).collect();
    let mut slopes = BTreeMap::new();
    let columns: [(&str, Vec<Option<f64>>); 5] = [
        ("beta", ok_rows.iter().map(|r| Some(r.beta)).collect()),
        ("grad_x1", ok_rows.iter().map(|r| Some(r.grad_x1)).collect()),
        ("sup_grad_ub", ok_rows.iter().map(|r| r.sup_grad_ub).collect()),
        ("gap_x1", ok_rows.iter().map(|r| r.gap_x1).collect()),
        ("gap_w1inf", ok_rows.iter().map(|r| r.gap_w1inf).collect()),
    ];
    for (name, col) in columns {
        if let Some(ys) = col.into_iter().collect::<Option<Vec<f64>>>() {
            if let Ok(s) = log_log_slope(&xs, &ys) {
                slopes.insert(name.to_string(), s);
            }
        }
    }
    let summary = json!({
        "param": if param == SweepParam::Eps { "eps" } else { "k" },
        "rows": ok_rows.len(),
        "slopes": slopes,
    });
    writeln!(text, "# summary {summary}").expect("writing to a String cannot fail");
    Ok(Output { text, points: values.len(), failures })
}

/// Runs `rayon` work on a pool capped by `GAPFIELD_THREADS`.
fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match std::env::var("GAPFIELD_THREADS") {
        Ok(s) => {
            let n: usize = s
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Config(format!("GAPFIELD_THREADS must be a positive integer, got '{s}'")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Executes one command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (kind, flags) = match &cli.command {
        Command::Geometry(f) => (CommandKind::Geometry, f),
        Command::Field(f) => (CommandKind::Field, f),
        Command::Boundary(f) => (CommandKind::Boundary, f),
        Command::Sweep(f) => (CommandKind::Sweep, f),
    };
    match execute(kind, flags) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gapfield: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(kind: CommandKind, flags: &Flags) -> Result<i32, CliError> {
    let cfg = RunConfig::load(flags)?;
    let output = with_thread_cap(|| match kind {
        CommandKind::Geometry => geometry_report(&cfg).map(|v| Output {
            text: format!("{}\n", serde_json::to_string_pretty(&v).expect("JSON values serialize")),
            points: 1,
            failures: 0,
        }),
        CommandKind::Field => field_csv(&cfg),
        CommandKind::Boundary => boundary_csv(&cfg),
        CommandKind::Sweep => sweep_csv(&cfg),
    })??;
    emit(&cfg, &output.text)?;
    if output.failures > 0 {
        eprintln!("warning: {} of {} points failed and were omitted", output.failures, output.points);
    }
    if output.failure_fraction() > FAILURE_THRESHOLD {
        return Ok(EXIT_EVALUATION);
    }
    Ok(EXIT_OK)
}
