//! Runs, comparisons and tolerance sweeps with their CSV artifacts.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::{self, CaseConfig, CaseError, Continuity, InterfaceBenchmark, Preset};
use crate::bvp::BvpError;
use crate::mohl::{run_simulation, LayerStats, MohlError, RunFailure};
use crate::postprocess::{self, export, ErrorReport, PostError};
use crate::reference::{
    admissible_time_step, euler_explicit_run, euler_implicit_run, ExplicitOptions, GridConfig, ReferenceError,
    ReferenceOptions,
};
use crate::series::FieldSeries;

/// Environment variable holding the worker count of parallel studies.
pub const THREADS_ENV: &str = "MOHL_THREADS";
pub const DEFAULT_REFERENCE_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mohl,
    EulerImplicit,
    EulerExplicit,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mohl => "mohl",
            Self::EulerImplicit => "euler-implicit",
            Self::EulerExplicit => "euler-explicit",
        })
    }
}

impl FromStr for Method {
    type Err = StudyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mohl" => Ok(Self::Mohl),
            "euler-implicit" => Ok(Self::EulerImplicit),
            "euler-explicit" => Ok(Self::EulerExplicit),
            other => Err(StudyError::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("io error: {0}")]
    Io(String),
}

impl StudyError {
    /// Process exit code: 2 for solver failures, 3 for configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 3,
            Self::Solver(_) => 2,
            Self::Io(_) => 1,
        }
    }
}

impl From<CaseError> for StudyError {
    fn from(e: CaseError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<PostError> for StudyError {
    fn from(e: PostError) -> Self {
        match e {
            PostError::Io(m) => Self::Io(m),
            other => Self::Solver(other.to_string()),
        }
    }
}

impl From<ReferenceError> for StudyError {
    fn from(e: ReferenceError) -> Self {
        match e {
            ReferenceError::InvalidGrid(_) | ReferenceError::Physics(_) => Self::Config(e.to_string()),
            other => Self::Solver(other.to_string()),
        }
    }
}

impl From<RunFailure> for StudyError {
    fn from(e: RunFailure) -> Self {
        match e.error {
            MohlError::InvalidTimeGrid(_) | MohlError::Physics(_) => Self::Config(e.to_string()),
            MohlError::Bvp(BvpError::InvalidOptions(_)) => Self::Config(e.to_string()),
            _ => Self::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for StudyError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

/// Method and step overrides; unset values fall back to the case or method defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub method: Method,
    pub tol: Option<f64>,
    pub dt: Option<f64>,
    pub dx: Option<f64>,
}

impl RunSettings {
    pub fn new(method: Method) -> Self {
        Self { method, tol: None, dt: None, dx: None }
    }

    pub fn mohl(tol: f64, dt: f64) -> Self {
        Self { method: Method::Mohl, tol: Some(tol), dt: Some(dt), dx: None }
    }

    pub fn reference(method: Method, dx: f64, dt: f64) -> Self {
        Self { method, tol: None, dt: Some(dt), dx: Some(dx) }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub method: Method,
    pub series: FieldSeries,
    /// Wall-clock time of the solve loop only.
    pub seconds: f64,
    pub layers: Vec<LayerStats>,
    pub picard: Vec<usize>,
    pub grid_nodes: usize,
    pub dt: f64,
    pub dx: Option<f64>,
    pub tol: Option<f64>,
}

impl RunOutcome {
    pub fn max_v_nodes(&self) -> usize {
        self.layers.iter().map(|s| s.v_nodes).max().unwrap_or(0)
    }

    pub fn max_u_nodes(&self) -> usize {
        self.layers.iter().map(|s| s.u_nodes).max().unwrap_or(0)
    }

    pub fn mean_v_nodes(&self) -> f64 {
        if self.layers.is_empty() {
            return 0.0;
        }
        self.layers.iter().map(|s| s.v_nodes as f64).sum::<f64>() / self.layers.len() as f64
    }
}

fn validated_step(name: &str, value: f64) -> Result<f64, StudyError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(StudyError::Config(format!("{name} must be positive, got {value}")))
    }
}

/// Preset name or TOML file; the experimental case is built from `sensors`.
pub fn resolve_case(case: &str, sensors: Option<&Path>) -> Result<Preset, StudyError> {
    if case == "experimental" {
        let path = sensors.ok_or_else(|| StudyError::Config("experimental needs --sensors <csv>".into()))?;
        let data = cases::load_sensor_csv(path)?;
        return Ok(Preset::Wall(Box::new(cases::experimental(&data)?)));
    }
    let path = Path::new(case);
    if case.ends_with(".toml") || path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| StudyError::Config(format!("{case}: {e}")))?;
        return Ok(Preset::Wall(Box::new(CaseConfig::from_toml(&text)?)));
    }
    Ok(cases::preset(case)?)
}

/// Runs one wall case; snapshots are stored every case time step.
pub fn execute(case: &CaseConfig, settings: &RunSettings) -> Result<RunOutcome, StudyError> {
    case.validate()?;
    let mut problem = case.problem();
    let sample = case.time.dt_star;
    match settings.method {
        Method::Mohl => {
            let mut options = case.solver.mohl_options();
            if let Some(tol) = settings.tol {
                let tol = validated_step("tol", tol)?;
                options.solver.rel_tol = tol;
                options.solver.abs_tol = tol;
            }
            if let Some(dt) = settings.dt {
                problem.dt = validated_step("dt", dt)?;
            }
            options.record_meshes = true;
            let start = Instant::now();
            let run = run_simulation(&problem, &options)?;
            let seconds = start.elapsed().as_secs_f64();
            Ok(RunOutcome {
                method: Method::Mohl,
                series: run.series,
                seconds,
                layers: run.stats,
                picard: Vec::new(),
                grid_nodes: 0,
                dt: problem.dt,
                dx: None,
                tol: Some(options.solver.rel_tol),
            })
        }
        Method::EulerImplicit => {
            let dx = validated_step("dx", settings.dx.unwrap_or(DEFAULT_REFERENCE_STEP))?;
            let dt = validated_step("dt", settings.dt.unwrap_or(DEFAULT_REFERENCE_STEP))?;
            let options = ReferenceOptions::new(GridConfig::new(dx, dt), sample);
            let start = Instant::now();
            let run = euler_implicit_run(&problem, &options)?;
            let seconds = start.elapsed().as_secs_f64();
            Ok(RunOutcome {
                method: Method::EulerImplicit,
                series: run.series,
                seconds,
                layers: Vec::new(),
                picard: run.iterations,
                grid_nodes: run.nodes,
                dt,
                dx: Some(dx),
                tol: None,
            })
        }
        Method::EulerExplicit => {
            let dx = validated_step("dx", settings.dx.unwrap_or(DEFAULT_REFERENCE_STEP))?;
            let dt = match settings.dt {
                Some(dt) => validated_step("dt", dt)?,
                None => {
                    // largest stable step that divides the sampling interval
                    let bound = admissible_time_step(&problem, dx)?;
                    sample / (sample / bound).ceil()
                }
            };
            let options = ExplicitOptions::new(ReferenceOptions::new(GridConfig::new(dx, dt), sample));
            let start = Instant::now();
            let run = euler_explicit_run(&problem, &options)?;
            let seconds = start.elapsed().as_secs_f64();
            Ok(RunOutcome {
                method: Method::EulerExplicit,
                series: run.series,
                seconds,
                layers: Vec::new(),
                picard: Vec::new(),
                grid_nodes: run.nodes,
                dt,
                dx: Some(dx),
                tol: None,
            })
        }
    }
}

/// Collocation solution of the interface benchmark against both closed forms.
#[derive(Debug, Clone)]
pub struct InterfaceOutcome {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub derivative_continuous: Vec<f64>,
    pub flux_continuous: Vec<f64>,
    pub max_error: f64,
    pub nodes: usize,
    pub seconds: f64,
}

pub fn interface_run(bench: &InterfaceBenchmark, tol: f64, points: usize) -> Result<InterfaceOutcome, StudyError> {
    let tol = validated_step("tol", tol)?;
    let start = Instant::now();
    let sol = bench.solve(tol, 11).map_err(|e| StudyError::Solver(e.to_string()))?;
    let seconds = start.elapsed().as_secs_f64();
    let n = points.max(2) - 1;
    let x: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
    let (u, _) = sol.solution.sample_component(0, &x).map_err(|e| StudyError::Solver(e.to_string()))?;
    let closed = |mode| -> Result<Vec<f64>, StudyError> {
        x.iter().map(|&x| Ok(bench.analytic(mode, x)?.0)).collect()
    };
    let derivative_continuous = closed(Continuity::Derivative)?;
    let flux_continuous = closed(Continuity::Flux)?;
    let max_error = u.iter().zip(&derivative_continuous).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(InterfaceOutcome {
        x,
        u,
        derivative_continuous,
        flux_continuous,
        max_error,
        nodes: sol.solution.mesh().len(),
        seconds,
    })
}

/// Ordered key/value record of a run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_owned(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Files listed under `outputs`, relative to the manifest directory.
    pub fn outputs(&self) -> Vec<String> {
        self.get("outputs").map(|s| s.split(';').filter(|p| !p.is_empty()).map(str::to_owned).collect()).unwrap_or_default()
    }

    pub fn write(&self, path: &Path) -> Result<(), StudyError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| StudyError::Io(e.to_string()))?;
        w.write_record(["key", "value"]).map_err(|e| StudyError::Io(e.to_string()))?;
        for (k, v) in &self.entries {
            w.write_record([k, v]).map_err(|e| StudyError::Io(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, StudyError> {
        let mut r = csv::Reader::from_path(path).map_err(|e| StudyError::Io(format!("{}: {e}", path.display())))?;
        let mut m = Self::default();
        for rec in r.records() {
            let rec = rec.map_err(|e| StudyError::Config(format!("manifest: {e}")))?;
            m.entries.push((rec.get(0).unwrap_or("").to_owned(), rec.get(1).unwrap_or("").to_owned()));
        }
        Ok(m)
    }
}

pub fn host_fingerprint() -> String {
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    format!("{}-{} {} threads", std::env::consts::OS, std::env::consts::ARCH, threads)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt(m: &Manifest, key: &str) -> Result<Option<f64>, StudyError> {
    match m.get(key) {
        None | Some("") => Ok(None),
        Some(s) => s.parse().map(Some).map_err(|_| StudyError::Config(format!("manifest {key} = {s:?}"))),
    }
}

pub const CASE_FILE: &str = "case.toml";
pub const MANIFEST_FILE: &str = "manifest.csv";

/// Writes fields, surface fluxes, per-layer statistics, the case and the manifest into `dir`.
pub fn write_run(case: &CaseConfig, settings: &RunSettings, out: &RunOutcome, dir: &Path) -> Result<Manifest, StudyError> {
    fs::create_dir_all(dir)?;
    let mut outputs = vec![CASE_FILE.to_owned()];
    fs::write(dir.join(CASE_FILE), case.to_toml()?)?;

    export::export_csv(&out.series, &dir.join("fields.csv"))?;
    outputs.push("fields.csv".into());
    let fluxes = postprocess::boundary_fluxes(&out.series, &case.model, 0.0)?;
    export::to_file(&dir.join("fluxes.csv"), |f| export::write_fluxes(&fluxes, f))?;
    outputs.push("fluxes.csv".into());
    if !out.layers.is_empty() {
        write_layer_stats(&out.layers, &dir.join("mesh.csv"))?;
        outputs.push("mesh.csv".into());
    }
    if !out.picard.is_empty() {
        write_picard(&out.picard, out.dt, &dir.join("iterations.csv"))?;
        outputs.push("iterations.csv".into());
    }

    let mut m = Manifest::default();
    m.set("command", "run");
    m.set("case", &case.name);
    m.set("case_file", CASE_FILE);
    m.set("method", settings.method);
    m.set("tol", opt(settings.tol));
    m.set("dt", opt(settings.dt));
    m.set("dx", opt(settings.dx));
    m.set("effective_dt", out.dt);
    m.set("effective_tol", opt(out.tol));
    m.set("effective_dx", opt(out.dx));
    m.set("wall_seconds", out.seconds);
    m.set("host", host_fingerprint());
    m.set("time_layers", out.series.snapshots.len());
    if !out.layers.is_empty() {
        m.set("newton_iterations", out.layers.iter().map(|s| s.v_newton + s.u_newton).sum::<usize>());
        m.set("max_v_nodes", out.max_v_nodes());
        m.set("max_u_nodes", out.max_u_nodes());
        m.set("mean_v_nodes", out.mean_v_nodes());
    }
    if !out.picard.is_empty() {
        m.set("picard_iterations", out.picard.iter().sum::<usize>());
        m.set("grid_nodes", out.grid_nodes);
    }
    if out.method == Method::EulerExplicit {
        m.set("grid_nodes", out.grid_nodes);
    }
    outputs.push(MANIFEST_FILE.into());
    m.set("outputs", outputs.join(";"));
    m.write(&dir.join(MANIFEST_FILE))?;
    Ok(m)
}

fn write_layer_stats(layers: &[LayerStats], path: &Path) -> Result<(), StudyError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| StudyError::Io(e.to_string()))?;
    let io = |e: csv::Error| StudyError::Io(e.to_string());
    w.write_record(["t_star", "order", "v_nodes", "u_nodes", "v_newton", "u_newton"]).map_err(io)?;
    for s in layers {
        w.serialize((s.t, s.order, s.v_nodes, s.u_nodes, s.v_newton, s.u_newton)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

fn write_picard(iterations: &[usize], dt: f64, path: &Path) -> Result<(), StudyError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| StudyError::Io(e.to_string()))?;
    let io = |e: csv::Error| StudyError::Io(e.to_string());
    w.write_record(["t_star", "picard_iterations"]).map_err(io)?;
    for (k, it) in iterations.iter().enumerate() {
        w.serialize(((k + 1) as f64 * dt, it)).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the interface benchmark profile and its manifest.
pub fn write_interface_run(bench: &InterfaceBenchmark, tol: f64, out: &InterfaceOutcome, dir: &Path) -> Result<Manifest, StudyError> {
    fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("interface.csv")).map_err(|e| StudyError::Io(e.to_string()))?;
    let io = |e: csv::Error| StudyError::Io(e.to_string());
    w.write_record(["x", "u", "u_derivative_continuous", "u_flux_continuous", "abs_error"]).map_err(io)?;
    for i in 0..out.x.len() {
        let err = (out.u[i] - out.derivative_continuous[i]).abs();
        w.serialize((out.x[i], out.u[i], out.derivative_continuous[i], out.flux_continuous[i], err)).map_err(io)?;
    }
    w.flush()?;
    let mut m = Manifest::default();
    m.set("command", "run");
    m.set("case", "appendix_c");
    m.set("method", Method::Mohl);
    m.set("tol", tol);
    m.set("k1", bench.k1);
    m.set("k2", bench.k2);
    m.set("c_a", bench.c_a());
    m.set("c_b", bench.c_b());
    m.set("max_abs_error", out.max_error);
    m.set("nodes", out.nodes);
    m.set("wall_seconds", out.seconds);
    m.set("host", host_fingerprint());
    m.set("outputs", format!("interface.csv;{MANIFEST_FILE}"));
    m.write(&dir.join(MANIFEST_FILE))?;
    Ok(m)
}

/// Reruns the case stored next to `manifest` with the recorded settings.
pub fn rerun(manifest: &Path, dir: &Path) -> Result<Manifest, StudyError> {
    let m = Manifest::read(manifest)?;
    let base = manifest.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let method: Method = m.get("method").ok_or_else(|| StudyError::Config("manifest lacks method".into()))?.parse()?;
    if m.get("case") == Some("appendix_c") {
        let k = |key| parse_opt(&m, key)?.ok_or_else(|| StudyError::Config(format!("manifest lacks {key}")));
        let bench = InterfaceBenchmark::new(k("k1")?, k("k2")?);
        let tol = k("tol")?;
        let out = interface_run(&bench, tol, 401)?;
        return write_interface_run(&bench, tol, &out, dir);
    }
    let case_file = base.join(m.get("case_file").unwrap_or(CASE_FILE));
    let text = fs::read_to_string(&case_file).map_err(|e| StudyError::Io(format!("{}: {e}", case_file.display())))?;
    let case = CaseConfig::from_toml(&text)?;
    let settings = RunSettings { method, tol: parse_opt(&m, "tol")?, dt: parse_opt(&m, "dt")?, dx: parse_opt(&m, "dx")? };
    let out = execute(&case, &settings)?;
    write_run(&case, &settings, &out, dir)
}

/// Error of `candidate` against `baseline` and their CPU-time ratio.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub report: ErrorReport,
    pub baseline: RunOutcome,
    pub candidate: RunOutcome,
}

impl Comparison {
    pub fn ratio(&self) -> f64 {
        self.candidate.seconds / self.baseline.seconds
    }
}

pub fn compare(case: &CaseConfig, baseline: &RunSettings, candidate: &RunSettings) -> Result<Comparison, StudyError> {
    let b = execute(case, baseline)?;
    let c = execute(case, candidate)?;
    let report = ErrorReport::compare(&c.series, &b.series)?;
    Ok(Comparison { report, baseline: b, candidate: c })
}

pub fn write_comparison(cmp: &Comparison, dir: &Path) -> Result<(), StudyError> {
    fs::create_dir_all(dir)?;
    export::to_file(&dir.join("errors.csv"), |f| export::write_errors(&cmp.report, f))?;
    let mut w = csv::Writer::from_path(dir.join("timing.csv")).map_err(|e| StudyError::Io(e.to_string()))?;
    let io = |e: csv::Error| StudyError::Io(e.to_string());
    w.write_record(["role", "method", "seconds", "ratio", "eps_inf_u", "eps_inf_v"]).map_err(io)?;
    let b = &cmp.baseline;
    w.serialize(("baseline", b.method.to_string(), b.seconds, 1.0, 0.0, 0.0)).map_err(io)?;
    let c = &cmp.candidate;
    w.serialize(("candidate", c.method.to_string(), c.seconds, cmp.ratio(), cmp.report.eps_inf_u, cmp.report.eps_inf_v))
        .map_err(io)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToleranceRow {
    pub tol: f64,
    pub eps_inf_u: f64,
    pub eps_inf_v: f64,
    pub max_v_nodes: usize,
    pub mean_v_nodes: f64,
    pub max_u_nodes: usize,
    pub seconds: f64,
    pub error: String,
}

/// Worker pool sized by [`THREADS_ENV`] when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, StudyError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var(THREADS_ENV) {
        let n: usize = s.parse().map_err(|_| StudyError::Config(format!("{THREADS_ENV} = {s:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| StudyError::Config(e.to_string()))
}

/// One MOHL run per tolerance against a shared oracle; failures are recorded
/// in their row and the sweep continues.
pub fn tolerance_study(case: &CaseConfig, tols: &[f64], oracle: &FieldSeries) -> Result<Vec<ToleranceRow>, StudyError> {
    if tols.is_empty() {
        return Err(StudyError::Config("empty tolerance list".into()));
    }
    let pool = thread_pool()?;
    Ok(pool.install(|| {
        tols.par_iter()
            .map(|&tol| {
                let row = execute(case, &RunSettings { method: Method::Mohl, tol: Some(tol), dt: None, dx: None })
                    .and_then(|out| Ok((ErrorReport::compare(&out.series, oracle)?, out)));
                match row {
                    Ok((r, out)) => ToleranceRow {
                        tol,
                        eps_inf_u: r.eps_inf_u,
                        eps_inf_v: r.eps_inf_v,
                        max_v_nodes: out.max_v_nodes(),
                        mean_v_nodes: out.mean_v_nodes(),
                        max_u_nodes: out.max_u_nodes(),
                        seconds: out.seconds,
                        error: String::new(),
                    },
                    Err(e) => ToleranceRow {
                        tol,
                        eps_inf_u: f64::NAN,
                        eps_inf_v: f64::NAN,
                        max_v_nodes: 0,
                        mean_v_nodes: f64::NAN,
                        max_u_nodes: 0,
                        seconds: f64::NAN,
                        error: e.to_string(),
                    },
                }
            })
            .collect()
    }))
}

pub fn write_tolerance_table(rows: &[ToleranceRow], path: &Path) -> Result<(), StudyError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| StudyError::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| StudyError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
