use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mohl::cases::Preset;
use mohl::reference::{euler_implicit_run, GridConfig, ReferenceOptions};
use mohl::study::{self, Manifest, Method, RunSettings, StudyError, MANIFEST_FILE};

#[derive(Parser)]
#[command(name = "mohl", version, about = "Heat and moisture transfer in walls by the method of horizontal lines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a case and write fields, fluxes and a manifest.
    Run {
        /// Preset name (single_layer, multilayer, experimental, appendix_c) or a TOML case file.
        case: String,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        io: CaseIo,
    },
    /// Error of a candidate run against a baseline, with CPU-time ratios.
    Compare {
        case: String,
        /// Baseline method.
        #[arg(long, default_value = "euler-implicit")]
        baseline: Method,
        #[arg(long)]
        baseline_tol: Option<f64>,
        #[arg(long)]
        baseline_dt: Option<f64>,
        #[arg(long)]
        baseline_dx: Option<f64>,
        /// Candidate settings.
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        io: CaseIo,
    },
    /// MOHL runs over a list of tolerances against an implicit oracle.
    ToleranceStudy {
        case: String,
        /// Comma-separated tolerances.
        #[arg(long, value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])]
        tols: Vec<f64>,
        #[arg(long, default_value_t = 1e-3)]
        oracle_dx: f64,
        #[arg(long, default_value_t = 1e-3)]
        oracle_dt: f64,
        #[command(flatten)]
        io: CaseIo,
    },
    /// Repeat the run recorded in a manifest.
    Rerun {
        manifest: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Case configuration utilities.
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Print a case as TOML, or write it with --out.
    Export {
        case: String,
        #[arg(long)]
        sensors: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "mohl")]
    method: Method,
    /// MOHL tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Dimensionless time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Dimensionless grid step of the reference solvers.
    #[arg(long)]
    dx: Option<f64>,
}

impl SolverArgs {
    fn settings(&self) -> RunSettings {
        RunSettings { method: self.method, tol: self.tol, dt: self.dt, dx: self.dx }
    }
}

#[derive(Args)]
struct CaseIo {
    /// Sensor CSV for the experimental case.
    #[arg(long)]
    sensors: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn wall(case: &str, sensors: Option<&Path>) -> Result<mohl::cases::CaseConfig, StudyError> {
    match study::resolve_case(case, sensors)? {
        Preset::Wall(c) => Ok(*c),
        Preset::Interface(_) => Err(StudyError::Config(format!("{case} is not a wall case"))),
    }
}

fn run(case: &str, solver: &SolverArgs, io: &CaseIo) -> Result<(), StudyError> {
    match study::resolve_case(case, io.sensors.as_deref())? {
        Preset::Interface(bench) => {
            if solver.method != Method::Mohl {
                return Err(StudyError::Config(format!("{case} only runs with --method mohl")));
            }
            let tol = solver.tol.unwrap_or(1e-8);
            let out = study::interface_run(&bench, tol, 401)?;
            study::write_interface_run(&bench, tol, &out, &io.out)?;
            println!("max |u - analytic| = {:e} on {} nodes", out.max_error, out.nodes);
        }
        Preset::Wall(c) => {
            let settings = solver.settings();
            let out = study::execute(&c, &settings)?;
            let m = study::write_run(&c, &settings, &out, &io.out)?;
            println!("{} on {}: {:.3} s, {} layers", settings.method, c.name, out.seconds, m.get("time_layers").unwrap_or("?"));
            if let Some(n) = m.get("max_v_nodes") {
                println!("max moisture mesh {n}");
            }
        }
    }
    println!("wrote {}", io.out.join(MANIFEST_FILE).display());
    Ok(())
}

fn compare(case: &str, baseline: RunSettings, candidate: RunSettings, out: &Path, sensors: Option<&Path>) -> Result<(), StudyError> {
    let c = wall(case, sensors)?;
    let cmp = study::compare(&c, &baseline, &candidate)?;
    study::write_comparison(&cmp, out)?;
    let mut m = Manifest::default();
    m.set("command", "compare");
    m.set("case", &c.name);
    m.set("baseline_method", baseline.method);
    m.set("candidate_method", candidate.method);
    m.set("baseline_seconds", cmp.baseline.seconds);
    m.set("candidate_seconds", cmp.candidate.seconds);
    m.set("ratio", cmp.ratio());
    m.set("eps_inf_u", cmp.report.eps_inf_u);
    m.set("eps_inf_v", cmp.report.eps_inf_v);
    m.set("host", study::host_fingerprint());
    m.set("outputs", format!("errors.csv;timing.csv;{MANIFEST_FILE}"));
    m.write(&out.join(MANIFEST_FILE))?;
    println!(
        "eps_inf_u = {:e}, eps_inf_v = {:e}, time ratio {:.3}",
        cmp.report.eps_inf_u,
        cmp.report.eps_inf_v,
        cmp.ratio()
    );
    Ok(())
}

fn tolerance_study(case: &str, tols: &[f64], dx: f64, dt: f64, io: &CaseIo) -> Result<(), StudyError> {
    let c = wall(case, io.sensors.as_deref())?;
    c.validate()?;
    let options = ReferenceOptions::new(GridConfig::new(dx, dt), c.time.dt_star);
    let oracle = euler_implicit_run(&c.problem(), &options)?;
    let rows = study::tolerance_study(&c, tols, &oracle.series)?;
    fs::create_dir_all(&io.out)?;
    study::write_tolerance_table(&rows, &io.out.join("tolerance.csv"))?;
    let mut m = Manifest::default();
    m.set("command", "tolerance-study");
    m.set("case", &c.name);
    m.set("tols", tols.iter().map(f64::to_string).collect::<Vec<_>>().join(";"));
    m.set("oracle_dx", dx);
    m.set("oracle_dt", dt);
    m.set("failed_rows", rows.iter().filter(|r| !r.error.is_empty()).count());
    m.set("host", study::host_fingerprint());
    m.set("outputs", format!("tolerance.csv;{MANIFEST_FILE}"));
    m.write(&io.out.join(MANIFEST_FILE))?;
    for r in &rows {
        if r.error.is_empty() {
            println!("tol {:e}: eps_u {:e} eps_v {:e} mesh {}", r.tol, r.eps_inf_u, r.eps_inf_v, r.max_v_nodes);
        } else {
            println!("tol {:e}: failed: {}", r.tol, r.error);
        }
    }
    Ok(())
}

fn export(case: &str, sensors: Option<&Path>, out: Option<&Path>) -> Result<(), StudyError> {
    let text = wall(case, sensors)?.to_toml()?;
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), StudyError> {
    match cli.command {
        Command::Run { case, solver, io } => run(&case, &solver, &io),
        Command::Compare { case, baseline, baseline_tol, baseline_dt, baseline_dx, solver, io } => {
            let base = RunSettings { method: baseline, tol: baseline_tol, dt: baseline_dt, dx: baseline_dx };
            compare(&case, base, solver.settings(), &io.out, io.sensors.as_deref())
        }
        Command::ToleranceStudy { case, tols, oracle_dx, oracle_dt, io } => tolerance_study(&case, &tols, oracle_dx, oracle_dt, &io),
        Command::Rerun { manifest, out } => {
            study::rerun(&manifest, &out)?;
            println!("wrote {}", out.join(MANIFEST_FILE).display());
            Ok(())
        }
        Command::Config { action: ConfigAction::Export { case, sensors, out } } => export(&case, sensors.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
