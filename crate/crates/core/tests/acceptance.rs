mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use common::*;
use mohl::bvp::{solve_bvp, CollocationSolution, FnBoundary, FnSystem, Mesh, SolverOptions};
use mohl::cases::{self, CaseConfig, Continuity, InterfaceBenchmark};
use mohl::mohl::{run_simulation, MohlOptions};
use mohl::physics::library;
use mohl::postprocess::{
    inf_error, l2_error_profile, mass_budget, relative_error_series, total_uncertainty, Component, ErrorReport,
};
use mohl::series::FieldSeries;
use mohl::study::{execute, interface_run, tolerance_study, Method, RunOutcome, RunSettings};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle(case: &CaseConfig) -> Result<FieldSeries, String> {
    execute(case, &RunSettings::reference(Method::EulerImplicit, 1e-3, 1e-3))
        .map(|o| o.series)
        .map_err(|e| e.to_string())
}

fn mohl(case: &CaseConfig) -> Result<RunOutcome, String> {
    execute(case, &RunSettings::mohl(1e-5, 0.1)).map_err(|e| e.to_string())
}

fn interface_exactness() -> Verdict {
    let out = interface_run(&InterfaceBenchmark::new(1.0, 5.0), 1e-8, 401).map_err(|e| e.to_string())?;
    check(
        out.max_error <= 1e-6 && out.seconds < 1.0 && out.x.len() == 401,
        format!("max |u - u_B| = {:.2e} on {} nodes in {:.3} s", out.max_error, out.nodes, out.seconds),
    )
}

/// Max error of `u'' = -pi^2 sin(pi x)`, `u(0) = u(1) = 0` on a fixed uniform mesh.
fn fixed_mesh_error(intervals: usize) -> Result<f64, String> {
    let system = FnSystem::new(2, |x: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -PI * PI * (PI * x).sin();
    });
    let bc = FnBoundary::new(2, |ya: &[f64], yb: &[f64], r: &mut [f64]| {
        r[0] = ya[0];
        r[1] = yb[0];
    });
    let mesh = Mesh::uniform(0.0, 1.0, intervals + 1).map_err(|e| e.to_string())?;
    let guess = CollocationSolution::from_fn(mesh, 2, |_, v, d| {
        v.fill(0.0);
        d.fill(0.0);
    })
    .map_err(|e| e.to_string())?;
    let options = SolverOptions { adapt: false, ..SolverOptions::with_tolerance(1e-10) };
    let sol = solve_bvp(&system, &bc, &guess, &options).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (0..=2000).map(|i| i as f64 / 2000.0).collect();
    let (u, _) = sol.solution.sample_component(0, &xs).map_err(|e| e.to_string())?;
    Ok(xs.iter().zip(&u).map(|(&x, &y)| (y - (PI * x).sin()).abs()).fold(0.0, f64::max))
}

fn spatial_order() -> Verdict {
    let orders: Vec<f64> = [8, 16]
        .into_iter()
        .map(|n| Ok((fixed_mesh_error(n)? / fixed_mesh_error(2 * n)?).log2()))
        .collect::<Result<_, String>>()?;
    check(orders.iter().all(|p| (p - 4.0).abs() <= 0.3), format!("orders {:.3} (8/16), {:.3} (16/32)", orders[0], orders[1]))
}

fn temporal_order() -> Verdict {
    let options = MohlOptions::with_tolerance(1e-9, 201);
    let err = |dt: f64| -> Result<(f64, f64), String> {
        let run = run_simulation(&decaying_sine(0.1, dt, 1.0), &options).map_err(|e| e.to_string())?;
        Ok(final_error(&run.series, 0.1))
    };
    let (c, f) = (err(0.02)?, err(0.01)?);
    let (rv, ru) = (c.0 / f.0, c.1 / f.1);
    let ok = [rv, ru].iter().all(|r| (3.4..=4.6).contains(r));
    check(ok, format!("error ratio v {rv:.3}, u {ru:.3}"))
}

fn benchmark(label: &str, run: &RunOutcome, oracle: &FieldSeries, eps_u: f64, eps_v: f64) -> Result<(bool, String), String> {
    let r = ErrorReport::compare(&run.series, oracle).map_err(|e| e.to_string())?;
    let ok = r.eps_inf_u <= eps_u && r.eps_inf_v <= eps_v;
    Ok((ok, format!("{label}: eps_inf,u {:.2e}, eps_inf,v {:.2e}", r.eps_inf_u, r.eps_inf_v)))
}

fn single_layer_benchmark(run: &RunOutcome, oracle: &FieldSeries) -> Verdict {
    let (ok, detail) = benchmark("single layer", run, oracle, 5e-4, 5e-3)?;
    let nodes = run.max_v_nodes();
    check(ok && nodes <= 25, format!("{detail}, max moisture mesh {nodes} in {:.3} s", run.seconds))
}

fn tolerance_trend(case: &CaseConfig, oracle: &FieldSeries) -> Verdict {
    let tols = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let rows = tolerance_study(case, &tols, oracle).map_err(|e| e.to_string())?;
    if let Some(r) = rows.iter().find(|r| !r.error.is_empty()) {
        return Err(format!("tol {:e}: {}", r.tol, r.error));
    }
    let meshes: Vec<usize> = rows.iter().map(|r| r.max_v_nodes).collect();
    let monotone = meshes.windows(2).all(|w| w[0] <= w[1]);
    let last = rows.last().expect("six rows").eps_inf_u;
    check(monotone && last <= 1e-4, format!("max moisture meshes {meshes:?}, eps_inf,u at 1e-6 {last:.2e}"))
}

fn multilayer_benchmark(run: &RunOutcome, oracle: &FieldSeries, interface: f64) -> Verdict {
    let (ok, detail) = benchmark("multilayer", run, oracle, 5e-4, 2e-3)?;
    let dense = run
        .layers
        .iter()
        .filter(|s| {
            let near = s.v_mesh.iter().filter(|&&x| (x - interface).abs() <= 0.01).count() as f64 / 0.02;
            near > s.v_mesh.len() as f64
        })
        .count();
    let share = dense as f64 / run.layers.len() as f64;
    check(ok && share >= 0.8, format!("{detail}, interface denser than average at {:.1}% of layers", 100.0 * share))
}

fn timing(case: &CaseConfig, oracle: &FieldSeries, mohl: &RunOutcome) -> Verdict {
    let implicit = execute(case, &RunSettings::reference(Method::EulerImplicit, 1e-2, 1e-2)).map_err(|e| e.to_string())?;
    let acc = ErrorReport::compare(&implicit.series, oracle).map_err(|e| e.to_string())?;
    let acc_m = ErrorReport::compare(&mohl.series, oracle).map_err(|e| e.to_string())?;
    // cost per explicit step is constant; time a short window and scale by the step count
    let mut window = case.clone();
    window.time.tau_star = 1.0;
    let settings = RunSettings { dx: Some(1e-2), ..RunSettings::new(Method::EulerExplicit) };
    let short = execute(&window, &settings).map_err(|e| e.to_string())?;
    let explicit = short.seconds * case.time.tau_star / window.time.tau_star;
    let (rm, re) = (mohl.seconds / implicit.seconds, explicit / implicit.seconds);
    check(
        rm <= 0.7 && re >= 10.0,
        format!(
            "mohl {:.3} s ({rm:.2}x), implicit {:.3} s, explicit {explicit:.1} s projected ({re:.0}x); eps_inf,u mohl {:.1e} implicit {:.1e}",
            mohl.seconds, implicit.seconds, acc_m.eps_inf_u, acc.eps_inf_u
        ),
    )
}

fn stability() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for dt in [0.1, 1.0, 10.0] {
        let run = run_simulation(&decaying_sine(1.0, dt, 20.0 * dt), &tight(1e-6)).map_err(|e| e.to_string())?;
        let mut excursion: f64 = 0.0;
        for s in &run.series.snapshots {
            for (vals, a) in [(&s.v, AMPLITUDE_V), (&s.u, AMPLITUDE_U)] {
                for &y in vals.iter() {
                    let out = (1.0 - y).max(y - 1.0 - a).max(0.0) / a;
                    excursion = excursion.max(out);
                }
            }
        }
        ok &= excursion <= 0.03 && run.series.snapshots.iter().all(|s| s.v.iter().chain(&s.u).all(|x| x.is_finite()));
        detail.push(format!("dt {dt}: {:.2}%", 100.0 * excursion));
    }
    check(ok, format!("excursion beyond data range {}", detail.join(", ")))
}

fn budget(case: &CaseConfig, run: &RunOutcome) -> Verdict {
    let b = mass_budget(&run.series, &case.model, &case.drivers);
    check(b.closure <= 0.01, format!("closure {:.3}%", 100.0 * b.closure))
}

/// Relative error recomputed directly: exact snapshot time, linear interpolation in space.
fn brute_force_epsilon(num: &FieldSeries, x: f64, t: &[f64], meas: &[f64], field: Component) -> Vec<f64> {
    let i = num.grid.partition_point(|&g| g <= x).clamp(1, num.grid.len() - 1);
    let (x0, x1) = (num.grid[i - 1], num.grid[i]);
    t.iter()
        .zip(meas)
        .map(|(&t, &y)| {
            let s = num.snapshots.iter().find(|s| (s.t - t).abs() <= 1e-9 * t.abs().max(1.0)).expect("layer");
            let f = if field == Component::U { &s.u } else { &s.v };
            let w = (x - x0) / (x1 - x0);
            let sim = f[i - 1] + w * (f[i] - f[i - 1]);
            ((sim - y) * (sim - y)).sqrt() / y
        })
        .collect()
}

fn sensor_pipeline() -> Verdict {
    let refs = library::wood_fibre_references();
    let hours: Vec<f64> = (0..=336).map(f64::from).collect();
    let data = cases::synthetic_sensor_data(&hours, &cases::wood_fibre_initial(), &refs).map_err(|e| e.to_string())?;
    let mut csv = Vec::new();
    data.write_csv(&mut csv).map_err(|e| e.to_string())?;
    let parsed = cases::parse_sensor_csv(csv.as_slice()).map_err(|e| e.to_string())?;
    let case = cases::experimental(&parsed).map_err(|e| e.to_string())?;
    let run = execute(&case, &RunSettings::new(Method::Mohl)).map_err(|e| e.to_string())?;
    let end = run.series.last().map_or(0.0, |s| s.t);
    let probes = parsed.references(&refs).map_err(|e| e.to_string())?;
    let mut exact = true;
    for field in [Component::U, Component::V] {
        let errs = relative_error_series(&run.series, &probes, field).map_err(|e| e.to_string())?;
        for (e, p) in errs.iter().zip(&probes) {
            let meas = if field == Component::U { &p.u } else { &p.v };
            exact &= e.epsilon == brute_force_epsilon(&run.series, p.x_star, &p.t_star, meas, field);
        }
    }
    for (a, b) in [(0.3, 0.18), (0.5, 1.2), (2.0, 0.0)] {
        exact &= total_uncertainty(a, b) == (a * a + b * b).sqrt();
    }
    check(
        exact && (end - 336.0).abs() < 1e-9,
        format!("bit-for-bit {exact}, wood-fibre run reached t* = {end} in {:.2} s", run.seconds),
    )
}

fn property_suites() -> Verdict {
    let mut runner = TestRunner::new(Config { cases: 128, failure_persistence: None, ..Config::default() });
    let mut passed = Vec::new();
    let mut run = |name: &'static str, r: Result<(), String>| -> Result<(), String> {
        r.map_err(|e| format!("{name}: {e}"))?;
        passed.push(name);
        Ok(())
    };

    let c1 = runner.run(&(3usize..20, prop::collection::vec(-3.0f64..3.0, 40)), |(n, seed)| {
        let mesh = Mesh::uniform(0.0, 1.0, n).unwrap();
        let sol = CollocationSolution::from_nodal(mesh, 1, seed[..n].to_vec(), seed[n..2 * n].to_vec()).unwrap();
        for i in 1..n - 1 {
            let x = sol.mesh().nodes()[i];
            let (l, r) = (sol.evaluate_on_interval(i - 1, x), sol.evaluate_on_interval(i, x));
            prop_assert!((l.0[0] - r.0[0]).abs() <= 1e-12 && (l.1[0] - r.1[0]).abs() <= 1e-9);
        }
        Ok(())
    });
    run("C1 continuity", c1.map_err(|e| e.to_string()))?;

    let closures = [library::load_bearing_closure(), library::multilayer_bearing_closure(), library::finishing_closure(), library::wood_fibre_closure()];
    let fd = runner.run(&(0usize..4, 0.4f64..1.5), |(k, v)| {
        for (name, c) in closures[k].named() {
            let h = 1e-5;
            let diff = (c.value(v + h) - c.value(v - h)) / (2.0 * h);
            let d = c.derivative(v);
            prop_assert!((diff - d).abs() <= 1e-6 * d.abs().max(c.value(v).abs()).max(1e-3), "{} at {}", name, v);
        }
        Ok(())
    });
    run("closure derivative vs differences", fd.map_err(|e| e.to_string()))?;

    let model = library::multilayer_model();
    let interface = model.interfaces()[0];
    let lookup = runner.run(&(0.0f64..=1.0), |x| {
        let expected = usize::from(x >= interface);
        prop_assert_eq!(model.layer_index(x).unwrap(), expected);
        Ok(())
    });
    let edges = model.layer_index(interface).ok() == Some(1) && model.layer_index(1.0).ok() == Some(1) && model.layer_index(0.0).ok() == Some(0);
    run("half-open layer lookup", lookup.map_err(|e| e.to_string()).and_then(|_| check(edges, "edge nodes".into()).map(|_| ())))?;

    let norms = runner.run(&prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 10), 2..6), |rows| {
        let series = |shift: f64| FieldSeries {
            grid: mohl::series::uniform_grid(5),
            snapshots: rows
                .iter()
                .enumerate()
                .map(|(k, r)| mohl::series::Snapshot {
                    t: k as f64,
                    v: r[..5].iter().map(|x| x + shift).collect(),
                    theta: vec![0.0; 5],
                    u: r[5..].iter().map(|x| x * shift).collect(),
                    mu: vec![0.0; 5],
                })
                .collect(),
        };
        let (a, b) = (series(0.0), series(0.5));
        let r = ErrorReport::compare(&a, &b).unwrap();
        prop_assert_eq!(r.eps_inf_u, inf_error(&l2_error_profile(&a, &b, Component::U).unwrap()));
        prop_assert_eq!(r.eps_inf_v, r.eps2_v.iter().cloned().fold(0.0, f64::max));
        Ok(())
    });
    run("eps_inf is the max of eps_2", norms.map_err(|e| e.to_string()))?;

    let constants = runner.run(&(0.05f64..20.0, 0.05f64..20.0), |(k1, k2)| {
        let b = InterfaceBenchmark::new(k1, k2);
        prop_assert!((b.c_a() * (k1 + k2) - (k2 - k1)).abs() <= 1e-12 * (k1 + k2));
        prop_assert!((b.c_b() * 2.0 * PI * k1 * k2 - (k1 - k2)).abs() <= 1e-11 * (1.0 + k1 * k2));
        let (_, d_left) = b.analytic(Continuity::Derivative, -1e-300).unwrap();
        let (_, d_right) = b.analytic(Continuity::Derivative, 0.0).unwrap();
        prop_assert!((d_left - d_right).abs() <= 1e-12 * d_left.abs().max(1.0));
        let (_, f_left) = b.analytic(Continuity::Flux, -1e-300).unwrap();
        let (_, f_right) = b.analytic(Continuity::Flux, 0.0).unwrap();
        prop_assert!((k1 * f_left - k2 * f_right).abs() <= 1e-12 * (k1 + k2) * f_left.abs().max(1.0));
        Ok(())
    });
    run("C_A / C_B identities", constants.map_err(|e| e.to_string()))?;

    Ok(passed.join(", "))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let single = cases::single_layer();
    let multi = cases::multilayer();
    let single_oracle = {
        let case = single.clone();
        thread::spawn(move || oracle(&case))
    };
    let multi_oracle = {
        let case = multi.clone();
        thread::spawn(move || oracle(&case))
    };

    let mut results: Vec<(usize, &str, Verdict)> = vec![
        (2, "spatial order of fixed-mesh collocation", spatial_order()),
        (3, "temporal order of BDF2", temporal_order()),
        (8, "stability at large steps", stability()),
        (10, "sensor pipeline and wood-fibre run", sensor_pipeline()),
        (11, "property suites", property_suites()),
    ];

    let single_oracle = single_oracle.join().expect("oracle thread");
    let multi_oracle = multi_oracle.join().expect("oracle thread");
    // timed criteria run after the oracle threads have finished
    results.push((1, "interface benchmark", interface_exactness()));
    let single_run = mohl(&single);
    let multi_run = mohl(&multi);
    let with = |run: &Result<RunOutcome, String>, oracle: &Result<FieldSeries, String>, f: &dyn Fn(&RunOutcome, &FieldSeries) -> Verdict| {
        match (run, oracle) {
            (Ok(r), Ok(o)) => f(r, o),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        }
    };
    results.push((4, "single-layer benchmark", with(&single_run, &single_oracle, &single_layer_benchmark)));
    results.push((5, "tolerance-study trend", single_oracle.as_ref().map_err(Clone::clone).and_then(|o| tolerance_trend(&single, o))));
    let interface = multi.model.interfaces()[0];
    results.push((6, "multilayer benchmark", with(&multi_run, &multi_oracle, &|r, o| multilayer_benchmark(r, o, interface))));
    results.push((7, "timing ordering", with(&single_run, &single_oracle, &|r, o| timing(&single, o, r))));
    results.push((9, "single-layer moisture budget", single_run.as_ref().map_err(Clone::clone).and_then(|r| budget(&single, r))));

    results.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (n, name, verdict) in &results {
        match verdict {
            Ok(d) => println!("criterion {n:>2} PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed in {:.1} s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
