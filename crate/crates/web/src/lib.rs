//! wasm-bindgen bindings for the static page in `www/`.

use mohl::bvp::Mesh;
use mohl::cases::{self, CaseConfig, Continuity, InterfaceBenchmark, Preset};
use mohl::mohl::{advance_step, MohlOptions, Problem, SimulationState};
use mohl::series::uniform_grid;
use wasm_bindgen::prelude::*;

/// Collocation solution of the two-material benchmark next to both closed forms.
#[wasm_bindgen]
pub struct InterfaceProfile {
    x: Vec<f64>,
    u: Vec<f64>,
    derivative_continuous: Vec<f64>,
    flux_continuous: Vec<f64>,
    nodes: Vec<f64>,
}

#[wasm_bindgen]
impl InterfaceProfile {
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    pub fn derivative_continuous(&self) -> Vec<f64> {
        self.derivative_continuous.clone()
    }

    pub fn flux_continuous(&self) -> Vec<f64> {
        self.flux_continuous.clone()
    }

    /// Final adapted mesh.
    pub fn nodes(&self) -> Vec<f64> {
        self.nodes.clone()
    }

    pub fn max_error(&self) -> f64 {
        self.u.iter().zip(&self.derivative_continuous).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

#[wasm_bindgen]
pub fn solve_interface(k1: f64, k2: f64, tol: f64, points: usize) -> Result<InterfaceProfile, String> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err("diffusivities must be positive".into());
    }
    let bench = InterfaceBenchmark::new(k1, k2);
    let sol = bench.solve(tol, 11).map_err(|e| e.to_string())?;
    let n = points.max(2) - 1;
    let x: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
    let (u, _) = sol.solution.sample_component(0, &x).map_err(|e| e.to_string())?;
    let closed = |mode| x.iter().map(|&x| bench.analytic(mode, x).map(|p| p.0)).collect::<Result<Vec<_>, _>>();
    Ok(InterfaceProfile {
        derivative_continuous: closed(Continuity::Derivative).map_err(|e| e.to_string())?,
        flux_continuous: closed(Continuity::Flux).map_err(|e| e.to_string())?,
        nodes: sol.solution.mesh().nodes().to_vec(),
        x,
        u,
    })
}

fn wall(preset: &str) -> Result<CaseConfig, String> {
    match cases::preset(preset).map_err(|e| e.to_string())? {
        Preset::Wall(c) => Ok(*c),
        Preset::Interface(_) => Err(format!("{preset} is not a wall case")),
    }
}

/// Layer-by-layer MOHL run of a wall preset.
#[wasm_bindgen]
pub struct Simulation {
    problem: Problem,
    options: MohlOptions,
    state: SimulationState,
    grid: Vec<f64>,
    mesh: Vec<f64>,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(preset: &str, tol: f64) -> Result<Simulation, String> {
        let case = wall(preset)?;
        let problem = case.problem();
        let mut options = case.solver.mohl_options();
        options.solver.rel_tol = tol;
        options.solver.abs_tol = tol;
        options.solver.validate().map_err(|e| e.to_string())?;
        let mesh = Mesh::uniform_with_pinned(0.0, 1.0, options.initial_nodes, &problem.model.interfaces())
            .map_err(|e| e.to_string())?;
        let state = SimulationState::initial(&problem.initial, mesh).map_err(|e| e.to_string())?;
        let grid = uniform_grid(options.output_points);
        let mesh = state.v.mesh().nodes().to_vec();
        Ok(Simulation { problem, options, state, grid, mesh })
    }

    /// Advances `layers` time layers, stopping at the final time.
    pub fn step(&mut self, layers: usize) -> Result<(), String> {
        for _ in 0..layers {
            if self.finished() {
                break;
            }
            let (next, stats) = advance_step(&self.state, &self.problem.model, &self.problem.drivers, &self.options, self.problem.dt)
                .map_err(|e| e.to_string())?;
            self.state = next;
            self.mesh = self.state.v.mesh().nodes().to_vec();
            debug_assert_eq!(stats.v_nodes, self.mesh.len());
        }
        Ok(())
    }

    pub fn finished(&self) -> bool {
        self.state.t >= self.problem.tau - 0.5 * self.problem.dt
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn final_time(&self) -> f64 {
        self.problem.tau
    }

    pub fn x(&self) -> Vec<f64> {
        self.grid.clone()
    }

    pub fn v(&self) -> Vec<f64> {
        self.state.snapshot(&self.grid).v
    }

    pub fn u(&self) -> Vec<f64> {
        self.state.snapshot(&self.grid).u
    }

    /// Moisture mesh of the current layer.
    pub fn mesh(&self) -> Vec<f64> {
        self.mesh.clone()
    }

    pub fn interfaces(&self) -> Vec<f64> {
        self.problem.model.interfaces()
    }
}

/// Dimensionless capacities and conductivities of one material against `v`.
#[wasm_bindgen]
pub struct ClosureCurves {
    v: Vec<f64>,
    c_m: Vec<f64>,
    k_m: Vec<f64>,
    c_t: Vec<f64>,
    k_t: Vec<f64>,
}

#[wasm_bindgen]
impl ClosureCurves {
    pub fn v(&self) -> Vec<f64> {
        self.v.clone()
    }

    pub fn c_m(&self) -> Vec<f64> {
        self.c_m.clone()
    }

    pub fn k_m(&self) -> Vec<f64> {
        self.k_m.clone()
    }

    pub fn c_t(&self) -> Vec<f64> {
        self.c_t.clone()
    }

    pub fn k_t(&self) -> Vec<f64> {
        self.k_t.clone()
    }
}

#[wasm_bindgen]
pub fn closure_curves(preset: &str, layer: usize, v_lo: f64, v_hi: f64, points: usize) -> Result<ClosureCurves, String> {
    let case = wall(preset)?;
    let c = &case
        .model
        .layers
        .get(layer)
        .ok_or_else(|| format!("{preset} has {} layers", case.model.layers.len()))?
        .closure;
    if !(v_hi > v_lo) || points < 2 {
        return Err("need v_lo < v_hi and at least two points".into());
    }
    let v: Vec<f64> = (0..points).map(|i| v_lo + (v_hi - v_lo) * i as f64 / (points - 1) as f64).collect();
    let eval = |f: &mohl::physics::ScalarClosure| v.iter().map(|&s| f.value(s)).collect();
    Ok(ClosureCurves { c_m: eval(&c.c_m), k_m: eval(&c.k_m), c_t: eval(&c.c_t), k_t: eval(&c.k_t), v })
}

#[wasm_bindgen]
pub fn layer_count(preset: &str) -> Result<usize, String> {
    Ok(wall(preset)?.model.layers.len())
}
