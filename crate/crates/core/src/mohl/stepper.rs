use crate::bvp::{solve_bvp, BvpSolution, CollocationSolution, Mesh, SolverOptions};
use crate::physics::{DimensionlessModel, Drivers, HeatBoundary, HeatSystem, MoistureBoundary, MoistureSystem};
use crate::series::{uniform_grid, FieldSeries, Snapshot};

use super::problem::{InitialFields, Problem, Profile};
use super::time::{Bdf, TimeGrid};
use super::{Field, MohlError};

/// Where each layer's solve starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuessMesh {
    /// The uniform starting mesh (plus interfaces), with values from the previous layer.
    Base,
    /// The previous layer's solution and mesh.
    #[default]
    Previous,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MohlOptions {
    pub solver: SolverOptions,
    pub initial_nodes: usize,
    pub output_points: usize,
    pub guess: GuessMesh,
    /// Keep the moisture mesh of every layer in the statistics.
    pub record_meshes: bool,
}

impl MohlOptions {
    pub fn with_tolerance(tol: f64, initial_nodes: usize) -> Self {
        Self {
            solver: SolverOptions::with_tolerance(tol),
            initial_nodes,
            output_points: 201,
            guess: GuessMesh::default(),
            record_meshes: false,
        }
    }
}

/// Current layer and the one before it.
#[derive(Debug, Clone)]
pub struct SimulationState {
    pub step: usize,
    pub t: f64,
    pub v: CollocationSolution,
    pub u: CollocationSolution,
    pub previous: Option<(CollocationSolution, CollocationSolution)>,
}

impl SimulationState {
    /// Hermite interpolant of the initial profiles on `mesh`.
    pub fn initial(initial: &InitialFields, mesh: Mesh) -> Result<Self, MohlError> {
        let field = |p: &Profile| {
            CollocationSolution::from_fn(mesh.clone(), 2, |x, v, d| {
                let (f, f1, f2) = p.eval(x);
                v.copy_from_slice(&[f, f1]);
                d.copy_from_slice(&[f1, f2]);
            })
        };
        Ok(Self { step: 0, t: 0.0, v: field(&initial.v)?, u: field(&initial.u)?, previous: None })
    }

    /// BDF order the next step will use.
    pub fn next_order(&self) -> usize {
        if self.previous.is_some() {
            2
        } else {
            1
        }
    }

    pub fn snapshot(&self, grid: &[f64]) -> Snapshot {
        let (v, theta) = sample(&self.v, grid);
        let (u, mu) = sample(&self.u, grid);
        Snapshot { t: self.t, v, theta, u, mu }
    }
}

fn sample(sol: &CollocationSolution, grid: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut value = [0.0; 2];
    let mut deriv = [0.0; 2];
    grid.iter()
        .map(|&x| {
            sol.evaluate_into(x, &mut value, &mut deriv).expect("grid inside [0, 1]");
            (value[0], value[1])
        })
        .unzip()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerStats {
    pub t: f64,
    pub order: usize,
    pub v_nodes: usize,
    pub u_nodes: usize,
    pub v_newton: usize,
    pub u_newton: usize,
    pub v_mesh: Vec<f64>,
}

fn guess_for(previous: &CollocationSolution, options: &MohlOptions, pinned: &[f64]) -> Result<CollocationSolution, MohlError> {
    match options.guess {
        GuessMesh::Previous => Ok(previous.clone()),
        GuessMesh::Base => {
            let mesh = Mesh::uniform_with_pinned(0.0, 1.0, options.initial_nodes, pinned)?;
            let mut value = [0.0; 2];
            let mut deriv = [0.0; 2];
            Ok(CollocationSolution::from_fn(mesh, 2, |x, v, d| {
                previous.evaluate_into(x, &mut value, &mut deriv).expect("inside [0, 1]");
                v.copy_from_slice(&value);
                d.copy_from_slice(&deriv);
            })?)
        }
    }
}

/// One time layer: the moisture problem first, then heat with that moisture solution frozen.
pub fn advance_step(
    state: &SimulationState,
    model: &DimensionlessModel,
    drivers: &Drivers,
    options: &MohlOptions,
    dt: f64,
) -> Result<(SimulationState, LayerStats), MohlError> {
    let order = state.next_order();
    let t = state.t + dt;
    let step = state.step + 1;
    let pinned = model.interfaces();
    let solver = SolverOptions { pinned: pinned.clone(), ..options.solver.clone() };
    let wrap = |field: Field| move |source| MohlError::Solver { step, t, field, source };

    let v_history: Vec<&CollocationSolution> =
        std::iter::once(&state.v).chain(state.previous.as_ref().map(|p| &p.0)).collect();
    let u_history: Vec<&CollocationSolution> =
        std::iter::once(&state.u).chain(state.previous.as_ref().map(|p| &p.1)).collect();

    let vt = Bdf::new(order, dt, &v_history, 0)?;
    let moisture = MoistureSystem::new(model, vt);
    let moisture_bc = MoistureBoundary::new(model, drivers, t);
    let v_guess = guess_for(&state.v, options, &pinned)?;
    let BvpSolution { solution: v, stats: v_stats, .. } =
        solve_bvp(&moisture, &moisture_bc, &v_guess, &solver).map_err(wrap(Field::Moisture))?;

    let ut = Bdf::new(order, dt, &u_history, 0)?;
    let heat = HeatSystem::new(moisture, &v, ut);
    let heat_bc = HeatBoundary::from_solution(model, drivers, t, &v);
    let u_guess = guess_for(&state.u, options, &pinned)?;
    let BvpSolution { solution: u, stats: u_stats, .. } =
        solve_bvp(&heat, &heat_bc, &u_guess, &solver).map_err(wrap(Field::Heat))?;

    let stats = LayerStats {
        t,
        order,
        v_nodes: v.mesh().len(),
        u_nodes: u.mesh().len(),
        v_newton: v_stats.newton_iterations,
        u_newton: u_stats.newton_iterations,
        v_mesh: if options.record_meshes { v.mesh().nodes().to_vec() } else { Vec::new() },
    };
    let next = SimulationState { step, t, v, u, previous: Some((state.v.clone(), state.u.clone())) };
    Ok((next, stats))
}

#[derive(Debug, Clone, Default)]
pub struct Run {
    pub series: FieldSeries,
    pub stats: Vec<LayerStats>,
}

impl Run {
    pub fn max_v_nodes(&self) -> usize {
        self.stats.iter().map(|s| s.v_nodes).max().unwrap_or(0)
    }

    pub fn max_u_nodes(&self) -> usize {
        self.stats.iter().map(|s| s.u_nodes).max().unwrap_or(0)
    }
}

/// A run that stopped early, with everything computed before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{error}")]
pub struct RunFailure {
    pub partial: Run,
    #[source]
    pub error: MohlError,
}

pub fn run_simulation(problem: &Problem, options: &MohlOptions) -> Result<Run, RunFailure> {
    run_simulation_with(problem, options, |_, _| {})
}

/// As [`run_simulation`], calling `observe` after every completed layer.
pub fn run_simulation_with<F>(problem: &Problem, options: &MohlOptions, mut observe: F) -> Result<Run, RunFailure>
where
    F: FnMut(&SimulationState, &LayerStats),
{
    let fail = |partial: Run, error: MohlError| RunFailure { partial, error };
    let grid = uniform_grid(options.output_points);
    let mut run = Run { series: FieldSeries::new(grid.clone()), stats: Vec::new() };
    let setup = (|| {
        problem.model.validate()?;
        options.solver.validate()?;
        let time = TimeGrid::new(problem.dt, problem.tau)?;
        let mesh = Mesh::uniform_with_pinned(0.0, 1.0, options.initial_nodes, &problem.model.interfaces())?;
        Ok::<_, MohlError>((time, SimulationState::initial(&problem.initial, mesh)?))
    })();
    let (time, mut state) = match setup {
        Ok(s) => s,
        Err(e) => return Err(fail(run, e)),
    };
    run.series.snapshots.push(state.snapshot(&grid));
    for _ in 0..time.steps() {
        match advance_step(&state, &problem.model, &problem.drivers, options, time.dt()) {
            Ok((next, stats)) => {
                state = next;
                // keep the layer time on the grid rather than accumulating round-off
                state.t = time.time(state.step);
                observe(&state, &stats);
                run.series.snapshots.push(state.snapshot(&grid));
                run.stats.push(stats);
            }
            Err(e) => return Err(fail(run, e)),
        }
    }
    Ok(run)
}
