//! Discretized mechanical Lagrangians on the torus.
//!
//! Phase space is a periodic position grid times a truncated velocity grid
//! (optionally times a cyclic set of time slices). Holonomic measures are cut
//! out by one-step transfer constraints: pushing each cell forward by
//! `x -> x + v dt` with bilinear mass splitting must preserve every base
//! indicator. Diracs at `v = 0` are exactly feasible and occupation measures
//! of closed curves are feasible up to `O(dt)`, so action minimization over
//! the polytope is the discrete counterpart of minimizing measures.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export;
use crate::lp::{self, Constraint, LpError, OptimalFace};
use crate::measure::{
    BasePoint, DiscreteMeasure, MeasurePolytope, PhasePoint, Potential, StateSpace,
};

/// Cohomology class acting on costs through `L - c . v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyClass(pub Vec<f64>);

impl CohomologyClass {
    pub fn zero(dim: usize) -> Self {
        CohomologyClass(vec![0.0; dim])
    }
}

#[derive(Debug, Clone, Error)]
pub enum TonelliError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("velocity {velocity:.6} exceeds the truncation bound {bound:.6}")]
    VelocityTruncation { velocity: f64, bound: f64 },
    #[error("curve is not compatible with the grid: {0}")]
    BadCurve(String),
    #[error("lagrangian is not fiberwise convex near x-cell {x_cell} (second difference {value:.3e})")]
    NotFiberwiseConvex { x_cell: usize, value: f64 },
    #[error("potential samples have length {got}, grid has {expected} cells")]
    PotentialLength { expected: usize, got: usize },
    #[error("cohomology class has dimension {got}, torus has dimension {expected}")]
    CohomologyDim { expected: usize, got: usize },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Truncated phase grid: positions on `[0,1)^dim` with periodic wrap,
/// velocities on `[-v_max, v_max)` (zero is a node when `n_v` is even),
/// and `n_t` cyclic time slices of step `dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub dim: usize,
    pub n_x: usize,
    pub n_v: usize,
    pub v_max: f64,
    pub n_t: usize,
    pub dt: f64,
}

impl PhaseGrid {
    /// Autonomous grid (a single time slice).
    pub fn autonomous(dim: usize, n_x: usize, n_v: usize, v_max: f64, dt: f64) -> Result<Self, TonelliError> {
        let g = PhaseGrid { dim, n_x, n_v, v_max, n_t: 1, dt };
        g.validate()?;
        Ok(g)
    }

    /// Time-periodic grid; the slice step is `1 / n_t`.
    pub fn time_periodic(dim: usize, n_x: usize, n_v: usize, v_max: f64, n_t: usize) -> Result<Self, TonelliError> {
        let g = PhaseGrid { dim, n_x, n_v, v_max, n_t, dt: 1.0 / n_t as f64 };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), TonelliError> {
        if self.dim == 0 {
            return Err(TonelliError::InvalidGrid("dimension must be >= 1".into()));
        }
        if self.n_x == 0 || self.n_v == 0 || self.n_t == 0 {
            return Err(TonelliError::InvalidGrid("grid counts must be positive".into()));
        }
        if !(self.v_max > 0.0) || !(self.dt > 0.0) {
            return Err(TonelliError::InvalidGrid("v_max and dt must be positive".into()));
        }
        if self.n_t > 1 && (self.dt * self.n_t as f64 - 1.0).abs() > 1e-9 {
            return Err(TonelliError::InvalidGrid(
                "time-periodic grids need dt = 1 / n_t".into(),
            ));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        1.0 / self.n_x as f64
    }

    pub fn dv(&self) -> f64 {
        2.0 * self.v_max / self.n_v as f64
    }

    pub fn x_cells(&self) -> usize {
        self.n_x.pow(self.dim as u32)
    }

    pub fn v_cells(&self) -> usize {
        self.n_v.pow(self.dim as u32)
    }

    pub fn base_count(&self) -> usize {
        self.n_t * self.x_cells()
    }

    pub fn phase_count(&self) -> usize {
        self.base_count() * self.v_cells()
    }

    pub fn x_coord(&self, x_flat: usize) -> Vec<f64> {
        let mut rem = x_flat;
        let mut out = vec![0.0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = (rem % self.n_x) as f64 * self.hx();
            rem /= self.n_x;
        }
        out
    }

    pub fn v_coord(&self, v_flat: usize) -> Vec<f64> {
        let mut rem = v_flat;
        let mut out = vec![0.0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = -self.v_max + (rem % self.n_v) as f64 * self.dv();
            rem /= self.n_v;
        }
        out
    }

    pub fn t_coord(&self, t: usize) -> f64 {
        t as f64 * self.dt
    }

    pub fn base_index(&self, t: usize, x_flat: usize) -> usize {
        t * self.x_cells() + x_flat
    }

    pub fn phase_index(&self, t: usize, x_flat: usize, v_flat: usize) -> usize {
        self.base_index(t, x_flat) * self.v_cells() + v_flat
    }

    pub fn split_phase_index(&self, p: usize) -> (usize, usize, usize) {
        let v_flat = p % self.v_cells();
        let base = p / self.v_cells();
        (base / self.x_cells(), base % self.x_cells(), v_flat)
    }

    /// Index of the zero velocity cell, when the grid contains it.
    pub fn zero_velocity_flat(&self) -> Option<usize> {
        if self.n_v % 2 != 0 {
            return None;
        }
        let j0 = self.n_v / 2;
        let mut flat = 0usize;
        for _ in 0..self.dim {
            flat = flat * self.n_v + j0;
        }
        Some(flat)
    }

    pub fn state_space(&self) -> StateSpace {
        let mut base_points = Vec::with_capacity(self.base_count());
        for t in 0..self.n_t {
            for xf in 0..self.x_cells() {
                base_points.push(BasePoint {
                    label: format!("t{t}_x{xf}"),
                    coords: self.x_coord(xf),
                });
            }
        }
        let mut phase_points = Vec::with_capacity(self.phase_count());
        for t in 0..self.n_t {
            for xf in 0..self.x_cells() {
                for vf in 0..self.v_cells() {
                    phase_points.push(PhasePoint {
                        label: format!("t{t}_x{xf}_v{vf}"),
                        base_index: self.base_index(t, xf),
                        coords: self.v_coord(vf),
                    });
                }
            }
        }
        StateSpace { base_points, phase_points }
    }

    /// Bilinear splitting weights of the point `x + v dt` over x-cells.
    fn transfer_weights(&self, x_flat: usize, v_flat: usize) -> Vec<(usize, f64)> {
        let x = self.x_coord(x_flat);
        let v = self.v_coord(v_flat);
        let hx = self.hx();
        // Per axis: lower cell index and fractional part of the target.
        let mut axis_split: Vec<[(usize, f64); 2]> = Vec::with_capacity(self.dim);
        for a in 0..self.dim {
            let y = x[a] + v[a] * self.dt;
            let u = (y / hx).rem_euclid(self.n_x as f64);
            let i0 = u.floor() as usize % self.n_x;
            let frac = u - u.floor();
            let i1 = (i0 + 1) % self.n_x;
            axis_split.push([(i0, 1.0 - frac), (i1, frac)]);
        }
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(1 << self.dim);
        for corner in 0..(1usize << self.dim) {
            let mut idx = 0usize;
            let mut w = 1.0;
            for (a, split) in axis_split.iter().enumerate() {
                let (i, wa) = split[(corner >> a) & 1];
                idx = idx * self.n_x + i;
                w *= wa;
            }
            if w != 0.0 {
                out.push((idx, w));
            }
        }
        // The flattening above is most-significant-axis-first; x_coord uses
        // the same convention, so indices line up.
        out
    }
}

// ---------------------------------------------------------------------------
// Lagrangians
// ---------------------------------------------------------------------------

/// Built-in potential shapes for mechanical Lagrangians `L = |v|^2/2 - V(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `V(x) = -cos(2 pi x_1)`: the action minimum sits at `x = 1/2, v = 0`
    /// with value -1.
    Pendulum,
    /// `V(x) = -cos(4 pi x_1)`: two tied wells at `x = 1/4, 3/4`.
    TwoWell,
    /// `V = 0`: every zero-velocity Dirac minimizes.
    Flat,
    /// Samples on the position grid (dim-1 grids may interpolate linearly).
    Samples { values: Vec<f64> },
}

impl PotentialSpec {
    /// Resolve to samples over the x-cells of the grid.
    pub fn on_grid(&self, grid: &PhaseGrid) -> Result<Vec<f64>, TonelliError> {
        let nx = grid.x_cells();
        match self {
            PotentialSpec::Pendulum => Ok((0..nx)
                .map(|i| -(2.0 * std::f64::consts::PI * grid.x_coord(i)[0]).cos())
                .collect()),
            PotentialSpec::TwoWell => Ok((0..nx)
                .map(|i| -(4.0 * std::f64::consts::PI * grid.x_coord(i)[0]).cos())
                .collect()),
            PotentialSpec::Flat => Ok(vec![0.0; nx]),
            PotentialSpec::Samples { values } => {
                if values.len() == nx {
                    return Ok(values.clone());
                }
                if grid.dim == 1 && !values.is_empty() {
                    // periodic linear interpolation onto the grid
                    let m = values.len();
                    return Ok((0..nx)
                        .map(|i| {
                            let u = grid.x_coord(i)[0] * m as f64;
                            let j0 = u.floor() as usize % m;
                            let frac = u - u.floor();
                            values[j0] * (1.0 - frac) + values[(j0 + 1) % m] * frac
                        })
                        .collect());
                }
                Err(TonelliError::PotentialLength { expected: nx, got: values.len() })
            }
        }
    }
}

/// Cost model on the phase grid.
#[derive(Clone)]
pub enum LagrangianForm {
    /// `L(t, x, v) = |v|^2 / 2 - V(x)`.
    Mechanical(PotentialSpec),
    /// Arbitrary evaluator `L(t, x, v)`.
    Func(Arc<dyn Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for LagrangianForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LagrangianForm::Mechanical(p) => write!(f, "Mechanical({p:?})"),
            LagrangianForm::Func(_) => write!(f, "Func(..)"),
        }
    }
}

/// A discretizable Lagrangian: an evaluator plus the time-dependence flag.
#[derive(Debug, Clone)]
pub struct LagrangianSpec {
    pub form: LagrangianForm,
    pub time_periodic: bool,
}

impl LagrangianSpec {
    pub fn pendulum() -> Self {
        LagrangianSpec { form: LagrangianForm::Mechanical(PotentialSpec::Pendulum), time_periodic: false }
    }

    pub fn two_well() -> Self {
        LagrangianSpec { form: LagrangianForm::Mechanical(PotentialSpec::TwoWell), time_periodic: false }
    }

    pub fn flat() -> Self {
        LagrangianSpec { form: LagrangianForm::Mechanical(PotentialSpec::Flat), time_periodic: false }
    }

    pub fn mechanical(potential: PotentialSpec) -> Self {
        LagrangianSpec { form: LagrangianForm::Mechanical(potential), time_periodic: false }
    }

    pub fn from_fn(
        f: impl Fn(f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
        time_periodic: bool,
    ) -> Self {
        LagrangianSpec { form: LagrangianForm::Func(Arc::new(f)), time_periodic }
    }

    /// Cost per phase cell; checks fiberwise convexity by sampled second
    /// differences along every velocity axis.
    pub fn cost_vector(&self, grid: &PhaseGrid) -> Result<Vec<f64>, TonelliError> {
        grid.validate()?;
        let mut cost = vec![0.0; grid.phase_count()];
        match &self.form {
            LagrangianForm::Mechanical(pot) => {
                let v_samples = pot.on_grid(grid)?;
                for p in 0..grid.phase_count() {
                    let (_, xf, vf) = grid.split_phase_index(p);
                    let v = grid.v_coord(vf);
                    cost[p] = 0.5 * crate::linalg::dot(&v, &v) - v_samples[xf];
                }
            }
            LagrangianForm::Func(f) => {
                for p in 0..grid.phase_count() {
                    let (t, xf, vf) = grid.split_phase_index(p);
                    let x = grid.x_coord(xf);
                    let v = grid.v_coord(vf);
                    cost[p] = f(grid.t_coord(t), &x, &v);
                }
            }
        }
        if cost.iter().any(|c| !c.is_finite()) {
            return Err(TonelliError::InvalidGrid("non-finite cost".into()));
        }
        self.check_fiber_convexity(grid, &cost)?;
        Ok(cost)
    }

    fn check_fiber_convexity(&self, grid: &PhaseGrid, cost: &[f64]) -> Result<(), TonelliError> {
        let nv = grid.n_v;
        if nv < 3 {
            return Ok(());
        }
        let stride_for_axis = |a: usize| nv.pow((grid.dim - 1 - a) as u32);
        for t in 0..grid.n_t {
            for xf in 0..grid.x_cells() {
                for a in 0..grid.dim {
                    let stride = stride_for_axis(a);
                    for vf in 0..grid.v_cells() {
                        let pos = (vf / stride) % nv;
                        if pos + 2 >= nv {
                            continue;
                        }
                        let p0 = grid.phase_index(t, xf, vf);
                        let p1 = grid.phase_index(t, xf, vf + stride);
                        let p2 = grid.phase_index(t, xf, vf + 2 * stride);
                        let second = cost[p2] - 2.0 * cost[p1] + cost[p0];
                        if second < -1e-6 {
                            return Err(TonelliError::NotFiberwiseConvex {
                                x_cell: xf,
                                value: second,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// holonomic polytope
// ---------------------------------------------------------------------------

/// Holonomy constraints: for every base indicator `f`, transported mass
/// equals resident mass. Each row couples slice `t` to slice `t + 1`
/// (the same slice in the autonomous case).
pub fn holonomic_polytope(grid: &PhaseGrid) -> Result<MeasurePolytope, TonelliError> {
    grid.validate()?;
    let phase = grid.phase_count();
    let mut rows = Vec::with_capacity(grid.base_count());
    for t_target in 0..grid.n_t {
        let t_source = (t_target + grid.n_t - 1) % grid.n_t;
        for b in 0..grid.x_cells() {
            let mut coeffs = vec![0.0; phase];
            // mass arriving at (t_target, b)
            for xf in 0..grid.x_cells() {
                for vf in 0..grid.v_cells() {
                    let p = grid.phase_index(t_source, xf, vf);
                    for (target, w) in grid.transfer_weights(xf, vf) {
                        if target == b {
                            coeffs[p] += w;
                        }
                    }
                }
            }
            // mass residing at (t_target, b)
            for vf in 0..grid.v_cells() {
                let p = grid.phase_index(t_target, b, vf);
                coeffs[p] -= 1.0;
            }
            rows.push(Constraint::eq(coeffs, 0.0));
        }
    }
    Ok(MeasurePolytope::with_mass(grid.state_space(), rows))
}

// ---------------------------------------------------------------------------
// curve measures
// ---------------------------------------------------------------------------

/// Occupation measure of a closed sampled curve of integer period.
///
/// `samples[s]` is the position at time `s * dt`; velocities come from
/// centered differences with periodic wrap. Mass `1/S` per sample is split
/// bilinearly over the neighboring position and velocity cells.
pub fn curve_measure(
    samples: &[Vec<f64>],
    period: usize,
    grid: &PhaseGrid,
) -> Result<DiscreteMeasure, TonelliError> {
    grid.validate()?;
    let s_count = samples.len();
    if s_count < 2 || period == 0 {
        return Err(TonelliError::BadCurve("need at least two samples".into()));
    }
    if (s_count as f64 * grid.dt - period as f64).abs() > 1e-9 {
        return Err(TonelliError::BadCurve(format!(
            "{s_count} samples at dt {} do not cover integer period {period}",
            grid.dt
        )));
    }
    for x in samples {
        if x.len() != grid.dim {
            return Err(TonelliError::BadCurve("sample dimension mismatch".into()));
        }
    }
    let dv = grid.dv();
    let mut weights = vec![0.0; grid.phase_count()];
    let w_sample = 1.0 / s_count as f64;
    for s in 0..s_count {
        let prev = &samples[(s + s_count - 1) % s_count];
        let next = &samples[(s + 1) % s_count];
        // minimal periodic representative of the displacement
        let velocity: Vec<f64> = (0..grid.dim)
            .map(|a| {
                let mut d = next[a] - prev[a];
                d -= d.round();
                d / (2.0 * grid.dt)
            })
            .collect();
        // split per axis over x and v cells
        let t_slice = if grid.n_t > 1 { s % grid.n_t } else { 0 };
        let mut axis_x: Vec<[(usize, f64); 2]> = Vec::with_capacity(grid.dim);
        let mut axis_v: Vec<[(usize, f64); 2]> = Vec::with_capacity(grid.dim);
        for a in 0..grid.dim {
            let ux = (samples[s][a] / grid.hx()).rem_euclid(grid.n_x as f64);
            let ix = ux.floor() as usize % grid.n_x;
            let fx = ux - ux.floor();
            axis_x.push([(ix, 1.0 - fx), ((ix + 1) % grid.n_x, fx)]);

            let v = velocity[a];
            let bound = grid.v_max - dv;
            if v < -grid.v_max || v > bound + 1e-12 {
                return Err(TonelliError::VelocityTruncation {
                    velocity: v,
                    bound: grid.v_max,
                });
            }
            let uv = (v + grid.v_max) / dv;
            let jv = (uv.floor() as usize).min(grid.n_v - 1);
            let fv = (uv - jv as f64).clamp(0.0, 1.0);
            axis_v.push([(jv, 1.0 - fv), ((jv + 1).min(grid.n_v - 1), fv)]);
        }
        // distribute over all corner combinations
        for corner in 0..(1usize << (2 * grid.dim)) {
            let mut xf = 0usize;
            let mut vf = 0usize;
            let mut w = w_sample;
            for a in 0..grid.dim {
                let (ix, wx) = axis_x[a][(corner >> a) & 1];
                let (jv, wv) = axis_v[a][(corner >> (grid.dim + a)) & 1];
                xf = xf * grid.n_x + ix;
                vf = vf * grid.n_v + jv;
                w *= wx * wv;
            }
            if w != 0.0 {
                weights[grid.phase_index(t_slice, xf, vf)] += w;
            }
        }
    }
    DiscreteMeasure::new(weights).map_err(|e| TonelliError::BadCurve(e.to_string()))
}

/// Largest holonomy-row residual of a measure; `O(dt)` for curve measures.
pub fn holonomy_residual(poly: &MeasurePolytope, mu: &DiscreteMeasure) -> f64 {
    poly.rows
        .iter()
        .skip(1) // mass row
        .map(|row| (crate::linalg::dot(&row.coeffs, &mu.weights) - row.rhs).abs())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// minimizing measures
// ---------------------------------------------------------------------------

/// Minimize the discrete action of `L - c . v` over the holonomic polytope.
pub fn minimizing_measures(
    lagrangian: &LagrangianSpec,
    c: &CohomologyClass,
    grid: &PhaseGrid,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<OptimalFace, TonelliError> {
    minimizing_measures_tilted(lagrangian, c, None, grid, face_tol, budget, seed)
}

/// Same with an extra potential tilt `L - c . v - u(x)`.
pub fn minimizing_measures_tilted(
    lagrangian: &LagrangianSpec,
    c: &CohomologyClass,
    tilt: Option<&Potential>,
    grid: &PhaseGrid,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<OptimalFace, TonelliError> {
    let objective = action_objective(lagrangian, c, tilt, grid)?;
    let poly = holonomic_polytope(grid)?;
    Ok(lp::optimal_face(&poly.lp(objective), face_tol, budget, seed)?)
}

/// Per-cell objective `L(t, x, v) - c . v - u(t, x)`.
pub fn action_objective(
    lagrangian: &LagrangianSpec,
    c: &CohomologyClass,
    tilt: Option<&Potential>,
    grid: &PhaseGrid,
) -> Result<Vec<f64>, TonelliError> {
    if c.0.len() != grid.dim {
        return Err(TonelliError::CohomologyDim { expected: grid.dim, got: c.0.len() });
    }
    if let Some(u) = tilt {
        if u.len() != grid.base_count() {
            return Err(TonelliError::PotentialLength {
                expected: grid.base_count(),
                got: u.len(),
            });
        }
    }
    let mut objective = lagrangian.cost_vector(grid)?;
    for (p, obj) in objective.iter_mut().enumerate() {
        let (t, xf, vf) = grid.split_phase_index(p);
        let v = grid.v_coord(vf);
        *obj -= crate::linalg::dot(&c.0, &v);
        if let Some(u) = tilt {
            *obj -= u.values[grid.base_index(t, xf)];
        }
    }
    Ok(objective)
}

// ---------------------------------------------------------------------------
// diagnostics
// ---------------------------------------------------------------------------

/// Velocity multiplicity over position cells: 1 means the measure is a graph
/// over the base.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphPropertyReport {
    /// Max number of velocity cells carrying mass above tol over one x-cell,
    /// per face vertex.
    pub per_vertex: Vec<usize>,
    pub max_multiplicity: usize,
}

pub fn graph_property_check(
    face: &OptimalFace,
    grid: &PhaseGrid,
    tol: f64,
) -> GraphPropertyReport {
    let mut per_vertex = Vec::with_capacity(face.vertices.len());
    for vertex in &face.vertices {
        let mut best = 0usize;
        for t in 0..grid.n_t {
            for xf in 0..grid.x_cells() {
                let count = (0..grid.v_cells())
                    .filter(|&vf| vertex[grid.phase_index(t, xf, vf)] > tol)
                    .count();
                best = best.max(count);
            }
        }
        per_vertex.push(best);
    }
    let max_multiplicity = per_vertex.iter().copied().max().unwrap_or(0);
    GraphPropertyReport { per_vertex, max_multiplicity }
}

/// True iff all mass sits on cells with `|v|_inf <= bound`.
pub fn support_bound_check(mu: &DiscreteMeasure, grid: &PhaseGrid, bound: f64) -> bool {
    mu.weights.iter().enumerate().all(|(p, &w)| {
        if w <= 1e-12 {
            return true;
        }
        let (_, _, vf) = grid.split_phase_index(p);
        crate::linalg::norm_inf(&grid.v_coord(vf)) <= bound + 1e-12
    })
}

/// One row of a resolution study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolutionRow {
    pub n_x: usize,
    pub n_v: usize,
    pub dt: f64,
    pub value: f64,
    pub dimension: usize,
}

/// Optimal value and face dimension across a list of grids.
pub fn resolution_study(
    lagrangian: &LagrangianSpec,
    c: &CohomologyClass,
    grids: &[PhaseGrid],
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<Vec<ResolutionRow>, TonelliError> {
    let mut rows = Vec::with_capacity(grids.len());
    for grid in grids {
        let face = minimizing_measures(lagrangian, c, grid, face_tol, budget, seed)?;
        rows.push(ResolutionRow {
            n_x: grid.n_x,
            n_v: grid.n_v,
            dt: grid.dt,
            value: face.value,
            dimension: face.dimension,
        });
    }
    Ok(rows)
}

/// CSV export `t, x..., v..., weight` of a phase measure (nonzero cells).
pub fn measure_to_csv(mu: &DiscreteMeasure, grid: &PhaseGrid) -> String {
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((0..grid.dim).map(|a| format!("x_{a}")));
    header.extend((0..grid.dim).map(|a| format!("v_{a}")));
    header.push("weight".into());
    let mut out = export::csv_record(header);
    for (p, &w) in mu.weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let (t, xf, vf) = grid.split_phase_index(p);
        let mut fields: Vec<String> = vec![export::fmt_f64(grid.t_coord(t))];
        fields.extend(grid.x_coord(xf).iter().map(|&x| export::fmt_f64(x)));
        fields.extend(grid.v_coord(vf).iter().map(|&v| export::fmt_f64(v)));
        fields.push(export::fmt_f64(w));
        out.push_str(&export::csv_record(fields));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_grid() -> PhaseGrid {
        PhaseGrid::autonomous(1, 8, 8, 1.0, 0.125).unwrap()
    }

    #[test]
    fn velocity_grid_contains_zero_for_even_counts() {
        let g = small_grid();
        let z = g.zero_velocity_flat().unwrap();
        assert_abs_diff_eq!(g.v_coord(z)[0], 0.0);
        let odd = PhaseGrid::autonomous(1, 4, 5, 1.0, 0.25).unwrap();
        assert!(odd.zero_velocity_flat().is_none());
    }

    #[test]
    fn zero_velocity_diracs_are_feasible() {
        let g = small_grid();
        let poly = holonomic_polytope(&g).unwrap();
        let z = g.zero_velocity_flat().unwrap();
        for xf in 0..g.x_cells() {
            let mu = DiscreteMeasure::dirac(g.phase_index(0, xf, z), g.phase_count());
            assert!(holonomy_residual(&poly, &mu) <= 1e-12);
        }
    }

    #[test]
    fn constant_curve_gives_zero_velocity_dirac() {
        let g = small_grid();
        let samples = vec![vec![0.25]; 8];
        let mu = curve_measure(&samples, 1, &g).unwrap();
        let z = g.zero_velocity_flat().unwrap();
        let idx = g.phase_index(0, 2, z); // x = 0.25 is cell 2
        assert_abs_diff_eq!(mu.weights[idx], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_speed_curve_is_uniform_at_v_equals_one() {
        let g = PhaseGrid::autonomous(1, 8, 8, 2.0, 0.125).unwrap();
        let samples: Vec<Vec<f64>> = (0..8).map(|s| vec![s as f64 * 0.125]).collect();
        let mu = curve_measure(&samples, 1, &g).unwrap();
        // v = 1 is a grid node: j = (1 + 2) / 0.5 = 6
        for xf in 0..8 {
            let idx = g.phase_index(0, xf, 6);
            assert_abs_diff_eq!(mu.weights[idx], 0.125, epsilon = 1e-12);
        }
        // and the curve is holonomic up to O(dt): here exactly (uniform)
        let poly = holonomic_polytope(&g).unwrap();
        assert!(holonomy_residual(&poly, &mu) <= 1e-12);
    }

    #[test]
    fn retraced_segment_is_velocity_symmetric() {
        let g = PhaseGrid::autonomous(1, 8, 8, 2.0, 0.125).unwrap();
        // forth and back over a segment: x(s) triangle wave
        let pos = [0.0, 0.125, 0.25, 0.375, 0.5, 0.375, 0.25, 0.125];
        let samples: Vec<Vec<f64>> = pos.iter().map(|&x| vec![x]).collect();
        let mu = curve_measure(&samples, 1, &g).unwrap();
        for xf in 0..8 {
            for vf in 0..8 {
                let mirrored = 8 - vf; // v_j = -v_max + j dv; mirror j -> n_v - j
                if mirrored < 8 {
                    let a = mu.weights[g.phase_index(0, xf, vf)];
                    let b = mu.weights[g.phase_index(0, xf, mirrored)];
                    assert_abs_diff_eq!(a, b, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn curve_velocity_truncation_errors() {
        let g = small_grid(); // v_max = 1
        // speed 2 over two periods: 16 samples at dt = 0.125
        let samples: Vec<Vec<f64>> = (0..16).map(|s| vec![s as f64 * 0.25]).collect();
        match curve_measure(&samples, 2, &g) {
            Err(TonelliError::VelocityTruncation { bound, .. }) => {
                assert_abs_diff_eq!(bound, 1.0);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn pendulum_minimizer_small_grid() {
        let g = PhaseGrid::autonomous(1, 16, 16, 2.0, 1.0 / 16.0).unwrap();
        let face = minimizing_measures(
            &LagrangianSpec::pendulum(),
            &CohomologyClass::zero(1),
            &g,
            None,
            64,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(face.value, -1.0, epsilon = 2.0 / 16.0);
        assert_eq!(face.dimension, 0);
        // single cell at (x = 1/2, v = 0)
        let z = g.zero_velocity_flat().unwrap();
        let idx = g.phase_index(0, 8, z);
        assert_abs_diff_eq!(face.vertices[0][idx], 1.0, epsilon = 1e-9);
        let report = graph_property_check(&face, &g, 1e-9);
        assert_eq!(report.max_multiplicity, 1);
        let mu = DiscreteMeasure::from_lp_point(&face.vertices[0]).unwrap();
        assert!(support_bound_check(&mu, &g, 1.0));
        assert!(!support_bound_check(
            &DiscreteMeasure::dirac(g.phase_index(0, 0, 0), g.phase_count()),
            &g,
            1.0
        )); // v = -2 cell violates bound 1
    }

    #[test]
    fn flat_lagrangian_face_is_all_zero_velocity_diracs() {
        let g = PhaseGrid::autonomous(1, 8, 4, 1.0, 0.125).unwrap();
        let face = minimizing_measures(
            &LagrangianSpec::flat(),
            &CohomologyClass::zero(1),
            &g,
            None,
            64,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(face.value, 0.0, epsilon = 1e-9);
        assert_eq!(face.dimension, 8 - 1);
    }

    #[test]
    fn cohomology_tilt_selects_velocity() {
        // L = v^2/2 - 0.5 v: pointwise minimum -0.125 at v = 0.5
        let g = PhaseGrid::autonomous(1, 8, 16, 2.0, 0.125).unwrap();
        let face = minimizing_measures(
            &LagrangianSpec::flat(),
            &CohomologyClass(vec![0.5]),
            &g,
            None,
            64,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(face.value, -0.125, epsilon = 1e-9);
    }

    #[test]
    fn tilt_identity_action_splits_through_rotation() {
        // action under (L - c v) = action under L - c . mean velocity
        let g = PhaseGrid::autonomous(1, 4, 4, 1.0, 0.25).unwrap();
        let lagr = LagrangianSpec::pendulum();
        let c = CohomologyClass(vec![0.3]);
        let base_cost = lagr.cost_vector(&g).unwrap();
        let tilted = action_objective(&lagr, &c, None, &g).unwrap();
        let mu = {
            let poly = holonomic_polytope(&g).unwrap();
            let sol = lp::solve(&poly.lp(tilted.clone())).unwrap();
            DiscreteMeasure::from_lp_point(&sol.point).unwrap()
        };
        let rho: f64 = mu
            .weights
            .iter()
            .enumerate()
            .map(|(p, w)| {
                let (_, _, vf) = g.split_phase_index(p);
                w * g.v_coord(vf)[0]
            })
            .sum();
        let action_tilted: f64 = crate::linalg::dot(&tilted, &mu.weights);
        let action_base: f64 = crate::linalg::dot(&base_cost, &mu.weights);
        assert_abs_diff_eq!(action_tilted, action_base - 0.3 * rho, epsilon = 1e-10);
    }

    #[test]
    fn resolution_study_pendulum_converges() {
        let grids: Vec<PhaseGrid> = [8usize, 16, 32]
            .iter()
            .map(|&n| PhaseGrid::autonomous(1, n, n, 2.0, 1.0 / n as f64).unwrap())
            .collect();
        let rows = resolution_study(
            &LagrangianSpec::pendulum(),
            &CohomologyClass::zero(1),
            &grids,
            None,
            32,
            0,
        )
        .unwrap();
        for row in &rows {
            assert!((row.value + 1.0).abs() <= 2.0 / row.n_x as f64);
        }
        // flat model: exactly zero at every resolution
        let rows = resolution_study(
            &LagrangianSpec::flat(),
            &CohomologyClass::zero(1),
            &grids[..2],
            None,
            8,
            0,
        )
        .unwrap();
        for row in rows {
            assert_abs_diff_eq!(row.value, 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn two_dimensional_torus_assembles() {
        let g = PhaseGrid::autonomous(2, 4, 4, 1.0, 0.25).unwrap();
        assert_eq!(g.phase_count(), 16 * 16);
        let face = minimizing_measures(
            &LagrangianSpec::from_fn(
                |_, x, v| {
                    0.5 * (v[0] * v[0] + v[1] * v[1])
                        + (2.0 * std::f64::consts::PI * x[0]).cos()
                        + (2.0 * std::f64::consts::PI * x[1]).cos()
                },
                false,
            ),
            &CohomologyClass::zero(2),
            &g,
            None,
            16,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(face.value, -2.0, epsilon = 1e-9);
        assert_eq!(face.dimension, 0);
    }

    #[test]
    fn time_periodic_grid_couples_slices() {
        let g = PhaseGrid::time_periodic(1, 4, 4, 1.0, 4).unwrap();
        // time-dependent well rotating over slices has a v = 0 resident
        let face = minimizing_measures(
            &LagrangianSpec::from_fn(
                |_t, x, v| 0.5 * v[0] * v[0] + (2.0 * std::f64::consts::PI * x[0]).cos(),
                true,
            ),
            &CohomologyClass::zero(1),
            &g,
            None,
            16,
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(face.value, -1.0, epsilon = 1e-9);
        // mass must split evenly across slices
        let mu = &face.vertices[0];
        for t in 0..4 {
            let slice_mass: f64 = (0..g.x_cells())
                .flat_map(|xf| (0..g.v_cells()).map(move |vf| (xf, vf)))
                .map(|(xf, vf)| mu[g.phase_index(t, xf, vf)])
                .sum();
            assert_abs_diff_eq!(slice_mass, 0.25, epsilon = 1e-9);
        }
    }

    #[test]
    fn non_convex_fiber_is_rejected() {
        let g = small_grid();
        let bad = LagrangianSpec::from_fn(|_, _, v| -(v[0] * v[0]), false);
        assert!(matches!(
            bad.cost_vector(&g),
            Err(TonelliError::NotFiberwiseConvex { .. })
        ));
    }
}
