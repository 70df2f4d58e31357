//! Tilt machinery and genericity experiments.
//!
//! Fix a measure polytope `H`, a base potential `w`, and a separating family
//! `w_1..w_m`. The constrained value function
//! `F_m(L, x) = min { (L - w)(mu) : mu in H, T_m(pi(mu)) = x }` is convex on
//! the image of `H`; its Legendre transform `G_m(L, y)` equals the
//! unconstrained maximum of `<w + y . w, mu> - L(mu)` over `H`, and the
//! argmin set `M_m(L, y)` of `F_m(L, .) - y . x` is the subdifferential of
//! `G_m(L, .)` at `y`. Tilting by generic `y` collapses `M_m` to at most the
//! dimension of the cost family; the Monte-Carlo experiments here measure how
//! often that happens over seeded samples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::lp::{self, Constraint, LinearProgram, LpError, OptimalFace};
use crate::measure::{
    self, DiscreteMeasure, MeasurePolytope, Potential, SeparatingFamily,
};
use crate::rng;
use rand::Rng;

#[derive(Debug, Clone, Error)]
pub enum GenericityError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Measure(#[from] measure::MeasureError),
}

/// A finite-dimensional affine family of costs: `base + sum t_k directions_k`
/// with coefficients ranging over a compact box.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineFamily {
    pub base: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
    /// Coefficient bounds, one interval per direction.
    pub coeff_box: Vec<(f64, f64)>,
}

impl AffineFamily {
    pub fn new(
        base: Vec<f64>,
        directions: Vec<Vec<f64>>,
        coeff_box: Vec<(f64, f64)>,
    ) -> Result<Self, GenericityError> {
        let fam = AffineFamily { base, directions, coeff_box };
        fam.validate()?;
        Ok(fam)
    }

    /// A single cost (dimension zero).
    pub fn point(base: Vec<f64>) -> Self {
        AffineFamily { base, directions: Vec::new(), coeff_box: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn validate(&self) -> Result<(), GenericityError> {
        for d in &self.directions {
            if d.len() != self.base.len() {
                return Err(GenericityError::InvalidFamily(
                    "direction length differs from base cost".into(),
                ));
            }
        }
        if self.coeff_box.len() != self.directions.len() {
            return Err(GenericityError::InvalidFamily(
                "coefficient box must match the number of directions".into(),
            ));
        }
        for &(lo, hi) in &self.coeff_box {
            if !(hi >= lo) {
                return Err(GenericityError::InvalidFamily("empty coefficient box".into()));
            }
        }
        if !self.directions.is_empty()
            && linalg::matrix_rank(&self.directions) < self.directions.len()
        {
            return Err(GenericityError::InvalidFamily(
                "directions are linearly dependent".into(),
            ));
        }
        Ok(())
    }

    /// Uniform coefficient grid over the box (`samples_per_axis` per
    /// direction, capped at 10^4 total points).
    pub fn coefficient_grid(&self, samples_per_axis: usize) -> Vec<Vec<f64>> {
        let d = self.dim();
        if d == 0 {
            return vec![Vec::new()];
        }
        let mut per_axis = samples_per_axis.max(1);
        while per_axis > 1 && per_axis.pow(d as u32) > 10_000 {
            per_axis -= 1;
        }
        let axis_values: Vec<Vec<f64>> = self
            .coeff_box
            .iter()
            .map(|&(lo, hi)| {
                if per_axis == 1 {
                    vec![0.5 * (lo + hi)]
                } else {
                    (0..per_axis)
                        .map(|i| lo + (hi - lo) * i as f64 / (per_axis - 1) as f64)
                        .collect()
                }
            })
            .collect();
        let total: usize = axis_values.iter().map(|v| v.len()).product();
        let mut grid = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rem = flat;
            let mut coeff = vec![0.0; d];
            for a in (0..d).rev() {
                coeff[a] = axis_values[a][rem % axis_values[a].len()];
                rem /= axis_values[a].len();
            }
            grid.push(coeff);
        }
        grid
    }

    /// Cost vector at the given coefficients.
    pub fn cost_at(&self, coeff: &[f64]) -> Vec<f64> {
        let mut cost = self.base.clone();
        for (t, dir) in coeff.iter().zip(&self.directions) {
            for (c, d) in cost.iter_mut().zip(dir) {
                *c += t * d;
            }
        }
        cost
    }
}

/// One evaluation of the constrained value function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FmEvaluation {
    pub x: Vec<f64>,
    /// `None` encodes `+infinity`: `x` is outside the image of `H`.
    pub value: Option<f64>,
    pub minimizer: Option<DiscreteMeasure>,
}

impl FmEvaluation {
    pub fn is_finite(&self) -> bool {
        self.value.is_some()
    }
}

/// The argmin set `M_m(L, y)` in `R^m`, with the phase-space face behind it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MmFace {
    /// Minimum of `F_m(L, x) - y . x`.
    pub value: f64,
    /// Images of the optimizing face vertices under `T_m . pi`.
    pub x_vertices: Vec<Vec<f64>>,
    /// Affine dimension of `M_m(L, y)` measured in `R^m`.
    pub dimension: usize,
    /// Dimension of the projected face in base-measure space (`M_K`).
    pub mk_dimension: usize,
    pub mu_face: OptimalFace,
}

fn check_inputs(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    h: &MeasurePolytope,
) -> Result<(), GenericityError> {
    if l.len() != h.num_vars() {
        return Err(GenericityError::Dimension(format!(
            "cost has length {}, polytope has {} phase points",
            l.len(),
            h.num_vars()
        )));
    }
    if w.len() != h.space.base_len() {
        return Err(GenericityError::Dimension(format!(
            "w has length {}, base has {} points",
            w.len(),
            h.space.base_len()
        )));
    }
    for (i, wi) in fam.functions.iter().enumerate() {
        if wi.len() != h.space.base_len() {
            return Err(GenericityError::Dimension(format!(
                "separating function {i} has length {}",
                wi.len()
            )));
        }
    }
    Ok(())
}

/// Phase-point objective of `L - w - sum y_i w_i`.
fn tilted_objective(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y: &[f64],
    h: &MeasurePolytope,
) -> Vec<f64> {
    h.space
        .phase_points
        .iter()
        .zip(l)
        .map(|(p, &lp_)| {
            let b = p.base_index;
            let mut v = lp_ - w.values[b];
            for (yi, wi) in y.iter().zip(&fam.functions) {
                v -= yi * wi.values[b];
            }
            v
        })
        .collect()
}

/// `F_m(L, x)`: minimize `(L - w)(mu)` over `H` subject to
/// `T_m(pi(mu)) = x`; infeasibility means the value is `+infinity`.
pub fn compute_fm(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    x: &[f64],
    h: &MeasurePolytope,
) -> Result<FmEvaluation, GenericityError> {
    check_inputs(l, w, fam, h)?;
    if x.len() != fam.len() {
        return Err(GenericityError::Dimension(format!(
            "x has length {}, family has {} functions",
            x.len(),
            fam.len()
        )));
    }
    let objective = tilted_objective(l, w, fam, &vec![0.0; fam.len()], h);
    let extra: Vec<Constraint> = fam
        .functions
        .iter()
        .zip(x)
        .map(|(wi, &xi)| {
            let coeffs: Vec<f64> = h
                .space
                .phase_points
                .iter()
                .map(|p| wi.values[p.base_index])
                .collect();
            Constraint::eq(coeffs, xi)
        })
        .collect();
    match lp::solve(&h.lp_with_rows(objective, extra)) {
        Ok(sol) => Ok(FmEvaluation {
            x: x.to_vec(),
            value: Some(sol.value),
            minimizer: Some(DiscreteMeasure::from_lp_point(&sol.point)?),
        }),
        Err(LpError::Infeasible { .. }) => {
            Ok(FmEvaluation { x: x.to_vec(), value: None, minimizer: None })
        }
        Err(e) => Err(e.into()),
    }
}

/// `G_m(L, y) = max_{mu in H} <w + sum y_i w_i, mu> - L(mu)`; finite for all
/// `y` since `H` is compact. Returns the value and a maximizer.
pub fn compute_gm(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y: &[f64],
    h: &MeasurePolytope,
) -> Result<(f64, DiscreteMeasure), GenericityError> {
    check_inputs(l, w, fam, h)?;
    if y.len() != fam.len() {
        return Err(GenericityError::Dimension(format!(
            "y has length {}, family has {} functions",
            y.len(),
            fam.len()
        )));
    }
    let objective = tilted_objective(l, w, fam, y, h);
    let sol = lp::solve(&h.lp(objective))?;
    Ok((-sol.value, DiscreteMeasure::from_lp_point(&sol.point)?))
}

/// The Legendre route to `G_m`: locate the maximizing fiber image `x*`, then
/// evaluate `y . x* - F_m(L, x*)` with an independent constrained solve. The
/// two expressions for `G_m` must agree.
pub fn gm_via_x(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y: &[f64],
    h: &MeasurePolytope,
) -> Result<f64, GenericityError> {
    let (_, mu_star) = compute_gm(l, w, fam, y, h)?;
    let nu = measure::project(&h.space, &mu_star)?;
    let x_star = fam.image(&nu)?;
    let fm = compute_fm(l, w, fam, &x_star, h)?;
    let fm_value = fm.value.ok_or_else(|| {
        GenericityError::Dimension("maximizer image is outside the fiber range".into())
    })?;
    Ok(linalg::dot(y, &x_star) - fm_value)
}

/// `M_m(L, y)`: minimize `F_m(L, x) - y . x` by solving the tilted problem in
/// measure space, extract the optimal face, and push its vertices through
/// `T_m . pi`. Dimensions are measured in `R^m` (and in base-measure space
/// for the cross-check).
pub fn compute_mm(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y: &[f64],
    h: &MeasurePolytope,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<MmFace, GenericityError> {
    check_inputs(l, w, fam, h)?;
    if y.len() != fam.len() {
        return Err(GenericityError::Dimension(format!(
            "y has length {}, family has {} functions",
            y.len(),
            fam.len()
        )));
    }
    let objective = tilted_objective(l, w, fam, y, h);
    let mu_face = lp::optimal_face(&h.lp(objective), face_tol, budget, seed)?;
    let mut x_vertices: Vec<Vec<f64>> = Vec::new();
    let mut nu_vertices: Vec<Vec<f64>> = Vec::new();
    for vertex in &mu_face.vertices {
        let mu = DiscreteMeasure::from_lp_point(vertex)?;
        let nu = measure::project(&h.space, &mu)?;
        let x = fam.image(&nu)?;
        if x_vertices
            .iter()
            .all(|u| u.iter().zip(&x).any(|(a, b)| (a - b).abs() > 1e-9))
        {
            x_vertices.push(x);
        }
        if nu_vertices
            .iter()
            .all(|u| u.iter().zip(&nu.weights).any(|(a, b)| (a - b).abs() > 1e-9))
        {
            nu_vertices.push(nu.weights);
        }
    }
    let dimension = linalg::affine_rank(&x_vertices, &[]);
    let mk_dimension = linalg::affine_rank(&nu_vertices, &[]);
    Ok(MmFace { value: mu_face.value, x_vertices, dimension, mk_dimension, mu_face })
}

/// L1 distance from a point to the convex hull of finitely many points,
/// computed as a small feasibility LP.
pub fn l1_distance_to_hull(point: &[f64], hull: &[Vec<f64>]) -> Result<f64, LpError> {
    let m = point.len();
    let k = hull.len();
    if k == 0 {
        return Ok(f64::INFINITY);
    }
    // variables: lambda_1..lambda_k, s_plus_1..m, s_minus_1..m
    let nv = k + 2 * m;
    let mut objective = vec![0.0; nv];
    for o in objective.iter_mut().skip(k) {
        *o = 1.0;
    }
    let mut constraints = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut coeffs = vec![0.0; nv];
        for (j, hpt) in hull.iter().enumerate() {
            coeffs[j] = hpt[i];
        }
        coeffs[k + i] = 1.0;
        coeffs[k + m + i] = -1.0;
        constraints.push(Constraint::eq(coeffs, point[i]));
    }
    let mut mass = vec![0.0; nv];
    for cell in mass.iter_mut().take(k) {
        *cell = 1.0;
    }
    constraints.push(Constraint::eq(mass, 1.0));
    let sol = lp::solve(&LinearProgram { objective, constraints, upper_bounds: None })?;
    Ok(sol.value.max(0.0))
}

/// Result of the fiber-inclusion check
/// `M_K(L - w - y . w) ⊂ T_m^{-1}(M_m(L, y))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InclusionReport {
    pub holds: bool,
    /// Largest L1 distance from a projected face vertex image to `M_m`.
    pub worst_deviation: f64,
    /// A violating base measure, when the inclusion fails.
    pub witness: Option<DiscreteMeasure>,
}

/// Check the inclusion on vertex representatives: every vertex of the
/// minimizing face must map into the hull of `M_m(L, y)` within `tol`.
pub fn check_inclusion(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y: &[f64],
    h: &MeasurePolytope,
    tol: f64,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<InclusionReport, GenericityError> {
    let mm = compute_mm(l, w, fam, y, h, face_tol, budget, seed)?;
    inclusion_from_mm(&mm, fam, h, tol)
}

/// Inclusion check reusing an already-computed `MmFace`.
pub fn inclusion_from_mm(
    mm: &MmFace,
    fam: &SeparatingFamily,
    h: &MeasurePolytope,
    tol: f64,
) -> Result<InclusionReport, GenericityError> {
    let mut worst = 0.0_f64;
    let mut witness = None;
    for vertex in &mm.mu_face.vertices {
        let mu = DiscreteMeasure::from_lp_point(vertex)?;
        let nu = measure::project(&h.space, &mu)?;
        let x = fam.image(&nu)?;
        let d = l1_distance_to_hull(&x, &mm.x_vertices)?;
        if d > worst {
            worst = d;
            if d > tol {
                witness = Some(nu);
            }
        }
    }
    Ok(InclusionReport { holds: worst <= tol, worst_deviation: worst, witness })
}

// ---------------------------------------------------------------------------
// subdifferential identity
// ---------------------------------------------------------------------------

/// Per-tilt outcome of the subdifferential identity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubdiffCheckRow {
    pub y: Vec<f64>,
    /// Worst violation of `G(z) >= G(y) + x0 . (z - y)` over probes `z` and
    /// vertices `x0` of `M_m` (membership `M_m ⊆ ∂G`).
    pub subgradient_violation: f64,
    /// Worst gap between directional slopes of `G` at `y` and the support
    /// function of `M_m` (hull agreement).
    pub support_gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubdiffIdentityReport {
    pub rows: Vec<SubdiffCheckRow>,
    pub max_subgradient_violation: f64,
    pub max_support_gap: f64,
}

/// Verify that `M_m(L, y)` is the subdifferential of `z -> G_m(L, z)` at `y`:
/// each vertex of `M_m` satisfies the global subgradient inequality on probe
/// points, and one-sided directional slopes of the piecewise-linear `G` match
/// the support function of `M_m` on sampled directions.
pub fn subdiff_identity_check(
    l: &[f64],
    w: &Potential,
    fam: &SeparatingFamily,
    y_grid: &[Vec<f64>],
    h: &MeasurePolytope,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<SubdiffIdentityReport, GenericityError> {
    let m = fam.len();
    let delta = 1e-4;
    let mut rows = Vec::with_capacity(y_grid.len());
    for (row_idx, y) in y_grid.iter().enumerate() {
        let mm = compute_mm(l, w, fam, y, h, face_tol, budget, seed)?;
        let (g0, _) = compute_gm(l, w, fam, y, h)?;

        // Probe points: axis offsets at two scales plus seeded directions.
        let mut probes: Vec<Vec<f64>> = Vec::new();
        for axis in 0..m {
            for scale in [delta, 0.05] {
                for sign in [-1.0, 1.0] {
                    let mut z = y.clone();
                    z[axis] += sign * scale;
                    probes.push(z);
                }
            }
        }
        let mut prng = rng::stream(seed, 1000 + row_idx as u64);
        for _ in 0..4 {
            let dir = rng::uniform_ball(&mut prng, m, 1.0);
            probes.push(y.iter().zip(&dir).map(|(a, b)| a + 0.03 * b).collect());
        }

        let mut subgradient_violation = 0.0_f64;
        for z in &probes {
            let (gz, _) = compute_gm(l, w, fam, z, h)?;
            for x0 in &mm.x_vertices {
                let lhs = g0
                    + x0.iter()
                        .zip(z.iter().zip(y.iter()))
                        .map(|(xi, (zi, yi))| xi * (zi - yi))
                        .sum::<f64>();
                subgradient_violation = subgradient_violation.max(lhs - gz);
            }
        }

        // Support-function agreement on +-axis directions and random ones.
        let mut support_gap = 0.0_f64;
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        for axis in 0..m {
            let mut d = vec![0.0; m];
            d[axis] = 1.0;
            dirs.push(d.clone());
            d[axis] = -1.0;
            dirs.push(d);
        }
        for _ in 0..4 {
            let d = rng::uniform_ball(&mut prng, m, 1.0);
            let norm = linalg::norm2(&d).max(1e-12);
            dirs.push(d.iter().map(|x| x / norm).collect());
        }
        for d in dirs {
            let z: Vec<f64> = y.iter().zip(&d).map(|(a, b)| a + delta * b).collect();
            let (gz, _) = compute_gm(l, w, fam, &z, h)?;
            let slope = (gz - g0) / delta;
            let support = mm
                .x_vertices
                .iter()
                .map(|x| linalg::dot(x, &d))
                .fold(f64::NEG_INFINITY, f64::max);
            support_gap = support_gap.max((slope - support).abs());
        }

        rows.push(SubdiffCheckRow {
            y: y.clone(),
            subgradient_violation,
            support_gap,
        });
    }
    let max_subgradient_violation = rows
        .iter()
        .map(|r| r.subgradient_violation)
        .fold(0.0, f64::max);
    let max_support_gap = rows.iter().map(|r| r.support_gap).fold(0.0, f64::max);
    Ok(SubdiffIdentityReport { rows, max_subgradient_violation, max_support_gap })
}

// ---------------------------------------------------------------------------
// tilt experiments
// ---------------------------------------------------------------------------

/// Parameters of a seeded tilt experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TiltConfig {
    pub trials: usize,
    pub radius: f64,
    /// Samples per family direction (total capped at 10^4).
    pub l_samples: usize,
    pub seed: u64,
    pub budget: usize,
    pub face_tol: Option<f64>,
    /// Also verify the fiber inclusion on every (y, L) pair.
    pub check_inclusion: bool,
    pub inclusion_tol: f64,
    /// Log one line per 100 finished trials to stderr.
    pub log_progress: bool,
}

impl Default for TiltConfig {
    fn default() -> Self {
        TiltConfig {
            trials: 1000,
            radius: 1e-2,
            l_samples: 9,
            seed: 0,
            budget: 64,
            face_tol: None,
            check_inclusion: false,
            inclusion_tol: 1e-7,
            log_progress: false,
        }
    }
}

/// Outcome of a tilt experiment over seeded `(y, L)` samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TiltExperimentReport {
    pub trials: usize,
    pub radius: f64,
    pub seed: u64,
    /// Dimension of the cost family `A`.
    pub family_dim: usize,
    /// Number of `(y, L)` pairs evaluated.
    pub pair_count: usize,
    /// Fraction of pairs with `dim M_m <= dim A`.
    pub fraction_ok: f64,
    /// Largest `dim M_m` observed.
    pub worst_dim: usize,
    /// Fraction of pairs whose projected face also satisfies the bound.
    pub mk_fraction_ok: f64,
    /// Fraction of pairs where the fiber inclusion held (when checked).
    pub inclusion_fraction: Option<f64>,
    /// A tilt attaining `worst_dim`.
    pub worst_y: Option<Vec<f64>>,
}

/// Sample `y` uniformly in the radius ball of `R^m` (one per trial, seeded)
/// and measure `dim M_m(L, y)` for every `L` on the family's coefficient
/// grid. Trials run in parallel with per-trial deterministic streams.
pub fn tilt_experiment(
    family: &AffineFamily,
    fam: &SeparatingFamily,
    w: &Potential,
    h: &MeasurePolytope,
    cfg: &TiltConfig,
) -> Result<TiltExperimentReport, GenericityError> {
    family.validate()?;
    if cfg.trials == 0 {
        return Err(GenericityError::InvalidConfig("trials must be >= 1".into()));
    }
    if !(cfg.radius > 0.0) {
        return Err(GenericityError::InvalidConfig("radius must be positive".into()));
    }
    let m = fam.len();
    if m == 0 {
        return Err(GenericityError::InvalidConfig("empty separating family".into()));
    }
    let grid = family.coefficient_grid(cfg.l_samples);
    let costs: Vec<Vec<f64>> = grid.iter().map(|t| family.cost_at(t)).collect();
    for cost in &costs {
        check_inputs(cost, w, fam, h)?;
    }
    let d = family.dim();

    let progress = std::sync::atomic::AtomicUsize::new(0);
    let results: Result<Vec<TrialOutcome>, GenericityError> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut trng = rng::stream(cfg.seed, trial as u64);
            let y = rng::uniform_ball(&mut trng, m, cfg.radius);
            let mut out = TrialOutcome::default();
            for cost in &costs {
                let mm = compute_mm(cost, w, fam, &y, h, cfg.face_tol, cfg.budget, cfg.seed)?;
                out.pairs += 1;
                if mm.dimension <= d {
                    out.ok += 1;
                }
                if mm.mk_dimension <= d {
                    out.mk_ok += 1;
                }
                if mm.dimension > out.worst_dim {
                    out.worst_dim = mm.dimension;
                    out.worst_y = Some(y.clone());
                }
                if cfg.check_inclusion {
                    let inc = inclusion_from_mm(&mm, fam, h, cfg.inclusion_tol)?;
                    if inc.holds {
                        out.inclusion_ok += 1;
                    }
                }
            }
            if cfg.log_progress {
                let done = progress.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if done % 100 == 0 {
                    eprintln!("tilt-experiment: {done}/{} trials", cfg.trials);
                }
            }
            Ok(out)
        })
        .collect();
    let results = results?;

    let mut pairs = 0usize;
    let mut ok = 0usize;
    let mut mk_ok = 0usize;
    let mut inclusion_ok = 0usize;
    let mut worst_dim = 0usize;
    let mut worst_y = None;
    for r in results {
        pairs += r.pairs;
        ok += r.ok;
        mk_ok += r.mk_ok;
        inclusion_ok += r.inclusion_ok;
        if r.worst_dim > worst_dim {
            worst_dim = r.worst_dim;
            worst_y = r.worst_y;
        }
    }
    Ok(TiltExperimentReport {
        trials: cfg.trials,
        radius: cfg.radius,
        seed: cfg.seed,
        family_dim: d,
        pair_count: pairs,
        fraction_ok: ok as f64 / pairs as f64,
        worst_dim,
        mk_fraction_ok: mk_ok as f64 / pairs as f64,
        inclusion_fraction: cfg
            .check_inclusion
            .then(|| inclusion_ok as f64 / pairs as f64),
        worst_y,
    })
}

#[derive(Default)]
struct TrialOutcome {
    pairs: usize,
    ok: usize,
    mk_ok: usize,
    inclusion_ok: usize,
    worst_dim: usize,
    worst_y: Option<Vec<f64>>,
}

// ---------------------------------------------------------------------------
// semicontinuity probe
// ---------------------------------------------------------------------------

/// Empirical modulus of upper semicontinuity of the argmin face.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemicontinuityReport {
    pub deltas: [f64; 3],
    /// Worst total-variation distance from perturbed face vertices to the
    /// hull of the unperturbed face, per scale.
    pub moduli: [f64; 3],
    pub base_dimension: usize,
}

/// Perturb `(L, u)` by scaled random directions (the same directions at
/// scales `delta`, `delta/2`, `delta/4`) and measure how far the perturbed
/// minimizing faces stray from the unperturbed one.
pub fn semicontinuity_probe(
    l: &[f64],
    u: &Potential,
    h: &MeasurePolytope,
    delta: f64,
    probes: usize,
    seed: u64,
    face_tol: Option<f64>,
    budget: usize,
) -> Result<SemicontinuityReport, GenericityError> {
    if delta < 0.0 {
        return Err(GenericityError::InvalidConfig("delta must be >= 0".into()));
    }
    let fam = SeparatingFamily::from_potentials(Vec::new());
    check_inputs(l, u, &fam, h)?;
    let base_obj = tilted_objective(l, u, &fam, &[], h);
    let base_face = lp::optimal_face(&h.lp(base_obj), face_tol, budget, seed)?;

    // Direction pairs drawn once, reused across scales.
    let dirs: Vec<(Vec<f64>, Vec<f64>)> = (0..probes)
        .map(|p| {
            let mut prng = rng::stream(seed, 7000 + p as u64);
            let dl: Vec<f64> = (0..l.len()).map(|_| prng.random_range(-1.0..1.0)).collect();
            let du: Vec<f64> = (0..u.len()).map(|_| prng.random_range(-1.0..1.0)).collect();
            (dl, du)
        })
        .collect();

    let deltas = [delta, delta / 2.0, delta / 4.0];
    let mut moduli = [0.0_f64; 3];
    for (s_idx, &scale) in deltas.iter().enumerate() {
        let mut eps = 0.0_f64;
        for (dl, du) in &dirs {
            let l2: Vec<f64> = l.iter().zip(dl).map(|(a, b)| a + scale * b).collect();
            let u2 =
                Potential::new(u.values.iter().zip(du).map(|(a, b)| a + scale * b).collect())?;
            let obj = tilted_objective(&l2, &u2, &fam, &[], h);
            let face = lp::optimal_face(&h.lp(obj), face_tol, budget, seed)?;
            for vertex in &face.vertices {
                let d = l1_distance_to_hull(vertex, &base_face.vertices)?;
                eps = eps.max(0.5 * d); // total variation = L1 / 2
            }
        }
        moduli[s_idx] = eps;
    }
    Ok(SemicontinuityReport { deltas, moduli, base_dimension: base_face.dimension })
}
