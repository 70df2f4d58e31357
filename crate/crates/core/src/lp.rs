//! Dense linear programming with optimal-face extraction.
//!
//! The solver is a self-contained two-phase primal simplex on doubles.
//! Entering columns follow Dantzig's rule with a switch to Bland's rule after
//! an iteration threshold, which guarantees termination; leaving rows break
//! ratio ties by pivot magnitude and then by smallest basis index, so the
//! pivot sequence is fully deterministic. Beyond the optimum itself,
//! [`optimal_face`] identifies the whole argmin face and estimates its affine
//! dimension by rank saturation over re-tilted objectives restricted to the
//! zero-reduced-cost support.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::rng;
use rand::Rng;

/// Relation of one constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// One dense constraint row `coeffs . x  (=|<=|>=)  rhs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, relation: Relation::Eq, rhs }
    }

    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, relation: Relation::Le, rhs }
    }
}

/// A linear program `min objective . x` subject to the constraint rows,
/// `x >= 0`, and optional per-variable upper bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bounds: Option<Vec<Option<f64>>>,
}

/// Errors reported by the solver.
#[derive(Debug, Clone, Error)]
pub enum LpError {
    #[error("linear program is malformed: {0}")]
    Malformed(String),
    #[error("infeasible (phase-1 residual {residual:.3e})")]
    Infeasible {
        /// Farkas certificate over the constraint rows (bound rows appended).
        farkas: Vec<f64>,
        residual: f64,
    },
    #[error("objective is unbounded below on the feasible set")]
    Unbounded {
        /// Feasible recession direction with negative objective slope.
        ray: Vec<f64>,
    },
    #[error("simplex iteration limit {0} exceeded")]
    IterationLimit(usize),
}

/// Optimal solution with a dual certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub value: f64,
    pub point: Vec<f64>,
    /// Dual multipliers, one per constraint row (zero for redundant rows).
    pub dual: Vec<f64>,
    /// Reduced costs of the original variables at the optimum.
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
}

/// The argmin face of a linear program.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimalFace {
    pub value: f64,
    /// Feasible points attaining the value, spanning the explored face.
    pub vertices: Vec<Vec<f64>>,
    /// Affine rank of the collected vertices (and recession rays, if any).
    /// A lower bound on the true face dimension; equal to
    /// `hull_dim_bound` when exploration saturated.
    pub dimension: usize,
    /// Dual certificate of optimality.
    pub certificate: Vec<f64>,
    /// Variables with zero reduced cost at the optimum.
    pub support: Vec<usize>,
    /// A priori upper bound on the face dimension from the tight rows.
    pub hull_dim_bound: usize,
    /// Recession directions of the face discovered during exploration.
    pub rays: Vec<Vec<f64>>,
}

const RC_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-7;

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.objective.len();
        if n == 0 {
            return Err(LpError::Malformed("no variables".into()));
        }
        if !self.objective.iter().all(|x| x.is_finite()) {
            return Err(LpError::Malformed("non-finite objective entry".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "constraint {} has {} coefficients, expected {}",
                    i,
                    c.coeffs.len(),
                    n
                )));
            }
            if !c.coeffs.iter().all(|x| x.is_finite()) || !c.rhs.is_finite() {
                return Err(LpError::Malformed(format!(
                    "non-finite entry in constraint {}",
                    i
                )));
            }
        }
        if let Some(ub) = &self.upper_bounds {
            if ub.len() != n {
                return Err(LpError::Malformed(format!(
                    "{} upper bounds for {} variables",
                    ub.len(),
                    n
                )));
            }
            for (j, b) in ub.iter().enumerate() {
                if let Some(b) = b {
                    if !b.is_finite() || *b < 0.0 {
                        return Err(LpError::Malformed(format!(
                            "invalid upper bound for variable {}",
                            j
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Residual of a point against the constraints and sign bounds.
    pub fn feasibility_residual(&self, x: &[f64]) -> f64 {
        let mut r: f64 = 0.0;
        for c in &self.constraints {
            let lhs = linalg::dot(&c.coeffs, x);
            let gap = match c.relation {
                Relation::Eq => (lhs - c.rhs).abs(),
                Relation::Le => (lhs - c.rhs).max(0.0),
                Relation::Ge => (c.rhs - lhs).max(0.0),
            };
            r = r.max(gap);
        }
        for (j, &v) in x.iter().enumerate() {
            r = r.max(-v);
            if let Some(Some(u)) = self.upper_bounds.as_ref().map(|ub| ub[j]) {
                r = r.max(v - u);
            }
        }
        r
    }
}

// ---------------------------------------------------------------------------
// standard form
// ---------------------------------------------------------------------------

struct Standardized {
    rows: usize,
    cols: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    c: Vec<f64>,
    orig_vars: usize,
    /// Sign applied to each internal row relative to the user row.
    row_sign: Vec<f64>,
    /// Index of the user constraint (or `orig + bound index`) per row.
    row_user: Vec<usize>,
    /// Slack column of each row, if the user row was an inequality.
    slack_of_row: Vec<Option<usize>>,
    user_rows: usize,
}

fn standardize(lp: &LinearProgram) -> Standardized {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<f64>, f64, Relation, usize)> = lp
        .constraints
        .iter()
        .enumerate()
        .map(|(i, c)| (c.coeffs.clone(), c.rhs, c.relation, i))
        .collect();
    let user_rows = rows.len();
    if let Some(ub) = &lp.upper_bounds {
        for (j, b) in ub.iter().enumerate() {
            if let Some(u) = b {
                let mut coeffs = vec![0.0; n];
                coeffs[j] = 1.0;
                rows.push((coeffs, *u, Relation::Le, user_rows + j));
            }
        }
    }

    let m = rows.len();
    let n_slacks = rows
        .iter()
        .filter(|r| r.2 != Relation::Eq)
        .count();
    let cols = n + n_slacks;
    let mut a = vec![vec![0.0; cols]; m];
    let mut b = vec![0.0; m];
    let mut c = vec![0.0; cols];
    c[..n].copy_from_slice(&lp.objective);
    let mut row_sign = vec![1.0; m];
    let mut row_user = vec![0usize; m];
    let mut slack_of_row = vec![None; m];

    let mut next_slack = n;
    for (r, (coeffs, rhs, rel, user)) in rows.into_iter().enumerate() {
        let mut coeffs = coeffs;
        let mut rhs = rhs;
        let mut sign = 1.0;
        if rel == Relation::Ge {
            coeffs.iter_mut().for_each(|x| *x = -*x);
            rhs = -rhs;
            sign = -sign;
        }
        a[r][..n].copy_from_slice(&coeffs);
        if rel != Relation::Eq {
            a[r][next_slack] = 1.0;
            slack_of_row[r] = Some(next_slack);
            next_slack += 1;
        }
        if rhs < 0.0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
            rhs = -rhs;
            sign = -sign;
        }
        b[r] = rhs;
        row_sign[r] = sign;
        row_user[r] = user;
    }

    Standardized {
        rows: m,
        cols,
        a,
        b,
        c,
        orig_vars: n,
        row_sign,
        row_user,
        slack_of_row,
        user_rows,
    }
}

// ---------------------------------------------------------------------------
// simplex
// ---------------------------------------------------------------------------

struct Tableau {
    m: usize,
    n_struct: usize,
    width: usize,
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Row bookkeeping carried from the standardized form; shrinks if
    /// redundant rows are removed after phase 1.
    row_sign: Vec<f64>,
    row_user: Vec<usize>,
    iterations: usize,
}

enum PhaseResult {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn new(std: &Standardized) -> Self {
        let m = std.rows;
        let n_struct = std.cols;
        let width = n_struct + m + 1;
        let mut t = vec![vec![0.0; width]; m + 1];
        for r in 0..m {
            t[r][..n_struct].copy_from_slice(&std.a[r]);
            t[r][n_struct + r] = 1.0;
            t[r][width - 1] = std.b[r];
        }
        // Phase-1 objective: sum of artificials, reduced against the basis.
        for r in 0..m {
            for j in 0..width {
                t[m][j] -= t[r][j];
            }
        }
        for r in 0..m {
            t[m][n_struct + r] = 0.0;
        }
        Tableau {
            m,
            n_struct,
            width,
            t,
            basis: (0..m).map(|r| n_struct + r).collect(),
            row_sign: std.row_sign.clone(),
            row_user: std.row_user.clone(),
            iterations: 0,
        }
    }

    fn pivot(&mut self, r: usize, jc: usize) {
        let p = self.t[r][jc];
        let inv = 1.0 / p;
        for x in self.t[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[jc];
            if f != 0.0 {
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= f * y;
                }
                row[jc] = 0.0;
            }
        }
        self.basis[r] = jc;
        self.iterations += 1;
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let obj = &self.t[self.m];
        if bland {
            (0..self.n_struct).find(|&j| obj[j] < -RC_TOL)
        } else {
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.n_struct {
                if obj[j] < -RC_TOL && best.map_or(true, |(_, v)| obj[j] < v) {
                    best = Some((j, obj[j]));
                }
            }
            best.map(|(j, _)| j)
        }
    }

    fn leaving(&self, jc: usize) -> Option<usize> {
        let rhs = self.width - 1;
        let mut best: Option<(usize, f64)> = None;
        for r in 0..self.m {
            let a = self.t[r][jc];
            if a > PIVOT_TOL {
                let ratio = self.t[r][rhs] / a;
                match best {
                    None => best = Some((r, ratio)),
                    Some((br, bratio)) => {
                        let tie = (ratio - bratio).abs() <= 1e-9 * (1.0 + bratio.abs());
                        if ratio < bratio && !tie {
                            best = Some((r, ratio));
                        } else if tie {
                            // Prefer larger pivots, then lower basis index.
                            let cur = self.t[r][jc].abs();
                            let prev = self.t[br][jc].abs();
                            if cur > prev * (1.0 + 1e-12)
                                || (cur >= prev * (1.0 - 1e-12)
                                    && self.basis[r] < self.basis[br])
                            {
                                best = Some((r, ratio.min(bratio)));
                            }
                        }
                    }
                }
            }
        }
        best.map(|(r, _)| r)
    }

    fn run_phase(&mut self, max_iters: usize) -> Result<PhaseResult, LpError> {
        let bland_after = 10 * (self.m + self.n_struct) + 1000;
        let mut local = 0usize;
        loop {
            let bland = local > bland_after;
            let Some(jc) = self.entering(bland) else {
                return Ok(PhaseResult::Optimal);
            };
            let Some(r) = self.leaving(jc) else {
                return Ok(PhaseResult::Unbounded { entering: jc });
            };
            self.pivot(r, jc);
            local += 1;
            if local > max_iters {
                return Err(LpError::IterationLimit(max_iters));
            }
        }
    }

    /// Drop basic artificials after phase 1; removes redundant rows.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.m {
            if self.basis[r] >= self.n_struct {
                let jc = (0..self.n_struct).find(|&j| self.t[r][j].abs() > 1e-7);
                match jc {
                    Some(jc) => self.pivot(r, jc),
                    None => {
                        // Redundant row: remove it.
                        self.t.remove(r);
                        self.basis.remove(r);
                        self.row_sign.remove(r);
                        self.row_user.remove(r);
                        self.m -= 1;
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    fn set_phase2_objective(&mut self, c: &[f64]) {
        let m = self.m;
        for j in 0..self.width {
            self.t[m][j] = 0.0;
        }
        self.t[m][..c.len()].copy_from_slice(c);
        for r in 0..m {
            let cb = if self.basis[r] < c.len() {
                c[self.basis[r]]
            } else {
                0.0
            };
            if cb != 0.0 {
                let row = self.t[r].clone();
                for (x, y) in self.t[m].iter_mut().zip(row.iter()) {
                    *x -= cb * y;
                }
            }
        }
        for r in 0..m {
            self.t[m][self.basis[r]] = 0.0;
        }
    }

    fn point(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n_struct];
        let rhs = self.width - 1;
        for r in 0..self.m {
            if self.basis[r] < self.n_struct {
                x[self.basis[r]] = self.t[r][rhs];
            }
        }
        x
    }

    /// Dual multipliers of the current objective, one per remaining row.
    fn duals(&self, artificial_cost: f64) -> Vec<f64> {
        // rc(artificial_i) = cost_i - y_i, read off the objective row.
        (0..self.m)
            .map(|r| artificial_cost - self.t[self.m][self.n_struct + r])
            .collect()
    }
}

/// Internal solve result that keeps the standardized view alive for
/// face extraction.
struct FullSolution {
    solution: Solution,
    rc_all: Vec<f64>,
    /// Slack column and user-row id per standardized row.
    slack_rows: Vec<(usize, usize)>,
    user_rows: usize,
}

fn solve_standardized(lp: &LinearProgram) -> Result<FullSolution, LpError> {
    lp.validate()?;
    let std = standardize(lp);
    let mut tab = Tableau::new(&std);
    let max_iters = 200 * (std.rows + std.cols) + 20_000;

    match tab.run_phase(max_iters)? {
        PhaseResult::Optimal => {}
        PhaseResult::Unbounded { .. } => {
            // Phase-1 objective is bounded below by zero; cannot happen.
            return Err(LpError::Malformed("phase-1 unbounded".into()));
        }
    }
    let phase1 = -tab.t[tab.m][tab.width - 1];
    let scale = 1.0 + std.b.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if phase1 > FEAS_TOL * scale {
        // Farkas certificate from the phase-1 duals, in user row order.
        let y = tab.duals(1.0);
        let mut farkas = vec![0.0; std.user_rows + (std.rows - std.user_rows)];
        for (r, &u) in tab.row_user.iter().enumerate() {
            farkas[u] = tab.row_sign[r] * y[r];
        }
        return Err(LpError::Infeasible { farkas, residual: phase1 });
    }
    tab.drive_out_artificials();
    tab.set_phase2_objective(&std.c);

    match tab.run_phase(max_iters)? {
        PhaseResult::Optimal => {}
        PhaseResult::Unbounded { entering } => {
            let mut ray = vec![0.0; std.orig_vars];
            if entering < std.orig_vars {
                ray[entering] = 1.0;
            }
            for r in 0..tab.m {
                let bvar = tab.basis[r];
                if bvar < std.orig_vars {
                    ray[bvar] = -tab.t[r][entering];
                }
            }
            return Err(LpError::Unbounded { ray });
        }
    }

    let x = tab.point();
    let point: Vec<f64> = x[..std.orig_vars].to_vec();
    let value = linalg::dot(&lp.objective, &point);
    let rc_all: Vec<f64> = tab.t[tab.m][..std.cols].to_vec();
    let y = tab.duals(0.0);
    let mut dual = vec![0.0; std.user_rows];
    for (r, &u) in tab.row_user.iter().enumerate() {
        if u < std.user_rows {
            dual[u] = tab.row_sign[r] * y[r];
        }
    }
    let solution = Solution {
        value,
        point,
        dual,
        reduced_costs: rc_all[..std.orig_vars].to_vec(),
        iterations: tab.iterations,
    };
    let slack_rows = std
        .slack_of_row
        .iter()
        .enumerate()
        .filter_map(|(r, s)| s.map(|slack| (slack, std.row_user[r])))
        .collect();
    Ok(FullSolution {
        solution,
        rc_all,
        slack_rows,
        user_rows: std.user_rows,
    })
}

/// Solve a linear program; returns the optimal value, an optimal point, and
/// dual multipliers certifying optimality.
pub fn solve(lp: &LinearProgram) -> Result<Solution, LpError> {
    solve_standardized(lp).map(|f| f.solution)
}

// ---------------------------------------------------------------------------
// optimal face
// ---------------------------------------------------------------------------

/// Default relative face tolerance `1e-7 * (1 + |value|)`.
pub fn default_face_tol(value: f64) -> f64 {
    1e-7 * (1.0 + value.abs())
}

/// Extract the argmin face of `lp`.
///
/// The face is the set of feasible points supported on the zero-reduced-cost
/// variables with all positively-priced inequality rows tight. Its dimension
/// is estimated from below by the affine rank of vertices collected while
/// re-optimizing tilted objectives on that support (`budget` trials, seeded),
/// stopping early once the rank meets the a priori bound. The estimate never
/// exceeds the true face dimension.
pub fn optimal_face(
    lp: &LinearProgram,
    face_tol: Option<f64>,
    budget: usize,
    seed: u64,
) -> Result<OptimalFace, LpError> {
    let full = solve_standardized(lp)?;
    let sol = full.solution;
    let ft = face_tol.unwrap_or_else(|| default_face_tol(sol.value));
    let n = lp.num_vars();

    // Support: original variables free to move on the face.
    let support: Vec<usize> = (0..n).filter(|&j| full.rc_all[j] <= ft).collect();
    // Inequality rows whose slack is priced out must be tight on the face.
    let tight_user: Vec<usize> = full
        .slack_rows
        .iter()
        .filter(|&&(slack, _)| full.rc_all[slack] > ft)
        .map(|&(_, user)| user)
        .collect();

    let face_lp = build_face_lp(lp, &support, &tight_user, full.user_rows);

    // A priori bound: |support| minus the rank of the equality system on it.
    let eq_rows: Vec<Vec<f64>> = face_lp
        .constraints
        .iter()
        .filter(|c| c.relation == Relation::Eq)
        .map(|c| c.coeffs.clone())
        .collect();
    let hull_dim_bound = support.len().saturating_sub(linalg::matrix_rank(&eq_rows));

    let lift = |xs: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (k, &j) in support.iter().enumerate() {
            x[j] = xs[k];
        }
        x
    };

    let mut vertices: Vec<Vec<f64>> = vec![sol.point.clone()];
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let mut dimension = 0usize;

    let order = rng::shuffled_indices(&mut rng::stream(seed, 0), support.len());
    let mut rng_obj = rng::stream(seed, 1);
    let value_scale = ft * (1.0 + linalg::norm1(&sol.point));

    for trial in 0..budget {
        if dimension >= hull_dim_bound {
            break;
        }
        let k = support.len();
        if k == 0 {
            break;
        }
        let mut obj = vec![0.0; k];
        if trial < k {
            // Coordinate sweep: push each support variable to its extreme.
            obj[order[trial]] = -1.0;
        } else {
            for o in obj.iter_mut() {
                *o = rng_obj.random_range(-1.0..1.0);
            }
        }
        let trial_lp = LinearProgram {
            objective: obj,
            constraints: face_lp.constraints.clone(),
            upper_bounds: face_lp.upper_bounds.clone(),
        };
        match solve(&trial_lp) {
            Ok(s) => {
                let v = lift(&s.point);
                if (linalg::dot(&lp.objective, &v) - sol.value).abs()
                    > value_scale + ft
                {
                    continue; // numerically off the face; ignore
                }
                let is_new = vertices
                    .iter()
                    .all(|u| max_abs_diff(u, &v) > 1e-9 * (1.0 + linalg::norm_inf(&v)));
                if is_new {
                    vertices.push(v);
                }
            }
            Err(LpError::Unbounded { ray }) => {
                let r = lift(&ray);
                rays.push(r);
            }
            Err(e) => return Err(e),
        }
        dimension = face_dimension(&vertices, &rays);
    }
    dimension = face_dimension(&vertices, &rays);

    Ok(OptimalFace {
        value: sol.value,
        vertices,
        dimension,
        certificate: sol.dual,
        support,
        hull_dim_bound,
        rays,
    })
}

fn face_dimension(vertices: &[Vec<f64>], rays: &[Vec<f64>]) -> usize {
    linalg::affine_rank(vertices, rays)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

fn build_face_lp(
    lp: &LinearProgram,
    support: &[usize],
    tight_user: &[usize],
    user_rows: usize,
) -> LinearProgram {
    let k = support.len();
    let mut constraints = Vec::with_capacity(lp.constraints.len());
    for (i, c) in lp.constraints.iter().enumerate() {
        let coeffs: Vec<f64> = support.iter().map(|&j| c.coeffs[j]).collect();
        let relation = if c.relation != Relation::Eq && tight_user.contains(&i) {
            Relation::Eq
        } else {
            c.relation
        };
        constraints.push(Constraint { coeffs, relation, rhs: c.rhs });
    }
    // Tight upper bounds become equalities on the face.
    let mut upper = None;
    if let Some(ub) = &lp.upper_bounds {
        let mut restricted = vec![None; k];
        for (pos, &j) in support.iter().enumerate() {
            restricted[pos] = ub[j];
        }
        for &user in tight_user {
            if user >= user_rows {
                let var = user - user_rows;
                if let Some(pos) = support.iter().position(|&j| j == var) {
                    let mut coeffs = vec![0.0; k];
                    coeffs[pos] = 1.0;
                    constraints.push(Constraint::eq(coeffs, ub[var].unwrap_or(0.0)));
                }
            }
        }
        upper = Some(restricted);
    }
    LinearProgram {
        objective: vec![0.0; k],
        constraints,
        upper_bounds: upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn simplex_lp(objective: Vec<f64>) -> LinearProgram {
        let n = objective.len();
        LinearProgram {
            objective,
            constraints: vec![Constraint::eq(vec![1.0; n], 1.0)],
            upper_bounds: None,
        }
    }

    #[test]
    fn solve_min_x1_on_segment() {
        let sol = solve(&simplex_lp(vec![1.0, 0.0])).unwrap();
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.point[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sol.point[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn solve_zero_objective_on_simplex() {
        let sol = solve(&simplex_lp(vec![0.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-12);
        assert!(sol.point.iter().all(|&x| x >= -1e-12));
        assert_abs_diff_eq!(sol.point.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn solve_with_inequality() {
        let lp = LinearProgram {
            objective: vec![-1.0, -1.0],
            constraints: vec![Constraint::le(vec![1.0, 1.0], 1.0)],
            upper_bounds: None,
        };
        let sol = solve(&lp).unwrap();
        assert_abs_diff_eq!(sol.value, -1.0, epsilon = 1e-9);
    }

    #[test]
    fn strong_duality_on_small_instances() {
        let lp = LinearProgram {
            objective: vec![2.0, 3.0, 1.0],
            constraints: vec![
                Constraint::eq(vec![1.0, 1.0, 1.0], 1.0),
                Constraint { coeffs: vec![1.0, 0.0, -1.0], relation: Relation::Ge, rhs: -0.25 },
            ],
            upper_bounds: None,
        };
        let sol = solve(&lp).unwrap();
        // dual value: y . rhs over user rows
        let dual_value = sol.dual[0] * 1.0 + sol.dual[1] * -0.25;
        assert_abs_diff_eq!(sol.value, dual_value, epsilon = 1e-7);
        // complementary slackness on variables
        for (x, rc) in sol.point.iter().zip(sol.reduced_costs.iter()) {
            assert!((x * rc).abs() <= 1e-7);
        }
    }

    #[test]
    fn detects_infeasible_with_certificate() {
        let lp = LinearProgram {
            objective: vec![1.0],
            constraints: vec![
                Constraint::eq(vec![1.0], 1.0),
                Constraint::eq(vec![1.0], 2.0),
            ],
            upper_bounds: None,
        };
        match solve(&lp) {
            Err(LpError::Infeasible { farkas, residual }) => {
                assert!(residual > 1e-7);
                assert_eq!(farkas.len(), 2);
            }
            other => panic!("expected infeasible, got {:?}", other.map(|s| s.value)),
        }
    }

    #[test]
    fn detects_unbounded_with_ray() {
        let lp = LinearProgram {
            objective: vec![-1.0, 0.0],
            constraints: vec![Constraint::eq(vec![1.0, -1.0], 0.0)],
            upper_bounds: None,
        };
        match solve(&lp) {
            Err(LpError::Unbounded { ray }) => {
                // Ray must be feasible direction with negative slope.
                assert!(ray[0] > 0.0);
                assert_abs_diff_eq!(ray[0] - ray[1], 0.0, epsilon = 1e-9);
            }
            other => panic!("expected unbounded, got {:?}", other.map(|s| s.value)),
        }
    }

    #[test]
    fn upper_bounds_are_respected() {
        let lp = LinearProgram {
            objective: vec![-1.0],
            constraints: vec![],
            upper_bounds: Some(vec![Some(0.75)]),
        };
        let sol = solve(&lp).unwrap();
        assert_abs_diff_eq!(sol.value, -0.75, epsilon = 1e-9);
    }

    #[test]
    fn face_of_unique_optimum_is_a_point() {
        let face = optimal_face(&simplex_lp(vec![1.0, 0.0]), None, 64, 0).unwrap();
        assert_eq!(face.dimension, 0);
        assert_eq!(face.vertices.len(), 1);
        assert_abs_diff_eq!(face.vertices[0][1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn face_of_zero_objective_is_whole_simplex() {
        let face = optimal_face(&simplex_lp(vec![0.0, 0.0, 0.0]), None, 64, 0).unwrap();
        assert_eq!(face.dimension, 2);
        assert_eq!(face.hull_dim_bound, 2);
    }

    #[test]
    fn face_dimensions_on_three_simplex() {
        // min x1+x2: unique vertex (0,0,1).
        let face = optimal_face(&simplex_lp(vec![1.0, 1.0, 0.0]), None, 64, 0).unwrap();
        assert_eq!(face.dimension, 0);
        assert_abs_diff_eq!(face.vertices[0][2], 1.0, epsilon = 1e-9);
        // min x3: the edge x3 = 0.
        let face = optimal_face(&simplex_lp(vec![0.0, 0.0, 1.0]), None, 64, 0).unwrap();
        assert_eq!(face.dimension, 1);
    }

    #[test]
    fn face_vertices_attain_value_and_are_feasible() {
        let lp = LinearProgram {
            objective: vec![0.0, 0.0, 1.0, 1.0],
            constraints: vec![
                Constraint::eq(vec![1.0, 1.0, 1.0, 1.0], 1.0),
                Constraint::le(vec![1.0, 0.0, 0.0, 0.0], 0.5),
            ],
            upper_bounds: None,
        };
        let face = optimal_face(&lp, None, 64, 7).unwrap();
        for v in &face.vertices {
            assert!(lp.feasibility_residual(v) <= 1e-8);
            assert!((linalg::dot(&lp.objective, v) - face.value).abs() <= 1e-7);
        }
        assert_eq!(face.dimension, 1);
    }

    #[test]
    fn dimension_is_monotone_in_budget() {
        let lp = simplex_lp(vec![0.0; 6]);
        let mut prev = 0;
        for budget in [0, 1, 2, 4, 8, 16, 64] {
            let face = optimal_face(&lp, None, budget, 3).unwrap();
            assert!(face.dimension >= prev);
            prev = face.dimension;
        }
        assert_eq!(prev, 5);
    }

    #[test]
    fn unbounded_face_reports_rays() {
        // min 0 over {x1 - x2 = 0}: face is an unbounded line.
        let lp = LinearProgram {
            objective: vec![0.0, 0.0],
            constraints: vec![Constraint::eq(vec![1.0, -1.0], 0.0)],
            upper_bounds: None,
        };
        let face = optimal_face(&lp, None, 16, 0).unwrap();
        assert_eq!(face.dimension, 1);
        assert!(!face.rays.is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let lp = LinearProgram {
            objective: vec![1.0, 2.0],
            constraints: vec![Constraint::le(vec![1.0, 1.0], 1.0)],
            upper_bounds: Some(vec![None, Some(0.5)]),
        };
        let s = serde_json::to_string(&lp).unwrap();
        let back: LinearProgram = serde_json::from_str(&s).unwrap();
        assert_eq!(back.objective, lp.objective);
        assert_eq!(back.constraints[0].relation, Relation::Le);
    }
}
