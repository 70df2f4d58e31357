//! Finite state spaces and discrete probability measures.
//!
//! A [`StateSpace`] pairs a base point set with a phase point set fibered over
//! it; phase measures project to base measures along the fibration. The
//! module also provides potentials (functions on the base), the total
//! variation metric, separating families of test functions whose joint
//! integrals pin measures down to a prescribed diameter, and the constraint
//! polytopes that the LP engine optimizes over.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export;
use crate::linalg;
use crate::lp::{Constraint, LinearProgram};
use crate::rng;
use rand::Rng;

/// A point of the base set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasePoint {
    pub label: String,
    pub coords: Vec<f64>,
}

/// A point of the phase set: a base index plus fiber coordinates
/// (velocity-like data).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhasePoint {
    pub label: String,
    pub base_index: usize,
    pub coords: Vec<f64>,
}

/// A finite phase space fibered over a finite base.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpace {
    pub base_points: Vec<BasePoint>,
    pub phase_points: Vec<PhasePoint>,
}

#[derive(Debug, Clone, Error)]
pub enum MeasureError {
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("invalid measure: {0}")]
    Invalid(String),
    #[error("invalid state space: {0}")]
    InvalidSpace(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl StateSpace {
    pub fn new(
        base_points: Vec<BasePoint>,
        phase_points: Vec<PhasePoint>,
    ) -> Result<Self, MeasureError> {
        let nb = base_points.len();
        if nb == 0 || phase_points.is_empty() {
            return Err(MeasureError::InvalidSpace("empty base or phase set".into()));
        }
        for p in &phase_points {
            if p.base_index >= nb {
                return Err(MeasureError::InvalidSpace(format!(
                    "phase point '{}' references base index {} out of {}",
                    p.label, p.base_index, nb
                )));
            }
        }
        Ok(StateSpace { base_points, phase_points })
    }

    /// A space whose phase set equals its base set (identity fibration).
    pub fn trivial(n: usize) -> Self {
        let base_points = (0..n)
            .map(|i| BasePoint { label: format!("s{i}"), coords: vec![i as f64] })
            .collect();
        let phase_points = (0..n)
            .map(|i| PhasePoint {
                label: format!("s{i}"),
                base_index: i,
                coords: Vec::new(),
            })
            .collect();
        StateSpace { base_points, phase_points }
    }

    pub fn base_len(&self) -> usize {
        self.base_points.len()
    }

    pub fn phase_len(&self) -> usize {
        self.phase_points.len()
    }
}

/// Nonnegative weights summing to one over a finite state set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Strict constructor: weights must be nonnegative and sum to 1 within
    /// `1e-10`.
    pub fn new(weights: Vec<f64>) -> Result<Self, MeasureError> {
        if weights.iter().any(|&w| !w.is_finite() || w < -1e-12) {
            return Err(MeasureError::Invalid("negative or non-finite weight".into()));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-10 {
            return Err(MeasureError::Invalid(format!("mass {mass} != 1")));
        }
        Ok(DiscreteMeasure {
            weights: weights.into_iter().map(|w| w.max(0.0)).collect(),
        })
    }

    /// Lenient constructor for LP output: clamps tiny negative entries and
    /// renormalizes a mass drift of at most `1e-8`.
    pub fn from_lp_point(point: &[f64]) -> Result<Self, MeasureError> {
        if point.iter().any(|&w| !w.is_finite() || w < -1e-8) {
            return Err(MeasureError::Invalid(
                "LP point has a significantly negative weight".into(),
            ));
        }
        let mut weights: Vec<f64> = point.iter().map(|&w| w.max(0.0)).collect();
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > 1e-8 {
            return Err(MeasureError::Invalid(format!("LP point mass {mass} != 1")));
        }
        weights.iter_mut().for_each(|w| *w /= mass);
        Ok(DiscreteMeasure { weights })
    }

    pub fn dirac(index: usize, len: usize) -> Self {
        let mut weights = vec![0.0; len];
        weights[index] = 1.0;
        DiscreteMeasure { weights }
    }

    pub fn uniform(indices: &[usize], len: usize) -> Self {
        let mut weights = vec![0.0; len];
        let w = 1.0 / indices.len() as f64;
        for &i in indices {
            weights[i] += w;
        }
        DiscreteMeasure { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// CSV `label,weight` rows for the given state labels.
    pub fn to_csv(&self, labels: &[String]) -> String {
        let mut out = String::from("label,weight\n");
        for (l, w) in labels.iter().zip(&self.weights) {
            out.push_str(&export::csv_record([l.clone(), export::fmt_f64(*w)]));
        }
        out
    }
}

/// A function on the base set, paired with measures by summation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub values: Vec<f64>,
}

impl Potential {
    pub fn new(values: Vec<f64>) -> Result<Self, MeasureError> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MeasureError::Invalid("non-finite potential value".into()));
        }
        Ok(Potential { values })
    }

    pub fn zero(len: usize) -> Self {
        Potential { values: vec![0.0; len] }
    }

    pub fn indicator(index: usize, len: usize) -> Self {
        let mut values = vec![0.0; len];
        values[index] = 1.0;
        Potential { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_len(expected: usize, got: usize) -> Result<(), MeasureError> {
    if expected != got {
        return Err(MeasureError::Length { expected, got });
    }
    Ok(())
}

/// `<u, nu> = sum_s u(s) nu(s)`; bilinear in both arguments.
pub fn pair(u: &Potential, nu: &DiscreteMeasure) -> Result<f64, MeasureError> {
    check_len(u.len(), nu.len())?;
    Ok(linalg::dot(&u.values, &nu.weights))
}

/// Pair a base potential with a phase measure through the fibration,
/// without materializing the projection.
pub fn pair_phase(
    space: &StateSpace,
    u: &Potential,
    mu: &DiscreteMeasure,
) -> Result<f64, MeasureError> {
    check_len(u.len(), space.base_len())?;
    check_len(space.phase_len(), mu.len())?;
    Ok(space
        .phase_points
        .iter()
        .zip(&mu.weights)
        .map(|(p, w)| u.values[p.base_index] * w)
        .sum())
}

/// Push a phase measure down to the base; mass is preserved.
pub fn project(space: &StateSpace, mu: &DiscreteMeasure) -> Result<DiscreteMeasure, MeasureError> {
    check_len(space.phase_len(), mu.len())?;
    let mut weights = vec![0.0; space.base_len()];
    for (p, w) in space.phase_points.iter().zip(&mu.weights) {
        weights[p.base_index] += w;
    }
    Ok(DiscreteMeasure { weights })
}

/// Total variation distance `1/2 sum |eta(s) - nu(s)|`; bounded by 1 on
/// probability measures.
pub fn metric_d(eta: &DiscreteMeasure, nu: &DiscreteMeasure) -> Result<f64, MeasureError> {
    check_len(eta.len(), nu.len())?;
    Ok(0.5
        * eta
            .weights
            .iter()
            .zip(&nu.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

// ---------------------------------------------------------------------------
// separating families
// ---------------------------------------------------------------------------

/// How a separating family was certified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verification {
    /// The family is injective on the simplex: fibers are single points.
    Exact,
    /// No sampled fiber pair at distance `>= epsilon` was found.
    Sampled { epsilon: f64, probes: usize },
    /// No certification was attempted or achieved.
    Unverified,
}

/// Finitely many test potentials `w_1..w_m`; the map
/// `T_m(nu) = (<w_i, nu>)_i` separates measures up to the verified diameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparatingFamily {
    pub functions: Vec<Potential>,
    pub verification: Verification,
}

impl SeparatingFamily {
    pub fn from_potentials(functions: Vec<Potential>) -> Self {
        SeparatingFamily { functions, verification: Verification::Unverified }
    }

    /// All `N - 1` coordinate indicators: exactly separating on a base of
    /// size `N`.
    pub fn full_indicators(base_len: usize) -> Self {
        let functions = (0..base_len.saturating_sub(1))
            .map(|i| Potential::indicator(i, base_len))
            .collect();
        SeparatingFamily { functions, verification: Verification::Exact }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// `T_m(nu)` for a base measure.
    pub fn image(&self, nu: &DiscreteMeasure) -> Result<Vec<f64>, MeasureError> {
        self.functions.iter().map(|w| pair(w, nu)).collect()
    }
}

/// Greedily add coordinate indicators (in seeded random order) until sampled
/// fibers of `T_m` have diameter below `epsilon` in total variation.
///
/// Fibers are probed constructively: pairs with equal image are built from
/// the null space of the family on the simplex tangent space, so the check is
/// not vacuous. When the null space is trivial the family is exactly
/// separating; on a base of `N` points this happens after at most `N - 1`
/// indicators.
pub fn build_separating_family(
    space: &StateSpace,
    epsilon: f64,
    sample_budget: usize,
    seed: u64,
) -> Result<SeparatingFamily, MeasureError> {
    if !(epsilon > 0.0) {
        return Err(MeasureError::Invalid("epsilon must be positive".into()));
    }
    let n = space.base_len();
    let mut rng = rng::stream(seed, 0);
    let order = rng::shuffled_indices(&mut rng, n);
    let mut functions: Vec<Potential> = Vec::new();

    loop {
        match verify_family(&functions, n, epsilon, sample_budget, &mut rng) {
            Some(verification) => {
                return Ok(SeparatingFamily { functions, verification });
            }
            None => {
                let next = order
                    .iter()
                    .copied()
                    .find(|&i| {
                        functions.iter().all(|w| w.values[i] != 1.0)
                    });
                match next {
                    Some(i) if functions.len() + 1 < n || n == 1 => {
                        functions.push(Potential::indicator(i, n))
                    }
                    Some(i) => {
                        functions.push(Potential::indicator(i, n));
                        // N - 1 indicators are exactly separating.
                        return Ok(SeparatingFamily {
                            functions,
                            verification: Verification::Exact,
                        });
                    }
                    None => {
                        return Ok(SeparatingFamily {
                            functions,
                            verification: Verification::Unverified,
                        })
                    }
                }
            }
        }
    }
}

/// `Some(verification)` if the family passes, `None` if a violating fiber
/// pair was found.
fn verify_family(
    functions: &[Potential],
    n: usize,
    epsilon: f64,
    sample_budget: usize,
    rng: &mut impl Rng,
) -> Option<Verification> {
    // Tangent directions of the simplex that the family cannot see.
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0; n]];
    rows.extend(functions.iter().map(|w| w.values.clone()));
    let null = linalg::null_space_basis(&rows, n);
    if null.is_empty() {
        return Some(Verification::Exact);
    }
    if sample_budget == 0 {
        return None;
    }
    for _ in 0..sample_budget {
        let mu = rng::simplex_point(rng, n);
        // Random direction inside the unseen subspace.
        let mut z = vec![0.0; n];
        for basis_vec in &null {
            let c: f64 = rng.random_range(-1.0..1.0);
            for (zi, bi) in z.iter_mut().zip(basis_vec) {
                *zi += c * bi;
            }
        }
        let norm = linalg::norm2(&z);
        if norm < 1e-12 {
            continue;
        }
        z.iter_mut().for_each(|x| *x /= norm);
        // Extreme fiber pair through mu along z.
        let mut t_plus = f64::INFINITY;
        let mut t_minus = f64::NEG_INFINITY;
        for (m, zi) in mu.iter().zip(&z) {
            if *zi < -1e-14 {
                t_plus = t_plus.min(-m / zi);
            } else if *zi > 1e-14 {
                t_minus = t_minus.max(-m / zi);
            }
        }
        if !t_plus.is_finite() || !t_minus.is_finite() {
            continue;
        }
        let d = 0.5 * (t_plus - t_minus) * linalg::norm1(&z);
        if d >= epsilon {
            return None;
        }
    }
    Some(Verification::Sampled { epsilon, probes: sample_budget })
}

// ---------------------------------------------------------------------------
// measure polytopes
// ---------------------------------------------------------------------------

/// The compact `H`: phase measures cut out by linear constraints (holonomy or
/// flow invariance) together with the unit-mass row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurePolytope {
    pub space: StateSpace,
    pub rows: Vec<Constraint>,
}

impl MeasurePolytope {
    /// Build from structural rows; the mass row `sum mu = 1` is prepended.
    pub fn with_mass(space: StateSpace, mut structural: Vec<Constraint>) -> Self {
        let n = space.phase_len();
        let mut rows = vec![Constraint::eq(vec![1.0; n], 1.0)];
        rows.append(&mut structural);
        MeasurePolytope { space, rows }
    }

    /// The full probability simplex over the phase points.
    pub fn simplex(space: StateSpace) -> Self {
        MeasurePolytope::with_mass(space, Vec::new())
    }

    pub fn num_vars(&self) -> usize {
        self.space.phase_len()
    }

    /// Linear program minimizing `objective . mu` over the polytope.
    pub fn lp(&self, objective: Vec<f64>) -> LinearProgram {
        LinearProgram {
            objective,
            constraints: self.rows.clone(),
            upper_bounds: None,
        }
    }

    /// Same program with extra equality rows appended.
    pub fn lp_with_rows(&self, objective: Vec<f64>, extra: Vec<Constraint>) -> LinearProgram {
        let mut constraints = self.rows.clone();
        constraints.extend(extra);
        LinearProgram { objective, constraints, upper_bounds: None }
    }
}

// ---------------------------------------------------------------------------
// grid potentials and the smooth-topology metric
// ---------------------------------------------------------------------------

/// A potential sampled on a periodic grid, with enough structure to take
/// finite-difference derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPotential {
    pub values: Vec<f64>,
    /// Points per axis (row-major layout).
    pub shape: Vec<usize>,
    /// Grid spacing per axis.
    pub spacing: Vec<f64>,
}

/// Distance value together with the truncation-tail bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CinfDistance {
    pub value: f64,
    /// Bound on the dropped tail: `(pi/2) * 2^{-k_max}`.
    pub tail_bound: f64,
}

impl GridPotential {
    pub fn new(values: Vec<f64>, shape: Vec<usize>, spacing: Vec<f64>) -> Result<Self, MeasureError> {
        let total: usize = shape.iter().product();
        if shape.is_empty() || shape.len() != spacing.len() {
            return Err(MeasureError::GridMismatch("shape/spacing length".into()));
        }
        if total != values.len() {
            return Err(MeasureError::Length { expected: total, got: values.len() });
        }
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(MeasureError::GridMismatch("non-positive spacing".into()));
        }
        Ok(GridPotential { values, shape, spacing })
    }

    fn central_difference(&self, data: &[f64], axis: usize) -> Vec<f64> {
        let n_axis = self.shape[axis];
        let stride: usize = self.shape[axis + 1..].iter().product();
        let block = n_axis * stride;
        let h = self.spacing[axis];
        let mut out = vec![0.0; data.len()];
        for (i, o) in out.iter_mut().enumerate() {
            let pos = (i / stride) % n_axis;
            let base = i / block * block + i % stride;
            let up = base + ((pos + 1) % n_axis) * stride;
            let dn = base + ((pos + n_axis - 1) % n_axis) * stride;
            *o = (data[up] - data[dn]) / (2.0 * h);
        }
        out
    }
}

/// Metric of the smooth topology on grid potentials:
/// `sum_{k<=k_max} arctan(||u - v||_k) / 2^k` where `||.||_k` is the sup norm
/// over all periodic central-difference derivatives of order at most `k`.
pub fn cinf_metric(
    u: &GridPotential,
    v: &GridPotential,
    k_max: usize,
) -> Result<CinfDistance, MeasureError> {
    if u.shape != v.shape || u.spacing != v.spacing {
        return Err(MeasureError::GridMismatch("incompatible grids".into()));
    }
    let diff: Vec<f64> = u
        .values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| a - b)
        .collect();
    let dims = u.shape.len();

    // level[j] holds all distinct order-j mixed derivatives (axis-sorted).
    let mut level: Vec<(usize, Vec<f64>)> = vec![(0, diff)];
    let mut sup_by_order: Vec<f64> = Vec::with_capacity(k_max + 1);
    let mut norm_k = 0.0_f64;
    let mut value = 0.0;
    for k in 0..=k_max {
        let sup = level
            .iter()
            .map(|(_, d)| linalg::norm_inf(d))
            .fold(0.0_f64, f64::max);
        sup_by_order.push(sup);
        norm_k = norm_k.max(sup);
        value += norm_k.atan() / 2f64.powi(k as i32);
        if k < k_max {
            let mut next: Vec<(usize, Vec<f64>)> = Vec::new();
            for (min_axis, d) in &level {
                for axis in *min_axis..dims {
                    next.push((axis, u.central_difference(d, axis)));
                }
            }
            level = next;
        }
    }
    let tail_bound = std::f64::consts::FRAC_PI_2 * 2f64.powi(-(k_max as i32));
    Ok(CinfDistance { value, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_level_space() -> StateSpace {
        // 3 base points, 5 phase points (base 0 has three fibers)
        StateSpace::new(
            (0..3)
                .map(|i| BasePoint { label: format!("b{i}"), coords: vec![i as f64] })
                .collect(),
            vec![
                PhasePoint { label: "p0".into(), base_index: 0, coords: vec![-1.0] },
                PhasePoint { label: "p1".into(), base_index: 0, coords: vec![0.0] },
                PhasePoint { label: "p2".into(), base_index: 0, coords: vec![1.0] },
                PhasePoint { label: "p3".into(), base_index: 1, coords: vec![0.0] },
                PhasePoint { label: "p4".into(), base_index: 2, coords: vec![0.0] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn pair_examples() {
        let nu = DiscreteMeasure::new(vec![0.25, 0.5, 0.25]).unwrap();
        let one = Potential::new(vec![1.0, 1.0, 1.0]).unwrap();
        let zero = Potential::zero(3);
        assert_abs_diff_eq!(pair(&one, &nu).unwrap(), 1.0);
        assert_abs_diff_eq!(pair(&zero, &nu).unwrap(), 0.0);
        let dirac = DiscreteMeasure::dirac(1, 3);
        assert_abs_diff_eq!(pair(&Potential::indicator(1, 3), &dirac).unwrap(), 1.0);
        assert!(pair(&one, &DiscreteMeasure::dirac(0, 2)).is_err());
    }

    #[test]
    fn project_examples() {
        let space = two_level_space();
        let dirac = DiscreteMeasure::dirac(3, 5);
        assert_eq!(project(&space, &dirac).unwrap().weights, vec![0.0, 1.0, 0.0]);

        let split = DiscreteMeasure::uniform(&[0, 2], 5);
        assert_eq!(project(&space, &split).unwrap().weights, vec![1.0, 0.0, 0.0]);

        let spread = DiscreteMeasure::uniform(&[1, 3, 4], 5);
        let base = project(&space, &spread).unwrap();
        for w in base.weights {
            assert_abs_diff_eq!(w, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn metric_examples() {
        let a = DiscreteMeasure::new(vec![0.5, 0.5]).unwrap();
        let b = DiscreteMeasure::new(vec![1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(metric_d(&a, &a).unwrap(), 0.0);
        assert_abs_diff_eq!(metric_d(&a, &b).unwrap(), 0.5);
        let d0 = DiscreteMeasure::dirac(0, 4);
        let d3 = DiscreteMeasure::dirac(3, 4);
        assert_abs_diff_eq!(metric_d(&d0, &d3).unwrap(), 1.0);
    }

    #[test]
    fn duality_square() {
        let space = two_level_space();
        let u = Potential::new(vec![0.3, -1.2, 2.0]).unwrap();
        let mu = DiscreteMeasure::new(vec![0.1, 0.2, 0.3, 0.15, 0.25]).unwrap();
        let lhs = pair(&u, &project(&space, &mu).unwrap()).unwrap();
        let rhs = pair_phase(&space, &u, &mu).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn separating_family_two_points() {
        let space = StateSpace::trivial(2);
        let fam = build_separating_family(&space, 0.5, 100, 0).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.verification, Verification::Exact);
    }

    #[test]
    fn separating_family_grows_on_three_points() {
        // One indicator cannot separate (0,1,0) from (0,0,1): fiber diameter 1.
        let space = StateSpace::trivial(3);
        let fam = build_separating_family(&space, 1e-3, 50, 0).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.verification, Verification::Exact);
        // images of the forced counterexample differ once the family is full
        let eta = DiscreteMeasure::new(vec![0.0, 1.0, 0.0]).unwrap();
        let nu = DiscreteMeasure::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert_ne!(fam.image(&eta).unwrap(), fam.image(&nu).unwrap());
    }

    #[test]
    fn full_indicator_family_is_injective() {
        let fam = SeparatingFamily::full_indicators(5);
        assert_eq!(fam.len(), 4);
        assert_eq!(fam.verification, Verification::Exact);
    }

    #[test]
    fn cinf_metric_examples() {
        let u = GridPotential::new(vec![1.0, 2.0, 0.5, 1.5], vec![4], vec![0.25]).unwrap();
        let same = cinf_metric(&u, &u, 5).unwrap();
        assert_abs_diff_eq!(same.value, 0.0);

        // constant difference c with k_max = 0: arctan(|c|)
        let v = GridPotential::new(vec![0.0, 1.0, -0.5, 0.5], vec![4], vec![0.25]).unwrap();
        let d = cinf_metric(&u, &v, 0).unwrap();
        assert_abs_diff_eq!(d.value, 1.0_f64.atan(), epsilon = 1e-12);
        assert_abs_diff_eq!(d.tail_bound, std::f64::consts::FRAC_PI_2, epsilon = 1e-12);

        // always below pi
        let d = cinf_metric(&u, &v, 12).unwrap();
        assert!(d.value + d.tail_bound <= std::f64::consts::PI);
    }

    #[test]
    fn cinf_metric_rejects_mismatched_grids() {
        let u = GridPotential::new(vec![0.0; 4], vec![4], vec![0.25]).unwrap();
        let v = GridPotential::new(vec![0.0; 6], vec![6], vec![1.0 / 6.0]).unwrap();
        assert!(cinf_metric(&u, &v, 3).is_err());
    }

    #[test]
    fn polytope_simplex_feasible() {
        let space = StateSpace::trivial(3);
        let poly = MeasurePolytope::simplex(space);
        let sol = crate::lp::solve(&poly.lp(vec![0.0, 1.0, 2.0])).unwrap();
        assert_abs_diff_eq!(sol.value, 0.0, epsilon = 1e-9);
        let mu = DiscreteMeasure::from_lp_point(&sol.point).unwrap();
        assert_abs_diff_eq!(mu.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
