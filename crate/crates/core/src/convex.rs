//! Piecewise-linear convex analysis.
//!
//! Convex functions are represented as a finite maximum of affine pieces plus
//! an optional quadratic term `q |x|^2`, which keeps subdifferentials exactly
//! computable: at any point the subdifferential is the convex hull of the
//! active-piece gradients shifted by `2 q x`. On top of this representation
//! the module provides the stratum scan `Σ_k = { x : dim ∂f(x) >= k }` with
//! box-counting estimates, strong-convexity augmentation, the Lipschitz
//! inverse map of the subdifferential, and Legendre conjugation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::export;
use crate::linalg;

/// One affine piece `x -> gradient . x + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub gradient: Vec<f64>,
    pub offset: f64,
}

impl AffinePiece {
    pub fn new(gradient: Vec<f64>, offset: f64) -> Self {
        AffinePiece { gradient, offset }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.gradient, x) + self.offset
    }
}

/// `f(x) = max_i (g_i . x + b_i) + q |x|^2` with `q >= 0`.
///
/// With `q > 0` the function is `2q`-strongly convex.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConvexFunction {
    pub pieces: Vec<AffinePiece>,
    pub quadratic_coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PcfJson {
    n: usize,
    q: f64,
    pieces: Vec<AffinePiece>,
}

impl Serialize for PiecewiseConvexFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PcfJson {
            n: self.dim(),
            q: self.quadratic_coeff,
            pieces: self.pieces.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseConvexFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = PcfJson::deserialize(d)?;
        let f = PiecewiseConvexFunction { pieces: raw.pieces, quadratic_coeff: raw.q };
        f.validate().map_err(serde::de::Error::custom)?;
        if f.dim() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "declared dimension {} does not match pieces ({})",
                raw.n,
                f.dim()
            )));
        }
        Ok(f)
    }
}

/// Generating subgradients of `∂f(x)` together with its affine dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubdiffPolytope {
    pub vertices: Vec<Vec<f64>>,
    pub dimension: usize,
}

/// Grid cells where `dim ∂f >= k`, with a two-scale box-count exponent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumScan {
    pub k: usize,
    /// Multi-indices of marked cells at the coarse cell size.
    pub cells: Vec<Vec<usize>>,
    pub cell_size: f64,
    /// `log2(count(h/2) / count(h))`; zero when either count is zero.
    pub box_count_exponent: f64,
    /// Marked-cell count at the refined size `cell_size / 2`.
    pub fine_count: usize,
}

impl StratumScan {
    /// CSV rows `cell_index..., k`, one per marked coarse cell.
    pub fn to_csv(&self) -> String {
        let dim = self.cells.first().map_or(0, |c| c.len());
        let mut out = String::new();
        let mut header: Vec<String> = (0..dim).map(|a| format!("cell_{a}")).collect();
        header.push("k".into());
        out.push_str(&export::csv_record(header));
        for cell in &self.cells {
            let mut fields: Vec<String> = cell.iter().map(|i| i.to_string()).collect();
            fields.push(self.k.to_string());
            out.push_str(&export::csv_record(fields));
        }
        out
    }
}

#[derive(Debug, Clone, Error)]
pub enum ConvexError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid function: {0}")]
    Invalid(String),
    #[error("empty scan box (axis {0})")]
    EmptyBox(usize),
    #[error("k = {k} out of range 0..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("strong convexity q >= 1 required, got q = {0}")]
    NotStronglyConvex(f64),
    #[error("subgradient {0:?} not attained inside the search box")]
    RangeError(Vec<f64>),
    #[error("active-set iteration failed to converge")]
    NoConvergence,
}

/// Scale-aware activity threshold; a piece is active when its value is within
/// `tol * (1 + |max|)` of the maximum.
fn activity_cut(max: f64, tol: f64) -> f64 {
    tol * (1.0 + max.abs())
}

impl PiecewiseConvexFunction {
    pub fn new(pieces: Vec<AffinePiece>, quadratic_coeff: f64) -> Result<Self, ConvexError> {
        let f = PiecewiseConvexFunction { pieces, quadratic_coeff };
        f.validate()?;
        Ok(f)
    }

    /// Absolute value on the line: `max(x, -x)`.
    pub fn abs_1d() -> Self {
        PiecewiseConvexFunction {
            pieces: vec![
                AffinePiece::new(vec![1.0], 0.0),
                AffinePiece::new(vec![-1.0], 0.0),
            ],
            quadratic_coeff: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, |p| p.gradient.len())
    }

    pub fn validate(&self) -> Result<(), ConvexError> {
        if self.pieces.is_empty() {
            return Err(ConvexError::Invalid("no pieces".into()));
        }
        let n = self.dim();
        if n == 0 {
            return Err(ConvexError::Invalid("zero-dimensional domain".into()));
        }
        for p in &self.pieces {
            if p.gradient.len() != n {
                return Err(ConvexError::Dimension { expected: n, got: p.gradient.len() });
            }
            if !p.gradient.iter().all(|x| x.is_finite()) || !p.offset.is_finite() {
                return Err(ConvexError::Invalid("non-finite piece".into()));
            }
        }
        if !self.quadratic_coeff.is_finite() || self.quadratic_coeff < 0.0 {
            return Err(ConvexError::Invalid("quadratic coefficient must be >= 0".into()));
        }
        Ok(())
    }

    fn check_point(&self, x: &[f64]) -> Result<(), ConvexError> {
        if x.len() != self.dim() {
            return Err(ConvexError::Dimension { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// `max_i (g_i . x + b_i) + q |x|^2`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ConvexError> {
        self.check_point(x)?;
        let max = self
            .pieces
            .iter()
            .map(|p| p.value(x))
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(max + self.quadratic_coeff * linalg::dot(x, x))
    }

    /// Indices of pieces active at `x` within the scale-aware tolerance.
    pub fn active_pieces(&self, x: &[f64], tol: f64) -> Result<Vec<usize>, ConvexError> {
        self.check_point(x)?;
        let values: Vec<f64> = self.pieces.iter().map(|p| p.value(x)).collect();
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let cut = activity_cut(max, tol);
        Ok((0..values.len()).filter(|&i| max - values[i] <= cut).collect())
    }

    /// Subdifferential at `x`: convex hull data of the active gradients
    /// shifted by `2 q x`, with its affine dimension.
    pub fn subdifferential(&self, x: &[f64], tol: f64) -> Result<SubdiffPolytope, ConvexError> {
        let active = self.active_pieces(x, tol)?;
        let shift: Vec<f64> = x.iter().map(|v| 2.0 * self.quadratic_coeff * v).collect();
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for i in active {
            let g: Vec<f64> = self.pieces[i]
                .gradient
                .iter()
                .zip(&shift)
                .map(|(a, b)| a + b)
                .collect();
            let is_new = vertices
                .iter()
                .all(|u| u.iter().zip(&g).any(|(p, q)| (p - q).abs() > 1e-12));
            if is_new {
                vertices.push(g);
            }
        }
        let dimension = linalg::affine_rank(&vertices, &[]);
        Ok(SubdiffPolytope { vertices, dimension })
    }

    /// Add `|x|^2`: increments the quadratic coefficient by one. The result
    /// satisfies the strong subgradient inequality
    /// `g(y) >= g(x) + l(y - x) + 1/2 |y - x|^2` for every `l` in `∂g(x)`.
    pub fn augment_strongly_convex(&self) -> Self {
        PiecewiseConvexFunction {
            pieces: self.pieces.clone(),
            quadratic_coeff: self.quadratic_coeff + 1.0,
        }
    }
}

// ---------------------------------------------------------------------------
// stratum scan
// ---------------------------------------------------------------------------

/// Mark every grid cell of `box_bounds` whose sample points (cell centers,
/// with activity widened to the cell radius) see `dim ∂f >= k`. A second pass
/// at half the cell size yields the box-count exponent.
pub fn sigma_k_scan(
    f: &PiecewiseConvexFunction,
    k: usize,
    box_bounds: &[(f64, f64)],
    cell_size: f64,
) -> Result<StratumScan, ConvexError> {
    f.validate()?;
    let n = f.dim();
    if box_bounds.len() != n {
        return Err(ConvexError::Dimension { expected: n, got: box_bounds.len() });
    }
    if k > n {
        return Err(ConvexError::KOutOfRange { k, n });
    }
    for (axis, &(lo, hi)) in box_bounds.iter().enumerate() {
        if !(hi > lo) {
            return Err(ConvexError::EmptyBox(axis));
        }
    }
    if !(cell_size > 0.0) {
        return Err(ConvexError::Invalid("cell_size must be positive".into()));
    }

    let cells = scan_cells(f, k, box_bounds, cell_size);
    let fine = scan_cells(f, k, box_bounds, cell_size / 2.0);
    let exponent = if cells.is_empty() || fine.is_empty() {
        0.0
    } else {
        (fine.len() as f64 / cells.len() as f64).log2()
    };
    Ok(StratumScan {
        k,
        cells,
        cell_size,
        box_count_exponent: exponent,
        fine_count: fine.len(),
    })
}

fn scan_cells(
    f: &PiecewiseConvexFunction,
    k: usize,
    box_bounds: &[(f64, f64)],
    h: f64,
) -> Vec<Vec<usize>> {
    let n = f.dim();
    let counts: Vec<usize> = box_bounds
        .iter()
        .map(|&(lo, hi)| ((hi - lo) / h).ceil().max(1.0) as usize)
        .collect();
    let total: usize = counts.iter().product();
    let mut marked = Vec::new();
    let mut idx = vec![0usize; n];
    for flat in 0..total {
        let mut rem = flat;
        for a in (0..n).rev() {
            idx[a] = rem % counts[a];
            rem /= counts[a];
        }
        let center: Vec<f64> = (0..n)
            .map(|a| box_bounds[a].0 + (idx[a] as f64 + 0.5) * h)
            .collect();
        if cell_dimension(f, &center, h) >= k {
            marked.push(idx.clone());
        }
    }
    marked
}

/// Dimension of the subdifferential somewhere in the closed cell centered at
/// `center` with side `h`: a piece counts as cell-active when its deficit
/// against the best piece can be closed inside the cell (the gap is at most
/// the half-width times the L1 gradient difference).
fn cell_dimension(f: &PiecewiseConvexFunction, center: &[f64], h: f64) -> usize {
    let values: Vec<f64> = f.pieces.iter().map(|p| p.value(center)).collect();
    let best = values
        .iter()
        .cloned()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let vmax = values[best];
    let slack = 1e-12 * (1.0 + vmax.abs());
    let gb = f.pieces[best].gradient.clone();
    let mut active: Vec<Vec<f64>> = Vec::new();
    for (i, p) in f.pieces.iter().enumerate() {
        let diff_norm1: f64 = p
            .gradient
            .iter()
            .zip(gb.iter())
            .map(|(a, b)| (a - b).abs())
            .sum();
        if vmax - values[i] <= 0.5 * h * diff_norm1 + slack {
            let is_new = active
                .iter()
                .all(|u| u.iter().zip(&p.gradient).any(|(a, b)| (a - b).abs() > 1e-12));
            if is_new {
                active.push(p.gradient.clone());
            }
        }
    }
    linalg::affine_rank(&active, &[])
}

// ---------------------------------------------------------------------------
// Lipschitz inverse
// ---------------------------------------------------------------------------

/// Invert the subdifferential of a strongly convex `f` (`q >= 1`): return the
/// unique `x` with `ell ∈ ∂f(x)`, computed by minimizing `f(x) - ell . x`
/// with a primal active-set iteration on the piece structure.
pub fn lipschitz_inverse(
    f: &PiecewiseConvexFunction,
    ell: &[f64],
    search_box: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<f64>, ConvexError> {
    f.validate()?;
    let n = f.dim();
    if ell.len() != n || search_box.len() != n {
        return Err(ConvexError::Dimension { expected: n, got: ell.len() });
    }
    let q = f.quadratic_coeff;
    if q < 1.0 {
        return Err(ConvexError::NotStronglyConvex(q));
    }

    // Deduplicate pieces; identical gradients keep the larger offset.
    let mut pieces: Vec<AffinePiece> = Vec::new();
    for p in &f.pieces {
        if let Some(existing) = pieces.iter_mut().find(|u| {
            u.gradient
                .iter()
                .zip(&p.gradient)
                .all(|(a, b)| (a - b).abs() <= 1e-12)
        }) {
            existing.offset = existing.offset.max(p.offset);
        } else {
            pieces.push(p.clone());
        }
    }

    // Start from the unconstrained quadratic guess and its best piece.
    let x0: Vec<f64> = ell.iter().map(|v| v / (2.0 * q)).collect();
    let start = pieces
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value(&x0).partial_cmp(&b.1.value(&x0)).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut active: Vec<usize> = vec![start];
    let cap = 100 * pieces.len() + 100;

    let mut last_removed = usize::MAX;
    for _ in 0..cap {
        // KKT system in (x, lambda, t):
        //   2 q x + sum lambda_i g_i = ell
        //   g_i . x + b_i = t           for i active
        //   sum lambda_i = 1
        let r = active.len();
        let dim = n + r + 1;
        let mut a = vec![vec![0.0; dim]; dim];
        let mut rhs = vec![0.0; dim];
        for i in 0..n {
            a[i][i] = 2.0 * q;
            for (s, &pi) in active.iter().enumerate() {
                a[i][n + s] = pieces[pi].gradient[i];
            }
            rhs[i] = ell[i];
        }
        for (s, &pi) in active.iter().enumerate() {
            for i in 0..n {
                a[n + s][i] = pieces[pi].gradient[i];
            }
            a[n + s][n + r] = -1.0;
            rhs[n + s] = -pieces[pi].offset;
        }
        for s in 0..r {
            a[n + r][n + s] = 1.0;
        }
        rhs[n + r] = 1.0;

        let Some(sol) = linalg::solve_square(&a, &rhs) else {
            // Degenerate active set: drop the most recent addition.
            if active.len() > 1 {
                active.pop();
                continue;
            }
            return Err(ConvexError::NoConvergence);
        };
        let x = &sol[..n];
        let lambda = &sol[n..n + r];
        let t = sol[n + r];

        if let Some((s, _)) = lambda
            .iter()
            .enumerate()
            .filter(|(_, &l)| l < -1e-10)
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        {
            last_removed = active.remove(s);
            continue;
        }
        let viol = pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| !active.contains(i) && *i != last_removed)
            .map(|(i, p)| (i, p.value(x) - t))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if let Some((i, gap)) = viol {
            if gap > 1e-11 * (1.0 + t.abs()) {
                active.push(i);
                last_removed = usize::MAX;
                continue;
            }
        }

        // Converged; verify the search box.
        for (&xi, &(lo, hi)) in x.iter().zip(search_box.iter()) {
            if xi < lo - tol || xi > hi + tol {
                return Err(ConvexError::RangeError(ell.to_vec()));
            }
        }
        return Ok(x.to_vec());
    }
    Err(ConvexError::NoConvergence)
}

// ---------------------------------------------------------------------------
// Legendre conjugation
// ---------------------------------------------------------------------------

/// The convex conjugate of a piecewise-linear function, finite on the convex
/// hull of the piece gradients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugateResult {
    /// Affine pieces of the conjugate; valid on the gradient hull (the
    /// max-affine formula extends them constantly across its affine hull).
    pub function: PiecewiseConvexFunction,
    /// Affine dimension of the gradient hull; less than `n` means the
    /// conjugate is finite only on a lower-dimensional set.
    pub hull_dim: usize,
    /// Gradient points of the input with their conjugate values; they carry
    /// the domain and make biconjugation exact.
    pub support_points: Vec<(Vec<f64>, f64)>,
}

/// Convex conjugate of a max of affine pieces (`q = 0`).
///
/// The epigraph of the conjugate is the convex hull of the points
/// `(g_i, -b_i)`; the returned pieces are its lower facets, found by
/// enumerating affinely independent point subsets. `domain_hint`, when given,
/// must match the function's dimension; evaluation outside the gradient hull
/// is not meaningful.
pub fn legendre_conjugate(
    f: &PiecewiseConvexFunction,
    domain_hint: Option<&[(f64, f64)]>,
) -> Result<ConjugateResult, ConvexError> {
    f.validate()?;
    if f.quadratic_coeff != 0.0 {
        return Err(ConvexError::Invalid(
            "conjugation is implemented for piecewise-linear functions (q = 0)".into(),
        ));
    }
    let n = f.dim();
    if let Some(hint) = domain_hint {
        if hint.len() != n {
            return Err(ConvexError::Dimension { expected: n, got: hint.len() });
        }
    }

    // Distinct gradient points with value -b (duplicates keep the lower lift).
    let mut points: Vec<(Vec<f64>, f64)> = Vec::new();
    for p in &f.pieces {
        if let Some(existing) = points.iter_mut().find(|(g, _)| {
            g.iter().zip(&p.gradient).all(|(a, b)| (a - b).abs() <= 1e-12)
        }) {
            existing.1 = existing.1.min(-p.offset);
        } else {
            points.push((p.gradient.clone(), -p.offset));
        }
    }

    // Reduce to the affine hull of the gradients.
    let p0 = points[0].0.clone();
    let diffs: Vec<Vec<f64>> = points
        .iter()
        .map(|(p, _)| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
        .collect();
    let hull_dim = linalg::matrix_rank(&diffs);

    let pieces = if hull_dim == 0 {
        let vmin = points.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
        vec![AffinePiece::new(vec![0.0; n], vmin)]
    } else {
        let basis = orthonormal_rows(&diffs, hull_dim);
        let coords: Vec<Vec<f64>> = points
            .iter()
            .map(|(p, _)| {
                basis
                    .iter()
                    .map(|b| {
                        p.iter()
                            .zip(&p0)
                            .zip(b.iter())
                            .map(|((a, c), w)| (a - c) * w)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        lower_facets(&coords, &points, hull_dim, &basis, &p0)?
    };

    let function = PiecewiseConvexFunction::new(pieces, 0.0)?;
    let support_points: Vec<(Vec<f64>, f64)> = points
        .iter()
        .map(|(p, _)| {
            let v = function.evaluate(p).expect("dimension preserved");
            (p.clone(), v)
        })
        .collect();
    Ok(ConjugateResult { function, hull_dim, support_points })
}

/// Biconjugate `(f*)*` reconstructed from a conjugate: the max of the
/// supporting pieces `y -> p . y - f*(p)` over the stored domain points.
/// For a piecewise-linear input this recovers the original values.
pub fn biconjugate(conj: &ConjugateResult) -> Result<PiecewiseConvexFunction, ConvexError> {
    let pieces: Vec<AffinePiece> = conj
        .support_points
        .iter()
        .map(|(p, v)| AffinePiece::new(p.clone(), -v))
        .collect();
    PiecewiseConvexFunction::new(pieces, 0.0)
}

fn orthonormal_rows(rows: &[Vec<f64>], rank: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        if basis.len() == rank {
            break;
        }
        let mut v = row.clone();
        for b in &basis {
            let d = linalg::dot(&v, b);
            for (x, y) in v.iter_mut().zip(b.iter()) {
                *x -= d * y;
            }
        }
        let norm = linalg::norm2(&v);
        if norm > 1e-10 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Enumerate lower supporting planes through `r + 1` affinely independent
/// points of the lifted set, lifting them back to ambient coordinates.
fn lower_facets(
    coords: &[Vec<f64>],
    points: &[(Vec<f64>, f64)],
    r: usize,
    basis: &[Vec<f64>],
    p0: &[f64],
) -> Result<Vec<AffinePiece>, ConvexError> {
    let k = coords.len();
    let subset_count = binomial(k, r + 1);
    if subset_count > 400_000 {
        return Err(ConvexError::Invalid(format!(
            "too many pieces for facet enumeration ({k} points in hull dimension {r})"
        )));
    }
    let scale = points
        .iter()
        .map(|(_, v)| v.abs())
        .fold(1.0_f64, f64::max);
    let mut subset: Vec<usize> = (0..=r).collect();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    loop {
        // Affine interpolation a . q + c = v on the subset.
        let dim = r + 1;
        let mut mat = vec![vec![0.0; dim]; dim];
        let mut rhs = vec![0.0; dim];
        for (row, &i) in subset.iter().enumerate() {
            mat[row][..r].copy_from_slice(&coords[i]);
            mat[row][r] = 1.0;
            rhs[row] = points[i].1;
        }
        if let Some(sol) = linalg::solve_square(&mat, &rhs) {
            let (a, c) = (&sol[..r], sol[r]);
            if a.iter().all(|x| x.is_finite()) && c.is_finite() {
                let supports = coords
                    .iter()
                    .zip(points.iter())
                    .all(|(qc, (_, v))| *v >= linalg::dot(a, qc) + c - 1e-9 * scale);
                if supports {
                    let is_new = planes.iter().all(|(p, pc)| {
                        (pc - c).abs() > 1e-9 * scale
                            || p.iter().zip(a.iter()).any(|(x, y)| (x - y).abs() > 1e-9)
                    });
                    if is_new {
                        planes.push((a.to_vec(), c));
                    }
                }
            }
        }
        if !next_combination(&mut subset, k) {
            break;
        }
    }
    if planes.is_empty() {
        return Err(ConvexError::Invalid("no supporting facets found".into()));
    }
    // Lift reduced-coordinate planes to ambient space.
    let n = p0.len();
    let pieces = planes
        .into_iter()
        .map(|(a, c)| {
            let mut grad = vec![0.0; n];
            for (ai, b) in a.iter().zip(basis.iter()) {
                for (g, w) in grad.iter_mut().zip(b.iter()) {
                    *g += ai * w;
                }
            }
            let offset = c - linalg::dot(&grad, p0);
            AffinePiece::new(grad, offset)
        })
        .collect();
    Ok(pieces)
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-9;

    fn max_three() -> PiecewiseConvexFunction {
        // max(x1, x2, 0) on the plane
        PiecewiseConvexFunction::new(
            vec![
                AffinePiece::new(vec![1.0, 0.0], 0.0),
                AffinePiece::new(vec![0.0, 1.0], 0.0),
                AffinePiece::new(vec![0.0, 0.0], 0.0),
            ],
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = PiecewiseConvexFunction::abs_1d();
        assert_abs_diff_eq!(f.evaluate(&[0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(f.evaluate(&[2.0]).unwrap(), 2.0);
        let g = PiecewiseConvexFunction::new(f.pieces.clone(), 1.0).unwrap();
        assert_abs_diff_eq!(g.evaluate(&[2.0]).unwrap(), 6.0);
        assert!(f.evaluate(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn subdifferential_examples() {
        let f = PiecewiseConvexFunction::abs_1d();
        let sd = f.subdifferential(&[0.0], TOL).unwrap();
        assert_eq!(sd.dimension, 1);
        let mut grads: Vec<f64> = sd.vertices.iter().map(|v| v[0]).collect();
        grads.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(grads, vec![-1.0, 1.0]);

        let sd = f.subdifferential(&[0.5], TOL).unwrap();
        assert_eq!(sd.dimension, 0);
        assert_eq!(sd.vertices, vec![vec![1.0]]);

        let sd = max_three().subdifferential(&[0.0, 0.0], TOL).unwrap();
        assert_eq!(sd.vertices.len(), 3);
        assert_eq!(sd.dimension, 2);
    }

    #[test]
    fn augmentation_increments_q() {
        let f = PiecewiseConvexFunction::abs_1d();
        assert_eq!(f.augment_strongly_convex().quadratic_coeff, 1.0);
        assert_eq!(
            f.augment_strongly_convex().augment_strongly_convex().quadratic_coeff,
            2.0
        );
        // linear piece augmented: subdifferential is {gradient + 2x}
        let lin = PiecewiseConvexFunction::new(vec![AffinePiece::new(vec![3.0], 1.0)], 0.0)
            .unwrap()
            .augment_strongly_convex();
        let sd = lin.subdifferential(&[0.7], TOL).unwrap();
        assert_eq!(sd.vertices.len(), 1);
        assert_abs_diff_eq!(sd.vertices[0][0], 3.0 + 2.0 * 0.7, epsilon = 1e-12);
    }

    #[test]
    fn sigma_scan_abs() {
        let f = PiecewiseConvexFunction::abs_1d();
        // grid chosen so the kink is interior to the middle cell
        let scan = sigma_k_scan(&f, 1, &[(-1.0, 1.0)], 2.0 / 3.0).unwrap();
        assert_eq!(scan.cells, vec![vec![1]]);
        // kink on a shared corner marks both adjacent cells
        let scan = sigma_k_scan(&f, 1, &[(-1.0, 1.0)], 0.5).unwrap();
        assert_eq!(scan.cells, vec![vec![1], vec![2]]);
    }

    #[test]
    fn sigma_scan_vertex_and_linear() {
        let scan = sigma_k_scan(&max_three(), 2, &[(-1.0, 1.0), (-1.0, 1.0)], 2.0 / 3.0).unwrap();
        assert_eq!(scan.cells, vec![vec![1, 1]]);
        let lin =
            PiecewiseConvexFunction::new(vec![AffinePiece::new(vec![2.0], 0.5)], 0.0).unwrap();
        let scan = sigma_k_scan(&lin, 1, &[(-1.0, 1.0)], 0.25).unwrap();
        assert!(scan.cells.is_empty());
        assert_eq!(scan.box_count_exponent, 0.0);
    }

    #[test]
    fn sigma_scan_rejects_bad_input() {
        let f = PiecewiseConvexFunction::abs_1d();
        assert!(matches!(
            sigma_k_scan(&f, 1, &[(1.0, 1.0)], 0.5),
            Err(ConvexError::EmptyBox(0))
        ));
        assert!(matches!(
            sigma_k_scan(&f, 2, &[(-1.0, 1.0)], 0.5),
            Err(ConvexError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn lipschitz_inverse_examples() {
        let boxr = [(-10.0, 10.0)];
        // f = |x|^2 as a single zero piece with q = 1
        let quad =
            PiecewiseConvexFunction::new(vec![AffinePiece::new(vec![0.0], 0.0)], 1.0).unwrap();
        let x = lipschitz_inverse(&quad, &[2.0], &boxr, 1e-9).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-9);

        // f = |x| + |x|^2: gradient 1 + 2x on the positive branch
        let g = PiecewiseConvexFunction::abs_1d().augment_strongly_convex();
        let x = lipschitz_inverse(&g, &[3.0], &boxr, 1e-9).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-9);
        // 0.5 lies inside ∂(|x| + x^2)(0) = [-1, 1]
        let x = lipschitz_inverse(&g, &[0.5], &boxr, 1e-9).unwrap();
        assert_abs_diff_eq!(x[0], 0.0, epsilon = 1e-9);
    }

    #[test]
    fn lipschitz_inverse_requires_strong_convexity_and_box() {
        let f = PiecewiseConvexFunction::abs_1d();
        assert!(matches!(
            lipschitz_inverse(&f, &[0.5], &[(-1.0, 1.0)], 1e-9),
            Err(ConvexError::NotStronglyConvex(_))
        ));
        let g = f.augment_strongly_convex();
        assert!(matches!(
            lipschitz_inverse(&g, &[9.0], &[(-1.0, 1.0)], 1e-9),
            Err(ConvexError::RangeError(_))
        ));
    }

    #[test]
    fn conjugate_examples() {
        // |x|: conjugate is 0 on [-1, 1]
        let conj = legendre_conjugate(&PiecewiseConvexFunction::abs_1d(), None).unwrap();
        assert_eq!(conj.hull_dim, 1);
        assert_abs_diff_eq!(conj.function.evaluate(&[0.3]).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(conj.function.evaluate(&[-1.0]).unwrap(), 0.0, epsilon = 1e-12);

        // max(0, x - 1): conjugate(y) = y on [0, 1]
        let f = PiecewiseConvexFunction::new(
            vec![
                AffinePiece::new(vec![0.0], 0.0),
                AffinePiece::new(vec![1.0], -1.0),
            ],
            0.0,
        )
        .unwrap();
        let conj = legendre_conjugate(&f, None).unwrap();
        for y in [0.0, 0.25, 0.5, 1.0] {
            assert_abs_diff_eq!(conj.function.evaluate(&[y]).unwrap(), y, epsilon = 1e-12);
        }

        // tangent-piece model of x^2/2 is self-conjugate at tangency points
        let ts = [-1.0, -0.4, 0.0, 0.3, 0.8, 1.0];
        let pieces: Vec<AffinePiece> = ts
            .iter()
            .map(|&t| AffinePiece::new(vec![t], -0.5 * t * t))
            .collect();
        let f = PiecewiseConvexFunction::new(pieces, 0.0).unwrap();
        let conj = legendre_conjugate(&f, None).unwrap();
        for &t in &ts {
            assert_abs_diff_eq!(
                conj.function.evaluate(&[t]).unwrap(),
                0.5 * t * t,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn conjugate_degenerate_hull_reports_reduced_dimension() {
        // all gradients on a line in the plane
        let f = PiecewiseConvexFunction::new(
            vec![
                AffinePiece::new(vec![0.0, 0.0], 0.0),
                AffinePiece::new(vec![1.0, 1.0], -1.0),
            ],
            0.0,
        )
        .unwrap();
        let conj = legendre_conjugate(&f, None).unwrap();
        assert_eq!(conj.hull_dim, 1);
    }

    #[test]
    fn biconjugate_recovers_values() {
        let f = PiecewiseConvexFunction::new(
            vec![
                AffinePiece::new(vec![1.0], 0.0),
                AffinePiece::new(vec![-1.0], 0.0),
                AffinePiece::new(vec![0.0], -5.0),
            ],
            0.0,
        )
        .unwrap();
        let fstar = legendre_conjugate(&f, None).unwrap();
        let fss = biconjugate(&fstar).unwrap();
        for x in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            assert_abs_diff_eq!(
                fss.evaluate(&[x]).unwrap(),
                f.evaluate(&[x]).unwrap(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn json_schema_roundtrip() {
        let f = max_three();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"n\":2"));
        assert!(s.contains("\"q\":0.0"));
        let back: PiecewiseConvexFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<PiecewiseConvexFunction>(
            "{\"n\":3,\"q\":0.0,\"pieces\":[{\"gradient\":[1.0],\"offset\":0.0}]}"
        )
        .is_err());
    }
}
