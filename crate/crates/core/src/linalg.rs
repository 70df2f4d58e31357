//! Small dense linear-algebra helpers: numerical rank, affine rank of point
//! sets, and null-space bases. Rank thresholds follow the convention
//! `sigma > REL_TOL * sigma_max`.

use nalgebra::DMatrix;

/// Relative singular-value threshold for numerical rank.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Singular values below this are treated as exact zeros regardless of scale.
pub const RANK_ABS_FLOOR: f64 = 1e-12;

fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    if rows.is_empty() || rows[0].is_empty() {
        return Vec::new();
    }
    let m = rows.len();
    let n = rows[0].len();
    let mat = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    mat.singular_values().iter().copied().collect()
}

/// Numerical rank of a dense matrix given as a list of rows.
pub fn matrix_rank(rows: &[Vec<f64>]) -> usize {
    let sv = singular_values(rows);
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max <= RANK_ABS_FLOOR {
        return 0;
    }
    let tol = RANK_REL_TOL * max;
    sv.iter().filter(|&&s| s > tol && s > RANK_ABS_FLOOR).count()
}

/// Affine rank of a point set: the rank of the differences `p_i - p_0`.
///
/// Extra direction vectors (e.g. recession rays) may be appended via
/// `extra_directions`; they enter the rank computation as-is.
pub fn affine_rank(points: &[Vec<f64>], extra_directions: &[Vec<f64>]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let p0 = &points[0];
    let mut rows: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0.iter()).map(|(a, b)| a - b).collect())
        .collect();
    rows.extend(extra_directions.iter().cloned());
    if rows.is_empty() {
        return 0;
    }
    matrix_rank(&rows)
}

/// Orthonormal basis of the null space of the row system `rows` in `R^n`.
///
/// Built by Gram-Schmidt of the standard basis against the row space, so the
/// result is deterministic.
pub fn null_space_basis(rows: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    // Orthonormalize the row space first.
    let mut span: Vec<Vec<f64>> = Vec::new();
    for row in rows {
        let mut v = row.clone();
        project_out(&mut v, &span);
        let norm = norm2(&v);
        if norm > 1e-12 {
            v.iter_mut().for_each(|x| *x /= norm);
            span.push(v);
        }
    }
    let rank = span.len();
    let mut basis = Vec::with_capacity(n.saturating_sub(rank));
    for i in 0..n {
        if basis.len() + rank >= n {
            break;
        }
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        project_out(&mut v, &span);
        project_out(&mut v, &basis);
        let norm = norm2(&v);
        if norm > 1e-9 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let d = dot(v, b);
        for (x, y) in v.iter_mut().zip(b.iter()) {
            *x -= d * y;
        }
    }
}

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// L1 norm.
pub fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}

/// Max norm.
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Solve a small dense square system `A x = b`; `None` if singular.
pub fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    if a.len() != n {
        return None;
    }
    let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    let lu = mat.full_piv_lu();
    lu.solve(&rhs).map(|x| x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        assert_eq!(matrix_rank(&[vec![1.0, 0.0], vec![0.0, 1.0]]), 2);
        assert_eq!(matrix_rank(&[vec![1.0, 2.0], vec![2.0, 4.0]]), 1);
        assert_eq!(matrix_rank(&[vec![0.0, 0.0]]), 0);
    }

    #[test]
    fn affine_rank_of_simplex_vertices() {
        let pts = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_eq!(affine_rank(&pts, &[]), 2);
        assert_eq!(affine_rank(&pts[..1], &[]), 0);
    }

    #[test]
    fn null_space_of_mass_row() {
        let basis = null_space_basis(&[vec![1.0, 1.0, 1.0]], 3);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(v.iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn solve_square_small() {
        let x = solve_square(&[vec![2.0, 0.0], vec![0.0, 4.0]], &[2.0, 8.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
    }
}
