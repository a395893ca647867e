//! Dense complex linear algebra used by every decision procedure.
//!
//! All rank-type decisions go through one singular-value cutoff:
//! `tol * sigma_max * max(rows, cols, 1)`.

use nalgebra::{Complex, DMatrix, DVector};

pub type Scalar = Complex<f64>;
pub type Matrix = DMatrix<Scalar>;
pub type Vector = DVector<Scalar>;

pub const ZERO: Scalar = Complex::new(0.0, 0.0);
pub const ONE: Scalar = Complex::new(1.0, 0.0);

pub fn c(re: f64) -> Scalar {
    Complex::new(re, 0.0)
}

struct Decomposition {
    u: Matrix,
    sigma: Vec<f64>,
    /// Columns are right singular vectors; always `cols x cols`.
    v: Matrix,
    cutoff: f64,
}

fn decompose(m: &Matrix, tol: f64) -> Decomposition {
    let (rows, cols) = m.shape();
    // Pad short matrices so the right singular basis is complete.
    let padded = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(true, true);
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sigma.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = tol * smax * rows.max(cols).max(1) as f64;
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested V^H").adjoint();
    let u = u.rows(0, rows).into_owned();
    Decomposition { u, sigma, v, cutoff }
}

/// Singular values in the order produced by the decomposition.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &Matrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let d = decompose(m, tol);
    d.sigma.iter().filter(|&&s| s > d.cutoff).count()
}

/// Orthonormal basis (as columns) of the right nullspace.
pub fn nullspace(m: &Matrix, tol: f64) -> Matrix {
    let cols = m.ncols();
    if cols == 0 {
        return Matrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return Matrix::identity(cols, cols);
    }
    let d = decompose(m, tol);
    let keep: Vec<usize> = (0..cols).filter(|&k| d.sigma[k] <= d.cutoff).collect();
    select_columns(&d.v, &keep)
}

/// Orthonormal basis (as columns) of the column space.
pub fn column_space(m: &Matrix, tol: f64) -> Matrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return Matrix::zeros(rows, 0);
    }
    let d = decompose(m, tol);
    let keep: Vec<usize> = (0..d.sigma.len().min(d.u.ncols()))
        .filter(|&k| d.sigma[k] > d.cutoff)
        .collect();
    select_columns(&d.u, &keep)
}

fn select_columns(m: &Matrix, keep: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(m.nrows(), keep.len());
    for (dst, &src) in keep.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Minimal Euclidean-norm least-squares solution of `m x = b`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub x: Vector,
    pub residual: f64,
    pub consistent: bool,
}

pub fn solve_min_norm(m: &Matrix, b: &Vector, tol: f64) -> LeastSquares {
    let cols = m.ncols();
    if cols == 0 || m.nrows() == 0 {
        let residual = max_abs(b.as_slice());
        return LeastSquares {
            x: Vector::zeros(cols),
            residual,
            consistent: residual <= 10.0 * tol,
        };
    }
    let d = decompose(m, tol);
    let mut x = Vector::zeros(cols);
    for k in 0..d.sigma.len().min(d.u.ncols()) {
        if d.sigma[k] > d.cutoff {
            let coeff = d.u.column(k).dotc(b) / d.sigma[k];
            x += d.v.column(k) * coeff;
        }
    }
    let residual = max_abs((m * &x - b).as_slice());
    let scale = 1.0 + max_abs(b.as_slice()) + linf_norm(m) * max_abs(x.as_slice());
    LeastSquares {
        consistent: residual <= 10.0 * tol * scale * cols.max(1) as f64,
        x,
        residual,
    }
}

pub fn max_abs(v: &[Scalar]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest absolute entry of a matrix.
pub fn linf_norm(m: &Matrix) -> f64 {
    max_abs(m.as_slice())
}

/// Distance from `v` to the span of the orthonormal columns of `basis`.
pub fn distance_to_span(basis: &Matrix, v: &Vector) -> f64 {
    if basis.ncols() == 0 {
        return max_abs(v.as_slice());
    }
    let proj = basis * (basis.adjoint() * v);
    max_abs((v - proj).as_slice())
}

/// Every column of `sub` lies in the span of the orthonormal columns of `sup`.
pub fn span_contains(sup: &Matrix, sub: &Matrix, tol: f64) -> bool {
    span_excess(sup, sub) <= tol
}

/// Largest distance from a column of `sub` to `span(sup)`.
pub fn span_excess(sup: &Matrix, sub: &Matrix) -> f64 {
    (0..sub.ncols())
        .map(|k| distance_to_span(sup, &sub.column(k).into_owned()))
        .fold(0.0, f64::max)
}

/// Orthonormalize arbitrary spanning columns.
pub fn orthonormal_span(m: &Matrix, tol: f64) -> Matrix {
    column_space(m, tol)
}

/// Equality of two subspaces given by spanning columns.
pub fn same_span(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    let qa = orthonormal_span(a, tol);
    let qb = orthonormal_span(b, tol);
    qa.ncols() == qb.ncols()
        && span_contains(&qa, &qb, 10.0 * tol)
        && span_contains(&qb, &qa, 10.0 * tol)
}

pub fn hstack(blocks: &[&Matrix]) -> Matrix {
    let rows = blocks.iter().map(|b| b.nrows()).max().unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((0, at), b.shape()).copy_from(*b);
        at += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[Matrix]) -> Matrix {
    let cols = blocks.iter().map(|b| b.ncols()).max().unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, 0), b.shape()).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Standard basis vector `e_k` of length `n`.
pub fn unit(n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![ZERO; n];
    v[k] = ONE;
    v
}

/// Bilinear (non-conjugating) pairing of coordinate vectors.
pub fn pair(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x)))
    }

    #[test]
    fn rank_of_rank_one() {
        let m = real(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(rank(&m, 1e-9), 1);
        assert_eq!(nullspace(&m, 1e-9).ncols(), 2);
    }

    #[test]
    fn nullspace_of_wide_matrix_is_complete() {
        let m = real(1, 3, &[1.0, 0.0, 0.0]);
        let n = nullspace(&m, 1e-9);
        assert_eq!(n.ncols(), 2);
        assert!(linf_norm(&(&m * &n)) < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let m = Matrix::zeros(3, 2);
        assert_eq!(rank(&m, 1e-9), 0);
        assert_eq!(nullspace(&m, 1e-9).ncols(), 2);
        assert_eq!(column_space(&m, 1e-9).ncols(), 0);
    }

    #[test]
    fn min_norm_solution() {
        // x + y = 2 has minimal-norm solution (1, 1).
        let m = real(1, 2, &[1.0, 1.0]);
        let b = Vector::from_vec(vec![c(2.0)]);
        let ls = solve_min_norm(&m, &b, 1e-9);
        assert!(ls.consistent);
        assert!((ls.x[0] - c(1.0)).norm() < 1e-12);
        assert!((ls.x[1] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn inconsistent_system() {
        let m = real(2, 1, &[1.0, 1.0]);
        let b = Vector::from_vec(vec![c(1.0), c(2.0)]);
        assert!(!solve_min_norm(&m, &b, 1e-9).consistent);
    }

    #[test]
    fn complex_nullspace() {
        // [1, i] has nullspace spanned by (i, -1) up to scale.
        let m = Matrix::from_row_slice(1, 2, &[ONE, Complex::new(0.0, 1.0)]);
        let n = nullspace(&m, 1e-9);
        assert_eq!(n.ncols(), 1);
        assert!(linf_norm(&(&m * &n)) < 1e-12);
    }

    #[test]
    fn span_comparison() {
        let a = real(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let b = real(3, 2, &[1.0, 1.0, 1.0, -1.0, 0.0, 0.0]);
        assert!(same_span(&a, &b, 1e-9));
        let c3 = real(3, 1, &[0.0, 0.0, 1.0]);
        assert!(!same_span(&a, &c3, 1e-9));
    }
}
