//! Finite-dimensional complex associative algebras given by structure constants.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar, Vector, ONE, ZERO};

/// Default numerical tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A complex algebra with basis `e_0..e_{n-1}` and products
/// `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    name: String,
    basis: Vec<String>,
    /// Flattened `c[i][j][k]` at `(i * n + j) * n + k`.
    structure: Vec<Scalar>,
    norm_weights: Vec<f64>,
    declared_characters: Vec<Vec<Scalar>>,
}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        structure: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self> {
        let name = name.into();
        let n = basis.len();
        if n == 0 {
            return Err(Error::Shape(format!("algebra `{name}` has empty basis")));
        }
        if structure.len() != n {
            return Err(Error::Shape(format!(
                "algebra `{name}`: structure has {} slices, expected {n}",
                structure.len()
            )));
        }
        let mut flat = Vec::with_capacity(n * n * n);
        for (i, rows) in structure.iter().enumerate() {
            if rows.len() != n {
                return Err(Error::Shape(format!(
                    "algebra `{name}`: structure[{i}] has {} rows, expected {n}",
                    rows.len()
                )));
            }
            for (j, coeffs) in rows.iter().enumerate() {
                if coeffs.len() != n {
                    return Err(Error::Shape(format!(
                        "algebra `{name}`: structure[{i}][{j}] has {} entries, expected {n}",
                        coeffs.len()
                    )));
                }
                flat.extend_from_slice(coeffs);
            }
        }
        Self::from_flat(name, basis, flat)
    }

    /// Build from a product rule returning sparse `(k, coefficient)` pairs for `e_i e_j`.
    pub fn from_rule<F>(name: impl Into<String>, labels: &[&str], mut rule: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Vec<(usize, Scalar)>,
    {
        let n = labels.len();
        let mut flat = vec![ZERO; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for (k, v) in rule(i, j) {
                    if k >= n {
                        return Err(Error::Shape(format!("product index {k} out of range {n}")));
                    }
                    flat[(i * n + j) * n + k] += v;
                }
            }
        }
        Self::from_flat(name.into(), labels.iter().map(|s| s.to_string()).collect(), flat)
    }

    pub(crate) fn from_flat(name: String, basis: Vec<String>, structure: Vec<Scalar>) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Shape(format!("algebra `{name}` has empty basis")));
        }
        if structure.len() != n * n * n {
            return Err(Error::Shape(format!(
                "algebra `{name}`: {} structure constants, expected {}",
                structure.len(),
                n * n * n
            )));
        }
        let mut seen = HashSet::new();
        for label in &basis {
            if !seen.insert(label.as_str()) {
                return Err(Error::Validation(format!(
                    "algebra `{name}`: duplicate basis label `{label}`"
                )));
            }
        }
        if structure.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation(format!(
                "algebra `{name}`: non-finite structure constant"
            )));
        }
        Ok(FiniteAlgebra {
            name,
            basis,
            structure,
            norm_weights: vec![1.0; n],
            declared_characters: Vec::new(),
        })
    }

    pub fn with_norm_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.dim() {
            return Err(Error::Shape(format!(
                "algebra `{}`: {} norm weights for dimension {}",
                self.name,
                weights.len(),
                self.dim()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::Validation(format!(
                "algebra `{}`: norm weights must be positive and finite",
                self.name
            )));
        }
        self.norm_weights = weights;
        Ok(self)
    }

    /// Attach functionals the author claims are characters; checked on load.
    pub fn with_declared_characters(mut self, chars: Vec<Vec<Scalar>>) -> Result<Self> {
        if let Some(bad) = chars.iter().find(|c| c.len() != self.dim()) {
            return Err(Error::Shape(format!(
                "algebra `{}`: declared character of length {}, expected {}",
                self.name,
                bad.len(),
                self.dim()
            )));
        }
        self.declared_characters = chars;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn norm_weights(&self) -> &[f64] {
        &self.norm_weights
    }

    pub fn declared_characters(&self) -> &[Vec<Scalar>] {
        &self.declared_characters
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        let n = self.dim();
        self.structure[(i * n + j) * n + k]
    }

    /// Coordinates of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        let at = (i * n + j) * n;
        &self.structure[at..at + n]
    }

    pub fn structure_tensor(&self) -> Vec<Vec<Vec<Scalar>>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.basis_product(i, j).to_vec()).collect())
            .collect()
    }

    /// Raw coordinate product, no name checks.
    pub fn mul_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![ZERO; n];
        for (i, xi) in x.iter().enumerate() {
            if *xi == ZERO {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let w = xi * yj;
                if w == ZERO {
                    continue;
                }
                for (o, cijk) in out.iter_mut().zip(self.basis_product(i, j)) {
                    *o += w * cijk;
                }
            }
        }
        out
    }

    pub fn element(&self, coords: Vec<Scalar>) -> Result<AlgebraElement> {
        if coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "element of `{}` with {} coordinates, expected {}",
                self.name,
                coords.len(),
                self.dim()
            )));
        }
        Ok(AlgebraElement {
            algebra: self.name.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.name.clone(),
            coords: vec![ZERO; self.dim()],
        }
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut coords = vec![ZERO; self.dim()];
        coords[i] = ONE;
        AlgebraElement {
            algebra: self.name.clone(),
            coords,
        }
    }

    fn check_owner(&self, x: &AlgebraElement) -> Result<()> {
        if x.algebra != self.name {
            return Err(Error::mismatch(&self.name, &x.algebra));
        }
        if x.coords.len() != self.dim() {
            return Err(Error::Shape(format!(
                "element has {} coordinates, `{}` has dimension {}",
                x.coords.len(),
                self.name,
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_owner(x)?;
        self.check_owner(y)?;
        Ok(AlgebraElement {
            algebra: self.name.clone(),
            coords: self.mul_coords(&x.coords, &y.coords),
        })
    }

    /// Matrix of `x -> a x`.
    pub fn left_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for l in 0..n {
            let mut e = vec![ZERO; n];
            e[l] = ONE;
            m.set_column(l, &Vector::from_vec(self.mul_coords(a, &e)));
        }
        m
    }

    /// Matrix of `x -> x a`.
    pub fn right_matrix(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for l in 0..n {
            let mut e = vec![ZERO; n];
            e[l] = ONE;
            m.set_column(l, &Vector::from_vec(self.mul_coords(&e, a)));
        }
        m
    }

    pub fn left_mult_operator(&self, a: &AlgebraElement) -> Result<LinearMap> {
        self.check_owner(a)?;
        Ok(LinearMap::new(
            Space::algebra(self),
            Space::algebra(self),
            self.left_matrix(&a.coords),
        ))
    }

    pub fn right_mult_operator(&self, a: &AlgebraElement) -> Result<LinearMap> {
        self.check_owner(a)?;
        Ok(LinearMap::new(
            Space::algebra(self),
            Space::algebra(self),
            self.right_matrix(&a.coords),
        ))
    }

    /// Weighted coordinate l1 norm.
    pub fn norm(&self, x: &[Scalar]) -> f64 {
        x.iter().zip(&self.norm_weights).map(|(z, w)| z.norm() * w).sum()
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraElement {
    pub algebra: String,
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    pub coords: Vec<Scalar>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Algebra,
    Dual,
    Bidual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Space {
    pub algebra: String,
    pub kind: SpaceKind,
    pub dim: usize,
}

impl Space {
    pub fn algebra(alg: &FiniteAlgebra) -> Self {
        Space {
            algebra: alg.name().to_owned(),
            kind: SpaceKind::Algebra,
            dim: alg.dim(),
        }
    }

    pub fn dual(alg: &FiniteAlgebra) -> Self {
        Space {
            kind: SpaceKind::Dual,
            ..Space::algebra(alg)
        }
    }

    pub fn bidual(alg: &FiniteAlgebra) -> Self {
        Space {
            kind: SpaceKind::Bidual,
            ..Space::algebra(alg)
        }
    }
}

/// A linear map stored as a `target.dim x source.dim` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    pub source: Space,
    pub target: Space,
    pub matrix: Matrix,
}

impl LinearMap {
    pub fn new(source: Space, target: Space, matrix: Matrix) -> Self {
        assert_eq!(
            matrix.shape(),
            (target.dim, source.dim),
            "linear map matrix shape does not match its spaces"
        );
        LinearMap {
            source,
            target,
            matrix,
        }
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        (&self.matrix * Vector::from_column_slice(x)).as_slice().to_vec()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub algebra: String,
    pub dim: usize,
    pub associativity_residual: f64,
    /// Basis triple attaining the residual.
    pub worst_triple: Option<(usize, usize, usize)>,
    pub associative: bool,
    pub submultiplicative: bool,
    pub submultiplicativity_violation: Option<(usize, usize)>,
    pub unital: bool,
    #[serde(serialize_with = "crate::report::ser_opt_complex_vec")]
    pub identity: Option<Vec<Scalar>>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.associative
    }
}

pub fn validate_algebra(alg: &FiniteAlgebra, tol: f64) -> ValidationReport {
    let n = alg.dim();
    let mut worst = 0.0;
    let mut worst_triple = None;
    for i in 0..n {
        for j in 0..n {
            let ij = alg.basis_product(i, j);
            for k in 0..n {
                let mut ek = vec![ZERO; n];
                ek[k] = ONE;
                let left = alg.mul_coords(ij, &ek);
                let mut ei = vec![ZERO; n];
                ei[i] = ONE;
                let right = alg.mul_coords(&ei, alg.basis_product(j, k));
                let r = left
                    .iter()
                    .zip(&right)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                if r > worst {
                    worst = r;
                    worst_triple = Some((i, j, k));
                }
            }
        }
    }

    // The weighted l1 norm is submultiplicative iff it is on basis pairs.
    let w = alg.norm_weights();
    let mut violation = None;
    'outer: for i in 0..n {
        for j in 0..n {
            if alg.norm(alg.basis_product(i, j)) > w[i] * w[j] * (1.0 + tol) {
                violation = Some((i, j));
                break 'outer;
            }
        }
    }

    let identity = find_two_sided_identity(alg, tol);
    let mut warnings = Vec::new();
    if let Some((i, j)) = violation {
        warnings.push(format!(
            "weighted l1 norm is not submultiplicative at ({}, {})",
            alg.basis()[i],
            alg.basis()[j]
        ));
    }
    let associative = worst <= tol;
    ValidationReport {
        algebra: alg.name().to_owned(),
        dim: n,
        associativity_residual: worst,
        worst_triple: if associative { None } else { worst_triple },
        associative,
        submultiplicative: violation.is_none(),
        submultiplicativity_violation: violation,
        unital: identity.is_some(),
        identity: identity.map(|e| e.coords),
        warnings,
    }
}

fn identity_system(alg: &FiniteAlgebra, left: bool) -> (Matrix, Vector) {
    let n = alg.dim();
    let mut m = Matrix::zeros(n * n, n);
    let mut b = Vector::zeros(n * n);
    for j in 0..n {
        for k in 0..n {
            let row = j * n + k;
            for i in 0..n {
                m[(row, i)] = if left {
                    alg.coeff(i, j, k)
                } else {
                    alg.coeff(j, i, k)
                };
            }
            if j == k {
                b[row] = ONE;
            }
        }
    }
    (m, b)
}

fn solve_identity(alg: &FiniteAlgebra, m: &Matrix, b: &Vector, tol: f64) -> Option<AlgebraElement> {
    let ls = linalg::solve_min_norm(m, b, tol);
    if ls.consistent {
        Some(AlgebraElement {
            algebra: alg.name().to_owned(),
            coords: ls.x.as_slice().to_vec(),
        })
    } else {
        None
    }
}

/// Minimal-norm `e` with `e a = a` for every basis `a`.
pub fn find_left_identity(alg: &FiniteAlgebra, tol: f64) -> Option<AlgebraElement> {
    let (m, b) = identity_system(alg, true);
    solve_identity(alg, &m, &b, tol)
}

/// Minimal-norm `e` with `a e = a` for every basis `a`.
pub fn find_right_identity(alg: &FiniteAlgebra, tol: f64) -> Option<AlgebraElement> {
    let (m, b) = identity_system(alg, false);
    solve_identity(alg, &m, &b, tol)
}

pub fn find_two_sided_identity(alg: &FiniteAlgebra, tol: f64) -> Option<AlgebraElement> {
    let (ml, bl) = identity_system(alg, true);
    let (mr, br) = identity_system(alg, false);
    let m = linalg::vstack(&[ml, mr]);
    let mut b = Vector::zeros(bl.len() + br.len());
    b.rows_mut(0, bl.len()).copy_from(&bl);
    b.rows_mut(bl.len(), br.len()).copy_from(&br);
    solve_identity(alg, &m, &b, tol)
}

/// Orthonormal basis (columns) of the center `{z : z a = a z for all a}`.
pub fn center(alg: &FiniteAlgebra, tol: f64) -> Matrix {
    let n = alg.dim();
    let mut m = Matrix::zeros(n * n, n);
    for j in 0..n {
        for k in 0..n {
            for i in 0..n {
                m[(j * n + k, i)] = alg.coeff(i, j, k) - alg.coeff(j, i, k);
            }
        }
    }
    linalg::nullspace(&m, tol)
}

/// Max associativity defect `|(xy)z - x(yz)|_inf` for given coordinates.
pub fn associator(alg: &FiniteAlgebra, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> f64 {
    let left = alg.mul_coords(&alg.mul_coords(x, y), z);
    let right = alg.mul_coords(x, &alg.mul_coords(y, z));
    left.iter()
        .zip(&right)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::standard;

    fn reals(v: &[f64]) -> Vec<Scalar> {
        v.iter().map(|&x| c(x)).collect()
    }

    #[test]
    fn complex_is_valid_and_unital() {
        let r = validate_algebra(&standard::complex(), DEFAULT_TOL);
        assert!(r.is_valid() && r.unital);
        assert_eq!(r.associativity_residual, 0.0);
    }

    #[test]
    fn constructed_violation_detected() {
        // e1 e1 = e2, e2 e1 = e1, e2 e2 = e2: (e1 e1) e1 = e1 but e1 (e1 e1) = 0.
        let alg = FiniteAlgebra::from_rule("bad", &["e1", "e2"], |i, j| match (i, j) {
            (0, 0) => vec![(1, ONE)],
            (1, 0) => vec![(0, ONE)],
            (1, 1) => vec![(1, ONE)],
            _ => vec![],
        })
        .unwrap();
        let r = validate_algebra(&alg, DEFAULT_TOL);
        assert!(!r.is_valid());
        assert!(r.associativity_residual > DEFAULT_TOL);
        assert!(r.worst_triple.is_some());
    }

    #[test]
    fn matrix_identity() {
        let r = validate_algebra(&standard::matrix2(), DEFAULT_TOL);
        assert!(r.is_valid() && r.unital);
        let e = r.identity.unwrap();
        assert!(linalg::max_abs(&[e[0] - ONE, e[1], e[2], e[3] - ONE]) < 1e-12);
    }

    #[test]
    fn shape_errors() {
        let bad = FiniteAlgebra::new("x", vec!["a".into(), "b".into()], vec![vec![vec![ZERO; 2]; 2]]);
        assert!(matches!(bad, Err(Error::Shape(_))));
        let dup = FiniteAlgebra::from_rule("x", &["a", "a"], |_, _| vec![]);
        assert!(matches!(dup, Err(Error::Validation(_))));
    }

    #[test]
    fn multiply_examples() {
        let c2 = standard::pointwise(2);
        let x = c2.element(reals(&[1.0, 2.0])).unwrap();
        let y = c2.element(reals(&[3.0, 4.0])).unwrap();
        assert_eq!(c2.multiply(&x, &y).unwrap().coords, reals(&[3.0, 8.0]));
        assert_eq!(c2.multiply(&x, &c2.zero()).unwrap().coords, reals(&[0.0, 0.0]));

        let m2 = standard::matrix2();
        let p = m2.multiply(&m2.basis_element(1), &m2.basis_element(2)).unwrap();
        assert_eq!(p.coords, reals(&[1.0, 0.0, 0.0, 0.0]));

        let other = standard::complex();
        assert!(matches!(
            m2.multiply(&m2.basis_element(0), &other.basis_element(0)),
            Err(Error::AlgebraMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_operators() {
        let c2 = standard::pointwise(2);
        let a = c2.element(reals(&[2.0, 3.0])).unwrap();
        let diag = Matrix::from_diagonal(&Vector::from_vec(reals(&[2.0, 3.0])));
        assert_eq!(c2.left_mult_operator(&a).unwrap().matrix, diag);
        assert_eq!(c2.right_mult_operator(&a).unwrap().matrix, diag);

        let r12 = standard::row_algebra();
        let e1 = r12.basis_element(0);
        assert_eq!(r12.left_mult_operator(&e1).unwrap().matrix, Matrix::identity(2, 2));
        let right = r12.right_mult_operator(&e1).unwrap().matrix;
        assert_eq!(right, Matrix::from_row_slice(2, 2, &reals(&[1.0, 0.0, 0.0, 0.0])));

        let zero = r12.left_mult_operator(&r12.zero()).unwrap().matrix;
        assert_eq!(zero, Matrix::zeros(2, 2));
    }

    #[test]
    fn operator_matches_multiply() {
        let alg = standard::upper_triangular2();
        let a = reals(&[1.0, -2.0, 0.5]);
        let x = reals(&[0.25, 3.0, -1.0]);
        let op = alg.left_mult_operator(&alg.element(a.clone()).unwrap()).unwrap();
        assert_eq!(op.apply(&x), alg.mul_coords(&a, &x));
    }

    #[test]
    fn center_examples() {
        let z = center(&standard::matrix2(), DEFAULT_TOL);
        assert_eq!(z.ncols(), 1);
        let col: Vec<Scalar> = z.column(0).iter().copied().collect();
        let scale = col[0];
        assert!(linalg::max_abs(&[col[0] - col[3], col[1], col[2]]) < 1e-12);
        assert!(scale.norm() > 0.1);

        assert_eq!(center(&standard::pointwise(2), DEFAULT_TOL).ncols(), 2);
        assert_eq!(center(&standard::row_algebra(), DEFAULT_TOL).ncols(), 0);
    }

    #[test]
    fn one_sided_identities() {
        let m2 = standard::matrix2();
        let e = find_left_identity(&m2, DEFAULT_TOL).unwrap();
        assert!(linalg::max_abs(&[e.coords[0] - ONE, e.coords[1], e.coords[2], e.coords[3] - ONE]) < 1e-12);

        let r12 = standard::row_algebra();
        let e = find_left_identity(&r12, DEFAULT_TOL).unwrap();
        assert!(linalg::max_abs(&[e.coords[0] - ONE, e.coords[1]]) < 1e-12);
        assert!(find_right_identity(&r12, DEFAULT_TOL).is_none());
        assert!(find_two_sided_identity(&r12, DEFAULT_TOL).is_none());

        assert!(find_left_identity(&standard::zero_product(), DEFAULT_TOL).is_none());
    }

    #[test]
    fn weights_are_checked() {
        let alg = standard::pointwise(2);
        assert!(alg.clone().with_norm_weights(vec![1.0]).is_err());
        assert!(alg.clone().with_norm_weights(vec![1.0, 0.0]).is_err());
        let w = alg.with_norm_weights(vec![1.0, 0.5]).unwrap();
        let r = validate_algebra(&w, DEFAULT_TOL);
        assert!(!r.submultiplicative);
        assert_eq!(r.warnings.len(), 1);
    }
}
