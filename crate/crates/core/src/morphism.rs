//! Homomorphisms `T: B -> A` and the morphism product `A x_T B`.
//!
//! The product lives on `A (+) B` with the A-block first:
//! `(a1, b1)(a2, b2) = (a1 a2 + a1 T(b2) + T(b1) a2, b1 b2)`.

use serde::Serialize;

use crate::algebra::{validate_algebra, FiniteAlgebra, LinearMap, Space, ValidationReport};
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Scalar, Vector, ONE, ZERO};

#[derive(Debug, Clone)]
pub struct AlgebraHom {
    name: String,
    source: FiniteAlgebra,
    target: FiniteAlgebra,
    matrix: Matrix,
    mult_residual: f64,
    worst_pair: Option<(usize, usize)>,
    op_norm: f64,
}

impl AlgebraHom {
    /// `matrix` is `target.dim x source.dim`; column `j` is `T(e_j)`.
    pub fn new(source: FiniteAlgebra, target: FiniteAlgebra, matrix: Matrix) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!(
                "hom {} -> {}: matrix is {}x{}, expected {}x{}",
                source.name(),
                target.name(),
                matrix.nrows(),
                matrix.ncols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("hom matrix has non-finite entries".into()));
        }
        let (mult_residual, worst_pair) = multiplicativity(&source, &target, &matrix);
        let op_norm = operator_norm(&source, &target, &matrix);
        Ok(AlgebraHom {
            name: format!("{}->{}", source.name(), target.name()),
            source,
            target,
            matrix,
            mult_residual,
            worst_pair,
            op_norm,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn from_images(
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        images: &[Vec<Scalar>],
    ) -> Result<Self> {
        if images.len() != source.dim() || images.iter().any(|v| v.len() != target.dim()) {
            return Err(Error::Shape("basis images do not match hom dimensions".into()));
        }
        let m = Matrix::from_fn(target.dim(), source.dim(), |i, j| images[j][i]);
        Self::new(source, target, m)
    }

    pub fn zero(source: FiniteAlgebra, target: FiniteAlgebra) -> Self {
        let m = Matrix::zeros(target.dim(), source.dim());
        Self::new(source, target, m).expect("shape consistent")
    }

    pub fn identity(alg: FiniteAlgebra) -> Self {
        let n = alg.dim();
        Self::new(alg.clone(), alg, Matrix::identity(n, n)).expect("shape consistent")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &FiniteAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn mult_residual(&self) -> f64 {
        self.mult_residual
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    pub fn apply(&self, b: &[Scalar]) -> Vec<Scalar> {
        (&self.matrix * Vector::from_column_slice(b)).as_slice().to_vec()
    }

    pub fn as_linear_map(&self) -> LinearMap {
        LinearMap::new(
            Space::algebra(&self.source),
            Space::algebra(&self.target),
            self.matrix.clone(),
        )
    }

    pub fn is_epi(&self, tol: f64) -> bool {
        linalg::rank(&self.matrix, tol) == self.target.dim()
    }
}

fn multiplicativity(source: &FiniteAlgebra, target: &FiniteAlgebra, m: &Matrix) -> (f64, Option<(usize, usize)>) {
    let nb = source.dim();
    let col = |j: usize| -> Vec<Scalar> { m.column(j).iter().copied().collect() };
    let mut worst = 0.0;
    let mut at = None;
    for i in 0..nb {
        for j in 0..nb {
            let lhs = (m * Vector::from_column_slice(source.basis_product(i, j))).as_slice().to_vec();
            let rhs = target.mul_coords(&col(i), &col(j));
            let r = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            if r > worst {
                worst = r;
                at = Some((i, j));
            }
        }
    }
    (worst, at)
}

/// Operator norm induced by the weighted l1 norms.
fn operator_norm(source: &FiniteAlgebra, target: &FiniteAlgebra, m: &Matrix) -> f64 {
    let wa = target.norm_weights();
    let wb = source.norm_weights();
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| wa[i] * m[(i, j)].norm()).sum::<f64>() / wb[j])
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub name: String,
    pub source: String,
    pub target: String,
    pub mult_residual: f64,
    pub worst_pair: Option<(String, String)>,
    pub multiplicative: bool,
    pub op_norm: f64,
    pub contractive: bool,
    pub rank: usize,
    pub epi: bool,
    pub mono: bool,
    pub warnings: Vec<String>,
}

impl HomReport {
    pub fn is_valid(&self) -> bool {
        self.multiplicative
    }
}

pub fn check_hom(t: &AlgebraHom, tol: f64) -> HomReport {
    let rank = linalg::rank(&t.matrix, tol);
    let multiplicative = t.mult_residual <= tol;
    let contractive = t.op_norm <= 1.0 + tol;
    let mut warnings = Vec::new();
    if !contractive {
        warnings.push(format!("operator norm {:.6} exceeds 1", t.op_norm));
    }
    HomReport {
        name: t.name.clone(),
        source: t.source.name().to_owned(),
        target: t.target.name().to_owned(),
        mult_residual: t.mult_residual,
        worst_pair: if multiplicative {
            None
        } else {
            t.worst_pair.map(|(i, j)| {
                (t.source.basis()[i].clone(), t.source.basis()[j].clone())
            })
        },
        multiplicative,
        op_norm: t.op_norm,
        contractive,
        rank,
        epi: rank == t.target.dim(),
        mono: rank == t.source.dim(),
        warnings,
    }
}

/// `theta(b) = phi(b) e` for unital `A` and a character `phi` of `B`.
pub fn lau_hom(a: &FiniteAlgebra, b: &FiniteAlgebra, phi: &Character, tol: f64) -> Result<AlgebraHom> {
    if phi.algebra != b.name() || phi.values().len() != b.dim() {
        return Err(Error::mismatch(b.name(), &phi.algebra));
    }
    let unit = crate::algebra::find_two_sided_identity(a, tol)
        .ok_or_else(|| Error::HomInvalid(format!("`{}` is not unital", a.name())))?;
    let m = Matrix::from_fn(a.dim(), b.dim(), |i, j| phi.values()[j] * unit.coords[i]);
    Ok(AlgebraHom::new(b.clone(), a.clone(), m)?.with_name(format!("lau[{}]", b.name())))
}

#[derive(Debug, Clone)]
pub struct MorphismProduct {
    a: FiniteAlgebra,
    b: FiniteAlgebra,
    hom: AlgebraHom,
    product: FiniteAlgebra,
}

pub fn build_product(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    t: &AlgebraHom,
    tol: f64,
) -> Result<MorphismProduct> {
    if t.target() != a {
        return Err(Error::mismatch(a.name(), t.target().name()));
    }
    if t.source() != b {
        return Err(Error::mismatch(b.name(), t.source().name()));
    }
    MorphismProduct::build(t, tol)
}

impl MorphismProduct {
    pub fn build(t: &AlgebraHom, tol: f64) -> Result<Self> {
        let report = check_hom(t, tol);
        if !report.is_valid() {
            let (x, y) = report.worst_pair.clone().unwrap_or_default();
            return Err(Error::HomInvalid(format!(
                "{}: multiplicativity residual {:.3e} at ({x}, {y})",
                t.name(),
                report.mult_residual
            )));
        }
        let a = t.target().clone();
        let b = t.source().clone();
        let (na, nb) = (a.dim(), b.dim());
        let n = na + nb;
        let tm = t.matrix();
        let mut flat = vec![ZERO; n * n * n];
        let mut put = |i: usize, j: usize, k: usize, v: Scalar| flat[(i * n + j) * n + k] += v;
        for i in 0..na {
            for j in 0..na {
                for k in 0..na {
                    put(i, j, k, a.coeff(i, j, k));
                }
            }
        }
        // (e_i, 0)(0, f_j) = (e_i T(f_j), 0) and (0, f_i)(e_j, 0) = (T(f_i) e_j, 0).
        for i in 0..na {
            for j in 0..nb {
                for l in 0..na {
                    let t_lj = tm[(l, j)];
                    if t_lj == ZERO {
                        continue;
                    }
                    for k in 0..na {
                        put(i, na + j, k, t_lj * a.coeff(i, l, k));
                        put(na + j, i, k, t_lj * a.coeff(l, i, k));
                    }
                }
            }
        }
        for i in 0..nb {
            for j in 0..nb {
                for k in 0..nb {
                    put(na + i, na + j, na + k, b.coeff(i, j, k));
                }
            }
        }
        let labels: Vec<String> = a
            .basis()
            .iter()
            .map(|l| format!("({l},0)"))
            .chain(b.basis().iter().map(|l| format!("(0,{l})")))
            .collect();
        let weights: Vec<f64> = a.norm_weights().iter().chain(b.norm_weights()).copied().collect();
        let name = format!("{}x[{}]{}", a.name(), t.name(), b.name());
        let product = FiniteAlgebra::from_flat(name, labels, flat)?.with_norm_weights(weights)?;
        Ok(MorphismProduct {
            a,
            b,
            hom: t.clone(),
            product,
        })
    }

    pub fn a(&self) -> &FiniteAlgebra {
        &self.a
    }

    pub fn b(&self) -> &FiniteAlgebra {
        &self.b
    }

    pub fn hom(&self) -> &AlgebraHom {
        &self.hom
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.product
    }

    pub fn dim_a(&self) -> usize {
        self.a.dim()
    }

    pub fn dim_b(&self) -> usize {
        self.b.dim()
    }

    pub fn join(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().chain(b).copied().collect()
    }

    pub fn split<'x>(&self, x: &'x [Scalar]) -> (&'x [Scalar], &'x [Scalar]) {
        x.split_at(self.dim_a())
    }

    /// The multiplication written blockwise in terms of `A`, `B` and `T`.
    pub fn block_multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let (a1, b1) = self.split(x);
        let (a2, b2) = self.split(y);
        let tb1 = self.hom.apply(b1);
        let tb2 = self.hom.apply(b2);
        let p = self.a.mul_coords(a1, a2);
        let q = self.a.mul_coords(a1, &tb2);
        let r = self.a.mul_coords(&tb1, a2);
        let first: Vec<Scalar> = p.iter().zip(&q).zip(&r).map(|((p, q), r)| p + q + r).collect();
        self.join(&first, &self.b.mul_coords(b1, b2))
    }

    /// `P1(a, b) = a + T(b)`, a homomorphism onto its image in `A`.
    pub fn p1(&self) -> Matrix {
        let (na, nb) = (self.dim_a(), self.dim_b());
        let mut m = Matrix::zeros(na, na + nb);
        m.view_mut((0, 0), (na, na)).fill_with_identity();
        m.view_mut((0, na), (na, nb)).copy_from(self.hom.matrix());
        m
    }

    /// `P2(a, b) = b`, the quotient map onto `B`.
    pub fn p2(&self) -> Matrix {
        let (na, nb) = (self.dim_a(), self.dim_b());
        let mut m = Matrix::zeros(nb, na + nb);
        m.view_mut((0, na), (nb, nb)).fill_with_identity();
        m
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        validate_algebra(&self.product, tol)
    }
}

#[derive(Debug, Clone)]
pub struct IdealQuotient {
    pub ideal_check: bool,
    /// Largest B-block entry among products with an A-block factor.
    pub ideal_residual: f64,
    /// `(a, b) + A -> b`, as a map from the product onto `B`.
    pub quotient_iso: LinearMap,
    pub quotient_hom_residual: f64,
    /// Kernel is exactly the A-block and the map is onto `B`.
    pub quotient_bijective: bool,
}

pub fn ideal_and_quotient(p: &MorphismProduct, tol: f64) -> IdealQuotient {
    let alg = p.algebra();
    let (na, n) = (p.dim_a(), alg.dim());
    let mut ideal_residual: f64 = 0.0;
    for i in 0..na {
        for x in 0..n {
            for prod in [alg.basis_product(i, x), alg.basis_product(x, i)] {
                ideal_residual = ideal_residual.max(linalg::max_abs(&prod[na..]));
            }
        }
    }
    let q = p.p2();
    let mut hom_residual: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = &q * Vector::from_column_slice(alg.basis_product(i, j));
            let qi: Vec<Scalar> = q.column(i).iter().copied().collect();
            let qj: Vec<Scalar> = q.column(j).iter().copied().collect();
            let rhs = p.b().mul_coords(&qi, &qj);
            let r = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
            hom_residual = hom_residual.max(r);
        }
    }
    let kernel = linalg::nullspace(&q, tol);
    let mut a_block = Matrix::zeros(n, na);
    for i in 0..na {
        a_block[(i, i)] = ONE;
    }
    let bijective = linalg::rank(&q, tol) == p.dim_b() && linalg::same_span(&kernel, &a_block, tol);
    IdealQuotient {
        ideal_check: ideal_residual <= tol,
        ideal_residual,
        quotient_iso: LinearMap::new(Space::algebra(alg), Space::algebra(p.b()), q),
        quotient_hom_residual: hom_residual,
        quotient_bijective: bijective && hom_residual <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::standard;

    #[test]
    fn zero_hom_report() {
        let r = check_hom(&AlgebraHom::zero(standard::complex(), standard::pointwise(2)), 1e-9);
        assert!(r.is_valid());
        assert_eq!(r.op_norm, 0.0);
        assert!(!r.epi);
    }

    #[test]
    fn identity_hom_report() {
        let r = check_hom(&AlgebraHom::identity(standard::complex()), 1e-9);
        assert!(r.is_valid() && r.epi && r.mono);
        assert_eq!(r.op_norm, 1.0);
    }

    #[test]
    fn non_multiplicative_hom_names_pair() {
        let c2 = standard::pointwise(2);
        let mut m = Matrix::identity(2, 2);
        m[(0, 1)] = c(0.5);
        let r = check_hom(&AlgebraHom::new(c2.clone(), c2, m).unwrap(), 1e-9);
        assert!(!r.is_valid());
        assert!(r.worst_pair.is_some());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let e = AlgebraHom::new(standard::complex(), standard::pointwise(2), Matrix::zeros(1, 1));
        assert!(matches!(e, Err(Error::Shape(_))));
    }

    #[test]
    fn complex_identity_product_table() {
        let p = MorphismProduct::build(&AlgebraHom::identity(standard::complex()), 1e-9).unwrap();
        let alg = p.algebra();
        // (a1,b1)(a2,b2) = (a1a2 + a1b2 + b1a2, b1b2)
        assert_eq!(alg.basis_product(0, 0), &[c(1.0), c(0.0)]);
        assert_eq!(alg.basis_product(0, 1), &[c(1.0), c(0.0)]);
        assert_eq!(alg.basis_product(1, 0), &[c(1.0), c(0.0)]);
        assert_eq!(alg.basis_product(1, 1), &[c(0.0), c(1.0)]);
        let x = [c(2.0), c(3.0)];
        let y = [c(5.0), c(7.0)];
        assert_eq!(alg.mul_coords(&x, &y), vec![c(10.0 + 14.0 + 15.0), c(21.0)]);
    }

    #[test]
    fn zero_hom_gives_block_diagonal_tensor() {
        let a = standard::upper_triangular2();
        let b = standard::cyclic_group(2);
        let p = MorphismProduct::build(&AlgebraHom::zero(b, a), 1e-9).unwrap();
        let alg = p.algebra();
        for i in 0..5 {
            for j in 0..5 {
                let mixed = (i < 3) != (j < 3);
                if mixed {
                    assert!(alg.basis_product(i, j).iter().all(|z| *z == ZERO));
                }
            }
        }
    }

    #[test]
    fn lau_product_matches_formula() {
        let a = standard::pointwise(2);
        let b = standard::complex();
        let phi = Character::unchecked(b.name(), vec![c(1.0)]);
        let t = lau_hom(&a, &b, &phi, 1e-9).unwrap();
        assert_eq!(t.apply(&[c(3.0)]), vec![c(3.0), c(3.0)]);
        assert!(check_hom(&t, 1e-9).is_valid());
        let p = MorphismProduct::build(&t, 1e-9).unwrap();
        let x = [c(1.0), c(2.0), c(3.0)];
        let y = [c(-1.0), c(4.0), c(0.5)];
        // (a1 a2 + phi(b2) a1 + phi(b1) a2, b1 b2)
        let a1a2 = [c(-1.0), c(8.0)];
        let expect = [
            a1a2[0] + c(0.5) * x[0] + c(3.0) * y[0],
            a1a2[1] + c(0.5) * x[1] + c(3.0) * y[1],
            c(1.5),
        ];
        assert_eq!(p.algebra().mul_coords(&x, &y), expect.to_vec());
    }

    #[test]
    fn lau_requires_unital_target() {
        let phi = Character::unchecked("C", vec![c(1.0)]);
        let e = lau_hom(&standard::zero_product(), &standard::complex(), &phi, 1e-9);
        assert!(matches!(e, Err(Error::HomInvalid(_))));
    }

    #[test]
    fn ideal_and_quotient_for_identity() {
        let p = MorphismProduct::build(&AlgebraHom::identity(standard::complex()), 1e-9).unwrap();
        let iq = ideal_and_quotient(&p, 1e-9);
        assert!(iq.ideal_check);
        assert!(iq.quotient_bijective);
        assert_eq!(iq.quotient_iso.matrix.shape(), (1, 2));
    }

    #[test]
    fn invalid_hom_refused_by_product() {
        let c2 = standard::pointwise(2);
        let m = Matrix::from_element(2, 2, c(1.0));
        let t = AlgebraHom::new(c2.clone(), c2, m).unwrap();
        assert!(matches!(MorphismProduct::build(&t, 1e-9), Err(Error::HomInvalid(_))));
    }

    #[test]
    fn mismatched_factors_rejected() {
        let t = AlgebraHom::identity(standard::complex());
        let e = build_product(&standard::pointwise(2), &standard::complex(), &t, 1e-9);
        assert!(matches!(e, Err(Error::AlgebraMismatch { .. })));
    }
}
