//! Dual and bidual calculus.
//!
//! Functionals are coordinate vectors in the dual basis (`f(e_i) = f_i`);
//! bidual elements are coordinate vectors under the canonical identification
//! of the second dual with the algebra. Pairings are bilinear.
//!
//! The Arens products are evaluated through the pairing chain
//! `<Phi [] Psi, f> = <Phi, Psi . f>` and `<Phi <> Psi, f> = <Psi, f . Phi>`,
//! never by multiplying the coordinates directly.

use serde::Serialize;

use crate::algebra::{AlgebraElement, FiniteAlgebra, LinearMap, Space};
use crate::error::{Error, Result};
use crate::linalg::{self, pair, unit, Matrix, Scalar, Vector};
use crate::morphism::{AlgebraHom, MorphismProduct};
use crate::Side;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualElement {
    pub algebra: String,
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    pub coords: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BidualElement {
    pub algebra: String,
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    pub coords: Vec<Scalar>,
}

impl DualElement {
    pub fn new(alg: &FiniteAlgebra, coords: Vec<Scalar>) -> Result<Self> {
        check_len(alg, coords.len())?;
        Ok(DualElement {
            algebra: alg.name().to_owned(),
            coords,
        })
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        pair(&self.coords, x)
    }
}

impl BidualElement {
    pub fn new(alg: &FiniteAlgebra, coords: Vec<Scalar>) -> Result<Self> {
        check_len(alg, coords.len())?;
        Ok(BidualElement {
            algebra: alg.name().to_owned(),
            coords,
        })
    }

    /// Canonical image of an algebra element: `<x, f> = f(x)`.
    pub fn embed(x: &AlgebraElement) -> Self {
        BidualElement {
            algebra: x.algebra.clone(),
            coords: x.coords.clone(),
        }
    }

    pub fn pair(&self, f: &[Scalar]) -> Scalar {
        pair(&self.coords, f)
    }
}

fn check_len(alg: &FiniteAlgebra, len: usize) -> Result<()> {
    if len != alg.dim() {
        return Err(Error::Shape(format!(
            "{len} coordinates for `{}` of dimension {}",
            alg.name(),
            alg.dim()
        )));
    }
    Ok(())
}

fn same_algebra(alg: &FiniteAlgebra, name: &str) -> Result<()> {
    if alg.name() != name {
        return Err(Error::mismatch(alg.name(), name));
    }
    Ok(())
}

fn apply_t(m: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    (m.transpose() * Vector::from_column_slice(x)).as_slice().to_vec()
}

/// `(f . a)(x) = f(a x)`.
pub fn f_dot_a(alg: &FiniteAlgebra, f: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
    apply_t(&alg.left_matrix(a), f)
}

/// `(a . f)(x) = f(x a)`.
pub fn a_dot_f(alg: &FiniteAlgebra, a: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
    apply_t(&alg.right_matrix(a), f)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualActions {
    pub f_dot_a: DualElement,
    pub a_dot_f: DualElement,
}

pub fn dual_actions(alg: &FiniteAlgebra, f: &DualElement, a: &AlgebraElement) -> Result<DualActions> {
    same_algebra(alg, &f.algebra)?;
    same_algebra(alg, &a.algebra)?;
    check_len(alg, f.coords.len())?;
    check_len(alg, a.coords.len())?;
    Ok(DualActions {
        f_dot_a: DualElement {
            algebra: alg.name().to_owned(),
            coords: f_dot_a(alg, &f.coords, &a.coords),
        },
        a_dot_f: DualElement {
            algebra: alg.name().to_owned(),
            coords: a_dot_f(alg, &a.coords, &f.coords),
        },
    })
}

/// `<Phi . f, a> = <Phi, f . a>`.
pub fn bidual_dot_dual(alg: &FiniteAlgebra, phi: &[Scalar], f: &[Scalar]) -> Vec<Scalar> {
    let n = alg.dim();
    (0..n).map(|j| pair(phi, &f_dot_a(alg, f, &unit(n, j)))).collect()
}

/// `<f . Phi, a> = <Phi, a . f>`.
pub fn dual_dot_bidual(alg: &FiniteAlgebra, f: &[Scalar], phi: &[Scalar]) -> Vec<Scalar> {
    let n = alg.dim();
    (0..n).map(|j| pair(phi, &a_dot_f(alg, &unit(n, j), f))).collect()
}

/// First Arens product, coordinates read off against the dual basis.
pub fn arens_first_coords(alg: &FiniteAlgebra, phi: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
    let n = alg.dim();
    (0..n)
        .map(|k| pair(phi, &bidual_dot_dual(alg, psi, &unit(n, k))))
        .collect()
}

/// Second Arens product, coordinates read off against the dual basis.
pub fn arens_second_coords(alg: &FiniteAlgebra, phi: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
    let n = alg.dim();
    (0..n)
        .map(|k| pair(psi, &dual_dot_bidual(alg, &unit(n, k), phi)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arens {
    First,
    Second,
}

impl Arens {
    pub const BOTH: [Arens; 2] = [Arens::First, Arens::Second];

    pub fn apply(self, alg: &FiniteAlgebra, phi: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
        match self {
            Arens::First => arens_first_coords(alg, phi, psi),
            Arens::Second => arens_second_coords(alg, phi, psi),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Arens::First => "first",
            Arens::Second => "second",
        }
    }
}

fn check_bidual_pair(alg: &FiniteAlgebra, phi: &BidualElement, psi: &BidualElement) -> Result<()> {
    same_algebra(alg, &phi.algebra)?;
    same_algebra(alg, &psi.algebra)?;
    check_len(alg, phi.coords.len())?;
    check_len(alg, psi.coords.len())
}

pub fn arens_first(alg: &FiniteAlgebra, phi: &BidualElement, psi: &BidualElement) -> Result<BidualElement> {
    check_bidual_pair(alg, phi, psi)?;
    Ok(BidualElement {
        algebra: alg.name().to_owned(),
        coords: arens_first_coords(alg, &phi.coords, &psi.coords),
    })
}

pub fn arens_second(alg: &FiniteAlgebra, phi: &BidualElement, psi: &BidualElement) -> Result<BidualElement> {
    check_bidual_pair(alg, phi, psi)?;
    Ok(BidualElement {
        algebra: alg.name().to_owned(),
        coords: arens_second_coords(alg, &phi.coords, &psi.coords),
    })
}

/// Both module actions of a product on its dual, computed directly in the
/// product algebra and through the block formulas in `A`, `B` and `T`.
#[derive(Debug, Clone)]
pub struct ProductDualActions {
    pub direct_fg_dot_ab: Vec<Scalar>,
    pub direct_ab_dot_fg: Vec<Scalar>,
    pub block_fg_dot_ab: Vec<Scalar>,
    pub block_ab_dot_fg: Vec<Scalar>,
    pub residual: f64,
}

pub fn product_dual_actions(
    p: &MorphismProduct,
    fg: &DualElement,
    ab: &AlgebraElement,
) -> Result<ProductDualActions> {
    let alg = p.algebra();
    same_algebra(alg, &fg.algebra)?;
    same_algebra(alg, &ab.algebra)?;
    check_len(alg, fg.coords.len())?;
    check_len(alg, ab.coords.len())?;
    Ok(product_dual_actions_coords(p, &fg.coords, &ab.coords))
}

pub fn product_dual_actions_coords(p: &MorphismProduct, fg: &[Scalar], ab: &[Scalar]) -> ProductDualActions {
    let alg = p.algebra();
    let (a_alg, b_alg) = (p.a(), p.b());
    let t = p.hom().matrix();
    let (f, g) = p.split(fg);
    let (a, b) = p.split(ab);
    let tb = p.hom().apply(b);

    let direct_fg_dot_ab = f_dot_a(alg, fg, ab);
    let direct_ab_dot_fg = a_dot_f(alg, ab, fg);

    // (f,g).(a,b) = (f.a + f.T(b), f o (L_a T) + g.b)
    let l_a_t = a_alg.left_matrix(a) * t;
    let first = add(&f_dot_a(a_alg, f, a), &f_dot_a(a_alg, f, &tb));
    let second = add(&apply_t(&l_a_t, f), &f_dot_a(b_alg, g, b));
    let block_fg_dot_ab = p.join(&first, &second);

    // (a,b).(f,g) = (a.f + T(b).f, f o (R_a T) + b.g)
    let r_a_t = a_alg.right_matrix(a) * t;
    let first = add(&a_dot_f(a_alg, a, f), &a_dot_f(a_alg, &tb, f));
    let second = add(&apply_t(&r_a_t, f), &a_dot_f(b_alg, b, g));
    let block_ab_dot_fg = p.join(&first, &second);

    let residual = diff(&direct_fg_dot_ab, &block_fg_dot_ab).max(diff(&direct_ab_dot_fg, &block_ab_dot_fg));
    ProductDualActions {
        direct_fg_dot_ab,
        direct_ab_dot_fg,
        block_fg_dot_ab,
        block_ab_dot_fg,
        residual,
    }
}

pub(crate) fn add(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub(crate) fn sub(x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub(crate) fn scale(s: Scalar, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|a| s * a).collect()
}

pub(crate) fn diff(x: &[Scalar], y: &[Scalar]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// `T'` on `A' -> B'` and `T''` on `B'' -> A''`, each built from its defining pairing.
#[derive(Debug, Clone)]
pub struct HomAdjoints {
    pub t_prime: LinearMap,
    pub t_second: LinearMap,
}

pub fn hom_adjoints(t: &AlgebraHom) -> HomAdjoints {
    let (a, b) = (t.target(), t.source());
    let (na, nb) = (a.dim(), b.dim());
    // T'(f) = f o T
    let mut tp = Matrix::zeros(nb, na);
    for i in 0..na {
        let f = unit(na, i);
        for j in 0..nb {
            tp[(j, i)] = pair(&f, &t.apply(&unit(nb, j)));
        }
    }
    // <T''(F), f> = <F, T'(f)>
    let mut ts = Matrix::zeros(na, nb);
    for j in 0..nb {
        let big_f = unit(nb, j);
        for k in 0..na {
            let tpf = (&tp * Vector::from_column_slice(&unit(na, k))).as_slice().to_vec();
            ts[(k, j)] = pair(&big_f, &tpf);
        }
    }
    HomAdjoints {
        t_prime: LinearMap::new(Space::dual(a), Space::dual(b), tp),
        t_second: LinearMap::new(Space::bidual(b), Space::bidual(a), ts),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdjointChecks {
    /// `max |T''(b) - T(b)|` over basis `b`.
    pub embedded_residual: f64,
    pub first_mult_residual: f64,
    pub second_mult_residual: f64,
    pub epi: bool,
    pub second_epi: bool,
}

pub fn check_adjoints(t: &AlgebraHom, tol: f64) -> AdjointChecks {
    let adj = hom_adjoints(t);
    let (a, b) = (t.target(), t.source());
    let nb = b.dim();
    let ts = &adj.t_second;
    let mut embedded: f64 = 0.0;
    for j in 0..nb {
        embedded = embedded.max(diff(&ts.apply(&unit(nb, j)), &t.apply(&unit(nb, j))));
    }
    let mut mult = [0.0_f64; 2];
    for (slot, arens) in Arens::BOTH.iter().enumerate() {
        for i in 0..nb {
            for j in 0..nb {
                let (x, y) = (unit(nb, i), unit(nb, j));
                let lhs = ts.apply(&arens.apply(b, &x, &y));
                let rhs = arens.apply(a, &ts.apply(&x), &ts.apply(&y));
                mult[slot] = mult[slot].max(diff(&lhs, &rhs));
            }
        }
    }
    AdjointChecks {
        embedded_residual: embedded,
        first_mult_residual: mult[0],
        second_mult_residual: mult[1],
        epi: t.is_epi(tol),
        second_epi: linalg::rank(&ts.matrix, tol) == a.dim(),
    }
}

/// `<Theta(Phi, Psi), (f, g)> = Phi(f) + Psi(g)`, evaluated on the product dual basis.
pub fn theta_iso_coords(p: &MorphismProduct, phi: &[Scalar], psi: &[Scalar]) -> Vec<Scalar> {
    let (na, nb) = (p.dim_a(), p.dim_b());
    (0..na + nb)
        .map(|k| {
            let fg = unit(na + nb, k);
            let (f, g) = fg.split_at(na);
            pair(phi, f) + pair(psi, g)
        })
        .collect()
}

pub fn theta_iso(p: &MorphismProduct, phi: &BidualElement, psi: &BidualElement) -> Result<BidualElement> {
    same_algebra(p.a(), &phi.algebra)?;
    same_algebra(p.b(), &psi.algebra)?;
    check_len(p.a(), phi.coords.len())?;
    check_len(p.b(), psi.coords.len())?;
    Ok(BidualElement {
        algebra: p.algebra().name().to_owned(),
        coords: theta_iso_coords(p, &phi.coords, &psi.coords),
    })
}

/// Product on `A'' x_{T''} B''`:
/// `(P1 P2 + P1 T''(Q2) + T''(Q1) P2, Q1 Q2)` with the chosen Arens product.
pub fn bidual_block_product(
    p: &MorphismProduct,
    t_second: &LinearMap,
    arens: Arens,
    x: (&[Scalar], &[Scalar]),
    y: (&[Scalar], &[Scalar]),
) -> (Vec<Scalar>, Vec<Scalar>) {
    let (phi1, psi1) = x;
    let (phi2, psi2) = y;
    let a = p.a();
    let t_psi1 = t_second.apply(psi1);
    let t_psi2 = t_second.apply(psi2);
    let first = add(
        &add(&arens.apply(a, phi1, phi2), &arens.apply(a, phi1, &t_psi2)),
        &arens.apply(a, &t_psi1, phi2),
    );
    (first, arens.apply(p.b(), psi1, psi2))
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaChecks {
    pub rank: usize,
    pub dim: usize,
    pub bijective: bool,
    /// Pairing identity residual on basis elements.
    pub pairing_residual: f64,
    pub first_hom_residual: f64,
    pub second_hom_residual: f64,
}

pub fn check_theta(p: &MorphismProduct, tol: f64) -> ThetaChecks {
    let (na, nb) = (p.dim_a(), p.dim_b());
    let n = na + nb;
    let adj = hom_adjoints(p.hom());
    let split_basis = |k: usize| -> (Vec<Scalar>, Vec<Scalar>) {
        let v = unit(n, k);
        let (x, y) = v.split_at(na);
        (x.to_vec(), y.to_vec())
    };
    let mut theta = Matrix::zeros(n, n);
    let mut pairing: f64 = 0.0;
    for k in 0..n {
        let (phi, psi) = split_basis(k);
        let img = theta_iso_coords(p, &phi, &psi);
        for l in 0..n {
            let (f, g) = split_basis(l);
            let expect = pair(&phi, &f) + pair(&psi, &g);
            pairing = pairing.max((pair(&img, &unit(n, l)) - expect).norm());
        }
        theta.set_column(k, &Vector::from_vec(img));
    }
    let mut hom = [0.0_f64; 2];
    for (slot, arens) in Arens::BOTH.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let (phi1, psi1) = split_basis(i);
                let (phi2, psi2) = split_basis(j);
                let (u, v) = bidual_block_product(p, &adj.t_second, *arens, (&phi1, &psi1), (&phi2, &psi2));
                let lhs = theta_iso_coords(p, &u, &v);
                let rhs = arens.apply(
                    p.algebra(),
                    &theta_iso_coords(p, &phi1, &psi1),
                    &theta_iso_coords(p, &phi2, &psi2),
                );
                hom[slot] = hom[slot].max(diff(&lhs, &rhs));
            }
        }
    }
    let rank = linalg::rank(&theta, tol);
    ThetaChecks {
        rank,
        dim: n,
        bijective: rank == n,
        pairing_residual: pairing,
        first_hom_residual: hom[0],
        second_hom_residual: hom[1],
    }
}

/// Residual of the topological-center condition for `Phi` against every basis `Psi`.
pub fn center_residual(alg: &FiniteAlgebra, phi: &[Scalar], side: Side) -> f64 {
    let n = alg.dim();
    (0..n)
        .map(|j| {
            let psi = unit(n, j);
            let (x, y) = match side {
                Side::Left => (phi, psi.as_slice()),
                Side::Right => (psi.as_slice(), phi),
            };
            diff(&arens_first_coords(alg, x, y), &arens_second_coords(alg, x, y))
        })
        .fold(0.0, f64::max)
}

pub fn topological_center_membership(
    alg: &FiniteAlgebra,
    phi: &BidualElement,
    side: Side,
    tol: f64,
) -> Result<bool> {
    same_algebra(alg, &phi.algebra)?;
    check_len(alg, phi.coords.len())?;
    Ok(center_residual(alg, &phi.coords, side) <= tol)
}

/// Orthonormal basis of the left or right topological center of the bidual.
pub fn topological_center(alg: &FiniteAlgebra, side: Side, tol: f64) -> Matrix {
    let n = alg.dim();
    let mut system = Matrix::zeros(n * n, n);
    for i in 0..n {
        let phi = unit(n, i);
        for j in 0..n {
            let psi = unit(n, j);
            let (x, y) = match side {
                Side::Left => (&phi, &psi),
                Side::Right => (&psi, &phi),
            };
            let d = sub(&arens_first_coords(alg, x, y), &arens_second_coords(alg, x, y));
            for (k, v) in d.into_iter().enumerate() {
                system[(j * n + k, i)] = v;
            }
        }
    }
    linalg::nullspace(&system, tol)
}

#[derive(Debug, Clone, Serialize)]
pub struct CenterShiftChecks {
    pub side: Side,
    pub product_center_dim: usize,
    pub a_center_dim: usize,
    pub b_center_dim: usize,
    /// `(Phi, Psi) -> (Phi + T''(Psi), Psi)` maps the product center into `Z(A'') x Z(B'')`.
    pub forward_residual: f64,
    /// `(Phi, Psi) -> (Phi - T''(Psi), Psi)` maps `Z(A'') x Z(B'')` into the product center.
    pub backward_residual: f64,
    /// Set equality of the product center with `Z(A'') x Z(B'')`; only asserted for epi `T`.
    pub epi_equality: Option<bool>,
}

pub fn center_shift_checks(p: &MorphismProduct, side: Side, tol: f64) -> CenterShiftChecks {
    let (na, nb) = (p.dim_a(), p.dim_b());
    let n = na + nb;
    let ts = hom_adjoints(p.hom()).t_second.matrix;
    let z_prod = topological_center(p.algebra(), side, tol);
    let z_a = topological_center(p.a(), side, tol);
    let z_b = topological_center(p.b(), side, tol);
    let mut z_ab = Matrix::zeros(n, z_a.ncols() + z_b.ncols());
    z_ab.view_mut((0, 0), (na, z_a.ncols())).copy_from(&z_a);
    z_ab.view_mut((na, z_a.ncols()), (nb, z_b.ncols())).copy_from(&z_b);

    let shift = |sign: f64| {
        let mut s = Matrix::identity(n, n);
        s.view_mut((0, na), (na, nb)).copy_from(&(&ts * linalg::c(sign)));
        s
    };
    let forward = linalg::span_excess(&z_ab, &(shift(1.0) * &z_prod));
    let backward = linalg::span_excess(&z_prod, &(shift(-1.0) * &z_ab));
    let epi_equality = p
        .hom()
        .is_epi(tol)
        .then(|| linalg::same_span(&z_prod, &z_ab, tol));
    CenterShiftChecks {
        side,
        product_center_dim: z_prod.ncols(),
        a_center_dim: z_a.ncols(),
        b_center_dim: z_b.ncols(),
        forward_residual: forward,
        backward_residual: backward,
        epi_equality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ONE, ZERO};
    use crate::standard;

    fn dual(alg: &FiniteAlgebra, v: &[f64]) -> DualElement {
        DualElement::new(alg, v.iter().map(|&x| c(x)).collect()).unwrap()
    }

    fn elem(alg: &FiniteAlgebra, v: &[f64]) -> AlgebraElement {
        alg.element(v.iter().map(|&x| c(x)).collect()).unwrap()
    }

    #[test]
    fn pointwise_actions_are_diagonal() {
        let alg = standard::pointwise(2);
        let acts = dual_actions(&alg, &dual(&alg, &[5.0, 7.0]), &elem(&alg, &[2.0, 3.0])).unwrap();
        assert_eq!(acts.f_dot_a.coords, vec![c(10.0), c(21.0)]);
        assert_eq!(acts.a_dot_f.coords, vec![c(10.0), c(21.0)]);
    }

    #[test]
    fn identity_acts_trivially() {
        let alg = standard::matrix2();
        let f = dual(&alg, &[1.0, -2.0, 3.0, 0.5]);
        let acts = dual_actions(&alg, &f, &elem(&alg, &[1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(acts.f_dot_a, f);
        assert_eq!(acts.a_dot_f, f);
    }

    #[test]
    fn row_algebra_actions() {
        // f = E12*, a = E11: (f.a)(x) = f(E11 x) reads off the E12 part, (a.f)(x) = f(x E11) = 0.
        let alg = standard::row_algebra();
        let acts = dual_actions(&alg, &dual(&alg, &[0.0, 1.0]), &elem(&alg, &[1.0, 0.0])).unwrap();
        assert_eq!(acts.f_dot_a.coords, vec![c(0.0), c(1.0)]);
        assert_eq!(acts.a_dot_f.coords, vec![c(0.0), c(0.0)]);
    }

    #[test]
    fn mismatched_algebra_rejected() {
        let alg = standard::pointwise(2);
        let other = standard::row_algebra();
        let e = dual_actions(&alg, &dual(&other, &[0.0, 1.0]), &elem(&alg, &[1.0, 0.0]));
        assert!(matches!(e, Err(Error::AlgebraMismatch { .. })));
    }

    #[test]
    fn arens_products_on_pointwise() {
        let alg = standard::pointwise(2);
        let phi = BidualElement::new(&alg, vec![c(1.0), c(2.0)]).unwrap();
        let psi = BidualElement::new(&alg, vec![c(3.0), c(4.0)]).unwrap();
        assert_eq!(arens_first(&alg, &phi, &psi).unwrap().coords, vec![c(3.0), c(8.0)]);
        assert_eq!(arens_second(&alg, &phi, &psi).unwrap().coords, vec![c(3.0), c(8.0)]);
        let zero = BidualElement::new(&alg, vec![c(0.0), c(0.0)]).unwrap();
        assert_eq!(arens_first(&alg, &phi, &zero).unwrap().coords, vec![c(0.0), c(0.0)]);
    }

    #[test]
    fn arens_products_match_noncommutative_product() {
        let alg = standard::matrix2();
        let x = [c(1.0), c(2.0), c(-1.0), c(0.5)];
        let y = [c(0.0), c(3.0), c(1.0), c(-2.0)];
        let direct = alg.mul_coords(&x, &y);
        assert!(diff(&arens_first_coords(&alg, &x, &y), &direct) < 1e-12);
        assert!(diff(&arens_second_coords(&alg, &x, &y), &direct) < 1e-12);
    }

    #[test]
    fn complex_identity_product_actions() {
        let p = MorphismProduct::build(&AlgebraHom::identity(standard::complex()), 1e-9).unwrap();
        let acts = product_dual_actions_coords(&p, &[c(1.0), c(1.0)], &[c(1.0), c(1.0)]);
        assert_eq!(acts.block_fg_dot_ab, vec![c(2.0), c(2.0)]);
        assert!(acts.residual < 1e-12);
    }

    #[test]
    fn zero_hom_actions_collapse() {
        let a = standard::matrix2();
        let b = standard::pointwise(2);
        let p = MorphismProduct::build(&AlgebraHom::zero(b.clone(), a.clone()), 1e-9).unwrap();
        let f = [c(1.0), c(2.0), c(3.0), c(4.0)];
        let g = [c(-1.0), c(5.0)];
        let x = [c(0.5), c(0.0), c(1.0), c(2.0)];
        let y = [c(3.0), c(-2.0)];
        let acts = product_dual_actions_coords(&p, &p.join(&f, &g), &p.join(&x, &y));
        let expect = p.join(&f_dot_a(&a, &f, &x), &f_dot_a(&b, &g, &y));
        assert!(diff(&acts.block_fg_dot_ab, &expect) < 1e-12);
        assert!(acts.residual < 1e-12);
    }

    #[test]
    fn adjoints() {
        let c2 = standard::pointwise(2);
        let swap = AlgebraHom::new(
            c2.clone(),
            c2.clone(),
            Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        )
        .unwrap();
        let adj = hom_adjoints(&swap);
        assert_eq!(adj.t_prime.matrix, swap.matrix().transpose());
        assert_eq!(&adj.t_second.matrix, swap.matrix());
        let zero = hom_adjoints(&AlgebraHom::zero(c2.clone(), c2.clone()));
        assert!(zero.t_prime.matrix.iter().all(|z| *z == ZERO));
        let id = hom_adjoints(&AlgebraHom::identity(c2));
        assert_eq!(id.t_second.matrix, Matrix::identity(2, 2));
        let checks = check_adjoints(&swap, 1e-9);
        assert!(checks.epi && checks.second_epi);
        assert_eq!(checks.embedded_residual, 0.0);
    }

    #[test]
    fn theta_examples() {
        let p = MorphismProduct::build(&AlgebraHom::identity(standard::complex()), 1e-9).unwrap();
        let img = theta_iso_coords(&p, &[c(2.0)], &[c(3.0)]);
        assert_eq!(pair(&img, &[c(1.0), c(1.0)]), c(5.0));
        let adj = hom_adjoints(p.hom());
        let one = [c(1.0)];
        let (u, v) = bidual_block_product(&p, &adj.t_second, Arens::First, (&one, &one), (&one, &one));
        assert_eq!((u.clone(), v.clone()), (vec![c(3.0)], vec![c(1.0)]));
        let lhs = theta_iso_coords(&p, &u, &v);
        let t11 = theta_iso_coords(&p, &one, &one);
        assert_eq!(lhs, arens_first_coords(p.algebra(), &t11, &t11));
        let checks = check_theta(&p, 1e-9);
        assert!(checks.bijective);
        assert!(checks.first_hom_residual < 1e-12 && checks.second_hom_residual < 1e-12);
    }

    #[test]
    fn every_element_is_in_topological_center() {
        let alg = standard::upper_triangular2();
        for side in [Side::Left, Side::Right] {
            assert_eq!(topological_center(&alg, side, 1e-9).ncols(), 3);
            let phi = BidualElement::new(&alg, vec![c(1.0), c(-2.0), c(0.25)]).unwrap();
            assert!(topological_center_membership(&alg, &phi, side, 1e-9).unwrap());
            let zero = BidualElement::new(&alg, vec![ZERO; 3]).unwrap();
            assert!(topological_center_membership(&alg, &zero, side, 1e-9).unwrap());
        }
    }

    #[test]
    fn center_shift_on_epi_hom() {
        let c2 = standard::pointwise(2);
        let swap = AlgebraHom::new(
            c2.clone(),
            c2,
            Matrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        )
        .unwrap();
        let p = MorphismProduct::build(&swap, 1e-9).unwrap();
        let s = center_shift_checks(&p, Side::Left, 1e-9);
        assert_eq!(s.product_center_dim, 4);
        assert!(s.forward_residual < 1e-9 && s.backward_residual < 1e-9);
        assert_eq!(s.epi_equality, Some(true));
    }
}
