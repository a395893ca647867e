//! Derivations into the dual, invariance elements and inner means.
//!
//! All three notions reduce to linear systems over the structure constants:
//! derivations `D: A -> A'` are the nullspace of the Leibniz system, one-sided
//! invariant elements solve `Phi [] a = phi(a) Phi` (or `a [] Phi = phi(a) Phi`),
//! and inner means are central elements with `<m, phi> = 1`.

use serde::Serialize;
use serde_json::json;

use crate::algebra::{self, FiniteAlgebra, LinearMap, Space};
use crate::characters::enumerate_characters;
use crate::dual::{a_dot_f, add, arens_first_coords, diff, f_dot_a, hom_adjoints, scale, sub};
use crate::error::{Error, Result};
use crate::linalg::{self, pair, unit, Matrix, Scalar, Vector, ZERO};
use crate::morphism::MorphismProduct;
use crate::report::{self, CheckReport, Status};
use crate::Side;

#[derive(Debug, Clone, Serialize)]
pub struct DerivationSpace {
    pub algebra: String,
    /// Target module: the dual with `f . a = f(a -)` and `a . f = f(- a)`.
    pub module: String,
    #[serde(skip)]
    pub der_basis: Vec<LinearMap>,
    #[serde(skip)]
    pub inner_basis: Vec<LinearMap>,
    pub dim_der: usize,
    pub dim_inner: usize,
    /// Worst Leibniz residual over the derivation basis.
    pub leibniz_residual: f64,
    /// Worst distance of an inner derivation from the derivation span.
    pub inner_excess: f64,
}

impl DerivationSpace {
    pub fn is_weakly_amenable(&self) -> bool {
        self.dim_der == self.dim_inner
    }
}

/// `max |D(e_i e_j) - D(e_i) . e_j - e_i . D(e_j)|` and the worst pair.
/// Column `m` of `d` is the functional `D(e_m)`.
pub fn leibniz_residual(alg: &FiniteAlgebra, d: &Matrix) -> (f64, (usize, usize)) {
    let n = alg.dim();
    let image = |x: &[Scalar]| (d * Vector::from_column_slice(x)).as_slice().to_vec();
    let mut worst = (0.0, (0, 0));
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let lhs = image(alg.basis_product(i, j));
            let rhs = add(&f_dot_a(alg, &image(&ei), &ej), &a_dot_f(alg, &ei, &image(&ej)));
            let r = diff(&lhs, &rhs);
            if r > worst.0 {
                worst = (r, (i, j));
            }
        }
    }
    worst
}

/// Matrix of `ad_x: a -> a . x - x . a` for a functional `x`.
pub fn inner_derivation(alg: &FiniteAlgebra, x: &[Scalar]) -> Matrix {
    let n = alg.dim();
    let mut d = Matrix::zeros(n, n);
    for m in 0..n {
        let em = unit(n, m);
        let col = sub(&a_dot_f(alg, &em, x), &f_dot_a(alg, x, &em));
        d.set_column(m, &Vector::from_vec(col));
    }
    d
}

/// Stacked Leibniz system: `n^3` equations in the `n^2` unknowns `D_{l,m}`,
/// column-major (`m * n + l`).
fn leibniz_system(alg: &FiniteAlgebra) -> Matrix {
    let n = alg.dim();
    let mut sys = Matrix::zeros(n * n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let row = (i * n + j) * n + l;
                for k in 0..n {
                    sys[(row, k * n + l)] += alg.coeff(i, j, k);
                }
                for p in 0..n {
                    sys[(row, i * n + p)] -= alg.coeff(j, l, p);
                    sys[(row, j * n + p)] -= alg.coeff(l, i, p);
                }
            }
        }
    }
    sys
}

fn derivation_map(alg: &FiniteAlgebra, d: Matrix) -> LinearMap {
    LinearMap::new(Space::algebra(alg), Space::dual(alg), d)
}

pub fn derivation_space(alg: &FiniteAlgebra, tol: f64) -> DerivationSpace {
    let n = alg.dim();
    let null = linalg::nullspace(&leibniz_system(alg), tol);
    let mut inner_map = Matrix::zeros(n * n, n);
    for k in 0..n {
        let d = inner_derivation(alg, &unit(n, k));
        inner_map.set_column(k, &Vector::from_column_slice(d.as_slice()));
    }
    let inner = linalg::column_space(&inner_map, tol);
    let as_maps = |basis: &Matrix| -> Vec<LinearMap> {
        (0..basis.ncols())
            .map(|c| derivation_map(alg, Matrix::from_column_slice(n, n, basis.column(c).as_slice())))
            .collect()
    };
    let der_basis = as_maps(&null);
    let leibniz = der_basis
        .iter()
        .map(|d| leibniz_residual(alg, &d.matrix).0)
        .fold(0.0, f64::max);
    DerivationSpace {
        algebra: alg.name().to_owned(),
        module: "dual".into(),
        dim_der: null.ncols(),
        dim_inner: inner.ncols(),
        inner_excess: linalg::span_excess(&null, &inner),
        der_basis,
        inner_basis: as_maps(&inner),
        leibniz_residual: leibniz,
    }
}

pub fn is_weakly_amenable(alg: &FiniteAlgebra, tol: f64) -> bool {
    derivation_space(alg, tol).is_weakly_amenable()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Projection {
    /// `P1(a, b) = a + T(b)`, onto `A`.
    P1,
    /// `P2(a, b) = b`, onto `B`.
    P2,
}

/// `D = P' o d o P`, a derivation of the product into its dual.
pub fn lift_derivation(d: &LinearMap, which: Projection, p: &MorphismProduct, tol: f64) -> Result<LinearMap> {
    let (factor, proj) = match which {
        Projection::P1 => (p.a(), p.p1()),
        Projection::P2 => (p.b(), p.p2()),
    };
    let n = factor.dim();
    if d.matrix.shape() != (n, n) {
        return Err(Error::Shape(format!(
            "derivation of `{}` must be {n}x{n}, got {}x{}",
            factor.name(),
            d.matrix.nrows(),
            d.matrix.ncols()
        )));
    }
    let (residual, (i, j)) = leibniz_residual(factor, &d.matrix);
    if residual > tol {
        return Err(Error::NotADerivation { i, j, residual });
    }
    let lifted = proj.transpose() * &d.matrix * &proj;
    Ok(derivation_map(p.algebra(), lifted))
}

/// Solution space of the one-sided invariance system for a functional `phi`.
#[derive(Debug, Clone, Serialize)]
pub struct TliSolution {
    pub side: Side,
    #[serde(serialize_with = "report::ser_complex_vec")]
    pub character: Vec<Scalar>,
    #[serde(serialize_with = "ser_columns")]
    pub basis: Matrix,
    pub exists_nonvanishing: bool,
    /// Minimal-norm solution with `<Phi, phi> = 1`, when one exists.
    #[serde(serialize_with = "report::ser_opt_complex_vec")]
    pub witness: Option<Vec<Scalar>>,
}

fn ser_columns<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    report::columns_json(m).serialize(s)
}

impl TliSolution {
    /// The solution space when it carries a nonvanishing element, else `{0}`.
    pub fn nonvanishing_span(&self) -> Matrix {
        if self.exists_nonvanishing {
            self.basis.clone()
        } else {
            Matrix::zeros(self.basis.nrows(), 0)
        }
    }
}

/// `max |Phi [] e_j - phi_j Phi|` (left) or `max |e_j [] Phi - phi_j Phi|` (right).
pub fn tli_residual(alg: &FiniteAlgebra, phi: &[Scalar], big_phi: &[Scalar], side: Side) -> f64 {
    let n = alg.dim();
    (0..n)
        .map(|j| {
            let ej = unit(n, j);
            let prod = match side {
                Side::Left => arens_first_coords(alg, big_phi, &ej),
                Side::Right => arens_first_coords(alg, &ej, big_phi),
            };
            diff(&prod, &scale(phi[j], big_phi))
        })
        .fold(0.0, f64::max)
}

/// Minimal-norm `x` in the span of the orthonormal columns `basis` with `<x, f> = 1`.
fn normalized_in_span(basis: &Matrix, f: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    let w: Vec<Scalar> = (0..basis.ncols())
        .map(|k| pair(basis.column(k).as_slice(), f))
        .collect();
    let norm2: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let threshold = 10.0 * tol * linalg::max_abs(f).max(1.0);
    if norm2.sqrt() <= threshold {
        return None;
    }
    let coeffs = Vector::from_iterator(w.len(), w.iter().map(|z| z.conj() / norm2));
    Some((basis * coeffs).as_slice().to_vec())
}

pub fn solve_tli(alg: &FiniteAlgebra, phi: &[Scalar], side: Side, tol: f64) -> TliSolution {
    let n = alg.dim();
    let mut sys = Matrix::zeros(n * n, n);
    for i in 0..n {
        let ei = unit(n, i);
        for j in 0..n {
            let ej = unit(n, j);
            let prod = match side {
                Side::Left => arens_first_coords(alg, &ei, &ej),
                Side::Right => arens_first_coords(alg, &ej, &ei),
            };
            for k in 0..n {
                sys[(j * n + k, i)] = prod[k] - if k == i { phi[j] } else { ZERO };
            }
        }
    }
    let basis = linalg::nullspace(&sys, tol);
    let witness = normalized_in_span(&basis, phi, tol);
    TliSolution {
        side,
        character: phi.to_vec(),
        exists_nonvanishing: witness.is_some(),
        basis,
        witness,
    }
}

/// A character of the product, by the family it belongs to.
#[derive(Debug, Clone)]
pub enum ProductCharacter {
    /// `(phi, phi o T)` for `phi` a character of `A`.
    Lifted(Vec<Scalar>),
    /// `(0, psi)` for `psi` a character of `B`.
    PureB(Vec<Scalar>),
}

impl ProductCharacter {
    pub fn values(&self, p: &MorphismProduct) -> Vec<Scalar> {
        match self {
            ProductCharacter::Lifted(phi) => {
                let tp = hom_adjoints(p.hom()).t_prime;
                p.join(phi, &tp.apply(phi))
            }
            ProductCharacter::PureB(psi) => p.join(&vec![ZERO; p.dim_a()], psi),
        }
    }
}

fn stack_blocks(top: &Matrix, bottom: &Matrix) -> Matrix {
    linalg::vstack(&[top.clone(), bottom.clone()])
}

/// Compare the product's nonvanishing invariance span with the image of the
/// factor's: `(Phi, 0)` for lifted characters, `(-T''(Psi), Psi)` for pure ones.
pub fn tli_product_characterization(
    p: &MorphismProduct,
    ch: &ProductCharacter,
    side: Side,
    tol: f64,
) -> CheckReport {
    let chi = ch.values(p);
    let prod = solve_tli(p.algebra(), &chi, side, tol);
    let (family, factor_span) = match ch {
        ProductCharacter::Lifted(phi) => {
            let s = solve_tli(p.a(), phi, side, tol).nonvanishing_span();
            ("lifted", stack_blocks(&s, &Matrix::zeros(p.dim_b(), s.ncols())))
        }
        ProductCharacter::PureB(psi) => {
            let s = solve_tli(p.b(), psi, side, tol).nonvanishing_span();
            let ts = hom_adjoints(p.hom()).t_second.matrix;
            ("pure", stack_blocks(&(-(&ts * &s)), &s))
        }
    };
    let factor_span = linalg::orthonormal_span(&factor_span, tol);
    let product_span = prod.nonvanishing_span();
    let mut r = CheckReport::new(format!("{} {}-invariance", p.algebra().name(), side.label()));
    let forward = linalg::span_excess(&factor_span, &product_span);
    let backward = linalg::span_excess(&product_span, &factor_span);
    let dims = (product_span.ncols(), factor_span.ncols());
    let witness = || {
        json!({
            "character": report::complex_vec_json(&chi),
            "product_span": report::columns_json(&product_span),
            "factor_image_span": report::columns_json(&factor_span),
        })
    };
    let bound = 10.0 * tol;
    let detail = format!("{family} character, spans of dimension {} and {}", dims.0, dims.1);
    r.bound(
        &format!("tli.characterization.{}.{family}.forward", side.label()),
        if dims.0 > dims.1 { f64::INFINITY } else { forward },
        bound,
        witness,
        detail.clone(),
    );
    r.bound(
        &format!("tli.characterization.{}.{family}.backward", side.label()),
        if dims.1 > dims.0 { f64::INFINITY } else { backward },
        bound,
        witness,
        detail,
    );
    if let Some(w) = &prod.witness {
        r.bound(
            &format!("tli.witness.{}", side.label()),
            tli_residual(p.algebra(), &chi, w, side).max((pair(w, &chi) - 1.0).norm()),
            bound,
            || json!({"element": report::complex_vec_json(w)}),
            "normalized invariant element",
        );
    }
    r
}

#[derive(Debug, Clone, Serialize)]
pub struct CharacterAmenability {
    pub algebra: String,
    pub side: Side,
    pub status: Status,
    #[serde(serialize_with = "report::ser_opt_complex_vec")]
    pub identity: Option<Vec<Scalar>>,
    pub characters: usize,
    pub enumeration_complete: bool,
    pub report: CheckReport,
}

impl CharacterAmenability {
    /// `Some(true)` / `Some(false)` when decided, `None` when unknown.
    pub fn decision(&self) -> Option<bool> {
        match self.status {
            Status::Pass => Some(true),
            Status::Fail => Some(false),
            _ => None,
        }
    }
}

/// A one-sided identity and, for every character, an invariant element not
/// annihilated by it. The zero functional needs only the identity condition.
pub fn is_character_amenable(alg: &FiniteAlgebra, side: Side, tol: f64, seed: u64) -> CharacterAmenability {
    let mut r = CheckReport::new(format!("{} {} character amenability", alg.name(), side.label()));
    r.caveat(report::BAI_CAVEAT);
    r.caveat(report::ZERO_CHARACTER_CAVEAT);
    let identity = match side {
        Side::Left => algebra::find_left_identity(alg, tol),
        Side::Right => algebra::find_right_identity(alg, tol),
    }
    .map(|e| e.coords);
    let enumeration = enumerate_characters(alg, tol, seed);
    let claim_id = format!("identity.{}", side.label());
    match &identity {
        Some(e) => r.pass(&claim_id, None, format!("{} identity {:?}", side.label(), short(e))),
        None => r.fail(&claim_id, json!({"algebra": alg.name()}), None, "no one-sided identity"),
    }
    let mut all_have = true;
    for ch in &enumeration.characters {
        let sol = solve_tli(alg, ch.values(), side, tol);
        let claim = format!("invariant-element.{}", side.label());
        match &sol.witness {
            Some(w) => r.pass(
                &claim,
                Some(tli_residual(alg, ch.values(), w, side)),
                format!("character {:?}", short(ch.values())),
            ),
            None => {
                all_have = false;
                r.fail(
                    &claim,
                    json!({
                        "character": report::complex_vec_json(ch.values()),
                        "solution_span": report::columns_json(&sol.basis),
                    }),
                    None,
                    "every invariant element is annihilated by the character",
                )
            }
        }
    }
    if !enumeration.complete {
        r.unknown("characters.complete", enumeration.notes.join("; "));
    }
    let status = if identity.is_none() || !all_have {
        Status::Fail
    } else if enumeration.complete {
        Status::Pass
    } else {
        Status::Unknown
    };
    CharacterAmenability {
        algebra: alg.name().to_owned(),
        side,
        status,
        identity,
        characters: enumeration.characters.len(),
        enumeration_complete: enumeration.complete,
        report: r.finish(),
    }
}

/// Rounded coordinates for human-readable details.
fn short(v: &[Scalar]) -> Vec<(f64, f64)> {
    v.iter()
        .map(|z| ((z.re * 1e6).round() / 1e6, (z.im * 1e6).round() / 1e6))
        .collect()
}

/// Residuals `(|<m, phi> - 1|, max_a |m [] a - a [] m|)` of the inner-mean equations.
pub fn inner_mean_residual(alg: &FiniteAlgebra, m: &[Scalar], phi: &[Scalar]) -> (f64, f64) {
    let n = alg.dim();
    let commutation = (0..n)
        .map(|j| {
            let a = unit(n, j);
            diff(&arens_first_coords(alg, m, &a), &arens_first_coords(alg, &a, m))
        })
        .fold(0.0, f64::max);
    ((pair(m, phi) - 1.0).norm(), commutation)
}

/// Minimal-norm central `m` with `<m, phi> = 1`; `None` when `phi` vanishes on the center.
pub fn solve_inner_mean(alg: &FiniteAlgebra, phi: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    normalized_in_span(&algebra::center(alg, tol), phi, tol)
}

/// `Some(decision)` when the enumeration is complete or a character fails, else `None`.
pub fn is_character_inner_amenable(alg: &FiniteAlgebra, tol: f64, seed: u64) -> Option<bool> {
    let e = enumerate_characters(alg, tol, seed);
    let all = e.characters.iter().all(|ch| solve_inner_mean(alg, ch.values(), tol).is_some());
    if !all {
        Some(false)
    } else if e.complete {
        Some(true)
    } else {
        None
    }
}

fn mean_witness_check(
    r: &mut CheckReport,
    claim: &str,
    alg: &FiniteAlgebra,
    m: &[Scalar],
    phi: &[Scalar],
    tol: f64,
    detail: String,
) {
    let (p, c) = inner_mean_residual(alg, m, phi);
    r.bound(
        claim,
        p.max(c),
        10.0 * tol,
        || {
            json!({
                "mean": report::complex_vec_json(m),
                "character": report::complex_vec_json(phi),
                "pairing_residual": p,
                "commutation_residual": c,
            })
        },
        detail,
    );
}

fn equivalence(
    r: &mut CheckReport,
    claim: &str,
    lhs: Option<bool>,
    rhs: Option<bool>,
    detail: String,
) {
    match (lhs, rhs) {
        (Some(x), Some(y)) => r.expect(
            claim,
            x == y,
            || json!({"product": x, "factors": y}),
            format!("{detail}: product {x}, factors {y}"),
        ),
        _ => r.unknown(claim, format!("{detail}: undecided")),
    }
}

/// Central product element with `<(m, n), chi> = 1` and `<n, phi o T> = 1`.
fn mean_with_nonzero_tail(p: &MorphismProduct, chi: &[Scalar], phi_t: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    let z = algebra::center(p.algebra(), tol);
    if z.ncols() == 0 {
        return None;
    }
    let tail = p.join(&vec![ZERO; p.dim_a()], phi_t);
    let mut sys = Matrix::zeros(2, z.ncols());
    for k in 0..z.ncols() {
        sys[(0, k)] = pair(z.column(k).as_slice(), chi);
        sys[(1, k)] = pair(z.column(k).as_slice(), &tail);
    }
    let rhs = Vector::from_vec(vec![linalg::ONE, linalg::ONE]);
    let sol = linalg::solve_min_norm(&sys, &rhs, tol);
    sol.consistent.then(|| (&z * sol.x).as_slice().to_vec())
}

/// Inner-mean relations between the product and its factors.
pub fn inner_amenability_suite(p: &MorphismProduct, tol: f64, seed: u64) -> CheckReport {
    let pc = crate::characters::product_characters(p, tol, seed);
    let adj = hom_adjoints(p.hom());
    let epi = p.hom().is_epi(tol);
    let prod = p.algebra();
    let mut r = CheckReport::new(format!("{} inner amenability", prod.name()));
    r.caveat(report::INNER_MEAN_CAVEAT);

    for (phi, lifted) in pc.sigma_a.characters.iter().zip(&pc.lifted) {
        let phi = phi.values();
        let chi = lifted.values();
        let phi_t = adj.t_prime.apply(phi);
        let tag = format!("{:?}", short(phi));
        let a_mean = solve_inner_mean(p.a(), phi, tol);
        let p_mean = solve_inner_mean(prod, chi, tol);
        equivalence(
            &mut r,
            "inner-amenability.lifted.equivalence",
            Some(p_mean.is_some()),
            Some(a_mean.is_some()),
            format!("character {tag}"),
        );
        match &a_mean {
            Some(m) => {
                let lifted_mean = p.join(m, &vec![ZERO; p.dim_b()]);
                mean_witness_check(&mut r, "inner-mean.lifted-witness", prod, &lifted_mean, chi, tol, format!("(m, 0) for {tag}"));
            }
            None => r.not_applicable("inner-mean.lifted-witness", format!("no mean for {tag}")),
        }
        match &p_mean {
            Some(mn) => {
                let (m, n) = p.split(mn);
                let collapsed = add(m, &adj.t_second.apply(n));
                mean_witness_check(&mut r, "inner-mean.collapsed-witness", p.a(), &collapsed, phi, tol, format!("m + T''(n) for {tag}"));
            }
            None => r.not_applicable("inner-mean.collapsed-witness", format!("no product mean for {tag}")),
        }
        // A product mean whose tail does not vanish on phi o T.
        let tail_mean = if linalg::max_abs(&phi_t) <= tol {
            None
        } else {
            p_mean
                .clone()
                .filter(|mn| pair(p.split(mn).1, &phi_t).norm() > 10.0 * tol)
                .or_else(|| mean_with_nonzero_tail(p, chi, &phi_t, tol))
        };
        match &tail_mean {
            Some(mn) => {
                let n = p.split(mn).1;
                let s = pair(n, &phi_t);
                let scaled: Vec<Scalar> = n.iter().map(|z| z / s).collect();
                mean_witness_check(&mut r, "inner-mean.scaled-witness", p.b(), &scaled, &phi_t, tol, format!("n / n(phi o T) for {tag}"));
            }
            None => r.not_applicable("inner-mean.scaled-witness", format!("no product mean with n(phi o T) != 0 for {tag}")),
        }
        if epi {
            match solve_inner_mean(p.b(), &phi_t, tol) {
                Some(n) => {
                    let w = p.join(&vec![ZERO; p.dim_a()], &n);
                    mean_witness_check(&mut r, "inner-mean.epi-witness", prod, &w, chi, tol, format!("(0, n) for {tag}"));
                }
                None => r.not_applicable("inner-mean.epi-witness", format!("no mean for phi o T, {tag}")),
            }
        } else {
            r.not_applicable("inner-mean.epi-witness", "homomorphism is not surjective");
        }
    }

    for (psi, pure) in pc.sigma_b.characters.iter().zip(&pc.pure_b) {
        let psi = psi.values();
        let chi = pure.values();
        let tag = format!("{:?}", short(psi));
        let b_mean = solve_inner_mean(p.b(), psi, tol);
        let p_mean = solve_inner_mean(prod, chi, tol);
        equivalence(
            &mut r,
            "inner-amenability.pure.equivalence",
            Some(p_mean.is_some()),
            Some(b_mean.is_some()),
            format!("character {tag}"),
        );
        match &b_mean {
            Some(n) => {
                let shifted: Vec<Scalar> = adj.t_second.apply(n).iter().map(|z| -z).collect();
                let w = p.join(&shifted, n);
                mean_witness_check(&mut r, "inner-mean.pure-witness", prod, &w, chi, tol, format!("(-T''(n), n) for {tag}"));
            }
            None => r.not_applicable("inner-mean.pure-witness", format!("no mean for {tag}")),
        }
        match &p_mean {
            Some(mn) => {
                let n = p.split(mn).1.to_vec();
                mean_witness_check(&mut r, "inner-mean.pure-converse", p.b(), &n, psi, tol, format!("tail n for {tag}"));
            }
            None => r.not_applicable("inner-mean.pure-converse", format!("no product mean for {tag}")),
        }
    }

    if !pc.complete() {
        r.unknown("characters.complete", "some character enumeration is incomplete");
    }
    let prod_cia = is_character_inner_amenable(prod, tol, seed);
    let a_cia = is_character_inner_amenable(p.a(), tol, seed);
    let b_cia = is_character_inner_amenable(p.b(), tol, seed);
    let factors = match (a_cia, b_cia) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    };
    equivalence(
        &mut r,
        "character-inner-amenability.equivalence",
        prod_cia,
        factors,
        "character inner amenability".into(),
    );
    r.finish()
}
