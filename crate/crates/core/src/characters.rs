//! Character spaces.
//!
//! Characters vanish on the two-sided ideal generated by commutators, so they
//! are found on the commutative quotient: the left-multiplication operators of
//! the quotient commute, and a character is a nonzero joint eigenvalue of that
//! family. Joint generalized eigenspaces are split recursively with seeded
//! random combinations until each block carries a single joint eigenvalue.

use nalgebra::Schur;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::dual::{diff, hom_adjoints};
use crate::linalg::{self, pair, Matrix, Scalar, Vector, ZERO};
use crate::morphism::MorphismProduct;

/// A nonzero multiplicative linear functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Character {
    pub algebra: String,
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    functional: Vec<Scalar>,
    pub residual: f64,
}

impl Character {
    /// Wrap a functional without checking it; the residual is recorded as zero.
    pub fn unchecked(algebra: &str, values: Vec<Scalar>) -> Self {
        Character {
            algebra: algebra.to_owned(),
            functional: values,
            residual: 0.0,
        }
    }

    /// Values on the basis, `phi(e_i)`.
    pub fn values(&self) -> &[Scalar] {
        &self.functional
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        pair(&self.functional, x)
    }

    pub fn distance(&self, other: &[Scalar]) -> f64 {
        diff(&self.functional, other)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Rejection {
    #[error("functional has {found} coordinates, algebra has dimension {expected}")]
    Shape { expected: usize, found: usize },
    #[error("functional is zero")]
    Zero,
    #[error("not multiplicative at basis pair ({i}, {j}): residual {residual:.3e}")]
    NotMultiplicative { i: usize, j: usize, residual: f64 },
}

/// `max |f(e_i e_j) - f(e_i) f(e_j)|` and the pair attaining it.
pub fn multiplicative_residual(alg: &FiniteAlgebra, f: &[Scalar]) -> (f64, (usize, usize)) {
    let n = alg.dim();
    let mut worst = (0.0, (0, 0));
    for i in 0..n {
        for j in 0..n {
            let r = (pair(f, alg.basis_product(i, j)) - f[i] * f[j]).norm();
            if r > worst.0 {
                worst = (r, (i, j));
            }
        }
    }
    worst
}

pub fn verify_character(alg: &FiniteAlgebra, f: &[Scalar], tol: f64) -> Result<Character, Rejection> {
    if f.len() != alg.dim() {
        return Err(Rejection::Shape {
            expected: alg.dim(),
            found: f.len(),
        });
    }
    let (residual, (i, j)) = multiplicative_residual(alg, f);
    if residual > tol {
        return Err(Rejection::NotMultiplicative { i, j, residual });
    }
    if linalg::max_abs(f) <= tol {
        return Err(Rejection::Zero);
    }
    Ok(Character {
        algebra: alg.name().to_owned(),
        functional: f.to_vec(),
        residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub algebra: String,
    pub characters: Vec<Character>,
    /// Certified complete: every refinement block carries one joint eigenvalue
    /// and every candidate verified.
    pub complete: bool,
    pub commutator_ideal_dim: usize,
    pub quotient_dim: usize,
    pub notes: Vec<String>,
}

/// Orthonormal basis of the two-sided ideal generated by all commutators.
pub fn commutator_ideal(alg: &FiniteAlgebra, tol: f64) -> Matrix {
    let n = alg.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let v: Vec<Scalar> = alg
                .basis_product(i, j)
                .iter()
                .zip(alg.basis_product(j, i))
                .map(|(x, y)| x - y)
                .collect();
            gens.push(v);
        }
    }
    let mut basis = span_of(n, &gens, tol);
    loop {
        let mut next: Vec<Vec<Scalar>> = columns(&basis);
        for col in columns(&basis) {
            for k in 0..n {
                let mut e = vec![ZERO; n];
                e[k] = linalg::ONE;
                next.push(alg.mul_coords(&e, &col));
                next.push(alg.mul_coords(&col, &e));
            }
        }
        let grown = span_of(n, &next, tol);
        if grown.ncols() == basis.ncols() {
            return basis;
        }
        basis = grown;
    }
}

fn columns(m: &Matrix) -> Vec<Vec<Scalar>> {
    (0..m.ncols()).map(|k| m.column(k).iter().copied().collect()).collect()
}

fn span_of(n: usize, vecs: &[Vec<Scalar>], tol: f64) -> Matrix {
    if vecs.is_empty() {
        return Matrix::zeros(n, 0);
    }
    let m = Matrix::from_fn(n, vecs.len(), |r, c| vecs[c][r]);
    if linalg::max_abs(m.as_slice()) <= tol {
        return Matrix::zeros(n, 0);
    }
    linalg::column_space(&m, tol)
}

fn eigenvalues(m: &Matrix) -> Option<Vec<Scalar>> {
    if m.nrows() == 0 {
        return Some(Vec::new());
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)?;
    let (_, t) = schur.unpack();
    Some((0..t.nrows()).map(|k| t[(k, k)]).collect())
}

/// Single-linkage clusters `(mean, multiplicity)` with deterministic ordering.
fn cluster(values: &[Scalar], tol: f64) -> Vec<(Scalar, usize)> {
    let n = values.len();
    let mut group: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if (values[i] - values[j]).norm() <= tol {
                let (gi, gj) = (group[i], group[j]);
                for g in group.iter_mut() {
                    if *g == gi {
                        *g = gj;
                    }
                }
            }
        }
    }
    let mut ids: Vec<usize> = group.clone();
    ids.sort_unstable();
    ids.dedup();
    let mut out: Vec<(Scalar, usize)> = ids
        .into_iter()
        .map(|id| {
            let members: Vec<Scalar> = (0..n).filter(|&k| group[k] == id).map(|k| values[k]).collect();
            let mean = members.iter().sum::<Scalar>() / linalg::c(members.len() as f64);
            (mean, members.len())
        })
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

struct Refiner<'a> {
    ops: &'a [Matrix],
    cluster_tol: f64,
    tol: f64,
    rng: ChaCha8Rng,
    complete: bool,
    notes: Vec<String>,
}

const SPLIT_ATTEMPTS: usize = 8;

impl Refiner<'_> {
    fn restricted(&self, x: &Matrix) -> Vec<Matrix> {
        self.ops.iter().map(|m| x.adjoint() * m * x).collect()
    }

    fn scale(&self, ops: &[Matrix]) -> f64 {
        ops.iter().map(linalg::linf_norm).fold(1.0, f64::max)
    }

    /// Joint eigenvalue tuple if every restricted operator has a single cluster.
    fn joint_eigenvalue(&mut self, ops: &[Matrix]) -> Option<Vec<Scalar>> {
        let tol = self.cluster_tol * self.scale(ops);
        let mut lambda = Vec::with_capacity(ops.len());
        for r in ops {
            let eig = match eigenvalues(r) {
                Some(e) => e,
                None => {
                    self.complete = false;
                    self.notes.push("eigenvalue iteration did not converge".into());
                    return None;
                }
            };
            if cluster(&eig, tol).len() > 1 {
                return None;
            }
            lambda.push(r.trace() / linalg::c(r.nrows() as f64));
        }
        Some(lambda)
    }

    fn try_split(&self, s: &Matrix, ops: &[Matrix]) -> Option<Vec<Matrix>> {
        let d = s.nrows();
        let eig = eigenvalues(s)?;
        let tol = self.cluster_tol * self.scale(ops).max(linalg::linf_norm(s));
        let clusters = cluster(&eig, tol);
        if clusters.len() < 2 {
            return None;
        }
        let mut pieces = Vec::new();
        let mut total = 0;
        for (mu, k) in clusters {
            let shifted = s - Matrix::identity(d, d) * mu;
            let mut power = Matrix::identity(d, d);
            for _ in 0..k {
                power *= &shifted;
            }
            let w = linalg::nullspace(&power, self.tol);
            if w.ncols() != k {
                return None;
            }
            for r in ops {
                let rw = r * &w;
                let leak = &rw - &w * (w.adjoint() * &rw);
                if linalg::linf_norm(&leak) > tol {
                    return None;
                }
            }
            total += k;
            pieces.push(w);
        }
        (total == d).then_some(pieces)
    }

    fn refine(&mut self, x: Matrix, out: &mut Vec<Vec<Scalar>>) {
        let ops = self.restricted(&x);
        if let Some(lambda) = self.joint_eigenvalue(&ops) {
            out.push(lambda);
            return;
        }
        let d = x.ncols();
        let mut split = None;
        for _ in 0..SPLIT_ATTEMPTS {
            let mut s = Matrix::zeros(d, d);
            for r in &ops {
                let w = Scalar::new(self.rng.random_range(-1.0..1.0), self.rng.random_range(-1.0..1.0));
                s += r * w;
            }
            split = self.try_split(&s, &ops);
            if split.is_some() {
                break;
            }
        }
        if split.is_none() {
            // Fall back to the individual operators.
            split = ops.iter().find_map(|r| self.try_split(r, &ops));
        }
        match split {
            Some(pieces) => {
                for w in pieces {
                    self.refine(&x * w, out);
                }
            }
            None => {
                self.complete = false;
                self.notes.push(format!("eigenspace refinement stalled on a block of dimension {d}"));
                out.push(ops.iter().map(|r| r.trace() / linalg::c(d as f64)).collect());
            }
        }
    }
}

pub fn enumerate_characters(alg: &FiniteAlgebra, tol: f64, seed: u64) -> Enumeration {
    let n = alg.dim();
    let ideal = commutator_ideal(alg, tol);
    let quotient = if ideal.ncols() == 0 {
        Matrix::identity(n, n)
    } else {
        linalg::nullspace(&ideal.adjoint(), tol)
    };
    let q = quotient.ncols();
    let qcols = columns(&quotient);
    let project = |v: &[Scalar]| quotient.adjoint() * Vector::from_column_slice(v);
    let ops: Vec<Matrix> = (0..q)
        .map(|i| {
            let mut m = Matrix::zeros(q, q);
            for l in 0..q {
                m.set_column(l, &project(&alg.mul_coords(&qcols[i], &qcols[l])));
            }
            m
        })
        .collect();

    let mut refiner = Refiner {
        ops: &ops,
        cluster_tol: tol.sqrt().max(1e-6),
        tol,
        rng: ChaCha8Rng::seed_from_u64(seed),
        complete: true,
        notes: Vec::new(),
    };
    let mut tuples = Vec::new();
    if q > 0 {
        refiner.refine(Matrix::identity(q, q), &mut tuples);
    }
    let zero_tol = refiner.cluster_tol;
    let mut complete = refiner.complete;
    let mut notes = refiner.notes;

    let mut found: Vec<Character> = Vec::new();
    for lambda in tuples {
        if linalg::max_abs(&lambda) <= zero_tol {
            continue;
        }
        // phi = lambda o pi with pi(x) = Q^H x.
        let phi: Vec<Scalar> = (0..n)
            .map(|k| (0..q).map(|i| lambda[i] * quotient[(k, i)].conj()).sum())
            .collect();
        match verify_character(alg, &phi, tol) {
            Ok(ch) => push_unique(&mut found, ch, tol),
            Err(e) => {
                complete = false;
                notes.push(format!("candidate rejected: {e}"));
            }
        }
    }

    for declared in alg.declared_characters() {
        match verify_character(alg, declared, tol) {
            Ok(ch) => {
                if !found.iter().any(|c| c.distance(ch.values()) <= 10.0 * tol) {
                    complete = false;
                    notes.push("declared character not found by enumeration".into());
                    found.push(ch);
                }
            }
            Err(e) => notes.push(format!("declared functional rejected: {e}")),
        }
    }

    sort_characters(&mut found);
    Enumeration {
        algebra: alg.name().to_owned(),
        characters: found,
        complete,
        commutator_ideal_dim: ideal.ncols(),
        quotient_dim: q,
        notes,
    }
}

fn push_unique(list: &mut Vec<Character>, ch: Character, tol: f64) {
    if !list.iter().any(|c| c.distance(ch.values()) <= 10.0 * tol) {
        list.push(ch);
    }
}

fn sort_key(ch: &Character) -> Vec<(i64, i64)> {
    ch.values()
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

fn sort_characters(list: &mut [Character]) {
    list.sort_by_key(sort_key);
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionMismatch {
    #[serde(serialize_with = "crate::report::ser_complex_vec")]
    pub character: Vec<Scalar>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProductCharacters {
    /// `(phi, phi o T)` for `phi` in the character space of `A`.
    pub lifted: Vec<Character>,
    /// `(0, psi)` for `psi` in the character space of `B`.
    pub pure_b: Vec<Character>,
    pub sigma_a: Enumeration,
    pub sigma_b: Enumeration,
    pub enumerated: Enumeration,
    /// Largest multiplicativity residual of a lifted or pure-B functional on the product.
    pub membership_residual: f64,
    /// Largest multiplicativity residual of `phi o T` on `B`.
    pub composition_residual: f64,
    /// Every nonzero `phi o T` appears among the enumerated characters of `B`.
    pub composition_in_sigma_b: Option<bool>,
    pub disjoint: bool,
    /// `None` when some enumeration is incomplete.
    pub decomposition_ok: Option<bool>,
    pub mismatch: Option<DecompositionMismatch>,
}

impl ProductCharacters {
    pub fn complete(&self) -> bool {
        self.sigma_a.complete && self.sigma_b.complete && self.enumerated.complete
    }
}

pub fn product_characters(p: &MorphismProduct, tol: f64, seed: u64) -> ProductCharacters {
    let sigma_a = enumerate_characters(p.a(), tol, seed);
    let sigma_b = enumerate_characters(p.b(), tol, seed);
    let enumerated = enumerate_characters(p.algebra(), tol, seed);
    let t_prime = hom_adjoints(p.hom()).t_prime;
    let nb = p.dim_b();
    let prod = p.algebra();

    let mut membership: f64 = 0.0;
    let mut composition: f64 = 0.0;
    let mut composition_in_sigma_b = Some(true);
    let mut lifted = Vec::new();
    for phi in &sigma_a.characters {
        let phi_t = t_prime.apply(phi.values());
        let (r_b, _) = multiplicative_residual(p.b(), &phi_t);
        composition = composition.max(r_b);
        if linalg::max_abs(&phi_t) > tol
            && !sigma_b.characters.iter().any(|psi| psi.distance(&phi_t) <= 10.0 * tol)
        {
            composition_in_sigma_b = Some(false);
        }
        let values = p.join(phi.values(), &phi_t);
        let (r, _) = multiplicative_residual(prod, &values);
        membership = membership.max(r);
        lifted.push(Character {
            algebra: prod.name().to_owned(),
            functional: values,
            residual: r,
        });
    }
    if !sigma_b.complete && composition_in_sigma_b == Some(false) {
        composition_in_sigma_b = None;
    }
    let mut pure_b = Vec::new();
    for psi in &sigma_b.characters {
        let values = p.join(&vec![ZERO; p.dim_a()], psi.values());
        let (r, _) = multiplicative_residual(prod, &values);
        membership = membership.max(r);
        pure_b.push(Character {
            algebra: prod.name().to_owned(),
            functional: values,
            residual: r,
        });
    }
    debug_assert!(pure_b.iter().all(|c| c.values().len() == p.dim_a() + nb));

    let close = |x: &Character, y: &Character| x.distance(y.values()) <= 10.0 * tol;
    let disjoint = !lifted.iter().any(|l| pure_b.iter().any(|q| close(l, q)));

    let mut mismatch = None;
    let complete = sigma_a.complete && sigma_b.complete && enumerated.complete;
    let decomposition_ok = if complete {
        let union: Vec<&Character> = lifted.iter().chain(&pure_b).collect();
        for ch in &enumerated.characters {
            if !union.iter().any(|u| close(u, ch)) {
                mismatch = Some(DecompositionMismatch {
                    character: ch.values().to_vec(),
                    reason: "character of the product outside both families".into(),
                });
                break;
            }
        }
        if mismatch.is_none() {
            for u in &union {
                if !enumerated.characters.iter().any(|ch| close(u, ch)) {
                    mismatch = Some(DecompositionMismatch {
                        character: u.values().to_vec(),
                        reason: "family member not among the product's characters".into(),
                    });
                    break;
                }
            }
        }
        Some(mismatch.is_none() && disjoint && membership <= tol)
    } else {
        None
    };

    ProductCharacters {
        lifted,
        pure_b,
        sigma_a,
        sigma_b,
        enumerated,
        membership_residual: membership,
        composition_residual: composition,
        composition_in_sigma_b,
        disjoint,
        decomposition_ok,
        mismatch,
    }
}
