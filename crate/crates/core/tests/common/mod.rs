//! Shared helpers for the integration tests, including an exact rational
//! oracle for derivation-space dimensions that shares no code with the crate.

#![allow(clippy::needless_range_loop)]

#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpw::linalg::Scalar;
use tpw::{FiniteAlgebra, MorphismProduct};

pub type Q = BigRational;

/// Exact value of a structure constant. Panics on non-real or non-dyadic input.
pub fn exact(z: Scalar) -> Q {
    assert_eq!(z.im, 0.0, "oracle handles real structure constants only");
    Q::from_float(z.re).expect("finite constant")
}

/// Structure constants of `alg` as exact rationals, `c[i][j][k]`.
pub fn exact_tensor(alg: &FiniteAlgebra) -> Vec<Vec<Vec<Q>>> {
    alg.structure_tensor()
        .into_iter()
        .map(|rows| rows.into_iter().map(|v| v.into_iter().map(exact).collect()).collect())
        .collect()
}

/// Rank by fraction-exact Gaussian elimination.
pub fn exact_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &p;
                for c in col..cols {
                    let delta = &f * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `(dim Der(A, A'), dim Inn(A, A'))` computed exactly.
///
/// A derivation is stored as values `D[m][l] = D(e_m)(e_l)`. With
/// `(f . b)(x) = f(b x)` and `(a . f)(x) = f(x a)`, the Leibniz identity on
/// `(e_i, e_j)` evaluated at `e_l` reads
/// `D(e_i e_j)(e_l) = D(e_i)(e_j e_l) + D(e_j)(e_l e_i)`.
pub fn oracle_derivation_dims(alg: &FiniteAlgebra) -> (usize, usize) {
    let c = exact_tensor(alg);
    let n = alg.dim();
    let var = |m: usize, l: usize| m * n + l;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut row = vec![Q::zero(); n * n];
                for k in 0..n {
                    row[var(k, l)] += c[i][j][k].clone();
                }
                for p in 0..n {
                    row[var(i, p)] -= c[j][l][p].clone();
                    row[var(j, p)] -= c[l][i][p].clone();
                }
                rows.push(row);
            }
        }
    }
    let dim_der = n * n - exact_rank(rows);

    // ad_x(e_m)(e_l) = x(e_l e_m) - x(e_m e_l), linear in x.
    let mut inner = Vec::new();
    for q in 0..n {
        let mut row = vec![Q::zero(); n * n];
        for m in 0..n {
            for l in 0..n {
                row[var(m, l)] = &c[l][m][q] - &c[m][l][q];
            }
        }
        inner.push(row);
    }
    (dim_der, exact_rank(inner))
}

/// `(a1, b1)(a2, b2) = (a1 a2 + a1 T(b2) + T(b1) a2, b1 b2)` from the factors alone.
pub fn product_by_formula(p: &MorphismProduct, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let na = p.dim_a();
    let (a1, b1) = x.split_at(na);
    let (a2, b2) = y.split_at(na);
    let a = p.a();
    let t = p.hom();
    let (tb1, tb2) = (t.apply(b1), t.apply(b2));
    let mut first = a.mul_coords(a1, a2);
    for (acc, v) in first.iter_mut().zip(a.mul_coords(a1, &tb2)) {
        *acc += v;
    }
    for (acc, v) in first.iter_mut().zip(a.mul_coords(&tb1, a2)) {
        *acc += v;
    }
    first.extend(p.b().mul_coords(b1, b2));
    first
}

pub fn random_coords(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_diff(x: &[Scalar], y: &[Scalar]) -> f64 {
    assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Every algebra appearing in the built-in corpus, products included, by name.
pub fn corpus_algebras() -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for e in tpw::corpus::builtin_corpus() {
        let p = MorphismProduct::build(&e.hom, 1e-9).expect("corpus product");
        for alg in [e.algebra_a.clone(), e.algebra_b.clone(), p.algebra().clone()] {
            if !out.iter().any(|a| a.name() == alg.name()) {
                out.push(alg);
            }
        }
    }
    out
}

pub fn products() -> Vec<(tpw::corpus::CorpusEntry, MorphismProduct)> {
    tpw::corpus::builtin_corpus()
        .into_iter()
        .map(|e| {
            let p = MorphismProduct::build(&e.hom, 1e-9).expect("corpus product");
            (e, p)
        })
        .collect()
}
