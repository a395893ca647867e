mod common;

use common::*;
use proptest::prelude::*;
use tpw::algebra::{associator, center, find_left_identity, find_right_identity};
use tpw::amenability::{derivation_space, leibniz_residual, lift_derivation, Projection};
use tpw::characters::enumerate_characters;
use tpw::dual::{arens_first_coords, arens_second_coords};
use tpw::linalg::{Matrix, Scalar};
use tpw::{FiniteAlgebra, LinearMap, MorphismProduct};

fn all_algebras() -> Vec<FiniteAlgebra> {
    let mut v = corpus_algebras();
    v.extend(products().into_iter().map(|(_, p)| p.algebra().clone()));
    v
}

fn coords(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Scalar::new(re, im)).collect())
}

fn algebra_and<T: Strategy>(
    f: impl Fn(usize) -> T + Clone + 'static,
) -> impl Strategy<Value = (FiniteAlgebra, T::Value)> {
    let algs = all_algebras();
    (0..algs.len()).prop_flat_map(move |i| {
        let alg = algs[i].clone();
        let n = alg.dim();
        (Just(alg), f.clone()(n))
    })
}

fn norm(v: &[Scalar]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn associativity_of_random_triples((alg, (x, y, z)) in algebra_and(|n| (coords(n), coords(n), coords(n)))) {
        let scale = 1.0 + norm(&x) * norm(&y) * norm(&z);
        prop_assert!(associator(&alg, &x, &y, &z) <= 10.0 * f64::EPSILON * scale * alg.dim() as f64);
    }

    #[test]
    fn multiplication_operators_agree_with_product((alg, (x, y)) in algebra_and(|n| (coords(n), coords(n)))) {
        let direct = alg.mul_coords(&x, &y);
        let yv = tpw::linalg::Vector::from_column_slice(&y);
        let xv = tpw::linalg::Vector::from_column_slice(&x);
        let left = alg.left_matrix(&x) * &yv;
        let right = alg.right_matrix(&y) * &xv;
        prop_assert!(max_diff(left.as_slice(), &direct) < 1e-12);
        prop_assert!(max_diff(right.as_slice(), &direct) < 1e-12);
    }

    #[test]
    fn arens_products_restrict_to_the_algebra((alg, (x, y)) in algebra_and(|n| (coords(n), coords(n)))) {
        let direct = alg.mul_coords(&x, &y);
        prop_assert!(max_diff(&arens_first_coords(&alg, &x, &y), &direct) < 1e-9);
        prop_assert!(max_diff(&arens_second_coords(&alg, &x, &y), &direct) < 1e-9);
    }

    #[test]
    fn center_commutes_and_is_closed((alg, (w, x)) in algebra_and(|n| (coords(n), coords(n)))) {
        let z = center(&alg, 1e-9);
        prop_assume!(z.ncols() > 0);
        // Center dimension never exceeds n, so the first columns of `w` pick a central element.
        let zv = &z * tpw::linalg::Vector::from_column_slice(&w[..z.ncols()]);
        let zc = zv.as_slice().to_vec();
        let comm = max_diff(&alg.mul_coords(&zc, &x), &alg.mul_coords(&x, &zc));
        prop_assert!(comm < 1e-9 * (1.0 + norm(&zc) * norm(&x)));
        // The product of two central elements is central.
        let sq = alg.mul_coords(&zc, &zc);
        let comm = max_diff(&alg.mul_coords(&sq, &x), &alg.mul_coords(&x, &sq));
        prop_assert!(comm < 1e-9 * (1.0 + norm(&sq) * norm(&x)));
    }

    #[test]
    fn identities_act_as_identities((alg, x) in algebra_and(coords)) {
        if let Some(e) = find_left_identity(&alg, 1e-9) {
            prop_assert!(max_diff(&alg.mul_coords(&e.coords, &x), &x) < 1e-9);
        }
        if let Some(e) = find_right_identity(&alg, 1e-9) {
            prop_assert!(max_diff(&alg.mul_coords(&x, &e.coords), &x) < 1e-9);
        }
    }

    #[test]
    fn characters_do_not_depend_on_seed(i in 0usize..64, seed in any::<u64>()) {
        let algs = all_algebras();
        let alg = &algs[i % algs.len()];
        let base = enumerate_characters(alg, 1e-9, 0);
        let other = enumerate_characters(alg, 1e-9, seed);
        prop_assert_eq!(base.complete, other.complete);
        prop_assert_eq!(base.characters.len(), other.characters.len());
        for (a, b) in base.characters.iter().zip(&other.characters) {
            prop_assert!(max_diff(a.values(), b.values()) < 1e-7);
        }
    }
}

fn combination(basis: &[LinearMap], weights: &[Scalar]) -> Option<LinearMap> {
    let first = basis.first()?;
    let mut m = Matrix::zeros(first.matrix.nrows(), first.matrix.ncols());
    for (d, w) in basis.iter().zip(weights) {
        m += &d.matrix * *w;
    }
    Some(LinearMap::new(first.source.clone(), first.target.clone(), m))
}

fn lifted_combinations_are_derivations(p: &MorphismProduct, seed: u64) {
    let mut g = rng(seed);
    for (which, factor) in [(Projection::P1, p.a()), (Projection::P2, p.b())] {
        let ds = derivation_space(factor, 1e-9);
        for _ in 0..8 {
            let w = random_coords(&mut g, ds.der_basis.len());
            let Some(d) = combination(&ds.der_basis, &w) else { continue };
            let lifted = lift_derivation(&d, which, p, 1e-8).expect("a derivation");
            let (res, _) = leibniz_residual(p.algebra(), &lifted.matrix);
            assert!(res < 1e-8, "{} {which:?}: {res}", p.algebra().name());
        }
    }
}

#[test]
fn random_lifted_derivations_satisfy_leibniz() {
    for (i, (_, p)) in products().iter().enumerate() {
        lifted_combinations_are_derivations(p, i as u64);
    }
}
