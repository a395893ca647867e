//! The full claim suite for one morphism product.

use serde::Serialize;
use serde_json::json;

use crate::algebra::validate_algebra;
use crate::amenability::{
    derivation_space, inner_amenability_suite, is_character_amenable, is_character_inner_amenable,
    leibniz_residual, lift_derivation, tli_product_characterization, ProductCharacter, Projection,
};
use crate::characters::product_characters;
use crate::dual::{
    arens_first_coords, arens_second_coords, center_shift_checks, check_adjoints, check_theta, diff,
    product_dual_actions_coords, Arens,
};
use crate::linalg::unit;
use crate::morphism::{ideal_and_quotient, MorphismProduct};
use crate::report::{self, CheckReport, Status};
use crate::{FiniteAlgebra, Side};

/// Bound for claims that hold by exact construction.
const EXACT: f64 = 1e-12;

/// Worst disagreement of both Arens products with the algebra product on basis pairs.
pub fn arens_agreement(alg: &FiniteAlgebra) -> f64 {
    let n = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (unit(n, i), unit(n, j));
            let direct = alg.basis_product(i, j);
            worst = worst
                .max(diff(&arens_first_coords(alg, &x, &y), direct))
                .max(diff(&arens_second_coords(alg, &x, &y), direct));
        }
    }
    worst
}

fn product_claims(p: &MorphismProduct, tol: f64, r: &mut CheckReport) {
    let bound = 10.0 * tol;
    let v = validate_algebra(p.algebra(), tol);
    r.bound(
        "product.associative",
        v.associativity_residual,
        bound,
        || json!({"worst_triple": v.worst_triple}),
        format!("dimension {}", v.dim),
    );
    let n = p.algebra().dim();
    let mut formula: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (unit(n, i), unit(n, j));
            formula = formula.max(diff(&p.block_multiply(&x, &y), p.algebra().basis_product(i, j)));
        }
    }
    r.bound("product.block-formula", formula, EXACT, || json!({"residual": formula}), "");
    let iq = ideal_and_quotient(p, tol);
    r.expect(
        "product.ideal",
        iq.ideal_check,
        || json!({"residual": iq.ideal_residual}),
        "A-block absorbs products from both sides",
    );
    r.expect(
        "product.quotient-isomorphism",
        iq.quotient_bijective && iq.quotient_hom_residual <= bound,
        || json!({"hom_residual": iq.quotient_hom_residual, "bijective": iq.quotient_bijective}),
        "quotient by the A-block is B",
    );
    let mut actions: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            actions = actions.max(product_dual_actions_coords(p, &unit(n, k), &unit(n, l)).residual);
        }
    }
    r.bound(
        "dual.product-actions",
        actions,
        bound,
        || json!({"residual": actions}),
        "block formulas agree with the actions of the product",
    );
}

fn bidual_claims(p: &MorphismProduct, tol: f64, r: &mut CheckReport) {
    let bound = 10.0 * tol;
    r.caveat(report::ARENS_CAVEAT);
    for alg in [p.a(), p.b(), p.algebra()] {
        let res = arens_agreement(alg);
        r.bound(
            "arens.canonical-agreement",
            res,
            bound,
            || json!({"algebra": alg.name()}),
            alg.name().to_owned(),
        );
    }
    let adj = check_adjoints(p.hom(), tol);
    r.bound(
        "adjoint.embedded",
        adj.embedded_residual,
        EXACT,
        || json!({"residual": adj.embedded_residual}),
        "T''(b) = T(b)",
    );
    r.bound(
        "adjoint.multiplicative.first",
        adj.first_mult_residual,
        bound,
        || json!({"residual": adj.first_mult_residual}),
        "",
    );
    r.bound(
        "adjoint.multiplicative.second",
        adj.second_mult_residual,
        bound,
        || json!({"residual": adj.second_mult_residual}),
        "",
    );
    if adj.epi {
        r.expect("adjoint.epi-preserved", adj.second_epi, || json!({"second_epi": false}), "");
    } else {
        r.not_applicable("adjoint.epi-preserved", "homomorphism is not surjective");
    }

    let th = check_theta(p, tol);
    r.expect(
        "bidual.theta-bijective",
        th.bijective,
        || json!({"rank": th.rank, "dim": th.dim}),
        format!("rank {} of {}", th.rank, th.dim),
    );
    r.bound(
        "bidual.theta-pairing",
        th.pairing_residual,
        EXACT,
        || json!({"residual": th.pairing_residual}),
        "",
    );
    for (arens, res) in [(Arens::First, th.first_hom_residual), (Arens::Second, th.second_hom_residual)] {
        r.bound(
            &format!("bidual.theta-homomorphism.{}", arens.label()),
            res,
            bound,
            || json!({"residual": res}),
            "",
        );
    }

    for side in Side::BOTH {
        let cs = center_shift_checks(p, side, tol);
        let detail = format!(
            "centers of dimension {} / {} / {}",
            cs.product_center_dim, cs.a_center_dim, cs.b_center_dim
        );
        r.bound(
            &format!("center.shift-forward.{}", side.label()),
            cs.forward_residual,
            bound,
            || json!({"residual": cs.forward_residual}),
            detail.clone(),
        );
        r.bound(
            &format!("center.shift-backward.{}", side.label()),
            cs.backward_residual,
            bound,
            || json!({"residual": cs.backward_residual}),
            detail.clone(),
        );
        let claim = format!("center.epi-equality.{}", side.label());
        match cs.epi_equality {
            Some(ok) => r.expect(&claim, ok, || json!({"product_center_dim": cs.product_center_dim}), detail),
            None => r.not_applicable(&claim, "homomorphism is not surjective"),
        }
    }
}

fn character_claims(p: &MorphismProduct, tol: f64, seed: u64, r: &mut CheckReport) {
    let pc = product_characters(p, tol, seed);
    let bound = 10.0 * tol;
    r.bound(
        "characters.membership",
        pc.membership_residual,
        bound,
        || json!({"residual": pc.membership_residual}),
        format!("{} lifted, {} pure", pc.lifted.len(), pc.pure_b.len()),
    );
    r.bound(
        "characters.composition",
        pc.composition_residual,
        bound,
        || json!({"residual": pc.composition_residual}),
        "phi o T is multiplicative on B",
    );
    match pc.composition_in_sigma_b {
        Some(ok) => r.expect(
            "characters.composition-in-spectrum",
            ok,
            || json!({"detail": "phi o T missing from the characters of B"}),
            "",
        ),
        None => r.unknown("characters.composition-in-spectrum", "enumeration of B incomplete"),
    }
    r.expect(
        "characters.disjoint",
        pc.disjoint,
        || json!({"detail": "a lifted character coincides with a pure one"}),
        "",
    );
    match pc.decomposition_ok {
        Some(ok) => r.expect(
            "characters.decomposition",
            ok,
            || serde_json::to_value(&pc.mismatch).unwrap_or_default(),
            format!("{} characters of the product", pc.enumerated.characters.len()),
        ),
        None => r.unknown("characters.decomposition", "enumeration incomplete"),
    }

    for side in Side::BOTH {
        let lifted = pc.sigma_a.characters.iter().map(|c| ProductCharacter::Lifted(c.values().to_vec()));
        let pure = pc.sigma_b.characters.iter().map(|c| ProductCharacter::PureB(c.values().to_vec()));
        for ch in lifted.chain(pure) {
            r.absorb(tli_product_characterization(p, &ch, side, tol));
        }
    }
}

fn derivation_claims(p: &MorphismProduct, tol: f64, r: &mut CheckReport) {
    let bound = 10.0 * tol;
    let dp = derivation_space(p.algebra(), tol);
    let da = derivation_space(p.a(), tol);
    let db = derivation_space(p.b(), tol);
    r.bound(
        "derivation.leibniz",
        dp.leibniz_residual.max(da.leibniz_residual).max(db.leibniz_residual),
        bound,
        || json!({"product": dp.leibniz_residual, "a": da.leibniz_residual, "b": db.leibniz_residual}),
        "",
    );
    r.bound(
        "derivation.inner-in-span",
        dp.inner_excess.max(da.inner_excess).max(db.inner_excess),
        bound,
        || json!({"product": dp.inner_excess, "a": da.inner_excess, "b": db.inner_excess}),
        "",
    );
    for (which, space, claim) in [
        (Projection::P1, &da, "derivation.lift.first"),
        (Projection::P2, &db, "derivation.lift.second"),
    ] {
        if space.der_basis.is_empty() {
            r.not_applicable(claim, "factor has no nonzero derivations");
        }
        for d in &space.der_basis {
            match lift_derivation(d, which, p, bound) {
                Ok(lifted) => {
                    let (res, pair) = leibniz_residual(p.algebra(), &lifted.matrix);
                    r.bound(claim, res, bound, || json!({"basis_pair": pair}), "");
                }
                Err(e) => r.fail(claim, json!({"error": e.to_string()}), None, "factor derivation rejected"),
            }
        }
    }
    let lhs = dp.is_weakly_amenable();
    let rhs = da.is_weakly_amenable() && db.is_weakly_amenable();
    let detail = format!(
        "derivations/inner: product {}/{}, A {}/{}, B {}/{}",
        dp.dim_der, dp.dim_inner, da.dim_der, da.dim_inner, db.dim_der, db.dim_inner
    );
    r.expect(
        "weak-amenability.equivalence",
        lhs == rhs,
        || json!({"product": lhs, "factors": rhs}),
        detail,
    );
}

fn amenability_claims(p: &MorphismProduct, tol: f64, seed: u64, r: &mut CheckReport) {
    r.caveat(report::BAI_CAVEAT);
    r.caveat(report::ZERO_CHARACTER_CAVEAT);
    for side in Side::BOTH {
        let prod = is_character_amenable(p.algebra(), side, tol, seed).decision();
        let a = is_character_amenable(p.a(), side, tol, seed).decision();
        let b = is_character_amenable(p.b(), side, tol, seed).decision();
        let factors = match (a, b) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        };
        let claim = format!("character-amenability.equivalence.{}", side.label());
        match (prod, factors) {
            (Some(x), Some(y)) => r.expect(
                &claim,
                x == y,
                || json!({"product": x, "factors": y}),
                format!("product {x}, factors {y}"),
            ),
            _ => r.unknown(&claim, "character enumeration incomplete"),
        }
    }
}

/// Every claim relating the product to its factors.
pub fn verify_theorems(p: &MorphismProduct, tol: f64, seed: u64) -> CheckReport {
    let mut r = CheckReport::new(p.algebra().name());
    product_claims(p, tol, &mut r);
    bidual_claims(p, tol, &mut r);
    character_claims(p, tol, seed, &mut r);
    derivation_claims(p, tol, &mut r);
    amenability_claims(p, tol, seed, &mut r);
    r.absorb(inner_amenability_suite(p, tol, seed));
    r.finish()
}

/// Decided verdicts for one algebra; `None` where undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlgebraVerdicts {
    pub weakly_amenable: bool,
    pub left_character_amenable: Option<bool>,
    pub right_character_amenable: Option<bool>,
    pub character_inner_amenable: Option<bool>,
}

pub fn algebra_verdicts(alg: &FiniteAlgebra, tol: f64, seed: u64) -> AlgebraVerdicts {
    AlgebraVerdicts {
        weakly_amenable: derivation_space(alg, tol).is_weakly_amenable(),
        left_character_amenable: is_character_amenable(alg, Side::Left, tol, seed).decision(),
        right_character_amenable: is_character_amenable(alg, Side::Right, tol, seed).decision(),
        character_inner_amenable: is_character_inner_amenable(alg, tol, seed),
    }
}

/// Compare an entry's verdict tags with computed verdicts of its product.
pub fn tag_mismatches(tags: &[String], v: &AlgebraVerdicts) -> Vec<String> {
    let checks = [
        ("weakly-amenable", "non-weakly-amenable", Some(v.weakly_amenable)),
        ("left-character-amenable", "not-left-character-amenable", v.left_character_amenable),
        ("right-character-amenable", "not-right-character-amenable", v.right_character_amenable),
        ("character-inner-amenable", "not-character-inner-amenable", v.character_inner_amenable),
    ];
    let mut out = Vec::new();
    for (yes, no, actual) in checks {
        let expected = if tags.iter().any(|t| t == yes) {
            Some(true)
        } else if tags.iter().any(|t| t == no) {
            Some(false)
        } else {
            None
        };
        if let Some(e) = expected {
            if actual != Some(e) {
                out.push(format!("{}: expected {e}, computed {actual:?}", if e { yes } else { no }));
            }
        }
    }
    out
}

/// Count verdicts by status.
pub fn tally(r: &CheckReport) -> [(Status, usize); 4] {
    let count = |s| r.verdicts.iter().filter(|v| v.status == s).count();
    [
        (Status::Pass, count(Status::Pass)),
        (Status::Fail, count(Status::Fail)),
        (Status::Unknown, count(Status::Unknown)),
        (Status::NotApplicable, count(Status::NotApplicable)),
    ]
}
