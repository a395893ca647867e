//! Built-in corpus of morphism products with expected verdicts.
//!
//! Verdict tags name the expected outcome for the product algebra:
//! `weakly-amenable` / `non-weakly-amenable`,
//! `left-character-amenable` / `not-left-character-amenable` (and `right-`),
//! `character-inner-amenable` / `not-character-inner-amenable`.
//! Structural tags: `epi`, `zero-hom`, `lau`, `identity-hom`.

use std::path::Path;

use serde::Serialize;

use crate::characters::Character;
use crate::error::Result;
use crate::io;
use crate::linalg::{c, Scalar};
use crate::morphism::{lau_hom, AlgebraHom};
use crate::standard;
use crate::FiniteAlgebra;

/// Environment variable naming a directory of extra corpus entry files.
pub const CORPUS_DIR_ENV: &str = "TPW_CORPUS_DIR";

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub algebra_a: FiniteAlgebra,
    pub algebra_b: FiniteAlgebra,
    pub hom: AlgebraHom,
    pub tags: Vec<String>,
}

/// Decided product-level verdicts, in tag form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Expectation {
    pub weakly_amenable: bool,
    pub left_character_amenable: bool,
    pub right_character_amenable: bool,
    pub character_inner_amenable: bool,
}

impl Expectation {
    pub const ALL: Expectation = Expectation {
        weakly_amenable: true,
        left_character_amenable: true,
        right_character_amenable: true,
        character_inner_amenable: true,
    };

    pub fn tags(&self) -> Vec<String> {
        let t = |ok: bool, yes: &str, no: &str| if ok { yes.to_owned() } else { no.to_owned() };
        vec![
            t(self.weakly_amenable, "weakly-amenable", "non-weakly-amenable"),
            t(self.left_character_amenable, "left-character-amenable", "not-left-character-amenable"),
            t(self.right_character_amenable, "right-character-amenable", "not-right-character-amenable"),
            t(self.character_inner_amenable, "character-inner-amenable", "not-character-inner-amenable"),
        ]
    }
}

impl CorpusEntry {
    fn new(id: &str, hom: AlgebraHom, structural: &[&str], expected: Expectation) -> Self {
        let mut tags: Vec<String> = structural.iter().map(|s| s.to_string()).collect();
        tags.extend(expected.tags());
        CorpusEntry {
            id: id.to_owned(),
            algebra_a: hom.target().clone(),
            algebra_b: hom.source().clone(),
            hom,
            tags,
        }
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// The tag-encoded expectation, for each verdict that carries a tag.
    pub fn expected(&self, yes: &str, no: &str) -> Option<bool> {
        if self.has_tag(yes) {
            Some(true)
        } else if self.has_tag(no) {
            Some(false)
        } else {
            None
        }
    }
}

fn reals(v: &[f64]) -> Vec<Scalar> {
    v.iter().map(|&x| c(x)).collect()
}

fn images(source: FiniteAlgebra, target: FiniteAlgebra, cols: &[&[f64]]) -> AlgebraHom {
    let cols: Vec<Vec<Scalar>> = cols.iter().map(|v| reals(v)).collect();
    AlgebraHom::from_images(source, target, &cols).expect("corpus hom shape")
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let cx = standard::complex;
    let c2 = || standard::pointwise(2);
    let yes = Expectation::ALL;
    let not_ca = Expectation {
        left_character_amenable: false,
        right_character_amenable: false,
        ..yes
    };

    let lau = {
        let phi = Character::unchecked("C", reals(&[1.0]));
        lau_hom(&c2(), &cx(), &phi, 1e-9).expect("C2 is unital")
    };
    let diag = images(c2(), standard::upper_triangular2(), &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
    let swap = images(c2(), c2(), &[&[0.0, 1.0], &[1.0, 0.0]]);
    let sign = images(standard::cyclic_group(2), cx(), &[&[1.0], &[-1.0]]);

    vec![
        CorpusEntry::new("complex-identity", AlgebraHom::identity(cx()), &["epi", "identity-hom"], yes),
        CorpusEntry::new("complex-zero", AlgebraHom::zero(cx(), cx()), &["zero-hom"], yes),
        CorpusEntry::new("pointwise-lau", lau, &["lau"], yes),
        CorpusEntry::new(
            "matrix-cyclic-zero",
            AlgebraHom::zero(standard::cyclic_group(2), standard::matrix2()),
            &["zero-hom"],
            yes,
        ),
        CorpusEntry::new("triangular-diagonal", diag, &[], not_ca),
        CorpusEntry::new(
            "row-complex-zero",
            AlgebraHom::zero(cx(), standard::row_algebra()),
            &["zero-hom"],
            Expectation {
                character_inner_amenable: false,
                ..not_ca
            },
        ),
        CorpusEntry::new(
            "nilpotent-complex-zero",
            AlgebraHom::zero(cx(), standard::zero_product()),
            &["zero-hom"],
            Expectation {
                weakly_amenable: false,
                ..not_ca
            },
        ),
        CorpusEntry::new("pointwise-swap", swap, &["epi"], yes),
        CorpusEntry::new("matrix-identity", AlgebraHom::identity(standard::matrix2()), &["epi", "identity-hom"], yes),
        CorpusEntry::new("complex-cyclic-sign", sign, &["epi"], yes),
        CorpusEntry::new(
            "complex-nilpotent-zero",
            AlgebraHom::zero(standard::zero_product(), cx()),
            &["zero-hom"],
            Expectation {
                weakly_amenable: false,
                ..not_ca
            },
        ),
    ]
}

pub fn load_user_corpus(dir: impl AsRef<Path>, tol: f64) -> Result<Vec<CorpusEntry>> {
    io::corpus_files(dir)?
        .into_iter()
        .map(|path| {
            let (id, algebra_a, algebra_b, hom, tags) = io::load_corpus_file(&path, tol)?;
            Ok(CorpusEntry {
                id,
                algebra_a,
                algebra_b,
                hom,
                tags,
            })
        })
        .collect()
}

/// Built-in entries followed by those from `TPW_CORPUS_DIR`, if set.
pub fn full_corpus(tol: f64) -> Result<Vec<CorpusEntry>> {
    let mut all = builtin_corpus();
    if let Some(dir) = std::env::var_os(CORPUS_DIR_ENV) {
        all.extend(load_user_corpus(dir, tol)?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_algebra;
    use crate::morphism::{check_hom, MorphismProduct};

    #[test]
    fn corpus_is_valid() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 8);
        for e in &corpus {
            assert!(validate_algebra(&e.algebra_a, 1e-9).is_valid(), "{}", e.id);
            assert!(validate_algebra(&e.algebra_b, 1e-9).is_valid(), "{}", e.id);
            let h = check_hom(&e.hom, 1e-9);
            assert!(h.is_valid(), "{}", e.id);
            assert_eq!(h.epi, e.has_tag("epi"), "{}", e.id);
            assert!(MorphismProduct::build(&e.hom, 1e-9).is_ok());
        }
    }

    #[test]
    fn zero_product_entry_is_tagged() {
        let corpus = builtin_corpus();
        let e = corpus.iter().find(|e| e.id == "nilpotent-complex-zero").unwrap();
        assert!(e.has_tag("non-weakly-amenable"));
        assert!(corpus.iter().any(|e| e.has_tag("lau")));
    }
}
