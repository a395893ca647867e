//! Verification workbench for morphism products of finite-dimensional
//! complex Banach algebras.
//!
//! Given algebras `A`, `B` and an algebra homomorphism `T: B -> A`, the
//! product `A x_T B` is the space `A + B` with
//! `(a1, b1)(a2, b2) = (a1 a2 + a1 T(b2) + T(b1) a2, b1 b2)`.
//! The crate builds these products, computes duals, biduals, characters,
//! derivation spaces and one-sided invariance systems, and checks the
//! structural relations between the product and its factors.

pub mod algebra;
pub mod amenability;
pub mod characters;
pub mod cli;
pub mod corpus;
pub mod dual;
pub mod error;
pub mod io;
pub mod linalg;
pub mod morphism;
pub mod report;
pub mod standard;
pub mod suite;

use serde::Serialize;

pub use algebra::{AlgebraElement, FiniteAlgebra, LinearMap, Space, SpaceKind};
pub use characters::Character;
pub use error::{Error, Result};
pub use morphism::{AlgebraHom, MorphismProduct};

/// Which side a one-sided notion refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}
