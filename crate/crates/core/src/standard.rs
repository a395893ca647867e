//! Small named algebras used by the built-in corpus and the tests.

use crate::algebra::FiniteAlgebra;
use crate::linalg::{c, ONE};

/// The complex numbers, `e e = e`.
pub fn complex() -> FiniteAlgebra {
    FiniteAlgebra::from_rule("C", &["e"], |_, _| vec![(0, ONE)]).expect("valid")
}

/// `C^n` with pointwise multiplication.
pub fn pointwise(n: usize) -> FiniteAlgebra {
    let labels: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    FiniteAlgebra::from_rule(format!("C{n}"), &refs, |i, j| {
        if i == j {
            vec![(i, ONE)]
        } else {
            vec![]
        }
    })
    .expect("valid")
}

/// 2x2 complex matrices on the matrix units `E11, E12, E21, E22`.
pub fn matrix2() -> FiniteAlgebra {
    matrix(2)
}

/// Full matrix algebra `M_n` on matrix units, row-major order.
pub fn matrix(n: usize) -> FiniteAlgebra {
    let labels: Vec<String> = (0..n * n)
        .map(|i| format!("E{}{}", i / n + 1, i % n + 1))
        .collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    FiniteAlgebra::from_rule(format!("M{n}"), &refs, |i, j| {
        let (r, s) = (i / n, i % n);
        let (t, u) = (j / n, j % n);
        if s == t {
            vec![(n * r + u, ONE)]
        } else {
            vec![]
        }
    })
    .expect("valid")
}

/// Upper triangular 2x2 matrices on `E11, E12, E22`.
pub fn upper_triangular2() -> FiniteAlgebra {
    FiniteAlgebra::from_rule("UT2", &["E11", "E12", "E22"], |i, j| match (i, j) {
        (0, 0) => vec![(0, ONE)],
        (0, 1) => vec![(1, ONE)],
        (1, 2) => vec![(1, ONE)],
        (2, 2) => vec![(2, ONE)],
        _ => vec![],
    })
    .expect("valid")
}

/// The span of `E11, E12` inside `M2`: `e1 e1 = e1, e1 e2 = e2`, other products zero.
/// Has a left identity but no right identity.
pub fn row_algebra() -> FiniteAlgebra {
    FiniteAlgebra::from_rule("R12", &["E11", "E12"], |i, j| match (i, j) {
        (0, 0) => vec![(0, ONE)],
        (0, 1) => vec![(1, ONE)],
        _ => vec![],
    })
    .expect("valid")
}

/// One-dimensional algebra with `x x = 0`.
pub fn zero_product() -> FiniteAlgebra {
    FiniteAlgebra::from_rule("Z1", &["x"], |_, _| vec![]).expect("valid")
}

/// Group algebra of the cyclic group of order `n`, basis `g^0..g^{n-1}`.
pub fn cyclic_group(n: usize) -> FiniteAlgebra {
    let labels: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    FiniteAlgebra::from_rule(format!("CZ{n}"), &refs, |i, j| vec![((i + j) % n, c(1.0))])
        .expect("valid")
}

/// Dual numbers `C[x]/(x^2)` on `1, x`.
pub fn dual_numbers() -> FiniteAlgebra {
    FiniteAlgebra::from_rule("D2", &["1", "x"], |i, j| match (i, j) {
        (0, 0) => vec![(0, ONE)],
        (0, 1) | (1, 0) => vec![(1, ONE)],
        _ => vec![],
    })
    .expect("valid")
}
