//! JSON ingestion and canonical saving of algebras and homomorphisms.
//!
//! Algebra file:
//! `{"name", "dim", "basis", "structure": n x n x n of [re, im], "norm_weights"?, "declared_characters"?}`.
//! Hom file: `{"source", "target", "matrix": dim(target) x dim(source) of [re, im], "name"?}`.
//! Saved files use the canonical JSON form, so loading and saving a canonical
//! file reproduces it byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::algebra::{validate_algebra, FiniteAlgebra};
use crate::characters::verify_character;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::morphism::{check_hom, AlgebraHom};
use crate::report::to_canonical_json;

type Pair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub structure: Vec<Vec<Vec<Pair>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_characters: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub matrix: Vec<Vec<Pair>>,
}

fn scalar(p: &Pair) -> Scalar {
    Scalar::new(p[0], p[1])
}

fn pair_of(z: &Scalar) -> Pair {
    [z.re, z.im]
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

impl AlgebraFile {
    /// Build and validate. Declared characters must verify at `tol`.
    pub fn into_algebra(self, tol: f64) -> Result<FiniteAlgebra> {
        if self.dim != self.basis.len() {
            return Err(Error::Shape(format!(
                "algebra `{}`: dim {} but {} basis labels",
                self.name,
                self.dim,
                self.basis.len()
            )));
        }
        let structure = self
            .structure
            .iter()
            .map(|rows| rows.iter().map(|v| v.iter().map(scalar).collect()).collect())
            .collect();
        let mut alg = FiniteAlgebra::new(self.name, self.basis, structure)?;
        if let Some(w) = self.norm_weights {
            alg = alg.with_norm_weights(w)?;
        }
        let report = validate_algebra(&alg, tol);
        if !report.is_valid() {
            let (i, j, k) = report.worst_triple.unwrap_or_default();
            let b = alg.basis();
            return Err(Error::Validation(format!(
                "algebra `{}` is not associative: residual {:.3e} at ({}, {}, {})",
                alg.name(),
                report.associativity_residual,
                b[i],
                b[j],
                b[k]
            )));
        }
        if let Some(chars) = self.declared_characters {
            let chars: Vec<Vec<Scalar>> = chars.iter().map(|c| c.iter().map(scalar).collect()).collect();
            alg = alg.with_declared_characters(chars)?;
            for (idx, ch) in alg.declared_characters().iter().enumerate() {
                verify_character(&alg, ch, tol).map_err(|e| {
                    Error::Validation(format!(
                        "algebra `{}`: declared character {idx} rejected: {e}",
                        alg.name()
                    ))
                })?;
            }
        }
        Ok(alg)
    }

    pub fn from_algebra(alg: &FiniteAlgebra) -> Self {
        let weights = alg.norm_weights();
        AlgebraFile {
            name: alg.name().to_owned(),
            dim: alg.dim(),
            basis: alg.basis().to_vec(),
            structure: alg
                .structure_tensor()
                .iter()
                .map(|rows| rows.iter().map(|v| v.iter().map(pair_of).collect()).collect())
                .collect(),
            norm_weights: weights.iter().any(|w| *w != 1.0).then(|| weights.to_vec()),
            declared_characters: (!alg.declared_characters().is_empty()).then(|| {
                alg.declared_characters()
                    .iter()
                    .map(|c| c.iter().map(pair_of).collect())
                    .collect()
            }),
        }
    }
}

impl HomFile {
    pub fn into_hom(self, registry: &[&FiniteAlgebra], tol: f64) -> Result<AlgebraHom> {
        let find = |name: &str| {
            registry
                .iter()
                .find(|a| a.name() == name)
                .map(|a| (*a).clone())
                .ok_or_else(|| Error::Validation(format!("hom refers to unknown algebra `{name}`")))
        };
        let source = find(&self.source)?;
        let target = find(&self.target)?;
        let rows = self.matrix.len();
        let cols = self.matrix.first().map_or(0, Vec::len);
        if self.matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("hom matrix rows have different lengths".into()));
        }
        if (rows, cols) != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!(
                "hom {} -> {}: matrix is {rows}x{cols}, expected {}x{}",
                source.name(),
                target.name(),
                target.dim(),
                source.dim()
            )));
        }
        let m = Matrix::from_fn(rows, cols, |i, j| scalar(&self.matrix[i][j]));
        let mut t = AlgebraHom::new(source, target, m)?;
        if let Some(name) = self.name {
            t = t.with_name(name);
        }
        let report = check_hom(&t, tol);
        if !report.is_valid() {
            let (x, y) = report.worst_pair.unwrap_or_default();
            return Err(Error::Validation(format!(
                "hom `{}` is not multiplicative: residual {:.3e} at basis pair ({x}, {y})",
                t.name(),
                report.mult_residual
            )));
        }
        Ok(t)
    }

    pub fn from_hom(t: &AlgebraHom) -> Self {
        let m = t.matrix();
        let default_name = format!("{}->{}", t.source().name(), t.target().name());
        HomFile {
            name: (t.name() != default_name).then(|| t.name().to_owned()),
            source: t.source().name().to_owned(),
            target: t.target().name().to_owned(),
            matrix: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| pair_of(&m[(i, j)])).collect())
                .collect(),
        }
    }
}

pub fn parse_algebra(path: &Path, text: &str, tol: f64) -> Result<FiniteAlgebra> {
    parse::<AlgebraFile>(path, text)?.into_algebra(tol)
}

pub fn load_algebra(path: impl AsRef<Path>, tol: f64) -> Result<FiniteAlgebra> {
    let path = path.as_ref();
    parse_algebra(path, &read(path)?, tol)
}

pub fn parse_hom(path: &Path, text: &str, registry: &[&FiniteAlgebra], tol: f64) -> Result<AlgebraHom> {
    parse::<HomFile>(path, text)?.into_hom(registry, tol)
}

pub fn load_hom(path: impl AsRef<Path>, registry: &[&FiniteAlgebra], tol: f64) -> Result<AlgebraHom> {
    let path = path.as_ref();
    parse_hom(path, &read(path)?, registry, tol)
}

pub fn algebra_to_json(alg: &FiniteAlgebra) -> String {
    to_canonical_json(&AlgebraFile::from_algebra(alg))
}

pub fn hom_to_json(t: &AlgebraHom) -> String {
    to_canonical_json(&HomFile::from_hom(t))
}

pub fn save_algebra(alg: &FiniteAlgebra, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &algebra_to_json(alg))
}

pub fn save_hom(t: &AlgebraHom, path: impl AsRef<Path>) -> Result<()> {
    write(path.as_ref(), &hom_to_json(t))
}

/// Corpus entry file: both algebras inline, the hom by its matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusFile {
    pub id: String,
    pub algebra_a: AlgebraFile,
    pub algebra_b: AlgebraFile,
    pub hom: CorpusHom,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusHom {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub matrix: Vec<Vec<Pair>>,
}

/// `(id, A, B, T, tags)` from a corpus entry file.
pub type LoadedEntry = (String, FiniteAlgebra, FiniteAlgebra, AlgebraHom, Vec<String>);

pub fn load_corpus_file(path: impl AsRef<Path>, tol: f64) -> Result<LoadedEntry> {
    let path = path.as_ref();
    let file: CorpusFile = parse(path, &read(path)?)?;
    let a = file.algebra_a.into_algebra(tol)?;
    let b = file.algebra_b.into_algebra(tol)?;
    let hom = HomFile {
        name: file.hom.name,
        source: b.name().to_owned(),
        target: a.name().to_owned(),
        matrix: file.hom.matrix,
    }
    .into_hom(&[&a, &b], tol)?;
    Ok((file.id, a, b, hom, file.tags))
}

/// `*.json` files of a directory in name order.
pub fn corpus_files(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_owned(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn algebra_round_trip_is_byte_identical() {
        for alg in [standard::matrix2(), standard::upper_triangular2(), standard::cyclic_group(3)] {
            let text = algebra_to_json(&alg);
            let back = parse_algebra(Path::new("mem"), &text, 1e-9).unwrap();
            assert_eq!(algebra_to_json(&back), text);
            assert_eq!(back, alg);
        }
    }

    #[test]
    fn non_associative_file_rejected_with_residual() {
        let text = r#"{"name": "bad", "dim": 2, "basis": ["e1", "e2"],
            "structure": [[[[0,0],[1,0]], [[0,0],[0,0]]], [[[1,0],[0,0]], [[0,0],[1,0]]]]}"#;
        let err = parse_algebra(Path::new("bad.json"), text, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("residual")), "{err}");
    }

    #[test]
    fn parse_error_has_position() {
        let err = parse_algebra(Path::new("x.json"), "{\n  \"name\": 3\n}", 1e-9).unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 11)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn perturbed_hom_names_pair() {
        let c2 = standard::pointwise(2);
        let text = r#"{"source": "C2", "target": "C2", "matrix": [[[1,0],[0,0]], [[0,0],[1.5,0]]]}"#;
        let err = parse_hom(Path::new("h.json"), text, &[&c2], 1e-9).unwrap_err();
        match err {
            Error::Validation(m) => assert!(m.contains("(p2, p2)"), "{m}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn hom_shape_checked() {
        let c2 = standard::pointwise(2);
        let c = standard::complex();
        let text = r#"{"source": "C", "target": "C2", "matrix": [[[1,0],[0,0]]]}"#;
        assert!(matches!(
            parse_hom(Path::new("h.json"), text, &[&c2, &c], 1e-9),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn declared_characters_verified() {
        let mut file = AlgebraFile::from_algebra(&standard::pointwise(2));
        file.declared_characters = Some(vec![vec![[1.0, 0.0], [1.0, 0.0]]]);
        assert!(matches!(file.clone().into_algebra(1e-9), Err(Error::Validation(_))));
        file.declared_characters = Some(vec![vec![[0.0, 0.0], [1.0, 0.0]]]);
        assert_eq!(file.into_algebra(1e-9).unwrap().declared_characters().len(), 1);
    }
}
