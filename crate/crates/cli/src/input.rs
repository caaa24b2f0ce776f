//! Resolving surface arguments and parsing matrix lists.

use std::path::Path;

use veechkit::affine::geometric_veech_group;
use veechkit::corpus::{self, CorpusEntry};
use veechkit::fuchsian::FuchsianSignature;
use veechkit::{FlatSurface, Field, Mat2, Scalar};

use crate::CliError;

/// A surface read from a file or taken from the built-in corpus.
pub struct Source {
    pub surface: FlatSurface,
    pub entry: Option<CorpusEntry>,
    pub name: String,
}

/// Treats `arg` as a path when such a file exists and as a corpus key otherwise.
pub fn load(arg: &str) -> Result<Source, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        let surface = FlatSurface::from_json(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        return Ok(Source { surface, entry: None, name: arg.to_string() });
    }
    match corpus::by_key(arg) {
        Ok(entry) => Ok(Source { surface: entry.surface.clone(), name: entry.key.clone(), entry: Some(entry) }),
        Err(corpus::CorpusError::UnknownKey(_)) => {
            Err(CliError::Input(format!("{arg:?} is neither a readable file nor a corpus key")))
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

pub fn parse_matrix(src: &str) -> Result<Mat2, CliError> {
    let entries: Vec<&str> = src.split(',').map(str::trim).collect();
    let [a, b, c, d] = entries.as_slice() else {
        return Err(CliError::Input(format!("matrix {src:?} needs four comma-separated entries")));
    };
    let p = |x: &str| x.parse::<Scalar>().map_err(|e| CliError::Input(format!("matrix {src:?}: {e}")));
    let m = Mat2::new(p(a)?, p(b)?, p(c)?, p(d)?);
    if !m.is_unimodular() {
        return Err(CliError::Input(format!("matrix {src:?} does not have determinant 1")));
    }
    Ok(m)
}

/// Matrices `a,b,c,d` separated by `;`.
pub fn parse_matrices(src: &str) -> Result<Vec<Mat2>, CliError> {
    src.split(';').filter(|s| !s.trim().is_empty()).map(parse_matrix).collect()
}

/// A JSON list of 4-tuples of scalars.
pub fn read_generator_file(path: &str) -> Result<Vec<Mat2>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{path}: line {} column {}: {e}", e.line(), e.column())))?;
    let list = value.as_array().ok_or_else(|| CliError::Input(format!("{path}: expected a list of 4-tuples")))?;
    list.iter()
        .enumerate()
        .map(|(i, m)| {
            let entries = m
                .as_array()
                .filter(|e| e.len() == 4)
                .ok_or_else(|| CliError::Input(format!("{path}: entry {i} is not a 4-tuple")))?;
            let s = |k: usize| Scalar::from_json(&entries[k]).map_err(|e| CliError::Input(format!("{path}: entry {i}: {e}")));
            Ok(Mat2::new(s(0)?, s(1)?, s(2)?, s(3)?))
        })
        .collect()
}

/// Veech group generators and, when known, the type of the group they generate.
pub struct Generators {
    pub matrices: Vec<Mat2>,
    pub signature: Option<FuchsianSignature>,
    /// `orbit` for the full Veech group of a square-tiled surface, `given` or
    /// `corpus` for a possibly smaller subgroup.
    pub origin: &'static str,
}

pub fn veech_generators(src: &Source, check: Option<Vec<Mat2>>, cap: usize) -> Result<Generators, CliError> {
    if let Some(matrices) = check {
        return Ok(Generators { matrices, signature: None, origin: "given" });
    }
    if src.surface.field() == Field::Rational {
        let g = geometric_veech_group(&src.surface, cap).map_err(math)?;
        return Ok(Generators { signature: Some(g.signature()), matrices: g.generators, origin: "orbit" });
    }
    match &src.entry {
        Some(e) if !e.generators.is_empty() => {
            Ok(Generators { matrices: e.generators.clone(), signature: e.signature.clone(), origin: "corpus" })
        }
        _ => Err(CliError::Input("surface is not square-tiled; pass Veech group generators with --check".into())),
    }
}

pub fn math(e: impl std::fmt::Display) -> CliError {
    CliError::Math(e.to_string())
}
