//! File formats: matrix files and saved canonical forms.
//!
//! A matrix file is a JSON document
//! `{"dim": n, "label": ..., "metadata": {...}, "entries": [[re, im], ...]}`
//! with entries in row-major order and floats written with 17 significant
//! digits.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::canonical::{CanonicalPair, Convention, PairedCanonicalForm};
use crate::jordan::JordanBlock;
use crate::linalg::{AntisymmetricMatrix, ComplexMatrix, LinalgError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed document: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Matrix {
        path: String,
        #[source]
        source: LinalgError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix, label: Option<&str>) -> Self {
        assert!(m.is_square(), "matrix files hold square matrices");
        Self {
            dim: m.rows(),
            label: label.map(str::to_owned),
            metadata: Map::new(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: Value) -> Self {
        self.metadata.insert(key.to_owned(), value);
        self
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, LinalgError> {
        let data = self.entries.iter().map(|e| Complex64::new(e[0], e[1])).collect();
        ComplexMatrix::new(self.dim, self.dim, data)
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, IoError> {
        let file: MatrixFile = serde_json::from_str(text).map_err(|e| IoError::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        if file.entries.len() != file.dim * file.dim {
            return Err(IoError::Invalid {
                path: path.to_owned(),
                message: format!(
                    "entries length {} does not equal dim^2 = {}",
                    file.entries.len(),
                    file.dim * file.dim
                ),
            });
        }
        Ok(file)
    }

    /// Deterministic rendering; every float as `{:.16e}`.
    pub fn render(&self) -> String {
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        if let Some(label) = &self.label {
            let _ = writeln!(out, "  \"label\": {},", Value::String(label.clone()));
        }
        if !self.metadata.is_empty() {
            let _ = writeln!(out, "  \"metadata\": {},", Value::Object(self.metadata.clone()));
        }
        out.push_str("  \"entries\": [");
        for (k, e) in self.entries.iter().enumerate() {
            out.push_str(if k == 0 { "\n    " } else { ",\n    " });
            let _ = write!(out, "[{}, {}]", float17(e[0]), float17(e[1]));
        }
        out.push_str(if self.entries.is_empty() {
            "]\n}\n"
        } else {
            "\n  ]\n}\n"
        });
        out
    }

    pub fn read(path: &Path) -> Result<(Self, Vec<u8>), IoError> {
        let p = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|source| IoError::Io {
            path: p.clone(),
            source,
        })?;
        let text = std::str::from_utf8(&bytes).map_err(|e| IoError::Parse {
            path: p.clone(),
            message: e.to_string(),
        })?;
        Ok((Self::parse(text, &p)?, bytes))
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, self.render()).map_err(|source| IoError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn float17(x: f64) -> String {
    if x == 0.0 {
        // Keep the sign of negative zero out of fixtures.
        return "0.0000000000000000e0".to_owned();
    }
    format!("{x:.16e}")
}

/// Reads a matrix file and checks antisymmetry.
pub fn read_antisymmetric(path: &Path, tol: f64) -> Result<(AntisymmetricMatrix, Vec<u8>), IoError> {
    let (file, bytes) = MatrixFile::read(path)?;
    let p = path.display().to_string();
    let m = file.to_matrix().map_err(|source| IoError::Matrix {
        path: p.clone(),
        source,
    })?;
    let a = AntisymmetricMatrix::new(m, tol).map_err(|source| IoError::Matrix { path: p, source })?;
    Ok((a, bytes))
}

pub(crate) fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn matrix_entries(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|&z| pair(z)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockRecord {
    id: usize,
    eigenvalue: [f64; 2],
    length: usize,
    start: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PairRecord {
    block: usize,
    partner: usize,
    eigenvalue: [f64; 2],
    length: usize,
    phase: [f64; 2],
    beta: Vec<[f64; 2]>,
    beta_prime: Vec<[f64; 2]>,
    block_c: Vec<[f64; 2]>,
    block_cp: Vec<[f64; 2]>,
    zero_eigenvalue: bool,
    unresolved: bool,
}

/// On-disk form of a [`PairedCanonicalForm`]. Floats use the shortest
/// representation that reads back to the same value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormFile {
    dim: usize,
    convention: String,
    w: Vec<[f64; 2]>,
    blocks: Vec<BlockRecord>,
    pairs: Vec<PairRecord>,
    null_sector: Vec<usize>,
    condition: f64,
    ill_conditioned: bool,
    jordan_residual: f64,
}

impl FormFile {
    pub fn from_form(form: &PairedCanonicalForm) -> Self {
        Self {
            dim: form.dim(),
            convention: form.convention.to_string(),
            w: matrix_entries(&form.w),
            blocks: form
                .blocks
                .iter()
                .map(|b| BlockRecord {
                    id: b.id,
                    eigenvalue: pair(b.eigenvalue),
                    length: b.length,
                    start: b.start,
                })
                .collect(),
            pairs: form
                .pairs
                .iter()
                .map(|p| PairRecord {
                    block: p.block,
                    partner: p.partner,
                    eigenvalue: pair(p.eigenvalue),
                    length: p.length,
                    phase: pair(p.phase),
                    beta: p.beta.iter().map(|&z| pair(z)).collect(),
                    beta_prime: p.beta_prime.iter().map(|&z| pair(z)).collect(),
                    block_c: matrix_entries(&p.block_c),
                    block_cp: matrix_entries(&p.block_cp),
                    zero_eigenvalue: p.zero_eigenvalue,
                    unresolved: p.unresolved,
                })
                .collect(),
            null_sector: form.null_sector.clone(),
            condition: form.condition,
            ill_conditioned: form.ill_conditioned,
            jordan_residual: form.jordan_residual,
        }
    }

    pub fn to_form(&self) -> Result<PairedCanonicalForm, String> {
        let n = self.dim;
        let square = |entries: &[[f64; 2]], l: usize, what: &str| {
            ComplexMatrix::new(l, l, entries.iter().map(|&p| unpair(p)).collect()).map_err(|e| format!("{what}: {e}"))
        };
        let convention: Convention = self.convention.parse()?;
        let blocks: Vec<JordanBlock> = self
            .blocks
            .iter()
            .map(|b| JordanBlock {
                id: b.id,
                eigenvalue: unpair(b.eigenvalue),
                length: b.length,
                start: b.start,
            })
            .collect();
        let mut covered = vec![false; n];
        for b in &blocks {
            if b.length == 0 || b.start + b.length > n {
                return Err(format!("block {} exceeds dimension {n}", b.id));
            }
            for k in b.columns() {
                if std::mem::replace(&mut covered[k], true) {
                    return Err(format!("column {k} belongs to two blocks"));
                }
            }
        }
        if covered.iter().any(|c| !c) {
            return Err("blocks do not cover every column".to_owned());
        }
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            let ok = |b: usize| b < blocks.len() && blocks[b].length == p.length;
            if !ok(p.block) || !ok(p.partner) || p.beta.len() != p.length || p.beta_prime.len() != p.length {
                return Err(format!(
                    "pair ({}, {}) is inconsistent with the block table",
                    p.block, p.partner
                ));
            }
            pairs.push(CanonicalPair {
                block: p.block,
                partner: p.partner,
                eigenvalue: unpair(p.eigenvalue),
                length: p.length,
                phase: unpair(p.phase),
                beta: p.beta.iter().map(|&z| unpair(z)).collect(),
                beta_prime: p.beta_prime.iter().map(|&z| unpair(z)).collect(),
                block_c: square(&p.block_c, p.length, "block_c")?,
                block_cp: square(&p.block_cp, p.length, "block_cp")?,
                zero_eigenvalue: p.zero_eigenvalue,
                unresolved: p.unresolved,
            });
        }
        if let Some(&b) = self.null_sector.iter().find(|&&b| b >= blocks.len()) {
            return Err(format!("null-sector block {b} does not exist"));
        }
        Ok(PairedCanonicalForm {
            w: square(&self.w, n, "w")?,
            blocks,
            pairs,
            null_sector: self.null_sector.clone(),
            convention,
            condition: self.condition,
            ill_conditioned: self.ill_conditioned,
            jordan_residual: self.jordan_residual,
        })
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("form serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str, path: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }
}
