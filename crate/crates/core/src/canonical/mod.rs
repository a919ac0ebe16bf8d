//! Simultaneous canonical form of two antisymmetric matrices `C`, `C'` in the
//! Jordan basis of `C^+C'`, plus the classic single-matrix theorem.
//!
//! With `W` the Jordan basis, `S = W^-1 C^+ W^-T` and `T = W^T C' W` are
//! antisymmetric and `S T = D`. After pairing degenerate blocks and
//! decoupling them, `S` and `T` only couple a block `I` with its partner `I~`:
//! `S[I][I~] = beta J`, `T[I~][I] = J beta'^*`, `beta beta'^* = D_I`.

mod classic;
mod form;
mod pairing;

pub use classic::{classic_bloch_messiah, ClassicCanonicalForm};
pub use form::{
    assemble_c_adjoint, assemble_c_prime, canonical_pair_form, dual_basis, extract_couplings, verify_canonical,
    CanonicalPair, CanonicalReport, Couplings, PairCoupling, PairedCanonicalForm,
};
pub use pairing::{pair_blocks, BlockPairing};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::jordan::{JordanError, DEFAULT_CLUSTER_TOL};
use crate::linalg::{LinalgError, DEFAULT_ANTISYM_TOL, DEFAULT_RANK_TOL};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_ILL_CONDITIONED: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub antisym: f64,
    pub cluster: f64,
    pub rank: f64,
    pub residual: f64,
    pub ill_conditioned: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            antisym: DEFAULT_ANTISYM_TOL,
            cluster: DEFAULT_CLUSTER_TOL,
            rank: DEFAULT_RANK_TOL,
            residual: DEFAULT_RESIDUAL_TOL,
            ill_conditioned: DEFAULT_ILL_CONDITIONED,
        }
    }
}

/// Which solution of `beta beta'^* = D` to normalize to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// `beta = D_block`, `beta'^* = I`.
    #[default]
    BetaEqD,
    /// `beta = beta'^* = sqrt(D_block)`, principal branch.
    SqrtD,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::BetaEqD => "beta-eq-d",
            Convention::SqrtD => "sqrt-d",
        })
    }
}

impl FromStr for Convention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "beta-eq-d" => Ok(Convention::BetaEqD),
            "sqrt-d" => Ok(Convention::SqrtD),
            other => Err(format!("unknown convention '{other}' (expected beta-eq-d or sqrt-d)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CanonicalError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Jordan(#[from] JordanError),
    #[error("dimension mismatch: C is {left}x{left}, C' is {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(
        "pairing theorem violated: Jordan block {block} (D = {eigenvalue}, L = {length}) has no degenerate partner"
    )]
    UnpairedBlock {
        block: usize,
        eigenvalue: Complex64,
        length: usize,
    },
    #[error(
        "pairing theorem violated: head couplings vanish among blocks with D = {eigenvalue}, L = {length} (relative coupling {coupling:e})"
    )]
    DegenerateCoupling {
        eigenvalue: Complex64,
        length: usize,
        coupling: f64,
    },
    #[error(
        "within-block couplings do not vanish for pair ({block}, {partner}): relative size {deviation:e} exceeds {bound:e}"
    )]
    WithinBlockCoupling {
        block: usize,
        partner: usize,
        deviation: f64,
        bound: f64,
    },
    #[error("sqrt-d convention: D = {eigenvalue} lies on the branch cut of the principal square root; use beta-eq-d")]
    BranchCut { eigenvalue: Complex64 },
}

impl CanonicalError {
    /// Name of the violated invariant, for user-facing reports.
    pub fn invariant(&self) -> &'static str {
        match self {
            CanonicalError::Linalg(_) => "linear-algebra",
            CanonicalError::Jordan(_) => "jordan-decomposition",
            CanonicalError::DimensionMismatch { .. } => "matching-dimensions",
            CanonicalError::UnpairedBlock { .. } => "degenerate-block-pairing",
            CanonicalError::DegenerateCoupling { .. } => "nonsingular-head-coupling",
            CanonicalError::WithinBlockCoupling { .. } => "vanishing-within-block-coupling",
            CanonicalError::BranchCut { .. } => "principal-square-root",
        }
    }
}
