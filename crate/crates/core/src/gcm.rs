//! Overlap and transition density between two pair condensates.
//!
//! `<C'|C> = det^(1/2)(1 + C^+C')`. The square root is taken block by block:
//! the Jordan blocks of `C^+C'` come in degenerate pairs, so the overlap is
//! `prod_pairs (1 + D_I)^L_I` with no sign ambiguity. The determinant is
//! evaluated separately, only as a cross-check.

use num_complex::Complex64;

use crate::canonical::{canonical_pair_form, CanonicalError, Convention, Tolerances};
use crate::linalg::{AntisymmetricMatrix, ComplexMatrix, LinalgError, Lu};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GcmError {
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("states are orthogonal to tolerance: 1 + C^+C' is singular (smallest pivot {pivot:e})")]
    Orthogonal { pivot: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairFactor {
    pub eigenvalue: Complex64,
    pub length: usize,
    /// `(1 + D_I)^L_I`.
    pub factor: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapResult {
    pub value: Complex64,
    pub per_pair_factors: Vec<PairFactor>,
    pub null_sector_dimension: usize,
    pub condition: f64,
    pub ill_conditioned: bool,
    pub orthogonal: bool,
    /// `det(1 + C^+C')` from LU.
    pub determinant: Complex64,
    /// `|value^2 - det| / max(|det|, |value|^2)`.
    pub determinant_discrepancy: f64,
}

impl OverlapResult {
    /// `tr rho` predicted from the block data:
    /// `sum_pairs 2 L_I D_I / (1 + D_I)`.
    pub fn block_trace(&self) -> Complex64 {
        self.per_pair_factors
            .iter()
            .map(|p| 2.0 * p.length as f64 * p.eigenvalue / (1.0 + p.eigenvalue))
            .sum()
    }
}

pub fn overlap(c: &AntisymmetricMatrix, cp: &AntisymmetricMatrix) -> Result<OverlapResult, GcmError> {
    overlap_with(c, cp, &Tolerances::default())
}

pub fn overlap_with(
    c: &AntisymmetricMatrix,
    cp: &AntisymmetricMatrix,
    tols: &Tolerances,
) -> Result<OverlapResult, GcmError> {
    let form = canonical_pair_form(c, cp, Convention::BetaEqD, tols)?;
    let scale = form.blocks.iter().fold(0.0f64, |m, b| m.max(b.eigenvalue.norm()));
    let mut orthogonal = false;
    let mut value = Complex64::new(1.0, 0.0);
    let per_pair_factors: Vec<PairFactor> = form
        .pairs
        .iter()
        .map(|p| {
            let base = 1.0 + p.eigenvalue;
            let factor = if base.norm() <= tols.cluster * (1.0 + scale) {
                orthogonal = true;
                Complex64::new(0.0, 0.0)
            } else {
                base.powi(p.length as i32)
            };
            value *= factor;
            PairFactor {
                eigenvalue: p.eigenvalue,
                length: p.length,
                factor,
            }
        })
        .collect();

    let m = c.adjoint_product(cp)?;
    let one_plus = m.shift_diagonal(Complex64::new(1.0, 0.0));
    let determinant = Lu::new(&one_plus, 0.0).map(|lu| lu.determinant()).unwrap_or_default();
    let sq = value * value;
    let denom = determinant.norm().max(sq.norm());
    let determinant_discrepancy = if denom > 0.0 {
        (sq - determinant).norm() / denom
    } else {
        0.0
    };

    Ok(OverlapResult {
        value,
        per_pair_factors,
        null_sector_dimension: form.null_sector_dimension(),
        condition: form.condition,
        ill_conditioned: form.ill_conditioned,
        orthogonal,
        determinant,
        determinant_discrepancy,
    })
}

/// `rho = (1 + C^+C')^-1 C^+C'`, with
/// `rho[m][n] = <C'| a+_n a_m |C> / <C'|C>`.
pub fn transition_density(c: &AntisymmetricMatrix, cp: &AntisymmetricMatrix) -> Result<ComplexMatrix, GcmError> {
    transition_density_with(c, cp, crate::linalg::DEFAULT_RANK_TOL)
}

/// As [`transition_density`], declaring orthogonality when an LU pivot of
/// `1 + C^+C'` falls to `pivot_tol` times its largest entry.
pub fn transition_density_with(
    c: &AntisymmetricMatrix,
    cp: &AntisymmetricMatrix,
    pivot_tol: f64,
) -> Result<ComplexMatrix, GcmError> {
    let m = c.adjoint_product(cp)?;
    let one_plus = m.shift_diagonal(Complex64::new(1.0, 0.0));
    let lu = Lu::new(&one_plus, pivot_tol).map_err(|e| match e {
        LinalgError::Singular { pivot } => GcmError::Orthogonal { pivot },
        other => GcmError::Linalg(other),
    })?;
    Ok(lu.solve(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::defective_example;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_mode(v: Complex64) -> AntisymmetricMatrix {
        AntisymmetricMatrix::from_upper(2, &[v])
    }

    #[test]
    fn vacuum_overlap() {
        let z = AntisymmetricMatrix::zeros(4);
        let r = overlap(&z, &z).unwrap();
        assert_eq!(r.value, c(1.0, 0.0));
        assert_eq!(r.null_sector_dimension, 4);
        let rho = transition_density(&z, &z).unwrap();
        assert_eq!(rho.max_abs(), 0.0);
    }

    #[test]
    fn two_mode_overlap() {
        let (a, b) = (c(0.3, 0.8), c(-0.5, 0.25));
        let r = overlap(&two_mode(a), &two_mode(b)).unwrap();
        assert!((r.value - (1.0 + a.conj() * b)).norm() < 1e-14);
        let r = overlap(&two_mode(c(1.0, 0.0)), &two_mode(c(1.0, 0.0))).unwrap();
        assert!((r.value - c(2.0, 0.0)).norm() < 1e-14);
        assert!(r.determinant_discrepancy < 1e-14);
    }

    #[test]
    fn counterexample_overlap() {
        let (cc, cp) = defective_example(c(0.5, 0.0));
        let r = overlap(&cc, &cp).unwrap();
        assert_eq!(r.per_pair_factors.len(), 1);
        assert_eq!(r.per_pair_factors[0].length, 2);
        assert!((r.value - c(2.25, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn two_mode_density() {
        let one = two_mode(c(1.0, 0.0));
        let rho = transition_density(&one, &one).unwrap();
        let want = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(0.5, 0.0)]);
        assert!(rho.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn orthogonal_states() {
        // C^+C' = -I: overlap vanishes and rho does not exist.
        let a = two_mode(c(1.0, 0.0));
        let b = two_mode(c(-1.0, 0.0));
        let r = overlap(&a, &b).unwrap();
        assert!(r.orthogonal);
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(matches!(transition_density(&a, &b), Err(GcmError::Orthogonal { .. })));
    }
}
