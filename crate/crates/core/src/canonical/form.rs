//! Coupling extraction, normalization of the pair parameters and assembly of
//! the generalized canonical forms.

use num_complex::Complex64;

use super::pairing::{pair_blocks, BlockPairing};
use super::{CanonicalError, Convention, Tolerances};
use crate::jordan::{flip_matrix, jordan_decompose, JordanBlock, JordanDecomposition, UpperToeplitz};
use crate::linalg::{condition_number, inverse, AntisymmetricMatrix, ComplexMatrix};

/// Dual Jordan basis `V = C^+ W^-T J`; satisfies `(C^+C') V = V D`.
pub fn dual_basis(c: &AntisymmetricMatrix, decomp: &JordanDecomposition) -> Result<ComplexMatrix, CanonicalError> {
    if c.dim() != decomp.dim() {
        return Err(CanonicalError::DimensionMismatch {
            left: c.dim(),
            right: decomp.dim(),
        });
    }
    let winv = inverse(&decomp.w, 0.0)?;
    Ok(&(&c.matrix().adjoint() * &winv.transpose()) * &decomp.flip_matrix())
}

/// Couplings read off `S` for one pair.
#[derive(Debug, Clone)]
pub struct PairCoupling {
    pub block: usize,
    pub partner: usize,
    /// `S[I][I~] = beta J`.
    pub beta: UpperToeplitz,
    /// Departure of `S[I][I~] J` from upper-triangular Toeplitz form.
    pub toeplitz_deviation: f64,
    /// Largest entry of the within-block couplings `S[I][I]`, `S[I~][I~]`,
    /// relative to `max |S|`.
    pub within_block: f64,
}

#[derive(Debug, Clone)]
pub struct Couplings {
    pub pairs: Vec<PairCoupling>,
    /// Largest entry of `S` outside the paired blocks (null-sector diagonal
    /// block excluded), relative to `max |S|`.
    pub off_pattern: f64,
    pub scale: f64,
}

pub(crate) fn s_matrix(c: &AntisymmetricMatrix, w: &ComplexMatrix) -> Result<ComplexMatrix, CanonicalError> {
    let winv = inverse(w, 0.0)?;
    Ok(&(&winv * &c.matrix().adjoint()) * &winv.transpose())
}

pub(crate) fn t_matrix(cp: &AntisymmetricMatrix, w: &ComplexMatrix) -> ComplexMatrix {
    &(&w.transpose() * cp.matrix()) * w
}

fn sub(m: &ComplexMatrix, a: &JordanBlock, b: &JordanBlock) -> ComplexMatrix {
    m.submatrix(a.start, b.start, a.length, b.length)
}

fn flip(l: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(l, l, |i, j| {
        if i + j + 1 == l {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

// Entries that belong to a pair block (I, I~) or (I~, I), or to the
// null-sector diagonal block.
fn pattern_mask(n: usize, blocks: &[JordanBlock], pairs: &[(usize, usize)], null_sector: &[usize]) -> Vec<bool> {
    let mut owner = vec![usize::MAX; n];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for k in blocks[i].columns() {
            owner[k] = 2 * p;
        }
        for k in blocks[j].columns() {
            owner[k] = 2 * p + 1;
        }
    }
    let null_tag = usize::MAX - 1;
    for &b in null_sector {
        for k in blocks[b].columns() {
            owner[k] = null_tag;
        }
    }
    let mut mask = vec![false; n * n];
    for r in 0..n {
        for c in 0..n {
            let (a, b) = (owner[r], owner[c]);
            mask[r * n + c] =
                (a == null_tag && b == null_tag) || (a < null_tag && b < null_tag && a / 2 == b / 2 && a != b);
        }
    }
    mask
}

fn couplings_of(
    s: &ComplexMatrix,
    basis: &JordanDecomposition,
    pairs: &[(usize, usize)],
    null_sector: &[usize],
) -> Couplings {
    let n = s.rows();
    let scale = s.max_abs();
    let denom = if scale > 0.0 { scale } else { 1.0 };
    let mask = pattern_mask(n, &basis.blocks, pairs, null_sector);
    let mut off = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            if !mask[r * n + c] {
                off = off.max(s[(r, c)].norm());
            }
        }
    }
    let out = pairs
        .iter()
        .map(|&(i, j)| {
            let (bi, bj) = (&basis.blocks[i], &basis.blocks[j]);
            let beta_j = &sub(s, bi, bj) * &flip(bi.length);
            let (beta, toeplitz_deviation) = UpperToeplitz::from_matrix(&beta_j);
            let within = sub(s, bi, bi).max_abs().max(sub(s, bj, bj).max_abs());
            PairCoupling {
                block: i,
                partner: j,
                beta,
                toeplitz_deviation: toeplitz_deviation / denom,
                within_block: within / denom,
            }
        })
        .collect();
    Couplings {
        pairs: out,
        off_pattern: off / denom,
        scale,
    }
}

/// Reads the pair couplings from `S = W^-1 C^+ W^-T` in the decoupled basis.
/// Fails when a within-block coupling exceeds `tols.residual` scaled by the
/// squared condition number of the basis (the amplification of rounding
/// errors under the congruence).
pub fn extract_couplings(
    c: &AntisymmetricMatrix,
    pairing: &BlockPairing,
    tols: &Tolerances,
) -> Result<Couplings, CanonicalError> {
    let s = s_matrix(c, &pairing.basis.w)?;
    let out = couplings_of(&s, &pairing.basis, &pairing.pairs, &pairing.null_sector);
    check_within_block(&out, &pairing.basis.w, tols)?;
    Ok(out)
}

fn check_within_block(couplings: &Couplings, w: &ComplexMatrix, tols: &Tolerances) -> Result<(), CanonicalError> {
    let kappa = condition_number(w);
    let bound = tols.residual * kappa * kappa;
    for p in &couplings.pairs {
        if p.within_block > bound {
            return Err(CanonicalError::WithinBlockCoupling {
                block: p.block,
                partner: p.partner,
                deviation: p.within_block,
                bound,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CanonicalPair {
    pub block: usize,
    pub partner: usize,
    pub eigenvalue: Complex64,
    pub length: usize,
    /// `s_I`; the partner carries `-s_I`.
    pub phase: Complex64,
    pub beta: Vec<Complex64>,
    pub beta_prime: Vec<Complex64>,
    /// `C^I = s_I beta^* J`.
    pub block_c: ComplexMatrix,
    /// `C'^I = s_I J beta'^*`.
    pub block_cp: ComplexMatrix,
    /// Zero-eigenvalue pair: parameters are left as found (no normalization).
    pub zero_eigenvalue: bool,
    /// Paired by order because its coupling form was singular.
    pub unresolved: bool,
}

impl CanonicalPair {
    /// `|c^I|`: common skew-diagonal entry of `C^I`.
    pub fn c_value(&self) -> f64 {
        self.block_c[(0, self.length - 1)].re
    }

    /// Skew-diagonal entry of `C'^I`.
    pub fn cp_value(&self) -> Complex64 {
        self.block_cp[(0, self.length - 1)]
    }
}

#[derive(Debug, Clone)]
pub struct PairedCanonicalForm {
    pub w: ComplexMatrix,
    pub blocks: Vec<JordanBlock>,
    pub pairs: Vec<CanonicalPair>,
    pub null_sector: Vec<usize>,
    pub convention: Convention,
    /// Condition estimate of the congruence `X -> W^-1 X W^-T`, i.e. `cond(W)^2`.
    pub condition: f64,
    pub ill_conditioned: bool,
    pub jordan_residual: f64,
}

impl PairedCanonicalForm {
    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    pub fn pairing(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().map(|p| (p.block, p.partner)).collect()
    }

    pub fn null_sector_dimension(&self) -> usize {
        self.null_sector.iter().map(|&b| self.blocks[b].length).sum()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.blocks.iter().all(|b| b.length == 1)
    }

    pub fn jordan_matrix(&self) -> ComplexMatrix {
        crate::jordan::jordan_matrix(self.dim(), &self.blocks)
    }

    pub fn flip_matrix(&self) -> ComplexMatrix {
        flip_matrix(self.dim(), &self.blocks)
    }
}

/// Canonical form of `W^-1 C^+ W^-T`: `s_I C^I+` at `(I, I~)` and
/// `-s_I C^I+` at `(I~, I)`. The null-sector block is left zero.
pub fn assemble_c_adjoint(form: &PairedCanonicalForm) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(form.dim(), form.dim());
    for p in &form.pairs {
        let blk = form.blocks[p.block];
        let par = form.blocks[p.partner];
        let v = p.block_c.adjoint().scale(p.phase);
        a.set_block(blk.start, par.start, &v);
        a.set_block(par.start, blk.start, &(-&v));
    }
    a
}

/// Canonical form of `W^T C' W`: `s_I^* C'^I` at `(I~, I)` and
/// `-s_I^* C'^I` at `(I, I~)`. The null-sector block is left zero.
pub fn assemble_c_prime(form: &PairedCanonicalForm) -> ComplexMatrix {
    let mut a = ComplexMatrix::zeros(form.dim(), form.dim());
    for p in &form.pairs {
        let blk = form.blocks[p.block];
        let par = form.blocks[p.partner];
        let v = p.block_cp.scale(p.phase.conj());
        a.set_block(par.start, blk.start, &v);
        a.set_block(blk.start, par.start, &(-&v));
    }
    a
}

fn is_zero_eigenvalue(d: Complex64, blocks: &[JordanBlock], tols: &Tolerances) -> bool {
    let scale = blocks.iter().fold(0.0f64, |m, b| m.max(b.eigenvalue.norm()));
    d.norm() <= tols.cluster * (1.0 + scale)
}

/// Full pipeline: Jordan basis of `C^+C'`, pairing, normalization of every
/// pair to `convention`, phases and block matrices.
pub fn canonical_pair_form(
    c: &AntisymmetricMatrix,
    cp: &AntisymmetricMatrix,
    convention: Convention,
    tols: &Tolerances,
) -> Result<PairedCanonicalForm, CanonicalError> {
    if c.dim() != cp.dim() {
        return Err(CanonicalError::DimensionMismatch {
            left: c.dim(),
            right: cp.dim(),
        });
    }
    let m = c.adjoint_product(cp)?;
    let decomp = jordan_decompose(&m, tols.cluster, tols.rank)?;
    let pairing = pair_blocks(c, &decomp, tols)?;
    let mut basis = pairing.basis.clone();

    let s = s_matrix(c, &basis.w)?;
    for (p, &(i, j)) in pairing.pairs.iter().enumerate() {
        let blk = basis.blocks[i];
        if pairing.unresolved.contains(&p) || is_zero_eigenvalue(blk.eigenvalue, &basis.blocks, tols) {
            continue;
        }
        let target = convention_target(convention, blk.eigenvalue, blk.length, tols)?;
        let beta_j = &sub(&s, &blk, &basis.blocks[j]) * &flip(blk.length);
        let (beta, _) = UpperToeplitz::from_matrix(&beta_j);
        let alpha = target.inverse().expect("nonzero eigenvalue").mul(&beta);
        basis.transform_series(j, &alpha)?;
    }

    let s = s_matrix(c, &basis.w)?;
    let t = t_matrix(cp, &basis.w);
    let couplings = couplings_of(&s, &basis, &pairing.pairs, &pairing.null_sector);
    check_within_block(&couplings, &basis.w, tols)?;

    let mut pairs = Vec::with_capacity(pairing.pairs.len());
    for (p, pc) in couplings.pairs.iter().enumerate() {
        let (bi, bj) = (basis.blocks[pc.block], basis.blocks[pc.partner]);
        let l = bi.length;
        let j = flip(l);
        let (bp_conj, _) = UpperToeplitz::from_matrix(&(&j * &sub(&t, &bj, &bi)));
        let beta_prime = bp_conj.conj();
        let b1 = pc.beta.leading();
        let phase = if b1.norm() > 0.0 {
            b1 / b1.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let block_c = (&pc.beta.conj().to_matrix() * &j).scale(phase);
        let block_cp = (&j * &bp_conj.to_matrix()).scale(phase);
        pairs.push(CanonicalPair {
            block: pc.block,
            partner: pc.partner,
            eigenvalue: bi.eigenvalue,
            length: l,
            phase,
            beta: pc.beta.coeffs().to_vec(),
            beta_prime: beta_prime.coeffs().to_vec(),
            block_c,
            block_cp,
            zero_eigenvalue: is_zero_eigenvalue(bi.eigenvalue, &basis.blocks, tols),
            unresolved: pairing.unresolved.contains(&p),
        });
    }

    let kappa = condition_number(&basis.w);
    let condition = kappa * kappa;
    Ok(PairedCanonicalForm {
        ill_conditioned: !(condition <= tols.ill_conditioned),
        condition,
        jordan_residual: basis.residual,
        w: basis.w,
        blocks: basis.blocks,
        pairs,
        null_sector: pairing.null_sector,
        convention,
    })
}

fn convention_target(
    convention: Convention,
    d: Complex64,
    l: usize,
    tols: &Tolerances,
) -> Result<UpperToeplitz, CanonicalError> {
    let block = UpperToeplitz::jordan_block(l, d);
    match convention {
        Convention::BetaEqD => Ok(block),
        Convention::SqrtD => {
            if d.re < 0.0 && d.im.abs() <= tols.cluster * (1.0 + d.norm()) {
                return Err(CanonicalError::BranchCut { eigenvalue: d });
            }
            Ok(block.sqrt().expect("nonzero eigenvalue"))
        }
    }
}

/// Deviations of a stored form from every invariant, recomputed from `C`,
/// `C'` and the form's own data. Residuals exclude the null-sector diagonal
/// block, which the canonical form leaves unconstrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalReport {
    pub c_residual: f64,
    pub c_residual_rel: f64,
    pub cp_residual: f64,
    pub cp_residual_rel: f64,
    /// `max |beta beta'^* - D_block|` over pairs.
    pub beta_constraint: f64,
    /// `max |beta - target|` over normalized pairs.
    pub convention_deviation: f64,
    pub symmetry: f64,
    /// Spread and imaginary part of the skew-diagonal of each `C^I`, and
    /// negativity of its value.
    pub skew_diagonal: f64,
    pub phase: f64,
    pub jordan_residual: f64,
}

impl CanonicalReport {
    /// First violated invariant at tolerance `tol` (relative residuals,
    /// absolute parameter deviations).
    pub fn failing_invariant(&self, tol: f64) -> Option<&'static str> {
        let checks = [
            (self.c_residual_rel, "c-adjoint-canonical-form"),
            (self.cp_residual_rel, "c-prime-canonical-form"),
            (self.beta_constraint, "beta-beta-prime-equals-d"),
            (self.convention_deviation, "convention"),
            (self.symmetry, "symmetric-pair-blocks"),
            (self.skew_diagonal, "positive-skew-diagonal"),
            (self.phase, "unit-phases"),
        ];
        checks.iter().find(|(v, _)| !(*v <= tol)).map(|(_, name)| *name)
    }
}

pub fn verify_canonical(
    c: &AntisymmetricMatrix,
    cp: &AntisymmetricMatrix,
    form: &PairedCanonicalForm,
) -> Result<CanonicalReport, CanonicalError> {
    if c.dim() != cp.dim() || c.dim() != form.dim() {
        return Err(CanonicalError::DimensionMismatch {
            left: c.dim(),
            right: cp.dim().max(form.dim()),
        });
    }
    let n = form.dim();
    let s = s_matrix(c, &form.w)?;
    let t = t_matrix(cp, &form.w);
    let (ac, acp) = (assemble_c_adjoint(form), assemble_c_prime(form));
    let mask = pattern_mask(n, &form.blocks, &form.pairing(), &form.null_sector);
    let null_mask: Vec<bool> = {
        let mut null_cols = vec![false; n];
        for &b in &form.null_sector {
            for k in form.blocks[b].columns() {
                null_cols[k] = true;
            }
        }
        (0..n * n)
            .map(|idx| null_cols[idx / n] && null_cols[idx % n] && mask[idx])
            .collect()
    };
    let residual = |x: &ComplexMatrix, a: &ComplexMatrix| {
        let mut r = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if !null_mask[i * n + j] {
                    r = r.max((x[(i, j)] - a[(i, j)]).norm());
                }
            }
        }
        let scale = a.max_abs();
        (r, if scale > 0.0 { r / scale } else { r })
    };
    let (c_residual, c_residual_rel) = residual(&s, &ac);
    let (cp_residual, cp_residual_rel) = residual(&t, &acp);

    let tols = Tolerances::default();
    let mut beta_constraint = 0.0f64;
    let mut convention_deviation = 0.0f64;
    let mut symmetry = 0.0f64;
    let mut skew_diagonal = 0.0f64;
    let mut phase = 0.0f64;
    for p in &form.pairs {
        let beta = UpperToeplitz::new(p.beta.clone());
        let bp = UpperToeplitz::new(p.beta_prime.clone());
        let d = UpperToeplitz::jordan_block(p.length, p.eigenvalue);
        beta_constraint = beta_constraint.max(beta.mul(&bp.conj()).max_abs_diff(&d));
        if !p.zero_eigenvalue && !p.unresolved {
            if let Ok(target) = convention_target(form.convention, p.eigenvalue, p.length, &tols) {
                convention_deviation = convention_deviation.max(beta.max_abs_diff(&target));
            }
        }
        symmetry = symmetry
            .max(p.block_c.max_abs_diff(&p.block_c.transpose()))
            .max(p.block_cp.max_abs_diff(&p.block_cp.transpose()));
        let l = p.length;
        let first = p.block_c[(0, l - 1)];
        for k in 0..l {
            let z = p.block_c[(k, l - 1 - k)];
            skew_diagonal = skew_diagonal.max((z - first).norm()).max(z.im.abs());
        }
        skew_diagonal = skew_diagonal.max((-first.re).max(0.0));
        phase = phase.max((p.phase.norm() - 1.0).abs());
    }
    let jd = JordanDecomposition::from_parts(c.adjoint_product(cp)?, form.w.clone(), form.blocks.clone());
    Ok(CanonicalReport {
        c_residual,
        c_residual_rel,
        cp_residual,
        cp_residual_rel,
        beta_constraint,
        convention_deviation,
        symmetry,
        skew_diagonal,
        phase,
        jordan_residual: jd.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::{build_bcs_matrix, defective_example, random_antisymmetric, BcsSpec};
    use crate::linalg::c64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn counterexample_form() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let form = canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols()).unwrap();
        assert_eq!(form.pairs.len(), 1);
        assert_eq!(form.pairs[0].length, 2);
        assert!(form.null_sector.is_empty());
        let r = verify_canonical(&c, &cp, &form).unwrap();
        assert!(r.c_residual < 1e-9, "{r:?}");
        assert!(r.cp_residual < 1e-9, "{r:?}");
        assert!(r.beta_constraint < 1e-10, "{r:?}");
        assert_eq!(r.failing_invariant(1e-9), None);
    }

    #[test]
    fn counterexample_sqrt_convention() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let form = canonical_pair_form(&c, &cp, Convention::SqrtD, &tols()).unwrap();
        let r = verify_canonical(&c, &cp, &form).unwrap();
        assert_eq!(r.failing_invariant(1e-9), None, "{r:?}");
        let p = &form.pairs[0];
        for (b, bp) in p.beta.iter().zip(&p.beta_prime) {
            assert!((b - bp.conj()).norm() < 1e-9);
        }
    }

    #[test]
    fn branch_cut_is_reported() {
        // C^+C' = -I_2: C = [[0,1],[-1,0]], C' = -C.
        let c = AntisymmetricMatrix::from_upper(2, &[c64(1.0, 0.0)]);
        let cp = AntisymmetricMatrix::from_upper(2, &[c64(-1.0, 0.0)]);
        assert!(matches!(
            canonical_pair_form(&c, &cp, Convention::SqrtD, &tols()),
            Err(CanonicalError::BranchCut { .. })
        ));
        assert!(canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols()).is_ok());
    }

    #[test]
    fn bcs_self_pair() {
        let spec = BcsSpec::with_phase(&[0.6, 0.3], c64(0.0, 1.0)).unwrap();
        let c = build_bcs_matrix(&spec, None).unwrap();
        let form = canonical_pair_form(&c, &c, Convention::BetaEqD, &tols()).unwrap();
        assert_eq!(form.pairs.len(), 2);
        assert!(form.is_diagonalizable());
        let ds: Vec<f64> = form.pairs.iter().map(|p| p.eigenvalue.re).collect();
        assert!((ds[0] - 0.36).abs() < 1e-12 && (ds[1] - 0.09).abs() < 1e-12);
        for p in &form.pairs {
            // c^* c' = D
            assert!((p.c_value() * p.cp_value() - p.eigenvalue).norm() < 1e-12);
        }
        let r = verify_canonical(&c, &c, &form).unwrap();
        assert_eq!(r.failing_invariant(1e-10), None, "{r:?}");
    }

    #[test]
    fn random_pairs_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in [4, 6, 8] {
            let c = random_antisymmetric(&mut rng, dim);
            let cp = random_antisymmetric(&mut rng, dim);
            let form = canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols()).unwrap();
            assert!(form.is_diagonalizable());
            let r = verify_canonical(&c, &cp, &form).unwrap();
            assert_eq!(r.failing_invariant(1e-8), None, "dim {dim}: {r:?}");
        }
    }

    #[test]
    fn scaled_basis_is_detected() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let mut form = canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols()).unwrap();
        form.w = form.w.scale(c64(2.0, 0.0));
        let r = verify_canonical(&c, &cp, &form).unwrap();
        assert!(r.c_residual_rel > 0.5 && r.cp_residual_rel > 1.0);
        assert_eq!(r.failing_invariant(1e-9), Some("c-adjoint-canonical-form"));
    }

    #[test]
    fn odd_dimension_null_sector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_antisymmetric(&mut rng, 5);
        let cp = random_antisymmetric(&mut rng, 5);
        let form = canonical_pair_form(&c, &cp, Convention::BetaEqD, &tols()).unwrap();
        assert_eq!(form.pairs.len(), 2);
        assert_eq!(form.null_sector_dimension(), 1);
        let r = verify_canonical(&c, &cp, &form).unwrap();
        assert_eq!(r.failing_invariant(1e-8), None, "{r:?}");
    }

    #[test]
    fn dual_basis_residual() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let m = c.adjoint_product(&cp).unwrap();
        let d = jordan_decompose(&m, 1e-7, 1e-10).unwrap();
        let v = dual_basis(&c, &d).unwrap();
        assert!((&m * &v).max_abs_diff(&(&v * &d.jordan_matrix())) < 1e-10);
    }

    #[test]
    fn couplings_of_counterexample() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let m = c.adjoint_product(&cp).unwrap();
        let d = jordan_decompose(&m, 1e-7, 1e-10).unwrap();
        let pairing = pair_blocks(&c, &d, &tols()).unwrap();
        let k = extract_couplings(&c, &pairing, &tols()).unwrap();
        assert_eq!(k.pairs.len(), 1);
        assert_eq!(k.pairs[0].beta.len(), 2);
        assert!(k.pairs[0].within_block < 1e-10);
        assert!(k.pairs[0].toeplitz_deviation < 1e-10);
        assert!(k.off_pattern < 1e-10);
    }

    #[test]
    fn empty_and_zero_inputs() {
        let z = AntisymmetricMatrix::zeros(4);
        let form = canonical_pair_form(&z, &z, Convention::BetaEqD, &tols()).unwrap();
        assert!(form.pairs.is_empty());
        assert_eq!(form.null_sector_dimension(), 4);
    }
}
