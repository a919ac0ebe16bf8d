//! Structured inputs: BCS-form condensate matrices, time-reversal structure,
//! the `C~ = -U_T C` positivity test, the 4x4 defective example and seeded
//! random generators.
//!
//! Pair `p` of a [`BcsSpec`] with `h` pairs occupies modes `p` and `p + h`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eigen, AntisymmetricMatrix, ComplexMatrix, LinalgError, DEFAULT_ANTISYM_TOL};

const UNITARY_TOL: f64 = 1e-10;
const PHASE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BcsError {
    #[error("pair {index}: amplitude c = {value} must be finite and non-negative (use the relaxed construction for signed amplitudes)")]
    InvalidAmplitude { index: usize, value: f64 },
    #[error("pair {index}: phase must have unit modulus, got |s| = {modulus}")]
    InvalidPhase { index: usize, modulus: f64 },
    #[error("rotation is not unitary: max |U^+U - I| = {deviation:e}")]
    NonUnitary { deviation: f64 },
    #[error("rotation has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcsPair {
    pub c: f64,
    pub s: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcsSpec {
    pairs: Vec<BcsPair>,
    relaxed: bool,
}

impl BcsSpec {
    /// Standard construction: every `c >= 0`, every `|s| = 1`.
    pub fn new(pairs: Vec<BcsPair>) -> Result<Self, BcsError> {
        Self::validate(&pairs, false)?;
        Ok(Self { pairs, relaxed: false })
    }

    /// Allows amplitudes of either sign.
    pub fn relaxed(pairs: Vec<BcsPair>) -> Result<Self, BcsError> {
        Self::validate(&pairs, true)?;
        Ok(Self { pairs, relaxed: true })
    }

    /// Real amplitudes with a common phase.
    pub fn with_phase(c: &[f64], s: Complex64) -> Result<Self, BcsError> {
        Self::new(c.iter().map(|&c| BcsPair { c, s }).collect())
    }

    fn validate(pairs: &[BcsPair], relaxed: bool) -> Result<(), BcsError> {
        for (index, p) in pairs.iter().enumerate() {
            if !p.c.is_finite() || (!relaxed && p.c < 0.0) {
                return Err(BcsError::InvalidAmplitude { index, value: p.c });
            }
            let modulus = p.s.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > PHASE_TOL {
                return Err(BcsError::InvalidPhase { index, modulus });
            }
        }
        Ok(())
    }

    pub fn pairs(&self) -> &[BcsPair] {
        &self.pairs
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    pub fn modes(&self) -> usize {
        2 * self.pairs.len()
    }
}

/// `C = U^* K U^+` where `K` is the canonical assembly
/// `K[p+h][p] = s_p^* c_p`, `K[p][p+h] = -s_p^* c_p`.
pub fn build_bcs_matrix(spec: &BcsSpec, u: Option<&ComplexMatrix>) -> Result<AntisymmetricMatrix, BcsError> {
    let n = spec.modes();
    let h = spec.pairs.len();
    let mut k = ComplexMatrix::zeros(n, n);
    for (p, pair) in spec.pairs.iter().enumerate() {
        let v = pair.s.conj() * pair.c;
        k[(p + h, p)] = v;
        k[(p, p + h)] = -v;
    }
    let c = match u {
        None => k,
        Some(u) => {
            if u.rows() != n || u.cols() != n {
                return Err(BcsError::DimensionMismatch {
                    expected: n,
                    got: u.rows().max(u.cols()),
                });
            }
            let deviation = unitarity_deviation(u);
            if deviation > UNITARY_TOL {
                return Err(BcsError::NonUnitary { deviation });
            }
            &(&u.conj() * &k) * &u.adjoint()
        }
    };
    Ok(AntisymmetricMatrix::new(c, DEFAULT_ANTISYM_TOL)?)
}

pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(u.rows()))
}

/// Occupation amplitudes `u = 1/sqrt(1+c^2)`, `v = c/sqrt(1+c^2)`.
pub fn uv_amplitudes(c: f64) -> (f64, f64) {
    let r = 1.0f64.hypot(c);
    (1.0 / r, c / r)
}

/// `U_T = [[0, I], [-I, 0]]`, unitary and antisymmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeReversal {
    u_t: ComplexMatrix,
}

impl TimeReversal {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.u_t
    }

    pub fn dim(&self) -> usize {
        self.u_t.rows()
    }
}

pub fn time_reversal_matrix(half_dim: usize) -> TimeReversal {
    let n = 2 * half_dim;
    let mut u_t = ComplexMatrix::zeros(n, n);
    for i in 0..half_dim {
        u_t[(i, i + half_dim)] = Complex64::new(1.0, 0.0);
        u_t[(i + half_dim, i)] = Complex64::new(-1.0, 0.0);
    }
    TimeReversal { u_t }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeEvenCheck {
    pub time_even: bool,
    pub deviation: f64,
}

/// Checks `C^+ = U_T C^T U_T^T`; `tol` is scaled by `max |C|`.
pub fn is_time_even(c: &AntisymmetricMatrix, t: &TimeReversal, tol: f64) -> Result<TimeEvenCheck, BcsError> {
    check_dims(c, t)?;
    let m = c.matrix();
    let u = t.matrix();
    let rhs = &(u * &m.transpose()) * &u.transpose();
    let deviation = m.adjoint().max_abs_diff(&rhs);
    Ok(TimeEvenCheck {
        time_even: deviation <= tol * m.max_abs(),
        deviation,
    })
}

#[derive(Debug, Clone)]
pub struct CTilde {
    pub matrix: ComplexMatrix,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    pub positive_definite: bool,
}

/// `C~ = -U_T C` with a positive-definiteness verdict on its hermitian part
/// (smallest eigenvalue above `1e-12 * max |C~|`).
pub fn c_tilde(c: &AntisymmetricMatrix, t: &TimeReversal) -> Result<CTilde, BcsError> {
    check_dims(c, t)?;
    let matrix = -&(t.matrix() * c.matrix());
    let hermiticity_deviation = matrix.max_abs_diff(&matrix.adjoint());
    let min_eigenvalue = hermitian_eigen(&matrix)?.values.first().copied().unwrap_or(0.0);
    let positive_definite = matrix.rows() > 0 && min_eigenvalue > 1e-12 * matrix.max_abs();
    Ok(CTilde {
        matrix,
        hermiticity_deviation,
        min_eigenvalue,
        positive_definite,
    })
}

fn check_dims(c: &AntisymmetricMatrix, t: &TimeReversal) -> Result<(), BcsError> {
    if c.dim() != t.dim() {
        return Err(BcsError::DimensionMismatch {
            expected: t.dim(),
            got: c.dim(),
        });
    }
    Ok(())
}

/// The 4x4 pair `C = [[0, A], [-A^T, 0]]`, `C' = [[0, A'], [-A'^T, 0]]` with
/// `A = [[1, a], [a^*, 0]]` and `A' = [[0, 1], [1, 0]]`. For real `a` the
/// product `C^+C'` has two Jordan blocks of length 2.
pub fn defective_example(a: Complex64) -> (AntisymmetricMatrix, AntisymmetricMatrix) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let embed = |blk: [[Complex64; 2]; 2]| {
        let mut m = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j + 2)] = blk[i][j];
                m[(j + 2, i)] = -blk[i][j];
            }
        }
        AntisymmetricMatrix::new(m, 0.0).expect("antisymmetric by construction")
    };
    (embed([[one, a], [a.conj(), zero]]), embed([[zero, one], [one, zero]]))
}

/// Upper-triangle entries drawn uniformly from the closed unit disc.
pub fn random_antisymmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> AntisymmetricMatrix {
    let upper: Vec<Complex64> = (0..dim * dim.saturating_sub(1) / 2).map(|_| unit_disc(rng)).collect();
    AntisymmetricMatrix::from_upper(dim, &upper)
}

fn unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.gen::<f64>().sqrt();
    let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(r, theta)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| gaussian(rng)).collect()).collect();
        let q = crate::jordan::orthonormalize(&cols, 1e-8);
        if q.len() == n {
            return ComplexMatrix::from_columns(n, &q);
        }
    }
}

/// Random time-even `C = U_T C~` with `C~` hermitian of quaternionic form
/// `[[P, Q], [-Q^*, P^*]]`. With `positive_definite` the tilde matrix is
/// `X X^+ + 0.1 I`; otherwise it is `X + X^+` (generically indefinite).
pub fn random_time_even<R: Rng + ?Sized>(rng: &mut R, half_dim: usize, positive_definite: bool) -> AntisymmetricMatrix {
    let h = half_dim;
    let p = ComplexMatrix::from_fn(h, h, |_, _| gaussian(rng));
    let q = ComplexMatrix::from_fn(h, h, |_, _| gaussian(rng));
    let mut x = ComplexMatrix::zeros(2 * h, 2 * h);
    x.set_block(0, 0, &p);
    x.set_block(0, h, &q);
    x.set_block(h, 0, &(-&q.conj()));
    x.set_block(h, h, &p.conj());
    let tilde = if positive_definite {
        (&x * &x.adjoint()).shift_diagonal(Complex64::new(0.1, 0.0))
    } else {
        &x + &x.adjoint()
    };
    let c = time_reversal_matrix(h).matrix() * &tilde;
    AntisymmetricMatrix::new(c, 1e-10).expect("quaternionic tilde gives antisymmetric C")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_assembly_entries() {
        let spec = BcsSpec::with_phase(&[0.6, 0.3], c64(0.0, 1.0)).unwrap();
        let c = build_bcs_matrix(&spec, None).unwrap();
        let m = c.matrix();
        assert_eq!(m[(2, 0)], c64(0.0, -0.6));
        assert_eq!(m[(0, 2)], c64(0.0, 0.6));
        assert_eq!(m[(3, 1)], c64(0.0, -0.3));
        assert_eq!(m[(1, 3)], c64(0.0, 0.3));
        let nonzero = m.as_slice().iter().filter(|z| z.norm() > 0.0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn empty_spec_is_vacuum() {
        let spec = BcsSpec::new(vec![]).unwrap();
        assert_eq!(build_bcs_matrix(&spec, None).unwrap().dim(), 0);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            BcsSpec::with_phase(&[-0.1], c64(1.0, 0.0)),
            Err(BcsError::InvalidAmplitude { index: 0, .. })
        ));
        assert!(BcsSpec::relaxed(vec![BcsPair {
            c: -0.1,
            s: c64(1.0, 0.0)
        }])
        .is_ok());
        assert!(matches!(
            BcsSpec::with_phase(&[0.1], c64(2.0, 0.0)),
            Err(BcsError::InvalidPhase { .. })
        ));
    }

    #[test]
    fn rejects_non_unitary_rotation() {
        let spec = BcsSpec::with_phase(&[0.5], c64(1.0, 0.0)).unwrap();
        let u = ComplexMatrix::identity(2).scale(c64(2.0, 0.0));
        assert!(matches!(
            build_bcs_matrix(&spec, Some(&u)),
            Err(BcsError::NonUnitary { .. })
        ));
    }

    #[test]
    fn amplitudes() {
        assert_eq!(uv_amplitudes(0.0), (1.0, 0.0));
        let (u, v) = uv_amplitudes(1.0);
        assert!((u - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let (u, v) = uv_amplitudes(3.0);
        assert!((u - 0.316_227_766_016_837_94).abs() < 1e-15);
        assert!((v - 0.948_683_298_050_513_8).abs() < 1e-15);
    }

    #[test]
    fn time_reversal_structure() {
        let t = time_reversal_matrix(1);
        assert_eq!(*t.matrix(), ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]));
        let t = time_reversal_matrix(3);
        let u = t.matrix();
        assert_eq!(unitarity_deviation(u), 0.0);
        assert_eq!(u.adjoint(), -&u.conj());
    }

    #[test]
    fn counterexample_is_time_even_for_real_a() {
        let (c, cp) = defective_example(c64(0.5, 0.0));
        let t = time_reversal_matrix(2);
        assert!(is_time_even(&c, &t, 1e-12).unwrap().time_even);
        assert!(is_time_even(&cp, &t, 1e-12).unwrap().time_even);
        let mut m = c.matrix().clone();
        m[(0, 3)] += c64(0.1, 0.2);
        m[(3, 0)] -= c64(0.1, 0.2);
        let broken = AntisymmetricMatrix::new(m, 1e-12).unwrap();
        assert!(!is_time_even(&broken, &t, 1e-12).unwrap().time_even);
        let z = is_time_even(&AntisymmetricMatrix::zeros(4), &t, 1e-12).unwrap();
        assert!(z.time_even);
        assert_eq!(z.deviation, 0.0);
    }

    #[test]
    fn counterexample_tilde_is_not_positive() {
        let (c, _) = defective_example(c64(0.5, 0.0));
        let ct = c_tilde(&c, &time_reversal_matrix(2)).unwrap();
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 0.0]]);
        assert_eq!(ct.matrix.submatrix(0, 0, 2, 2), a.transpose());
        assert_eq!(ct.matrix.submatrix(2, 2, 2, 2), a);
        assert_eq!(ct.hermiticity_deviation, 0.0);
        assert!(!ct.positive_definite);
        let z = c_tilde(&AntisymmetricMatrix::zeros(2), &time_reversal_matrix(1)).unwrap();
        assert!(!z.positive_definite);
    }

    #[test]
    fn bcs_tilde_is_positive_for_reversed_phase() {
        let spec = BcsSpec::with_phase(&[0.6, 0.3, 1.2], c64(-1.0, 0.0)).unwrap();
        let c = build_bcs_matrix(&spec, None).unwrap();
        let ct = c_tilde(&c, &time_reversal_matrix(3)).unwrap();
        assert!(ct.positive_definite);
        assert!((ct.min_eigenvalue - 0.3).abs() < 1e-15);
    }

    #[test]
    fn random_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c = random_antisymmetric(&mut rng, 5);
        assert!(c.matrix().max_abs() <= 1.0);
        let u = random_unitary(&mut rng, 6);
        assert!(unitarity_deviation(&u) < 1e-13);
        let t = time_reversal_matrix(3);
        for pd in [true, false] {
            let c = random_time_even(&mut rng, 3, pd);
            assert!(is_time_even(&c, &t, 1e-12).unwrap().time_even);
            let ct = c_tilde(&c, &t).unwrap();
            assert!(ct.hermiticity_deviation < 1e-12);
            assert_eq!(ct.positive_definite, pd);
        }
    }
}
