//! Exact fermionic Fock-space oracle for small mode counts.
//!
//! Basis states are occupation bitmasks (bit `m` set when mode `m` is
//! occupied). `a+_m` acting on a state picks up `(-1)^k` with `k` the number of
//! occupied modes below `m`; annihilation is its adjoint with the same sign.

use num_complex::Complex64;

use crate::linalg::AntisymmetricMatrix;

pub const MAX_MODES: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FockError {
    #[error("{modes} modes exceed the oracle cap of {MAX_MODES}")]
    TooManyModes { modes: usize },
    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("vectors live in different spaces ({left} vs {right} modes)")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    n_modes: usize,
    amplitudes: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(n_modes: usize) -> Result<Self, FockError> {
        if n_modes > MAX_MODES {
            return Err(FockError::TooManyModes { modes: n_modes });
        }
        Ok(Self {
            n_modes,
            amplitudes: vec![Complex64::new(0.0, 0.0); 1 << n_modes],
        })
    }

    pub fn vacuum(n_modes: usize) -> Result<Self, FockError> {
        let mut v = Self::zeros(n_modes)?;
        v.amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(n_modes: usize, amplitudes: Vec<Complex64>) -> Result<Self, FockError> {
        if n_modes > MAX_MODES {
            return Err(FockError::TooManyModes { modes: n_modes });
        }
        assert_eq!(amplitudes.len(), 1 << n_modes, "amplitude count must be 2^n_modes");
        Ok(Self { n_modes, amplitudes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, mask: usize) -> Complex64 {
        self.amplitudes[mask]
    }

    fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode >= self.n_modes {
            return Err(FockError::ModeOutOfRange {
                mode,
                modes: self.n_modes,
            });
        }
        Ok(())
    }
}

fn sign_below(mask: usize, mode: usize) -> f64 {
    if (mask & ((1 << mode) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn apply_creation(v: &FockVector, mode: usize) -> Result<FockVector, FockError> {
    v.check_mode(mode)?;
    let bit = 1 << mode;
    let mut out = FockVector::zeros(v.n_modes)?;
    for (mask, amp) in v.amplitudes.iter().enumerate() {
        if mask & bit == 0 && *amp != Complex64::new(0.0, 0.0) {
            out.amplitudes[mask | bit] += amp * sign_below(mask, mode);
        }
    }
    Ok(out)
}

pub fn apply_annihilation(v: &FockVector, mode: usize) -> Result<FockVector, FockError> {
    v.check_mode(mode)?;
    let bit = 1 << mode;
    let mut out = FockVector::zeros(v.n_modes)?;
    for (mask, amp) in v.amplitudes.iter().enumerate() {
        if mask & bit != 0 && *amp != Complex64::new(0.0, 0.0) {
            out.amplitudes[mask & !bit] += amp * sign_below(mask, mode);
        }
    }
    Ok(out)
}

/// `|C> = sum_k P^k |0> / k!` with `P = sum_{m<n} C^*_{mn} a+_m a+_n`.
pub fn expand_condensate(c: &AntisymmetricMatrix) -> Result<FockVector, FockError> {
    let n = c.dim();
    let mut total = FockVector::vacuum(n)?;
    let mut term = total.clone();
    let mut factorial: u64 = 1;
    for k in 1..=n / 2 {
        term = apply_pair_operator(c, &term)?;
        factorial *= k as u64;
        let inv = 1.0 / factorial as f64;
        for (t, p) in total.amplitudes.iter_mut().zip(&term.amplitudes) {
            *t += p * inv;
        }
    }
    Ok(total)
}

fn apply_pair_operator(c: &AntisymmetricMatrix, v: &FockVector) -> Result<FockVector, FockError> {
    let n = v.n_modes;
    let m = c.matrix();
    let mut out = FockVector::zeros(n)?;
    for a in 0..n {
        for b in a + 1..n {
            let coef = m[(a, b)].conj();
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = apply_creation(&apply_creation(v, b)?, a)?;
            for (o, x) in out.amplitudes.iter_mut().zip(&w.amplitudes) {
                *o += coef * x;
            }
        }
    }
    Ok(out)
}

/// `<bra|ket>`.
pub fn fock_overlap(bra: &FockVector, ket: &FockVector) -> Result<Complex64, FockError> {
    if bra.n_modes != ket.n_modes {
        return Err(FockError::DimensionMismatch {
            left: bra.n_modes,
            right: ket.n_modes,
        });
    }
    Ok(bra
        .amplitudes
        .iter()
        .zip(&ket.amplitudes)
        .map(|(b, k)| b.conj() * k)
        .sum())
}

/// `<bra| a+_n a_m |ket>`.
pub fn fock_one_body(bra: &FockVector, ket: &FockVector, n: usize, m: usize) -> Result<Complex64, FockError> {
    bra.check_mode(n)?;
    let moved = apply_creation(&apply_annihilation(ket, m)?, n)?;
    fock_overlap(bra, &moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, ComplexMatrix};

    fn two_mode(c: Complex64) -> AntisymmetricMatrix {
        AntisymmetricMatrix::from_upper(2, &[c])
    }

    #[test]
    fn creation_on_vacuum() {
        let v = apply_creation(&FockVector::vacuum(3).unwrap(), 0).unwrap();
        assert_eq!(v.amplitude(1), c64(1.0, 0.0));
        let vv = apply_creation(&v, 0).unwrap();
        assert!(vv.amplitudes().iter().all(|z| *z == c64(0.0, 0.0)));
    }

    #[test]
    fn anticommutation_on_vacuum() {
        let vac = FockVector::vacuum(2).unwrap();
        let ab = apply_creation(&apply_creation(&vac, 0).unwrap(), 1).unwrap();
        let ba = apply_creation(&apply_creation(&vac, 1).unwrap(), 0).unwrap();
        for (x, y) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            assert_eq!(*x, -*y);
        }
        assert_eq!(ab.amplitude(3), c64(-1.0, 0.0));
    }

    #[test]
    fn out_of_range_and_cap() {
        let vac = FockVector::vacuum(2).unwrap();
        assert_eq!(
            apply_creation(&vac, 2),
            Err(FockError::ModeOutOfRange { mode: 2, modes: 2 })
        );
        assert_eq!(FockVector::vacuum(13), Err(FockError::TooManyModes { modes: 13 }));
        assert!(matches!(
            expand_condensate(&AntisymmetricMatrix::zeros(14)),
            Err(FockError::TooManyModes { .. })
        ));
    }

    #[test]
    fn zero_condensate_is_vacuum() {
        let v = expand_condensate(&AntisymmetricMatrix::zeros(4)).unwrap();
        assert_eq!(v, FockVector::vacuum(4).unwrap());
    }

    #[test]
    fn two_mode_condensate() {
        let c = c64(0.4, -0.7);
        let v = expand_condensate(&two_mode(c)).unwrap();
        assert_eq!(v.amplitude(0), c64(1.0, 0.0));
        assert_eq!(v.amplitude(3), c.conj());
        assert_eq!(v.amplitude(1), c64(0.0, 0.0));
        assert_eq!(v.amplitude(2), c64(0.0, 0.0));
    }

    #[test]
    fn two_mode_overlap() {
        let (c, cp) = (c64(0.4, -0.7), c64(-1.1, 0.2));
        let ket = expand_condensate(&two_mode(c)).unwrap();
        let bra = expand_condensate(&two_mode(cp)).unwrap();
        let o = fock_overlap(&bra, &ket).unwrap();
        assert!((o - (1.0 + cp * c.conj())).norm() < 1e-15);
        let vac = FockVector::vacuum(2).unwrap();
        assert_eq!(fock_overlap(&vac, &vac).unwrap(), c64(1.0, 0.0));
    }

    #[test]
    fn disjoint_pairs_overlap_is_one() {
        let mut a = ComplexMatrix::zeros(4, 4);
        a[(0, 1)] = c64(0.7, 0.0);
        a[(1, 0)] = c64(-0.7, 0.0);
        let mut b = ComplexMatrix::zeros(4, 4);
        b[(2, 3)] = c64(0.0, 1.3);
        b[(3, 2)] = c64(0.0, -1.3);
        let va = expand_condensate(&AntisymmetricMatrix::new(a, 0.0).unwrap()).unwrap();
        let vb = expand_condensate(&AntisymmetricMatrix::new(b, 0.0).unwrap()).unwrap();
        assert_eq!(fock_overlap(&va, &vb).unwrap(), c64(1.0, 0.0));
    }

    #[test]
    fn product_form_of_bcs_condensate() {
        // Pairs (0, 2) and (1, 3): C_{02} = -s^* c.
        let (c1, c2) = (0.6, 0.3);
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 2)] = c64(-c1, 0.0);
        m[(2, 0)] = c64(c1, 0.0);
        m[(1, 3)] = c64(-c2, 0.0);
        m[(3, 1)] = c64(c2, 0.0);
        let v = expand_condensate(&AntisymmetricMatrix::new(m, 0.0).unwrap()).unwrap();
        // a+_0 a+_2 a+_1 a+_3 |0> = -|1111>
        let expected = -(-c1) * (-c2);
        assert!((v.amplitude(0b1111) - c64(expected, 0.0)).norm() < 1e-15);
        assert!((v.amplitude(0b0101) - c64(-c1, 0.0)).norm() < 1e-15);
        assert!((v.amplitude(0b1010) - c64(-c2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_body_examples() {
        let vac = FockVector::vacuum(3).unwrap();
        for n in 0..3 {
            for m in 0..3 {
                assert_eq!(fock_one_body(&vac, &vac, n, m).unwrap(), c64(0.0, 0.0));
            }
        }
        let v = expand_condensate(&two_mode(c64(1.0, 0.0))).unwrap();
        let num = fock_one_body(&v, &v, 0, 0).unwrap();
        let den = fock_overlap(&v, &v).unwrap();
        assert!((num / den - c64(0.5, 0.0)).norm() < 1e-15);
        assert!(fock_one_body(&v, &v, 0, 5).is_err());
    }
}
