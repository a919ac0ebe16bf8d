//! Cyclic Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

const MAX_SWEEPS: usize = 60;

/// `A = V diag(values) V^+`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of the Hermitian part `(A + A^+)/2` of `a`.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut h = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);
    let scale = h.max_abs();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE) || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = h[(p, q)];
                let g = apq.norm();
                if g == 0.0 {
                    continue;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
                    h[(p, q)] = Complex64::new(0.0, 0.0);
                    h[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // R = diag(1, phase^*) * [[c, s], [-s, c]] restricted to (p, q).
                let r_pp = Complex64::new(c, 0.0);
                let r_pq = Complex64::new(s, 0.0);
                let r_qp = -phase.conj() * s;
                let r_qq = phase.conj() * c;
                for k in 0..n {
                    let x = h[(k, p)];
                    let y = h[(k, q)];
                    h[(k, p)] = x * r_pp + y * r_qp;
                    h[(k, q)] = x * r_pq + y * r_qq;
                }
                for k in 0..n {
                    let x = h[(p, k)];
                    let y = h[(q, k)];
                    h[(p, k)] = r_pp.conj() * x + r_qp.conj() * y;
                    h[(q, k)] = r_pq.conj() * x + r_qq.conj() * y;
                }
                h[(p, q)] = Complex64::new(0.0, 0.0);
                h[(q, p)] = Complex64::new(0.0, 0.0);
                h[(p, p)] = Complex64::new(h[(p, p)].re, 0.0);
                h[(q, q)] = Complex64::new(h[(q, q)].re, 0.0);
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * r_pp + y * r_qp;
                    v[(k, q)] = x * r_pq + y * r_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.partial_cmp(&h[(j, j)].re).unwrap().then(i.cmp(&j)));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, multiply};

    #[test]
    fn diagonalizes_complex_hermitian() {
        let a = ComplexMatrix::from_rows(&[
            vec![c64(2.0, 0.0), c64(1.0, -1.0), c64(0.0, 0.5)],
            vec![c64(1.0, 1.0), c64(-1.0, 0.0), c64(0.3, 0.0)],
            vec![c64(0.0, -0.5), c64(0.3, 0.0), c64(0.5, 0.0)],
        ]);
        let e = hermitian_eigen(&a).unwrap();
        let d = ComplexMatrix::diagonal(&e.values.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>());
        let rec = multiply(&multiply(&e.vectors, &d).unwrap(), &e.vectors.adjoint()).unwrap();
        assert!(rec.max_abs_diff(&a) < 1e-13);
        let vv = multiply(&e.vectors.adjoint(), &e.vectors).unwrap();
        assert!(vv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn degenerate_spectrum() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -2.0]]);
        let e = hermitian_eigen(&a).unwrap();
        assert_eq!(e.values, vec![-2.0, 1.0, 1.0]);
    }
}
