use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Partial-pivot LU factorization `P A = L U`, packed in one matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    odd: bool,
    min_pivot: f64,
}

impl Lu {
    /// Factorizes `a`. Fails when the smallest pivot falls below
    /// `tol * max |a|`.
    pub fn new(a: &ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut min_pivot = f64::INFINITY;
        let threshold = tol * a.max_abs();

        for k in 0..n {
            let (p, pmag) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            min_pivot = min_pivot.min(pmag);
            if pmag == 0.0 || pmag <= threshold {
                return Err(LinalgError::Singular { pivot: pmag });
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
                odd = !odd;
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.re == 0.0 && f.im == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        if n == 0 {
            min_pivot = 0.0;
        }
        Ok(Self {
            lu,
            perm,
            odd,
            min_pivot,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = self.lu[(i, k)];
                let xk = x[k];
                x[i] -= l * xk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = self.lu[(i, k)];
                let xk = x[k];
                x[i] -= u * xk;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.dim());
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.column(j));
            out.set_column(j, &x);
        }
        out
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }

    pub fn determinant(&self) -> Complex64 {
        let d: Complex64 = (0..self.dim()).map(|i| self.lu[(i, i)]).product();
        if self.odd {
            -d
        } else {
            d
        }
    }
}

/// Inverse through partial-pivot LU; singular-to-tolerance inputs yield
/// [`LinalgError::Singular`] carrying the offending pivot magnitude.
pub fn inverse(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix, LinalgError> {
    Ok(Lu::new(a, tol)?.inverse())
}

/// Determinant via LU; exactly singular matrices give zero.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex64, LinalgError> {
    match Lu::new(a, 0.0) {
        Ok(lu) => Ok(lu.determinant()),
        Err(LinalgError::Singular { .. }) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}
