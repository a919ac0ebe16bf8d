//! One-sided (Hestenes) Jacobi SVD for complex matrices.

use num_complex::Complex64;

use super::ComplexMatrix;

const MAX_SWEEPS: usize = 80;

/// `A = U diag(s) V^+` with singular values sorted in descending order.
///
/// For `rows >= cols`, `v` is a full unitary `cols x cols` matrix; columns of
/// `u` that belong to zero singular values are left zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Right singular vectors whose singular value is at or below `threshold`.
    pub fn null_space(&self, threshold: f64) -> Vec<Vec<Complex64>> {
        self.singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= threshold)
            .map(|(j, _)| self.v.column(j))
            .collect()
    }
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    svd_tall(a)
}

fn svd_tall(a: &ComplexMatrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    // Column-major working copies.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let eps = f64::EPSILON * (m.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    sigma.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));

    let mut u = ComplexMatrix::zeros(m, n);
    let mut vm = ComplexMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &(sv, j)) in sigma.iter().enumerate() {
        s.push(sv);
        if sv > 0.0 {
            let col: Vec<Complex64> = cols[j].iter().map(|z| z / sv).collect();
            u.set_column(k, &col);
        }
        vm.set_column(k, &v[j]);
    }
    Svd {
        u,
        singular_values: s,
        v: vm,
    }
}

// [x_p, x_q] <- [x_p, x_q] [[c, s e^{i phi}], [-s e^{-i phi}, c]]
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let xp = &mut left[p];
    let xq = &mut right[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let ap = *a;
        let bq = *b;
        *a = ap * c - bq * phase.conj() * s;
        *b = ap * phase * s + bq * c;
    }
}

/// Numerical rank: singular values strictly above `rel_tol * s_max`.
pub fn svd_rank(a: &ComplexMatrix, rel_tol: f64) -> (usize, Vec<f64>) {
    let s = svd(a).singular_values;
    let smax = s.first().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > rel_tol * smax && x > 0.0).count();
    (rank, s)
}

/// 2-norm condition number `s_max / s_min` (infinite when singular).
pub fn condition_number(a: &ComplexMatrix) -> f64 {
    let s = svd(a).singular_values;
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}
