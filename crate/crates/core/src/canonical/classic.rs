//! Unitary canonical form of a single antisymmetric matrix:
//! `(U^T C U)[m][n] = s_n^* c_n delta(m, n~)`.

use num_complex::Complex64;

use super::CanonicalError;
use crate::linalg::{hermitian_eigen, AntisymmetricMatrix, ComplexMatrix};

/// Pair `p` occupies columns `p` and `p + h` (`h` = number of pairs); in odd
/// dimensions the unpaired zero mode is the last column.
#[derive(Debug, Clone)]
pub struct ClassicCanonicalForm {
    pub u: ComplexMatrix,
    /// One non-negative value per pair, descending.
    pub c: Vec<f64>,
    /// Phase `s_p` of the first member of each pair; the partner has `-s_p`.
    pub s: Vec<Complex64>,
    /// Canonical partner of every column.
    pub partner: Vec<Option<usize>>,
}

impl ClassicCanonicalForm {
    pub fn pair_count(&self) -> usize {
        self.c.len()
    }

    /// The canonical matrix `K` with `K[p+h][p] = s_p^* c_p`.
    pub fn canonical_matrix(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let h = self.c.len();
        let mut k = ComplexMatrix::zeros(n, n);
        for p in 0..h {
            let v = self.s[p].conj() * self.c[p];
            k[(p + h, p)] = v;
            k[(p, p + h)] = -v;
        }
        k
    }

    /// `c_n` per column (a pair contributes its value twice).
    pub fn mode_values(&self) -> Vec<f64> {
        let n = self.u.rows();
        let h = self.c.len();
        (0..n).map(|m| if m < 2 * h { self.c[m % h] } else { 0.0 }).collect()
    }
}

fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn residual_against(v: &[Complex64], q: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for b in q {
            let d = dot(b, &r);
            for (x, y) in r.iter_mut().zip(b) {
                *x -= d * y;
            }
        }
    }
    r
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = norm_sqr(&v).sqrt();
    v.into_iter().map(|z| z / n).collect()
}

// Candidate with the largest component outside span(q), normalized.
fn most_uncovered(candidates: &[Vec<Complex64>], q: &[Vec<Complex64>]) -> Vec<Complex64> {
    let best = candidates
        .iter()
        .map(|v| residual_against(v, q))
        .max_by(|a, b| norm_sqr(a).total_cmp(&norm_sqr(b)))
        .expect("non-empty candidate set");
    normalized(best)
}

/// Eigenvectors of `C^+C` are grouped into clusters of equal eigenvalue
/// `c^2` (linking distance `sqrt(tol) * max`); inside each cluster the vector
/// least covered by the columns chosen so far becomes `u` and its partner is
/// `C^* u^* / c`. Eigenvalues at or below `tol * max` are zero modes.
pub fn classic_bloch_messiah(c: &AntisymmetricMatrix, tol: f64) -> Result<ClassicCanonicalForm, CanonicalError> {
    let n = c.dim();
    let cm = c.matrix();
    let eig = hermitian_eigen(&(&cm.adjoint() * cm))?;
    let top = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let zero_cut = tol * top;
    let link = tol.sqrt() * top;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut zero_modes: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        let mu = eig.values[i];
        if mu <= zero_cut {
            zero_modes.push(i);
            continue;
        }
        match clusters.last_mut() {
            Some(cl) if eig.values[*cl.last().unwrap()] - mu <= link => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let mut chosen: Vec<Vec<Complex64>> = Vec::new();
    let mut firsts: Vec<Vec<Complex64>> = Vec::new();
    let mut partners: Vec<Vec<Complex64>> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut carry: Vec<Vec<Complex64>> = Vec::new();
    for cl in &clusters {
        let mut candidates = std::mem::take(&mut carry);
        candidates.extend(cl.iter().map(|&i| eig.vectors.column(i)));
        for _ in 0..candidates.len() / 2 {
            let u = most_uncovered(&candidates, &chosen);
            let cu: Vec<Complex64> = cm.mul_vec(&u).into_iter().map(|z| z.conj()).collect();
            let cval = norm_sqr(&cu).sqrt();
            chosen.push(u.clone());
            let partner = normalized(residual_against(&cu, &chosen));
            chosen.push(partner.clone());
            firsts.push(u);
            partners.push(partner);
            values.push(cval);
        }
        if candidates.len() % 2 == 1 {
            // Numerically split cluster: the leftover direction joins the next one.
            carry.push(most_uncovered(&candidates, &chosen));
        }
    }

    let mut zero_candidates = carry;
    zero_candidates.extend(zero_modes.iter().map(|&i| eig.vectors.column(i)));
    let mut zeros: Vec<Vec<Complex64>> = Vec::new();
    while chosen.len() < n {
        let z = most_uncovered(&zero_candidates, &chosen);
        chosen.push(z.clone());
        zeros.push(z);
    }
    let odd = if zeros.len() % 2 == 1 { zeros.pop() } else { None };
    let half = zeros.len() / 2;
    let mut zi = zeros.into_iter();
    for _ in 0..half {
        firsts.push(zi.next().unwrap());
        partners.push(zi.next().unwrap());
        values.push(0.0);
    }

    let h = firsts.len();
    let mut cols = firsts;
    cols.extend(partners);
    cols.extend(odd);
    let mut partner = vec![None; n];
    for p in 0..h {
        partner[p] = Some(p + h);
        partner[p + h] = Some(p);
    }
    Ok(ClassicCanonicalForm {
        u: ComplexMatrix::from_columns(n, &cols),
        c: values,
        s: vec![Complex64::new(1.0, 0.0); h],
        partner,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcs::{build_bcs_matrix, random_antisymmetric, random_unitary, BcsSpec};
    use crate::linalg::c64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check(c: &AntisymmetricMatrix, f: &ClassicCanonicalForm) -> (f64, f64) {
        let n = c.dim();
        let unit = (&f.u.adjoint() * &f.u).max_abs_diff(&ComplexMatrix::identity(n));
        let rec = (&(&f.u.transpose() * c.matrix()) * &f.u).max_abs_diff(&f.canonical_matrix());
        (unit, rec)
    }

    #[test]
    fn already_canonical() {
        let spec = BcsSpec::with_phase(&[0.8, 0.2], c64(1.0, 0.0)).unwrap();
        let c = build_bcs_matrix(&spec, None).unwrap();
        let f = classic_bloch_messiah(&c, 1e-10).unwrap();
        assert!((f.c[0] - 0.8).abs() < 1e-14 && (f.c[1] - 0.2).abs() < 1e-14);
        let (unit, rec) = check(&c, &f);
        assert!(unit < 1e-14 && rec < 1e-14);
        // U is a phased permutation.
        for j in 0..4 {
            assert_eq!(f.u.column(j).iter().filter(|z| z.norm() > 1e-12).count(), 1);
        }
    }

    #[test]
    fn zero_matrix() {
        let f = classic_bloch_messiah(&AntisymmetricMatrix::zeros(3), 1e-10).unwrap();
        assert_eq!(f.c, vec![0.0]);
        assert_eq!(f.partner, vec![Some(1), Some(0), None]);
        let (unit, rec) = check(&AntisymmetricMatrix::zeros(3), &f);
        assert!(unit < 1e-15 && rec == 0.0);
    }

    #[test]
    fn random_six() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = random_antisymmetric(&mut rng, 6);
        let f = classic_bloch_messiah(&c, 1e-10).unwrap();
        let (unit, rec) = check(&c, &f);
        assert!(unit < 1e-12, "{unit}");
        assert!(rec < 1e-10, "{rec}");
        assert!(f.c.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn degenerate_bcs_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = BcsSpec::with_phase(&[0.7, 0.7, 0.4, 0.0], c64(0.0, 1.0)).unwrap();
        let u = random_unitary(&mut rng, 8);
        let c = build_bcs_matrix(&spec, Some(&u)).unwrap();
        let f = classic_bloch_messiah(&c, 1e-10).unwrap();
        let want = [0.7, 0.7, 0.4, 0.0];
        for (got, want) in f.c.iter().zip(want) {
            assert!((got - want).abs() < 1e-10, "{:?}", f.c);
        }
        let (unit, rec) = check(&c, &f);
        assert!(unit < 1e-12 && rec < 1e-10, "{unit} {rec}");
    }
}
