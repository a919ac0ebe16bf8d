//! Numerical Jordan decomposition of a square complex matrix.
//!
//! Eigenvalues from [`linalg::eigenvalues`] are clustered, and for every
//! cluster the chain structure is read off the rank profile of the powers of
//! `M - lambda I`. Chain heads are taken from the null space of the highest
//! power, complementary to the lower null spaces, and each chain is generated
//! downward by repeated application of `M - lambda I`.
//!
//! Columns of `W` are stored eigenvector first within each block, so that the
//! Jordan matrix carries ones just above its diagonal.

use std::cmp::Ordering;
use std::ops::Range;

use num_complex::Complex64;

use crate::linalg::{self, svd, ComplexMatrix, LinalgError};

/// Default linking distance (relative) for eigenvalue clustering. Defective
/// eigenvalues are perturbed by `O(eps^(1/L))`, so this sits well above the
/// rank tolerance.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JordanError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(
        "rank profile of (M - {lambda}I)^k is not a valid Weyr sequence (nullities {nullities:?}, expected multiplicity {multiplicity}); try a different rank tolerance"
    )]
    InconsistentRankProfile {
        lambda: Complex64,
        multiplicity: usize,
        nullities: Vec<usize>,
    },
    #[error("Jordan basis is numerically singular (condition {condition:e})")]
    SingularBasis { condition: f64 },
    #[error("series-head transform requires a nonzero leading parameter")]
    InvalidTransform,
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
}

/// One Jordan block: eigenvalue, length and the first column it occupies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanBlock {
    pub id: usize,
    pub eigenvalue: Complex64,
    pub length: usize,
    pub start: usize,
}

impl JordanBlock {
    pub fn columns(&self) -> Range<usize> {
        self.start..self.start + self.length
    }

    pub fn head_column(&self) -> usize {
        self.start + self.length - 1
    }
}

/// `M W = W D` with `D` assembled from `blocks`.
#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    pub w: ComplexMatrix,
    pub blocks: Vec<JordanBlock>,
    pub residual: f64,
    matrix: ComplexMatrix,
}

impl JordanDecomposition {
    /// Wraps an externally built basis; the residual is recomputed.
    pub fn from_parts(matrix: ComplexMatrix, w: ComplexMatrix, blocks: Vec<JordanBlock>) -> Self {
        let mut out = Self {
            w,
            blocks,
            residual: 0.0,
            matrix,
        };
        out.residual = out.compute_residual();
        out
    }

    /// The decomposed matrix `M`.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// Block-diagonal Jordan matrix `D`.
    pub fn jordan_matrix(&self) -> ComplexMatrix {
        jordan_matrix(self.dim(), &self.blocks)
    }

    /// Block-diagonal skew flip `J` (ones on each block's anti-diagonal).
    pub fn flip_matrix(&self) -> ComplexMatrix {
        flip_matrix(self.dim(), &self.blocks)
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.blocks.iter().all(|b| b.length == 1)
    }

    pub fn max_block_length(&self) -> usize {
        self.blocks.iter().map(|b| b.length).max().unwrap_or(0)
    }

    /// Replaces the series of `block` by its image under the upper-triangular
    /// Toeplitz transform with parameters `alpha`.
    pub fn transform_series(&mut self, block: usize, alpha: &UpperToeplitz) -> Result<(), JordanError> {
        let b = self.blocks[block];
        assert_eq!(alpha.len(), b.length);
        let t = series_head_transform(alpha.coeffs())?;
        let cols = self.w.submatrix(0, b.start, self.dim(), b.length);
        self.w.set_block(0, b.start, &(&cols * &t));
        self.residual = self.compute_residual();
        Ok(())
    }

    fn compute_residual(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let lhs = &self.matrix * &self.w;
        let rhs = &self.w * &self.jordan_matrix();
        lhs.max_abs_diff(&rhs)
    }
}

pub(crate) fn jordan_matrix(n: usize, blocks: &[JordanBlock]) -> ComplexMatrix {
    let mut d = ComplexMatrix::zeros(n, n);
    for b in blocks {
        for k in 0..b.length {
            d[(b.start + k, b.start + k)] = b.eigenvalue;
            if k + 1 < b.length {
                d[(b.start + k, b.start + k + 1)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    d
}

pub(crate) fn flip_matrix(n: usize, blocks: &[JordanBlock]) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(n, n);
    for b in blocks {
        for k in 0..b.length {
            j[(b.start + k, b.start + b.length - 1 - k)] = Complex64::new(1.0, 0.0);
        }
    }
    j
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenCluster {
    pub representative: Complex64,
    pub multiplicity: usize,
}

/// Single-linkage clustering with linking distance
/// `cluster_tol * (1 + max |eig|)`; representatives are cluster means.
/// Clusters are returned in order of their first member.
pub fn cluster_eigenvalues(eigs: &[Complex64], cluster_tol: f64) -> Vec<EigenCluster> {
    let n = eigs.len();
    let scale = eigs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let link = cluster_tol * (1.0 + scale);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eigs[i] - eigs[j]).norm() <= link {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut order: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if members[r].is_empty() {
            order.push(r);
        }
        members[r].push(i);
    }
    order
        .into_iter()
        .map(|r| {
            let m = &members[r];
            let sum: Complex64 = m.iter().map(|&i| eigs[i]).sum();
            EigenCluster {
                representative: sum / m.len() as f64,
                multiplicity: m.len(),
            }
        })
        .collect()
}

/// A Jordan chain, eigenvector first and series head last.
pub type JordanChain = Vec<Vec<Complex64>>;

/// Jordan chains of `m` for the eigenvalue cluster at `lambda`, longest
/// first.
pub fn jordan_chains(
    m: &ComplexMatrix,
    lambda: Complex64,
    multiplicity: usize,
    rank_tol: f64,
) -> Result<Vec<JordanChain>, JordanError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    if multiplicity == 0 {
        return Err(JordanError::ZeroMultiplicity);
    }
    let n = m.rows();
    let a = m.shift_diagonal(-lambda);
    let norm_m = svd(m).singular_values.first().copied().unwrap_or(0.0);
    let norm_a = svd(&a).singular_values.first().copied().unwrap_or(0.0);
    let growth = norm_a.max(rank_tol * norm_m);

    // Null spaces of A^k, k = 0..=k_max.
    let mut nullities = vec![0usize];
    let mut null_bases: Vec<Vec<Vec<Complex64>>> = vec![Vec::new()];
    let mut power = ComplexMatrix::identity(n);
    let mut k = 0;
    while k < multiplicity {
        k += 1;
        power = &power * &a;
        let threshold = rank_tol * norm_m * growth.powi(k as i32 - 1);
        let basis = svd(&power).null_space(threshold);
        let nullity = basis.len();
        nullities.push(nullity);
        null_bases.push(basis);
        if nullity >= multiplicity || nullity == nullities[k - 1] {
            break;
        }
    }
    let k_max = k;
    let inconsistent = || JordanError::InconsistentRankProfile {
        lambda,
        multiplicity,
        nullities: nullities.clone(),
    };
    if nullities[k_max] != multiplicity {
        return Err(inconsistent());
    }
    // Weyr characteristic: blocks of length >= k.
    let weyr: Vec<usize> = (1..=k_max).map(|k| nullities[k] - nullities[k - 1]).collect();
    if weyr.windows(2).any(|w| w[1] > w[0]) || weyr.contains(&0) {
        return Err(inconsistent());
    }

    let mut chains: Vec<JordanChain> = Vec::new();
    for level in (1..=k_max).rev() {
        let longer = if level < k_max { weyr[level] } else { 0 };
        let new_heads = weyr[level - 1] - longer;
        if new_heads == 0 {
            continue;
        }
        // Vectors already present at this level from longer chains.
        let mut span: Vec<Vec<Complex64>> = null_bases[level - 1].clone();
        for chain in &chains {
            span.push(chain[level - 1].clone());
        }
        let q = orthonormalize(&span, 1e-10);
        let projected: Vec<Vec<Complex64>> = null_bases[level].iter().map(|v| project_out(v, &q)).collect();
        let pm = ComplexMatrix::from_columns(n, &projected);
        let dec = svd(&pm);
        for j in 0..new_heads {
            let head = dec.u.column(j);
            if dec.singular_values[j] <= rank_tol {
                return Err(inconsistent());
            }
            let mut chain = vec![head];
            for _ in 1..level {
                let next = a.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            chains.push(chain);
        }
    }
    Ok(chains)
}

// A length-L block splits under rounding into a star of radius about
// (n eps |M|)^(1/L), which exceeds any sensible linking distance once L >= 3.
// At radius (c n eps)^(1/k) for growing k, neighbouring clusters are grouped
// and a group is kept only if it carries a consistent, genuinely defective
// chain structure at its mean.
fn merge_defective_clusters(
    m: &ComplexMatrix,
    mut clusters: Vec<EigenCluster>,
    scale: f64,
    rank_tol: f64,
) -> Vec<EigenCluster> {
    let n = m.rows();
    let unit = 1e3 * n as f64 * f64::EPSILON;
    for k in 2..=n {
        if clusters.len() < 2 {
            break;
        }
        let radius = unit.powf(1.0 / k as f64) * (1.0 + scale);
        let reps: Vec<Complex64> = clusters.iter().map(|c| c.representative).collect();
        let groups = link_groups(&reps, radius);
        let mut next = Vec::with_capacity(clusters.len());
        for g in groups {
            if g.len() == 1 {
                next.push(clusters[g[0]]);
                continue;
            }
            let multiplicity: usize = g.iter().map(|&i| clusters[i].multiplicity).sum();
            let mean = g
                .iter()
                .map(|&i| clusters[i].representative * clusters[i].multiplicity as f64)
                .sum::<Complex64>()
                / multiplicity as f64;
            let defective = jordan_chains(m, mean, multiplicity, rank_tol)
                .map(|chains| chains.iter().any(|c| c.len() > 1))
                .unwrap_or(false);
            if defective {
                next.push(EigenCluster {
                    representative: mean,
                    multiplicity,
                });
            } else {
                next.extend(g.iter().map(|&i| clusters[i]));
            }
        }
        clusters = next;
    }
    clusters
}

// Single-linkage groups of points, each group in index order.
fn link_groups(points: &[Complex64], radius: f64) -> Vec<Vec<usize>> {
    let mut group = vec![usize::MAX; points.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..points.len() {
        if group[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        group[start] = id;
        let mut members = vec![start];
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            for j in 0..points.len() {
                if group[j] == usize::MAX && (points[i] - points[j]).norm() <= radius {
                    group[j] = id;
                    members.push(j);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Full decomposition: blocks ordered by descending `|D|`, then descending
/// length, then ascending argument of the eigenvalue.
pub fn jordan_decompose(
    m: &ComplexMatrix,
    cluster_tol: f64,
    rank_tol: f64,
) -> Result<JordanDecomposition, JordanError> {
    let eigs = linalg::eigenvalues(m)?;
    let n = m.rows();
    let scale = eigs.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let clusters = merge_defective_clusters(m, cluster_eigenvalues(&eigs, cluster_tol), scale, rank_tol);
    let same_abs = cluster_tol * (1.0 + scale);

    let mut found: Vec<(Complex64, JordanChain)> = Vec::new();
    for cl in &clusters {
        for chain in jordan_chains(m, cl.representative, cl.multiplicity, rank_tol)? {
            found.push((cl.representative, chain));
        }
    }
    found.sort_by(|(da, ca), (db, cb)| {
        let (ma, mb) = (da.norm(), db.norm());
        let by_abs = if (ma - mb).abs() <= same_abs {
            Ordering::Equal
        } else {
            mb.partial_cmp(&ma).unwrap_or(Ordering::Equal)
        };
        by_abs
            .then(cb.len().cmp(&ca.len()))
            .then(da.arg().partial_cmp(&db.arg()).unwrap_or(Ordering::Equal))
    });

    let mut w = ComplexMatrix::zeros(n, n);
    let mut blocks = Vec::with_capacity(found.len());
    let mut col = 0;
    for (id, (lambda, chain)) in found.into_iter().enumerate() {
        blocks.push(JordanBlock {
            id,
            eigenvalue: lambda,
            length: chain.len(),
            start: col,
        });
        for v in chain {
            w.set_column(col, &v);
            col += 1;
        }
    }
    if n > 0 {
        let s = svd(&w).singular_values;
        let (hi, lo) = (s[0], s[n - 1]);
        if !(lo > rank_tol * hi) {
            return Err(JordanError::SingularBasis {
                condition: if lo > 0.0 { hi / lo } else { f64::INFINITY },
            });
        }
    }
    Ok(JordanDecomposition::from_parts(m.clone(), w, blocks))
}

/// The `L x L` upper-triangular Toeplitz matrix with first row `alpha`.
/// Such matrices commute with a Jordan block and re-head its series without
/// changing the Jordan form.
pub fn series_head_transform(alpha: &[Complex64]) -> Result<ComplexMatrix, JordanError> {
    if alpha.is_empty() || alpha[0].norm() == 0.0 {
        return Err(JordanError::InvalidTransform);
    }
    Ok(UpperToeplitz::new(alpha.to_vec()).to_matrix())
}

/// Polynomial `sum_k c_k N^k` in the nilpotent shift `N` of an `L x L`
/// Jordan block, stored by its coefficients. Products commute and are
/// truncated at `N^L = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperToeplitz {
    coeffs: Vec<Complex64>,
}

impl UpperToeplitz {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn identity(len: usize) -> Self {
        Self::scalar(len, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(len: usize, value: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        if len > 0 {
            coeffs[0] = value;
        }
        Self { coeffs }
    }

    /// `lambda I + N`, the Jordan block itself.
    pub fn jordan_block(len: usize, lambda: Complex64) -> Self {
        let mut t = Self::scalar(len, lambda);
        if len > 1 {
            t.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        t
    }

    /// Reads the parameters off a square matrix by averaging each
    /// superdiagonal; also returns the largest departure from Toeplitz
    /// upper-triangular structure.
    pub fn from_matrix(m: &ComplexMatrix) -> (Self, f64) {
        let len = m.rows();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let sum: Complex64 = (0..len - k).map(|i| m[(i, i + k)]).sum();
            *c = sum / (len - k) as f64;
        }
        let t = Self { coeffs };
        let dev = t.to_matrix().max_abs_diff(m);
        (t, dev)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let l = self.len();
        ComplexMatrix::from_fn(l, l, |i, j| {
            if j >= i {
                self.coeffs[j - i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn mul(&self, other: &UpperToeplitz) -> UpperToeplitz {
        assert_eq!(self.len(), other.len());
        let l = self.len();
        let mut out = vec![Complex64::new(0.0, 0.0); l];
        for i in 0..l {
            for j in 0..l - i {
                out[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        UpperToeplitz { coeffs: out }
    }

    pub fn conj(&self) -> UpperToeplitz {
        UpperToeplitz {
            coeffs: self.coeffs.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Inverse by forward substitution; `None` when the leading coefficient
    /// vanishes.
    pub fn inverse(&self) -> Option<UpperToeplitz> {
        let l = self.len();
        let a0 = *self.coeffs.first()?;
        if a0.norm() == 0.0 {
            return None;
        }
        let mut inv = vec![Complex64::new(0.0, 0.0); l];
        inv[0] = a0.inv();
        for k in 1..l {
            let s: Complex64 = (1..=k).map(|j| self.coeffs[j] * inv[k - j]).sum();
            inv[k] = -s / a0;
        }
        Some(UpperToeplitz { coeffs: inv })
    }

    /// Square root with principal branch for the leading coefficient; `None`
    /// when the leading coefficient vanishes.
    pub fn sqrt(&self) -> Option<UpperToeplitz> {
        let l = self.len();
        let a0 = *self.coeffs.first()?;
        if a0.norm() == 0.0 {
            return None;
        }
        // r * r = a, solved coefficient by coefficient.
        let mut r = vec![Complex64::new(0.0, 0.0); l];
        r[0] = a0.sqrt();
        for k in 1..l {
            let s: Complex64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (self.coeffs[k] - s) / (2.0 * r[0]);
        }
        Some(UpperToeplitz { coeffs: r })
    }

    pub fn max_abs_diff(&self, other: &UpperToeplitz) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }
}

fn project_out(v: &[Complex64], q: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for _ in 0..2 {
        for b in q {
            let dot: Complex64 = b.iter().zip(&out).map(|(x, y)| x.conj() * y).sum();
            for (o, x) in out.iter_mut().zip(b) {
                *o -= dot * x;
            }
        }
    }
    out
}

/// Gram-Schmidt with re-orthogonalization; drops vectors whose remainder
/// falls below `drop_tol` relative to their original norm.
pub(crate) fn orthonormalize(vectors: &[Vec<Complex64>], drop_tol: f64) -> Vec<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let r = project_out(v, &q);
        let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > drop_tol * norm0 {
            q.push(r.into_iter().map(|z| z / norm).collect());
        }
    }
    q
}
