//! Pairing of degenerate Jordan blocks and decoupling of the pairs.
//!
//! Blocks are grouped into classes of equal eigenvalue. On a class, `S` is
//! invertible (away from `D = 0`) and the shift `N` is self-adjoint for the
//! bilinear form `sigma(x, y) = x^T S^-1 y`. Two chains are paired when their
//! heads couple at top order, `sigma(h_i, N^(L-1) h_j) != 0`; the remaining
//! heads are then projected onto the `sigma`-complement of the pair, which is
//! `N`-invariant, so the chains regenerated from them stay decoupled.

use num_complex::Complex64;

use super::{CanonicalError, Tolerances};
use crate::jordan::{JordanBlock, JordanDecomposition};
use crate::linalg::{inverse, AntisymmetricMatrix, ComplexMatrix, Lu};

/// Result of [`pair_blocks`]. `basis` is the decoupled Jordan basis: every
/// pair occupies adjacent column ranges (`I` then `I~`), null-sector blocks
/// come last. Block ids refer to `basis.blocks`.
#[derive(Debug, Clone)]
pub struct BlockPairing {
    pub basis: JordanDecomposition,
    pub pairs: Vec<(usize, usize)>,
    pub null_sector: Vec<usize>,
    /// Indices into `pairs` of zero-eigenvalue pairs whose coupling form was
    /// singular; these were paired by order without decoupling.
    pub unresolved: Vec<usize>,
}

impl BlockPairing {
    pub fn null_sector_dimension(&self) -> usize {
        self.null_sector.iter().map(|&b| self.basis.blocks[b].length).sum()
    }
}

struct Class {
    blocks: Vec<usize>,
    // (offset, length) of each block inside the class coordinates.
    layout: Vec<(usize, usize)>,
    columns: Vec<usize>,
    eigenvalue: Complex64,
}

struct Chain {
    head: Vec<Complex64>,
    len: usize,
}

enum Outcome {
    Pair(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>, bool),
    Null(Vec<Complex64>),
}

pub fn pair_blocks(
    c: &AntisymmetricMatrix,
    decomp: &JordanDecomposition,
    tols: &Tolerances,
) -> Result<BlockPairing, CanonicalError> {
    let n = decomp.dim();
    if c.dim() != n {
        return Err(CanonicalError::DimensionMismatch {
            left: c.dim(),
            right: n,
        });
    }
    let winv = inverse(&decomp.w, 0.0)?;
    let s = &(&winv * &c.matrix().adjoint()) * &winv.transpose();

    let scale = decomp.blocks.iter().fold(0.0f64, |m, b| m.max(b.eigenvalue.norm()));
    let link = tols.cluster * (1.0 + scale);
    let classes = classes(&decomp.blocks, link);

    let mut pairs_out: Vec<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>, Complex64, bool)> = Vec::new();
    let mut null_out: Vec<Vec<Complex64>> = Vec::new();
    for class in &classes {
        let zero = class.eigenvalue.norm() <= link;
        let outcomes = pair_class(class, &s, zero, &decomp.blocks, tols)?;
        let lift = |v: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (k, &col) in class.columns.iter().enumerate() {
                if v[k] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (i, o) in out.iter_mut().enumerate() {
                    *o += decomp.w[(i, col)] * v[k];
                }
            }
            out
        };
        for o in outcomes {
            match o {
                Outcome::Pair(x, y, unresolved) => {
                    let x = x.iter().map(|v| lift(v)).collect();
                    let y = y.iter().map(|v| lift(v)).collect();
                    pairs_out.push((x, y, class.eigenvalue, unresolved));
                }
                Outcome::Null(v) => null_out.push(lift(&v)),
            }
        }
    }

    let mut w = ComplexMatrix::zeros(n, n);
    let mut blocks = Vec::new();
    let mut pairs = Vec::new();
    let mut unresolved = Vec::new();
    let mut col = 0;
    let mut push_block =
        |w: &mut ComplexMatrix, blocks: &mut Vec<JordanBlock>, chain: &[Vec<Complex64>], d: Complex64| {
            let id = blocks.len();
            blocks.push(JordanBlock {
                id,
                eigenvalue: d,
                length: chain.len(),
                start: col,
            });
            for v in chain {
                w.set_column(col, v);
                col += 1;
            }
            id
        };
    for (p, (x, y, d, flag)) in pairs_out.iter().enumerate() {
        let i = push_block(&mut w, &mut blocks, x, *d);
        let j = push_block(&mut w, &mut blocks, y, *d);
        pairs.push((i, j));
        if *flag {
            unresolved.push(p);
        }
    }
    let mut null_sector = Vec::new();
    for v in &null_out {
        null_sector.push(push_block(
            &mut w,
            &mut blocks,
            std::slice::from_ref(v),
            Complex64::new(0.0, 0.0),
        ));
    }
    let basis = JordanDecomposition::from_parts(decomp.matrix().clone(), w, blocks);
    Ok(BlockPairing {
        basis,
        pairs,
        null_sector,
        unresolved,
    })
}

fn classes(blocks: &[JordanBlock], link: f64) -> Vec<Class> {
    let mut out: Vec<Class> = Vec::new();
    for (b, blk) in blocks.iter().enumerate() {
        let found = out.iter_mut().find(|c| (c.eigenvalue - blk.eigenvalue).norm() <= link);
        let class = match found {
            Some(c) => c,
            None => {
                out.push(Class {
                    blocks: Vec::new(),
                    layout: Vec::new(),
                    columns: Vec::new(),
                    eigenvalue: blk.eigenvalue,
                });
                out.last_mut().unwrap()
            }
        };
        class.layout.push((class.columns.len(), blk.length));
        class.blocks.push(b);
        class.columns.extend(blk.columns());
    }
    out
}

fn shift(layout: &[(usize, usize)], x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); x.len()];
    for &(o, l) in layout {
        for i in 0..l.saturating_sub(1) {
            y[o + i] = x[o + i + 1];
        }
    }
    y
}

// Eigenvector first, head last.
fn chain_vectors(layout: &[(usize, usize)], chain: &Chain) -> Vec<Vec<Complex64>> {
    let mut v = vec![chain.head.clone()];
    for _ in 1..chain.len {
        let next = shift(layout, v.last().unwrap());
        v.push(next);
    }
    v.reverse();
    v
}

fn bilinear(sigma: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let sy = sigma.mul_vec(y);
    x.iter().zip(&sy).map(|(a, b)| a * b).sum()
}

fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn pair_class(
    class: &Class,
    s: &ComplexMatrix,
    zero: bool,
    blocks: &[JordanBlock],
    tols: &Tolerances,
) -> Result<Vec<Outcome>, CanonicalError> {
    let nc = class.columns.len();
    let layout = &class.layout;
    let mut remaining: Vec<(Chain, usize)> = class
        .layout
        .iter()
        .zip(&class.blocks)
        .map(|(&(o, l), &b)| {
            let mut head = vec![Complex64::new(0.0, 0.0); nc];
            head[o + l - 1] = Complex64::new(1.0, 0.0);
            (Chain { head, len: l }, b)
        })
        .collect();
    let mut out = Vec::new();

    let s_c = s.select(&class.columns, &class.columns);
    let sigma = Lu::new(&s_c, tols.rank).ok().map(|lu| lu.inverse());
    let sigma = match sigma {
        Some(sig) => sig,
        None if zero => {
            return pair_by_order(remaining, layout, blocks);
        }
        None => {
            return Err(CanonicalError::DegenerateCoupling {
                eigenvalue: class.eigenvalue,
                length: remaining.iter().map(|(c, _)| c.len).max().unwrap_or(0),
                coupling: 0.0,
            });
        }
    };
    let sigma_scale = sigma.max_abs();

    loop {
        let l = remaining.iter().map(|(c, _)| c.len).max().unwrap_or(0);
        if l == 0 || (zero && l == 1) {
            break;
        }
        let group: Vec<usize> = (0..remaining.len()).filter(|&i| remaining[i].0.len == l).collect();
        if group.len() < 2 {
            let (_, b) = remaining[group[0]];
            return Err(CanonicalError::UnpairedBlock {
                block: b,
                eigenvalue: blocks[b].eigenvalue,
                length: l,
            });
        }
        let tops: Vec<Vec<Complex64>> = group
            .iter()
            .map(|&i| {
                let mut v = remaining[i].0.head.clone();
                for _ in 1..l {
                    v = shift(layout, &v);
                }
                v
            })
            .collect();
        let mut best = (0, 0, -1.0f64);
        for a in 0..group.len() {
            for b in a + 1..group.len() {
                let h = bilinear(&sigma, &remaining[group[a]].0.head, &tops[b]);
                let denom = sigma_scale * norm(&remaining[group[a]].0.head) * norm(&tops[b]);
                let rel = if denom > 0.0 { h.norm() / denom } else { 0.0 };
                if rel > best.2 {
                    best = (a, b, rel);
                }
            }
        }
        if best.2 <= tols.residual {
            if zero {
                let mut tail = pair_by_order(remaining, layout, blocks)?;
                out.append(&mut tail);
                return Ok(out);
            }
            return Err(CanonicalError::DegenerateCoupling {
                eigenvalue: class.eigenvalue,
                length: l,
                coupling: best.2,
            });
        }
        let (ia, ib) = (group[best.0], group[best.1]);
        let x = chain_vectors(layout, &remaining[ia].0);
        let y = chain_vectors(layout, &remaining[ib].0);

        // Project the other heads onto the sigma-complement of span(x, y).
        let basis: Vec<Vec<Complex64>> = x.iter().chain(&y).cloned().collect();
        let bm = ComplexMatrix::from_columns(nc, &basis);
        let sb = &sigma * &bm;
        let gram = &bm.transpose() * &sb;
        let gram_lu = Lu::new(&gram, 0.0)?;
        let mut next = Vec::new();
        for (k, (chain, b)) in remaining.into_iter().enumerate() {
            if k == ia || k == ib {
                continue;
            }
            // coefficients = gram^-1 B^T sigma h
            let rhs: Vec<Complex64> = (0..basis.len())
                .map(|j| (0..nc).map(|r| sb[(r, j)] * chain.head[r]).sum())
                .collect();
            let coef = gram_lu.solve_vec(&rhs);
            let mut head = chain.head.clone();
            for (j, cj) in coef.iter().enumerate() {
                for (h, bv) in head.iter_mut().zip(&basis[j]) {
                    *h -= cj * bv;
                }
            }
            next.push((Chain { head, len: chain.len }, b));
        }
        remaining = next;
        out.push(Outcome::Pair(x, y, false));
    }
    for (chain, _) in remaining {
        out.push(Outcome::Null(chain.head));
    }
    Ok(out)
}

// Zero class without a usable coupling form: pair equal-length chains in
// order, leave length-1 chains in the null sector.
fn pair_by_order(
    mut remaining: Vec<(Chain, usize)>,
    layout: &[(usize, usize)],
    blocks: &[JordanBlock],
) -> Result<Vec<Outcome>, CanonicalError> {
    remaining.sort_by_key(|r| std::cmp::Reverse(r.0.len));
    let mut out = Vec::new();
    let mut i = 0;
    while i < remaining.len() {
        let (chain, b) = &remaining[i];
        if chain.len == 1 {
            out.push(Outcome::Null(chain.head.clone()));
            i += 1;
            continue;
        }
        match remaining.get(i + 1) {
            Some((partner, _)) if partner.len == chain.len => {
                out.push(Outcome::Pair(
                    chain_vectors(layout, chain),
                    chain_vectors(layout, partner),
                    true,
                ));
                i += 2;
            }
            _ => {
                return Err(CanonicalError::UnpairedBlock {
                    block: *b,
                    eigenvalue: blocks[*b].eigenvalue,
                    length: chain.len,
                })
            }
        }
    }
    Ok(out)
}
