use nalgebra::DMatrixView;
use num_complex::Complex64;

use super::{BlockPartition, CMatrix, CVector, MeasurementVector, SensingMatrix};
use crate::{Error, Result};

/// Relative singular-value floor of the least-squares pseudo inverse.
const LS_RELATIVE_TOLERANCE: f64 = 1e-10;

/// Pseudo inverse square root `V diag(d^(-1/2)) V^H` of a Hermitian positive
/// semidefinite matrix, with eigenvalues below `rank_tolerance * d_max`
/// treated as zero. Returns `None` when the matrix is zero.
pub fn hermitian_pseudo_inv_sqrt(gram: &CMatrix, rank_tolerance: f64) -> Option<CMatrix> {
    let n = gram.nrows();
    // symmetrise so the eigensolver sees an exactly Hermitian input
    let herm = (gram + gram.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let d_max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if !(d_max > 0.0) {
        return None;
    }
    let floor = rank_tolerance * d_max;
    let mut scaled = eig.eigenvectors.clone();
    for (k, &d) in eig.eigenvalues.iter().enumerate() {
        let s = if d > floor { d.sqrt().recip() } else { 0.0 };
        scaled.column_mut(k).scale_mut(s);
    }
    let mut w = &scaled * eig.eigenvectors.adjoint();
    // remove rounding asymmetry
    for r in 0..n {
        for c in r + 1..n {
            let avg = (w[(r, c)] + w[(c, r)].conj()) * 0.5;
            w[(r, c)] = avg;
            w[(c, r)] = avg.conj();
        }
        w[(r, r)] = Complex64::new(w[(r, r)].re, 0.0);
    }
    Some(w)
}

/// Whitening factor `(B^H B)^(-1/2)` of a single block.
pub fn whitening_factor(block: DMatrixView<'_, Complex64>, rank_tolerance: f64) -> Result<CMatrix> {
    if block.is_empty() {
        return Err(Error::InvalidArgument("empty block".into()));
    }
    if !(rank_tolerance > 0.0 && rank_tolerance < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must lie in (0, 1), got {rank_tolerance}"
        )));
    }
    if block.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("block"));
    }
    let gram = block.adjoint() * block;
    hermitian_pseudo_inv_sqrt(&gram, rank_tolerance).ok_or(Error::DegenerateBlock(0))
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let h = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .sqrt()
}

/// Normalised correlation `||(A_i^H A_i)^(-1/2) A_i^H r||_2`.
pub fn block_correlation(a: &SensingMatrix, i: usize, r: &CVector) -> Result<f64> {
    a.partition().check_index(i)?;
    a.check_measurement_len(r.len())?;
    let w = a.whitening(i)?;
    Ok((w * a.block(i).ad_mul(r)).norm())
}

/// Block mutual coherence: the maximum over ordered pairs `i != j` of
/// `||(A_i^H A_i)^(-1/2) A_i^H A_j||_2`.
pub fn block_coherence(a: &SensingMatrix) -> Result<f64> {
    let whiteners = (0..a.num_blocks())
        .map(|i| a.whitening(i).map(|w| Some(w.clone())))
        .collect::<Result<Vec<_>>>()?;
    let gram = a.entries().ad_mul(a.entries());
    Ok(
        max_cross_coherence(&whiteners, &gram, a.partition(), f64::INFINITY)
            .expect("unbounded scan always completes"),
    )
}

/// Block coherence evaluated from a Gram matrix `A^H A`, treating all-zero
/// blocks as contributing nothing. Returns `None` as soon as the coherence is
/// known to exceed `abort_above`.
pub(crate) fn coherence_from_gram(
    gram: &CMatrix,
    partition: &BlockPartition,
    rank_tolerance: f64,
    abort_above: f64,
) -> Option<f64> {
    let whiteners: Vec<Option<CMatrix>> = (0..partition.num_blocks())
        .map(|i| {
            let r = partition.range(i);
            let g = gram
                .view((r.start, r.start), (r.len(), r.len()))
                .into_owned();
            hermitian_pseudo_inv_sqrt(&g, rank_tolerance)
        })
        .collect();
    max_cross_coherence(&whiteners, gram, partition, abort_above)
}

fn max_cross_coherence(
    whiteners: &[Option<CMatrix>],
    gram: &CMatrix,
    partition: &BlockPartition,
    abort_above: f64,
) -> Option<f64> {
    const SLACK: f64 = 1e-12;
    let b = partition.num_blocks();
    let mut best = 0.0f64;
    for i in 0..b {
        let Some(w) = &whiteners[i] else { continue };
        let ri = partition.range(i);
        for j in (0..b).filter(|&j| j != i) {
            let rj = partition.range(j);
            let cross = w * gram.view((ri.start, rj.start), (ri.len(), rj.len()));
            // ||C||_F bounds ||C||_2 from above, the largest column norm from below
            if cross.norm() * (1.0 + SLACK) <= best {
                continue;
            }
            let col_max = cross.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
            if col_max * (1.0 - SLACK) > abort_above {
                return None;
            }
            let s = spectral_norm(&cross);
            if s > abort_above {
                return None;
            }
            best = best.max(s);
        }
    }
    Some(best)
}

/// Smallest singular value over all blocks; zero when a block is wider than
/// the matrix is tall.
pub fn min_block_singular(a: &SensingMatrix) -> f64 {
    (0..a.num_blocks())
        .map(|i| {
            if a.partition().size(i) > a.rows() {
                0.0
            } else {
                a.block(i)
                    .into_owned()
                    .singular_values()
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min)
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Minimum-norm least-squares coefficients `A_Omega^+ y` over the selected
/// blocks, concatenated in support order.
pub fn block_least_squares(
    a: &SensingMatrix,
    support: &[usize],
    y: &MeasurementVector,
) -> Result<CVector> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    for (k, &i) in support.iter().enumerate() {
        a.partition().check_index(i)?;
        if support[..k].contains(&i) {
            return Err(Error::InvalidArgument(format!(
                "block {i} appears twice in the support"
            )));
        }
    }
    a.check_measurement_len(y.len())?;
    let sub = a.support_columns(support);
    let width = sub.ncols();
    let svd = sub.svd(true, true);
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if s_max == 0.0 {
        return Ok(CVector::zeros(width));
    }
    svd.solve(&y.values, LS_RELATIVE_TOLERANCE * s_max)
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}
