use std::sync::OnceLock;

use nalgebra::DMatrixView;
use num_complex::Complex64;

use super::{hermitian_pseudo_inv_sqrt, BlockPartition, CMatrix, CVector};
use crate::{Error, Result};

/// Default relative eigenvalue floor of the pseudo inverse square root.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-10;

/// Complex `M x N` effective sensing matrix with a block layout on its
/// columns.
///
/// The per-block whitening factors `(A_i^H A_i)^(-1/2)` are computed on first
/// use and cached. Population of the cache is idempotent, so a shared
/// `SensingMatrix` may be used from several threads.
#[derive(Debug, Clone)]
pub struct SensingMatrix {
    entries: CMatrix,
    partition: BlockPartition,
    rank_tolerance: f64,
    whitening: Vec<OnceLock<CMatrix>>,
}

impl SensingMatrix {
    pub fn new(entries: CMatrix, partition: BlockPartition) -> Result<Self> {
        Self::with_rank_tolerance(entries, partition, DEFAULT_RANK_TOLERANCE)
    }

    pub fn with_rank_tolerance(
        entries: CMatrix,
        partition: BlockPartition,
        rank_tolerance: f64,
    ) -> Result<Self> {
        if entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(
                "sensing matrix has no rows".into(),
            ));
        }
        if entries.ncols() != partition.total_len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns but partition covers {}",
                entries.ncols(),
                partition.total_len()
            )));
        }
        if !(rank_tolerance > 0.0 && rank_tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "rank tolerance must lie in (0, 1), got {rank_tolerance}"
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("sensing matrix"));
        }
        let whitening = (0..partition.num_blocks())
            .map(|_| OnceLock::new())
            .collect();
        Ok(Self {
            entries,
            partition,
            rank_tolerance,
            whitening,
        })
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.num_blocks()
    }

    pub fn block(&self, i: usize) -> DMatrixView<'_, Complex64> {
        self.entries
            .columns(self.partition.offset(i), self.partition.size(i))
    }

    /// `(A_i^H A_i)^(-1/2)`, computed on first use.
    pub fn whitening(&self, i: usize) -> Result<&CMatrix> {
        self.partition.check_index(i)?;
        if let Some(w) = self.whitening[i].get() {
            return Ok(w);
        }
        let block = self.block(i);
        let gram = block.adjoint() * block;
        let w = hermitian_pseudo_inv_sqrt(&gram, self.rank_tolerance)
            .ok_or(Error::DegenerateBlock(i))?;
        // a concurrent writer stores an identical factor
        let _ = self.whitening[i].set(w);
        Ok(self.whitening[i].get().expect("whitening cache populated"))
    }

    /// Whitened correlations `||W_i A_i^H r||_2` for every block.
    pub fn correlations(&self, r: &CVector) -> Result<Vec<f64>> {
        self.check_measurement_len(r.len())?;
        let back = self.entries.ad_mul(r);
        (0..self.num_blocks())
            .map(|i| {
                let w = self.whitening(i)?;
                let part = back.rows_range(self.partition.range(i));
                Ok((w * part).norm())
            })
            .collect()
    }

    /// Concatenation of the selected blocks, in support order.
    pub fn support_columns(&self, support: &[usize]) -> CMatrix {
        let width: usize = support.iter().map(|&i| self.partition.size(i)).sum();
        let mut out = CMatrix::zeros(self.rows(), width);
        let mut col = 0;
        for &i in support {
            let n = self.partition.size(i);
            out.columns_mut(col, n).copy_from(&self.block(i));
            col += n;
        }
        out
    }

    pub(crate) fn check_measurement_len(&self, len: usize) -> Result<()> {
        if len != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "measurement has length {len} but matrix has {} rows",
                self.rows()
            )));
        }
        Ok(())
    }
}

/// Compressive measurements `y = A x + n`.
#[derive(Debug, Clone)]
pub struct MeasurementVector {
    pub values: CVector,
    /// Realised `||n||_2` when known (simulation).
    pub noise_norm: Option<f64>,
}

impl MeasurementVector {
    pub fn new(values: CVector) -> Self {
        Self {
            values,
            noise_norm: None,
        }
    }

    pub fn with_noise_norm(values: CVector, noise_norm: f64) -> Self {
        Self {
            values,
            noise_norm: Some(noise_norm),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_wrong_shapes_and_nan() {
        let p = BlockPartition::uniform(2, 2).unwrap();
        assert!(SensingMatrix::new(CMatrix::zeros(3, 5), p.clone()).is_err());
        assert!(SensingMatrix::new(CMatrix::zeros(0, 4), p.clone()).is_err());
        let mut m = CMatrix::identity(4, 4);
        m[(1, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(SensingMatrix::new(m, p), Err(Error::NonFinite(_))));
    }

    #[test]
    fn zero_block_is_degenerate() {
        let p = BlockPartition::uniform(2, 2).unwrap();
        let mut m = CMatrix::identity(4, 4);
        m[(2, 2)] = Complex64::new(0.0, 0.0);
        m[(3, 3)] = Complex64::new(0.0, 0.0);
        let a = SensingMatrix::new(m, p).unwrap();
        assert!(a.whitening(0).is_ok());
        assert!(matches!(a.whitening(1), Err(Error::DegenerateBlock(1))));
        assert!(a.whitening(2).is_err());
    }

    #[test]
    fn cache_is_shared_between_threads() {
        let p = BlockPartition::uniform(2, 2).unwrap();
        let a = SensingMatrix::new(CMatrix::identity(4, 4) * Complex64::new(2.0, 0.0), p).unwrap();
        let ws: Vec<CMatrix> = std::thread::scope(|s| {
            let hs: Vec<_> = (0..4)
                .map(|_| s.spawn(|| a.whitening(1).unwrap().clone()))
                .collect();
            hs.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for w in &ws {
            assert_eq!(w, &ws[0]);
        }
    }
}
