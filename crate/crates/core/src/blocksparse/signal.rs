use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{BlockPartition, CVector};
use crate::{Error, Result};

/// Relative block-norm threshold below which a block counts as unused.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-12;

/// A complex frequency-domain vector together with its block layout.
///
/// A block is *used* when its l2-norm exceeds `zero_tolerance`.
#[derive(Debug, Clone)]
pub struct BlockSparseSignal {
    values: CVector,
    partition: BlockPartition,
    zero_tolerance: f64,
}

impl BlockSparseSignal {
    /// Uses `1e-12 * max block norm` as the zero tolerance.
    pub fn new(values: CVector, partition: BlockPartition) -> Result<Self> {
        check_len(&values, &partition)?;
        let max_norm = (0..partition.num_blocks())
            .map(|i| values.rows_range(partition.range(i)).norm())
            .fold(0.0, f64::max);
        Ok(Self {
            values,
            partition,
            zero_tolerance: DEFAULT_ZERO_TOLERANCE * max_norm,
        })
    }

    pub fn with_tolerance(
        values: CVector,
        partition: BlockPartition,
        zero_tolerance: f64,
    ) -> Result<Self> {
        check_len(&values, &partition)?;
        if !(zero_tolerance >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zero tolerance must be nonnegative, got {zero_tolerance}"
            )));
        }
        Ok(Self {
            values,
            partition,
            zero_tolerance,
        })
    }

    pub fn values(&self) -> &CVector {
        &self.values
    }

    pub fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    pub fn zero_tolerance(&self) -> f64 {
        self.zero_tolerance
    }

    pub fn block(&self, i: usize) -> &[Complex64] {
        &self.values.as_slice()[self.partition.range(i)]
    }

    pub fn block_norm(&self, i: usize) -> f64 {
        self.block(i)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn block_norms(&self) -> Vec<f64> {
        (0..self.partition.num_blocks())
            .map(|i| self.block_norm(i))
            .collect()
    }

    pub fn is_used(&self, i: usize) -> bool {
        self.block_norm(i) > self.zero_tolerance
    }

    /// Indices of used blocks, ascending.
    pub fn used(&self) -> Vec<usize> {
        (0..self.partition.num_blocks())
            .filter(|&i| self.is_used(i))
            .collect()
    }

    /// Indices of unused blocks, ascending.
    pub fn unused(&self) -> Vec<usize> {
        (0..self.partition.num_blocks())
            .filter(|&i| !self.is_used(i))
            .collect()
    }
}

fn check_len(values: &CVector, partition: &BlockPartition) -> Result<()> {
    if values.len() != partition.total_len() {
        return Err(Error::DimensionMismatch(format!(
            "signal has length {} but partition covers {}",
            values.len(),
            partition.total_len()
        )));
    }
    Ok(())
}

/// Norm profile of the used blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalStats {
    pub used_norms: BTreeMap<usize, f64>,
    pub min_used_norm: f64,
    /// Sum of used-block norms over the weakest used-block norm.
    pub dynamic_ratio: f64,
}

pub fn signal_stats(x: &BlockSparseSignal) -> Result<SignalStats> {
    let used_norms: BTreeMap<usize, f64> =
        x.used().into_iter().map(|i| (i, x.block_norm(i))).collect();
    if used_norms.is_empty() {
        return Err(Error::NoUsedBlocks);
    }
    let min_used_norm = used_norms.values().copied().fold(f64::INFINITY, f64::min);
    let total: f64 = used_norms.values().sum();
    Ok(SignalStats {
        used_norms,
        min_used_norm,
        dynamic_ratio: total / min_used_norm,
    })
}
