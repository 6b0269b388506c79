use crate::blocksparse::{
    block_coherence, min_block_singular, signal_stats, BlockSparseSignal, SensingMatrix,
};
use crate::{Error, Result};

/// Evaluation of the sufficient condition under which ZD-GroTh declares an
/// unused block:
///
/// ```text
/// delta < (sigma_min / mu_B + 1) / 2 - ||n|| / (mu_B ||x_min||)
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GuaranteeReport {
    /// Dynamic-range ratio `delta` of the used blocks.
    pub lhs: f64,
    /// Threshold; `+inf` when the blocks are mutually orthogonal.
    pub rhs: f64,
    pub holds: bool,
    pub coherence: f64,
    pub min_singular: f64,
    pub min_used_norm: f64,
    pub used_norm_sum: f64,
    pub noise_norm: f64,
}

/// Bounds on the two sides of the ZD-GroTh success condition
/// `min_{unused} lambda_i(y) < min_{used} lambda_j(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationBounds {
    /// Upper bound on the smallest correlation over unused blocks.
    pub unused_upper: f64,
    /// Lower bound on the smallest correlation over used blocks (may be
    /// negative, i.e. vacuous).
    pub used_lower: f64,
}

impl GuaranteeReport {
    pub fn correlation_bounds(&self) -> CorrelationBounds {
        let mu = self.coherence;
        CorrelationBounds {
            unused_upper: mu * self.used_norm_sum + self.noise_norm,
            used_lower: self.min_singular * self.min_used_norm - mu * self.used_norm_sum
                + mu * self.min_used_norm
                - self.noise_norm,
        }
    }
}

pub fn check_zd_guarantee(
    a: &SensingMatrix,
    x: &BlockSparseSignal,
    noise_norm: f64,
) -> Result<GuaranteeReport> {
    if x.partition() != a.partition() {
        return Err(Error::DimensionMismatch(
            "signal and matrix partitions differ".into(),
        ));
    }
    if !(noise_norm >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "noise norm must be nonnegative, got {noise_norm}"
        )));
    }
    if x.unused().is_empty() {
        return Err(Error::NoUnusedBlocks);
    }
    let stats = signal_stats(x)?;
    let coherence = block_coherence(a)?;
    let min_singular = min_block_singular(a);
    let used_norm_sum: f64 = stats.used_norms.values().sum();
    let lhs = stats.dynamic_ratio;
    let (rhs, holds) = if coherence == 0.0 {
        (f64::INFINITY, true)
    } else {
        let rhs =
            0.5 * (min_singular / coherence + 1.0) - noise_norm / (coherence * stats.min_used_norm);
        (rhs, lhs < rhs)
    };
    Ok(GuaranteeReport {
        lhs,
        rhs,
        holds,
        coherence,
        min_singular,
        min_used_norm: stats.min_used_norm,
        used_norm_sum,
        noise_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocksparse::{BlockPartition, CMatrix, CVector};
    use num_complex::Complex64;

    /// Two orthonormal bases of C^4 (identity and unitary DFT) side by side,
    /// blocks of one column.
    fn identity_and_dft() -> SensingMatrix {
        let n = 4;
        let mut m = CMatrix::zeros(n, 2 * n);
        for k in 0..n {
            m[(k, k)] = Complex64::new(1.0, 0.0);
            for r in 0..n {
                let phase = -2.0 * std::f64::consts::PI * (r * k) as f64 / n as f64;
                m[(r, n + k)] = Complex64::from_polar(0.5, phase);
            }
        }
        SensingMatrix::new(m, BlockPartition::uniform(2 * n, 1).unwrap()).unwrap()
    }

    fn signal(a: &SensingMatrix, used: &[(usize, f64)]) -> BlockSparseSignal {
        let mut v = CVector::zeros(a.cols());
        for &(i, amp) in used {
            v[i] = Complex64::new(0.0, amp);
        }
        BlockSparseSignal::new(v, a.partition().clone()).unwrap()
    }

    #[test]
    fn reduces_to_bomp_condition_for_orthonormal_equal_power() {
        let a = identity_and_dft();
        let r = check_zd_guarantee(&a, &signal(&a, &[(0, 2.0)]), 0.0).unwrap();
        assert!((r.coherence - 0.5).abs() < 1e-12);
        assert!((r.min_singular - 1.0).abs() < 1e-12);
        // K < (1/mu + 1)/2 = 1.5
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert!((r.rhs - 1.5).abs() < 1e-12);
        assert!(r.holds);
        let r = check_zd_guarantee(&a, &signal(&a, &[(0, 2.0), (5, 2.0)]), 0.0).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-12);
        assert!(!r.holds);
    }

    #[test]
    fn noise_breaks_the_condition() {
        let a = identity_and_dft();
        let x = signal(&a, &[(1, 1.0)]);
        assert!(check_zd_guarantee(&a, &x, 0.0).unwrap().holds);
        let r = check_zd_guarantee(&a, &x, 0.5).unwrap();
        assert!(r.rhs <= r.lhs);
        assert!(!r.holds);
    }

    #[test]
    fn orthogonal_blocks_always_hold() {
        let a = SensingMatrix::new(
            CMatrix::identity(6, 6),
            BlockPartition::uniform(3, 2).unwrap(),
        )
        .unwrap();
        let mut v = CVector::zeros(6);
        v[0] = Complex64::new(100.0, 0.0);
        v[2] = Complex64::new(1e-3, 0.0);
        let x = BlockSparseSignal::new(v, a.partition().clone()).unwrap();
        let r = check_zd_guarantee(&a, &x, 10.0).unwrap();
        assert_eq!(r.coherence, 0.0);
        assert!(r.holds);
        assert!(r.rhs.is_infinite());
    }

    #[test]
    fn needs_used_and_unused_blocks() {
        let a = identity_and_dft();
        assert!(matches!(
            check_zd_guarantee(&a, &signal(&a, &[]), 0.0),
            Err(Error::NoUsedBlocks)
        ));
        let all: Vec<(usize, f64)> = (0..8).map(|i| (i, 1.0)).collect();
        assert!(matches!(
            check_zd_guarantee(&a, &signal(&a, &all), 0.0),
            Err(Error::NoUnusedBlocks)
        ));
    }
}
