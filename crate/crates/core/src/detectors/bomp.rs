use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blocksparse::{CMatrix, CVector, MeasurementVector, SensingMatrix};
use crate::{Error, Result};

/// Columns whose orthogonalised remainder falls below this fraction of their
/// norm are treated as linearly dependent on the current support.
const DEPENDENCE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, Default)]
pub struct BompOptions {
    /// Stop once `||r|| < 1e-12 ||y||`. Off by default: the full iteration
    /// budget is always spent.
    pub early_stop: bool,
}

/// History of one BOMP run.
#[derive(Debug, Clone)]
pub struct BompTrace {
    /// One block index per iteration, in selection order.
    pub support_sequence: Vec<usize>,
    /// Row `t` holds the block correlations that drove selection `t`.
    pub correlation_history: Vec<Vec<f64>>,
    /// Minimum-norm least-squares coefficients over the final support,
    /// concatenated in selection order.
    pub final_estimate: CVector,
    /// `||r^t||_2` after each iteration.
    pub residual_norms: Vec<f64>,
    /// Residual vector after each iteration.
    pub residuals: Vec<CVector>,
}

impl BompTrace {
    pub fn iterations(&self) -> usize {
        self.support_sequence.len()
    }

    pub fn final_residual(&self) -> Option<&CVector> {
        self.residuals.last()
    }
}

pub fn bomp(a: &SensingMatrix, y: &MeasurementVector, iterations: usize) -> Result<BompTrace> {
    bomp_with(a, y, iterations, BompOptions::default())
}

pub fn bomp_with(
    a: &SensingMatrix,
    y: &MeasurementVector,
    iterations: usize,
    options: BompOptions,
) -> Result<BompTrace> {
    let blocks = a.num_blocks();
    if iterations > blocks {
        return Err(Error::InvalidArgument(format!(
            "{iterations} iterations requested but only {blocks} blocks"
        )));
    }
    a.check_measurement_len(y.len())?;
    let y = &y.values;
    let y_norm = y.norm();

    let mut selected = vec![false; blocks];
    let mut support = Vec::with_capacity(iterations);
    let mut history = Vec::with_capacity(iterations);
    let mut residual_norms = Vec::with_capacity(iterations);
    let mut residuals = Vec::with_capacity(iterations);
    let mut basis = Basis::default();
    let mut r = y.clone();

    for _ in 0..iterations {
        let lambda = a.correlations(&r)?;
        let mut pick: Option<usize> = None;
        for i in (0..blocks).filter(|&i| !selected[i]) {
            if pick.is_none_or(|p| lambda[i] > lambda[p]) {
                pick = Some(i);
            }
        }
        let c = pick.expect("iterations <= blocks leaves a candidate");
        selected[c] = true;
        support.push(c);
        history.push(lambda);

        for col in a.block(c).column_iter() {
            basis.push(col.into_owned());
        }
        r = basis.residual(y);
        let rn = r.norm();
        residual_norms.push(rn);
        residuals.push(r.clone());
        if options.early_stop && rn < 1e-12 * y_norm {
            break;
        }
    }

    let final_estimate = basis.min_norm_solution(y);
    Ok(BompTrace {
        support_sequence: support,
        correlation_history: history,
        final_estimate,
        residual_norms,
        residuals,
    })
}

/// Incremental orthonormal basis of the span of the selected columns, with
/// the coordinates of every inserted column (`A_Omega = Q R`).
#[derive(Default)]
struct Basis {
    q: Vec<CVector>,
    coords: Vec<Vec<Complex64>>,
}

impl Basis {
    fn push(&mut self, col: CVector) {
        let col_norm = col.norm();
        let mut v = col;
        let mut coords = vec![Complex64::new(0.0, 0.0); self.q.len()];
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for (k, q) in self.q.iter().enumerate() {
                let h = q.dotc(&v);
                v.axpy(-h, q, Complex64::new(1.0, 0.0));
                coords[k] += h;
            }
        }
        let rem = v.norm();
        if rem > DEPENDENCE_TOLERANCE * col_norm && rem > 0.0 {
            v.unscale_mut(rem);
            self.q.push(v);
            coords.push(Complex64::new(rem, 0.0));
        }
        self.coords.push(coords);
    }

    fn residual(&self, y: &CVector) -> CVector {
        let mut r = y.clone();
        for _ in 0..2 {
            for q in &self.q {
                let h = q.dotc(&r);
                r.axpy(-h, q, Complex64::new(1.0, 0.0));
            }
        }
        r
    }

    /// Minimum-norm solution of `Q R x = y` in the least-squares sense.
    fn min_norm_solution(&self, y: &CVector) -> CVector {
        let rank = self.q.len();
        let n = self.coords.len();
        if rank == 0 {
            return CVector::zeros(n);
        }
        let rhs = CVector::from_iterator(rank, self.q.iter().map(|q| q.dotc(y)));
        let mut r = CMatrix::zeros(rank, n);
        for (c, coords) in self.coords.iter().enumerate() {
            for (k, &v) in coords.iter().enumerate() {
                r[(k, c)] = v;
            }
        }
        if rank == n {
            return r
                .solve_upper_triangular(&rhs)
                .expect("independent columns give a nonsingular triangle");
        }
        // R has full row rank: factor R^H = Q2 R2, then x = Q2 R2^-H rhs
        let qr = r.adjoint().qr();
        let (q2, r2): (DMatrix<Complex64>, DMatrix<Complex64>) = (qr.q(), qr.r());
        let w = r2
            .adjoint()
            .solve_lower_triangular(&rhs)
            .expect("full row rank gives a nonsingular triangle");
        q2 * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocksparse::{block_least_squares, BlockPartition};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn randn(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        })
    }

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn single_block_noiseless_orthogonal() {
        let a = SensingMatrix::new(
            CMatrix::identity(8, 8),
            BlockPartition::uniform(4, 2).unwrap(),
        )
        .unwrap();
        let mut y = CVector::zeros(8);
        y[4] = c(1.0);
        y[5] = Complex64::new(0.0, -2.0);
        let t = bomp(&a, &MeasurementVector::new(y.clone()), 1).unwrap();
        assert_eq!(t.support_sequence, vec![2]);
        assert!(t.residual_norms[0] < 1e-15);
        assert!((t.final_estimate - y.rows(4, 2)).norm() < 1e-15);
    }

    #[test]
    fn zero_measurement_follows_tie_break() {
        let a = SensingMatrix::new(
            CMatrix::identity(6, 6),
            BlockPartition::uniform(3, 2).unwrap(),
        )
        .unwrap();
        let t = bomp(&a, &MeasurementVector::new(CVector::zeros(6)), 3).unwrap();
        assert_eq!(t.support_sequence, vec![0, 1, 2]);
        assert!(t.correlation_history.iter().flatten().all(|&l| l == 0.0));
        assert!(t.final_estimate.iter().all(|z| z.norm() == 0.0));
        assert!(t.residual_norms.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn too_many_iterations() {
        let a = SensingMatrix::new(
            CMatrix::identity(4, 4),
            BlockPartition::uniform(2, 2).unwrap(),
        )
        .unwrap();
        assert!(bomp(&a, &MeasurementVector::new(CVector::zeros(4)), 3).is_err());
        assert!(bomp(&a, &MeasurementVector::new(CVector::zeros(5)), 1).is_err());
    }

    #[test]
    fn early_stop_ends_on_zero_residual() {
        let a = SensingMatrix::new(
            CMatrix::identity(8, 8),
            BlockPartition::uniform(4, 2).unwrap(),
        )
        .unwrap();
        let mut y = CVector::zeros(8);
        y[2] = c(1.0);
        let y = MeasurementVector::new(y);
        let full = bomp(&a, &y, 4).unwrap();
        assert_eq!(full.iterations(), 4);
        let short = bomp_with(&a, &y, 4, BompOptions { early_stop: true }).unwrap();
        assert_eq!(short.support_sequence, vec![1]);
    }

    #[test]
    fn rank_deficient_support_matches_svd_route() {
        // 12 rows, 6 blocks of 3: the support outgrows the row count
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = SensingMatrix::new(
            randn(12, 18, &mut rng),
            BlockPartition::uniform(6, 3).unwrap(),
        )
        .unwrap();
        let y = MeasurementVector::new(randn(12, 1, &mut rng).column(0).into_owned());
        let t = bomp(&a, &y, 5).unwrap();
        let svd = block_least_squares(&a, &t.support_sequence, &y).unwrap();
        assert!((&t.final_estimate - &svd).norm() <= 1e-8 * svd.norm());
        assert!(t.residual_norms.last().unwrap() < &(1e-10 * y.values.norm()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn residuals_orthogonal_and_non_increasing(seed in any::<u64>(), m in 4usize..20, iters in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = SensingMatrix::new(randn(m, 12, &mut rng), BlockPartition::uniform(6, 2).unwrap()).unwrap();
            let y = MeasurementVector::new(randn(m, 1, &mut rng).column(0).into_owned());
            let t = bomp(&a, &y, iters).unwrap();
            let yn = y.values.norm();
            let mut seen = std::collections::HashSet::new();
            for (k, r) in t.residuals.iter().enumerate() {
                prop_assert!(seen.insert(t.support_sequence[k]));
                let sub = a.support_columns(&t.support_sequence[..=k]);
                prop_assert!(sub.ad_mul(r).norm() <= 1e-8 * yn);
                if k > 0 {
                    prop_assert!(t.residual_norms[k] <= t.residual_norms[k - 1] + 1e-12 * yn);
                }
            }
            let svd = block_least_squares(&a, &t.support_sequence, &y).unwrap();
            prop_assert!((&t.final_estimate - &svd).norm() <= 1e-7 * (1.0 + svd.norm()));
        }
    }
}
