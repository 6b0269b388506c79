use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::blocksparse::{BlockPartition, CMatrix, SensingMatrix};
use crate::{Error, Result};

/// Unitary `N`-point DFT matrix, `Psi[k, n] = exp(-2 pi i k n / N) / sqrt(N)`.
pub fn unitary_dft(n: usize) -> CMatrix {
    let scale = (n as f64).sqrt().recip();
    CMatrix::from_fn(n, n, |k, t| {
        let phase = -2.0 * std::f64::consts::PI * ((k * t) % n) as f64 / n as f64;
        Complex64::from_polar(scale, phase)
    })
}

/// Effective sensing matrix `A = Theta Psi^-1` for the unitary DFT `Psi`,
/// so that `y = Theta z` with `z = Psi^-1 x`.
pub fn effective_matrix(
    theta: &CMatrix,
    n: usize,
    partition: &BlockPartition,
) -> Result<SensingMatrix> {
    if theta.ncols() != n || partition.total_len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rows have {} columns, N = {n}, partition covers {}",
            theta.ncols(),
            partition.total_len()
        )));
    }
    let fft = inverse_plan(n);
    let mut out = CMatrix::zeros(theta.nrows(), n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for r in 0..theta.nrows() {
        for (b, v) in buf.iter_mut().zip(theta.row(r).iter()) {
            *b = *v;
        }
        transform(&*fft, &mut buf);
        for (c, v) in buf.iter().enumerate() {
            out[(r, c)] = *v;
        }
    }
    SensingMatrix::new(out, partition.clone())
}

/// One dictionary row mapped through `Psi^-1`.
pub fn effective_row(row: &[i8]) -> Vec<Complex64> {
    let fft = inverse_plan(row.len());
    let mut buf: Vec<Complex64> = row.iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
    transform(&*fft, &mut buf);
    buf
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(n)
}

/// `(theta Psi^H)[k] = sum_t theta[t] exp(+2 pi i k t / N) / sqrt(N)`, the
/// unnormalised inverse FFT scaled by `1/sqrt(N)`.
fn transform(fft: &dyn Fft<f64>, buf: &mut [Complex64]) {
    fft.process(buf);
    let scale = (buf.len() as f64).sqrt().recip();
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nuws::{haar_wavelet, WaveletParams};
    use proptest::prelude::*;

    #[test]
    fn full_dft_rows_give_identity() {
        let n = 12;
        let p = BlockPartition::uniform(4, 3).unwrap();
        let a = effective_matrix(&unitary_dft(n), n, &p).unwrap();
        assert!((a.entries() - CMatrix::identity(n, n)).norm() < 1e-12);
    }

    #[test]
    fn identity_rows_give_inverse_dft() {
        let n = 10;
        let p = BlockPartition::uniform(2, 5).unwrap();
        let a = effective_matrix(&CMatrix::identity(n, n), n, &p).unwrap();
        assert!((a.entries() - unitary_dft(n).adjoint()).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let p = BlockPartition::uniform(2, 5).unwrap();
        assert!(effective_matrix(&CMatrix::identity(9, 9), 10, &p).is_err());
    }

    proptest! {
        #[test]
        fn parseval_for_wavelet_rows(tau in 0usize..60, rho_raw in 1usize..200, h in 1usize..30) {
            let n = 64;
            let tau = tau % n;
            let rho = 1 + rho_raw % (n - tau);
            let w = haar_wavelet(WaveletParams { tau, rho, half_period: h }, n).unwrap();
            let a = effective_row(&w);
            let energy: f64 = a.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!((energy - rho as f64).abs() < 1e-9 * rho as f64);
        }

        #[test]
        fn linear_in_the_rows(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 16;
            let p = BlockPartition::uniform(4, 4).unwrap();
            let top = CMatrix::from_fn(3, n, |_, _| Complex64::new(rng.random(), rng.random()));
            let bottom = CMatrix::from_fn(2, n, |_, _| Complex64::new(rng.random(), rng.random()));
            let stacked = CMatrix::from_fn(5, n, |r, c| if r < 3 { top[(r, c)] } else { bottom[(r - 3, c)] });
            let whole = effective_matrix(&stacked, n, &p).unwrap();
            let a = effective_matrix(&top, n, &p).unwrap();
            let b = effective_matrix(&bottom, n, &p).unwrap();
            prop_assert!((whole.entries().rows(0, 3) - a.entries()).norm() < 1e-12);
            prop_assert!((whole.entries().rows(3, 2) - b.entries()).norm() < 1e-12);
            // against the dense product
            let dense = &stacked * unitary_dft(n).adjoint();
            prop_assert!((whole.entries() - dense).norm() < 1e-10);
        }
    }
}
