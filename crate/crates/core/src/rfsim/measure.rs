use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::blocksparse::{BlockSparseSignal, CVector, MeasurementVector, SensingMatrix};
use crate::{Error, Result};

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseMode {
    /// Thermal noise `k T B` inflated by the noise figure.
    Physical,
    /// Noise scaled per trial so the average per-transmitter SNR equals a
    /// requested value.
    TargetSnr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub temperature_k: f64,
    pub noise_figure_db: f64,
    /// Noise bandwidth; the full Nyquist band by default.
    pub bandwidth_hz: f64,
    pub mode: NoiseMode,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            temperature_k: 290.0,
            noise_figure_db: 5.0,
            bandwidth_hz: 100e6,
            mode: NoiseMode::TargetSnr,
        }
    }
}

impl NoiseSpec {
    /// Total thermal noise power over the band, in mW.
    pub fn noise_power_mw(&self) -> f64 {
        BOLTZMANN
            * self.temperature_k
            * self.bandwidth_hz
            * 10f64.powf(self.noise_figure_db / 10.0)
            * 1e3
    }
}

/// Mean over used blocks of the per-bin energy `||x_j||^2 / N_j`.
fn mean_bin_power(x: &BlockSparseSignal) -> Result<f64> {
    let used = x.used();
    if used.is_empty() {
        return Err(Error::InvalidArgument(
            "target SNR requested but no channel is active".into(),
        ));
    }
    let p = x.partition();
    Ok(used
        .iter()
        .map(|&j| x.block_norm(j).powi(2) / p.size(j) as f64)
        .sum::<f64>()
        / used.len() as f64)
}

fn snr_linear(snr_db: f64) -> f64 {
    10f64.powf(snr_db / 10.0)
}

/// Per-measurement noise variance.
///
/// In target mode the average over active channels `j` of
/// `||x_j||^2 / (E||n||^2 N_j / N)` equals the target. In physical mode the
/// per-bin thermal noise is carried through the mean squared row norm of `A`.
pub fn measurement_noise_variance(
    a: &SensingMatrix,
    x: &BlockSparseSignal,
    noise: &NoiseSpec,
    target_snr_db: Option<f64>,
) -> Result<f64> {
    let n = x.partition().total_len() as f64;
    let m = a.rows() as f64;
    match noise.mode {
        NoiseMode::TargetSnr => {
            let snr = target_snr_db
                .ok_or_else(|| Error::InvalidArgument("target-SNR mode needs a target".into()))?;
            let w = mean_bin_power(x)?;
            Ok(n * w / (m * snr_linear(snr)))
        }
        NoiseMode::Physical => {
            let row_energy = a.entries().norm_squared() / m;
            Ok(noise.noise_power_mw() / n * row_energy)
        }
    }
}

/// Per-bin noise variance for the Nyquist (full spectrum) baseline, matched
/// to the same SNR definition.
pub fn spectrum_noise_variance(
    x: &BlockSparseSignal,
    noise: &NoiseSpec,
    target_snr_db: Option<f64>,
) -> Result<f64> {
    match noise.mode {
        NoiseMode::TargetSnr => {
            let snr = target_snr_db
                .ok_or_else(|| Error::InvalidArgument("target-SNR mode needs a target".into()))?;
            Ok(mean_bin_power(x)? / snr_linear(snr))
        }
        NoiseMode::Physical => Ok(noise.noise_power_mw() / x.partition().total_len() as f64),
    }
}

/// Adds circularly-symmetric complex Gaussian noise of the given variance;
/// returns the realised noise energy `||n||^2`.
pub fn add_complex_noise<R: Rng + ?Sized>(v: &mut CVector, variance: f64, rng: &mut R) -> f64 {
    if variance == 0.0 {
        return 0.0;
    }
    let normal = Normal::new(0.0, (variance / 2.0).sqrt()).expect("finite variance");
    let mut energy = 0.0;
    for z in v.iter_mut() {
        let e = Complex64::new(normal.sample(rng), normal.sample(rng));
        energy += e.norm_sqr();
        *z += e;
    }
    energy
}

/// `y = A x + n`.
pub fn measure<R: Rng + ?Sized>(
    a: &SensingMatrix,
    x: &BlockSparseSignal,
    noise: &NoiseSpec,
    target_snr_db: Option<f64>,
    rng: &mut R,
) -> Result<MeasurementVector> {
    if x.partition() != a.partition() {
        return Err(Error::DimensionMismatch(
            "signal and matrix partitions differ".into(),
        ));
    }
    let variance = measurement_noise_variance(a, x, noise, target_snr_db)?;
    let mut y = a.entries() * x.values();
    let energy = add_complex_noise(&mut y, variance, rng);
    Ok(MeasurementVector::with_noise_norm(y, energy.sqrt()))
}

/// Average per-transmitter SNR (linear) for a given noise energy `||n||^2`.
pub fn realized_snr(x: &BlockSparseSignal, noise_energy: f64) -> Result<f64> {
    let n = x.partition().total_len() as f64;
    Ok(mean_bin_power(x)? * n / noise_energy)
}
