use crate::{Error, Result};

/// A windowed square wave: support `[tau, tau + rho)`, sign flipping every
/// `half_period` samples (oscillation frequency `1 / (2 h)` of the Nyquist
/// rate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WaveletParams {
    pub tau: usize,
    pub rho: usize,
    pub half_period: usize,
}

impl WaveletParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.rho == 0 || self.half_period == 0 || self.tau >= n || self.tau + self.rho > n {
            return Err(Error::InvalidArgument(format!(
                "wavelet (tau={}, rho={}, h={}) invalid for N = {n}",
                self.tau, self.rho, self.half_period
            )));
        }
        Ok(())
    }
}

pub fn haar_wavelet(p: WaveletParams, n: usize) -> Result<Vec<i8>> {
    p.validate(n)?;
    let mut w = vec![0i8; n];
    for (k, v) in w[p.tau..p.tau + p.rho].iter_mut().enumerate() {
        *v = if (k / p.half_period).is_multiple_of(2) { 1 } else { -1 };
    }
    Ok(w)
}
