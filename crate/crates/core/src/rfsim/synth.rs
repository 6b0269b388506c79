use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rand::Rng;

use super::{dbm_to_mw, ChannelPlan, Scenario};
use crate::blocksparse::{BlockSparseSignal, CVector};
use crate::Result;

/// Frequency-domain block-sparse signal: every bin of an active channel
/// carries a QPSK phase, scaled so the block energy equals the channel's
/// received power in mW.
pub fn synthesize_signal<R: Rng + ?Sized>(
    scenario: &Scenario,
    plan: &ChannelPlan,
    rng: &mut R,
) -> Result<BlockSparseSignal> {
    let partition = plan.partition();
    let mut values = CVector::zeros(plan.signal_len());
    for (&ch, &p_dbm) in scenario.active_channels.iter().zip(&scenario.rx_powers_dbm) {
        let amp = (dbm_to_mw(p_dbm) / plan.bins_per_channel as f64).sqrt();
        for k in partition.range(ch) {
            let quadrant = rng.random_range(0..4u8) as f64;
            values[k] = Complex64::from_polar(amp, FRAC_PI_4 * (2.0 * quadrant + 1.0));
        }
    }
    BlockSparseSignal::new(values, partition)
}
