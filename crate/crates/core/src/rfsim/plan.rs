use crate::blocksparse::BlockPartition;
use crate::{Error, Result};

/// Uniform channelisation of the monitored band; each channel occupies
/// `bins_per_channel` consecutive DFT bins.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPlan {
    pub num_channels: usize,
    pub bins_per_channel: usize,
    pub band_start_hz: f64,
    pub band_stop_hz: f64,
}

impl Default for ChannelPlan {
    fn default() -> Self {
        Self {
            num_channels: 20,
            bins_per_channel: 10,
            band_start_hz: 2.4e9,
            band_stop_hz: 2.5e9,
        }
    }
}

impl ChannelPlan {
    pub fn validate(&self) -> Result<()> {
        if self.num_channels < 2 || self.bins_per_channel == 0 {
            return Err(Error::InvalidArgument(
                "channel plan needs at least 2 channels of at least 1 bin".into(),
            ));
        }
        if !(self.band_stop_hz > self.band_start_hz) {
            return Err(Error::InvalidArgument(
                "band stop must exceed band start".into(),
            ));
        }
        Ok(())
    }

    /// Number of Nyquist samples `N`.
    pub fn signal_len(&self) -> usize {
        self.num_channels * self.bins_per_channel
    }

    pub fn span_hz(&self) -> f64 {
        self.band_stop_hz - self.band_start_hz
    }

    pub fn channel_bw_hz(&self) -> f64 {
        self.span_hz() / self.num_channels as f64
    }

    pub fn center_hz(&self) -> f64 {
        0.5 * (self.band_start_hz + self.band_stop_hz)
    }

    pub fn partition(&self) -> BlockPartition {
        BlockPartition::uniform(self.num_channels, self.bins_per_channel)
            .expect("validated channel plan")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan() {
        let p = ChannelPlan::default();
        assert_eq!(p.signal_len(), 200);
        assert!((p.channel_bw_hz() - 5e6).abs() < 1e-3);
        assert!((p.channel_bw_hz() * p.num_channels as f64 - p.span_hz()).abs() < 1e-3);
        assert_eq!(p.partition().num_blocks(), 20);
    }
}
