use rand::seq::index::sample;
use rand::Rng;

use super::{ChannelPlan, LinkBudget};
use crate::{Error, Result};

/// Range of transmitter distances from the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub min_distance_m: f64,
    pub max_distance_m: f64,
}

impl Default for Placement {
    fn default() -> Self {
        Self {
            min_distance_m: 1.0,
            max_distance_m: 280.0,
        }
    }
}

/// Active transmitters of one trial; `distances_m[k]` and `rx_powers_dbm[k]`
/// belong to `active_channels[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub active_channels: Vec<usize>,
    pub distances_m: Vec<f64>,
    pub rx_powers_dbm: Vec<f64>,
}

impl Scenario {
    pub fn num_active(&self) -> usize {
        self.active_channels.len()
    }

    pub fn is_active(&self, channel: usize) -> bool {
        self.active_channels.contains(&channel)
    }
}

/// `K` uniform on `1..=k_max`, `K` distinct channels, distances uniform on
/// the placement range.
pub fn draw_scenario<R: Rng + ?Sized>(
    rng: &mut R,
    plan: &ChannelPlan,
    k_max: usize,
    placement: &Placement,
    budget: &LinkBudget,
) -> Result<Scenario> {
    if k_max == 0 || k_max > plan.num_channels {
        return Err(Error::InvalidArgument(format!(
            "k_max must lie in 1..={}, got {k_max}",
            plan.num_channels
        )));
    }
    if !(placement.min_distance_m <= placement.max_distance_m) {
        return Err(Error::InvalidArgument("empty distance range".into()));
    }
    let k = rng.random_range(1..=k_max);
    let mut active_channels = sample(rng, plan.num_channels, k).into_vec();
    active_channels.sort_unstable();
    let distances_m: Vec<f64> = (0..k)
        .map(|_| rng.random_range(placement.min_distance_m..=placement.max_distance_m))
        .collect();
    let rx_powers_dbm = distances_m
        .iter()
        .map(|&d| budget.rx_power_dbm(d))
        .collect::<Result<Vec<_>>>()?;
    Ok(Scenario {
        active_channels,
        distances_m,
        rx_powers_dbm,
    })
}
