use crate::{Error, Result};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Log-distance link budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    pub tx_power_dbm: f64,
    pub rx_gain_dbi: f64,
    pub path_loss_exponent: f64,
    pub reference_distance_m: f64,
    pub reference_loss_db: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self {
            tx_power_dbm: 20.0,
            rx_gain_dbi: 10.0,
            path_loss_exponent: 3.5,
            reference_distance_m: 1.0,
            reference_loss_db: free_space_loss_db(1.0, 2.45e9),
        }
    }
}

impl LinkBudget {
    pub fn rx_power_dbm(&self, d_m: f64) -> Result<f64> {
        Ok(self.tx_power_dbm + self.rx_gain_dbi - path_loss_db(d_m, self)?)
    }
}

/// Friis free-space loss `20 log10(4 pi d f / c)`.
pub fn free_space_loss_db(d_m: f64, freq_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * d_m * freq_hz / SPEED_OF_LIGHT).log10()
}

/// `PL(d) = PL(d0) + 10 n log10(d / d0)`.
pub fn path_loss_db(d_m: f64, budget: &LinkBudget) -> Result<f64> {
    if !(d_m >= budget.reference_distance_m) {
        return Err(Error::InvalidArgument(format!(
            "distance {d_m} m is below the reference distance {} m",
            budget.reference_distance_m
        )));
    }
    Ok(budget.reference_loss_db
        + 10.0 * budget.path_loss_exponent * (d_m / budget.reference_distance_m).log10())
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_and_decade() {
        let b = LinkBudget::default();
        assert!((path_loss_db(1.0, &b).unwrap() - b.reference_loss_db).abs() < 1e-12);
        assert!((path_loss_db(10.0, &b).unwrap() - (b.reference_loss_db + 35.0)).abs() < 1e-12);
        assert!(path_loss_db(0.5, &b).is_err());
        // free space at 1 m and 2.45 GHz
        assert!((b.reference_loss_db - 40.23).abs() < 0.01);
    }

    #[test]
    fn far_transmitter_is_weaker_by_log_distance() {
        let b = LinkBudget::default();
        let drop = b.rx_power_dbm(1.0).unwrap() - b.rx_power_dbm(280.0).unwrap();
        assert!((drop - 35.0 * 280f64.log10()).abs() < 1e-10);
        let mut prev = f64::NEG_INFINITY;
        for d in [1.0, 2.0, 10.0, 100.0, 280.0] {
            let pl = path_loss_db(d, &b).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
    }

    #[test]
    fn dbm_conversions() {
        assert!((dbm_to_mw(20.0) - 100.0).abs() < 1e-12);
        assert!((mw_to_dbm(dbm_to_mw(-73.5)) + 73.5).abs() < 1e-12);
    }
}
