use serde::{Deserialize, Serialize};

use crate::detectors::{Method, DEFAULT_LMP_DEPTH};
use crate::nuws::DictionaryGrid;
use crate::rfsim::{
    ChannelPlan, LinkBudget, MatrixSource, NoiseMode, NoiseSpec, Placement, SweepConfig,
};

/// Full benchmark configuration as read from a TOML document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchmarkConfig {
    pub n: usize,
    pub b: usize,
    pub m_values: Vec<usize>,
    /// LMP depth.
    pub p: usize,
    /// BOMP-elimination iterations; `b - 1` when absent.
    pub bomp_k: Option<usize>,
    pub k_max: usize,
    pub snr_grid_db: Vec<f64>,
    pub trials_per_cell: usize,
    pub seed: u64,
    pub methods: Vec<String>,
    /// `target` or `physical`.
    pub snr_mode: String,
    pub dictionary: DictionaryConfig,
    pub selection: SelectionConfig,
    pub link: LinkConfig,
    pub noise: NoiseConfig,
    pub band: BandConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DictionaryConfig {
    pub tau_step: usize,
    pub rho_set: Vec<usize>,
    pub halfperiod_set: Vec<usize>,
    /// Maximum number of rows; 0 keeps all.
    pub cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelectionConfig {
    /// Random candidates scanned per greedy step; 0 scans the whole dictionary.
    pub candidates_per_step: usize,
    pub seed: u64,
    /// Directory with `dictionary.txt` and `selection_m{M}.txt`; when set,
    /// `sweep` reads it instead of running the greedy selection.
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinkConfig {
    pub tx_power_dbm: f64,
    pub rx_gain_dbi: f64,
    pub path_loss_exponent: f64,
    pub reference_distance_m: f64,
    pub reference_loss_db: f64,
    pub min_distance_m: f64,
    pub max_distance_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseConfig {
    pub temperature_k: f64,
    pub noise_figure_db: f64,
    pub bandwidth_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BandConfig {
    pub start_hz: f64,
    pub stop_hz: f64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        let plan = ChannelPlan::default();
        Self {
            n: plan.signal_len(),
            b: plan.num_channels,
            m_values: vec![50, 100, 150],
            p: DEFAULT_LMP_DEPTH,
            bomp_k: None,
            k_max: 5,
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 30.0],
            trials_per_cell: 50_000,
            seed: 1,
            methods: Method::ALL.iter().map(|m| m.to_string()).collect(),
            snr_mode: "target".into(),
            dictionary: DictionaryConfig::default(),
            selection: SelectionConfig::default(),
            link: LinkConfig::default(),
            noise: NoiseConfig::default(),
            band: BandConfig::default(),
        }
    }
}

impl Default for DictionaryConfig {
    fn default() -> Self {
        let g = DictionaryGrid::default();
        Self {
            tau_step: g.tau_step,
            rho_set: g.rho_set,
            halfperiod_set: g.halfperiod_set,
            cap: g.cap.unwrap_or(0),
        }
    }
}

impl Default for SelectionConfig {
    fn default() -> Self {
        Self {
            candidates_per_step: 200,
            seed: 1,
            dir: None,
        }
    }
}

impl Default for LinkConfig {
    fn default() -> Self {
        let l = LinkBudget::default();
        let p = Placement::default();
        Self {
            tx_power_dbm: l.tx_power_dbm,
            rx_gain_dbi: l.rx_gain_dbi,
            path_loss_exponent: l.path_loss_exponent,
            reference_distance_m: l.reference_distance_m,
            reference_loss_db: l.reference_loss_db,
            min_distance_m: p.min_distance_m,
            max_distance_m: p.max_distance_m,
        }
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        let n = NoiseSpec::default();
        Self {
            temperature_k: n.temperature_k,
            noise_figure_db: n.noise_figure_db,
            bandwidth_hz: n.bandwidth_hz,
        }
    }
}

impl Default for BandConfig {
    fn default() -> Self {
        let p = ChannelPlan::default();
        Self {
            start_hz: p.band_start_hz,
            stop_hz: p.band_stop_hz,
        }
    }
}

impl BenchmarkConfig {
    pub fn from_toml(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.message().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config always serialises")
    }

    pub fn parsed_methods(&self) -> Result<Vec<Method>, String> {
        if self.methods.is_empty() {
            return Err("methods list is empty".into());
        }
        let mut out: Vec<Method> = Vec::new();
        for name in &self.methods {
            let m: Method = name.parse().map_err(|_| {
                format!(
                    "unknown method '{name}' (expected one of {})",
                    Method::ALL.map(|m| m.to_string()).join(", ")
                )
            })?;
            if out.contains(&m) {
                return Err(format!("method '{name}' listed twice"));
            }
            out.push(m);
        }
        Ok(out)
    }

    pub fn plan(&self) -> Result<ChannelPlan, String> {
        if self.b == 0 || !self.n.is_multiple_of(self.b) {
            return Err(format!(
                "n = {} is not a multiple of b = {}",
                self.n, self.b
            ));
        }
        Ok(ChannelPlan {
            num_channels: self.b,
            bins_per_channel: self.n / self.b,
            band_start_hz: self.band.start_hz,
            band_stop_hz: self.band.stop_hz,
        })
    }

    pub fn grid(&self) -> DictionaryGrid {
        DictionaryGrid {
            tau_step: self.dictionary.tau_step,
            rho_set: self.dictionary.rho_set.clone(),
            halfperiod_set: self.dictionary.halfperiod_set.clone(),
            cap: (self.dictionary.cap > 0).then_some(self.dictionary.cap),
        }
    }

    pub fn candidates_per_step(&self) -> Option<usize> {
        (self.selection.candidates_per_step > 0).then_some(self.selection.candidates_per_step)
    }

    pub fn sweep_config(&self) -> Result<SweepConfig, String> {
        let plan = self.plan()?;
        let mode = match self.snr_mode.as_str() {
            "target" => NoiseMode::TargetSnr,
            "physical" => NoiseMode::Physical,
            other => {
                return Err(format!(
                    "snr_mode must be 'target' or 'physical', got '{other}'"
                ))
            }
        };
        let cfg = SweepConfig {
            plan,
            k_max: self.k_max,
            placement: Placement {
                min_distance_m: self.link.min_distance_m,
                max_distance_m: self.link.max_distance_m,
            },
            budget: LinkBudget {
                tx_power_dbm: self.link.tx_power_dbm,
                rx_gain_dbi: self.link.rx_gain_dbi,
                path_loss_exponent: self.link.path_loss_exponent,
                reference_distance_m: self.link.reference_distance_m,
                reference_loss_db: self.link.reference_loss_db,
            },
            noise: NoiseSpec {
                temperature_k: self.noise.temperature_k,
                noise_figure_db: self.noise.noise_figure_db,
                bandwidth_hz: self.noise.bandwidth_hz,
                mode,
            },
            snr_grid_db: self.snr_grid_db.clone(),
            m_values: self.m_values.clone(),
            trials_per_cell: self.trials_per_cell,
            methods: self.parsed_methods()?,
            lmp_depth: self.p,
            elimination_iterations: self.bomp_k.unwrap_or(self.b.saturating_sub(1)),
        };
        cfg.validate().map_err(|e| match e {
            crate::Error::InvalidArgument(msg) => msg,
            other => other.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn matrix_source(&self) -> MatrixSource {
        match &self.selection.dir {
            Some(dir) => MatrixSource::SelectionDir(dir.into()),
            None => MatrixSource::Greedy {
                grid: self.grid(),
                candidates_per_step: self.candidates_per_step(),
                seed: self.selection.seed,
            },
        }
    }
}

/// Applies a `key=value` override to a parsed TOML document. `key` is a
/// dotted path; `value` is parsed as a TOML value and falls back to a plain
/// string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<(), String> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| format!("override '{assignment}' is not of the form key=value"))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(format!("override '{assignment}' has an empty key"));
    }
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields one part");
    let mut table = doc;
    for part in parts {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| format!("'{part}' in '{key}' is not a table"))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
