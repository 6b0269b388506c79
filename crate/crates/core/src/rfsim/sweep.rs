use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rayon::prelude::*;

use super::{
    add_complex_noise, draw_scenario, measure, measurement_noise_variance, spectrum_noise_variance,
    synthesize_signal, ChannelPlan, CurvePoint, ErrorCurve, LinkBudget, NoiseMode, NoiseSpec,
    Placement,
};
use crate::blocksparse::{SensingMatrix, DEFAULT_RANK_TOLERANCE};
use crate::detectors::{
    bomp_elimination_with, lmp, nyquist_min_power, random_unused, zd_groth, Method,
};
use crate::nuws::{greedy_select, read_dictionary, read_selection, DictionaryGrid};
use crate::seeding::substream;
use crate::{Error, Result};

const STREAM_SCENARIO: u64 = 1;
const STREAM_MEASUREMENT: u64 = 2;
const STREAM_SPECTRUM: u64 = 3;
const STREAM_RANDOM: u64 = 4;

/// Everything a sweep needs apart from the sensing matrices.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub plan: ChannelPlan,
    pub k_max: usize,
    pub placement: Placement,
    pub budget: LinkBudget,
    pub noise: NoiseSpec,
    /// Grid of target SNRs; ignored in physical mode, where trials are binned
    /// by their realised SNR rounded to 1 dB.
    pub snr_grid_db: Vec<f64>,
    pub m_values: Vec<usize>,
    pub trials_per_cell: usize,
    pub methods: Vec<Method>,
    pub lmp_depth: usize,
    pub elimination_iterations: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let plan = ChannelPlan::default();
        let elimination_iterations = plan.num_channels - 1;
        Self {
            plan,
            k_max: 5,
            placement: Placement::default(),
            budget: LinkBudget::default(),
            noise: NoiseSpec::default(),
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 30.0],
            m_values: vec![50, 100, 150],
            trials_per_cell: 50_000,
            methods: Method::ALL.to_vec(),
            lmp_depth: crate::detectors::DEFAULT_LMP_DEPTH,
            elimination_iterations,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.plan.validate()?;
        let n = self.plan.signal_len();
        let b = self.plan.num_channels;
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        if self.k_max == 0 || self.k_max >= b {
            return fail(format!("k_max must lie in 1..{b}, got {}", self.k_max));
        }
        if self.m_values.is_empty() || self.m_values.iter().any(|&m| m == 0 || m > n) {
            return fail(format!("every M must lie in 1..={n}"));
        }
        if self.noise.mode == NoiseMode::TargetSnr && self.snr_grid_db.is_empty() {
            return fail("SNR grid is empty".into());
        }
        if self.snr_grid_db.iter().any(|s| s.is_nan()) {
            return fail("SNR grid contains NaN".into());
        }
        if self.methods.is_empty() {
            return fail("no methods configured".into());
        }
        if self.trials_per_cell == 0 {
            return fail("trials_per_cell must be positive".into());
        }
        if self.lmp_depth == 0 || self.lmp_depth >= b {
            return fail(format!("LMP depth must lie in 1..{b}"));
        }
        if self.elimination_iterations == 0 || self.elimination_iterations >= b {
            return fail(format!("elimination iterations must lie in 1..{b}"));
        }
        Ok(())
    }
}

/// Where the per-M sensing matrices come from.
#[derive(Debug, Clone)]
pub enum MatrixSource {
    /// Greedy selection from a freshly built dictionary.
    Greedy {
        grid: DictionaryGrid,
        candidates_per_step: Option<usize>,
        seed: u64,
    },
    /// `dictionary.txt` and `selection_m{M}.txt` written by `matrix-select`.
    SelectionDir(PathBuf),
    /// One matrix per configured M, in the same order.
    Matrices(Vec<SensingMatrix>),
}

impl MatrixSource {
    pub fn resolve(&self, cfg: &SweepConfig) -> Result<Vec<SensingMatrix>> {
        let partition = cfg.plan.partition();
        let n = cfg.plan.signal_len();
        match self {
            MatrixSource::Matrices(ms) => {
                if ms.len() != cfg.m_values.len()
                    || ms.iter().zip(&cfg.m_values).any(|(a, &m)| a.rows() != m)
                    || ms.iter().any(|a| a.partition() != &partition)
                {
                    return Err(Error::DimensionMismatch(
                        "supplied matrices do not match the configured M values".into(),
                    ));
                }
                Ok(ms.clone())
            }
            MatrixSource::Greedy {
                grid,
                candidates_per_step,
                seed,
            } => {
                let dict = grid.build(n)?;
                let m_max = *cfg.m_values.iter().max().expect("validated");
                // shorter selections are prefixes of the longest one
                let full = greedy_select(
                    &dict,
                    &partition,
                    m_max,
                    *candidates_per_step,
                    *seed,
                    DEFAULT_RANK_TOLERANCE,
                )?;
                cfg.m_values
                    .iter()
                    .map(|&m| crate::nuws::selection_matrix(&dict, &full.chosen[..m], &partition))
                    .collect()
            }
            MatrixSource::SelectionDir(dir) => {
                let open = |name: String| {
                    let path = dir.join(&name);
                    File::open(&path).map(BufReader::new).map_err(|e| {
                        Error::InvalidArgument(format!("cannot open {}: {e}", path.display()))
                    })
                };
                let dict = read_dictionary(open("dictionary.txt".into())?)?;
                if dict.signal_len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "dictionary rows have length {} but N = {n}",
                        dict.signal_len()
                    )));
                }
                cfg.m_values
                    .iter()
                    .map(|&m| {
                        let chosen = read_selection(open(format!("selection_m{m}.txt"))?)?;
                        if chosen.len() != m {
                            return Err(Error::Parse(format!(
                                "selection_m{m}.txt holds {} indices",
                                chosen.len()
                            )));
                        }
                        crate::nuws::selection_matrix(&dict, &chosen, &partition)
                    })
                    .collect()
            }
        }
    }
}

/// Per-trial result: one error flag per configured method.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub errors: Vec<bool>,
    /// Average per-transmitter SNR implied by the noise variance, in dB.
    pub snr_db: f64,
}

/// One Monte-Carlo trial. Randomness is keyed by `(seed, snr_index, m_index,
/// trial)`; scenarios do not depend on `m_index`, so every M sees the same
/// transmitters.
pub fn run_trial(
    cfg: &SweepConfig,
    a: &SensingMatrix,
    target_snr_db: Option<f64>,
    seed: u64,
    snr_index: usize,
    m_index: usize,
    trial: usize,
) -> Result<TrialOutcome> {
    let (si, mi, t) = (snr_index as u64, m_index as u64, trial as u64);
    let mut rng = substream(seed, &[STREAM_SCENARIO, si, t]);
    let scenario = draw_scenario(&mut rng, &cfg.plan, cfg.k_max, &cfg.placement, &cfg.budget)?;
    let x = synthesize_signal(&scenario, &cfg.plan, &mut rng)?;

    let variance = measurement_noise_variance(a, &x, &cfg.noise, target_snr_db)?;
    let snr_db = 10.0 * (super::realized_snr(&x, a.rows() as f64 * variance)?).log10();
    let mut noise_rng = substream(seed, &[STREAM_MEASUREMENT, si, mi, t]);
    let y = measure(a, &x, &cfg.noise, target_snr_db, &mut noise_rng)?;

    let mut errors = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let declared = match method {
            Method::ZdGroth => zd_groth(a, &y)?.declared_unused,
            Method::Lmp => lmp(a, &y, cfg.lmp_depth)?.declared_unused,
            Method::BompElimination => {
                bomp_elimination_with(a, &y, cfg.elimination_iterations)?.declared_unused
            }
            Method::Nyquist => {
                let var = spectrum_noise_variance(&x, &cfg.noise, target_snr_db)?;
                let mut spectrum = x.values().clone();
                let mut r = substream(seed, &[STREAM_SPECTRUM, si, t]);
                add_complex_noise(&mut spectrum, var, &mut r);
                nyquist_min_power(&spectrum, x.partition())?.declared_unused
            }
            Method::Random => {
                let mut r = substream(seed, &[STREAM_RANDOM, si, mi, t]);
                random_unused(&mut r, cfg.plan.num_channels)?.declared_unused
            }
        };
        errors.push(scenario.is_active(declared));
    }
    Ok(TrialOutcome { errors, snr_db })
}

/// Runs every `(SNR, M)` cell and aggregates error counts. Trials run on the
/// ambient rayon pool; results do not depend on the number of workers.
pub fn run_sweep(cfg: &SweepConfig, source: &MatrixSource, seed: u64) -> Result<ErrorCurve> {
    cfg.validate()?;
    let matrices = source.resolve(cfg)?;
    let n_methods = cfg.methods.len();
    // (method index, m, snr bits) -> (trials, errors)
    let mut cells: BTreeMap<(usize, usize, u64), (u64, u64)> = BTreeMap::new();

    match cfg.noise.mode {
        NoiseMode::TargetSnr => {
            for (si, &snr) in cfg.snr_grid_db.iter().enumerate() {
                for (mi, a) in matrices.iter().enumerate() {
                    let counts = (0..cfg.trials_per_cell)
                        .into_par_iter()
                        .map(|t| {
                            run_trial(cfg, a, Some(snr), seed, si, mi, t)
                                .map(|o| o.errors.iter().map(|&e| e as u64).collect::<Vec<_>>())
                        })
                        .try_reduce(
                            || vec![0; n_methods],
                            |x, y| Ok(x.iter().zip(&y).map(|(a, b)| a + b).collect()),
                        )?;
                    for (k, errors) in counts.into_iter().enumerate() {
                        cells.insert(
                            (k, a.rows(), snr.to_bits()),
                            (cfg.trials_per_cell as u64, errors),
                        );
                    }
                }
            }
        }
        NoiseMode::Physical => {
            for (mi, a) in matrices.iter().enumerate() {
                let outcomes = (0..cfg.trials_per_cell)
                    .into_par_iter()
                    .map(|t| run_trial(cfg, a, None, seed, 0, mi, t))
                    .collect::<Result<Vec<_>>>()?;
                for o in outcomes {
                    let bin: f64 = o.snr_db.round() + 0.0;
                    for (k, &e) in o.errors.iter().enumerate() {
                        let cell = cells.entry((k, a.rows(), bin.to_bits())).or_insert((0, 0));
                        cell.0 += 1;
                        cell.1 += e as u64;
                    }
                }
            }
        }
    }

    ErrorCurve::from_points(
        cells
            .into_iter()
            .map(|((k, m, snr), (trials, errors))| CurvePoint {
                method: cfg.methods[k],
                snr_db: f64::from_bits(snr),
                m,
                trials,
                errors,
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocksparse::CMatrix;
    use crate::nuws::{effective_matrix, unitary_dft};

    fn square_config() -> (SweepConfig, MatrixSource) {
        let plan = ChannelPlan::default();
        let n = plan.signal_len();
        let a = effective_matrix(&CMatrix::identity(n, n), n, &plan.partition()).unwrap();
        let cfg = SweepConfig {
            snr_grid_db: vec![f64::INFINITY],
            m_values: vec![n],
            trials_per_cell: 300,
            ..SweepConfig::default()
        };
        (cfg, MatrixSource::Matrices(vec![a]))
    }

    #[test]
    fn noiseless_square_system_never_fails_zd_groth() {
        let (mut cfg, src) = square_config();
        cfg.methods = vec![Method::ZdGroth, Method::Lmp, Method::Nyquist];
        let c = run_sweep(&cfg, &src, 5).unwrap();
        for p in c.points() {
            assert_eq!(p.errors, 0, "{} failed", p.method);
            assert_eq!(p.trials, 300);
        }
    }

    #[test]
    fn identical_seeds_identical_curves_across_pools() {
        let (mut cfg, src) = square_config();
        cfg.snr_grid_db = vec![0.0, 10.0];
        cfg.trials_per_cell = 60;
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| run_sweep(&cfg, &src, 9)).unwrap();
        let b = four.install(|| run_sweep(&cfg, &src, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points().len(), 2 * Method::ALL.len());
    }

    #[test]
    fn physical_mode_bins_by_realised_snr() {
        let (mut cfg, src) = square_config();
        cfg.noise.mode = NoiseMode::Physical;
        cfg.trials_per_cell = 200;
        cfg.methods = vec![Method::Random];
        let c = run_sweep(&cfg, &src, 1).unwrap();
        assert_eq!(c.points().iter().map(|p| p.trials).sum::<u64>(), 200);
        assert!(c.points().iter().all(|p| p.snr_db == p.snr_db.round()));
    }

    #[test]
    fn invalid_configs() {
        let (cfg, src) = square_config();
        for broken in [
            SweepConfig {
                m_values: vec![201],
                ..cfg.clone()
            },
            SweepConfig {
                snr_grid_db: vec![],
                ..cfg.clone()
            },
            SweepConfig {
                methods: vec![],
                ..cfg.clone()
            },
            SweepConfig {
                lmp_depth: 20,
                ..cfg.clone()
            },
            SweepConfig {
                k_max: 0,
                ..cfg.clone()
            },
        ] {
            assert!(run_sweep(&broken, &src, 0).is_err());
        }
        let missing = MatrixSource::SelectionDir("/nonexistent/selection".into());
        assert!(run_sweep(&cfg, &missing, 0).is_err());
        let wrong = MatrixSource::Matrices(vec![]);
        assert!(run_sweep(&cfg, &wrong, 0).is_err());
        let _ = unitary_dft(4);
    }
}
