//! Monte-Carlo RF whitespace benchmark: transmitter placement, link budget,
//! frequency-domain QPSK synthesis, noisy compressive measurement and
//! SNR-swept error curves.

mod curve;
mod link;
mod measure;
mod plan;
mod scenario;
mod sweep;
mod synth;

pub use curve::{read_results, write_results, CurvePoint, ErrorCurve, RESULTS_HEADER};
pub use link::{dbm_to_mw, free_space_loss_db, mw_to_dbm, path_loss_db, LinkBudget};
pub use measure::{
    add_complex_noise, measure, measurement_noise_variance, realized_snr, spectrum_noise_variance,
    NoiseMode, NoiseSpec, BOLTZMANN,
};
pub use plan::ChannelPlan;
pub use scenario::{draw_scenario, Placement, Scenario};
pub use sweep::{run_sweep, run_trial, MatrixSource, SweepConfig, TrialOutcome};
pub use synth::synthesize_signal;
