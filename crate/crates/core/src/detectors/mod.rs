//! Unused-block detectors and the ZD-GroTh success guarantee.
//!
//! Every argmin/argmax breaks ties towards the lowest block index.

mod bomp;
mod detect;
mod guarantee;

pub use bomp::{bomp, bomp_with, BompOptions, BompTrace};
pub use detect::{
    bomp_elimination, bomp_elimination_with, lmp, nyquist_min_power, random_unused, zd_groth,
    Detection, Method, DEFAULT_LMP_DEPTH,
};
pub use guarantee::{check_zd_guarantee, CorrelationBounds, GuaranteeReport};

/// Index of the smallest score among `candidates`, lowest index on ties.
pub(crate) fn argmin_over(
    scores: &[f64],
    candidates: impl Iterator<Item = usize>,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for i in candidates {
        let s = scores[i];
        match best {
            Some((_, b)) if s >= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}
