use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::{argmin_over, bomp, BompTrace};
use crate::blocksparse::{BlockPartition, CVector, MeasurementVector, SensingMatrix};
use crate::{Error, Result};

/// BOMP depth used by LMP unless the caller overrides it.
pub const DEFAULT_LMP_DEPTH: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    ZdGroth,
    Lmp,
    BompElimination,
    Nyquist,
    Random,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Lmp,
        Method::ZdGroth,
        Method::BompElimination,
        Method::Nyquist,
        Method::Random,
    ];

    /// Name used in configuration files and result tables.
    pub fn name(self) -> &'static str {
        match self {
            Method::ZdGroth => "zd-groth",
            Method::Lmp => "lmp",
            Method::BompElimination => "bomp-elim",
            Method::Nyquist => "nyquist",
            Method::Random => "random",
        }
    }

    /// Reference methods the proposed detectors are compared against.
    pub fn is_baseline(self) -> bool {
        matches!(
            self,
            Method::Nyquist | Method::Random | Method::BompElimination
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// A block declared unused.
#[derive(Debug, Clone)]
pub struct Detection {
    pub declared_unused: usize,
    pub method: Method,
    pub trace: Option<BompTrace>,
    /// Per-block scores the decision minimised. Blocks excluded from the
    /// decision carry `f64::INFINITY`; the random baseline carries none.
    pub scores: Vec<f64>,
}

/// ZD-GroTh: the block least correlated with the measurements.
pub fn zd_groth(a: &SensingMatrix, y: &MeasurementVector) -> Result<Detection> {
    let scores = a.correlations(&y.values)?;
    let declared_unused = argmin_over(&scores, 0..scores.len()).expect("at least two blocks");
    Ok(Detection {
        declared_unused,
        method: Method::ZdGroth,
        trace: None,
        scores,
    })
}

/// Least Matching Pursuit: run BOMP for `depth` iterations, then declare
/// unused the unselected block with the smallest correlation summed over all
/// iterations.
pub fn lmp(a: &SensingMatrix, y: &MeasurementVector, depth: usize) -> Result<Detection> {
    let blocks = a.num_blocks();
    if depth == 0 || depth >= blocks {
        return Err(Error::InvalidArgument(format!(
            "LMP depth must lie in 1..={}, got {depth}",
            blocks - 1
        )));
    }
    let trace = bomp(a, y, depth)?;
    let mut scores = vec![0.0; blocks];
    for row in &trace.correlation_history {
        for (s, l) in scores.iter_mut().zip(row) {
            *s += l;
        }
    }
    for &i in &trace.support_sequence {
        scores[i] = f64::INFINITY;
    }
    let declared_unused = argmin_over(
        &scores,
        (0..blocks).filter(|i| !trace.support_sequence.contains(i)),
    )
    .expect("depth < blocks leaves a candidate");
    Ok(Detection {
        declared_unused,
        method: Method::Lmp,
        trace: Some(trace),
        scores,
    })
}

/// Runs BOMP for `B - 1` iterations and declares the leftover block unused.
pub fn bomp_elimination(a: &SensingMatrix, y: &MeasurementVector) -> Result<Detection> {
    bomp_elimination_with(a, y, a.num_blocks() - 1)
}

/// BOMP elimination with an explicit iteration budget. When more than one
/// block is left over, the one with the smallest correlation in the final
/// iteration is declared.
pub fn bomp_elimination_with(
    a: &SensingMatrix,
    y: &MeasurementVector,
    iterations: usize,
) -> Result<Detection> {
    let blocks = a.num_blocks();
    if iterations == 0 || iterations >= blocks {
        return Err(Error::InvalidArgument(format!(
            "elimination needs 1..={} iterations, got {iterations}",
            blocks - 1
        )));
    }
    let trace = bomp(a, y, iterations)?;
    let mut scores = trace
        .correlation_history
        .last()
        .cloned()
        .expect("at least one iteration");
    for &i in &trace.support_sequence {
        scores[i] = f64::INFINITY;
    }
    let declared_unused = argmin_over(
        &scores,
        (0..blocks).filter(|i| !trace.support_sequence.contains(i)),
    )
    .expect("fewer iterations than blocks");
    Ok(Detection {
        declared_unused,
        method: Method::BompElimination,
        trace: Some(trace),
        scores,
    })
}

/// Nyquist baseline: the block of the (DFT-domain) spectrum with the least
/// energy.
pub fn nyquist_min_power(x_full: &CVector, partition: &BlockPartition) -> Result<Detection> {
    if x_full.len() != partition.total_len() {
        return Err(Error::DimensionMismatch(format!(
            "spectrum has length {} but partition covers {}",
            x_full.len(),
            partition.total_len()
        )));
    }
    let scores: Vec<f64> = (0..partition.num_blocks())
        .map(|i| x_full.rows_range(partition.range(i)).norm())
        .collect();
    let declared_unused = argmin_over(&scores, 0..scores.len()).expect("at least two blocks");
    Ok(Detection {
        declared_unused,
        method: Method::Nyquist,
        trace: None,
        scores,
    })
}

/// Uniformly random guess.
pub fn random_unused<R: Rng + ?Sized>(rng: &mut R, blocks: usize) -> Result<Detection> {
    if blocks == 0 {
        return Err(Error::InvalidArgument("need at least one block".into()));
    }
    Ok(Detection {
        declared_unused: rng.random_range(0..blocks),
        method: Method::Random,
        trace: None,
        scores: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocksparse::CMatrix;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn identity_matrix(blocks: usize, size: usize) -> SensingMatrix {
        SensingMatrix::new(
            CMatrix::identity(blocks * size, blocks * size),
            BlockPartition::uniform(blocks, size).unwrap(),
        )
        .unwrap()
    }

    fn first_block_signal(blocks: usize, size: usize) -> MeasurementVector {
        let mut y = CVector::zeros(blocks * size);
        for k in 0..size {
            y[k] = Complex64::new(1.0 + k as f64, -0.5);
        }
        MeasurementVector::new(y)
    }

    #[test]
    fn zd_groth_tie_breaks() {
        let a = identity_matrix(4, 3);
        let d = zd_groth(&a, &first_block_signal(4, 3)).unwrap();
        assert_eq!(d.declared_unused, 1);
        assert_eq!(&d.scores[1..], &[0.0, 0.0, 0.0]);
        let d = zd_groth(&a, &MeasurementVector::new(CVector::zeros(12))).unwrap();
        assert_eq!(d.declared_unused, 0);
    }

    #[test]
    fn lmp_orthogonal_three_blocks() {
        let a = identity_matrix(3, 2);
        let d = lmp(&a, &first_block_signal(3, 2), 1).unwrap();
        let t = d.trace.as_ref().unwrap();
        assert_eq!(t.support_sequence, vec![0]);
        assert_eq!(d.scores[1], 0.0);
        assert_eq!(d.scores[2], 0.0);
        assert_eq!(d.declared_unused, 1);
    }

    #[test]
    fn lmp_full_depth_is_the_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = SensingMatrix::new(
            CMatrix::from_fn(10, 12, |_, _| {
                Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            }),
            BlockPartition::uniform(6, 2).unwrap(),
        )
        .unwrap();
        let y = MeasurementVector::new(CVector::from_fn(10, |i, _| c(i as f64 - 3.0)));
        let d = lmp(&a, &y, 5).unwrap();
        let support = &d.trace.as_ref().unwrap().support_sequence;
        let left: Vec<usize> = (0..6).filter(|i| !support.contains(i)).collect();
        assert_eq!(left, vec![d.declared_unused]);
        let e = bomp_elimination(&a, &y).unwrap();
        assert_eq!(e.declared_unused, d.declared_unused);
    }

    #[test]
    fn lmp_depth_range() {
        let a = identity_matrix(3, 2);
        let y = first_block_signal(3, 2);
        assert!(lmp(&a, &y, 0).is_err());
        assert!(lmp(&a, &y, 3).is_err());
        assert!(lmp(&a, &y, 2).is_ok());
    }

    #[test]
    fn elimination_two_blocks() {
        let a = identity_matrix(2, 3);
        let d = bomp_elimination(&a, &first_block_signal(2, 3)).unwrap();
        assert_eq!(d.declared_unused, 1);
        assert_eq!(d.trace.unwrap().iterations(), 1);
    }

    #[test]
    fn elimination_runs_nineteen_iterations_for_twenty_blocks() {
        let a = identity_matrix(20, 2);
        let d = bomp_elimination(&a, &first_block_signal(20, 2)).unwrap();
        let t = d.trace.unwrap();
        assert_eq!(t.iterations(), 19);
        assert!(!t.support_sequence.contains(&d.declared_unused));
    }

    #[test]
    fn nyquist_cases() {
        let p = BlockPartition::uniform(3, 2).unwrap();
        let x = CVector::from_vec(vec![c(1.0), c(1.0), c(0.0), c(0.0), c(2.0), c(0.0)]);
        assert_eq!(nyquist_min_power(&x, &p).unwrap().declared_unused, 1);
        let x = CVector::from_element(6, c(1.0));
        assert_eq!(nyquist_min_power(&x, &p).unwrap().declared_unused, 0);
        assert!(nyquist_min_power(&CVector::zeros(5), &p).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let mut r = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(random_unused(&mut r, 1).unwrap().declared_unused, 0);
        let draw = |seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            (0..20)
                .map(|_| random_unused(&mut r, 7).unwrap().declared_unused)
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert!(random_unused(&mut r, 0).is_err());
    }

    #[test]
    fn random_passes_chi_square() {
        let mut r = ChaCha8Rng::seed_from_u64(2024);
        let b = 20;
        let draws = 100_000;
        let mut counts = vec![0u32; b];
        for _ in 0..draws {
            counts[random_unused(&mut r, b).unwrap().declared_unused] += 1;
        }
        let expected = draws as f64 / b as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99th percentile of chi-square with 19 degrees of freedom
        assert!(chi2 < 36.191, "chi2 = {chi2}");
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("omp".parse::<Method>().is_err());
    }
}
