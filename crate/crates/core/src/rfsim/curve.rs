use std::cmp::Ordering;
use std::io::{BufRead, Write};

use crate::detectors::Method;
use crate::{Error, Result};

pub const RESULTS_HEADER: &str = "method,snr_db,m,trials,errors,error_rate";

/// Error counts of one `(method, SNR, M)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub method: Method,
    pub snr_db: f64,
    pub m: usize,
    pub trials: u64,
    pub errors: u64,
}

impl CurvePoint {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard error of the error rate.
    pub fn std_error(&self) -> f64 {
        let p = self.error_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    fn sort_key(&self, other: &Self) -> Ordering {
        self.method
            .name()
            .cmp(other.method.name())
            .then(self.m.cmp(&other.m))
            .then(self.snr_db.total_cmp(&other.snr_db))
    }
}

/// Aggregated Monte-Carlo error rates, ordered by `(method name, M, SNR)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ErrorCurve {
    points: Vec<CurvePoint>,
}

impl ErrorCurve {
    pub fn from_points(mut points: Vec<CurvePoint>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.trials == 0 || p.errors > p.trials) {
            return Err(Error::InvalidArgument(format!(
                "cell {} / {} dB / M={} has {} errors in {} trials",
                p.method, p.snr_db, p.m, p.errors, p.trials
            )));
        }
        points.sort_by(CurvePoint::sort_key);
        if points
            .windows(2)
            .any(|w| w[0].sort_key(&w[1]) == Ordering::Equal)
        {
            return Err(Error::InvalidArgument(
                "duplicate cell in error curve".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, method: Method, m: usize, snr_db: f64) -> Option<&CurvePoint> {
        self.points
            .iter()
            .find(|p| p.method == method && p.m == m && p.snr_db == snr_db)
    }

    /// Methods in order of first appearance.
    pub fn methods(&self) -> Vec<Method> {
        let mut out = Vec::new();
        for p in &self.points {
            if !out.contains(&p.method) {
                out.push(p.method);
            }
        }
        out
    }

    pub fn m_values(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.points.iter().map(|p| p.m).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn write_results<W: Write>(mut out: W, curve: &ErrorCurve) -> Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for p in curve.points() {
        writeln!(
            out,
            "{},{},{},{},{},{:.6}",
            p.method,
            p.snr_db,
            p.m,
            p.trials,
            p.errors,
            p.error_rate()
        )?;
    }
    Ok(())
}

pub fn read_results<R: BufRead>(input: R) -> Result<ErrorCurve> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::Parse("empty results file".into()))?;
    if header.trim() != RESULTS_HEADER {
        return Err(Error::Parse(format!(
            "unexpected results header {header:?}"
        )));
    }
    let mut points = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.trim().split(',').collect();
        let [method, snr, m, trials, errors, _rate] = f[..] else {
            return Err(Error::Parse(format!("bad results row {line:?}")));
        };
        let bad = |what: &str| Error::Parse(format!("bad {what} in row {line:?}"));
        points.push(CurvePoint {
            method: method.parse()?,
            snr_db: snr.parse().map_err(|_| bad("snr_db"))?,
            m: m.parse().map_err(|_| bad("m"))?,
            trials: trials.parse().map_err(|_| bad("trials"))?,
            errors: errors.parse().map_err(|_| bad("errors"))?,
        });
    }
    ErrorCurve::from_points(points)
}
