use std::collections::HashSet;
use std::io::{BufRead, Write};

use super::{haar_wavelet, WaveletParams};
use crate::blocksparse::io_helpers::{content_lines, parse_numbers};
use crate::{Error, Result};

/// Overcomplete set of `L` wavelet rows of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDictionary {
    rows: Vec<Vec<i8>>,
    params: Vec<WaveletParams>,
    n: usize,
}

impl WaveletDictionary {
    /// Regenerates the rows from their parameters.
    pub fn from_params(params: Vec<WaveletParams>, n: usize) -> Result<Self> {
        let rows = params
            .iter()
            .map(|&p| haar_wavelet(p, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows, params, n })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn signal_len(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.rows
    }

    pub fn params(&self) -> &[WaveletParams] {
        &self.params
    }
}

/// Parameter grid of a dictionary.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryGrid {
    pub tau_step: usize,
    pub rho_set: Vec<usize>,
    pub halfperiod_set: Vec<usize>,
    pub cap: Option<usize>,
}

impl Default for DictionaryGrid {
    fn default() -> Self {
        Self {
            tau_step: 2,
            rho_set: vec![25, 50, 100, 200],
            halfperiod_set: vec![1, 2, 4, 5, 10, 20, 25, 50],
            cap: Some(4000),
        }
    }
}

impl DictionaryGrid {
    pub fn build(&self, n: usize) -> Result<WaveletDictionary> {
        build_dictionary(
            n,
            self.tau_step,
            &self.rho_set,
            &self.halfperiod_set,
            self.cap,
        )
    }
}

/// Enumerates `(rho, h, tau)` lexicographically with `tau` on multiples of
/// `tau_step`, skipping windows that overrun `n` and rows identical to an
/// earlier one, keeping at most `cap` rows.
pub fn build_dictionary(
    n: usize,
    tau_step: usize,
    rho_set: &[usize],
    halfperiod_set: &[usize],
    cap: Option<usize>,
) -> Result<WaveletDictionary> {
    if n == 0 || tau_step == 0 {
        return Err(Error::InvalidArgument(
            "N and tau_step must be positive".into(),
        ));
    }
    if let Some(&r) = rho_set.iter().find(|&&r| r == 0 || r > n) {
        return Err(Error::InvalidArgument(format!(
            "width {r} invalid for N = {n}"
        )));
    }
    if halfperiod_set.contains(&0) {
        return Err(Error::InvalidArgument(
            "half-period must be positive".into(),
        ));
    }
    let mut rhos = rho_set.to_vec();
    rhos.sort_unstable();
    rhos.dedup();
    let mut halves = halfperiod_set.to_vec();
    halves.sort_unstable();
    halves.dedup();

    let limit = cap.unwrap_or(usize::MAX);
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    let mut params = Vec::new();
    'grid: for &rho in &rhos {
        for &half_period in &halves {
            for tau in (0..n).step_by(tau_step) {
                if tau + rho > n {
                    break;
                }
                if rows.len() == limit {
                    break 'grid;
                }
                let p = WaveletParams {
                    tau,
                    rho,
                    half_period,
                };
                let row = haar_wavelet(p, n)?;
                if seen.insert(row.clone()) {
                    rows.push(row);
                    params.push(p);
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty wavelet grid".into()));
    }
    Ok(WaveletDictionary { rows, params, n })
}

/// Header `L N`, then one `tau rho half_period` line per row.
pub fn write_dictionary<W: Write>(mut out: W, dict: &WaveletDictionary) -> Result<()> {
    writeln!(out, "{} {}", dict.len(), dict.n)?;
    for p in &dict.params {
        writeln!(out, "{} {} {}", p.tau, p.rho, p.half_period)?;
    }
    Ok(())
}

pub fn read_dictionary<R: BufRead>(input: R) -> Result<WaveletDictionary> {
    let lines = content_lines(input)?;
    let mut it = lines.iter();
    let header: Vec<usize> = parse_numbers(
        it.next()
            .ok_or_else(|| Error::Parse("empty dictionary file".into()))?,
    )?;
    let [l, n] = header[..] else {
        return Err(Error::Parse("dictionary header must be `L N`".into()));
    };
    let params = it
        .map(|line| {
            let v: Vec<usize> = parse_numbers(line)?;
            match v[..] {
                [tau, rho, half_period] => Ok(WaveletParams {
                    tau,
                    rho,
                    half_period,
                }),
                _ => Err(Error::Parse(format!("bad dictionary row {line:?}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if params.len() != l {
        return Err(Error::Parse(format!(
            "header declares {l} rows, found {}",
            params.len()
        )));
    }
    WaveletDictionary::from_params(params, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_haar_row() {
        let d = build_dictionary(8, 8, &[8], &[4], None).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.rows()[0], vec![1, 1, 1, 1, -1, -1, -1, -1]);
    }

    #[test]
    fn default_grid_for_two_hundred_samples() {
        let d = DictionaryGrid::default().build(200).unwrap();
        assert!(d.len() >= 1000, "L = {}", d.len());
        assert!(d.len() <= 4000);
        for (row, p) in d.rows().iter().zip(d.params()) {
            assert!(row.iter().all(|v| matches!(v, -1..=1)));
            assert_eq!(row, &haar_wavelet(*p, 200).unwrap());
        }
        let unique: HashSet<_> = d.rows().iter().collect();
        assert_eq!(unique.len(), d.len());
    }

    #[test]
    fn duplicates_are_removed() {
        // every h >= rho yields the same all-ones window
        let d = build_dictionary(16, 4, &[4], &[4, 8, 16], None).unwrap();
        let grid_size = 4 * 3;
        assert!(d.len() < grid_size);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn ordering_and_cap() {
        let d = build_dictionary(16, 4, &[8, 4], &[2, 1], Some(5)).unwrap();
        assert_eq!(d.len(), 5);
        let first = d.params()[0];
        assert_eq!((first.rho, first.half_period, first.tau), (4, 1, 0));
        let keys: Vec<_> = d
            .params()
            .iter()
            .map(|p| (p.rho, p.half_period, p.tau))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn empty_grid_and_bad_widths() {
        assert!(build_dictionary(8, 1, &[], &[1], None).is_err());
        assert!(build_dictionary(8, 1, &[9], &[1], None).is_err());
        assert!(build_dictionary(8, 1, &[4], &[0], None).is_err());
    }

    #[test]
    fn file_round_trip() {
        let d = build_dictionary(32, 3, &[8, 16], &[1, 2, 4], Some(40)).unwrap();
        let mut buf = Vec::new();
        write_dictionary(&mut buf, &d).unwrap();
        assert_eq!(read_dictionary(&buf[..]).unwrap(), d);
        assert!(read_dictionary("2 8\n0 4 1\n".as_bytes()).is_err());
        assert!(read_dictionary("1 8\n6 4 1\n".as_bytes()).is_err());
    }
}
