use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use rand::seq::index::sample;
use rayon::prelude::*;

use super::{effective_matrix, effective_row, WaveletDictionary};
use crate::blocksparse::io_helpers::{content_lines, parse_numbers};
use crate::blocksparse::{coherence_from_gram, BlockPartition, CMatrix, SensingMatrix};
use crate::seeding::substream;
use crate::{Error, Result};

/// Outcome of greedy row selection.
#[derive(Debug, Clone)]
pub struct SelectionResult {
    /// Dictionary row indices in the order they were chosen.
    pub chosen: Vec<usize>,
    pub matrix: SensingMatrix,
    /// Block coherence after each step.
    pub coherence_trajectory: Vec<f64>,
}

/// Greedily picks `m` dictionary rows, each time adding the row whose
/// inclusion gives the lowest block coherence (lowest row index on ties).
///
/// With `candidates_per_step = Some(k)`, each step scans a uniform random
/// subset of `k` remaining rows drawn from a stream keyed by `(seed, step)`;
/// `None` scans every remaining row. Because the stream depends only on the
/// step, a selection of `m` rows is the prefix of any longer selection made
/// with the same arguments.
pub fn greedy_select(
    dict: &WaveletDictionary,
    partition: &BlockPartition,
    m: usize,
    candidates_per_step: Option<usize>,
    seed: u64,
    rank_tolerance: f64,
) -> Result<SelectionResult> {
    let n = dict.signal_len();
    if partition.total_len() != n {
        return Err(Error::DimensionMismatch(format!(
            "partition covers {} but dictionary rows have length {n}",
            partition.total_len()
        )));
    }
    if m == 0 || m > dict.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot select {m} rows from a dictionary of {}",
            dict.len()
        )));
    }
    if candidates_per_step == Some(0) {
        return Err(Error::InvalidArgument(
            "candidates_per_step must be positive".into(),
        ));
    }

    let rows: Vec<Vec<Complex64>> = dict.rows().iter().map(|r| effective_row(r)).collect();
    let mut gram = CMatrix::zeros(n, n);
    let mut available = vec![true; dict.len()];
    let mut chosen = Vec::with_capacity(m);
    let mut trajectory = Vec::with_capacity(m);

    for step in 0..m {
        let remaining: Vec<usize> = (0..dict.len()).filter(|&i| available[i]).collect();
        let pool: Vec<usize> = match candidates_per_step {
            Some(k) if k < remaining.len() => {
                let mut rng = substream(seed, &[step as u64]);
                let mut picked: Vec<usize> = sample(&mut rng, remaining.len(), k)
                    .into_iter()
                    .map(|i| remaining[i])
                    .collect();
                picked.sort_unstable();
                picked
            }
            _ => remaining,
        };

        // candidates whose coherence provably exceeds the best completed one
        // are abandoned; ties are never abandoned, so the result does not
        // depend on evaluation order
        let bound = AtomicU64::new(f64::INFINITY.to_bits());
        let (best_row, best_mu) = pool
            .par_iter()
            .filter_map(|&c| {
                let limit = f64::from_bits(bound.load(Ordering::Relaxed));
                let mut g = gram.clone();
                rank_one_update(&mut g, &rows[c]);
                let mu = coherence_from_gram(&g, partition, rank_tolerance, limit)?;
                let _ = bound.fetch_update(Ordering::Relaxed, Ordering::Relaxed, |cur| {
                    (mu < f64::from_bits(cur)).then_some(mu.to_bits())
                });
                Some((c, mu))
            })
            .reduce_with(|a, b| {
                if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            })
            .expect("the best candidate is never abandoned");

        available[best_row] = false;
        rank_one_update(&mut gram, &rows[best_row]);
        chosen.push(best_row);
        trajectory.push(best_mu);
    }

    let matrix = selection_matrix(dict, &chosen, partition)?;
    Ok(SelectionResult {
        chosen,
        matrix,
        coherence_trajectory: trajectory,
    })
}

/// Effective sensing matrix of the given dictionary rows.
pub fn selection_matrix(
    dict: &WaveletDictionary,
    chosen: &[usize],
    partition: &BlockPartition,
) -> Result<SensingMatrix> {
    let n = dict.signal_len();
    if let Some(&bad) = chosen.iter().find(|&&i| i >= dict.len()) {
        return Err(Error::InvalidArgument(format!(
            "row {bad} outside a dictionary of {}",
            dict.len()
        )));
    }
    let theta = CMatrix::from_fn(chosen.len(), n, |r, c| {
        Complex64::new(dict.rows()[chosen[r]][c] as f64, 0.0)
    });
    effective_matrix(&theta, n, partition)
}

/// `G += a^H a` for a row vector `a`.
fn rank_one_update(g: &mut CMatrix, a: &[Complex64]) {
    let n = a.len();
    for col in 0..n {
        let al = a[col];
        let column = &mut g.as_mut_slice()[col * n..(col + 1) * n];
        for (v, ak) in column.iter_mut().zip(a) {
            *v += ak.conj() * al;
        }
    }
}

/// Header `M`, then one row index per line.
pub fn write_selection<W: Write>(mut out: W, chosen: &[usize]) -> Result<()> {
    writeln!(out, "{}", chosen.len())?;
    for i in chosen {
        writeln!(out, "{i}")?;
    }
    Ok(())
}

pub fn read_selection<R: BufRead>(input: R) -> Result<Vec<usize>> {
    let lines = content_lines(input)?;
    let (head, rest) = lines
        .split_first()
        .ok_or_else(|| Error::Parse("empty selection file".into()))?;
    let m: Vec<usize> = parse_numbers(head)?;
    let [m] = m[..] else {
        return Err(Error::Parse("selection header must be `M`".into()));
    };
    let chosen = rest
        .iter()
        .map(|l| {
            let v: Vec<usize> = parse_numbers(l)?;
            match v[..] {
                [i] => Ok(i),
                _ => Err(Error::Parse(format!("bad selection line {l:?}"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if chosen.len() != m {
        return Err(Error::Parse(format!(
            "header declares {m} indices, found {}",
            chosen.len()
        )));
    }
    let mut sorted = chosen.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse("duplicate index in selection".into()));
    }
    Ok(chosen)
}
