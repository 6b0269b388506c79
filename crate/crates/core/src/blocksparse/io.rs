use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{BlockPartition, BlockSparseSignal, CMatrix, SensingMatrix};
use crate::{Error, Result};

/// Writes the text interchange format: a header `M N B`, the block sizes on
/// one line, then `M` rows of `2N` interleaved real/imaginary values.
pub fn write_matrix<W: Write>(mut out: W, a: &SensingMatrix) -> Result<()> {
    let p = a.partition();
    writeln!(out, "{} {} {}", a.rows(), a.cols(), p.num_blocks())?;
    let sizes: Vec<String> = p.sizes().iter().map(usize::to_string).collect();
    writeln!(out, "{}", sizes.join(" "))?;
    let mut line = String::new();
    for r in 0..a.rows() {
        line.clear();
        for c in 0..a.cols() {
            let z = a.entries()[(r, c)];
            if c > 0 {
                line.push(' ');
            }
            // Debug formatting is the shortest exact round-trip form
            line.push_str(&format!("{:?} {:?}", z.re, z.im));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(input: R) -> Result<SensingMatrix> {
    let mut lines = content_lines(input)?.into_iter();
    parse_matrix(&mut lines)
}

pub(crate) fn content_lines<R: BufRead>(input: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push(t.to_string());
        }
    }
    Ok(out)
}

pub(crate) fn parse_numbers<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::Parse(format!("bad number {tok:?}")))
        })
        .collect()
}

pub(crate) fn parse_complex_row(line: &str, expected: usize) -> Result<Vec<Complex64>> {
    let nums: Vec<f64> = parse_numbers(line)?;
    if nums.len() != 2 * expected {
        return Err(Error::Parse(format!(
            "expected {} values, found {}",
            2 * expected,
            nums.len()
        )));
    }
    Ok(nums
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

pub(crate) fn parse_matrix<I: Iterator<Item = String>>(lines: &mut I) -> Result<SensingMatrix> {
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing `M N B` header".into()))?;
    let dims: Vec<usize> = parse_numbers(&header)?;
    let [m, n, b] = dims[..] else {
        return Err(Error::Parse(format!("bad header {header:?}")));
    };
    let sizes: Vec<usize> = parse_numbers(
        &lines
            .next()
            .ok_or_else(|| Error::Parse("missing block sizes".into()))?,
    )?;
    if sizes.len() != b {
        return Err(Error::Parse(format!(
            "header declares {b} blocks but {} sizes given",
            sizes.len()
        )));
    }
    let partition = BlockPartition::new(sizes)?;
    if partition.total_len() != n {
        return Err(Error::Parse(format!(
            "block sizes sum to {} but N = {n}",
            partition.total_len()
        )));
    }
    let mut entries = CMatrix::zeros(m, n);
    for r in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing matrix row {r}")))?;
        for (c, z) in parse_complex_row(&line, n)?.into_iter().enumerate() {
            entries[(r, c)] = z;
        }
    }
    SensingMatrix::new(entries, partition)
}

/// A matrix, a block-sparse signal over its partition and a noise norm:
/// the input of a guarantee evaluation.
#[derive(Debug, Clone)]
pub struct Instance {
    pub matrix: SensingMatrix,
    pub signal: BlockSparseSignal,
    pub noise_norm: f64,
}

/// Matrix block as in [`write_matrix`], then `signal` followed by `2N`
/// interleaved values, then `noise_norm <value>`.
pub fn write_instance<W: Write>(mut out: W, inst: &Instance) -> Result<()> {
    write_matrix(&mut out, &inst.matrix)?;
    let values: Vec<String> = inst
        .signal
        .values()
        .iter()
        .map(|z| format!("{:?} {:?}", z.re, z.im))
        .collect();
    writeln!(out, "signal {}", values.join(" "))?;
    writeln!(out, "noise_norm {:?}", inst.noise_norm)?;
    Ok(())
}

pub fn read_instance<R: BufRead>(input: R) -> Result<Instance> {
    let mut lines = content_lines(input)?.into_iter();
    let matrix = parse_matrix(&mut lines)?;
    let mut tagged = |tag: &str| -> Result<String> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing `{tag}` line")))?;
        match line.split_once(char::is_whitespace) {
            Some((t, rest)) if t == tag => Ok(rest.to_string()),
            _ => Err(Error::Parse(format!(
                "expected `{tag}` line, found {line:?}"
            ))),
        }
    };
    let values = parse_complex_row(&tagged("signal")?, matrix.cols())?;
    let signal =
        BlockSparseSignal::new(super::CVector::from_vec(values), matrix.partition().clone())?;
    let noise: Vec<f64> = parse_numbers(&tagged("noise_norm")?)?;
    let [noise_norm] = noise[..] else {
        return Err(Error::Parse("noise_norm takes one value".into()));
    };
    if lines.next().is_some() {
        return Err(Error::Parse("trailing content after noise_norm".into()));
    }
    Ok(Instance {
        matrix,
        signal,
        noise_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn round_trip_is_exact(
            vals in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL, 24),
        ) {
            let entries = CMatrix::from_fn(3, 4, |r, c| {
                Complex64::new(vals[2 * (4 * r + c)], vals[2 * (4 * r + c) + 1])
            });
            let a = SensingMatrix::new(entries.clone(), BlockPartition::new(vec![1, 3]).unwrap()).unwrap();
            let mut buf = Vec::new();
            write_matrix(&mut buf, &a).unwrap();
            let back = read_matrix(&buf[..]).unwrap();
            prop_assert_eq!(back.entries(), &entries);
            prop_assert_eq!(back.partition(), a.partition());
        }
    }

    #[test]
    fn seventeen_digit_decimals_survive() {
        let text = "1 2 2\n1 1\n0.12345678901234567 -1e-300 3.0000000000000004 2.5\n";
        let a = read_matrix(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        let b = read_matrix(&buf[..]).unwrap();
        assert_eq!(a.entries(), b.entries());
        assert_eq!(a.entries()[(0, 0)].re, 0.12345678901234567);
    }

    #[test]
    fn malformed_inputs() {
        assert!(read_matrix("".as_bytes()).is_err());
        assert!(read_matrix("1 2 2\n1 2\n0 0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix("1 2 2\n1 1\n0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix("2 2 2\n1 1\n0 0 0 0\n".as_bytes()).is_err());
        assert!(read_matrix("1 2 2\n1 1\n0 x 0 0\n".as_bytes()).is_err());
    }

    #[test]
    fn instance_round_trip() {
        let p = BlockPartition::uniform(2, 2).unwrap();
        let a = SensingMatrix::new(CMatrix::identity(3, 4), p.clone()).unwrap();
        let x = crate::blocksparse::CVector::from_vec(vec![
            Complex64::new(0.1, -2.0),
            Complex64::new(1.0 / 3.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let inst = Instance {
            matrix: a,
            signal: BlockSparseSignal::new(x, p).unwrap(),
            noise_norm: 0.25,
        };
        let mut buf = Vec::new();
        write_instance(&mut buf, &inst).unwrap();
        let back = read_instance(&buf[..]).unwrap();
        assert_eq!(back.matrix.entries(), inst.matrix.entries());
        assert_eq!(back.signal.values(), inst.signal.values());
        assert_eq!(back.noise_norm, 0.25);

        let text = String::from_utf8(buf).unwrap();
        let truncated = text.replace("noise_norm 0.25\n", "");
        assert!(read_instance(truncated.as_bytes()).is_err());
        let extra = format!("{text}1\n");
        assert!(read_instance(extra.as_bytes()).is_err());
        let short = text.replace("signal 0.1 -2.0", "signal 0.1");
        assert!(read_instance(short.as_bytes()).is_err());
    }
}
