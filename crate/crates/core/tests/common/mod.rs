#![allow(dead_code)]

use lmp::blocksparse::{BlockPartition, BlockSparseSignal, CMatrix, CVector, SensingMatrix};
use lmp::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cgauss<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, m: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(m, n, |_, _| cgauss(rng))
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| cgauss(rng))
}

/// One randomized `y = A x + n` problem.
pub struct Problem {
    pub a: SensingMatrix,
    pub x: BlockSparseSignal,
    pub noise: CVector,
    pub y: CVector,
    pub used: Vec<usize>,
}

/// Mixed-dimension corpus instance. Roughly half the matrices are tall and
/// close to having orthonormal columns so that the ZD-GroTh condition holds
/// for a good share of the corpus.
pub fn corpus_problem(seed: u64) -> Problem {
    let mut rng = rng(seed);
    let b = rng.random_range(2..=8usize);
    let sizes: Vec<usize> = (0..b).map(|_| rng.random_range(1..=4)).collect();
    let partition = BlockPartition::new(sizes).unwrap();
    let n = partition.total_len();
    let m = rng.random_range((n / 2).max(2)..=2 * n + 4);

    let mut entries = if m >= n && rng.random_bool(0.6) {
        let q = gaussian_matrix(&mut rng, m, n).qr().q();
        let eps = [0.0, 0.01, 0.05, 0.2][rng.random_range(0..4)];
        q + gaussian_matrix(&mut rng, m, n) * Complex64::from(eps / (m as f64).sqrt())
    } else {
        gaussian_matrix(&mut rng, m, n) / Complex64::from((m as f64).sqrt())
    };
    for i in 0..b {
        let scale: f64 = rng.random_range(0.5..2.0);
        for c in partition.range(i) {
            for v in entries.column_mut(c).iter_mut() {
                *v *= scale;
            }
        }
    }
    let a = SensingMatrix::new(entries, partition.clone()).unwrap();

    let k = rng.random_range(1..b);
    let mut used = sample(&mut rng, b, k).into_vec();
    used.sort_unstable();
    let spread = [0.0, 0.5, 2.0][rng.random_range(0..3)];
    let mut values = CVector::zeros(n);
    for &i in &used {
        let dir = gaussian_vector(&mut rng, partition.size(i)).normalize();
        let norm = 10f64.powf(-rng.random_range(0.0..=spread));
        values
            .rows_range_mut(partition.range(i))
            .copy_from(&(dir * Complex64::from(norm)));
    }
    let x = BlockSparseSignal::new(values, partition).unwrap();

    let clean = a.entries() * x.values();
    let eta = [0.0, 1e-3, 1e-2, 0.1, 0.5][rng.random_range(0..5)];
    let noise = if eta == 0.0 {
        CVector::zeros(m)
    } else {
        gaussian_vector(&mut rng, m).normalize() * Complex64::from(eta * clean.norm())
    };
    let y = &clean + &noise;
    Problem {
        a,
        x,
        noise,
        y,
        used,
    }
}
