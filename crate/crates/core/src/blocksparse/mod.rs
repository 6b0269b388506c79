//! Block-partitioned complex linear algebra shared by every detector.

mod io;
pub(crate) mod io_helpers {
    pub(crate) use super::io::{content_lines, parse_numbers};
}
mod kernels;
mod matrix;
mod partition;
mod signal;

pub use io::{read_instance, read_matrix, write_instance, write_matrix, Instance};
pub(crate) use kernels::coherence_from_gram;
pub use kernels::{
    block_coherence, block_correlation, block_least_squares, hermitian_pseudo_inv_sqrt,
    min_block_singular, spectral_norm, whitening_factor,
};
pub use matrix::{MeasurementVector, SensingMatrix, DEFAULT_RANK_TOLERANCE};
pub use partition::BlockPartition;
pub use signal::{signal_stats, BlockSparseSignal, SignalStats};

pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
