//! Non-uniform wavelet sampling: Haar-like `{-1, 0, +1}` pulse dictionaries,
//! the DFT-domain effective sensing matrix, and greedy row selection that
//! minimises block coherence.

mod dictionary;
mod effective;
mod greedy;
mod wavelet;

pub use dictionary::{
    build_dictionary, read_dictionary, write_dictionary, DictionaryGrid, WaveletDictionary,
};
pub use effective::{effective_matrix, effective_row, unitary_dft};
pub use greedy::{
    greedy_select, read_selection, selection_matrix, write_selection, SelectionResult,
};
pub use wavelet::{haar_wavelet, WaveletParams};
