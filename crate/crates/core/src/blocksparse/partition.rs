use std::ops::Range;

use crate::{Error, Result};

/// Contiguous block layout of a length-`N` vector (or the columns of an
/// `M x N` matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    total_len: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockPartition {
    /// Requires at least two blocks, each of size at least one.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 blocks, got {}",
                sizes.len()
            )));
        }
        if let Some(pos) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidPartition(format!("block {pos} has size 0")));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        Ok(Self {
            total_len: acc,
            sizes,
            offsets,
        })
    }

    /// `blocks` blocks of `size` entries each.
    pub fn uniform(blocks: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; blocks])
    }

    pub fn total_len(&self) -> usize {
        self.total_len
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn size(&self, block: usize) -> usize {
        self.sizes[block]
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn range(&self, block: usize) -> Range<usize> {
        self.offsets[block]..self.offsets[block] + self.sizes[block]
    }

    pub(crate) fn check_index(&self, block: usize) -> Result<()> {
        if block < self.sizes.len() {
            Ok(())
        } else {
            Err(Error::BlockIndex {
                index: block,
                blocks: self.sizes.len(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets_are_prefix_sums() {
        let p = BlockPartition::new(vec![3, 1, 4]).unwrap();
        assert_eq!(p.total_len(), 8);
        assert_eq!(p.offsets(), &[0, 3, 4]);
        assert_eq!(p.range(2), 4..8);
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(BlockPartition::new(vec![5]).is_err());
        assert!(BlockPartition::new(vec![2, 0, 2]).is_err());
        assert!(BlockPartition::uniform(1, 10).is_err());
    }
}
