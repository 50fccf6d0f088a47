use super::schatten::{norm_of_singular_values, singular_values};
use super::{CMatrix, SchattenExponent};
use crate::error::{Error, Result};

/// Finite direct sum `⊕ blocks`.
#[derive(Clone, Debug)]
pub struct BlockDiagonal {
    blocks: Vec<CMatrix>,
}

pub fn direct_sum(blocks: Vec<CMatrix>) -> Result<BlockDiagonal> {
    if blocks.is_empty() {
        return Err(Error::EmptyBlockList);
    }
    for b in &blocks {
        if b.nrows() != b.ncols() {
            return Err(Error::NotSquare {
                rows: b.nrows(),
                cols: b.ncols(),
            });
        }
    }
    Ok(BlockDiagonal { blocks })
}

impl BlockDiagonal {
    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.nrows()).sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            let k = b.nrows();
            out.view_mut((offset, offset), (k, k)).copy_from(b);
            offset += k;
        }
        out
    }

    /// Norm computed from the union of the blocks' singular values.
    pub fn schatten_norm(&self, p: SchattenExponent) -> f64 {
        let s: Vec<f64> = self.blocks.iter().flat_map(singular_values).collect();
        norm_of_singular_values(&s, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::{c64, schatten_norm};

    #[test]
    fn two_scalars() {
        let bd = direct_sum(vec![
            CMatrix::from_element(1, 1, c64(1.0, 0.0)),
            CMatrix::from_element(1, 1, c64(2.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(bd.dim(), 2);
        let norm = schatten_norm(&bd.to_dense(), SchattenExponent::Finite(2.0));
        assert!((norm - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty_and_rectangular() {
        assert!(matches!(direct_sum(vec![]), Err(Error::EmptyBlockList)));
        assert!(matches!(
            direct_sum(vec![CMatrix::zeros(1, 2)]),
            Err(Error::NotSquare { .. })
        ));
    }
}
