use num_traits::Zero;
use rayon::prelude::*;

use crate::compact::CompactBasis;
use crate::error::{Error, Result};
use crate::involution::GradedDecomposition;
use crate::linalg::Q;
use crate::scalar::ratio_string;

/// `c[i][j]`: `sum over an orthonormal basis e of h_i of ad(e)^2` acts on `h_j` as `-c[i][j]`.
///
/// Indices are 0-based block numbers; the form is the long-root-2 one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasimirMatrix {
    pub entries: [[Q; 4]; 4],
}

impl CasimirMatrix {
    pub fn get(&self, i: usize, j: usize) -> Q {
        self.entries[i][j]
    }

    pub fn column_sums(&self) -> [Q; 4] {
        [0, 1, 2, 3].map(|j| (0..4).map(|i| self.entries[i][j]).sum())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|row| row.iter().map(|q| ratio_string(*q)).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.to_strings())
    }
}

/// Scalar by which `sum_{e in summed} ad(e)^2 / B(e,e)` acts on `acted`, or a report when it is not a scalar.
fn block_scalar(cb: &CompactBasis, summed: &[usize], acted: &[usize], blocks: (usize, usize)) -> Result<Q> {
    let values: Vec<Q> = acted
        .par_iter()
        .map(|&f| {
            let image = cb.casimir_apply(summed, f);
            let off_diagonal = image.iter().enumerate().any(|(k, c)| k != f && !c.is_zero());
            if off_diagonal {
                None
            } else {
                Some(-image[f])
            }
        })
        .collect::<Option<Vec<Q>>>()
        .ok_or(Error::NonScalar { summed: blocks.0, acted: blocks.1 })?;
    let first = values[0];
    if values.iter().any(|v| *v != first) {
        return Err(Error::NonScalar { summed: blocks.0, acted: blocks.1 });
    }
    Ok(first)
}

pub fn casimir_matrix(decomp: &GradedDecomposition, cb: &CompactBasis) -> Result<CasimirMatrix> {
    let mut entries = [[Q::zero(); 4]; 4];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = block_scalar(cb, &decomp.blocks[i], &decomp.blocks[j], (i, j))?;
        }
    }
    Ok(CasimirMatrix { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PairModel;

    #[test]
    fn standard_pair_matrix() {
        let m = PairModel::standard().unwrap();
        let c = casimir_matrix(&m.decomp, &m.cb).unwrap();
        let q = Q::from_integer;
        assert_eq!(c.get(0, 0), q(12));
        for j in 1..4 {
            assert_eq!(c.get(0, j), q(7));
            assert_eq!(c.get(j, 0), q(2));
            assert_eq!(c.get(j, j), q(7));
            for i in 1..4 {
                if i != j {
                    assert_eq!(c.get(i, j), q(2));
                }
            }
        }
        assert_eq!(c.column_sums(), [q(18); 4]);
    }

    #[test]
    fn mixed_summation_is_not_scalar() {
        let m = PairModel::standard().unwrap();
        // acts by 4 on h_1 and by 9 on h_2
        let summed: Vec<usize> = m.decomp.blocks[1].iter().chain(&m.decomp.blocks[2]).copied().collect();
        let acted: Vec<usize> = m.decomp.blocks[0].iter().chain(&m.decomp.blocks[1]).copied().collect();
        assert!(matches!(
            block_scalar(&m.cb, &summed, &acted, (9, 9)),
            Err(Error::NonScalar { .. })
        ));
    }
}
