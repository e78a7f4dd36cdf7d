use num_traits::Zero;
use rayon::prelude::*;

use crate::compact::{invariant_form, CompactBasis};
use crate::error::{Error, Result};
use crate::involution::GradedDecomposition;
use crate::linalg::Q;
use crate::root_system::FormNormalization;
use crate::scalar::{ratio_string, Scalar};

/// `[k; ij] = sum (A^c_{ab})^2` over orthonormal `a in h_i`, `b in h_j`, `c in h_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleBracketTable {
    /// `values[k][i][j]`, 0-based blocks.
    pub values: Vec<Vec<Vec<Q>>>,
    pub dims: Vec<usize>,
    pub normalization: FormNormalization,
}

impl TripleBracketTable {
    pub fn blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> Q {
        self.values[k][i][j]
    }

    /// `sum_{i,j} [j; k i]`.
    pub fn sum_rule(&self, k: usize) -> Q {
        let n = self.blocks();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.values[j][k][i]).sum()
    }

    /// First `(k, i, j)` breaking `[k;ij] = [k;ji] = [j;ki]`.
    pub fn symmetry_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.blocks();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = self.values[k][i][j];
                    if v != self.values[k][j][i] || v != self.values[j][k][i] {
                        return Some((k, i, j));
                    }
                }
            }
        }
        None
    }

    /// Nonzero entries whose target block is not the one the grading allows.
    pub fn grading_violation(&self, grading: &[[Option<usize>; 4]; 4]) -> Option<(usize, usize, usize)> {
        let n = self.blocks();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if !self.values[k][i][j].is_zero() && grading[i][j] != Some(k) {
                        return Some((k, i, j));
                    }
                }
            }
        }
        None
    }

    /// The same table for the form `scale` times the current one.
    pub fn rescaled(&self, scale: Q, normalization: FormNormalization) -> Self {
        let values = self
            .values
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|v| *v / scale).collect()).collect())
            .collect();
        Self { values, dims: self.dims.clone(), normalization }
    }

    /// Nonzero `(k, i, j, value)` with `i <= j`, 0-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, Q)> {
        let n = self.blocks();
        let mut out = vec![];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = self.values[k][i][j];
                    if !v.is_zero() {
                        out.push((k, i, j, v));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .nonzero_entries()
            .into_iter()
            .map(|(k, i, j, v)| serde_json::json!({ "k": k + 1, "i": i + 1, "j": j + 1, "value": ratio_string(v) }))
            .collect();
        serde_json::json!({ "normalization": self.normalization.to_string(), "entries": entries })
    }
}

pub fn triple_brackets(
    decomp: &GradedDecomposition,
    cb: &CompactBasis,
    normalization: FormNormalization,
) -> Result<TripleBracketTable> {
    let g = invariant_form(cb, normalization)?.diagonal;
    let n = 4;
    let zero = || vec![vec![vec![Q::zero(); n]; n]; n];
    let values = (0..cb.dim())
        .into_par_iter()
        .fold(zero, |mut acc, a| {
            let i = decomp.block_of[a];
            for b in 0..cb.dim() {
                let j = decomp.block_of[b];
                for (c, coeff) in cb.table.bracket(a, b) {
                    let k = decomp.block_of[*c];
                    acc[k][i][j] += *coeff * *coeff * g[*c] / (g[a] * g[b]);
                }
            }
            acc
        })
        .reduce(zero, |mut x, y| {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        x[k][i][j] += y[k][i][j];
                    }
                }
            }
            x
        });
    Ok(TripleBracketTable { values, dims: decomp.dims.to_vec(), normalization })
}

/// Block Ricci eigenvalues for the metric `sum y_k B|h_k`, `B` the negative Killing form.
///
/// `r_k = 1/(2 y_k) + 1/(4 d_k) sum y_k/(y_j y_i) [k;ji] - 1/(2 d_k) sum y_j/(y_k y_i) [j;ki]`.
pub fn ricci_triple_bracket<S: Scalar>(y: &[S], tb: &TripleBracketTable) -> Result<Vec<S>> {
    if tb.normalization != FormNormalization::NegativeKilling {
        return Err(Error::NormalizationMismatch {
            expected: FormNormalization::NegativeKilling.to_string(),
            got: tb.normalization.to_string(),
        });
    }
    let n = tb.blocks();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: y.len() });
    }
    let two = S::from_int(2);
    let four = S::from_int(4);
    let r = (0..n)
        .map(|k| {
            let d = S::from_int(tb.dims[k] as i64);
            let mut plus = S::zero();
            let mut minus = S::zero();
            for i in 0..n {
                for j in 0..n {
                    let a = tb.values[k][j][i];
                    if !a.is_zero() {
                        plus = plus + y[k].clone() / (y[j].clone() * y[i].clone()) * S::from_ratio(a);
                    }
                    let b = tb.values[j][k][i];
                    if !b.is_zero() {
                        minus = minus + y[j].clone() / (y[k].clone() * y[i].clone()) * S::from_ratio(b);
                    }
                }
            }
            S::one() / (two.clone() * y[k].clone()) + plus / (four.clone() * d.clone()) - minus / (two.clone() * d)
        })
        .collect();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PairModel;
    use crate::scalar::big;

    fn tables() -> (TripleBracketTable, TripleBracketTable) {
        let m = PairModel::standard().unwrap();
        (
            triple_brackets(&m.decomp, &m.cb, FormNormalization::LongRoot2).unwrap(),
            triple_brackets(&m.decomp, &m.cb, FormNormalization::NegativeKilling).unwrap(),
        )
    }

    #[test]
    fn spot_values_long_root() {
        let (long, _) = tables();
        let q = Q::from_integer;
        assert_eq!(long.get(0, 0, 0), q(336));
        assert_eq!(long.get(0, 1, 1), q(56));
        assert_eq!(long.get(3, 1, 2), q(16));
        assert_eq!(long.get(1, 0, 1), q(56));
    }

    #[test]
    fn matches_casimir_times_dimension() {
        let m = PairModel::standard().unwrap();
        let (long, _) = tables();
        for i in 0..4 {
            for j in 0..4 {
                let k = i ^ j;
                let expected = m.casimir.get(i, j) * Q::from_integer(m.decomp.dims[j] as i64);
                assert_eq!(long.get(k, i, j), expected, "[{k};{i}{j}]");
            }
        }
    }

    #[test]
    fn negative_killing_is_long_root_over_18() {
        let (long, nk) = tables();
        assert_eq!(nk, long.rescaled(Q::from_integer(18), FormNormalization::NegativeKilling));
        assert_eq!(nk.get(0, 1, 1), Q::new(28, 9));
    }

    #[test]
    fn symmetry_grading_and_sum_rule() {
        let m = PairModel::standard().unwrap();
        let (long, nk) = tables();
        assert_eq!(long.symmetry_violation(), None);
        assert_eq!(long.grading_violation(&m.decomp.grading), None);
        for k in 0..4 {
            assert_eq!(nk.sum_rule(k), Q::from_integer(m.decomp.dims[k] as i64));
        }
        // 16 nonzero ordered triples, one per (i, j)
        let count = (0..4).flat_map(|k| (0..4).flat_map(move |i| (0..4).map(move |j| (k, i, j))))
            .filter(|&(k, i, j)| !long.get(k, i, j).is_zero())
            .count();
        assert_eq!(count, 16);
    }

    #[test]
    fn unit_metric_gives_quarter() {
        let (_, nk) = tables();
        let r = ricci_triple_bracket(&[0; 4].map(|_| big(1, 1)), &nk).unwrap();
        assert!(r.iter().all(|x| *x == big(1, 4)));
    }

    #[test]
    fn long_root_table_rejected() {
        let (long, _) = tables();
        assert!(matches!(
            ricci_triple_bracket(&[1.0; 4], &long),
            Err(Error::NormalizationMismatch { .. })
        ));
    }

    #[test]
    fn wrong_length_rejected() {
        let (_, nk) = tables();
        assert!(ricci_triple_bracket(&[1.0; 3], &nk).is_err());
    }
}
