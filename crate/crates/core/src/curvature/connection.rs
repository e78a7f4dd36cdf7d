//! Levi-Civita connection of the block metric and the Ricci tensor obtained by
//! tracing the curvature tensor, with no use of the block formulas.

use rayon::prelude::*;

use crate::chevalley::StructureTable;
use crate::compact::CompactBasis;
use crate::error::Result;
use crate::involution::GradedDecomposition;
use crate::linalg::Q;
use crate::scalar::Scalar;

use super::{dispatch, MetricParams, RicciComponents};

/// Structure data the connection path needs: the compact bracket, `B(e,e)`, and blocks.
#[derive(Debug, Clone)]
pub struct BlockGeometry {
    pub table: StructureTable,
    pub norms: Vec<Q>,
    pub block_of: Vec<usize>,
    pub grading: [[Option<usize>; 4]; 4],
}

impl BlockGeometry {
    pub fn new(cb: &CompactBasis, decomp: &GradedDecomposition) -> Self {
        Self {
            table: cb.table.clone(),
            norms: cb.norms.clone(),
            block_of: decomp.block_of.clone(),
            grading: decomp.grading,
        }
    }

    pub fn dim(&self) -> usize {
        self.block_of.len()
    }

    /// `<e_a, e_b> = u_block(a) B(e_a, e_a)` on the diagonal.
    fn metric<S: Scalar>(&self, u: &[S; 4], a: usize) -> S {
        u[self.block_of[a]].clone() * S::from_ratio(self.norms[a])
    }
}

/// `nabla_x y = kappa(i, j) [x, y]` for `x in h_i`, `y in h_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTable<S> {
    pub kappa: [[S; 4]; 4],
}

impl<S: Scalar> ConnectionTable<S> {
    /// `kappa(i, j) = (u_k - u_i + u_j) / (2 u_k)` where `[h_i, h_j]` lies in `h_k`.
    pub fn new(u: &[S; 4], grading: &[[Option<usize>; 4]; 4]) -> Self {
        let kappa = [0, 1, 2, 3].map(|i| {
            [0, 1, 2, 3].map(|j| match grading[i][j] {
                Some(k) => {
                    (u[k].clone() - u[i].clone() + u[j].clone()) / (S::from_int(2) * u[k].clone())
                }
                None => S::zero(),
            })
        });
        Self { kappa }
    }

    /// `kappa(i, j) + kappa(j, i) = 1` wherever the bracket is nonzero.
    pub fn torsion_free(&self, grading: &[[Option<usize>; 4]; 4]) -> bool {
        (0..4).all(|i| {
            (0..4).all(|j| grading[i][j].is_none() || self.kappa[i][j].clone() + self.kappa[j][i].clone() == S::one())
        })
    }
}

type SparseS<S> = Vec<(usize, S)>;

fn lookup<S: Scalar>(v: &[(usize, S)], k: usize) -> Option<&S> {
    v.binary_search_by_key(&k, |(n, _)| *n).ok().map(|p| &v[p].1)
}

/// `nabla_{e_a} e_b` for every basis pair.
fn connection_images<S: Scalar>(geo: &BlockGeometry, conn: &ConnectionTable<S>) -> Vec<Vec<SparseS<S>>> {
    let n = geo.dim();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let k = conn.kappa[geo.block_of[a]][geo.block_of[b]].clone();
                    geo.table.bracket(a, b).iter().map(|(c, v)| (*c, k.clone() * S::from_ratio(*v))).collect()
                })
                .collect()
        })
        .collect()
}

/// `<nabla_z x, y> + <x, nabla_z y>` over all basis triples; first nonzero triple.
pub fn metric_compatibility_violation<S: Scalar>(geo: &BlockGeometry, u: &[S; 4]) -> Option<(usize, usize, usize)> {
    let conn = ConnectionTable::new(u, &geo.grading);
    let nab = connection_images(geo, &conn);
    let n = geo.dim();
    let tol = if S::is_exact() { 0.0 } else { 1e-12 };
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                let mut s = S::zero();
                if let Some(c) = lookup(&nab[z][x], y) {
                    s = s + c.clone() * geo.metric(u, y);
                }
                if let Some(c) = lookup(&nab[z][y], x) {
                    s = s + c.clone() * geo.metric(u, x);
                }
                if s.abs().to_f64() > tol {
                    return Some((z, x, y));
                }
            }
        }
    }
    None
}

/// Ricci data from the curvature tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionRicci<S> {
    /// `Ric(x, x) / <x, x>` for the first basis element of each block.
    pub components: [S; 4],
    /// `max |Ric(x, y)|` over distinct basis elements.
    pub off_diagonal_max: f64,
    /// Largest deviation of `Ric(x, x) / <x, x>` from the block value.
    pub in_block_spread: f64,
}

/// `Ric(y, z) = sum_k e^k(R(e_k, y) z)` with `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`.
pub fn ricci_connection<S: Scalar>(geo: &BlockGeometry, u: &[S; 4]) -> ConnectionRicci<S> {
    let conn = ConnectionTable::new(u, &geo.grading);
    let nab = connection_images(geo, &conn);
    let n = geo.dim();
    let coeff = |a: usize, b: usize, k: usize| lookup(&nab[a][b], k).cloned();

    let rows: Vec<Vec<S>> = (0..n)
        .into_par_iter()
        .map(|y| {
            (0..n)
                .map(|z| {
                    let mut acc = S::zero();
                    for k in 0..n {
                        // nabla_k nabla_y z
                        for (m, v) in &nab[y][z] {
                            if let Some(c) = coeff(k, *m, k) {
                                acc = acc + v.clone() * c;
                            }
                        }
                        // - nabla_y nabla_k z
                        for (m, v) in &nab[k][z] {
                            if let Some(c) = coeff(y, *m, k) {
                                acc = acc - v.clone() * c;
                            }
                        }
                        // - nabla_[k, y] z
                        for (m, v) in geo.table.bracket(k, y) {
                            if let Some(c) = coeff(*m, z, k) {
                                acc = acc - S::from_ratio(*v) * c;
                            }
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let mut off_diagonal_max: f64 = 0.0;
    for (y, row) in rows.iter().enumerate() {
        for (z, v) in row.iter().enumerate() {
            if y != z {
                off_diagonal_max = off_diagonal_max.max(v.abs().to_f64());
            }
        }
    }
    let eigen: Vec<S> = (0..n).map(|x| rows[x][x].clone() / geo.metric(u, x)).collect();
    let first = [0, 1, 2, 3].map(|b| geo.block_of.iter().position(|&k| k == b).expect("empty block"));
    let components = first.map(|x| eigen[x].clone());
    let in_block_spread = (0..n)
        .map(|x| (eigen[x].clone() - components[geo.block_of[x]].clone()).abs().to_f64())
        .fold(0.0, f64::max);
    ConnectionRicci { components, off_diagonal_max, in_block_spread }
}

/// `-tr((nabla_x - ad x)^2)` for a basis element `x`.
pub fn ricci_trace_form<S: Scalar>(geo: &BlockGeometry, u: &[S; 4], x: usize) -> S {
    let conn = ConnectionTable::new(u, &geo.grading);
    let bx = geo.block_of[x];
    let shifted = |b: usize| -> SparseS<S> {
        let k = conn.kappa[bx][geo.block_of[b]].clone() - S::one();
        geo.table.bracket(x, b).iter().map(|(c, v)| (*c, k.clone() * S::from_ratio(*v))).collect()
    };
    let mut trace = S::zero();
    for b in 0..geo.dim() {
        for (m, v) in shifted(b) {
            if let Some(c) = lookup(&shifted(m), b) {
                trace = trace + v * c.clone();
            }
        }
    }
    -trace
}

pub fn ricci_connection_path(u: &MetricParams, geo: &BlockGeometry) -> Result<RicciComponents> {
    dispatch(u, |v| Ok(ricci_connection(geo, v).components), |v| Ok(ricci_connection(geo, v).components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::closed_form::closed_form;
    use crate::model::PairModel;
    use crate::scalar::big;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn geo() -> &'static BlockGeometry {
        &PairModel::standard().unwrap().geometry
    }

    #[test]
    fn kappa_table() {
        let g = geo();
        let u = [big(3, 5), big(1, 1), big(2, 1), big(7, 11)];
        let t = ConnectionTable::new(&u, &g.grading);
        for i in 0..4 {
            assert_eq!(t.kappa[i][i], big(1, 2));
        }
        assert!(t.torsion_free(&g.grading));
        // x in h_1, y in h_2: (u_2 - u_1 + u_2) / (2 u_2)
        assert_eq!(t.kappa[0][1], big(7, 10));
    }

    #[test]
    fn bi_invariant_exact() {
        let u = [0, 1, 2, 3].map(|_| BigRational::from_integer(1.into()));
        let r = ricci_connection(geo(), &u);
        assert!(r.components.iter().all(|x| *x == big(9, 2)));
        assert_eq!(r.off_diagonal_max, 0.0);
        assert_eq!(r.in_block_spread, 0.0);
    }

    #[test]
    fn exact_agreement_with_closed_form() {
        let cm = &PairModel::standard().unwrap().casimir;
        let u = [big(3, 5), big(1, 1), big(2, 1), big(7, 11)];
        let r = ricci_connection(geo(), &u);
        assert_eq!(r.components, closed_form(&u, cm));
        assert_eq!(r.off_diagonal_max, 0.0);
        assert_eq!(r.in_block_spread, 0.0);
    }

    #[test]
    fn float_agreement_with_closed_form() {
        let cm = &PairModel::standard().unwrap().casimir;
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let u: [f64; 4] = [0; 4].map(|_| rng.gen_range(0.5..2.0));
            let r = ricci_connection(geo(), &u);
            let c = closed_form(&u, cm);
            for k in 0..4 {
                assert!((r.components[k] - c[k]).abs() < 1e-12);
            }
            assert!(r.off_diagonal_max < 1e-12);
            assert!(r.in_block_spread < 1e-12);
        }
    }

    #[test]
    fn metric_compatible() {
        let u = [big(3, 5), big(1, 1), big(2, 1), big(7, 11)];
        assert_eq!(metric_compatibility_violation(geo(), &u), None);
        assert_eq!(metric_compatibility_violation(geo(), &[0.9, 1.7, 0.55, 1.2]), None);
    }

    #[test]
    fn trace_form_matches_ricci() {
        let g = geo();
        let u = [big(3, 5), big(1, 1), big(2, 1), big(7, 11)];
        let r = ricci_connection(g, &u);
        for b in 0..4 {
            let x = g.block_of.iter().position(|&k| k == b).unwrap();
            let ric = ricci_trace_form(g, &u, x);
            assert_eq!(ric / g.metric(&u, x), r.components[b]);
        }
    }
}
