//! The compact real form and its invariant form.
//!
//! For each positive root `a` the compact basis carries `u_a = x_a - x_-a` and
//! `v_a = i (x_a + x_-a)`; the Cartan part is a Gram-Schmidt orthogonalization
//! of the `i h_k`. The basis is never normalized: downstream formulas divide
//! by the exact squared norms `B(e, e)` instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::chevalley::{ChevalleyAlgebra, SparseVec, StructureTable};
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, Q};
use crate::root_system::{FormNormalization, RootSystemData, RootVector};

/// Gaussian rational `re + i im`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Gq {
    re: Q,
    im: Q,
}

impl Gq {
    fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }
    fn imag(im: Q) -> Self {
        Self { re: Q::zero(), im }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn scale(self, q: Q) -> Self {
        Self { re: self.re * q, im: self.im * q }
    }
}

impl Add for Gq {
    type Output = Gq;
    fn add(self, o: Gq) -> Gq {
        Gq { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Gq {
    type Output = Gq;
    fn sub(self, o: Gq) -> Gq {
        Gq { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Gq {
    type Output = Gq;
    fn mul(self, o: Gq) -> Gq {
        Gq { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq { re: -self.re, im: -self.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompactLabel {
    /// Orthogonalized Cartan element `t_k`.
    Cartan(usize),
    /// `u_a` for the positive root with the given index.
    U(usize),
    /// `v_a` for the positive root with the given index.
    V(usize),
}

impl CompactLabel {
    pub fn root(&self) -> Option<usize> {
        match self {
            CompactLabel::Cartan(_) => None,
            CompactLabel::U(k) | CompactLabel::V(k) => Some(*k),
        }
    }
}

impl fmt::Display for CompactLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactLabel::Cartan(k) => write!(f, "t{}", k + 1),
            CompactLabel::U(k) => write!(f, "u{}", k + 1),
            CompactLabel::V(k) => write!(f, "v{}", k + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompactBasis {
    pub rank: usize,
    pub labels: Vec<CompactLabel>,
    /// Positive roots, indexed like the `U`/`V` labels.
    pub positive_roots: Vec<RootVector>,
    /// `B(e, e)` under the long-root-2 normalization.
    pub norms: Vec<Q>,
    /// Real structure constants on the compact basis.
    pub table: StructureTable,
}

impl CompactBasis {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Q {
        let v = self.table.bracket(i, j);
        v.binary_search_by_key(&k, |(n, _)| *n)
            .map(|p| v[p].1)
            .unwrap_or_else(|_| Q::zero())
    }

    /// `B([e_i, e_j], e_k)` in the long-root-2 normalization.
    pub fn structure_form(&self, i: usize, j: usize, k: usize) -> Q {
        self.coeff(i, j, k) * self.norms[k]
    }

    /// `sum_{e in summed} ad(e)^2 / B(e,e)` applied to basis element `f`.
    pub fn casimir_apply(&self, summed: &[usize], f: usize) -> Vec<Q> {
        let n = self.dim();
        let mut inner = vec![Q::zero(); n];
        let mut out = vec![Q::zero(); n];
        for &e in summed {
            inner.iter_mut().for_each(|x| *x = Q::zero());
            for (k, c) in self.table.bracket(e, f) {
                inner[*k] = *c;
            }
            let sparse: SparseVec = inner
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, *c))
                .collect();
            self.table.bracket_basis_into(e, &sparse, Q::one() / self.norms[e], &mut out);
        }
        out
    }

    /// Check `B([e_i, e_j], e_k) = B(e_i, [e_j, e_k])` on every basis triple.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = self.coeff(i, j, k) * self.norms[k];
                    let rhs = self.norms[i] * self.coeff(j, k, i);
                    if lhs != rhs {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Check `B([e, x], y) + B(x, [e, y]) = 0` for all basis `e, x, y`.
    pub fn ad_antisymmetry_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for e in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let s = self.coeff(e, x, y) * self.norms[y] + self.norms[x] * self.coeff(e, y, x);
                    if !s.is_zero() {
                        return Some((e, x, y));
                    }
                }
            }
        }
        None
    }

    /// `-tr(ad x ad y)` for basis elements.
    pub fn negative_killing(&self, x: usize, y: usize) -> Q {
        let n = self.dim();
        let mut trace = Q::zero();
        for m in 0..n {
            for (k, c) in self.table.bracket(y, m) {
                trace += *c * self.coeff(x, *k, m);
            }
        }
        -trace
    }
}

/// Gram-Schmidt on the `i h_k`: rows of the result give `t_k` in the `h` basis.
fn orthogonal_cartan(rs: &RootSystemData) -> (QMatrix, Vec<Q>) {
    let l = rs.rank();
    let lens: Vec<Q> = rs.simple_roots.iter().map(|a| rs.root_norm(a)).collect();
    // B(i h_a, i h_b) = (h_a, h_b) = 4 (a, b) / (|a|^2 |b|^2)
    let h: QMatrix = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| Q::from_integer(4) * rs.form.gram[a][b] / (lens[a] * lens[b]))
                .collect()
        })
        .collect();
    let ip = |x: &[Q], y: &[Q]| -> Q {
        let hy = linalg::mat_vec(&h, y);
        x.iter().zip(&hy).map(|(a, b)| a * b).sum()
    };
    let mut rows: QMatrix = Vec::new();
    let mut norms = Vec::new();
    for k in 0..l {
        let mut v: Vec<Q> = (0..l).map(|j| if j == k { Q::one() } else { Q::zero() }).collect();
        for (r, nr) in rows.iter().zip(&norms) {
            let c = ip(&v, r) / nr;
            for (vi, ri) in v.iter_mut().zip(r) {
                *vi -= c * ri;
            }
        }
        norms.push(ip(&v, &v));
        rows.push(v);
    }
    (rows, norms)
}

/// Build the compact real form from a Chevalley algebra.
pub fn compact_form(rs: &RootSystemData, alg: &ChevalleyAlgebra) -> Result<CompactBasis> {
    let l = alg.rank;
    let npos = alg.num_positive();
    let (cartan_rows, cartan_norms) = orthogonal_cartan(rs);
    let inv_t = linalg::inverse(&linalg::transpose(&cartan_rows))
        .ok_or_else(|| Error::Construction("singular Cartan orthogonalization".into()))?;

    let mut labels: Vec<CompactLabel> = (0..l).map(CompactLabel::Cartan).collect();
    let mut norms = cartan_norms;
    for k in 0..npos {
        labels.push(CompactLabel::U(k));
        labels.push(CompactLabel::V(k));
        let n = Q::from_integer(4) / alg.root_norms[k];
        norms.push(n);
        norms.push(n);
    }

    let expand = |label: &CompactLabel| -> Vec<(usize, Gq)> {
        match *label {
            CompactLabel::Cartan(k) => (0..l)
                .filter(|&j| !cartan_rows[k][j].is_zero())
                .map(|j| (j, Gq::imag(cartan_rows[k][j])))
                .collect(),
            CompactLabel::U(k) => vec![
                (alg.root_basis_index(k), Gq::real(Q::one())),
                (alg.root_basis_index(k + npos), Gq::real(-Q::one())),
            ],
            CompactLabel::V(k) => vec![
                (alg.root_basis_index(k), Gq::imag(Q::one())),
                (alg.root_basis_index(k + npos), Gq::imag(Q::one())),
            ],
        }
    };
    let expansions: Vec<Vec<(usize, Gq)>> = labels.iter().map(expand).collect();

    let dim = labels.len();
    let half = Q::new(1, 2);
    let mut table = StructureTable::new(labels.iter().map(|b| b.to_string()).collect());
    for a in 0..dim {
        for b in 0..dim {
            let mut acc = vec![Gq::real(Q::zero()); alg.dim()];
            for (i, ci) in &expansions[a] {
                for (j, cj) in &expansions[b] {
                    for (k, c) in alg.table.bracket(*i, *j) {
                        acc[*k] = acc[*k] + (*ci * *cj).scale(*c);
                    }
                }
            }
            let mut coords: Vec<Gq> = Vec::with_capacity(dim);
            // t_k coefficients: c = -i (g^T)^{-1} d
            for k in 0..l {
                let s = (0..l).fold(Gq::real(Q::zero()), |s, j| s + acc[j].scale(inv_t[k][j]));
                coords.push(s * Gq::imag(-Q::one()));
            }
            for k in 0..npos {
                let cp = acc[alg.root_basis_index(k)];
                let cn = acc[alg.root_basis_index(k + npos)];
                coords.push((cp - cn).scale(half));
                coords.push(((cp + cn) * Gq::imag(-Q::one())).scale(half));
            }
            if coords.iter().any(|c| !c.im.is_zero()) {
                return Err(Error::Construction(format!(
                    "[{}, {}] has an imaginary component",
                    labels[a], labels[b]
                )));
            }
            let sparse: SparseVec = coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.re))
                .collect();
            table.set(a, b, sparse);
        }
    }

    Ok(CompactBasis { rank: l, labels, positive_roots: rs.positive_roots.clone(), norms, table })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFormData {
    /// Diagonal Gram entries on the compact basis.
    pub diagonal: Vec<Q>,
    pub normalization: FormNormalization,
    /// This form divided by the long-root-2 form.
    pub scale: Q,
}

/// Invariant form on the compact basis in the requested normalization.
///
/// The negative-Killing variant is computed as a trace form of the adjoint
/// representation and must be a constant multiple of the long-root-2 form.
pub fn invariant_form(cb: &CompactBasis, normalization: FormNormalization) -> Result<InvariantFormData> {
    match normalization {
        FormNormalization::LongRoot2 => Ok(InvariantFormData {
            diagonal: cb.norms.clone(),
            normalization,
            scale: Q::one(),
        }),
        FormNormalization::NegativeKilling => {
            let diagonal: Vec<Q> = (0..cb.dim()).map(|i| cb.negative_killing(i, i)).collect();
            let scale = diagonal[0] / cb.norms[0];
            if diagonal.iter().zip(&cb.norms).any(|(k, n)| *k != scale * n) {
                return Err(Error::Construction(
                    "Killing form is not proportional to the long-root-2 form".into(),
                ));
            }
            Ok(InvariantFormData { diagonal, normalization, scale })
        }
    }
}

/// Parse a normalization tag and build the form.
pub fn invariant_form_named(cb: &CompactBasis, tag: &str) -> Result<InvariantFormData> {
    invariant_form(cb, tag.parse()?)
}
