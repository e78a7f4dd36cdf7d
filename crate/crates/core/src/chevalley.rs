//! Chevalley basis structure constants.
//!
//! Signs are fixed by declaring `N_{a,b} = +(p+1)` on every extraspecial pair
//! and propagating to all other pairs through the standard identities relating
//! `N` on root triples and quadruples. The exhaustive Jacobi scan certifies the
//! outcome.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::root_system::{RootSystemData, RootVector};
use crate::scalar::ratio_string;

pub type SparseVec = Vec<(usize, Q)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Cartan generator `h_i`.
    Cartan(usize),
    /// Root vector `x_alpha`.
    Root(RootVector),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Cartan(i) => write!(f, "h{}", i + 1),
            BasisLabel::Root(r) => write!(f, "x{r}"),
        }
    }
}

/// Bracket table of a Lie algebra on a fixed basis.
#[derive(Debug, Clone)]
pub struct StructureTable {
    dim: usize,
    labels: Vec<String>,
    brackets: Vec<SparseVec>,
}

impl StructureTable {
    pub fn new(labels: Vec<String>) -> Self {
        let dim = labels.len();
        Self { dim, labels, brackets: vec![Vec::new(); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.brackets[i * self.dim + j]
    }

    /// Set `[e_i, e_j]`; zero coefficients are dropped and entries sorted.
    pub fn set(&mut self, i: usize, j: usize, mut value: SparseVec) {
        value.retain(|(_, c)| !c.is_zero());
        value.sort_by_key(|(k, _)| *k);
        self.brackets[i * self.dim + j] = value;
    }

    /// Set `[e_i, e_j]` and `[e_j, e_i] = -[e_i, e_j]`.
    pub fn set_antisymmetric(&mut self, i: usize, j: usize, value: SparseVec) {
        let neg = value.iter().map(|(k, c)| (*k, -*c)).collect();
        self.set(i, j, value);
        self.set(j, i, neg);
    }

    /// Bracket of two dense elements.
    pub fn bracket_dense(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                for (k, c) in self.bracket(i, j) {
                    out[*k] += a * b * c;
                }
            }
        }
        out
    }

    /// `[e_i, v]` for a sparse `v`, accumulated into `out`.
    pub fn bracket_basis_into(&self, i: usize, v: &[(usize, Q)], scale: Q, out: &mut [Q]) {
        for (j, b) in v {
            for (k, c) in self.bracket(i, *j) {
                out[*k] += scale * b * c;
            }
        }
    }

    /// Restrict to a subset of basis indices. Fails if the span is not closed.
    pub fn restrict(&self, indices: &[usize]) -> Result<StructureTable> {
        let pos: HashMap<usize, usize> = indices.iter().enumerate().map(|(n, &i)| (i, n)).collect();
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let mut sub = StructureTable::new(labels);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                let mut v = SparseVec::new();
                for (k, c) in self.bracket(i, j) {
                    let &n = pos.get(k).ok_or(Error::NotClosed)?;
                    v.push((n, *c));
                }
                sub.set(a, b, v);
            }
        }
        Ok(sub)
    }

    /// Deterministic listing of nonzero constants `[e_i, e_j] = c e_k` with `i < j`.
    pub fn listing(&self) -> Vec<TableEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for (k, c) in self.bracket(i, j) {
                    out.push(TableEntry { i, j, k: *k, coeff: ratio_string(*c) });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "labels": self.labels,
            "entries": self.listing(),
        })
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum JacobiReport {
    Pass { triples: usize },
    /// `[e_i, e_j] + [e_j, e_i]` is nonzero.
    Antisymmetry { pair: (usize, usize) },
    /// First triple (in lexicographic order) with a nonzero Jacobi sum.
    Violation { triple: (usize, usize, usize), sum: SparseVec },
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        matches!(self, JacobiReport::Pass { .. })
    }
}

fn jacobi_sum(t: &StructureTable, i: usize, j: usize, k: usize, scratch: &mut [Q]) -> SparseVec {
    scratch.iter_mut().for_each(|x| *x = Q::zero());
    t.bracket_basis_into(i, t.bracket(j, k), Q::one(), scratch);
    t.bracket_basis_into(j, t.bracket(k, i), Q::one(), scratch);
    t.bracket_basis_into(k, t.bracket(i, j), Q::one(), scratch);
    scratch
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, *c))
        .collect()
}

/// Exhaustive antisymmetry and Jacobi scan over all `i <= j <= k`.
pub fn jacobi_check(t: &StructureTable) -> JacobiReport {
    let n = t.dim();
    for i in 0..n {
        for j in i..n {
            let a = t.bracket(i, j);
            let b = t.bracket(j, i);
            let ok = a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && x.1 == -y.1);
            if !ok {
                return JacobiReport::Antisymmetry { pair: (i, j) };
            }
        }
    }
    let violation = (0..n).into_par_iter().find_map_first(|i| {
        let mut scratch = vec![Q::zero(); n];
        for j in i..n {
            for k in j..n {
                let sum = jacobi_sum(t, i, j, k, &mut scratch);
                if !sum.is_empty() {
                    return Some(JacobiReport::Violation { triple: (i, j, k), sum });
                }
            }
        }
        None
    });
    violation.unwrap_or(JacobiReport::Pass { triples: n * (n + 1) * (n + 2) / 6 })
}

/// Chevalley basis of a root system together with its structure constants.
#[derive(Debug, Clone)]
pub struct ChevalleyAlgebra {
    pub rank: usize,
    /// Basis labels: `h_1..h_l`, then `x_alpha` for positive roots, then negatives.
    pub labels: Vec<BasisLabel>,
    pub table: StructureTable,
    /// Squared root lengths indexed like `RootSystemData::roots()`.
    pub root_norms: Vec<Q>,
}

impl ChevalleyAlgebra {
    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn num_positive(&self) -> usize {
        self.root_norms.len() / 2
    }

    /// Basis index of the root with index `k` in `RootSystemData::roots()`.
    pub fn root_basis_index(&self, k: usize) -> usize {
        self.rank + k
    }
}

struct SignSolver<'a> {
    rs: &'a RootSystemData,
    roots: Vec<RootVector>,
    norms: Vec<Q>,
    npos: usize,
    extraspecial: HashMap<usize, (usize, usize)>,
    memo: HashMap<(usize, usize), i64>,
}

impl<'a> SignSolver<'a> {
    fn new(rs: &'a RootSystemData) -> Self {
        let roots = rs.roots();
        let norms = roots.iter().map(|r| rs.root_norm(r)).collect();
        let npos = rs.positive_roots.len();
        let mut extraspecial = HashMap::new();
        for xi in 0..npos {
            // first positive root alpha (in the ordering) with xi - alpha positive
            for a in 0..xi {
                let b = roots[xi].sub(&roots[a]);
                if let Some(bi) = rs.root_index(&b) {
                    if bi < npos {
                        extraspecial.insert(xi, (a, bi));
                        break;
                    }
                }
            }
        }
        Self { rs, roots, norms, npos, extraspecial, memo: HashMap::new() }
    }

    fn neg(&self, a: usize) -> usize {
        if a < self.npos { a + self.npos } else { a - self.npos }
    }

    fn positive(&self, a: usize) -> bool {
        a < self.npos
    }

    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.rs.root_index(&self.roots[a].add(&self.roots[b]))
    }

    /// Largest p with `b - p a` a root.
    fn string_down(&self, a: usize, b: usize) -> i64 {
        let mut p = 0;
        let mut v = self.roots[b].sub(&self.roots[a]);
        while self.rs.is_root(&v) {
            p += 1;
            v = v.sub(&self.roots[a]);
        }
        p
    }

    fn ratio_times(&self, num: usize, den: usize, value: i64) -> i64 {
        let r = self.norms[num] / self.norms[den] * Q::from_integer(value);
        assert!(r.is_integer(), "non-integral structure constant");
        r.to_integer()
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    fn n(&mut self, a: usize, b: usize) -> i64 {
        let Some(xi) = self.sum(a, b) else { return 0 };
        if let Some(&v) = self.memo.get(&(a, b)) {
            return v;
        }
        let v = match (self.positive(a), self.positive(b)) {
            (true, true) => self.n_positive(a, b, xi),
            (false, false) => -self.n(self.neg(a), self.neg(b)),
            (false, true) => -self.n(b, a),
            (true, false) => {
                if self.positive(xi) {
                    // a + b + (-xi) = 0: N_{a,b} / |xi|^2 = N_{b,-xi} / |a|^2
                    let inner = -self.n(self.neg(b), xi);
                    self.ratio_times(xi, a, inner)
                } else {
                    // N_{a,b} / |xi|^2 = N_{-xi,a} / |b|^2
                    let inner = self.n(self.neg(xi), a);
                    self.ratio_times(xi, b, inner)
                }
            }
        };
        self.memo.insert((a, b), v);
        v
    }

    fn n_positive(&mut self, a: usize, b: usize, xi: usize) -> i64 {
        let (g, d) = self.extraspecial[&xi];
        let n_gd = self.string_down(g, d) + 1;
        if a == g {
            return n_gd;
        }
        if b == g {
            return -n_gd;
        }
        // Quadruple identity on (a, b, -g, -d).
        let (ng, nd) = (self.neg(g), self.neg(d));
        let mut acc = Q::zero();
        if let Some(bg) = self.sum(b, ng) {
            let t = Q::from_integer(self.n(b, ng) * self.n(a, nd)) / self.norms[bg];
            acc += t;
        }
        if let Some(ag) = self.sum(a, ng) {
            let t = Q::from_integer(self.n(ng, a) * self.n(b, nd)) / self.norms[ag];
            acc += t;
        }
        let v = acc * self.norms[xi] / Q::from_integer(n_gd);
        assert!(v.is_integer(), "non-integral structure constant");
        v.to_integer()
    }
}

pub fn build_chevalley(rs: &RootSystemData) -> Result<ChevalleyAlgebra> {
    let l = rs.rank();
    let roots = rs.roots();
    let nroots = roots.len();
    let mut labels: Vec<BasisLabel> = (0..l).map(BasisLabel::Cartan).collect();
    labels.extend(roots.iter().cloned().map(BasisLabel::Root));
    let mut table = StructureTable::new(labels.iter().map(|b| b.to_string()).collect());
    let mut solver = SignSolver::new(rs);
    let norms = solver.norms.clone();

    for (k, r) in roots.iter().enumerate() {
        let x = l + k;
        // [h_i, x_a] = <a, alpha_i^vee> x_a
        for i in 0..l {
            let c = rs.coroot_pairing(r, i);
            table.set_antisymmetric(i, x, vec![(x, Q::from_integer(c))]);
        }
        for (m, s) in roots.iter().enumerate().skip(k + 1) {
            let y = l + m;
            if r.add(s).0.iter().all(|&c| c == 0) {
                // [x_a, x_-a] = h_a = sum_i c_i |alpha_i|^2 / |a|^2 h_i
                let h: SparseVec = (0..l)
                    .map(|i| {
                        let ai = &rs.simple_roots[i];
                        (i, Q::from_integer(r.0[i]) * rs.root_norm(ai) / norms[k])
                    })
                    .collect();
                if h.iter().any(|(_, c)| !c.is_integer()) {
                    return Err(Error::Construction(format!("non-integral coroot for {r}")));
                }
                table.set_antisymmetric(x, y, h);
            } else if let Some(t) = rs.root_index(&r.add(s)) {
                let n = solver.n(k, m);
                table.set_antisymmetric(x, y, vec![(l + t, Q::from_integer(n))]);
            }
        }
    }

    // |N_{a,b}| = p + 1
    for a in 0..nroots {
        for b in 0..nroots {
            if solver.sum(a, b).is_some() {
                let n = solver.n(a, b);
                if n.abs() != solver.string_down(a, b) + 1 {
                    return Err(Error::Construction(format!(
                        "|N({}, {})| = {} violates the root-string rule",
                        roots[a], roots[b], n
                    )));
                }
            }
        }
    }

    Ok(ChevalleyAlgebra { rank: l, labels, table, root_norms: norms })
}
