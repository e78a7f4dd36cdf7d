//! Inner involutions in diagonal normal form and the joint eigenspace grading.
//!
//! An automorphism `exp(ad H)` with `H` in the Cartan subalgebra acts on
//! `x_a` by `exp(a(H))`. With `alpha_i(H)` a multiple of `pi i / 2`, this is a
//! power of `i` determined by the simple-root coordinates of `a`, so
//! automorphisms are stored as one phase (exponent of `i`, mod 4) per root.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chevalley::{ChevalleyAlgebra, StructureTable};
use crate::compact::{CompactBasis, CompactLabel};
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, Q};
use crate::root_system::{CartanType, RootSystemData, RootVector, Series};

/// Marks on the simple roots: 1 means `alpha_i(H) = pi i`, 0 means `alpha_i(H) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvolutionSpec {
    pub marks: Vec<u8>,
}

impl InvolutionSpec {
    pub fn new(marks: Vec<u8>) -> Result<Self> {
        if marks.iter().any(|&m| m > 1) {
            return Err(Error::InvalidInvolution(format!("marks must be 0 or 1: {marks:?}")));
        }
        Ok(Self { marks })
    }

    pub fn is_trivial(&self) -> bool {
        self.marks.iter().all(|&m| m == 0)
    }
}

impl FromStr for InvolutionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let marks = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidInvolution(format!("bad mark string {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        if marks.is_empty() {
            return Err(Error::InvalidInvolution("empty mark string".into()));
        }
        Self::new(marks)
    }
}

impl fmt::Display for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in &self.marks {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Automorphism acting on `x_a` by `i^phase(a)` and trivially on the Cartan part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalAutomorphism {
    /// Phase per root, indexed like `RootSystemData::roots()`.
    pub phases: Vec<u8>,
}

impl DiagonalAutomorphism {
    /// `alpha_i(H) = quarter_turns[i] * pi i / 2`.
    pub fn from_quarter_turns(rs: &RootSystemData, quarter_turns: &[u8]) -> Result<Self> {
        if quarter_turns.len() != rs.rank() {
            return Err(Error::DimensionMismatch { expected: rs.rank(), got: quarter_turns.len() });
        }
        let phases = rs
            .roots()
            .iter()
            .map(|r| {
                let s: i64 = r.0.iter().zip(quarter_turns).map(|(c, &m)| c * i64::from(m)).sum();
                s.rem_euclid(4) as u8
            })
            .collect();
        Ok(Self { phases })
    }

    pub fn identity(rs: &RootSystemData) -> Self {
        Self { phases: vec![0; rs.num_roots()] }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            phases: self.phases.iter().zip(&other.phases).map(|(a, b)| (a + b) % 4).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(|&p| p == 0)
    }

    /// +1 / -1 on a root, or `None` if the phase is not real.
    pub fn sign(&self, root: usize) -> Option<i8> {
        match self.phases[root] {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn commutes_with(&self, _other: &Self) -> bool {
        // diagonal on a common basis
        true
    }
}

/// The diagonal automorphism `exp(ad H)` attached to marked simple roots.
pub fn involution_from_marks(rs: &RootSystemData, spec: &InvolutionSpec) -> Result<DiagonalAutomorphism> {
    let turns: Vec<u8> = spec.marks.iter().map(|m| 2 * m).collect();
    DiagonalAutomorphism::from_quarter_turns(rs, &turns)
}

/// `a^2 = 1`, `a` preserves the bracket, and `a` preserves the invariant form,
/// all checked on the Chevalley basis.
pub fn check_involution(a: &DiagonalAutomorphism, alg: &ChevalleyAlgebra) -> bool {
    let l = alg.rank;
    let n = alg.dim();
    let npos = alg.num_positive();
    if a.phases.len() != 2 * npos {
        return false;
    }
    let phase = |b: usize| -> u8 { if b < l { 0 } else { a.phases[b - l] } };
    if (0..n).any(|b| phase(b) * 2 % 4 != 0) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            for (k, _) in alg.table.bracket(i, j) {
                if (phase(i) + phase(j)) % 4 != phase(*k) {
                    return false;
                }
            }
        }
    }
    // the form pairs x_a with x_-a and the Cartan part with itself
    (0..npos).all(|k| (phase(l + k) + phase(l + k + npos)) % 4 == 0)
}

/// Subalgebra spanned by a subset of the compact basis.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    pub indices: Vec<usize>,
    pub labels: Vec<CompactLabel>,
    pub table: StructureTable,
}

impl Subalgebra {
    pub fn from_indices(cb: &CompactBasis, indices: Vec<usize>) -> Result<Self> {
        let table = cb.table.restrict(&indices)?;
        let labels = indices.iter().map(|&i| cb.labels[i]).collect();
        Ok(Self { indices, labels, table })
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    fn coeff(&self, i: usize, j: usize, k: usize) -> Q {
        let v = self.table.bracket(i, j);
        v.binary_search_by_key(&k, |(n, _)| *n).map(|p| v[p].1).unwrap_or_else(|_| Q::zero())
    }

    fn trace_form(&self, x: usize, y: usize) -> Q {
        let mut t = Q::zero();
        for m in 0..self.dim() {
            for (k, c) in self.table.bracket(y, m) {
                t += *c * self.coeff(x, *k, m);
            }
        }
        t
    }
}

fn compact_sign(a: &DiagonalAutomorphism, label: &CompactLabel) -> Option<i8> {
    match label.root() {
        None => Some(1),
        Some(k) => a.sign(k),
    }
}

pub fn fixed_subalgebra(a: &DiagonalAutomorphism, cb: &CompactBasis) -> Result<Subalgebra> {
    let mut indices = Vec::new();
    for (i, label) in cb.labels.iter().enumerate() {
        match compact_sign(a, label) {
            Some(1) => indices.push(i),
            Some(_) => {}
            None => return Err(Error::InvalidInvolution("automorphism is not an involution".into())),
        }
    }
    Subalgebra::from_indices(cb, indices)
}

/// Blocks ordered as (++, +-, -+, --) for the eigenvalues of `(theta, tau)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedDecomposition {
    pub blocks: [Vec<usize>; 4],
    pub dims: [usize; 4],
    /// Cumulative block ends `i_1 < i_2 < i_3 < i_4 = n` in the block-ordered basis.
    pub boundaries: [usize; 4],
    /// Block index of each compact basis element.
    pub block_of: Vec<usize>,
    /// `grading[i][j] = Some(k)` when `[h_i, h_j]` is nonzero and lies in `h_k`.
    pub grading: [[Option<usize>; 4]; 4],
}

impl GradedDecomposition {
    pub fn dim(&self) -> usize {
        self.block_of.len()
    }

    /// Basis indices in block order.
    pub fn ordered_basis(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// The inclusions forced by the two commuting involutions: `[h_i, h_j]` in `h_(i xor j)`.
    pub fn grading_consistent(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.grading[i][j].is_none_or(|k| k == i ^ j)))
    }

    pub fn subalgebra(&self, cb: &CompactBasis, blocks: &[usize]) -> Result<Subalgebra> {
        let mut indices: Vec<usize> = blocks.iter().flat_map(|&b| self.blocks[b].clone()).collect();
        indices.sort_unstable();
        Subalgebra::from_indices(cb, indices)
    }
}

/// Target block of every block bracket, read off the structure constants.
fn grading_matrix(cb: &CompactBasis, block_of: &[usize], blocks: &[Vec<usize>; 4]) -> Result<[[Option<usize>; 4]; 4]> {
    let mut grading = [[None; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut targets = HashSet::new();
            for &a in &blocks[i] {
                for &b in &blocks[j] {
                    targets.extend(cb.table.bracket(a, b).iter().map(|(k, _)| block_of[*k]));
                }
            }
            match targets.len() {
                0 => {}
                1 => grading[i][j] = targets.into_iter().next(),
                _ => return Err(Error::GradingViolation(i, j)),
            }
        }
    }
    Ok(grading)
}

pub fn joint_decomposition(
    theta: &DiagonalAutomorphism,
    tau: &DiagonalAutomorphism,
    cb: &CompactBasis,
) -> Result<GradedDecomposition> {
    if !theta.commutes_with(tau) {
        return Err(Error::InvalidInvolution("involutions do not commute".into()));
    }
    if theta.is_identity() || tau.is_identity() {
        return Err(Error::InvalidInvolution("identity is not a nontrivial involution".into()));
    }
    let mut blocks: [Vec<usize>; 4] = Default::default();
    let mut block_of = Vec::with_capacity(cb.dim());
    for (i, label) in cb.labels.iter().enumerate() {
        let (Some(s), Some(t)) = (compact_sign(theta, label), compact_sign(tau, label)) else {
            return Err(Error::InvalidInvolution("automorphism is not an involution".into()));
        };
        let b = 2 * usize::from(s < 0) + usize::from(t < 0);
        blocks[b].push(i);
        block_of.push(b);
    }
    let dims = [blocks[0].len(), blocks[1].len(), blocks[2].len(), blocks[3].len()];
    if dims.contains(&0) {
        return Err(Error::DegeneratePair(dims));
    }
    let mut boundaries = [0; 4];
    let mut acc = 0;
    for (b, d) in boundaries.iter_mut().zip(dims) {
        acc += d;
        *b = acc;
    }
    let grading = grading_matrix(cb, &block_of, &blocks)?;
    Ok(GradedDecomposition { blocks, dims, boundaries, block_of, grading })
}

fn lex_positive(v: &[Q]) -> bool {
    v.iter().find(|c| !c.is_zero()).is_some_and(|c| *c > Q::zero())
}

/// Recover the Cartan type of a semisimple subalgebra of the compact form.
///
/// The Cartan subalgebra is the span of the Cartan-labelled elements; roots
/// are read off `[t, u_a] = a(t) v_a` and measured with the subalgebra's own
/// Killing form, so root lengths are intrinsic.
pub fn identify_type(sub: &Subalgebra) -> Result<CartanType> {
    let cartan: Vec<usize> = (0..sub.dim())
        .filter(|&i| matches!(sub.labels[i], CompactLabel::Cartan(_)))
        .collect();
    let r = cartan.len();
    if r == 0 {
        return Err(Error::NotSemisimple);
    }
    let mut functionals: Vec<Vec<Q>> = Vec::new();
    for (i, label) in sub.labels.iter().enumerate() {
        if let CompactLabel::U(k) = label {
            let v = sub
                .labels
                .iter()
                .position(|l| *l == CompactLabel::V(*k))
                .ok_or(Error::NotClosed)?;
            functionals.push(cartan.iter().map(|&t| sub.coeff(t, i, v)).collect());
        }
    }
    let neg_killing: QMatrix = cartan
        .iter()
        .map(|&a| cartan.iter().map(|&b| -sub.trace_form(a, b)).collect())
        .collect();
    if !linalg::is_positive_definite(&neg_killing) {
        return Err(Error::NotSemisimple);
    }
    let metric = linalg::inverse(&neg_killing).ok_or(Error::NotSemisimple)?;
    let ip = |x: &[Q], y: &[Q]| -> Q {
        let my = linalg::mat_vec(&metric, y);
        x.iter().zip(&my).map(|(a, b)| a * b).sum()
    };

    let positive: Vec<Vec<Q>> = functionals
        .into_iter()
        .map(|f| if lex_positive(&f) { f } else { f.into_iter().map(|c| -c).collect() })
        .collect();
    let set: HashSet<Vec<Q>> = positive.iter().cloned().collect();
    let simple: Vec<Vec<Q>> = positive
        .iter()
        .filter(|g| {
            !positive.iter().any(|a| {
                let rest: Vec<Q> = g.iter().zip(a).map(|(x, y)| x - y).collect();
                set.contains(&rest)
            })
        })
        .cloned()
        .collect();
    if simple.len() != r {
        return Err(Error::NotSemisimple);
    }

    let lens: Vec<Q> = simple.iter().map(|s| ip(s, s)).collect();
    let n = simple.len();
    let a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = Q::from_integer(2) * ip(&simple[i], &simple[j]) / lens[i];
                    v.to_integer()
                })
                .collect()
        })
        .collect();

    // connected components of the Dynkin diagram
    let mut comp = vec![usize::MAX; n];
    let mut factors = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = factors.len();
        let mut stack = vec![start];
        comp[start] = id;
        let mut nodes = vec![];
        while let Some(i) = stack.pop() {
            nodes.push(i);
            for j in 0..n {
                if a[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        nodes.sort_unstable();
        factors.push(classify_component(&nodes, &a, &lens)?);
    }
    let expected_roots: usize = factors.iter().map(|t| t.dimension() - t.rank).sum();
    if expected_roots != 2 * positive.len() {
        return Err(Error::Construction("root count does not match the recovered type".into()));
    }
    if factors.len() == 1 {
        Ok(factors[0])
    } else {
        factors.sort();
        Err(Error::Reducible(factors))
    }
}

fn classify_component(nodes: &[usize], a: &[Vec<i64>], lens: &[Q]) -> Result<CartanType> {
    let n = nodes.len();
    let degree = |i: usize| nodes.iter().filter(|&&j| j != i && a[i][j] != 0).count();
    let bond = |i: usize, j: usize| a[i][j] * a[j][i];
    let max_len = nodes.iter().map(|&i| lens[i]).max().unwrap();
    let short: Vec<usize> = nodes.iter().copied().filter(|&i| lens[i] < max_len).collect();
    let mut bonds = vec![];
    for (x, &i) in nodes.iter().enumerate() {
        for &j in &nodes[x + 1..] {
            if a[i][j] != 0 {
                bonds.push((i, j, bond(i, j)));
            }
        }
    }
    if bonds.iter().any(|b| b.2 == 3) {
        return Err(Error::UnsupportedType("G2".into()));
    }
    if n == 1 {
        return CartanType::new(Series::A, 1);
    }
    if short.is_empty() {
        let branch = nodes.iter().filter(|&&i| degree(i) == 3).count();
        if branch == 0 && nodes.iter().all(|&i| degree(i) <= 2) {
            return CartanType::new(Series::A, n);
        }
        // D_n: the branch node has two leaf neighbours
        let centre = nodes.iter().copied().find(|&i| degree(i) == 3);
        if let (1, Some(c)) = (branch, centre) {
            let leaves = nodes.iter().filter(|&&j| j != c && a[c][j] != 0 && degree(j) == 1).count();
            if leaves >= 2 {
                return CartanType::new(Series::D, n);
            }
        }
        return Err(Error::UnsupportedType(format!("E{n}")));
    }
    let long = n - short.len();
    if n == 2 {
        return CartanType::new(Series::B, 2);
    }
    if n == 4 && short.len() == 2 {
        let double = bonds.iter().find(|b| b.2 == 2).unwrap();
        if degree(double.0) == 2 && degree(double.1) == 2 {
            return Ok(CartanType::F4);
        }
    }
    if short.len() == 1 {
        return CartanType::new(Series::B, n);
    }
    if long == 1 {
        return CartanType::new(Series::C, n);
    }
    Err(Error::UnsupportedType(format!("non-simply-laced rank {n}")))
}

/// The `h_1`-module structure of a block, read from its weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockModule {
    pub block: usize,
    pub dim: usize,
    /// Weights killed by every simple raising operator of `h_1`.
    pub highest_weights: Vec<RootVector>,
    /// Weyl dimension of the (first) highest weight.
    pub weyl_dimension: usize,
}

impl BlockModule {
    pub fn is_irreducible(&self) -> bool {
        self.highest_weights.len() == 1 && self.weyl_dimension == self.dim
    }
}

/// Highest weights and Weyl dimension of block `b >= 1` as an `h_1`-module.
pub fn block_module(rs: &RootSystemData, cb: &CompactBasis, decomp: &GradedDecomposition, b: usize) -> Result<BlockModule> {
    let roots_in = |blk: usize| -> Vec<RootVector> {
        let mut set: Vec<RootVector> = decomp.blocks[blk]
            .iter()
            .filter_map(|&i| cb.labels[i].root())
            .map(|k| cb.positive_roots[k].clone())
            .collect();
        set.sort();
        set.dedup();
        set
    };
    let h1_pos = roots_in(0);
    let h1_set: HashSet<RootVector> = h1_pos.iter().cloned().collect();
    let h1_simple: Vec<RootVector> = h1_pos
        .iter()
        .filter(|g| !h1_pos.iter().any(|a| h1_set.contains(&g.sub(a))))
        .cloned()
        .collect();
    let mut weights: Vec<RootVector> = roots_in(b);
    weights.extend(weights.clone().iter().map(RootVector::neg));
    let wset: HashSet<RootVector> = weights.iter().cloned().collect();
    let mut highest: Vec<RootVector> = weights
        .iter()
        .filter(|w| h1_simple.iter().all(|s| !wset.contains(&w.add(s))))
        .cloned()
        .collect();
    highest.sort();
    let rho: Vec<Q> = (0..rs.rank())
        .map(|i| h1_pos.iter().map(|r| Q::from_integer(r.0[i])).sum::<Q>() / Q::from_integer(2))
        .collect();
    let weyl_dimension = match highest.first() {
        Some(lambda) => {
            let mut num = Q::one();
            let mut den = Q::one();
            for alpha in &h1_pos {
                let a: Vec<Q> = alpha.0.iter().map(|&c| Q::from_integer(c)).collect();
                let shifted: Vec<Q> = lambda.0.iter().zip(&rho).map(|(l, r)| Q::from_integer(*l) + r).collect();
                num *= rs.form_on_coords(&shifted, &a);
                den *= rs.form_on_coords(&rho, &a);
            }
            let d = num / den;
            if !d.is_integer() || d < Q::zero() {
                return Err(Error::Construction("non-integral Weyl dimension".into()));
            }
            d.to_integer() as usize
        }
        None => 0,
    };
    Ok(BlockModule { block: b, dim: decomp.dims[b], highest_weights: highest, weyl_dimension })
}
