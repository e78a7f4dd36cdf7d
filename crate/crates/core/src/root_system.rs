//! Root systems of the classical series and F4, generated from Cartan matrices.
//!
//! Roots are stored as integer coordinates over the simple roots, weights as
//! rational coordinates over the fundamental weights. The invariant form is
//! normalized so that long roots have squared length 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B | Series::C => rank >= 2,
            Series::D => rank >= 3,
            Series::F => rank == 4,
        };
        if ok {
            Ok(Self { series, rank })
        } else {
            Err(Error::UnsupportedType(format!("{series:?}{rank}")))
        }
    }

    pub const F4: CartanType = CartanType { series: Series::F, rank: 4 };
    pub const B4: CartanType = CartanType { series: Series::B, rank: 4 };
    pub const D4: CartanType = CartanType { series: Series::D, rank: 4 };

    /// Dimension of the simple Lie algebra of this type.
    pub fn dimension(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n * (n + 2),
            Series::B | Series::C => n * (2 * n + 1),
            Series::D => n * (2 * n - 1),
            Series::F => 52,
        }
    }

    pub fn dual_coxeter_number(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n + 1,
            Series::B => 2 * n - 1,
            Series::C => n + 1,
            Series::D => 2 * n - 2,
            Series::F => 9,
        }
    }

    /// Cartan matrix with entries `a[i][j] = <alpha_j, alpha_i^vee>`.
    ///
    /// Labelling follows Bourbaki: for B and C the last node is the odd one,
    /// for D the last two nodes hang off node `n-2`, and F4 has `alpha_1`,
    /// `alpha_2` long with the arrow pointing from `alpha_2` to `alpha_3`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
            a[i][j] = aij;
            a[j][i] = aji;
        };
        match self.series {
            Series::A => (0..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1)),
            Series::B => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -1, -2);
            }
            Series::C => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 2, n - 1, -2, -1);
            }
            Series::D => {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
            Series::F => {
                link(0, 1, -1, -1);
                link(1, 2, -1, -2);
                link(2, 3, -1, -1);
            }
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unsupported = || Error::UnsupportedType(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('F') => Series::F,
            _ => return Err(unsupported()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| unsupported())?;
        CartanType::new(series, rank).map_err(|_| unsupported())
    }
}

/// Integer coordinates of a root over the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> RootVector {
        RootVector(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RootVector) -> RootVector {
        RootVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Rational coordinates of a weight over the fundamental weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<Q>);

impl WeightVector {
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|c| *c >= Q::zero())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| crate::scalar::ratio_string(*c)).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormNormalization {
    /// Long roots have squared length 2.
    LongRoot2,
    /// Negative of the Killing form.
    NegativeKilling,
}

impl fmt::Display for FormNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormNormalization::LongRoot2 => "long-root-2",
            FormNormalization::NegativeKilling => "negative-killing",
        })
    }
}

impl FromStr for FormNormalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "long-root-2" => Ok(FormNormalization::LongRoot2),
            "negative-killing" => Ok(FormNormalization::NegativeKilling),
            other => Err(Error::UnknownNormalization(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BilinearFormData {
    /// Gram matrix of the simple roots.
    pub gram: QMatrix,
    pub normalization: FormNormalization,
}

/// Anything expressible over the simple roots of a given system.
pub trait RootCoordinates {
    fn root_coords(&self, rs: &RootSystemData) -> Result<Vec<Q>>;
}

impl RootCoordinates for RootVector {
    fn root_coords(&self, rs: &RootSystemData) -> Result<Vec<Q>> {
        rs.check_len(self.0.len())?;
        Ok(self.0.iter().map(|&c| Q::from_integer(c)).collect())
    }
}

impl RootCoordinates for WeightVector {
    fn root_coords(&self, rs: &RootSystemData) -> Result<Vec<Q>> {
        rs.check_len(self.0.len())?;
        Ok(linalg::mat_vec(&rs.weight_to_root, &self.0))
    }
}

#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub cartan_type: CartanType,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub simple_roots: Vec<RootVector>,
    /// Positive roots ordered by height, then lexicographically.
    pub positive_roots: Vec<RootVector>,
    pub highest_root: RootVector,
    pub weyl_vector: WeightVector,
    pub fundamental_weights: Vec<WeightVector>,
    pub form: BilinearFormData,
    /// Columns are the fundamental weights in simple-root coordinates.
    weight_to_root: QMatrix,
    index: HashMap<RootVector, usize>,
}

impl RootSystemData {
    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    /// Positive roots followed by their negatives, in matching order.
    pub fn roots(&self) -> Vec<RootVector> {
        let mut all = self.positive_roots.clone();
        all.extend(self.positive_roots.iter().map(RootVector::neg));
        all
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn dimension(&self) -> usize {
        self.num_roots() + self.rank()
    }

    /// Index into [`roots`](Self::roots), if `v` is a root.
    pub fn root_index(&self, v: &RootVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_root(&self, v: &RootVector) -> bool {
        self.index.contains_key(v)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), got: len })
        }
    }

    pub fn inner_product<V: RootCoordinates, W: RootCoordinates>(&self, v: &V, w: &W) -> Result<Q> {
        let a = v.root_coords(self)?;
        let b = w.root_coords(self)?;
        Ok(self.form_on_coords(&a, &b))
    }

    pub(crate) fn form_on_coords(&self, a: &[Q], b: &[Q]) -> Q {
        let gb = linalg::mat_vec(&self.form.gram, b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    }

    /// Squared length of a root under the long-root-2 form.
    pub fn root_norm(&self, v: &RootVector) -> Q {
        let c: Vec<Q> = v.0.iter().map(|&x| Q::from_integer(x)).collect();
        self.form_on_coords(&c, &c)
    }

    /// `<v, alpha_i^vee>` for a root given in simple-root coordinates.
    pub fn coroot_pairing(&self, v: &RootVector, i: usize) -> i64 {
        v.0.iter()
            .enumerate()
            .map(|(j, c)| c * self.cartan_matrix[i][j])
            .sum()
    }

    pub fn highest_root(&self) -> &RootVector {
        &self.highest_root
    }

    pub fn fundamental_weights(&self) -> &[WeightVector] {
        &self.fundamental_weights
    }

    /// Express a root as a weight (its Dynkin labels).
    pub fn root_as_weight(&self, v: &RootVector) -> WeightVector {
        WeightVector(
            (0..self.rank())
                .map(|i| Q::from_integer(self.coroot_pairing(v, i)))
                .collect(),
        )
    }

    /// `(lambda + delta, lambda + delta) - (delta, delta)` for dominant `lambda`.
    pub fn casimir_constant(&self, lambda: &WeightVector) -> Result<Q> {
        self.check_len(lambda.0.len())?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let shifted = WeightVector(
            lambda.0.iter().zip(&self.weyl_vector.0).map(|(a, b)| a + b).collect(),
        );
        Ok(self.inner_product(&shifted, &shifted)?
            - self.inner_product(&self.weyl_vector, &self.weyl_vector)?)
    }

    /// Half the sum of the positive roots, in simple-root coordinates.
    pub fn half_positive_sum(&self) -> Vec<Q> {
        let mut sum = vec![Q::zero(); self.rank()];
        for r in &self.positive_roots {
            for (s, c) in sum.iter_mut().zip(&r.0) {
                *s += Q::from_integer(*c);
            }
        }
        sum.into_iter().map(|s| s / Q::from_integer(2)).collect()
    }

    /// Simple reflection `s_i` applied to a root.
    pub fn reflect(&self, i: usize, v: &RootVector) -> RootVector {
        let k = self.coroot_pairing(v, i);
        let mut out = v.clone();
        out.0[i] -= k;
        out
    }
}

/// Squared lengths of simple roots, normalized so the longest is 2.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<Q> {
    let n = cartan.len();
    let mut d: Vec<Option<Q>> = vec![None; n];
    d[0] = Some(Q::one());
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if i != j && cartan[i][j] != 0 && d[j].is_none() {
                // a_ij d_i = a_ji d_j
                d[j] = Some(d[i].unwrap() * Q::new(cartan[i][j], cartan[j][i]));
                stack.push(j);
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.expect("connected Dynkin diagram")).collect();
    let max = d.iter().copied().max().unwrap();
    d.into_iter().map(|x| x * Q::from_integer(2) / max).collect()
}

pub fn build_root_system(t: CartanType) -> Result<RootSystemData> {
    let t = CartanType::new(t.series, t.rank)?;
    let n = t.rank;
    let cartan = t.cartan_matrix();
    let lengths = symmetrizer(&cartan);
    let gram: QMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Q::from_integer(cartan[i][j]) * lengths[i] / Q::from_integer(2))
                .collect()
        })
        .collect();

    let simple: Vec<RootVector> = (0..n)
        .map(|i| RootVector((0..n).map(|j| i64::from(i == j)).collect()))
        .collect();

    // Breadth-first over heights: beta + alpha_i is a root iff q > 0 in the
    // alpha_i-string through beta, with q = p - <beta, alpha_i^vee>.
    let pairing = |v: &RootVector, i: usize| -> i64 {
        v.0.iter().enumerate().map(|(j, c)| c * cartan[i][j]).sum()
    };
    let mut positive: Vec<RootVector> = simple.clone();
    let mut known: std::collections::HashSet<RootVector> = simple.iter().cloned().collect();
    let mut layer = simple.clone();
    while !layer.is_empty() {
        let mut next: Vec<RootVector> = Vec::new();
        for beta in &layer {
            for (i, alpha) in simple.iter().enumerate() {
                let mut p = 0;
                let mut down = beta.sub(alpha);
                while known.contains(&down) {
                    p += 1;
                    down = down.sub(alpha);
                }
                let q = p - pairing(beta, i);
                let up = beta.add(alpha);
                if q > 0 && !known.contains(&up) {
                    known.insert(up.clone());
                    next.push(up);
                }
            }
        }
        next.sort();
        positive.extend(next.iter().cloned());
        layer = next;
    }
    positive.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.cmp(a)));

    let expected = t.dimension() - n;
    if 2 * positive.len() != expected {
        return Err(Error::Construction(format!(
            "{t}: generated {} roots, expected {expected}",
            2 * positive.len()
        )));
    }

    let highest = positive.last().cloned().unwrap();

    // Fundamental weights: (omega_i, alpha_j) = delta_ij (alpha_j, alpha_j) / 2.
    let gram_inv = linalg::inverse(&gram)
        .ok_or_else(|| Error::Construction(format!("{t}: singular Gram matrix")))?;
    let weight_to_root: QMatrix = (0..n)
        .map(|k| (0..n).map(|i| gram_inv[k][i] * lengths[i] / Q::from_integer(2)).collect())
        .collect();
    let fundamental: Vec<WeightVector> = (0..n)
        .map(|i| WeightVector((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()))
        .collect();

    let mut all = positive.clone();
    all.extend(positive.iter().map(RootVector::neg));
    let index = all.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

    let mut rs = RootSystemData {
        cartan_type: t,
        cartan_matrix: cartan,
        simple_roots: simple,
        positive_roots: positive,
        highest_root: highest,
        weyl_vector: WeightVector(vec![Q::one(); n]),
        fundamental_weights: fundamental,
        form: BilinearFormData { gram, normalization: FormNormalization::LongRoot2 },
        weight_to_root,
        index,
    };

    // The Weyl vector is stored as the sum of fundamental weights; it must
    // coincide with half the sum of the positive roots.
    let half = rs.half_positive_sum();
    let as_weight: Vec<Q> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| half[j] * Q::from_integer(rs.cartan_matrix[i][j]))
                .sum()
        })
        .collect();
    if as_weight.iter().any(|c| *c != Q::one()) {
        return Err(Error::Construction(format!("{t}: Weyl vector mismatch")));
    }
    rs.weyl_vector = WeightVector(as_weight);
    Ok(rs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn weight(rs: &RootSystemData, i: usize) -> WeightVector {
        rs.fundamental_weights()[i].clone()
    }

    #[test]
    fn root_counts() {
        for (t, roots, dim) in [
            (CartanType::F4, 48, 52),
            (CartanType::D4, 24, 28),
            (CartanType::B4, 32, 36),
            (CartanType::new(Series::A, 1).unwrap(), 2, 3),
            (CartanType::new(Series::C, 3).unwrap(), 18, 21),
            (CartanType::new(Series::A, 5).unwrap(), 30, 35),
        ] {
            let rs = build_root_system(t).unwrap();
            assert_eq!(rs.num_roots(), roots, "{t}");
            assert_eq!(rs.dimension(), dim, "{t}");
        }
    }

    #[test]
    fn a1_roots_are_plus_minus_alpha() {
        let rs = build_root_system(CartanType::new(Series::A, 1).unwrap()).unwrap();
        assert_eq!(rs.roots(), vec![RootVector(vec![1]), RootVector(vec![-1])]);
        assert_eq!(rs.highest_root(), &RootVector(vec![1]));
        let alpha = RootVector(vec![1]);
        let omega = weight(&rs, 0);
        // omega = alpha / 2
        assert_eq!(rs.inner_product(&omega, &alpha).unwrap(), q(1, 1));
        assert_eq!(rs.inner_product(&alpha, &alpha).unwrap(), q(2, 1));
    }

    #[test]
    fn f4_form_and_highest_root() {
        let rs = build_root_system(CartanType::F4).unwrap();
        let a = &rs.simple_roots;
        assert_eq!(rs.inner_product(&a[0], &a[0]).unwrap(), q(2, 1));
        assert_eq!(rs.inner_product(&a[3], &a[3]).unwrap(), q(1, 1));
        assert_eq!(rs.inner_product(&a[0], &a[0].neg()).unwrap(), q(-2, 1));
        assert_eq!(rs.highest_root(), &RootVector(vec![2, 3, 4, 2]));
    }

    #[test]
    fn b4_highest_root() {
        let rs = build_root_system(CartanType::B4).unwrap();
        assert_eq!(rs.highest_root(), &RootVector(vec![1, 2, 2, 2]));
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let rs = build_root_system(CartanType::F4).unwrap();
        let err = rs.inner_product(&RootVector(vec![1, 0]), &RootVector(vec![1, 0, 0, 0]));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn casimir_values() {
        let b4 = build_root_system(CartanType::B4).unwrap();
        assert_eq!(b4.casimir_constant(&weight(&b4, 3)).unwrap(), q(9, 1));
        let adj = b4.root_as_weight(b4.highest_root());
        assert_eq!(b4.casimir_constant(&adj).unwrap(), q(14, 1));

        let d4 = build_root_system(CartanType::D4).unwrap();
        let adj = d4.root_as_weight(d4.highest_root());
        assert_eq!(d4.casimir_constant(&adj).unwrap(), q(12, 1));
        assert_eq!(d4.casimir_constant(&weight(&d4, 0)).unwrap(), q(7, 1));

        let f4 = build_root_system(CartanType::F4).unwrap();
        let adj = f4.root_as_weight(f4.highest_root());
        assert_eq!(f4.casimir_constant(&adj).unwrap(), q(18, 1));
    }

    #[test]
    fn casimir_rejects_non_dominant() {
        let rs = build_root_system(CartanType::D4).unwrap();
        let w = WeightVector(vec![q(-1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert!(matches!(rs.casimir_constant(&w), Err(Error::NotDominant(_))));
    }

    #[test]
    fn adjoint_casimir_is_twice_dual_coxeter() {
        for t in ["a1", "a3", "b2", "b4", "c3", "c4", "d4", "d5", "f4"] {
            let t: CartanType = t.parse().unwrap();
            let rs = build_root_system(t).unwrap();
            let adj = rs.root_as_weight(rs.highest_root());
            assert_eq!(
                rs.casimir_constant(&adj).unwrap(),
                Q::from_integer(2 * t.dual_coxeter_number() as i64),
                "{t}"
            );
        }
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for t in ["f4", "b4", "d4", "c3"] {
            let rs = build_root_system(t.parse().unwrap()).unwrap();
            for (i, w) in rs.fundamental_weights().iter().enumerate() {
                for (j, a) in rs.simple_roots.iter().enumerate() {
                    let pairing = Q::from_integer(2) * rs.inner_product(w, a).unwrap()
                        / rs.inner_product(a, a).unwrap();
                    assert_eq!(pairing, if i == j { Q::one() } else { Q::zero() });
                }
            }
        }
    }

    #[test]
    fn weyl_vector_is_sum_of_fundamental_weights() {
        let rs = build_root_system(CartanType::D4).unwrap();
        let sum: Vec<Q> = (0..4)
            .map(|i| rs.fundamental_weights().iter().map(|w| w.0[i]).sum())
            .collect();
        assert_eq!(rs.weyl_vector.0, sum);
        let half = rs.half_positive_sum();
        let delta = rs.weyl_vector.root_coords(&rs).unwrap();
        assert_eq!(half, delta);
    }

    #[test]
    fn closed_under_reflections_and_negation() {
        for t in ["f4", "b4", "d4", "c4", "a4"] {
            let rs = build_root_system(t.parse().unwrap()).unwrap();
            for r in rs.roots() {
                assert!(rs.is_root(&r.neg()));
                for i in 0..rs.rank() {
                    assert!(rs.is_root(&rs.reflect(i, &r)), "{t}: s_{i}({r})");
                }
            }
        }
    }

    #[test]
    fn highest_root_is_dominant_and_maximal() {
        for t in ["f4", "b4", "d4", "c3"] {
            let rs = build_root_system(t.parse().unwrap()).unwrap();
            let h = rs.highest_root();
            assert!(rs.root_as_weight(h).is_dominant());
            for r in &rs.positive_roots {
                assert!(h.sub(r).0.iter().all(|&c| c >= 0));
            }
        }
    }

    #[test]
    fn form_is_positive_definite_with_long_roots_of_length_two() {
        for t in ["f4", "b3", "c3", "d5"] {
            let rs = build_root_system(t.parse().unwrap()).unwrap();
            assert!(linalg::is_positive_definite(&rs.form.gram));
            let max = rs.roots().iter().map(|r| rs.root_norm(r)).max().unwrap();
            assert_eq!(max, Q::from_integer(2));
        }
    }

    #[test]
    fn parse_types() {
        assert_eq!("F4".parse::<CartanType>().unwrap(), CartanType::F4);
        assert!(matches!("e8".parse::<CartanType>(), Err(Error::UnsupportedType(_))));
        assert!("f5".parse::<CartanType>().is_err());
        assert!("d2".parse::<CartanType>().is_err());
        assert!("b1".parse::<CartanType>().is_err());
    }
}
