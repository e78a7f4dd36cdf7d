//! Ricci curvature of the left-invariant metrics `u_1 B|h_1 + ... + u_4 B|h_4`.
//!
//! Three independent evaluations are provided: a closed form driven by the
//! block Casimir matrix, the generic triple-bracket component formula, and a
//! direct sum over the Levi-Civita connection and curvature tensor.

pub mod brackets;
pub mod casimir;
pub mod classify;
pub mod closed_form;
pub mod connection;
pub mod registry;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fraction_string, parse_fraction, round_sig, Scalar};

pub use brackets::{ricci_triple_bracket, triple_brackets, TripleBracketTable};
pub use casimir::{casimir_matrix, CasimirMatrix};
pub use classify::{naturally_reductive_test, Classification};
pub use closed_form::ricci_closed_form;
pub use connection::{BlockGeometry, ConnectionRicci, ConnectionTable};
pub use registry::{RicciPath, RicciRegistry};

/// Block coefficients `(u_1, u_2, u_3, u_4)` of the metric, all positive.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricParams {
    Exact([BigRational; 4]),
    Float([f64; 4]),
}

impl MetricParams {
    pub fn exact(u: [BigRational; 4]) -> Result<Self> {
        if u.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidMetric(format!(
                "entries must be positive, got {}",
                u.iter().map(fraction_string).collect::<Vec<_>>().join(",")
            )));
        }
        Ok(Self::Exact(u))
    }

    pub fn float(u: [f64; 4]) -> Result<Self> {
        if u.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::InvalidMetric(format!("entries must be positive and finite, got {u:?}")));
        }
        Ok(Self::Float(u))
    }

    pub fn ints(u: [i64; 4]) -> Result<Self> {
        Self::exact(u.map(|n| BigRational::from_integer(n.into())))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn as_f64(&self) -> [f64; 4] {
        match self {
            Self::Exact(u) => [0, 1, 2, 3].map(|i| Scalar::to_f64(&u[i])),
            Self::Float(u) => *u,
        }
    }

    /// Multiply every entry by `c > 0`.
    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        match self {
            Self::Exact(u) => Self::exact([0, 1, 2, 3].map(|i| &u[i] * c)),
            Self::Float(u) => {
                let c = Scalar::to_f64(c);
                Self::float(u.map(|x| x * c))
            }
        }
    }

    pub fn scaled_f64(&self, c: f64) -> Result<Self> {
        let u = self.as_f64();
        Self::float(u.map(|x| x * c))
    }

    /// Permute `(u_2, u_3, u_4)`: entry `1 + a` of the result is entry `1 + perm[a]` of `self`.
    pub fn permute_tail(&self, perm: [usize; 3]) -> Self {
        fn apply<T: Clone>(u: &[T; 4], perm: [usize; 3]) -> [T; 4] {
            [u[0].clone(), u[1 + perm[0]].clone(), u[1 + perm[1]].clone(), u[1 + perm[2]].clone()]
        }
        match self {
            Self::Exact(u) => Self::Exact(apply(u, perm)),
            Self::Float(u) => Self::Float(apply(u, perm)),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Self::Exact(u) => u.iter().map(fraction_string).collect(),
            Self::Float(u) => u.iter().map(|x| round_sig(*x).to_string()).collect(),
        }
    }
}

impl FromStr for MetricParams {
    type Err = Error;

    /// `"3/5,1,1,1"` parses exactly; any decimal entry makes the whole tuple floating.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidMetric(format!("expected 4 comma-separated values, got {s:?}")));
        }
        let exact: Option<Vec<BigRational>> = parts.iter().map(|p| parse_fraction(p)).collect();
        if let Some(v) = exact {
            return Self::exact([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]);
        }
        let mut u = [0.0; 4];
        for (slot, p) in u.iter_mut().zip(&parts) {
            *slot = match parse_fraction(p) {
                Some(q) => Scalar::to_f64(&q),
                None => p.parse().map_err(|_| Error::InvalidMetric(format!("cannot parse {p:?}")))?,
            };
        }
        Self::float(u)
    }
}

impl fmt::Display for MetricParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// Four block values: Ricci eigenvalues, or the Einstein system expressions.
#[derive(Debug, Clone, PartialEq)]
pub enum Components {
    Exact([BigRational; 4]),
    Float([f64; 4]),
}

pub type RicciComponents = Components;

impl Components {
    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn as_f64(&self) -> [f64; 4] {
        match self {
            Self::Exact(r) => [0, 1, 2, 3].map(|i| Scalar::to_f64(&r[i])),
            Self::Float(r) => *r,
        }
    }

    pub fn exact(&self) -> Option<&[BigRational; 4]> {
        match self {
            Self::Exact(r) => Some(r),
            Self::Float(_) => None,
        }
    }

    /// `max_{a,b} |r_a - r_b|`.
    pub fn spread(&self) -> f64 {
        let r = self.as_f64();
        let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = r.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Exact spread, when available.
    pub fn exact_spread(&self) -> Option<BigRational> {
        self.exact().map(|r| {
            let max = r.iter().max().unwrap();
            let min = r.iter().min().unwrap();
            max - min
        })
    }

    pub fn all_equal_exactly(&self) -> bool {
        self.exact_spread().is_some_and(|s| s.is_zero())
    }

    pub fn negated(&self) -> Self {
        match self {
            Self::Exact(r) => Self::Exact(r.clone().map(|x| -x)),
            Self::Float(r) => Self::Float(r.map(|x| -x)),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (a, b) = (self.as_f64(), other.as_f64());
        (0..4).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }

    pub fn to_strings(&self) -> Vec<String> {
        match self {
            Self::Exact(r) => r.iter().map(fraction_string).collect(),
            Self::Float(r) => r.iter().map(|x| round_sig(*x).to_string()).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Exact(r) => r.iter().map(|x| serde_json::Value::from(fraction_string(x))).collect(),
            Self::Float(r) => r.iter().map(|x| serde_json::Value::from(round_sig(*x))).collect(),
        }
    }
}

/// Evaluate a scalar-generic computation on either representation of `u`.
pub(crate) fn dispatch<F, G>(u: &MetricParams, exact: F, float: G) -> Result<Components>
where
    F: FnOnce(&[BigRational; 4]) -> Result<[BigRational; 4]>,
    G: FnOnce(&[f64; 4]) -> Result<[f64; 4]>,
{
    Ok(match u {
        MetricParams::Exact(v) => Components::Exact(exact(v)?),
        MetricParams::Float(v) => Components::Float(float(v)?),
    })
}
