use std::fmt;

use num_rational::BigRational;
use serde::Serialize;

use super::MetricParams;

/// Relative tolerance for comparing floating block coefficients.
pub const FLOAT_EQ_TOL: f64 = 1e-9;

/// Naturally reductive families among the block metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Classification {
    BiInvariant,
    /// `u_2 = u_3 = u_4`.
    Case1,
    /// `u_1 = u_{i2}` and the remaining two equal; `i2` is 1-based.
    Case2 { i2: usize },
    NonNaturallyReductive,
}

impl Classification {
    pub fn is_naturally_reductive(&self) -> bool {
        !matches!(self, Self::NonNaturallyReductive)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::BiInvariant => "bi-invariant",
            Self::Case1 => "case-1",
            Self::Case2 { .. } => "case-2",
            Self::NonNaturallyReductive => "non-naturally-reductive",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Case2 { i2 } => write!(f, "case-2 (i2 = {i2})"),
            other => f.write_str(other.tag()),
        }
    }
}

fn classify_with<T>(u: &[T; 4], eq: impl Fn(&T, &T) -> bool) -> Classification {
    let tail_equal = eq(&u[1], &u[2]) && eq(&u[2], &u[3]);
    if tail_equal && eq(&u[0], &u[1]) {
        return Classification::BiInvariant;
    }
    if tail_equal {
        return Classification::Case1;
    }
    for i2 in 1..4 {
        let (a, b) = match i2 {
            1 => (2, 3),
            2 => (1, 3),
            _ => (1, 2),
        };
        if eq(&u[0], &u[i2]) && eq(&u[a], &u[b]) {
            return Classification::Case2 { i2: i2 + 1 };
        }
    }
    Classification::NonNaturallyReductive
}

pub fn naturally_reductive_test(u: &MetricParams) -> Classification {
    match u {
        MetricParams::Exact(v) => classify_with(v, |a: &BigRational, b| a == b),
        MetricParams::Float(v) => {
            classify_with(v, |a: &f64, b| (a - b).abs() <= FLOAT_EQ_TOL * a.abs().max(b.abs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Classification {
        naturally_reductive_test(&s.parse().unwrap())
    }

    #[test]
    fn known_points() {
        assert_eq!(c("1,1,1,1"), Classification::BiInvariant);
        assert_eq!(c("3/5,1,1,1"), Classification::Case1);
        assert_eq!(c("7/11,1,1,7/11"), Classification::Case2 { i2: 4 });
        assert_eq!(c("2,2,5,5"), Classification::Case2 { i2: 2 });
        assert_eq!(c("0.7019,1,1,1.3842"), Classification::NonNaturallyReductive);
        assert_eq!(c("1,2,3,4"), Classification::NonNaturallyReductive);
    }

    #[test]
    fn float_tolerance_is_relative() {
        assert_eq!(c("1,1,1,1.0000000000001"), Classification::BiInvariant);
        assert_eq!(c("1,1,1,1.00001"), Classification::NonNaturallyReductive);
        assert_eq!(c("3e-20,1e-20,1e-20,1.0000000000001e-20"), Classification::Case1);
    }

    #[test]
    fn exact_comparison_is_strict() {
        assert_eq!(c("1,1,1,1000000000001/1000000000000"), Classification::NonNaturallyReductive);
    }
}
