//! The four expressions whose equality is the Einstein condition.
//!
//! `E_k = -r_k` for the block Ricci eigenvalues `r_k`.

use num_rational::BigRational;

use crate::curvature::{dispatch, Components, MetricParams};
use crate::scalar::Scalar;

pub fn evaluate<S: Scalar>(u: &[S; 4]) -> [S; 4] {
    let n = |k: i64| S::from_int(k);
    let sq = |x: &S| x.clone() * x.clone();
    let [u1, u2, u3, u4] = u.clone();
    let prod = u2.clone() * u3.clone() * u4.clone();
    let e1 = -n(3) / u1.clone()
        - u1.clone() / (n(2) * sq(&u2))
        - u1.clone() / (n(2) * sq(&u3))
        - u1.clone() / (n(2) * sq(&u4));
    let tail = |m: &S, a: &S, b: &S| {
        n(7) * u1.clone() / (n(2) * sq(m)) - n(9) / m.clone() + (sq(a) + sq(b) - sq(m)) / prod.clone()
    };
    let e2 = tail(&u2, &u3, &u4);
    let e3 = tail(&u3, &u2, &u4);
    let e4 = tail(&u4, &u2, &u3);
    [e1, e2, e3, e4]
}

pub fn evaluate_system(u: &MetricParams) -> Components {
    dispatch(u, |v| Ok(evaluate(v)), |v| Ok(evaluate(v))).expect("evaluation is infallible")
}

/// `max_{a,b} |E_a(u) - E_b(u)|`.
pub fn residual(u: &MetricParams) -> f64 {
    match u {
        MetricParams::Exact(v) => {
            let e = evaluate(v);
            Scalar::to_f64(&exact_spread(&e))
        }
        MetricParams::Float(v) => residual_f64(v),
    }
}

pub fn residual_f64(u: &[f64; 4]) -> f64 {
    let e = evaluate(u);
    let max = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = e.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

/// Exact residual for rational `u`.
pub fn residual_exact(u: &[BigRational; 4]) -> BigRational {
    exact_spread(&evaluate(u))
}

fn exact_spread(e: &[BigRational; 4]) -> BigRational {
    e.iter().max().unwrap() - e.iter().min().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use num_traits::Zero;

    fn ex(u: [(i64, i64); 4]) -> [BigRational; 4] {
        u.map(|(n, d)| big(n, d))
    }

    #[test]
    fn unit_metric() {
        assert_eq!(evaluate(&ex([(1, 1); 4])), [0; 4].map(|_| big(-9, 2)));
    }

    #[test]
    fn exact_solutions_have_zero_residual() {
        for u in [
            ex([(1, 1); 4]),
            ex([(3, 5), (1, 1), (1, 1), (1, 1)]),
            ex([(7, 11), (1, 1), (1, 1), (7, 11)]),
            ex([(1, 1), (1, 1), (11, 7), (11, 7)]),
        ] {
            assert!(residual_exact(&u).is_zero(), "{u:?}");
        }
        assert_eq!(evaluate(&ex([(3, 5), (1, 1), (1, 1), (1, 1)]))[0], big(-59, 10));
    }

    #[test]
    fn not_einstein() {
        let e = evaluate(&ex([(1, 1), (1, 1), (1, 1), (2, 1)]));
        assert_eq!(e[1], e[2]);
        assert_eq!(e[1], big(-7, 2));
        assert_eq!(e[3], big(-37, 8));
        assert_eq!(residual(&MetricParams::ints([1, 1, 1, 2]).unwrap()), 9.0 / 8.0);
    }
}
