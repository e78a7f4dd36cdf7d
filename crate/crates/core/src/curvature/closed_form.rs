use crate::error::Result;
use crate::linalg::Q;
use crate::scalar::Scalar;

use super::{dispatch, CasimirMatrix, MetricParams, RicciComponents};

/// Ricci eigenvalues from the block Casimir matrix, for gradings with
/// `[h_1, h_m] = h_m`, `[h_m, h_m] = h_1` and `[h_a, h_b] = h_c` on `{a, b, c} = {2, 3, 4}`.
pub fn closed_form<S: Scalar>(u: &[S; 4], cm: &CasimirMatrix) -> [S; 4] {
    let c = |i: usize, j: usize| S::from_ratio(cm.get(i, j));
    let n = |k: i64| S::from_int(k);
    let sq = |x: &S| x.clone() * x.clone();
    let u1 = u[0].clone();

    let mut r1 = S::zero();
    for j in 0..4 {
        r1 = r1 + u1.clone() * c(j, 0) / (n(4) * sq(&u[j]));
    }

    let prod = u[1].clone() * u[2].clone() * u[3].clone();
    let mut r = [r1, S::zero(), S::zero(), S::zero()];
    for m in 1..4 {
        let um = u[m].clone();
        let mut v = u1.clone() * c(0, m) / (n(4) * sq(&um))
            + (n(4) * um.clone() - n(3) * u1.clone()) * c(m, m) / (n(4) * sq(&um));
        for a in 1..4 {
            if a == m {
                continue;
            }
            let b = 6 - m - a;
            let (ua, ub) = (u[a].clone(), u[b].clone());
            let q = n(2) * ub.clone() * (ub.clone() - um.clone() - ua.clone())
                + (ub.clone() - um.clone() + ua.clone()) * (ub + um.clone() - ua);
            v = v - q * c(a, m) / (n(4) * prod.clone());
        }
        r[m] = v;
    }
    r
}

pub fn ricci_closed_form(u: &MetricParams, cm: &CasimirMatrix) -> Result<RicciComponents> {
    dispatch(u, |v| Ok(closed_form(v, cm)), |v| Ok(closed_form(v, cm)))
}

/// The bi-invariant value `(adjoint Casimir) / 4` at `u = (1, 1, 1, 1)`.
pub fn bi_invariant_value(cm: &CasimirMatrix) -> Q {
    cm.column_sums()[0] / Q::from_integer(4)
}
