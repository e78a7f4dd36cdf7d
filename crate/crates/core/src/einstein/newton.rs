//! Newton iteration on the Einstein system with the gauge `u_2 = 1`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

use super::system::{evaluate, residual_f64};

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Stop once `residual_f64` falls below this.
    pub target_residual: f64,
    /// Required on exit.
    pub accept_residual: f64,
    /// Jacobians with a larger 2-norm condition number are treated as singular.
    pub max_condition: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self { max_iterations: 60, target_residual: 1e-14, accept_residual: 1e-12, max_condition: 1e10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult {
    /// Refined parameters with `u[1] == 1`.
    pub u: [f64; 4],
    pub residual: f64,
    pub iterations: usize,
}

/// `(E_1 - E_2, E_2 - E_3, E_3 - E_4)` at `(x_0, 1, x_1, x_2)`.
fn differences(x: &Vector3<f64>) -> Vector3<f64> {
    let e = evaluate(&[x[0], 1.0, x[1], x[2]]);
    Vector3::new(e[0] - e[1], e[1] - e[2], e[2] - e[3])
}

/// Central differences.
fn jacobian(x: &Vector3<f64>) -> Matrix3<f64> {
    let mut j = Matrix3::zeros();
    for c in 0..3 {
        let h = 1e-6 * x[c].abs().max(1.0);
        let mut plus = *x;
        let mut minus = *x;
        plus[c] += h;
        minus[c] -= h;
        let col = (differences(&plus) - differences(&minus)) / (2.0 * h);
        j.set_column(c, &col);
    }
    j
}

pub fn newton_refine(u0: [f64; 4], opts: &NewtonOptions) -> Result<NewtonResult> {
    if u0.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Newton(format!("start {u0:?} is not in the positive orthant")));
    }
    let g = u0[1];
    let mut x = Vector3::new(u0[0] / g, u0[2] / g, u0[3] / g);
    let point = |x: &Vector3<f64>| [x[0], 1.0, x[1], x[2]];
    let start = residual_f64(&point(&x));
    if !start.is_finite() {
        return Err(Error::Newton("residual is not finite at the start".into()));
    }
    for it in 0..opts.max_iterations {
        let res = residual_f64(&point(&x));
        if res < opts.target_residual {
            return Ok(NewtonResult { u: point(&x), residual: res, iterations: it });
        }
        let f = differences(&x);
        let jac = jacobian(&x);
        let sv = jac.singular_values();
        let cond = sv.max() / sv.min();
        if cond.is_nan() || cond > opts.max_condition {
            return Err(Error::Newton(format!(
                "near-singular Jacobian at {:?} (condition number {cond:e})",
                point(&x)
            )));
        }
        let step = jac
            .lu()
            .solve(&-f)
            .ok_or_else(|| Error::Newton(format!("singular Jacobian at {:?}", point(&x))))?;
        // damp until the residual does not grow, within the orthant
        let mut t = 1.0;
        let next = loop {
            let cand = x + step * t;
            let inside = cand.iter().all(|v| *v > 0.0);
            if inside && residual_f64(&point(&cand)) <= res {
                break Some(cand);
            }
            t *= 0.5;
            if t < 1e-6 {
                break None;
            }
        };
        match next {
            Some(n) => {
                if (n - x).norm() == 0.0 {
                    break;
                }
                x = n;
            }
            None if res < opts.accept_residual => {
                return Ok(NewtonResult { u: point(&x), residual: res, iterations: it });
            }
            None => {
                let full = x + step;
                return Err(Error::Newton(if full.iter().any(|v| *v <= 0.0) {
                    format!("step leaves the positive orthant at {:?}", point(&x))
                } else {
                    format!("no descent from {:?} (residual {res:e})", point(&x))
                }));
            }
        }
        if x.iter().any(|v| !v.is_finite() || *v > 1e12) {
            return Err(Error::Newton("iteration diverged".into()));
        }
    }
    let residual = residual_f64(&point(&x));
    if residual < opts.accept_residual {
        Ok(NewtonResult { u: point(&x), residual, iterations: opts.max_iterations })
    } else {
        Err(Error::Newton(format!("residual {residual:e} after {} iterations", opts.max_iterations)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_to_cubic_solution() {
        let r = newton_refine([0.70, 1.0, 1.0, 1.38], &NewtonOptions::default()).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(r.u[1], 1.0);
        assert!((r.u[0] - 0.7019).abs() < 1e-4);
        assert!((r.u[3] - 1.3842).abs() < 1e-4);
        assert!((r.u[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gauge_is_applied() {
        let r = newton_refine([1.4, 2.0, 2.0, 2.77], &NewtonOptions::default()).unwrap();
        assert_eq!(r.u[1], 1.0);
        assert!((r.u[3] - 1.3842).abs() < 1e-4);
    }

    #[test]
    fn fixed_point_takes_no_step() {
        let r = newton_refine([1.0; 4], &NewtonOptions::default()).unwrap();
        assert_eq!(r.u, [1.0; 4]);
        assert_eq!(r.iterations, 0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn degenerate_start_reports_diagnostic() {
        let e = newton_refine([1e-6, 1.0, 1.0, 1.0], &NewtonOptions::default());
        assert!(matches!(e, Err(Error::Newton(_))), "{e:?}");
        assert!(newton_refine([0.0, 1.0, 1.0, 1.0], &NewtonOptions::default()).is_err());
    }
}
