//! Einstein metrics in the four-parameter family: case analysis, refinement,
//! deduplication and end-to-end verification against the connection path.

pub mod cases;
pub mod newton;
pub mod poly;
pub mod system;

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::curvature::connection::ricci_connection;
use crate::curvature::{naturally_reductive_test, Classification, MetricParams};
use crate::error::{Error, Result};
use crate::model::PairModel;
use crate::scalar::{fraction_string, round_sig, Scalar};

pub use cases::{default_cases, CaseOutcome, CaseRegistry, Provenance, SolveOptions, SolverCase, SweepReport};
pub use newton::{newton_refine, NewtonOptions, NewtonResult};
pub use system::{evaluate_system, residual, residual_exact};

#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinSolution {
    /// Normalized so that `u_2 = 1`.
    pub u: MetricParams,
    /// Common positive Ricci eigenvalue.
    pub einstein_constant: EinsteinConstant,
    pub residual: f64,
    pub exact: bool,
    pub classification: Classification,
    pub provenance: Provenance,
    /// `max_k |r_k(connection) - (-E_k)|` plus the in-block and off-diagonal defects.
    pub connection_defect: f64,
}

/// A single value, exact when the solution is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum EinsteinConstant {
    Exact(BigRational),
    Float(f64),
}

impl EinsteinConstant {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(q) => Scalar::to_f64(q),
            Self::Float(x) => *x,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Exact(q) => json!(fraction_string(q)),
            Self::Float(x) => json!(round_sig(*x)),
        }
    }
}

impl std::fmt::Display for EinsteinConstant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Exact(q) => f.write_str(&fraction_string(q)),
            Self::Float(x) => write!(f, "{}", round_sig(*x)),
        }
    }
}

impl EinsteinSolution {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "u": self.u.to_strings(),
            "constant": self.einstein_constant.to_json(),
            "residual": round_sig(self.residual),
            "exact": self.exact,
            "classification": self.classification.tag(),
            "naturally_reductive": self.classification.is_naturally_reductive(),
            "case2_index": match self.classification { Classification::Case2 { i2 } => json!(i2), _ => json!(null) },
            "provenance": self.provenance.tag(),
            "connection_defect": round_sig(self.connection_defect),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerateOptions {
    pub solve: SolveOptions,
    pub newton: NewtonOptions,
    /// Acceptance threshold on residuals and on connection-path agreement.
    pub residual_tol: f64,
    /// Relative tolerance when comparing canonical keys of floating solutions.
    pub dedup_tol: f64,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { solve: SolveOptions::default(), newton: NewtonOptions::default(), residual_tol: 1e-10, dedup_tol: 1e-8 }
    }
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub solutions: Vec<EinsteinSolution>,
    pub outcomes: Vec<CaseOutcome>,
    /// Candidates dropped on the way, with the reason.
    pub rejected: Vec<(MetricParams, String)>,
}

/// Sort `(u_2, u_3, u_4)` ascending and scale the smallest to 1.
pub fn canonical_key(u: &MetricParams) -> MetricParams {
    match u {
        MetricParams::Exact(v) => {
            let mut tail = [v[1].clone(), v[2].clone(), v[3].clone()];
            tail.sort();
            let s = tail[0].clone();
            MetricParams::Exact([&v[0] / &s, BigRational::one(), &tail[1] / &s, &tail[2] / &s])
        }
        MetricParams::Float(v) => {
            let mut tail = [v[1], v[2], v[3]];
            tail.sort_by(f64::total_cmp);
            MetricParams::Float([v[0] / tail[0], 1.0, tail[1] / tail[0], tail[2] / tail[0]])
        }
    }
}

fn same_class(a: &MetricParams, b: &MetricParams, tol: f64) -> bool {
    match (canonical_key(a), canonical_key(b)) {
        (MetricParams::Exact(x), MetricParams::Exact(y)) => x == y,
        (x, y) => {
            let (x, y) = (x.as_f64(), y.as_f64());
            (0..4).all(|i| (x[i] - y[i]).abs() <= tol * x[i].abs().max(y[i].abs()))
        }
    }
}

fn gauge(u: &MetricParams) -> MetricParams {
    match u {
        MetricParams::Exact(v) => {
            let g = v[1].clone();
            MetricParams::Exact([0, 1, 2, 3].map(|i| &v[i] / &g))
        }
        MetricParams::Float(v) => MetricParams::Float(v.map(|x| x / v[1])),
    }
}

/// Connection-path Ricci compared with `-E`; returns the constant and the total defect.
fn verify(model: &PairModel, u: &MetricParams) -> (EinsteinConstant, f64) {
    match u {
        MetricParams::Exact(v) => {
            let r = ricci_connection(&model.geometry, v);
            let e = system::evaluate(v);
            let gap = |x: BigRational| Scalar::to_f64(&x).abs();
            let mut defect = r.off_diagonal_max + r.in_block_spread;
            for k in 0..4 {
                defect = defect
                    .max(gap(r.components[k].clone() + e[k].clone()))
                    .max(gap(r.components[k].clone() - r.components[0].clone()));
            }
            (EinsteinConstant::Exact(r.components[0].clone()), defect)
        }
        MetricParams::Float(v) => {
            let r = ricci_connection(&model.geometry, v);
            let e = system::evaluate(v);
            let mut defect = r.off_diagonal_max + r.in_block_spread;
            for k in 0..4 {
                defect = defect.max((r.components[k] + e[k]).abs()).max((r.components[k] - r.components[0]).abs());
            }
            (EinsteinConstant::Float(r.components[0]), defect)
        }
    }
}

fn lex(a: &MetricParams, b: &MetricParams) -> Ordering {
    let (x, y) = (a.as_f64(), b.as_f64());
    x.iter().zip(&y).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

pub fn enumerate_solutions(model: &PairModel, opts: &EnumerateOptions) -> Result<Enumeration> {
    enumerate_with(model, &default_cases(), opts)
}

pub fn enumerate_with(model: &PairModel, cases: &CaseRegistry, opts: &EnumerateOptions) -> Result<Enumeration> {
    let mut outcomes = vec![];
    let mut solutions: Vec<EinsteinSolution> = vec![];
    let mut rejected = vec![];
    for case in cases.iter() {
        let outcome = case.solve(&opts.solve)?;
        for cand in &outcome.candidates {
            let (u, provenance) = match &cand.u {
                MetricParams::Exact(_) => (gauge(&cand.u), cand.provenance),
                MetricParams::Float(v) => match newton_refine(*v, &opts.newton) {
                    Ok(r) => (MetricParams::float(r.u)?, Provenance::Newton),
                    Err(e) => {
                        rejected.push((cand.u.clone(), e.to_string()));
                        continue;
                    }
                },
            };
            let res = match &u {
                MetricParams::Exact(v) => {
                    if !residual_exact(v).is_zero() {
                        rejected.push((u.clone(), "nonzero exact residual".into()));
                        continue;
                    }
                    0.0
                }
                MetricParams::Float(_) => residual(&u),
            };
            if res >= opts.residual_tol {
                rejected.push((u.clone(), format!("residual {res:e}")));
                continue;
            }
            if solutions.iter().any(|s| same_class(&s.u, &u, opts.dedup_tol)) {
                continue;
            }
            let (constant, defect) = verify(model, &u);
            if defect >= opts.residual_tol {
                return Err(Error::Verification(format!(
                    "connection path disagrees with the system at {u} (defect {defect:e})"
                )));
            }
            if constant.to_f64() <= 0.0 {
                return Err(Error::Verification(format!("non-positive Einstein constant at {u}")));
            }
            solutions.push(EinsteinSolution {
                exact: u.is_exact(),
                classification: naturally_reductive_test(&u),
                u,
                einstein_constant: constant,
                residual: res,
                provenance,
                connection_defect: defect,
            });
        }
        outcomes.push(outcome);
    }
    solutions.sort_by(|a, b| a.classification.cmp(&b.classification).then_with(|| lex(&a.u, &b.u)));
    Ok(Enumeration { solutions, outcomes, rejected })
}
