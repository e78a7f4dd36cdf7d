//! The three case analyses of the Einstein system, registered by name.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::MetricParams;
use crate::error::Result;
use crate::registry::{Registry, Strategy};
use crate::scalar::Scalar;

use super::poly::{real_roots, Poly};
use super::system::{evaluate, residual_f64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Provenance {
    CaseA,
    CaseB,
    CaseC,
    Newton,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::CaseA => "case-A",
            Self::CaseB => "case-B",
            Self::CaseC => "case-C",
            Self::Newton => "newton",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub u: MetricParams,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Grid step for root isolation of univariate polynomials.
    pub bracket_step: f64,
    /// Bisection width for univariate roots.
    pub bracket_tol: f64,
    /// Grid step of the case-C sweep over `u_4`.
    pub sweep_step: f64,
    /// Residual below which a case-C point counts as a candidate.
    pub sweep_residual: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { bracket_step: 1.0 / 64.0, bracket_tol: 1e-14, sweep_step: 1e-5, sweep_residual: 1e-6 }
    }
}

/// Evidence gathered by the case-C sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub step: f64,
    pub grid_points: usize,
    /// Grid points where the product formula is singular.
    pub excluded: usize,
    /// Grid points with a real `(u_2, u_3)`.
    pub real_points: usize,
    /// Real points with `u_2, u_3 > 0`.
    pub positive_points: usize,
    pub sign_changes: usize,
    /// Refined sign changes: `(u, residual)`.
    pub refined: Vec<([f64; 4], f64)>,
    /// Smallest residual over positive points, and where.
    pub min_residual: Option<([f64; 4], f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseOutcome {
    pub case: &'static str,
    pub candidates: Vec<Candidate>,
    /// Named intermediate polynomials, for reporting.
    pub polynomials: Vec<(String, Poly)>,
    pub sweep: Option<SweepReport>,
}

pub trait SolverCase: Strategy {
    fn solve(&self, opts: &SolveOptions) -> Result<CaseOutcome>;
}

pub type CaseRegistry = Registry<dyn SolverCase>;

pub fn default_cases() -> CaseRegistry {
    let mut reg = CaseRegistry::new("solver case");
    reg.register(Box::new(CaseA));
    reg.register(Box::new(CaseB));
    reg.register(Box::new(CaseC));
    reg
}

/// `c_0 + c_1 x + c_2 x^2 + ...` with `x = n / d`, multiplied through by `d^deg`.
fn substitute(coeffs: &[Poly], n: &Poly, d: &Poly) -> Poly {
    let deg = coeffs.len() as u32 - 1;
    coeffs.iter().enumerate().fold(Poly::zero(), |acc, (i, c)| {
        let term = &(c * &n.pow(i as u32)) * &d.pow(deg - i as u32);
        &acc + &term
    })
}

fn rational(x: &BigRational) -> MetricParams {
    let one = BigRational::one();
    MetricParams::Exact([x.clone(), one.clone(), one.clone(), one])
}

/// `u_2 = u_3 = 1`.
pub struct CaseA;

impl CaseA {
    /// `9u1^2u4^2 - 18u1u4^2 + 2u1u4^3 + 6u4^2 + u1^2` (from `E_1 = E_2`) as coefficients in `u_1`.
    pub fn first_equation() -> [Poly; 3] {
        [Poly::from_ints(&[0, 0, 6]), Poly::from_ints(&[0, 0, -18, 2]), Poly::from_ints(&[1, 0, 9])]
    }

    /// `7u1(u4^2 - 1) + 2u4(2u4 - 7)(u4 - 1)` (from `E_2 = E_4`) as coefficients in `u_1`.
    pub fn second_equation() -> [Poly; 2] {
        [Poly::from_ints(&[0, 14, -18, 4]), Poly::from_ints(&[-7, 0, 7])]
    }

    /// `u_1 = N(u_4) / D(u_4)` on the branch `u_4 != 1`.
    pub fn u1_of_u4() -> (Poly, Poly) {
        let [b, a] = Self::second_equation();
        let lin = Poly::from_ints(&[-1, 1]);
        let b = b.div_exact(&lin).expect("u4 - 1 divides the constant coefficient");
        let a = a.div_exact(&lin).expect("u4 - 1 divides the linear coefficient");
        (-&b, a)
    }

    /// First equation after substituting `u_1 = N/D`, stripped of the factor `u_4^2`.
    pub fn quartic() -> Poly {
        let (n, d) = Self::u1_of_u4();
        let full = substitute(&Self::first_equation(), &n, &d);
        full.div_exact(&Poly::from_ints(&[0, 0, 1])).expect("u4^2 divides the substituted equation").primitive()
    }
}

impl Strategy for CaseA {
    fn name(&self) -> &'static str {
        "case-A"
    }

    fn description(&self) -> &'static str {
        "u2 = u3 = 1"
    }
}

impl SolverCase for CaseA {
    fn solve(&self, opts: &SolveOptions) -> Result<CaseOutcome> {
        let mut candidates = vec![];
        let mut polynomials = vec![];
        let one = BigRational::one();

        // u4 = 1: the second equation vanishes identically
        let at_one: Vec<BigRational> = Self::first_equation().iter().map(|c| c.eval(&one)).collect();
        let quadratic = Poly::new(at_one).primitive();
        for r in quadratic.rational_roots().into_iter().filter(|r| r.is_positive()) {
            candidates.push(Candidate { u: rational(&r), provenance: Provenance::CaseA });
        }
        polynomials.push(("u4 = 1 branch, in u1".to_string(), quadratic));

        let (n, d) = Self::u1_of_u4();
        let quartic = Self::quartic();
        polynomials.push(("u4 != 1 branch, in u4".to_string(), quartic.clone()));
        let mut rest = quartic.clone();
        for r in quartic.rational_roots() {
            rest = rest
                .div_exact(&Poly::new(vec![-r.clone(), one.clone()]))
                .expect("rational root divides")
                .primitive();
            let u1 = n.eval(&r) / d.eval(&r);
            if r.is_positive() && r != one && u1.is_positive() {
                let u = MetricParams::Exact([u1, one.clone(), one.clone(), r]);
                candidates.push(Candidate { u, provenance: Provenance::CaseA });
            }
        }
        polynomials.push(("irreducible factor, in u4".to_string(), rest.clone()));
        for x in real_roots(&rest, 0.0, 8.0, opts.bracket_step, opts.bracket_tol) {
            let u1 = n.eval_f64(x) / d.eval_f64(x);
            if x > 0.0 && u1 > 0.0 {
                candidates.push(Candidate { u: MetricParams::Float([u1, 1.0, 1.0, x]), provenance: Provenance::CaseA });
            }
        }
        Ok(CaseOutcome { case: self.name(), candidates, polynomials, sweep: None })
    }
}

/// `u_1 = u_2 = 1`.
pub struct CaseB;

impl CaseB {
    /// `2 u3^2 u4^2 (E_1 - E_2) = -(u3 - u4)^2 (2 u3 u4 + 1)`; the right side as a function.
    pub fn first_difference<S: Scalar>(u3: &S, u4: &S) -> S {
        let d = u3.clone() - u4.clone();
        -(d.clone() * d) * (S::from_int(2) * u3.clone() * u4.clone() + S::one())
    }

    /// `E_2 = E_3` at `u_3 = u_4 = t`, times `-2t^2`.
    pub fn quadratic() -> Poly {
        Poly::from_ints(&[11, -18, 7])
    }
}

impl Strategy for CaseB {
    fn name(&self) -> &'static str {
        "case-B"
    }

    fn description(&self) -> &'static str {
        "u1 = u2 = 1"
    }
}

impl SolverCase for CaseB {
    fn solve(&self, _opts: &SolveOptions) -> Result<CaseOutcome> {
        // 2 u3 u4 + 1 > 0 forces u3 = u4
        let one = BigRational::one();
        let q = Self::quadratic();
        let candidates = q
            .rational_roots()
            .into_iter()
            .filter(|t| t.is_positive())
            .map(|t| Candidate {
                u: MetricParams::Exact([one.clone(), one.clone(), t.clone(), t]),
                provenance: Provenance::CaseB,
            })
            .collect();
        Ok(CaseOutcome { case: self.name(), candidates, polynomials: vec![("u3 = u4 = t".to_string(), q)], sweep: None })
    }
}

/// `u_1 = 1` with `u_2, u_3, u_4` pairwise distinct.
pub struct CaseC;

impl CaseC {
    /// `(u_2, u_3)` with `u_2 >= u_3` on the constraint curve at `u_4`, when real.
    pub fn tail(u4: f64) -> Option<(f64, f64)> {
        let s = 1.75 - u4;
        let p = 7.0 * u4 * s / (22.0 * u4 - 7.0);
        let disc = s * s - 4.0 * p;
        if !p.is_finite() || disc < 0.0 {
            return None;
        }
        let r = disc.sqrt();
        Some(((s + r) / 2.0, (s - r) / 2.0))
    }

    /// `16 (s^2 - 4p)(22 u_4 - 7)` with `s = u_2 + u_3` and `p = u_2 u_3` on the constraint curve.
    pub fn discriminant_numerator() -> Poly {
        let u = Poly::x();
        let s = &Poly::constant(BigRational::new(7.into(), 4.into())) - &u;
        let pole = Poly::from_ints(&[-7, 22]);
        let prod = &(&s * &s) * &pole;
        let tail = (&u * &s).scale(&BigRational::from_integer(28.into()));
        (&prod - &tail).scale(&BigRational::from_integer(16.into()))
    }

    /// Exact proof that no `u_4` gives a real pair `u_2, u_3 > 0`.
    ///
    /// The numerator is `(4u - 7) q(u)` with `q` a quadratic without real roots,
    /// so on `(7/22, 7/4)` the discriminant is negative; below the pole the
    /// product `u_2 u_3` is negative and one of the pair is.
    pub fn no_positive_points() -> bool {
        let Some(q) = Self::discriminant_numerator().div_exact(&Poly::from_ints(&[-7, 4])) else {
            return false;
        };
        let (a, b, c) = (q.coeff(2), q.coeff(1), q.coeff(0));
        let disc = &b * &b - BigRational::from_integer(4.into()) * &a * &c;
        q.degree() == 2 && a.is_positive() && disc.is_negative()
    }

    fn point(u4: f64, upper: bool) -> Option<[f64; 4]> {
        Self::tail(u4).map(|(a, b)| if upper { [1.0, a, b, u4] } else { [1.0, b, a, u4] })
    }

    fn gap(u: &[f64; 4]) -> f64 {
        let e = evaluate(u);
        e[0] - e[1]
    }

    pub fn sweep(opts: &SolveOptions) -> SweepReport {
        let h = opts.sweep_step;
        let n = (1.75 / h).round() as usize;
        let pole = 7.0 / 22.0;
        let grid: Vec<f64> = (1..n).map(|k| k as f64 * h).collect();
        let excluded = grid.iter().filter(|x| (22.0 * **x - 7.0).abs() < 1e-12).count();
        let samples: Vec<Option<(f64, f64)>> = grid.par_iter().map(|&x| Self::tail(x)).collect();
        let positive = |s: &Option<(f64, f64)>| s.is_some_and(|(a, b)| a > 0.0 && b > 0.0);
        let real_points = samples.iter().filter(|s| s.is_some()).count();
        let positive_points = samples.iter().filter(|s| positive(s)).count();

        let min_residual = grid
            .par_iter()
            .zip(&samples)
            .filter(|(_, s)| positive(s))
            .map(|(&x, s)| {
                let (a, b) = s.unwrap();
                let u = [1.0, a, b, x];
                (u, residual_f64(&u))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));

        let mut sign_changes = 0;
        let mut refined = vec![];
        for upper in [true, false] {
            for k in 1..grid.len() {
                let (x0, x1) = (grid[k - 1], grid[k]);
                if !(positive(&samples[k - 1]) && positive(&samples[k])) || (x0 < pole && pole < x1) {
                    continue;
                }
                let g0 = Self::gap(&Self::point(x0, upper).unwrap());
                let g1 = Self::gap(&Self::point(x1, upper).unwrap());
                if g0 * g1 <= 0.0 {
                    sign_changes += 1;
                    let f = |x: f64| Self::point(x, upper).map(|u| Self::gap(&u)).unwrap_or(f64::NAN);
                    let x = super::poly::bisect(f, x0, x1, 1e-14);
                    if let Some(u) = Self::point(x, upper) {
                        refined.push((u, residual_f64(&u)));
                    }
                }
            }
        }
        SweepReport {
            step: h,
            grid_points: grid.len(),
            excluded,
            real_points,
            positive_points,
            sign_changes,
            refined,
            min_residual,
        }
    }

    fn distinct(u: &[f64; 4]) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        !(close(u[1], u[2]) || close(u[1], u[3]) || close(u[2], u[3]))
    }
}

impl Strategy for CaseC {
    fn name(&self) -> &'static str {
        "case-C"
    }

    fn description(&self) -> &'static str {
        "u1 = 1, u2, u3, u4 pairwise distinct (numeric sweep)"
    }
}

impl SolverCase for CaseC {
    fn solve(&self, opts: &SolveOptions) -> Result<CaseOutcome> {
        let report = Self::sweep(opts);
        let mut candidates = vec![];
        let hits = report.refined.iter().chain(report.min_residual.iter());
        for (u, res) in hits {
            if *res < opts.sweep_residual && Self::distinct(u) {
                candidates.push(Candidate { u: MetricParams::Float(*u), provenance: Provenance::CaseC });
            }
        }
        let polynomials = vec![("16 (s^2 - 4p)(22 u4 - 7)".to_string(), Self::discriminant_numerator())];
        Ok(CaseOutcome { case: self.name(), candidates, polynomials, sweep: Some(report) })
    }
}
