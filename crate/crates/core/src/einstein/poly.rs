//! Univariate polynomials over the rationals: exact roots, deflation, and real root isolation.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients from the constant term upward.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` standing for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::from_ints(&[1]), |acc, _| &acc * self)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient; `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Integer multiple with coprime coefficients and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Poly::new(ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect())
    }

    /// Distinct rational roots in increasing order.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.degree() < 1 {
            return vec![];
        }
        let mut roots = vec![];
        // strip factors of x
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if shift > 0 {
            roots.push(BigRational::zero());
        }
        let p = Poly::new(self.coeffs[shift..].to_vec()).primitive();
        if p.degree() >= 1 {
            let a0 = p.coeff(0).to_integer();
            let an = p.leading().to_integer();
            for num in divisors(&a0) {
                for den in divisors(&an) {
                    for sign in [1, -1] {
                        let cand = BigRational::new(BigInt::from(sign) * num.clone(), den.clone());
                        if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// `b^2 c^2 - 4ac^3 - 4b^3 d - 27a^2 d^2 + 18abcd` for `ax^3 + bx^2 + cx + d`.
    pub fn cubic_discriminant(&self) -> Option<BigRational> {
        if self.degree() != 3 {
            return None;
        }
        let (d, c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2), self.coeff(3));
        let k = |n: i64| BigRational::from_integer(n.into());
        Some(
            &b * &b * &c * &c - k(4) * &a * &c * &c * &c - k(4) * &b * &b * &b * &d - k(27) * &a * &a * &d * &d
                + k(18) * &a * &b * &c * &d,
        )
    }
}

/// Positive divisors of `|n|`, by trial division. Zero has none.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(m) = n.to_u64() else {
        return vec![];
    };
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            out.push(BigInt::from(d));
            if d * d != m {
                out.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    /// Highest degree first, in the variable `u`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mag = if a.is_integer() { a.numer().to_string() } else { format!("({}/{})", a.numer(), a.denom()) };
            match i {
                0 => f.write_str(&mag)?,
                _ => {
                    if !a.is_one() {
                        f.write_str(&mag)?;
                    }
                    f.write_str("u")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Sign-change brackets of `p` on the grid `lo, lo + step, ..., hi`.
pub fn isolate_real_roots(p: &Poly, lo: f64, hi: f64, step: f64) -> Vec<(f64, f64)> {
    let n = ((hi - lo) / step).round() as usize;
    let mut out = vec![];
    let mut prev = (lo, p.eval_f64(lo));
    for k in 1..=n {
        let x = lo + k as f64 * step;
        let v = p.eval_f64(x);
        if prev.1 == 0.0 {
            out.push((prev.0, prev.0));
        } else if prev.1 * v < 0.0 {
            out.push((prev.0, x));
        }
        prev = (x, v);
    }
    if prev.1 == 0.0 {
        out.push((prev.0, prev.0));
    }
    out
}

/// Bisection on a sign-change bracket down to width `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// A few Newton steps, kept only while they shrink `|p|`.
pub fn newton_polish(p: &Poly, mut x: f64) -> f64 {
    let dp = p.derivative();
    for _ in 0..8 {
        let (v, d) = (p.eval_f64(x), dp.eval_f64(x));
        if v == 0.0 || d == 0.0 {
            break;
        }
        let next = x - v / d;
        if p.eval_f64(next).abs() >= v.abs() {
            break;
        }
        x = next;
    }
    x
}

/// Real roots in `[lo, hi]`: grid bracketing, bisection to `tol`, then Newton.
pub fn real_roots(p: &Poly, lo: f64, hi: f64, step: f64, tol: f64) -> Vec<f64> {
    isolate_real_roots(p, lo, hi, step)
        .into_iter()
        .map(|(a, b)| newton_polish(p, bisect(|x| p.eval_f64(x), a, b, tol)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_and_division() {
        let a = Poly::from_ints(&[-7, 11]);
        let b = Poly::from_ints(&[-35, 37, -14, 4]);
        let q = Poly::from_ints(&[245, -644, 505, -182, 44]);
        assert_eq!(&a * &b, q);
        assert_eq!(q.div_exact(&a), Some(b.clone()));
        assert_eq!(q.div_exact(&Poly::from_ints(&[-1, 1])), None);
        assert_eq!(q.to_string(), "44u^4 - 182u^3 + 505u^2 - 644u + 245");
        assert_eq!(Poly::from_ints(&[0, -1, 0, 1]).to_string(), "u^3 - u");
    }

    #[test]
    fn rational_roots_found() {
        let q = Poly::from_ints(&[245, -644, 505, -182, 44]);
        assert_eq!(q.rational_roots(), vec![big(7, 11)]);
        let p = Poly::from_ints(&[6, -16, 10]);
        assert_eq!(p.rational_roots(), vec![big(3, 5), big(1, 1)]);
        let z = Poly::from_ints(&[0, 0, -1, 1]);
        assert_eq!(z.rational_roots(), vec![big(0, 1), big(1, 1)]);
        assert!(Poly::from_ints(&[-2, 0, 1]).rational_roots().is_empty());
    }

    #[test]
    fn primitive_form() {
        let p = Poly::new(vec![big(-7, 2), big(11, 2)]).scale(&big(-6, 1));
        assert_eq!(p.primitive(), Poly::from_ints(&[-7, 11]));
    }

    #[test]
    fn cubic_has_single_real_root() {
        let c = Poly::from_ints(&[-35, 37, -14, 4]);
        assert!(c.cubic_discriminant().unwrap() < big(0, 1));
        let roots = real_roots(&c, 0.0, 8.0, 1.0 / 64.0, 1e-14);
        assert_eq!(roots.len(), 1);
        assert!(roots[0] > 1.38 && roots[0] < 1.39);
        assert!(c.eval_f64(roots[0]).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn div_rem_reconstructs(a in prop::collection::vec(-20i64..20, 1..7), b in prop::collection::vec(-20i64..20, 1..4)) {
            let a = Poly::from_ints(&a);
            let b = Poly::from_ints(&b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn constructed_roots_recovered(n in 1i64..30, d in 1i64..30, m in -30i64..30) {
            let p = &Poly::from_ints(&[-n, d]) * &Poly::from_ints(&[m, 1, 3]);
            prop_assert!(p.rational_roots().contains(&big(n, d)));
        }
    }
}
