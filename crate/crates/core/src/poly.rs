//! Dense univariate polynomials over a [`Scalar`] backend.
//!
//! Coefficients are stored in ascending order of degree and kept trimmed, so
//! the zero polynomial is the empty sequence and the last stored coefficient
//! is always nonzero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

#[derive(Clone, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

/// Returned by [`Polynomial::divide_exact`] when the divisor leaves a remainder.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("not divisible; remainder {remainder}")]
pub struct NotDivisible<S: Scalar> {
    pub remainder: Polynomial<S>,
}

/// Result of [`Polynomial::gcd_checked`].
#[derive(Clone, Debug, PartialEq)]
pub struct GcdOutcome<S> {
    /// Monic gcd (the zero polynomial only if both inputs are zero).
    pub gcd: Polynomial<S>,
    /// Real backend only: a remainder sat close enough to the tolerance that
    /// the degree of the result is not trustworthy.
    pub ill_conditioned: bool,
}

impl<S: Scalar> Polynomial<S> {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    ///
    /// Panics if a coefficient is not finite; see [`Polynomial::try_new`].
    pub fn new(coeffs: Vec<S>) -> Self {
        Self::try_new(coeffs).expect("polynomial coefficients must be finite")
    }

    pub fn try_new(coeffs: Vec<S>) -> Result<Self> {
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite coefficient {bad}")));
        }
        let mut p = Self { coeffs };
        p.trim();
        Ok(p)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self {
            coeffs: vec![S::zero(), S::one()],
        }
    }

    pub fn monomial(c: S, n: usize) -> Self {
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &S) -> Self {
        Self::new(vec![-r.clone(), S::one()])
    }

    /// `(x - r)^2 = x^2 - 2r x + r^2`.
    pub fn double_root(r: &S) -> Self {
        Self::new(vec![
            r.clone() * r.clone(),
            -(S::two() * r.clone()),
            S::one(),
        ])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    /// Leading coefficient exactly one. The real backend never rounds here.
    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = S::one() / lc.clone();
                let mut p = self.scale(&inv);
                // Pin the leading coefficient so the real backend is monic exactly.
                if let Some(last) = p.coeffs.last_mut() {
                    *last = S::one();
                }
                p
            }
            _ => self.clone(),
        }
    }

    pub fn max_abs_coeff(&self) -> S {
        self.coeffs
            .iter()
            .fold(S::zero(), |m, c| S::max_of(m, c.abs()))
    }

    /// Cauchy bound `1 + max |c_i| / |c_d|`; every complex root lies strictly inside it.
    pub fn cauchy_bound(&self) -> S {
        let Some(lc) = self.leading() else {
            return S::one();
        };
        let lc = lc.abs();
        let rest = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .fold(S::zero(), |m, c| S::max_of(m, c.abs()));
        S::one() + rest / lc
    }

    /// A bound `B` with every complex root strictly inside `|z| < B`: the
    /// smaller of the Cauchy bound and a power of two above twice the Fujiwara bound.
    pub fn root_bound(&self) -> S {
        let cauchy = self.cauchy_bound();
        let (Some(n), Some(lc)) = (self.degree(), self.leading()) else {
            return cauchy;
        };
        let lc = lc.to_f64().abs();
        let mut fujiwara: f64 = 0.0;
        for (i, c) in self.coeffs[..n].iter().enumerate() {
            let k = (n - i) as f64;
            let mut ratio = c.to_f64().abs() / lc;
            if i == 0 {
                ratio /= 2.0;
            }
            fujiwara = fujiwara.max(ratio.powf(1.0 / k));
        }
        // Doubling absorbs the rounding of the floating-point estimate.
        let estimate = 4.0 * fujiwara;
        if !estimate.is_finite() || estimate == 0.0 {
            return cauchy;
        }
        match S::from_f64(estimate.log2().ceil().exp2()) {
            Some(b) if b < cauchy => b,
            _ => cauchy,
        }
    }

    /// `p(x + a)`.
    pub fn shift(&self, a: &S) -> Self {
        // Repeated synthetic division (Taylor expansion at a).
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone() * a.clone();
                c[j] = c[j].clone() + t;
            }
        }
        Self::new(c)
    }

    /// Long division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let n = match self.degree() {
            Some(n) if n >= d => n,
            _ => return (Self::zero(), self.clone()),
        };
        let lc = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let q = rem[k + d].clone() / lc.clone();
            if !q.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - q.clone() * dc.clone();
                }
            }
            // The top coefficient cancels analytically; force it for the real backend.
            rem[k + d] = S::zero();
            quot[k] = q;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient of an exact division. The real backend accepts remainders whose
    /// coefficients are below `1e-9` times the largest dividend coefficient.
    pub fn divide_exact(&self, divisor: &Self) -> std::result::Result<Self, NotDivisible<S>> {
        let (q, r) = self.div_rem(divisor);
        let scale = self.max_abs_coeff();
        if r.coeffs.iter().all(|c| c.negligible(&scale)) {
            Ok(q)
        } else {
            Err(NotDivisible { remainder: r })
        }
    }

    /// Drops leading coefficients that are negligible relative to `scale`.
    /// No-op for exact backends.
    fn trim_negligible(mut self, scale: &S) -> Self {
        if !S::is_exact() {
            while self.coeffs.last().is_some_and(|c| c.negligible(scale)) {
                self.coeffs.pop();
            }
        }
        self
    }

    /// A positive multiple of the remainder of `self` by `divisor`. Cheaper
    /// than [`Polynomial::div_rem`] on the rational backend.
    pub fn scaled_rem(&self, divisor: &Self) -> Self {
        match S::scaled_remainder(&self.coeffs, &divisor.coeffs) {
            Some(r) => Self::new(r),
            None => self.div_rem(divisor).1,
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        self.gcd_checked(other).gcd
    }

    /// Euclidean gcd with a conditioning flag. On the real backend remainders
    /// are truncated at the gcd tolerance (relative to the dividend).
    pub fn gcd_checked(&self, other: &Self) -> GcdOutcome<S> {
        let mut ill_conditioned = false;
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.monic(), other.monic())
        } else {
            (other.monic(), self.monic())
        };
        if !S::is_exact() && b.max_abs_coeff().negligible(&a.max_abs_coeff()) {
            b = Self::zero();
        }
        if S::is_exact() {
            while !b.is_zero() {
                let r = a.scaled_rem(&b);
                a = b;
                b = r;
            }
            return GcdOutcome {
                gcd: a.monic(),
                ill_conditioned: false,
            };
        }
        let near = S::tolerance() * S::from_i64(1000);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            let scale = a.max_abs_coeff();
            let raw = r.max_abs_coeff();
            let r = r.trim_negligible(&scale);
            if !S::is_exact() {
                let rel = raw / scale;
                // A remainder within three orders of magnitude of the cut-off,
                // on either side, makes the computed degree fragile.
                if rel > S::tolerance() * S::tolerance() && rel <= near {
                    ill_conditioned = true;
                }
            }
            a = b;
            b = r.monic();
        }
        GcdOutcome {
            gcd: a.monic(),
            ill_conditioned,
        }
    }

    /// `p / gcd(p, p')`, monic. Panics on the zero polynomial.
    pub fn squarefree_part(&self) -> Self {
        assert!(!self.is_zero(), "squarefree part of the zero polynomial");
        if self.is_constant() {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's squarefree decomposition: monic, pairwise coprime, squarefree
    /// factors `a_i` with `p = lc * prod a_i^i`. Factors of degree zero are omitted.
    pub fn squarefree_factors(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_rem(&a0).0;
        let c = dp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let n = p.degree().unwrap_or(0);
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            if i > n {
                // Only reachable on the real backend, when rounding hides every
                // remaining factor from the gcd; keep the roots, drop the multiplicity.
                out.push((b.monic(), 1));
                break;
            }
            let a = if d.is_zero() || d.max_abs_coeff().negligible(&c.max_abs_coeff()) {
                b.monic()
            } else {
                b.gcd(&d)
            };
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            let nb = b.div_rem(&a).0;
            let nc = d.div_rem(&a).0;
            d = &nc - &nb.derivative();
            b = nb;
            i += 1;
        }
        out
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    /// `{"backend": ..., "coeffs": [c0, c1, ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "backend": S::BACKEND,
            "coeffs": self.coeffs.iter().map(S::to_json).collect::<Vec<_>>(),
        })
    }

    /// Parses the JSON form. The `backend` field, when present, must match `S`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let coeffs = match value {
            Value::Array(items) => items,
            Value::Object(map) => {
                if let Some(b) = map.get("backend") {
                    let b: Backend = serde_json::from_value(b.clone())?;
                    if b != S::BACKEND {
                        return Err(Error::InvalidInput(format!(
                            "expected {} backend, got {b}",
                            S::BACKEND
                        )));
                    }
                }
                match map.get("coeffs") {
                    Some(Value::Array(items)) => items,
                    _ => return Err(Error::Json("missing `coeffs` array".into())),
                }
            }
            _ => return Err(Error::Json("expected a polynomial object".into())),
        };
        let coeffs = coeffs
            .iter()
            .map(S::from_json)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::try_new(coeffs)
    }

    /// Converts between backends through `f64` (real) or exactly (to rational).
    pub fn convert<T: Scalar>(&self) -> Polynomial<T> {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|c| T::from_f64(c.to_f64()).expect("finite coefficient"))
                .collect(),
        )
    }
}

impl<S: fmt::Debug> fmt::Debug for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<S: Scalar> Add for Polynomial<S> {
    type Output = Polynomial<S>;

    fn add(self, rhs: Self) -> Polynomial<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for Polynomial<S> {
    type Output = Polynomial<S>;

    fn sub(self, rhs: Self) -> Polynomial<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for Polynomial<S> {
    type Output = Polynomial<S>;

    fn mul(self, rhs: Self) -> Polynomial<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for Polynomial<S> {
    type Output = Polynomial<S>;

    fn neg(self) -> Polynomial<S> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Polynomial<Rational>;

    fn p(c: &[i64]) -> P {
        P::from_i64s(c)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn trims_and_reports_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(P::zero().degree(), None);
        assert!(p(&[3, 1]).is_monic());
        assert!(!p(&[3, 2]).is_monic());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[1, 0, 1]).evaluate(&q(0, 1)), q(1, 1));
        assert_eq!(p(&[4, 3, -3, 1]).evaluate(&q(1, 1)), q(5, 1));
        assert_eq!(P::zero().evaluate(&q(7, 1)), q(0, 1));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[1, -2, 1]).derivative(), p(&[-2, 2]));
        assert!(p(&[1]).derivative().is_zero());
        assert_eq!(p(&[4, 3, -3, 1]).derivative(), p(&[3, -6, 3]));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(&p(&[1, -2, 1]) * &p(&[4, -4, 1]), p(&[4, -12, 13, -6, 1]));
        assert_eq!(&p(&[4, 3, -3, 1]) * &P::one(), p(&[4, 3, -3, 1]));
    }

    #[test]
    fn divide_exact_examples() {
        let quartic = p(&[4, -12, 13, -6, 1]);
        assert_eq!(
            quartic.divide_exact(&p(&[4, -4, 1])).unwrap(),
            p(&[1, -2, 1])
        );
        assert_eq!(quartic.divide_exact(&P::one()).unwrap(), quartic);
        let err = p(&[1, 0, 1]).divide_exact(&p(&[-1, 1])).unwrap_err();
        assert_eq!(err.remainder, p(&[2]));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[1, -2, 1]).gcd(&p(&[-2, 2])), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[1, 0, 1])), p(&[1, 0, 1]));
        let quartic = p(&[4, -12, 13, -6, 1]);
        assert_eq!(quartic.gcd(&quartic.derivative()), p(&[2, -3, 1]));
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(p(&[1, -2, 1]).squarefree_part(), p(&[-1, 1]));
        assert_eq!(p(&[2, -3, 1]).squarefree_part(), p(&[2, -3, 1]));
        assert_eq!(p(&[4, -12, 13, -6, 1]).squarefree_part(), p(&[2, -3, 1]));
    }

    #[test]
    fn yun_decomposition_multiplicities() {
        // (x - 1)^3 (x + 2)^2 (x - 5)
        let f = &(&p(&[-1, 1]) * &(&p(&[-1, 1]) * &p(&[-1, 1])))
            * &(&(&p(&[2, 1]) * &p(&[2, 1])) * &p(&[-5, 1]));
        let factors = f.squarefree_factors();
        assert_eq!(
            factors,
            vec![(p(&[-5, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
    }

    #[test]
    fn shift_and_bounds() {
        // (x + 1)^2 shifted by 1 -> (x + 2)^2
        assert_eq!(p(&[1, 2, 1]).shift(&q(1, 1)), p(&[4, 4, 1]));
        assert_eq!(p(&[2, -3, 1]).cauchy_bound(), q(4, 1));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(p(&[4, 3, -3, 1]).to_string(), "x^3 - 3x^2 + 3x + 4");
        let v = p(&[1, 0, 1]).to_json();
        assert_eq!(v["backend"], "rational");
        assert_eq!(v["coeffs"][0], "1/1");
        assert_eq!(P::from_json(&v).unwrap(), p(&[1, 0, 1]));
        let real =
            Polynomial::<f64>::from_json(&serde_json::json!({"backend":"real","coeffs":[1.5, 2]}))
                .unwrap();
        assert_eq!(real.coeffs(), &[1.5, 2.0]);
        assert!(Polynomial::<f64>::from_json(&v).is_err());
        assert!(Polynomial::<f64>::try_new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn real_backend_tolerances() {
        let f = Polynomial::<f64>::new(vec![1.0, -2.0, 1.0 + 1e-14]);
        let g = f.gcd_checked(&f.derivative());
        assert_eq!(g.gcd.degree(), Some(1));
        let div = Polynomial::<f64>::new(vec![1.0 + 1e-13, -2.0, 1.0]);
        assert!(div.divide_exact(&Polynomial::new(vec![-1.0, 1.0])).is_ok());
        assert!(Polynomial::<f64>::new(vec![1.0, 0.0, 1.0])
            .divide_exact(&Polynomial::new(vec![-1.0, 1.0]))
            .is_err());
    }
}
