//! The forward maps: `psi`, `phi_ext` and their composition `phi_big`.

use std::fmt;

use serde_json::{json, Value};

use crate::copositivity::{is_base_boundary, is_copositive};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Whether the expensive membership preconditions of [`psi`] and [`phi_ext`]
/// are checked or assumed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Certify copositivity / base-boundary membership of the input.
    Validate,
    /// Trust the caller; only cheap checks (signs, monicity) run.
    #[default]
    Trust,
}

/// A point `(t0, ..., t_{d-1})` of the nonnegative orthant. The empty vector is legal.
#[derive(Clone, PartialEq)]
pub struct ParameterVector<S>(Vec<S>);

impl<S: Scalar> ParameterVector<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if let Some((i, t)) = entries
            .iter()
            .enumerate()
            .find(|(_, t)| t.is_negative() || !t.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "parameter t{i} = {t} is not a nonnegative number"
            )));
        }
        Ok(Self(entries))
    }

    pub fn from_i64s(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&t| S::from_i64(t)).collect())
    }

    pub fn entries(&self) -> &[S] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<S> {
        self.0
    }

    /// The degree `d` of the polynomials this vector parametrizes.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses a comma-separated list such as `"1, 2/3, 0.5"`. The empty string
    /// is the empty vector.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Self::new(Vec::new());
        }
        let entries = text
            .split(',')
            .map(|item| S::parse(item.trim()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    /// `{"params": [...]}`.
    pub fn to_json(&self) -> Value {
        json!({ "params": self.0.iter().map(S::to_json).collect::<Vec<_>>() })
    }

    /// Accepts `{"params": [...]}` or a bare array.
    pub fn from_json(value: &Value) -> Result<Self> {
        let items = match value {
            Value::Array(items) => items,
            Value::Object(map) => match map.get("params") {
                Some(Value::Array(items)) => items,
                _ => return Err(Error::Json("missing `params` array".into())),
            },
            _ => return Err(Error::Json("expected a parameter vector".into())),
        };
        let entries = items
            .iter()
            .map(S::from_json)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(entries)
    }

    pub fn convert<T: Scalar>(&self) -> ParameterVector<T> {
        ParameterVector(
            self.0
                .iter()
                .map(|t| T::from_f64(t.to_f64()).expect("finite parameter"))
                .collect(),
        )
    }
}

impl<S: fmt::Debug> fmt::Debug for ParameterVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ParameterVector").field(&self.0).finish()
    }
}

impl<S: Scalar> fmt::Display for ParameterVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

fn check_nonnegative<S: Scalar>(t: &S) -> Result<()> {
    if t.is_negative() {
        Err(Error::InvalidInput(format!("parameter {t} is negative")))
    } else {
        Ok(())
    }
}

/// `f (x - t)^2`: attaches a double root at `t` to a copositive `f`.
pub fn psi<S: Scalar>(f: &Polynomial<S>, t: &S, mode: Mode) -> Result<Polynomial<S>> {
    check_nonnegative(t)?;
    if !f.is_monic() {
        return Err(Error::InvalidInput(format!("{f} is not monic")));
    }
    if mode == Mode::Validate && !is_copositive(f)?.verdict {
        return Err(Error::NotCopositive(f.to_string()));
    }
    Ok(f * &Polynomial::double_root(t))
}

/// `f + t x`: moves a base-boundary polynomial into the cone along the linear term.
pub fn phi_ext<S: Scalar>(f: &Polynomial<S>, t: &S, mode: Mode) -> Result<Polynomial<S>> {
    check_nonnegative(t)?;
    if mode == Mode::Validate {
        if !is_base_boundary(f)?.in_base_boundary {
            return Err(Error::NotBaseBoundary);
        }
    } else if !f.is_monic() {
        return Err(Error::InvalidInput(format!("{f} is not monic")));
    }
    Ok(f + &Polynomial::monomial(t.clone(), 1))
}

/// The full parametrization `(R>=0)^d -> C_d`.
///
/// Even `d` starts from `1`, odd `d` from `x + t0`; each following pair
/// `(t_{k-2}, t_{k-1})` multiplies by `(x - t_{k-2})^2` and adds `t_{k-1} x`.
pub fn phi_big<S: Scalar>(t: &ParameterVector<S>) -> Polynomial<S> {
    let t = t.entries();
    let (mut f, start) = if t.len().is_multiple_of(2) {
        (Polynomial::one(), 0)
    } else {
        (Polynomial::new(vec![t[0].clone(), S::one()]), 1)
    };
    for pair in t[start..].chunks_exact(2) {
        f = &f * &Polynomial::double_root(&pair[0]);
        f = &f + &Polynomial::monomial(pair[1].clone(), 1);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type P = Polynomial<Rational>;

    fn p(c: &[i64]) -> P {
        P::from_i64s(c)
    }

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn params(t: &[i64]) -> ParameterVector<Rational> {
        ParameterVector::from_i64s(t).unwrap()
    }

    #[test]
    fn psi_examples() {
        let a = psi(&p(&[1, -2, 1]), &q(2), Mode::Validate).unwrap();
        let b = psi(&p(&[4, -4, 1]), &q(1), Mode::Validate).unwrap();
        assert_eq!(a, p(&[4, -12, 13, -6, 1]));
        assert_eq!(a, b);
        assert_eq!(psi(&P::one(), &q(3), Mode::Trust).unwrap(), p(&[9, -6, 1]));
    }

    #[test]
    fn psi_errors() {
        assert!(matches!(
            psi(&P::one(), &q(-1), Mode::Trust),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            psi(&p(&[1, 2]), &q(1), Mode::Trust),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            psi(&p(&[-1, 1]), &q(1), Mode::Validate),
            Err(Error::NotCopositive(_))
        ));
        // Trust mode skips the certifier.
        assert!(psi(&p(&[-1, 1]), &q(1), Mode::Trust).is_ok());
    }

    #[test]
    fn phi_ext_examples() {
        assert_eq!(
            phi_ext(&p(&[1, -2, 1]), &q(4), Mode::Validate).unwrap(),
            p(&[1, 2, 1])
        );
        let f = p(&[1, -1, -1, 1]);
        assert_eq!(phi_ext(&f, &q(0), Mode::Validate).unwrap(), f);
        assert_eq!(
            phi_ext(&f, &q(3), Mode::Validate).unwrap(),
            p(&[1, 2, -1, 1])
        );
    }

    #[test]
    fn phi_ext_errors() {
        assert!(matches!(
            phi_ext(&p(&[1, -2, 1]), &q(-1), Mode::Trust),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            phi_ext(&p(&[1, 0, 1]), &q(1), Mode::Validate),
            Err(Error::NotBaseBoundary)
        ));
    }

    #[test]
    fn phi_big_examples() {
        assert_eq!(phi_big(&params(&[])), P::one());
        assert_eq!(phi_big(&params(&[7])), p(&[7, 1]));
        assert_eq!(phi_big(&params(&[1, 2, 3])), p(&[4, 3, -3, 1]));
        assert_eq!(phi_big(&params(&[0, 0])), p(&[0, 0, 1]));
        assert_eq!(phi_big(&params(&[1, 0, 2, 0])), p(&[4, -12, 13, -6, 1]));
    }

    #[test]
    fn degree_two_without_linear_term_has_zero_discriminant() {
        for t0 in [0, 1, 3, 10] {
            let f = phi_big(&params(&[t0, 0]));
            let (a0, a1) = (f.coeff(0), f.coeff(1));
            assert_eq!(a1.clone() * a1 - q(4) * a0, q(0));
            assert_eq!(f.evaluate(&q(t0)), q(0));
            assert_eq!(f.derivative().evaluate(&q(t0)), q(0));
        }
    }

    #[test]
    fn negative_parameters_are_rejected() {
        assert!(ParameterVector::<Rational>::from_i64s(&[1, -1]).is_err());
        assert!(ParameterVector::<f64>::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn parameter_vector_text_forms() {
        let t = ParameterVector::<Rational>::parse_inline("1, 2/3, 0.5").unwrap();
        assert_eq!(
            t.entries(),
            &[q(1), Rational::from_ratio(2, 3), Rational::from_ratio(1, 2)]
        );
        assert!(ParameterVector::<Rational>::parse_inline("")
            .unwrap()
            .is_empty());
        let json = t.to_json();
        assert_eq!(json, json!({"params": ["1/1", "2/3", "1/2"]}));
        assert_eq!(ParameterVector::from_json(&json).unwrap(), t);
        assert_eq!(t.to_string(), "(1, 2/3, 1/2)");
    }

    #[test]
    fn real_backend_matches_rational() {
        let t = ParameterVector::<f64>::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(phi_big(&t).coeffs(), &[4.0, 3.0, -3.0, 1.0]);
    }
}
