//! Scalar backends.
//!
//! Every polynomial algorithm in this crate is written once against the
//! [`Scalar`] trait and instantiated with one of two backends:
//!
//! - [`Rational`]: arbitrary-precision fractions, always in lowest terms with a
//!   positive denominator. All decisions are exact.
//! - `f64`: double-precision reals. Zero tests are replaced by scale-relative
//!   negligibility tests using [`REAL_TOLERANCE`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Exact rational scalar.
pub type Rational = BigRational;

/// Relative threshold used by the real backend for remainders, gcds and
/// other "is this zero" decisions.
pub const REAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Real,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Real => "real",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Backend::Rational),
            "real" => Ok(Backend::Real),
            other => Err(ParseScalarError(format!("unknown backend `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse scalar: {0}")]
pub struct ParseScalarError(pub String);

/// A coefficient field usable by every algorithm in the crate.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    /// Converts a finite double. Rationals take the exact dyadic value.
    fn from_f64(v: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;

    /// Relative tolerance for negligibility tests; zero for exact backends.
    fn tolerance() -> Self;

    /// Parses `"num/den"`, an integer, or a decimal literal such as `-1.25e-3`.
    fn parse(text: &str) -> Result<Self, ParseScalarError>;

    /// Text form used in JSON: `"num/den"` for rationals, a decimal literal for reals.
    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self, ParseScalarError> {
        match value {
            Value::String(s) => Self::parse(s),
            // serde_json prints finite doubles in shortest round-trip form,
            // so re-parsing the text keeps decimal inputs like 0.1 exact.
            Value::Number(n) => Self::parse(&n.to_string()),
            other => Err(ParseScalarError(format!(
                "expected number or string, got {other}"
            ))),
        }
    }

    /// The rational with the smallest denominator in `[lo, hi]`.
    /// `None` for backends that do not represent rationals exactly.
    fn simplest_between(_lo: &Self, _hi: &Self) -> Option<Self> {
        None
    }

    /// Bound `q` such that every rational root `a/b` of the polynomial with
    /// these coefficients has `b <= q`. `None` for inexact backends.
    fn root_denominator_bound(_coeffs: &[Self]) -> Option<Self> {
        None
    }

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    /// A positive multiple of the coefficients that evaluates cheaply; for
    /// rationals the primitive integer form. Signs of values are preserved.
    fn integer_form(coeffs: &[Self]) -> Vec<Self> {
        coeffs.to_vec()
    }

    /// A positive multiple of the remainder of `a` divided by `b` (ascending
    /// coefficients, `b` nonzero), when the backend has a cheaper route than
    /// long division. Rationals use integer pseudo-division.
    fn scaled_remainder(_a: &[Self], _b: &[Self]) -> Option<Vec<Self>> {
        None
    }

    /// Sign of the polynomial with ascending `coeffs` at `x`.
    fn sign_at(coeffs: &[Self], x: &Self) -> Ordering {
        let v = coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc * x.clone() + c.clone());
        sign_of(&v)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn two() -> Self {
        Self::from_i64(2)
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    /// `|self| <= tolerance * scale`; for exact backends this is `self == 0`.
    fn negligible(&self, scale: &Self) -> bool {
        if Self::is_exact() {
            self.is_zero()
        } else {
            self.abs() <= Self::tolerance() * scale.abs()
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

/// Sign of a scalar as an [`Ordering`] against zero.
pub fn sign_of<S: Signed>(x: &S) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

fn integer_parts(coeffs: &[Rational]) -> Option<(Vec<BigInt>, BigInt)> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return None;
    }
    Some((ints, content))
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Both parts overflow f64; scale down by a common power of two.
            let shift = self
                .numer()
                .bits()
                .max(self.denom().bits())
                .saturating_sub(1000);
            let n = (self.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn tolerance() -> Self {
        Self::zero()
    }

    fn parse(text: &str) -> Result<Self, ParseScalarError> {
        parse_rational(text)
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn simplest_between(lo: &Self, hi: &Self) -> Option<Self> {
        Some(simplest_rational(lo, hi))
    }

    fn root_denominator_bound(coeffs: &[Self]) -> Option<Self> {
        let (ints, content) = integer_parts(coeffs)?;
        let lead = ints.iter().rev().find(|c| !c.is_zero())?;
        Some(BigRational::from_integer((lead / content).abs()))
    }

    fn integer_form(coeffs: &[Self]) -> Vec<Self> {
        match integer_parts(coeffs) {
            Some((ints, content)) => ints
                .into_iter()
                .map(|c| BigRational::from_integer(c / &content))
                .collect(),
            None => coeffs.to_vec(),
        }
    }

    fn scaled_remainder(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        let (bi, _) = integer_parts(b)?;
        let Some((mut r, _)) = integer_parts(a) else {
            return Some(Vec::new());
        };
        let trim = |v: &mut Vec<BigInt>| {
            while v.last().is_some_and(Zero::is_zero) {
                v.pop();
            }
        };
        let mut bi = bi;
        trim(&mut bi);
        trim(&mut r);
        let db = bi.len() - 1;
        let bl = bi[db].clone();
        let mut negated = false;
        // r <- bl * r - lc(r) x^k b, which keeps everything integral.
        while r.len() > db {
            let rl = r[r.len() - 1].clone();
            let k = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &bl;
            }
            for (j, bj) in bi.iter().enumerate() {
                r[k + j] -= &rl * bj;
            }
            if bl.is_negative() {
                negated = !negated;
            }
            trim(&mut r);
        }
        let content = r.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return Some(Vec::new());
        }
        Some(
            r.into_iter()
                .map(|c| {
                    let c = c / &content;
                    BigRational::from_integer(if negated { -c } else { c })
                })
                .collect(),
        )
    }

    fn sign_at(coeffs: &[Self], x: &Self) -> Ordering {
        if coeffs.iter().any(|c| !c.is_integer()) {
            let v = coeffs.iter().rev().fold(Self::zero(), |acc, c| acc * x + c);
            return sign_of(&v);
        }
        // q^n p(a/q) = sum c_i a^i q^(n-i), evaluated without gcd reductions.
        let (a, q) = (x.numer(), x.denom());
        let mut it = coeffs.iter().rev();
        let Some(lead) = it.next() else {
            return Ordering::Equal;
        };
        let mut acc = lead.numer().clone();
        let mut qpow = BigInt::one();
        for c in it {
            qpow *= q;
            acc = acc * a + c.numer() * &qpow;
        }
        sign_of(&acc)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Real;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn tolerance() -> Self {
        REAL_TOLERANCE
    }

    fn parse(text: &str) -> Result<Self, ParseScalarError> {
        let text = text.trim();
        let value = match text.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| bad(text))?;
                let d: f64 = d.trim().parse().map_err(|_| bad(text))?;
                n / d
            }
            None => text.parse().map_err(|_| bad(text))?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ParseScalarError(format!("`{text}` is not finite")))
        }
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

fn bad(text: &str) -> ParseScalarError {
    ParseScalarError(format!("`{text}`"))
}

/// Exact parse of `n/d`, integers and decimal literals with optional exponent.
fn parse_rational(text: &str) -> Result<Rational, ParseScalarError> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad(text))?;
        let d: BigInt = d.trim().parse().map_err(|_| bad(text))?;
        if d.is_zero() {
            return Err(ParseScalarError(format!("`{text}` has zero denominator")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = text[i + 1..].parse().map_err(|_| bad(text))?;
            (&text[..i], e)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad(text));
    }
    let all: BigInt =
        BigInt::from_str_radix(&format!("0{int_part}{frac_part}"), 10).map_err(|_| bad(text))?;
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(ParseScalarError(format!("`{text}` exponent out of range")));
    }
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Simplest rational (smallest denominator, then smallest magnitude) in `[lo, hi]`.
pub fn simplest_rational(lo: &Rational, hi: &Rational) -> Rational {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if !lo.is_positive() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational(&-hi, &-lo);
    }
    // 0 < lo <= hi: continued-fraction descent.
    let floor = lo.floor();
    if &floor == lo {
        return floor;
    }
    let next = &floor + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_rational(&(hi - &floor).recip(), &(lo - &floor).recip());
    floor + inner.recip()
}
