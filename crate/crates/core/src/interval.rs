use std::fmt;

use serde_json::{json, Value};

use crate::scalar::Scalar;

/// One side of an [`Interval`].
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint<S> {
    /// `-inf` on the low side, `+inf` on the high side.
    Unbounded,
    At {
        value: S,
        closed: bool,
    },
}

impl<S: Scalar> Endpoint<S> {
    pub fn closed(value: S) -> Self {
        Endpoint::At {
            value,
            closed: true,
        }
    }

    pub fn open(value: S) -> Self {
        Endpoint::At {
            value,
            closed: false,
        }
    }

    pub fn value(&self) -> Option<&S> {
        match self {
            Endpoint::Unbounded => None,
            Endpoint::At { value, .. } => Some(value),
        }
    }
}

/// A real interval with independently open, closed or unbounded ends.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<S> {
    pub lo: Endpoint<S>,
    pub hi: Endpoint<S>,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: Endpoint<S>, hi: Endpoint<S>) -> Self {
        Self { lo, hi }
    }

    pub fn closed(lo: S, hi: S) -> Self {
        Self::new(Endpoint::closed(lo), Endpoint::closed(hi))
    }

    pub fn open(lo: S, hi: S) -> Self {
        Self::new(Endpoint::open(lo), Endpoint::open(hi))
    }

    /// `(lo, hi]`, the convention of Sturm counting.
    pub fn left_open(lo: S, hi: S) -> Self {
        Self::new(Endpoint::open(lo), Endpoint::closed(hi))
    }

    pub fn point(x: S) -> Self {
        Self::closed(x.clone(), x)
    }

    /// `(-inf, +inf)`.
    pub fn real_line() -> Self {
        Self::new(Endpoint::Unbounded, Endpoint::Unbounded)
    }

    /// `[0, +inf)`.
    pub fn nonnegative() -> Self {
        Self::new(Endpoint::closed(S::zero()), Endpoint::Unbounded)
    }

    /// `(0, +inf)`.
    pub fn positive() -> Self {
        Self::new(Endpoint::open(S::zero()), Endpoint::Unbounded)
    }

    /// Exact value when the interval is a single point.
    pub fn as_point(&self) -> Option<&S> {
        match (&self.lo, &self.hi) {
            (Endpoint::At { value: a, .. }, Endpoint::At { value: b, .. }) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn width(&self) -> Option<S> {
        Some(self.hi.value()?.clone() - self.lo.value()?.clone())
    }

    pub fn midpoint(&self) -> Option<S> {
        Some((self.lo.value()?.clone() + self.hi.value()?.clone()).half())
    }

    pub fn contains(&self, x: &S) -> bool {
        let above = match &self.lo {
            Endpoint::Unbounded => true,
            Endpoint::At { value, closed } => x > value || (*closed && x == value),
        };
        let below = match &self.hi {
            Endpoint::Unbounded => true,
            Endpoint::At { value, closed } => x < value || (*closed && x == value),
        };
        above && below
    }

    /// `{"point": v}` for point intervals, `{"interval": [lo, hi]}` otherwise
    /// (unbounded ends serialize as `null`).
    pub fn to_json(&self) -> Value {
        if let Some(p) = self.as_point() {
            return json!({ "point": p.to_json() });
        }
        let side = |e: &Endpoint<S>| e.value().map_or(Value::Null, S::to_json);
        json!({ "interval": [side(&self.lo), side(&self.hi)] })
    }
}

impl<S: Scalar> fmt::Display for Interval<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_point() {
            return write!(f, "{{{p}}}");
        }
        match &self.lo {
            Endpoint::Unbounded => f.write_str("(-inf")?,
            Endpoint::At { value, closed } => {
                write!(f, "{}{value}", if *closed { '[' } else { '(' })?
            }
        }
        f.write_str(", ")?;
        match &self.hi {
            Endpoint::Unbounded => f.write_str("+inf)"),
            Endpoint::At { value, closed } => {
                write!(f, "{value}{}", if *closed { ']' } else { ')' })
            }
        }
    }
}
