//! Inverse of the parametrization.
//!
//! Each level peels `t_{d-1}` off with [`invert_extension`] (the largest `t`
//! keeping `g - t x` copositive) and `t_{d-2}` with [`invert_base`] (deflating
//! a nonnegative double root), then continues on the quotient of degree `d - 2`.
//!
//! On the rational backend a level is exact whenever the relevant minimizer
//! or double root is rational, which is always the case for images of rational
//! parameters. Irrational roots are approximated by isolating intervals
//! refined to the requested precision; from then on the inversion is
//! approximate and [`InversionReport::exact`] is false.

use serde_json::{json, Value};

use crate::copositivity::{is_copositive, magnitude_at, nonnegative_double_roots};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::parametrize::ParameterVector;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::sturm::{isolate_roots, IsolatedRoot};

/// Largest relative remainder accepted when deflating an approximate double root.
const DEFLATION_SLACK: f64 = 1e-6;

/// Candidates whose coarse value lies this far (relative) above the best are
/// not worth an exact test.
const RANKING_SLACK: f64 = 1e-6;

/// Output of [`invert_extension`].
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionInversion<S> {
    /// `g - t x`, in the base boundary.
    pub base: Polynomial<S>,
    /// `inf { g(x)/x : x > 0 }`.
    pub t: S,
    /// Approximate points `y >= 0` where the infimum is attained (`0` for the
    /// limit case), ascending. Empty when `exact`.
    pub minimizers: Vec<S>,
    pub exact: bool,
    /// Width of the widest minimizer interval used; zero when exact.
    pub precision: S,
}

/// Output of [`invert_base`].
#[derive(Clone, Debug, PartialEq)]
pub struct BaseInversion<S> {
    /// `g / (x - t)^2`.
    pub quotient: Polynomial<S>,
    /// The deflated double root: the largest nonnegative one.
    pub t: S,
    /// Whether `t` was the only nonnegative double root.
    pub unique: bool,
    pub exact: bool,
    pub precision: S,
}

/// Output of [`invert_full`].
#[derive(Clone, Debug, PartialEq)]
pub struct InversionReport<S> {
    pub params: ParameterVector<S>,
    /// False iff some level had several nonnegative double roots to choose from.
    pub unique: bool,
    /// Degrees of the levels where the largest double root was picked among several.
    pub ambiguity_levels: Vec<usize>,
    /// Widest isolating interval behind an approximated parameter; zero when exact.
    pub precision_achieved: S,
    /// Every parameter is exact (rational backend only).
    pub exact: bool,
}

impl<S: Scalar> InversionReport<S> {
    /// `{"params", "unique", "ambiguity_levels", "precision_achieved"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params.entries().iter().map(S::to_json).collect::<Vec<_>>(),
            "unique": self.unique,
            "ambiguity_levels": self.ambiguity_levels,
            "precision_achieved": self.precision_achieved.to_f64(),
        })
    }
}

/// `2^-53` times the Cauchy bound of `f`: about one ulp at the scale of its roots.
pub fn default_precision<S: Scalar>(f: &Polynomial<S>) -> S {
    let ulp = S::from_f64(f64::EPSILON / 2.0).expect("finite");
    ulp * f.cauchy_bound()
}

fn check_input<S: Scalar>(g: &Polynomial<S>) -> Result<usize> {
    let d = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if !g.is_monic() {
        return Err(Error::InvalidInput(format!("{g} is not monic")));
    }
    Ok(d)
}

fn require_copositive<S: Scalar>(g: &Polynomial<S>) -> Result<()> {
    let cert = is_copositive(g)?;
    if cert.verdict {
        return Ok(());
    }
    let w = cert.witness.expect("refutation carries a witness");
    Err(Error::NotCopositive(format!(
        "{g} takes the value {} at x = {w}",
        g.evaluate(&w)
    )))
}

fn from_f64<S: Scalar>(v: f64) -> S {
    S::from_f64(v).expect("finite constant")
}

/// A representative point of an isolating interval, away from its ends.
fn representative<S: Scalar>(r: &IsolatedRoot<S>) -> S {
    if let Some(p) = r.interval.as_point() {
        return p.clone();
    }
    let (lo, hi) = (r.lo(), r.hi());
    let quarter = (hi.clone() - lo.clone()).half().half();
    let (a, b) = (lo + quarter.clone(), hi - quarter);
    S::simplest_between(&a, &b).unwrap_or_else(|| (a + b).half())
}

/// Sharpens an approximate multiple root `m` of `g` on the real backend.
///
/// A root of multiplicity `k` is a simple root of `g^(k-1)`, where Newton's
/// method recovers it to full precision. The largest `k` whose polished point
/// stays near `m` and annihilates `g, .., g^(k-1)` up to rounding wins.
fn polish<S: Scalar>(g: &Polynomial<S>, m: &S) -> S {
    if S::is_exact() || m.is_zero() {
        return m.clone();
    }
    let d = g.degree().unwrap_or(0);
    let mut derivs = vec![g.clone()];
    for _ in 0..d {
        let next = derivs.last().expect("nonempty").derivative();
        derivs.push(next);
    }
    let flat = |x: &S, k: usize| {
        derivs[..k]
            .iter()
            .all(|p| p.evaluate(x).negligible(&magnitude_at(p, x)))
    };
    let radius = from_f64::<S>(1e-3) * (S::one() + m.abs());
    let ulp = from_f64::<S>(f64::EPSILON);
    let mut best = m.clone();
    for k in 2..=d {
        let (p, dp) = (&derivs[k - 1], &derivs[k]);
        let mut x = m.clone();
        for _ in 0..50 {
            let slope = dp.evaluate(&x);
            if slope.is_zero() {
                break;
            }
            let step = p.evaluate(&x) / slope;
            x = x - step.clone();
            if step.abs() <= ulp.clone() * x.abs() {
                break;
            }
        }
        if !x.is_negative() && (x.clone() - m.clone()).abs() <= radius && flat(&x, k) {
            best = x;
        }
    }
    best
}

/// `g / (x - m)^2` for an approximate double root `m`, together with the
/// (polished) root actually used.
///
/// On the real backend, low-order quotient coefficients lost in rounding are
/// set to zero so an exact zero root is not turned into a tiny negative one.
fn deflate<S: Scalar>(g: &Polynomial<S>, m: &S) -> Result<(Polynomial<S>, S)> {
    let m = polish(g, m);
    let (q, r) = g.div_rem(&Polynomial::double_root(&m));
    let scale = g.max_abs_coeff();
    let rel = if scale.is_zero() {
        0.0
    } else {
        (r.max_abs_coeff() / scale).to_f64()
    };
    if rel > DEFLATION_SLACK {
        return Err(Error::InternalInconsistency(format!(
            "deflating {g} at {m} leaves relative remainder {rel:e}"
        )));
    }
    let q_scale = q.max_abs_coeff();
    let mut coeffs = q.into_coeffs();
    let d = coeffs.len().saturating_sub(1);
    for c in coeffs[..d].iter_mut() {
        if !c.negligible(&q_scale) {
            break;
        }
        *c = S::zero();
    }
    Ok((Polynomial::new(coeffs), m))
}

/// A stationary point of `g(x)/x` or the limit candidate at `0`.
struct Candidate<S> {
    root: Option<IsolatedRoot<S>>,
    value: S,
}

/// Recovers `(g - t x, t)` with `t = inf { g(x)/x : x > 0 }` for a monic
/// copositive `g` of degree at least 2.
pub fn invert_extension<S: Scalar>(
    g: &Polynomial<S>,
    precision: &S,
) -> Result<ExtensionInversion<S>> {
    let d = check_input(g)?;
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    require_copositive(g)?;
    extension_step(g, precision, S::is_exact())
}

fn extension_step<S: Scalar>(
    g: &Polynomial<S>,
    precision: &S,
    try_exact: bool,
) -> Result<ExtensionInversion<S>> {
    let dg = g.derivative();
    let scale = g.max_abs_coeff();
    let mut candidates = Vec::new();
    if g.coeff(0).negligible(&scale) {
        candidates.push(Candidate {
            root: None,
            value: dg.coeff(0),
        });
    }
    // Stationary points of g(x)/x are the roots of x g' - g.
    let h = &(&Polynomial::x() * &dg) - g;
    let coarse = from_f64::<S>(1e-8);
    for mut r in isolate_roots(&h, &Interval::positive()) {
        let width = coarse.clone() * (S::one() + r.approx().abs());
        r.refine_to(&width);
        let x = representative(&r);
        candidates.push(Candidate {
            value: g.evaluate(&x) / x,
            root: Some(r),
        });
    }
    if candidates.is_empty() && !S::is_exact() && !g.coeff(0).is_negative() {
        // Rounding can hide a stationary point squeezed against 0 by a tiny
        // constant term; the infimum is then within that term of g'(0).
        candidates.push(Candidate {
            root: None,
            value: S::max_of(S::zero(), dg.coeff(0)),
        });
    }
    candidates.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("ordered values"));
    let best = match candidates.first() {
        Some(c) => c.value.clone(),
        None => {
            return Err(Error::InternalInconsistency(format!(
                "g(x)/x has no stationary point for g = {g}"
            )))
        }
    };

    if try_exact {
        let cutoff = best.clone() + from_f64::<S>(RANKING_SLACK) * S::max_of(S::one(), best.abs());
        for c in candidates.iter().take_while(|c| c.value <= cutoff) {
            let v = match &c.root {
                None => c.value.clone(),
                Some(r) => {
                    let mut r = r.clone();
                    match r.exact_value() {
                        Some(x) => g.evaluate(&x) / x,
                        None => continue,
                    }
                }
            };
            if v.is_negative() {
                continue;
            }
            // g - v x >= 0 proves v <= inf g(x)/x; v is attained, so it is the infimum.
            let base = g - &Polynomial::monomial(v.clone(), 1);
            if is_copositive(&base)?.verdict {
                return Ok(ExtensionInversion {
                    base,
                    t: v,
                    minimizers: Vec::new(),
                    exact: true,
                    precision: S::zero(),
                });
            }
        }
    }

    // Approximate infimum: refine every candidate and keep those tying with the best.
    let mut scored = Vec::with_capacity(candidates.len());
    let mut achieved = S::zero();
    for c in candidates {
        match c.root {
            None => scored.push((S::zero(), c.value, S::zero())),
            Some(mut r) => {
                r.refine_to(precision);
                let x = representative(&r);
                let v = g.evaluate(&x) / x.clone();
                scored.push((x, v, r.width()));
            }
        }
    }
    let t = scored
        .iter()
        .map(|s| s.1.clone())
        .reduce(S::min_of)
        .expect("nonempty candidates");
    let tie =
        (from_f64::<S>(1e3) * precision.clone() + S::tolerance()) * S::max_of(S::one(), t.abs());
    let mut minimizers = Vec::new();
    for (x, v, w) in scored {
        if v <= t.clone() + tie.clone() {
            minimizers.push(x);
            achieved = S::max_of(achieved, w);
        }
    }
    minimizers.sort_by(|a, b| a.partial_cmp(b).expect("ordered points"));
    let t = if t.is_negative() {
        if t.abs() > from_f64::<S>(DEFLATION_SLACK) * scale {
            return Err(Error::NotCopositive(format!(
                "g(x)/x reaches {t} for g = {g}"
            )));
        }
        S::zero()
    } else {
        t
    };
    Ok(ExtensionInversion {
        base: g - &Polynomial::monomial(t.clone(), 1),
        t,
        minimizers,
        exact: false,
        precision: achieved,
    })
}

/// Recovers `(g / (x - t)^2, t)` for a monic base-boundary polynomial `g`,
/// deflating the largest nonnegative double root.
pub fn invert_base<S: Scalar>(g: &Polynomial<S>, precision: &S) -> Result<BaseInversion<S>> {
    let d = check_input(g)?;
    if d < 2 {
        return Err(Error::DegreeTooLow(d));
    }
    if !is_copositive(g)?.verdict {
        return Err(Error::NotBaseBoundary);
    }
    base_step(g, precision)
}

fn base_step<S: Scalar>(g: &Polynomial<S>, precision: &S) -> Result<BaseInversion<S>> {
    let mut roots = nonnegative_double_roots(g);
    roots.sort_by(|a, b| a.approx().partial_cmp(&b.approx()).expect("ordered roots"));
    let unique = roots.len() == 1;
    let mut chosen = roots.pop().ok_or(Error::NotBaseBoundary)?;
    if S::is_exact() {
        if let Some(t) = chosen.interval.as_point().cloned() {
            let quotient = g.divide_exact(&Polynomial::double_root(&t))?;
            return Ok(BaseInversion {
                quotient,
                t,
                unique,
                exact: true,
                precision: S::zero(),
            });
        }
    }
    chosen.refine_to(precision);
    let (quotient, t) = deflate(g, &representative(&chosen))?;
    Ok(BaseInversion {
        quotient,
        t,
        unique,
        exact: false,
        precision: chosen.width(),
    })
}

/// Inverts the full parametrization of a monic copositive `f`.
///
/// `precision` bounds the width of the isolating intervals used for irrational
/// roots; see [`default_precision`].
pub fn invert_full<S: Scalar>(f: &Polynomial<S>, precision: &S) -> Result<InversionReport<S>> {
    check_input(f)?;
    require_copositive(f)?;

    let mut reversed = Vec::new();
    let mut unique = true;
    let mut ambiguity_levels = Vec::new();
    let mut achieved = S::zero();
    let mut exact = S::is_exact();
    let mut g = f.clone();
    loop {
        match g.degree() {
            Some(0) | None => break,
            Some(1) => {
                let c = g.coeff(0);
                let c = if !c.is_negative() {
                    c
                } else if !exact && c.abs() <= from_f64::<S>(DEFLATION_SLACK) {
                    S::zero()
                } else {
                    return Err(Error::NotCopositive(format!("linear factor {g}")));
                };
                reversed.push(c);
                break;
            }
            Some(d) => {
                let ext = extension_step(&g, precision, exact)?;
                exact &= ext.exact;
                achieved = S::max_of(achieved, ext.precision.clone());
                let base = if ext.exact {
                    base_step(&ext.base, precision)?
                } else {
                    let m = ext.minimizers.last().expect("a minimizer");
                    let (quotient, t) = deflate(&ext.base, m)?;
                    BaseInversion {
                        quotient,
                        unique: ext.minimizers.len() == 1,
                        t,
                        exact: false,
                        precision: S::zero(),
                    }
                };
                exact &= base.exact;
                achieved = S::max_of(achieved, base.precision);
                if !base.unique {
                    unique = false;
                    ambiguity_levels.push(d);
                }
                reversed.push(ext.t);
                reversed.push(base.t);
                g = base.quotient;
            }
        }
    }
    reversed.reverse();
    Ok(InversionReport {
        params: ParameterVector::new(reversed)?,
        unique,
        ambiguity_levels,
        precision_achieved: achieved,
        exact,
    })
}
