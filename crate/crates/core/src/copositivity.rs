//! Membership in the copositive cone and in its base boundary.
//!
//! For a polynomial with positive leading coefficient, `p >= 0` on `[0, inf)`
//! exactly when `p(0) >= 0` and every root in `(0, inf)` has even
//! multiplicity: `p` can only turn negative on the half-line by starting
//! negative or by crossing zero at an odd-multiplicity root.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::sturm::{isolate_roots, IsolatedRoot};

/// Verdict of [`is_copositive`].
#[derive(Clone, Debug, PartialEq)]
pub struct CopositivityCertificate<S> {
    pub verdict: bool,
    /// Present iff the verdict is false: a point `x0 >= 0` with `p(x0) < 0`.
    pub witness: Option<S>,
    /// Present iff the verdict is true.
    pub accounting: Option<RootAccounting<S>>,
}

/// Every distinct root in `(0, inf)` with its multiplicity, plus the sign of `p(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootAccounting<S> {
    pub roots: Vec<(Interval<S>, usize)>,
    /// `0` when `p(0) = 0`, `1` when positive.
    pub sign_at_zero: i8,
}

/// Result of [`is_base_boundary`].
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryReport<S> {
    pub in_base_boundary: bool,
    /// Points `y >= 0` with `f(y) = f'(y) = 0`: exact points when the root is
    /// rational, isolating intervals otherwise.
    pub double_roots: Vec<Interval<S>>,
}

fn check_leading<S: Scalar>(p: &Polynomial<S>) -> Result<()> {
    match p.leading() {
        Some(lc) if lc.is_positive() => Ok(()),
        Some(lc) => Err(Error::InvalidInput(format!(
            "leading coefficient {lc} is not positive"
        ))),
        None => Err(Error::InvalidInput("zero polynomial".into())),
    }
}

/// `sum |c_i| |x|^i`, the natural scale of `p(x)` for relative tests.
pub(crate) fn magnitude_at<S: Scalar>(p: &Polynomial<S>, x: &S) -> S {
    let ax = x.abs();
    p.coeffs()
        .iter()
        .rev()
        .fold(S::zero(), |acc, c| acc * ax.clone() + c.abs())
}

/// A point strictly between `left` (exclusive) and the root `right`,
/// refining `right` until its isolating interval clears `left`.
fn point_before<S: Scalar>(left: &S, right: &mut IsolatedRoot<S>) -> S {
    while right.lo() <= *left {
        if !right.refine_step() {
            break;
        }
    }
    (left.clone() + right.lo()).half()
}

/// Upper end of the region occupied by a root's isolating interval.
fn right_edge<S: Scalar>(r: &IsolatedRoot<S>) -> S {
    r.hi()
}

/// Decides `p >= 0` on `[0, inf)` for `p` with positive leading coefficient.
///
/// On the rational backend the verdict is exact and a false verdict carries a
/// rational witness `x0 >= 0` with `p(x0) < 0`. On the real backend a
/// negative excursion must exceed `1e-9` times `sum |c_i| x0^i` to count; odd
/// roots bounding a negligible dip are reported as one even cluster.
pub fn is_copositive<S: Scalar>(p: &Polynomial<S>) -> Result<CopositivityCertificate<S>> {
    check_leading(p)?;
    let p0 = p.coeff(0);
    if p0.is_negative() && !p0.negligible(&p.max_abs_coeff()) {
        return Ok(refuted(S::zero()));
    }
    let sign_at_zero = if p0.is_positive() { 1 } else { 0 };
    let mut roots = isolate_roots(p, &Interval::positive());

    // Sign of p on the gap left of root j is negative iff an odd number of
    // odd-multiplicity roots lies at or right of j.
    let n = roots.len();
    let mut odd_after = vec![0usize; n + 1];
    for j in (0..n).rev() {
        odd_after[j] = odd_after[j + 1] + roots[j].multiplicity % 2;
    }
    let negative_gaps: Vec<usize> = (0..n).filter(|&j| odd_after[j] % 2 == 1).collect();
    if negative_gaps.is_empty() {
        return Ok(certified(accounting(roots, sign_at_zero)));
    }

    let mut negligible_gaps = Vec::new();
    for &j in negative_gaps.iter().rev() {
        let left = if j == 0 {
            S::zero()
        } else {
            right_edge(&roots[j - 1])
        };
        let w = point_before(&left, &mut roots[j]);
        let value = p.evaluate(&w);
        if value.is_negative() && !value.negligible(&magnitude_at(p, &w)) {
            return Ok(refuted(w));
        }
        if S::is_exact() {
            return Err(Error::InternalInconsistency(format!(
                "sign bookkeeping predicted p({w}) < 0 but the value is {value}"
            )));
        }
        negligible_gaps.push(j);
    }

    // Real backend only: every negative gap is numerically flat. Merge the
    // roots around each such gap into one cluster of even multiplicity.
    let mut clusters: Vec<(Interval<S>, usize)> = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        let mut mult = roots[i].multiplicity;
        while j + 1 < n && negligible_gaps.contains(&(j + 1)) {
            j += 1;
            mult += roots[j].multiplicity;
        }
        let interval = if i == j {
            roots[i].interval.clone()
        } else {
            Interval::closed(roots[i].lo(), roots[j].hi())
        };
        clusters.push((interval, mult));
        i = j + 1;
    }
    if negligible_gaps.contains(&0) {
        // Dip between 0 and the first root: that root touches zero from above.
        if let Some(first) = clusters.first_mut() {
            first.1 += 1;
        }
    }
    Ok(certified(RootAccounting {
        roots: clusters,
        sign_at_zero,
    }))
}

fn accounting<S: Scalar>(roots: Vec<IsolatedRoot<S>>, sign_at_zero: i8) -> RootAccounting<S> {
    RootAccounting {
        roots: roots
            .into_iter()
            .map(|mut r| {
                r.exact_value();
                (r.interval, r.multiplicity)
            })
            .collect(),
        sign_at_zero,
    }
}

fn refuted<S: Scalar>(witness: S) -> CopositivityCertificate<S> {
    CopositivityCertificate {
        verdict: false,
        witness: Some(witness),
        accounting: None,
    }
}

fn certified<S: Scalar>(accounting: RootAccounting<S>) -> CopositivityCertificate<S> {
    CopositivityCertificate {
        verdict: true,
        witness: None,
        accounting: Some(accounting),
    }
}

/// A point `x0 >= 0` with `p(x0) < 0`, if one exists. Prefers `x0 = 0`.
pub fn negativity_witness<S: Scalar>(p: &Polynomial<S>) -> Option<S> {
    let lc = p.leading()?;
    let p0 = p.coeff(0);
    if p0.is_negative() && !p0.negligible(&p.max_abs_coeff()) {
        return Some(S::zero());
    }
    if lc.is_negative() {
        // Past the Cauchy bound p has the sign of its leading coefficient.
        return Some(p.cauchy_bound());
    }
    is_copositive(p).ok()?.witness
}

/// Nonnegative points where `p` and `p'` both vanish.
///
/// Rational backend: the roots of `gcd(p, p')` in `[0, inf)`, as exact points
/// whenever they are rational. Real backend: critical points `r >= 0` of `p`
/// (roots of `p'`) where `|p(r)|` is negligible relative to `sum |c_i| r^i`.
pub fn nonnegative_double_roots<S: Scalar>(p: &Polynomial<S>) -> Vec<IsolatedRoot<S>> {
    if p.is_constant() {
        return Vec::new();
    }
    let dp = p.derivative();
    if S::is_exact() {
        let g = p.gcd(&dp);
        if g.is_constant() {
            return Vec::new();
        }
        let mut roots = isolate_roots(&g, &Interval::nonnegative());
        for r in &mut roots {
            r.exact_value();
        }
        return roots;
    }
    let mut out = Vec::new();
    let p0 = p.coeff(0);
    let scale = p.max_abs_coeff();
    if p0.negligible(&scale) && dp.coeff(0).negligible(&scale) {
        // Double root at the origin; seed it as an exact point of x.
        let mut at_zero = isolate_roots(&Polynomial::x(), &Interval::nonnegative());
        out.append(&mut at_zero);
    }
    if dp.is_zero() {
        return out;
    }
    for mut r in isolate_roots(&dp, &Interval::positive()) {
        let width = r.approx().abs() * S::tolerance() * S::tolerance();
        r.refine_to(&width);
        let x = r.approx();
        if p.evaluate(&x).negligible(&magnitude_at(p, &x)) {
            out.push(r);
        }
    }
    out
}

/// Membership in the base boundary: copositive with a nonnegative double root.
pub fn is_base_boundary<S: Scalar>(p: &Polynomial<S>) -> Result<BoundaryReport<S>> {
    match p.degree() {
        Some(d) if d >= 2 => {}
        d => {
            return Err(Error::InvalidInput(format!(
                "base boundary needs degree >= 2, got {}",
                d.map_or("-inf".to_string(), |d| d.to_string())
            )))
        }
    }
    if !p.is_monic() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    let verdict = is_copositive(p)?.verdict;
    let double_roots: Vec<Interval<S>> = nonnegative_double_roots(p)
        .into_iter()
        .map(|r| r.interval)
        .collect();
    Ok(BoundaryReport {
        in_base_boundary: verdict && !double_roots.is_empty(),
        double_roots,
    })
}

fn roots_json<S: Scalar>(roots: &[(Interval<S>, usize)]) -> Value {
    Value::Array(
        roots
            .iter()
            .map(|(iv, m)| {
                let mut obj = match iv.to_json() {
                    Value::Object(o) => o,
                    _ => Map::new(),
                };
                obj.insert("multiplicity".into(), json!(m));
                Value::Object(obj)
            })
            .collect(),
    )
}

impl<S: Scalar> CopositivityCertificate<S> {
    /// `{"polynomial", "verdict", "witness"?, "roots"?, "sign_at_zero"?}`.
    pub fn to_json(&self, p: &Polynomial<S>) -> Value {
        let mut obj = Map::new();
        obj.insert("polynomial".into(), p.to_json());
        obj.insert("verdict".into(), json!(self.verdict));
        if let Some(w) = &self.witness {
            obj.insert("witness".into(), w.to_json());
            obj.insert("witness_value".into(), p.evaluate(w).to_json());
        }
        if let Some(acc) = &self.accounting {
            obj.insert("roots".into(), roots_json(&acc.roots));
            obj.insert("sign_at_zero".into(), json!(acc.sign_at_zero));
        }
        Value::Object(obj)
    }
}

impl<S: Scalar> BoundaryReport<S> {
    pub fn to_json(&self, p: &Polynomial<S>) -> Value {
        json!({
            "polynomial": p.to_json(),
            "in_base_boundary": self.in_base_boundary,
            "double_roots": self.double_roots.iter().map(Interval::to_json).collect::<Vec<_>>(),
        })
    }
}
