//! Sturm chains, real root counting and root isolation by bisection.

use std::cmp::Ordering;

use crate::interval::{Endpoint, Interval};
use crate::poly::Polynomial;
use crate::scalar::{sign_of, Scalar};

/// Bisection depth after which the real backend gives up splitting a cluster.
const MAX_REAL_DEPTH: usize = 200;

/// Cap on refinement steps spent deciding whether an isolated root is rational.
const MAX_RATIONAL_STEPS: usize = 4096;

/// `chain[0] = p`, `chain[1] = p'`, `chain[k+1] = -rem(chain[k-1], chain[k])`.
///
/// Elements past `p'` are stored as positive multiples of the classical ones
/// (primitive integer forms on the rational backend), which leaves every sign
/// sequence unchanged; [`SturmChain::classical`] gives the textbook elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SturmChain<S> {
    chain: Vec<Polynomial<S>>,
    /// Positive multiples of the chain elements used for sign evaluation.
    eval: Vec<Vec<S>>,
}

impl<S: Scalar> SturmChain<S> {
    /// Panics on the zero polynomial.
    pub fn new(p: &Polynomial<S>) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![p.clone()];
        let dp = p.derivative();
        if dp.is_zero() {
            return Self::with_eval(chain);
        }
        chain.push(dp);
        loop {
            let n = chain.len();
            let r = chain[n - 2].scaled_rem(&chain[n - 1]);
            let scale = chain[n - 2].max_abs_coeff();
            let mut coeffs = (-r).into_coeffs();
            if !S::is_exact() {
                while coeffs.last().is_some_and(|c| c.negligible(&scale)) {
                    coeffs.pop();
                }
            }
            if coeffs.is_empty() {
                break;
            }
            chain.push(Polynomial::new(coeffs));
        }
        Self::with_eval(chain)
    }

    /// The classical chain built by plain long division.
    pub fn classical(p: &Polynomial<S>) -> Vec<Polynomial<S>> {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![p.clone()];
        let dp = p.derivative();
        if dp.is_zero() {
            return chain;
        }
        chain.push(dp);
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            let scale = chain[n - 2].max_abs_coeff();
            let r = -r;
            if r.coeffs().iter().all(|c| c.negligible(&scale)) {
                return chain;
            }
            chain.push(r);
        }
    }

    fn with_eval(chain: Vec<Polynomial<S>>) -> Self {
        let eval = chain.iter().map(|p| S::integer_form(p.coeffs())).collect();
        Self { chain, eval }
    }

    pub fn polys(&self) -> &[Polynomial<S>] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn head(&self) -> &Polynomial<S> {
        &self.chain[0]
    }

    fn variations<I: Iterator<Item = Ordering>>(signs: I) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign variations of the chain at a finite point (zeros skipped).
    pub fn variations_at(&self, x: &S) -> usize {
        Self::variations(self.eval.iter().map(|c| S::sign_at(c, x)))
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let lc = sign_of(p.leading().expect("chain elements are nonzero"));
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if positive || !odd {
                lc
            } else {
                lc.reverse()
            }
        }))
    }

    /// Number of distinct real roots of `chain[0]` in `iv`, honoring open,
    /// closed and unbounded ends. Endpoints that are roots are moved off the
    /// root by half a certified separation radius before counting.
    pub fn count_roots_in(&self, iv: &Interval<S>) -> usize {
        let p = self.head();
        if p.is_constant() {
            return 0;
        }
        let effective = |value: &S, closed: bool, low_side: bool| -> S {
            if !p.evaluate(value).is_zero() {
                return value.clone();
            }
            let step = separation_radius(p, value).half();
            // Closed low end or open high end: move left. Otherwise move right.
            if closed == low_side {
                value.clone() - step
            } else {
                value.clone() + step
            }
        };
        let (lo, v_lo) = match &iv.lo {
            Endpoint::Unbounded => (None, self.variations_at_infinity(false)),
            Endpoint::At { value, closed } => {
                let a = effective(value, *closed, true);
                let v = self.variations_at(&a);
                (Some(a), v)
            }
        };
        let (hi, v_hi) = match &iv.hi {
            Endpoint::Unbounded => (None, self.variations_at_infinity(true)),
            Endpoint::At { value, closed } => {
                let b = effective(value, *closed, false);
                let v = self.variations_at(&b);
                (Some(b), v)
            }
        };
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return 0;
            }
        }
        v_lo.saturating_sub(v_hi)
    }
}

/// Lower bound on the distance from a root `c` of `p` to every other root.
///
/// Writes `p(c + y) = y^m q(y)` with `q(0) != 0`; all roots of `q` satisfy
/// `|y| >= |q_0| / (|q_0| + max_{i>0} |q_i|)` (Cauchy bound of the reversed polynomial).
pub fn separation_radius<S: Scalar>(p: &Polynomial<S>, c: &S) -> S {
    let shifted = p.shift(c);
    let coeffs = shifted.coeffs();
    let Some(first) = coeffs.iter().position(|x| !x.is_zero()) else {
        return S::one();
    };
    let q0 = coeffs[first].abs();
    let rest = coeffs[first + 1..]
        .iter()
        .fold(S::zero(), |m, x| S::max_of(m, x.abs()));
    if rest.is_zero() {
        return S::one();
    }
    q0.clone() / (q0 + rest)
}

/// Number of distinct real roots of `chain.head()` in `iv`.
pub fn count_roots_in<S: Scalar>(chain: &SturmChain<S>, iv: &Interval<S>) -> usize {
    chain.count_roots_in(iv)
}

/// An isolating interval for one distinct real root, with its multiplicity.
///
/// The interval is either an exact point or an open interval whose endpoints
/// are not roots of the squarefree factor carrying the root, so the factor
/// changes sign across it.
#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedRoot<S> {
    pub interval: Interval<S>,
    pub multiplicity: usize,
    factor: Polynomial<S>,
}

impl<S: Scalar> IsolatedRoot<S> {
    /// Squarefree factor that vanishes at this root (and at no other root
    /// inside the interval).
    pub fn factor(&self) -> &Polynomial<S> {
        &self.factor
    }

    pub fn is_point(&self) -> bool {
        self.interval.as_point().is_some()
    }

    fn bounds(&self) -> (S, S) {
        let lo = self
            .interval
            .lo
            .value()
            .expect("isolating intervals are bounded");
        let hi = self
            .interval
            .hi
            .value()
            .expect("isolating intervals are bounded");
        (lo.clone(), hi.clone())
    }

    pub fn lo(&self) -> S {
        self.bounds().0
    }

    pub fn hi(&self) -> S {
        self.bounds().1
    }

    /// Width of the isolating interval (zero for a point).
    pub fn width(&self) -> S {
        let (lo, hi) = self.bounds();
        hi - lo
    }

    /// Midpoint of the interval, or the root itself when known exactly.
    pub fn approx(&self) -> S {
        let (lo, hi) = self.bounds();
        (lo + hi).half()
    }

    /// Halves the interval. Returns `false` once the root is an exact point.
    pub fn refine_step(&mut self) -> bool {
        if self.is_point() {
            return false;
        }
        let (lo, hi) = self.bounds();
        let mid = (lo.clone() + hi.clone()).half();
        let c = self.factor.coeffs();
        let s_mid = S::sign_at(c, &mid);
        if s_mid == Ordering::Equal {
            self.interval = Interval::point(mid);
            return false;
        }
        let s_lo = S::sign_at(c, &lo);
        let s_hi = S::sign_at(c, &hi);
        let go_right = if s_lo != s_hi && s_lo != Ordering::Equal && s_hi != Ordering::Equal {
            s_mid == s_lo
        } else {
            // Sign information is unreliable (real backend); fall back to counting.
            let chain = SturmChain::new(&self.factor);
            chain.count_roots_in(&Interval::open(lo.clone(), mid.clone())) == 0
        };
        self.interval = if go_right {
            Interval::open(mid, hi)
        } else {
            Interval::open(lo, mid)
        };
        true
    }

    /// Refines until the width is at most `width` (or the root is exact).
    pub fn refine_to(&mut self, width: &S) {
        let mut steps = 0;
        while self.width() > *width && self.refine_step() {
            steps += 1;
            if !S::is_exact() && steps > MAX_REAL_DEPTH {
                break;
            }
        }
    }

    /// Decides whether the root is rational and, if so, collapses the interval
    /// onto it. Always `None` on the real backend.
    ///
    /// A rational root `a/b` of the factor has `b <= Q` where `Q` is the leading
    /// coefficient of the primitive integer form; once the interval is narrower
    /// than `1/Q^2` the simplest rational inside it is the only candidate.
    pub fn exact_value(&mut self) -> Option<S> {
        if let Some(p) = self.interval.as_point() {
            return Some(p.clone());
        }
        let q = S::root_denominator_bound(self.factor.coeffs())?;
        let q2 = q.clone() * q;
        for _ in 0..MAX_RATIONAL_STEPS {
            if let Some(p) = self.interval.as_point() {
                return Some(p.clone());
            }
            let (lo, hi) = self.bounds();
            if let Some(s) = S::simplest_between(&lo, &hi) {
                if S::sign_at(self.factor.coeffs(), &s) == Ordering::Equal {
                    self.interval = Interval::point(s.clone());
                    return Some(s);
                }
            }
            if (hi - lo) * q2.clone() < S::one() {
                return None;
            }
            self.refine_step();
        }
        None
    }
}

fn isolate_squarefree<S: Scalar>(
    a: &Polynomial<S>,
    iv: &Interval<S>,
    multiplicity: usize,
    out: &mut Vec<IsolatedRoot<S>>,
) {
    if a.is_constant() {
        return;
    }
    let chain = SturmChain::new(a);
    let bound = a.root_bound();
    let a = &Polynomial::new(S::integer_form(a.coeffs()));
    let is_root = |x: &S| S::sign_at(a.coeffs(), x) == Ordering::Equal;
    let push = |out: &mut Vec<IsolatedRoot<S>>, interval: Interval<S>| {
        out.push(IsolatedRoot {
            interval,
            multiplicity,
            factor: a.clone(),
        })
    };

    let mut lo = -bound.clone();
    if let Endpoint::At { value, closed } = &iv.lo {
        if *closed && is_root(value) {
            push(out, Interval::point(value.clone()));
        }
        lo = S::max_of(lo, value.clone());
    }
    let mut hi = bound;
    if let Endpoint::At { value, closed } = &iv.hi {
        let same_as_lo = iv.lo.value() == Some(value);
        if *closed && !same_as_lo && is_root(value) {
            push(out, Interval::point(value.clone()));
        }
        hi = S::min_of(hi, value.clone());
    }
    if lo >= hi {
        return;
    }
    if is_root(&lo) {
        lo = lo.clone() + separation_radius(a, &lo).half();
    }
    if is_root(&hi) {
        hi = hi.clone() - separation_radius(a, &hi).half();
    }
    if lo >= hi {
        return;
    }

    let v_lo = chain.variations_at(&lo);
    let v_hi = chain.variations_at(&hi);
    let mut stack = vec![(lo, hi, v_lo, v_hi, 0usize)];
    while let Some((l, r, vl, vr, depth)) = stack.pop() {
        let k = vl.saturating_sub(vr);
        if k == 0 {
            continue;
        }
        if k == 1 || (!S::is_exact() && depth >= MAX_REAL_DEPTH) {
            push(out, Interval::open(l, r));
            continue;
        }
        let m = (l.clone() + r.clone()).half();
        if is_root(&m) {
            push(out, Interval::point(m.clone()));
            let delta = separation_radius(a, &m).half();
            let left = m.clone() - delta.clone();
            if left > l {
                let v = chain.variations_at(&left);
                stack.push((l, left, vl, v, depth + 1));
            }
            let right = m + delta;
            if right < r {
                let v = chain.variations_at(&right);
                stack.push((right, r, v, vr, depth + 1));
            }
        } else {
            let vm = chain.variations_at(&m);
            stack.push((m.clone(), r, vm, vr, depth + 1));
            stack.push((l, m, vl, vm, depth + 1));
        }
    }
}

fn overlaps<S: Scalar>(a: &IsolatedRoot<S>, b: &IsolatedRoot<S>) -> bool {
    // Points are closed, proper isolating intervals are open.
    let (a_lo, a_hi) = a.bounds();
    let (b_lo, b_hi) = b.bounds();
    let (ap, bp) = (a.is_point(), b.is_point());
    let strict = |x: &S, lo: &S, hi: &S| lo < x && x < hi;
    match (ap, bp) {
        (true, true) => a_lo == b_lo,
        (true, false) => strict(&a_lo, &b_lo, &b_hi),
        (false, true) => strict(&b_lo, &a_lo, &a_hi),
        (false, false) => a_lo < b_hi && b_lo < a_hi,
    }
}

/// Isolates every distinct real root of `p` in `iv`, in increasing order, with
/// multiplicities taken from the squarefree decomposition.
pub fn isolate_roots<S: Scalar>(p: &Polynomial<S>, iv: &Interval<S>) -> Vec<IsolatedRoot<S>> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let mut roots = Vec::new();
    for (factor, m) in p.squarefree_factors() {
        isolate_squarefree(&factor, iv, m, &mut roots);
    }
    // Roots of different factors are distinct, so refining overlapping
    // intervals separates them.
    let mut rounds = 0;
    loop {
        roots.sort_by(|a, b| {
            a.approx()
                .partial_cmp(&b.approx())
                .unwrap_or(Ordering::Equal)
        });
        let clash = (1..roots.len()).find(|&i| overlaps(&roots[i - 1], &roots[i]));
        let Some(i) = clash else { break };
        rounds += 1;
        if !S::is_exact() && rounds > MAX_REAL_DEPTH {
            break;
        }
        let (left, right) = roots.split_at_mut(i);
        let progressed = left[i - 1].refine_step() | right[0].refine_step();
        if !progressed {
            break;
        }
    }
    roots
}

/// Distinct real roots of `p` in `iv` as bare intervals, merging multiplicities.
pub fn root_intervals<S: Scalar>(p: &Polynomial<S>, iv: &Interval<S>) -> Vec<(Interval<S>, usize)> {
    isolate_roots(p, iv)
        .into_iter()
        .map(|r| (r.interval, r.multiplicity))
        .collect()
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
    fn chain_examples() {
        let classical = SturmChain::classical(&p(&[2, -3, 1]));
        assert_eq!(
            classical,
            vec![p(&[2, -3, 1]), p(&[-3, 2]), P::constant(q(1, 4))]
        );
        // The stored chain holds positive multiples.
        let c = SturmChain::new(&p(&[2, -3, 1]));
        assert_eq!(c.polys(), &[p(&[2, -3, 1]), p(&[-3, 2]), p(&[1])]);
        assert_eq!(
            SturmChain::classical(&p(&[1, 1])),
            vec![p(&[1, 1]), p(&[1])]
        );
        let c = SturmChain::new(&p(&[1, 0, 1]));
        assert_eq!(c.polys(), &[p(&[1, 0, 1]), p(&[0, 2]), p(&[-1])]);
        assert_eq!(SturmChain::classical(&p(&[1, 0, 1])), c.polys());
    }

    #[test]
    fn chain_degrees_strictly_decrease() {
        let f = p(&[4, -12, 13, -6, 1]);
        let c = SturmChain::new(&f);
        for w in c.polys().windows(2) {
            assert!(w[1].degree() < w[0].degree());
        }
        // Last element is an associate of gcd(f, f').
        assert_eq!(c.polys().last().unwrap().monic(), p(&[2, -3, 1]));
    }

    #[test]
    fn count_examples() {
        let c = SturmChain::new(&p(&[2, -3, 1]));
        assert_eq!(c.count_roots_in(&Interval::positive()), 2);
        assert_eq!(c.count_roots_in(&Interval::left_open(q(0, 1), q(3, 2))), 1);
        let c = SturmChain::new(&p(&[1, 0, 1]));
        assert_eq!(c.count_roots_in(&Interval::real_line()), 0);
    }

    #[test]
    fn count_with_root_endpoints() {
        let c = SturmChain::new(&p(&[2, -3, 1]));
        assert_eq!(c.count_roots_in(&Interval::closed(q(1, 1), q(2, 1))), 2);
        assert_eq!(c.count_roots_in(&Interval::open(q(1, 1), q(2, 1))), 0);
        assert_eq!(c.count_roots_in(&Interval::left_open(q(1, 1), q(2, 1))), 1);
        assert_eq!(c.count_roots_in(&Interval::point(q(1, 1))), 1);
        assert_eq!(c.count_roots_in(&Interval::nonnegative()), 2);
        // Non-squarefree head: endpoints at the double roots.
        let c = SturmChain::new(&p(&[4, -12, 13, -6, 1]));
        assert_eq!(c.count_roots_in(&Interval::closed(q(1, 1), q(2, 1))), 2);
        assert_eq!(c.count_roots_in(&Interval::left_open(q(1, 1), q(2, 1))), 1);
        assert_eq!(c.count_roots_in(&Interval::open(q(1, 1), q(2, 1))), 0);
    }

    #[test]
    fn isolate_examples() {
        let roots = isolate_roots(&p(&[4, -12, 13, -6, 1]), &Interval::nonnegative());
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.multiplicity == 2));
        assert!(roots[0].interval.contains(&q(1, 1)));
        assert!(roots[1].interval.contains(&q(2, 1)));

        assert!(isolate_roots(&p(&[5, 1]), &Interval::nonnegative()).is_empty());

        let roots = isolate_roots(&p(&[0, 0, 1]), &Interval::nonnegative());
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].interval.as_point(), Some(&q(0, 1)));
        assert_eq!(roots[0].multiplicity, 2);
    }

    #[test]
    fn isolating_intervals_are_disjoint_across_factors() {
        // (x - 1)^2 (x - 1 - 1/1000) (x - 3)^3
        let a = P::linear_root(&q(1, 1));
        let b = P::linear_root(&q(1001, 1000));
        let c = P::linear_root(&q(3, 1));
        let f = &(&(&a * &a) * &b) * &(&(&c * &c) * &c);
        let mut roots = isolate_roots(&f, &Interval::real_line());
        assert_eq!(roots.len(), 3);
        let mults: Vec<_> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults, vec![2, 1, 3]);
        for w in roots.windows(2) {
            assert!(!overlaps(&w[0], &w[1]));
        }
        for r in &mut roots {
            assert!(r.exact_value().is_some());
        }
    }

    #[test]
    fn refinement_and_rational_detection() {
        // x^2 - 2: irrational roots
        let mut roots = isolate_roots(&p(&[-2, 0, 1]), &Interval::positive());
        assert_eq!(roots.len(), 1);
        let r = &mut roots[0];
        r.refine_to(&q(1, 1_000_000));
        assert!(r.width() <= q(1, 1_000_000));
        let m = r.approx();
        assert!((Scalar::to_f64(&m) - 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(r.exact_value(), None);

        // (3x - 2)(x + 7): rational root 2/3
        let mut roots = isolate_roots(&p(&[-14, 19, 3]), &Interval::positive());
        assert_eq!(roots[0].exact_value(), Some(q(2, 3)));
        assert!(roots[0].is_point());
    }

    #[test]
    fn separation_radius_is_conservative() {
        let f = p(&[2, -3, 1]);
        let rho = separation_radius(&f, &q(1, 1));
        assert!(rho > q(0, 1) && rho <= q(1, 1));
    }

    #[test]
    fn real_backend_isolates_simple_roots() {
        let f = Polynomial::<f64>::new(vec![2.0, -3.0, 1.0]);
        let mut roots = isolate_roots(&f, &Interval::positive());
        assert_eq!(roots.len(), 2);
        for r in &mut roots {
            r.refine_to(&1e-12);
        }
        assert!((roots[0].approx() - 1.0).abs() < 1e-9);
        assert!((roots[1].approx() - 2.0).abs() < 1e-9);
    }
}
