//! Property tests. Expected values come from how the inputs were built
//! (known roots, known factors, known minima), not from the library.

use copositive::{
    default_precision, invert_extension, invert_full, is_base_boundary, is_copositive, phi_big,
    psi, sample_one, Distribution, Interval, Mode, ParameterVector, Polynomial, Rational,
    SampleSpec, Scalar, SturmChain,
};
use proptest::prelude::*;

type Q = Rational;
type P = Polynomial<Q>;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(-20i64..=20, 1..=max_degree + 1).prop_map(|c| P::from_i64s(&c))
}

fn nonzero_poly(max_degree: usize) -> impl Strategy<Value = P> {
    poly_strategy(max_degree).prop_filter("nonzero", |p| !p.is_zero())
}

fn params(max_len: usize) -> impl Strategy<Value = ParameterVector<Q>> {
    prop::collection::vec((0i64..=40, 1i64..=4), 0..=max_len)
        .prop_map(|v| ParameterVector::new(v.into_iter().map(|(n, d)| q(n, d)).collect()).unwrap())
}

fn from_roots(roots: &[(Q, usize)]) -> P {
    roots.iter().fold(P::one(), |acc, (r, m)| {
        (0..*m).fold(acc, |a, _| &a * &P::new(vec![-r.clone(), q(1, 1)]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_division_undoes_multiplication(p in poly_strategy(6), d in nonzero_poly(4)) {
        let prod = &p * &d;
        prop_assert_eq!(prod.divide_exact(&d).unwrap(), p.clone());
        let (quot, rem) = prod.div_rem(&d);
        prop_assert_eq!(quot, p);
        prop_assert!(rem.is_zero());
    }

    #[test]
    fn division_identity(a in poly_strategy(8), b in nonzero_poly(4)) {
        let (quot, rem) = a.div_rem(&b);
        prop_assert_eq!(&(&quot * &b) + &rem, a);
        prop_assert!(rem.degree() < b.degree() || rem.is_zero());
    }

    #[test]
    fn derivative_product_rule(a in poly_strategy(5), b in poly_strategy(5)) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sturm_counts_constructed_roots(
        raw in prop::collection::vec((-12i64..=12, 1usize..=3), 1..=4),
        complex_pair in prop::option::of(1i64..=9),
        window in (-14i64..=14, 0i64..=14),
    ) {
        // Distinct halves k/2 with multiplicities, times an optional x^2 + c.
        let mut roots: Vec<(Q, usize)> = Vec::new();
        for (k, m) in raw {
            let r = q(k, 2);
            if roots.iter().all(|(s, _)| *s != r) {
                roots.push((r, m));
            }
        }
        let mut p = from_roots(&roots);
        if let Some(c) = complex_pair {
            p = &p * &P::from_i64s(&[c, 0, 1]);
        }
        let lo = q(window.0, 2) - q(1, 4);
        let hi = lo.clone() + q(window.1, 2);
        let expected = roots.iter().filter(|(r, _)| *r > lo && *r <= hi).count();
        let chain = SturmChain::new(&p);
        prop_assert_eq!(chain.count_roots_in(&Interval::left_open(lo, hi)), expected);
        prop_assert_eq!(chain.count_roots_in(&Interval::real_line()), roots.len());
    }

    #[test]
    fn certifier_is_sound(mut p in nonzero_poly(5)) {
        let lead = p.leading().unwrap().clone();
        if lead < q(0, 1) {
            p = -p;
        }
        let cert = is_copositive(&p).unwrap();
        if cert.verdict {
            for i in 0..=400 {
                prop_assert!(p.evaluate(&q(i, 20)) >= q(0, 1));
            }
        } else {
            let w = cert.witness.unwrap();
            prop_assert!(w >= q(0, 1));
            prop_assert!(p.evaluate(&w) < q(0, 1));
        }
    }

    #[test]
    fn parametrized_polynomials_are_monic_and_copositive(t in params(8)) {
        let f = phi_big(&t);
        prop_assert_eq!(f.degree(), Some(t.len()));
        prop_assert!(f.is_monic());
        prop_assert!(is_copositive(&f).unwrap().verdict);
    }

    #[test]
    fn psi_lands_on_the_base_boundary(s in params(5), n in 0i64..=30, d in 1i64..=3) {
        let t = q(n, d);
        let g = psi(&phi_big(&s), &t, Mode::Validate).unwrap();
        let report = is_base_boundary(&g).unwrap();
        prop_assert!(report.in_base_boundary);
        prop_assert!(report.double_roots.iter().any(|iv| iv.contains(&t)));
        prop_assert_eq!(g.divide_exact(&P::double_root(&t)).unwrap(), phi_big(&s));
    }

    #[test]
    fn extension_value_is_the_infimum(t in params(7).prop_filter("degree >= 2", |t| t.len() >= 2),
                                      xs in prop::collection::vec((1i64..=2000, 1i64..=100), 1000)) {
        let g = phi_big(&t);
        let ext = invert_extension(&g, &default_precision(&g)).unwrap();
        prop_assert!(ext.exact);
        for (n, d) in xs {
            let x = q(n, d);
            prop_assert!(g.evaluate(&x) / x >= ext.t);
        }
        prop_assert!(is_copositive(&ext.base).unwrap().verdict);
    }

    #[test]
    fn inversion_reproduces_the_input(t in params(7)) {
        let f = phi_big(&t);
        let report = invert_full(&f, &default_precision(&f)).unwrap();
        prop_assert!(report.exact);
        prop_assert_eq!(phi_big(&report.params), f);
    }

    #[test]
    fn shifted_square_minimum(a in -10i64..=10, c in 0i64..=20, b in prop::option::of(0i64..=10)) {
        // h = (x - a)^2 + c has minimum c on [0, inf) when a >= 0 and a^2 + c
        // otherwise; an extra factor (x - b)^2 with b >= 0 pulls it down to c.
        let a = q(a, 1);
        let mut h = P::double_root(&a);
        let mut expected = if a >= q(0, 1) { q(c, 1) } else { &a * &a + q(c, 1) };
        if let Some(b) = b {
            h = &h * &P::double_root(&q(b, 1));
            expected = q(c, 1);
        }
        let h = &h + &P::constant(q(c, 1));
        let g = &P::x() * &h;
        let ext = invert_extension(&g, &default_precision(&g)).unwrap();
        prop_assert_eq!(ext.t, expected);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), index in 0u64..1000, degree in 0usize..8) {
        let spec = SampleSpec {
            degree,
            distribution: Distribution::IntegerLattice { lo: 0, hi: 50, denominator: 3 },
            seed,
            count: 1,
        };
        let a: ParameterVector<Q> = sample_one(&spec, index);
        prop_assert_eq!(&a, &sample_one(&spec, index));
        prop_assert_eq!(a.len(), degree);
        prop_assert!(a.entries().iter().all(|t| *t >= q(0, 1) && *t <= q(50, 1)));
    }
}

#[test]
fn extension_of_x_times_h_is_min_of_h() {
    // (x - 1)^2: minimum 0 at x = 1 although h(0) = 1.
    let g = &P::x() * &P::from_i64s(&[1, -2, 1]);
    assert_eq!(
        invert_extension(&g, &default_precision(&g)).unwrap().t,
        q(0, 1)
    );
    // (x - 3)^2 + 5/2: minimum 5/2 at x = 3.
    let h = &P::double_root(&q(3, 1)) + &P::constant(q(5, 2));
    let g = &P::x() * &h;
    assert_eq!(
        invert_extension(&g, &default_precision(&g)).unwrap().t,
        q(5, 2)
    );
}
