//! Data series for external plotting.

use std::fmt::Write;

use crate::parametrize::{phi_big, ParameterVector};
use crate::poly::Polynomial;
use crate::scalar::{Rational, Scalar};

/// Which boundary piece of the degree-2 cone a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    /// `(t0^2, -2 t0)`: the images `x^2 - 2 t0 x + t0^2` with a double root at `t0`.
    Curve,
    /// `(0, a1)` with `a1 >= 0`: the polynomials `x^2 + a1 x`.
    Ray,
}

impl Piece {
    pub fn name(self) -> &'static str {
        match self {
            Piece::Curve => "curve",
            Piece::Ray => "ray",
        }
    }
}

/// A point `(a0, a1)` on the boundary of `{x^2 + a1 x + a0 copositive}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionRow {
    pub piece: Piece,
    pub a0: Rational,
    pub a1: Rational,
}

/// Boundary of the degree-2 cone in `(a0, a1)` coordinates.
///
/// The curve is traced as `phi_big(t0, 0)` for `t0 = k t_max / steps`,
/// `k = 0..=steps`; the ray as `(0, 2 k t_max / steps)` over the same `k`.
pub fn c2_region(t_max: &Rational, steps: usize) -> Vec<RegionRow> {
    let steps = steps.max(1);
    let grid = |k: usize| t_max.clone() * Rational::from_ratio(k as i64, steps as i64);
    let mut rows = Vec::with_capacity(2 * (steps + 1));
    for k in 0..=steps {
        let t = ParameterVector::new(vec![grid(k), Rational::from_i64(0)])
            .expect("grid is nonnegative");
        let f = phi_big(&t);
        rows.push(RegionRow {
            piece: Piece::Curve,
            a0: f.coeff(0),
            a1: f.coeff(1),
        });
    }
    for k in 0..=steps {
        rows.push(RegionRow {
            piece: Piece::Ray,
            a0: Rational::from_i64(0),
            a1: grid(k) * Rational::from_i64(2),
        });
    }
    rows
}

/// CSV with header `piece,a0,a1`; values are exact (`n` or `n/d`).
pub fn c2_region_csv(rows: &[RegionRow]) -> String {
    let mut out = String::from("piece,a0,a1\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.piece.name(), r.a0, r.a1).expect("string write");
    }
    out
}

/// `samples` evenly spaced points `(x, f(x))` over `[lo, hi]`.
pub fn sample_polynomial<S: Scalar>(
    f: &Polynomial<S>,
    lo: &S,
    hi: &S,
    samples: usize,
) -> Vec<(S, S)> {
    match samples {
        0 => Vec::new(),
        1 => vec![(lo.clone(), f.evaluate(lo))],
        n => {
            let step = (hi.clone() - lo.clone()) / S::from_i64(n as i64 - 1);
            (0..n)
                .map(|i| {
                    let x = lo.clone() + step.clone() * S::from_i64(i as i64);
                    let y = f.evaluate(&x);
                    (x, y)
                })
                .collect()
        }
    }
}

/// CSV with header `x,y`.
pub fn samples_csv<S: Scalar>(points: &[(S, S)]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points {
        writeln!(out, "{x},{y}").expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn region_grid_example() {
        let rows = c2_region(&q(2), 2);
        let curve: Vec<_> = rows
            .iter()
            .filter(|r| r.piece == Piece::Curve)
            .map(|r| (r.a0.clone(), r.a1.clone()))
            .collect();
        assert_eq!(curve, vec![(q(0), q(0)), (q(1), q(-2)), (q(4), q(-4))]);
        let ray: Vec<_> = rows
            .iter()
            .filter(|r| r.piece == Piece::Ray)
            .map(|r| (r.a0.clone(), r.a1.clone()))
            .collect();
        assert_eq!(ray, vec![(q(0), q(0)), (q(0), q(2)), (q(0), q(4))]);
        assert!(c2_region_csv(&rows).starts_with("piece,a0,a1\ncurve,0,0\ncurve,1,-2\n"));
    }

    #[test]
    fn polynomial_samples() {
        let f = Polynomial::<Rational>::from_i64s(&[1, 0, 1]);
        let pts = sample_polynomial(&f, &q(0), &q(2), 3);
        assert_eq!(pts, vec![(q(0), q(1)), (q(1), q(2)), (q(2), q(5))]);
        assert_eq!(samples_csv(&pts), "x,y\n0,1\n1,2\n2,5\n");
        let zero = Polynomial::<Rational>::zero();
        assert!(sample_polynomial(&zero, &q(0), &q(1), 4)
            .iter()
            .all(|(_, y)| *y == q(0)));
        assert_eq!(sample_polynomial(&f, &q(3), &q(5), 1), vec![(q(3), q(10))]);
    }
}
