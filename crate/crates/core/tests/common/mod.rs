#![allow(dead_code)]

use cdara::{Complex, Expression, MonomialTerm};
use proptest::prelude::*;

/// Exponent components on a 0.25 grid in [−2, 2]: either zero or at least
/// 0.25 away from it, so repeated integration by parts stays well conditioned.
pub fn exponent() -> impl Strategy<Value = Complex> {
    (-8i32..=8, -8i32..=8).prop_map(|(a, b)| Complex::new(a as f64 * 0.25, b as f64 * 0.25))
}

pub fn coefficient() -> impl Strategy<Value = Complex> {
    (-3.0..3.0_f64, -3.0..3.0_f64)
        .prop_filter("non-negligible", |(a, b)| a.abs() + b.abs() > 1e-3)
        .prop_map(|(a, b)| Complex::new(a, b))
}

pub fn term(max_pow: u32) -> impl Strategy<Value = MonomialTerm> {
    (
        coefficient(),
        0..=max_pow,
        0..=max_pow,
        exponent(),
        exponent(),
    )
        .prop_map(|(c, n, m, mu, nu)| MonomialTerm::new(c, n, m, mu, nu))
}

/// Arbitrary complex expression with up to five terms.
pub fn expression(max_pow: u32) -> impl Strategy<Value = Expression> {
    prop::collection::vec(term(max_pow), 1..=5)
        .prop_map(|terms| Expression::canonicalize(terms).unwrap())
}

fn conjugate(t: &MonomialTerm) -> MonomialTerm {
    MonomialTerm::new(t.coeff.conj(), t.xpow, t.tpow, t.xexp.conj(), t.texp.conj())
}

/// Real expression: every term comes with its conjugate.
pub fn real_expression(max_pow: u32) -> impl Strategy<Value = Expression> {
    prop::collection::vec(term(max_pow), 1..=3).prop_map(|terms| {
        let all: Vec<_> = terms.iter().flat_map(|t| [*t, conjugate(t)]).collect();
        Expression::canonicalize(all).unwrap()
    })
}

/// Sum of absolute term values; the natural scale for rounding error.
pub fn magnitude(e: &Expression, x: f64, t: f64) -> f64 {
    e.terms().iter().map(|term| term.eval(x, t).norm()).sum()
}

pub fn panel_points(e: &Expression) -> Vec<(Complex, Complex)> {
    cdara::ara::default_panel(e.exponential_orders())
}
