//! Executable forms of the transform identities.
//!
//! * derivative rules (`∂_X`, `∂_XX`, `∂_T`, `∂_TT`) close in
//!   [`RationalImage`] and are checked symbolically;
//! * multiplication rules (`X·h`, `T·h`, ...) and the mixed rules
//!   (`X·∂_T h`, `T·∂_X h`) involve `∂/∂r` of the image and are checked on a
//!   panel of generic `(r, s)` points.

use crate::error::Result;
use crate::expr::{Axis, Complex, Expression};

use super::{double_ara, single_ara_t, single_ara_x, ImageExpr, RationalImage};

/// Multiplication of `h` by a monomial in the stretched coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftIdentity {
    MulX,
    MulT,
    MulX2,
    MulT2,
    MulXT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeIdentity {
    DX,
    DXX,
    DT,
    DTT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedIdentity {
    XDt,
    TDx,
}

const PANEL: [(f64, f64); 6] = [
    (2.0, 2.5),
    (2.7, 3.9),
    (3.3, 2.2),
    (4.6, 5.3),
    (5.9, 3.1),
    (7.2, 6.4),
];

/// Six generic real `(r, s)` points shifted past the given growth rates.
pub fn default_panel(orders: (f64, f64)) -> Vec<(Complex, Complex)> {
    let (gx, gt) = (orders.0.max(0.0), orders.1.max(0.0));
    PANEL
        .iter()
        .map(|&(r, s)| (Complex::new(r + gx, 0.0), Complex::new(s + gt, 0.0)))
        .collect()
}

fn residual(lhs: Complex, rhs: Complex) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(1.0)
}

/// Symbolic difference between both sides of a derivative rule; the zero
/// image when the identity holds.
pub fn check_derivative_identity(
    e: &Expression,
    which: DerivativeIdentity,
) -> Result<RationalImage> {
    let g = RationalImage::from(&double_ara(e));
    let boundary_t = |f: &Expression| -> Result<RationalImage> {
        Ok(single_ara_t(&f.at_x_zero())?.to_rational(Axis::T))
    };
    let boundary_x = |f: &Expression| -> Result<RationalImage> {
        Ok(single_ara_x(&f.at_t_zero())?.to_rational(Axis::X))
    };
    let (lhs, rhs) = match which {
        DerivativeIdentity::DX => {
            let lhs = double_ara(&e.differentiate(Axis::X));
            let rhs = g.sub(&boundary_t(e)?).times_var(Axis::X);
            (lhs, rhs)
        }
        DerivativeIdentity::DXX => {
            let lhs = double_ara(&e.differentiate(Axis::X).differentiate(Axis::X));
            // r²G − r²H(0) − r H_x(0)
            let r2 = g.sub(&boundary_t(e)?).times_var(Axis::X).times_var(Axis::X);
            let rhs = r2.sub(&boundary_t(&e.differentiate(Axis::X))?.times_var(Axis::X));
            (lhs, rhs)
        }
        DerivativeIdentity::DT => {
            let lhs = double_ara(&e.differentiate(Axis::T));
            let rhs = g.sub(&boundary_x(e)?).times_var(Axis::T);
            (lhs, rhs)
        }
        DerivativeIdentity::DTT => {
            let lhs = double_ara(&e.differentiate(Axis::T).differentiate(Axis::T));
            let s2 = g.sub(&boundary_x(e)?).times_var(Axis::T).times_var(Axis::T);
            let rhs = s2.sub(&boundary_x(&e.differentiate(Axis::T))?.times_var(Axis::T));
            (lhs, rhs)
        }
    };
    Ok(RationalImage::from(&lhs).sub(&rhs))
}

fn shift_multiplier(which: ShiftIdentity) -> Expression {
    match which {
        ShiftIdentity::MulX => Expression::xpow_n(1),
        ShiftIdentity::MulT => Expression::tpow_m(1),
        ShiftIdentity::MulX2 => Expression::xpow_n(2),
        ShiftIdentity::MulT2 => Expression::tpow_m(2),
        ShiftIdentity::MulXT => Expression::xpow_n(1).multiply(&Expression::tpow_m(1)),
    }
}

/// Largest relative residual of a multiplication rule on the default panel.
pub fn check_shift_identity(e: &Expression, which: ShiftIdentity) -> f64 {
    check_shift_identity_at(e, which, &default_panel(e.exponential_orders()))
}

pub fn check_shift_identity_at(
    e: &Expression,
    which: ShiftIdentity,
    points: &[(Complex, Complex)],
) -> f64 {
    let lhs_img = double_ara(&shift_multiplier(which).multiply(e));
    let g = double_ara(e);
    points
        .iter()
        .map(|&(r, s)| {
            let lhs = lhs_img.eval(r, s);
            let d = g.partials(r, s);
            let rhs = match which {
                // −r ∂_r (G/r) = −G_r + G/r
                ShiftIdentity::MulX => -d.dr + d.value / r,
                ShiftIdentity::MulT => -d.ds + d.value / s,
                ShiftIdentity::MulX2 => d.drr - d.dr * 2.0 / r + d.value * 2.0 / (r * r),
                ShiftIdentity::MulT2 => d.dss - d.ds * 2.0 / s + d.value * 2.0 / (s * s),
                ShiftIdentity::MulXT => d.drs - d.dr / s - d.ds / r + d.value / (r * s),
            };
            residual(lhs, rhs)
        })
        .fold(0.0, f64::max)
}

/// Largest relative residual of a mixed rule on the default panel.
pub fn check_mixed_identity(e: &Expression, which: MixedIdentity) -> Result<f64> {
    check_mixed_identity_at(e, which, &default_panel(e.exponential_orders()))
}

pub fn check_mixed_identity_at(
    e: &Expression,
    which: MixedIdentity,
    points: &[(Complex, Complex)],
) -> Result<f64> {
    let g: ImageExpr = double_ara(e);
    let (lhs_img, boundary) = match which {
        MixedIdentity::XDt => (
            double_ara(&Expression::xpow_n(1).multiply(&e.differentiate(Axis::T))),
            single_ara_x(&e.at_t_zero())?,
        ),
        MixedIdentity::TDx => (
            double_ara(&Expression::tpow_m(1).multiply(&e.differentiate(Axis::X))),
            single_ara_t(&e.at_x_zero())?,
        ),
    };
    Ok(points
        .iter()
        .map(|&(r, s)| {
            let lhs = lhs_img.eval(r, s);
            let d = g.partials(r, s);
            let rhs = match which {
                // −rs ∂_r(G/r) + rs d/dr(F/r),  F = single image of h(X, 0)
                MixedIdentity::XDt => {
                    let (f, df) = boundary.eval_with_derivative(r);
                    -r * s * (d.dr / r - d.value / (r * r)) + r * s * (df / r - f / (r * r))
                }
                // −rs ∂_s(G/s) + rs d/ds(H/s),  H = single image of h(0, T)
                MixedIdentity::TDx => {
                    let (h, dh) = boundary.eval_with_derivative(s);
                    -r * s * (d.ds / s - d.value / (s * s)) + r * s * (dh / s - h / (s * s))
                }
            };
            residual(lhs, rhs)
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex {
        Complex::new(v, 0.0)
    }

    fn all_derivative_rules() -> [DerivativeIdentity; 4] {
        [
            DerivativeIdentity::DX,
            DerivativeIdentity::DXX,
            DerivativeIdentity::DT,
            DerivativeIdentity::DTT,
        ]
    }

    #[test]
    fn derivative_rules_cancel_symbolically() {
        let e = Expression::sin_x(1.0).multiply(&Expression::exp_xt(0.0, -1.0));
        assert!(check_derivative_identity(&e, DerivativeIdentity::DX)
            .unwrap()
            .is_zero());

        for which in all_derivative_rules() {
            assert!(check_derivative_identity(&Expression::constant(1.0), which)
                .unwrap()
                .is_zero());
        }

        let e = Expression::xpow_n(2).multiply(&Expression::exp_xt(0.0, 1.0));
        let res = check_derivative_identity(&e, DerivativeIdentity::DXX).unwrap();
        assert!(res.is_zero(), "{res}");
    }

    #[test]
    fn derivative_rules_on_mixed_expression() {
        let e = Expression::xpow_n(3)
            .multiply(&Expression::tpow_m(2))
            .multiply(&Expression::exp_xt(0.5, -1.5))
            .add(&Expression::cos_x(2.0).multiply(&Expression::sin_t(1.0)))
            .add(&Expression::constant(-4.0));
        for which in all_derivative_rules() {
            let res = check_derivative_identity(&e, which).unwrap();
            assert!(res.is_zero(), "{which:?}: {res}");
        }
    }

    #[test]
    fn wrong_boundary_is_detected() {
        // dropping the boundary image must leave a non-zero residual
        let e = Expression::exp_xt(1.0, 0.0);
        let lhs = RationalImage::from(&double_ara(&e.differentiate(Axis::X)));
        let naive = RationalImage::from(&double_ara(&e)).times_var(Axis::X);
        assert!(!lhs.sub(&naive).is_zero());
    }

    #[test]
    fn shift_rules_on_panels() {
        let e = Expression::exp_xt(1.3, 0.0);
        let points: Vec<_> = [2.0, 3.0, 5.0]
            .iter()
            .flat_map(|&r| [2.0, 4.0].map(move |s| (c(r), c(s))))
            .collect();
        assert!(check_shift_identity_at(&e, ShiftIdentity::MulX, &points) < 1e-12);

        // X·1 has image 1/r
        let one = Expression::constant(1.0);
        let img = double_ara(&Expression::xpow_n(1));
        for &(r, s) in &points {
            assert!((img.eval(r, s) - 1.0 / r).norm() < 1e-15);
        }
        assert!(check_shift_identity_at(&one, ShiftIdentity::MulX, &points) < 1e-15);

        assert!(check_shift_identity(&Expression::sin_t(1.0), ShiftIdentity::MulT2) < 1e-12);
    }

    #[test]
    fn all_shift_rules() {
        let e = Expression::xpow_n(1)
            .multiply(&Expression::exp_xt(-0.5, 1.0))
            .add(&Expression::sin_x(1.0).multiply(&Expression::cos_t(2.0)));
        for which in [
            ShiftIdentity::MulX,
            ShiftIdentity::MulT,
            ShiftIdentity::MulX2,
            ShiftIdentity::MulT2,
            ShiftIdentity::MulXT,
        ] {
            let res = check_shift_identity(&e, which);
            assert!(res < 1e-12, "{which:?}: {res}");
        }
    }

    #[test]
    fn mixed_rules() {
        let e = Expression::xpow_n(2).multiply(&Expression::exp_xt(0.0, 1.0));
        assert!(check_mixed_identity(&e, MixedIdentity::XDt).unwrap() < 1e-12);
        let one = Expression::constant(1.0);
        assert!(check_mixed_identity(&one, MixedIdentity::XDt).unwrap() < 1e-15);
        assert!(check_mixed_identity(&one, MixedIdentity::TDx).unwrap() < 1e-15);
        let e = Expression::sin_x(1.0).multiply(&Expression::sin_t(1.0));
        assert!(check_mixed_identity(&e, MixedIdentity::TDx).unwrap() < 1e-12);
        assert!(check_mixed_identity(&e, MixedIdentity::XDt).unwrap() < 1e-12);
    }

    #[test]
    fn shift_rule_with_wrong_sign_fails() {
        // G_r alone (without the G/r term) is not the image of X·h
        let e = Expression::exp_xt(1.0, 0.0);
        let g = double_ara(&e);
        let lhs = double_ara(&Expression::xpow_n(1).multiply(&e));
        let (r, s) = (c(3.0), c(2.0));
        assert!((lhs.eval(r, s) + g.partials(r, s).dr).norm() > 1e-3);
    }
}
