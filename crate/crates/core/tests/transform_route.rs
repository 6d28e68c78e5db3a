//! The regular step computed through the transform domain: image of the
//! integrand, division by `s`, and inversion by partial fractions in `s`.

use cdara::adomian::{adomian_a, adomian_c};
use cdara::ara::{double_ara, ImageExpr};
use cdara::solver::{init_components, step_regular};
use cdara::{Axis, Complex, ComponentList, Expression, ProblemSpec};

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Inverse single transform of `1/(s−ν)^{k}` as a function of `T`, using
/// `s/(s−ν)^{j+1} ↔ T^j e^{νT}/j!` and the constant `1 ↔ 1`.
fn inverse_reciprocal_power(nu: Complex, k: u32, t: f64) -> Complex {
    if k == 0 {
        return Complex::new(1.0, 0.0);
    }
    if nu.norm() == 0.0 {
        // 1/s^k = s/s^{k+1} ↔ T^k/k!
        return Complex::new(t.powi(k as i32) / factorial(k), 0.0);
    }
    // 1/(s−ν)^k = (1/ν)·[s/(s−ν)^k − 1/(s−ν)^{k−1}]
    let direct = (nu * t).exp() * t.powi(k as i32 - 1) / factorial(k - 1);
    (direct - inverse_reciprocal_power(nu, k - 1, t)) / nu
}

/// Value at `(X, T)` of the inverse transform of `G(r, s)/s`.
fn invert_over_s(g: &ImageExpr, x: f64, t: f64) -> Complex {
    g.terms()
        .iter()
        .map(|term| {
            let n = term.xfact;
            let m = term.tfact;
            // c·n!·m!·r/(r−μ)^{n+1} · s/(s−ν)^{m+1} · (1/s)
            let x_part = (term.xpole * x).exp() * x.powi(n as i32);
            let t_part = inverse_reciprocal_power(term.tpole, m + 1, t) * factorial(m);
            term.coeff * x_part * t_part
        })
        .sum()
}

fn integrand(spec: &ProblemSpec, u: &ComponentList, n: usize) -> Expression {
    let a = adomian_a(u, n).unwrap();
    let c = adomian_c(u, u, n).unwrap();
    u[n].differentiate(Axis::X)
        .differentiate(Axis::X)
        .sub(&a.scale(spec.lambda))
        .sub(&c.differentiate(Axis::X).scale(spec.alpha))
}

#[test]
fn transform_route_matches_direct_steps() {
    let spec = ProblemSpec::example1();
    let (u0, v0) = init_components(&spec);
    let mut u = ComponentList::new(u0);
    let mut v = ComponentList::new(v0);
    for n in 0..=1 {
        let (direct, dv) = step_regular(&spec, &u, &v, n).unwrap();
        let image = double_ara(&integrand(&spec, &u, n));
        for &(x, t) in &[(0.3, 0.1), (1.0, 0.3), (1.7, 0.45), (2.5, 0.8)] {
            let routed = invert_over_s(&image, x, t);
            let want = direct.eval_complex(x, t);
            assert!(
                (routed - want).norm() < 1e-12,
                "n = {n} at ({x}, {t}): {routed} vs {want}"
            );
        }
        u.push(direct);
        v.push(dv);
    }
}

#[test]
fn partial_fraction_inverse_is_sound() {
    // 1/(s−1)² = (1/s)·s/(s−1)² ↔ ∫₀^T τ e^τ dτ = T e^T − e^T + 1
    let nu = Complex::new(1.0, 0.0);
    for t in [0.1, 0.5, 1.3] {
        let got = inverse_reciprocal_power(nu, 2, t);
        let want = t * t.exp() - t.exp() + 1.0;
        assert!((got.re - want).abs() < 1e-13 && got.im.abs() < 1e-15);
    }
}
