//! Fractional orders p = q = 0.9: the N = 6 partial sum of Example 1 against
//! the closed form, bounded by the alternating-series remainder T⁷/7!.

use cdara::eval::{exact_oracle, Example};
use cdara::{solve, FracParams, ProblemSpec};

fn grid() -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for i in 0..16 {
        for j in 1..=10 {
            pts.push((0.5 + 1.5 * i as f64 / 15.0, 0.05 * j as f64));
        }
    }
    pts
}

#[test]
fn error_within_series_remainder() {
    let params = FracParams::new(0.9, 0.9).unwrap();
    let (u, v) = solve(&ProblemSpec::example1(), 6)
        .unwrap()
        .partial_sum(6)
        .unwrap();
    let exact = exact_oracle(Example::One, params);
    for (x, t) in grid() {
        let (bx, bt) = params.to_stretched(x, t).unwrap();
        assert!(bt <= 0.6);
        let bound = bt.powi(7) / 5040.0 * bx.sin().abs();
        let (ue, ve) = exact(x, t).unwrap();
        let eu = (u.evaluate(bx, bt).unwrap() - ue).abs();
        let ev = (v.evaluate(bx, bt).unwrap() - ve).abs();
        assert!(
            eu <= bound * (1.0 + 1e-9) + 1e-15,
            "({x}, {t}): {eu:e} > {bound:e}"
        );
        assert!(ev <= bound * (1.0 + 1e-9) + 1e-15);
    }
}

#[test]
fn fixed_bound_holds_where_remainder_allows() {
    // 2e-7 is only reachable while T⁷/7! stays below it (T ≲ 0.37)
    let params = FracParams::new(0.9, 0.9).unwrap();
    let (u, _) = solve(&ProblemSpec::example1(), 6)
        .unwrap()
        .partial_sum(6)
        .unwrap();
    let mut checked = 0;
    for (x, t) in grid() {
        let (bx, bt) = params.to_stretched(x, t).unwrap();
        if bt.powi(7) / 5040.0 > 2e-7 {
            continue;
        }
        checked += 1;
        assert!((u.evaluate(bx, bt).unwrap() - (-bt).exp() * bx.sin()).abs() <= 2e-7);
    }
    assert!(checked > 0);
}

#[test]
fn order_one_matches_integer_table() {
    let params = FracParams::integer();
    let (u, _) = solve(&ProblemSpec::example1(), 6)
        .unwrap()
        .partial_sum(6)
        .unwrap();
    let (bx, bt) = params.to_stretched(1.0, 0.1).unwrap();
    assert_eq!((bx, bt), (1.0, 0.1));
    let err = (u.evaluate(bx, bt).unwrap() - (-0.1_f64).exp() * 1.0_f64.sin()).abs();
    assert!((err - 1.64894e-11).abs() < 1e-3 * 1.64894e-11);
}
