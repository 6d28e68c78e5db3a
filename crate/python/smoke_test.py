"""Smoke test for the cdara_py extension module.

Build and copy the module next to this script first:

    cargo build --release -p cdara-python --features extension-module
    cp target/release/libcdara_py.so python/cdara_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import cdara_py as cd  # noqa: E402


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok   {msg}")


def main():
    sx = cd.Expression.sin_x(1.0)
    check(sx.is_real(), "sin X is real")
    check(abs(sx.evaluate(0.7, 0.0) - math.sin(0.7)) < 1e-14, "sin X evaluates")
    check(sx.differentiate("X") == cd.Expression.cos_x(1.0), "d/dX sin X = cos X")
    prod = sx * cd.Expression.cos_x(1.0)
    check(abs(prod.evaluate(1.1, 0.0) - 0.5 * math.sin(2.2)) < 1e-12, "sin X cos X = sin 2X / 2")
    back = cd.Expression.exp_xt(0.0, 2.0).integrate_t().differentiate("T")
    check(back.approx_eq(cd.Expression.exp_xt(0.0, 2.0), 1e-12), "d/dT of the T-antiderivative")

    e = cd.Expression.exp_xt(1.0, 1.0)
    check(abs(e.double_ara(3, 3) - 2.25) < 1e-15, "image of e^(X+T) at (3, 3)")
    check(abs(e.numeric_double_ara(3, 3, p=0.8, q=0.5) - 2.25) < 1e-8, "quadrature agrees for p, q < 1")

    sol = cd.solve(cd.ProblemSpec.example1(), 3)
    check(len(sol.u) == 4 and sol.terminated_at is None, "example 1 solves to order 3")
    u3 = cd.Expression.sin_x(1.0) * cd.Expression.tpow(3)
    check(sol.u[3] == u3.scale(-1.0 / 6.0), "u3 = -T^3/6 sin X")

    sol2 = cd.solve(cd.ProblemSpec.example2())
    check(sol2.terminated_at == 2, "example 2 terminates at 2")
    u, _ = sol2.partial_sum(6)
    check(u == cd.Expression.xpow(2) * cd.Expression.exp_xt(0.0, 1.0), "example 2 sums to X^2 e^T")

    rows = cd.error_table(1)
    check(len(rows) == 9 and abs(rows[0][3] / 1.64894e-11 - 1) < 5e-3, "error table row t = 0.1")
    check(abs(cd.exact_solution(2, 1.0, 0.1)[0] - 1.10517) < 5e-6, "exact solution of example 2")

    with tempfile.TemporaryDirectory() as tmp:
        report = os.path.join(tmp, "report.txt")
        check(cd.verify_transforms(report), "transform table passes")
        csv_path = os.path.join(tmp, "surface.csv")
        cd.write_surface(1, [(0.8, 0.8), (1.0, 1.0)], csv_path, x_range=(0.1, 3.0, 5))
        with open(csv_path) as fh:
            lines = fh.read().splitlines()
        check(len(lines) == 11 and lines[0].startswith("x,t,p,q"), "surface CSV")

    try:
        cd.Expression.xpow(0).divide_by_x()
    except ValueError:
        check(True, "non-exact division raises ValueError")
    else:
        raise SystemExit("FAIL: divide_by_x should raise")

    print("smoke test passed")


if __name__ == "__main__":
    main()
