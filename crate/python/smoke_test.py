#!/usr/bin/env python3
"""Smoke test for the largevar_py extension module.

Build and run with:

    cargo build --release -p largevar-py
    cp target/release/liblargevar_py.so target/release/largevar_py.so
    PYTHONPATH=target/release python3 python/smoke_test.py
"""

import math
import sys

import largevar_py as lv


def check(cond, msg):
    if not cond:
        print(f"FAIL: {msg}")
        sys.exit(1)
    print(f"ok: {msg}")


def main():
    # Panel construction and the null test.
    panel = lv.simulate_null(20, 120, seed=1)
    check(panel.n == 20 and panel.t == 120, "simulated panel has shape (20, 120)")

    verdict = lv.run_test(panel, r=1, alpha=0.95)
    check(len(verdict["spectrum"]) == 20, "spectrum has N eigenvalues")
    check(all(0.0 <= x <= 1.0 for x in verdict["spectrum"]), "spectrum in [0,1]")
    check(isinstance(verdict["reject"], bool), "verdict carries a decision")
    check(verdict["c2"] < 0.0, "c2 is negative")

    # Hand-built panel via the Panel class.
    rows = [[float(t + 1) for t in range(10)], [math.sin(t) for t in range(10)]]
    p2 = lv.Panel([0.0, 0.0], rows)
    spectrum = lv.run_wn_test(p2)
    check(len(spectrum) == 2, "white-noise variant returns N eigenvalues")

    # Quantile tables.
    table = lv.QuantileTable.builtin()
    cv = table.lookup(1, 0.95)
    check(abs(cv - 0.97) < 0.05, f"builtin critical value {cv:.3f} near 0.97")
    small = lv.QuantileTable.build([1], [0.5], reps=200, model_size=100, seed=3)
    check(-3.0 < small.lookup(1, 0.5) < 0.5, "small rebuilt table is sane")
    check(any("noisy" in w for w in small.warnings), "low-rep table warns")

    # Scaling constants.
    c = lv.scaling_constants(100, 500, simplified="on")
    check(abs(c["lambda_plus"] - 0.7402530733520421) < 1e-12, "lambda_plus frozen value")
    check(abs(c["c1"] - (-1.3480474810344622)) < 1e-12, "c1 frozen value")

    # Random-matrix samplers.
    a = lv.airy1_sample(3, 2000, seed=5)
    check(a[0] > a[1] > a[2], "Airy points are ordered")
    eigs = lv.sample_jacobi_cc(10, 5.0, 15.0, beta=1, seed=6)
    check(len(eigs) == 10 and all(0.0 <= x <= 1.0 for x in eigs), "Jacobi cc draw in [0,1]")
    corner = lv.sample_jacobi_sum_corner(5, 20, beta=1, seed=7)
    check(len(corner) == 5, "sum-corner draw has N eigenvalues")
    var0 = lv.sample_jacobi_var0_corner(5, 20, beta=1, seed=8)
    check(all(0.0 <= x <= 1.0 for x in var0), "var0-corner draw in [0,1]")

    # Wachter distribution.
    lo, hi = lv.wachter_support(2.0, 4.0)
    check(0.0 < lo < hi < 1.0, "Wachter support inside (0,1)")
    mid = 0.5 * (lo + hi)
    (pdf_mid,) = lv.wachter_pdf(2.0, 4.0, [mid])
    check(pdf_mid > 0.0, "Wachter density positive inside the support")
    cdfs = lv.wachter_cdf(2.0, 4.0, [lo, mid, hi])
    check(cdfs[0] == 0.0 and abs(cdfs[2] - 1.0) < 1e-6, "Wachter CDF endpoints")
    check(cdfs[0] < cdfs[1] < cdfs[2], "Wachter CDF increasing")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
