"""Acceptance gate: ten end-to-end criteria, one pass/fail line each.

Run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to see the
PASS/FAIL lines inline).
"""

import math
import random
import time
from fractions import Fraction

import pytest

from pslab import cli, diophantine as dio, exponents as ex, expsum, wtrick
from pslab.ps_core import PSExponent, pnt_ratio

C2120 = PSExponent(21, 20)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_exponent_table():
    ok = (ex.c_bounds(2) == (Fraction(7, 75), Fraction(1, 54), Fraction(1, 2))
          and ex.c_bounds(3) == (Fraction(3, 77), Fraction(1, 495),
                                 Fraction(1, 15)))
    for s in range(5, 40):
        ok = ok and ex.c_of(2, s) == min(Fraction(1, 54), Fraction(1, 2 * s - 1))
    for s in range(9, 40):
        ok = ok and ex.c_of(3, s) == min(Fraction(1, 495), Fraction(3, 8 * s - 3))
    _report(1, ok, "printed radii and c(d,s) displays reproduced exactly "
                   "for d in {2,3}")


def test_criterion_02_radius_consistency():
    ok = True
    for d in range(2, 51):
        c1, c2, _ = ex.c_bounds(d)
        ok = ok and c2 <= c1 <= Fraction(391, 2426)
        s_bar = ex.degree_params(d).s_bar
        for s in range(s_bar, 3 * s_bar + 1):
            # c_of internally asserts display == min-formula equality
            ok = ok and ex.c_of(d, s) > 0
    _report(2, ok, "cased display equals min-formula and c2 <= c1 <= "
                   "391/2426 for all 2 <= d <= 50")


def test_criterion_03_sigma_totient_identity():
    cases = [(2, 32), (3, 108), (2, 480)]
    rng = random.Random(2026)
    while len(cases) < 23:
        cases.append((rng.randint(2, 4), rng.randint(2, 10 ** 4)))
    ok = True
    for d, W in cases:
        counts = wtrick.power_counts(W, d)
        units = wtrick.dth_power_units(W, d)
        total = sum(counts[(-b) % W]
                    for b in range(1, W + 1) if (-b) % W in units)
        ok = ok and total == wtrick.totient(W)
    _report(3, ok, "sum of root counts over admissible residues equals "
                   f"phi(W) on {len(cases)} moduli")


def test_criterion_04_quadrature_exactness():
    ok = True
    worst = 0.0
    for d, S, x, M in ((2, 4, 30, 4096), (2, 4, 100, 65536),
                       (3, 4, 20, 32768)):
        quad, count = expsum.quadrature_vs_count(x, d, S, M)
        rel = abs(quad - count) / count
        worst = max(worst, rel)
        ok = ok and rel < 1e-6
    _report(4, ok, f"grid quadrature equals exact tuple count, worst "
                   f"relative error {worst:.2e}")


def test_criterion_05_mean_value_trend():
    ratios = []
    for x in (100, 1000, 10 ** 4):
        count = expsum.mean_value_count(x, 2, 4)
        ratios.append(count / (x ** 2 * math.log(x)))
    spread = max(ratios) / min(ratios)
    _report(5, spread <= 3, f"count(x)/(x^2 log x) band spread {spread:.3f} "
                            "<= 3 across three decades")


def test_criterion_06_oracle_equivalence():
    rng = random.Random(1234)
    ok = True
    for _ in range(20):
        s = rng.randint(3, 5)
        d = rng.randint(2, 3)
        while True:
            coeffs = [rng.choice([-4, -3, -2, -1, 1, 2, 3, 4])
                      for _ in range(s - 1)]
            if sum(coeffs) != 0:
                coeffs.append(-sum(coeffs))
                break
        sys_ = dio.validate_system(coeffs, d)
        size = rng.randint(1, 30 if s <= 4 else 12)
        A = rng.sample(range(1, 60), size)
        mitm = dio.enumerate_solutions(A, sys_)
        naive = dio.enumerate_solutions_naive(A, sys_)
        ok = ok and (mitm.total, mitm.trivial) == (naive.total, naive.trivial)
    _report(6, ok, "meet-in-the-middle counts equal naive enumeration on "
                   "20 random zero-sum systems")


def test_criterion_07_pnt_trend():
    ratios = [pnt_ratio(x, C2120).ratio for x in (10 ** 4, 10 ** 5, 10 ** 6)]
    devs = [abs(r - 1) for r in ratios]
    ok = all(b <= 1.2 * a for a, b in zip(devs, devs[1:]))
    ok = ok and 0.7 <= ratios[-1] <= 1.4
    _report(7, ok, f"counting ratios {[round(r, 4) for r in ratios]} "
                   "converge toward 1")


def test_criterion_08_sawtooth_approximant():
    stats = [expsum.psi_error_stats(expsum.vaaler_approx(H),
                                    grid_size=100_000)
             for H in (8, 16, 32, 64)]
    ok = all(s.bound_holds for s in stats)
    for a, b in zip(stats, stats[1:]):
        ok = ok and 2 / 1.5 <= a.mean_error / b.mean_error <= 2 * 1.5
    _report(8, ok, "pointwise majorant holds on the 1e5 grid and mean "
                   "error follows the 1/H law within factor 1.5")


def test_criterion_09_dirichlet_guarantee():
    rng = random.Random(77)
    ok = True
    for _ in range(1000):
        alpha = rng.random()
        for Q in (10, 100, 1000):
            a, q = expsum.dirichlet_approx(alpha, Q)
            ok = ok and 1 <= q <= Q and abs(alpha - a / q) <= 1 / (q * Q) + 1e-15
    _report(9, ok, "1000 random points: q <= Q and |alpha - a/q| <= 1/(qQ) "
                   "for Q in {10, 100, 1000}")


def test_criterion_10_pipeline_sanity():
    start = time.time()
    row4, _ = cli.pipeline_cell(10 ** 4, 2, C2120, 32, run_avoider=False)
    row5, _ = cli.pipeline_cell(10 ** 5, 2, C2120, 32, run_avoider=True)
    decay4, decay5 = float(row4["decay"]), float(row5["decay"])
    ok = math.isfinite(decay5) and decay5 <= decay4 * 1.3
    ratio4 = float(row4["ktrivial_ratio"])
    ratio5 = float(row5["ktrivial_ratio"])
    ok = ok and ratio5 < ratio4
    ok = ok and int(row5["avoider_nontrivial"]) == 0
    elapsed = time.time() - start
    _report(10, ok, f"decay {decay4:.3f}->{decay5:.3f}, structured ratio "
                    f"{ratio4:.3g}->{ratio5:.3g}, avoider verified clean "
                    f"({elapsed:.0f}s)")
    assert elapsed < 300
