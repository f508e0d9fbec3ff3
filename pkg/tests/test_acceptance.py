"""Acceptance gate: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the summary is printed at the
end of the session) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import conftest
from qswalk.analytic import (
    asymptotic_distribution,
    line_distribution,
    line_distribution_series,
    moment_leading_coefficient,
    mu2_closed,
    segment_distribution,
    series_coefficient_A,
    series_coefficient_B,
)
from qswalk.cli import main as cli_main
from qswalk.evolution import (
    build_generator,
    check_density_matrix,
    check_majorization,
    evolve,
    evolve_grid,
    light_cone_half_width,
    pure_state,
    purity,
)
from qswalk.lattice import build_dissipator, build_global_dissipator, build_segment
from qswalk.moments import (
    central_moment,
    default_window,
    fit_alpha,
    line_populations,
    running_exponent,
    simulate_moment_series,
)


def record(number, ok, detail):
    tag = "PASS" if ok else "FAIL"
    conftest.ACCEPTANCE_RESULTS.append((number, f"[{tag}] criterion {number}: {detail}"))
    return ok


def test_criterion_1_oracle_triangle():
    start = time.perf_counter()
    worst = 0.0
    times = [0.5, 2.0, 10.0]
    for n in range(2, 13):
        adj = build_segment(n)
        diss = build_global_dissipator(adj)
        for l in sorted({1, math.ceil(n / 2)}):
            rho0 = pure_state(n, l - 1)
            for omega in (0.0, 0.3, 0.7, 1.0):
                states = evolve_grid(build_generator(adj, diss, omega), rho0, times)
                for t, rho in zip(times, states):
                    err = np.max(np.abs(np.diag(rho).real - segment_distribution(n, l, omega, t)))
                    worst = max(worst, float(err))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 60
    record(1, ok, f"expm vs closed form on segments n=2..12, max error {worst:.2e} (tol 1e-9), {elapsed:.1f}s")
    assert ok


def test_criterion_2_long_time_limit():
    cases = [(7, 4), (4, 1)]
    worst = 0.0
    for n, l in cases:
        adj = build_segment(n)
        gen = build_generator(adj, build_global_dissipator(adj), 0.5)
        p = np.diag(evolve(gen, pure_state(n, l - 1), 300.0)).real
        worst = max(worst, float(np.max(np.abs(p - asymptotic_distribution(n, l)))))
    exact_ok = asymptotic_distribution(7, 4, exact=True) == [Fraction(1, 8)] * 3 + [Fraction(2, 8)] + [Fraction(1, 8)] * 3
    exact_ok &= asymptotic_distribution(4, 1, exact=True) == [Fraction(3, 10), Fraction(1, 5), Fraction(1, 5), Fraction(3, 10)]
    ok = worst <= 1e-6 and exact_ok
    record(2, ok, f"t=300 populations vs long-time limit, max error {worst:.2e} (tol 1e-6)")
    assert ok


def test_criterion_3_second_moment_exact():
    times = np.linspace(0.0, 20.0, 41)
    w = light_cone_half_width(times[-1])
    worst = 0.0
    for omega in (0.3, 1.0):
        # full generator, guard checked inside
        x, probs = line_populations(omega, times, half_width=w, method="sparse")
        for t, p in zip(times, probs):
            worst = max(worst, abs(central_moment(p, 2, x) - mu2_closed(omega, t)))
    ok = worst <= 1e-6
    record(3, ok, f"truncated line half-width {w}, mu2 vs 2(omega-1)^2 t^2 + omega t/2, max error {worst:.2e} (tol 1e-6)")
    assert ok


def test_criterion_4_scaling_exponents():
    times = np.arange(1.0, 61.0)
    window = default_window(times)
    parts, ok = [], True
    for omega in (0.1, 0.5, 0.9, 1.0):
        alpha = fit_alpha(simulate_moment_series(omega, times, method="sparse"), window).alpha
        good = (0.98 <= alpha <= 1.02) if omega == 1.0 else alpha >= 1.95
        ok &= good
        parts.append(f"global omega={omega:g} alpha={alpha:.4f}{'' if good else ' (!)'}")
    local = simulate_moment_series(0.5, times, dissipator="local")
    alpha_local = fit_alpha(local, window).alpha
    sel = (times >= window[0]) & (times <= window[1])
    run = running_exponent(local)[sel]
    decreasing = bool(np.all(np.diff(run) < 0))
    good = alpha_local < 1.5 and decreasing
    ok &= good
    parts.append(f"local omega=0.5 alpha={alpha_local:.4f} running exponent decreasing={decreasing}{'' if good else ' (!)'}")
    record(4, ok, f"window [{window[0]:g}, {window[1]:g}]: " + "; ".join(parts))
    assert ok, "; ".join(parts)


def test_criterion_5_series_consistency():
    b_equals_a = all(
        series_coefficient_B(n, k, 1, exact=True) == series_coefficient_A(n, k, exact=True)
        for n in range(11)
        for k in range(-n - 1, n + 2)
    )
    # 8^n A_{n,k} is an integer, so the sums are checked in integers
    sums_ok = True
    for n in range(11):
        scaled = [series_coefficient_A(n, k, exact=True) * 8**n for k in range(-n, n + 1)]
        sums_ok &= all(v.denominator == 1 for v in scaled)
        sums_ok &= sum(int(v) for v in scaled) == (1 if n == 0 else 0)
    worst = 0.0
    for omega in (0.3, 1.0):
        for t in np.linspace(0.0, 2.0, 11):
            for k in range(-6, 7):
                worst = max(worst, abs(line_distribution_series(k, omega, t) - line_distribution(k, omega, t)))
    ok = b_equals_a and sums_ok and worst <= 1e-7
    record(5, ok, f"B(omega=1)=A exact: {b_equals_a}; sum_k A = delta exact: {sums_ok}; series vs quadrature max error {worst:.2e} (tol 1e-7)")
    assert ok


def test_criterion_6_purity_monotone():
    n, l, t = 20, 10, 5.0
    adj = build_segment(n)
    diss = build_global_dissipator(adj)
    omegas = np.linspace(0.0, 1.0, 11)
    states = [evolve(build_generator(adj, diss, w), pure_state(n, l - 1), t) for w in omegas]
    pur = [purity(r) for r in states]
    drops = np.diff(pur)
    monotone = bool(np.all(drops <= 1e-10))
    majorized = all(check_majorization(states[j], states[i]) for i in range(11) for j in range(i + 1, 11))
    ok = monotone and majorized
    record(6, ok, f"n=20 t=5 purity {pur[0]:.4f} -> {pur[-1]:.4f}, non-increasing: {monotone}, pairwise majorization: {majorized}")
    assert ok


def test_criterion_7_leading_moments():
    t = 40.0
    parts, ok = [], True
    for omega in (0.3, 0.7, 1.0):
        x, (p,) = line_populations(omega, [t], method="sparse")
        for m in (2, 4):
            coeff, power = moment_leading_coefficient(m, omega)
            ratio = central_moment(p, m, x) / t**power
            rel = abs(ratio / coeff - 1)
            good = rel <= 0.10
            ok &= good
            parts.append(f"m={m} omega={omega:g} off {100 * rel:.1f}%{'' if good else ' (!)'}")
    record(7, ok, "mu_m(40)/t^power vs limit: " + "; ".join(parts))
    assert ok, "; ".join(parts)


def test_criterion_8_numerical_hygiene(tmp_path):
    rng = np.random.default_rng(8)
    failures = []
    for i in range(100):
        n = int(rng.integers(2, 9))
        kind = str(rng.choice(["global", "local"]))
        omega = float(rng.uniform())
        t = float(rng.uniform(0, 20))
        adj = build_segment(n)
        gen = build_generator(adj, build_dissipator(adj, kind), omega)
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho0 = z @ z.conj().T
        rho0 /= np.trace(rho0).real
        try:
            check_density_matrix(evolve(gen, rho0, t), 1e-10, 1e-10, 1e-10)
            if kind == "global":
                mixed = evolve(gen, np.eye(n) / n, t)
                if np.max(np.abs(mixed - np.eye(n) / n)) > 1e-10:
                    failures.append(f"config {i}: not unital")
        except Exception as exc:  # noqa: BLE001
            failures.append(f"config {i}: {exc}")
        argv = ["evolve", "--threads", "1", "-s", f"n={n}", "-s", f"l={int(rng.integers(1, n + 1))}",
                "-s", f"omega={omega!r}", "-s", f"dissipator={kind}", "-s", f"t_max={t!r}", "-s", "steps=3"]
        outs = []
        for rep in range(2):
            out = tmp_path / f"c{i}_{rep}.csv"
            if cli_main(argv + ["--out", str(out)]) != 0:
                failures.append(f"config {i}: CLI failed")
            outs.append(out.read_bytes() if out.exists() else b"")
        if outs[0] != outs[1]:
            failures.append(f"config {i}: CSV differs between runs")
    ok = not failures
    record(8, ok, f"100 random configurations: trace/Hermitian/PSD/unital/CSV determinism, {len(failures)} failures")
    assert ok, failures[:5]


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-v", "-p", "no:cacheprovider"]))
