"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import math
import time
from fractions import Fraction
from statistics import median

import mpmath
import numpy as np
import pytest
from scipy.stats import chisquare

from aztec_lshape.exact_count import (
    ENUMERATION_LIMIT,
    aztec_closed_form,
    count,
    frozen_probability,
    mirror_closed_form,
)
from aztec_lshape.painleve import (
    log_FTW,
    log_ftw_left_tail,
    log_ftw_right_tail,
    q_left_expansion,
)
from aztec_lshape.regimes import identity_checks, log_aztec, theorem1_logF, theorem2_logF, tw_argument
from aztec_lshape.regions import VARIANTS, RegionSpec, build_region
from aztec_lshape.sampler import (
    estimate_frozen_probability,
    expected_vertical_count,
    sample_grids,
    vertical_counts,
)
from aztec_lshape.saddles import (
    edge_constants,
    kappa2,
    kappa2_mp,
    mu_threshold,
    solve_z0,
    x0_phi0,
    z0_half_coefficient,
)

from .conftest import exact_log
from .test_sampler import all_tilings, grid_key

A = 0.7845


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, started):
        line = (f"[acceptance {number}] {'PASS' if ok else 'FAIL'}: {detail} "
                f"({time.perf_counter() - started:.1f}s)")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_criterion_1_closed_forms(report):
    t0 = time.perf_counter()
    bad = []
    checked = 0
    for N in range(1, 11):
        for a in (Fraction(1), Fraction(1, 2), Fraction(2, 3)):
            if count(RegionSpec.full(N), a).value != (1 + a * a) ** Fraction(N * (N + 1), 2):
                bad.append(("full", N, a))
            assert aztec_closed_form(N, a) == (1 + a * a) ** (N * (N + 1) // 2)
            checked += 1
            for eps in (0, 1):
                for m in range(eps, N + 1):
                    spec = RegionSpec.lshape(N, m, 1, eps)
                    expected = (1 + a * a) ** (N * (N + 1) // 2 - m * (N + eps - m))
                    if count(spec, a).value != expected or mirror_closed_form(N, m, eps, a) != expected:
                        bad.append((N, m, eps, a))
                    checked += 1
    elapsed = time.perf_counter() - t0
    report(1, not bad and elapsed < 120,
           f"{checked} exact closed-form comparisons, mismatches={bad[:3]}", t0)


def _small_regions():
    specs = set()
    for N in range(1, 11):
        specs.add(RegionSpec.full(N))
        for eps in (0, 1):
            for m in range(eps, N + 1):
                for k in range(0, m + 2):
                    specs.add(RegionSpec.lshape(N, m, k, eps))
    out = []
    for spec in sorted(specs, key=lambda s: (s.N, s.variant, s.m, s.k)):
        if len(build_region(spec)) <= ENUMERATION_LIMIT:
            out.append(spec)
    return out


def test_criterion_2_oracle_equivalence(report):
    t0 = time.perf_counter()
    specs = _small_regions()
    variants = {s.variant for s in specs}
    bad = []
    for spec in specs:
        for a in (Fraction(1), Fraction(1, 2), Fraction(2, 3)):
            if count(spec, a, "enumerate").value != count(spec, a, "determinant").value:
                bad.append((spec, a))
    elapsed = time.perf_counter() - t0
    ok = not bad and variants == set(VARIANTS) and elapsed < 300
    report(2, ok, f"{len(specs)} regions x 3 weights, variants={sorted(variants)}, "
                  f"mismatches={len(bad)}", t0)


def _theorem1_series(eps):
    rows = []
    for N in range(12, 41):
        m = round(Fraction(7, 10) * N)
        res = exact_log(N, m, 4, eps, A) - theorem1_logF(N, m, 3, eps, A).logF_pred
        rows.append((N, res))
    return rows


def test_criterion_3_theorem1_residuals(report):
    t0 = time.perf_counter()
    details, ok = [], True
    for eps in (1, 0):
        rows = _theorem1_series(eps)
        scaled = [abs(N * r) for N, r in rows]
        within = all(abs(r) <= 5 / N for N, r in rows)
        trend = median(scaled[-5:]) <= median(scaled[:5])
        ok &= within and trend
        worst = max(rows, key=lambda t: abs(t[0] * t[1]))
        details.append(f"eps={eps}: |res|<=5/N {within} (max N|res|={abs(worst[0] * worst[1]):.2f} "
                       f"at N={worst[0]}), trend {trend} "
                       f"(medians {median(scaled[:5]):.2f} -> {median(scaled[-5:]):.2f})")
    elapsed = time.perf_counter() - t0
    report(3, ok and elapsed < 1800, "; ".join(details), t0)


def test_criterion_4_theorem2_residuals(report):
    t0 = time.perf_counter()
    res = []
    for N in (16, 24, 32, 40, 48):
        m = round(Fraction(7, 10) * N)
        k = round(Fraction(1, 4) * N)
        res.append(exact_log(N, m, k + 1, 1, A) - theorem2_logF(N, m, k, 1, A).logF_pred)
    mags = [abs(r) for r in res]
    decreasing = all(b < a for a, b in zip(mags, mags[1:]))
    ok = decreasing and mags[-1] < 0.1 and time.perf_counter() - t0 < 3600
    report(4, ok, "residuals " + ", ".join(f"{r:.4g}" for r in res), t0)


def test_criterion_5_identities(report):
    t0 = time.perf_counter()
    worst = {"G": 0.0, "H": 0.0, "F": 0.0}
    for a, mu in ((0.7845, 0.7), (0.75, 0.808)):
        for eps in (0, 1):
            r = identity_checks(mu, a, eps)["residual"]
            for key in worst:
                worst[key] = max(worst[key], abs(r[key]))
    ok = worst["G"] < 1e-6 and worst["H"] < 1e-6 and worst["F"] < 1e-4
    ok &= time.perf_counter() - t0 < 300
    report(5, ok, "max residuals " + ", ".join(f"{k}={v:.2e}" for k, v in worst.items()), t0)


def test_criterion_6_z0_solver(report):
    t0 = time.perf_counter()
    worst = 0.0
    lo = mu_threshold(A)
    for mu in np.linspace(lo + 0.02, 0.98, 20):
        k2 = kappa2(mu, A)
        for frac in np.linspace(0.02, 0.98, 20):
            z = solve_z0(float(mu), float(frac * k2), A)
            worst = max(worst, *(abs(r) for r in z.residuals))
    off = mpmath.mpf("1e-8")
    mu = 0.7
    x0 = x0_phi0(mu, A)[0]
    xs = edge_constants(mu, A)[0]
    with mpmath.workdps(40):
        near0 = solve_z0(mu, off, A).z0
        near2 = solve_z0(mu, kappa2_mp(mu, A) - off, A).z0
        d0 = max(abs(float(near0.real) - x0), abs(float(abs(near0)) - abs(x0)))
        d2 = max(abs(float(near2.real) - xs), abs(float(abs(near2)) - abs(xs)))
        half = float(near2.imag / mpmath.sqrt(off)) / z0_half_coefficient(mu, A) - 1
        im0 = float(near0.imag)
    ok = worst < 1e-12 and d0 < 1e-6 and d2 < 1e-6 and abs(half) < 1e-3 and im0 > 0
    ok &= time.perf_counter() - t0 < 60
    report(6, ok, f"max residual {worst:.1e}; |Re z0 - x0|,||z0|-|x0||<= {d0:.1e}; "
                  f"|Re z0 - x*|,||z0|-|x*||<= {d2:.1e}; Im z0/sqrt(offset) rel. error {half:.1e}", t0)


def test_criterion_7_painleve(report, painleve_solution):
    t0 = time.perf_counter()
    sol = painleve_solution
    s = -8.0
    left = abs(float(sol.state(s)[3]) - log_ftw_left_tail(s))
    right = abs(float(sol.state(6.0)[3]) / log_ftw_right_tail(6.0) - 1)
    h = 1e-4
    deriv = max(abs((log_FTW(x + h) - log_FTW(x - h)) / (2 * h) + sol.q_at(x))
                for x in np.linspace(-8, 4, 121))
    u_err = abs(sol.u_at(-10.0) - math.sqrt(5.0))
    q_err = abs(sol.q_at(-10.0) - q_left_expansion(-10.0))
    bound = 2 * 10 ** -2.5
    ok = (left <= 3 * 8 ** -1.5 and right < 0.2 and deriv < 1e-8 and u_err <= bound
          and q_err <= bound and time.perf_counter() - t0 < 120)
    report(7, ok, f"left-tail diff {left:.2e} (bound {3 * 8 ** -1.5:.3f}), right-tail rel {right:.3f}, "
                  f"d/ds log F + q <= {deriv:.1e}, u/q at -10 {u_err:.1e}/{q_err:.1e} "
                  f"(bound {bound:.1e})", t0)


def test_criterion_8_theorem3_bridging(report):
    t0 = time.perf_counter()
    N = 48
    m = round(Fraction(7, 10) * N)
    k2 = kappa2(m / N, A)
    centre = round(N * k2)
    diffs = []
    for k in range(centre - 4, centre + 5):
        log_p = exact_log(N, m, k, 1, A) - log_aztec(N, A)
        diffs.append((k, log_p - log_FTW(tw_argument(N, m, k, A))))
    worst = max(diffs, key=lambda t: abs(t[1]))
    ok = abs(worst[1]) <= 0.15 and time.perf_counter() - t0 < 1800
    report(8, ok, "log P - log F^TW by k: " + ", ".join(f"{k}:{d:+.3f}" for k, d in diffs), t0)


def test_criterion_9_sampler(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for N in (1, 2, 3):
        for a in (Fraction(1), Fraction(1, 2)):
            tilings = all_tilings(N)
            index = {t: i for i, t in enumerate(tilings)}
            weights = np.array([float(a) ** sum(v for _, v in t) for t in tilings])
            n = 100_000
            counts = np.zeros(len(tilings))
            for g in sample_grids(N, a, n, seed=1000 + N):
                counts[index[grid_key(g, N)]] += 1
            expected = n * weights / weights.sum()
            if len(tilings) > 1:
                p = chisquare(counts, expected).pvalue
            else:
                p = 1.0
            ok &= p > 0.01
            parts.append(f"chi2 N={N} a={a} p={p:.3f}")
    v = vertical_counts(16, A, 20_000, seed=16)
    mean, err = v.mean(), v.std(ddof=1) / math.sqrt(len(v))
    target = expected_vertical_count(16, A)
    ok &= abs(mean - target) <= 3 * err
    parts.append(f"E[v] {mean:.3f} vs {target:.3f} (3 sigma {3 * err:.3f})")
    est, se = estimate_frozen_probability(6, 4, 3, 1, 1, 40_000, seed=6)
    exact = float(frozen_probability(RegionSpec.lshape(6, 4, 3, 1), 1))
    ok &= abs(est - exact) <= 3 * se
    parts.append(f"P_6^(4,3) MC {est:.4f}+-{se:.4f} vs exact {exact:.4f}")
    ok &= time.perf_counter() - t0 < 600
    report(9, ok, "; ".join(parts), t0)
