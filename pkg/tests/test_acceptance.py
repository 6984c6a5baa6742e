"""One test per acceptance criterion, each at its stated tolerance and time budget.

Every test records a ``criterion`` property; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run, and each test also
prints its own line (visible with ``-s``).
"""
import cmath
import math
import time

import numpy as np
import pytest

from tiltcara import applications as A
from tiltcara import bounds as B
from tiltcara import caratheodory as C
from tiltcara import extremal as E
from tiltcara import series as S

SWEEP_LAMBDAS = (0.0, 0.3, -0.3, 0.9, -0.9, 1.3, -1.3)
SWEEP_COUNT = 1000
BASE_SEED = 42
# (lambda, r) lattice for the sharpness certificates: the six nonzero sweep tilts
# against ten radii spread over (0, 1)
CERT_LAMBDAS = (0.3, -0.3, 0.9, -0.9, 1.3, -1.3)
CERT_RADII = tuple(np.linspace(0.05, 0.95, 10))
GRID = C.EvaluationGrid.standard()


def report(record_property, criterion, ok, detail):
    record_property("criterion", criterion)
    record_property("detail", detail)
    print(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}  {detail}")
    assert ok, detail


def sweep(lam):
    return E.sweep_members(lam, SWEEP_COUNT, BASE_SEED)


def grid_bounds(lam):
    center, radius, M = [], [], []
    for r in GRID.radii:
        c, rad = B.containment_disc(lam, r)
        center.append(c)
        radius.append(rad)
        M.append(B.logderiv_M(lam, r))
    return np.array(center)[:, None], np.array(radius)[:, None], np.array(M)[:, None]


def test_criterion_1_coefficients(record_property):
    t0 = time.perf_counter()
    excess, single = -np.inf, 0.0
    for lam in SWEEP_LAMBDAS:
        cb = B.coeff_bound(lam)
        for p in sweep(lam):
            excess = max(excess, float(np.abs(p.series.coeffs[1:]).max() - cb))
        k = C.kernel_member(lam, cmath.exp(0.37j))
        single = max(single, float(np.abs(np.abs(k.series.coeffs[1:]) - cb).max()))
    dt = time.perf_counter() - t0
    ok = excess <= 1e-9 and single <= 1e-12 and dt < 30
    report(record_property, "1 coefficient bound", ok,
           f"max excess {excess:.2e} <= 1e-9, single-atom error {single:.2e} <= 1e-12, {dt:.1f}s < 30s")


def test_criterion_2_disc(record_property):
    t0 = time.perf_counter()
    z = GRID.points
    excess = -np.inf
    for lam in SWEEP_LAMBDAS:
        center, radius, _ = grid_bounds(lam)
        for p in sweep(lam):
            excess = max(excess, float((np.abs(p.value(z) - center) - radius).max()))
    gaps = [E.sharpness_certificate("disc", lam, r).gap for lam in CERT_LAMBDAS for r in CERT_RADII]
    dt = time.perf_counter() - t0
    ok = excess <= 1e-9 and max(gaps) <= 1e-6 and min(gaps) >= -1e-9 and dt < 60
    report(record_property, "2 disc containment", ok,
           f"max excess {excess:.2e} <= 1e-9, certificate gaps in [{min(gaps):.1e}, {max(gaps):.1e}] "
           f"on {len(gaps)} points, {dt:.1f}s < 60s")


def test_criterion_3_logderiv(record_property):
    z = GRID.points
    excess = -np.inf
    for lam in SWEEP_LAMBDAS:
        _, _, M = grid_bounds(lam)
        for p in sweep(lam):
            excess = max(excess, float((np.abs(p.zlogderiv(z)) - M).max()))
    gaps, alpha_err = [], 0.0
    for lam in CERT_LAMBDAS:
        for r in CERT_RADII:
            rep = E.sharpness_certificate("logderiv_M", lam, r)
            gaps.append(rep.gap)
            if r < B.branch_radius(lam):
                alpha_err = max(alpha_err, rep.extras["alpha_error"])
    jump = 0.0
    for lam in SWEEP_LAMBDAS[1:]:
        rb = B.branch_radius(lam)
        t = C.TiltAngle(lam)
        jump = max(jump, abs(2 * rb * t.cos / (1 + rb * rb - 2 * rb * abs(t.sin)) - 2 * rb / (1 - rb * rb)))
    ok = excess <= 1e-9 and -1e-9 <= min(gaps) and max(gaps) <= 1e-6 and alpha_err <= 1e-4 and jump <= 1e-12
    report(record_property, "3 log-derivative bound", ok,
           f"max excess {excess:.2e}, gaps <= {max(gaps):.1e}, small-branch angle error {alpha_err:.1e} <= 1e-4, "
           f"branch jump {jump:.1e} <= 1e-12")


def test_criterion_4_monotonicity(record_property):
    lams = np.linspace(0.0, 1.4, 50)
    radii = np.linspace(0.0, 0.98, 50)
    M = np.array([[B.logderiv_M(l, r) for r in radii] for l in lams])
    rise = float(np.diff(M, axis=0).max())
    over = float((M - 2 * radii / (1 - radii**2)).max())
    ok = rise <= 0 and over <= 1e-12
    report(record_property, "4 M monotone in tilt", ok, f"largest increase {rise:.1e} <= 0, cap excess {over:.1e} <= 1e-12")


def test_criterion_5_convolution(record_property):
    t0 = time.perf_counter()
    schur_min, margin = np.inf, np.inf
    for i in range(100):
        a = E.random_member(0.0, 1 + i % 4, E.member_seed(BASE_SEED, 50_000 + 2 * i))
        b = E.random_member(0.0, 1 + (i + 1) % 4, E.member_seed(BASE_SEED, 50_001 + 2 * i))
        schur_min = min(schur_min, C.membership_test(C.schur_half_hadamard(a, b), 0.0, GRID).min_value)
    rng = np.random.default_rng(E.member_seed(BASE_SEED, 60_000))
    for i in range(100):
        l1, l2 = rng.uniform(-1.3, 1.3, 2)
        p1 = E.random_member(l1, 1 + i % 4, E.member_seed(BASE_SEED, 70_000 + 2 * i))
        p2 = E.random_member(l2, 1 + (i + 1) % 4, E.member_seed(BASE_SEED, 70_001 + 2 * i))
        rep = C.tilted_convolution_bound(p1, p2, GRID)
        margin = min(margin, rep.min_value - rep.lower_bound)
    dt = time.perf_counter() - t0
    ok = schur_min > 0 and margin > -1e-9 and dt < 60
    report(record_property, "5 convolution", ok,
           f"Schur min Re {schur_min:.2e} > 0, tilted margin {margin:.2e} > -1e-9, {dt:.1f}s < 60s")


def test_criterion_6_subordination(record_property):
    z = GRID.points
    worst, omega_max, const = 0.0, 0.0, 0.0
    for lam in SWEEP_LAMBDAS:
        k32 = C.kernel_series(lam, 32)
        for p in E.sweep_members(lam, SWEEP_COUNT, BASE_SEED, order=32):
            w = C.subordination_omega(p)
            const = max(const, abs(w.coeffs[0]))
            worst = max(worst, float(np.abs(S.compose(k32, w).coeffs - p.series.coeffs).max()))
            omega_max = max(omega_max, float(np.abs(C.omega_eval(p, z)).max()))
    ok = worst <= 1e-9 and const == 0 and omega_max < 1
    report(record_property, "6 subordination", ok,
           f"round-trip error {worst:.1e} <= 1e-9, omega(0) = {const}, max |omega| {omega_max:.6f} < 1")


def test_criterion_7_robertson(record_property):
    tol = 1e-4
    times, results = [], {}
    for lam in (0.0, 0.8, -0.8):
        t0 = time.perf_counter()
        results[lam] = A.robertson_radius(lam, tol)
        times.append(time.perf_counter() - t0)
    r0, rp, rm = results[0.0], results[0.8], results[-0.8]
    certified = all(
        res.touches_one or (A.robertson_inner_sup(lam, res.lo) < 1 <= A.robertson_inner_sup(lam, res.hi))
        for lam, res in results.items()
    )
    ok = (
        abs(r0.r_star - 1) <= 1e-4
        and r0.touches_one
        and abs(rp.r_star - rm.r_star) <= 2 * tol
        and certified
        and max(times) < 120
    )
    report(record_property, "7 Robertson radius", ok,
           f"R(0) = {r0.r_star}, R(0.8) = {rp.r_star:.6f}, R(-0.8) = {rm.r_star:.6f}, brackets certified: {certified}, "
           f"slowest {max(times):.1f}s < 120s")


def test_criterion_8_close_to_convex(record_property):
    worst = 0.0
    for lam in (0.0, 0.5, 1.0):
        for r in (0.3, 0.6):
            scan = A.ctc_extremal_scan(lam, r)
            lo, hi = A.ctc_distortion(lam, r)
            worst = max(worst, abs(scan.hi - hi), abs(scan.lo - lo))
    sandwich = -np.inf
    for lam in np.linspace(-1.4, 1.4, 29):
        for r in np.linspace(0.0, 0.98, 50):
            a = B.growth_A(lam, r)
            sandwich = max(sandwich, (1 - r) / (1 + r) - a, a - (1 + r) / (1 - r))
    ok = worst <= 1e-6 and sandwich <= 1e-12
    report(record_property, "8 close-to-convex distortion", ok,
           f"scan error {worst:.1e} <= 1e-6, sandwich excess {sandwich:.1e} <= 1e-12")


def test_criterion_9_preschwarzian(record_property):
    radii = np.linspace(0.05, 0.995, 60)
    worst = 0.0
    for i in range(20):
        p = E.random_member(0.7, 1 + i % 8, E.member_seed(BASE_SEED, i))
        worst = max(worst, A.preschwarzian_norm(A.dclass_from_member(p), radii))
    extremal = A.preschwarzian_norm(A.dclass_extremal(0.0), radii)
    ok = worst <= 2 + 1e-6 and extremal >= 1.95
    report(record_property, "9 pre-Schwarzian norm", ok,
           f"random max {worst:.12f} <= 2 + 1e-6, extremal {extremal:.6f} >= 1.95")


def test_criterion_10_series(record_property):
    t0 = time.perf_counter()
    rng = np.random.default_rng(E.member_seed(BASE_SEED, 90_000))
    n = 64
    failures = []

    def cvec(size):
        return rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size)

    for _ in range(200):
        a, b, c = (S.TruncatedSeries(cvec(n + 1)) for _ in range(3))
        if not S.mul(a, b).allclose(S.mul(b, a), S.EPS_SERIES):
            failures.append("mul commutative")
        if not S.mul(S.mul(a, b), c).allclose(S.mul(a, S.mul(b, c)), S.EPS_SERIES):
            failures.append("mul associative")
        bc = cvec(n + 1)
        bc[0] = rng.uniform(0.1, 1) * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        den = S.TruncatedSeries(bc)
        q = S.div(a, den)
        scale = max(1.0, np.abs(q.coeffs).max() * np.abs(bc).sum())
        if np.abs(S.mul(q, den).coeffs - a.coeffs).max() > S.EPS_SERIES * scale:
            failures.append("div round trip")
        m1, m2 = cvec(2) * 2
        base = S.polynomial([1, *(0.4 * rng.uniform(0, 1, 2) * np.exp(1j * rng.uniform(-math.pi, math.pi, 2)))], n)
        if not S.cpow(base, m1 + m2).allclose(S.mul(S.cpow(base, m1), S.cpow(base, m2)), S.EPS_SERIES):
            failures.append("cpow additive")
        if not np.array_equal(S.hadamard(S.geometric(n), a).coeffs, a.coeffs):
            failures.append("hadamard identity")
        lam, r = rng.uniform(-1.5, 1.5), rng.uniform(0, 0.9)
        zz = r * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        k = C.kernel_series(lam, n)
        exact = (1 + cmath.exp(-2j * lam) * zz) / (1 - zz)
        if abs(S.evaluate(k, zz) - exact) > S.tail_bound(2 * math.cos(lam), n, r) + 1e-12:
            failures.append("evaluate tail bound")
    dt = time.perf_counter() - t0
    ok = not failures and dt < 10
    report(record_property, "10 series engine", ok,
           f"{200 * 6} identity checks at order {n}, {len(failures)} failures, {dt:.1f}s < 10s")
