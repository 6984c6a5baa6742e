"""Normalized function classes built on the tilted class.

* spirallike: ``z f'/f`` in the class,
* Robertson: ``1 + z f''/f'`` in the class,
* close-to-convex with argument ``lam``: ``z f'/g`` in the class for a starlike ``g``,
* derivative class: ``f'`` in the class.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import bounds as B
from . import series as S
from .caratheodory import (
    ClassMember,
    EvaluationGrid,
    TiltLike,
    as_tilt,
    kernel_series,
    membership_test,
)
from .errors import NonConvergence, NotSpirallike, VanishingDerivative
from .extremal import golden_max
from .series import DEFAULT_ORDER, EPS_DIV, TruncatedSeries

EPS_BOUNDARY = 1e-4
ROBERTSON_SAMPLES = 2048
ROBERTSON_TOL = 1e-5
MAX_BISECTIONS = 200
CHECK_TOL = 1e-9

CLASS_TAGS = ("spirallike", "robertson", "ctc", "dclass", "other")


@dataclass(frozen=True, eq=False)
class NormalizedFunction:
    """``f`` with ``f(0) = 0`` and ``f'(0) = 1``.

    ``deriv`` and ``deriv2`` evaluate ``f'`` and ``f''`` in closed form.
    ``value`` is closed form where one is known and ``None`` otherwise;
    ``ratio`` is the class-defining quotient (``z f'/f`` for spirallike
    functions) when it is cheaper than going through ``value``.
    """

    series: TruncatedSeries
    tag: str
    deriv: Callable
    deriv2: Callable
    value: Optional[Callable] = None
    ratio: Optional[Callable] = None

    def __post_init__(self):
        c = self.series.coeffs
        if c.size < 2 or c[0] != 0 or c[1] != 1:
            raise ValueError("normalized functions need c_0 = 0 and c_1 = 1 exactly")
        if self.tag not in CLASS_TAGS:
            raise ValueError(f"unknown class tag {self.tag!r}")


def _normalize(s: TruncatedSeries, tol: float = 1e-9) -> TruncatedSeries:
    # snap c_0, c_1 that are exact up to rounding
    c = s.coeffs.copy()
    if abs(c[0]) > tol or abs(c[1] - 1) > tol:
        raise ValueError(f"series is not normalized: c_0 = {c[0]!r}, c_1 = {c[1]!r}")
    c[0], c[1] = 0.0, 1.0
    return TruncatedSeries(c)


def _one_minus_z(order: int) -> TruncatedSeries:
    return S.polynomial([1.0, -1.0], order)


def identity_function(order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``f(z) = z``."""
    return NormalizedFunction(
        S.identity(order),
        "other",
        deriv=lambda z: np.ones_like(np.asarray(z, dtype=complex)),
        deriv2=lambda z: np.zeros_like(np.asarray(z, dtype=complex)),
        value=lambda z: np.asarray(z, dtype=complex),
    )


# -- spirallike ---------------------------------------------------------------


def spirallike_build(tilt: TiltLike, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``f(z) = z / (1 - z)^m`` with ``m = 1 + exp(-2i lam)``."""
    tilt = as_tilt(tilt)
    m, e2 = tilt.m, tilt.e2
    s = S.shift_up(S.cpow(_one_minus_z(order - 1), -m))

    def value(z):
        z = np.asarray(z, dtype=complex)
        return z * (1 - z) ** (-m)

    def ratio(z):
        z = np.asarray(z, dtype=complex)
        return (1 + e2 * z) / (1 - z)

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        return (1 - z) ** (-m) * ratio(z)

    def deriv2(z):
        z = np.asarray(z, dtype=complex)
        # log f' = -m log(1-z) + log(1 + e2 z) - log(1-z)
        return deriv(z) * ((m + 1) / (1 - z) + e2 / (1 + e2 * z))

    return NormalizedFunction(s, "spirallike", deriv, deriv2, value, ratio)


def spirallike_from_member(p: ClassMember) -> NormalizedFunction:
    """``f = z exp(int_0^z (p(t) - 1)/t dt)``, so that ``z f'/f = p``."""
    order = p.series.order
    lam_series = S.integrate(S.shift_down(p.series - 1.0))
    s = S.shift_up(S.exp(lam_series)).truncate(order)
    mu = p.measure
    m = p.tilt.m
    if mu is not None:
        x, t = mu.points, mu.weights

        def value(z):
            z = np.asarray(z, dtype=complex)
            # int_0^z (p_lam(x u) - 1)/u du = -m log(1 - x z)
            lam_z = -m * (np.log(1 - z[..., None] * x) @ t)
            return z * np.exp(lam_z)

    else:
        value = lambda z: S.evaluate(s, z)

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = value(z) * p.value(z) / z
        return np.where(z == 0, 1.0 + 0j, out)

    def deriv2(z):
        z = np.asarray(z, dtype=complex)
        # f'' = f' (p'/p + (p - 1)/z)
        with np.errstate(invalid="ignore", divide="ignore"):
            pz = p.value(z)
            out = deriv(z) * (p.deriv(z) / pz + (pz - 1) / z)
        return np.where(z == 0, 2 * p.series.coeffs[1], out)

    return NormalizedFunction(s, "spirallike", deriv, deriv2, value, p.value)


def spirallike_ratio(f: NormalizedFunction) -> TruncatedSeries:
    """Series of ``z f'/f`` (one order lower than ``f``)."""
    g = S.shift_down(f.series)
    dg = S.derivative(g)
    return S.shift_up(S.div(dg, g.truncate(dg.order))) + 1.0


def robertson_ratio(f: NormalizedFunction) -> TruncatedSeries:
    """Series of ``1 + z f''/f'``."""
    d1 = S.derivative(f.series)
    d2 = S.derivative(d1)
    return S.shift_up(S.div(d2, d1.truncate(d2.order))) + 1.0


@dataclass(frozen=True)
class SpirallikeReport:
    passed: bool
    disc_excess: float  # max of |ratio - c| - radius, should be <= tol
    re_excess: float
    modulus_excess: float
    disc_slack_per_radius: np.ndarray = field(repr=False)  # radius - max |ratio - c|


def spirallike_verify(
    f: NormalizedFunction,
    tilt: TiltLike,
    grid: Optional[EvaluationGrid] = None,
    tol: float = CHECK_TOL,
) -> SpirallikeReport:
    """Check the disc, real-part and modulus bounds for ``z f'/f`` on the grid."""
    tilt = as_tilt(tilt)
    grid = grid or EvaluationGrid.standard()
    if f.ratio is not None:
        ratio = f.ratio
    else:
        ratio = lambda z: z * f.deriv(z) / f.value(z)
    member = membership_test(ratio, tilt, grid)
    if not member.passed:
        raise NotSpirallike(f"z f'/f leaves the tilted half-plane (min {member.min_value:.3g})")
    w = ratio(grid.points)
    disc_ex, re_ex, mod_ex = -np.inf, -np.inf, -np.inf
    slack = np.empty(grid.radii.size)
    for i, r in enumerate(grid.radii):
        c, rad = B.containment_disc(tilt, r)
        lo, hi = B.re_bounds(tilt, r)
        A = B.growth_A(tilt, r)
        row = w[i]
        dist = np.abs(row - c)
        slack[i] = rad - dist.max()
        disc_ex = max(disc_ex, float((dist - rad).max()))
        re_ex = max(re_ex, float(max((lo - row.real).max(), (row.real - hi).max())))
        mod = np.abs(row)
        mod_ex = max(mod_ex, float(max((1 / A - mod).max(), (mod - A).max())))
    passed = disc_ex <= tol and re_ex <= tol and mod_ex <= tol
    return SpirallikeReport(passed, disc_ex, re_ex, mod_ex, slack)


# -- Robertson ----------------------------------------------------------------


def robertson_build(tilt: TiltLike, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``f = ((1 - z)^(1 - m) - 1) / (m - 1)``; at tilt 0 this is ``z/(1 - z)``.

    Since ``m - 1 = exp(-2i lam)`` never vanishes, no tilt needs special casing.
    """
    tilt = as_tilt(tilt)
    m = tilt.m
    s = _normalize((S.cpow(_one_minus_z(order), 1 - m) - 1.0) / (m - 1))

    def value(z):
        z = np.asarray(z, dtype=complex)
        return ((1 - z) ** (1 - m) - 1) / (m - 1)

    def deriv(z):
        return (1 - np.asarray(z, dtype=complex)) ** (-m)

    def deriv2(z):
        return m * (1 - np.asarray(z, dtype=complex)) ** (-m - 1)

    return NormalizedFunction(s, "robertson", deriv, deriv2, value)


def robertson_expression(tilt: TiltLike, r: float, z):
    """``(1/r) (m r z - 1 + (1 - r z)^m) / (1 - (1 - r z)^m)``."""
    m = as_tilt(tilt).m
    w = r * np.asarray(z, dtype=complex)
    q = (1 - w) ** m
    return (m * w - 1 + q) / (1 - q) / r


def robertson_inner_sup(
    tilt: TiltLike, r: float, n: int = ROBERTSON_SAMPLES, eps_boundary: float = EPS_BOUNDARY
) -> float:
    """Sup of ``|robertson_expression|`` over ``|z| = 1 - eps_boundary``, refined locally."""
    rho = 1 - eps_boundary
    th = 2 * math.pi * np.arange(n) / n
    vals = np.abs(robertson_expression(tilt, r, rho * np.exp(1j * th)))
    vals = np.where(np.isfinite(vals), vals, np.inf)
    i = int(np.argmax(vals))
    if not np.isfinite(vals[i]):
        return math.inf
    h = 2 * math.pi / n
    f = lambda a: float(np.abs(robertson_expression(tilt, r, rho * np.exp(1j * a))))
    _, v = golden_max(f, th[i] - h, th[i] + h)
    return max(float(vals[i]), v)


@dataclass(frozen=True)
class RadiusResult:
    """Bisection result with a certified bracket.

    The predicate held at ``lo = r_star - width`` and failed at
    ``hi = r_star + width``; when it still holds next to 1, ``r_star = 1``.
    """

    r_star: float
    width: float
    lo: float
    hi: float
    samples: int
    iterations: int
    touches_one: bool


def robertson_radius(
    tilt: TiltLike,
    tol: float = ROBERTSON_TOL,
    n: int = ROBERTSON_SAMPLES,
    eps_boundary: float = EPS_BOUNDARY,
) -> RadiusResult:
    """Largest ``r`` for which the inner sup stays below 1, by bisection."""
    if tol < 1e-6:
        raise ValueError("tol must be at least 1e-6")
    tilt = as_tilt(tilt)
    calls = 0

    def holds(r):
        nonlocal calls
        calls += 1
        return robertson_inner_sup(tilt, r, n, eps_boundary) < 1.0

    lo = 1e-3
    if not holds(lo):
        raise NonConvergence(f"predicate already fails at r = {lo}")
    top = 1.0 - tol / 2
    if holds(top):
        return RadiusResult(1.0, 1.0 - top, top, 1.0, calls * n, 0, True)
    hi = top
    it = 0
    while hi - lo > tol:
        if it >= MAX_BISECTIONS:
            raise NonConvergence(f"bracket [{lo}, {hi}] still wider than {tol}")
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
        it += 1
    return RadiusResult(0.5 * (lo + hi), 0.5 * (hi - lo), lo, hi, calls * n, it, False)


def robertson_predicate_profile(tilt: TiltLike, radii: Sequence[float], n: int = ROBERTSON_SAMPLES):
    """Predicate values on a radius lattice and the radii where it turns back on."""
    flags = [robertson_inner_sup(tilt, r, n) < 1.0 for r in radii]
    violations = [float(radii[i]) for i in range(1, len(flags)) if flags[i] and not all(flags[:i])]
    return flags, violations


# -- close-to-convex with argument lam --------------------------------------


def ctc_distortion(tilt: TiltLike, r: float) -> tuple[float, float]:
    """``(1/(A (1+r)^2), A/(1-r)^2)`` bounding ``|f'|`` on ``|z| = r``."""
    A = B.growth_A(tilt, r)
    return 1.0 / (A * (1 + r) ** 2), A / (1 - r) ** 2


def ctc_build(p: ClassMember, y: complex = 1.0) -> NormalizedFunction:
    """``f' = p(z) / (1 - y z)^2``, paired with the starlike ``z/(1 - y z)^2``."""
    order = p.series.order
    koebe_d = S.geometric(order, y)
    fprime = S.mul(p.series, S.mul(koebe_d, koebe_d))
    s = _normalize(S.integrate(fprime).truncate(order))

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        return p.value(z) / (1 - y * z) ** 2

    def deriv2(z):
        z = np.asarray(z, dtype=complex)
        return p.deriv(z) / (1 - y * z) ** 2 + 2 * y * p.value(z) / (1 - y * z) ** 3

    return NormalizedFunction(s, "ctc", deriv, deriv2)


def ctc_extremal(tilt: TiltLike, x: complex, y: complex, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``f' = (1 + e2 x z) / ((1 - y z)^2 (1 - x z))``."""
    tilt = as_tilt(tilt)
    e2 = tilt.e2
    kern = kernel_series(tilt, order, x)
    koebe_d = S.geometric(order, y)
    s = _normalize(S.integrate(S.mul(kern, S.mul(koebe_d, koebe_d))).truncate(order))

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        return (1 + e2 * x * z) / ((1 - y * z) ** 2 * (1 - x * z))

    def deriv2(z):
        z = np.asarray(z, dtype=complex)
        return deriv(z) * (e2 * x / (1 + e2 * x * z) + x / (1 - x * z) + 2 * y / (1 - y * z))

    return NormalizedFunction(s, "ctc", deriv, deriv2)


@dataclass(frozen=True)
class DistortionScan:
    hi: float
    lo: float
    hi_witness: tuple  # (x, y, z)
    lo_witness: tuple


def ctc_extremal_scan(tilt: TiltLike, r: float, k: int = 128, k_theta: int = 4) -> DistortionScan:
    """Max and min of ``|f'(z)|`` over the extremal ``(x, y, theta)`` lattice at ``|z| = r``.

    The best lattice cells are refined by alternating golden-section
    searches over the arguments of ``x`` and ``y``.
    """
    tilt = as_tilt(tilt)
    e2 = tilt.e2
    ang = 2 * math.pi * np.arange(k) / k
    h = 2 * math.pi / k

    def mod(a, b, th):
        x, y, z = np.exp(1j * a), np.exp(1j * b), r * np.exp(1j * th)
        return np.abs((1 + e2 * x * z) / ((1 - y * z) ** 2 * (1 - x * z)))

    results = []
    for sign in (1.0, -1.0):
        best, arg = -np.inf, None
        for th in 2 * math.pi * np.arange(k_theta) / k_theta:
            v = sign * mod(ang[:, None], ang[None, :], th)
            i, j = np.unravel_index(int(np.argmax(v)), v.shape)
            if v[i, j] > best:
                best, arg = float(v[i, j]), (float(ang[i]), float(ang[j]), float(th))
        a, b, th = arg
        for step in (h, h / 4, h / 16):
            a, va = golden_max(lambda s: sign * float(mod(s, b, th)), a - step, a + step)
            b, vb = golden_max(lambda s: sign * float(mod(a, s, th)), b - step, b + step)
            best = max(best, va, vb)
        results.append((sign * best, (complex(np.exp(1j * a)), complex(np.exp(1j * b)), complex(r * np.exp(1j * th)))))
    (hi, hw), (lo, lw) = results
    return DistortionScan(hi, lo, hw, lw)


def koebe(z):
    z = np.asarray(z, dtype=complex)
    return z / (1 - z) ** 2


def koebe_growth(r: float) -> tuple[float, float]:
    return r / (1 + r) ** 2, r / (1 - r) ** 2


# -- derivative class -------------------------------------------------------


def dclass_distortion(tilt: TiltLike, r: float) -> tuple[float, float]:
    A = B.growth_A(tilt, r)
    return 1.0 / A, A


def dclass_extremal(tilt: TiltLike, order: int = DEFAULT_ORDER) -> NormalizedFunction:
    """``f = -m log(1 - z) - e2 z``, whose derivative is the kernel itself."""
    tilt = as_tilt(tilt)
    m, e2 = tilt.m, tilt.e2
    n = np.arange(order + 1)
    c = np.zeros(order + 1, dtype=complex)
    c[1:] = m / n[1:]
    c[1] -= e2
    s = _normalize(TruncatedSeries(c))

    def value(z):
        z = np.asarray(z, dtype=complex)
        return -m * np.log(1 - z) - e2 * z

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        return (1 + e2 * z) / (1 - z)

    def deriv2(z):
        return m / (1 - np.asarray(z, dtype=complex)) ** 2

    return NormalizedFunction(s, "dclass", deriv, deriv2, value)


def dclass_from_member(p: ClassMember) -> NormalizedFunction:
    """The antiderivative of ``p`` vanishing at 0."""
    s = _normalize(S.integrate(p.series).truncate(p.series.order))
    mu = p.measure
    value = None
    if mu is not None:
        m, e2 = p.tilt.m, p.tilt.e2
        x, t = mu.points, mu.weights

        def value(z):
            z = np.asarray(z, dtype=complex)
            # int_0^z p_lam(x u) du = -e2 z - (m/x) log(1 - x z)
            return -e2 * z - m * ((np.log(1 - z[..., None] * x) / x) @ t)

    return NormalizedFunction(s, "dclass", p.value, p.deriv, value)


def preschwarzian_norm(
    f: NormalizedFunction,
    radii: Sequence[float],
    n_angles: int = 512,
    refine: bool = True,
) -> float:
    """Sup of ``(1 - |z|^2) |f''/f'|`` over the polar grid, refined locally."""
    radii = np.asarray(sorted(radii), dtype=float)
    th = 2 * math.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * th)[None, :]
    d1 = f.deriv(z)
    if np.min(np.abs(d1)) <= EPS_DIV:
        raise VanishingDerivative("f' vanishes on the grid")

    def weighted(zz):
        zz = np.asarray(zz, dtype=complex)
        return (1 - np.abs(zz) ** 2) * np.abs(f.deriv2(zz) / f.deriv(zz))

    vals = weighted(z)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j])
    if not refine:
        return best
    rho, a = float(radii[i]), float(th[j])
    h = 2 * math.pi / n_angles
    a, v = golden_max(lambda s: float(weighted(rho * np.exp(1j * s))), a - h, a + h)
    best = max(best, v)
    r_lo = float(radii[i - 1]) if i > 0 else 0.5 * rho
    r_hi = float(radii[i + 1]) if i + 1 < radii.size else rho
    if r_hi > r_lo:
        _, v = golden_max(lambda s: float(weighted(s * np.exp(1j * a))), r_lo, r_hi)
        best = max(best, v)
    return best
