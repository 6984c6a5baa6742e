"""Closed-form sharp bounds over the tilted class.

All functions take the tilt (a :class:`TiltAngle` or a float) and, where it
matters, the radius ``r = |z|`` in ``[0, 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .caratheodory import TiltLike, as_tilt
from .errors import NoAttainment, RadiusOutOfRange

EPS_SLIT = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """A closed-form bound next to the best value a search achieved.

    ``gap = bound - achieved``; for a search confined to the class it should
    never be meaningfully negative.
    """

    bound: float
    achieved: float
    gap: float
    witness: Optional[tuple] = None  # (x, z)
    name: str = ""
    extras: dict = field(default_factory=dict)


def _radius(r) -> float:
    r = float(r)
    if not (0.0 <= r < 1.0):
        raise RadiusOutOfRange(f"r = {r!r} not in [0, 1)")
    return r


def coeff_bound(tilt: TiltLike) -> float:
    return 2.0 * as_tilt(tilt).cos


def deriv_bound(tilt: TiltLike, r: float) -> float:
    r = _radius(r)
    return 2.0 * as_tilt(tilt).cos / (1.0 - r) ** 2


def containment_disc(tilt: TiltLike, r: float) -> tuple[complex, float]:
    """Center and radius of the disc holding ``p(z)`` for ``|z| = r``."""
    tilt = as_tilt(tilt)
    r = _radius(r)
    d = 1.0 - r * r
    center = (1.0 + r * r * tilt.e2) / d
    return center, 2.0 * r * tilt.cos / d


def growth_A(tilt: TiltLike, r: float) -> float:
    """Upper growth factor; ``1/A <= |p(z)| <= A`` on ``|z| = r``."""
    c = as_tilt(tilt).cos
    r = _radius(r)
    d = 1.0 - r * r
    return (math.sqrt(d * d + 4.0 * r * r * c * c) + 2.0 * r * c) / d


def re_bounds(tilt: TiltLike, r: float) -> tuple[float, float]:
    tilt = as_tilt(tilt)
    r = _radius(r)
    d = 1.0 - r * r
    base = 1.0 + r * r * math.cos(2 * tilt.lam)
    spread = 2.0 * r * tilt.cos
    return (base - spread) / d, (base + spread) / d


def branch_radius(tilt: TiltLike) -> float:
    """``|tan(lam/2)|``, where the log-derivative bound switches formula."""
    return abs(math.tan(as_tilt(tilt).lam / 2))


def logderiv_M(tilt: TiltLike, r: float) -> float:
    """Sharp bound on ``|z p'(z) / p(z)|`` at ``|z| = r``."""
    tilt = as_tilt(tilt)
    r = _radius(r)
    if r < branch_radius(tilt):
        return 2.0 * r * tilt.cos / (1.0 + r * r - 2.0 * r * abs(tilt.sin))
    return 2.0 * r / (1.0 - r * r)


def logderiv_N(tilt: TiltLike, r: float) -> float:
    """Minimum of ``|z p_lam'(z) / p_lam(z)|`` on ``|z| = r`` for the kernel alone."""
    tilt = as_tilt(tilt)
    r = _radius(r)
    return 2.0 * r * tilt.cos / (1.0 + r * r + 2.0 * r * abs(tilt.sin))


def _wrap(a: float) -> float:
    """Angle in ``(-pi, pi]``."""
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a == -math.pi else a


def extremal_alpha(tilt: TiltLike, r: float) -> list[float]:
    """Angles ``alpha`` with ``|w p_lam'(w)/p_lam(w)| = M`` at ``w = r e^{i alpha}``.

    Below the branch radius there is one angle, ``lam + pi/2`` for negative
    tilt and ``lam - pi/2`` for positive tilt.  Otherwise both roots of
    ``sin(alpha - lam) = -(1 + r^2)/(2r) sin(lam)`` are returned, sorted.
    """
    tilt = as_tilt(tilt)
    r = _radius(r)
    lam = tilt.lam
    if r == 0.0:
        return [0.0]
    if r < branch_radius(tilt):
        return [_wrap(lam + math.pi / 2)] if lam < 0 else [_wrap(lam - math.pi / 2)]
    s = -(1.0 + r * r) / (2.0 * r) * tilt.sin
    if abs(s) > 1.0 + 1e-12:
        raise NoAttainment(f"sin(alpha - lam) = {s!r} has no real solution")
    a = math.asin(max(-1.0, min(1.0, s)))
    roots = sorted({_wrap(lam + a), _wrap(lam + math.pi - a)})
    return roots


def slit_A(tilt: TiltLike) -> float:
    t = as_tilt(tilt)
    return t.cos / (1.0 + t.sin)


@dataclass(frozen=True)
class SlitDomain:
    """The plane minus the imaginary-axis rays above ``A i`` and below ``-i/A``."""

    a_lambda: float

    def __post_init__(self):
        if not self.a_lambda > 0:
            raise ValueError("a_lambda must be positive")

    @classmethod
    def for_tilt(cls, tilt: TiltLike) -> "SlitDomain":
        return cls(slit_A(tilt))

    def contains(self, w, eps: float = EPS_SLIT):
        w = np.asarray(w, dtype=complex)
        on_axis = np.abs(w.real) <= eps
        on_slit = (w.imag >= self.a_lambda - eps) | (w.imag <= -1.0 / self.a_lambda + eps)
        out = ~(on_axis & on_slit)
        return bool(out) if out.ndim == 0 else out


def slit_membership(tilt: TiltLike, w) -> bool:
    """Whether ``w`` lies in the slit image of ``z p_lam'/p_lam``."""
    return SlitDomain.for_tilt(tilt).contains(w)


def shifted_logderiv_factor(tilt: TiltLike, r: float) -> float:
    """Shape factor of the classical bound on ``|z q'/(q + i tan(lam))|``, ``q`` of tilt 0.

    ``logderiv_M(lam, r) == 2r/(1 - r^2) * shifted_logderiv_factor(lam, r)``.
    """
    tilt = as_tilt(tilt)
    r = _radius(r)
    if r < branch_radius(tilt):
        return (1.0 - r * r) * tilt.cos / (1.0 - 2.0 * r * abs(tilt.sin) + r * r)
    return 1.0


def shifted_logderiv(q, tilt: TiltLike, z):
    """``|z q'(z) / (q(z) + i tan(lam))|`` for a member ``q`` of tilt 0."""
    tilt = as_tilt(tilt)
    z = np.asarray(z, dtype=complex)
    return np.abs(z * q.deriv(z) / (q.value(z) + 1j * math.tan(tilt.lam)))
