"""Members of the tilted Caratheodory class and their characterizations.

A function ``p`` analytic in the unit disc with ``p(0) = 1`` belongs to the
class of tilt ``lam`` when ``Re(exp(i*lam) * p(z)) > 0`` throughout the disc.
Every member is an average of rotations of the kernel

    p_lam(z) = (1 + exp(-2i*lam) z) / (1 - z)

against a probability measure on the unit circle.  Here that measure is always
finite and discrete, which gives exact Taylor coefficients and a closed-form
pointwise evaluator for each member.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import series as S
from .errors import (
    InvalidMeasure,
    InvalidTilt,
    OutsideEvaluationRadius,
    TiltMismatch,
    TiltSumOutOfRange,
)
from .series import R_MAX, TruncatedSeries

EPS_ANGLE = 1e-6
EPS_LINE = 1e-9
MEASURE_TOL = 1e-12


@dataclass(frozen=True)
class TiltAngle:
    """The tilt ``lam``, restricted to ``|lam| <= pi/2 - EPS_ANGLE``."""

    lam: float

    def __post_init__(self):
        lam = float(self.lam)
        if not math.isfinite(lam) or abs(lam) > math.pi / 2 - EPS_ANGLE:
            raise InvalidTilt(f"tilt {self.lam!r} outside (-pi/2, pi/2)")
        object.__setattr__(self, "lam", lam)

    @property
    def cos(self) -> float:
        return math.cos(self.lam)

    @property
    def sin(self) -> float:
        return math.sin(self.lam)

    @property
    def rotation(self) -> complex:
        """``exp(i*lam)``, the factor that maps the tilted half-plane to Re w > 0."""
        return complex(math.cos(self.lam), math.sin(self.lam))

    @property
    def e2(self) -> complex:
        """``exp(-2i*lam)``."""
        return complex(math.cos(2 * self.lam), -math.sin(2 * self.lam))

    @property
    def m(self) -> complex:
        """``1 + exp(-2i*lam)``; its modulus is ``2 cos(lam)``."""
        return 1 + self.e2


TiltLike = Union[TiltAngle, float]


def as_tilt(tilt: TiltLike) -> TiltAngle:
    return tilt if isinstance(tilt, TiltAngle) else TiltAngle(tilt)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Atoms ``x_k`` on the unit circle with convex weights ``t_k``."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.points, dtype=complex)).copy()
        t = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        if x.ndim != 1 or x.shape != t.shape or x.size == 0:
            raise InvalidMeasure("points and weights must be nonempty 1-d arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(t))):
            raise InvalidMeasure("atoms must be finite")
        if np.any(np.abs(np.abs(x) - 1) > MEASURE_TOL):
            raise InvalidMeasure("every atom must lie on the unit circle")
        if np.any(t < 0):
            raise InvalidMeasure("weights must be nonnegative")
        if abs(t.sum() - 1) > MEASURE_TOL:
            raise InvalidMeasure(f"weights sum to {t.sum()!r}, not 1")
        x.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "weights", t)

    @classmethod
    def point(cls, x: complex = 1.0) -> "DiscreteMeasure":
        return cls([x], [1.0])

    @classmethod
    def from_angles(cls, angles, weights) -> "DiscreteMeasure":
        return cls(np.exp(1j * np.asarray(angles, dtype=float)), weights)

    def moments(self, order: int) -> np.ndarray:
        """``sum_k t_k x_k**n`` for ``n = 0 .. order``."""
        n = np.arange(order + 1)
        return (self.weights[None, :] * self.points[None, :] ** n[:, None]).sum(axis=1)

    def product(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        """Push-forward of the product measure under ``(x, y) -> x*y``."""
        x = np.multiply.outer(self.points, other.points).ravel()
        x = x / np.abs(x)
        t = np.multiply.outer(self.weights, other.weights).ravel()
        return DiscreteMeasure(x, t / t.sum())

    def __len__(self):
        return self.points.size


def _check_radius(z):
    z = np.asarray(z, dtype=complex)
    if z.size and np.max(np.abs(z)) > R_MAX:
        raise OutsideEvaluationRadius(f"|z| = {np.max(np.abs(z)):.6g} exceeds {R_MAX}")
    return z


def kernel_eval(tilt: TiltLike, x: complex, z):
    """``p_lam(x z)``."""
    tilt = as_tilt(tilt)
    w = complex(x) * _check_radius(z)
    return (1 + tilt.e2 * w) / (1 - w)


def kernel_deriv(tilt: TiltLike, w):
    """Derivative of the kernel at ``w``: ``(1 + exp(-2i lam)) / (1 - w)^2``."""
    tilt = as_tilt(tilt)
    w = np.asarray(w, dtype=complex)
    return tilt.m / (1 - w) ** 2


def kernel_series(tilt: TiltLike, order: int = S.DEFAULT_ORDER, x: complex = 1.0) -> TruncatedSeries:
    tilt = as_tilt(tilt)
    c = tilt.m * np.asarray(x, dtype=complex) ** np.arange(order + 1)
    c[0] = 1.0
    return TruncatedSeries(c)


Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class ClassMember:
    """A member of the class of a given tilt.

    ``value`` and ``deriv`` evaluate ``p`` and ``p'`` pointwise in closed form;
    ``series`` carries the Taylor coefficients.  ``provenance`` is either the
    representing :class:`DiscreteMeasure` or a short tag naming the closed
    form the member came from.
    """

    tilt: TiltAngle
    series: TruncatedSeries
    value: Evaluator
    deriv: Evaluator
    provenance: Union[DiscreteMeasure, str] = field(default="closed-form")

    def __call__(self, z):
        return self.value(_check_radius(z))

    @property
    def measure(self) -> Optional[DiscreteMeasure]:
        return self.provenance if isinstance(self.provenance, DiscreteMeasure) else None

    def zlogderiv(self, z):
        """``z p'(z) / p(z)``."""
        z = _check_radius(z)
        return z * self.deriv(z) / self.value(z)


def _measure_evaluators(tilt: TiltAngle, mu: DiscreteMeasure):
    x = mu.points
    t = mu.weights
    e2 = tilt.e2
    m = tilt.m

    def value(z):
        w = np.asarray(z, dtype=complex)[..., None] * x
        return ((1 + e2 * w) / (1 - w)) @ t

    def deriv(z):
        w = np.asarray(z, dtype=complex)[..., None] * x
        return (m / (1 - w) ** 2) @ (t * x)

    return value, deriv


def herglotz_build(tilt: TiltLike, mu: DiscreteMeasure, order: int = S.DEFAULT_ORDER) -> ClassMember:
    """The member ``p(z) = sum_k t_k p_lam(x_k z)``."""
    tilt = as_tilt(tilt)
    if not isinstance(mu, DiscreteMeasure):
        raise InvalidMeasure(f"expected a DiscreteMeasure, got {type(mu).__name__}")
    c = tilt.m * mu.moments(order)
    c[0] = 1.0
    value, deriv = _measure_evaluators(tilt, mu)
    return ClassMember(tilt, TruncatedSeries(c), value, deriv, mu)


def kernel_member(tilt: TiltLike, x: complex = 1.0, order: int = S.DEFAULT_ORDER) -> ClassMember:
    return herglotz_build(tilt, DiscreteMeasure.point(x), order)


def tilt_to_base(p: ClassMember) -> ClassMember:
    """``q = (exp(i lam) p - i sin(lam)) / cos(lam)``, a member of tilt 0."""
    tilt = p.tilt
    rot, s, c = tilt.rotation, tilt.sin, tilt.cos
    if p.measure is not None:
        # the affine map sends p_lam(xz) to p_0(xz), so the measure is unchanged
        return herglotz_build(0.0, p.measure, p.series.order)
    q_series = (p.series * rot - 1j * s) / c
    coeffs = q_series.coeffs.copy()
    coeffs[0] = 1.0
    return ClassMember(
        TiltAngle(0.0),
        TruncatedSeries(coeffs),
        lambda z: (rot * p.value(z) - 1j * s) / c,
        lambda z: rot * p.deriv(z) / c,
        "tilt_to_base",
    )


def base_to_tilt(q: ClassMember, tilt: TiltLike) -> ClassMember:
    """Inverse of :func:`tilt_to_base`: ``p = exp(-i lam) (cos(lam) q + i sin(lam))``."""
    if q.tilt.lam != 0.0:
        raise TiltMismatch("base_to_tilt expects a member of tilt 0")
    tilt = as_tilt(tilt)
    if q.measure is not None:
        return herglotz_build(tilt, q.measure, q.series.order)
    rot_inv, s, c = tilt.rotation.conjugate(), tilt.sin, tilt.cos
    p_series = (q.series * c + 1j * s) * rot_inv
    coeffs = p_series.coeffs.copy()
    coeffs[0] = 1.0
    return ClassMember(
        tilt,
        TruncatedSeries(coeffs),
        lambda z: rot_inv * (c * q.value(z) + 1j * s),
        lambda z: rot_inv * c * q.deriv(z),
        "base_to_tilt",
    )


@dataclass(frozen=True, eq=False)
class EvaluationGrid:
    """Polar grid ``z = r e^{i theta}``; both axes strictly increasing."""

    radii: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.radii, dtype=float)).copy()
        a = np.atleast_1d(np.asarray(self.angles, dtype=float)).copy()
        if r.size == 0 or a.size == 0:
            raise ValueError("grid must be nonempty")
        if np.any(np.diff(r) <= 0) or np.any(np.diff(a) <= 0):
            raise ValueError("grid radii and angles must be strictly increasing")
        if r[0] <= 0 or r[-1] > R_MAX:
            raise ValueError(f"grid radii must lie in (0, {R_MAX}]")
        if a[0] <= -math.pi or a[-1] > math.pi:
            raise ValueError("grid angles must lie in (-pi, pi]")
        r.setflags(write=False)
        a.setflags(write=False)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "angles", a)

    @classmethod
    def standard(cls) -> "EvaluationGrid":
        return cls(STANDARD_RADII, equispaced_angles(256))

    @property
    def points(self) -> np.ndarray:
        """Grid points shaped ``(len(radii), len(angles))``."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    @property
    def shape(self):
        return (self.radii.size, self.angles.size)


def equispaced_angles(n: int) -> np.ndarray:
    """``n`` equispaced angles in ``(-pi, pi]``, ending at ``pi``."""
    return -math.pi + 2 * math.pi * np.arange(1, n + 1) / n


STANDARD_RADII = np.concatenate([np.linspace(0.05, 0.95, 23), [0.99]])


@dataclass(frozen=True)
class MembershipReport:
    min_value: float
    argmin: tuple  # (radius, angle)
    passed: bool


def _argmin_lex(values: np.ndarray, grid: EvaluationGrid):
    # flattened C-order argmin returns the first minimum, i.e. the smallest
    # radius and then the smallest angle among ties
    i = int(np.argmin(values))
    ir, ia = np.unravel_index(i, values.shape)
    return float(values[ir, ia]), (float(grid.radii[ir]), float(grid.angles[ia]))


def membership_test(evaluator, tilt: TiltLike, grid: Optional[EvaluationGrid] = None) -> MembershipReport:
    """Minimum of ``Re(exp(i lam) p)`` over the grid; passes iff it is positive."""
    tilt = as_tilt(tilt)
    grid = grid or EvaluationGrid.standard()
    vals = np.real(tilt.rotation * evaluator(grid.points))
    vmin, where = _argmin_lex(vals, grid)
    return MembershipReport(vmin, where, bool(vmin > 0))


def subordination_omega(p: ClassMember) -> TruncatedSeries:
    """Schwarz function ``w`` with ``p = p_lam(w)``, i.e. ``(p - 1) / (p + exp(-2i lam))``."""
    e2 = p.tilt.e2
    w = S.div(p.series - 1.0, p.series + e2)
    c = w.coeffs.copy()
    c[0] = 0.0
    return TruncatedSeries(c)


def omega_eval(p: ClassMember, z):
    """Pointwise value of the subordinating Schwarz function."""
    v = p(z)
    return (v - 1) / (v + p.tilt.e2)


def line_point(tilt: TiltLike, x):
    """Boundary value ``p_lam(x)`` for ``|x| = 1``, ``x != 1``.

    As ``x`` runs over the circle these points sweep the whole line
    ``Re(exp(i lam) w) = 0``.
    """
    tilt = as_tilt(tilt)
    x = np.asarray(x, dtype=complex)
    return (1 + tilt.e2 * x) / (1 - x)


def default_line_samples(n: int = 64) -> np.ndarray:
    """``n`` equispaced unimodular points, skipping ``x = 1``."""
    return np.exp(2j * math.pi * np.arange(1, n + 1) / (n + 1))


@dataclass(frozen=True)
class DualLineReport:
    min_distance: float
    passed: bool


def dual_line_check(
    p: ClassMember,
    grid: Optional[EvaluationGrid] = None,
    x_samples: Optional[Sequence[complex]] = None,
) -> DualLineReport:
    """Check ``(h * p)`` never vanishes for the dual test functions ``h``.

    For a sample point ``x`` the dual test function is ``(1 + A z)/(1 - z)``
    with ``A = (1 - e2 v) / ((1 + e2) v)`` and ``v = -x``; its convolution
    with ``p`` is ``(1 + A) p - A``, which vanishes exactly when ``p`` takes
    the boundary value ``line_point(tilt, x)``.
    """
    grid = grid or EvaluationGrid.standard()
    xs = default_line_samples() if x_samples is None else np.asarray(x_samples, dtype=complex)
    if np.any(np.abs(xs - 1) < 1e-15):
        raise ValueError("x = 1 is the point at infinity of the line and must be excluded")
    e2 = p.tilt.e2
    v = -xs
    A = (1 - e2 * v) / ((1 + e2) * v)
    pz = p(grid.points).ravel()
    conv = (1 + A)[None, :] * pz[:, None] - A[None, :]
    # |conv| / |1 + A| is the distance from p(z) to the excluded value
    dist = np.abs(conv) / np.abs(1 + A)[None, :]
    dmin = float(dist.min())
    return DualLineReport(dmin, dmin > EPS_LINE)


def hadamard_members(p1: ClassMember, p2: ClassMember) -> Callable:
    """Pointwise evaluator of ``p1 * p2`` (Hadamard product).

    Closed form when both factors carry a measure; otherwise falls back to
    series evaluation, which is only accurate well inside the disc.
    """
    if p1.measure is not None and p2.measure is not None:
        mu = p1.measure.product(p2.measure)
        c = p1.tilt.m * p2.tilt.m

        def value(z):
            w = np.asarray(z, dtype=complex)[..., None] * mu.points
            return 1 + c * ((w / (1 - w)) @ mu.weights)

        return value
    s = S.hadamard(p1.series, p2.series)
    return lambda z: S.evaluate(s, z)


def schur_half_hadamard(p1: ClassMember, p2: ClassMember) -> ClassMember:
    """``1 + sum a_n b_n / 2 z^n`` for two members of tilt 0."""
    if p1.tilt.lam != 0.0 or p2.tilt.lam != 0.0:
        raise TiltMismatch("both factors must have tilt 0")
    if p1.measure is not None and p2.measure is not None:
        # 2 sum t x^n * 2 sum s y^n / 2 = 2 sum t s (x y)^n
        return herglotz_build(0.0, p1.measure.product(p2.measure), min(p1.series.order, p2.series.order))
    c = (S.hadamard(p1.series, p2.series) * 0.5).coeffs.copy()
    c[0] = 1.0
    s = TruncatedSeries(c)
    return ClassMember(
        TiltAngle(0.0),
        s,
        lambda z: S.evaluate(s, z),
        lambda z: S.evaluate(S.derivative(s), z),
        "schur",
    )


@dataclass(frozen=True)
class ConvolutionReport:
    min_value: float
    argmin: tuple
    lower_bound: float
    holds: bool
    membership: Optional[bool]


def tilted_convolution_bound(
    p1: ClassMember,
    p2: ClassMember,
    grid: Optional[EvaluationGrid] = None,
    claim_membership: bool = False,
) -> ConvolutionReport:
    """Check ``Re(exp(i(l1 + l2)) (p1 * p2)) > -cos(l1 - l2)`` on the grid.

    With ``claim_membership`` the report also states whether ``p1 * p2``
    passes the membership test for tilt ``l1 + l2``; the claim is only made
    when ``cos(l1 - l2) <= 0``.
    """
    grid = grid or EvaluationGrid.standard()
    l1, l2 = p1.tilt.lam, p2.tilt.lam
    rot = complex(math.cos(l1 + l2), math.sin(l1 + l2))
    h = hadamard_members(p1, p2)
    vals = np.real(rot * h(grid.points))
    vmin, where = _argmin_lex(vals, grid)
    lower = -math.cos(l1 - l2)
    membership = None
    if claim_membership:
        if abs(l1 + l2) >= math.pi / 2 - EPS_ANGLE:
            raise TiltSumOutOfRange(f"l1 + l2 = {l1 + l2!r} is not a valid tilt")
        if lower >= 0:
            membership = bool(vmin > 0)
    return ConvolutionReport(vmin, where, lower, bool(vmin > lower - S.EPS_SERIES), membership)
