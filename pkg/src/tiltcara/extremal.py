"""Brute-force certification of the closed-form bounds.

Maxima of continuous convex functionals over the class are attained at the
kernel rotations ``p_lam(x z)``, so a lattice over ``x = e^{i phi}`` followed
by golden-section refinement recovers each bound.  Functionals that are not
convex (the log-derivative, the lower growth bound) are scanned the same way
but flagged in the registry as heuristic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import bounds as B
from .bounds import BoundReport
from .caratheodory import (
    ClassMember,
    DiscreteMeasure,
    TiltAngle,
    TiltLike,
    as_tilt,
    herglotz_build,
)
from .errors import UnknownBound
from .series import DEFAULT_ORDER

DEFAULT_K = 512
DEFAULT_T = 33
REFINE_TOL = 1e-9

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_max(f: Callable[[float], float], a: float, b: float, tol: float = REFINE_TOL):
    """Golden-section search for the maximum of a unimodal ``f`` on ``[a, b]``.

    Returns ``(argmax, max)``.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class Functional:
    """Real functional of ``(p(z), z p'(z), z)``; ``fn`` must broadcast over arrays."""

    name: str
    fn: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    convex: bool = False

    def __call__(self, p, zp, z):
        return self.fn(p, zp, z)


def modulus() -> Functional:
    return Functional("|p|", lambda p, zp, z: np.abs(p), convex=True)


def neg_modulus() -> Functional:
    return Functional("-|p|", lambda p, zp, z: -np.abs(p))


def real_part(sign: float = 1.0) -> Functional:
    return Functional("Re p" if sign > 0 else "-Re p", lambda p, zp, z: sign * np.real(p), convex=True)


def distance_to(center: complex) -> Functional:
    return Functional("|p - c|", lambda p, zp, z: np.abs(p - center), convex=True)


def deriv_modulus() -> Functional:
    # |p'(z)| = |z p'(z)| / |z|
    return Functional("|p'|", lambda p, zp, z: np.abs(zp) / np.abs(z), convex=True)


def logderiv_modulus() -> Functional:
    return Functional("|zp'/p|", lambda p, zp, z: np.abs(zp / p))


def logderiv_imag() -> Functional:
    return Functional("|Im zp'/p|", lambda p, zp, z: np.abs(np.imag(zp / p)))


def logderiv_real() -> Functional:
    return Functional("|Re zp'/p|", lambda p, zp, z: np.abs(np.real(zp / p)))


@dataclass(frozen=True)
class ExtremalFamily:
    """Kernel rotations ``p_lam(x z)`` with ``x = e^{i phi}`` on a uniform lattice."""

    tilt: TiltAngle
    k: int = DEFAULT_K
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tilt", as_tilt(self.tilt))
        if self.k < 2:
            raise ValueError("lattice size must be at least 2")

    @property
    def phis(self) -> np.ndarray:
        return self.phase + 2 * math.pi * np.arange(self.k) / self.k

    @property
    def step(self) -> float:
        return 2 * math.pi / self.k

    def evaluate(self, x, z):
        """``(p, z p')`` of ``p_lam(x z)``, broadcasting ``x`` against ``z``."""
        w = np.asarray(x, dtype=complex) * np.asarray(z, dtype=complex)
        return (1 + self.tilt.e2 * w) / (1 - w), w * self.tilt.m / (1 - w) ** 2


def _kernel_J(family: ExtremalFamily, J: Functional, x, z):
    p, zp = family.evaluate(x, z)
    return J(p, zp, np.broadcast_to(z, p.shape) if np.ndim(p) else z)


def _report(name, bound, achieved, witness, sense="max", **extras) -> BoundReport:
    if bound is None:
        bound, gap = float("nan"), float("nan")
    else:
        gap = bound - achieved if sense == "max" else achieved - bound
    extras.setdefault("sense", sense)
    return BoundReport(float(bound), float(achieved), float(gap), witness, name, extras)


def scan_extremal(
    family: ExtremalFamily,
    J: Functional,
    radii: Sequence[float],
    bound: Optional[Callable[[float], float]] = None,
    refine: bool = True,
    theta_k: Optional[int] = None,
) -> list[BoundReport]:
    """Maximize ``J`` over the ``(phi, theta)`` lattice at each radius.

    Ties resolve to the smallest ``phi`` and then the smallest ``theta``.  With
    ``refine`` the best lattice cell is polished by alternating golden-section
    searches in ``phi`` and ``theta``.
    """
    phis = family.phis
    nt = theta_k or family.k
    thetas = 2 * math.pi * np.arange(nt) / nt
    h_phi, h_theta = family.step, 2 * math.pi / nt
    out = []
    for r in radii:
        r = float(r)
        x = np.exp(1j * phis)[:, None]
        z = r * np.exp(1j * thetas)[None, :]
        vals = np.real(_kernel_J(family, J, x, z))
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        phi, theta, best = float(phis[i]), float(thetas[j]), float(vals[i, j])
        if refine and r > 0:
            for _ in range(2):
                f_phi = lambda a: float(np.real(_kernel_J(family, J, np.exp(1j * a), r * np.exp(1j * theta))))
                a, v = golden_max(f_phi, phi - h_phi, phi + h_phi)
                if v > best:
                    phi, best = a, v
                f_theta = lambda b: float(np.real(_kernel_J(family, J, np.exp(1j * phi), r * np.exp(1j * b))))
                b, v = golden_max(f_theta, theta - h_theta, theta + h_theta)
                if v > best:
                    theta, best = b, v
                h_phi, h_theta = h_phi / 4, h_theta / 4
            h_phi, h_theta = family.step, 2 * math.pi / nt
        witness = (complex(np.exp(1j * phi)), complex(r * np.exp(1j * theta)))
        out.append(_report(J.name, None if bound is None else bound(r), best, witness, radius=r))
    return out


@dataclass(frozen=True)
class WFamily:
    """Two-kernel mixtures ``t p_lam(x z) + (1 - t) p_lam(y z)``."""

    tilt: TiltAngle
    k_x: int = 64
    k_y: int = 64
    k_t: int = DEFAULT_T
    k_theta: int = 16

    def __post_init__(self):
        object.__setattr__(self, "tilt", as_tilt(self.tilt))
        if min(self.k_x, self.k_y, self.k_t, self.k_theta) < 2:
            raise ValueError("lattice sizes must be at least 2")

    @property
    def ts(self):
        return np.linspace(0.0, 1.0, self.k_t)

    @property
    def xs(self):
        return np.exp(2j * math.pi * np.arange(self.k_x) / self.k_x)

    @property
    def ys(self):
        return np.exp(2j * math.pi * np.arange(self.k_y) / self.k_y)

    @property
    def thetas(self):
        return 2 * math.pi * np.arange(self.k_theta) / self.k_theta

    def evaluate(self, t, x, y, z):
        """``(p, z p')`` of the mixture; all arguments broadcast."""
        tilt = self.tilt
        wx, wy = x * z, y * z
        p = t * (1 + tilt.e2 * wx) / (1 - wx) + (1 - t) * (1 + tilt.e2 * wy) / (1 - wy)
        zp = t * wx * tilt.m / (1 - wx) ** 2 + (1 - t) * wy * tilt.m / (1 - wy) ** 2
        return p, zp


def scan_w_family(
    family: WFamily,
    J: Functional,
    radii: Sequence[float],
    bound: Optional[Callable[[float], float]] = None,
) -> list[BoundReport]:
    """Maximize ``J`` over the ``(t, x, y, theta)`` lattice at each radius.

    The conjugate-pair sublattice ``y = conj(x)`` is scanned as well and its
    maximum is reported under ``extras['conjugate_max']``.
    """
    ts, xs, ys, thetas = family.ts, family.xs, family.ys, family.thetas
    out = []
    for r in radii:
        r = float(r)
        best, wit = -np.inf, None
        for it, th in enumerate(thetas):
            z = r * np.exp(1j * th)
            p, zp = family.evaluate(ts[:, None, None], xs[None, :, None], ys[None, None, :], z)
            vals = np.real(J(p, zp, np.full(p.shape, z)))
            idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
            if vals[idx] > best:
                best = float(vals[idx])
                wit = (float(ts[idx[0]]), complex(xs[idx[1]]), complex(ys[idx[2]]), complex(z))
        # conjugate-pair sublattice, x on the same lattice as the general scan
        cbest, cwit = -np.inf, None
        for th in thetas:
            z = r * np.exp(1j * th)
            p, zp = family.evaluate(ts[:, None], xs[None, :], np.conj(xs)[None, :], z)
            vals = np.real(J(p, zp, np.full(p.shape, z)))
            idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
            if vals[idx] > cbest:
                cbest = float(vals[idx])
                cwit = (float(ts[idx[0]]), complex(xs[idx[1]]), complex(np.conj(xs[idx[1]])), complex(z))
        out.append(
            _report(
                J.name,
                None if bound is None else bound(r),
                best,
                wit,
                radius=r,
                conjugate_max=cbest,
                conjugate_witness=cwit,
            )
        )
    return out


def member_seed(base: int, index: int) -> np.random.SeedSequence:
    """Independent stream ``index`` derived from the base seed."""
    return np.random.SeedSequence(entropy=base, spawn_key=(index,))


def random_member(tilt: TiltLike, k_atoms: int, seed, order: int = DEFAULT_ORDER) -> ClassMember:
    """Member with ``k_atoms`` uniform atoms and flat-Dirichlet weights."""
    if k_atoms < 1:
        raise ValueError("k_atoms must be at least 1")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-math.pi, math.pi, k_atoms)
    weights = rng.dirichlet(np.ones(k_atoms)) if k_atoms > 1 else np.ones(1)
    weights = weights / weights.sum()
    return herglotz_build(tilt, DiscreteMeasure.from_angles(angles, weights), order)


def sweep_members(tilt: TiltLike, count: int, base_seed: int = 42, order: int = DEFAULT_ORDER, max_atoms: int = 8):
    """``count`` reproducible members; member ``i`` has ``1 + i % max_atoms`` atoms."""
    for i in range(count):
        yield random_member(tilt, 1 + i % max_atoms, member_seed(base_seed, i), order)


@dataclass(frozen=True)
class BoundSpec:
    functional: Callable[[TiltAngle, float], Functional]
    bound: Callable[[TiltAngle, float], float]
    sense: str = "max"
    convex_reduction: bool = True  # maximum over extreme points justified by convexity


def _growth_lo(t, r):
    return 1.0 / B.growth_A(t, r)


BOUND_REGISTRY: dict[str, BoundSpec] = {
    "coeff": BoundSpec(lambda t, r: None, lambda t, r: B.coeff_bound(t)),
    "deriv": BoundSpec(lambda t, r: deriv_modulus(), B.deriv_bound),
    "disc": BoundSpec(
        lambda t, r: distance_to(B.containment_disc(t, r)[0]), lambda t, r: B.containment_disc(t, r)[1]
    ),
    "growth_hi": BoundSpec(lambda t, r: modulus(), B.growth_A),
    "growth_lo": BoundSpec(lambda t, r: neg_modulus(), _growth_lo, sense="min", convex_reduction=False),
    "re_hi": BoundSpec(lambda t, r: real_part(1.0), lambda t, r: B.re_bounds(t, r)[1]),
    "re_lo": BoundSpec(lambda t, r: real_part(-1.0), lambda t, r: B.re_bounds(t, r)[0], sense="min"),
    "logderiv_M": BoundSpec(lambda t, r: logderiv_modulus(), B.logderiv_M, convex_reduction=False),
}


def _coeff_certificate(tilt: TiltAngle, family: ExtremalFamily, order: int) -> BoundReport:
    x = np.exp(1j * family.phis)
    n = np.arange(1, order + 1)
    # exp(i n phi) directly; repeated powers of x drift off the unit circle
    coeffs = tilt.m * np.exp(1j * np.outer(family.phis, n))
    mods = np.abs(coeffs)
    i, j = np.unravel_index(int(np.argmax(mods)), mods.shape)
    return _report("coeff", B.coeff_bound(tilt), float(mods[i, j]), (complex(x[i]), 0j), n=int(n[j]), convex_reduction=True)


def sharpness_certificate(
    bound_name: str,
    tilt: TiltLike,
    r: float = 0.5,
    k: int = DEFAULT_K,
    order: int = DEFAULT_ORDER,
) -> BoundReport:
    """Compare a registered closed-form bound with the refined extremal scan.

    For ``min``-sense bounds the scan maximizes the negated functional and
    the report carries the natural (un-negated) values.
    """
    if bound_name not in BOUND_REGISTRY:
        raise UnknownBound(bound_name)
    tilt = as_tilt(tilt)
    spec = BOUND_REGISTRY[bound_name]
    family = ExtremalFamily(tilt, k)
    if bound_name == "coeff":
        return _coeff_certificate(tilt, family, order)
    B._radius(r)
    J = spec.functional(tilt, r)
    rep = scan_extremal(family, J, [r])[0]
    achieved = rep.achieved if spec.sense == "max" else -rep.achieved
    bound = spec.bound(tilt, r)
    extras = {"radius": r, "convex_reduction": spec.convex_reduction}
    if bound_name == "logderiv_M" and r > 0:
        x, z = rep.witness
        alpha = math.atan2((x * z).imag, (x * z).real)
        predicted = B.extremal_alpha(tilt, r)
        err = min(abs(B._wrap(alpha - a)) for a in predicted)
        extras.update(alpha=alpha, predicted_alpha=predicted, alpha_error=err)
    return _report(bound_name, bound, achieved, rep.witness, sense=spec.sense, **extras)


def interior_margin(
    bound_name: str,
    tilt: TiltLike,
    r: float,
    seeds: int = 100,
    base_seed: int = 42,
    k_atoms: int = 3,
    n_theta: int = 256,
) -> float:
    """``bound - max`` of the functional over random multi-atom members.

    A positive margin shows random interior members stay strictly inside.
    """
    if bound_name not in BOUND_REGISTRY:
        raise UnknownBound(bound_name)
    tilt = as_tilt(tilt)
    spec = BOUND_REGISTRY[bound_name]
    bound = spec.bound(tilt, r)
    z = r * np.exp(2j * math.pi * np.arange(n_theta) / n_theta)
    J = None if bound_name == "coeff" else spec.functional(tilt, r)
    worst = -np.inf  # largest value of the functional as scanned (negated for min sense)
    for i in range(seeds):
        p = random_member(tilt, k_atoms, member_seed(base_seed, i))
        if J is None:
            v = float(np.max(np.abs(p.series.coeffs[1:])))
        else:
            v = float(np.max(J(p.value(z), z * p.deriv(z), z)))
        worst = max(worst, v)
    if spec.sense == "max":
        return bound - worst
    return -worst - bound
