"""Truncated power series with complex coefficients.

A :class:`TruncatedSeries` holds the Taylor coefficients ``c_0 .. c_N`` of a
function analytic at the origin.  Coefficients above ``N`` are *unknown*, not
zero, so every binary operation truncates to the smaller of the two orders
instead of padding.

    >>> g = geometric(8)            # 1/(1-z)
    >>> (g * g)[:4]                 # 1/(1-z)^2
    array([1.+0.j, 2.+0.j, 3.+0.j, 4.+0.j])
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadBranchAnchor,
    DivisionByNearZeroConstantTerm,
    NonzeroInnerConstant,
    OutsideEvaluationRadius,
)

DEFAULT_ORDER = 64
EPS_DIV = 1e-12
EPS_SERIES = 1e-9
R_MAX = 0.999


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``c_0 .. c_N`` of a power series about 0."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a series needs at least the constant coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, item):
        return self.coeffs[item]

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self.coeffs!r})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def allclose(self, other: "TruncatedSeries", atol: float = EPS_SERIES) -> bool:
        n = min(self.order, other.order)
        return bool(np.all(np.abs(self.coeffs[: n + 1] - other.coeffs[: n + 1]) <= atol))

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = min(self.order, other.order)
            return TruncatedSeries(self.coeffs[: n + 1] + other.coeffs[: n + 1])
        c = self.coeffs.copy()
        c[0] += other
        return TruncatedSeries(c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return TruncatedSeries(self.coeffs * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return div(self, other)
        return TruncatedSeries(self.coeffs / other)

    def __call__(self, z):
        return evaluate(self, z)


# -- constructors -----------------------------------------------------------


def constant(value: complex, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[0] = value
    return TruncatedSeries(c)


def identity(order: int = DEFAULT_ORDER) -> TruncatedSeries:
    """The series of ``z``."""
    c = np.zeros(order + 1, dtype=complex)
    if order >= 1:
        c[1] = 1.0
    return TruncatedSeries(c)


def geometric(order: int = DEFAULT_ORDER, x: complex = 1.0) -> TruncatedSeries:
    """``1/(1 - x z)``, i.e. coefficients ``x**n``."""
    return TruncatedSeries(np.asarray(x, dtype=complex) ** np.arange(order + 1))


def polynomial(coeffs, order: int = DEFAULT_ORDER) -> TruncatedSeries:
    c = np.zeros(order + 1, dtype=complex)
    src = np.asarray(coeffs, dtype=complex)[: order + 1]
    c[: src.size] = src
    return TruncatedSeries(c)


# -- operations -------------------------------------------------------------


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product through ``min(a.order, b.order)``."""
    n = min(a.order, b.order)
    return TruncatedSeries(np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1])


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Series quotient ``a / b``; requires ``|b_0| > EPS_DIV``."""
    b0 = b.coeffs[0]
    if abs(b0) <= EPS_DIV:
        raise DivisionByNearZeroConstantTerm(f"|b_0| = {abs(b0):.3g} <= {EPS_DIV}")
    n = min(a.order, b.order)
    bc = b.coeffs
    c = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        # c_k = (a_k - sum_{j=1..k} b_j c_{k-j}) / b_0
        acc = a.coeffs[k] - np.dot(bc[1 : k + 1], c[k - 1 :: -1][:k]) if k else a.coeffs[0]
        c[k] = acc / b0
    return TruncatedSeries(c)


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Coefficients of ``outer(inner(z))``; ``inner`` must vanish at 0."""
    if inner.coeffs[0] != 0:
        raise NonzeroInnerConstant(f"inner series has constant term {inner.coeffs[0]!r}")
    n = min(outer.order, inner.order)
    w = inner.coeffs[: n + 1]
    acc = np.zeros(n + 1, dtype=complex)
    acc[0] = outer.coeffs[n]
    for k in range(n - 1, -1, -1):
        acc = np.convolve(acc, w)[: n + 1]
        acc[0] += outer.coeffs[k]
    return TruncatedSeries(acc)


def derivative(a: TruncatedSeries) -> TruncatedSeries:
    if a.order == 0:
        return TruncatedSeries([0.0])
    n = np.arange(1, a.order + 1)
    return TruncatedSeries(n * a.coeffs[1:])


def integrate(a: TruncatedSeries, c0: complex = 0.0) -> TruncatedSeries:
    """Antiderivative with constant term ``c0``; the order grows by one."""
    n = np.arange(1, a.order + 2)
    return TruncatedSeries(np.concatenate([[c0], a.coeffs / n]))


def shift_down(a: TruncatedSeries) -> TruncatedSeries:
    """``a(z) / z`` for a series with ``a_0 == 0``."""
    if a.coeffs[0] != 0:
        raise ValueError("series does not vanish at 0")
    if a.order == 0:
        raise ValueError("nothing left after dividing by z")
    return TruncatedSeries(a.coeffs[1:])


def shift_up(a: TruncatedSeries) -> TruncatedSeries:
    """``z * a(z)``; the order grows by one."""
    return TruncatedSeries(np.concatenate([[0.0], a.coeffs]))


def log(a: TruncatedSeries) -> TruncatedSeries:
    """Principal logarithm of a series with constant term exactly 1."""
    if a.coeffs[0] != 1:
        raise BadBranchAnchor(f"log needs constant term 1, got {a.coeffs[0]!r}")
    # log(a)' = a'/a, integrated from log(1) = 0
    return integrate(div(derivative(a), a.truncate(a.order - 1))) if a.order else constant(0, 0)


def exp(a: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with zero constant term."""
    if a.coeffs[0] != 0:
        raise BadBranchAnchor("exp is only supported for series vanishing at 0")
    n = a.order
    L = a.coeffs
    k = np.arange(n + 1)
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    # E' = L' E  =>  j e_j = sum_{k=1..j} k L_k e_{j-k}
    for j in range(1, n + 1):
        e[j] = np.dot(k[1 : j + 1] * L[1 : j + 1], e[j - 1 :: -1][:j]) / j
    return TruncatedSeries(e)


def cpow(base: TruncatedSeries, m: complex) -> TruncatedSeries:
    """``base ** m`` on the principal branch; ``base_0`` must equal 1."""
    if base.coeffs[0] != 1:
        raise BadBranchAnchor(f"cpow needs constant term 1, got {base.coeffs[0]!r}")
    return exp(log(base) * complex(m))


def hadamard(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Termwise (Hadamard) product."""
    n = min(a.order, b.order)
    return TruncatedSeries(a.coeffs[: n + 1] * b.coeffs[: n + 1])


def evaluate(a: TruncatedSeries, z, r_max: float = R_MAX):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    if z.size and np.max(np.abs(z)) > r_max:
        raise OutsideEvaluationRadius(f"|z| = {np.max(np.abs(z)):.6g} exceeds {r_max}")
    acc = np.full(z.shape, a.coeffs[-1], dtype=complex)
    for c in a.coeffs[-2::-1]:
        acc = acc * z + c
    return acc[()] if acc.ndim == 0 else acc


def tail_bound(coeff_modulus_bound: float, order: int, r: float) -> float:
    """Bound on ``sum_{n>order} |c_n| r^n`` when every ``|c_n| <= coeff_modulus_bound``."""
    return coeff_modulus_bound * r ** (order + 1) / (1.0 - r)
