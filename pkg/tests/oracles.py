"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test.
"""
import cmath
import math

import mpmath

mpmath.mp.dps = 40


def naive_cauchy(a, b, n):
    return [sum(a[k] * b[j - k] for k in range(j + 1)) for j in range(n + 1)]


def long_division(num, den, n):
    """Schoolbook power-series long division, pure Python."""
    num = list(num) + [0] * (n + 1 - len(num))
    den = list(den) + [0] * (n + 1 - len(den))
    out = []
    rem = num[:]
    for j in range(n + 1):
        c = rem[j] / den[0]
        out.append(c)
        for k in range(j, n + 1):
            rem[k] -= c * den[k - j]
    return out


def binomial_series(m, n):
    """Coefficients of (1 - z)**m, sum C(m, k)(-z)^k, in 40-digit arithmetic."""
    m = mpmath.mpc(m.real, m.imag)
    return [complex(mpmath.binomial(m, k) * (-1) ** k) for k in range(n + 1)]


def kernel_mp(lam, x, z):
    lam = mpmath.mpf(lam)
    e2 = mpmath.exp(-2j * lam)
    w = mpmath.mpc(x) * mpmath.mpc(z)
    return complex((1 + e2 * w) / (1 - w))


def kernel_logderiv(lam, w):
    """|w k'(w) / k(w)| for the kernel, straight from the quotient formula."""
    e2 = cmath.exp(-2j * lam)
    k = (1 + e2 * w) / (1 - w)
    dk = (1 + e2) / (1 - w) ** 2
    return abs(w * dk / k)


def circle_extremes(f, r, n=200_000):
    """Brute-force (min, max) of a real function on |z| = r, with a dense second pass."""
    h = 2 * math.pi / n
    vals = [f(r * cmath.exp(1j * h * k)) for k in range(n)]
    out = []
    for pick in (min, max):
        k = vals.index(pick(vals))
        local = [f(r * cmath.exp(1j * h * (k + j / 1000))) for j in range(-1000, 1001)]
        out.append(pick(local))
    return tuple(out)
