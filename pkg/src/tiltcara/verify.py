"""Property sweeps that back the ``verify`` command.

Each check yields a :class:`CheckResult`; the suite passes iff every check
does.  All randomness flows from one base seed through
:func:`tiltcara.extremal.member_seed`.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import bounds as B
from . import caratheodory as C
from . import extremal as E
from . import series as S

DEFAULT_LAMBDAS = (0.0, 0.3, -0.3, 0.9, -0.9, 1.3, -1.3)
CERT_RADII = (0.2, 0.5, 0.8)
TOL = 1e-9
GAP_TOL = 1e-6


@dataclass
class CheckResult:
    name: str
    lam: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _grid_bounds(tilt: C.TiltAngle, grid: C.EvaluationGrid):
    centers, radii, M = [], [], []
    for r in grid.radii:
        c, rad = B.containment_disc(tilt, r)
        centers.append(c)
        radii.append(rad)
        M.append(B.logderiv_M(tilt, r))
    return np.array(centers)[:, None], np.array(radii)[:, None], np.array(M)[:, None]


def member_checks(tilt: C.TiltAngle, seeds: int, base_seed: int, order: int, grid=None):
    """Class-wide inequalities over a seeded sweep of random members."""
    grid = grid or C.EvaluationGrid.standard()
    z = grid.points
    center, rad, M = _grid_bounds(tilt, grid)
    cb = B.coeff_bound(tilt)
    worst = dict(coeff=-np.inf, disc=-np.inf, logderiv=-np.inf, im=-np.inf, re=-np.inf, roundtrip=0.0, omega_max=0.0)
    worst.update(member=np.inf, base=np.inf)  # minima
    for p in E.sweep_members(tilt, seeds, base_seed, order):
        worst["coeff"] = max(worst["coeff"], float(np.abs(p.series.coeffs[1:]).max() - cb))
        pv, dv = p.value(z), p.deriv(z)
        worst["member"] = min(worst["member"], float(np.real(tilt.rotation * pv).min()))
        worst["disc"] = max(worst["disc"], float((np.abs(pv - center) - rad).max()))
        q = z * dv / pv
        worst["logderiv"] = max(worst["logderiv"], float((np.abs(q) - M).max()))
        worst["im"] = max(worst["im"], float((np.abs(q.imag) - M).max()))
        worst["re"] = max(worst["re"], float((np.abs(q.real) - M).max()))
        p32 = C.herglotz_build(tilt, p.measure, min(order, 32))
        w = C.subordination_omega(p32)
        back = S.compose(C.kernel_series(tilt, w.order), w)
        worst["roundtrip"] = max(worst["roundtrip"], float(np.abs(back.coeffs - p32.series.coeffs).max()))
        worst["omega_max"] = max(worst["omega_max"], float(np.abs(C.omega_eval(p, z)).max()))
        base = C.tilt_to_base(p)
        worst["base"] = min(worst["base"], float(np.real(base.value(z)).min()))
    name = "members"
    return [
        CheckResult(f"{name}:coeff", tilt.lam, worst["coeff"] <= TOL, {"excess": worst["coeff"]}),
        CheckResult(f"{name}:membership", tilt.lam, worst["member"] > 0, {"min": worst["member"]}),
        CheckResult(f"{name}:disc", tilt.lam, worst["disc"] <= TOL, {"excess": worst["disc"]}),
        CheckResult(f"{name}:logderiv", tilt.lam, worst["logderiv"] <= TOL, {"excess": worst["logderiv"]}),
        CheckResult(f"{name}:logderiv_im", tilt.lam, worst["im"] <= TOL, {"excess": worst["im"]}),
        CheckResult(f"{name}:logderiv_re", tilt.lam, worst["re"] <= TOL, {"excess": worst["re"]}),
        CheckResult(f"{name}:subordination", tilt.lam, worst["roundtrip"] <= TOL and worst["omega_max"] < 1,
                    {"roundtrip": worst["roundtrip"], "omega_max": worst["omega_max"]}),
        CheckResult(f"{name}:tilt_to_base", tilt.lam, worst["base"] > 0, {"min_re": worst["base"]}),
    ]


def kernel_checks(tilt: C.TiltAngle, order: int):
    out = []
    single = C.kernel_member(tilt, 1.0, order)
    err = float(np.abs(np.abs(single.series.coeffs[1:]) - B.coeff_bound(tilt)).max())
    out.append(CheckResult("kernel:coeff_equality", tilt.lam, err <= 1e-12, {"error": err}))
    rep = C.dual_line_check(single)
    out.append(CheckResult("kernel:dual_line", tilt.lam, rep.passed, {"min_distance": rep.min_distance}))
    grid = C.EvaluationGrid.standard()
    vals = single.zlogderiv(grid.points)
    inside = bool(np.all(B.slit_membership(tilt, vals)))
    out.append(CheckResult("kernel:slit", tilt.lam, inside))
    rb = B.branch_radius(tilt)
    if 0 < rb < 1:
        lhs = 2 * rb * tilt.cos / (1 + rb * rb - 2 * rb * abs(tilt.sin))
        jump = abs(lhs - 2 * rb / (1 - rb * rb))
        out.append(CheckResult("bounds:M_continuity", tilt.lam, jump <= 1e-12, {"jump": jump}))
    return out


def certificate_checks(tilt: C.TiltAngle, radii=CERT_RADII, k: int = E.DEFAULT_K, order: int = S.DEFAULT_ORDER):
    out = []
    for name in E.BOUND_REGISTRY:
        for r in (radii if name != "coeff" else radii[:1]):
            rep = E.sharpness_certificate(name, tilt, r, k=k, order=order)
            ok = -TOL <= rep.gap <= GAP_TOL
            out.append(CheckResult(f"certificate:{name}", tilt.lam, ok, {"r": r, "bound": rep.bound, "gap": rep.gap}))
    return out


def convolution_checks(pairs: int, base_seed: int, order: int):
    out = []
    worst_schur, worst_conv = np.inf, np.inf
    for i in range(pairs):
        rng = np.random.default_rng(E.member_seed(base_seed, 10_000 + i))
        s1, s2 = E.member_seed(base_seed, 20_000 + 2 * i), E.member_seed(base_seed, 20_001 + 2 * i)
        a = E.random_member(0.0, 3, s1, order)
        b = E.random_member(0.0, 3, s2, order)
        worst_schur = min(worst_schur, C.membership_test(C.schur_half_hadamard(a, b), 0.0).min_value)
        l1, l2 = rng.uniform(-1.3, 1.3, 2)
        p1 = E.random_member(l1, 3, s1, order)
        p2 = E.random_member(l2, 3, s2, order)
        rep = C.tilted_convolution_bound(p1, p2)
        worst_conv = min(worst_conv, rep.min_value - rep.lower_bound)
    out.append(CheckResult("convolution:schur", 0.0, worst_schur > 0, {"min": float(worst_schur)}))
    out.append(CheckResult("convolution:tilted", 0.0, worst_conv > -TOL, {"min_margin": float(worst_conv)}))
    return out


def run_suite(lambdas=DEFAULT_LAMBDAS, seeds: int = 20, base_seed: int = 42, order: int = S.DEFAULT_ORDER):
    """All checks for the given tilts; returns the list of results."""
    results = []
    for lam in lambdas:
        tilt = C.TiltAngle(lam)
        results += member_checks(tilt, seeds, base_seed, order)
        results += kernel_checks(tilt, order)
        results += certificate_checks(tilt, order=order)
    results += convolution_checks(max(1, seeds), base_seed, order)
    # M is non-increasing in |lam| and capped by its tilt-0 value
    lam_grid = np.linspace(0.0, 1.4, 50)
    r_grid = np.linspace(0.0, 0.98, 50)
    Mv = np.array([[B.logderiv_M(l, r) for r in r_grid] for l in lam_grid])
    mono = bool(np.all(np.diff(Mv, axis=0) <= 1e-12))
    cap = bool(np.all(Mv <= 2 * r_grid / (1 - r_grid**2) + 1e-12))
    results.append(CheckResult("bounds:M_monotone", 0.0, mono and cap))
    return results
