"""Numerics for the tilted Caratheodory class.

Construction of class members from discrete measures, the closed-form sharp
bounds, brute-force sharpness certificates over the extreme points, and the
derived classes of normalized functions.
"""
from .bounds import (
    BoundReport,
    containment_disc,
    coeff_bound,
    deriv_bound,
    extremal_alpha,
    growth_A,
    logderiv_M,
    logderiv_N,
    re_bounds,
    slit_membership,
)
from .caratheodory import (
    ClassMember,
    DiscreteMeasure,
    EvaluationGrid,
    TiltAngle,
    herglotz_build,
    kernel_eval,
    membership_test,
    subordination_omega,
    tilt_to_base,
)
from .extremal import random_member, sharpness_certificate
from .series import TruncatedSeries

__version__ = "0.1.0"
