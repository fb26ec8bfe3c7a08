"""Exact-rational and high-precision polynomial arithmetic substrate.

All operations are pure functions on immutable values; safe to use from
any number of threads.
"""

from fractions import Fraction as Rational

from .chebyshev import (
    cheb_T,
    cheb_eval,
    cheb_growth_lower_bound,
    cheb_root0_upper_bound,
    smallest_root_shifted_cheb,
)
from .hpfloat import DEFAULT_PRECISION, HPFloat, default_precision, pi
from .interpolate import interpolation_precision, newton_interpolate
from .signprofile import SignProfile, integer_sign_profile, profile_from_values
from .unipoly import HPF, RATIONAL, UniPoly

__all__ = [
    "Rational",
    "HPFloat",
    "UniPoly",
    "RATIONAL",
    "HPF",
    "DEFAULT_PRECISION",
    "default_precision",
    "pi",
    "cheb_T",
    "cheb_eval",
    "cheb_root0_upper_bound",
    "cheb_growth_lower_bound",
    "smallest_root_shifted_cheb",
    "newton_interpolate",
    "interpolation_precision",
    "SignProfile",
    "integer_sign_profile",
    "profile_from_values",
]
