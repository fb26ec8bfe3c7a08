"""Explicit SOS certificate constructions and their runtime verification."""

from .akr import akr_polynomial, binomial_poly, falling_factorial_poly
from .certificate import (
    LOWER,
    UPPER,
    Certificate,
    build_certificate,
    certificate_from_json,
    certificate_to_json,
    load_certificate,
    regime_for,
    reported_degree_lower,
    reported_degree_upper,
    save_certificate,
    sigma0_from,
)
from .lower import (
    LowerMeta,
    build_sigma1_lower,
    check_lower_constraints,
    lower_params,
    lower_sigma0_at,
    lower_sigma1_at,
    lower_tau_at,
)
from .transforms import (
    CRWitness,
    Refutation,
    SosDecomposition,
    extract_CR_witness,
    materialize_upper_sos,
    to_refutation,
)
from .upper import UpperMeta, build_M, build_sigma1_upper, f_sqrt_at, hyperbola_value
from .verify import DEFAULT_TOL, VerifyReport, check_root_structure, verify_certificate

__all__ = [
    "akr_polynomial",
    "binomial_poly",
    "falling_factorial_poly",
    "Certificate",
    "LOWER",
    "UPPER",
    "build_certificate",
    "regime_for",
    "sigma0_from",
    "reported_degree_lower",
    "reported_degree_upper",
    "certificate_to_json",
    "certificate_from_json",
    "save_certificate",
    "load_certificate",
    "LowerMeta",
    "UpperMeta",
    "build_sigma1_lower",
    "build_sigma1_upper",
    "build_M",
    "f_sqrt_at",
    "hyperbola_value",
    "lower_params",
    "lower_sigma1_at",
    "lower_sigma0_at",
    "lower_tau_at",
    "check_lower_constraints",
    "check_root_structure",
    "verify_certificate",
    "VerifyReport",
    "DEFAULT_TOL",
    "to_refutation",
    "extract_CR_witness",
    "materialize_upper_sos",
    "Refutation",
    "CRWitness",
    "SosDecomposition",
]
