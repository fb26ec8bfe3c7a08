"""Certificate container, regime dispatch, degree accounting, JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .._version import __version__ as _lib_version
from ..errors import InvalidCertificateError, RegimeError
from ..model import KnapsackInstance, format_q, parse_q
from ..numerics import HPF, HPFloat, RATIONAL, UniPoly
from ..numerics.hpfloat import default_precision, mpfr_to_decimal
from .lower import LowerMeta, build_sigma1_lower, lower_params, lower_values_at
from .upper import UpperMeta, build_sigma1_upper

LOWER = "lower"
UPPER = "upper"


def regime_for(inst: KnapsackInstance) -> str | None:
    """Natural regime, or None when the instance has trivial rank 0.

    The boundary window q in [floor(n/2), floor(n/2)+1) routes to the
    upper construction; only q < floor(n/2) uses the Chebyshev one.
    """
    if inst.q_hat == 0 or not (0 < inst.q < inst.n):
        return None
    return LOWER if inst.q < inst.n // 2 else UPPER


def sigma0_from(sigma1: UniPoly, inst: KnapsackInstance) -> UniPoly:
    """sigma0 = (x - ceil q) - (x - q) sigma1 over sigma1's coefficient field."""
    if sigma1.kind == RATIONAL:
        lin = UniPoly([Fraction(-inst.ceil_q), Fraction(1)])
        xq = UniPoly([-inst.q, Fraction(1)])
        return lin - xq * sigma1
    prec = sigma1.prec
    lin = UniPoly([Fraction(-inst.ceil_q), Fraction(1)], kind=HPF, prec=prec)
    xq = UniPoly([-inst.q, Fraction(1)], kind=HPF, prec=prec)
    return lin - xq * sigma1


@dataclass(frozen=True)
class Certificate:
    inst: KnapsackInstance
    regime: str
    sigma1: UniPoly
    sigma0: UniPoly
    meta: LowerMeta | UpperMeta
    reported_degree: int

    @property
    def precision_bits(self) -> int:
        return self.meta.precision_bits

    @property
    def dense_grid_reliable(self) -> bool:
        return self.meta.dense_grid_reliable

    # -- grid evaluation -----------------------------------------------------
    #
    # Lower-regime values always go through the Chebyshev closed form:
    # power-basis Horner needs ~1.9 deg(sigma1) bits to mean anything in
    # the middle of [0, n] and costs O(deg) per point.  Consistency of
    # the stored dense coefficients with the closed form is checked
    # separately (coefficient-identity residual plus head-window spot
    # comparison, where Horner conditioning is benign).

    def values_at(self, x, prec: int | None = None) -> tuple[HPFloat, HPFloat]:
        """(sigma1(x), sigma0(x))."""
        prec = prec or min(self.precision_bits, default_precision())
        if self.regime == LOWER:
            return lower_values_at(self.inst, self.meta, x, prec)
        xv = x if isinstance(x, HPFloat) else HPFloat(Fraction(x), self.precision_bits)
        return (
            self.sigma1(xv).with_precision(prec),
            self.sigma0(xv).with_precision(prec),
        )

    def sigma1_at(self, x, prec: int | None = None) -> HPFloat:
        return self.values_at(x, prec)[0]

    def sigma0_at(self, x, prec: int | None = None) -> HPFloat:
        return self.values_at(x, prec)[1]


def reported_degree_lower(sigma1: UniPoly, sigma0: UniPoly) -> int:
    """Smallest d with deg sigma1 <= 2d and deg sigma0 <= 2d + 2."""
    d1 = (sigma1.degree + 1) // 2
    d0 = max(0, (sigma0.degree - 1) // 2)
    return max(d1, d0)


def reported_degree_upper(inst: KnapsackInstance, sigma0: UniPoly) -> int:
    """Degree of the materialized hypercube certificate.

    The consecutive-roots block for sigma0 costs n - floor q; the
    leftover factor p (degree deg sigma0 - (n - floor q) - 1, assuming
    simple roots) adds ceil(deg p / 2) + 1 through its interval lifting,
    except that a constant p lifts for free.  This is what actually
    upper-bounds the SOS rank; the bare univariate degree count does not
    (the rational-coefficient block certificates have degree 2(n-floor q)+2
    regardless of deg sigma1).
    """
    k = inst.n - inst.floor_q
    deg_p = max(0, sigma0.degree - k - 1)
    p_part = 0 if deg_p == 0 else (deg_p + 1) // 2 + 1
    return k + p_part


def build_certificate(
    inst: KnapsackInstance,
    prec: int | None = None,
    regime: str = "auto",
) -> Certificate:
    """Construct the certificate for inst in the requested regime."""
    if regime == "auto":
        chosen = regime_for(inst)
        if chosen is None:
            raise RegimeError(
                f"{inst} has trivial SOS rank 0; no certificate construction applies"
            )
    elif regime in (LOWER, UPPER):
        chosen = regime
    else:
        raise ValueError(f"unknown regime {regime!r}")
    if chosen == LOWER:
        sigma1, meta = build_sigma1_lower(inst, prec)
        sigma0 = sigma0_from(sigma1, inst)
        reported = reported_degree_lower(sigma1, sigma0)
    else:
        sigma1, meta = build_sigma1_upper(inst, prec)
        sigma0 = sigma0_from(sigma1, inst)
        reported = reported_degree_upper(inst, sigma0)
    return Certificate(inst, chosen, sigma1, sigma0, meta, reported)


# -- JSON serialization ----------------------------------------------------------


def _poly_to_json(p: UniPoly) -> dict:
    if p.kind == RATIONAL:
        return {"kind": "rational", "coefficients": [str(c) for c in p.coeffs]}
    return {
        "kind": "hpfloat",
        "precision_bits": p.prec,
        "coefficients": [mpfr_to_decimal(c, p.prec) for c in p.coeffs],
    }


def _poly_from_json(obj: dict) -> UniPoly:
    if obj["kind"] == "rational":
        return UniPoly([Fraction(c) for c in obj["coefficients"]], kind=RATIONAL)
    prec = int(obj["precision_bits"])
    return UniPoly(
        [HPFloat.from_decimal_string(c, prec) for c in obj["coefficients"]],
        kind=HPF,
        prec=prec,
    )


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert.meta, LowerMeta):
        meta = {
            "d": cert.meta.d,
            "m": cert.meta.m,
            "N": cert.meta.N,
            "r0": cert.meta.r0.to_decimal_string(),
            "tau": _poly_to_json(cert.meta.tau),
        }
    else:
        meta = {
            "L": _poly_to_json(cert.meta.L),
            "V": _poly_to_json(cert.meta.V),
            "interpolation_precision_bits": cert.meta.precision_bits,
        }
    return {
        "format": "soskp-certificate/1",
        "library_version": _lib_version,
        "n": cert.inst.n,
        "q": format_q(cert.inst.q),
        "regime": cert.regime,
        "precision_bits": cert.precision_bits,
        "dense_grid_reliable": cert.dense_grid_reliable,
        "sigma1": _poly_to_json(cert.sigma1),
        "sigma0": _poly_to_json(cert.sigma0),
        "meta": meta,
        "reported_degree": cert.reported_degree,
    }


def certificate_from_json(obj: dict) -> Certificate:
    if obj.get("format") != "soskp-certificate/1":
        raise InvalidCertificateError(f"unknown certificate format {obj.get('format')!r}")
    inst = KnapsackInstance(int(obj["n"]), parse_q(obj["q"]))
    regime = obj["regime"]
    prec = int(obj["precision_bits"])
    sigma1 = _poly_from_json(obj["sigma1"])
    sigma0 = _poly_from_json(obj["sigma0"])
    m = obj["meta"]
    if regime == LOWER:
        meta = LowerMeta(
            d=int(m["d"]),
            m=int(m["m"]),
            N=int(m["N"]),
            r0=HPFloat.from_decimal_string(m["r0"], prec),
            tau=_poly_from_json(m["tau"]),
            precision_bits=prec,
            dense_grid_reliable=bool(obj["dense_grid_reliable"]),
        )
    elif regime == UPPER:
        meta = UpperMeta(
            L=_poly_from_json(m["L"]),
            V=_poly_from_json(m["V"]),
            precision_bits=int(m["interpolation_precision_bits"]),
            dense_grid_reliable=bool(obj["dense_grid_reliable"]),
        )
    else:
        raise InvalidCertificateError(f"unknown regime {regime!r}")
    return Certificate(inst, regime, sigma1, sigma0, meta, int(obj["reported_degree"]))


def save_certificate(cert: Certificate, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(certificate_to_json(cert), fh)


def load_certificate(path: str) -> Certificate:
    with open(path) as fh:
        return certificate_from_json(json.load(fh))
