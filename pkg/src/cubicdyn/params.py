"""Parameter spaces and the maps between them.

Four parameter spaces appear: the affine space of kappa parameters
(five entries tied by one linear relation), the space of local monodromy
traces a, the space of nonzero eigenvalue parameters b, and the space of
cubic-surface coefficients theta.  The forward maps kappa -> a -> theta
and kappa -> b are implemented here, together with the discriminant of
the cubic surface in b-coordinates and membership in the reflection
walls of the affine Weyl group of type D4(1).

All scalars may be Python complex, float, int or Fraction; the maps that
involve cos/exp return complex.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Sequence

__all__ = [
    "KappaPoint",
    "MonodromyTraces",
    "EigenParams",
    "ThetaPoint",
    "WallReport",
    "kappa_to_traces",
    "kappa_to_eigen",
    "traces_from_eigen",
    "traces_to_theta",
    "rh_params",
    "discriminant",
    "wall_membership",
]

_CONSTRAINT_TOL = 1e-12


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _unpair(p) -> complex:
    return complex(p[0], p[1])


def _is_finite(z) -> bool:
    if isinstance(z, Rational):
        return True
    z = complex(z)
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class KappaPoint:
    """A point of the kappa parameter space, 2*k0 + k1 + k2 + k3 + k4 = 1."""

    kappa0: complex
    kappa1: complex
    kappa2: complex
    kappa3: complex
    kappa4: complex

    def __post_init__(self):
        vals = self.as_tuple()
        if not all(_is_finite(v) for v in vals):
            raise ValueError("kappa entries must be finite")
        s = 2 * vals[0] + vals[1] + vals[2] + vals[3] + vals[4]
        if abs(complex(s) - 1) > _CONSTRAINT_TOL:
            raise ValueError(
                "kappa constraint 2*k0 + k1 + k2 + k3 + k4 = 1 violated "
                f"(residual {abs(complex(s) - 1):.3e})"
            )

    @classmethod
    def from_tail(cls, kappa1, kappa2, kappa3, kappa4) -> "KappaPoint":
        """Build from (k1..k4), reconstructing k0 from the linear constraint."""
        tail = (kappa1, kappa2, kappa3, kappa4)
        if all(isinstance(v, (int, Rational)) for v in tail):
            kappa0 = Fraction(1 - sum(Fraction(v) for v in tail), 2)
        else:
            kappa0 = (1 - sum(complex(v) for v in tail)) / 2
        return cls(kappa0, kappa1, kappa2, kappa3, kappa4)

    def as_tuple(self):
        return (self.kappa0, self.kappa1, self.kappa2, self.kappa3, self.kappa4)

    def tail(self):
        return (self.kappa1, self.kappa2, self.kappa3, self.kappa4)

    def is_rational(self) -> bool:
        return all(isinstance(v, (int, Rational)) for v in self.as_tuple())

    def to_json(self) -> dict:
        return {"kappa": [_pair(v) for v in self.as_tuple()]}

    @classmethod
    def from_json(cls, data: dict) -> "KappaPoint":
        return cls(*(_unpair(p) for p in data["kappa"]))


@dataclass(frozen=True)
class MonodromyTraces:
    """Local monodromy traces a = (a1, a2, a3, a4)."""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    def __post_init__(self):
        if not all(_is_finite(v) for v in self.as_tuple()):
            raise ValueError("trace entries must be finite")

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4)

    def to_json(self) -> dict:
        return {"a": [_pair(v) for v in self.as_tuple()]}

    @classmethod
    def from_json(cls, data: dict) -> "MonodromyTraces":
        return cls(*(_unpair(p) for p in data["a"]))


@dataclass(frozen=True)
class EigenParams:
    """Monodromy eigenvalue parameters b = (b1, b2, b3, b4), all nonzero."""

    b1: complex
    b2: complex
    b3: complex
    b4: complex

    def __post_init__(self):
        for l, v in enumerate(self.as_tuple(), start=1):
            if not _is_finite(v):
                raise ValueError(f"b{l} must be finite")
            if v == 0:
                raise ValueError(f"b{l} must be nonzero")

    def as_tuple(self):
        return (self.b1, self.b2, self.b3, self.b4)

    def to_json(self) -> dict:
        return {"b": [_pair(v) for v in self.as_tuple()]}

    @classmethod
    def from_json(cls, data: dict) -> "EigenParams":
        return cls(*(_unpair(p) for p in data["b"]))


@dataclass(frozen=True)
class ThetaPoint:
    """Coefficients theta = (theta1..theta4) of the affine cubic surface."""

    theta1: complex
    theta2: complex
    theta3: complex
    theta4: complex

    def __post_init__(self):
        if not all(_is_finite(v) for v in self.as_tuple()):
            raise ValueError("theta entries must be finite")

    def as_tuple(self):
        return (self.theta1, self.theta2, self.theta3, self.theta4)

    def to_json(self) -> dict:
        return {"theta": [_pair(v) for v in self.as_tuple()]}

    @classmethod
    def from_json(cls, data: dict) -> "ThetaPoint":
        return cls(*(_unpair(p) for p in data["theta"]))


@dataclass
class WallReport:
    """Result of the wall-membership test.

    Each witness is (kind, which, m, residual) with kind one of
    "kappa_i_integer" (which = index i) or "signed_sum_odd"
    (which = sign pattern string such as "+--+").
    """

    on_wall: bool
    witnesses: list = field(default_factory=list)

    def __post_init__(self):
        if self.on_wall != bool(self.witnesses):
            raise ValueError("on_wall must agree with witnesses being nonempty")

    def to_json(self) -> dict:
        return {
            "on_wall": self.on_wall,
            "witnesses": [
                {"kind": k, "which": w, "m": m, "residual": float(r)}
                for (k, w, m, r) in self.witnesses
            ],
        }


def kappa_to_traces(kappa: KappaPoint) -> MonodromyTraces:
    """a_i = 2 cos(pi k_i) for i = 1, 2, 3 and a_4 = -2 cos(pi k_4)."""
    k1, k2, k3, k4 = kappa.tail()
    return MonodromyTraces(
        2 * cmath.cos(cmath.pi * k1),
        2 * cmath.cos(cmath.pi * k2),
        2 * cmath.cos(cmath.pi * k3),
        -2 * cmath.cos(cmath.pi * k4),
    )


def kappa_to_eigen(kappa: KappaPoint) -> EigenParams:
    """b_i = exp(i pi k_i) for i = 1, 2, 3 and b_4 = -exp(i pi k_4)."""
    k1, k2, k3, k4 = kappa.tail()
    return EigenParams(
        cmath.exp(1j * cmath.pi * k1),
        cmath.exp(1j * cmath.pi * k2),
        cmath.exp(1j * cmath.pi * k3),
        -cmath.exp(1j * cmath.pi * k4),
    )


def traces_from_eigen(b: EigenParams) -> MonodromyTraces:
    """a_l = b_l + 1/b_l componentwise."""
    return MonodromyTraces(*(v + 1 / v for v in b.as_tuple()))


def traces_to_theta(a: MonodromyTraces) -> ThetaPoint:
    """theta_i = a_i a_4 + a_j a_k; theta_4 = a1 a2 a3 a4 + sum a_l^2 - 4."""
    a1, a2, a3, a4 = a.as_tuple()
    return ThetaPoint(
        a1 * a4 + a2 * a3,
        a2 * a4 + a3 * a1,
        a3 * a4 + a1 * a2,
        a1 * a2 * a3 * a4 + a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 - 4,
    )


def rh_params(kappa: KappaPoint) -> ThetaPoint:
    """Parameter-level Riemann-Hilbert map: theta from kappa."""
    return traces_to_theta(kappa_to_traces(kappa))


def discriminant(b: EigenParams):
    """Discriminant of the cubic surface in b-coordinates.

    prod_l (b_l - 1/b_l)^2 * prod_{eps in {+-1}^4} (b^eps - 1),
    twenty factors in total; vanishes exactly for singular surfaces.
    """
    bs = b.as_tuple()
    d = 1
    for v in bs:
        d *= (v - 1 / v) ** 2
    for eps in product((1, -1), repeat=4):
        term = 1
        for v, e in zip(bs, eps):
            term *= v if e == 1 else 1 / v
        d *= term - 1
    return d


def _nearest_int(x: float) -> int:
    return int(math.floor(x + 0.5))


def wall_membership(kappa: KappaPoint, mode: str = "exact", tol: float = 1e-9) -> WallReport:
    """Test whether kappa lies on a reflection wall.

    The walls are k_i = m (i = 1..4, m integer) and
    k1 +- k2 +- k3 +- k4 = 2m + 1.  In "exact" mode the entries must be
    rational and membership is decided with exact arithmetic; in
    "tolerant" mode a relation counts when its residual is below tol.
    """
    if mode not in ("exact", "tolerant"):
        raise ValueError(f"unknown mode {mode!r}")
    tail = kappa.tail()
    witnesses = []
    if mode == "exact":
        if not all(isinstance(v, (int, Rational)) for v in tail):
            raise ValueError("exact mode requires rational kappa")
        vals = [Fraction(v) for v in tail]
        for i, v in enumerate(vals, start=1):
            if v.denominator == 1:
                witnesses.append(("kappa_i_integer", i, int(v), 0.0))
        for signs in product((1, -1), repeat=3):
            s = vals[0] + sum(e * v for e, v in zip(signs, vals[1:]))
            if s.denominator == 1 and int(s) % 2 != 0:
                pattern = "+" + "".join("+" if e == 1 else "-" for e in signs)
                witnesses.append(("signed_sum_odd", pattern, (int(s) - 1) // 2, 0.0))
    else:
        vals = [complex(v) for v in tail]
        for i, v in enumerate(vals, start=1):
            m = _nearest_int(v.real)
            r = abs(v - m)
            if r <= tol:
                witnesses.append(("kappa_i_integer", i, m, r))
        for signs in product((1, -1), repeat=3):
            s = vals[0] + sum(e * v for e, v in zip(signs, vals[1:]))
            # nearest odd integer 2m+1
            m = _nearest_int((s.real - 1) / 2)
            r = abs(s - (2 * m + 1))
            if r <= tol:
                pattern = "+" + "".join("+" if e == 1 else "-" for e in signs)
                witnesses.append(("signed_sum_odd", pattern, m, r))
    return WallReport(on_wall=bool(witnesses), witnesses=witnesses)
