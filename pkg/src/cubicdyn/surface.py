"""The affine cubic surface and its birational dynamics.

The surface is the zero set of

    f(x, theta) = x1 x2 x3 + x1^2 + x2^2 + x3^2
                  - theta1 x1 - theta2 x2 - theta3 x3 + theta4

in C^3.  Three involutions sigma_i flip the deck of the degree-2
projection along the x_i-axis, three braid maps g_i act on (x, theta)
with a transposition on theta, and the distinguished composition
c = sigma1 o sigma2 o sigma3 (sigma3 applied first) drives the
periodic-point counts.

All maps are total polynomial maps on C^3 and are generic over the
scalar type: complex, float or Fraction entries all work, so identities
can be checked exactly in rational arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .params import ThetaPoint

__all__ = [
    "AffinePoint",
    "GeneratorLetter",
    "GroupWord",
    "MapResult",
    "cubic_eval",
    "cubic_gradient",
    "sigma_apply",
    "g_apply",
    "word_apply",
    "coxeter_apply",
    "coxeter_jacobian",
    "parse_word",
    "surface_residual_bound",
    "DEFAULT_ESCAPE_RADIUS",
    "DEFAULT_SURFACE_TOL",
]

DEFAULT_ESCAPE_RADIUS = 1e8
DEFAULT_SURFACE_TOL = 1e-9


def _coerce_theta(theta):
    if isinstance(theta, ThetaPoint):
        return theta.as_tuple()
    t = tuple(theta)
    if len(t) != 4:
        raise ValueError("theta must have four entries")
    return t


def surface_residual_bound(x: Sequence, tol: float = DEFAULT_SURFACE_TOL) -> float:
    """Residual threshold scaled by the cubic growth of f: tol * (1 + |x|^3)."""
    nrm = max(abs(complex(v)) for v in x)
    return tol * (1 + nrm**3)


@dataclass(frozen=True)
class AffinePoint:
    """A point x = (x1, x2, x3) of C^3 in trace coordinates."""

    x1: complex
    x2: complex
    x3: complex

    def as_tuple(self):
        return (self.x1, self.x2, self.x3)

    def residual(self, theta) -> float:
        return abs(complex(cubic_eval(self.as_tuple(), theta)))

    def on_surface(self, theta, tol: float = DEFAULT_SURFACE_TOL) -> bool:
        return self.residual(theta) <= surface_residual_bound(self.as_tuple(), tol)

    def to_json(self, theta=None) -> dict:
        data = {"x": [[complex(v).real, complex(v).imag] for v in self.as_tuple()]}
        if theta is not None:
            data["residual"] = self.residual(theta)
        return data


@dataclass(frozen=True)
class GeneratorLetter:
    """One generator: sigma_i (kind "sigma") or g_i^{+-1} (kind "g")."""

    kind: str
    index: int
    power: int = 1

    def __post_init__(self):
        if self.kind not in ("sigma", "g"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.index not in (1, 2, 3):
            raise ValueError("generator index must be 1, 2 or 3")
        if self.power not in (1, -1):
            raise ValueError("generator power must be +1 or -1")
        if self.kind == "sigma" and self.power != 1:
            raise ValueError("sigma letters are involutions; power is fixed to +1")

    def __str__(self):
        if self.kind == "sigma":
            return f"s{self.index}"
        return f"g{self.index}" + ("" if self.power == 1 else "^-1")


@dataclass(frozen=True)
class GroupWord:
    """A composition of generator letters, rightmost letter applied first."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(str(l) for l in self.letters)


@dataclass
class MapResult:
    point: AffinePoint
    theta: ThetaPoint
    status: str = "ok"  # "ok" | "escaped"


_WORD_TOKEN = re.compile(r"^(s|g)([123])(?:\^(-?\d+))?$")


def parse_word(text: str) -> GroupWord:
    """Parse a word like "s1 s2 s3" or "g1^2 g2^-2 g1^-2 g2^2".

    The string reads left to right in composition order: the leftmost
    generator is applied last.
    """
    letters = []
    for tok in text.split():
        m = _WORD_TOKEN.match(tok)
        if m is None:
            raise ValueError(f"cannot parse generator token {tok!r}")
        kind = "sigma" if m.group(1) == "s" else "g"
        index = int(m.group(2))
        power = int(m.group(3)) if m.group(3) is not None else 1
        if kind == "sigma" and power < 0:
            power = -power  # involutions
        sign = 1 if power >= 0 else -1
        for _ in range(abs(power)):
            letters.append(GeneratorLetter(kind, index, sign if kind == "g" else 1))
    return GroupWord(tuple(letters))


def cubic_eval(x, theta):
    """f(x, theta); zero exactly on the surface."""
    x1, x2, x3 = x
    t1, t2, t3, t4 = _coerce_theta(theta)
    return x1 * x2 * x3 + x1 * x1 + x2 * x2 + x3 * x3 - t1 * x1 - t2 * x2 - t3 * x3 + t4


def cubic_gradient(x, theta):
    """Gradient of f with respect to x."""
    x1, x2, x3 = x
    t1, t2, t3, _ = _coerce_theta(theta)
    return (x2 * x3 + 2 * x1 - t1, x1 * x3 + 2 * x2 - t2, x1 * x2 + 2 * x3 - t3)


def sigma_apply(i: int, x, theta):
    """Involution sigma_i: x_i' = theta_i - x_i - x_j x_k, other entries fixed."""
    if i not in (1, 2, 3):
        raise ValueError("sigma index must be 1, 2 or 3")
    t = _coerce_theta(theta)
    y = list(x)
    j, k = [a for a in (0, 1, 2) if a != i - 1]
    y[i - 1] = t[i - 1] - y[i - 1] - y[j] * y[k]
    return tuple(y)


def g_apply(i: int, sign: int, x, theta):
    """Braid map g_i^{sign} acting on (x, theta).

    For the cyclic triple (i, j, k) starting at i, g_i sends
    x -> (theta_j - x_j - x_k x_i, x_i, x_k) in slots (i, j, k) and
    swaps theta_i with theta_j.  sign = -1 applies the exact inverse.
    Returns (x', theta') as tuples.
    """
    if i not in (1, 2, 3):
        raise ValueError("braid index must be 1, 2 or 3")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t = list(_coerce_theta(theta))
    ii = i - 1
    jj = i % 3
    kk = (i + 1) % 3
    y = list(x)
    if sign == 1:
        y[ii], y[jj] = t[jj] - x[jj] - x[kk] * x[ii], x[ii]
        t[ii], t[jj] = t[jj], t[ii]
    else:
        t[ii], t[jj] = t[jj], t[ii]
        y[ii], y[jj] = x[jj], t[jj] - x[ii] - x[kk] * x[jj]
    return tuple(y), tuple(t)


def _max_abs(x) -> float:
    return max(abs(complex(v)) for v in x)


def word_apply(word: GroupWord, x, theta, escape_radius: float = DEFAULT_ESCAPE_RADIUS) -> MapResult:
    """Apply a group word (rightmost letter first), tracking theta swaps.

    status is "escaped" as soon as an intermediate coordinate exceeds
    escape_radius; the partial state reached is returned.
    """
    t = _coerce_theta(theta)
    y = tuple(x)
    for letter in reversed(word.letters):
        if letter.kind == "sigma":
            y = sigma_apply(letter.index, y, t)
        else:
            y, t = g_apply(letter.index, letter.power, y, t)
        if _max_abs(y) > escape_radius:
            return MapResult(AffinePoint(*y), ThetaPoint(*t), "escaped")
    return MapResult(AffinePoint(*y), ThetaPoint(*t), "ok")


def coxeter_apply(x, theta):
    """c = sigma1 o sigma2 o sigma3 (sigma3 applied first); theta unchanged."""
    t = _coerce_theta(theta)
    y = sigma_apply(3, x, t)
    y = sigma_apply(2, y, t)
    return sigma_apply(1, y, t)


def _sigma_jacobian_row(i: int, x):
    """Row i of the Jacobian of sigma_i at x (other rows are identity)."""
    j, k = [a for a in (0, 1, 2) if a != i - 1]
    row = [0, 0, 0]
    row[i - 1] = -1
    row[j] = -x[k]
    row[k] = -x[j]
    return row


def _mat_mul(a, b):
    return [
        [sum(a[r][m] * b[m][c] for m in range(3)) for c in range(3)]
        for r in range(3)
    ]


def coxeter_jacobian(x, theta, N: int, escape_radius: float = DEFAULT_ESCAPE_RADIUS):
    """Jacobian of c^N at x as a 3x3 nested list, by the chain rule.

    Exact for exact inputs (the maps are polynomial).  Raises if the
    orbit escapes before N steps.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    t = _coerce_theta(theta)
    jac = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
    y = tuple(x)
    for _ in range(N):
        for i in (3, 2, 1):
            step = [[1 if r == c else 0 for c in range(3)] for r in range(3)]
            step[i - 1] = _sigma_jacobian_row(i, y)
            jac = _mat_mul(step, jac)
            y = sigma_apply(i, y, t)
        if _max_abs(y) > escape_radius:
            raise ValueError(f"orbit escaped before {N} iterations")
    return jac
