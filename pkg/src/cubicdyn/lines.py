"""The 27 lines on the compactified cubic surface in b-coordinates.

Three tritangent lines lie in the plane at infinity X0 = 0; each is met
by exactly eight affine lines whose equations are explicit in the
eigenvalue parameters b.  This module enumerates them, verifies they lie
on the surface, computes pairwise intersections in P^3, and checks how
the involutions sigma_i permute them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lattice import LineLabel
from .params import EigenParams, ThetaPoint, discriminant, traces_from_eigen, traces_to_theta
from .surface import sigma_apply

__all__ = [
    "ProjectivePoint",
    "ProjectiveLine",
    "SPECIAL_POINTS",
    "tritangent_line",
    "line_from_params",
    "group_lines",
    "all_lines",
    "line_on_surface",
    "lines_intersection",
    "verify_sigma_line_action",
    "cubic_eval_hom",
]

_RANK_TOL = 1e-12


def _normalize4(v):
    v = np.asarray(v, dtype=complex)
    m = np.max(np.abs(v))
    if m == 0:
        raise ValueError("zero coordinate vector")
    return v / m


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^3, normalized so the largest-modulus coordinate is 1."""

    coords: tuple

    def __post_init__(self):
        v = _normalize4(self.coords)
        # rotate phase so the largest coordinate is exactly 1
        pivot = int(np.argmax(np.abs(v)))
        v = v / v[pivot]
        object.__setattr__(self, "coords", tuple(v))

    def __str__(self):
        return "[" + " : ".join(f"{c:.6g}" for c in self.coords) + "]"


SPECIAL_POINTS = {
    "p1": ProjectivePoint((0, 1, 0, 0)),
    "p2": ProjectivePoint((0, 0, 1, 0)),
    "p3": ProjectivePoint((0, 0, 0, 1)),
    "q1": ProjectivePoint((0, 0, 1, 1)),
    "q2": ProjectivePoint((0, 1, 0, 1)),
    "q3": ProjectivePoint((0, 1, 1, 0)),
}


@dataclass(frozen=True)
class ProjectiveLine:
    """A line in P^3 cut out by two independent linear forms on (X0..X3)."""

    form1: tuple
    form2: tuple
    label: Optional[LineLabel] = None
    params: Optional[tuple] = None  # (group index i, slot 1..8)

    def __post_init__(self):
        f1 = _normalize4(self.form1)
        f2 = _normalize4(self.form2)
        minors = [
            f1[a] * f2[b] - f1[b] * f2[a] for a in range(4) for b in range(a + 1, 4)
        ]
        if max(abs(m) for m in minors) <= _RANK_TOL:
            raise ValueError("the two forms are linearly dependent")
        object.__setattr__(self, "form1", tuple(f1))
        object.__setattr__(self, "form2", tuple(f2))

    def matrix(self) -> np.ndarray:
        return np.array([self.form1, self.form2], dtype=complex)

    def spanning_points(self):
        """Two independent points spanning the line (nullspace of the forms)."""
        _, s, vh = np.linalg.svd(self.matrix())
        return vh.conj()[2], vh.conj()[3]

    def sample_points(self):
        """Five points on the line: u + t v for t in {0, 1, -1, 2}, plus v."""
        u, v = self.spanning_points()
        pts = [u + t * v for t in (0, 1, -1, 2)]
        pts.append(v)
        return pts

    def affine_points(self, count: int = 3):
        """Sample affine points (X0 = 1) of the line as (x1, x2, x3) tuples."""
        u, v = self.spanning_points()
        # move the X0 component into u
        if abs(v[0]) > abs(u[0]):
            u, v = v, u
        if abs(u[0]) <= _RANK_TOL:
            raise ValueError("line lies in the plane at infinity")
        u = u / u[0]
        v = v - v[0] * u
        pts = []
        for t in range(count):
            p = u + (t + 1) * v
            pts.append((p[1], p[2], p[3]))
        return pts

    def contains_affine(self, x, tol: float = 1e-8) -> bool:
        X = np.array([1, *x], dtype=complex)
        scale = 1 + np.max(np.abs(X))
        return all(
            abs(np.dot(np.array(f, dtype=complex), X)) <= tol * scale
            for f in (self.form1, self.form2)
        )

    def to_json(self) -> dict:
        return {
            "label": str(self.label) if self.label else None,
            "group_slot": list(self.params) if self.params else None,
            "forms": [
                [[c.real, c.imag] for c in map(complex, f)]
                for f in (self.form1, self.form2)
            ],
        }


def cubic_eval_hom(X, theta) -> complex:
    """Homogeneous cubic F(X, theta) on P^3."""
    if isinstance(theta, ThetaPoint):
        theta = theta.as_tuple()
    t1, t2, t3, t4 = theta
    X0, X1, X2, X3 = X
    return (
        X1 * X2 * X3
        + X0 * (X1 * X1 + X2 * X2 + X3 * X3)
        - X0 * X0 * (t1 * X1 + t2 * X2 + t3 * X3)
        + t4 * X0 * X0 * X0
    )


def tritangent_line(i: int) -> ProjectiveLine:
    """Line at infinity L_i = {X0 = X_i = 0}, lying on every S(theta)."""
    if i not in (1, 2, 3):
        raise ValueError("tritangent index must be 1, 2 or 3")
    f1 = [0, 0, 0, 0]
    f1[0] = 1
    f2 = [0, 0, 0, 0]
    f2[i] = 1
    # class at infinity: L1 = F12, L2 = F34, L3 = F56
    label = LineLabel("F", (2 * i - 1, 2 * i))
    return ProjectiveLine(tuple(f1), tuple(f2), label=label)


# Argument patterns of the eight affine lines meeting L_i, one row of the
# printed table per pair of slots.  Entries are (invert_first, invert_second,
# swapped) where swapped means the pattern uses (b_j, b_k; b_i, b_4) instead
# of (b_i, b_4; b_j, b_k).
_SLOT_PATTERNS = {
    1: (False, False, False),
    2: (True, True, False),
    3: (False, False, True),
    4: (True, True, True),
    5: (True, False, False),
    6: (False, True, False),
    7: (True, False, True),
    8: (False, True, True),
}


def _slot_label(i: int, slot: int) -> LineLabel:
    """Classical label of a slot, following the arrangement figure.

    Group i hosts E/G lines with indices (2i-1, 2i) and four F lines
    connecting the other two index pairs.  Which line of an F pair gets
    which name is conventional; the pairing (1,2), (3,4), (5,6), (7,8)
    is the contractual part.
    """
    e1, e2 = 2 * i - 1, 2 * i
    other = sorted(set(range(1, 7)) - {e1, e2})
    o1, o2, o3, o4 = other  # two pairs (o1,o2), (o3,o4)
    table = {
        1: LineLabel("E", (e1,)),
        2: LineLabel("G", (e2,)),
        3: LineLabel("E", (e2,)),
        4: LineLabel("G", (e1,)),
        5: LineLabel("F", (o1, o3)),
        6: LineLabel("F", (o2, o4)),
        7: LineLabel("F", (o1, o4)),
        8: LineLabel("F", (o2, o3)),
    }
    return table[slot]


def line_from_params(i: int, slot: int, b: EigenParams, warn_singular: bool = True) -> ProjectiveLine:
    """One of the eight affine lines meeting the tritangent line L_i.

    The line L_i(beta1, beta2; beta3, beta4) is cut out by

        X_i - (beta1 beta2 + 1/(beta1 beta2)) X0,
        X_j + (beta1 beta2) X_k
            - (beta1 (beta4 + 1/beta4) + beta2 (beta3 + 1/beta3)) X0,

    with (i, j, k) the cyclic triple starting at i and the slot choosing
    the argument pattern from the table of eight.
    """
    if i not in (1, 2, 3):
        raise ValueError("group index must be 1, 2 or 3")
    if slot not in _SLOT_PATTERNS:
        raise ValueError("slot must be 1..8")
    if warn_singular and abs(discriminant(b)) < 1e-12:
        import warnings

        warnings.warn("discriminant vanishes; the 27 lines may degenerate")
    bs = b.as_tuple()
    j = i % 3 + 1
    k = j % 3 + 1
    inv1, inv2, swapped = _SLOT_PATTERNS[slot]
    if swapped:
        b1, b2, b3, b4 = bs[j - 1], bs[k - 1], bs[i - 1], bs[3]
    else:
        b1, b2, b3, b4 = bs[i - 1], bs[3], bs[j - 1], bs[k - 1]
    if inv1:
        b1 = 1 / b1
    if inv2:
        b2 = 1 / b2
    prod = b1 * b2
    f1 = [0j, 0j, 0j, 0j]
    f1[i] = 1
    f1[0] = -(prod + 1 / prod)
    f2 = [0j, 0j, 0j, 0j]
    f2[j] = 1
    f2[k] = prod
    f2[0] = -(b1 * (b4 + 1 / b4) + b2 * (b3 + 1 / b3))
    return ProjectiveLine(tuple(f1), tuple(f2), label=_slot_label(i, slot), params=(i, slot))


def group_lines(i: int, b: EigenParams) -> list:
    """The eight affine lines of group i."""
    return [line_from_params(i, slot, b) for slot in range(1, 9)]


def all_lines(b: EigenParams) -> list:
    """All 27 lines: three tritangent plus three groups of eight."""
    lines = [tritangent_line(i) for i in (1, 2, 3)]
    for i in (1, 2, 3):
        lines.extend(group_lines(i, b))
    return lines


def line_on_surface(line: ProjectiveLine, theta, tol: float = 1e-8):
    """Whether the line lies on the surface, with the max residual.

    Samples five points of the line (four suffice: a cubic vanishing at
    four points of a line vanishes on it); residuals are scaled by the
    cubic growth of F.
    """
    worst = 0.0
    for X in line.sample_points():
        scale = 1 + float(np.max(np.abs(X))) ** 3
        r = abs(cubic_eval_hom(tuple(X), theta)) / scale
        worst = max(worst, r)
    return worst <= tol, worst


def lines_intersection(l1: ProjectiveLine, l2: ProjectiveLine, tol: float = 1e-9):
    """Intersection of two lines in P^3.

    Returns ("point", ProjectivePoint), ("disjoint", None) or
    ("equal", None) depending on the rank of the stacked 4x4 system.
    """
    m = np.vstack([l1.matrix(), l2.matrix()])
    _, s, vh = np.linalg.svd(m)
    rank = int(np.sum(s > tol * s[0]))
    if rank == 2:
        return "equal", None
    if rank == 3:
        return "point", ProjectivePoint(tuple(vh.conj()[3]))
    return "disjoint", None


def _quadratic_roots(a, b, c):
    disc = b * b - 4 * a * c
    sq = complex(disc) ** 0.5
    return ((-b + sq) / (2 * a), (-b - sq) / (2 * a))


def verify_sigma_line_action(b: EigenParams, i: int = 1, tol: float = 1e-8) -> dict:
    """Check how sigma_i permutes the affine lines (general position only).

    Verifies the four line swaps (the E/G pairs of the two other
    groups), the two-root quadratic giving the self-intersection of the
    image of the first line of group i, and the unique crossing with the
    slot-3 line.  Raises on vanishing discriminant or any failed check.
    """
    if abs(discriminant(b)) < 1e-12:
        raise ValueError("lines not in general position")
    theta = traces_to_theta(traces_from_eigen(b)).as_tuple()
    j = i % 3 + 1
    k = j % 3 + 1
    report = {"sigma": i, "swaps": [], "quadratic_roots": [], "cross_point": None}

    # sigma_i swaps slots (1,2) and (3,4) within each of the other two groups
    for g in (j, k):
        for s1, s2 in ((1, 2), (3, 4)):
            src = line_from_params(g, s1, b)
            dst = line_from_params(g, s2, b)
            for x in src.affine_points(3):
                y = sigma_apply(i, x, theta)
                if not dst.contains_affine(y, tol):
                    raise AssertionError(
                        f"sigma_{i} does not map group {g} slot {s1} onto slot {s2}"
                    )
                z = sigma_apply(i, y, theta)  # and back, involution
                if not src.contains_affine(z, tol):
                    raise AssertionError(
                        f"sigma_{i} does not map group {g} slot {s2} back onto slot {s1}"
                    )
            report["swaps"].append((g, s1, s2))

    bs = b.as_tuple()
    bi, bj, bk, b4 = bs[i - 1], bs[j - 1], bs[k - 1], bs[3]
    a = traces_from_eigen(b).as_tuple()
    ai, aj, ak = a[i - 1], a[j - 1], a[k - 1]
    a4 = a[3]
    p = bi * b4
    ti = theta[i - 1]

    # self-intersection of sigma_i(first line) with that line: quadratic in x_k
    first = line_from_params(i, 1, b)
    roots = _quadratic_roots(p, -(ak * bi + aj * b4), ti - 2 * (p + 1 / p))
    for xk in roots:
        x = [0j, 0j, 0j]
        x[i - 1] = p + 1 / p
        x[k - 1] = xk
        x[j - 1] = (ak * bi + aj * b4) - p * xk
        x = tuple(x)
        if not first.contains_affine(x, tol):
            raise AssertionError("quadratic root does not lie on the source line")
        y = sigma_apply(i, x, theta)
        if not first.contains_affine(y, tol):
            raise AssertionError("quadratic root does not lie on the image line")
        report["quadratic_roots"].append(x)

    # unique crossing of sigma_i(first line) with the slot-3 line
    third = line_from_params(i, 3, b)
    det = bj * bk - bi * b4
    if abs(det) < 1e-12:
        raise ValueError("lines not in general position")
    # linear system for (x_j, x_k): rows from the slot-3 line and the image line
    rhs1 = a4 * bj + ai * bk
    rhs2 = ak * bi + aj * b4
    xk = (rhs1 - rhs2) / (bj * bk - p)
    xj = rhs1 - bj * bk * xk
    x = [0j, 0j, 0j]
    x[i - 1] = bj * bk + 1 / (bj * bk)
    x[j - 1] = xj
    x[k - 1] = xk
    x = tuple(x)
    if not third.contains_affine(x, tol):
        raise AssertionError("crossing point does not lie on the slot-3 line")
    y = sigma_apply(i, x, theta)
    if not first.contains_affine(y, tol):
        raise AssertionError("crossing point does not map onto the source line")
    report["cross_point"] = x
    return report
