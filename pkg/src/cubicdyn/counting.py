"""Periodic-point counts: closed forms, zeta function, and a solver.

The exact side works with big integers through linear recurrences:
s_N = (2+sqrt5)^N + (2-sqrt5)^N obeys s_{N+2} = 4 s_{N+1} + s_N and
C_N = (9+4 sqrt5)^N + (9-4 sqrt5)^N obeys C_{N+2} = 18 C_{N+1} - C_N.
The numeric side is a multistart Newton solver for c^N(x) = x on the
surface, which reproduces the closed-form counts at small N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt

import numpy as np

from .lattice import coxeter_star, trace_power
from .params import (
    KappaPoint,
    discriminant,
    kappa_to_eigen,
    rh_params,
    wall_membership,
)
from .surface import AffinePoint, cubic_eval, surface_residual_bound

__all__ = [
    "CountReport",
    "SolverConfig",
    "lefschetz_number",
    "per_count_closed",
    "per_kappa_closed",
    "zeta_coefficients",
    "solve_periodic",
    "solve_for_kappa",
    "verify_counts",
    "random_offwall_kappa",
]


def _s_sequence(n: int) -> list:
    """s_N = (2+sqrt5)^N + (2-sqrt5)^N as exact integers, indices 0..n."""
    s = [2, 4]
    while len(s) <= n:
        s.append(4 * s[-1] + s[-2])
    return s[: n + 1]


def _c_sequence(n: int) -> list:
    """C_N = (9+4 sqrt5)^N + (9-4 sqrt5)^N as exact integers, indices 0..n."""
    c = [2, 18]
    while len(c) <= n:
        c.append(18 * c[-1] - c[-2])
    return c[: n + 1]


def lefschetz_number(N: int):
    """Lefschetz number of c^N on the compactified surface.

    Returns (exact, closed) where exact = 1 + tr((c*)^N) + 1 with
    big-integer matrix powers and closed is the float value of
    (2+sqrt5)^N + (2-sqrt5)^N + 4(-1)^N + 2.  The two agree exactly
    through the integer recurrence for the surd part.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    exact = 1 + trace_power(coxeter_star(), N) + 1
    sN = _s_sequence(N)[N]
    assert exact == sN + 4 * (-1) ** N + 2
    closed = (2 + sqrt(5)) ** N + (2 - sqrt(5)) ** N + 4 * (-1) ** N + 2
    return exact, closed


def per_count_closed(N: int, space: str = "affine") -> int:
    """Number of N-periodic points of c, exactly.

    affine: (2+sqrt5)^N + (2-sqrt5)^N + 4(-1)^N; projective adds the one
    periodic point at infinity.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if space not in ("affine", "projective"):
        raise ValueError(f"unknown space {space!r}")
    val = _s_sequence(N)[N] + 4 * (-1) ** N
    return val + 1 if space == "projective" else val


def per_kappa_closed(N: int) -> int:
    """Number of N-periodic solutions along the full loop: C_N + 4."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return _c_sequence(N)[N] + 4


def zeta_coefficients(order: int) -> list:
    """Taylor coefficients of 1/((1-z)^4 (1-18z+z^2)) up to z^order.

    Computed by convolving the binomial series of (1-z)^{-4} with the
    Chebyshev-like series of (1-18z+z^2)^{-1}; all arithmetic exact.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    # (1-z)^{-4}: binomial(n+3, 3)
    binom = [(n + 1) * (n + 2) * (n + 3) // 6 for n in range(order + 1)]
    # (1 - 18z + z^2)^{-1}: U_0 = 1, U_1 = 18, U_n = 18 U_{n-1} - U_{n-2}
    u = [1, 18]
    while len(u) <= order:
        u.append(18 * u[-1] - u[-2])
    return [sum(binom[k] * u[n - k] for k in range(n + 1)) for n in range(order + 1)]


def _zeta_via_exp(order: int) -> list:
    """Independent zeta coefficients from exp(sum Per_N z^N / N).

    Uses the logarithmic-derivative recurrence n z_n = sum_k Per_k z_{n-k}
    in exact rational arithmetic.
    """
    per = [per_kappa_closed(n) for n in range(1, order + 1)]
    z = [Fraction(1)]
    for n in range(1, order + 1):
        z.append(sum(per[k - 1] * z[n - k] for k in range(1, n + 1)) / n)
    out = []
    for v in z:
        if v.denominator != 1:
            raise AssertionError("zeta coefficients must be integers")
        out.append(int(v))
    return out


def verify_counts(n_max: int) -> dict:
    """Cross-check every exact counting identity for N = 1..n_max.

    Raises AssertionError naming the first failing N; returns a summary
    dict when everything agrees.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    s = _s_sequence(2 * n_max)
    c = _c_sequence(n_max)
    rows = []
    for N in range(1, n_max + 1):
        exact, closed = lefschetz_number(N)
        if abs(exact - closed) > 1e-6 * max(1.0, abs(closed)):
            raise AssertionError(f"Lefschetz closed form mismatch at N={N}")
        if per_count_closed(N, "projective") != per_count_closed(N, "affine") + 1:
            raise AssertionError(f"projective/affine offset mismatch at N={N}")
        if exact != per_count_closed(N, "projective") + 1:
            raise AssertionError(f"Lefschetz vs projective count mismatch at N={N}")
        pk = per_kappa_closed(N)
        if pk != per_count_closed(2 * N, "affine"):
            raise AssertionError(f"per_kappa vs per_{2 * N} mismatch at N={N}")
        # C_N doubles the even s-sequence: C_N = s_{2N} + 4(-1)^{2N} - 4
        if c[N] + 4 != s[2 * N] + 4:
            raise AssertionError(f"C recursion vs s recursion mismatch at N={N}")
        if pk - 4 - c[N] != 0:
            raise AssertionError(f"shifted-by-4 identity fails at N={N}")
        rows.append({"N": N, "lefschetz": exact, "per_affine": per_count_closed(N), "per_kappa": pk})
    order = min(n_max, 12)
    za = zeta_coefficients(order)
    zb = _zeta_via_exp(order)
    if za != zb:
        n = next(i for i, (x, y) in enumerate(zip(za, zb)) if x != y)
        raise AssertionError(f"zeta coefficient mismatch at order {n}")
    return {"n_max": n_max, "rows": rows, "zeta_order": order, "zeta": za, "ok": True}


def random_offwall_kappa(rng, denominator_bound: int = 40) -> KappaPoint:
    """Random rational kappa certified off every wall in exact arithmetic."""
    for _ in range(1000):
        tail = []
        for _ in range(4):
            q = int(rng.integers(2, denominator_bound + 1))
            p = int(rng.integers(1, 2 * q))
            tail.append(Fraction(p, q))
        kappa = KappaPoint.from_tail(*tail)
        if not wall_membership(kappa, mode="exact").on_wall:
            return kappa
    raise RuntimeError("failed to sample an off-wall kappa")


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs of the multistart Newton solver."""

    seeds: int = 20000
    rng_seed: int = 0
    newton_max_iter: int = 100
    newton_tol: float = 1e-10
    dedup_radius: float = 1e-6
    surface_tol: float = 1e-9
    saturation_batches: int = 5
    escape_radius: float = 1e8

    def __post_init__(self):
        for name in ("seeds", "newton_max_iter", "newton_tol", "dedup_radius",
                     "surface_tol", "saturation_batches", "escape_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be nonnegative")


@dataclass
class CountReport:
    """Outcome of one solve_periodic run."""

    N: int
    closed_form: int
    found: int = 0
    points: list = field(default_factory=list)  # (AffinePoint, residual)
    clusters: list = field(default_factory=list)  # (AffinePoint, multiplicity est.)
    minimal_periods: list = field(default_factory=list)
    orbits: list = field(default_factory=list)  # lists of cluster indices
    status: str = "partial"  # complete | saturated | partial

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "closed_form": self.closed_form,
            "found": self.found,
            "status": self.status,
            "points": [
                {**p.to_json(), "residual": float(r)} for (p, r) in self.points
            ],
            "clusters": [
                {**p.to_json(), "multiplicity_det": float(m)} for (p, m) in self.clusters
            ],
            "minimal_periods": list(self.minimal_periods),
            "orbits": [list(o) for o in self.orbits],
        }


def _coerce_theta4(theta):
    if hasattr(theta, "as_tuple"):
        theta = theta.as_tuple()
    return np.array([complex(t) for t in theta], dtype=complex)


def _coxeter_batch(x: np.ndarray, t: np.ndarray, n: int) -> np.ndarray:
    """Apply c^n to an (M, 3) batch."""
    y = x.copy()
    for _ in range(n):
        for i in (3, 2, 1):
            j, k = [a for a in (0, 1, 2) if a != i - 1]
            y[:, i - 1] = t[i - 1] - y[:, i - 1] - y[:, j] * y[:, k]
    return y


def _coxeter_batch_jac(x: np.ndarray, t: np.ndarray, n: int):
    """c^n and its Jacobian on an (M, 3) batch, by the chain rule."""
    m = x.shape[0]
    y = x.copy()
    jac = np.broadcast_to(np.eye(3, dtype=complex), (m, 3, 3)).copy()
    for _ in range(n):
        for i in (3, 2, 1):
            j, k = [a for a in (0, 1, 2) if a != i - 1]
            jac[:, i - 1, :] = (
                -jac[:, i - 1, :]
                - y[:, k, None] * jac[:, j, :]
                - y[:, j, None] * jac[:, k, :]
            )
            y[:, i - 1] = t[i - 1] - y[:, i - 1] - y[:, j] * y[:, k]
    return y, jac


def _surface_residual_batch(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    f = (
        x[:, 0] * x[:, 1] * x[:, 2]
        + (x * x).sum(axis=1)
        - x @ t[:3]
        + t[3]
    )
    return np.abs(f)


def _make_seeds(count: int, t: np.ndarray, rng) -> np.ndarray:
    """Half box seeds of radius 10, half seeds placed on the surface."""
    box = count // 2
    pts = (rng.uniform(-10, 10, size=(box, 3)) + 1j * rng.uniform(-10, 10, size=(box, 3)))
    rest = count - box
    x23 = rng.uniform(-10, 10, size=(rest, 2)) + 1j * rng.uniform(-10, 10, size=(rest, 2))
    # solve x1^2 + (x2 x3 - t1) x1 + (x2^2 + x3^2 - t2 x2 - t3 x3 + t4) = 0
    bq = x23[:, 0] * x23[:, 1] - t[0]
    cq = (x23 * x23).sum(axis=1) - t[1] * x23[:, 0] - t[2] * x23[:, 1] + t[3]
    sq = np.sqrt(bq * bq - 4 * cq)
    sign = np.where(rng.random(rest) < 0.5, 1.0, -1.0)
    x1 = (-bq + sign * sq) / 2
    surf = np.column_stack([x1, x23])
    return np.vstack([pts, surf])


def _grad_batch(x: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            x[:, 1] * x[:, 2] + 2 * x[:, 0] - t[0],
            x[:, 0] * x[:, 2] + 2 * x[:, 1] - t[1],
            x[:, 0] * x[:, 1] + 2 * x[:, 2] - t[2],
        ],
        axis=1,
    )


def _system_residual(x: np.ndarray, t: np.ndarray, n: int) -> np.ndarray:
    """max(|c^n(x) - x|, |f(x)|) per point."""
    r = np.abs(_coxeter_batch(x, t, n) - x).max(axis=1)
    return np.maximum(r, _surface_residual_batch(x, t))


def _newton_batch(x0: np.ndarray, t: np.ndarray, n: int, cfg: SolverConfig) -> np.ndarray:
    """Damped Gauss-Newton on the system (c^n(x) - x, f(x)) = 0.

    The surface equation must ride along: f is invariant under c, so at
    an on-surface periodic point the gradient of f is a left null vector
    of D(c^n) - I and the plain square system is singular exactly at the
    roots.  The 4-equation least-squares system is regular there.

    Escaping seeds overflow to inf/nan and are dropped; the arithmetic
    warnings that produces are deliberately silenced.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        return _newton_batch_inner(x0, t, n, cfg)


def _newton_batch_inner(x0: np.ndarray, t: np.ndarray, n: int, cfg: SolverConfig) -> np.ndarray:
    x = x0.copy()
    active = np.ones(x.shape[0], dtype=bool)
    done = []
    eye = np.eye(3, dtype=complex)
    for _ in range(cfg.newton_max_iter):
        if not active.any():
            break
        xa = x[active]
        y, jac = _coxeter_batch_jac(xa, t, n)
        res4 = np.concatenate([y - xa, _surface_residual_batch(xa, t)[:, None].astype(complex)], axis=1)
        res4[:, 3] = (
            xa[:, 0] * xa[:, 1] * xa[:, 2] + (xa * xa).sum(axis=1) - xa @ t[:3] + t[3]
        )
        rnorm = np.abs(res4).max(axis=1)
        map_ok = np.abs(res4[:, :3]).max(axis=1) < cfg.newton_tol
        surf_ok = np.abs(res4[:, 3]) <= cfg.surface_tol * (1 + np.abs(xa).max(axis=1) ** 3)
        conv = map_ok & surf_ok
        if conv.any():
            done.append(xa[conv])
        amask = ~conv
        xa, jac, res4, rnorm = xa[amask], jac[amask], res4[amask], rnorm[amask]
        idx = np.flatnonzero(active)
        active[idx[conv]] = False
        idx = idx[amask]
        if xa.shape[0] == 0:
            continue
        j4 = np.concatenate([jac - eye, _grad_batch(xa, t)[:, None, :]], axis=1)
        jh = np.conj(np.transpose(j4, (0, 2, 1)))
        a = jh @ j4
        rhs = -(jh @ res4[:, :, None])
        # tiny Levenberg shift keeps the normal equations solvable
        shift = 1e-14 * np.abs(a).max(axis=(1, 2)) + 1e-30
        a = a + shift[:, None, None] * eye
        det = np.linalg.det(a)
        bad = (
            ~np.isfinite(det)
            | (np.abs(det) < 1e-280)
            | ~np.isfinite(rhs[:, :, 0]).all(axis=1)
        )
        a[bad] = eye
        rhs[bad] = 0
        dx = np.linalg.solve(a, rhs)[:, :, 0]
        # damp: halve the step until the residual stops growing
        scale = np.ones(xa.shape[0])
        xnew = xa + dx
        new_r = _system_residual(xnew, t, n)
        worse = ~(new_r < rnorm)
        for _ in range(25):
            if not worse.any():
                break
            scale[worse] /= 2
            trial = xa[worse] + scale[worse, None] * dx[worse]
            xnew[worse] = trial
            new_r[worse] = _system_residual(trial, t, n)
            worse = worse & ~(new_r < rnorm)
        gone = (
            ~np.isfinite(xnew).all(axis=1)
            | (np.abs(xnew).max(axis=1) > cfg.escape_radius)
            | bad
        )
        x[idx] = xnew
        active[idx[gone]] = False
    if not done:
        return np.empty((0, 3), dtype=complex)
    return np.vstack(done)


def _cluster_index(clusters: list, x: np.ndarray, radius: float):
    for i, rep in enumerate(clusters):
        if np.abs(x - rep).max() <= radius * (1 + np.abs(rep).max()):
            return i
    return None


def _polish(x: np.ndarray, t: np.ndarray, n: int, cfg: SolverConfig) -> np.ndarray:
    """A few undamped Gauss-Newton steps on a single point."""
    y = x[None, :].copy()
    eye = np.eye(3, dtype=complex)
    for _ in range(10):
        img, jac = _coxeter_batch_jac(y, t, n)
        res = np.empty(4, dtype=complex)
        res[:3] = (img - y)[0]
        res[3] = cubic_eval(tuple(y[0]), tuple(t))
        if np.abs(res[:3]).max() < cfg.newton_tol:
            break
        j4 = np.concatenate([jac[0] - eye, _grad_batch(y, t)], axis=0)
        try:
            dy = np.linalg.lstsq(j4, -res, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        y = y + dy[None, :]
    return y[0]


def _transverse_multiplicity(jac: np.ndarray) -> float:
    """|(1 - l1)(1 - l2)| over the two surface eigenvalues of Dc^N.

    The third eigenvalue of Dc^N at an on-surface periodic point is the
    trivial 1 coming from the invariance of f, so det(I - Dc^N) vanishes
    identically; the sum of the principal 2x2 minors of I - Dc^N factors
    out that root and measures transversality on the surface itself.
    """
    a = np.eye(3) - jac
    e2 = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    return float(abs(e2))


def solve_periodic(theta, N: int, cfg: SolverConfig = None, b=None) -> CountReport:
    """Find the N-periodic points of c on S(theta) by multistart Newton.

    Newton runs on the square system c^N(x) - x = 0 in ambient C^3; roots
    are filtered by the surface residual (c preserves the surface, so the
    on-surface roots are exactly the targets), deduplicated, closed under
    the action of c, and classified by minimal period and orbit.

    If the eigenvalue parameters b are supplied, a vanishing discriminant
    is rejected; otherwise genericity of theta is the caller's burden.
    Deterministic for a fixed cfg.rng_seed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if cfg is None:
        cfg = SolverConfig(seeds=200000 if N >= 3 else 20000)
    if b is not None and abs(discriminant(b)) < 1e-12:
        raise ValueError("nongeneric parameters: discriminant vanishes")
    t = _coerce_theta4(theta)
    closed = per_count_closed(N, "affine")
    report = CountReport(N=N, closed_form=closed)

    ss = np.random.SeedSequence(cfg.rng_seed)
    children = iter(ss.spawn(2 + 40 * cfg.saturation_batches))
    clusters = []

    def absorb(roots: np.ndarray) -> int:
        added = 0
        for x in roots:
            if _cluster_index(clusters, x, cfg.dedup_radius) is None:
                clusters.append(x)
                added += 1
        return added

    rng = np.random.default_rng(next(children))
    absorb(_newton_batch(_make_seeds(cfg.seeds, t, rng), t, N, cfg))

    quiet = 0
    batch = max(1, cfg.seeds // 10)
    max_extra = 8 * cfg.saturation_batches
    for _ in range(max_extra):
        rng = np.random.default_rng(next(children))
        added = absorb(_newton_batch(_make_seeds(batch, t, rng), t, N, cfg))
        quiet = 0 if added else quiet + 1
        if quiet >= cfg.saturation_batches:
            break
    saturated = quiet >= cfg.saturation_batches

    # close the cluster set under c (a consistency requirement: the image
    # of a periodic point is a periodic point)
    i = 0
    while i < len(clusters):
        img = _coxeter_batch(clusters[i][None, :], t, 1)[0]
        if _cluster_index(clusters, img, cfg.dedup_radius) is None:
            clusters.append(_polish(img, t, N, cfg))
        i += 1

    # classify: minimal periods, orbits, multiplicity estimates
    next_of = []
    multiple = False
    for x in clusters:
        img, jac = _coxeter_batch_jac(x[None, :], t, N)
        r = float(np.abs(img - x[None, :]).max())
        report.points.append((AffinePoint(*x), r))
        mult = _transverse_multiplicity(jac[0])
        if mult < 1e-6:
            multiple = True
        report.clusters.append((AffinePoint(*x), mult))
        period = N
        for d in range(1, N):
            if N % d == 0:
                yd = _coxeter_batch(x[None, :], t, d)[0]
                if np.abs(yd - x).max() <= cfg.dedup_radius * (1 + np.abs(x).max()):
                    period = d
                    break
        report.minimal_periods.append(period)
        img1 = _coxeter_batch(x[None, :], t, 1)[0]
        next_of.append(_cluster_index(clusters, img1, cfg.dedup_radius))

    seen = set()
    for i in range(len(clusters)):
        if i in seen:
            continue
        orbit = []
        j = i
        while j is not None and j not in seen:
            seen.add(j)
            orbit.append(j)
            j = next_of[j]
        report.orbits.append(orbit)

    report.found = len(clusters)
    if saturated and report.found == closed and not multiple:
        report.status = "complete"
    elif saturated:
        report.status = "saturated"
    else:
        report.status = "partial"
    return report


def solve_for_kappa(kappa: KappaPoint, N: int, cfg: SolverConfig = None) -> CountReport:
    """Convenience wrapper: check kappa off-wall, then solve on S(rh(kappa))."""
    mode = "exact" if kappa.is_rational() else "tolerant"
    if wall_membership(kappa, mode=mode).on_wall:
        raise ValueError("nongeneric parameters: kappa lies on a wall")
    return solve_periodic(rh_params(kappa), N, cfg, b=kappa_to_eigen(kappa))
