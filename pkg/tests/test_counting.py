"""Tests for the exact counts, zeta function, and the numeric solver."""

from fractions import Fraction

import numpy as np
import pytest
import sympy

from cubicdyn.counting import (
    CountReport,
    SolverConfig,
    lefschetz_number,
    per_count_closed,
    per_kappa_closed,
    random_offwall_kappa,
    solve_for_kappa,
    solve_periodic,
    verify_counts,
    zeta_coefficients,
)
from cubicdyn.params import kappa_to_eigen, rh_params, wall_membership


def test_lefschetz_small_values():
    assert lefschetz_number(1)[0] == 2
    assert lefschetz_number(2)[0] == 24
    assert lefschetz_number(3)[0] == 74
    with pytest.raises(ValueError):
        lefschetz_number(0)


def test_lefschetz_exact_matches_closed_float():
    for n in range(1, 25):
        exact, closed = lefschetz_number(n)
        assert abs(exact - closed) < 1e-6 * max(1, abs(closed))


def test_per_count_values_and_offset():
    assert [per_count_closed(n) for n in (1, 2, 3, 4)] == [0, 22, 72, 326]
    for n in range(1, 31):
        assert per_count_closed(n, "projective") == per_count_closed(n) + 1
        assert lefschetz_number(n)[0] == per_count_closed(n, "projective") + 1
    with pytest.raises(ValueError):
        per_count_closed(2, "euclidean")


def test_per_kappa_values_and_doubling():
    assert per_kappa_closed(1) == 22
    assert per_kappa_closed(2) == 326
    for n in range(1, 31):
        assert per_kappa_closed(n) == per_count_closed(2 * n, "affine")


def test_per_kappa_against_float_closed_form():
    for n in range(1, 15):
        closed = (9 + 4 * np.sqrt(5)) ** n + (9 - 4 * np.sqrt(5)) ** n + 4
        assert abs(per_kappa_closed(n) - closed) < 1e-5 * closed


def test_zeta_small_coefficients():
    assert zeta_coefficients(2) == [1, 22, 405]


def test_zeta_against_sympy_series():
    z = sympy.symbols("z")
    expr = 1 / ((1 - z) ** 4 * (1 - 18 * z + z**2))
    series = sympy.series(expr, z, 0, 13).removeO()
    expected = [int(series.coeff(z, n)) for n in range(13)]
    assert zeta_coefficients(12) == expected


def test_zeta_exponential_identity():
    # Z(z) = exp(sum Per_N z^N / N): check by taking d/dz log Z
    order = 10
    coeffs = zeta_coefficients(order)
    for n in range(1, order + 1):
        lhs = n * Fraction(coeffs[n])
        rhs = sum(per_kappa_closed(k) * coeffs[n - k] for k in range(1, n + 1))
        assert lhs == rhs


def test_verify_counts():
    report = verify_counts(30)
    assert report["ok"]
    assert report["rows"][0]["per_kappa"] == 22
    with pytest.raises(ValueError):
        verify_counts(0)


def test_random_offwall_kappa_certified():
    rng = np.random.default_rng(0)
    for _ in range(5):
        kappa = random_offwall_kappa(rng)
        assert kappa.is_rational()
        assert not wall_membership(kappa, mode="exact").on_wall


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(seeds=0)
    with pytest.raises(ValueError):
        SolverConfig(rng_seed=-1)
    cfg = SolverConfig()
    assert cfg.newton_tol == 1e-10 and cfg.dedup_radius == 1e-6


def test_solve_rejects_singular_discriminant():
    rng = np.random.default_rng(1)
    kappa = random_offwall_kappa(rng)
    theta = rh_params(kappa)
    from cubicdyn.params import KappaPoint

    wall = KappaPoint.from_tail(1, Fraction(1, 4), Fraction(1, 5), Fraction(1, 7))
    with pytest.raises(ValueError):
        solve_periodic(theta, 2, SolverConfig(seeds=10), b=kappa_to_eigen(wall))
    with pytest.raises(ValueError):
        solve_for_kappa(wall, 2)
    with pytest.raises(ValueError):
        solve_periodic(theta, 0)


def test_solver_finds_no_fixed_points():
    rng = np.random.default_rng(2)
    kappa = random_offwall_kappa(rng)
    report = solve_for_kappa(kappa, 1, SolverConfig(seeds=2000, rng_seed=1, newton_max_iter=40))
    assert report.found == 0
    assert report.closed_form == 0
    assert report.status == "complete"


def test_solver_period_two_count_and_cycles():
    rng = np.random.default_rng(3)
    kappa = random_offwall_kappa(rng)
    cfg = SolverConfig(seeds=6000, rng_seed=2)
    report = solve_for_kappa(kappa, 2, cfg)
    assert report.found == 22
    assert report.status == "complete"
    assert report.minimal_periods == [2] * 22
    assert sorted(len(o) for o in report.orbits) == [2] * 11
    # every reported point really solves the system on the surface
    theta = rh_params(kappa)
    for (p, r) in report.points:
        assert r < cfg.newton_tol
        assert p.on_surface(theta, cfg.surface_tol)


def test_solver_determinism():
    rng = np.random.default_rng(4)
    kappa = random_offwall_kappa(rng)
    cfg = SolverConfig(seeds=3000, rng_seed=7)
    r1 = solve_for_kappa(kappa, 2, cfg)
    r2 = solve_for_kappa(kappa, 2, cfg)
    def key(pt):
        return tuple(v for z in map(complex, pt.as_tuple()) for v in (z.real, z.imag))

    x1 = sorted((p for p, _ in r1.points), key=key)
    x2 = sorted((p for p, _ in r2.points), key=key)
    x1 = [tuple(map(complex, p.as_tuple())) for p in x1]
    x2 = [tuple(map(complex, p.as_tuple())) for p in x2]
    assert len(x1) == len(x2)
    for a, b in zip(x1, x2):
        assert max(abs(u - v) for u, v in zip(a, b)) < 1e-8


def test_count_report_json():
    report = CountReport(N=2, closed_form=22)
    data = report.to_json()
    assert data["N"] == 2 and data["status"] == "partial"
    assert data["points"] == [] and data["orbits"] == []
