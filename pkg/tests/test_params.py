"""Tests for the parameter spaces, discriminant and wall membership."""

import cmath
from fractions import Fraction

import numpy as np
import pytest

from cubicdyn.params import (
    EigenParams,
    KappaPoint,
    MonodromyTraces,
    ThetaPoint,
    discriminant,
    kappa_to_eigen,
    kappa_to_traces,
    rh_params,
    traces_from_eigen,
    traces_to_theta,
    wall_membership,
)


def test_kappa_constraint_enforced():
    KappaPoint(Fraction(1, 2), 0, 0, 0, 0)
    with pytest.raises(ValueError):
        KappaPoint(1, 1, 1, 1, 1)


def test_from_tail_reconstructs_kappa0_exactly():
    k = KappaPoint.from_tail(Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 7))
    assert k.kappa0 == Fraction(31, 840)
    assert k.is_rational()
    k2 = KappaPoint.from_tail(0.1, 0.2, 0.3, 0.1)
    assert abs(complex(k2.kappa0) - 0.15) < 1e-12


def test_zero_tail_maps_to_theta():
    k = KappaPoint.from_tail(0, 0, 0, 0)
    a = kappa_to_traces(k)
    assert np.allclose(a.as_tuple(), (2, 2, 2, -2))
    th = traces_to_theta(a)
    assert np.allclose(th.as_tuple(), (0, 0, 0, -4))


def test_half_tail_traces_vanish():
    k = KappaPoint.from_tail(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
    a = kappa_to_traces(k)
    assert np.allclose(a.as_tuple(), (0, 0, 0, 0), atol=1e-15)
    assert np.allclose(traces_to_theta(a).as_tuple(), (0, 0, 0, -4), atol=1e-15)


def test_eigen_and_trace_routes_agree():
    rng = np.random.default_rng(0)
    for _ in range(25):
        tail = rng.uniform(0.05, 0.95, 4)
        k = KappaPoint.from_tail(*tail)
        a1 = kappa_to_traces(k)
        a2 = traces_from_eigen(kappa_to_eigen(k))
        assert np.allclose(a1.as_tuple(), a2.as_tuple(), atol=1e-12)
        # rh is the composition
        th = rh_params(k)
        assert np.allclose(th.as_tuple(), traces_to_theta(a1).as_tuple(), atol=1e-12)


def test_theta_formula_by_hand():
    a = MonodromyTraces(1, 2, 3, 5)
    th = traces_to_theta(a)
    assert th.as_tuple() == (1 * 5 + 2 * 3, 2 * 5 + 3 * 1, 3 * 5 + 1 * 2, 30 + 1 + 4 + 9 + 25 - 4)


def test_eigen_rejects_zero():
    with pytest.raises(ValueError):
        EigenParams(0, 1, 1, 1)


def test_discriminant_vanishes_on_wall():
    # kappa1 = 1 is a wall: b1 = exp(i pi) = -1 and b1 - 1/b1 = 0
    k = KappaPoint.from_tail(1, Fraction(1, 4), Fraction(1, 5), Fraction(1, 7))
    assert abs(discriminant(kappa_to_eigen(k))) < 1e-12
    # the signed-sum wall k1+k2+k3+k4 = 1 kills a (b^eps - 1) factor
    k = KappaPoint.from_tail(Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(13, 60))
    assert sum(k.tail()) == 1
    assert abs(discriminant(kappa_to_eigen(k))) < 1e-12


def test_discriminant_nonzero_off_wall():
    k = KappaPoint.from_tail(Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 7))
    assert not wall_membership(k).on_wall
    assert abs(discriminant(kappa_to_eigen(k))) > 1e-8


def test_discriminant_factor_count():
    # generic symbolic-free check: 20 factors means degree-20 homogeneity
    # under b -> (b1, b2, b3, b4) with one entry scaled slightly
    b = EigenParams(1.1, 1.3 + 0.2j, 0.7, 2.0)
    d = discriminant(b)
    assert d != 0
    assert isinstance(complex(d), complex)


def test_wall_membership_exact_integer_witness():
    k = KappaPoint.from_tail(2, Fraction(1, 4), Fraction(1, 5), Fraction(1, 7))
    rep = wall_membership(k, mode="exact")
    assert rep.on_wall
    kinds = {(w[0], w[1]) for w in rep.witnesses}
    assert ("kappa_i_integer", 1) in kinds


def test_wall_membership_exact_signed_sum_witness():
    # k1 - k2 + k3 - k4 = 1 (odd)
    k = KappaPoint.from_tail(Fraction(3, 4), Fraction(1, 4), Fraction(3, 4), Fraction(1, 4))
    rep = wall_membership(k, mode="exact")
    assert rep.on_wall
    patterns = {w[1] for w in rep.witnesses if w[0] == "signed_sum_odd"}
    assert "+-+-" in patterns


def test_wall_membership_exact_requires_rational():
    k = KappaPoint.from_tail(0.1, 0.2, 0.3, 0.1)
    with pytest.raises(ValueError):
        wall_membership(k, mode="exact")


def test_wall_membership_tolerant():
    k = KappaPoint.from_tail(1.0 + 5e-10, 0.25, 0.2, 1.0 / 7)
    rep = wall_membership(k, mode="tolerant", tol=1e-9)
    assert rep.on_wall
    assert rep.witnesses[0][:3] == ("kappa_i_integer", 1, 1)
    rep = wall_membership(k, mode="tolerant", tol=1e-12)
    assert not rep.on_wall


def test_wall_report_consistency_guard():
    from cubicdyn.params import WallReport

    with pytest.raises(ValueError):
        WallReport(on_wall=True, witnesses=[])


def test_json_roundtrips():
    k = KappaPoint.from_tail(0.3, 0.2, 0.1, 0.15)
    assert np.allclose(
        [complex(v) for v in KappaPoint.from_json(k.to_json()).as_tuple()],
        [complex(v) for v in k.as_tuple()],
    )
    b = EigenParams(1 + 2j, 3, 4j, 0.5)
    assert EigenParams.from_json(b.to_json()).as_tuple() == tuple(map(complex, b.as_tuple()))
    th = ThetaPoint(1, 2, 3, 4)
    assert ThetaPoint.from_json(th.to_json()).as_tuple() == (1, 2, 3, 4)


def test_eigen_unit_circle_for_real_kappa():
    k = KappaPoint.from_tail(0.31, 0.27, 0.12, 0.55)
    b = kappa_to_eigen(k)
    for v in b.as_tuple():
        assert abs(abs(complex(v)) - 1) < 1e-12
    # b4 carries the extra sign
    assert abs(complex(b.b4) + cmath.exp(1j * cmath.pi * 0.55)) < 1e-12
