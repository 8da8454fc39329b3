"""Tests for the surface maps: involutions, braid maps, words, Jacobians."""

from fractions import Fraction

import numpy as np
import pytest

from cubicdyn.surface import (
    AffinePoint,
    GeneratorLetter,
    coxeter_apply,
    coxeter_jacobian,
    cubic_eval,
    cubic_gradient,
    g_apply,
    parse_word,
    sigma_apply,
    surface_residual_bound,
    word_apply,
)


def _random_state(rng, radius=1.0):
    x = tuple(rng.uniform(-radius, radius, 3) + 1j * rng.uniform(-radius, radius, 3))
    t = tuple(rng.uniform(-radius, radius, 4) + 1j * rng.uniform(-radius, radius, 4))
    return x, t


def _rational_state(rng):
    x = tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))) for _ in range(3))
    t = tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))) for _ in range(4))
    return x, t


def test_sigma_is_an_involution_float():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x, t = _random_state(rng)
        for i in (1, 2, 3):
            y = sigma_apply(i, sigma_apply(i, x, t), t)
            assert max(abs(a - b) for a, b in zip(x, y)) < 1e-12


def test_sigma_is_an_involution_exact():
    rng = np.random.default_rng(2)
    for _ in range(20):
        x, t = _rational_state(rng)
        for i in (1, 2, 3):
            assert sigma_apply(i, sigma_apply(i, x, t), t) == x


def test_sigma_preserves_the_cubic_exactly():
    # f is a monic quadratic in x_i whose roots sigma_i swaps, so the
    # value of f is literally invariant, not just its zero set
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, t = _rational_state(rng)
        for i in (1, 2, 3):
            assert cubic_eval(sigma_apply(i, x, t), t) == cubic_eval(x, t)


def test_coxeter_order_is_sigma3_first():
    rng = np.random.default_rng(4)
    x, t = _random_state(rng)
    y = sigma_apply(1, sigma_apply(2, sigma_apply(3, x, t), t), t)
    assert np.allclose(coxeter_apply(x, t), y)


def test_g_inverse_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(50):
        x, t = _random_state(rng)
        for i in (1, 2, 3):
            y, ty = g_apply(i, 1, x, t)
            z, tz = g_apply(i, -1, y, ty)
            assert max(abs(a - b) for a, b in zip(x, z)) < 1e-12
            assert max(abs(a - b) for a, b in zip(t, tz)) < 1e-12


def test_g_preserves_the_cubic_up_to_theta_swap():
    rng = np.random.default_rng(6)
    for _ in range(20):
        x, t = _rational_state(rng)
        for i in (1, 2, 3):
            y, ty = g_apply(i, 1, x, t)
            assert cubic_eval(y, ty) == cubic_eval(x, t)


def test_braid_relation():
    rng = np.random.default_rng(7)
    lhs = parse_word("g1 g2 g1")
    rhs = parse_word("g2 g1 g2")
    for _ in range(50):
        x, t = _random_state(rng)
        a = word_apply(lhs, x, t)
        b = word_apply(rhs, x, t)
        assert np.allclose(a.point.as_tuple(), b.point.as_tuple(), atol=1e-10)
        assert np.allclose(a.theta.as_tuple(), b.theta.as_tuple(), atol=1e-12)


def test_third_braid_generator_is_a_conjugate():
    rng = np.random.default_rng(8)
    lhs = parse_word("g3")
    rhs = parse_word("g1 g2 g1^-1")
    for _ in range(50):
        x, t = _random_state(rng)
        a = word_apply(lhs, x, t)
        b = word_apply(rhs, x, t)
        assert np.allclose(a.point.as_tuple(), b.point.as_tuple(), atol=1e-10)
        assert np.allclose(a.theta.as_tuple(), b.theta.as_tuple(), atol=1e-12)


def test_commutator_word_equals_coxeter_squared():
    rng = np.random.default_rng(9)
    word = parse_word("g1^2 g2^-2 g1^-2 g2^2")
    for _ in range(50):
        x, t = _random_state(rng)
        a = word_apply(word, x, t)
        y = coxeter_apply(coxeter_apply(x, t), t)
        assert np.allclose(a.point.as_tuple(), y, atol=1e-8)
        assert np.allclose(a.theta.as_tuple(), t, atol=1e-12)


def test_commutator_word_exact_rational():
    rng = np.random.default_rng(10)
    word = parse_word("g1^2 g2^-2 g1^-2 g2^2")
    for _ in range(10):
        x, t = _rational_state(rng)
        a = word_apply(word, x, t, escape_radius=float("inf"))
        y = coxeter_apply(coxeter_apply(x, t), t)
        assert a.point.as_tuple() == y
        assert a.theta.as_tuple() == t


def test_parse_word_roundtrip_and_errors():
    w = parse_word("s1 g2^-2 g3")
    assert str(w) == "s1 g2^-1 g2^-1 g3"
    with pytest.raises(ValueError):
        parse_word("h1")
    with pytest.raises(ValueError):
        parse_word("s4")
    with pytest.raises(ValueError):
        GeneratorLetter("sigma", 1, -1)


def test_word_apply_escape_status():
    t = (0.3, -0.2, 0.1, 0.7)
    x = (50.0, 60.0, 70.0)
    res = word_apply(parse_word("s1 s2 s3 s1 s2 s3"), x, t, escape_radius=1e4)
    assert res.status == "escaped"


def test_coxeter_jacobian_matches_finite_differences():
    rng = np.random.default_rng(11)
    x, t = _random_state(rng, radius=0.5)
    for N in (1, 2):
        jac = np.array(coxeter_jacobian(x, t, N), dtype=complex)
        eps = 1e-7
        for c in range(3):
            dx = np.zeros(3, dtype=complex)
            dx[c] = eps
            xp = tuple(np.array(x) + dx)
            fd = (np.array(coxeter_apply_n(xp, t, N)) - np.array(coxeter_apply_n(x, t, N))) / eps
            assert np.allclose(fd, jac[:, c], atol=1e-5)


def coxeter_apply_n(x, t, n):
    y = x
    for _ in range(n):
        y = coxeter_apply(y, t)
    return y


def test_coxeter_jacobian_exact_rational():
    x = (Fraction(1, 2), Fraction(-1, 3), Fraction(2, 5))
    t = (Fraction(1), Fraction(0), Fraction(-1, 2), Fraction(3))
    jac = coxeter_jacobian(x, t, 1)
    assert all(isinstance(v, Fraction) for row in jac for v in row)
    # each sigma step has Jacobian determinant -1, so det(Dc) = -1 exactly
    det = (
        jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1])
        - jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0])
        + jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0])
    )
    assert det == -1


def test_affine_point_residual_and_bound():
    t = (0.0, 0.0, 0.0, -4.0)
    p = AffinePoint(2.0, 0.0, 0.0)  # 4 - 4 = 0
    assert p.on_surface(t)
    assert surface_residual_bound((10, 0, 0), 1e-9) == pytest.approx(1e-9 * 1001)
    grad = cubic_gradient((2.0, 0.0, 0.0), t)
    assert np.allclose(grad, (4.0, 0.0, 0.0))
