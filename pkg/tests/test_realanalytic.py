import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holimits.realanalytic import (TaylorLimit, check_factorial_bound, classify_analytic,
                                   constant_family, derivative_table, estimate_derivatives,
                                   exp_partial_sums, geometric_partial_sums, minimal_K,
                                   polynomial_family, radius_estimate, sqrt_shift,
                                   taylor_limit_coeffs)

centers = np.linspace(-0.8, 0.8, 9)


def test_estimate_cubic():
    d = estimate_derivatives(lambda x: x ** 3, (-1, 1), 3, 8, centers)
    assert np.allclose(d[:, 3], 6, atol=1e-10)
    assert np.allclose(d[:, 1], 3 * centers ** 2, atol=1e-10)


def test_estimate_exp():
    d = estimate_derivatives(np.exp, (-1, 1), 4, 24, [0.0])
    assert np.allclose(d, 1, atol=1e-8)


def test_estimate_sqrt():
    d = estimate_derivatives(lambda x: np.sqrt(x * x + 0.25), (-1, 1), 2, 32, [0.0])
    assert abs(d[0, 2] - 2) < 1e-6


def test_estimate_refusals():
    with pytest.raises(ValueError):
        estimate_derivatives(np.exp, (-1, 1), 9, 20, [0.0])
    with pytest.raises(ValueError):
        estimate_derivatives(np.exp, (-1, 1), 5, 4, [0.0])
    with pytest.raises(ValueError):
        estimate_derivatives(np.exp, (1, 1), 2, 4, [0.0])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8))
def test_polynomial_exactness(coeffs):
    fam = polynomial_family(coeffs)
    L = len(coeffs) - 1
    closed = derivative_table(fam, [1], (-1, 1), centers, L)
    sp = derivative_table(fam, [1], (-1, 1), centers, L, method="spectral", N=max(L, 8))
    assert np.allclose(sp.values, closed.values, atol=1e-10 * max(1.0, sum(map(abs, coeffs))) * 10 ** L)


def test_spectral_matches_closed_form():
    # sqrt(x^2 + 1/j) has branch points at +-i/sqrt(j), so only small j resolve at N = 64
    for fam, js, N in ((exp_partial_sums(12), [4, 8, 12], 32), (sqrt_shift(16), [1, 2], 64)):
        a = derivative_table(fam, js, (-1, 1), centers, 4)
        b = derivative_table(fam, js, (-1, 1), centers, 4, method="spectral", N=N)
        assert np.max(np.abs(a.values - b.values)) < 1e-6


def test_unknown_method():
    with pytest.raises(ValueError):
        derivative_table(exp_partial_sums(), [1], (-1, 1), [0.0], 2, method="fd")


def test_csv_shape():
    t = derivative_table(exp_partial_sums(3), [1, 2], (-1, 1), [0.0, 0.5], 2)
    lines = t.to_csv().splitlines()
    assert lines[0] == "j,x,order,value" and len(lines) == 1 + 2 * 2 * 3


def test_factorial_bound_constant():
    r = check_factorial_bound(derivative_table(constant_family(2.0), range(1, 5), (-1, 1), centers, 3), 3.0, 1.0)
    assert r.passed and r.worst_ratio == pytest.approx(2 / 3) and r.worst_witness[2] == 0


def test_factorial_bound_exp():
    t = derivative_table(exp_partial_sums(12), range(1, 13), (-1, 1), np.linspace(-1, 1, 21), 8)
    r = check_factorial_bound(t, 3.0, 1.0)
    assert r.passed
    assert r.worst_ratio == pytest.approx(math.e / 3, rel=1e-6) or r.worst_ratio < math.e / 3


def test_factorial_bound_sqrt_fails():
    t = derivative_table(sqrt_shift(64), range(1, 65), (-1, 1), [0.0], 2)
    r = check_factorial_bound(t, 2.0, 1.0)
    assert not r.passed and r.worst_witness == (64, 0.0, 2)
    with pytest.raises(ValueError):
        check_factorial_bound(t, 0.0, 1.0)


def test_sqrt_second_derivative_oracle():
    fam = sqrt_shift(64)
    for j in (1, 4, 9, 64):
        assert fam.derivative(j, 0.0, 2) == pytest.approx(math.sqrt(j))
        assert fam.derivative(j, 0.0, 1) == 0


def test_sqrt_minimal_K_measured():
    # f_J''(0)/2! dominates at J >= 8, so minimal K tracks sqrt(J)/2
    for J in (16, 36, 64):
        t = derivative_table(sqrt_shift(64), range(1, J + 1), (-1, 1), np.linspace(-1, 1, 21), 2)
        assert minimal_K(t, 1.0) == pytest.approx(math.sqrt(J) / 2, rel=1e-12)


def test_taylor_exp():
    tl = taylor_limit_coeffs(exp_partial_sums(12), 0.0, 4, range(8, 13))
    assert np.allclose(tl.alphas, 1, atol=1e-8) and tl.converged.all()


def test_taylor_constant():
    tl = taylor_limit_coeffs(constant_family(5.0), 0.3, 4, range(3, 8))
    assert tl.alphas.tolist() == [5, 0, 0, 0, 0] and tl.converged.all()


def test_taylor_sqrt_flags():
    tl = taylor_limit_coeffs(sqrt_shift(64), 0.0, 2, range(32, 65))
    assert not tl.converged[2] and tl.converged[1]


def test_taylor_window_checked():
    with pytest.raises(ValueError):
        taylor_limit_coeffs(exp_partial_sums(12), 0.0, 4, range(8, 14))
    with pytest.raises(ValueError):
        taylor_limit_coeffs(exp_partial_sums(12), 0.0, 4, [])


def test_even_symmetry():
    for fam, tail in ((sqrt_shift(64), range(60, 65)), (polynomial_family([1, 0, 3, 0, -2], 5), range(1, 6))):
        tl = taylor_limit_coeffs(fam, 0.0, 6, tail)
        assert np.all(np.abs(tl.alphas[1::2]) < 1e-8)


def test_classify_examples():
    exp_tl = taylor_limit_coeffs(exp_partial_sums(12), 0.0, 4, range(8, 13))
    sq_tl = taylor_limit_coeffs(sqrt_shift(64), 0.0, 4, range(32, 65))
    const = TaylorLimit(0.0, np.array([2.0, 0, 0, 0, 0]), np.zeros(5), np.ones(5, bool))
    v = classify_analytic([exp_tl, sq_tl, const])
    assert v[0].verdict == "analytic" and v[0].radius_estimate > 1
    assert v[1].verdict == "not-analytic"
    assert v[2].verdict == "analytic" and v[2].radius_estimate == math.inf
    with pytest.raises(ValueError):
        classify_analytic([TaylorLimit(0.0, np.ones(3), np.zeros(3), np.ones(3, bool))])


def test_classify_undetermined():
    a = np.array([math.factorial(l) * 100.0 ** l for l in range(5)])
    (v,) = classify_analytic([TaylorLimit(0.0, a, np.zeros(5), np.ones(5, bool))])
    assert v.verdict == "undetermined" and v.radius_estimate == pytest.approx(0.01)


def test_radius_geometric():
    # sum x^k has l-th Taylor coefficient 1, radius 1
    a = [math.factorial(l) for l in range(9)]
    assert radius_estimate(a) == pytest.approx(1.0)


def test_forward_check():
    fam = exp_partial_sums(20)
    t = derivative_table(fam, range(1, 21), (-1, 1), centers, 8)
    assert check_factorial_bound(t, 3.0, 1.0).passed
    field = [taylor_limit_coeffs(fam, c, 4, range(16, 21)) for c in (-0.5, 0.0, 0.5)]
    for v in classify_analytic(field):
        assert v.verdict == "analytic" and v.radius_estimate >= 0.5


def test_geometric_family_derivatives():
    fam = geometric_partial_sums(6)
    assert fam.derivative(6, 0.0, 3) == 6
    assert fam.derivative(3, 0.5, 0) == pytest.approx(1.875)
    assert fam.as_sequence()(2, np.array([0.5 + 1j]))[0] == pytest.approx(1.75)
