import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holimits.geometry import Grid
from holimits.harmonic import (circle_nodes, classify_harmonicity, mean_value_residual,
                               poisson_extend, poisson_sequence)
from holimits.maps import EXCEPTIONAL, HOLOMORPHIC
from holimits.osgood import classify_holomorphy
from holimits.sequences import FunctionSequence, constant, geometric_partial_sums

theta = 2 * np.pi * np.arange(256) / 256


def test_mean_value_examples():
    assert mean_value_residual(lambda z: z * z, 0, 0.5) < 1e-12
    assert mean_value_residual(lambda z: np.abs(z) ** 2, 0, 0.5) == pytest.approx(0.25, abs=1e-12)
    assert mean_value_residual(lambda z: 7 + 0 * z, 0.3j, 0.1) == 0


def test_mean_value_checks():
    with pytest.raises(ValueError):
        mean_value_residual(np.real, 0, 0.0)
    with pytest.raises(ValueError):
        mean_value_residual(np.real, 0, 0.5, n=16)


def test_poisson_examples():
    assert poisson_extend(np.cos(theta), 0, 1.0, 0.3) == pytest.approx(0.3, abs=1e-8)
    assert poisson_extend(np.cos(2 * theta), 0, 1.0, 0.5) == pytest.approx(0.25, abs=1e-8)
    assert poisson_extend(np.ones(256), 0, 1.0, 0.2 - 0.6j) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        poisson_extend(np.cos(theta), 0, 1.0, 1.0)


def test_poisson_shifted_disc():
    c, R = 0.5 - 0.2j, 0.7
    b = np.real(circle_nodes(c, R, 256) ** 3)
    w = c + 0.3 + 0.2j
    assert poisson_extend(b, c, R, w) == pytest.approx((w ** 3).real, abs=1e-8)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 4), st.booleans(), st.floats(0, 0.9), st.floats(0, 2 * np.pi))
def test_poisson_reproduces_harmonic_polynomials(k, imag, rho, phi):
    part = np.imag if imag else np.real
    b = part(np.exp(1j * k * theta))
    w = rho * np.exp(1j * phi)
    assert abs(poisson_extend(b, 0, 1.0, w) - part(w ** k)) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.floats(0.05, 0.3))
def test_poisson_output_has_mean_value_property(coeffs, r):
    a, b, c = coeffs
    bnd = a + b * np.cos(theta) + c * np.sin(5 * theta)
    seq = poisson_sequence(lambda j, t: bnd, 0, 1.0, 1)
    assert mean_value_residual(lambda z: seq(1, np.atleast_1d(z)), 0.1 + 0.2j, r) <= 1e-6


def test_classify_poisson_sequence_all_harmonic():
    seq = poisson_sequence(lambda j, t: np.cos(t) + np.cos(3 * t) / j, 0, 1.0, 400)
    # tail gap |u_l - u_m| <= 0.6^3 (1/l - 1/m), below 1e-3 only for large l
    m = classify_harmonicity(seq, Grid.square(0.6, 17), [(300, 400), (350, 400)])
    assert m.count(EXCEPTIONAL) == 0 and m.positive_fraction == 1.0
    assert m.labels()[HOLOMORPHIC] == "harmonic"


def test_classify_rejects_modulus_squared():
    seq = FunctionSequence(lambda j, z: np.abs(z) ** 2, 3)
    m = classify_harmonicity(seq, Grid.square(0.5, 5), [(2, 3)], reject_tol=1e-3, accept_tol=1e-4)
    # r = 0.125 gives a residual of r^2 ~ 0.0156 in every cell
    assert m.count(EXCEPTIONAL) == m.verdict.size


def test_classify_argument_checks():
    with pytest.raises(ValueError):
        classify_harmonicity(constant(1.0), Grid.square(0.5, 5), [(1, 11)])
    with pytest.raises(ValueError):
        classify_harmonicity(constant(1.0), Grid.square(0.5, 5), [(1, 2)], 0.1, 0.01)


def test_example_best_effort_tail_is_vacuous(example_seq):
    # uncertified indices fall back to the constant 1/2, so a (5, 6) tail sees
    # no deviation anywhere; acceptance therefore requires certification
    assert not example_seq.certified
    m = classify_harmonicity(example_seq.as_function_sequence().real_part(), Grid.square(0.8, 33),
                             [(5, 6)])
    assert m.count(EXCEPTIONAL) == 0 and m.positive_fraction == 1.0


@settings(max_examples=15, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=1, max_size=5),
       st.floats(0.1, 0.9))
def test_holomorphic_cells_are_harmonic(coeffs, kink):
    c = np.array(coeffs)
    # pointwise limit p(z) + |Re z|, holomorphic off the imaginary axis
    seq = FunctionSequence(lambda j, z: np.polyval(c, z) + np.sqrt(z.real ** 2 + (kink / j) ** 2), 30)
    grid = Grid.square(0.8, 9)
    pairs = [(20, 30), (25, 30)]
    h = classify_holomorphy(seq, grid, pairs)
    u = classify_harmonicity(seq, grid, pairs)
    assert np.all(u.verdict[h.verdict == HOLOMORPHIC] == HOLOMORPHIC)


def test_geometric_real_parts_match_holomorphy():
    seq = geometric_partial_sums(60)
    grid = Grid.square(0.6, 13)
    h = classify_holomorphy(seq, grid, [(50, 60)])
    u = classify_harmonicity(seq, grid, [(50, 60)])
    assert h.count(HOLOMORPHIC) == u.count(HOLOMORPHIC) == 144
