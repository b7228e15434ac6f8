import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermval
from scipy.interpolate import CubicSpline
from math import factorial

from kreinflow import VectorKind, classify_vector, definite_inner, fit_alpha, invariant_decomposition
from kreinflow.errors import (
    AsymmetricGridError,
    GridMismatchError,
    GridTooNarrowError,
    NotIndefiniteError,
    ShiftNotZeroError,
    TimeOutOfRangeError,
)
from kreinflow.models import (
    SIGMA1,
    GridFunction,
    GridParams,
    catmull_rom,
    diagonal_model,
    dilation_model,
    fourier_weight_check,
    hermite_basis,
    hermite_functions,
    minkowski_space,
    oscillator_group,
    parity_decomposition,
    pauli_family,
    pt_inner,
)
from kreinflow.cone_ops import positive_bijection_certificate

P = GridParams()


def gauss(params=P):
    return GridFunction.sample(lambda x: np.exp(-0.5 * x * x), params)


def test_minkowski():
    m = minkowski_space()
    assert m.signature == (1, 3)
    assert classify_vector(m, [2, 1, 0, 0]).kind is VectorKind.POSITIVE
    assert classify_vector(m, [1, 1, 0, 0]).kind is VectorKind.NEUTRAL


def test_pauli_trivial_rho():
    m = pauli_family(0.0, 0.8)
    assert np.allclose(m.J_M, SIGMA1) and np.allclose(m.Q, 0)


def test_pauli_rho1():
    m = pauli_family(1.0, np.pi / 2)
    e = np.e
    assert np.allclose(m.J_M, [[0, 1 / e], [e, 0]], atol=1e-14)
    assert np.allclose(m.J_M @ m.J_M, np.eye(2), atol=1e-14)
    v = m.M_plus[:, 0] / m.M_plus[0, 0]
    assert np.allclose(v, [1, e])
    assert np.vdot(v, SIGMA1 @ v).real == pytest.approx(2 * e)


def test_pauli_anticommutation():
    m = pauli_family(0.7, 1.1)
    assert np.linalg.norm(m.J_M @ m.Q + m.Q @ m.J_M) < 1e-14


def test_diagonal_model_cases():
    space, spec = diagonal_model([1, -1], [-0.5 + 1j, -0.5 + 3j])
    assert fit_alpha(space, spec) == pytest.approx(-1, abs=1e-8)
    space, spec = diagonal_model([1, -1], [1.0, 2.0])
    assert not positive_bijection_certificate(space, spec.flow(1.0)).certified
    with pytest.raises(NotIndefiniteError):
        diagonal_model([1, 1], [0.0, 0.0])


def test_pt_inner_examples():
    g = gauss()
    assert pt_inner(g, g) == pytest.approx(np.sqrt(np.pi), abs=1e-8)
    even = GridFunction.sample(lambda x: np.cos(x) * np.exp(-x * x), P)
    odd = GridFunction.sample(lambda x: x * np.exp(-x * x), P)
    assert abs(pt_inner(even, odd)) < 1e-14
    f1 = hermite_basis(2, 0.0).functions[1]
    assert pt_inner(f1, f1) == pytest.approx(-1, abs=1e-12)


def test_pt_inner_errors():
    g = gauss()
    other = gauss(GridParams(L=12, m=1001))
    with pytest.raises(GridMismatchError):
        pt_inner(g, other)
    x = np.linspace(-5, 7, 101)
    f = GridFunction(x, np.exp(-x * x), np.full(101, x[1] - x[0]))
    with pytest.raises(AsymmetricGridError):
        pt_inner(f, f)


def test_pt_inner_conjugate_symmetry():
    b = hermite_basis(5, 0.3)
    for f in b.functions:
        for g in b.functions:
            assert pt_inner(f, g) == pytest.approx(np.conj(pt_inner(g, f)), abs=1e-12)


def test_quadrature_converged():
    fine = GridParams(L=12, m=4001)
    fixtures = [lambda x: np.exp(-0.5 * x * x), lambda x: (1 + x + x**3) * np.exp(-0.5 * x * x)]
    for fn in fixtures:
        a = GridFunction.sample(fn, P)
        b = GridFunction.sample(fn, fine)
        assert abs(pt_inner(a, a) - pt_inner(b, b)) <= 1e-8
    ga, gb = hermite_basis(8, 0.3, P).gram_pt, hermite_basis(8, 0.3, fine).gram_pt
    assert np.max(np.abs(ga - gb)) <= 1e-8


def test_dilation_identity_and_range():
    g = gauss()
    assert np.allclose(dilation_model(P, 0.0)(g).values, g.values)
    with pytest.raises(TimeOutOfRangeError):
        dilation_model(P, 0.6)
    with pytest.raises(GridMismatchError):
        dilation_model(P, 0.1)(gauss(GridParams(m=1001)))


def test_dilation_preserves_pt_after_normalization():
    g = gauss()
    Ug = dilation_model(P, 0.3)(g)
    assert pt_inner(Ug, Ug) == pytest.approx(pt_inner(g, g), abs=1e-6)


@pytest.mark.parametrize("t", [0.1, 0.3, 0.5])
def test_dilation_ratio_without_prefactor(t):
    g = gauss()
    Wg = dilation_model(P, t, with_prefactor=False)(g)
    assert (pt_inner(Wg, Wg) / pt_inner(g, g)).real == pytest.approx(np.exp(-t), abs=1e-5)


@given(
    t=st.floats(-0.5, 0.5),
    c=st.lists(st.floats(-1, 1), min_size=4, max_size=4),
    d=st.lists(st.floats(-1, 1), min_size=4, max_size=4),
)
def test_dilation_unitarity_polynomial_fixtures(t, c, d):
    fn = lambda co: (lambda x: np.polyval(co, x) * np.exp(-0.5 * x * x))  # noqa: E731
    f, g = GridFunction.sample(fn(c), P), GridFunction.sample(fn(d), P)
    U = dilation_model(P, t)
    assert abs(pt_inner(U(f), U(g)) - pt_inner(f, g)) <= 1e-5


def test_dilation_composition():
    f = GridFunction.sample(lambda x: (1 + x + x**3) * np.exp(-0.5 * x * x), P)
    two = dilation_model(P, 0.2)(dilation_model(P, 0.25)(f))
    one = dilation_model(P, 0.45)(f)
    assert np.max(np.abs(two.values - one.values)) <= 1e-5


def test_catmull_rom_against_cubic_spline():
    x = np.linspace(-3, 3, 301)
    v = np.sin(2 * x) * np.exp(-x * x / 4)
    y = np.linspace(-2.9, 2.9, 777)
    ours = catmull_rom(v, x[0], x[1] - x[0], y).real
    ref = CubicSpline(x, v)(y)
    assert np.max(np.abs(ours - ref)) < 1e-5
    assert np.all(catmull_rom(v, x[0], x[1] - x[0], np.array([-10.0, 10.0])) == 0)


def test_hermite_recurrence_matches_explicit_polynomials():
    x = np.linspace(-4, 4, 41)
    rows = hermite_functions(6, x)
    for n in range(6):
        coef = np.zeros(n + 1)
        coef[n] = 1
        explicit = hermval(x, coef) * np.exp(-x * x / 2) / np.sqrt(2.0**n * factorial(n) * np.sqrt(np.pi))
        assert np.allclose(rows[n].real, explicit, atol=1e-13)


def test_hermite_basis_a0():
    b = hermite_basis(6, 0.0)
    assert np.max(np.abs(b.gram_pt - np.diag((-1.0) ** np.arange(6)))) <= 1e-7
    assert np.max(np.abs(b.gram_l2 - np.eye(6))) <= 1e-7


def test_hermite_basis_shifted():
    b = hermite_basis(6, 0.4)
    assert np.max(np.abs(b.gram_pt - np.diag((-1.0) ** np.arange(6)))) <= 1e-6
    assert np.all(np.linalg.eigvalsh(b.gram_l2) > 0)


@pytest.mark.parametrize("N", [2, 5, 8, 12])
@pytest.mark.parametrize("a", [0.0, 0.2, 0.4])
def test_pt_gram_structure(N, a):
    b = hermite_basis(N, a)
    assert np.max(np.abs(b.gram_pt - np.diag((-1.0) ** np.arange(N)))) <= 1e-5


def test_hermite_grid_too_narrow():
    with pytest.raises(GridTooNarrowError):
        hermite_basis(8, 0.0, GridParams(L=6, m=801))


def test_l2_norms_increase_with_shift():
    norms = hermite_basis(8, 0.3).l2_norms()
    assert np.all(np.diff(norms) > 0)
    # generating-function closed form: ||phi_n||^2 = exp(a^2) L_n(-2 a^2)
    from scipy.special import eval_laguerre

    a = 0.3
    ref = np.sqrt(np.exp(a * a) * eval_laguerre(np.arange(8), -2 * a * a))
    assert np.allclose(norms, ref, atol=1e-10)


def test_fourier_weight_cases():
    assert fourier_weight_check(4, 0.0) <= 1e-6
    assert fourier_weight_check(4, 0.3, GridParams(L=12, m=4096)) <= 1e-5
    b = hermite_basis(4, 0.3, GridParams(m=2001))
    with pytest.raises(GridMismatchError):
        fourier_weight_check(4, 0.3, GridParams(m=4096), basis=b)


def test_parity_decomposition():
    b = hermite_basis(6, 0.0)
    d = parity_decomposition(b)
    assert np.allclose(d.J, np.diag((-1.0) ** np.arange(6)), atol=1e-12)
    e2 = np.eye(6)[2]
    assert definite_inner(d, e2, e2) == pytest.approx(1, abs=1e-7)
    rng = np.random.default_rng(0)
    c1, c2 = rng.standard_normal(6), rng.standard_normal(6)
    l2 = c1 @ b.gram_l2 @ c2
    assert definite_inner(d, c1, c2) == pytest.approx(l2, abs=1e-7)
    with pytest.raises(ShiftNotZeroError):
        parity_decomposition(hermite_basis(6, 0.4))


def test_oscillator_group_cases():
    space, group = oscillator_group(6)
    assert np.allclose(group.evaluate(np.pi), -np.eye(6), atol=1e-12)
    dec = invariant_decomposition(space, group)
    assert np.allclose(dec.J, np.diag((-1.0) ** np.arange(6)), atol=1e-12)
    space, group = oscillator_group(6, 0.5)
    assert group.alpha == pytest.approx(0, abs=1e-12)
