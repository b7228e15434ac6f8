import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import crandn, random_space
from kreinflow import (
    KreinSpace,
    VectorKind,
    classify_vector,
    decomposition_from_bases,
    definite_inner,
    fundamental_decomposition,
    indefinite_inner,
    krein_adjoint,
    quotient_degenerate,
)
from kreinflow.errors import (
    DegenerateSpaceError,
    DimensionMismatchError,
    EverythingIsotropicError,
    NotHermitianError,
    NotIndefiniteError,
    NotNegativeSubspaceError,
    NotOrthogonalError,
    NotPositiveSubspaceError,
    WrongDimensionsError,
)
from kreinflow.models import SIGMA1, boost_model, minkowski_space

E = np.e


@pytest.fixture
def pauli():
    return KreinSpace(SIGMA1)


def test_space_signature_and_readonly_gram():
    space = minkowski_space()
    assert space.signature == (1, 3) and space.dim == 4
    with pytest.raises(ValueError):
        space.gram[0, 0] = 5


@pytest.mark.parametrize(
    "gram, err",
    [
        (np.diag([1.0, 1.0]), NotIndefiniteError),
        (np.diag([1.0, -1.0, 0.0]), DegenerateSpaceError),
        (np.array([[1.0, 1.0], [0.0, -1.0]]), NotHermitianError),
    ],
)
def test_space_rejects(gram, err):
    with pytest.raises(err):
        KreinSpace(gram)


def test_inner_minkowski():
    f = np.array([2.0, 1, 0, 0])
    assert indefinite_inner(minkowski_space(), f, f) == pytest.approx(3.0)


def test_inner_pauli(pauli):
    assert indefinite_inner(pauli, [1, 0], [0, 1]) == pytest.approx(1.0)


def test_inner_zero_and_mismatch(pauli):
    assert indefinite_inner(pauli, [0, 0], [3, 4j]) == 0
    with pytest.raises(DimensionMismatchError):
        indefinite_inner(pauli, [1, 0, 0], [1, 0])


def test_inner_conjugation_convention(pauli):
    f, g = np.array([1j, 0]), np.array([0, 1])
    # conjugate-linear in the first slot
    assert indefinite_inner(pauli, f, g) == pytest.approx(-1j)
    assert indefinite_inner(pauli, g, f) == pytest.approx(1j)


def test_classify_examples(pauli):
    m = minkowski_space()
    c = classify_vector(m, [2, 1, 0, 0])
    assert c.kind is VectorKind.POSITIVE and c.value == pytest.approx(3)
    assert classify_vector(m, [1, 1, 0, 0]).kind is VectorKind.NEUTRAL
    c = classify_vector(pauli, [1, -1])
    assert c.kind is VectorKind.NEGATIVE and c.value == pytest.approx(-2)


def test_quotient_diagonal():
    space, P = quotient_degenerate(np.diag([1.0, -1.0, 0.0]))
    assert np.allclose(space.gram, np.diag([1, -1]))
    assert np.allclose(P, [[1, 0, 0], [0, 1, 0]])


def test_quotient_nondegenerate_is_identity():
    space, P = quotient_degenerate(np.diag([1.0, -1.0]))
    assert np.allclose(P, np.eye(2)) and np.allclose(space.gram, np.diag([1, -1]))


def test_quotient_random_congruence():
    rng = np.random.default_rng(11)
    T = crandn(rng, 4, 4)
    G = T.conj().T @ np.diag([1.0, -1, 0, 0]) @ T
    space, P = quotient_degenerate(G)
    assert space.dim == 2 and space.signature == (1, 1)
    f, g = crandn(rng, 4), crandn(rng, 4)
    assert np.vdot(f, G @ g) == pytest.approx(indefinite_inner(space, P @ f, P @ g), rel=1e-9)


def test_quotient_errors():
    with pytest.raises(EverythingIsotropicError):
        quotient_degenerate(np.zeros((3, 3)))
    with pytest.raises(NotIndefiniteError):
        quotient_degenerate(np.diag([1.0, 2.0, 0.0]))


def test_canonical_decomposition_diag():
    d = fundamental_decomposition(KreinSpace(np.diag([1.0, -1.0])))
    assert np.allclose(d.J, np.diag([1, -1]))
    assert np.allclose(np.abs(d.basis_plus[:, 0]), [1, 0])


def test_canonical_decomposition_pauli(pauli):
    d = fundamental_decomposition(pauli)
    assert np.allclose(d.J, SIGMA1)
    assert np.allclose(np.abs(d.basis_plus[:, 0]), [2**-0.5, 2**-0.5])
    assert np.allclose(np.abs(d.basis_minus[:, 0]), [2**-0.5, 2**-0.5])
    assert indefinite_inner(pauli, d.basis_minus[:, 0], d.basis_minus[:, 0]) == pytest.approx(-1)


def test_canonical_decomposition_minkowski():
    d = fundamental_decomposition(minkowski_space())
    assert np.allclose(d.J, np.diag([1, -1, -1, -1]))
    res = d.residuals()
    assert res["involution"] < 1e-12 and res["self_adjoint"] < 1e-12 and res["metric_min_eig"] > 0


def test_decomposition_from_bases_pauli_rho1(pauli):
    d = decomposition_from_bases(pauli, np.array([[1], [E]]), np.array([[1], [-E]]))
    assert np.allclose(d.J, [[0, 1 / E], [E, 0]], atol=1e-12)
    assert np.allclose(d.J @ d.J, np.eye(2), atol=1e-12)


def test_decomposition_roundtrip(pauli):
    d = fundamental_decomposition(pauli)
    d2 = decomposition_from_bases(pauli, d.basis_plus, d.basis_minus)
    assert np.allclose(d.J, d2.J, atol=1e-12)


def test_decomposition_from_bases_errors(pauli):
    s = 2**-0.5
    with pytest.raises(NotPositiveSubspaceError):
        decomposition_from_bases(pauli, [s, -s], [s, -s])
    with pytest.raises(NotNegativeSubspaceError):
        decomposition_from_bases(pauli, [s, s], [s, s])
    with pytest.raises(NotOrthogonalError):
        decomposition_from_bases(pauli, [1, 2], [1, -1])
    with pytest.raises(WrongDimensionsError):
        decomposition_from_bases(pauli, np.eye(2), [1, -1])


def test_definite_inner_examples(pauli):
    d = fundamental_decomposition(pauli)
    assert definite_inner(d, [1, 0], [1, 0]) == pytest.approx(1)
    assert abs(definite_inner(d, d.basis_plus[:, 0], d.basis_minus[:, 0])) < 1e-14
    m = fundamental_decomposition(minkowski_space())
    f = np.array([1 + 2j, -0.5, 3j, 0.25])
    assert definite_inner(m, f, f) == pytest.approx(np.sum(np.abs(f) ** 2))


def test_krein_adjoint_examples():
    space = KreinSpace(np.diag([1.0, -1.0]))
    assert np.allclose(krein_adjoint(space, [[0, 1], [0, 0]]), [[0, 0], [-1, 0]])
    bspace, spec = boost_model()
    U = spec.flow(0.7)
    assert np.allclose(krein_adjoint(bspace, U), np.linalg.inv(U))
    d = fundamental_decomposition(KreinSpace(SIGMA1))
    assert np.allclose(krein_adjoint(d.space, d.J), d.J)


def test_krein_adjoint_rejects_wrong_size(pauli):
    with pytest.raises(WrongDimensionsError):
        krein_adjoint(pauli, np.eye(3))


space_strategy = st.builds(
    lambda n, seed: random_space(np.random.default_rng(seed), n),
    st.integers(2, 8),
    st.integers(0, 2**32 - 1),
)


@given(space=space_strategy, seed=st.integers(0, 2**32 - 1))
def test_decomposition_invariants(space, seed):
    d = fundamental_decomposition(space)
    n = space.dim
    G = space.gram
    assert np.linalg.norm(d.J @ d.J - np.eye(n)) <= 1e-9
    assert np.linalg.norm(G @ d.J - d.J.conj().T @ G) <= 1e-9 * np.linalg.norm(G)
    assert np.linalg.eigvalsh(0.5 * (d.metric + d.metric.conj().T))[0] > 0
    rng = np.random.default_rng(seed)
    for _ in range(1000 // 40):
        f = crandn(rng, n)
        dd = definite_inner(d, f, f).real
        assert dd >= abs(indefinite_inner(space, f, f)) - 1e-9
        fp, fm = d.project_plus(f), d.project_minus(f)
        assert np.allclose(fp + fm, f)
        if np.linalg.norm(fp) > 1e-8:
            assert classify_vector(space, fp).kind is VectorKind.POSITIVE
        if np.linalg.norm(fm) > 1e-8:
            assert classify_vector(space, fm).kind is VectorKind.NEGATIVE


@given(space=space_strategy, seed=st.integers(0, 2**32 - 1))
def test_adjoint_involution(space, seed):
    W = crandn(np.random.default_rng(seed), space.dim, space.dim)
    assert np.linalg.norm(krein_adjoint(space, krein_adjoint(space, W)) - W) <= 1e-10 * np.linalg.norm(W)


@given(space=space_strategy, seed=st.integers(0, 2**32 - 1))
def test_adjoint_defining_identity(space, seed):
    rng = np.random.default_rng(seed)
    n = space.dim
    W, f, g = crandn(rng, n, n), crandn(rng, n), crandn(rng, n)
    lhs = indefinite_inner(space, W @ f, g)
    rhs = indefinite_inner(space, f, krein_adjoint(space, W) @ g)
    assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(W) * np.linalg.norm(f) * np.linalg.norm(g) * 10


@given(space=space_strategy, seed=st.integers(0, 2**32 - 1))
def test_inner_conjugate_symmetry_and_linearity(space, seed):
    rng = np.random.default_rng(seed)
    n = space.dim
    f, g, h = crandn(rng, n), crandn(rng, n), crandn(rng, n)
    a = complex(*rng.standard_normal(2))
    assert indefinite_inner(space, f, g) == pytest.approx(np.conj(indefinite_inner(space, g, f)))
    assert indefinite_inner(space, f, a * g + h) == pytest.approx(
        a * indefinite_inner(space, f, g) + indefinite_inner(space, f, h)
    )
