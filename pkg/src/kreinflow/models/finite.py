"""Finite-dimensional fixtures: Minkowski space, the Pauli family, diagonal flows and the boost."""

from dataclasses import dataclass

import numpy as np

from ..dynamics import DiagonalSpec, GeneratorSpec, normalize_to_group
from ..errors import InputError
from ..krein_core import KreinSpace, decomposition_from_bases, fundamental_decomposition

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


def minkowski_space():
    """``[f, g] = t1 t2 - x1 x2 - y1 y2 - z1 z2``."""
    return KreinSpace(np.diag([1.0, -1.0, -1.0, -1.0]))


@dataclass(frozen=True)
class PauliModel:
    rho: float
    xi: float
    space: KreinSpace
    J_L: np.ndarray
    Q: np.ndarray
    J_M: np.ndarray
    M_plus: np.ndarray
    M_minus: np.ndarray
    decomp_L: object
    decomp_M: object


def _rank_one_column(P):
    k = int(np.argmax(np.linalg.norm(P, axis=0)))
    return P[:, [k]]


def pauli_family(rho, xi):
    """``C^2`` with ``[f, g] = conj(f1) g2 + conj(f2) g1`` and ``J_M = sigma1 exp(rho Z)``.

    ``Z = cos(xi) sigma2 + sin(xi) sigma3``; ``exp(rho Z)`` is taken in closed
    form as ``cosh(rho) I + sinh(rho) Z`` (valid because ``Z^2 = I``).
    """
    rho, xi = float(rho), float(xi)
    if not (np.isfinite(rho) and np.isfinite(xi)):
        raise InputError("rho and xi must be finite")
    space = KreinSpace(SIGMA1)
    Z = np.cos(xi) * SIGMA2 + np.sin(xi) * SIGMA3
    Q = rho * Z
    expQ = np.cosh(rho) * SIGMA0 + np.sinh(rho) * Z
    J_M = SIGMA1 @ expQ
    I = SIGMA0
    M_plus = _rank_one_column(I + J_M)
    M_minus = _rank_one_column(I - J_M)
    return PauliModel(
        rho,
        xi,
        space,
        SIGMA1.copy(),
        Q,
        J_M,
        M_plus,
        M_minus,
        fundamental_decomposition(space),
        decomposition_from_bases(space, M_plus, M_minus),
    )


def diagonal_model(signs, lambdas):
    """Gram ``diag(signs)`` with ``W(t) e_n = exp(lambda_n t) e_n``."""
    signs = np.asarray(signs, dtype=float).ravel()
    lambdas = np.asarray(lambdas, dtype=complex).ravel()
    if signs.shape != lambdas.shape:
        raise InputError(f"{signs.size} signs but {lambdas.size} eigenvalues")
    if not np.all(np.abs(signs) == 1):
        raise InputError("signs must be +1 or -1")
    space = KreinSpace(np.diag(signs))
    return space, DiagonalSpec(np.eye(signs.size), lambdas)


def boost_model():
    """Two-dimensional section of Minkowski space with ``W(t) = exp(t sigma1)``."""
    space = KreinSpace(np.diag([1.0, -1.0]))
    return space, GeneratorSpec(SIGMA1)


def boost_group():
    space, spec = boost_model()
    return space, normalize_to_group(space, spec, 0.0)
