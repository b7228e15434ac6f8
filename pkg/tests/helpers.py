"""Random generators shared by the test modules."""

import numpy as np
from scipy.linalg import expm

from kreinflow import KreinSpace


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_hermitian(rng, n):
    A = crandn(rng, n, n)
    return 0.5 * (A + A.conj().T)


def random_signs(rng, n):
    p = int(rng.integers(1, n))
    signs = np.array([1.0] * p + [-1.0] * (n - p))
    return rng.permutation(signs)


def random_space(rng, n, congruence=0.3):
    """Indefinite space ``T^H diag(signs) T`` with ``T`` a mild perturbation of I."""
    T = np.eye(n) + congruence * crandn(rng, n, n) / np.sqrt(n)
    return KreinSpace(T.conj().T @ np.diag(random_signs(rng, n)) @ T)


def random_j_unitary(rng, space, scale=0.5):
    """``exp(G^{-1} S)`` with ``S`` skew-Hermitian preserves ``[., .]``."""
    n = space.dim
    S = crandn(rng, n, n)
    S = scale * (S - S.conj().T) / (2 * np.sqrt(n))
    return expm(np.linalg.solve(space.gram, S))


def ip(space, f, g):
    return np.vdot(f, space.gram @ g)
