"""Input coercion shared by the public functions."""

import numpy as np

from .errors import DimensionMismatchError, InputError


def as_matrix(M, name="matrix", square=False):
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise InputError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if square and A.shape[0] != A.shape[1]:
        raise InputError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} has non-finite entries")
    return A


def as_vector(v, dim=None, name="vector"):
    x = np.asarray(v, dtype=complex)
    if x.ndim != 1:
        raise InputError(f"{name} must be 1-D, got shape {x.shape}")
    if dim is not None and x.shape[0] != dim:
        raise DimensionMismatchError(f"{name} has length {x.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(x)):
        raise InputError(f"{name} has non-finite entries")
    return x


def check_same_shape(A, B, what="operands"):
    if A.shape != B.shape:
        raise DimensionMismatchError(f"{what}: shapes {A.shape} and {B.shape} differ")


def fro(A):
    return float(np.linalg.norm(A))


def hermitian_residual(M):
    return fro(M - M.conj().T)
