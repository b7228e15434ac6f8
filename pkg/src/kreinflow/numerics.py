"""Dense complex matrix kernel.

Everything here works on ``numpy`` complex arrays and returns fresh arrays;
nothing is modified in place.  Dimensions are assumed small (a few dozen), so
the algorithms favour accuracy and transparency over speed.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from ._validation import as_matrix, fro, hermitian_residual
from .errors import (
    InputError,
    LogBranchAmbiguityError,
    NoConvergenceError,
    NonPositiveSpectrumError,
    NotHermitianError,
    NotMetricSelfAdjointError,
    NotPositiveDefiniteError,
    SingularError,
)

DEFAULT_TOL = 1e-9
POSITIVITY_FLOOR = 1e-12
PIVOT_TOL = 1e-14

_EPS = np.finfo(float).eps
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T

    def apply(self, fn):
        """Return ``V diag(fn(lambda)) V^H``."""
        V = self.eigenvectors
        return (V * fn(self.eigenvalues)) @ V.conj().T


def herm_eig(M, tol=DEFAULT_TOL):
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi sweeps.

    Each rotation first removes the phase of the pivot ``a_pq`` with a diagonal
    unitary and then applies a real Jacobi rotation, so the arithmetic stays in
    the standard real-symmetric form.

    Raises
    ------
    NotHermitianError
        If ``||M - M^H||_F > tol * ||M||_F``.
    NoConvergenceError
        If the off-diagonal mass does not reach rounding level.
    """
    A = as_matrix(M, "M", square=True)
    n = A.shape[0]
    norm = fro(A)
    if hermitian_residual(A) > tol * norm:
        raise NotHermitianError(
            f"symmetry residual {hermitian_residual(A):.3e} exceeds {tol:.1e}*||M||"
        )
    A = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=complex)
    if n == 1 or norm == 0.0:
        return HermitianEig(np.real(np.diag(A)).copy(), V)

    skip = _EPS * norm / n
    for _ in range(_MAX_SWEEPS):
        off = fro(A - np.diag(np.diag(A)))
        if off <= _EPS * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                phase = np.conj(apq / r)
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                R = np.array([[c, s], [-s * phase, c * phase]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ R
                A[idx, :] = R.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ R
    else:
        raise NoConvergenceError(f"Jacobi iteration stalled after {_MAX_SWEEPS} sweeps")

    lam = np.real(np.diag(A))
    order = np.argsort(lam, kind="stable")
    return HermitianEig(lam[order], V[:, order])


def solve(A, b, tol=PIVOT_TOL):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    ``b`` may be a vector or a matrix of right-hand sides.  A pivot smaller
    than ``tol * max|A_ij|`` raises :class:`SingularError`.
    """
    A = as_matrix(A, "A", square=True).copy()
    n = A.shape[0]
    rhs = np.asarray(b, dtype=complex)
    vector_rhs = rhs.ndim == 1
    B = rhs.reshape(n, -1).copy() if rhs.shape[0] == n else None
    if B is None or rhs.ndim > 2:
        raise InputError(f"right-hand side shape {rhs.shape} incompatible with {A.shape}")
    scale = np.max(np.abs(A))
    if scale == 0.0:
        raise SingularError("matrix is zero")

    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[piv, k]) <= tol * scale:
            raise SingularError(f"pivot {abs(A[piv, k]):.3e} below {tol:.1e}*max|A| at column {k}")
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            B[[k, piv]] = B[[piv, k]]
        factors = A[k + 1:, k] / A[k, k]
        A[k + 1:, k:] -= np.outer(factors, A[k, k:])
        B[k + 1:] -= np.outer(factors, B[k])

    X = np.empty_like(B)
    for k in range(n - 1, -1, -1):
        X[k] = (B[k] - A[k, k + 1:] @ X[k + 1:]) / A[k, k]
    return X[:, 0] if vector_rhs else X


def inv(A, tol=PIVOT_TOL):
    A = as_matrix(A, "A", square=True)
    return solve(A, np.eye(A.shape[0], dtype=complex), tol=tol)


# degree-6 diagonal Pade coefficients of exp
_PADE6 = np.array(
    [factorial(12 - k) * factorial(6) / (factorial(12) * factorial(k) * factorial(6 - k)) for k in range(7)]
)


def _expm_pade(A):
    n = A.shape[0]
    norm1 = np.max(np.sum(np.abs(A), axis=0))
    s = max(0, int(np.ceil(np.log2(norm1 / 0.5)))) if norm1 > 0.5 else 0
    X = A / (2.0 ** s)
    I = np.eye(n, dtype=complex)
    powers = [I, X]
    for _ in range(5):
        powers.append(powers[-1] @ X)
    N = sum(c * P for c, P in zip(_PADE6, powers))
    D = sum(((-1) ** k) * c * P for k, (c, P) in enumerate(zip(_PADE6, powers)))
    R = solve(D, N)
    for _ in range(s):
        R = R @ R
    return R


def matrix_exp(A):
    """Matrix exponential.

    Hermitian and skew-Hermitian inputs go through :func:`herm_eig`; anything
    else uses scaling and squaring with the [6/6] Pade approximant.
    """
    A = as_matrix(A, "A", square=True)
    n = A.shape[0]
    norm = fro(A)
    if norm == 0.0:
        return np.eye(n, dtype=complex)
    if hermitian_residual(A) <= 1e-14 * norm:
        return herm_eig(A).apply(np.exp)
    if fro(A + A.conj().T) <= 1e-14 * norm:
        # A = -i H with H = iA Hermitian
        return herm_eig(1j * A).apply(lambda lam: np.exp(-1j * lam))
    return _expm_pade(A)


def cholesky(H, tol=DEFAULT_TOL):
    """Lower-triangular ``L`` with ``H = L L^H``."""
    H = as_matrix(H, "H", square=True)
    if hermitian_residual(H) > tol * fro(H):
        raise NotHermitianError("metric is not Hermitian")
    try:
        return np.linalg.cholesky(0.5 * (H + H.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError("metric is not positive definite") from exc


def metric_self_adjoint_residual(S, H):
    """``||H S - S^H H||_F``; zero iff ``S`` is self-adjoint for ``<f, g> = f^H H g``."""
    return fro(H @ S - S.conj().T @ H)


def matrix_log_posdef_metric(S, H, tol=DEFAULT_TOL, floor=POSITIVITY_FLOOR):
    """Logarithm of an operator that is self-adjoint and positive for the metric ``H``.

    With ``H = L L^H`` the matrix ``T = L^H S L^{-H}`` is Hermitian positive
    definite in the standard product; its eigen-log is mapped back by the same
    congruence.  The result ``Q`` satisfies ``exp(Q) = S`` and ``H Q = Q^H H``.

    Parameters
    ----------
    S : (n, n) array_like
        Operator to take the logarithm of.
    H : (n, n) array_like
        Hermitian positive definite metric.
    tol : float
        Relative tolerance of the metric self-adjointness test.
    floor : float
        Eigenvalues of ``T`` at or below ``floor * max(eig)`` are treated as
        non-positive.

    Raises
    ------
    NotMetricSelfAdjointError, NonPositiveSpectrumError, NotPositiveDefiniteError
    """
    S = as_matrix(S, "S", square=True)
    H = as_matrix(H, "H", square=True)
    if S.shape != H.shape:
        raise InputError(f"S {S.shape} and H {H.shape} differ in shape")
    L = cholesky(H, tol)
    res = metric_self_adjoint_residual(S, H)
    if res > tol * fro(H) * fro(S):
        raise NotMetricSelfAdjointError(f"||HS - S^H H|| = {res:.3e}")
    Lh = L.conj().T
    Lh_inv = inv(Lh)
    T = Lh @ S @ Lh_inv
    eig = herm_eig(0.5 * (T + T.conj().T))
    lam = eig.eigenvalues
    if lam[0] <= floor * max(abs(lam[-1]), 1.0):
        raise NonPositiveSpectrumError(f"smallest eigenvalue {lam[0]:.3e} is not positive")
    return Lh_inv @ eig.apply(np.log) @ Lh


def metric_operator_norm(M, H):
    """Operator norm of ``M`` for the norm ``||f||^2 = f^H H f``."""
    M = as_matrix(M, "M", square=True)
    Lh = cholesky(H).conj().T
    B = Lh @ M @ inv(Lh)
    lam = herm_eig(B.conj().T @ B).eigenvalues
    return float(np.sqrt(max(lam[-1], 0.0)))


def sqrtm_db(A, maxiter=100):
    """Principal square root by the Denman-Beavers iteration."""
    Y = as_matrix(A, "A", square=True)
    Z = np.eye(Y.shape[0], dtype=complex)
    for _ in range(maxiter):
        Y_next = 0.5 * (Y + inv(Z))
        Z = 0.5 * (Z + inv(Y))
        if fro(Y_next - Y) <= 1e-15 * fro(Y_next):
            return Y_next
        Y = Y_next
    raise NoConvergenceError("Denman-Beavers square root did not converge")


def matrix_log(A, branch_margin=np.pi / 4):
    """Principal logarithm by inverse scaling and squaring.

    Raises :class:`LogBranchAmbiguityError` when an eigenvalue of ``A`` lies
    within ``branch_margin`` (in argument) of the negative real axis.
    """
    X = as_matrix(A, "A", square=True)
    n = X.shape[0]
    mu = np.linalg.eigvals(X)
    if np.any(np.abs(mu) == 0.0):
        raise SingularError("logarithm of a singular matrix")
    if np.any(np.abs(np.angle(mu)) > np.pi - branch_margin):
        raise LogBranchAmbiguityError("eigenvalue close to the branch cut; reduce the step")
    I = np.eye(n, dtype=complex)
    k = 0
    while np.max(np.sum(np.abs(X - I), axis=0)) > 0.25:
        X = sqrtm_db(X)
        k += 1
        if k > 60:
            raise NoConvergenceError("square-root stage of matrix_log did not settle")
    E = X - I
    # log(I+E) = 2 atanh(Z), Z = (2I + E)^{-1} E; the factors commute
    Z = solve(2 * I + E, E)
    Z2 = Z @ Z
    term = Z.copy()
    total = Z.copy()
    for j in range(1, 40):
        term = term @ Z2
        add = term / (2 * j + 1)
        total += add
        if fro(add) <= _EPS * fro(total):
            break
    return (2.0 ** (k + 1)) * total
