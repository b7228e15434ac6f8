"""Finite-dimensional indefinite inner product spaces.

A space is a Hermitian Gram matrix ``G`` with ``[f, g] = f^H G g``.  The form
is conjugate-linear in the first argument and linear in the second.
"""

import enum
from dataclasses import dataclass

import numpy as np

from ._validation import as_matrix, as_vector, fro, hermitian_residual
from .errors import (
    DegenerateSpaceError,
    EverythingIsotropicError,
    NotHermitianError,
    NotIndefiniteError,
    NotNegativeSubspaceError,
    NotOrthogonalError,
    NotPositiveSubspaceError,
    VerificationError,
    WrongDimensionsError,
)
from .numerics import DEFAULT_TOL, herm_eig, inv, solve


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


class KreinSpace:
    """Nondegenerate indefinite inner product space on ``C^n``.

    Parameters
    ----------
    gram : (n, n) array_like
        Hermitian Gram matrix of ``[., .]``.
    tol : float
        Relative tolerance used for symmetry, degeneracy and classification.

    Raises
    ------
    NotHermitianError, DegenerateSpaceError, NotIndefiniteError
    """

    def __init__(self, gram, tol=DEFAULT_TOL):
        G = as_matrix(gram, "gram", square=True)
        if hermitian_residual(G) > tol * fro(G):
            raise NotHermitianError("Gram matrix is not Hermitian")
        G = 0.5 * (G + G.conj().T)
        eig = herm_eig(G)
        lam = eig.eigenvalues
        scale = np.max(np.abs(lam))
        if scale == 0.0 or np.any(np.abs(lam) <= tol * scale):
            raise DegenerateSpaceError(
                "Gram matrix is singular; pass it through quotient_degenerate first"
            )
        p = int(np.sum(lam > 0))
        q = int(np.sum(lam < 0))
        if p == 0 or q == 0:
            raise NotIndefiniteError(f"signature ({p}, {q}) is definite")
        self.gram = _frozen(G)
        self.tol = float(tol)
        self.signature = (p, q)
        self._eig = eig

    @property
    def dim(self):
        return self.gram.shape[0]

    @property
    def eig(self):
        return self._eig

    def inner(self, f, g):
        return indefinite_inner(self, f, g)

    def adjoint(self, W):
        return krein_adjoint(self, W)

    def __repr__(self):
        return f"KreinSpace(dim={self.dim}, signature={self.signature}, tol={self.tol:g})"


class VectorKind(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"


@dataclass(frozen=True)
class VectorClass:
    kind: VectorKind
    value: float


def indefinite_inner(space, f, g):
    """``[f, g] = sum_ij conj(f_i) G_ij g_j``."""
    f = as_vector(f, space.dim, "f")
    g = as_vector(g, space.dim, "g")
    return complex(f.conj() @ space.gram @ g)


def classify_vector(space, f):
    """Sign of ``[f, f]`` with a neutral band of width ``tol * ||f||^2``."""
    f = as_vector(f, space.dim, "f")
    value = float(np.real(f.conj() @ space.gram @ f))
    band = space.tol * float(np.real(f.conj() @ f))
    if value > band:
        kind = VectorKind.POSITIVE
    elif value < -band:
        kind = VectorKind.NEGATIVE
    else:
        kind = VectorKind.NEUTRAL
    return VectorClass(kind, value)


def quotient_degenerate(gram, tol=DEFAULT_TOL):
    """Factor out the isotropic part of a possibly singular Hermitian form.

    Returns ``(space, P)`` where ``P`` (r x n) maps original coordinates to
    coordinates on the orthogonal complement of the kernel, so that
    ``[f, g] = [P f, P g]_space``.  For a nondegenerate input ``P`` is the
    identity and the space keeps the original Gram matrix.
    """
    G = as_matrix(gram, "gram", square=True)
    if hermitian_residual(G) > tol * fro(G):
        raise NotHermitianError("Gram matrix is not Hermitian")
    G = 0.5 * (G + G.conj().T)
    n = G.shape[0]
    eig = herm_eig(G)
    lam = eig.eigenvalues
    scale = np.max(np.abs(lam))
    if scale == 0.0:
        raise EverythingIsotropicError("Gram matrix vanishes")
    keep = np.abs(lam) > tol * scale
    if not np.any(keep):
        raise EverythingIsotropicError("every vector is isotropic")
    if np.all(keep):
        return KreinSpace(G, tol), np.eye(n, dtype=complex)

    V = eig.eigenvectors[:, keep]
    # order and phase-fix columns by their dominant coordinate so diagonal
    # inputs keep their coordinate layout
    lead = np.argmax(np.abs(V), axis=0)
    V = V[:, np.argsort(lead, kind="stable")]
    lead = np.argmax(np.abs(V), axis=0)
    phases = V[lead, np.arange(V.shape[1])]
    V = V * (np.abs(phases) / phases)
    P = V.conj().T
    reduced = P @ G @ V
    try:
        space = KreinSpace(reduced, tol)
    except NotIndefiniteError as exc:
        raise NotIndefiniteError(f"quotient is definite: {exc}") from exc
    return space, P


@dataclass(frozen=True)
class FundamentalDecomposition:
    """A fundamental decomposition ``H = L+ [+] L-`` and its symmetry ``J``.

    ``basis_plus`` and ``basis_minus`` hold ``[., .]``-orthonormal columns
    (``[e_i, e_j] = +-delta_ij``); ``metric`` is ``J^H G`` so that
    ``<f, g> = [J f, g] = f^H metric g``.
    """

    space: KreinSpace
    basis_plus: np.ndarray
    basis_minus: np.ndarray
    J: np.ndarray
    metric: np.ndarray

    def project_plus(self, f):
        f = as_vector(f, self.space.dim)
        return 0.5 * (f + self.J @ f)

    def project_minus(self, f):
        f = as_vector(f, self.space.dim)
        return 0.5 * (f - self.J @ f)

    def inner(self, f, g):
        return definite_inner(self, f, g)

    def residuals(self):
        """Defect of each structural invariant, as plain floats."""
        G, J = self.space.gram, self.J
        n = G.shape[0]
        lam = herm_eig(0.5 * (self.metric + self.metric.conj().T)).eigenvalues
        return {
            "involution": fro(J @ J - np.eye(n)),
            "self_adjoint": fro(G @ J - J.conj().T @ G),
            "metric_min_eig": float(lam[0]),
        }


def _orthonormalize(space, B, sign):
    """Gram-Schmidt in ``sign * [., .]`` with one re-orthogonalization pass."""
    G = space.gram
    out = []
    for k in range(B.shape[1]):
        v = B[:, k].copy()
        for _ in range(2):
            for u in out:
                v = v - sign * (u.conj() @ G @ v) * u
        nrm2 = sign * float(np.real(v.conj() @ G @ v))
        if nrm2 <= 0.0:
            raise (NotPositiveSubspaceError if sign > 0 else NotNegativeSubspaceError)(
                "basis lost definiteness during orthonormalization"
            )
        out.append(v / np.sqrt(nrm2))
    return np.column_stack(out) if out else np.zeros((G.shape[0], 0), dtype=complex)


def _assemble(space, Bp, Bm, check=True):
    B = np.hstack([Bp, Bm])
    signs = np.concatenate([np.ones(Bp.shape[1]), -np.ones(Bm.shape[1])])
    J = (B * signs) @ inv(B)
    metric = J.conj().T @ space.gram
    dec = FundamentalDecomposition(space, _frozen(Bp), _frozen(Bm), _frozen(J), _frozen(metric))
    if check:
        _verify(dec)
    return dec


def _verify(dec):
    r = dec.residuals()
    tol = dec.space.tol
    nJ = fro(dec.J)
    nG = fro(dec.space.gram)
    if r["involution"] > tol * max(nJ * nJ, 1.0):
        raise VerificationError(f"J^2 != I (residual {r['involution']:.3e})")
    if r["self_adjoint"] > tol * nG * max(nJ, 1.0):
        raise VerificationError(f"J not self-adjoint in [.,.] (residual {r['self_adjoint']:.3e})")
    if r["metric_min_eig"] <= 0.0:
        raise VerificationError("induced metric is not positive definite")


def fundamental_decomposition(space):
    """Canonical decomposition: spectral subspaces of the Gram matrix.

    Eigenvectors of ``G`` for positive (negative) eigenvalues span ``L+``
    (``L-``); scaling by ``|lambda|^{-1/2}`` makes them ``[., .]``-orthonormal.
    """
    if not isinstance(space, KreinSpace):
        raise DegenerateSpaceError("fundamental_decomposition needs a KreinSpace")
    lam = space.eig.eigenvalues
    V = space.eig.eigenvectors
    pos = lam > 0
    Bp = V[:, pos] / np.sqrt(lam[pos])
    Bm = V[:, ~pos] / np.sqrt(-lam[~pos])
    # positive block first, largest eigenvalue first
    return _assemble(space, Bp[:, ::-1], Bm)


def decomposition_from_bases(space, basis_plus, basis_minus):
    """Build the decomposition spanned by user-supplied positive/negative bases.

    The candidate bases are checked for definiteness and mutual
    ``[., .]``-orthogonality, then orthonormalized.

    Raises
    ------
    WrongDimensionsError, NotPositiveSubspaceError, NotNegativeSubspaceError,
    NotOrthogonalError
    """
    n = space.dim
    Bp = np.asarray(basis_plus, dtype=complex)
    Bm = np.asarray(basis_minus, dtype=complex)
    if Bp.ndim == 1:
        Bp = Bp[:, None]
    if Bm.ndim == 1:
        Bm = Bm[:, None]
    if Bp.shape[0] != n or Bm.shape[0] != n or Bp.shape[1] + Bm.shape[1] != n:
        raise WrongDimensionsError(
            f"bases {Bp.shape} and {Bm.shape} do not split a {n}-dimensional space"
        )
    if not (np.all(np.isfinite(Bp)) and np.all(np.isfinite(Bm))):
        raise WrongDimensionsError("bases contain non-finite entries")
    if np.any(np.linalg.norm(Bp, axis=0) == 0) or np.any(np.linalg.norm(Bm, axis=0) == 0):
        raise WrongDimensionsError("zero basis column")
    G = space.gram
    gnorm = float(np.max(np.abs(space.eig.eigenvalues)))
    Up = Bp / np.linalg.norm(Bp, axis=0)
    Um = Bm / np.linalg.norm(Bm, axis=0)
    tol = space.tol
    if Up.shape[1]:
        lam = herm_eig(Up.conj().T @ G @ Up, tol=1e-6).eigenvalues
        if lam[0] <= tol * gnorm:
            raise NotPositiveSubspaceError(f"Gram block of basis_plus has eigenvalue {lam[0]:.3e}")
    if Um.shape[1]:
        lam = herm_eig(Um.conj().T @ G @ Um, tol=1e-6).eigenvalues
        if lam[-1] >= -tol * gnorm:
            raise NotNegativeSubspaceError(f"Gram block of basis_minus has eigenvalue {lam[-1]:.3e}")
    if Up.shape[1] and Um.shape[1]:
        cross = float(np.max(np.abs(Up.conj().T @ G @ Um)))
        if cross > tol * gnorm:
            raise NotOrthogonalError(f"cross Gram block has entry {cross:.3e}")
    return _assemble(space, _orthonormalize(space, Bp, 1), _orthonormalize(space, Bm, -1))


def definite_inner(decomp, f, g):
    """``<f, g> = [J f, g]``, positive definite."""
    n = decomp.space.dim
    f = as_vector(f, n, "f")
    g = as_vector(g, n, "g")
    return complex(f.conj() @ decomp.metric @ g)


def krein_adjoint(space, W):
    """``W^[*] = G^{-1} W^H G``, the adjoint with respect to ``[., .]``."""
    W = as_matrix(W, "W", square=True)
    if W.shape[0] != space.dim:
        raise WrongDimensionsError(f"operator {W.shape} on a {space.dim}-dimensional space")
    return solve(space.gram, W.conj().T @ space.gram)


def transported_decomposition(decomp, U, U_inv=None):
    """Decomposition spanned by ``U L+`` and ``U L-`` for a ``[., .]``-unitary ``U``.

    Its symmetry is ``U J U^{-1}``.  No re-orthonormalization is done: ``U``
    preserves the indefinite product, so the transported bases stay
    orthonormal up to rounding.
    """
    space = decomp.space
    U = as_matrix(U, "U", square=True)
    if U_inv is None:
        U_inv = inv(U)
    J = U @ decomp.J @ U_inv
    dec = FundamentalDecomposition(
        space,
        _frozen(U @ decomp.basis_plus),
        _frozen(U @ decomp.basis_minus),
        _frozen(J),
        _frozen(J.conj().T @ space.gram),
    )
    _verify(dec)
    return dec
