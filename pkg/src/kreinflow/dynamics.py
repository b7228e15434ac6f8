"""One-parameter semigroups and their normalization to ``[., .]``-unitary groups.

A semigroup ``W(t)`` whose members are bijections of the positive cone obeys
``[W(t) f, W(t) g] = exp(alpha t) [f, g]``; dividing out ``exp(alpha t / 2)``
gives a group ``U(t)`` preserving the indefinite product.  The rest of the
module studies ``U`` against a fixed fundamental decomposition: the evolved
symmetries ``J_t = U(t) J U(t)^{-1}``, their norms, the factorization
``U(t) = exp(-Q_t / 2) Y_t`` and invariant decompositions.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, fro
from .cone_ops import positive_bijection_certificate
from .errors import (
    ExponentialLawViolationError,
    InputError,
    KreinError,
    NegativeTimeError,
    NeutralEigenvectorError,
    NotDiagonalizableError,
    NotPositiveBijectionError,
    UnitarityResidualError,
    VerificationError,
)
from .krein_core import decomposition_from_bases, krein_adjoint, transported_decomposition
from .numerics import (
    herm_eig,
    inv,
    matrix_exp,
    matrix_log,
    matrix_log_posdef_metric,
    metric_operator_norm,
    solve,
)

DEFAULT_ALPHA_GRID = tuple(np.round(np.arange(1, 21) * 0.1, 10))
FLOW_TOL = 1e-8
_CHECK_TIMES = (0.5, 1.0, 2.0, -1.0)


# --------------------------------------------------------------------------
# semigroup descriptions

@dataclass(frozen=True)
class DiagonalSpec:
    """``W(t) f_n = exp(lambda_n t) f_n`` for the columns ``f_n`` of ``basis``."""

    basis: np.ndarray
    lambdas: np.ndarray

    def __post_init__(self):
        B = as_matrix(self.basis, "basis", square=True)
        lam = np.asarray(self.lambdas, dtype=complex).ravel()
        if lam.shape[0] != B.shape[0]:
            raise InputError(f"{lam.shape[0]} eigenvalues for a {B.shape[0]}-dimensional basis")
        if not np.all(np.isfinite(lam)):
            raise InputError("non-finite eigenvalue")
        object.__setattr__(self, "basis", B)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "_basis_inv", inv(B))

    @property
    def dim(self):
        return self.basis.shape[0]

    def flow(self, t):
        return (self.basis * np.exp(self.lambdas * t)) @ self._basis_inv

    def generator_matrix(self):
        return (self.basis * self.lambdas) @ self._basis_inv

    def eigenvalues(self):
        return self.lambdas.copy()

    def check_basis(self, space, tol=None):
        """Verify ``|[f_n, f_m]| = delta_nm`` for the basis columns."""
        tol = space.tol if tol is None else tol
        M = self.basis.conj().T @ space.gram @ self.basis
        off = M - np.diag(np.diag(M))
        return bool(np.max(np.abs(off)) <= tol and np.max(np.abs(np.abs(np.diag(M)) - 1)) <= tol)


@dataclass(frozen=True)
class GeneratorSpec:
    """``W(t) = exp(t A)``."""

    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A, "A", square=True))

    @property
    def dim(self):
        return self.A.shape[0]

    def flow(self, t):
        return matrix_exp(t * self.A)

    def generator_matrix(self):
        return self.A.copy()

    def eigenvalues(self):
        return _diagonalize(self.A)[0]


def evolve(spec, t):
    """``W(t)`` for ``t >= 0``."""
    if t < 0:
        raise NegativeTimeError("semigroups are defined for t >= 0 only")
    return spec.flow(float(t))


def semigroup_law_residual(spec, t1, t2):
    """``||W(t1 + t2) - W(t1) W(t2)|| / (||W(t1)|| ||W(t2)||)``."""
    A, B = evolve(spec, t1), evolve(spec, t2)
    return fro(evolve(spec, t1 + t2) - A @ B) / (fro(A) * fro(B))


# --------------------------------------------------------------------------
# alpha and normalization

def fit_exponential_rate(ts, thetas):
    """Least-squares ``alpha`` in ``theta(t) = exp(alpha t)`` and the max log residual.

    The fit passes through the origin, since ``theta(0) = 1``.
    """
    ts = np.asarray(ts, dtype=float)
    logs = np.log(np.asarray(thetas, dtype=float))
    alpha = float(ts @ logs / (ts @ ts))
    return alpha, float(np.max(np.abs(logs - alpha * ts)))


def fit_alpha(space, spec, t_grid=DEFAULT_ALPHA_GRID, seed=0, tol=FLOW_TOL):
    """Exponent ``alpha`` of ``theta(t) = exp(alpha t)`` along the semigroup.

    Every ``W(t)`` on the grid must pass
    :func:`~kreinflow.cone_ops.positive_bijection_certificate`.

    Raises
    ------
    NotPositiveBijectionError
        Some ``W(t)`` is not a bijection of the positive cone.
    ExponentialLawViolationError
        ``ln theta(t)`` deviates from the fitted line by more than ``tol``.
    """
    ts = [float(t) for t in t_grid if t != 0]
    if not ts:
        raise InputError("t_grid needs at least one non-zero time")
    thetas = []
    for t in ts:
        cert = positive_bijection_certificate(space, evolve(spec, t), seed=seed)
        if not cert.certified:
            raise NotPositiveBijectionError(
                f"W({t:g}) is not a bijection of the positive cone "
                f"(residual {cert.report.residual:.3e}, {cert.violations} sampled violations)"
            )
        thetas.append(cert.report.theta)
    alpha, residual = fit_exponential_rate(ts, thetas)
    if residual > tol:
        raise ExponentialLawViolationError(f"ln theta(t) is off the line by {residual:.3e}")
    return alpha


@dataclass(frozen=True)
class Group:
    """``U(t) = exp(-alpha t / 2) W(t)``, continued to ``t < 0`` as the inverse."""

    space: object
    spec: object
    alpha: float

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t):
        # spec.flow(-t) is the exact inverse of spec.flow(t) for both spec kinds
        t = float(t)
        return np.exp(-0.5 * self.alpha * t) * self.spec.flow(t)

    def generator_matrix(self):
        return self.spec.generator_matrix() - 0.5 * self.alpha * np.eye(self.spec.dim)

    def unitarity_residual(self, t):
        """``||U^H G U - G|| / (||G|| max(1, ||U||^2))``."""
        U = self.evaluate(t)
        G = self.space.gram
        return fro(U.conj().T @ G @ U - G) / (fro(G) * max(1.0, fro(U) ** 2))


def normalize_to_group(space, spec, alpha, tol=FLOW_TOL):
    """Divide out the growth rate; check ``[U(t) f, U(t) g] = [f, g]`` on sample times."""
    if spec.dim != space.dim:
        raise InputError(f"spec of dimension {spec.dim} on a {space.dim}-dimensional space")
    group = Group(space, spec, float(alpha))
    worst = max(group.unitarity_residual(t) for t in _CHECK_TIMES)
    if worst > tol:
        raise UnitarityResidualError(
            f"U(t) does not preserve [.,.] (residual {worst:.3e}); alpha inconsistent with spec"
        )
    return group


# --------------------------------------------------------------------------
# evolved symmetries

def evolved_symmetry(space, decomp, group, t):
    """``J_t = U(t) J U(t)^{-1}``, the symmetry of ``U(t) L+ [+] U(t) L-``."""
    U = group.evaluate(t)
    UJ = U @ decomp.J
    # J_t U = U J  <=>  U^T J_t^T = (U J)^T
    return solve(U.T, UJ.T).T


def evolved_decomposition(space, decomp, group, t):
    U = group.evaluate(t)
    return transported_decomposition(decomp, U, inv(U))


def q_operator(space, decomp_L, decomp_M, tol=FLOW_TOL):
    """``Q = ln(J_L J_M)`` taken in the metric of ``<., .>_L``.

    Verifies ``exp(Q) = J_L J_M``, ``exp(-Q) = J_M J_L`` and
    ``J_L Q = -Q J_L`` to relative accuracy ``tol``.
    """
    S = decomp_L.J @ decomp_M.J
    Q = matrix_log_posdef_metric(S, decomp_L.metric)
    res = q_residuals(decomp_L, decomp_M, Q)
    scale = max(1.0, fro(S))
    bad = {k: v for k, v in res.items() if v > tol * scale}
    if bad:
        raise VerificationError(f"Q failed its identities: {bad}")
    return Q


def q_residuals(decomp_L, decomp_M, Q):
    JL, JM = decomp_L.J, decomp_M.J
    return {
        "exp_q": fro(matrix_exp(Q) - JL @ JM),
        "exp_minus_q": fro(matrix_exp(-Q) - JM @ JL),
        "anticommutation": fro(JL @ Q + Q @ JL),
    }


@dataclass(frozen=True)
class Factorization:
    """``U(t) = exp(-Q_t / 2) Y_t`` with the defects of its defining identities."""

    t: float
    Q: np.ndarray
    Y: np.ndarray
    residuals: dict = field(default_factory=dict)


def factorize_unitary(space, decomp, group, t, tol=FLOW_TOL):
    """Split ``U(t)`` into a positive part ``exp(-Q_t/2)`` and a ``<., .>_L``-unitary ``Y_t``.

    ``Q_t`` is :func:`q_operator` between ``decomp`` and its image under
    ``U(t)``; ``Y_t = exp(Q_t/2) U(t)`` commutes with ``J``.
    """
    U = group.evaluate(t)
    evolved = evolved_decomposition(space, decomp, group, t)
    Q = q_operator(space, decomp, evolved, tol=tol)
    Y = matrix_exp(0.5 * Q) @ U
    H, J = decomp.metric, decomp.J
    res = {
        "reconstruction": fro(matrix_exp(-0.5 * Q) @ Y - U),
        "unitarity": fro(H @ inv(Y) - Y.conj().T @ H),
        "commutation": fro(J @ Y - Y @ J),
        "anticommutation": fro(J @ Q + Q @ J),
    }
    return Factorization(float(t), Q, Y, res)


@dataclass(frozen=True)
class FlowRow:
    t: float
    jt_norm: float
    q_anticomm_residual: float
    factorization_residual: float
    unitarity_residual: float
    error: str = ""


@dataclass(frozen=True)
class FlowReport:
    t_grid: tuple
    jt_norms: tuple
    uniformly_bounded: bool
    bound_c: float
    rows: tuple
    growth_rate: float

    CSV_COLUMNS = ("t", "jt_norm", "q_anticomm_residual", "factorization_residual", "unitarity_residual")


def uniform_bound_scan(space, decomp, group, t_grid, bound_c=None, tol=FLOW_TOL):
    """Norms of ``J_t`` in ``<., .>_L`` along ``t_grid`` and a uniform-bound verdict.

    ``bound_c`` defaults to ten times the norm of ``J`` itself.  Each row also
    carries the factorization defects at that time; a time where the
    factorization cannot be formed gets NaN residuals and an error note.
    ``growth_rate`` is the least-squares slope of ``ln ||J_t||`` against ``|t|``.
    """
    ts = [float(t) for t in t_grid]
    if not ts:
        raise InputError("empty t_grid")
    H = decomp.metric
    if bound_c is None:
        bound_c = 10.0 * metric_operator_norm(decomp.J, H)
    rows = []
    for t in ts:
        Jt = evolved_symmetry(space, decomp, group, t)
        norm = metric_operator_norm(Jt, H)
        unit = group.unitarity_residual(t)
        try:
            fac = factorize_unitary(space, decomp, group, t, tol=tol)
            anti = fac.residuals["anticommutation"]
            recon = max(fac.residuals["reconstruction"], fac.residuals["unitarity"], fac.residuals["commutation"])
            err = ""
        except KreinError as exc:
            anti = recon = float("nan")
            err = f"{type(exc).__name__}: {exc}"
        rows.append(FlowRow(t, norm, anti, recon, unit, err))
    norms = tuple(r.jt_norm for r in rows)
    abs_t = np.abs(ts)
    growth = float(abs_t @ np.log(norms) / (abs_t @ abs_t)) if np.any(abs_t > 0) else 0.0
    return FlowReport(tuple(ts), norms, bool(max(norms) <= bound_c), float(bound_c), tuple(rows), growth)


# --------------------------------------------------------------------------
# spectral side

def _diagonalize(A, cond_limit=1e8):
    A = as_matrix(A, "A", square=True)
    lam, V = np.linalg.eig(A)
    V = V / np.linalg.norm(V, axis=0)
    if np.linalg.cond(V) > cond_limit:
        raise NotDiagonalizableError("eigenvector matrix is numerically singular")
    return lam, V


def _clusters(lam, tol):
    order = sorted(range(len(lam)), key=lambda k: (round(lam[k].imag, 8), round(lam[k].real, 8)))
    groups = []
    scale = max(1.0, float(np.max(np.abs(lam))))
    for k in order:
        for grp in groups:
            if abs(lam[grp[0]] - lam[k]) <= tol * scale:
                grp.append(k)
                break
        else:
            groups.append([k])
    return groups


def invariant_decomposition(space, group, tol=FLOW_TOL):
    """A fundamental decomposition whose parts are invariant under the group.

    The generator is diagonalized; within each eigenspace the indefinite
    Gram block is diagonalized so that the eigenvectors split by the sign of
    ``[v, v]``.  This is a constructive special case: when an eigenvector is
    neutral no invariant decomposition is produced.

    Raises
    ------
    NeutralEigenvectorError, NotDiagonalizableError
    """
    A = group.generator_matrix()
    lam, V = _diagonalize(A)
    G = space.gram
    gscale = float(np.max(np.abs(space.eig.eigenvalues)))
    plus, minus = [], []
    for grp in _clusters(lam, 1e-8):
        Vc = V[:, grp]
        Gc = Vc.conj().T @ G @ Vc
        eig = herm_eig(0.5 * (Gc + Gc.conj().T), tol=1e-6)
        for mu, u in zip(eig.eigenvalues, eig.eigenvectors.T):
            if abs(mu) <= space.tol * gscale * 10:
                raise NeutralEigenvectorError(
                    f"eigenvalue {lam[grp[0]]:.6g} of the generator has a neutral eigenvector"
                )
            (plus if mu > 0 else minus).append(Vc @ u)
    if not plus or not minus:
        raise VerificationError("invariant split is not indefinite")
    dec = decomposition_from_bases(space, np.column_stack(plus), np.column_stack(minus))
    n = space.dim
    Pp = 0.5 * (np.eye(n) + dec.J)
    Pm = np.eye(n) - Pp
    for t in _CHECK_TIMES:
        U = group.evaluate(t)
        leak = max(fro(Pm @ U @ Pp), fro(Pp @ U @ Pm))
        if leak > tol * max(1.0, fro(U)):
            raise VerificationError(f"subspaces not invariant at t={t:g} (leak {leak:.3e})")
    return dec


def generator(group, dt=1e-3, t_grid=(0.5, 1.0, 2.0), tol=FLOW_TOL):
    """Generator ``A`` with ``U(t) = exp(t A)``, from the principal log of ``U(dt)``.

    Checks that ``exp(t A)`` reproduces ``U(t)`` on ``t_grid`` and, when an
    invariant decomposition exists, that ``i A`` is self-adjoint for its
    definite product.
    """
    A = matrix_log(group.evaluate(dt)) / dt
    checks = generator_checks(group, A, t_grid)
    if checks["reproduction"] > tol:
        raise VerificationError(f"exp(tA) misses U(t) by {checks['reproduction']:.3e}")
    if checks.get("self_adjoint", 0.0) > tol:
        raise VerificationError(f"iA not self-adjoint in <.,.>_M (residual {checks['self_adjoint']:.3e})")
    return A


def generator_checks(group, A, t_grid=(0.5, 1.0, 2.0)):
    out = {}
    rep = 0.0
    for t in t_grid:
        U = group.evaluate(t)
        rep = max(rep, fro(matrix_exp(t * A) - U) / max(1.0, fro(U)))
    out["reproduction"] = rep
    try:
        dec = invariant_decomposition(group.space, group)
    except KreinError:
        return out
    H = dec.metric
    iA = 1j * A
    out["self_adjoint"] = fro(H @ iA - iA.conj().T @ H) / max(1.0, fro(H) * fro(A))
    return out


@dataclass(frozen=True)
class LineSpectrum:
    on_line: bool
    real_part: float
    eigenvalues: np.ndarray


def line_spectrum_check(spec, tol=1e-9):
    """Do all generator eigenvalues share one real part (``= alpha / 2``)?"""
    lam = np.asarray(spec.eigenvalues(), dtype=complex)
    re = lam.real
    scale = max(1.0, float(np.max(np.abs(lam))))
    return LineSpectrum(bool(re.max() - re.min() <= tol * scale), float(np.mean(re)), lam)


def theta_along_flow(space, spec, t):
    """``theta(t)`` computed algebraically from ``W(t)``."""
    W = evolve(spec, t)
    return float(np.real(np.trace(krein_adjoint(space, W) @ W))) / space.dim
