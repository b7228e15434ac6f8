"""Operators seen through the positive cone ``F++ = {f : [f, f] > 0}``.

A linear map known only on positive vectors is recovered on the whole space
by writing ``f = (f + c f+) - c f+`` with both pieces positive.  Bijections of
the cone are exactly the operators with ``[W f, W g] = theta [f, g]``.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, as_vector, fro
from .errors import (
    InconsistentOracleError,
    InputError,
    NonPositiveModulusError,
    NotDefinedError,
    NotPositiveError,
    SamplingExhaustedError,
    SingularError,
    SingularOperatorError,
)
from .krein_core import VectorKind, classify_vector, krein_adjoint
from .numerics import DEFAULT_TOL, inv

DEFAULT_SAMPLES = 64


def sample_positive(space, seed, count):
    """Draw ``count`` positive vectors by rejection from complex Gaussians.

    Deterministic per ``seed``.  Raises :class:`SamplingExhaustedError`
    after ``10**4 * count`` rejections.
    """
    if count < 1:
        raise InputError("count must be at least 1")
    rng = np.random.default_rng(seed)
    n = space.dim
    out = []
    rejected = 0
    limit = 10_000 * count
    while len(out) < count:
        f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if classify_vector(space, f).kind is VectorKind.POSITIVE:
            out.append(f)
        else:
            rejected += 1
            if rejected >= limit:
                raise SamplingExhaustedError(f"{rejected} rejections for {count} samples")
    return out


def shift_coefficient(space, f, f_plus):
    """Real ``c > 0`` such that ``[f + c f+, f + c f+] >= c^2 [f+, f+] / 2``.

    Uses the explicit root bound of the quadratic in ``c`` with a factor-two
    safety margin.
    """
    f = as_vector(f, space.dim, "f")
    cls = classify_vector(space, f_plus)
    if cls.kind is not VectorKind.POSITIVE:
        raise NotPositiveError("f_plus must be a positive vector")
    fp = as_vector(f_plus, space.dim, "f_plus")
    P = cls.value
    b = abs(complex(f.conj() @ space.gram @ fp))
    ff = abs(float(np.real(f.conj() @ space.gram @ f)))
    return 2.0 * (b + np.sqrt(b * b + P * ff) + 1.0) / P


class PartialOperator:
    """A map evaluated only on positive vectors.

    ``fn`` is called with positive vectors and must return a vector of the
    same length.  Whether it is linear on the cone is checked by
    :func:`extend_operator`, not assumed.
    """

    def __init__(self, space, fn):
        self.space = space
        self._fn = fn

    @classmethod
    def from_matrix(cls, space, W):
        """Restriction of the matrix ``W`` to ``F++``; refuses other inputs."""
        W = as_matrix(W, "W", square=True)

        def restricted(f):
            if classify_vector(space, f).kind is not VectorKind.POSITIVE:
                raise NotDefinedError("restricted operator evaluated off the positive cone")
            return W @ f

        return cls(space, restricted)

    def __call__(self, f):
        if classify_vector(self.space, f).kind is not VectorKind.POSITIVE:
            raise NotDefinedError("partial operator called on a non-positive vector")
        try:
            out = self._fn(f)
        except NotDefinedError:
            raise
        except Exception as exc:
            raise NotDefinedError(f"oracle failed: {exc}") from exc
        return as_vector(out, self.space.dim, "oracle output")


def canonical_positive_vectors(space):
    """Top Gram eigenvector and a second, independent positive direction."""
    lam = space.eig.eigenvalues
    V = space.eig.eigenvectors
    top = V[:, -1]
    # tilt towards the most negative eigenvector, staying inside the cone:
    # [top + b v, top + b v] = lam_max + b^2 lam_min = 0.75 lam_max
    beta = 0.5 * np.sqrt(lam[-1] / abs(lam[0]))
    return top, top + beta * V[:, 0]


def _extend_once(op, f, f_plus, c):
    return op(f + c * f_plus) - c * op(f_plus)


def extend_operator(space, op, f, tol=None):
    """Value at ``f`` of the unique linear extension of a cone operator.

    Computes ``op(f + c f+) - c op(f+)`` for the canonical ``f+`` and audits
    the result against ``c -> 2c`` and against a second positive direction.

    Raises
    ------
    InconsistentOracleError
        If the three evaluations spread by more than ``tol * (||Wf|| + 1)``.
    NotDefinedError
        If the oracle fails on a required positive input.
    """
    tol = space.tol if tol is None else tol
    f = as_vector(f, space.dim, "f")
    fp, fp_alt = canonical_positive_vectors(space)
    c = shift_coefficient(space, f, fp)
    value = _extend_once(op, f, fp, c)
    doubled = _extend_once(op, f, fp, 2.0 * c)
    alt = _extend_once(op, f, fp_alt, shift_coefficient(space, f, fp_alt))
    spread = max(np.linalg.norm(value - doubled), np.linalg.norm(value - alt))
    if spread > tol * (np.linalg.norm(value) + 1.0):
        raise InconsistentOracleError(
            f"extension depends on the choice of shift (spread {spread:.3e}); "
            "the oracle is not linear on the positive cone"
        )
    return value


@dataclass(frozen=True)
class ThetaReport:
    theta: float
    is_scaled_unitary: bool
    residual: float
    sampled_min: float
    sampled_max: float
    invertible: bool = True

    def to_dict(self):
        return {
            "theta": self.theta,
            "scaled_unitary": self.is_scaled_unitary,
            "residual": self.residual,
            "ratio_min": self.sampled_min,
            "ratio_max": self.sampled_max,
        }


def _is_invertible(W):
    try:
        inv(W, tol=1e-12)
    except SingularError:
        return False
    return True


def theta_of(space, W, seed=0, samples=DEFAULT_SAMPLES, tol=None):
    """Estimate ``theta`` in ``[W f, W g] = theta [f, g]`` and test the identity.

    ``theta = Re tr(W^[*] W) / n``; the relative residual
    ``||W^[*] W - theta I||_F / ||W||_F^2`` decides scaled unitarity.  The
    ratios ``[W f, W f] / [f, f]`` over sampled positive vectors are recorded
    as an independent cross-check.
    """
    tol = space.tol if tol is None else tol
    W = as_matrix(W, "W", square=True)
    n = space.dim
    if W.shape[0] != n:
        raise InputError(f"operator {W.shape} on a {n}-dimensional space")
    A = krein_adjoint(space, W) @ W
    theta = float(np.real(np.trace(A))) / n
    scale = fro(W) ** 2
    residual = fro(A - theta * np.eye(n)) / scale if scale > 0 else float("inf")
    ratios = []
    for f in sample_positive(space, seed, samples):
        Wf = W @ f
        ratios.append(float(np.real(Wf.conj() @ space.gram @ Wf)) / float(np.real(f.conj() @ space.gram @ f)))
    invertible = _is_invertible(W)
    ok = bool(residual <= tol and theta > 0 and invertible)
    return ThetaReport(theta, ok, float(residual), min(ratios), max(ratios), invertible)


@dataclass(frozen=True)
class BijectionCertificate:
    """Outcome of the two equivalent tests for ``W`` being a bijection of ``F++``.

    ``algebraic`` is the scaled-unitarity verdict, ``sampled`` whether every
    sampled positive vector stayed positive under ``W`` and ``W^{-1}``.  A
    scaled-unitary ``W`` that moves a sample out of the cone is a numerical
    inconsistency; the reverse (no violating sample found for a
    non-scaled-unitary ``W``) only means the sample missed the bad region.
    """

    certified: bool
    report: ThetaReport
    algebraic: bool
    sampled: bool
    violations: int = 0
    consistent: bool = True
    notes: tuple = field(default_factory=tuple)


def positive_bijection_certificate(space, W, seed=0, samples=DEFAULT_SAMPLES, tol=None):
    """Certify that ``W`` maps the positive cone onto itself one-to-one."""
    W = as_matrix(W, "W", square=True)
    try:
        W_inv = inv(W, tol=1e-12)
    except SingularError as exc:
        raise SingularOperatorError("operator is not invertible") from exc
    report = theta_of(space, W, seed=seed, samples=samples, tol=tol)
    # exact sign of [Wf, Wf]: a stretched image of a sample near the cone
    # boundary may fall in the neutral band without leaving the cone
    violations = 0
    for f in sample_positive(space, seed, samples):
        for image in (W @ f, W_inv @ f):
            if float(np.real(image.conj() @ space.gram @ image)) <= 0.0:
                violations += 1
    sampled = violations == 0
    consistent = sampled or not report.is_scaled_unitary
    notes = ()
    if not consistent:
        notes = (f"scaled-unitary operator moved {violations} samples off the cone",)
    elif sampled and not report.is_scaled_unitary:
        notes = ("no violating sample found; verdict rests on the algebraic test",)
    certified = report.is_scaled_unitary and sampled
    return BijectionCertificate(certified, report, report.is_scaled_unitary, sampled, violations, consistent, notes)


def diagonal_criterion(moduli, tol=DEFAULT_TOL):
    """True iff all moduli ``|mu_n|`` coincide (``max / min <= 1 + tol``)."""
    m = np.asarray(moduli, dtype=float).ravel()
    if m.size == 0:
        raise InputError("empty moduli list")
    if np.any(~np.isfinite(m)) or np.any(m <= 0):
        raise NonPositiveModulusError("moduli must be finite and positive")
    return bool(m.max() / m.min() <= 1.0 + tol)
