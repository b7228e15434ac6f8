"""Finite-dimensional Krein-space toolkit.

Indefinite inner products are Hermitian Gram matrices ``G`` with
``[f, g] = f^H G g`` (conjugate-linear in the first argument).
"""

from .cone_ops import (
    BijectionCertificate,
    PartialOperator,
    ThetaReport,
    diagonal_criterion,
    extend_operator,
    positive_bijection_certificate,
    sample_positive,
    shift_coefficient,
    theta_of,
)
from .dynamics import (
    DiagonalSpec,
    Factorization,
    FlowReport,
    GeneratorSpec,
    Group,
    evolve,
    evolved_symmetry,
    factorize_unitary,
    fit_alpha,
    generator,
    invariant_decomposition,
    line_spectrum_check,
    normalize_to_group,
    q_operator,
    uniform_bound_scan,
)
from .errors import KreinError
from .krein_core import (
    FundamentalDecomposition,
    KreinSpace,
    VectorClass,
    VectorKind,
    classify_vector,
    decomposition_from_bases,
    definite_inner,
    fundamental_decomposition,
    indefinite_inner,
    krein_adjoint,
    quotient_degenerate,
)
from .numerics import HermitianEig, herm_eig, matrix_exp, matrix_log, matrix_log_posdef_metric, solve

__version__ = "0.1.0"
