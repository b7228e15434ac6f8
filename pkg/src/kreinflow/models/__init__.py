"""Concrete spaces and flows used as fixtures and examples."""

from .finite import (
    SIGMA0,
    SIGMA1,
    SIGMA2,
    SIGMA3,
    PauliModel,
    boost_group,
    boost_model,
    diagonal_model,
    minkowski_space,
    pauli_family,
)
from .functions import (
    DilationOperator,
    GridFunction,
    GridParams,
    HermiteBasis,
    catmull_rom,
    dilation_model,
    fourier_weight_check,
    hermite_basis,
    hermite_functions,
    max_dilation_time,
    oscillator_eigenvalues,
    oscillator_group,
    oscillator_space,
    oscillator_spec,
    parity_decomposition,
    pt_inner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
