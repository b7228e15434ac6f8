"""Function-space fixtures on a uniform quadrature grid.

The PT product ``[f, g] = int conj(f(-x)) g(x) dx`` is evaluated by the
trapezoid rule on a grid symmetric about zero.  Hermite functions at the
shifted argument ``x + i a`` come from the normalized three-term recurrence.
"""

from dataclasses import dataclass

import numpy as np

from ..dynamics import DiagonalSpec, fit_alpha, normalize_to_group
from ..errors import (
    AsymmetricGridError,
    GridMismatchError,
    GridTooNarrowError,
    InputError,
    ShiftNotZeroError,
    TimeOutOfRangeError,
)
from ..krein_core import KreinSpace, decomposition_from_bases

DECAY_TOL = 1e-8
# support actually occupied by the fixture functions; bounds the dilation range
L_CORE = 7.0


@dataclass(frozen=True)
class GridParams:
    L: float = 12.0
    m: int = 2001

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise InputError("L must be positive")
        if int(self.m) != self.m or self.m < 3:
            raise InputError("m must be an integer >= 3")

    @property
    def h(self):
        return 2.0 * self.L / (self.m - 1)

    def points(self):
        x = np.linspace(-self.L, self.L, int(self.m))
        # exact symmetry, so that f(-x) is a reversal
        return 0.5 * (x - x[::-1])

    def weights(self):
        w = np.full(int(self.m), self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w


@dataclass(frozen=True)
class GridFunction:
    """Samples of a function on a uniform grid with trapezoid weights."""

    grid: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        if x.ndim != 1 or x.size < 3 or v.shape != x.shape or w.shape != x.shape:
            raise InputError("grid, values and weights must be 1-D of equal length >= 3")
        dx = np.diff(x)
        if np.any(dx <= 0) or np.max(np.abs(dx - dx[0])) > 1e-9 * dx[0]:
            raise InputError("grid must be uniform and strictly increasing")
        if not np.all(np.isfinite(v)):
            raise InputError("values must be finite")
        for name, arr in (("grid", x), ("values", v), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def sample(cls, fn, params=GridParams()):
        x = params.points()
        return cls(x, fn(x), params.weights())

    @property
    def h(self):
        return float(self.grid[1] - self.grid[0])

    def decays(self, tol=DECAY_TOL):
        peak = np.max(np.abs(self.values))
        return bool(max(abs(self.values[0]), abs(self.values[-1])) <= tol * peak)

    def l2_inner(self, other):
        _same_grid(self, other)
        return complex(np.sum(self.weights * self.values.conj() * other.values))


def _same_grid(f, g):
    if f.grid.shape != g.grid.shape or np.max(np.abs(f.grid - g.grid)) > 1e-12 * max(1.0, np.max(np.abs(f.grid))):
        raise GridMismatchError("functions live on different grids")


def _check_symmetric(x):
    if np.max(np.abs(x + x[::-1])) > 1e-12 * max(1.0, np.max(np.abs(x))):
        raise AsymmetricGridError("grid is not symmetric about 0")


def pt_inner(f, g):
    """Trapezoid value of ``int conj(f(-x)) g(x) dx``."""
    _same_grid(f, g)
    _check_symmetric(f.grid)
    return complex(np.sum(f.weights * f.values[::-1].conj() * g.values))


# --------------------------------------------------------------------------
# dilations

def max_dilation_time(params):
    return float(np.log(params.L / L_CORE))


def catmull_rom(values, x0, h, y):
    """Cubic Catmull-Rom interpolation of uniform samples, zero outside the grid."""
    v = np.concatenate([np.zeros(2, dtype=complex), np.asarray(values, dtype=complex), np.zeros(2, dtype=complex)])
    s = (np.asarray(y, dtype=float) - x0) / h
    k = np.floor(s).astype(int)
    u = s - k
    n = len(values)
    inside = (k >= -1) & (k <= n - 1)
    k = np.clip(k, -1, n - 1) + 2
    p0, p1, p2, p3 = v[k - 1], v[k], v[k + 1], v[k + 2]
    out = 0.5 * (
        2 * p1
        + (p2 - p0) * u
        + (2 * p0 - 5 * p1 + 4 * p2 - p3) * u**2
        + (3 * p1 - p0 - 3 * p2 + p3) * u**3
    )
    return np.where(inside, out, 0.0)


@dataclass(frozen=True)
class DilationOperator:
    """``f -> exp(t/2) f(exp(t) x)``, or ``f(exp(t) x)`` when ``with_prefactor`` is off."""

    params: GridParams
    t: float
    with_prefactor: bool = True

    def __call__(self, f):
        x = self.params.points()
        if f.grid.shape != x.shape or np.max(np.abs(f.grid - x)) > 1e-12 * self.params.L:
            raise GridMismatchError("function is not sampled on the operator's grid")
        vals = catmull_rom(f.values, x[0], self.params.h, np.exp(self.t) * x)
        if self.with_prefactor:
            vals = np.exp(0.5 * self.t) * vals
        return GridFunction(x, vals, f.weights)


def dilation_model(params=GridParams(), t=0.0, with_prefactor=True):
    """Dilation by ``exp(t)`` on the grid; ``|t|`` is capped at ``ln(L / 7)``."""
    t = float(t)
    t_max = max_dilation_time(params)
    if not np.isfinite(t) or abs(t) > t_max + 1e-12:
        raise TimeOutOfRangeError(f"|t| = {abs(t):g} exceeds {t_max:.4f} for L = {params.L:g}")
    return DilationOperator(params, t, with_prefactor)


# --------------------------------------------------------------------------
# Hermite functions

def hermite_functions(N, z):
    """Rows ``f_0 .. f_{N-1}`` of normalized Hermite functions at (complex) points ``z``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((N,) + z.shape, dtype=complex)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * z * z)
    if N > 1:
        out[1] = np.sqrt(2.0) * z * out[0]
    for n in range(1, N - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * z * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


@dataclass(frozen=True)
class HermiteBasis:
    N: int
    a: float
    params: GridParams
    functions: tuple
    gram_pt: np.ndarray
    gram_l2: np.ndarray

    def l2_norms(self):
        return np.sqrt(np.real(np.diag(self.gram_l2)))


def _gram(functions, inner):
    N = len(functions)
    G = np.empty((N, N), dtype=complex)
    for i in range(N):
        for j in range(N):
            G[i, j] = inner(functions[i], functions[j])
    return G


def hermite_basis(N, a=0.0, params=GridParams()):
    """``phi_n(x) = f_n(x + i a)`` on the grid with PT and L2 Gram matrices.

    Raises :class:`GridTooNarrowError` when ``L < sqrt(2N) + 5`` or when some
    ``phi_n`` has not decayed to ``1e-8`` of its peak at the grid ends.
    """
    if int(N) != N or N < 2:
        raise InputError("N must be an integer >= 2")
    N = int(N)
    a = float(a)
    if params.L < np.sqrt(2 * N) + 5:
        raise GridTooNarrowError(f"L = {params.L:g} is below sqrt(2N)+5 = {np.sqrt(2 * N) + 5:.3g}")
    x = params.points()
    w = params.weights()
    rows = hermite_functions(N, x + 1j * a)
    funcs = tuple(GridFunction(x, r, w) for r in rows)
    for n, f in enumerate(funcs):
        if not f.decays():
            raise GridTooNarrowError(f"phi_{n} has not decayed at |x| = {params.L:g}")
    return HermiteBasis(
        N,
        a,
        params,
        funcs,
        _gram(funcs, pt_inner),
        _gram(funcs, lambda f, g: f.l2_inner(g)),
    )


def oscillator_eigenvalues(N, a=0.0):
    n = np.arange(N)
    return 1j * (2 * n + 1 + a * a)


def oscillator_space(N):
    """Coordinates in the ``phi_n`` basis, where ``[phi_n, phi_m] = (-1)^n delta_nm``."""
    if int(N) != N or N < 2:
        raise InputError("N must be an integer >= 2")
    return KreinSpace(np.diag((-1.0) ** np.arange(int(N))))


def oscillator_spec(N, a=0.0):
    return DiagonalSpec(np.eye(int(N)), oscillator_eigenvalues(int(N), float(a)))


def oscillator_group(N, a=0.0, seed=0):
    """``exp(iHt) phi_n = exp(i (2n + 1 + a^2) t) phi_n`` normalized through :func:`fit_alpha`."""
    space = oscillator_space(N)
    spec = oscillator_spec(N, a)
    alpha = fit_alpha(space, spec, seed=seed)
    return space, normalize_to_group(space, spec, alpha)


def fourier_weight_check(N, a=0.0, params=GridParams(m=4096), basis=None):
    """``max |<exp(2 a delta) F phi_n, F phi_m> - delta_nm|`` by a discrete Fourier transform.

    ``F`` is the unitary transform ``(2 pi)^{-1/2} int exp(-i delta x) phi(x) dx``,
    realized as an FFT on the spatial grid.  Frequencies beyond
    ``sqrt(2N + 1) + 6`` are dropped: there the true integrand is below
    rounding while ``exp(2 a delta)`` would amplify FFT roundoff.
    """
    if basis is None:
        basis = hermite_basis(N, a, params)
    elif basis.params != params or basis.N != N or basis.a != a:
        raise GridMismatchError("basis was built for different grid or parameters")
    x = params.points()
    h = params.h
    m = int(params.m)
    delta = 2 * np.pi * np.fft.fftfreq(m, h)
    phase = np.exp(-1j * delta * x[0])
    F = np.array([h / np.sqrt(2 * np.pi) * phase * np.fft.fft(f.values) for f in basis.functions])
    keep = np.abs(delta) <= np.sqrt(2 * N + 1) + 6
    weight = np.exp(2 * a * delta[keep]) * (2 * np.pi / (m * h))
    Fk = F[:, keep]
    G = (Fk.conj() * weight) @ Fk.T
    return float(np.max(np.abs(G - np.eye(N))))


def parity_decomposition(basis):
    """Even-index ``phi_n`` against odd-index, in basis coordinates with the quadrature PT Gram."""
    if basis.a != 0.0:
        raise ShiftNotZeroError("for a != 0 the even/odd split does not give a fundamental decomposition")
    G = basis.gram_pt
    space = KreinSpace(0.5 * (G + G.conj().T))
    I = np.eye(basis.N)
    return decomposition_from_bases(space, I[:, 0::2], I[:, 1::2])
