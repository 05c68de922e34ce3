"""Stochastic kernels, stationary distributions, and pi-weighted geometry.

A kernel is a row-stochastic matrix P acting on functions f: states -> R
by (Pf)_i = sum_j P_ij f_j.  All inner products are weighted by a
stationary distribution pi.  The workhorse is MeanZeroFrame, an
orthonormal basis of the pi-mean-zero subspace in which the pi-inner
product becomes Euclidean and the pi-adjoint becomes the transpose.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DimensionMismatchError,
    NegativeEntryError,
    NotReversibleError,
    NotStationaryError,
    NumericalFailureError,
    ReducibleError,
    RowSumViolationError,
)

DEFAULT_TOL = 1e-9
STRICT_TOL = 1e-12


def _as_matrix(P):
    """Plain float matrix from a StochasticKernel or array."""
    if isinstance(P, StochasticKernel):
        return P.rows
    return np.asarray(P, dtype=float)


def _as_weights(pi):
    if isinstance(pi, StationaryDist):
        return pi.weights
    return np.asarray(pi, dtype=float)


def _as_values(f):
    if isinstance(f, Observable):
        return f.values
    return np.asarray(f, dtype=float)


@dataclass(frozen=True)
class StochasticKernel:
    """A validated row-stochastic matrix."""

    rows: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        object.__setattr__(self, "rows", rows)
        self.rows.setflags(write=False)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    def __matmul__(self, other):
        if isinstance(other, StochasticKernel):
            return StochasticKernel(self.rows @ other.rows, min(self.tol, other.tol))
        return self.rows @ _as_values(other)


@dataclass(frozen=True)
class StationaryDist:
    """A strictly positive probability vector."""

    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float)
        object.__setattr__(self, "weights", weights)
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class Observable:
    """A function on states together with its pi-mean."""

    values: np.ndarray
    pi_mean: float = 0.0

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigensystem of a reversible kernel.

    eigenvalues are sorted descending (the first is 1); the columns of
    eigenvectors are pi-orthonormal eigenfunctions.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    pi: np.ndarray


def as_observable(values, pi) -> Observable:
    """Wrap values with their pi-mean."""
    v = _as_values(values)
    w = _as_weights(pi)
    if v.shape != w.shape:
        raise DimensionMismatchError(
            f"observable has length {v.shape}, distribution has {w.shape}")
    return Observable(v, float(w @ v))


def centered(values, pi) -> Observable:
    """Subtract the pi-mean; the result has pi_mean 0."""
    v = _as_values(values)
    w = _as_weights(pi)
    if v.shape != w.shape:
        raise DimensionMismatchError(
            f"observable has length {v.shape}, distribution has {w.shape}")
    return Observable(v - float(w @ v), 0.0)


def validate_kernel(matrix, tol: float = DEFAULT_TOL) -> StochasticKernel:
    """Check and normalize a candidate transition matrix.

    Entries in [-tol, 0) are clamped to 0 and the row renormalized.
    Raises NegativeEntryError, RowSumViolationError, or
    DimensionMismatchError.
    """
    M = np.array(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatchError(f"kernel must be square, got shape {M.shape}")
    if M.shape[0] < 2:
        raise DimensionMismatchError("kernel needs at least 2 states")
    if not np.all(np.isfinite(M)):
        raise NegativeEntryError("kernel has non-finite entries")
    low = M.min()
    if low < -tol:
        i, j = np.unravel_index(np.argmin(M), M.shape)
        raise NegativeEntryError(f"entry ({i},{j}) = {low} is below -tol")
    M[M < 0.0] = 0.0
    sums = M.sum(axis=1)
    bad = np.argmax(np.abs(sums - 1.0))
    if abs(sums[bad] - 1.0) > tol:
        raise RowSumViolationError(f"row {bad} sums to {sums[bad]}")
    M /= sums[:, None]
    return StochasticKernel(M, tol)


def is_irreducible(P) -> bool:
    """True iff the support digraph is strongly connected."""
    M = _as_matrix(P)
    graph = csr_matrix(M > 0.0)
    ncomp, _ = connected_components(graph, directed=True, connection="strong")
    return ncomp == 1


def stationary_distribution(P) -> StationaryDist:
    """Solve pi P = pi, sum(pi) = 1 for an irreducible kernel.

    Raises ReducibleError if the chain is reducible and
    NumericalFailureError if the solve cannot meet a 1e-12 residual.
    """
    M = _as_matrix(P)
    if not is_irreducible(M):
        raise ReducibleError("kernel is not irreducible")
    n = M.shape[0]
    # replace one balance equation with the normalization constraint
    A = M.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    lu = scipy.linalg.lu_factor(A)
    x = scipy.linalg.lu_solve(lu, b)
    x += scipy.linalg.lu_solve(lu, b - A @ x)
    if x.min() <= 0.0:
        raise NumericalFailureError("stationary solve produced a nonpositive weight")
    x /= x.sum()
    resid = np.max(np.abs(x @ M - x))
    if resid > STRICT_TOL:
        raise NumericalFailureError(f"stationary residual {resid} exceeds 1e-12")
    return StationaryDist(x)


def _check_stationary(M, w, tol):
    resid = np.max(np.abs(w @ M - w))
    if resid > tol:
        raise NotStationaryError(f"pi P differs from pi by {resid}")


def adjoint(P, pi) -> StochasticKernel:
    """Time reversal: the pi-adjoint kernel (P*)_ij = pi_j P_ji / pi_i."""
    M = _as_matrix(P)
    w = _as_weights(pi)
    tol = P.tol if isinstance(P, StochasticKernel) else DEFAULT_TOL
    _check_stationary(M, w, tol)
    rev = (w[None, :] * M.T) / w[:, None]
    return validate_kernel(rev, tol)


def reversibilization(P, pi) -> StochasticKernel:
    """The additive reversibilization (P + P*)/2."""
    M = _as_matrix(P)
    rev = adjoint(P, pi)
    tol = P.tol if isinstance(P, StochasticKernel) else DEFAULT_TOL
    return validate_kernel(0.5 * (M + rev.rows), tol)


def is_reversible(P, pi, tol: float = STRICT_TOL) -> bool:
    """Detailed balance check: pi_i P_ij == pi_j P_ji within tol."""
    M = _as_matrix(P)
    w = _as_weights(pi)
    F = w[:, None] * M
    return bool(np.max(np.abs(F - F.T)) <= tol)


def pi_inner(f, g, pi) -> float:
    """The weighted inner product sum_i pi_i f_i g_i."""
    fv = _as_values(f)
    gv = _as_values(g)
    w = _as_weights(pi)
    if fv.shape != gv.shape or fv.shape != w.shape:
        raise DimensionMismatchError(
            f"shapes {fv.shape}, {gv.shape}, {w.shape} do not agree")
    return float(np.sum(w * fv * gv))


@dataclass(frozen=True)
class MeanZeroFrame:
    """Orthonormal coordinates for the pi-mean-zero subspace.

    The columns of basis are n-1 Euclidean-orthonormal vectors spanning
    the complement of sqrt(pi).  Mapping f to y = basis^T (sqrt(pi) * f)
    turns the pi-inner product into the Euclidean one, and conjugating a
    pi-stationary kernel into these coordinates turns the pi-adjoint
    into the plain matrix transpose.
    """

    pi: np.ndarray
    sqrt_pi: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)

    @classmethod
    def from_pi(cls, pi) -> "MeanZeroFrame":
        w = _as_weights(pi)
        s = np.sqrt(w)
        n = w.shape[0]
        # Householder reflection sending e_0 to sqrt(pi); remaining columns
        # form an orthonormal basis of its complement
        v = s.copy()
        v[0] -= 1.0
        nv = np.linalg.norm(v)
        if nv < 1e-15:
            H = np.eye(n)
        else:
            v /= nv
            H = np.eye(n) - 2.0 * np.outer(v, v)
        return cls(w, s, H[:, 1:])

    @property
    def n(self) -> int:
        return self.pi.shape[0]

    def reduce(self, f) -> np.ndarray:
        """Coordinates of the centered part of f."""
        return self.basis.T @ (self.sqrt_pi * _as_values(f))

    def lift(self, y) -> np.ndarray:
        """The mean-zero function with the given coordinates."""
        return (self.basis @ np.asarray(y, dtype=float)) / self.sqrt_pi

    def operator(self, P) -> np.ndarray:
        """The kernel's action on mean-zero coordinates.

        For pi-stationary P this is the (n-1) x (n-1) block of the
        symmetrized conjugate D^{1/2} P D^{-1/2}; its transpose is the
        reduced adjoint.
        """
        M = _as_matrix(P)
        C = (self.sqrt_pi[:, None] * M) / self.sqrt_pi[None, :]
        return self.basis.T @ C @ self.basis


def spectral_radius_mean_zero(P, pi=None) -> float:
    """Spectral radius of the kernel restricted to mean-zero functions.

    This is the modulus of the largest non-Perron eigenvalue.  Raises
    ReducibleError for reducible kernels.
    """
    M = _as_matrix(P)
    if not is_irreducible(M):
        raise ReducibleError("kernel is not irreducible")
    w = stationary_distribution(M) if pi is None else pi
    frame = MeanZeroFrame.from_pi(w)
    A = frame.operator(M)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def spectral_decomposition_reversible(P, pi, tol: float = STRICT_TOL) -> SpectralDecomposition:
    """Eigendecomposition of a reversible kernel.

    Returns real eigenvalues sorted descending and pi-orthonormal
    eigenfunctions as columns.  Raises NotReversibleError if detailed
    balance fails at tol.
    """
    M = _as_matrix(P)
    w = _as_weights(pi)
    if not is_reversible(M, w, tol):
        raise NotReversibleError("kernel is not reversible for the given pi")
    s = np.sqrt(w)
    C = (s[:, None] * M) / s[None, :]
    C = 0.5 * (C + C.T)
    vals, vecs = np.linalg.eigh(C)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    funcs = vecs / s[:, None]
    # fix the Perron eigenfunction's sign to the positive constant
    if funcs[0, 0] < 0:
        funcs[:, 0] = -funcs[:, 0]
    return SpectralDecomposition(vals, funcs, w)
