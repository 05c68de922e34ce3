"""Asymptotic variance via the Poisson equation.

For an irreducible kernel P with stationary pi and a centered observable
f, the solution phi of (I - P) phi = f gives the asymptotic variance of
the ergodic averages of f through sigma^2 = <phi, f>_pi and
avar = 2 sigma^2 - <f, f>_pi.  Four independent routes are provided:
the direct dual-pair solve, a factored symmetric operator, the spectral
decomposition (reversible case), and a resolvent limit.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateKernelError,
    NotCenteredError,
    NumericalFailureError,
    SingularReversibilizationError,
)
from .kernel import (
    DEFAULT_TOL,
    MeanZeroFrame,
    Observable,
    _as_matrix,
    _as_values,
    _as_weights,
    adjoint,
    is_reversible,
    pi_inner,
    spectral_decomposition_reversible,
)

SOLVABLE_TOL = 1e-12
ROUTE_TOL = 1e-9


class InfiniteVariance:
    """Order-compatible marker for an infinite asymptotic variance.

    Compares strictly above every float, so variance values from
    different kernels stay comparable when one of them diverges.
    """

    _singleton = None

    def __new__(cls):
        if cls._singleton is None:
            cls._singleton = super().__new__(cls)
        return cls._singleton

    def __repr__(self):
        return "InfiniteVariance"

    def __eq__(self, other):
        return isinstance(other, InfiniteVariance)

    def __hash__(self):
        return hash("InfiniteVariance")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, InfiniteVariance)

    def __gt__(self, other):
        return not isinstance(other, InfiniteVariance)

    def __ge__(self, other):
        return True


INFINITE_VARIANCE = InfiniteVariance()


def is_infinite(value) -> bool:
    return isinstance(value, InfiniteVariance)


@dataclass(frozen=True)
class PoissonSolution:
    """Primal and dual Poisson solutions with the derived variances."""

    phi: Observable
    phi_star: Observable
    sigma2: float
    avar: float


@dataclass(frozen=True)
class ResolventCurve:
    """Regularized variance values along a decreasing beta grid."""

    betas: np.ndarray
    values: np.ndarray
    beta_norms: np.ndarray
    reversible: bool


def _check_centered(fv, w, tol):
    mean = abs(float(w @ fv))
    if mean > tol * max(1.0, np.max(np.abs(fv)) if fv.size else 1.0):
        raise NotCenteredError(f"observable has pi-mean {mean}")


def _reduced(P, pi):
    frame = MeanZeroFrame.from_pi(pi)
    return frame, frame.operator(_as_matrix(P))


def _gate_solvable(A):
    """Fail if I - A is (near) singular on the mean-zero subspace.

    For a stochastic kernel this happens exactly when a second
    eigenvalue sits at 1, i.e. the chain is reducible up to 1e-12.
    Periodic chains (eigenvalues on the unit circle away from 1) pass.
    """
    if A.size == 0:
        return
    eigs = np.linalg.eigvals(A)
    radius = float(np.max(np.abs(eigs)))
    separation = float(np.min(np.abs(1.0 - eigs)))
    if separation <= SOLVABLE_TOL:
        raise DegenerateKernelError(
            f"Poisson operator singular: spectrum reaches 1 "
            f"(radius {radius}, separation {separation})",
            radius=radius,
            separation=separation,
        )


def solve_poisson(P, pi, f, tol: float = DEFAULT_TOL) -> Observable:
    """Solve (I - P) phi = f for the mean-zero solution phi.

    Raises NotCenteredError if pi(f) != 0 within tol and
    DegenerateKernelError if the mean-zero operator is singular.
    """
    w = _as_weights(pi)
    fv = _as_values(f)
    _check_centered(fv, w, tol)
    frame, A = _reduced(P, pi)
    _gate_solvable(A)
    y = np.linalg.solve(np.eye(A.shape[0]) - A, frame.reduce(fv))
    return Observable(frame.lift(y), 0.0)


def solve_dual_pair(P, pi, f, tol: float = DEFAULT_TOL) -> PoissonSolution:
    """Solve the Poisson equation for P and its pi-adjoint together.

    One LU factorization serves both systems: the adjoint becomes the
    transpose in mean-zero coordinates, so the dual solve is the
    transposed solve.  Returns phi, phi*, sigma^2 = <phi, f>_pi and
    avar = 2 sigma^2 - <f, f>_pi.
    """
    w = _as_weights(pi)
    fv = _as_values(f)
    _check_centered(fv, w, tol)
    frame, A = _reduced(P, pi)
    _gate_solvable(A)
    fy = frame.reduce(fv)
    lu = scipy.linalg.lu_factor(np.eye(A.shape[0]) - A)
    y = scipy.linalg.lu_solve(lu, fy, trans=0)
    y_star = scipy.linalg.lu_solve(lu, fy, trans=1)
    sigma2 = float(fy @ y)
    avar = 2.0 * sigma2 - float(fy @ fy)
    return PoissonSolution(
        phi=Observable(frame.lift(y), 0.0),
        phi_star=Observable(frame.lift(y_star), 0.0),
        sigma2=sigma2,
        avar=avar,
    )


def avar_via_factored_operator(P, pi, f, tol: float = DEFAULT_TOL) -> float:
    """Asymptotic variance through the symmetric factored operator.

    In mean-zero coordinates the operator
    T = (I - A) (I - S)^{-1} (I - A)^T with S = (A + A^T)/2 is symmetric
    positive definite and sigma^2 = <f, T^{-1} f>.  Cross-checked against
    the dual-pair route at 1e-9; disagreement raises
    NumericalFailureError.
    """
    w = _as_weights(pi)
    fv = _as_values(f)
    _check_centered(fv, w, tol)
    frame, A = _reduced(P, pi)
    _gate_solvable(A)
    m = A.shape[0]
    eye = np.eye(m)
    S = 0.5 * (A + A.T)
    if m and np.min(np.linalg.eigvalsh(eye - S)) <= SOLVABLE_TOL:
        raise SingularReversibilizationError(
            "reversibilized operator singular on the mean-zero subspace")
    B = eye - A
    T = B @ np.linalg.solve(eye - S, B.T)
    fy = frame.reduce(fv)
    ybar = np.linalg.solve(T, fy) if m else fy
    sigma2 = float(fy @ ybar)
    ref = solve_dual_pair(P, pi, fv, tol)
    scale = max(1.0, abs(ref.sigma2))
    if abs(sigma2 - ref.sigma2) > ROUTE_TOL * scale:
        raise NumericalFailureError(
            f"factored-operator route {sigma2} disagrees with dual pair {ref.sigma2}")
    mid = 0.5 * (frame.reduce(ref.phi) + frame.reduce(ref.phi_star))
    if np.max(np.abs(ybar - mid), initial=0.0) > ROUTE_TOL * max(1.0, np.max(np.abs(mid), initial=0.0)):
        raise NumericalFailureError("T^{-1} f differs from (phi + phi*)/2")
    return sigma2


def avar_spectral(P, pi, f, tol: float = DEFAULT_TOL):
    """Spectral-route variance for a reversible kernel.

    sigma^2 = sum_k <u_k, f>_pi^2 / (1 - lambda_k) over non-unit
    eigenvalues.  If a unit eigenvalue carries weight of f (possible
    only for reducible input) the variance is infinite and the
    INFINITE_VARIANCE marker is returned.  Raises NotReversibleError
    for non-reversible input.
    """
    w = _as_weights(pi)
    fv = _as_values(f)
    _check_centered(fv, w, tol)
    dec = spectral_decomposition_reversible(P, pi)
    coeffs = dec.eigenvectors.T @ (w * fv)
    unit = dec.eigenvalues > 1.0 - SOLVABLE_TOL
    scale = max(1.0, np.max(np.abs(fv), initial=0.0))
    if np.any(np.abs(coeffs[unit]) > 1e-10 * scale):
        return INFINITE_VARIANCE
    keep = ~unit
    return float(np.sum(coeffs[keep] ** 2 / (1.0 - dec.eigenvalues[keep])))


def resolvent_curve(P, pi, f, betas, tol: float = DEFAULT_TOL) -> ResolventCurve:
    """Regularized route: solve ((1 + beta) I - P) phi_beta = f.

    The values <f, phi_beta>_pi converge to sigma^2 as beta decreases to
    0, monotonically from below for reversible kernels.  Works on the
    full state space; the solution is automatically centered.
    """
    b = np.asarray(betas, dtype=float)
    if b.ndim != 1 or b.size == 0 or np.any(b <= 0.0) or np.any(np.diff(b) >= 0.0):
        raise ValueError("betas must be positive and strictly decreasing")
    M = _as_matrix(P)
    w = _as_weights(pi)
    fv = _as_values(f)
    _check_centered(fv, w, tol)
    n = M.shape[0]
    values = np.empty_like(b)
    norms = np.empty_like(b)
    for k, beta in enumerate(b):
        phi = np.linalg.solve((1.0 + beta) * np.eye(n) - M, fv)
        values[k] = pi_inner(fv, phi, w)
        norms[k] = beta * pi_inner(phi, phi, w)
    return ResolventCurve(b, values, norms, is_reversible(M, w, 1e-10))


def check_dual_equality(P, pi, f, tol: float = 1e-10):
    """Verify avar(P, f) == avar(P*, f) and return both values.

    Raises NumericalFailureError if they disagree beyond tol.
    """
    first = solve_dual_pair(P, pi, f).avar
    second = solve_dual_pair(adjoint(P, pi), pi, f).avar
    if abs(first - second) > tol * max(1.0, abs(first)):
        raise NumericalFailureError(
            f"avar differs between P ({first}) and its adjoint ({second})")
    return first, second


def variance_form_reduced(P, pi, frame: MeanZeroFrame | None = None) -> np.ndarray:
    """Symmetric matrix representing sigma^2 in mean-zero coordinates.

    sigma^2(P, f) = y^T Msym y where y are the coordinates of f and
    Msym = ((I - A)^{-1} + (I - A)^{-T}) / 2.
    """
    if frame is None:
        frame = MeanZeroFrame.from_pi(pi)
    A = frame.operator(_as_matrix(P))
    _gate_solvable(A)
    inv = np.linalg.solve(np.eye(A.shape[0]) - A, np.eye(A.shape[0]))
    return 0.5 * (inv + inv.T)


def sigma2_quadratic_form(P, pi) -> np.ndarray:
    """Euclidean quadratic form S with f . (S f) = sigma^2(P, f).

    Valid for centered f; non-centered input is projected by the form
    itself since the frame drops the mean component.
    """
    frame = MeanZeroFrame.from_pi(pi)
    Msym = variance_form_reduced(P, pi, frame)
    half = frame.sqrt_pi[:, None] * frame.basis
    return half @ Msym @ half.T
