"""Partial orders on kernels and distributions tied to asymptotic variance.

Three kernel orders (Peskun, Dirichlet-form, partial-sum) plus
majorization of laws along trajectories and a uniform variance
domination test over all centered observables.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotProbabilityVectorError,
    StationaryMismatchError,
)
from .kernel import (
    DEFAULT_TOL,
    MeanZeroFrame,
    Observable,
    _as_matrix,
    _as_values,
    _as_weights,
    stationary_distribution,
)
from .poisson import variance_form_reduced

ORDER_TOL = 1e-10


@dataclass(frozen=True)
class OrderReport:
    """Outcome of a kernel-order test.

    holds iff margin >= -tol for the tolerance used by the test;
    witness locates the worst violation and is present only when the
    order fails.
    """

    relation: str
    holds: bool
    margin: float
    witness: object = None

    def as_dict(self) -> dict:
        witness = self.witness
        if isinstance(witness, Observable):
            witness = witness.values.tolist()
        elif isinstance(witness, np.ndarray):
            witness = witness.tolist()
        elif isinstance(witness, tuple):
            witness = list(int(x) for x in witness)
        return {
            "relation": self.relation,
            "holds": self.holds,
            "margin": self.margin,
            "witness": witness,
        }


@dataclass(frozen=True)
class MajorizationTrajectory:
    """Per-step majorization checks of two laws from a common start."""

    steps: tuple
    warnings: tuple


def _shared_stationary(P1, P2, pi, tol):
    M1 = _as_matrix(P1)
    M2 = _as_matrix(P2)
    if M1.shape != M2.shape:
        raise DimensionMismatchError(
            f"kernels have shapes {M1.shape} and {M2.shape}")
    w = _as_weights(stationary_distribution(M1) if pi is None else pi)
    for label, M in (("first", M1), ("second", M2)):
        resid = np.max(np.abs(w @ M - w))
        if resid > tol:
            raise StationaryMismatchError(
                f"{label} kernel moves pi by {resid}")
    return M1, M2, w


def peskun_order(P1, P2, pi=None, tol: float = ORDER_TOL) -> OrderReport:
    """Entrywise off-diagonal order: P1 <= P2 away from the diagonal."""
    M1, M2, _ = _shared_stationary(P1, P2, pi, DEFAULT_TOL)
    diff = M2 - M1
    np.fill_diagonal(diff, np.inf)
    flat = np.argmin(diff)
    margin = float(diff.flat[flat])
    holds = margin >= -tol
    witness = None if holds else tuple(int(k) for k in np.unravel_index(flat, diff.shape))
    return OrderReport("peskun", holds, margin, witness)


def dirichlet_order(P1, P2, pi=None, tol: float = ORDER_TOL) -> OrderReport:
    """Form order: <(I - P1) xi, xi>_pi <= <(I - P2) xi, xi>_pi for all xi.

    Equivalent to positive semidefiniteness of the symmetrized weighted
    difference; the margin is its smallest eigenvalue.  Constants are a
    structural null direction, so the margin of a comparable pair is 0.
    """
    M1, M2, w = _shared_stationary(P1, P2, pi, DEFAULT_TOL)
    G = w[:, None] * (M1 - M2)
    G = 0.5 * (G + G.T)
    vals, vecs = np.linalg.eigh(G)
    margin = float(vals[0])
    holds = margin >= -tol
    witness = None if holds else Observable(vecs[:, 0].copy(), 0.0)
    return OrderReport("dirichlet", holds, margin, witness)


def _double_partial_sums(M, w):
    return np.cumsum(np.cumsum(w[:, None] * M, axis=0), axis=1)


def fk_order(P, Q, pi=None, tol: float = ORDER_TOL) -> OrderReport:
    """Partial-sum order: every leading block of pi-weighted mass of P
    is at most that of Q.

    margin is the minimum over blocks of the difference; the witness is
    the worst (row, column) block, 0-indexed inclusive.
    """
    M1, M2, w = _shared_stationary(P, Q, pi, DEFAULT_TOL)
    diff = _double_partial_sums(M2, w) - _double_partial_sums(M1, w)
    flat = np.argmin(diff)
    margin = float(diff.flat[flat])
    holds = margin >= -tol
    witness = None if holds else tuple(int(k) for k in np.unravel_index(flat, diff.shape))
    return OrderReport("fill_kahn", holds, margin, witness)


def stochastically_monotone(P, tol: float = ORDER_TOL) -> bool:
    """True iff the rows are stochastically non-decreasing in the state.

    Criterion: the row-wise tail sums sum_{j >= m} P_ij are
    non-decreasing in i for every m, checked here through cumulative
    sums (heads non-increasing in i).
    """
    M = _as_matrix(P)
    heads = np.cumsum(M, axis=1)
    return bool(np.max(heads[1:] - heads[:-1]) <= tol)


def _check_probability(v, tol):
    x = np.asarray(v, dtype=float)
    if x.ndim != 1:
        raise NotProbabilityVectorError(f"expected a vector, got shape {x.shape}")
    if np.min(x) < -tol:
        raise NotProbabilityVectorError(f"negative mass {np.min(x)}")
    if abs(x.sum() - 1.0) > max(tol, 1e-9):
        raise NotProbabilityVectorError(f"total mass {x.sum()} is not 1")
    return x


def majorizes(v, w, tol: float = ORDER_TOL) -> bool:
    """True iff the sorted partial sums of v dominate those of w."""
    x = _check_probability(v, tol)
    y = _check_probability(w, tol)
    if x.shape != y.shape:
        raise DimensionMismatchError(
            f"vectors have shapes {x.shape} and {y.shape}")
    sx = np.cumsum(np.sort(x)[::-1])
    sy = np.cumsum(np.sort(y)[::-1])
    return bool(np.min(sx - sy) >= -tol)


def _majorization_margin(v, w):
    sx = np.cumsum(np.sort(v)[::-1])
    sy = np.cumsum(np.sort(w)[::-1])
    return float(np.min(sx - sy))


def majorization_trajectory(K, P_accel, initial, n_steps: int,
                            tol: float = ORDER_TOL) -> MajorizationTrajectory:
    """Check stepwise that the baseline law majorizes the accelerated law.

    Both chains start from the same initial law; at each step t the
    report records (holds, margin) for 'law of K-chain majorizes law of
    the accelerated chain'.  The sufficient conditions (both kernels
    stochastically monotone, stationary weights non-increasing, initial
    density w.r.t. pi non-increasing, shared stationary distribution)
    are checked and violations reported as warnings, not errors.
    """
    MK = _as_matrix(K)
    MP = _as_matrix(P_accel)
    rho = _check_probability(initial, tol).astype(float)
    warnings = []
    if not stochastically_monotone(MK, tol):
        warnings.append("baseline kernel is not stochastically monotone")
    if not stochastically_monotone(MP, tol):
        warnings.append("accelerated kernel is not stochastically monotone")
    try:
        _, _, w = _shared_stationary(MK, MP, None, DEFAULT_TOL)
    except StationaryMismatchError:
        warnings.append("kernels do not share a stationary distribution")
        w = _as_weights(stationary_distribution(MK))
    if np.max(np.diff(w)) > tol:
        warnings.append("stationary weights are not non-increasing")
    ratio = rho / w
    if np.max(np.diff(ratio)) > tol:
        warnings.append("initial density w.r.t. pi is not non-increasing")
    steps = []
    law_base = rho.copy()
    law_accel = rho.copy()
    for _ in range(n_steps):
        law_base = law_base @ MK
        law_accel = law_accel @ MP
        margin = _majorization_margin(law_base, law_accel)
        steps.append((margin >= -tol, margin))
    return MajorizationTrajectory(tuple(steps), tuple(warnings))


def uniform_variance_domination(P1, P2, pi=None, tol: float = ORDER_TOL):
    """Does sigma^2(P2, f) <= sigma^2(P1, f) hold for every centered f?

    Tests positive semidefiniteness of the difference of the two
    variance quadratic forms on the mean-zero subspace.  Returns
    (holds, witness); the witness is a centered observable whose
    variance ordering is violated, present only on failure.
    """
    M1, M2, w = _shared_stationary(P1, P2, pi, DEFAULT_TOL)
    frame = MeanZeroFrame.from_pi(w)
    F1 = variance_form_reduced(M1, w, frame)
    F2 = variance_form_reduced(M2, w, frame)
    vals, vecs = np.linalg.eigh(F1 - F2)
    if vals[0] >= -tol:
        return True, None
    return False, Observable(frame.lift(vecs[:, 0]), 0.0)
