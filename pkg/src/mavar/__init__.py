"""Asymptotic variance of finite-state Markov chains.

Computing, verifying, and comparing the asymptotic variance of ergodic
averages: Poisson-equation solvers with dual and spectral routes,
variational formulas for the reciprocal variance, kernel orders, and
variance-reducing perturbations of reversible kernels.
"""

from . import catalog, generators
from .errors import (
    AlphaOutOfRangeError,
    BadInitialError,
    DegenerateKernelError,
    DensityExceedsOneError,
    DimensionMismatchError,
    DriftDiagonalError,
    DriftRowColSumError,
    InfeasibleConstraintError,
    MavarError,
    NegativeEntryError,
    NegativeOffDiagonalError,
    NotAntisymmetricError,
    NotCenteredError,
    NotPeskunOrderedError,
    NotProbabilityVectorError,
    NotReversibleError,
    NotStationaryError,
    NumericalFailureError,
    PerturbationSpecError,
    ReducibleError,
    RowSumViolationError,
    SingularReversibilizationError,
    StationaryMismatchError,
    TrajectoryTooShortError,
    VorticityRowSumError,
    ZeroVarianceError,
)
from .kernel import (
    DEFAULT_TOL,
    MeanZeroFrame,
    Observable,
    SpectralDecomposition,
    StationaryDist,
    StochasticKernel,
    adjoint,
    as_observable,
    centered,
    is_irreducible,
    is_reversible,
    pi_inner,
    reversibilization,
    spectral_decomposition_reversible,
    spectral_radius_mean_zero,
    stationary_distribution,
    validate_kernel,
)
from .montecarlo import AvarEstimate, Trajectory, batch_means_avar, kernel_fingerprint, simulate
from .ordering import (
    MajorizationTrajectory,
    OrderReport,
    dirichlet_order,
    fk_order,
    majorization_trajectory,
    majorizes,
    peskun_order,
    stochastically_monotone,
    uniform_variance_domination,
)
from .perturb import (
    DriftSpec,
    VorticitySpec,
    apply_drift,
    family_alpha,
    make_nonreversible,
    peskun_residual,
    validate_drift,
    validate_vorticity,
)
from .poisson import (
    INFINITE_VARIANCE,
    InfiniteVariance,
    PoissonSolution,
    ResolventCurve,
    avar_spectral,
    avar_via_factored_operator,
    check_dual_equality,
    is_infinite,
    resolvent_curve,
    sigma2_quadratic_form,
    solve_dual_pair,
    solve_poisson,
    variance_form_reduced,
)
from .variational import (
    SaddlePoint,
    dirichlet_form,
    factored_operator_inf,
    inner_sup,
    project_to_constraint,
    reversible_inf,
    saddle_point,
)

__version__ = "0.1.0"
