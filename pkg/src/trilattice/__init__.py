"""Local limit theorems for random walks on the triangular lattice."""

from .errors import (
    CapacityExceeded,
    DegenerateCovariance,
    DomainError,
    DriftNotZero,
    InsufficientGrid,
    InvalidWalk,
    MassNotOne,
    NegativeProbability,
    NonConvergence,
    NotPeriodic,
    PeriodicityViolated,
    QuadratureFailure,
    TrilatticeError,
)
from .estimator import LatticeLCLT
from .expansion import (
    a1_closed_form,
    asymptotic_p,
    correction_polynomials,
    edgeworth_b,
    expand,
    extract_a1_numeric,
    gaussian_fourier_check,
    hermite_g,
    richardson_limit,
)
from .fixtures import get_fixture, one_sided_walk, simple_walk, skew_walk, tilted_walk
from .heat import (
    CompactBump,
    GaussianBump,
    GridFunction,
    PlateauLinear,
    discrete_laplacian,
    generator_gap,
    heat_apply,
    semigroup_gap,
    transition_apply,
)
from .kernel import KernelTable, fourier_p_n, kernels, p_n, period_check
from .polynomial import Poly
from .realization import StandardBasis, minimize_energy, standard_basis
from .walk import Realization, StepDistribution, covariance, gram_table, validate

__version__ = "0.1.0"
