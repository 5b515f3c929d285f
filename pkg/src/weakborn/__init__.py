"""Weak values as context-dependent values of observables, and the Born measure
as the unique context-invariant probability assignment."""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCES, Tolerances
from .contextual import (
    WEAK,
    ContextualAssignment,
    CvParams,
    assignment,
    check_initial_condition,
    check_product_rule,
    check_sum_rule,
    contextual_value_general,
    w_operator,
    weak_value,
)
from .errors import (
    DegenerateDenominator,
    DimensionMismatch,
    InvalidMeasureSpec,
    NotConverged,
    NotHermitian,
    NotInSubalgebra,
    NotOrthonormal,
    WeakBornError,
    ZeroVector,
)
from .hilbert import (
    Context,
    Operator,
    StateVector,
    haar_random_context,
    hermitian_evolution,
    inner,
    normalize,
)
from .invariance import ScanReport, invariance_scan, quantum_expectation
from .measure import BORN, QUARTIC, Measure, MeasureKind, MeasureSpec, evaluate_measure, expectation, variance
from .scenarios import Trajectory, ZurekReport, heisenberg_trajectory, zurek_demo
from .solver import SolverOptions, SolverParams, SolverResult, residual, solve_uniqueness
