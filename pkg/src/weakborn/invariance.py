"""Context-dependence scans of expectation and variance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .contextual import WEAK, CvParams
from .errors import DimensionMismatch
from .hilbert import _mat, _vec, haar_random_context
from .measure import BORN, MeasureSpec, statistics


def quantum_expectation(A, psi) -> complex:
    """``<psi|A|psi>``."""
    m, v = _mat(A), _vec(psi)
    if m.shape[0] != v.shape[0]:
        raise DimensionMismatch(f"operator dimension {m.shape[0]} vs state {v.shape[0]}")
    return complex(np.vdot(v, m @ v))


def max_pairwise_spread(values) -> float:
    """``max_{i,j} |x_i - x_j|`` (0 for fewer than two values)."""
    x = np.asarray(values)
    if x.size < 2:
        return 0.0
    return float(np.max(np.abs(x[:, None] - x[None, :])))


@dataclass(frozen=True)
class ScanReport:
    observable_tag: str
    n_contexts: int
    ex_values: tuple[complex, ...]
    var_values: tuple[float, ...]
    ex_spread: float
    var_spread: float
    quantum_reference: complex
    seed: int

    @property
    def max_reference_deviation(self) -> float:
        return max(abs(e - self.quantum_reference) for e in self.ex_values)


def scan_seeds(seed: int, n_contexts: int) -> list[int]:
    """Per-context seeds; context ``k`` uses ``seed + k``."""
    return [seed + k for k in range(n_contexts)]


def invariance_scan(A, psi, spec: MeasureSpec = BORN, p: CvParams = WEAK, n_contexts: int = 100,
                    seed: int = 0, observable_tag: str = "A",
                    tol: Tolerances = DEFAULT_TOLERANCES) -> ScanReport:
    """Evaluate ``Ex(A)`` and ``Var(A)`` in ``n_contexts`` Haar-random contexts.

    The spreads are maximal pairwise absolute differences across contexts.
    """
    if n_contexts < 2:
        raise ValueError(f"a scan needs at least 2 contexts, got {n_contexts}")
    v = _vec(psi)
    dim = v.shape[0]
    ex, var = [], []
    for s in scan_seeds(seed, n_contexts):
        stats = statistics(A, v, haar_random_context(dim, s, tol), spec, p, tol)
        ex.append(stats.expectation)
        var.append(stats.variance.real)
    return ScanReport(
        observable_tag=observable_tag,
        n_contexts=n_contexts,
        ex_values=tuple(ex),
        var_values=tuple(var),
        ex_spread=max_pairwise_spread(ex),
        var_spread=max_pairwise_spread(var),
        quantum_reference=quantum_expectation(A, v),
        seed=seed,
    )


@dataclass(frozen=True)
class DependenceWitness:
    found: bool
    contexts_used: int
    spread: float
    pair: tuple[int, int] | None


def find_context_dependence(A, psi, spec: MeasureSpec, p: CvParams = WEAK, max_contexts: int = 100,
                            seed: int = 0, threshold: float = 1e-3,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> DependenceWitness:
    """Draw contexts until two of them disagree on ``Ex(A)`` by more than ``threshold``."""
    v = _vec(psi)
    values: list[complex] = []
    best = 0.0
    for k, s in enumerate(scan_seeds(seed, max_contexts)):
        ex = statistics(A, v, haar_random_context(v.shape[0], s, tol), spec, p, tol).expectation
        for j, other in enumerate(values):
            d = abs(ex - other)
            best = max(best, d)
            if d > threshold:
                return DependenceWitness(True, k + 1, d, (j, k))
        values.append(ex)
    return DependenceWitness(False, max_contexts, best, None)
