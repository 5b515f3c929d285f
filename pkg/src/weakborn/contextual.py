"""Contextual values of observables and checks of the value axioms.

The general contextual value of ``A`` at outcome ``w`` of a context, for a fixed
pre-selected state ``psi``, is

    lambda_w(A) = (a <w|A|psi> + b <psi|A|w>) / (a <w|psi> + b <psi|w>),

which is ``Tr[W A] / Tr[W]`` with ``W = a|psi><w| + b|w><psi|``. Setting ``b = 0``
gives the weak value ``<w|A|psi> / <w|psi>``. The transverse piece of ``W`` that
anticommutes with ``|w><w|`` is not modelled; it vanishes once the initial
condition is imposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DegenerateDenominator, DimensionMismatch, NotInSubalgebra
from .hilbert import (
    Context,
    Operator,
    StateVector,
    _mat,
    _vec,
    as_state,
    haar_random_context,
    orthonormal_completion,
    random_state,
)


@dataclass(frozen=True)
class CvParams:
    """Coefficients ``(a, b)`` of ``W = a|psi><w| + b|w><psi|``."""

    a: complex = 1.0
    b: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if abs(self.a) + abs(self.b) == 0:
            raise ValueError("CvParams requires a and b not both zero")

    @property
    def is_weak(self) -> bool:
        return self.b == 0


WEAK = CvParams(1.0, 0.0)


def _same_dim(*arrays: np.ndarray) -> None:
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise DimensionMismatch(f"inconsistent dimensions {sorted(dims)}")


def w_operator(psi, omega, p: CvParams = WEAK) -> Operator:
    """``a|psi><omega| + b|omega><psi|``."""
    v, w = _vec(psi), _vec(omega)
    _same_dim(v, w)
    return Operator(p.a * np.outer(v, w.conj()) + p.b * np.outer(w, v.conj()))


def contextual_value_general(A, psi, omega, p: CvParams = WEAK,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    m, v, w = _mat(A), _vec(psi), _vec(omega)
    _same_dim(m, v, w)
    overlap = np.vdot(w, v)
    den = p.a * overlap + p.b * overlap.conjugate()
    if abs(den) <= tol.overlap_cutoff:
        raise DegenerateDenominator(
            f"|a<w|psi> + b<psi|w>| = {abs(den):.3e} is at or below cutoff {tol.overlap_cutoff:.1e}")
    num = p.a * np.vdot(w, m @ v) + p.b * np.vdot(v, m @ w)
    return complex(num / den)


def weak_value(A, psi, omega, tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """``<omega|A|psi> / <omega|psi>``.

    Raises:
        DegenerateDenominator: ``omega`` is (numerically) orthogonal to ``psi``.
    """
    m, v, w = _mat(A), _vec(psi), _vec(omega)
    _same_dim(m, v, w)
    overlap = np.vdot(w, v)
    if abs(overlap) <= tol.overlap_cutoff:
        raise DegenerateDenominator(
            f"|<w|psi>| = {abs(overlap):.3e} is at or below cutoff {tol.overlap_cutoff:.1e}")
    return complex(np.vdot(w, m @ v) / overlap)


def check_sum_rule(A, B, psi, omega, p: CvParams = WEAK,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``|lambda(A + B) - lambda(A) - lambda(B)|``."""
    total = _mat(A) + _mat(B)
    lhs = contextual_value_general(total, psi, omega, p, tol)
    rhs = contextual_value_general(A, psi, omega, p, tol) + contextual_value_general(B, psi, omega, p, tol)
    return abs(lhs - rhs)


def _require_diagonal(op, context: Context, name: str, tol: Tolerances) -> None:
    m = context.to_basis(op)
    off = np.max(np.abs(m - np.diag(np.diag(m))))
    if off >= tol.diagonal:
        raise NotInSubalgebra(f"{name} has off-diagonal element {off:.3e} in context basis")


def check_product_rule(T, S, context: Context, psi, omega_index: int, p: CvParams = WEAK,
                       tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``|lambda(TS) - lambda(T) lambda(S)|`` at the ``omega_index``-th context vector.

    ``T`` and ``S`` must both be diagonal in ``context``.
    """
    _require_diagonal(T, context, "T", tol)
    _require_diagonal(S, context, "S", tol)
    omega = context.matrix[:, omega_index]
    ts = _mat(T) @ _mat(S)
    lhs = contextual_value_general(ts, psi, omega, p, tol)
    rhs = contextual_value_general(T, psi, omega, p, tol) * contextual_value_general(S, psi, omega, p, tol)
    return abs(lhs - rhs)


def check_initial_condition(psi, omega, p: CvParams = WEAK,
                            tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Largest deviation from ``lambda(|psi><psi|) = 1`` and ``lambda(|q><q|) = 0``.

    ``q`` ranges over the vectors of an orthonormal completion of ``psi``.
    """
    v = _vec(psi)
    worst = abs(contextual_value_general(np.outer(v, v.conj()), psi, omega, p, tol) - 1)
    basis = orthonormal_completion(v).matrix
    for k in range(1, basis.shape[1]):
        q = basis[:, k]
        worst = max(worst, abs(contextual_value_general(np.outer(q, q.conj()), psi, omega, p, tol)))
    return worst


@dataclass(frozen=True)
class ProductRuleSearch:
    """Outcome of a randomized hunt for product-rule violations."""

    found: bool
    draws: int
    max_residual: float
    threshold: float
    witness: dict | None = None


def find_product_rule_violation(dim: int = 3, p: CvParams = CvParams(1, 1), n_draws: int = 100,
                                seed: int = 0, threshold: float = 0.1,
                                tol: Tolerances = DEFAULT_TOLERANCES) -> ProductRuleSearch:
    """Search random diagonal pairs in Haar contexts for ``residual > threshold``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(n_draws):
        context = haar_random_context(dim, int(rng.integers(2**63)), tol)
        psi = random_state(dim, rng)
        t_vals, s_vals = rng.standard_normal(dim), rng.standard_normal(dim)
        T, S = context.diagonal_operator(t_vals), context.diagonal_operator(s_vals)
        idx = int(rng.integers(dim))
        try:
            r = check_product_rule(T, S, context, psi, idx, p, tol)
        except DegenerateDenominator:
            continue
        worst = max(worst, r)
        if r > threshold:
            witness = {"draw": k, "omega_index": idx, "residual": r,
                       "T_eigenvalues": t_vals.tolist(), "S_eigenvalues": s_vals.tolist()}
            return ProductRuleSearch(True, k + 1, worst, threshold, witness)
    return ProductRuleSearch(False, n_draws, worst, threshold)


def retained_indices(psi, context: Context, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Indices ``i`` with ``|<w_i|psi>| > overlap_cutoff``: the sample space."""
    overlaps = context.matrix.conj().T @ _vec(psi)
    return np.flatnonzero(np.abs(overlaps) > tol.overlap_cutoff)


@dataclass(frozen=True)
class ContextualAssignment:
    context: Context
    pre_state: StateVector
    values: np.ndarray
    retained: tuple[int, ...]
    excluded: dict[int, str] = field(default_factory=dict)

    def as_dict(self) -> dict[int, complex]:
        return {i: complex(v) for i, v in zip(self.retained, self.values)}


def contextual_values(A, psi, context: Context, p: CvParams = WEAK,
                      retained: np.ndarray | None = None,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Vectorized contextual values over the retained outcomes of ``context``."""
    m, v = _mat(A), _vec(psi)
    _same_dim(m, v, context.matrix)
    if retained is None:
        retained = retained_indices(v, context, tol)
    w = context.matrix[:, retained]
    overlap = w.conj().T @ v
    den = p.a * overlap + p.b * overlap.conj()
    bad = np.abs(den) <= tol.overlap_cutoff
    if np.any(bad):
        raise DegenerateDenominator(
            f"contextual value denominator vanishes at outcome(s) {retained[bad].tolist()}")
    num = p.a * (w.conj().T @ (m @ v))
    if p.b != 0:
        num = num + p.b * ((v.conj() @ m) @ w)
    return num / den


def assignment(A, psi, context: Context, p: CvParams = WEAK,
               tol: Tolerances = DEFAULT_TOLERANCES) -> ContextualAssignment:
    """Contextual values of ``A`` on every outcome of ``context`` not orthogonal to ``psi``.

    Outcomes orthogonal to ``psi`` are excluded and listed with the reason; this is
    not an error.
    """
    state = as_state(psi)
    overlaps = np.abs(context.matrix.conj().T @ state.amplitudes)
    keep = np.flatnonzero(overlaps > tol.overlap_cutoff)
    excluded = {int(i): f"|<w|psi>| = {overlaps[i]:.3e} <= cutoff {tol.overlap_cutoff:.1e}"
                for i in range(context.dim) if i not in set(keep.tolist())}
    values = contextual_values(A, state, context, p, keep, tol)
    values.setflags(write=False)
    return ContextualAssignment(context, state, values, tuple(int(i) for i in keep), excluded)
