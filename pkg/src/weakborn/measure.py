"""Candidate probability measures on a context and the statistics they induce."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .contextual import WEAK, CvParams, contextual_values, retained_indices
from .errors import DimensionMismatch, InvalidMeasureSpec
from .hilbert import Context, _vec


class MeasureKind(enum.Enum):
    BORN = "born"
    QUARTIC = "quartic"
    PARAMETRIZED = "param"


@dataclass(frozen=True)
class MeasureSpec:
    """Which weight to put on each outcome ``w`` of a context.

    ``PARAMETRIZED`` weights are ``sum_i mu_i <psi_i|w><w|psi> + p0`` where
    ``psi_i`` are the columns of ``reference_basis`` and ``psi_0`` must equal the
    pre-selected state. ``mu = (1, 0, ..., 0), p0 = 0`` is the Born measure.
    """

    kind: MeasureKind = MeasureKind.BORN
    mu: tuple[float, ...] | None = None
    p0: float = 0.0
    reference_basis: Context | None = None

    def __post_init__(self):
        if self.kind is MeasureKind.PARAMETRIZED:
            if self.mu is None or self.reference_basis is None:
                raise InvalidMeasureSpec("parametrized measure needs mu and reference_basis")
            mu = tuple(float(m) for m in self.mu)
            if len(mu) != self.reference_basis.dim:
                raise InvalidMeasureSpec(
                    f"{len(mu)} coefficients for a {self.reference_basis.dim}-dimensional basis")
            object.__setattr__(self, "mu", mu)
            object.__setattr__(self, "p0", float(self.p0))

    @classmethod
    def born(cls) -> MeasureSpec:
        return cls(MeasureKind.BORN)

    @classmethod
    def quartic(cls) -> MeasureSpec:
        return cls(MeasureKind.QUARTIC)

    @classmethod
    def parametrized(cls, mu: Sequence[float], p0: float, reference_basis: Context) -> MeasureSpec:
        return cls(MeasureKind.PARAMETRIZED, tuple(mu), p0, reference_basis)

    def describe(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is MeasureKind.PARAMETRIZED:
            out["mu"] = list(self.mu)
            out["p0"] = self.p0
        return out


BORN = MeasureSpec.born()
QUARTIC = MeasureSpec.quartic()


@dataclass(frozen=True)
class Validity:
    all_real: bool
    all_nonneg: bool
    total: complex

    @property
    def is_probability(self) -> bool:
        return self.all_real and self.all_nonneg


@dataclass(frozen=True)
class Measure:
    weights: np.ndarray
    retained: tuple[int, ...]
    validity: Validity

    def as_dict(self) -> dict[int, complex]:
        return {i: complex(w) for i, w in zip(self.retained, self.weights)}


def _weights(spec: MeasureSpec, psi: np.ndarray, context: Context, retained: np.ndarray,
             tol: Tolerances) -> np.ndarray:
    w = context.matrix[:, retained]
    overlap = w.conj().T @ psi
    prob = overlap.real**2 + overlap.imag**2
    if spec.kind is MeasureKind.BORN:
        return prob.astype(complex)
    if spec.kind is MeasureKind.QUARTIC:
        return (prob**2).astype(complex)
    ref = spec.reference_basis.matrix
    if ref.shape[0] != psi.shape[0]:
        raise DimensionMismatch("reference basis and state dimensions differ")
    if abs(np.vdot(ref[:, 0], psi) - 1) >= tol.norm:
        raise InvalidMeasureSpec("first reference vector must be the pre-selected state")
    # <psi_i|w> for each reference vector i and retained outcome w
    ref_overlaps = ref.conj().T @ w
    return np.asarray(spec.mu) @ ref_overlaps * overlap + spec.p0


def evaluate_measure(spec: MeasureSpec, psi, context: Context, retained: np.ndarray | None = None,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> Measure:
    """Weights of ``spec`` on the outcomes of ``context`` not orthogonal to ``psi``."""
    v = _vec(psi)
    if v.shape[0] != context.dim:
        raise DimensionMismatch(f"state has dimension {v.shape[0]}, context {context.dim}")
    if retained is None:
        retained = retained_indices(v, context, tol)
    weights = _weights(spec, v, context, retained, tol)
    weights.setflags(write=False)
    all_real = bool(np.all(np.abs(weights.imag) <= tol.norm))
    validity = Validity(all_real, all_real and bool(np.all(weights.real >= 0)), complex(weights.sum()))
    return Measure(weights, tuple(int(i) for i in retained), validity)


@dataclass(frozen=True)
class ContextStats:
    """Expectation and variance of one observable in one context.

    ``variance`` keeps the imaginary part that complex weights can produce.
    """

    expectation: complex
    variance: complex


def statistics(A, psi, context: Context, spec: MeasureSpec = BORN, p: CvParams = WEAK,
               tol: Tolerances = DEFAULT_TOLERANCES) -> ContextStats:
    v = _vec(psi)
    keep = retained_indices(v, context, tol)
    weights = evaluate_measure(spec, v, context, keep, tol).weights
    lam = contextual_values(A, v, context, p, keep, tol)
    ex = complex(weights @ lam)
    dev = lam - ex
    var = complex(weights @ (dev.real**2 + dev.imag**2))
    return ContextStats(ex, var)


def expectation(A, psi, context: Context, spec: MeasureSpec = BORN, p: CvParams = WEAK,
                tol: Tolerances = DEFAULT_TOLERANCES) -> complex:
    """``sum_w P(w) lambda_w(A)`` over the sample space of ``context``."""
    v = _vec(psi)
    keep = retained_indices(v, context, tol)
    weights = evaluate_measure(spec, v, context, keep, tol).weights
    return complex(weights @ contextual_values(A, v, context, p, keep, tol))


def variance(A, psi, context: Context, spec: MeasureSpec = BORN, p: CvParams = WEAK,
             tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``sum_w P(w) |lambda_w(A) - Ex(A)|^2``.

    For complex weights this is the real part; use :func:`statistics` for the full
    complex value.
    """
    return statistics(A, psi, context, spec, p, tol).variance.real
