"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used for validation and exclusion decisions.

    Attributes:
        norm: allowed deviation of a state's Euclidean norm from 1.
        orthonormal: allowed entrywise deviation of a basis Gram matrix from identity.
        hermitian: entrywise bound on ``|M - M^dagger|`` for an operator to count as Hermitian.
        zero_vector: norms at or below this cannot be normalized.
        overlap_cutoff: ``|<w|psi>|`` at or below this removes ``w`` from the sample space.
        diagonal: off-diagonal bound for an operator to belong to a context's algebra.
        max_dim: largest Hilbert-space dimension accepted.
    """

    norm: float = 1e-12
    orthonormal: float = 1e-10
    hermitian: float = 1e-12
    zero_vector: float = 1e-14
    overlap_cutoff: float = 1e-12
    diagonal: float = 1e-10
    max_dim: int = 1024

    def with_overrides(self, **kwargs) -> Tolerances:
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def as_dict(self) -> dict:
        return {
            "norm": self.norm,
            "orthonormal": self.orthonormal,
            "hermitian": self.hermitian,
            "zero_vector": self.zero_vector,
            "overlap_cutoff": self.overlap_cutoff,
            "diagonal": self.diagonal,
            "max_dim": self.max_dim,
        }


DEFAULT_TOLERANCES = Tolerances()
