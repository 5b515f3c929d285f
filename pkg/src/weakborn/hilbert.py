"""States, operators and orthonormal bases of a finite-dimensional Hilbert space."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatch, NotHermitian, NotOrthonormal, ZeroVector

ArrayLike = Union[np.ndarray, Sequence[complex]]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def _check_dim(n: int, tol: Tolerances) -> None:
    if n < 2:
        raise DimensionMismatch(f"dimension must be at least 2, got {n}")
    if n > tol.max_dim:
        raise DimensionMismatch(f"dimension {n} exceeds cap {tol.max_dim}")


@dataclass(frozen=True)
class StateVector:
    """A unit vector. Build from raw amplitudes with :func:`normalize`."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1:
            raise DimensionMismatch(f"state must be one-dimensional, got shape {amps.shape}")
        _check_dim(amps.shape[0], DEFAULT_TOLERANCES)
        if abs(np.linalg.norm(amps) - 1.0) > DEFAULT_TOLERANCES.norm:
            raise ZeroVector(f"amplitudes are not normalized (norm={np.linalg.norm(amps)!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __len__(self):
        return self.dim

    def projector(self) -> Operator:
        return Operator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class Operator:
    """An N x N complex matrix with a cached Hermiticity flag."""

    entries: np.ndarray
    is_hermitian: bool = field(init=False)

    def __post_init__(self):
        m = _frozen(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
        _check_dim(m.shape[0], DEFAULT_TOLERANCES)
        object.__setattr__(self, "entries", m)
        herm = bool(np.max(np.abs(m - m.conj().T)) < DEFAULT_TOLERANCES.hermitian)
        object.__setattr__(self, "is_hermitian", herm)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    @property
    def dag(self) -> Operator:
        return Operator(self.entries.conj().T)

    def __add__(self, other):
        return Operator(self.entries + _mat(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Operator(self.entries - _mat(other))

    def __neg__(self):
        return Operator(-self.entries)

    def __mul__(self, scalar):
        if isinstance(scalar, (Operator, np.ndarray)):
            return NotImplemented
        return Operator(complex(scalar) * self.entries)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return Operator(self.entries @ _mat(other))

    @classmethod
    def identity(cls, dim: int) -> Operator:
        return cls(np.eye(dim))

    @classmethod
    def zero(cls, dim: int) -> Operator:
        return cls(np.zeros((dim, dim)))


@dataclass(frozen=True)
class Context:
    """An ordered orthonormal basis; the basis vectors are the columns of ``matrix``.

    A context stands in for a maximal abelian subalgebra: the algebra is the set of
    operators diagonal in this basis.
    """

    matrix: np.ndarray
    label: str | None = None
    tolerance: float = field(default=DEFAULT_TOLERANCES.orthonormal, repr=False, compare=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"basis matrix must be square, got shape {m.shape}")
        _check_dim(m.shape[0], DEFAULT_TOLERANCES)
        resid = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if resid >= self.tolerance:
            raise NotOrthonormal(f"basis is not orthonormal (max Gram residual {resid:.3e})")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vectors(cls, vectors: Sequence[ArrayLike], label: str | None = None,
                     tolerance: float = DEFAULT_TOLERANCES.orthonormal) -> Context:
        return cls(np.column_stack([np.asarray(v, dtype=complex) for v in vectors]), label, tolerance)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list[StateVector]:
        return [StateVector(self.matrix[:, k]) for k in range(self.dim)]

    def __getitem__(self, k: int) -> StateVector:
        return StateVector(self.matrix[:, k])

    def __len__(self):
        return self.dim

    def to_basis(self, op) -> np.ndarray:
        """Matrix elements ``<w_i|op|w_j>`` of ``op`` in this basis."""
        return self.matrix.conj().T @ _mat(op) @ self.matrix

    def diagonal_operator(self, eigenvalues: ArrayLike) -> Operator:
        """The operator with the given eigenvalues on this basis, in order."""
        ev = np.asarray(eigenvalues, dtype=complex)
        if ev.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} eigenvalues, got {ev.shape}")
        return Operator((self.matrix * ev) @ self.matrix.conj().T)


def _vec(v) -> np.ndarray:
    if isinstance(v, StateVector):
        return v.amplitudes
    return np.asarray(v, dtype=complex)


def _mat(m) -> np.ndarray:
    if isinstance(m, Operator):
        return m.entries
    return np.asarray(m, dtype=complex)


def as_state(v) -> StateVector:
    return v if isinstance(v, StateVector) else normalize(v)


def as_operator(m) -> Operator:
    return m if isinstance(m, Operator) else Operator(m)


def normalize(v: ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> StateVector:
    """Scale ``v`` to unit norm.

    Raises:
        ZeroVector: if ``||v|| <= tol.zero_vector``.
    """
    arr = _vec(v)
    nrm = np.linalg.norm(arr)
    if nrm <= tol.zero_vector:
        raise ZeroVector(f"cannot normalize vector with norm {nrm:.3e}")
    return StateVector(arr / nrm)


def inner(u, v) -> complex:
    """``<u|v>``, antilinear in the first argument."""
    a, b = _vec(u), _vec(v)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot pair vectors of shapes {a.shape} and {b.shape}")
    return complex(np.vdot(a, b))


def gram_matrix(context: Context) -> np.ndarray:
    return context.matrix.conj().T @ context.matrix


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    # Phase-fix R's diagonal; without this QR output is not Haar distributed.
    return q * (d / np.abs(d))


def haar_random_context(dim: int, seed: int, tol: Tolerances = DEFAULT_TOLERANCES) -> Context:
    """Columns of a Haar-random unitary, reproducible from ``seed``."""
    _check_dim(dim, tol)
    u = haar_random_unitary(dim, np.random.default_rng(seed))
    return Context(u, label=f"haar(dim={dim}, seed={seed})", tolerance=tol.orthonormal)


def computational_context(dim: int) -> Context:
    return Context(np.eye(dim), label="computational")


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-distributed pure state."""
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_hermitian(dim: int, rng: np.random.Generator) -> Operator:
    """Hermitian matrix from the Gaussian unitary ensemble (unit-variance entries)."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    return Operator((g + g.conj().T) / 2)


def orthonormal_completion(psi, label: str | None = "completion") -> Context:
    """An orthonormal basis whose first vector is exactly ``psi``."""
    v = _vec(psi)
    n = v.shape[0]
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(n, dtype=complex)]))
    q = q[:, :n]
    q[:, 0] = v
    return Context(q, label=label)


def hermitian_evolution(H, t: float, direction: int = -1,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> Operator:
    """``exp(direction * i * H * t)`` via the eigendecomposition of ``H``.

    ``direction=-1`` gives the Schroedinger propagator ``exp(-iHt)``.
    """
    if direction not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {direction!r}")
    h = as_operator(H)
    if not h.is_hermitian:
        raise NotHermitian("evolution generator must be Hermitian")
    w, v = np.linalg.eigh(h.entries)
    phases = np.exp(direction * 1j * w * t)
    return Operator((v * phases) @ v.conj().T)


SIGMA_X = Operator(np.array([[0, 1], [1, 0]]))
SIGMA_Y = Operator(np.array([[0, -1j], [1j, 0]]))
SIGMA_Z = Operator(np.array([[1, 0], [0, -1]]))
