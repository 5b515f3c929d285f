"""Worked examples: a symmetric system-environment state, and weak values in the
Heisenberg picture approaching a projective measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .contextual import weak_value
from .errors import DegenerateDenominator, NotHermitian
from .hilbert import Context, Operator, _vec, as_operator, hermitian_evolution
from .invariance import quantum_expectation
from .measure import BORN, evaluate_measure, expectation


@dataclass(frozen=True)
class ZurekReport:
    weak_values: tuple[complex, complex]
    probabilities: tuple[float, float]
    born_probabilities: tuple[float, float]
    swap_symmetry_residual: float

    def as_dict(self) -> dict:
        return {
            "weak_values": list(self.weak_values),
            "probabilities": list(self.probabilities),
            "born_probabilities": list(self.born_probabilities),
            "swap_symmetry_residual": self.swap_symmetry_residual,
        }


def zurek_demo(tol: Tolerances = DEFAULT_TOLERANCES) -> ZurekReport:
    """Entangled state ``(|s1 e1> + |s2 e2>)/sqrt 2`` with observable ``A (x) 1``.

    ``A = |s1><s1| - |s2><s2|``. The probabilities of the outcomes ``|s1 e1>`` and
    ``|s2 e2>`` are obtained from ``Ex(A (x) 1) = sum_x P(x) lambda_x`` and
    ``P(x1) + P(x2) = 1``, with ``Ex`` forced to zero because swapping labels 1 and
    2 in both factors fixes the state and flips the sign of the observable.
    """
    s1, s2 = np.eye(2)
    e1, e2 = np.eye(2)
    x1, x2 = np.kron(s1, e1), np.kron(s2, e2)
    psi = (x1 + x2) / np.sqrt(2)
    A = np.kron(np.outer(s1, s1) - np.outer(s2, s2), np.eye(2))

    swap = np.array([[0, 1], [1, 0]])
    swap_both = np.kron(swap, swap)
    # Symmetry: the swap fixes psi and maps A (x) 1 to its negative, so
    # <psi|A|psi> = -<psi|A|psi>. The residual measures how far both hold.
    sym = (np.max(np.abs(swap_both @ psi - psi))
           + np.max(np.abs(swap_both @ A @ swap_both.T + A)))

    context = Context.from_vectors([x1, x2, np.kron(s1, e2), np.kron(s2, e1)], label="zurek")
    lam = (weak_value(A, psi, x1, tol), weak_value(A, psi, x2, tol))

    # Ex = 0 by symmetry; solve [lam1 lam2; 1 1] P = [0, 1].
    system = np.array([[lam[0], lam[1]], [1.0, 1.0]])
    probs = np.linalg.solve(system, np.array([0.0, 1.0]))
    born = evaluate_measure(BORN, psi, context, tol=tol)

    ex = expectation(A, psi, context, BORN, tol=tol)
    return ZurekReport(
        weak_values=(lam[0], lam[1]),
        probabilities=(float(probs[0].real), float(probs[1].real)),
        born_probabilities=tuple(float(w.real) for w in born.weights),
        swap_symmetry_residual=float(abs(ex) + sym),
    )


@dataclass(frozen=True)
class Trajectory:
    times: tuple[float, ...]
    values: tuple[complex, ...]
    endpoint_eigenvalue: float
    endpoint_residual: float
    post_state: np.ndarray

    def as_dict(self) -> dict:
        return {
            "times": list(self.times),
            "values": list(self.values),
            "endpoint_eigenvalue": self.endpoint_eigenvalue,
            "endpoint_residual": self.endpoint_residual,
            "post_state": list(self.post_state),
        }


def heisenberg_operator(H, A, t: float) -> Operator:
    """``U(t)^dagger A U(t)`` with ``U(t) = exp(-iHt)``."""
    u = hermitian_evolution(H, t, -1).entries
    return Operator(u.conj().T @ as_operator(A).entries @ u)


def sorted_eigensystem(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a Hermitian matrix in a reproducible order.

    Ascending eigenvalue; ties are broken by the lexicographic order of the
    eigenvector entries rounded to 1e-9, each vector phased so its first
    largest-magnitude entry is real and positive.
    """
    w, v = np.linalg.eigh(np.asarray(M))
    for k in range(v.shape[1]):
        j = int(np.argmax(np.abs(v[:, k]).round(9)))
        v[:, k] *= abs(v[j, k]) / v[j, k]

    def key(k):
        col = np.round(v[:, k], 9) + 0.0
        return (round(float(w[k]), 9), tuple(x for c in col for x in (c.real, c.imag)))

    order = sorted(range(len(w)), key=key)
    return w[order], v[:, order]


def heisenberg_trajectory(H, A, psi, T: float, steps: int, eigen_index: int,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> Trajectory:
    """Weak values ``<a|A(t)|psi> / <a|psi>`` on the grid ``t_k = T k / steps``.

    ``<a|`` is the ``eigen_index``-th eigenvector of ``A(T)`` (see
    :func:`sorted_eigensystem`), so the value at ``t = T`` is its eigenvalue.
    """
    h, a_op = as_operator(H), as_operator(A)
    if not h.is_hermitian:
        raise NotHermitian("H must be Hermitian")
    if not a_op.is_hermitian:
        raise NotHermitian("A must be Hermitian")
    if steps < 1:
        raise ValueError("steps must be positive")
    v = _vec(psi)
    evals, evecs = sorted_eigensystem(heisenberg_operator(h, a_op, T).entries)
    a_val, a_vec = float(evals[eigen_index]), evecs[:, eigen_index]
    if abs(np.vdot(a_vec, v)) <= tol.overlap_cutoff:
        raise DegenerateDenominator(
            f"eigenvector {eigen_index} of A(T) is orthogonal to psi; choose another eigen_index")
    times = tuple(T * k / steps for k in range(steps + 1))
    values = tuple(weak_value(heisenberg_operator(h, a_op, t), v, a_vec, tol) for t in times)
    return Trajectory(times, values, a_val, abs(values[-1] - a_val), a_vec)


def expectation_trajectory(H, A, psi, times) -> np.ndarray:
    """``<psi|A(t)|psi>`` for comparison with weak-value trajectories."""
    return np.array([quantum_expectation(heisenberg_operator(H, A, t), psi) for t in times])
