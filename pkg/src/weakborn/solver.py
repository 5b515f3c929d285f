"""Numerical uniqueness check for the Born measure and the weak value.

The unknowns are the ``b`` coefficient of the contextual value (with ``a`` fixed
to 1, since the value depends only on ``b/a``), the coefficients ``mu_i`` and the
offset ``p0`` of the parametrized measure

    P(w) = sum_i mu_i <psi_i|w><w|psi> + p0.

The residual penalizes any context dependence of ``Ex`` and ``Var`` over a fixed
sample of contexts and observables, plus failure of normalization and of
reality of the weights. It vanishes at ``b = 0, mu = (1, 0, ..., 0), p0 = 0`` and
the solver checks that a derivative-free descent from a random start lands
there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import DimensionMismatch, NotConverged
from .hilbert import (
    Context,
    _mat,
    _vec,
    haar_random_context,
    orthonormal_completion,
    random_hermitian,
    random_state,
)

MIN_DIM, MAX_DIM = 2, 8


@dataclass(frozen=True)
class SolverParams:
    b: complex
    mu: tuple[float, ...]
    p0: float

    def __post_init__(self):
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "mu", tuple(float(m) for m in self.mu))
        object.__setattr__(self, "p0", float(self.p0))

    @property
    def dim(self) -> int:
        return len(self.mu)

    @classmethod
    def born(cls, dim: int) -> SolverParams:
        return cls(0.0, (1.0,) + (0.0,) * (dim - 1), 0.0)

    def pack(self) -> np.ndarray:
        """``[Re b, Im b, mu_0, ..., mu_{N-1}, p0]``."""
        return np.concatenate([[self.b.real, self.b.imag], self.mu, [self.p0]])

    @classmethod
    def unpack(cls, x: np.ndarray) -> SolverParams:
        x = np.asarray(x, dtype=float)
        return cls(complex(x[0], x[1]), tuple(x[2:-1]), x[-1])

    def distance_to_born(self) -> float:
        """Sup-norm distance to the Born point after rescaling to unit total weight.

        Total weight on a generic context is ``mu_0 + N p0``; when it is
        (near) zero no rescaling is applied.
        """
        mu = np.asarray(self.mu)
        p0 = self.p0
        total = mu[0] + self.dim * p0
        if abs(total) > 1e-12:
            mu, p0 = mu / total, p0 / total
        target = np.zeros_like(mu)
        target[0] = 1.0
        return float(max(abs(self.b), np.max(np.abs(mu - target)), abs(p0)))

    def as_dict(self) -> dict:
        return {"b": self.b, "mu": list(self.mu), "p0": self.p0}


class ResidualProblem:
    """Precomputed overlaps for fast repeated residual evaluation.

    For every context ``c`` and outcome ``w`` it stores ``<w|psi>``, the
    ``<psi_i|w>`` against the reference basis, and ``<w|A|psi>``, ``<psi|A|w>`` for
    each observable. Outcomes orthogonal to ``psi`` are masked out.
    """

    def __init__(self, psi, observables: Sequence, contexts: Sequence[Context],
                 reference_basis: Context | None = None, w_norm: float = 1.0, w_real: float = 1.0,
                 tol: Tolerances = DEFAULT_TOLERANCES):
        if len(contexts) < 2:
            raise ValueError("residual needs at least 2 contexts")
        if len(observables) < 1:
            raise ValueError("residual needs at least 1 observable")
        v = _vec(psi)
        self.dim = v.shape[0]
        ops = np.stack([_mat(a) for a in observables])
        bases = np.stack([c.matrix for c in contexts])
        if ops.shape[1:] != (self.dim, self.dim) or bases.shape[1:] != (self.dim, self.dim):
            raise DimensionMismatch("observables, contexts and state must share one dimension")
        if reference_basis is None:
            reference_basis = orthonormal_completion(v)
        ref = reference_basis.matrix
        if abs(np.vdot(ref[:, 0], v) - 1) >= tol.norm:
            raise ValueError("first reference vector must be the pre-selected state")

        self.tol = tol
        self.w_norm = w_norm
        self.w_real = w_real
        self.overlap = np.einsum("cnw,n->cw", bases.conj(), v)
        self.mask = np.abs(self.overlap) > tol.overlap_cutoff
        self.n_retained = self.mask.sum(axis=1)
        # <psi_i|w><w|psi>, zero on excluded outcomes
        self.ref_terms = np.einsum("ni,cnw->ciw", ref.conj(), bases) * (self.overlap * self.mask)[:, None, :]
        self.forward = np.einsum("cnw,knm,m->ckw", bases.conj(), ops, v)
        self.backward = np.einsum("n,knm,cmw->ckw", v.conj(), ops, bases)

    def weights(self, params: SolverParams) -> np.ndarray:
        mu = np.asarray(params.mu)
        return (np.tensordot(mu, self.ref_terms, axes=(0, 1)) + params.p0) * self.mask

    def statistics(self, params: SolverParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Weights ``(C, N)``, expectations ``(C, K)`` and complex variances ``(C, K)``.

        Returns ``None`` expectations when a contextual value denominator vanishes.
        """
        b = params.b
        den = np.where(self.mask, self.overlap + b * self.overlap.conj(), 1.0)
        if np.min(np.abs(den)) <= self.tol.overlap_cutoff:
            return self.weights(params), None, None
        lam = (self.forward + b * self.backward) / den[:, None, :]
        P = self.weights(params)
        ex = np.einsum("cw,ckw->ck", P, lam)
        dev = lam - ex[..., None]
        var = np.einsum("cw,ckw->ck", P, dev.real**2 + dev.imag**2)
        return P, ex, var

    def __call__(self, x: np.ndarray) -> float:
        return self.evaluate(SolverParams.unpack(x))

    def evaluate(self, params: SolverParams) -> float:
        if params.dim != self.dim:
            raise DimensionMismatch(f"{params.dim} coefficients for dimension {self.dim}")
        P, ex, var = self.statistics(params)
        if ex is None:
            return float("inf")
        spread = (np.abs(ex[:, None] - ex[None]).max(axis=(0, 1)).sum()
                  + np.abs(var[:, None] - var[None]).max(axis=(0, 1)).sum())
        miss = P.sum(axis=1) - 1
        norm_term = np.mean(miss.real**2 + miss.imag**2)
        real_term = np.mean((P.imag**2).sum(axis=1))
        return float(spread + self.w_norm * norm_term + self.w_real * real_term)


def residual(params: SolverParams, psi, observables: Sequence, contexts: Sequence[Context],
             reference_basis: Context | None = None, w_norm: float = 1.0, w_real: float = 1.0,
             tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Invariance-violation penalty of ``params``.

    ``sum_A [spread(Ex_A) + spread(Var_A)] + w_norm * |sum_w P(w) - 1|^2
    + w_real * sum_w |Im P(w)|^2``, spreads taken across ``contexts`` and the two
    penalty terms averaged over them. ``+inf`` where a contextual value is
    undefined.
    """
    problem = ResidualProblem(psi, observables, contexts, reference_basis, w_norm, w_real, tol)
    return problem.evaluate(params)


@dataclass(frozen=True)
class SolverOptions:
    max_iter: int = 50_000
    tol: float = 1e-10
    n_contexts: int = 10
    n_observables: int = 5
    w_norm: float = 1.0
    w_real: float = 1.0
    max_starts: int = 30
    initial_step: float = 0.3

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SolverResult:
    final_params: SolverParams
    final_residual: float
    residual_trajectory: tuple[float, ...]
    converged: bool
    distance_to_born: float
    iterations: int
    evaluations: int
    starts: int

    def raise_for_convergence(self) -> None:
        if not self.converged:
            raise NotConverged(f"residual {self.final_residual:.3e} after {self.iterations} iterations")

    def as_dict(self) -> dict:
        return {
            "final_params": self.final_params.as_dict(),
            "final_residual": self.final_residual,
            "residual_trajectory": list(self.residual_trajectory),
            "converged": self.converged,
            "distance_to_born": self.distance_to_born,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "starts": self.starts,
        }


@dataclass
class UniquenessProblem:
    """The randomly drawn instance a uniqueness solve runs on."""

    psi: np.ndarray
    observables: list = field(repr=False)
    contexts: list = field(repr=False)
    reference_basis: Context = field(repr=False)


def draw_problem(dim: int, seed: int, n_contexts: int = 10, n_observables: int = 5,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> UniquenessProblem:
    """Seeded pre-state, observables and contexts.

    Observables are ``n_observables - 1`` GUE draws plus ``|psi><psi|``.
    """
    rng = np.random.default_rng([seed, 0])
    psi = random_state(dim, rng).amplitudes
    observables = [random_hermitian(dim, rng) for _ in range(n_observables - 1)]
    observables.append(np.outer(psi, psi.conj()))
    ctx_seeds = np.random.SeedSequence([seed, 1]).generate_state(n_contexts, dtype=np.uint64)
    contexts = [haar_random_context(dim, int(s), tol) for s in ctx_seeds]
    return UniquenessProblem(psi, observables, contexts, orthonormal_completion(psi))


def _random_start(dim: int, rng: np.random.Generator) -> np.ndarray:
    r, theta = np.sqrt(rng.uniform()), rng.uniform(0, 2 * np.pi)
    return np.concatenate([[r * np.cos(theta), r * np.sin(theta)],
                           rng.uniform(-2, 2, dim), rng.uniform(-1, 1, 1)])


def _simplex(x: np.ndarray, step: float) -> np.ndarray:
    s = np.tile(x, (len(x) + 1, 1))
    s[1:] += step * np.eye(len(x))
    return s


def solve_uniqueness(dim: int, seed: int, opts: SolverOptions | None = None,
                     start: SolverParams | None = None,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> SolverResult:
    """Minimize the invariance residual from a seeded random start.

    Nelder-Mead is rerun from the incumbent with a freshly sized simplex after
    each round; a start that stops improving while the residual is still large is
    abandoned for a new random start. ``start`` replaces the first random start.
    """
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ValueError(f"dim must be in [{MIN_DIM}, {MAX_DIM}], got {dim}")
    opts = opts or SolverOptions()
    if opts.tol <= 0:
        raise ValueError("tol must be positive")
    prob = draw_problem(dim, seed, opts.n_contexts, opts.n_observables, tol)
    f = ResidualProblem(prob.psi, prob.observables, prob.contexts, prob.reference_basis,
                        opts.w_norm, opts.w_real, tol)
    rng = np.random.default_rng([seed, 2])
    n_par = dim + 3
    round_iters = 200 * n_par

    best_x, best_f = None, np.inf
    trajectory: list[float] = []
    iterations = evaluations = starts = 0

    def accept(x, fx):
        nonlocal best_x, best_f
        if fx < best_f:
            best_x, best_f = np.array(x), fx
            trajectory.append(float(fx))

    while starts < opts.max_starts and iterations < opts.max_iter and best_f >= opts.tol:
        x = start.pack() if (start is not None and starts == 0) else _random_start(dim, rng)
        starts += 1
        fx = f(x)
        evaluations += 1
        accept(x, fx)
        step = opts.initial_step
        rounds = 0
        while fx >= opts.tol and iterations < opts.max_iter:
            res = minimize(f, x, method="Nelder-Mead", options=dict(
                initial_simplex=_simplex(x, step), maxiter=min(round_iters, opts.max_iter - iterations),
                xatol=1e-13, fatol=1e-15, adaptive=True))
            iterations += res.nit
            evaluations += res.nfev
            gain = fx - res.fun
            x, fx = res.x, float(res.fun)
            accept(x, fx)
            rounds += 1
            if fx > 1e-3 and gain < 1e-3 * fx and rounds > 2:
                break
            step = float(np.clip(10 * np.sqrt(fx), 1e-6, opts.initial_step))

    final = SolverParams.unpack(best_x)
    return SolverResult(
        final_params=final,
        final_residual=float(best_f),
        residual_trajectory=tuple(trajectory),
        converged=bool(best_f < opts.tol),
        distance_to_born=final.distance_to_born(),
        iterations=iterations,
        evaluations=evaluations,
        starts=starts,
    )
