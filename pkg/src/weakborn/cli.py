"""Command-line front end producing JSON or CSV reports.

Exit status: 0 on success, 1 when a result breaks its numerical contract, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any

import numpy as np

from . import __version__
from .config import DEFAULT_TOLERANCES, Tolerances
from .contextual import CvParams, assignment
from .errors import WeakBornError
from .hilbert import (
    Operator,
    haar_random_context,
    orthonormal_completion,
    random_hermitian,
    random_state,
)
from .invariance import invariance_scan, quantum_expectation
from .measure import BORN, MeasureKind, MeasureSpec, evaluate_measure, expectation
from .scenarios import expectation_trajectory, heisenberg_trajectory, zurek_demo
from .solver import SolverOptions, solve_uniqueness

# Contract thresholds checked before exiting 0.
SCAN_SPREAD_TOL = 1e-10
DISTANCE_TO_BORN_TOL = 1e-4
ENDPOINT_TOL = 1e-10
ZUREK_TOL = 1e-12


class UsageError(Exception):
    pass


def to_jsonable(obj: Any) -> Any:
    """Complex numbers become ``[re, im]``; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def load_observable(path: str) -> Operator:
    """Read ``{"dim": N, "entries": [[[re, im], ...], ...]}`` (row-major)."""
    with open(path) as fh:
        doc = json.load(fh)
    try:
        dim = int(doc["dim"])
        entries = np.array([[complex(re, im) for re, im in row] for row in doc["entries"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed observable file {path}: {exc}") from exc
    if entries.shape != (dim, dim):
        raise UsageError(f"observable file {path}: entries have shape {entries.shape}, dim is {dim}")
    return Operator(entries)


def dump_observable(op: Operator) -> dict:
    return {"dim": op.dim, "entries": to_jsonable(op.entries)}


def _parse_mu(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from exc


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a complex number like 0.3+0.1j, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--output", choices=["json", "csv"], default="json", help="report format")
    common.add_argument("--out", dest="out_path", default="-", help="output file, '-' for stdout")
    common.add_argument("--tolerance-overlap", type=float, default=DEFAULT_TOLERANCES.overlap_cutoff,
                        help="|<w|psi>| at or below this excludes w from the sample space")
    common.add_argument("--tolerance-orthonormal", type=float, default=DEFAULT_TOLERANCES.orthonormal,
                        help="orthonormality tolerance for contexts")

    parser = argparse.ArgumentParser(prog="weakborn", description=__doc__.splitlines()[0], formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weak-value", parents=[common], formatter_class=fmt,
                       help="contextual values of an observable in one Haar-random context")
    p.add_argument("--dim", type=int, default=2, help="Hilbert-space dimension")
    p.add_argument("--b", type=_parse_complex, default=0j, help="b coefficient (a = 1)")
    p.add_argument("--observable-file", default=None, help="JSON observable; random Hermitian if omitted")

    p = sub.add_parser("invariance-scan", parents=[common], formatter_class=fmt,
                       help="Ex/Var across Haar-random contexts")
    p.add_argument("--dim", type=int, default=3, help="Hilbert-space dimension")
    p.add_argument("--n-contexts", type=int, default=100, help="number of Haar-random contexts")
    p.add_argument("--measure", choices=["born", "quartic", "param"], default="born", help="candidate measure")
    p.add_argument("--mu", type=_parse_mu, default=None,
                   help="comma-separated mu_i for --measure param (None means 1,0,...,0)")
    p.add_argument("--p0", type=float, default=0.0, help="offset for --measure param")
    p.add_argument("--b", type=_parse_complex, default=0j, help="b coefficient (a = 1)")
    p.add_argument("--observable-file", default=None, help="JSON observable; random Hermitian if omitted")

    p = sub.add_parser("uniqueness-solve", parents=[common], formatter_class=fmt,
                       help="minimize the invariance residual and compare with the Born point")
    p.add_argument("--dim", type=int, default=3, help="Hilbert-space dimension, 2 to 8")
    p.add_argument("--n-contexts", type=int, default=SolverOptions.n_contexts, help="contexts in the residual")
    p.add_argument("--n-observables", type=int, default=SolverOptions.n_observables,
                   help="observables in the residual, including |psi><psi|")
    p.add_argument("--max-iter", type=int, default=SolverOptions.max_iter, help="total simplex iterations")
    p.add_argument("--tol", type=float, default=SolverOptions.tol, help="residual below which the solve counts as converged")

    sub.add_parser("zurek-demo", parents=[common], formatter_class=fmt,
                   help="weak values and probabilities for the symmetric entangled state")

    p = sub.add_parser("heisenberg-scan", parents=[common], formatter_class=fmt,
                       help="weak value of A(t) post-selected on an eigenvector of A(T)")
    p.add_argument("--dim", type=int, default=2, help="Hilbert-space dimension")
    p.add_argument("--T", dest="final_time", type=float, default=1.0, help="final time")
    p.add_argument("--steps", type=int, default=20, help="grid intervals on [0, T]")
    p.add_argument("--eigen-index", type=int, default=0,
                   help="post-select on this eigenvector of A(T), ascending eigenvalue order")
    p.add_argument("--observable-file", default=None, help="JSON observable A; random Hermitian if omitted")
    return parser


def _observable(args, rng, tol) -> Operator:
    if args.observable_file:
        op = load_observable(args.observable_file)
        if op.dim != args.dim:
            raise UsageError(f"observable has dimension {op.dim}, --dim is {args.dim}")
        return op
    return random_hermitian(args.dim, rng)


def _check_dim(args, lo=2, hi=DEFAULT_TOLERANCES.max_dim):
    if not lo <= args.dim <= hi:
        raise UsageError(f"--dim must be in [{lo}, {hi}]")


def cmd_weak_value(args, tol):
    _check_dim(args)
    rng = np.random.default_rng([args.seed, 0])
    psi = random_state(args.dim, rng)
    A = _observable(args, rng, tol)
    context = haar_random_context(args.dim, args.seed, tol)
    p = CvParams(1.0, args.b)
    asg = assignment(A, psi, context, p, tol)
    born = evaluate_measure(BORN, psi, context, tol=tol)
    results = {
        "psi": psi.amplitudes,
        "observable": dump_observable(A),
        "context": context.matrix,
        "retained": list(asg.retained),
        "excluded": asg.excluded,
        "values": list(asg.values),
        "born_weights": list(born.weights.real),
        "expectation": expectation(A, psi, context, BORN, p, tol),
        "quantum_reference": quantum_expectation(A, psi),
    }
    return results, True, None


def cmd_invariance_scan(args, tol):
    _check_dim(args)
    if args.n_contexts < 2:
        raise UsageError("--n-contexts must be at least 2")
    rng = np.random.default_rng([args.seed, 0])
    psi = random_state(args.dim, rng)
    A = _observable(args, rng, tol)
    if args.measure == "born":
        spec = MeasureSpec.born()
    elif args.measure == "quartic":
        spec = MeasureSpec.quartic()
    else:
        mu = args.mu if args.mu is not None else (1.0,) + (0.0,) * (args.dim - 1)
        if len(mu) != args.dim:
            raise UsageError(f"--mu needs {args.dim} values, got {len(mu)}")
        spec = MeasureSpec.parametrized(mu, args.p0, orthonormal_completion(psi))
    p = CvParams(1.0, args.b)
    rep = invariance_scan(A, psi, spec, p, args.n_contexts, args.seed, "random_hermitian"
                          if not args.observable_file else args.observable_file, tol)
    results = {
        "psi": psi.amplitudes,
        "observable": dump_observable(A),
        "measure": spec.describe(),
        "observable_tag": rep.observable_tag,
        "n_contexts": rep.n_contexts,
        "ex_spread": rep.ex_spread,
        "var_spread": rep.var_spread,
        "quantum_reference": rep.quantum_reference,
        "max_reference_deviation": rep.max_reference_deviation,
        "context_seeds": [args.seed + k for k in range(rep.n_contexts)],
        "ex_values": list(rep.ex_values),
        "var_values": list(rep.var_values),
    }
    ok = True
    if spec.kind is MeasureKind.BORN and p.is_weak:
        ok = (rep.ex_spread < SCAN_SPREAD_TOL and rep.var_spread < SCAN_SPREAD_TOL
              and rep.max_reference_deviation < SCAN_SPREAD_TOL)
    header = ["context_index", "context_seed", "ex_re", "ex_im", "var"]
    rows = [[k, args.seed + k, e.real, e.imag, v]
            for k, (e, v) in enumerate(zip(rep.ex_values, rep.var_values))]
    return results, ok, (header, rows)


def cmd_uniqueness_solve(args, tol):
    if not 2 <= args.dim <= 8:
        raise UsageError("--dim must be in [2, 8]")
    if args.tol <= 0 or args.n_contexts < 2 or args.n_observables < 1:
        raise UsageError("--tol must be positive, --n-contexts >= 2, --n-observables >= 1")
    opts = SolverOptions(max_iter=args.max_iter, tol=args.tol, n_contexts=args.n_contexts,
                         n_observables=args.n_observables)
    res = solve_uniqueness(args.dim, args.seed, opts, tol=tol)
    results = res.as_dict()
    results["options"] = opts.as_dict()
    return results, res.converged and res.distance_to_born < DISTANCE_TO_BORN_TOL, None


def cmd_zurek_demo(args, tol):
    rep = zurek_demo(tol)
    ok = (abs(rep.weak_values[0] - 1) < ZUREK_TOL and abs(rep.weak_values[1] + 1) < ZUREK_TOL
          and all(abs(x - 0.5) < ZUREK_TOL for x in rep.probabilities)
          and rep.swap_symmetry_residual < ZUREK_TOL)
    return rep.as_dict(), ok, None


def cmd_heisenberg_scan(args, tol):
    _check_dim(args)
    rng = np.random.default_rng([args.seed, 0])
    psi = random_state(args.dim, rng)
    H = random_hermitian(args.dim, rng)
    A = _observable(args, rng, tol)
    if not 0 <= args.eigen_index < args.dim:
        raise UsageError(f"--eigen-index must be in [0, {args.dim - 1}]")
    traj = heisenberg_trajectory(H, A, psi, args.final_time, args.steps, args.eigen_index, tol)
    results = traj.as_dict()
    results["psi"] = psi.amplitudes
    results["hamiltonian"] = dump_observable(H)
    results["observable"] = dump_observable(A)
    results["projective_expectation"] = list(expectation_trajectory(H, A, psi, traj.times))
    header = ["t", "weak_re", "weak_im"]
    rows = [[t, v.real, v.imag] for t, v in zip(traj.times, traj.values)]
    return results, traj.endpoint_residual < ENDPOINT_TOL, (header, rows)


COMMANDS = {
    "weak-value": cmd_weak_value,
    "invariance-scan": cmd_invariance_scan,
    "uniqueness-solve": cmd_uniqueness_solve,
    "zurek-demo": cmd_zurek_demo,
    "heisenberg-scan": cmd_heisenberg_scan,
}


def render(args, tol: Tolerances, results, table) -> str:
    if args.output == "csv":
        if table is None:
            raise UsageError(f"{args.command} has no tabular output; use --output json")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table[0])
        for row in table[1]:
            writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])
        return buf.getvalue()
    inputs = {k: v for k, v in sorted(vars(args).items())}
    doc = {
        "meta": {
            "tool": "weakborn",
            "version": __version__,
            "command": args.command,
            "seed": args.seed,
            "tolerances": tol.as_dict(),
            "contract": {
                "scan_spread": SCAN_SPREAD_TOL,
                "distance_to_born": DISTANCE_TO_BORN_TOL,
                "endpoint": ENDPOINT_TOL,
                "zurek": ZUREK_TOL,
            },
        },
        "inputs": to_jsonable(inputs),
        "results": to_jsonable(results),
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = DEFAULT_TOLERANCES.with_overrides(overlap_cutoff=args.tolerance_overlap,
                                            orthonormal=args.tolerance_orthonormal)
    try:
        if args.output == "csv" and args.command not in ("invariance-scan", "heisenberg-scan"):
            raise UsageError(f"{args.command} has no tabular output; use --output json")
        results, ok, table = COMMANDS[args.command](args, tol)
        text = render(args, tol, results, table)
    except (UsageError, WeakBornError, OSError) as exc:
        print(f"weakborn: error: {exc}", file=sys.stderr)
        return 2
    if args.out_path == "-":
        sys.stdout.write(text)
    else:
        with open(args.out_path, "w") as fh:
            fh.write(text)
    if not ok:
        print(f"weakborn: {args.command}: numerical contract violated", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
