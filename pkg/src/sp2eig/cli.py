"""Command-line front end: ``sp2eig <subcommand> [options]``.

Exit status: 0 success, 1 bad usage or input, 2 numerical assertion.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import hmat, solver, topology
from .hmat import MatH2
from .quat import Quaternion, norm

EXIT_INPUT = 1
EXIT_NUMERIC = 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_json(source: str):
    try:
        if source == "-":
            return json.load(sys.stdin)
        with open(source) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {source!r}: {exc}") from exc


def _quaternion(data, what: str) -> Quaternion:
    try:
        return Quaternion.from_seq([float(v) for v in data])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what}: expected [t, x, y, z], got {data!r}") from exc


def _unit(q: Quaternion, what: str, tol: float) -> Quaternion:
    if abs(norm(q) - 1.0) > tol:
        raise InputError(f"{what} is not a unit quaternion (norm {norm(q)!r})")
    return q


def _sigma_list(data, tol: float) -> list[Quaternion]:
    if not isinstance(data, list) or not data:
        raise InputError("sigmas: expected a non-empty array of [t, x, y, z]")
    return [_unit(_quaternion(s, f"sigma[{m}]"), f"sigma[{m}]", tol)
            for m, s in enumerate(data)]


def _matrix(data) -> MatH2:
    try:
        return MatH2.from_rows(data)
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix: expected [[q, q], [q, q]], got {data!r}") from exc


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise InputError(f"--{name} is required for '{args.command}'")
    return value


def _fmt_q(q) -> str:
    return "[" + ", ".join(f"{v: .6f}" for v in q) + "]"


def _fmt_m(m) -> str:
    return "\n".join("  " + "  ".join(_fmt_q(q) for q in row) for row in m)


# ---- subcommands -----------------------------------------------------------

def cmd_construct(args) -> tuple[dict, str]:
    sigmas = _sigma_list(_read_json(_require(args, "sigmas")), args.tol)
    if len(sigmas) > 4:
        raise InputError(f"construct takes at most 4 sigmas, got {len(sigmas)}")
    res = solver.construct(*sigmas).to_dict()
    lines = [f"branch     {res['branch']} (rank {res['rank']})",
             f"q          {_fmt_q(res['q'])}",
             f"cos_theta  {res['cos_theta']:.17g}",
             f"theta      {res['theta']:.17g}"]
    for n, m in enumerate(res["matrices"]):
        lines += [f"matrix {n}", _fmt_m(m)]
    lines.append("index  condition  margin_0  margin_1")
    for k, r in res["residuals"].items():
        lines.append(f"{k:>5}  {r['condition']:.3e}  {r['margins'][0]:.3e}  {r['margins'][1]:.3e}")
    return res, "\n".join(lines)


def cmd_verify(args) -> tuple[dict, str]:
    A = _matrix(_read_json(_require(args, "matrix")))
    sigma = _quaternion(json.loads(_require(args, "sigma")), "--sigma")
    tol = hmat.EIGEN_TOL if args.tol is None else args.tol
    margin = hmat.adjoint_det(hmat.shift(A, sigma))
    residual = hmat.symplectic_residual(A)
    out = {"is_eigenvalue": margin <= tol, "margin": margin,
           "symplectic_residual": residual, "tol": tol, "warning": None}
    if residual > 1e-8:
        out["warning"] = "matrix is not symplectic"
    text = (f"is_eigenvalue        {out['is_eigenvalue']}\n"
            f"margin               {margin:.6e}\n"
            f"symplectic_residual  {residual:.3e}")
    if out["warning"]:
        text += f"\nwarning              {out['warning']}"
    return out, text


def cmd_classify(args) -> tuple[dict, str]:
    A = _matrix(_read_json(_require(args, "matrix")))
    tol = 1e-9 if args.tol is None else args.tol
    if not hmat.is_symplectic(A, max(tol, hmat.SYMPLECTIC_TOL)):
        raise InputError("classify needs a symplectic matrix")
    form = hmat.detect_rotation_form(A, tol)
    out = {"rotation_form": None if form is None else form.to_dict()}
    if form is None:
        return out, "not a rotation form (finitely many left eigenvalues)"
    return out, f"rotation form  q = {_fmt_q(form.q)}  theta = {form.theta:.17g}"


def cmd_cover(args) -> tuple[dict, str]:
    sigmas = _sigma_list(_read_json(_require(args, "sigmas")), 1e-9)
    inject = []
    if args.inject:
        data = _read_json(args.inject)
        if not isinstance(data, list):
            raise InputError("--inject: expected an array of matrices")
        inject = [_matrix(m) for m in data]
    threshold = topology.OMEGA_THRESHOLD if args.tol is None else args.tol
    try:
        rep = topology.cover_experiment(sigmas, args.samples, args.seed, threshold, inject)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = rep.to_dict()
    lines = [f"sigmas           {len(sigmas)}",
             f"samples          {rep.samples} (+{rep.injected} injected)",
             f"seed             {rep.seed}",
             f"min_best_margin  {rep.min_best_margin:.6e}",
             f"uncovered        {len(rep.uncovered)}"]
    for e in out["uncovered"]:
        lines.append(f"  #{e['index']}  margins " + " ".join(f"{v:.2e}" for v in e["margins"]))
    return out, "\n".join(lines)


def cmd_contract(args) -> tuple[dict, str]:
    A = _matrix(_read_json(_require(args, "matrix")))
    sigma = _quaternion(json.loads(_require(args, "sigma")), "--sigma")
    if args.steps < 1:
        raise InputError("--steps must be >= 1")
    try:
        start = topology.omega_margin(A, sigma)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    path = []
    for n in range(args.steps, -1, -1):
        t = n / args.steps
        if t == 0.0 and not start.member:
            raise InputError("matrix is not in Omega(sigma); the contraction has no endpoint")
        At = topology.cayley_path(A, sigma, t)
        path.append({"t": t, "matrix": At.to_list(),
                     "margin": hmat.adjoint_det(hmat.shift(At, sigma)),
                     "symplectic_residual": hmat.symplectic_residual(At)})
    out = {"sigma": sigma.to_list(), "steps": args.steps, "path": path,
           "endpoint": path[-1]["matrix"]}
    lines = ["       t     margin  symplectic_residual"]
    lines += [f"{p['t']:8.4f}  {p['margin']:.3e}  {p['symplectic_residual']:.3e}" for p in path]
    return out, "\n".join(lines)


def cmd_bound(args) -> tuple[dict, str]:
    if args.matrix is not None:
        M = np.asarray(_read_json(args.matrix), dtype=float)
        w = np.asarray(json.loads(_require(args, "vector")), dtype=float)
        try:
            b = solver.bound_check(M, w)
        except solver.PreconditionError as exc:
            raise InputError(str(exc)) from exc
        return b.to_dict(), f"|Mw| = {b.lhs:.17g}  sqrt(n)|w| = {b.rhs:.17g}  strict {b.strict}"
    trials = []
    for n in range(args.samples):
        rng = np.random.default_rng([args.seed, n])
        dim = int(rng.integers(2, 7))
        while True:
            M = rng.standard_normal((dim, dim))
            M /= np.linalg.norm(M, axis=1, keepdims=True)
            if solver.rank_and_kernel(M)[0] == dim:
                break
        b = solver.bound_check(M, rng.standard_normal(dim))
        trials.append({"n": dim, **b.to_dict()})
    worst = max(t["lhs"] / t["rhs"] for t in trials)
    out = {"samples": args.samples, "seed": args.seed,
           "all_strict": all(t["strict"] for t in trials), "max_ratio": worst,
           "trials": trials}
    if not out["all_strict"]:
        raise solver.NumericalInconsistency("bound violated in a random trial")
    return out, f"{args.samples} trials, all strict: {out['all_strict']}, max |Mw|/(sqrt(n)|w|) = {worst:.6f}"


COMMANDS = {
    "construct": (cmd_construct, "matrix with prescribed left eigenvalues"),
    "verify": (cmd_verify, "test whether sigma is a left eigenvalue of a matrix"),
    "classify": (cmd_classify, "detect the rotation form L_q R_theta"),
    "cover": (cmd_cover, "Monte-Carlo covering experiment with Omega sets"),
    "contract": (cmd_contract, "evaluate the Cayley contraction path"),
    "bound": (cmd_bound, "check |Mw| < sqrt(n)|w| for unit-row matrices"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sp2eig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--sigmas", metavar="FILE|-", help="JSON array of quaternions")
        p.add_argument("--matrix", metavar="FILE|-", help="JSON matrix")
        p.add_argument("--sigma", metavar="JSON", help="quaternion as [t,x,y,z]")
        p.add_argument("--vector", metavar="JSON", help="real vector (bound)")
        p.add_argument("--inject", metavar="FILE|-", help="JSON array of matrices (cover)")
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--steps", type=int, default=16)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--text", action="store_true", help="human-readable table output")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("sp2eig: error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "construct" and args.tol is None:
        args.tol = 1e-9
    func = COMMANDS[args.command][0]
    try:
        out, text = func(args)
    except InputError as exc:
        print(f"sp2eig: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (solver.NumericalInconsistency, FloatingPointError, ArithmeticError) as exc:
        print(f"sp2eig: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.text:
        print(text)
    else:
        print(json.dumps(out, indent=2, allow_nan=False))
    return 0


if __name__ == "__main__":
    sys.exit(main())
