"""Command-line front end.

Exit status: 0 when every check passed, 1 when a verification failed, 2 on
bad input or data that stayed degenerate after resampling.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .checks import CHECKS, general_coords, random_edge_kernel_element
from .complexes import (builtin_move, format_triangulation, random_walk, read_triangulation,
                        resolve_input, write_triangulation)
from .errors import ComponentError, DegenerateError, MoveError, NotASquareError, TriangulationError
from .family import move_registry
from .homology import exotic_betti, random_edge_chain
from .relations import run_family_resampling, verify_24, verify_33
from .scalars import DEFAULT_REL_TOL, DEFAULT_TOL, EXACT, FloatField
from .weights import FaceFactorTable, allowable_h, edge_weight

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, trials: int = 1) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--trials", type=int, default=trials, help=f"number of random trials (default {trials})")
    p.add_argument("--json", action="store_true", help="print one JSON document instead of text")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent trials")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOL, help="float zero tolerance")
    p.add_argument("--rel-tolerance", type=float, default=DEFAULT_REL_TOL,
                   help="float relative residual tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="grassmann-pachner",
                 description="Grassmann-algebra verification of 4-dimensional Pachner move relations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("verify-33", help="3-3 relation for an explicit weight family")
    _common(p, trials=25)
    p.add_argument("--family", type=int, choices=(1, 2), default=1)
    p.add_argument("--chain", choices=("random", "zero"), default="random",
                   help="edge chain giving the free terms (family 2)")
    p.add_argument("--input", help="triangulation file whose coord lines fix the coordinates of one trial")
    p.add_argument("--dump", action="store_true", help="print both sides as Grassmann elements")

    p = sub.add_parser("verify-24", help="2-4 relation for family 2")
    _common(p, trials=25)
    p.add_argument("--chain", choices=("random", "zero"), default="random")
    p.add_argument("--kernels", type=int, default=0,
                   help="also add this many random kernel elements to the edge weight")
    p.add_argument("--input", help="triangulation file whose coord lines fix the coordinates of one trial")
    p.add_argument("--dump", action="store_true")

    p = sub.add_parser("family", help="18-parameter isotropic family: build, split, verify")
    _common(p, trials=10)
    p.add_argument("--minus", action="store_true", help="use '-' instead of '+' when combining p and q")
    p.add_argument("--exact", action="store_true",
                   help="exact arithmetic; fails unless every discriminant is a square in Q(i)")
    p.add_argument("--dump", action="store_true")

    p = sub.add_parser("homology", help="exotic chain maps g3, g4 and classical b2")
    _common(p, trials=3)
    p.add_argument("--input", default="boundary_delta5.tri",
                   help="triangulation file (bundled fixtures are found by name)")

    p = sub.add_parser("pachner", help="random walk of bistellar moves")
    _common(p)
    p.add_argument("--input", default="boundary_delta5.tri")
    p.add_argument("--walk", type=int, default=10, help="number of moves")
    p.add_argument("--kinds", default="3-3,2-4,4-2,1-5", help="comma-separated move kinds")
    p.add_argument("--output", help="write the resulting triangulation here")
    p.add_argument("--then", choices=("homology",), help="run a further analysis on the result")
    p.add_argument("--no-orientation-check", action="store_true")

    p = sub.add_parser("selftest", help="run every acceptance check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", type=int, action="append", choices=sorted(CHECKS),
                   help="run only this criterion (repeatable)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--timings", action="store_true", help="include run times (output then varies)")
    return ap


# -- trial workers (top level so they can be sent to worker processes) ---------------

def _seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n)


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _coords_from_file(path: str, family: int):
    T = read_triangulation(resolve_input(path), strict_orientation=False)
    need = 1 if family == 1 else 3
    if not T.coords or any(len(c) != need for c in T.coords.values()):
        raise UsageError(f"{path} must give {need} coordinate(s) for every vertex")
    if not set(range(1, 7)) <= set(T.coords):
        raise UsageError(f"{path} must give coordinates for vertices 1..6")
    return {v: T.coords[v] for v in range(1, 7)}


def _trial_33(task) -> dict:
    index, ss, family, chain_mode, coords, dump = task
    rng = np.random.default_rng(ss)
    coords = coords or general_coords(rng, family)
    h = None
    if family == 2:
        move = builtin_move("3-3")
        chain = {} if chain_mode == "zero" else random_edge_chain(move.glued, rng)
        h = allowable_h(move, chain, FaceFactorTable(coords, 2))
    rep = verify_33(family, coords, h, field=EXACT)
    out = {"trial": index, "equal": rep.equal, "residual": rep.residual,
           "lhs_terms": len(rep.lhs_value), "degrees": rep.details["lhs_shape"]["degrees"],
           "parity": rep.details["lhs_shape"]["parity"]}
    if dump:
        out["lhs"] = rep.lhs_value.dump()
        out["rhs"] = rep.rhs_value.dump()
    return out


def _trial_24(task) -> dict:
    index, ss, chain_mode, kernels, coords, dump = task
    rng = np.random.default_rng(ss)
    coords = coords or general_coords(rng, 2)
    move = builtin_move("2-4")
    chain = {} if chain_mode == "zero" else random_edge_chain(move.glued, rng)
    rep = verify_24(coords, chain, field=EXACT)
    out = {"trial": index, "equal": rep.equal, "residual": rep.residual,
           "lhs_terms": len(rep.lhs_value), "degrees": rep.details["lhs_shape"]["degrees"],
           "parity": rep.details["lhs_shape"]["parity"]}
    if kernels:
        reg = move_registry(move)
        w = edge_weight((5, 6), move.rhs, FaceFactorTable(coords, 2), reg)
        same = all(verify_24(coords, chain, w + random_edge_kernel_element(coords, rng)).rhs_value == rep.rhs_value
                   for _ in range(kernels))
        out["edge_weight_invariant"] = same
        out["equal"] = out["equal"] and same
    if dump:
        out["lhs"] = rep.lhs_value.dump()
        out["rhs"] = rep.rhs_value.dump()
    return out


def _trial_family(task) -> dict:
    index, ss, exact, minus, tol, rel_tol, dump = task
    rng = np.random.default_rng(ss)
    field = EXACT if exact else FloatField(tol, rel_tol)
    try:
        run = run_family_resampling(rng, field, rst_sign=-1 if minus else 1)
    except ComponentError as exc:
        return {"trial": index, "equal": False, "error": f"component: {exc}"}
    except NotASquareError as exc:
        return {"trial": index, "equal": False, "error": f"not exact: {exc}", "input_error": True}
    except DegenerateError as exc:
        return {"trial": index, "equal": False, "error": f"degenerate: {exc}", "input_error": True}
    r = run.report
    ann = max(run.annihilation_residuals.values())
    ok = (run.basis_max_pairing < tol and ann < rel_tol and r.equal
          and r.details["v9_lhs_residual"] < rel_tol and r.details["v9_rhs_residual"] < rel_tol)
    out = {"trial": index, "equal": bool(ok), "basis_max_pairing": float(run.basis_max_pairing),
           "annihilation_residual": float(ann), "proportionality_residual": float(r.residual),
           "v9_lhs_residual": float(r.details["v9_lhs_residual"]),
           "v9_rhs_residual": float(r.details["v9_rhs_residual"]),
           "const_ratio": r.summary().get("const_ratio"),
           "parities": sorted({p.value for p in run.weights.parities.values()}),
           "flips": "".join("1" if run.weights.flips[t] else "0" for t in sorted(run.weights.flips))}
    if dump:
        out["lhs"] = r.lhs_value.dump()
        out["rhs"] = r.rhs_value.dump()
    return out


# -- output -----------------------------------------------------------------------

def _loc(loc) -> str:
    return ",".join(map(str, loc))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.3e}"
    if isinstance(v, list):
        return ",".join(map(str, v))
    return str(v)


def _emit_trials(args, header: dict, trials: list[dict]) -> int:
    passed = sum(1 for t in trials if t["equal"])
    verdict = passed == len(trials)
    if args.json:
        print(json.dumps({**header, "trials": trials, "passed": passed, "total": len(trials),
                          "result": "pass" if verdict else "fail"}, sort_keys=True))
    else:
        print(" ".join(f"{k}={_fmt(v)}" for k, v in header.items()))
        for t in trials:
            dumps = {k: t[k] for k in ("lhs", "rhs") if k in t}
            print(" ".join(f"{k}={_fmt(v)}" for k, v in t.items() if k not in dumps))
            for k, v in dumps.items():
                print(f"  {k}: {v}")
        print(f"result: {'PASS' if verdict else 'FAIL'} ({passed}/{len(trials)})")
    if any(t.get("input_error") for t in trials):
        return EXIT_INPUT
    return EXIT_OK if verdict else EXIT_FAIL


def _check_trials(args) -> None:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")


def cmd_verify_33(args) -> int:
    _check_trials(args)
    coords = _coords_from_file(args.input, args.family) if args.input else None
    n = 1 if coords else args.trials
    tasks = [(k, ss, args.family, args.chain, coords, args.dump) for k, ss in enumerate(_seeds(args.seed, n))]
    trials = _map(_trial_33, tasks, args.jobs)
    head = {"command": "verify-33", "family": args.family, "seed": args.seed, "trials": n}
    if args.family == 2:
        head["chain"] = args.chain
    return _emit_trials(args, head, trials)


def cmd_verify_24(args) -> int:
    _check_trials(args)
    coords = _coords_from_file(args.input, 2) if args.input else None
    n = 1 if coords else args.trials
    tasks = [(k, ss, args.chain, args.kernels, coords, args.dump) for k, ss in enumerate(_seeds(args.seed, n))]
    trials = _map(_trial_24, tasks, args.jobs)
    head = {"command": "verify-24", "seed": args.seed, "trials": n, "chain": args.chain}
    return _emit_trials(args, head, trials)


def cmd_family(args) -> int:
    _check_trials(args)
    tasks = [(k, ss, args.exact, args.minus, args.tolerance, args.rel_tolerance, args.dump)
             for k, ss in enumerate(_seeds(args.seed, args.trials))]
    trials = _map(_trial_family, tasks, args.jobs)
    head = {"command": "family", "seed": args.seed, "trials": args.trials,
            "backend": "exact" if args.exact else "float", "sign": "-" if args.minus else "+"}
    return _emit_trials(args, head, trials)


def _homology_output(args, T, extra: dict | None = None, walk_log=None) -> int:
    rng = np.random.default_rng(np.random.SeedSequence(args.seed).spawn(2)[1])
    rep = exotic_betti(T, trials=max(args.trials, 1), rng=rng)
    data = dict(extra or {})
    data.update(rep.as_dict())
    if rep.classical_b2 is not None:
        data["matches_6_b2"] = rep.exotic_dim == 6 * rep.classical_b2
    if args.json:
        if walk_log is not None:
            data["walk"] = [f"{k}@{_loc(loc)}" for k, loc in walk_log]
        print(json.dumps(data, sort_keys=True))
    else:
        for k, v in (extra or {}).items():
            print(f"{k}={_fmt(v)}")
        for line in rep.lines():
            print(line)
        print(f"n_pentachora={rep.n_pentachora}")
        print(f"n_inner_edges={rep.n_inner_edges}")
        print(f"chain_ok={_fmt(rep.chain_ok)}")
        if "matches_6_b2" in data:
            print(f"matches_6_b2={_fmt(data['matches_6_b2'])}")
    return EXIT_OK if rep.chain_ok else EXIT_FAIL


def cmd_homology(args) -> int:
    _check_trials(args)
    T = read_triangulation(resolve_input(args.input))
    return _homology_output(args, T, {"input": args.input})


def cmd_pachner(args) -> int:
    T = read_triangulation(resolve_input(args.input), strict_orientation=not args.no_orientation_check)
    if args.walk < 0:
        raise UsageError("--walk must be non-negative")
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    rng = np.random.default_rng(np.random.SeedSequence(args.seed).spawn(2)[0])
    W, log = random_walk(T, args.walk, rng, kinds)
    if args.output:
        write_triangulation(W, args.output, f"{args.walk} random moves from {args.input}, seed {args.seed}")
    ok = W.is_consistently_oriented()
    summary = {"input": args.input, "moves": len(log), "f_vector": list(W.f_vector()),
               "euler_characteristic": W.euler_characteristic(), "closed": W.is_closed(),
               "consistently_oriented": ok}
    if args.then == "homology":
        code = _homology_output(args, W, summary, log)
        return code if ok else EXIT_FAIL
    if args.json:
        summary["walk"] = [f"{k}@{_loc(loc)}" for k, loc in log]
        print(json.dumps(summary, sort_keys=True))
    else:
        for k, loc in log:
            print(f"move {k} at {_loc(loc)}")
        for k, v in summary.items():
            print(f"{k}={_fmt(v)}")
        if not args.output:
            print(format_triangulation(W), end="")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    children = np.random.SeedSequence(args.seed).spawn(len(CHECKS))
    results = []
    for (num, fn), ss in zip(CHECKS.items(), children):
        if args.only and num not in args.only:
            continue
        results.append(fn(np.random.default_rng(ss)))
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"seed": args.seed, "result": "pass" if ok else "fail",
                          "criteria": [{"number": r.number, "name": r.name, "passed": r.passed,
                                        "detail": r.detail, "failures": r.failures[:20],
                                        **({"seconds": round(r.seconds, 3)} if args.timings else {})}
                                       for r in results]}, sort_keys=True))
    else:
        for r in results:
            print(r.line(timing=args.timings))
            for f in r.failures[:10]:
                print(f"    {f}")
        print(f"result: {'PASS' if ok else 'FAIL'} ({sum(r.passed for r in results)}/{len(results)})")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "verify-33": cmd_verify_33,
    "verify-24": cmd_verify_24,
    "family": cmd_family,
    "homology": cmd_homology,
    "pachner": cmd_pachner,
    "selftest": cmd_selftest,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_INPUT
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (TriangulationError, MoveError, DegenerateError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(dispatch(argv))
