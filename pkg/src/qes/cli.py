"""``qes`` command line: run either pipeline on a JSON problem file.

Exit status is 0 when results were produced and every requested check
passed, 1 when a check failed or nothing was found, and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Any

from . import consistency, enu, fba
from .poly import EXACT, FLOAT, Poly
from .symfunc import RepeatedRootError, RootSet

SCHEMA_VERSION = 1
COMMANDS = ("factorize", "solve", "constants", "verify", "check-suite")


class InputError(ValueError):
    """The problem file is malformed or inconsistent with the command."""


# -- problem file -----------------------------------------------------------


@dataclass
class ProblemFile:
    k: int
    n: int = 0
    mode: str = EXACT
    a: list | None = None
    b: list | None = None
    c: list | None = None
    roots: list | None = None
    constants: list | None = None
    sigma: list | None = None
    tau_tilde: list | None = None
    sigma_tilde: list | None = None
    g: list | None = None
    solver: dict = field(default_factory=dict)
    suite: dict = field(default_factory=dict)


_SOLVER_KEYS = {"starts": int, "max_iter": int, "tol": float, "seed": int, "damping": float}
_SUITE_KEYS = {"count": int, "seed": int, "ks": list, "ns": list}


def _parse_scalar(value, mode: str, where: str):
    if isinstance(value, bool):
        raise InputError(f"{where}: boolean is not a number")
    if mode == EXACT:
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError(f"{where}: {value!r} is not a rational p/q with nonzero q") from None
        raise InputError(f"{where}: exact mode expects rationals as strings, got {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: {value!r} is not a number") from None
    else:
        raise InputError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(out):
        raise InputError(f"{where}: non-finite value")
    return out


def _parse_array(data: dict, key: str, mode: str, length: int | None):
    if data.get(key) is None:
        return None
    arr = data[key]
    if not isinstance(arr, list):
        raise InputError(f"{key}: expected an array")
    if length is not None and len(arr) != length:
        raise InputError(f"{key}: expected {length} entries, got {len(arr)}")
    return [_parse_scalar(v, mode, f"{key}[{i}]") for i, v in enumerate(arr)]


def parse_problem(data: Any, mode: str | None = None) -> ProblemFile:
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    k = data.get("k")
    if not isinstance(k, int) or isinstance(k, bool) or k < 2:
        raise InputError("k must be an integer >= 2")
    n = data.get("n", 0)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError("n must be a nonnegative integer")
    mode = mode or data.get("mode", EXACT)
    if mode not in (EXACT, FLOAT):
        raise InputError(f"mode must be 'exact' or 'float', got {mode!r}")

    pf = ProblemFile(
        k=k,
        n=n,
        mode=mode,
        a=_parse_array(data, "a", mode, k + 1),
        b=_parse_array(data, "b", mode, k),
        c=_parse_array(data, "c", mode, k - 1),
        roots=_parse_array(data, "roots", mode, None),
        constants=_parse_array(data, "constants", mode, k - 2),
        sigma=_parse_array(data, "sigma", mode, None),
        tau_tilde=_parse_array(data, "tau_tilde", mode, None),
        sigma_tilde=_parse_array(data, "sigma_tilde", mode, None),
        g=_parse_array(data, "g", mode, None),
    )
    for key, bound in (("sigma", k + 1), ("tau_tilde", k), ("sigma_tilde", 2 * k - 1), ("g", k - 1)):
        arr = getattr(pf, key)
        if arr is not None and len(arr) > bound:
            raise InputError(f"{key}: at most {bound} coefficients for k={k}")
    if pf.roots is not None:
        if len(pf.roots) != n:
            raise InputError(f"roots: expected n={n} entries, got {len(pf.roots)}")
        try:
            RootSet(pf.roots, mode)
        except RepeatedRootError as exc:
            raise InputError(f"roots: {exc}") from None

    for block, schema in (("solver", _SOLVER_KEYS), ("suite", _SUITE_KEYS)):
        raw = data.get(block) or {}
        if not isinstance(raw, dict):
            raise InputError(f"{block}: expected an object")
        parsed = {}
        for key, value in raw.items():
            if key not in schema:
                raise InputError(f"{block}.{key}: unknown field")
            kind = schema[key]
            if kind is list:
                if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
                    raise InputError(f"{block}.{key}: expected a list of integers")
            elif kind is int:
                if not isinstance(value, int) or isinstance(value, bool):
                    raise InputError(f"{block}.{key}: expected an integer")
            elif not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InputError(f"{block}.{key}: expected a number")
            parsed[key] = kind(value) if kind is not list else list(value)
        setattr(pf, block, parsed)
    return pf


def problem_to_dict(pf: ProblemFile) -> dict:
    out = {}
    for key, value in asdict(pf).items():
        if value is None or value == {}:
            continue
        out[key] = to_jsonable(value)
    return out


# -- JSON output ------------------------------------------------------------


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, Poly):
        return [to_jsonable(c) for c in obj.coeffs]
    if isinstance(obj, RootSet):
        return [to_jsonable(c) for c in obj.roots]
    if isinstance(obj, consistency.CheckReport):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return to_jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(results: dict, indent: int | None = None) -> str:
    """JSON document with ``schema_version`` first, then ``results`` in insertion order."""
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(to_jsonable(results))
    if indent is None:
        return json.dumps(doc, separators=(",", ":"))
    return json.dumps(doc, indent=indent)


# -- commands ---------------------------------------------------------------


def _poly(pf: ProblemFile, key: str) -> Poly:
    arr = getattr(pf, key)
    if arr is None:
        raise InputError(f"{key} is required for this command")
    return Poly(arr, pf.mode)


def _frame(pf: ProblemFile) -> tuple[Poly, Poly]:
    return _poly(pf, "a"), _poly(pf, "b")


def cmd_factorize(pf: ProblemFile) -> tuple[dict, int]:
    sigma = _poly(pf, "sigma")
    tt = Poly(pf.tau_tilde or [], pf.mode)
    st = Poly(pf.sigma_tilde or [], pf.mode)
    try:
        inp = enu.NUInput(tt, sigma, st, pf.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if pf.g is not None:
        g = Poly(pf.g, pf.mode)
        pairs = [(g, pi) for pi in enu.pi_candidates(inp, g)]
        source = "pi_candidates"
    elif pf.k in (2, 3):
        pairs = enu.find_g(inp)
        source = "find_g"
    else:
        raise InputError("k >= 4: supply g explicitly (automatic search covers k in {2, 3})")
    facts = []
    for g, pi in pairs:
        f = enu.assemble(inp, g, pi)
        facts.append({
            "g": f.g, "pi": f.pi, "tau": f.tau, "h": f.h, "sigma_bar": f.sigma_bar,
            "phi_logderiv": {"numerator": f.phi_logderiv[0], "denominator": f.phi_logderiv[1]},
        })
    return {"command": "factorize", "mode": pf.mode, "k": pf.k, "source": source,
            "factorizations": facts}, (0 if facts else 1)


def _solver_config(pf: ProblemFile) -> fba.SolverConfig:
    return replace(fba.SolverConfig(), **pf.solver)


def cmd_solve(pf: ProblemFile) -> tuple[dict, int]:
    X, Y = _frame(pf)
    X, Y = X.to_mode(FLOAT), Y.to_mode(FLOAT)
    if pf.n < 1:
        raise InputError("solve needs n >= 1")
    if X.is_zero():
        raise InputError("a: X vanishes identically")
    cfg = _solver_config(pf)
    sols = fba.solve_bethe(fba.BetheProblem(X, Y, pf.n, pf.k), cfg)
    out = []
    for s in sols:
        out.append({
            "roots": s.roots, "c": list(s.c), "residual_norm": s.residual_norm,
            "newton_iterations": s.newton_iterations, "converged": s.converged, "start": s.start,
        })
    return {"command": "solve", "k": pf.k, "n": pf.n, "config": asdict(cfg), "solutions": out}, (
        0 if out else 1)


def _roots(pf: ProblemFile) -> RootSet:
    if pf.roots is None:
        raise InputError("roots are required for this command")
    return RootSet(pf.roots, pf.mode)


def cmd_constants(pf: ProblemFile) -> tuple[dict, int]:
    X, Y = _frame(pf)
    rs = _roots(pf)
    lin = enu.constants_linear_system(rs, X, Y, pf.n, pf.k)
    closed = enu.constants_closed_form(rs, X, Y, pf.n, pf.k)
    report = consistency._compare("constants", lin.values, closed.values, pf.mode)
    result = {"command": "constants", "mode": pf.mode, "k": pf.k, "n": pf.n,
              "linear_system": list(lin.values), "closed_form": list(closed.values),
              "agree": report.passed}
    if pf.k == 2:
        result["note"] = "k=2: no integration constants"
    return result, (0 if report.passed else 1)


def cmd_verify(pf: ProblemFile) -> tuple[dict, int]:
    X, Y = _frame(pf)
    rs = _roots(pf)
    if pf.c is not None:
        Z = Poly(pf.c, pf.mode)
        source = "c"
    elif pf.constants is not None or pf.k == 2:
        C = enu.IntegrationConstants(tuple(pf.constants or ()), pf.n, pf.k)
        Z = enu.build_Zn(X, Y, pf.n, C)
        source = "constants"
    else:
        raise InputError("verify needs c or constants")
    rep = consistency.verify_polynomial_solution(X, Y, Z, rs.polynomial())
    return {"command": "verify", "mode": pf.mode, "Z": Z, "Z_source": source,
            "checks": [rep]}, (0 if rep.passed else 1)


def cmd_check_suite(pf: ProblemFile, seed: int) -> tuple[dict, int]:
    opts = pf.suite
    count = opts.get("count", 20)
    ks = opts.get("ks", [3, 4, 5, 6])
    ns = opts.get("ns", [1, 2, 3, 4, 5, 6])
    if count < 0 or not ks or not ns or min(ks) < 2 or min(ns) < 0:
        raise InputError("suite: count >= 0, ks >= 2 and ns >= 0 required")
    checks = []
    for inst, reps in consistency.random_battery(seed, count, ks, ns):
        tag = {"k": inst.k, "n": inst.n, "roots": inst.roots}
        reps = reps + consistency.appendix_suite(inst.roots, inst.X, inst.Y, inst.n, inst.k)
        for r in reps:
            checks.append({**r.to_dict(), "instance": tag})
    failed = sum(not c["passed"] for c in checks)
    skipped = sum(c["skipped"] for c in checks)
    summary = {"instances": count, "checks": len(checks), "passed": len(checks) - failed,
               "failed": failed, "skipped": skipped}
    return {"command": "check-suite", "seed": seed, "summary": summary, "checks": checks}, (
        0 if failed == 0 else 1)


def run(command: str, pf: ProblemFile, seed: int | None = None) -> tuple[dict, int]:
    if command == "factorize":
        return cmd_factorize(pf)
    if command == "solve":
        return cmd_solve(pf)
    if command == "constants":
        return cmd_constants(pf)
    if command == "verify":
        return cmd_verify(pf)
    if command == "check-suite":
        return cmd_check_suite(pf, seed if seed is not None else pf.suite.get("seed", 0))
    raise InputError(f"unknown command {command!r}")


# -- entry point ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=name != "check-suite",
                       help="problem file (JSON); '-' reads standard input")
        p.add_argument("--mode", choices=(EXACT, FLOAT))
        p.add_argument("--seed", type=int)
        p.add_argument("--starts", type=int)
        p.add_argument("--tol", type=float)
    return parser


def _error(kind: str, message: str) -> int:
    doc = emit_report({"error": {"type": kind, "message": message}})
    print(doc, file=sys.stderr)
    return 2


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.input is None:
            data = {"k": 2}
        elif args.input == "-":
            data = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _error("input", str(exc))
    try:
        pf = parse_problem(data, args.mode)
        for key in ("seed", "starts", "tol"):
            if getattr(args, key) is not None:
                pf.solver[key] = getattr(args, key)
        result, code = run(args.command, pf, args.seed)
    except (ValueError, TypeError, NotImplementedError) as exc:
        return _error(type(exc).__name__, str(exc))
    except ArithmeticError as exc:
        _error(type(exc).__name__, str(exc))
        return 1
    print(emit_report(result, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
