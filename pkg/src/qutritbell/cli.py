"""Command-line entry point: ``qutritbell <subcommand> ...``.

Exit status is 0 on success, 1 when a check fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .decomp import TensorCoefficients, decompose_gamma, lift_to_qubits, pauli_expand
from .functional import (
    BUILTIN,
    BellFunctional,
    EnumerationBudgetError,
    MeasurementSettings,
    bell_operator,
    builtin,
    builtin_json,
    lhv_bounds,
)
from .linalg import matrix_from_json, matrix_to_json, state_from_json, state_to_json
from .spin import SpinVariant, delta_basis, embed_state, gamma_basis

SIG_DIGITS = 12


class UsageError(Exception):
    pass


def _num(x: float, digits: int | None = SIG_DIGITS):
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return int(x)
    return x if digits is None else float(f"{x:.{digits}g}")


def clean(obj, digits: int | None = SIG_DIGITS):
    """Recursively convert numpy values and round floats to ``digits``
    significant digits (``None`` keeps full precision)."""
    if isinstance(obj, dict):
        return {str(k): clean(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj, digits)
    if isinstance(obj, complex):
        return [_num(obj.real, digits), _num(obj.imag, digits)]
    return obj


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.{SIG_DIGITS}g}"
    return str(x)


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        if isinstance(obj, list):
            yield prefix, " ".join(_fmt(v) for v in obj)
        else:
            yield prefix, _fmt(obj)


def emit(obj, fmt: str, out=None, exact: bool = False):
    """Print ``obj`` as JSON or as an aligned key/value table.  ``exact``
    keeps full float precision so operators, states and settings survive a
    round trip through files."""
    out = out or sys.stdout
    obj = clean(obj, None if exact else SIG_DIGITS)
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    else:
        rows = list(_flatten(obj))
        width = max((len(k) for k, _ in rows), default=0)
        for k, v in rows:
            out.write(f"{k.ljust(width)}  {v}\n")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_functional(arg: str) -> BellFunctional:
    """A functional from a JSON file, or a built-in by name (``cglmp``,
    ``cglmp.json``, ``four_qubit`` ...) when no such file exists."""
    if Path(arg).exists():
        try:
            return BellFunctional.from_json(_read_json(arg))
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"{arg}: malformed functional ({exc})") from None
    name = Path(arg).name.removesuffix(".json").replace("_", "-")
    if name in BUILTIN:
        return builtin(name)
    raise UsageError(f"no such file or built-in functional: {arg}")


def _load_matrix(path: str) -> np.ndarray:
    try:
        return matrix_from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: malformed operator ({exc})") from None


SETTINGS = ("cglmp", "three-qutrit")


def builtin_settings(name: str) -> MeasurementSettings:
    if name == "cglmp":
        from .cglmp import optimal_settings
    else:
        from .three_qutrit import optimal_settings
    return optimal_settings()


# ---------------------------------------------------------------- commands


def cmd_bases(args) -> int:
    basis = gamma_basis(args.variant) if args.basis == "gamma" else delta_basis()
    emit({"label": basis.label, "norms": basis.norms,
          "elements": [matrix_to_json(e) for e in basis.elements]}, args.format, exact=True)
    return 0


def cmd_embed(args) -> int:
    try:
        psi = state_from_json(_read_json(args.state))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{args.state}: malformed state ({exc})") from None
    emit(state_to_json(embed_state(psi, args.variant)), args.format, exact=True)
    return 0


def cmd_decompose(args) -> int:
    m = _load_matrix(args.operator)
    if args.basis == "gamma":
        c = decompose_gamma(m, args.variant)
        terms = [{"index": list(k), "coeff": v} for k, v in c.items() if abs(v) >= args.tol]
        emit({"n": c.n, "terms": terms}, args.format, exact=True)
    else:
        p = pauli_expand(m, tol=args.tol)
        emit(p.to_json(), args.format, exact=True)
    return 0


def cmd_lift(args) -> int:
    try:
        c = TensorCoefficients.from_json(_read_json(args.coeffs))
    except (KeyError, ValueError, TypeError, StopIteration) as exc:
        raise UsageError(f"{args.coeffs}: malformed coefficients ({exc})") from None
    emit(matrix_to_json(lift_to_qubits(c)), args.format, exact=True)
    return 0


def cmd_bellop(args) -> int:
    if args.dump:
        emit(builtin_json(args.dump), "json", exact=True)
        return 0
    if args.dump_settings:
        emit(builtin_settings(args.dump_settings).to_json(), "json", exact=True)
        return 0
    if args.functional is None or args.settings is None:
        raise UsageError("bellop needs a functional and a settings file (or --dump NAME)")
    f = load_functional(args.functional)
    try:
        s = MeasurementSettings.from_json(_read_json(args.settings))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{args.settings}: malformed settings ({exc})") from None
    try:
        m = bell_operator(f, s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    emit(matrix_to_json(m), args.format, exact=True)
    return 0


def cmd_lhv(args) -> int:
    f = load_functional(args.functional)
    lo, hi = lhv_bounds(f)
    if args.format == "json":
        emit({"min": lo, "max": hi}, "json")
    else:
        print(f"min {_fmt(clean(lo))} max {_fmt(clean(hi))}")
    return 0


def cmd_cglmp(args) -> int:
    from . import cglmp

    emit(cglmp.report(), args.report or args.format)
    return 0


def cmd_tsirelson(args) -> int:
    from . import tsirelson

    rep = tsirelson.report()
    emit(rep, args.format)
    ok = all(w["found"] for w in rep["witnesses"]) and abs(rep["difference"]) <= 1e-6
    return 0 if ok else 1


def cmd_three_qutrit(args) -> int:
    from . import three_qutrit

    emit(three_qutrit.report(), args.report or args.format)
    return 0


def cmd_reproduce(args) -> int:
    from .acceptance import run_all

    results = run_all()
    if args.format == "json":
        emit({"passed": all(r.passed for r in results), "criteria": [r.to_json() for r in results]}, "json")
    else:
        for r in results:
            print(f"[{'PASS' if r.passed else 'FAIL'}] criterion {r.number}: {r.title}")
            for c in r.checks:
                mark = "ok  " if c.passed else "FAIL"
                print(f"    {mark} {c.name}: computed {_fmt(c.computed)} expected {_fmt(c.expected)} "
                      f"tol {_fmt(c.tol)}")
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"failed criteria: {', '.join(map(str, failed))}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--tol", type=float, default=1e-12, help="drop coefficients below this magnitude")
    variant = argparse.ArgumentParser(add_help=False)
    variant.add_argument("--variant", choices=[v.value for v in SpinVariant], default="A")

    parser = argparse.ArgumentParser(prog="qutritbell", description="Qutrit Bell operators via symmetric qubits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bases", parents=[common, variant], help="dump the gamma or delta basis")
    p.add_argument("--basis", choices=("gamma", "delta"), default="gamma")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("embed", parents=[common, variant], help="map a qutrit state to qubits")
    p.add_argument("state")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("decompose", parents=[common, variant], help="expand an operator in gamma or Pauli products")
    p.add_argument("--basis", choices=("gamma", "pauli"), default="gamma")
    p.add_argument("operator")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("lift", parents=[common], help="gamma coefficients to a qubit operator")
    p.add_argument("coeffs")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("bellop", parents=[common], help="Bell operator of a functional at given settings")
    p.add_argument("functional", nargs="?")
    p.add_argument("settings", nargs="?")
    p.add_argument("--dump", choices=sorted(BUILTIN), help="print a built-in functional and exit")
    p.add_argument("--dump-settings", choices=sorted(SETTINGS), help="print built-in optimal settings and exit")
    p.set_defaults(func=cmd_bellop)

    p = sub.add_parser("lhv", parents=[common], help="classical bounds by strategy enumeration")
    p.add_argument("functional")
    p.set_defaults(func=cmd_lhv)

    for name, func in (("cglmp", cmd_cglmp), ("three-qutrit", cmd_three_qutrit)):
        p = sub.add_parser(name, parents=[common], help=f"{name} report")
        p.add_argument("--report", choices=("json", "table"), help="alias for --format")
        p.set_defaults(func=func)

    p = sub.add_parser("tsirelson", parents=[common], help="Tsirelson bound from complementarity")
    p.set_defaults(func=cmd_tsirelson)

    p = sub.add_parser("reproduce", parents=[common], help="run every acceptance check")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    if not math.isfinite(args.tol) or args.tol < 0:
        print(f"{parser.prog}: error: --tol must be a non-negative number", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, ValueError, EnumerationBudgetError) as exc:
        # malformed or unsuitable input (wrong dimension, non-Hermitian, ...)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
