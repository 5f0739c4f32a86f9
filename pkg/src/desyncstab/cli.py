"""Command-line front end.

Subcommands: ``bounds``, ``verify-appendix``, ``figure1``, ``criterion``,
``norm`` and ``regularity``.  Reports go to stdout (or ``--out``) as JSON,
except ``figure1`` which writes CSV.  Exit codes: 0 ok, 1 a check failed,
2 invalid input, 3 product budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .identities import run_suite
from .criteria import MixClassSpec, MixParams2, cross_validate, r2_criterion, rplus_criterion
from .families import family_class, periodic_word, parse_family_spec, stable_parameter, unstable_parameter
from .norms import build_norm, default_samples, evaluate_norm, verify_contraction
from .products import (
    DEFAULT_BUDGET,
    DEFAULT_TOLERANCE,
    BudgetExceededError,
    MatrixClass,
    Verdict,
    regularity_index,
    stability_bounds,
)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunReport:
    command: list[str]
    input_class: dict | None
    parameters: dict
    results: dict
    wall_time: float | None = None
    version: str = __version__
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "input_class": self.input_class,
            "parameters": self.parameters,
            "results": self.results,
            "version": self.version,
        }
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        return cls(
            command=d["command"],
            input_class=d["input_class"],
            parameters=d["parameters"],
            results=d["results"],
            wall_time=d.get("wall_time"),
            version=d["version"],
        )


# ---------------------------------------------------------------- inputs


def load_class(path: str) -> MatrixClass:
    """Read ``{"m": M, "n": N, "matrices": [...]}``; each matrix is row-major flat or nested."""
    try:
        data = json.loads(Path(path).read_text())
        m, n = int(data["m"]), int(data["n"])
        mats = [np.asarray(a, dtype=float).reshape(n, n) for a in data["matrices"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read class file {path}: {exc}") from exc
    if len(mats) != m:
        raise InputError(f"class file declares m={m} but holds {len(mats)} matrices")
    try:
        return MatrixClass(mats)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def class_to_json(cls: MatrixClass) -> dict:
    return {"m": cls.m, "n": cls.dim, "matrices": [[float(v) for v in a.ravel()] for a in cls.members]}


def load_word(path: str) -> list[int]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read word file {path}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in data):
        raise InputError("word file must hold a JSON array of integers")
    return data


def _class_from_args(args) -> MatrixClass:
    if getattr(args, "family", None):
        try:
            _, _, t = parse_family_spec(args.family)
            return family_class(t)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    if getattr(args, "class_file", None):
        return load_class(args.class_file)
    raise InputError("give a class file (--class) or a family shorthand (--t)")


def _parse_vec(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad vector {text!r}") from exc


# -------------------------------------------------------------- commands


def cmd_bounds(args) -> tuple[RunReport, int]:
    cls = _class_from_args(args)
    report = stability_bounds(cls, args.depth, args.tolerance, budget=args.budget, prune=args.prune)
    params = {"depth": args.depth, "tolerance": args.tolerance, "budget": args.budget, "prune": args.prune}
    if args.family:
        params["family"] = args.family
    return RunReport([], class_to_json(cls), params, report.to_dict()), EXIT_OK


def cmd_verify_appendix(args) -> tuple[RunReport, int]:
    checks = run_suite(n_max=args.n_max, word_len=args.word_len, perturb=args.perturb, seed=args.seed)
    ok = all(c.passed for c in checks)
    results = {"passed": ok, "checks": [c.to_dict() for c in checks]}
    params = {"n_max": args.n_max, "word_len": args.word_len, "perturb": args.perturb, "seed": args.seed}
    return RunReport([], None, params, results), EXIT_OK if ok else EXIT_CHECK_FAILED


def figure1_rows(n_max: int, depth: int, tolerance: float = DEFAULT_TOLERANCE) -> list[dict]:
    """Classification of ``t_2 > s_2 > t_3 > ... > s_nmax > t_(nmax+1)``.

    Unstable-side rows also score the periodic ``G H^n G`` word, whose
    length ``n + 2`` may exceed ``depth``.
    """
    if n_max < 2:
        raise InputError("figure1 needs --n-max >= 2")
    entries = []
    for n in range(2, n_max + 2):
        entries.append((n, "t_n", stable_parameter(n)))
        if n <= n_max:
            entries.append((n, "s_n", unstable_parameter(n)))
    rows = []
    for n, kind, t in entries:
        witnesses = [periodic_word(n, 1)] if kind == "s_n" else []
        rep = stability_bounds(family_class(t), depth, tolerance, witnesses=witnesses)
        rows.append(
            {
                "n": n,
                "kind": kind,
                "t_value": t,
                "verdict": rep.verdict.value,
                "best_lower": rep.best_lower,
                "best_upper": rep.best_upper,
            }
        )
    return rows


FIGURE1_COLUMNS = ["n", "kind", "t_value", "verdict", "best_lower", "best_upper"]


def figure1_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIGURE1_COLUMNS)
    for r in rows:
        writer.writerow(
            [r["n"], r["kind"], f"{r['t_value']:.17g}", r["verdict"], f"{r['best_lower']:.17g}", f"{r['best_upper']:.17g}"]
        )
    return buf.getvalue()


def cmd_criterion(args) -> tuple[RunReport, int]:
    if (args.r2 is None) == (args.rplus is None):
        raise InputError("give exactly one of --r2 or --rplus")
    if args.r2 is not None:
        p = MixParams2(*args.r2)
        res = r2_criterion(p, args.tau)
        subject = {"r2": list(args.r2)}
    else:
        try:
            raw = json.loads(Path(args.rplus).read_text())
            rows = raw["rows"] if isinstance(raw, dict) else raw
            p = MixClassSpec(rows)
            res = rplus_criterion(p, args.tau)
        except (OSError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read rplus file {args.rplus}: {exc}") from exc
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        subject = {"rplus": [list(r) for r in p.rows]}
    results = {"criterion": res.to_dict()}
    code = EXIT_OK
    if args.cross_depth:
        cv = cross_validate(p, args.cross_depth, args.tau, criterion=res)
        results["cross_validation"] = cv.to_dict()
        if cv.contradiction:
            code = EXIT_CHECK_FAILED
    params = {"tau": args.tau, "cross_depth": args.cross_depth, **subject}
    return RunReport([], None, params, results), code


def cmd_norm(args) -> tuple[RunReport, int]:
    cls = _class_from_args(args)
    q = args.q if args.q == "auto" else _float(args.q, "--q")
    try:
        na = build_norm(cls, q, args.depth, budget=args.budget)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    samples = default_samples(cls.dim, args.samples, args.seed)
    reports = [verify_contraction(na, k, samples) for k in range(1, cls.m + 1)]
    results = {
        "q": na.q,
        "depth": na.depth,
        "level_sizes": na.level_sizes(),
        "sandwich_constant": na.sandwich_constant(),
        "contraction": [r.to_dict() for r in reports],
    }
    if args.x:
        results["evaluate"] = {"x": _parse_vec(args.x), "value": evaluate_norm(na, _parse_vec(args.x))}
    params = {"q": args.q, "depth": args.depth, "samples": args.samples, "seed": args.seed}
    if args.family:
        params["family"] = args.family
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_CHECK_FAILED
    return RunReport([], class_to_json(cls), params, results), code


def cmd_regularity(args) -> tuple[RunReport, int]:
    word = load_word(args.word)
    try:
        prefix = [regularity_index(args.m, word[:k]) for k in range(len(word) + 1)]
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    results = {"length": len(word), "r": prefix[-1], "r_prefix": prefix}
    return RunReport([], None, {"m": args.m, "word": word}, results), EXIT_OK


def _float(text: str, flag: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{flag} expects a number, got {text!r}") from None


# ------------------------------------------------------------------ main


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_INVALID, "invalid_input", message)


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "reason": " ".join(str(message).split())}) + "\n")
    sys.exit(code)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="desyncstab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--deterministic", action="store_true", help="omit wall time from the report")

    def class_source(p):
        p.add_argument("--class", dest="class_file", help="class JSON file")
        p.add_argument("--t", dest="family", help="built-in family point 't:n' or 's:n'")

    p = sub.add_parser("bounds", help="product-based spectral bounds and verdict")
    class_source(p)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--prune", action="store_true")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify-appendix", help="run the family identity check suite")
    p.add_argument("--n-max", type=int, default=30)
    p.add_argument("--word-len", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.0, help="test hook: corrupt the projector")
    common(p)
    p.set_defaults(func=cmd_verify_appendix)

    p = sub.add_parser("figure1", help="CSV of interleaved stable/unstable family classifications")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--out")
    p.set_defaults(func=None)

    p = sub.add_parser("criterion", help="exact criteria for mixing classes")
    p.add_argument("--r2", type=float, nargs=4, metavar=("A11", "A12", "A21", "A22"))
    p.add_argument("--rplus", help="JSON file with the positive N x N matrix (a_ij)")
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--cross-depth", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("norm", help="build a truncated extremal norm and check contraction")
    class_source(p)
    p.add_argument("--q", default="auto", help="rate in (0, 1] or 'auto'")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--x", help="comma-separated vector to evaluate")
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("regularity", help="regularity index r(n) of a switching word")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--word", required=True, help="JSON array of 1-based indices")
    common(p)
    p.set_defaults(func=cmd_regularity)
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure1":
            _emit(figure1_csv(figure1_rows(args.n_max, args.depth, args.tolerance)), args.out)
            return EXIT_OK
        start = time.perf_counter()
        report, code = args.func(args)
        report.command = ["desyncstab", *argv]
        if not args.deterministic:
            report.wall_time = time.perf_counter() - start
        _emit(report.to_json() + "\n", args.out)
        return code
    except BudgetExceededError as exc:
        _fail(EXIT_BUDGET, "budget_exceeded", str(exc))
    except (InputError, ValueError) as exc:
        _fail(EXIT_INVALID, "invalid_input", str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
