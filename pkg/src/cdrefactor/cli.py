"""Command-line front end: ``cdrefactor <subcommand> ...``.

Exit status: 0 on success, 1 on parse/validation failure (or a negative
comparison result), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import generators, io
from .engine import EngineConfig, check_confluence, run
from .isomorphism import isomorphic
from .metrics import measure
from .model import MULTI, MODES, SINGLE, ModelError, validate
from .oracle import OracleBudget, max_removable


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cdrefactor", description="Remove attribute clones from class diagrams.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def model_opts(sp, output=False):
        sp.add_argument("--input", required=True, help="input model (.cdm or .xmi)")
        if output:
            sp.add_argument("--output", help="where to write the refactored model")
        sp.add_argument("--format", choices=io.FORMATS, help="override format inferred from extension")
        sp.add_argument("--mode", choices=MODES, default=SINGLE)

    ref = sub.add_parser("refactor", help="apply the rules to a fixed point")
    model_opts(ref, output=True)
    ref.add_argument("--allow-overlap", action="store_true", help="multi mode: group overlapping owners")
    ref.add_argument("--seed", type=int, help="use a seeded random match order")
    ref.add_argument("--max-steps", type=int)
    ref.add_argument("--trace", help="write applied steps as JSON lines")
    ref.add_argument("--metrics", help="write run metrics as JSON")
    ref.add_argument("--with-oracle", action="store_true", help="compute the removable maximum")
    ref.add_argument("--oracle-max-states", type=int, default=200_000)

    chk = sub.add_parser("check", help="validate a model")
    model_opts(chk)

    gen = sub.add_parser("generate", help="write one of the benchmark models")
    gen.add_argument("kind", choices=generators.KINDS)
    gen.add_argument("--stress", type=int, help="number of copies for the stress model")
    gen.add_argument("--output", required=True)
    gen.add_argument("--format", choices=io.FORMATS)

    orc = sub.add_parser("oracle", help="exhaustive search for the removable maximum")
    model_opts(orc)
    orc.add_argument("--oracle-max-states", type=int, default=200_000)

    cmp_ = sub.add_parser("compare", help="compare two models")
    cmp_.add_argument("--iso", nargs=2, required=True, metavar="PATH")
    cmp_.add_argument("--format", choices=io.FORMATS)
    cmp_.add_argument("--mode", choices=MODES, default=SINGLE)

    con = sub.add_parser("confluence", help="seeded runs plus pairwise isomorphism")
    model_opts(con)
    con.add_argument("--runs", type=int, default=100)
    con.add_argument("--seed", type=int, default=0, help="first seed")
    con.add_argument("--allow-overlap", action="store_true")

    bench = sub.add_parser("bench", help="time the stress series")
    bench.add_argument("--stress", type=int, nargs="+", default=[1000, 5000, 10000])
    return p


def _check_flags(args) -> None:
    if getattr(args, "allow_overlap", False) and args.mode != MULTI:
        raise UsageError("--allow-overlap requires --mode multi")
    if args.cmd == "generate":
        if args.kind == "stress" and not args.stress:
            raise UsageError("generate stress needs --stress N")
        if args.kind != "stress" and args.stress:
            raise UsageError("--stress only applies to the stress model")
        if args.stress is not None and args.stress < 1:
            raise UsageError("--stress must be >= 1")
        io.format_for(args.output, args.format)
    if args.cmd == "bench" and any(n < 1 for n in args.stress):
        raise UsageError("--stress sizes must be >= 1")
    if args.cmd == "confluence" and args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if getattr(args, "oracle_max_states", 1) < 1:
        raise UsageError("--oracle-max-states must be >= 1")
    if getattr(args, "max_steps", None) is not None and args.max_steps < 0:
        raise UsageError("--max-steps must be >= 0")
    for name in ("input", "output"):
        path = getattr(args, name, None)
        if path and args.cmd != "generate":
            io.format_for(path, args.format)
    if args.cmd == "compare":
        for path in args.iso:
            io.format_for(path, args.format)


def _load(path, args):
    return io.load(path, args.format, args.mode)


def _cmd_refactor(args, out) -> int:
    model = _load(args.input, args)
    config = EngineConfig(args.mode, args.seed, args.allow_overlap, args.max_steps)
    result = run(model, config)
    # refuse to write anything that fails validation
    problems = validate(result.model)
    if problems:
        for v in problems:
            print(f"error: output {v}", file=sys.stderr)
        return 1
    if args.output:
        io.save(result.model, args.output, args.format)
    else:
        out.write(io.emit(result.model, io.format_for(args.input, args.format)))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for s in result.trace:
                fh.write(json.dumps(s.to_dict(), sort_keys=True) + "\n")
    oracle = None
    if args.with_oracle:
        oracle = max_removable(model, OracleBudget(args.oracle_max_states))
        if not oracle.exact:
            print("warning: oracle budget exhausted; removable maximum omitted", file=sys.stderr)
    report = measure(model, result, oracle)
    if args.metrics:
        report.write(args.metrics)
    if not result.converged:
        print(f"warning: stopped after {result.steps} steps before reaching a fixed point",
              file=sys.stderr)
    print(f"{result.steps} steps, {report.m} copies removed, "
          f"{report.classes_created} classes created", file=sys.stderr)
    return 0


def _cmd_check(args, out) -> int:
    model = io.load(args.input, args.format, args.mode, validate=False)
    problems = validate(model)
    for v in problems:
        print(f"error: {v}", file=sys.stderr)
    if not problems:
        c, a, g = model.sizes()
        out.write(f"ok: {c} classes, {a} attributes, {g} generalizations\n")
    return 1 if problems else 0


def _cmd_generate(args, out) -> int:
    spec = generators.TestCaseSpec(args.kind, args.stress or 1)
    io.save(generators.generate(spec), args.output, args.format)
    return 0


def _cmd_oracle(args, out) -> int:
    model = _load(args.input, args)
    res = max_removable(model, OracleBudget(args.oracle_max_states))
    payload = {
        "n_max": res.n_max,
        "min_new_classes": res.min_new_classes,
        "states_explored": res.states_explored,
        "exact": res.exact,
        "witness": [s.to_dict() for s in res.witness],
    }
    out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0 if res.exact else 1


def _cmd_compare(args, out) -> int:
    a, b = (_load(p, args) for p in args.iso)
    same = isomorphic(a, b)
    out.write("isomorphic\n" if same else "not isomorphic\n")
    return 0 if same else 1


def _cmd_confluence(args, out) -> int:
    model = _load(args.input, args)
    config = EngineConfig(args.mode, None, args.allow_overlap)
    rep = check_confluence(model, args.runs, args.seed, config)
    payload = {
        "model": str(args.input),
        "runs": rep.runs,
        "distinct_results": rep.outcomes,
        "confluent": rep.confluent,
    }
    if rep.counterexample:
        payload["counterexample"] = {
            "model": str(args.input),
            "seed1": rep.counterexample[0],
            "seed2": rep.counterexample[1],
        }
    out.write(json.dumps(payload, sort_keys=True) + "\n")
    return 0 if rep.confluent else 1


def _cmd_bench(args, out) -> int:
    out.write(f"{'copies':>8} {'elements':>9} {'removed':>8} {'created':>7} {'run_ms':>10} {'wall_ms':>10}\n")
    for n in args.stress:
        model = generators.stress(n)
        t0 = time.perf_counter()
        res = run(model)
        wall = (time.perf_counter() - t0) * 1000.0
        out.write(f"{n:>8} {model.total_size():>9} {res.copies_removed:>8} "
                  f"{res.classes_created:>7} {res.elapsed_ms:>10.1f} {wall:>10.1f}\n")
    return 0


_COMMANDS = {
    "refactor": _cmd_refactor,
    "check": _cmd_check,
    "generate": _cmd_generate,
    "oracle": _cmd_oracle,
    "compare": _cmd_compare,
    "confluence": _cmd_confluence,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_flags(args)
    except (UsageError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.cmd](args, out)
    except io.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
