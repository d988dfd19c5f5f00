"""Command-line entry point: check, enumerate, bench, serve.

Scenario documents stream to stdout (one JSON document per line); summaries
and diagnostics go to stderr.  Exit codes: 0 success, 1 usage error, 2 model
error, 3 timeout.
"""
from __future__ import annotations

import argparse
import sys

from .bench import MODES, bench_run, discover_models
from .bounds import allocate_primary_vars, build_universe, dump_varmap
from .enumeration import EXHAUSTED, EnumerationSession, scenario_dot
from .lang.ast import ModelError
from .lang.parser import parse_model
from .lang.resolver import resolve_model
from .metrics import emit_csv, emit_table
from .strategies import enumerate_analyzer_mode, enumerate_baseline
from .translate import translate

USAGE_ERROR, MODEL_ERROR, TIMEOUT = 1, 2, 3


class _Abort(Exception):
    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        print(f"error: {message}", file=sys.stderr)
        raise _Abort(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boundsmith", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    check = sub.add_parser("check", help="parse and resolve a model")
    check.add_argument("model")

    enum = sub.add_parser("enumerate", help="enumerate scenarios")
    enum.add_argument("model")
    enum.add_argument("--command", help="command name (default: first command)")
    enum.add_argument("--mode", choices=MODES, default="reach")
    enum.add_argument("--size", help="size N or range A..B (reach/baseline)")
    enum.add_argument("--format", choices=("scenario-doc", "text", "dot"),
                      default="scenario-doc")
    enum.add_argument("--timeout-ms", type=int)
    enum.add_argument("--dump-cnf", metavar="PATH")
    enum.add_argument("--dump-varmap", action="store_true")
    enum.add_argument("--solver-trace", metavar="PATH")
    enum.add_argument("--cache-dir")

    bench = sub.add_parser("bench", help="run the metrics harness")
    bench.add_argument("--models", required=True, help="model file or directory")
    bench.add_argument("--modes", default="reach,baseline,analyzer")
    bench.add_argument("--timeout-ms", type=int)
    bench.add_argument("--scope", type=int, help="override every command scope")
    bench.add_argument("--csv", metavar="PATH")
    bench.add_argument("--parallel", action="store_true",
                       help="run cells concurrently; timings not comparable")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--models", help="directory of .bsm files to preload")
    serve.add_argument("--cache-dir")
    serve.add_argument("--ui", action="store_true", help="serve the bundled explorer UI")
    return parser


def _load_model(path: str):
    try:
        with open(path) as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise _Abort(MODEL_ERROR)
    try:
        return source, resolve_model(parse_model(source))
    except ModelError as exc:
        print(f"{path}:{exc}", file=sys.stderr)
        raise _Abort(MODEL_ERROR)


def _pick_command(model, name):
    if name is None:
        if not model.commands:
            print("error: model declares no command", file=sys.stderr)
            raise _Abort(MODEL_ERROR)
        return model.commands[0]
    try:
        return model.command(name)
    except KeyError:
        print(f"error: no command named {name!r}", file=sys.stderr)
        raise _Abort(USAGE_ERROR)


def _parse_sizes(spec: str | None, scope: int) -> list[int]:
    if spec is None:
        return list(range(0, scope + 1))
    try:
        if ".." in spec:
            lo, hi = spec.split("..", 1)
            sizes = list(range(int(lo), int(hi) + 1))
        else:
            sizes = [int(spec)]
    except ValueError:
        print(f"error: bad --size {spec!r}", file=sys.stderr)
        raise _Abort(USAGE_ERROR)
    if not sizes or sizes[0] < 0 or sizes[-1] > scope:
        print(f"error: --size must lie within 0..{scope}", file=sys.stderr)
        raise _Abort(USAGE_ERROR)
    return sizes


def _cmd_check(args) -> int:
    _, model = _load_model(args.model)
    n_fields = len(model.fields_in_order())
    print(
        f"{len(model.sigs)} sigs, {n_fields} fields, {len(model.preds)} preds, "
        f"{len(model.commands)} commands"
    )
    for c in model.commands:
        print(f"  run {c.name} for {c.scope}")
    return 0


def _emit(scenario, model, fmt, out) -> None:
    if fmt == "scenario-doc":
        out.write(scenario.to_json() + "\n")
    elif fmt == "dot":
        out.write(scenario_dot(scenario, model))
    else:
        sigs = "; ".join(
            f"{name}={{{', '.join(atoms)}}}" for name, atoms in scenario.sigs.items()
        )
        fields = "; ".join(
            f"{name}={{{', '.join('(' + a + ',' + b + ')' for a, b in tuples)}}}"
            for name, tuples in scenario.fields.items()
        )
        phase = f" phase={scenario.phase}" if scenario.phase else ""
        out.write(f"scenario {scenario.ordinal} size={scenario.size}{phase}: {sigs} | {fields}\n")


def _cmd_enumerate(args) -> int:
    import time

    source, model = _load_model(args.model)
    command = _pick_command(model, args.command)

    if args.dump_varmap:
        size = _parse_sizes(args.size, command.scope)[-1] or command.scope
        universe = build_universe(model, size)
        sys.stdout.write(dump_varmap(allocate_primary_vars(model, universe)))
        return 0

    trace = None
    trace_fh = None
    if args.solver_trace:
        trace_fh = open(args.solver_trace, "w")
        trace = lambda line: trace_fh.write(line + "\n")  # noqa: E731

    if args.mode == "analyzer":
        if args.size is not None:
            print("error: analyzer mode enumerates the whole scope", file=sys.stderr)
            raise _Abort(USAGE_ERROR)
        runs = [(None, enumerate_analyzer_mode(model, command))]
    else:
        sizes = _parse_sizes(args.size, command.scope)
        if args.mode == "reach":
            runs = [(s, EnumerationSession(model, command, s, trace=trace)) for s in sizes]
        else:
            runs = [(s, enumerate_baseline(model, command, s)) for s in sizes]

    if args.dump_cnf:
        bound = command.scope if args.mode == "analyzer" else max(
            (s for s, _ in runs if s), default=command.scope
        )
        with open(args.dump_cnf, "w") as fh:
            fh.write(translate(model, command, bound or command.scope).to_dimacs())

    cache = None
    if args.cache_dir and args.mode == "reach":
        from .strategies import ScenarioCache, masked_source_hash

        cache = (ScenarioCache(args.cache_dir), masked_source_hash(source, command.name))

    started = time.perf_counter()
    code = 0
    try:
        for size, session in runs:
            count = 0
            collected = []
            while True:
                if args.timeout_ms is not None and (
                    time.perf_counter() - started
                ) * 1000 > args.timeout_ms:
                    print("timeout", file=sys.stderr)
                    return TIMEOUT
                scenario = session.next_scenario()
                if scenario is EXHAUSTED:
                    break
                count += 1
                collected.append(scenario)
                _emit(scenario, model, args.format, sys.stdout)
            if cache is not None and size is not None:
                store, model_hash = cache
                store.write(model_hash, command.name, size,
                            session.metrics(command.name), collected)
            label = f"size {size}" if size is not None else "scope"
            phases = getattr(session, "phase_counts", {})
            summary = ", ".join(f"{name} phase: {n}" for name, n in phases.items())
            print(
                f"{label}: {count} scenarios" + (f" ({summary})" if summary else ""),
                file=sys.stderr,
            )
    finally:
        if trace_fh is not None:
            trace_fh.close()
    return code


def _cmd_bench(args) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    for m in modes:
        if m not in MODES:
            print(f"error: unknown mode {m!r}", file=sys.stderr)
            raise _Abort(USAGE_ERROR)
    try:
        sources = discover_models(args.models)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise _Abort(USAGE_ERROR)
    try:
        records = bench_run(sources, modes, args.timeout_ms, args.scope,
                            parallel=args.parallel)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise _Abort(MODEL_ERROR)
    sys.stderr.write(
        "note: no symmetry breaking is applied; scenario counts at sizes >= 2 "
        "exceed published Analyzer figures\n"
    )
    if args.parallel:
        sys.stderr.write("note: parallel run; timing columns are not comparable\n")
    sys.stdout.write(emit_table(records))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(emit_csv(records))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        model_dir=args.models, cache_dir=args.cache_dir, serve_ui=args.ui
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def run_cli(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "check":
            return _cmd_check(args)
        if args.subcommand == "enumerate":
            return _cmd_enumerate(args)
        if args.subcommand == "bench":
            return _cmd_bench(args)
        return _cmd_serve(args)
    except _Abort as abort:
        return abort.code


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
