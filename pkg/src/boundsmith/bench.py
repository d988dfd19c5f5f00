"""Benchmark harness: run every (model, mode, size) cell to exhaustion."""
from __future__ import annotations

import os

from .enumeration import EnumerationSession
from .lang.ast import Model
from .lang.parser import parse_model
from .lang.resolver import resolve_model
from .metrics import MetricsRecord
from .strategies import enumerate_analyzer_mode, enumerate_baseline, run_to_exhaustion

MODES = ("reach", "baseline", "analyzer")


def discover_models(path: str) -> list[tuple[str, str]]:
    """(name, source) pairs for each .bsm file; a file path is a single model."""
    if os.path.isfile(path):
        with open(path) as fh:
            return [(os.path.splitext(os.path.basename(path))[0], fh.read())]
    out = []
    for entry in sorted(os.listdir(path)):
        if entry.endswith(".bsm"):
            with open(os.path.join(path, entry)) as fh:
                out.append((os.path.splitext(entry)[0], fh.read()))
    return out


def bench_model(
    name: str,
    model: Model,
    modes,
    timeout_ms: int | None = None,
    scope_override: int | None = None,
) -> list[MetricsRecord]:
    command = model.commands[0]
    scope = scope_override if scope_override is not None else command.scope
    records: list[MetricsRecord] = []
    for mode in modes:
        if mode == "analyzer":
            session = enumerate_analyzer_mode(model, command)
            _, timed_out = run_to_exhaustion(session, timeout_ms)
            rec = session.metrics(name)
            rec.timed_out, rec.timeout_ms = timed_out, timeout_ms
            records.append(rec)
            continue
        for size in range(0, scope + 1):
            if mode == "reach":
                session = EnumerationSession(model, command, size)
            else:
                session = enumerate_baseline(model, command, size)
            _, timed_out = run_to_exhaustion(session, timeout_ms)
            rec = session.metrics(name)
            rec.timed_out, rec.timeout_ms = timed_out, timeout_ms
            records.append(rec)
    return records


def bench_run(
    sources: list[tuple[str, str]],
    modes=MODES,
    timeout_ms: int | None = None,
    scope_override: int | None = None,
    parallel: bool = False,
) -> list[MetricsRecord]:
    """Sizes with zero scenarios are kept in the output; presentation layers
    may filter them.  Sequential by default for timing fidelity; parallel runs
    interleave cells, so their timings are not comparable."""
    jobs = []
    for name, source in sources:
        model = resolve_model(parse_model(source))
        if model.commands:
            jobs.append((name, model))
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as pool:
            chunks = pool.map(
                lambda job: bench_model(job[0], job[1], modes, timeout_ms, scope_override),
                jobs,
            )
            records = [r for chunk in chunks for r in chunk]
    else:
        records = [
            r
            for name, model in jobs
            for r in bench_model(name, model, modes, timeout_ms, scope_override)
        ]
    records.sort(key=MetricsRecord.sort_key)
    return records
