"""The three enumeration modes and the iterative-deepening manager.

* analyzer mode: one translation at the full command scope, plain
  blocking-clause all-SAT, scenario sizes in solver order.
* baseline mode: the command body is conjoined with relational cardinality
  formulas that pin the target size; translation happens at the target-size
  bound, so its primary variables match reach's while the appended formulas
  make the clause set slightly larger.
* reach mode: the staged EnumerationSession.

Deepening reuses completed sizes from an on-disk cache keyed by a model hash
computed with the command's scope token masked out, so scope-only edits hit
the cache.
"""
from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, replace

from . import sat
from .enumeration import (
    EXHAUSTED, EnumerationSession, Scenario, decode_scenario, empty_scenario,
    scenario_from_doc,
)
from .lang.ast import And, CardCmp, Command, Formula, Model, NoneSet, Or, SigRef
from .lang.parser import parse_model
from .lang.resolver import resolve_model
from .metrics import MetricsRecord, metrics_from_doc
from .semantics import satisfies
from .translate import translate

FALSE_FORMULA: Formula = CardCmp(NoneSet(), ">=", 1)


class StaleStateError(Exception):
    """The deepening state no longer matches the model text."""


class _BlockingSession:
    """Plain all-SAT loop with duplicate blocking; no phases."""

    def __init__(self, model: Model, command: Command, bound: int, mode: str, size):
        self.model = model
        self.command = command
        self.mode = mode
        self.size = size
        self.state = "running"
        self.ordinal = 0
        self.phase_counts: dict = {}
        self._solve_ms = 0.0
        self.doc = translate(model, command, bound)
        self.table = self.doc.table
        self.metrics_base = (self.doc.num_primary, self.doc.num_vars, self.doc.num_clauses)
        self.handle = sat.load_base(self.doc)

    def next_scenario(self):
        if self.state == "exhausted":
            return EXHAUSTED
        started = time.perf_counter()
        result = self.handle.solve()
        if not result.is_sat:
            self.state = "exhausted"
            self._solve_ms += (time.perf_counter() - started) * 1000
            return EXHAUSTED
        scenario = decode_scenario(result.assignment, self.table, None, self.ordinal)
        self.ordinal += 1
        self.handle.add_clause(
            sat.blocking_of(result.assignment, self.table.num_primary)
        )
        self._solve_ms += (time.perf_counter() - started) * 1000
        return scenario

    def metrics(self, model_name: str = "") -> MetricsRecord:
        pv, nv, nc = self.metrics_base
        total = int(self._solve_ms)
        return MetricsRecord(
            model=model_name,
            mode=self.mode,
            size=self.size,
            num_primary=pv,
            num_vars=nv,
            num_clauses=nc,
            num_scenarios=self.ordinal,
            avg_ms=total // max(self.ordinal, 1),
            total_ms=total,
        )


class _EmptyCheckSession:
    """Size-0 special case shared by baseline mode: no SAT involvement."""

    def __init__(self, model: Model, command: Command, mode: str):
        self.model = model
        self.command = command
        self.mode = mode
        self.size = 0
        self.state = "running"
        self.ordinal = 0
        self.phase_counts: dict = {}
        self.metrics_base = (0, 0, 0)
        self._solve_ms = 0.0
        names = {s.name: frozenset() for s in model.sigs}
        names.update({f.name: frozenset() for _, f in model.fields_in_order()})
        self._pending = not model.one_sigs() and satisfies(
            model, list(model.facts) + [command.body], names, ()
        )

    def next_scenario(self):
        if self.state == "exhausted":
            return EXHAUSTED
        self.state = "exhausted"
        if self._pending:
            self.ordinal = 1
            return empty_scenario(self.model)
        return EXHAUSTED

    metrics = _BlockingSession.metrics


def enumerate_analyzer_mode(model: Model, command: Command) -> _BlockingSession:
    """Whole-scope enumeration: sizes arrive in solver-determined order."""
    return _BlockingSession(model, command, command.scope, "analyzer", None)


def baseline_augment(model: Model, command: Command, k: int) -> Command:
    """Conjoin the size-pinning template: some top-level signature has
    cardinality exactly k, every one has at most k."""
    if k < 1:
        raise ValueError("baseline augmentation needs k >= 1")
    tops = [s for s in model.top_level() if not s.is_one]
    conjuncts: list[Formula] = [command.body]
    if tops:
        exact = [CardCmp(SigRef(s.name), "=", k) for s in tops]
        if not (k == 1 and model.one_sigs()):
            # at size 1 a singleton signature already establishes the size
            conjuncts.append(exact[0] if len(exact) == 1 else Or(tuple(exact)))
        conjuncts.extend(CardCmp(SigRef(s.name), "<=", k) for s in tops)
    elif not model.one_sigs() or k > 1:
        conjuncts.append(FALSE_FORMULA)
    return replace(command, body=And(tuple(conjuncts)))


def enumerate_baseline(model: Model, command: Command, k: int):
    """Size enforced with relational cardinality formulas instead of units."""
    if k == 0:
        return _EmptyCheckSession(model, command, "baseline")
    augmented = baseline_augment(model, command, k)
    return _BlockingSession(model, augmented, k, "baseline", k)


def open_session(model: Model, command: Command, k: int) -> EnumerationSession:
    return EnumerationSession(model, command, k)


def run_to_exhaustion(session, timeout_ms: int | None = None):
    """Drain a session; returns (scenarios, timed_out)."""
    scenarios: list[Scenario] = []
    started = time.perf_counter()
    while True:
        item = session.next_scenario()
        if item is EXHAUSTED:
            return scenarios, False
        scenarios.append(item)
        if timeout_ms is not None and (time.perf_counter() - started) * 1000 > timeout_ms:
            return scenarios, True


# ------------------------------------------------------------------ deepening

def masked_source_hash(source: str, command_name: str) -> str:
    """Hash of the model text with the command's scope token blanked, so a
    scope-only edit maps to the same key."""
    model = parse_model(source)
    for c in model.commands:
        if c.name == command_name:
            lo, hi = c.scope_span
            masked = source[:lo] + "_" * (hi - lo) + source[hi:]
            return hashlib.sha256(masked.encode()).hexdigest()[:16]
    raise KeyError(f"no command named {command_name!r}")


class ScenarioCache:
    """Append-only store: <dir>/<model-hash>/<command>/<size>.scen + .meta."""

    def __init__(self, root: str):
        self.root = root

    def _dir(self, model_hash: str, command: str) -> str:
        return os.path.join(self.root, model_hash, command)

    def meta_path(self, model_hash: str, command: str, size: int) -> str:
        return os.path.join(self._dir(model_hash, command), f"{size}.meta")

    def scen_path(self, model_hash: str, command: str, size: int) -> str:
        return os.path.join(self._dir(model_hash, command), f"{size}.scen")

    def completed_sizes(self, model_hash: str, command: str) -> set[int]:
        try:
            names = os.listdir(self._dir(model_hash, command))
        except FileNotFoundError:
            return set()
        return {int(n[: -len(".meta")]) for n in names if n.endswith(".meta")}

    def read_meta(self, model_hash: str, command: str, size: int) -> MetricsRecord:
        with open(self.meta_path(model_hash, command, size)) as fh:
            return metrics_from_doc(json.load(fh))

    def read_scenarios(self, model_hash: str, command: str, size: int) -> list[Scenario]:
        path = self.scen_path(model_hash, command, size)
        with open(path) as fh:
            return [scenario_from_doc(json.loads(line)) for line in fh if line.strip()]

    def has_scenarios(self, model_hash: str, command: str, size: int) -> bool:
        return os.path.exists(self.scen_path(model_hash, command, size))

    def write(
        self,
        model_hash: str,
        command: str,
        size: int,
        metrics: MetricsRecord,
        scenarios: list[Scenario] | None = None,
    ) -> None:
        """Atomic write-then-rename; scenario storage is opt-in."""
        directory = self._dir(model_hash, command)
        os.makedirs(directory, exist_ok=True)
        if scenarios is not None:
            tmp = self.scen_path(model_hash, command, size) + ".tmp"
            with open(tmp, "w") as fh:
                for s in scenarios:
                    fh.write(s.to_json() + "\n")
            os.replace(tmp, self.scen_path(model_hash, command, size))
        tmp = self.meta_path(model_hash, command, size) + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(metrics.to_doc(), fh)
        os.replace(tmp, self.meta_path(model_hash, command, size))


class CachedReplay:
    """Session-shaped replay of a completed enumeration from the cache."""

    mode = "reach"

    def __init__(self, scenarios: list[Scenario], metrics: MetricsRecord, size: int):
        self._items = list(scenarios)
        self._metrics = metrics
        self._next = 0
        self.size = size
        self.state = "running"
        self.ordinal = 0
        self.phase_counts: dict = {}

    def next_scenario(self):
        if self._next >= len(self._items):
            self.state = "exhausted"
            return EXHAUSTED
        item = self._items[self._next]
        self._next += 1
        self.ordinal += 1
        if item.phase is not None:
            self.phase_counts[item.phase] = self.phase_counts.get(item.phase, 0) + 1
        return item

    def metrics(self, model_name: str = "") -> MetricsRecord:
        return self._metrics


@dataclass
class DeepeningState:
    """Tracks which sizes of one command are already enumerated."""

    source: str
    model: Model
    command: Command
    model_hash: str
    cache: ScenarioCache
    store_scenarios: bool = True

    @staticmethod
    def open(
        source: str, command_name: str, cache_dir: str, store_scenarios: bool = True
    ) -> "DeepeningState":
        model = resolve_model(parse_model(source))
        command = model.command(command_name)
        return DeepeningState(
            source=source,
            model=model,
            command=command,
            model_hash=masked_source_hash(source, command_name),
            cache=ScenarioCache(cache_dir),
            store_scenarios=store_scenarios,
        )

    def verify(self, current_source: str) -> None:
        if masked_source_hash(current_source, self.command.name) != self.model_hash:
            raise StaleStateError(
                "model text changed beyond its scope; restart enumeration from scratch"
            )

    def completed_sizes(self) -> set[int]:
        return self.cache.completed_sizes(self.model_hash, self.command.name)

    def cached_session(self, size: int) -> CachedReplay:
        scenarios = self.cache.read_scenarios(self.model_hash, self.command.name, size)
        metrics = self.cache.read_meta(self.model_hash, self.command.name, size)
        return CachedReplay(scenarios, metrics, size)

    def deepen(self, new_scope: int, current_source: str | None = None):
        """Sessions for exactly the sizes above the completed ones."""
        if current_source is not None:
            self.verify(current_source)
        done = self.completed_sizes()
        start = max(done) + 1 if done else 0
        command = replace(self.command, scope=max(new_scope, self.command.scope))
        return [
            EnumerationSession(self.model, command, size)
            for size in range(start, new_scope + 1)
        ]

    def record(self, session, scenarios: list[Scenario]) -> None:
        """Persist a finished session's results for future reuse."""
        if session.state != "exhausted":
            raise ValueError("only exhausted sessions can be cached")
        self.cache.write(
            self.model_hash,
            self.command.name,
            session.size,
            session.metrics(self.command.name),
            scenarios if self.store_scenarios else None,
        )
