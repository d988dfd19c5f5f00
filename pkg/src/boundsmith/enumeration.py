"""Staged scenario generation: one enumeration per size, phased by signature.

A size-k session forces the active signature to cardinality k with unit
clauses on its membership variables (or, for abstract signatures, with an
appended size fact and a fresh translation), blocks every emitted assignment,
and advances to the next declared signature when the solver reports
unsatisfiable.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import sat
from .bounds import TupleTable
from .lang.ast import CardCmp, Command, Model, SigRef
from .lang.resolver import signature_order
from .metrics import MetricsRecord
from .semantics import satisfies
from .translate import translate


class _Exhausted:
    def __repr__(self) -> str:
        return "EXHAUSTED"


EXHAUSTED = _Exhausted()

# size_unit_clauses returns this marker for abstract signatures: their size
# must be forced with a relational fact, not unit clauses
ABSTRACT_SIZE_FACT = "abstract-size-fact"


@dataclass(frozen=True)
class Scenario:
    """A concrete assignment: atoms per signature, tuples per field."""

    size: int
    ordinal: int
    phase: str | None
    sigs: dict[str, tuple[str, ...]]
    fields: dict[str, tuple[tuple[str, str], ...]]

    def key(self):
        """Canonical identity, ignoring discovery order and phase."""
        return (
            tuple((name, atoms) for name, atoms in self.sigs.items()),
            tuple((name, tuples) for name, tuples in self.fields.items()),
        )

    def to_doc(self) -> dict:
        return {
            "size": self.size,
            "ordinal": self.ordinal,
            "phase": self.phase,
            "sigs": {name: list(atoms) for name, atoms in self.sigs.items()},
            "fields": {
                name: [list(t) for t in tuples] for name, tuples in self.fields.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), separators=(",", ":"))


def scenario_from_doc(doc: dict) -> Scenario:
    return Scenario(
        size=doc["size"],
        ordinal=doc["ordinal"],
        phase=doc.get("phase"),
        sigs={name: tuple(atoms) for name, atoms in doc["sigs"].items()},
        fields={
            name: tuple(tuple(t) for t in tuples)
            for name, tuples in doc["fields"].items()
        },
    )


def decode_scenario(
    assignment: dict[int, bool],
    table: TupleTable,
    phase: str | None,
    ordinal: int,
) -> Scenario:
    """Project a model onto the primary variables and read off the scenario.

    `one` signatures always hold their fixed atom; abstract signatures hold the
    union of their extensions.
    """
    model = table.model
    universe = table.universe
    atom_order = universe.index
    sigs: dict[str, tuple[str, ...]] = {}
    for s in model.sigs:
        if s.is_one:
            sigs[s.name] = (universe.atoms[s.name][0],)
        elif not s.is_abstract:
            atoms = [
                table.by_var[v][1][0]
                for v in table.per_sig_vars[s.name]
                if assignment[v]
            ]
            sigs[s.name] = tuple(sorted(atoms, key=atom_order.__getitem__))
    for s in reversed(model.sigs):
        if s.is_abstract:
            merged: set[str] = set()
            for ext in model.extensions_of(s.name):
                merged.update(sigs[ext.name])
            sigs[s.name] = tuple(sorted(merged, key=atom_order.__getitem__))
    sigs = {s.name: sigs[s.name] for s in model.sigs}
    fields: dict[str, tuple[tuple[str, str], ...]] = {}
    for owner, f in model.fields_in_order():
        tuples = []
        for (rel, atoms), v in table.entries.items():
            if rel == f.name and assignment[v]:
                tuples.append((atoms[0], atoms[1]))
        tuples.sort(key=lambda t: (atom_order[t[0]], atom_order[t[1]]))
        fields[f.name] = tuple(tuples)
    size = max((len(sigs[s.name]) for s in model.top_level()), default=0)
    return Scenario(size, ordinal, phase, sigs, fields)


def primary_assignment(scenario: Scenario, table: TupleTable) -> dict[int, bool]:
    """Reconstruct the primary-variable assignment a scenario decodes from."""
    out: dict[int, bool] = {}
    for var in range(1, table.num_primary + 1):
        rel, atoms = table.by_var[var]
        if len(atoms) == 1:
            out[var] = atoms[0] in scenario.sigs[rel]
        else:
            out[var] = (atoms[0], atoms[1]) in scenario.fields[rel]
    return out


def blocking_clause(scenario: Scenario, table: TupleTable) -> list[int]:
    """Disjunction falsified exactly by this scenario's primary assignment."""
    assignment = primary_assignment(scenario, table)
    return sat.blocking_of(assignment, table.num_primary)


def size_unit_clauses(sig_name: str, table: TupleTable):
    """Unit clauses forcing every membership variable of the signature, or the
    ABSTRACT_SIZE_FACT marker when the signature has no variables of its own."""
    model = table.model
    sig = model.sig(sig_name)
    if sig.is_one:
        raise ValueError(f"one sig {sig_name!r} has no size phase")
    if sig.is_abstract:
        return ABSTRACT_SIZE_FACT
    return [[v] for v in table.per_sig_vars[sig_name]]


def empty_scenario(model: Model) -> Scenario:
    sigs = {s.name: () for s in model.sigs}
    fields = {f.name: () for _, f in model.fields_in_order()}
    return Scenario(0, 0, None, sigs, fields)


class EnumerationSession:
    """One (command, size) enumeration; phases follow declaration order.

    At size 1, models with `one` signatures get a trailing phase for the
    scenarios whose size is established by the singletons alone (every
    non-singleton signature empty): staged phases cannot reach those because
    singleton signatures own no membership variables.
    """

    mode = "reach"

    def __init__(self, model: Model, command: Command, size: int, trace=None):
        if not model.resolved:
            raise ValueError("model must be resolved")
        if not 0 <= size <= command.scope:
            raise ValueError(f"size {size} outside 0..{command.scope}")
        self.model = model
        self.command = command
        self.size = size
        self.state = "running"
        self.ordinal = 0
        self.blockers: list[list[int]] = []
        self.phase_counts: dict[str, int] = {}
        self._solve_ms = 0.0
        self._trace = trace

        if size == 0:
            self.phases: list[str] = []
            self.table = None
            self.metrics_base = (0, 0, 0)
            self._pending_empty = not model.one_sigs() and satisfies(
                model,
                list(model.facts) + [command.body],
                {name: frozenset() for name in self._relation_names()},
                (),
            )
            return

        self.doc = translate(model, command, size)
        self.table = self.doc.table
        self.metrics_base = (self.doc.num_primary, self.doc.num_vars, self.doc.num_clauses)
        self.handle = sat.load_base(self.doc)
        if trace is not None:
            self.handle.trace = trace
        self._base_handle = self.handle
        self.phases = signature_order(model)
        if size == 1 and model.one_sigs():
            self.phases = self.phases + [model.one_sigs()[0].name]
        self.phase_index = 0
        if not self.phases:
            self.state = "exhausted"
            return
        self._enter_phase(0, fresh=True)

    def _relation_names(self):
        names = [s.name for s in self.model.sigs]
        names.extend(f.name for _, f in self.model.fields_in_order())
        return names

    @property
    def active_phase(self) -> str | None:
        if self.state == "exhausted" or not self.phases:
            return None
        return self.phases[self.phase_index]

    def _enter_phase(self, index: int, fresh: bool = False) -> None:
        self.phase_index = index
        name = self.phases[index]
        sig = self.model.sig(name)
        if sig.is_one:
            # trailing singleton phase: no size units; blockers exclude every
            # scenario where some staged signature reached the target size
            self.handle = self._base_handle
            self.handle.rebuild(keep=self.blockers)
            return
        units = size_unit_clauses(name, self.table)
        if units == ABSTRACT_SIZE_FACT:
            fact = CardCmp(SigRef(name), "=", self.size)
            doc = translate(
                self.model, self.command, self.size,
                extra_facts=(fact,), table=self.table,
            )
            self.handle = sat.load_base(doc)
            if self._trace is not None:
                self.handle.trace = self._trace
            for clause in self.blockers:
                self.handle.add_clause(clause, retractable=False)
            return
        self.handle = self._base_handle
        if not fresh:
            self.handle.rebuild(keep=self.blockers)
        for unit in units:
            self.handle.add_clause(unit, retractable=True)

    def next_scenario(self):
        """Emit the next scenario, advancing phases on unsatisfiability;
        EXHAUSTED is sticky."""
        if self.state == "exhausted":
            return EXHAUSTED
        started = time.perf_counter()
        if self.size == 0:
            self.state = "exhausted"
            if self._pending_empty:
                self.ordinal = 1
                self._solve_ms += (time.perf_counter() - started) * 1000
                return empty_scenario(self.model)
            return EXHAUSTED
        while True:
            result = self.handle.solve()
            if result.is_sat:
                scenario = decode_scenario(
                    result.assignment, self.table, self.phases[self.phase_index], self.ordinal
                )
                self.ordinal += 1
                blocker = blocking_clause(scenario, self.table)
                self.blockers.append(blocker)
                self.handle.add_clause(blocker, retractable=False)
                self.phase_counts[scenario.phase] = self.phase_counts.get(scenario.phase, 0) + 1
                self._solve_ms += (time.perf_counter() - started) * 1000
                return scenario
            if self.phase_index + 1 >= len(self.phases):
                self.state = "exhausted"
                self._solve_ms += (time.perf_counter() - started) * 1000
                return EXHAUSTED
            self._enter_phase(self.phase_index + 1)

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


def scenario_dot(scenario: Scenario, model: Model) -> str:
    """Graphviz rendering: one node shape per top-level signature, field
    tuples as labeled directed edges, an empty-set marker for size 0."""
    shapes = ["box", "ellipse", "diamond", "hexagon", "octagon", "trapezium"]
    top_shape = {
        s.name: shapes[i % len(shapes)] for i, s in enumerate(model.top_level())
    }
    lines = ["digraph scenario {"]
    any_atom = False
    for s in model.top_level():
        for a in scenario.sigs.get(s.name, ()):
            any_atom = True
            lines.append(f'  "{a}" [shape={top_shape[s.name]}, label="{a}"];')
    if not any_atom:
        lines.append('  empty [shape=plaintext, label="∅"];')
    for name, tuples in scenario.fields.items():
        for a, b in tuples:
            lines.append(f'  "{a}" -> "{b}" [label="{name}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
