"""Complete, deterministic CDCL SAT engine with a retract/rebuild contract.

Decisions always pick the lowest-index unassigned variable, negative polarity
first, so sparser assignments are found before denser ones and repeated runs
over the same clause transcript are bit-identical.  Restarts are disabled;
first-UIP learned clauses persist across solve calls until a rebuild.
"""
from __future__ import annotations

from dataclasses import dataclass

_solve_calls = 0


def solve_call_count() -> int:
    """Process-wide number of solve() invocations (used to verify cache reuse)."""
    return _solve_calls


@dataclass
class SolveResult:
    status: str  # "SAT" | "UNSAT"
    assignment: dict[int, bool] | None = None

    @property
    def is_sat(self) -> bool:
        return self.status == "SAT"


class _Clause:
    __slots__ = ("lits",)

    def __init__(self, lits: list[int]):
        self.lits = lits


def _normalize(lits) -> list[int] | None:
    """Drop duplicate literals; None for tautologies."""
    out: list[int] = []
    seen: set[int] = set()
    for l in lits:
        if -l in seen:
            return None
        if l not in seen:
            seen.add(l)
            out.append(l)
    return out


class SolverHandle:
    def __init__(self, num_vars: int, base_clauses=()):
        self.num_vars = num_vars
        self.base: list[list[int]] = []
        self.trace = None  # optional callable(str)
        self._persistent: list[list[int]] = []
        self._retractable: list[list[int]] = []
        self._reset_db()
        for c in base_clauses:
            self._check(c)
            self.base.append(list(c))
            self._install(c)

    # ------------------------------------------------------------- clause db
    def _reset_db(self) -> None:
        self.clauses: list[_Clause] = []
        self.units: list[int] = []
        self.has_empty = False
        self.watches: dict[int, list[_Clause]] = {}

    def _check(self, lits) -> None:
        for l in lits:
            if l == 0 or abs(l) > self.num_vars:
                raise ValueError(f"unknown variable in literal {l}")

    def _install(self, lits) -> None:
        norm = _normalize(lits)
        if norm is None:
            return  # tautology never constrains
        if not norm:
            self.has_empty = True
        elif len(norm) == 1:
            self.units.append(norm[0])
        else:
            self._watch(_Clause(norm))

    def _watch(self, clause: _Clause) -> None:
        self.clauses.append(clause)
        self.watches.setdefault(clause.lits[0], []).append(clause)
        self.watches.setdefault(clause.lits[1], []).append(clause)

    def add_clause(self, lits, retractable: bool = False) -> None:
        """Add a clause active until a rebuild drops the retractable ones."""
        self._check(lits)
        if retractable:
            self._retractable.append(list(lits))
        else:
            self._persistent.append(list(lits))
        self._install(lits)

    def rebuild(self, keep=()) -> None:
        """Drop retractable and learned clauses; re-add base plus `keep`."""
        self._reset_db()
        self._persistent = [list(c) for c in keep]
        self._retractable = []
        for c in self.base:
            self._install(c)
        for c in self._persistent:
            self._check(c)
            self._install(c)

    # ---------------------------------------------------------------- search
    def solve(self) -> SolveResult:
        global _solve_calls
        _solve_calls += 1
        if self.has_empty:
            return SolveResult("UNSAT")
        n = self.num_vars
        self.assign = [0] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason: list[_Clause | None] = [None] * (n + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0

        for u in self.units:
            val = self.assign[abs(u)]
            if val == 0:
                self._enqueue(u, None)
            elif (val > 0) != (u > 0):
                self._trace(f"conflict unit {u}")
                return SolveResult("UNSAT")
        if self._propagate() is not None:
            return SolveResult("UNSAT")

        while True:
            var = self._pick()
            if var == 0:
                model = {v: self.assign[v] > 0 for v in range(1, n + 1)}
                return SolveResult("SAT", model)
            self.trail_lim.append(len(self.trail))
            self._trace(f"decision {-var}")
            self._enqueue(-var, None)  # negative polarity first
            conflict = self._propagate()
            while conflict is not None:
                if not self.trail_lim:
                    self._trace("conflict at-root")
                    return SolveResult("UNSAT")
                learned, back = self._analyze(conflict)
                self._trace(f"learn {' '.join(map(str, learned))}")
                self._backtrack(back)
                if len(learned) == 1:
                    self.units.append(learned[0])
                    self._enqueue(learned[0], None)
                else:
                    clause = _Clause(learned)
                    self._watch(clause)
                    self._enqueue(learned[0], clause)
                conflict = self._propagate()

    def _pick(self) -> int:
        for v in range(1, self.num_vars + 1):
            if self.assign[v] == 0:
                return v
        return 0

    def _value(self, lit: int) -> int:
        val = self.assign[abs(lit)]
        return val if lit > 0 else -val

    def _enqueue(self, lit: int, reason: _Clause | None) -> None:
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        if reason is not None:
            self._trace(f"propagate {lit}")

    def _propagate(self) -> _Clause | None:
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            watchers = self.watches.get(false_lit)
            if not watchers:
                continue
            kept: list[_Clause] = []
            i = 0
            while i < len(watchers):
                clause = watchers[i]
                i += 1
                lits = clause.lits
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], lits[0]
                first = lits[0]
                if self._value(first) > 0:
                    kept.append(clause)
                    continue
                moved = False
                for j in range(2, len(lits)):
                    if self._value(lits[j]) >= 0:
                        lits[1], lits[j] = lits[j], lits[1]
                        self.watches.setdefault(lits[1], []).append(clause)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(clause)
                if self._value(first) < 0:
                    kept.extend(watchers[i:])
                    self.watches[false_lit] = kept
                    self._trace(f"conflict {' '.join(map(str, lits))}")
                    return clause
                self._enqueue(first, clause)
            self.watches[false_lit] = kept
        return None

    def _analyze(self, conflict: _Clause) -> tuple[list[int], int]:
        """First-UIP conflict analysis; returns (learned lits, backjump level)
        with the asserting literal first."""
        current = len(self.trail_lim)
        seen = [False] * (self.num_vars + 1)
        learned: list[int] = []
        path = 0
        p = 0
        reason_lits = conflict.lits
        index = len(self.trail) - 1
        while True:
            for q in reason_lits:
                if q == p:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    if self.level[v] >= current:
                        path += 1
                    else:
                        learned.append(q)
            while not seen[abs(self.trail[index])]:
                index -= 1
            p = self.trail[index]
            index -= 1
            seen[abs(p)] = False
            path -= 1
            if path == 0:
                break
            reason = self.reason[abs(p)]
            assert reason is not None
            reason_lits = reason.lits
        lits = [-p] + learned
        if len(lits) == 1:
            return lits, 0
        # put the highest-level remaining literal second for watching
        levels = [self.level[abs(q)] for q in lits[1:]]
        best = max(range(len(levels)), key=lambda idx: levels[idx])
        lits[1], lits[1 + best] = lits[1 + best], lits[1]
        return lits, levels[best]

    def _backtrack(self, level: int) -> None:
        if level >= len(self.trail_lim):
            return
        limit = self.trail_lim[level]
        for lit in self.trail[limit:]:
            self.assign[abs(lit)] = 0
        del self.trail[limit:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _trace(self, line: str) -> None:
        if self.trace is not None:
            self.trace(line)

    # ------------------------------------------------------------- utilities
    def check_model(self, model: dict[int, bool]) -> bool:
        """Direct evaluation of every active clause under a model."""
        if self.has_empty:
            return False
        groups = [self.units] + [c.lits for c in self.clauses]
        return all(
            any(model[abs(l)] == (l > 0) for l in lits) for lits in groups if lits
        )


def load_base(cnf) -> SolverHandle:
    """Prime a solver with a translated document; the base survives rebuilds."""
    return SolverHandle(cnf.num_vars, cnf.clauses)


def blocking_of(assignment: dict[int, bool], num_primary: int) -> list[int]:
    """The clause falsified exactly by this assignment's primary prefix."""
    return [-v if assignment[v] else v for v in range(1, num_primary + 1)]
