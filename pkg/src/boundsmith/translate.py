"""Grounding of resolved models over a bounded universe into CNF.

Relational expressions become sparse boolean matrices over the global atom
universe (absent cells are constant false); formulas become circuit nodes;
plain Tseitin turns the circuit into clauses.  Top-level cardinality conjuncts
are routed through the dedicated clause-level encodings, nested ones through a
counting network in the circuit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import TupleTable, allocate_primary_vars, build_universe, pool_of
from .cardinality import VarAllocator, encode_card_literals
from .circuit import FALSE, TRUE, CircuitBuilder, count_at_least, tseitin
from .lang.ast import (
    And, Binary, CardCmp, Command, Compare, Expr, FieldRef, Formula, Iff,
    Implies, Model, NoneSet, Not, Or, PredCall, Quant, SigRef, Unary, VarRef,
)

Matrix = dict[tuple[int, ...], int]  # index tuple -> circuit ref


@dataclass
class CnfDocument:
    """DIMACS-ready clause list; primary variables occupy 1..num_primary."""

    num_vars: int
    num_primary: int
    clauses: list[list[int]]
    table: TupleTable

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.append(f"c primary 1..{self.num_primary}")
        for var in range(1, self.num_primary + 1):
            rel, atoms = self.table.by_var[var]
            lines.append(f"c var {var} {rel} {','.join(atoms)}")
        for clause in self.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
        return "\n".join(lines) + "\n"


def implicit_facts(model: Model) -> list[Formula]:
    """Facts the declarations imply: field multiplicities, singleton sizes,
    then inheritance (extension containment, sibling disjointness, abstract
    signatures equal the union of their extensions)."""
    facts: list[Formula] = []
    for owner, f in model.fields_in_order():
        if f.mult == "set":
            continue
        op = {"lone": "<=", "one": "=", "some": ">="}[f.mult]
        joined = Binary(".", VarRef("x"), FieldRef(f.name))
        facts.append(Quant("all", "x", SigRef(owner.name), CardCmp(joined, op, 1)))
    for s in model.sigs:
        if s.is_one:
            facts.append(CardCmp(SigRef(s.name), "=", 1))
    for s in model.sigs:
        if s.parent is not None:
            facts.append(Compare("in", SigRef(s.name), SigRef(s.parent)))
    for parent in model.sigs:
        exts = model.extensions_of(parent.name)
        for i in range(len(exts)):
            for j in range(i + 1, len(exts)):
                both = Binary("&", SigRef(exts[i].name), SigRef(exts[j].name))
                facts.append(Compare("in", both, NoneSet()))
        if parent.is_abstract:
            if not exts:
                facts.append(Compare("in", SigRef(parent.name), NoneSet()))
            else:
                union: Expr = SigRef(exts[0].name)
                for e in exts[1:]:
                    union = Binary("+", union, SigRef(e.name))
                facts.append(Compare("=", SigRef(parent.name), union))
    return facts


def typing_facts(model: Model) -> list[Formula]:
    """Every field lives inside owner -> target."""
    return [
        Compare("in", FieldRef(f.name), Binary("->", SigRef(owner.name), SigRef(f.target)))
        for owner, f in model.fields_in_order()
    ]


def constraint_formulas(
    model: Model, command: Command, extra_facts: tuple[Formula, ...] = ()
) -> list[Formula]:
    """Everything a scenario must satisfy, in a fixed order."""
    out = typing_facts(model)
    out.extend(implicit_facts(model))
    out.extend(model.facts)
    out.append(command.body)
    out.extend(extra_facts)
    return out


def _flatten_and(formulas) -> list[Formula]:
    out: list[Formula] = []
    for f in formulas:
        if isinstance(f, And):
            out.extend(_flatten_and(f.items))
        else:
            out.append(f)
    return out


class Grounder:
    def __init__(self, model: Model, table: TupleTable):
        self.model = model
        self.table = table
        self.universe = table.universe
        self.builder = CircuitBuilder()
        self._sig_cache: dict[str, Matrix] = {}
        self._pred_cache: dict[str, int] = {}

    # ------------------------------------------------------------- matrices
    def sig_matrix(self, name: str) -> Matrix:
        cached = self._sig_cache.get(name)
        if cached is not None:
            return cached
        sig = self.model.sig(name)
        idx = self.universe.index
        m: Matrix = {}
        if sig.is_one:
            atom = self.universe.atoms[name][0]
            m[(idx[atom],)] = TRUE
        elif sig.is_abstract:
            for ext in self.model.extensions_of(name):
                m = self._union(m, self.sig_matrix(ext.name))
        else:
            for var, atom in zip(
                self.table.per_sig_vars[name], pool_of(self.model, self.universe, name)
            ):
                m[(idx[atom],)] = self.builder.var(var)
        self._sig_cache[name] = m
        return m

    def field_matrix(self, name: str) -> Matrix:
        owner = self.model.field_owner(name)
        decl = self.model.field_decl(name)
        idx = self.universe.index
        m: Matrix = {}
        for a in pool_of(self.model, self.universe, owner.name):
            for b in pool_of(self.model, self.universe, decl.target):
                m[(idx[a], idx[b])] = self.builder.var(self.table.var_for(name, (a, b)))
        return m

    def expr(self, e: Expr, env: dict[str, int]) -> Matrix:
        b = self.builder
        if isinstance(e, SigRef):
            return dict(self.sig_matrix(e.name))
        if isinstance(e, FieldRef):
            return self.field_matrix(e.name)
        if isinstance(e, VarRef):
            return {(env[e.name],): TRUE}
        if isinstance(e, NoneSet):
            return {}
        if isinstance(e, Unary):
            m = self.expr(e.operand, env)
            if e.op == "~":
                return {(j, i): v for (i, j), v in m.items()}
            closed = self._closure(m)
            if e.op == "*":
                iden = {(i, i): TRUE for i in range(len(self.universe.all_atoms))}
                return self._union(closed, iden)
            return closed
        if isinstance(e, Binary):
            left = self.expr(e.left, env)
            right = self.expr(e.right, env)
            if e.op == "+":
                return self._union(left, right)
            if e.op == "&":
                out: Matrix = {}
                for key in sorted(left.keys() & right.keys()):
                    v = b.mk_and((left[key], right[key]))
                    if v != FALSE:
                        out[key] = v
                return out
            if e.op == "-":
                out = {}
                for key in sorted(left):
                    v = b.mk_and((left[key], -right.get(key, FALSE)))
                    if v != FALSE:
                        out[key] = v
                return out
            if e.op == "->":
                out = {}
                for lk in sorted(left):
                    for rk in sorted(right):
                        v = b.mk_and((left[lk], right[rk]))
                        if v != FALSE:
                            out[lk + rk] = v
                return out
            if e.op == ".":
                return self._join(left, right)
        raise TypeError(f"cannot ground {e!r}")

    def _union(self, left: Matrix, right: Matrix) -> Matrix:
        out: Matrix = {}
        for key in sorted(left.keys() | right.keys()):
            v = self.builder.mk_or((left.get(key, FALSE), right.get(key, FALSE)))
            if v != FALSE:
                out[key] = v
        return out

    def _join(self, left: Matrix, right: Matrix) -> Matrix:
        by_head: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        for rk in sorted(right):
            by_head.setdefault(rk[0], []).append((rk[1:], right[rk]))
        terms: dict[tuple[int, ...], list[int]] = {}
        for lk in sorted(left):
            for tail, rv in by_head.get(lk[-1], ()):
                v = self.builder.mk_and((left[lk], rv))
                if v != FALSE:
                    terms.setdefault(lk[:-1] + tail, []).append(v)
        out: Matrix = {}
        for key in sorted(terms):
            v = self.builder.mk_or(terms[key])
            if v != FALSE:
                out[key] = v
        return out

    def _closure(self, m: Matrix) -> Matrix:
        size = len(self.universe.all_atoms)
        rounds = max(0, math.ceil(math.log2(size))) if size > 1 else 0
        acc = dict(m)
        for _ in range(rounds):
            acc = self._union(acc, self._join(acc, acc))
        return acc

    # -------------------------------------------------------------- formulas
    def formula(self, f: Formula, env: dict[str, int]) -> int:
        b = self.builder
        if isinstance(f, And):
            return b.mk_and(self.formula(i, env) for i in f.items)
        if isinstance(f, Or):
            return b.mk_or(self.formula(i, env) for i in f.items)
        if isinstance(f, Not):
            return -self.formula(f.item, env)
        if isinstance(f, Implies):
            return b.mk_implies(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, Iff):
            return b.mk_iff(self.formula(f.left, env), self.formula(f.right, env))
        if isinstance(f, Quant):
            domain = self.expr(f.domain, env)
            items = []
            for key in sorted(domain):
                cond = domain[key]
                inner = dict(env)
                inner[f.var] = key[0]
                body = self.formula(f.body, inner)
                if f.kind == "all":
                    items.append(b.mk_or((-cond, body)))
                else:
                    items.append(b.mk_and((cond, body)))
            if f.kind == "all":
                return b.mk_and(items)
            some = b.mk_or(items)
            return -some if f.kind == "no" else some
        if isinstance(f, Compare):
            left = self.expr(f.left, env)
            right = self.expr(f.right, env)
            if f.op in ("in", "!in"):
                sub = self._subset(left, right)
                return -sub if f.op == "!in" else sub
            eq = b.mk_and((self._subset(left, right), self._subset(right, left)))
            return -eq if f.op == "!=" else eq
        if isinstance(f, CardCmp):
            cells, base = self.card_cells(f.expr, env)
            return self.card_node(cells, base, f.op, f.bound)
        if isinstance(f, PredCall):
            ref = self._pred_cache.get(f.name)
            if ref is None:
                ref = self.formula(self.model.preds[f.name], {})
                self._pred_cache[f.name] = ref
            return ref
        raise TypeError(f"cannot ground {f!r}")

    def _subset(self, left: Matrix, right: Matrix) -> int:
        items = [
            self.builder.mk_or((-left[key], right.get(key, FALSE)))
            for key in sorted(left)
        ]
        return self.builder.mk_and(items)

    def card_cells(self, e: Expr, env: dict[str, int]) -> tuple[list[int], int]:
        """Non-constant cell refs of e plus the count of constant-true cells."""
        m = self.expr(e, env)
        cells, base = [], 0
        for key in sorted(m):
            if m[key] == TRUE:
                base += 1
            elif m[key] != FALSE:
                cells.append(m[key])
        return cells, base

    def card_node(self, cells: list[int], base: int, op: str, bound: int) -> int:
        op, bound = _normalize_card(op, bound)
        if bound < 0:
            return FALSE
        b = self.builder
        n = len(cells)
        need_ge = bound - base  # at least this many non-constant cells true
        if op in ("=", ">="):
            if need_ge > n:
                return FALSE
        at_least = TRUE
        if op in ("=", ">=") and need_ge > 0:
            at_least = count_at_least(b, cells, need_ge)[need_ge - 1]
        if op == ">=":
            return at_least
        # remaining ops need an upper bound: at most (bound - base) cells true
        cap = bound - base
        if cap < 0:
            return FALSE
        at_most = TRUE
        if cap < n:
            ge = count_at_least(b, cells, cap + 1)
            at_most = -ge[cap]
        if op == "<=":
            return at_most
        return b.mk_and((at_least, at_most))


def _normalize_card(op: str, bound: int) -> tuple[str, int]:
    if op == "<":
        return "<=", bound - 1
    if op == ">":
        return ">=", bound + 1
    return op, bound


def translate(
    model: Model,
    command: Command,
    k: int,
    extra_facts: tuple[Formula, ...] = (),
    table: TupleTable | None = None,
) -> CnfDocument:
    """Ground the command plus all facts at bound k into an equisatisfiable CNF.

    A formula that folds to constant false is reported as a CNF containing the
    empty clause.  extra_facts supports the appended size facts used for
    abstract-signature phases and baseline augmentation.
    """
    if not model.resolved:
        raise ValueError("model must be resolved before translation")
    if table is None:
        universe = build_universe(model, k)
        table = allocate_primary_vars(model, universe)
    g = Grounder(model, table)
    conjuncts = _flatten_and(constraint_formulas(model, command, extra_facts))

    roots: list[int] = []
    top_cards: list[tuple[list[int], int, str, int]] = []
    for c in conjuncts:
        if isinstance(c, CardCmp):
            op, bound = _normalize_card(c.op, c.bound)
            if bound < 0:
                roots.append(FALSE)
                continue
            cells, base = g.card_cells(c.expr, {})
            top_cards.append((cells, base, op, bound))
        else:
            roots.append(g.formula(c, {}))

    extra_nodes = [ref for cells, _, _, _ in top_cards for ref in cells]
    clauses, lit_of, num_vars = tseitin(g.builder, table.num_primary, roots, extra_nodes)

    def lit(ref: int) -> int:
        return lit_of[ref] if ref > 0 else -lit_of[-ref]

    alloc = VarAllocator(num_vars)
    for cells, base, op, bound in top_cards:
        lits = [lit(ref) for ref in cells]
        n = len(lits)
        if op in ("<=", "="):
            cap = bound - base
            if cap < 0:
                clauses.append([])
                continue
            clauses.extend(encode_card_literals(lits, "<=", cap, alloc) if cap < n else [])
        if op in (">=", "="):
            need = bound - base
            if need > n:
                clauses.append([])
            elif need > 0:
                clauses.extend(encode_card_literals(lits, ">=", need, alloc))
    return CnfDocument(alloc.num_vars, table.num_primary, clauses, table)
