"""Boolean circuits with eager constant folding and plain Tseitin CNF export.

Nodes are signed integer references into a builder-owned table: negation is
sign flip, `1` is the constant true (so `-1` is false).  Gates are hash-consed,
which keeps reference assignment deterministic for a deterministic build order.
"""
from __future__ import annotations

TRUE = 1
FALSE = -1


class CircuitBuilder:
    def __init__(self) -> None:
        # table[i] is ("const",), ("var", v), ("and", children) or ("or", children)
        self.table: list[tuple] = [("pad",), ("const",)]
        self.interned: dict[tuple, int] = {}

    def node(self, ref: int) -> tuple:
        return self.table[abs(ref)]

    def var(self, v: int) -> int:
        return self._intern(("var", v))

    def mk_not(self, ref: int) -> int:
        return -ref

    def mk_and(self, children) -> int:
        out: list[int] = []
        seen: set[int] = set()
        for c in children:
            if c == FALSE:
                return FALSE
            if c == TRUE:
                continue
            # flatten nested positive conjunctions
            if c > 0 and self.table[c][0] == "and":
                grand = self.table[c][1]
            else:
                grand = (c,)
            for g in grand:
                if -g in seen:
                    return FALSE
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        if not out:
            return TRUE
        if len(out) == 1:
            return out[0]
        return self._intern(("and", tuple(out)))

    def mk_or(self, children) -> int:
        out: list[int] = []
        seen: set[int] = set()
        for c in children:
            if c == TRUE:
                return TRUE
            if c == FALSE:
                continue
            if c > 0 and self.table[c][0] == "or":
                grand = self.table[c][1]
            else:
                grand = (c,)
            for g in grand:
                if -g in seen:
                    return TRUE
                if g not in seen:
                    seen.add(g)
                    out.append(g)
        if not out:
            return FALSE
        if len(out) == 1:
            return out[0]
        return self._intern(("or", tuple(out)))

    def mk_implies(self, a: int, b: int) -> int:
        return self.mk_or((-a, b))

    def mk_iff(self, a: int, b: int) -> int:
        return self.mk_and((self.mk_or((-a, b)), self.mk_or((a, -b))))

    def _intern(self, key: tuple) -> int:
        ref = self.interned.get(key)
        if ref is None:
            ref = len(self.table)
            self.table.append(key)
            self.interned[key] = ref
        return ref


def tseitin(
    builder: CircuitBuilder,
    num_primary: int,
    roots: list[int],
    extra: list[int] | None = None,
) -> tuple[list[list[int]], dict[int, int], int]:
    """Plain Tseitin transformation of everything reachable from roots/extra.

    Returns (clauses, literal map over positive refs, total variable count).
    Gate auxiliaries are numbered above num_primary in table order; each root
    is asserted with a unit clause (a constant-false root yields the empty
    clause).  `extra` nodes get defining clauses but no assertion.
    """
    reachable: set[int] = set()
    stack = [abs(r) for r in roots + (extra or [])]
    while stack:
        idx = stack.pop()
        if idx <= 1 or idx in reachable:
            continue
        reachable.add(idx)
        node = builder.table[idx]
        if node[0] in ("and", "or"):
            stack.extend(abs(c) for c in node[1])

    lit_of: dict[int, int] = {}
    nxt = num_primary + 1
    for idx in sorted(reachable):
        node = builder.table[idx]
        if node[0] == "var":
            lit_of[idx] = node[1]
        else:
            lit_of[idx] = nxt
            nxt += 1

    def lit(ref: int) -> int:
        return lit_of[ref] if ref > 0 else -lit_of[-ref]

    clauses: list[list[int]] = []
    for idx in sorted(reachable):
        node = builder.table[idx]
        if node[0] == "var":
            continue
        g = lit_of[idx]
        kids = [lit(c) for c in node[1]]
        if node[0] == "and":
            for c in kids:
                clauses.append([-g, c])
            clauses.append([g] + [-c for c in kids])
        else:
            clauses.append([-g] + kids)
            for c in kids:
                clauses.append([g, -c])
    for r in roots:
        if r == TRUE:
            continue
        if r == FALSE:
            clauses.append([])
        else:
            clauses.append([lit(r)])
    return clauses, lit_of, nxt - 1


def count_at_least(builder: CircuitBuilder, refs: list[int], max_j: int) -> list[int]:
    """Counting network: result[j-1] is true iff at least j of refs are true,
    for j in 1..max_j."""
    prev = [TRUE] + [FALSE] * max_j
    for x in refs:
        cur = [TRUE]
        for j in range(1, max_j + 1):
            cur.append(builder.mk_or((prev[j], builder.mk_and((x, prev[j - 1])))))
        prev = cur
    return prev[1:]
