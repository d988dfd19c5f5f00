"""Clause-level cardinality encodings: pairwise at-most-one, sequential counter.

The produced clause sets are satisfied exactly by the assignments whose true
count relates to the bound as requested, once the fresh auxiliaries are
projected away.  The at-most encoding is the Sinz sequential counter, which is
arc-consistent under unit propagation.
"""
from __future__ import annotations


class VarAllocator:
    """Hands out fresh variable ids above an initial count."""

    def __init__(self, num_vars: int):
        self.num_vars = num_vars

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars


def encode_cardinality(
    var_ids: list[int], op: str, bound: int, alloc: VarAllocator
) -> list[list[int]]:
    """Clauses forcing count(true vars) op bound, op in {'=', '<=', '>='}.

    bound above len(var_ids) yields no clauses for '<=' and the single empty
    (unsatisfiable) clause for '>='.
    """
    if any(v <= 0 for v in var_ids):
        raise ValueError("variable ids must be positive")
    return encode_card_literals(list(var_ids), op, bound, alloc)


def encode_card_literals(
    lits: list[int], op: str, bound: int, alloc: VarAllocator
) -> list[list[int]]:
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if op == "<=":
        return _at_most(lits, bound, alloc)
    if op == ">=":
        return _at_least(lits, bound, alloc)
    if op == "=":
        return _at_most(lits, bound, alloc) + _at_least(lits, bound, alloc)
    raise ValueError(f"unsupported cardinality op {op!r}")


def _at_most(lits: list[int], k: int, alloc: VarAllocator) -> list[list[int]]:
    n = len(lits)
    if k >= n:
        return []
    if k == 0:
        return [[-x] for x in lits]
    if k == 1:
        return [[-lits[i], -lits[j]] for i in range(n) for j in range(i + 1, n)]
    # Sinz sequential counter: s[i][j] <=> at least j of the first i+1 inputs
    s = [[alloc.fresh() for _ in range(k)] for _ in range(n - 1)]
    clauses: list[list[int]] = [[-lits[0], s[0][0]]]
    for j in range(1, k):
        clauses.append([-s[0][j]])
    for i in range(1, n - 1):
        clauses.append([-lits[i], s[i][0]])
        clauses.append([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            clauses.append([-lits[i], -s[i - 1][j - 1], s[i][j]])
            clauses.append([-s[i - 1][j], s[i][j]])
        clauses.append([-lits[i], -s[i - 1][k - 1]])
    clauses.append([-lits[n - 1], -s[n - 2][k - 1]])
    return clauses


def _at_least(lits: list[int], k: int, alloc: VarAllocator) -> list[list[int]]:
    n = len(lits)
    if k <= 0:
        return []
    if k > n:
        return [[]]
    if k == 1:
        return [list(lits)]
    if k == n:
        return [[x] for x in lits]
    # at least k true == at most n-k false
    return _at_most([-x for x in lits], n - k, alloc)
