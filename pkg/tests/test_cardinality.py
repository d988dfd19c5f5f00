"""Cardinality encodings checked against exhaustive truth tables."""
import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundsmith.cardinality import VarAllocator, encode_cardinality
from boundsmith.circuit import FALSE, TRUE, CircuitBuilder, count_at_least, tseitin


def _dpll(clauses):
    """Tiny independent satisfiability check for the projection oracle."""
    clauses = [c for c in clauses]
    if any(len(c) == 0 for c in clauses):
        return False
    unit = next((c[0] for c in clauses if len(c) == 1), None)
    if unit is None:
        if not clauses:
            return True
        unit = clauses[0][0]
        return _dpll(_assign(clauses, unit)) or _dpll(_assign(clauses, -unit))
    return _dpll(_assign(clauses, unit))


def _assign(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        out.append([l for l in c if l != -lit])
    return out


def projected_models(clauses, base_vars, num_vars):
    """Assignments over base_vars extendable to satisfy the clauses."""
    accepted = set()
    for bits in itertools.product((False, True), repeat=len(base_vars)):
        units = [[v if b else -v] for v, b in zip(base_vars, bits)]
        if _dpll([list(c) for c in clauses] + units):
            accepted.add(bits)
    return accepted


def test_at_most_one_is_pairwise():
    clauses = encode_cardinality([1, 2, 3], "<=", 1, VarAllocator(3))
    assert {frozenset(c) for c in clauses} == {
        frozenset({-1, -2}), frozenset({-1, -3}), frozenset({-2, -3})
    }


def test_at_least_one_single_clause():
    assert encode_cardinality([1, 2], ">=", 1, VarAllocator(2)) == [[1, 2]]


def test_at_most_two_of_six_sequential_counter_truth_table():
    # exhaustive oracle over all 64 assignments of the 6 counted variables
    alloc = VarAllocator(6)
    clauses = encode_cardinality([1, 2, 3, 4, 5, 6], "<=", 2, alloc)
    assert alloc.num_vars > 6  # sequential counter introduced registers
    got = projected_models(clauses, list(range(1, 7)), alloc.num_vars)
    want = {
        bits for bits in itertools.product((False, True), repeat=6) if sum(bits) <= 2
    }
    assert got == want


@pytest.mark.parametrize("op", ["<=", ">=", "="])
@pytest.mark.parametrize("n,k", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (4, 0), (3, 3)])
def test_encodings_match_oracle(op, n, k):
    alloc = VarAllocator(n)
    clauses = encode_cardinality(list(range(1, n + 1)), op, k, alloc)
    got = projected_models(clauses, list(range(1, n + 1)), alloc.num_vars)
    cmp = {"<=": lambda c: c <= k, ">=": lambda c: c >= k, "=": lambda c: c == k}[op]
    want = {
        bits for bits in itertools.product((False, True), repeat=n) if cmp(sum(bits))
    }
    assert got == want


def test_at_least_more_than_vars_unsat_marker():
    assert encode_cardinality([1, 2], ">=", 3, VarAllocator(2)) == [[]]


def test_at_most_above_width_no_clauses():
    assert encode_cardinality([1, 2], "<=", 3, VarAllocator(2)) == []


def test_rejects_nonpositive_ids():
    with pytest.raises(ValueError):
        encode_cardinality([0, 1], "<=", 1, VarAllocator(2))


def test_at_most_arc_consistent_under_unit_propagation():
    """With k inputs forced true, propagation alone must force the rest false."""
    n, k = 6, 2
    alloc = VarAllocator(n)
    clauses = encode_cardinality(list(range(1, n + 1)), "<=", k, alloc)

    def propagate(units):
        assign = dict(units)
        db = [list(c) for c in clauses]
        changed = True
        while changed:
            changed = False
            for clause in db:
                unassigned = [l for l in clause if abs(l) not in assign]
                satisfied = any(assign.get(abs(l)) == (l > 0) for l in clause)
                if satisfied:
                    continue
                if len(unassigned) == 1:
                    l = unassigned[0]
                    assign[abs(l)] = l > 0
                    changed = True
        return assign

    assign = propagate({1: True, 4: True})
    for v in (2, 3, 5, 6):
        assert assign.get(v) is False


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), min_size=0, max_size=7), st.integers(0, 8))
def test_counting_network_matches_popcount(bits, j):
    builder = CircuitBuilder()
    refs = [TRUE if b else FALSE for b in bits]
    if j == 0:
        return
    ge = count_at_least(builder, refs, j)
    count = sum(bits)
    for level in range(1, j + 1):
        assert ge[level - 1] == (TRUE if count >= level else FALSE)


def test_counting_network_over_variables_via_tseitin():
    builder = CircuitBuilder()
    refs = [builder.var(v) for v in (1, 2, 3)]
    ge2 = count_at_least(builder, refs, 2)[1]
    clauses, _, num_vars = tseitin(builder, 3, [ge2])
    got = projected_models(clauses, [1, 2, 3], num_vars)
    want = {
        bits for bits in itertools.product((False, True), repeat=3) if sum(bits) >= 2
    }
    assert got == want
