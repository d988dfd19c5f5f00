"""Direct evaluation of formulas over concrete relational structures.

A structure maps every signature and field name to a set of atom tuples
(signatures hold 1-tuples).  Used for the size-0 fast path and for validating
decoded scenarios in tests.
"""
from __future__ import annotations

from .lang.ast import (
    And, Binary, CardCmp, Compare, Expr, FieldRef, Formula, Iff, Implies,
    Model, NoneSet, Not, Or, PredCall, Quant, SigRef, Unary, VarRef,
)

Structure = dict[str, frozenset]


def eval_expr(e: Expr, struct: Structure, env: dict[str, str], atoms: tuple[str, ...]) -> frozenset:
    if isinstance(e, (SigRef, FieldRef)):
        return struct[e.name]
    if isinstance(e, VarRef):
        return frozenset({(env[e.name],)})
    if isinstance(e, NoneSet):
        return frozenset()
    if isinstance(e, Unary):
        m = eval_expr(e.operand, struct, env, atoms)
        if e.op == "~":
            return frozenset((b, a) for a, b in m)
        closed = _closure(m)
        if e.op == "*":
            return closed | frozenset((a, a) for a in atoms)
        return closed
    if isinstance(e, Binary):
        left = eval_expr(e.left, struct, env, atoms)
        right = eval_expr(e.right, struct, env, atoms)
        if e.op == "+":
            return left | right
        if e.op == "&":
            return left & right
        if e.op == "-":
            return left - right
        if e.op == "->":
            return frozenset(l + r for l in left for r in right)
        if e.op == ".":
            return frozenset(
                l[:-1] + r[1:] for l in left for r in right if l[-1] == r[0]
            )
    raise TypeError(f"cannot evaluate {e!r}")


def _closure(rel: frozenset) -> frozenset:
    acc = set(rel)
    while True:
        new = {(a, d) for a, b in acc for c, d in acc if b == c} - acc
        if not new:
            return frozenset(acc)
        acc |= new


def eval_formula(
    f: Formula, model: Model, struct: Structure, env: dict[str, str], atoms: tuple[str, ...]
) -> bool:
    if isinstance(f, And):
        return all(eval_formula(i, model, struct, env, atoms) for i in f.items)
    if isinstance(f, Or):
        return any(eval_formula(i, model, struct, env, atoms) for i in f.items)
    if isinstance(f, Not):
        return not eval_formula(f.item, model, struct, env, atoms)
    if isinstance(f, Implies):
        return not eval_formula(f.left, model, struct, env, atoms) or eval_formula(
            f.right, model, struct, env, atoms
        )
    if isinstance(f, Iff):
        return eval_formula(f.left, model, struct, env, atoms) == eval_formula(
            f.right, model, struct, env, atoms
        )
    if isinstance(f, Quant):
        domain = eval_expr(f.domain, struct, env, atoms)
        hits = []
        for (a,) in sorted(domain):
            inner = dict(env)
            inner[f.var] = a
            hits.append(eval_formula(f.body, model, struct, inner, atoms))
        if f.kind == "all":
            return all(hits)
        if f.kind == "some":
            return any(hits)
        return not any(hits)
    if isinstance(f, Compare):
        left = eval_expr(f.left, struct, env, atoms)
        right = eval_expr(f.right, struct, env, atoms)
        if f.op == "in":
            return left <= right
        if f.op == "!in":
            return not left <= right
        if f.op == "=":
            return left == right
        return left != right
    if isinstance(f, CardCmp):
        n = len(eval_expr(f.expr, struct, env, atoms))
        return {
            "=": n == f.bound,
            "<=": n <= f.bound,
            ">=": n >= f.bound,
            "<": n < f.bound,
            ">": n > f.bound,
        }[f.op]
    if isinstance(f, PredCall):
        return eval_formula(model.preds[f.name], model, struct, {}, atoms)
    raise TypeError(f"cannot evaluate {f!r}")


def satisfies(
    model: Model,
    formulas,
    struct: Structure,
    atoms: tuple[str, ...],
) -> bool:
    return all(eval_formula(f, model, struct, {}, atoms) for f in formulas)
