"""Name resolution, arity checking, and inheritance validation."""
from __future__ import annotations

from dataclasses import replace

from .ast import (
    And, Binary, CardCmp, Compare, Expr, FieldRef, Formula, Iff, Implies,
    Model, NameRef, NoneSet, Not, Or, PredCall, Quant, ResolveError, SigRef,
    Unary, VarRef, arity_of,
)


def resolve_model(model: Model) -> Model:
    """Bind all names, check arities and the inheritance forest.

    Returns a new model with every NameRef rewritten to a SigRef, FieldRef or
    VarRef.  Idempotent on already-resolved models.
    """
    if model.resolved:
        return model
    _check_declarations(model)
    r = _Resolver(model)
    sigs = model.sigs
    preds = {name: r.formula(body, (), seen_preds=(name,)) for name, body in model.preds.items()}
    facts = tuple(r.formula(f, ()) for f in model.facts)
    commands = tuple(replace(c, body=r.formula(c.body, ())) for c in model.commands)
    return Model(sigs, preds, facts, commands, resolved=True)


def signature_order(model: Model) -> list[str]:
    """Phase order: declaration order, singleton sigs excluded, abstract kept."""
    return [s.name for s in model.sigs if not s.is_one]


def _check_declarations(model: Model) -> None:
    names: dict[str, str] = {}

    def claim(name: str, what: str, pos) -> None:
        if name in names:
            raise ResolveError(
                "duplicate-name", f"{what} {name!r} clashes with a {names[name]}", pos
            )
        names[name] = what

    for s in model.sigs:
        claim(s.name, "signature", s.pos)
        if s.is_one and s.is_abstract:
            raise ResolveError(
                "bad-multiplicity", f"signature {s.name!r} cannot be both one and abstract", s.pos
            )
        if s.is_one and s.parent is not None:
            raise ResolveError(
                "bad-multiplicity", f"one sig {s.name!r} cannot extend another signature", s.pos
            )
    for s in model.sigs:
        for f in s.fields:
            claim(f.name, "field", f.pos)
            if not model.has_sig(f.target):
                raise ResolveError("unknown-name", f"field target {f.target!r} is not a signature", f.pos)
    for name in model.preds:
        if name in names:
            raise ResolveError("duplicate-name", f"predicate {name!r} clashes with a {names[name]}")
        names[name] = "predicate"

    # inheritance must form a forest
    for s in model.sigs:
        if s.parent is None:
            continue
        if not model.has_sig(s.parent):
            raise ResolveError("unknown-name", f"unknown parent signature {s.parent!r}", s.pos)
        seen = {s.name}
        cur = s
        while cur.parent is not None:
            if cur.parent in seen:
                raise ResolveError("cyclic-extends", f"signature {s.name!r} extends itself transitively", s.pos)
            seen.add(cur.parent)
            cur = model.sig(cur.parent)


class _Resolver:
    def __init__(self, model: Model):
        self.model = model
        self.field_names = {f.name for _, f in model.fields_in_order()}

    def formula(self, f: Formula, env: tuple[str, ...], seen_preds: tuple[str, ...] = ()) -> Formula:
        if isinstance(f, And):
            return replace(f, items=tuple(self.formula(i, env, seen_preds) for i in f.items))
        if isinstance(f, Or):
            return replace(f, items=tuple(self.formula(i, env, seen_preds) for i in f.items))
        if isinstance(f, Not):
            return replace(f, item=self.formula(f.item, env, seen_preds))
        if isinstance(f, (Implies, Iff)):
            return replace(
                f,
                left=self.formula(f.left, env, seen_preds),
                right=self.formula(f.right, env, seen_preds),
            )
        if isinstance(f, Quant):
            domain = self.expr(f.domain, env)
            if arity_of(domain) != 1:
                raise ResolveError("arity-mismatch", "quantifier domain must have arity 1", f.pos)
            return replace(
                f, domain=domain, body=self.formula(f.body, env + (f.var,), seen_preds)
            )
        if isinstance(f, Compare):
            left = self.expr(f.left, env)
            right = self.expr(f.right, env)
            if arity_of(left) != arity_of(right):
                raise ResolveError(
                    "arity-mismatch",
                    f"comparison of arity {arity_of(left)} against arity {arity_of(right)}",
                    f.pos,
                )
            return replace(f, left=left, right=right)
        if isinstance(f, CardCmp):
            if f.bound < 0:
                raise ResolveError("arity-mismatch", "cardinality bound must be nonnegative", f.pos)
            return replace(f, expr=self.expr(f.expr, env))
        if isinstance(f, PredCall):
            if f.name not in self.model.preds:
                raise ResolveError("unknown-name", f"unknown predicate {f.name!r}", f.pos)
            if f.name in seen_preds:
                raise ResolveError(
                    "cyclic-extends", f"predicate {f.name!r} invokes itself recursively", f.pos
                )
            # validate the callee body in its own (empty) scope
            self.formula(self.model.preds[f.name], (), seen_preds + (f.name,))
            return f
        raise TypeError(f"unexpected formula node {f!r}")

    def expr(self, e: Expr, env: tuple[str, ...]) -> Expr:
        if isinstance(e, NameRef):
            if e.name in env:
                return VarRef(e.name, pos=e.pos)
            if self.model.has_sig(e.name):
                return SigRef(e.name, pos=e.pos)
            if e.name in self.field_names:
                return FieldRef(e.name, pos=e.pos)
            raise ResolveError("unknown-name", f"unknown name {e.name!r}", e.pos)
        if isinstance(e, (SigRef, FieldRef, VarRef, NoneSet)):
            return e
        if isinstance(e, Unary):
            operand = self.expr(e.operand, env)
            if arity_of(operand) != 2:
                raise ResolveError(
                    "arity-mismatch", f"{e.op!r} needs an arity-2 operand", e.pos
                )
            return replace(e, operand=operand)
        if isinstance(e, Binary):
            left = self.expr(e.left, env)
            right = self.expr(e.right, env)
            la, ra = arity_of(left), arity_of(right)
            if e.op in ("+", "-", "&") and la != ra:
                raise ResolveError(
                    "arity-mismatch", f"{e.op!r} on arity {la} and arity {ra}", e.pos
                )
            if e.op == "." and la + ra - 2 < 1:
                raise ResolveError("arity-mismatch", "join of two arity-1 expressions", e.pos)
            return replace(e, left=left, right=right)
        raise TypeError(f"unexpected expression node {e!r}")
