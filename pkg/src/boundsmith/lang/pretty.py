"""Canonical text rendering of models; parse(pretty(m)) is structurally m."""
from __future__ import annotations

from .ast import (
    And, Binary, CardCmp, Command, Compare, Expr, Formula, Iff, Implies,
    Model, NameRef, NoneSet, Not, Or, PredCall, Quant, SigDecl, SigRef,
    FieldRef, VarRef, Unary,
)

# precedence levels, loosest binds first
_F_QUANT, _F_OR, _F_IFF, _F_IMPLIES, _F_AND, _F_NOT, _F_ATOM = range(7)
_E_UNION, _E_INTER, _E_ARROW, _E_JOIN, _E_UNARY, _E_ATOM = range(6)


def pretty_model(model: Model) -> str:
    parts: list[str] = []
    for s in model.sigs:
        parts.append(_sig(s))
    for name, body in model.preds.items():
        parts.append(f"pred {name} {{ {pretty_formula(body)} }}"
                     if not isinstance(body, And) or body.items
                     else f"pred {name} {{}}")
    for f in model.facts:
        parts.append(f"fact {{ {pretty_formula(f)} }}")
    for c in model.commands:
        parts.append(_command(c))
    return "\n".join(parts) + ("\n" if parts else "")


def _sig(s: SigDecl) -> str:
    prefix = ("abstract " if s.is_abstract else "") + ("one " if s.is_one else "")
    ext = f" extends {s.parent}" if s.parent else ""
    fields = ", ".join(f"{f.name}: {f.mult} {f.target}" for f in s.fields)
    return f"{prefix}sig {s.name}{ext} {{{fields}}}"


def _command(c: Command) -> str:
    if isinstance(c.body, PredCall) and c.body.name == c.name:
        return f"run {{{c.body.name}}} for {c.scope}"
    body = pretty_formula(c.body) if not _is_true(c.body) else ""
    return f"run {{{body}}} for {c.scope}"


def _is_true(f: Formula) -> bool:
    return isinstance(f, And) and not f.items


def pretty_formula(f: Formula, level: int = _F_QUANT) -> str:
    text, mine = _formula(f)
    if mine < level:
        return f"({text})"
    return text


def _formula(f: Formula) -> tuple[str, int]:
    if isinstance(f, Quant):
        return (
            f"{f.kind} {f.var} : {pretty_expr(f.domain)} | {pretty_formula(f.body)}",
            _F_QUANT,
        )
    if isinstance(f, Or):
        if not f.items:
            return "#none >= 1", _F_ATOM  # unsatisfiable constant
        return " or ".join(pretty_formula(i, _F_IFF) for i in f.items), _F_OR
    if isinstance(f, Iff):
        return (
            f"{pretty_formula(f.left, _F_IMPLIES)} iff {pretty_formula(f.right, _F_IMPLIES)}",
            _F_IFF,
        )
    if isinstance(f, Implies):
        return (
            f"{pretty_formula(f.left, _F_AND)} implies {pretty_formula(f.right, _F_IMPLIES)}",
            _F_IMPLIES,
        )
    if isinstance(f, And):
        if not f.items:
            return "#none <= 0", _F_ATOM  # vacuously true constant
        return " and ".join(pretty_formula(i, _F_NOT) for i in f.items), _F_AND
    if isinstance(f, Not):
        return f"not {pretty_formula(f.item, _F_NOT)}", _F_NOT
    if isinstance(f, Compare):
        op = "!in" if f.op == "!in" else f.op
        return f"{pretty_expr(f.left)} {op} {pretty_expr(f.right)}", _F_ATOM
    if isinstance(f, CardCmp):
        return f"#{pretty_expr(f.expr, _E_UNARY)} {f.op} {f.bound}", _F_ATOM
    if isinstance(f, PredCall):
        return f.name, _F_ATOM
    raise TypeError(f"unexpected formula node {f!r}")


def pretty_expr(e: Expr, level: int = _E_UNION) -> str:
    text, mine = _expr(e)
    if mine < level:
        return f"({text})"
    return text


def _expr(e: Expr) -> tuple[str, int]:
    if isinstance(e, (NameRef, SigRef, FieldRef, VarRef)):
        return e.name, _E_ATOM
    if isinstance(e, NoneSet):
        return "none", _E_ATOM
    if isinstance(e, Unary):
        return f"{e.op}{pretty_expr(e.operand, _E_UNARY)}", _E_UNARY
    if isinstance(e, Binary):
        if e.op in ("+", "-"):
            # left-assoc: right operand printed one level tighter
            return (
                f"{pretty_expr(e.left, _E_UNION)} {e.op} {pretty_expr(e.right, _E_INTER)}",
                _E_UNION,
            )
        if e.op == "&":
            return (
                f"{pretty_expr(e.left, _E_INTER)} & {pretty_expr(e.right, _E_ARROW)}",
                _E_INTER,
            )
        if e.op == "->":
            return (
                f"{pretty_expr(e.left, _E_ARROW)} -> {pretty_expr(e.right, _E_JOIN)}",
                _E_ARROW,
            )
        if e.op == ".":
            return (
                f"{pretty_expr(e.left, _E_JOIN)}.{pretty_expr(e.right, _E_UNARY)}",
                _E_JOIN,
            )
    raise TypeError(f"unexpected expression node {e!r}")
