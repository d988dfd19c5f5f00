"""Syntax tree for the modeling language: declarations, formulas, expressions.

Nodes are frozen dataclasses.  Source positions are carried on every node but
excluded from equality so that structural comparison (used by the round-trip
tests) ignores layout.
"""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NO_POS = Pos(0, 0)


def _pos_field() -> Pos:
    return field(default=NO_POS, compare=False, repr=False)  # type: ignore[return-value]


# ---------------------------------------------------------------- expressions

class Expr:
    """Marker base for relational expressions."""


@dataclass(frozen=True)
class NameRef(Expr):
    """Unresolved identifier; the resolver rewrites it to Sig/Field/VarRef."""

    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SigRef(Expr):
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class FieldRef(Expr):
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class VarRef(Expr):
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class NoneSet(Expr):
    """The empty unary set constant `none`."""

    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Binary(Expr):
    """op is one of '+', '-', '&', '->', '.'"""

    op: str
    left: Expr
    right: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Unary(Expr):
    """op is one of '~', '^', '*'"""

    op: str
    operand: Expr
    pos: Pos = _pos_field()


# ------------------------------------------------------------------- formulas

class Formula:
    """Marker base for formulas."""


@dataclass(frozen=True)
class And(Formula):
    items: tuple[Formula, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Or(Formula):
    items: tuple[Formula, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Not(Formula):
    item: Formula
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Quant(Formula):
    """kind is 'all', 'some' or 'no'; domain must be arity 1."""

    kind: str
    var: str
    domain: Expr
    body: Formula
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Compare(Formula):
    """op is one of 'in', '!in', '=', '!='."""

    op: str
    left: Expr
    right: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class CardCmp(Formula):
    """#expr op bound, with op one of '=', '<=', '>=', '<', '>'."""

    expr: Expr
    op: str
    bound: int
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class PredCall(Formula):
    name: str
    pos: Pos = _pos_field()


TRUE_FORMULA = And(())


# --------------------------------------------------------------- declarations

MULTS = ("lone", "one", "some", "set")


@dataclass(frozen=True)
class FieldDecl:
    name: str
    mult: str
    target: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SigDecl:
    name: str
    is_abstract: bool
    is_one: bool
    parent: str | None
    fields: tuple[FieldDecl, ...]
    decl_index: int
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Command:
    name: str
    body: Formula
    scope: int
    # character offsets of the scope literal in the source, for scope masking
    scope_span: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Model:
    sigs: tuple[SigDecl, ...] = ()
    preds: dict[str, Formula] = field(default_factory=dict)
    facts: tuple[Formula, ...] = ()
    commands: tuple[Command, ...] = ()
    resolved: bool = field(default=False, compare=False)

    def sig(self, name: str) -> SigDecl:
        for s in self.sigs:
            if s.name == name:
                return s
        raise KeyError(name)

    def has_sig(self, name: str) -> bool:
        return any(s.name == name for s in self.sigs)

    def top_level(self) -> tuple[SigDecl, ...]:
        return tuple(s for s in self.sigs if s.parent is None)

    def extensions_of(self, name: str) -> tuple[SigDecl, ...]:
        return tuple(s for s in self.sigs if s.parent == name)

    def root_of(self, name: str) -> SigDecl:
        s = self.sig(name)
        while s.parent is not None:
            s = self.sig(s.parent)
        return s

    def one_sigs(self) -> tuple[SigDecl, ...]:
        return tuple(s for s in self.sigs if s.is_one)

    def fields_in_order(self) -> tuple[tuple[SigDecl, FieldDecl], ...]:
        out: list[tuple[SigDecl, FieldDecl]] = []
        for s in self.sigs:
            for f in s.fields:
                out.append((s, f))
        return tuple(out)

    def field_owner(self, field_name: str) -> SigDecl:
        for s, f in self.fields_in_order():
            if f.name == field_name:
                return s
        raise KeyError(field_name)

    def field_decl(self, field_name: str) -> FieldDecl:
        for _, f in self.fields_in_order():
            if f.name == field_name:
                return f
        raise KeyError(field_name)

    def command(self, name: str) -> Command:
        for c in self.commands:
            if c.name == name:
                return c
        raise KeyError(name)


class ModelError(Exception):
    """Base for diagnostics that carry a source position."""

    def __init__(self, message: str, pos: Pos = NO_POS):
        super().__init__(f"{pos}: {message}" if pos != NO_POS else message)
        self.message = message
        self.pos = pos


class ParseError(ModelError):
    def __init__(self, message: str, pos: Pos, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(message, pos)
        self.expected = expected


class ResolveError(ModelError):
    """kind is one of unknown-name, arity-mismatch, cyclic-extends, duplicate-name,
    bad-multiplicity."""

    def __init__(self, kind: str, message: str, pos: Pos = NO_POS):
        super().__init__(f"{kind}: {message}", pos)
        self.kind = kind


def arity_of(e: Expr) -> int:
    """Arity of a resolved expression; resolver guarantees consistency."""
    if isinstance(e, (SigRef, VarRef, NoneSet)):
        return 1
    if isinstance(e, FieldRef):
        return 2
    if isinstance(e, Unary):
        if e.op == "~":
            return 2
        return 2  # ^ and * preserve arity 2
    if isinstance(e, Binary):
        la, ra = arity_of(e.left), arity_of(e.right)
        if e.op == "->":
            return la + ra
        if e.op == ".":
            return la + ra - 2
        return la
    raise TypeError(f"not a resolved expression: {e!r}")
