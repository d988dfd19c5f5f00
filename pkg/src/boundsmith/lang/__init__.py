"""Modeling-language frontend: lexer, parser, resolver, pretty printer."""
from .ast import (  # noqa: F401
    And, Binary, CardCmp, Command, Compare, Expr, FieldDecl, FieldRef,
    Formula, Iff, Implies, Model, ModelError, NameRef, NoneSet, Not, Or,
    ParseError, Pos, PredCall, Quant, ResolveError, SigDecl, SigRef,
    TRUE_FORMULA, Unary, VarRef, arity_of,
)
from .parser import parse_model  # noqa: F401
from .pretty import pretty_expr, pretty_formula, pretty_model  # noqa: F401
from .resolver import resolve_model, signature_order  # noqa: F401
